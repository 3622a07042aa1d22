#include "addmul/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "addmul/chain.hpp"
#include "addmul/rng.hpp"

namespace addmul {

std::string experiment_csv_header() {
  return "n,bits,align,trials,seed,A,B,C,D,ratio";
}

std::string CountRow::csv_row() const {
  std::ostringstream out;
  out << n << ',' << bits << ',' << (align ? "yes" : "no") << ',' << trials
      << ',' << seed;
  out.setf(std::ios::fixed);
  out.precision(2);
  for (std::size_t i = 0; i < 4; ++i) {
    out << ',' << (i < mean_lengths.size() ? mean_lengths[i] : 0.0);
  }
  out << ',' << ratio;
  return out.str();
}

std::vector<std::size_t> experiment_trial(std::vector<std::uint64_t> values,
                                          bool align_values,
                                          std::size_t levels) {
  std::vector<std::size_t> lengths;
  lengths.reserve(levels);
  OpCounter sink;
  for (std::size_t level = 0; level < levels; ++level) {
    if (align_values) {
      values = align(values).first;
    }
    auto [sorted, pointers] = sort_dedup(values, sink);
    lengths.push_back(sorted.size());
    if (level + 1 < levels) {
      values = differences(sorted, sink);
    }
  }
  return lengths;
}

CountRow run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1 || config.levels < 1 || config.n < 1 ||
      config.bits < 1 || config.bits > 32) {
    throw std::invalid_argument("run_experiment: invalid configuration");
  }
  CountRow row;
  row.n = config.n;
  row.bits = config.bits;
  row.align = config.align;
  row.trials = config.trials;
  row.seed = config.seed;
  row.mean_lengths.assign(config.levels, 0.0);

  double ratio_sum = 0.0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    auto rng = trial_rng(config.seed, t);
    const auto lengths = experiment_trial(
        draw_values(rng, config.n, config.bits), config.align, config.levels);

    double additions = 0.0;
    for (std::size_t level = 0; level < config.levels; ++level) {
      row.mean_lengths[level] += static_cast<double>(lengths[level]);
      additions += level + 1 < config.levels
                       ? static_cast<double>(lengths[level])
                       : (config.bits / 2.0) * static_cast<double>(lengths[level]);
    }
    ratio_sum += additions / static_cast<double>(config.n);
  }
  for (auto& mean : row.mean_lengths) {
    mean /= static_cast<double>(config.trials);
  }
  row.ratio = ratio_sum / static_cast<double>(config.trials);
  return row;
}

double expected_distinct(std::uint64_t n, std::uint64_t k) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("expected_distinct: need n, k >= 1");
  }
  if (k == 1) {
    return 1.0;
  }
  const double kd = static_cast<double>(k);
  // k * (1 - (1 - 1/k)^n), computed via expm1/log1p for large k
  return kd * -std::expm1(static_cast<double>(n) * std::log1p(-1.0 / kd));
}

}  // namespace addmul
