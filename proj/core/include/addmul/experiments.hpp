#ifndef ADDMUL_EXPERIMENTS_HPP
#define ADDMUL_EXPERIMENTS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace addmul {

/// Repeated align/sort/dedup/difference passes over random b-bit lists.
struct ExperimentConfig {
  std::size_t n = 1000;
  std::uint32_t bits = 24;
  bool align = false;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t levels = 4;  // list-length columns recorded per trial
};

/// One experiment record: mean post-dedup list lengths per level (columns
/// A..D at the default four levels, full precision) and the
/// additions-per-multiplication estimate
/// (A + B + C + (bits/2)*D) / n.
struct CountRow {
  std::size_t n = 0;
  std::uint32_t bits = 0;
  bool align = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean_lengths;
  double ratio = 0.0;

  std::string csv_row() const;
};

std::string experiment_csv_header();

/// Post-dedup list lengths for one drawn list, `levels` rounds deep. Exposed
/// so property tests can check per-trial structural bounds.
std::vector<std::size_t> experiment_trial(std::vector<std::uint64_t> values,
                                          bool align_values,
                                          std::size_t levels);

/// Deterministic for a given seed: trial t draws from trial_rng(seed, t) and
/// results are reduced in index order.
CountRow run_experiment(const ExperimentConfig& config);

/// Expected number of distinct values among n uniform draws from k
/// possibilities: k * (1 - (1 - 1/k)^n).
double expected_distinct(std::uint64_t n, std::uint64_t k);

}  // namespace addmul

#endif
