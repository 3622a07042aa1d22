// addmul: addition-only matrix arithmetic tool.
//
// Exit codes: 0 success, 2 bad flags or unparseable input, 3 dimension
// mismatch, 4 bit-width violation or overflow.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "addmul/bounds.hpp"
#include "addmul/chain.hpp"
#include "addmul/errors.hpp"
#include "addmul/experiments.hpp"
#include "addmul/matmul.hpp"
#include "addmul/matrix_io.hpp"
#include "addmul/soft_float.hpp"

namespace {

constexpr const char* kVersion = "addmul 0.1.0";

struct MatmulArgs {
  std::string a_path;
  std::string b_path;
  std::string out_path;
  std::string counts_path;
  bool naive = false;
  addmul::ChainConfig chain;
};

struct ProductSummary {
  addmul::AnyMatrix product;
  addmul::OpCounter counter;
  std::uint64_t n_products = 0;
};

ProductSummary run_matmul(const addmul::AnyMatrix& a, const addmul::AnyMatrix& b,
                          const MatmulArgs& args) {
  using addmul::DenseMatrix;
  using addmul::SoftFloatMatrix;
  using addmul::SparseTriples;

  if (a.index() != b.index()) {
    throw addmul::dimension_error("operand matrix kinds differ");
  }
  if (std::holds_alternative<DenseMatrix>(a)) {
    const auto& da = std::get<DenseMatrix>(a);
    const auto& db = std::get<DenseMatrix>(b);
    auto r = args.naive ? addmul::naive_matmul_dense(da, db)
                        : addmul::matmul_dense(da, db, args.chain);
    return {std::move(r.product), r.counter, r.n_products};
  }
  if (std::holds_alternative<SparseTriples>(a)) {
    const auto& sa = std::get<SparseTriples>(a);
    const auto& sb = std::get<SparseTriples>(b);
    auto r = args.naive ? addmul::naive_matmul_sparse(sa, sb)
                        : addmul::matmul_sparse(sa, sb, args.chain);
    return {std::move(r.product), r.counter, r.n_products};
  }
  const auto& fa = std::get<SoftFloatMatrix>(a);
  const auto& fb = std::get<SoftFloatMatrix>(b);
  auto r = args.naive ? addmul::naive_matmul_softfloat(fa, fb)
                      : addmul::matmul_softfloat(fa, fb, args.chain);
  return {std::move(r.product), r.counter, r.n_products};
}

int cmd_matmul(const MatmulArgs& args) {
  const auto a = addmul::read_matrix_file(args.a_path);
  const auto b = addmul::read_matrix_file(args.b_path);
  const auto result = run_matmul(a, b, args);
  addmul::write_matrix_file(args.out_path, result.product);
  if (!args.counts_path.empty()) {
    std::ofstream out(args.counts_path);
    if (!out) {
      throw addmul::parse_error(0, args.counts_path + ": cannot open for writing");
    }
    const double ratio =
        result.n_products
            ? result.counter.additions_per_multiplication(result.n_products)
            : 0.0;
    out << addmul::OpCounter::csv_header() << '\n'
        << result.counter.csv_row(ratio) << '\n';
  }
  return 0;
}

struct ExperimentArgs {
  std::vector<std::size_t> n_values;
  std::uint32_t bits = 24;
  bool align = true;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string csv_path;
};

int cmd_experiment(const ExperimentArgs& args) {
  std::ofstream file;
  if (!args.csv_path.empty()) {
    file.open(args.csv_path);
    if (!file) {
      throw addmul::parse_error(0, args.csv_path + ": cannot open for writing");
    }
  }
  std::ostream& out = args.csv_path.empty() ? std::cout : file;

  out << addmul::experiment_csv_header() << '\n';
  for (const auto n : args.n_values) {
    addmul::ExperimentConfig config;
    config.n = n;
    config.bits = args.bits;
    config.align = args.align;
    config.trials = args.trials;
    config.seed = args.seed;
    out << addmul::run_experiment(config).csv_row() << '\n';
  }
  return 0;
}

struct BoundArgs {
  std::uint64_t n = 0;
  std::uint32_t bits = 0;
  std::uint64_t k = 0;
  std::uint32_t j = 0;
  std::string csv_path;
};

int cmd_bound(const BoundArgs& args) {
  const std::uint64_t k = args.k ? args.k : std::uint64_t{1} << args.bits;
  std::ostream& out = std::cout;

  std::uint64_t threshold = 0;
  addmul::BoundReport report;
  if (args.j) {
    threshold = addmul::hypothesis_threshold(args.j, k);
  }
  if (args.n) {
    report = addmul::min_j(args.n, k);
  }

  out << "k:                     " << k << '\n';
  if (args.j) {
    out << "threshold(j=" << args.j << "):       " << threshold << '\n';
    if (args.n) {
      const auto rb = addmul::rule_bounds(args.n, k, args.j);
      out << "hypothesis_holds:      " << (rb.hypothesis_holds ? "yes" : "no")
          << '\n'
          << "theorem_bound:         " << rb.theorem_bound << '\n';
    }
  }
  if (args.n) {
    out << "n:                     " << report.n << '\n';
    out << "min_j:                 ";
    if (report.min_j) {
      out << *report.min_j << '\n'
          << "guaranteed_additions:  " << report.guaranteed_additions << '\n';
    } else {
      out << "none" << '\n';
    }
    out << "fallback:              " << report.fallback << '\n';
  }

  if (!args.csv_path.empty()) {
    std::ofstream csv(args.csv_path);
    if (!csv) {
      throw addmul::parse_error(0, args.csv_path + ": cannot open for writing");
    }
    csv << "n,k,j,threshold,min_j,guaranteed_additions,fallback\n";
    csv << (args.n ? std::to_string(args.n) : "") << ',' << k << ','
        << (args.j ? std::to_string(args.j) : "") << ','
        << (args.j ? std::to_string(threshold) : "") << ','
        << (args.n && report.min_j ? std::to_string(*report.min_j) : "") << ','
        << (args.n && report.min_j ? std::to_string(report.guaranteed_additions)
                                   : "")
        << ',' << (args.n ? std::to_string(report.fallback) : "") << '\n';
  }
  return 0;
}

struct ChainStatsArgs {
  std::string input_path;
  std::string csv_path;
  addmul::ChainConfig chain;
};

std::vector<std::int64_t> flatten_for_chain(const addmul::AnyMatrix& matrix) {
  using addmul::DenseMatrix;
  using addmul::SoftFloatMatrix;
  using addmul::SparseTriples;
  std::vector<std::int64_t> values;
  if (std::holds_alternative<DenseMatrix>(matrix)) {
    values = std::get<DenseMatrix>(matrix).data;
  } else if (std::holds_alternative<SparseTriples>(matrix)) {
    for (const auto& e : std::get<SparseTriples>(matrix).entries) {
      values.push_back(e.value);
    }
  } else {
    for (const auto& f : std::get<SoftFloatMatrix>(matrix).data) {
      values.push_back(static_cast<std::int64_t>(f.mantissa));
    }
  }
  return values;
}

void dump_node(std::ostream& out, const addmul::ChainNode& node,
               std::size_t level, std::size_t& index) {
  std::uint64_t diff_sum = 0;
  for (const auto d : node.level.differences) {
    diff_sum += d;
  }
  out << level << ',' << index++ << ',' << node.input_length << ','
      << node.level.size() << ',' << diff_sum << ','
      << node.level.segment_count() << ',' << (node.is_leaf() ? 1 : 0) << '\n';
  for (const auto& child : node.children) {
    dump_node(out, child, level + 1, index);
  }
}

int cmd_chain_stats(const ChainStatsArgs& args) {
  const auto matrix = addmul::read_matrix_file(args.input_path);
  const auto values = flatten_for_chain(matrix);

  std::uint32_t bits = 1;
  for (const auto v : values) {
    const auto mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    bits = std::max<std::uint32_t>(bits, std::bit_width(mag));
  }
  const auto input = addmul::InputVector::from_signed(values, bits);

  addmul::OpCounter counter;
  const auto chain = addmul::build_chain(input, args.chain, counter);

  std::ofstream file;
  if (!args.csv_path.empty()) {
    file.open(args.csv_path);
    if (!file) {
      throw addmul::parse_error(0, args.csv_path + ": cannot open for writing");
    }
  }
  std::ostream& out = args.csv_path.empty() ? std::cout : file;
  out << "level,node,input_length,unique_length,diff_sum,segments,is_base\n";
  if (!chain.degenerate()) {
    std::size_t index = 0;
    dump_node(out, chain.root(), 0, index);
  }
  return 0;
}

void add_chain_flags(CLI::App* cmd, addmul::ChainConfig& chain) {
  cmd->add_flag("--align,!--no-align", chain.align,
                "align values to odd before sorting (default: on)");
  cmd->add_option("--segments", chain.segments,
                  "split the top difference list this many ways")
      ->check(CLI::Range(1u, 1u << 20));
  cmd->add_option("--base-threshold", chain.base_threshold,
                  "stop recursing at this list length");
  cmd->add_option("--max-depth", chain.max_depth, "recursion depth cap")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"addition-only matrix multiplication"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  MatmulArgs matmul_args;
  auto* matmul = app.add_subcommand("matmul", "multiply two matrix files");
  matmul->add_option("a", matmul_args.a_path, "left operand file")->required();
  matmul->add_option("b", matmul_args.b_path, "right operand file")->required();
  matmul->add_option("out", matmul_args.out_path, "product output file")->required();
  matmul->add_option("--counts", matmul_args.counts_path,
                     "write operation-counter CSV here");
  matmul->add_flag("--naive", matmul_args.naive,
                   "schoolbook reference path (same output, no chain)");
  add_chain_flags(matmul, matmul_args.chain);

  ExperimentArgs experiment_args;
  auto* experiment =
      app.add_subcommand("experiment", "list-length decay over random lists");
  experiment->add_option("--n", experiment_args.n_values, "list lengths")
      ->required()
      ->delimiter(',');
  experiment->add_option("--bits", experiment_args.bits, "value width")
      ->check(CLI::Range(1u, 32u));
  experiment->add_flag("--align,!--no-align", experiment_args.align,
                       "align before sorting (default: on)");
  experiment->add_option("--trials", experiment_args.trials, "trials per row")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  experiment->add_option("--seed", experiment_args.seed, "RNG seed");
  experiment->add_option("--csv", experiment_args.csv_path,
                         "write CSV here instead of stdout");

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "guaranteed addition bounds");
  bound->add_option("--n", bound_args.n, "vector length");
  auto* bits_opt = bound->add_option("--bits", bound_args.bits, "value width b, k = 2^b")
                       ->check(CLI::Range(1u, 32u));
  bound->add_option("--k", bound_args.k, "value bound k")
      ->excludes(bits_opt)
      ->check(CLI::Range(std::uint64_t{2}, ~std::uint64_t{0}));
  bound->add_option("--j", bound_args.j, "report this j's threshold");
  bound->add_option("--csv", bound_args.csv_path, "also write the report as CSV");

  ChainStatsArgs stats_args;
  auto* stats =
      app.add_subcommand("chain-stats", "per-level chain lengths and sums");
  stats->add_option("input", stats_args.input_path, "matrix file; its values form the vector")
      ->required();
  stats->add_option("--csv", stats_args.csv_path,
                    "write CSV here instead of stdout");
  add_chain_flags(stats, stats_args.chain);

  try {
    app.parse(argc, argv);
    if (matmul->parsed()) {
      return cmd_matmul(matmul_args);
    }
    if (experiment->parsed()) {
      return cmd_experiment(experiment_args);
    }
    if (bound->parsed()) {
      if (bound_args.bits == 0 && bound_args.k == 0) {
        std::cerr << "bound: one of --bits or --k is required\n";
        return 2;
      }
      if (bound_args.n == 0 && bound_args.j == 0) {
        std::cerr << "bound: one of --n or --j is required\n";
        return 2;
      }
      return cmd_bound(bound_args);
    }
    return cmd_chain_stats(stats_args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const addmul::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const addmul::dimension_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const addmul::width_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
