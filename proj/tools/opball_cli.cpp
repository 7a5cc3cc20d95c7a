// opball: command-line front end.
//
//   opball identities [--seed N] [--trials N] [--dim-h N] [--dim-k N] [--tol X] [--threads N]
//   opball metric T.json S.json
//   opball symcheck T.json [--pair canonical|identity|file] [--pair-file P.json] [--tol X]
//   opball approx [--dim-h N] [--dim-k N] [--trials N] [--seed N] [--out PREFIX] [--threads N]
//
// Exit codes: 0 success, 1 identity/invariant/verdict failure, 2 usage or input error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "opball/density.hpp"
#include "opball/identities.hpp"
#include "opball/io.hpp"
#include "opball/opball.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

using opball::io::json;

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitUsage;
}

bool is_input_error(opball::ErrorKind kind) {
  using opball::ErrorKind;
  return kind == ErrorKind::Parse || kind == ErrorKind::ShapeMismatch ||
         kind == ErrorKind::BadDims || kind == ErrorKind::InvalidPair ||
         kind == ErrorKind::NonFinite;
}

struct IdentitiesArgs {
  opball::IdentityConfig cfg;
};

int run_identities(const IdentitiesArgs& args) {
  const auto& cfg = args.cfg;
  if (cfg.dim_k > cfg.dim_h) return usage_error("--dim-k must not exceed --dim-h");
  const auto results = opball::run_identities(cfg);
  json list = json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    list.push_back({{"name", r.name}, {"max_residual", r.max_residual}, {"pass", r.pass}});
    all_pass = all_pass && r.pass;
  }
  const json report = {{"seed", cfg.seed},     {"trials", cfg.trials}, {"dim_h", cfg.dim_h},
                       {"dim_k", cfg.dim_k},   {"tol", cfg.tol},       {"identities", list},
                       {"all_pass", all_pass}};
  std::cout << report.dump(2) << "\n";
  return all_pass ? kExitOk : kExitFailure;
}

struct MetricArgs {
  std::string file_t;
  std::string file_s;
};

int run_metric(const MetricArgs& args) {
  const opball::CMat t = opball::io::read_matrix(args.file_t);
  const opball::CMat s = opball::io::read_matrix(args.file_s);
  if (!t.same_shape(s)) {
    return usage_error("shape mismatch: T is " + t.shape_string() + ", S is " + s.shape_string());
  }
  const double d = opball::metric_d(opball::OperatorHK(t), opball::OperatorHK(s));
  std::printf("%#.12g\n", d);
  return kExitOk;
}

struct SymcheckArgs {
  std::string file_t;
  std::string pair = "canonical";
  std::string pair_file;
  double tol = 1e-10;
};

int run_symcheck(const SymcheckArgs& args) {
  const opball::CMat t = opball::io::read_matrix(args.file_t);
  // T maps C^cols → C^rows; the pair runs in the same direction.
  std::optional<opball::ConjugationPair> pair;
  if (args.pair == "identity") {
    if (!t.is_square()) return usage_error("identity pair needs a square matrix, got " + t.shape_string());
    pair = opball::identity_pair(t.rows());
  } else if (args.pair == "canonical") {
    if (t.rows() < t.cols()) {
      return usage_error("canonical pair needs rows >= cols, got " + t.shape_string());
    }
    pair = opball::canonical_pair(t.cols(), t.rows());
  } else {
    if (args.pair_file.empty()) return usage_error("--pair file requires --pair-file");
    pair = opball::io::pair_from_json(opball::io::parse_json_file(args.pair_file));
    if (pair->dim_src() != t.cols() || pair->dim_dst() != t.rows()) {
      return usage_error("pair runs " + std::to_string(pair->dim_src()) + "->" +
                         std::to_string(pair->dim_dst()) + " but T is " + t.shape_string());
    }
  }
  const double res = opball::symmetry_residual(t, *pair);
  const bool symmetric = res <= args.tol;
  std::printf("residual %.17g\n%s\n", res, symmetric ? "SYMMETRIC" : "NOT-SYMMETRIC");
  return symmetric ? kExitOk : kExitFailure;
}

struct ApproxArgs {
  std::size_t dim_h = 8;
  std::size_t dim_k = 2;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::string out = "approx";
  unsigned threads = 1;
};

int run_approx(const ApproxArgs& args) {
  if (args.dim_k > args.dim_h) return usage_error("--dim-k must not exceed --dim-h");
  const opball::EnsembleReport report =
      opball::ensemble_experiment(args.dim_h, args.dim_k, args.trials, args.seed, args.threads);
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_trial%03zu.csv", i);
    opball::io::write_text(args.out + suffix, opball::io::profile_csv(report.trials[i].profile));
  }
  opball::io::write_text(args.out + "_report.json",
                         opball::io::report_to_json(report).dump(2) + "\n");
  std::printf("trials %zu valid %zu min_at_full_depth %zu max_sym_residual %.3e\n",
              report.trials.size(), report.valid_trials(), report.min_at_full_depth_trials(),
              report.max_sym_residual());
  return report.all_valid() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-ball geometry and complex symmetric operator toolkit"};
  app.require_subcommand(1);

  IdentitiesArgs ident;
  auto* identities = app.add_subcommand("identities", "Run the randomized identity suite");
  identities->add_option("--seed", ident.cfg.seed, "Master seed");
  identities->add_option("--trials", ident.cfg.trials, "Number of random trials")
      ->check(CLI::Range(std::size_t{0}, std::size_t{100000}));
  identities->add_option("--dim-h", ident.cfg.dim_h, "dim H (1..32)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));
  identities->add_option("--dim-k", ident.cfg.dim_k, "dim K (1..8)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  identities->add_option("--tol", ident.cfg.tol, "Pass threshold for every residual")
      ->check(CLI::PositiveNumber);
  identities->add_option("--threads", ident.cfg.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u));

  MetricArgs metric;
  auto* metric_cmd = app.add_subcommand("metric", "Print d(T, S) for two matrix files");
  metric_cmd->add_option("T", metric.file_t, "Matrix file for T")->required();
  metric_cmd->add_option("S", metric.file_s, "Matrix file for S")->required();

  SymcheckArgs sym;
  auto* symcheck = app.add_subcommand("symcheck", "Check complex symmetry against a conjugation pair");
  symcheck->add_option("T", sym.file_t, "Matrix file for T")->required();
  symcheck->add_option("--pair", sym.pair, "canonical | identity | file")
      ->check(CLI::IsMember({"canonical", "identity", "file"}));
  symcheck->add_option("--pair-file", sym.pair_file, "Pair file {\"fwd\":...,\"bwd\":...}");
  symcheck->add_option("--tol", sym.tol, "Residual threshold")->check(CLI::PositiveNumber);

  ApproxArgs approx;
  auto* approx_cmd = app.add_subcommand("approx", "Run the symmetric approximation experiment");
  approx_cmd->add_option("--dim-h", approx.dim_h, "dim H (1..32)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));
  approx_cmd->add_option("--dim-k", approx.dim_k, "dim K (1..8)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  approx_cmd->add_option("--trials", approx.trials, "Number of trials")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  approx_cmd->add_option("--seed", approx.seed, "Master seed");
  approx_cmd->add_option("--out", approx.out, "Output prefix");
  approx_cmd->add_option("--threads", approx.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*identities) return run_identities(ident);
    if (*metric_cmd) return run_metric(metric);
    if (*symcheck) return run_symcheck(sym);
    if (*approx_cmd) return run_approx(approx);
  } catch (const opball::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
