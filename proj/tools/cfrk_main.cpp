// Command-line front end: generate instances, run solvers, evaluate
// solutions, and benchmark solver/instance grids into CSV.
//
// Exit codes: 0 ok, 2 validation/precondition failure, 3 infeasible,
// 4 work-cap refusal.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfrk/assignment.hpp"
#include "cfrk/cnf.hpp"
#include "cfrk/embeddings.hpp"
#include "cfrk/fpt_solver.hpp"
#include "cfrk/generators.hpp"
#include "cfrk/instance.hpp"
#include "cfrk/io.hpp"
#include "cfrk/oracle.hpp"
#include "cfrk/poly_pipeline.hpp"
#include "cfrk/tree_dp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitWorkCap = 4;

struct CliError {
  int code;
  std::string message;
};

struct SolveParams {
  std::string algo;
  double eps = 0.2;
  int trials = 32;
  int swap_size = 1;
  std::uint64_t seed = 0;
  bool at_most_k = false;
  bool embed_all = false;
  bool progress = false;
  std::string coreset = "identity";
  double eps1 = 0.1;
  std::string dump_dp;
};

cfrk::Instance load_instance(const std::string& path,
                             const std::string& objective_flag) {
  cfrk::Instance inst = cfrk::parse_instance(cfrk::read_file(path));
  if (!objective_flag.empty()) {
    auto flag_obj = cfrk::objective_from_name(objective_flag);
    if (!flag_obj) throw CliError{kExitValidation, "unknown objective '" + objective_flag + "'"};
    // The file's objective wins unless it is absent; a contradicting flag is
    // an error rather than a silent override.
    if (inst.objective != *flag_obj) {
      std::string doc = cfrk::read_file(path);
      if (doc.find("\"objective\"") != std::string::npos)
        throw CliError{kExitValidation,
                       "--objective conflicts with the objective in " + path};
      inst.objective = *flag_obj;
    }
  }
  auto violations = cfrk::validate_instance(inst);
  // The vacuously-loose beta warning does not block solving.
  std::vector<std::string> hard;
  for (const auto& v : violations)
    if (v.find("warning") == std::string::npos) hard.push_back(v);
    else std::cerr << "warning: " << v << "\n";
  if (!hard.empty()) {
    std::string msg = "instance validation failed:";
    for (const auto& v : hard) msg += "\n  " + v;
    throw CliError{kExitValidation, msg};
  }
  return inst;
}

struct SolveOutcome {
  std::optional<cfrk::Solution> solution;
  long long wall_ms = 0;
};

SolveOutcome run_solver(const cfrk::Instance& inst, const SolveParams& p) {
  auto start = std::chrono::steady_clock::now();
  std::optional<cfrk::Solution> sol;
  if (p.algo == "oracle") {
    cfrk::OracleOptions opts;
    opts.at_most_k = p.at_most_k;
    sol = cfrk::brute_force_solve(inst, opts);
  } else if (p.algo == "greedy") {
    auto centers = cfrk::greedy_feasible(inst);
    if (centers) sol = cfrk::optimal_assignment(inst, *centers);
  } else if (p.algo == "tree-dp") {
    if (inst.metric->kind() != cfrk::MetricKind::tree)
      throw CliError{kExitValidation, "tree-dp: tree metric required"};
    cfrk::BinarizedTree bt = cfrk::binarize(inst);
    cfrk::TreeDpOptions opts;
    opts.at_most_k = p.at_most_k;
    std::ofstream dump_stream;
    if (!p.dump_dp.empty()) {
      dump_stream.open(p.dump_dp);
      opts.dump = &dump_stream;
    }
    sol = cfrk::dp_solve(bt, inst, opts);
  } else if (p.algo == "poly-approx") {
    cfrk::PolyApproxOptions opts;
    opts.swap_size = p.swap_size;
    opts.trials = p.trials;
    opts.seed = p.seed;
    opts.embed_all = p.embed_all;
    auto res = cfrk::poly_approx_solve(inst, opts);
    sol = res.solution;
  } else if (p.algo == "fpt") {
    cfrk::FptStats stats;
    auto progress = p.progress
                        ? std::function<void(const std::string&)>(
                              [](const std::string& line) { std::cerr << line << "\n"; })
                        : std::function<void(const std::string&)>();
    cfrk::CoresetMode mode = p.coreset == "sample" ? cfrk::CoresetMode::sample
                                                   : cfrk::CoresetMode::identity;
    sol = cfrk::fpt_solve(inst, p.eps, &stats, progress, mode, p.eps1, p.seed);
    if (p.progress)
      std::cerr << "patterns=" << stats.patterns << " guesses=" << stats.guesses
                << " pruned=" << stats.pruned << " evaluated=" << stats.evaluated
                << "\n";
  } else {
    throw CliError{kExitValidation, "unknown algorithm '" + p.algo + "'"};
  }
  auto end = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.solution = std::move(sol);
  out.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
  return out;
}

void print_run_report(const cfrk::Instance& inst, const std::string& in_path,
                      const SolveParams& p, const SolveOutcome& outcome) {
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(cfrk::instance_digest(inst)));
  std::cout << "instance: " << in_path << "\n";
  std::cout << "digest: " << digest << "\n";
  std::cout << "algo: " << p.algo << " (eps=" << p.eps << " trials=" << p.trials
            << " swaps=" << p.swap_size << " seed=" << p.seed << ")\n";
  std::cout << "objective: " << cfrk::objective_name(inst.objective) << "\n";
  if (!outcome.solution) {
    std::cout << "feasible: no\n";
    std::cout << "time_ms: " << outcome.wall_ms << "\n";
    return;
  }
  const cfrk::Solution& sol = *outcome.solution;
  // Re-verify the reported cost before emitting it.
  cfrk::Rational recheck = cfrk::evaluate_cost(inst, sol);
  if (recheck != sol.cost)
    throw CliError{kExitValidation, "internal: reported cost fails re-evaluation"};
  std::cout << "feasible: yes\n";
  std::cout << "cost: " << sol.cost.str() << "\n";
  std::cout << "centers:";
  for (int c : sol.centers) std::cout << " " << inst.metric->name(c);
  std::cout << "\n";
  auto rep = cfrk::check_feasibility(inst, sol.centers);
  for (size_t g = 0; g < rep.group_counts.size(); ++g)
    std::cout << "group[" << g << "]: |S∩G|=" << rep.group_counts[g] << " in ["
              << inst.lower[g] << "," << inst.upper[g] << "] "
              << (rep.fair_range_ok[g] ? "ok" : "VIOLATED") << "\n";
  std::cout << "time_ms: " << outcome.wall_ms << "\n";
}

int cmd_solve(const std::string& in_path, const std::string& out_path,
              const std::string& objective_flag, const SolveParams& p) {
  cfrk::Instance inst = load_instance(in_path, objective_flag);
  SolveOutcome outcome = run_solver(inst, p);
  print_run_report(inst, in_path, p, outcome);
  if (!outcome.solution) return kExitInfeasible;
  if (!out_path.empty())
    cfrk::write_file(out_path, cfrk::serialize_solution(inst, *outcome.solution));
  return kExitOk;
}

int cmd_eval(const std::string& in_path, const std::string& sol_path,
             const std::string& objective_flag) {
  cfrk::Instance inst = load_instance(in_path, objective_flag);
  cfrk::Solution sol = cfrk::parse_solution(inst, cfrk::read_file(sol_path));
  cfrk::Rational cost = cfrk::evaluate_cost(inst, sol);
  bool cost_matches = cost == sol.cost;
  auto rep = cfrk::check_feasibility(inst, sol.centers);
  // Served load per center against its capacity.
  std::map<int, cfrk::Rational> load;
  for (const auto& a : sol.assignment) load[a.center] += a.amount;
  bool caps_ok = true;
  for (const auto& [f, amount] : load)
    if (amount > cfrk::Rational(inst.capacity_of(f))) caps_ok = false;
  std::cout << "recomputed_cost: " << cost.str() << "\n";
  std::cout << "recorded_cost: " << sol.cost.str() << "\n";
  std::cout << "cost_matches: " << (cost_matches ? "yes" : "no") << "\n";
  std::cout << "fair_range: " << (rep.fair_range_all_ok() ? "ok" : "violated") << "\n";
  std::cout << "capacities: " << (caps_ok ? "ok" : "violated") << "\n";
  if (!cost_matches) return kExitValidation;
  if (!rep.fair_range_all_ok() || !caps_ok) return kExitInfeasible;
  return kExitOk;
}

int cmd_generate(const std::string& type, const std::string& out_path,
                 const cfrk::RandomInstanceParams& rp, std::uint64_t seed,
                 const std::string& cnf_path, long long d_param, int kappa,
                 const std::string& bounds_flag, const std::string& caps_flag,
                 int var_cap) {
  cfrk::Instance inst;
  std::string provenance;
  if (type == "random") {
    inst = cfrk::gen_random_instance(rp, seed);
  } else {
    cfrk::CnfFormula cnf = cfrk::parse_cnf(cfrk::read_file(cnf_path));
    cfrk::BoundsMode bounds = bounds_flag == "lower-only"
                                  ? cfrk::BoundsMode::lower_only
                                  : cfrk::BoundsMode::range;
    cfrk::ReductionCapacities caps = caps_flag == "unbounded"
                                         ? cfrk::ReductionCapacities::unbounded
                                         : cfrk::ReductionCapacities::unit;
    cfrk::ReductionArtifact art =
        type == "sat" ? cfrk::gen_sat_reduction(cnf, d_param, bounds, caps)
                      : cfrk::gen_gap_sat_reduction(cnf, kappa, d_param, bounds,
                                                    caps, var_cap);
    inst = std::move(art.instance);
    provenance = cfrk::serialize_provenance(art);
  }
  cfrk::write_file(out_path, cfrk::serialize_instance(inst));
  if (!provenance.empty())
    cfrk::write_file(out_path + ".provenance.json", provenance);
  std::cout << "wrote " << out_path << " (n=" << inst.metric->size()
            << " clients=" << inst.clients.size()
            << " facilities=" << inst.facilities.size() << " k=" << inst.k
            << " t=" << inst.group_count() << ")\n";
  return kExitOk;
}

struct BenchCell {
  std::string instance;
  std::string algo;
  std::string cost = "inf";
  std::string ratio;  // empty unless the oracle ran and both are feasible
  long long time_ms = 0;
  bool feasible = false;
};

int cmd_bench(const std::string& corpus, const std::string& algos_csv,
              const std::string& csv_path, const SolveParams& base,
              int jobs, bool no_times) {
  std::vector<std::string> algos;
  {
    std::stringstream ss(algos_csv);
    std::string a;
    while (std::getline(ss, a, ',')) algos.push_back(a);
  }
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".json") continue;
    if (entry.path().string().find(".provenance.") != std::string::npos) continue;
    files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  struct Cell {
    size_t file_i;
    size_t algo_i;
  };
  std::vector<Cell> cells;
  for (size_t f = 0; f < files.size(); ++f)
    for (size_t a = 0; a < algos.size(); ++a) cells.push_back({f, a});

  std::vector<BenchCell> rows(cells.size());
  std::atomic<size_t> next{0};
  int workers = std::max(1, jobs);
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      BenchCell row;
      row.instance = std::filesystem::path(files[cell.file_i]).filename().string();
      row.algo = algos[cell.algo_i];
      try {
        cfrk::Instance inst = cfrk::parse_instance(cfrk::read_file(files[cell.file_i]));
        SolveParams p = base;
        p.algo = row.algo;
        SolveOutcome outcome = run_solver(inst, p);
        row.time_ms = outcome.wall_ms;
        if (outcome.solution) {
          row.feasible = true;
          row.cost = outcome.solution->cost.str();
        }
      } catch (const std::exception& e) {
        row.cost = std::string("error:") + e.what();
      } catch (const CliError& e) {
        row.cost = "error:" + e.message;
      }
      std::replace(row.cost.begin(), row.cost.end(), ',', ';');
      rows[i] = std::move(row);
    }
  };
  std::vector<std::future<void>> pool;
  for (int w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();

  // Ratio against the oracle cell of the same instance.
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].feasible) continue;
    for (size_t j = 0; j < rows.size(); ++j) {
      if (cells[j].file_i != cells[i].file_i || rows[j].algo != "oracle") continue;
      if (!rows[j].feasible) break;
      auto num = cfrk::Rational::parse(rows[i].cost);
      auto den = cfrk::Rational::parse(rows[j].cost);
      if (num && den && !den->is_zero()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", (*num / *den).to_double());
        rows[i].ratio = buf;
      } else if (num && den && den->is_zero() && num->is_zero()) {
        rows[i].ratio = "1.000000";
      }
      break;
    }
  }

  std::ostringstream csv;
  csv << "instance,algo,cost,ratio_vs_oracle,time_ms,feasible\n";
  for (const auto& row : rows)
    csv << row.instance << "," << row.algo << "," << row.cost << "," << row.ratio
        << "," << (no_times ? 0 : row.time_ms) << ","
        << (row.feasible ? "true" : "false") << "\n";
  if (csv_path.empty())
    std::cout << csv.str();
  else
    cfrk::write_file(csv_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacitated fair-range k-clustering toolkit"};
  app.require_subcommand(1);

  std::string in_path, out_path, objective_flag;
  SolveParams params;

  CLI::App* solve = app.add_subcommand("solve", "run one solver on one instance");
  solve->add_option("--in", in_path, "instance file")->required();
  solve->add_option("--algo", params.algo,
                    "tree-dp | poly-approx | fpt | oracle | greedy")
      ->required();
  solve->add_option("--out", out_path, "solution file to write");
  solve->add_option("--objective", objective_flag, "median | means");
  solve->add_option("--eps", params.eps, "fpt approximation parameter");
  solve->add_option("--trials", params.trials, "embedding seeds for poly-approx");
  solve->add_option("--baseline-swaps", params.swap_size, "local-search swap size");
  solve->add_option("--seed", params.seed, "master random seed");
  solve->add_flag("--at-most-k", params.at_most_k, "allow fewer than k centers");
  solve->add_flag("--embed-all", params.embed_all,
                  "poly-approx comparison mode: embed all points directly");
  solve->add_flag("--progress", params.progress, "stream fpt progress to stderr");
  solve->add_option("--coreset", params.coreset, "identity | sample");
  solve->add_option("--eps1", params.eps1, "sample-coreset parameter");
  solve->add_option("--dump-dp", params.dump_dp, "tree-dp table dump file");

  std::string gen_type = "random", cnf_path, bounds_flag = "range", caps_flag = "unit";
  cfrk::RandomInstanceParams rp;
  std::string metric_flag = "matrix";
  std::uint64_t gen_seed = 0;
  long long d_param = 100;
  int kappa = 1, var_cap = 20;
  std::string gen_objective = "median";

  CLI::App* gen = app.add_subcommand("generate", "generate instances");
  gen->add_option("--type", gen_type, "random | sat | gap-sat")->required();
  gen->add_option("--out", out_path, "instance file to write")->required();
  gen->add_option("--n", rp.n, "points (random)");
  gen->add_option("--k", rp.k, "centers (random)");
  gen->add_option("--t", rp.t, "groups (random)");
  gen->add_option("--cap-min", rp.cap_min, "capacity lower bound (random)");
  gen->add_option("--cap-max", rp.cap_max, "capacity upper bound (random)");
  gen->add_option("--metric", metric_flag, "matrix | tree (random)");
  gen->add_option("--objective", gen_objective, "median | means (random)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--cnf", cnf_path, "DIMACS file (sat, gap-sat)");
  gen->add_option("--d", d_param, "far-edge weight D (sat, gap-sat)");
  gen->add_option("--kappa", kappa, "super-clause count (gap-sat)");
  gen->add_option("--bounds", bounds_flag, "range | lower-only (sat, gap-sat)");
  gen->add_option("--caps", caps_flag, "unit | unbounded (sat, gap-sat)");
  gen->add_option("--var-cap", var_cap, "super-clause variable cap (gap-sat)");

  std::string sol_path;
  CLI::App* eval = app.add_subcommand("eval", "re-check a solution file");
  eval->add_option("--in", in_path, "instance file")->required();
  eval->add_option("--solution", sol_path, "solution file")->required();
  eval->add_option("--objective", objective_flag, "median | means");

  std::string corpus, algos_csv = "oracle", csv_path;
  int jobs = 1;
  bool no_times = false;
  CLI::App* bench = app.add_subcommand("bench", "solver grid over a corpus");
  bench->add_option("--corpus", corpus, "directory of instance files")->required();
  bench->add_option("--algos", algos_csv, "comma-separated algorithm list");
  bench->add_option("--csv", csv_path, "output CSV path (default stdout)");
  bench->add_option("--eps", params.eps, "fpt approximation parameter");
  bench->add_option("--trials", params.trials, "embedding seeds for poly-approx");
  bench->add_option("--baseline-swaps", params.swap_size, "local-search swap size");
  bench->add_option("--seed", params.seed, "master random seed");
  bench->add_option("--jobs", jobs, "worker pool size");
  bench->add_flag("--no-times", no_times, "write time_ms as 0 for reproducible CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(in_path, out_path, objective_flag, params);
    if (eval->parsed()) return cmd_eval(in_path, sol_path, objective_flag);
    if (gen->parsed()) {
      if (gen_type != "random" && gen_type != "sat" && gen_type != "gap-sat")
        throw CliError{kExitValidation, "unknown --type '" + gen_type + "'"};
      if (gen_type != "random" && cnf_path.empty())
        throw CliError{kExitValidation, "--cnf is required for SAT reductions"};
      rp.metric_kind = metric_flag == "tree" ? cfrk::MetricKind::tree
                                             : cfrk::MetricKind::dense;
      auto obj = cfrk::objective_from_name(gen_objective);
      if (!obj) throw CliError{kExitValidation, "unknown objective"};
      rp.objective = *obj;
      return cmd_generate(gen_type, out_path, rp, gen_seed, cnf_path, d_param,
                          kappa, bounds_flag, caps_flag, var_cap);
    }
    if (bench->parsed()) return cmd_bench(corpus, algos_csv, csv_path, params, jobs, no_times);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const cfrk::WorkCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWorkCap;
  } catch (const cfrk::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const cfrk::CnfParseError& e) {
    std::cerr << "error: CNF " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
