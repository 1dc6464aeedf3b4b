// efx: generate instances, solve them, verify allocations and run benchmarks.
//
// Exit status: 0 success / EFX, 1 not EFX or unsolved within budget,
// 2 usage or input error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "efx/annealer.hpp"
#include "efx/baselines.hpp"
#include "efx/descent.hpp"
#include "efx/experiment.hpp"
#include "efx/generators.hpp"
#include "efx/io.hpp"
#include "efx/violations.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotEfx = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnnealFlags {
  double t_initial = 5.0;
  double t_min = 0.0001;
  std::uint64_t steps_per_level = 0;
  double cooling = 0.99;
  std::uint64_t max_steps = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--t-initial", t_initial, "Initial temperature")->capture_default_str();
    cmd->add_option("--t-min", t_min, "Restart threshold temperature")->capture_default_str();
    cmd->add_option("--steps-per-level", steps_per_level,
                    "Proposals per temperature level (0 = 100*n*m)")
        ->capture_default_str();
    cmd->add_option("--cooling", cooling, "Geometric cooling factor")->capture_default_str();
    cmd->add_option("--max-steps", max_steps, "Total proposal budget (0 = unlimited)")
        ->capture_default_str();
  }

  efx::AnnealParams params(std::uint64_t seed) const {
    efx::AnnealParams p;
    p.t_initial = t_initial;
    p.t_min = t_min;
    p.steps_per_level = steps_per_level;
    p.cooling = cooling;
    if (max_steps > 0) p.max_total_steps = max_steps;
    p.seed = seed;
    return p;
  }
};

void emit_allocation(const efx::Instance& inst, const efx::Allocation& alloc,
                     const std::string& path) {
  if (path.empty() || path == "-") {
    efx::write_allocation(inst, alloc, std::cout);
  } else {
    efx::save_allocation(inst, alloc, path);
  }
}

// ---- gen -----------------------------------------------------------------

struct GenCmd {
  std::string kind = "uniform";
  std::size_t n = 0;
  std::size_t m = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  efx::Value scale = efx::kDefaultScale;
  std::string output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen", "Generate a random instance");
    cmd->add_option("--kind", kind, "uniform | correlated | identical")->capture_default_str();
    cmd->add_option("--n", n, "Number of agents")->required();
    cmd->add_option("--m", m, "Number of goods")->required();
    cmd->add_option("--rho", rho, "Correlation strength (correlated only)")->capture_default_str();
    cmd->add_option("--seed", seed, "Generator seed")->required();
    cmd->add_option("--scale", scale, "Integer value scale")->capture_default_str();
    cmd->add_option("-o,--output", output, "Instance file (default stdout)");
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    efx::GenSpec spec{efx::parse_gen_kind(kind), n, m, rho, seed, scale};
    const efx::Instance inst = efx::generate(spec);
    if (output.empty() || output == "-") {
      efx::write_instance(inst, std::cout);
    } else {
      efx::save_instance(inst, output);
    }
    return kExitOk;
  }

  int code = kExitOk;
};

// ---- solve ---------------------------------------------------------------

struct SolveCmd {
  std::string instance_path;
  std::string solver = "anneal";
  std::uint64_t seed = 0;
  bool warm_start = false;
  std::uint64_t cap = efx::kDefaultBruteForceCap;
  std::string output;
  bool trace = false;
  AnnealFlags anneal;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("solve", "Solve one instance file");
    cmd->add_option("-i,--instance", instance_path, "Instance file")->required();
    cmd->add_option("--solver", solver,
                    "anneal | descent | round_robin | n_plus_one | brute_force")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Solver seed")->capture_default_str();
    cmd->add_flag("--warm-start", warm_start, "Start annealing from the welfare-maximizing allocation");
    cmd->add_option("--cap", cap, "Brute-force search cap on n^m")->capture_default_str();
    cmd->add_option("-o,--output", output, "Allocation file (default stdout)");
    cmd->add_flag("--trace", trace, "Print the descent trace to stderr");
    anneal.add_to(cmd);
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const efx::Instance inst = efx::load_instance(instance_path);
    const auto kind = efx::parse_solver_kind(solver);
    if (warm_start && kind != efx::SolverKind::anneal) {
      throw UsageError("--warm-start only applies to --solver anneal");
    }
    std::optional<efx::Allocation> alloc;
    switch (kind) {
      case efx::SolverKind::anneal: {
        const auto p = anneal.params(seed);
        const auto r = warm_start
                           ? efx::anneal_solve(inst, p, efx::welfare_max_allocation(inst))
                           : efx::anneal_solve(inst, p);
        std::cerr << "solved: " << (r.solved ? "yes" : "no") << "  steps: " << r.steps
                  << "  restarts: " << r.restarts << "  violations: " << r.violations << '\n';
        alloc = r.allocation;
        break;
      }
      case efx::SolverKind::descent: {
        const auto ident = efx::IdenticalInstance::from_instance(inst);
        efx::Rng rng(seed, efx::Stream::annealer);
        const auto start = efx::init_random_allocation(rng, inst.agents(), inst.goods());
        const auto t = efx::descent_solve(ident, start);
        if (trace) {
          for (const auto& s : t.moves) {
            std::cerr << "move good " << s.move.good + 1 << ": " << s.move.from + 1 << " -> "
                      << s.move.to + 1 << "  phi " << s.phi_before.value() << " -> "
                      << s.phi_after.value() << '\n';
          }
        }
        std::cerr << "descent moves: " << t.moves.size() << '\n';
        alloc = t.allocation;
        break;
      }
      case efx::SolverKind::round_robin:
        alloc = efx::round_robin(inst);
        break;
      case efx::SolverKind::n_plus_one:
        alloc = efx::n_plus_one_pick(inst);
        break;
      case efx::SolverKind::brute_force: {
        const auto r = efx::brute_force_efx(inst, cap);
        std::cerr << "examined: " << r.examined << '\n';
        if (!r.allocation) {
          std::cerr << "no EFX allocation exists\n";
          return kExitNotEfx;
        }
        alloc = r.allocation;
        break;
      }
    }
    emit_allocation(inst, *alloc, output);
    return efx::is_efx(inst, *alloc) ? kExitOk : kExitNotEfx;
  }

  int code = kExitOk;
};

// ---- verify --------------------------------------------------------------

struct VerifyCmd {
  std::string instance_path;
  std::string allocation_path;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("verify", "Count EFX violations of an allocation");
    cmd->add_option("-i,--instance", instance_path, "Instance file")->required();
    cmd->add_option("-a,--allocation", allocation_path, "Allocation file")->required();
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const efx::Instance inst = efx::load_instance(instance_path);
    const auto file = efx::load_allocation(allocation_path, &inst);
    const auto vc = efx::count_violations(inst, file.allocation);
    const auto triples = efx::list_violations(inst, file.allocation);
    const std::size_t n = inst.agents();

    std::cout << "instance: n=" << n << " m=" << inst.goods() << " digest="
              << efx::instance_digest(inst) << '\n';
    std::cout << "violations: " << vc.total << '\n';
    std::cout << "per-pair counts (row i envies column j):\n";
    for (efx::Agent i = 0; i < n; ++i) {
      std::cout << ' ';
      for (efx::Agent j = 0; j < n; ++j) std::cout << ' ' << std::setw(4) << vc.at(i, j);
      std::cout << '\n';
    }
    std::cout << "violating triples (i, j, g):\n";
    for (const auto& v : triples) {
      std::cout << "  (" << v.envious + 1 << ", " << v.holder + 1 << ", " << v.good + 1 << ")\n";
    }
    std::cout << "status: " << (vc.total == 0 ? "EFX" : "NOT EFX") << '\n';
    return vc.total == 0 ? kExitOk : kExitNotEfx;
  }

  int code = kExitOk;
};

// ---- brute ---------------------------------------------------------------

struct BruteCmd {
  std::string instance_path;
  std::uint64_t cap = efx::kDefaultBruteForceCap;
  std::string output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("brute", "Exhaustive EFX search for small instances");
    cmd->add_option("-i,--instance", instance_path, "Instance file")->required();
    cmd->add_option("--cap", cap, "Maximum n^m to enumerate")->capture_default_str();
    cmd->add_option("-o,--output", output, "Allocation file (default stdout)");
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const efx::Instance inst = efx::load_instance(instance_path);
    const auto r = efx::brute_force_efx(inst, cap);
    std::cerr << "examined: " << r.examined << '\n';
    if (!r.allocation) {
      std::cout << "none found: no allocation of this instance is EFX\n";
      return kExitNotEfx;
    }
    emit_allocation(inst, *r.allocation, output);
    return kExitOk;
  }

  int code = kExitOk;
};

// ---- bench ---------------------------------------------------------------

struct BenchCmd {
  std::string kind = "uniform";
  std::size_t n = 0;
  std::size_t m = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  efx::Value scale = efx::kDefaultScale;
  std::string solver = "anneal";
  std::uint64_t trials = 100;
  unsigned workers = 1;
  bool warm_start = false;
  std::uint64_t cap = efx::kDefaultBruteForceCap;
  std::string output;
  std::string summary;
  std::string csv;
  bool record_timing = false;
  AnnealFlags anneal;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "Run a multi-trial experiment");
    cmd->add_option("--kind", kind, "uniform | correlated | identical")->capture_default_str();
    cmd->add_option("--n", n, "Number of agents")->required();
    cmd->add_option("--m", m, "Number of goods")->required();
    cmd->add_option("--rho", rho, "Correlation strength")->capture_default_str();
    cmd->add_option("--seed", seed, "Base seed; trial k uses seed + k")->required();
    cmd->add_option("--scale", scale, "Integer value scale")->capture_default_str();
    cmd->add_option("--solver", solver,
                    "anneal | descent | round_robin | n_plus_one | brute_force")
        ->capture_default_str();
    cmd->add_option("--trials", trials, "Number of trials")->capture_default_str();
    cmd->add_option("--workers", workers, "Parallel workers (env EFX_WORKERS overrides)")
        ->capture_default_str();
    cmd->add_flag("--warm-start", warm_start, "Warm-start annealing from welfare max");
    cmd->add_option("--cap", cap, "Brute-force cap")->capture_default_str();
    cmd->add_option("-o,--output", output, "Per-trial records (JSON lines)");
    cmd->add_option("--summary", summary, "Summary JSON (default stdout)");
    cmd->add_option("--csv", csv, "Per-trial CSV");
    cmd->add_flag("--record-timing", record_timing, "Include elapsed_ms in records");
    anneal.add_to(cmd);
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    efx::ExperimentConfig cfg;
    cfg.gen = {efx::parse_gen_kind(kind), n, m, rho, seed, scale};
    cfg.solver = efx::parse_solver_kind(solver);
    cfg.params = anneal.params(0);
    cfg.trials = trials;
    cfg.workers = workers;
    cfg.warm_start = warm_start;
    cfg.brute_force_cap = cap;
    cfg.output_path = output;
    cfg.record_timing = record_timing;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    const auto result = efx::run_experiment(cfg);
    if (!csv.empty()) {
      std::ofstream out(csv);
      if (!out) throw std::runtime_error("cannot write " + csv);
      efx::write_csv(result.records, out);
    }
    if (summary.empty() || summary == "-") {
      efx::write_summary_json(cfg, result.summary, std::cout);
    } else {
      std::ofstream out(summary);
      if (!out) throw std::runtime_error("cannot write " + summary);
      efx::write_summary_json(cfg, result.summary, out);
    }
    const auto& s = result.summary;
    std::cerr << "trials: " << s.trials << "  solved: " << s.solved
              << "  steps mean: " << s.steps.mean << " +- " << s.steps.sd
              << "  median: " << s.steps.median << '\n';
    return s.solved == s.trials ? kExitOk : kExitNotEfx;
  }

  int code = kExitOk;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EFX allocations by simulated annealing"};
  app.require_subcommand(1);
  GenCmd gen;
  SolveCmd solve;
  VerifyCmd verify;
  BruteCmd brute;
  BenchCmd bench;
  gen.add_to(app);
  solve.add_to(app);
  verify.add_to(app);
  brute.add_to(app);
  bench.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const efx::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (int code : {gen.code, solve.code, verify.code, brute.code, bench.code}) {
    if (code != kExitOk) return code;
  }
  return kExitOk;
}
