#include "efx/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "efx/baselines.hpp"
#include "efx/descent.hpp"
#include "efx/violations.hpp"
#include "json.hpp"

namespace efx {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::anneal: return "anneal";
    case SolverKind::descent: return "descent";
    case SolverKind::round_robin: return "round_robin";
    case SolverKind::n_plus_one: return "n_plus_one";
    case SolverKind::brute_force: return "brute_force";
  }
  return "?";
}

SolverKind parse_solver_kind(std::string_view name) {
  for (auto k : {SolverKind::anneal, SolverKind::descent, SolverKind::round_robin,
                 SolverKind::n_plus_one, SolverKind::brute_force}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  gen.validate();
  params.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (solver == SolverKind::descent && gen.kind != GenKind::identical) {
    throw std::invalid_argument("solver 'descent' requires generator kind 'identical'");
  }
  if (solver == SolverKind::n_plus_one && gen.m != gen.n + 1) {
    throw std::invalid_argument("solver 'n_plus_one' requires m = n + 1");
  }
  if (warm_start && solver != SolverKind::anneal) {
    throw std::invalid_argument("warm start only applies to solver 'anneal'");
  }
}

unsigned effective_workers(const ExperimentConfig& config) {
  if (const char* env = std::getenv(kWorkersEnv); env && *env) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (*end != '\0' || w < 1) {
      throw std::invalid_argument(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return static_cast<unsigned>(w);
  }
  return config.workers;
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = config.gen.seed + trial;
  GenSpec spec = config.gen;
  spec.seed = rec.seed;

  const auto t0 = std::chrono::steady_clock::now();
  switch (config.solver) {
    case SolverKind::anneal: {
      const Instance inst = generate(spec);
      AnnealParams p = config.params;
      p.seed = rec.seed;
      TrialResult r = config.warm_start
                          ? anneal_solve(inst, p, welfare_max_allocation(inst))
                          : anneal_solve(inst, p);
      rec.solved = r.solved;
      rec.steps = r.steps;
      rec.restarts = r.restarts;
      rec.violations = r.violations;
      rec.allocation = std::move(r.allocation);
      break;
    }
    case SolverKind::descent: {
      const IdenticalInstance ident = gen_identical(spec.n, spec.m, spec.seed, spec.scale);
      Rng rng(rec.seed, Stream::annealer);
      DescentTrace trace =
          descent_solve(ident, init_random_allocation(rng, spec.n, spec.m));
      rec.steps = trace.moves.size();
      rec.violations = count_violations(ident.lift(), trace.allocation).total;
      rec.solved = rec.violations == 0;
      rec.allocation = std::move(trace.allocation);
      break;
    }
    case SolverKind::round_robin:
    case SolverKind::n_plus_one: {
      const Instance inst = generate(spec);
      rec.allocation = config.solver == SolverKind::round_robin ? round_robin(inst)
                                                                : n_plus_one_pick(inst);
      rec.violations = count_violations(inst, rec.allocation).total;
      rec.solved = rec.violations == 0;
      break;
    }
    case SolverKind::brute_force: {
      const Instance inst = generate(spec);
      BruteForceResult r = brute_force_efx(inst, config.brute_force_cap);
      rec.steps = r.examined;
      rec.solved = r.allocation.has_value();
      rec.allocation = r.allocation.value_or(Allocation{std::vector<Agent>(spec.m, 0)});
      rec.violations = count_violations(inst, rec.allocation).total;
      break;
    }
  }
  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::string record_to_json(const TrialRecord& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["format_version"] = kRecordFormatVersion;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["solved"] = r.solved;
  j["steps"] = r.steps;
  j["restarts"] = r.restarts;
  j["violations"] = r.violations;
  if (with_timing) j["elapsed_ms"] = std::round(r.elapsed_ms * 1000.0) / 1000.0;
  return j.dump();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(effective_workers(config), config.trials));

  std::ofstream out;
  if (!config.output_path.empty()) {
    out.open(config.output_path, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + config.output_path.string());
  }

  ExperimentResult result;
  result.records.resize(config.trials);
  std::vector<bool> done(config.trials, false);
  std::uint64_t next_trial = 0;
  std::uint64_t next_to_write = 0;
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      std::uint64_t k;
      {
        std::lock_guard lock(mu);
        if (next_trial >= config.trials || failure) return;
        k = next_trial++;
      }
      TrialRecord rec;
      try {
        rec = run_trial(config, k);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard lock(mu);
      result.records[k] = std::move(rec);
      done[k] = true;
      // Emit the completed prefix in trial order.
      while (next_to_write < config.trials && done[next_to_write]) {
        if (out.is_open()) {
          out << record_to_json(result.records[next_to_write], config.record_timing) << '\n';
          out.flush();
        }
        ++next_to_write;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  if (out.is_open() && !out) throw std::runtime_error("write failed: " + config.output_path.string());

  result.summary = summarize(result.records);
  return result;
}

Stats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  Stats s;
  s.count = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::ranges::sort(sorted);
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = sorted[(sorted.size() - 1) / 2];
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

SummaryStats summarize(std::span<const TrialRecord> records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize zero trials");
  SummaryStats s;
  s.trials = records.size();
  std::vector<double> steps, secs;
  for (const auto& r : records) {
    s.solved += r.solved;
    steps.push_back(static_cast<double>(r.steps));
    secs.push_back(r.elapsed_ms / 1000.0);
  }
  s.success_rate = static_cast<double>(s.solved) / static_cast<double>(s.trials);
  s.steps = summarize(steps);
  s.elapsed_seconds = summarize(secs);
  return s;
}

void write_csv(std::span<const TrialRecord> records, std::ostream& out) {
  out << "trial,seed,solved,steps,restarts,violations,elapsed_ms\n";
  for (const auto& r : records) {
    out << r.trial << ',' << r.seed << ',' << (r.solved ? 1 : 0) << ',' << r.steps << ','
        << r.restarts << ',' << r.violations << ',' << r.elapsed_ms << '\n';
  }
}

namespace {

nlohmann::ordered_json stats_json(const Stats& s) {
  nlohmann::ordered_json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["median"] = s.median;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

}  // namespace

void write_summary_json(const ExperimentConfig& config, const SummaryStats& s,
                        std::ostream& out) {
  nlohmann::ordered_json j;
  j["format_version"] = kRecordFormatVersion;
  j["kind"] = "efx-bench-summary";
  nlohmann::ordered_json cfg;
  cfg["generator"] = to_string(config.gen.kind);
  cfg["n"] = config.gen.n;
  cfg["m"] = config.gen.m;
  cfg["rho"] = config.gen.rho;
  cfg["scale"] = config.gen.scale;
  cfg["seed"] = config.gen.seed;
  cfg["solver"] = to_string(config.solver);
  cfg["trials"] = config.trials;
  cfg["warm_start"] = config.warm_start;
  cfg["t_initial"] = config.params.t_initial;
  cfg["t_min"] = config.params.t_min;
  cfg["cooling"] = config.params.cooling;
  cfg["steps_per_level"] = config.params.level_length(config.gen.n, config.gen.m);
  if (config.params.max_total_steps) cfg["max_steps"] = *config.params.max_total_steps;
  j["config"] = cfg;
  j["trials"] = s.trials;
  j["solved"] = s.solved;
  j["success_rate"] = s.success_rate;
  j["steps"] = stats_json(s.steps);
  j["elapsed_seconds"] = stats_json(s.elapsed_seconds);
  out << j.dump(2) << '\n';
}

}  // namespace efx
