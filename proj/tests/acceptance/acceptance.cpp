// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "efx/annealer.hpp"
#include "efx/baselines.hpp"
#include "efx/descent.hpp"
#include "efx/experiment.hpp"
#include "efx/generators.hpp"
#include "efx/violations.hpp"
#include "oracle.hpp"

using namespace efx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs body(k) for k in [0, count) on all cores.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(hardware_workers(), count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) body(k);
    });
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// 1. Every solved anneal result is EFX.
Outcome solver_correctness() {
  constexpr std::size_t kInstances = 1000;
  constexpr std::uint64_t kStepCap = 5'000'000;
  std::vector<char> solved(kInstances, 0), verified(kInstances, 1);
  parallel_for(kInstances, [&](std::size_t k) {
    oracle::TestRng rng(0xACCE55 + k);
    const std::size_t n = 2 + rng.below(9);
    const std::size_t m = n + rng.below(19 * n + 1);
    GenSpec spec;
    spec.n = n;
    spec.m = m;
    spec.seed = 10'000 + k;
    switch (k % 5) {
      case 0: spec.kind = GenKind::uniform; break;
      case 1: spec.kind = GenKind::correlated; spec.rho = 0.0; break;
      case 2: spec.kind = GenKind::correlated; spec.rho = 0.5; break;
      case 3: spec.kind = GenKind::correlated; spec.rho = 0.9; break;
      default: spec.kind = GenKind::identical; break;
    }
    const Instance inst = generate(spec);
    AnnealParams p;
    p.seed = spec.seed;
    p.max_total_steps = kStepCap;
    const TrialResult r = anneal_solve(inst, p);
    solved[k] = r.solved;
    if (r.solved) {
      verified[k] = is_efx(inst, r.allocation) &&
                    oracle::naive_violations(inst, r.allocation) == 0;
    }
  });
  const auto n_solved = std::count(solved.begin(), solved.end(), 1);
  const auto bad = std::count(verified.begin(), verified.end(), 0);
  return {bad == 0, std::to_string(n_solved) + "/1000 solved within " +
                        std::to_string(kStepCap) + " steps, " + std::to_string(bad) +
                        " solved results failed is_efx"};
}

// 2. Incremental delta equals the full recount difference.
Outcome delta_exactness() {
  oracle::TestRng rng(2);
  std::size_t mismatches = 0;
  for (int k = 0; k < 10'000; ++k) {
    const std::size_t n = 2 + rng.below(7);
    const std::size_t m = 1 + rng.below(25);
    const Value max_value = k % 3 == 0 ? 3 : k % 3 == 1 ? 100 : 1'000'000;
    auto inst = rng.instance(n, m, max_value);
    auto a = rng.allocation(n, m);
    const auto u = build_utilities(inst, a);
    const auto g = static_cast<Good>(rng.below(m));
    auto t = static_cast<Agent>(rng.below(n - 1));
    if (t >= a.owner[g]) ++t;
    const Count d = delta_violations(inst, u, a, g, t);
    const auto before = oracle::naive_violations(inst, a);
    a.owner[g] = t;
    if (d != oracle::naive_violations(inst, a) - before) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 10000 pairs"};
}

// 3. Brute force and annealing agree on small instances.
Outcome oracle_agreement() {
  std::size_t no_efx = 0, anneal_failed = 0, not_efx = 0;
  std::string counterexamples;
  for (std::uint64_t k = 0; k < 200; ++k) {
    oracle::TestRng rng(3'000 + k);
    const std::size_t n = 2 + rng.below(2);
    const std::size_t m = 3 + rng.below(5);
    const double rho = k % 2 ? 0.0 : 0.9;
    const Instance inst = gen_correlated(n, m, rho, 3'000 + k);
    const auto bf = brute_force_efx(inst);
    if (!bf.allocation) {
      ++no_efx;
      counterexamples += " seed=" + std::to_string(3'000 + k);
      std::cerr << "!!! NO EFX ALLOCATION EXISTS for instance n=" << n << " m=" << m
                << " rho=" << rho << " seed=" << 3'000 + k << " !!!\n";
    } else if (!is_efx(inst, *bf.allocation)) {
      ++not_efx;
    }
    AnnealParams p;
    p.seed = k;
    p.max_total_steps = 1'000'000;
    const auto r = anneal_solve(inst, p);
    if (!r.solved) ++anneal_failed;
    else if (!is_efx(inst, r.allocation)) ++not_efx;
  }
  return {no_efx == 0 && anneal_failed == 0 && not_efx == 0,
          "200 instances: " + std::to_string(no_efx) + " without EFX allocation" +
              counterexamples + ", " + std::to_string(anneal_failed) +
              " unsolved by anneal, " + std::to_string(not_efx) + " outputs failed is_efx"};
}

// 4. Strict potential descent on identical valuations.
Outcome descent_suite() {
  std::size_t bad_steps = 0, not_efx = 0, total_moves = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    oracle::TestRng rng(4'000 + k);
    const std::size_t n = 2 + rng.below(14);
    const std::size_t m = n + rng.below(101 - n);
    const auto inst = gen_identical(n, m, 4'000 + k);
    Rng start_rng(4'000 + k, Stream::annealer);
    const Allocation start = init_random_allocation(start_rng, n, m);
    const auto trace = descent_solve(inst, start);
    Allocation a = start;
    Potential phi = potential_phi(inst, a);
    for (const auto& step : trace.moves) {
      const auto y = bundle_values(inst, a);
      const Wide d = delta_phi(y[step.move.to], y[step.move.from], inst.weight(step.move.good));
      a.owner[step.move.good] = step.move.to;
      const Potential next = potential_phi(inst, a);
      const Wide nn = static_cast<Wide>(n) * static_cast<Wide>(n);
      if (!(d < 0) || next.scaled - phi.scaled != nn * d || step.phi_before != phi ||
          step.phi_after != next) {
        ++bad_steps;
      }
      phi = next;
    }
    total_moves += trace.moves.size();
    if (a != trace.allocation || !is_efx(inst.lift(), trace.allocation)) ++not_efx;
  }
  return {bad_steps == 0 && not_efx == 0,
          std::to_string(total_moves) + " moves checked, " + std::to_string(bad_steps) +
              " bad steps, " + std::to_string(not_efx) + " non-EFX results"};
}

// 5. Mean step counts on uniform instances.
Outcome step_counts() {
  struct Cell {
    std::size_t n, m;
    double lo, hi;
  };
  const Cell cells[] = {{4, 40, 40, 400}, {4, 1000, 250, 2500}, {10, 500, 400, 3500}};
  Outcome out;
  for (const auto& c : cells) {
    ExperimentConfig cfg;
    cfg.gen.kind = GenKind::uniform;
    cfg.gen.n = c.n;
    cfg.gen.m = c.m;
    cfg.gen.seed = 50'000;
    cfg.trials = 100;
    cfg.workers = hardware_workers();
    const auto res = run_experiment(cfg);
    const auto& s = res.summary;
    const bool ok = s.solved == 100 && s.steps.mean >= c.lo && s.steps.mean <= c.hi;
    out.pass = out.pass && ok;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += "n=" + std::to_string(c.n) + " m=" + std::to_string(c.m) + ": mean " +
                  fmt(s.steps.mean) + " +/- " + fmt(s.steps.sd) + " in [" + fmt(c.lo) + ", " +
                  fmt(c.hi) + "], solved " + std::to_string(s.solved) + "/100";
  }
  return out;
}

// 6. Metropolis acceptance law.
Outcome acceptance_law() {
  Rng rng(6, Stream::sampler);
  constexpr int kDraws = 100'000;
  int yes = 0;
  for (int k = 0; k < kDraws; ++k) yes += accept(2, 5.0, rng);
  const double freq = static_cast<double>(yes) / kDraws;
  const double target = std::exp(-0.4);
  bool always = true;
  for (double t : {1e-4, 0.5, 5.0, 1e3}) {
    for (Count d : {Count{-1000}, Count{-3}, Count{-1}, Count{0}}) {
      for (int k = 0; k < 1000; ++k) always = always && accept(d, t, rng);
    }
  }
  return {std::abs(freq - target) <= 0.01 && always,
          "frequency " + fmt(freq) + " vs exp(-0.4) = " + fmt(target) +
              (always ? ", non-positive deltas always accepted"
                      : ", a non-positive delta was rejected")};
}

// 7. The m = n + 1 construction.
Outcome n_plus_one() {
  std::size_t failures = 0;
  for (std::uint64_t k = 0; k < 10'000; ++k) {
    const std::size_t n = 2 + k % 9;
    const Instance inst = gen_uniform(n, n + 1, 70'000 + k);
    try {
      const auto a = n_plus_one_pick(inst);
      if (!is_efx(inst, a) || oracle::naive_violations(inst, a) != 0) ++failures;
    } catch (const std::logic_error&) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " non-EFX results in 10000 instances"};
}

double correlation(std::span<const Value> a, std::span<const Value> b) {
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += static_cast<double>(a[k]);
    mb += static_cast<double>(b[k]);
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = static_cast<double>(a[k]) - ma, db = static_cast<double>(b[k]) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

// 8. Correlated generator endpoints.
Outcome generator_endpoints() {
  std::size_t unequal = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + k % 9, m = 1 + k % 50;
    const Instance inst = gen_correlated(n, m, 1.0, 80'000 + k);
    for (Agent i = 1; i < n; ++i) {
      if (!std::ranges::equal(inst.row(i), inst.row(0))) ++unequal;
    }
  }
  const Instance big = gen_correlated(10, 100'000, 0.0, 8);
  double sum = 0;
  bool in_range = true;
  for (Value v : big.values()) {
    sum += static_cast<double>(v);
    in_range = in_range && v >= 0 && v <= big.scale();
  }
  const double mean = sum / static_cast<double>(big.values().size()) /
                      static_cast<double>(big.scale());
  const Instance pair = gen_correlated(2, 100'000, 0.0, 9);
  const double r = correlation(pair.row(0), pair.row(1));
  return {unequal == 0 && in_range && std::abs(mean - 0.5) <= 0.002 && std::abs(r) <= 0.01,
          "rho=1: " + std::to_string(unequal) + " unequal rows in 1000 draws; rho=0: mean/scale " +
              fmt(mean) + ", row correlation " + fmt(r) +
              (in_range ? ", all values in [0, scale]" : ", values out of range")};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Byte-identical records across repeated and parallel runs.
Outcome determinism() {
  struct Config {
    GenKind kind;
    SolverKind solver;
    std::size_t n, m;
    double rho;
    bool warm;
  };
  const Config configs[] = {
      {GenKind::uniform, SolverKind::anneal, 6, 60, 0.0, false},
      {GenKind::correlated, SolverKind::anneal, 5, 30, 0.9, false},
      {GenKind::uniform, SolverKind::anneal, 8, 400, 0.0, true},
      {GenKind::identical, SolverKind::anneal, 4, 20, 0.0, false},
      {GenKind::identical, SolverKind::descent, 10, 80, 0.0, false},
      {GenKind::uniform, SolverKind::round_robin, 7, 30, 0.0, false},
      {GenKind::uniform, SolverKind::n_plus_one, 6, 7, 0.0, false},
      {GenKind::correlated, SolverKind::brute_force, 3, 6, 0.5, false},
  };
  const auto dir = std::filesystem::temp_directory_path() / "efx_acceptance_det";
  std::filesystem::create_directories(dir);
  std::size_t mismatched = 0;
  for (const auto& c : configs) {
    ExperimentConfig cfg;
    cfg.gen.kind = c.kind;
    cfg.gen.n = c.n;
    cfg.gen.m = c.m;
    cfg.gen.rho = c.rho;
    cfg.gen.seed = 90'000;
    cfg.solver = c.solver;
    cfg.warm_start = c.warm;
    cfg.trials = 24;
    std::vector<std::string> outputs;
    for (unsigned workers : {1u, 1u, 4u, hardware_workers()}) {
      cfg.workers = workers;
      cfg.output_path = dir / ("run" + std::to_string(outputs.size()) + ".jsonl");
      run_experiment(cfg);
      outputs.push_back(read_file(cfg.output_path));
    }
    if (outputs[0].empty() ||
        std::any_of(outputs.begin(), outputs.end(), [&](const std::string& s) { return s != outputs[0]; })) {
      ++mismatched;
    }
  }
  std::filesystem::remove_all(dir);
  return {mismatched == 0, std::to_string(std::size(configs)) +
                               " configs run serially twice and in parallel, " +
                               std::to_string(mismatched) + " with differing records"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"solver correctness", solver_correctness},
      {"incremental delta exactness", delta_exactness},
      {"oracle agreement", oracle_agreement},
      {"identical-valuation descent", descent_suite},
      {"uniform step counts", step_counts},
      {"acceptance law", acceptance_law},
      {"n+1 construction", n_plus_one},
      {"correlated generator endpoints", generator_endpoints},
      {"determinism", determinism},
  };
  std::set<std::size_t> only;
  for (int k = 1; k < argc; ++k) only.insert(std::stoul(argv[k]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!only.empty() && !only.contains(k + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << k + 1 << " ("
              << criteria[k].first << "): " << o.detail << " [" << fmt(secs) << " s]"
              << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
