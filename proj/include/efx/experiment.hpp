#pragma once

// Multi-trial experiment runner and summary statistics.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efx/annealer.hpp"
#include "efx/generators.hpp"

namespace efx {

enum class SolverKind { anneal, descent, round_robin, n_plus_one, brute_force };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view name);

/// Environment variable that overrides ExperimentConfig::workers.
inline constexpr const char* kWorkersEnv = "EFX_WORKERS";

inline constexpr int kRecordFormatVersion = 1;

struct ExperimentConfig {
  GenSpec gen;  // gen.seed is the base seed; trial k uses gen.seed + k
  SolverKind solver = SolverKind::anneal;
  AnnealParams params;  // params.seed is ignored; set per trial
  std::uint64_t trials = 1;
  unsigned workers = 1;
  bool warm_start = false;
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;
  /// Per-trial records (JSON lines). Empty: not written.
  std::filesystem::path output_path;
  /// Adds elapsed_ms to each record. Off by default so records are
  /// byte-reproducible.
  bool record_timing = false;

  /// Throws std::invalid_argument on a bad pairing or count.
  void validate() const;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  bool solved = false;
  std::uint64_t steps = 0;
  std::uint64_t restarts = 0;
  Count violations = 0;
  double elapsed_ms = 0.0;
  Allocation allocation;  // kept in memory, not serialized
};

struct Stats {
  std::size_t count = 0;
  double mean = 0;
  double sd = 0;  // sample, n-1 denominator; 0 for a single value
  double median = 0;  // lower middle for even counts
  double min = 0;
  double max = 0;
};

/// Throws std::invalid_argument on empty input.
Stats summarize(std::span<const double> values);

struct SummaryStats {
  std::size_t trials = 0;
  std::size_t solved = 0;
  double success_rate = 0;
  Stats steps;            // over all trials
  Stats elapsed_seconds;  // over all trials
};

SummaryStats summarize(std::span<const TrialRecord> records);

struct ExperimentResult {
  std::vector<TrialRecord> records;  // ordered by trial index
  SummaryStats summary;
};

/// Solves one generated trial.
TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial);

/// Runs all trials on a worker pool. Records stream to output_path in trial
/// order as soon as each prefix is complete, so a killed run leaves a valid
/// partial file.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Worker count after applying the EFX_WORKERS override.
unsigned effective_workers(const ExperimentConfig& config);

std::string record_to_json(const TrialRecord& r, bool with_timing);
void write_csv(std::span<const TrialRecord> records, std::ostream& out);
void write_summary_json(const ExperimentConfig& config, const SummaryStats& s,
                        std::ostream& out);

}  // namespace efx
