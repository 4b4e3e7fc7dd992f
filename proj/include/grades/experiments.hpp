#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grades/network.hpp"
#include "grades/training.hpp"

namespace grades {

struct ExperimentSpec {
  int num_facts = 100;
  int num_rules = 100;
  NetworkCondition condition = NetworkCondition::base();
  TrainingConfig config;
  int trials = 1000;
  std::uint64_t base_seed = 1;
};

enum class TrialStatus { Evaluated, ExcludedNoCompletion, ExcludedImmediate };

const char* trial_status_label(TrialStatus status);

struct TrialRecord {
  int trial_index = 0;
  TrialStatus status = TrialStatus::Evaluated;
  double truth_value = 0.0;
  double trained_value = 0.0;
  double abs_error = 0.0;
  std::int64_t train_ns = 0;
  std::int64_t eval_ns = 0;
};

/// Aggregates over Evaluated trials only, matching one results-table row.
/// Bucket boundary 0.1: an abs_error of exactly 0.1 counts as high-error.
struct SummaryStats {
  bool degenerate = true;  // no evaluated trials; aggregates meaningless
  double avg_truth = 0.0;
  double avg_trained = 0.0;
  double avg_abs_error = 0.0;
  double median_abs_error = 0.0;
  std::optional<double> avg_error_above_0p1;
  std::optional<double> avg_error_below_0p1;
  double fraction_below_0p1 = 0.0;
  int evaluated_count = 0;
  int excluded_count = 0;
  double total_ms = 0.0;  // summed train+eval time of evaluated trials
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  SummaryStats summary;
};

/// One Monte-Carlo trial, fully determined by (spec, trial_index): generate
/// the truth network, derive the trainee, draw the query and fact values,
/// train, then evaluate both networks on the base query. The query's start
/// and target facts are drawn independently; start == target yields an
/// ExcludedImmediate trial.
TrialRecord run_trial(const ExperimentSpec& spec, int trial_index,
                      std::vector<EpochReport>* epoch_log = nullptr);

/// Runs all trials. `parallelism` threads pull trial indices; results are
/// identical to sequential execution apart from the duration columns.
ExperimentResult run_experiment(const ExperimentSpec& spec, int parallelism = 1);

SummaryStats summarize(const std::vector<TrialRecord>& records);

struct PresetSpec {
  std::string preset;
  ExperimentSpec spec;
};

/// The experiment grids behind the reported table groups. Known names:
/// network-types-11, network-types-100, epochs, base-vs-random-100ep,
/// fc-vs-nfc, augmented-100ep, error-100ep, velocity, sizes,
/// training-modes. Throws UnknownPresetError otherwise.
std::vector<PresetSpec> preset_suite(const std::string& name);

const std::vector<std::string>& preset_names();

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const std::string& preset,
                       const ExperimentSpec& spec, const SummaryStats& stats);

}  // namespace grades
