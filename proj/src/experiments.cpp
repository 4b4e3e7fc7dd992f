#include "grades/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "grades/errors.hpp"
#include "grades/inference.hpp"

namespace grades {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count();
}

std::string format_stat(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string format_stat(const std::optional<double>& v) {
  return v ? format_stat(*v) : std::string("nan");
}

}  // namespace

const char* trial_status_label(TrialStatus status) {
  switch (status) {
    case TrialStatus::Evaluated:
      return "evaluated";
    case TrialStatus::ExcludedNoCompletion:
      return "excluded-no-completion";
    case TrialStatus::ExcludedImmediate:
      return "excluded-immediate";
  }
  return "?";
}

TrialRecord run_trial(const ExperimentSpec& spec, int trial_index,
                      std::vector<EpochReport>* epoch_log) {
  Rng rng(mix_seed(spec.base_seed, static_cast<std::uint64_t>(trial_index)));

  const RuleFactNetwork truth =
      generate_random_network(spec.num_facts, spec.num_rules, rng);
  RuleFactNetwork trainee = derive_condition(truth, spec.condition, rng);

  // Start and target drawn independently; they may coincide, in which
  // case the run completes immediately and the trial is excluded.
  QuerySpec query;
  query.start_fact = rng.uniform_int(spec.num_facts);
  query.target_fact = rng.uniform_int(spec.num_facts);
  const FactValueMap base_values = random_fact_values(truth, rng);

  TrialRecord record;
  record.trial_index = trial_index;

  const auto train_start = Clock::now();
  const std::vector<EpochReport> reports =
      train(trainee, truth, query, base_values, spec.config, rng);
  record.train_ns = elapsed_ns(train_start, Clock::now());
  if (epoch_log) *epoch_log = reports;

  const bool random_facts = spec.config.mode == TrainingMode::PathRandomFacts ||
                            spec.config.mode == TrainingMode::MultiPathRandomFacts;
  const FactValueMap eval_values =
      random_facts ? random_fact_values(truth, rng) : base_values;

  const auto eval_start = Clock::now();
  const RunOutcome truth_run = run_forward(truth, query, eval_values);
  const RunOutcome trainee_run = run_forward(trainee, query, eval_values);
  record.eval_ns = elapsed_ns(eval_start, Clock::now());

  record.truth_value = truth_run.target_value;
  record.trained_value = trainee_run.target_value;
  if (truth_run.status == RunStatus::ImmediateCompletion) {
    record.status = TrialStatus::ExcludedImmediate;
  } else if (truth_run.status == RunStatus::DidNotComplete ||
             trainee_run.status == RunStatus::DidNotComplete) {
    record.status = TrialStatus::ExcludedNoCompletion;
  } else {
    record.status = TrialStatus::Evaluated;
    record.abs_error = std::fabs(record.truth_value - record.trained_value);
  }
  return record;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int parallelism) {
  ExperimentResult result;
  result.records.resize(spec.trials);

  const int workers = std::max(1, std::min(parallelism, spec.trials));
  if (workers == 1) {
    for (int i = 0; i < spec.trials; ++i)
      result.records[i] = run_trial(spec, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < spec.trials; i = next.fetch_add(1))
          result.records[i] = run_trial(spec, i);
      });
    for (std::thread& t : pool) t.join();
  }

  result.summary = summarize(result.records);
  return result;
}

SummaryStats summarize(const std::vector<TrialRecord>& records) {
  SummaryStats stats;
  std::vector<double> errors;
  double sum_truth = 0.0, sum_trained = 0.0;
  double sum_above = 0.0, sum_below = 0.0;
  int count_above = 0, count_below = 0;
  std::int64_t total_ns = 0;

  for (const TrialRecord& r : records) {
    if (r.status != TrialStatus::Evaluated) {
      ++stats.excluded_count;
      continue;
    }
    errors.push_back(r.abs_error);
    sum_truth += r.truth_value;
    sum_trained += r.trained_value;
    total_ns += r.train_ns + r.eval_ns;
    if (r.abs_error < 0.1) {
      sum_below += r.abs_error;
      ++count_below;
    } else {
      sum_above += r.abs_error;
      ++count_above;
    }
  }

  stats.evaluated_count = static_cast<int>(errors.size());
  stats.total_ms = static_cast<double>(total_ns) / 1e6;
  if (errors.empty()) return stats;  // degenerate

  stats.degenerate = false;
  stats.avg_truth = sum_truth / stats.evaluated_count;
  stats.avg_trained = sum_trained / stats.evaluated_count;
  stats.avg_abs_error = (sum_above + sum_below) / stats.evaluated_count;
  std::sort(errors.begin(), errors.end());
  const std::size_t mid = errors.size() / 2;
  stats.median_abs_error = errors.size() % 2 == 1
                               ? errors[mid]
                               : 0.5 * (errors[mid - 1] + errors[mid]);
  if (count_above > 0) stats.avg_error_above_0p1 = sum_above / count_above;
  if (count_below > 0) stats.avg_error_below_0p1 = sum_below / count_below;
  stats.fraction_below_0p1 =
      static_cast<double>(count_below) / stats.evaluated_count;
  return stats;
}

std::vector<PresetSpec> preset_suite(const std::string& name) {
  const std::vector<NetworkCondition> type_conditions = {
      NetworkCondition::base(),          NetworkCondition::fully_connected(),
      NetworkCondition::random(),        NetworkCondition::augmented(0.01),
      NetworkCondition::augmented(0.05), NetworkCondition::augmented(0.10),
      NetworkCondition::augmented(0.25), NetworkCondition::augmented(0.50),
      NetworkCondition::error_injected(0.10),
      NetworkCondition::error_injected(0.25),
      NetworkCondition::error_injected(0.50)};

  std::vector<PresetSpec> suite;
  auto add = [&](const ExperimentSpec& spec) { suite.push_back({name, spec}); };
  ExperimentSpec spec;  // 100/100, base, 100 epochs, velocity 0.1, path-same-facts

  if (name == "network-types-11") {
    spec.num_facts = spec.num_rules = 11;
    spec.config.epochs = 1;
    for (const NetworkCondition& c : type_conditions) {
      spec.condition = c;
      add(spec);
    }
  } else if (name == "network-types-100") {
    spec.config.epochs = 1;
    for (const NetworkCondition& c : type_conditions) {
      if (c.kind == ConditionKind::FullyConnected) continue;
      spec.condition = c;
      add(spec);
    }
  } else if (name == "epochs") {
    for (int epochs : {1, 10, 25, 50, 100, 250, 500, 1000}) {
      spec.config.epochs = epochs;
      add(spec);
    }
  } else if (name == "base-vs-random-100ep") {
    for (const auto& c : {NetworkCondition::base(), NetworkCondition::random()}) {
      spec.condition = c;
      add(spec);
    }
  } else if (name == "fc-vs-nfc") {
    for (int facts : {5, 7, 9, 10, 11}) {
      spec.num_facts = spec.num_rules = facts;
      for (const auto& c :
           {NetworkCondition::fully_connected(), NetworkCondition::base()}) {
        spec.condition = c;
        add(spec);
      }
    }
  } else if (name == "augmented-100ep") {
    for (double pct : {0.0, 0.01, 0.05, 0.10, 0.25, 0.50}) {
      spec.condition = pct == 0.0 ? NetworkCondition::base()
                                  : NetworkCondition::augmented(pct);
      add(spec);
    }
  } else if (name == "error-100ep") {
    for (double pct : {0.0, 0.10, 0.25, 0.50}) {
      spec.condition = pct == 0.0 ? NetworkCondition::base()
                                  : NetworkCondition::error_injected(pct);
      add(spec);
    }
  } else if (name == "velocity") {
    for (double v : {0.01, 0.05, 0.10, 0.15, 0.25, 0.50}) {
      spec.config.velocity = v;
      add(spec);
    }
  } else if (name == "sizes") {
    const std::pair<int, int> sizes[] = {{50, 50},   {100, 50},  {100, 100},
                                         {150, 100}, {150, 150}, {200, 150},
                                         {200, 200}, {250, 200}, {250, 250}};
    for (const auto& [facts, rules] : sizes) {
      spec.num_facts = facts;
      spec.num_rules = rules;
      add(spec);
    }
  } else if (name == "training-modes") {
    for (TrainingMode mode :
         {TrainingMode::PathSameFacts, TrainingMode::PathRandomFacts,
          TrainingMode::MultiPathSameFacts, TrainingMode::MultiPathRandomFacts}) {
      spec.config.mode = mode;
      add(spec);
    }
  } else {
    throw UnknownPresetError("unknown preset '" + name + "'");
  }
  return suite;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "network-types-11", "network-types-100",    "epochs",
      "base-vs-random-100ep", "fc-vs-nfc",        "augmented-100ep",
      "error-100ep",      "velocity",             "sizes",
      "training-modes"};
  return names;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,status,truth_value,trained_value,abs_error,train_ns,eval_ns\n";
  for (const TrialRecord& r : records) {
    out << r.trial_index << ',' << trial_status_label(r.status) << ','
        << format_stat(r.truth_value) << ',' << format_stat(r.trained_value)
        << ',' << format_stat(r.abs_error) << ',' << r.train_ns << ','
        << r.eval_ns << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "preset,condition,facts,rules,epochs,velocity,mode,avg_truth,"
         "avg_trained,avg_abs_err,median_abs_err,avg_above_0p1,avg_below_0p1,"
         "frac_below_0p1,evaluated,excluded,total_ms\n";
}

void write_summary_row(std::ostream& out, const std::string& preset,
                       const ExperimentSpec& spec, const SummaryStats& stats) {
  out << preset << ',' << spec.condition.label() << ',' << spec.num_facts << ','
      << spec.num_rules << ',' << spec.config.epochs << ','
      << format_stat(spec.config.velocity) << ','
      << training_mode_label(spec.config.mode) << ','
      << format_stat(stats.avg_truth) << ',' << format_stat(stats.avg_trained)
      << ',' << format_stat(stats.avg_abs_error) << ','
      << format_stat(stats.median_abs_error) << ','
      << format_stat(stats.avg_error_above_0p1) << ','
      << format_stat(stats.avg_error_below_0p1) << ','
      << format_stat(stats.fraction_below_0p1) << ',' << stats.evaluated_count
      << ',' << stats.excluded_count << ',' << format_stat(stats.total_ms)
      << '\n';
}

}  // namespace grades
