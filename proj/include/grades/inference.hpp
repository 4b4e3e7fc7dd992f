#pragma once

#include <vector>

#include "grades/network.hpp"
#include "grades/rng.hpp"

namespace grades {

/// One inference path: the start fact is initialized to 0.99 and the
/// target fact's final value is the run result.
struct QuerySpec {
  FactId start_fact = 0;
  FactId target_fact = 0;
  double initial_value = 0.99;
};

/// One value per FactId, indexed densely.
using FactValueMap = std::vector<double>;

enum class RunStatus { Completed, ImmediateCompletion, DidNotComplete };

/// A rule firing, with the input values it consumed at fire time.
struct FiredRule {
  std::int32_t rule_id;
  double input_a_value;
  double input_b_value;
};

struct RunOutcome {
  RunStatus status = RunStatus::DidNotComplete;
  double target_value = 0.0;
  std::vector<FiredRule> fired_rules;  // in firing order; each rule at most once
  FactValueMap final_values;
  int passes = 0;
};

/// Independent uniform draw on [0,1] for every fact.
FactValueMap random_fact_values(const RuleFactNetwork& net, Rng& rng);

/// Returns values with the query's start fact overwritten to its initial
/// value (0.99 by default). Throws UnknownFactError on out-of-range facts.
FactValueMap initialize_state(const RuleFactNetwork& net, const QuerySpec& query,
                              FactValueMap values);

/// Forward-chaining run. Rules are scanned in ascending id order in
/// repeated passes; each rule fires at most once per run, setting its
/// output to weight_a * value(input_a) + weight_b * value(input_b). The
/// run ends when a pass changes no fact value by more than 1e-9, or
/// immediately when start == target.
RunOutcome run_forward(const RuleFactNetwork& net, const QuerySpec& query,
                       FactValueMap values);

}  // namespace grades
