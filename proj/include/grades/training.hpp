#pragma once

#include <utility>
#include <vector>

#include "grades/inference.hpp"
#include "grades/network.hpp"
#include "grades/rng.hpp"

namespace grades {

enum class TrainingMode {
  PathSameFacts,
  PathRandomFacts,
  MultiPathSameFacts,
  MultiPathRandomFacts,
};

const char* training_mode_label(TrainingMode mode);

struct TrainingConfig {
  double velocity = 0.1;  // fraction of the error distributed per epoch, (0,1]
  int epochs = 100;
  TrainingMode mode = TrainingMode::PathSameFacts;
};

/// Per-rule share of influence on the target fact. Only rules that fired
/// and reach the target through fired rules appear; shares sum to 1.
struct ContributionMap {
  std::vector<std::pair<std::int32_t, double>> shares;  // (rule id, share)

  double share_of(std::int32_t rule_id) const;
};

struct EpochReport {
  int epoch_index = 0;
  double truth_value = 0.0;
  double trainee_value = 0.0;
  double error = 0.0;  // truth_value - trainee_value
  int updated_rules = 0;
};

/// Backward traversal over the fired rules: the last rule to set the
/// target gets raw contribution 1; a rule that last set an input of an
/// already-contributing rule R accrues c(R) times R's weighting for that
/// input. Raw contributions accumulate over paths and are normalized.
/// Throws NoContributionError unless outcome.status == Completed.
ContributionMap compute_contributions(const RuleFactNetwork& net,
                                      const RunOutcome& outcome, FactId target);

/// Single-path variant used by train(): follows one chain backward from
/// the target's producer, stepping through the most recently derived input
/// at each rule. Shares along the chain are normalized to sum 1.
ContributionMap compute_chain_contributions(const RuleFactNetwork& net,
                                            const RunOutcome& outcome,
                                            FactId target);

/// Shifts, for each contributing rule, delta = velocity * |error| * share
/// between its two weightings: toward the higher-valued input when the
/// trainee undershoots (error > 0), toward the lower-valued one otherwise.
/// Equal input values (within 1e-9) or zero error leave the rule alone.
/// Weights are clamped to [0,1] and renormalized to sum 1. Returns the
/// number of rules whose weights were shifted.
int apply_update(RuleFactNetwork& net, const ContributionMap& contributions,
                 double error, double velocity, const RunOutcome& outcome);

/// Runs `config.epochs` training epochs against the truth network,
/// persisting trainee weights across epochs. Path* modes reuse base_query;
/// MultiPath* modes draw a fresh (start != target) pair each epoch.
/// *SameFacts modes reuse base_values; *RandomFacts modes redraw values
/// each epoch. Each epoch runs both networks forward, takes the signed
/// error truth - trainee on the target, and corrects the trainee rules
/// matching the truth run's target chain (chain shares and fired input
/// values both come from the truth run; chain rule ids outside the
/// trainee's rule range are dropped). Epochs where either forward run
/// does not complete are recorded with updated_rules = 0 and skipped.
std::vector<EpochReport> train(RuleFactNetwork& trainee,
                               const RuleFactNetwork& truth,
                               const QuerySpec& base_query,
                               const FactValueMap& base_values,
                               const TrainingConfig& config, Rng& rng);

}  // namespace grades
