#include "grades/training.hpp"

#include <algorithm>
#include <cmath>

#include "grades/errors.hpp"

namespace grades {

namespace {

constexpr double kValueTieTol = 1e-9;

struct ProducerReplay {
  // For each firing, the position of the firing that last set each input
  // fact beforehand (-1 when the input still held its initial value).
  std::vector<int> producer_a;
  std::vector<int> producer_b;
  int target_pos = -1;
};

ProducerReplay replay_producers(const RuleFactNetwork& net,
                                const RunOutcome& outcome, FactId target) {
  const int fired_count = static_cast<int>(outcome.fired_rules.size());
  ProducerReplay replay;
  replay.producer_a.assign(fired_count, -1);
  replay.producer_b.assign(fired_count, -1);
  std::vector<int> last_producer(net.num_facts(), -1);
  for (int k = 0; k < fired_count; ++k) {
    const Rule& r = net.rules[outcome.fired_rules[k].rule_id];
    replay.producer_a[k] = last_producer[r.input_a];
    replay.producer_b[k] = last_producer[r.input_b];
    last_producer[r.output] = k;
    if (r.output == target) replay.target_pos = k;
  }
  return replay;
}

}  // namespace

const char* training_mode_label(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::PathSameFacts:
      return "path-same-facts";
    case TrainingMode::PathRandomFacts:
      return "path-random-facts";
    case TrainingMode::MultiPathSameFacts:
      return "multi-path-same-facts";
    case TrainingMode::MultiPathRandomFacts:
      return "multi-path-random-facts";
  }
  return "?";
}

double ContributionMap::share_of(std::int32_t rule_id) const {
  for (const auto& [id, share] : shares)
    if (id == rule_id) return share;
  return 0.0;
}

ContributionMap compute_contributions(const RuleFactNetwork& net,
                                      const RunOutcome& outcome, FactId target) {
  if (outcome.status != RunStatus::Completed)
    throw NoContributionError("run did not complete; no contributing rules");

  const ProducerReplay replay = replay_producers(net, outcome, target);
  const int fired_count = static_cast<int>(outcome.fired_rules.size());

  std::vector<double> raw(fired_count, 0.0);
  raw[replay.target_pos] = 1.0;
  for (int k = replay.target_pos; k >= 0; --k) {
    if (raw[k] == 0.0) continue;
    const Rule& r = net.rules[outcome.fired_rules[k].rule_id];
    if (replay.producer_a[k] >= 0)
      raw[replay.producer_a[k]] += raw[k] * r.weight_a;
    if (replay.producer_b[k] >= 0)
      raw[replay.producer_b[k]] += raw[k] * r.weight_b;
  }

  double total = 0.0;
  for (double c : raw) total += c;
  ContributionMap contributions;
  for (int k = 0; k < fired_count; ++k)
    if (raw[k] > 0.0)
      contributions.shares.emplace_back(outcome.fired_rules[k].rule_id,
                                        raw[k] / total);
  return contributions;
}

ContributionMap compute_chain_contributions(const RuleFactNetwork& net,
                                            const RunOutcome& outcome,
                                            FactId target) {
  if (outcome.status != RunStatus::Completed)
    throw NoContributionError("run did not complete; no contributing rules");

  const ProducerReplay replay = replay_producers(net, outcome, target);

  // Walk a single chain backward from the target's producer, at each step
  // following the input that was derived most recently. Producer positions
  // strictly decrease, so the walk terminates at an underived fact.
  ContributionMap contributions;
  double total = 0.0;
  double c = 1.0;
  int k = replay.target_pos;
  while (k >= 0 && c > 0.0) {
    contributions.shares.emplace_back(outcome.fired_rules[k].rule_id, c);
    total += c;
    const Rule& r = net.rules[outcome.fired_rules[k].rule_id];
    const int pa = replay.producer_a[k];
    const int pb = replay.producer_b[k];
    if (pa < 0 && pb < 0) break;
    if (pa > pb) {
      c *= r.weight_a;
      k = pa;
    } else {
      c *= r.weight_b;
      k = pb;
    }
  }
  for (auto& [rule_id, share] : contributions.shares) share /= total;
  return contributions;
}

int apply_update(RuleFactNetwork& net, const ContributionMap& contributions,
                 double error, double velocity, const RunOutcome& outcome) {
  if (error == 0.0 || velocity == 0.0) return 0;

  std::vector<const FiredRule*> fired_by_id(net.num_rules(), nullptr);
  for (const FiredRule& f : outcome.fired_rules) fired_by_id[f.rule_id] = &f;

  int updated = 0;
  for (const auto& [rule_id, share] : contributions.shares) {
    if (share <= 0.0) continue;
    const FiredRule* firing = fired_by_id[rule_id];
    const double va = firing->input_a_value;
    const double vb = firing->input_b_value;
    if (std::fabs(va - vb) <= kValueTieTol) continue;

    const double delta = velocity * std::fabs(error) * share;
    // Undershoot: push weight toward the higher-valued input; overshoot:
    // toward the lower-valued one.
    const bool toward_a = (va > vb) == (error > 0.0);
    Rule& r = net.rules[rule_id];
    r.weight_a += toward_a ? delta : -delta;
    r.weight_b += toward_a ? -delta : delta;
    r.weight_a = std::clamp(r.weight_a, 0.0, 1.0);
    r.weight_b = std::clamp(r.weight_b, 0.0, 1.0);
    const double sum = r.weight_a + r.weight_b;
    r.weight_a /= sum;
    r.weight_b /= sum;
    ++updated;
  }
  return updated;
}

std::vector<EpochReport> train(RuleFactNetwork& trainee,
                               const RuleFactNetwork& truth,
                               const QuerySpec& base_query,
                               const FactValueMap& base_values,
                               const TrainingConfig& config, Rng& rng) {
  if (trainee.num_facts() != truth.num_facts())
    throw DimensionMismatchError("trainee and truth fact counts differ");

  const int n = truth.num_facts();
  const bool multi_path = config.mode == TrainingMode::MultiPathSameFacts ||
                          config.mode == TrainingMode::MultiPathRandomFacts;
  const bool random_facts = config.mode == TrainingMode::PathRandomFacts ||
                            config.mode == TrainingMode::MultiPathRandomFacts;

  std::vector<EpochReport> reports;
  reports.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    QuerySpec query = base_query;
    if (multi_path) {
      query.start_fact = rng.uniform_int(n);
      query.target_fact = rng.uniform_int(n - 1);
      if (query.target_fact >= query.start_fact) ++query.target_fact;
    }
    const FactValueMap values =
        random_facts ? random_fact_values(truth, rng) : base_values;

    const RunOutcome truth_run = run_forward(truth, query, values);
    const RunOutcome trainee_run = run_forward(trainee, query, values);

    EpochReport report;
    report.epoch_index = epoch;
    report.truth_value = truth_run.target_value;
    report.trainee_value = trainee_run.target_value;
    report.error = truth_run.target_value - trainee_run.target_value;
    if (truth_run.status == RunStatus::Completed &&
        trainee_run.status == RunStatus::Completed) {
      // Supervision comes from the reference run: the chain of rules that
      // concluded the target there is the path held responsible for the
      // error, and the input values observed on that run pick the shift
      // direction. The trainee only ever exposes its target value.
      ContributionMap contributions =
          compute_chain_contributions(truth, truth_run, query.target_fact);
      // train() only requires matching fact counts, so chain rule ids may
      // exceed the trainee's rule range; such shares have no counterpart
      // to adjust and are dropped.
      std::erase_if(contributions.shares, [&](const auto& share) {
        return share.first >= trainee.num_rules();
      });
      report.updated_rules = apply_update(trainee, contributions, report.error,
                                          config.velocity, truth_run);
    }
    reports.push_back(report);
  }
  return reports;
}

}  // namespace grades
