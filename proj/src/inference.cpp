#include "grades/inference.hpp"

#include <cmath>

#include "grades/errors.hpp"

namespace grades {

namespace {
constexpr double kQuiescenceTol = 1e-9;
}

FactValueMap random_fact_values(const RuleFactNetwork& net, Rng& rng) {
  FactValueMap values(net.num_facts());
  for (double& v : values) v = rng.uniform();
  return values;
}

FactValueMap initialize_state(const RuleFactNetwork& net, const QuerySpec& query,
                              FactValueMap values) {
  const int n = net.num_facts();
  if (query.start_fact < 0 || query.start_fact >= n || query.target_fact < 0 ||
      query.target_fact >= n)
    throw UnknownFactError("query references a fact outside the network");
  values[query.start_fact] = query.initial_value;
  return values;
}

RunOutcome run_forward(const RuleFactNetwork& net, const QuerySpec& query,
                       FactValueMap values) {
  RunOutcome outcome;
  outcome.final_values = initialize_state(net, query, std::move(values));

  if (query.start_fact == query.target_fact) {
    outcome.status = RunStatus::ImmediateCompletion;
    outcome.target_value = query.initial_value;
    return outcome;
  }

  const int m = net.num_rules();
  std::vector<char> fired(m, 0);
  bool target_set = false;
  // Each rule fires at most once, so at most m+1 passes run.
  for (int pass = 0; pass <= m; ++pass) {
    ++outcome.passes;
    bool changed = false;
    for (const Rule& r : net.rules) {
      if (fired[r.id]) continue;
      const double va = outcome.final_values[r.input_a];
      const double vb = outcome.final_values[r.input_b];
      const double out = r.weight_a * va + r.weight_b * vb;
      if (std::fabs(out - outcome.final_values[r.output]) > kQuiescenceTol)
        changed = true;
      outcome.final_values[r.output] = out;
      fired[r.id] = 1;
      outcome.fired_rules.push_back({r.id, va, vb});
      if (r.output == query.target_fact) target_set = true;
    }
    if (!changed) break;
  }

  outcome.status = target_set ? RunStatus::Completed : RunStatus::DidNotComplete;
  outcome.target_value = outcome.final_values[query.target_fact];
  return outcome;
}

}  // namespace grades
