#pragma once

// Test-only helpers and independent oracles. Nothing here may call back
// into the code paths it is used to check.

#include <vector>

#include "grades/inference.hpp"
#include "grades/network.hpp"
#include "grades/rng.hpp"

namespace grades::testing {

inline Rule make_rule(std::int32_t id, FactId a, FactId b, FactId out,
                      double wa, double wb) {
  Rule r;
  r.id = id;
  r.input_a = a;
  r.input_b = b;
  r.output = out;
  r.weight_a = wa;
  r.weight_b = wb;
  return r;
}

inline RuleFactNetwork make_network(int num_facts, std::vector<Rule> rules) {
  RuleFactNetwork net;
  net.facts.resize(num_facts);
  for (int i = 0; i < num_facts; ++i) net.facts[i].id = i;
  net.rules = std::move(rules);
  return net;
}

/// Counts (unordered pair, third fact) triples by explicit enumeration.
inline std::int64_t enumerate_rule_slots(int n) {
  std::int64_t count = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int out = 0; out < n; ++out)
        if (out != a && out != b) ++count;
  return count;
}

/// Random acyclic network: every rule's inputs have smaller fact index
/// than its output and every fact has at most one producer, so rule ids
/// (assigned in ascending output order) are topologically sorted and the
/// evaluation order is unambiguous.
inline RuleFactNetwork random_dag_network(int num_facts, Rng& rng) {
  RuleFactNetwork net;
  net.facts.resize(num_facts);
  for (int i = 0; i < num_facts; ++i) net.facts[i].id = i;
  std::int32_t id = 0;
  for (FactId out = 2; out < num_facts; ++out) {
    if (rng.uniform() < 0.3) continue;  // leave some facts unproduced
    Rule r;
    r.id = id++;
    r.input_a = rng.uniform_int(out);
    r.input_b = rng.uniform_int(out - 1);
    if (r.input_b >= r.input_a) ++r.input_b;
    r.output = out;
    r.weight_a = rng.uniform();
    r.weight_b = 1.0 - r.weight_a;
    net.rules.push_back(r);
  }
  return net;
}

/// Evaluates a random_dag_network by processing facts in index order.
inline FactValueMap topological_evaluate(const RuleFactNetwork& net,
                                         const QuerySpec& query,
                                         FactValueMap values) {
  values[query.start_fact] = query.initial_value;
  for (FactId f = 0; f < net.num_facts(); ++f)
    for (const Rule& r : net.rules)
      if (r.output == f)
        values[f] = r.weight_a * values[r.input_a] + r.weight_b * values[r.input_b];
  return values;
}

/// Exhaustive path enumeration on a random_dag_network: a rule's raw
/// contribution is the sum, over every rule-path from it to the target's
/// producer, of the product of the intervening rules' input weightings.
/// Returns normalized shares indexed by rule id (0 when not contributing).
inline std::vector<double> path_enumeration_shares(const RuleFactNetwork& net,
                                                   FactId target) {
  std::vector<int> producer(net.num_facts(), -1);
  for (const Rule& r : net.rules) producer[r.output] = r.id;

  std::vector<double> raw(net.num_rules(), 0.0);
  if (producer[target] < 0) return raw;

  // Depth-first walk of every path, no memoization.
  auto visit = [&](auto&& self, std::int32_t rule_id, double value) -> void {
    raw[rule_id] += value;
    const Rule& r = net.rules[rule_id];
    if (producer[r.input_a] >= 0)
      self(self, producer[r.input_a], value * r.weight_a);
    if (producer[r.input_b] >= 0)
      self(self, producer[r.input_b], value * r.weight_b);
  };
  visit(visit, producer[target], 1.0);

  double total = 0.0;
  for (double c : raw) total += c;
  for (double& c : raw) c /= total;
  return raw;
}

}  // namespace grades::testing
