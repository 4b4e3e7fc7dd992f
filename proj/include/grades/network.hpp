#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "grades/rng.hpp"

namespace grades {

using FactId = std::int32_t;

/// A node carrying a partial-membership value in [0, 1].
struct Fact {
  FactId id = 0;
  double value = 0.0;
};

/// Combines two input facts into one output fact via a convex weighting.
/// weight_a + weight_b = 1; the three facts are pairwise distinct.
struct Rule {
  std::int32_t id = 0;
  FactId input_a = 0;
  FactId input_b = 0;
  FactId output = 0;
  double weight_a = 0.5;
  double weight_b = 0.5;
};

struct RuleFactNetwork {
  std::vector<Fact> facts;
  std::vector<Rule> rules;

  int num_facts() const { return static_cast<int>(facts.size()); }
  int num_rules() const { return static_cast<int>(rules.size()); }

  /// Throws ValidationError on any structural invariant violation.
  void validate() const;
};

enum class ConditionKind { Base, FullyConnected, Random, Augmented, ErrorInjected };

/// How a network-under-training is derived from a truth network.
struct NetworkCondition {
  ConditionKind kind = ConditionKind::Base;
  double pct = 0.0;  // meaningful for Augmented / ErrorInjected only

  static NetworkCondition base() { return {ConditionKind::Base, 0.0}; }
  static NetworkCondition fully_connected() { return {ConditionKind::FullyConnected, 0.0}; }
  static NetworkCondition random() { return {ConditionKind::Random, 0.0}; }
  static NetworkCondition augmented(double p) { return {ConditionKind::Augmented, p}; }
  static NetworkCondition error_injected(double p) { return {ConditionKind::ErrorInjected, p}; }

  std::string label() const;
};

/// Number of distinct (unordered input pair, output) rule slots:
/// C(n,2) * (n - 2).
std::int64_t rule_capacity(int num_facts);

/// Random network: each rule draws two distinct input facts and a third
/// distinct output fact; duplicates (same unordered input pair + output)
/// are rejected and redrawn. weight_a uniform on [0,1], weight_b = 1 - weight_a.
/// Throws InfeasibleNetworkError when num_rules exceeds rule_capacity.
RuleFactNetwork generate_random_network(int num_facts, int num_rules, Rng& rng);

/// One rule for every unordered fact pair crossed with every third fact
/// as output; exactly rule_capacity(num_facts) rules, randomized weights.
RuleFactNetwork build_fully_connected(int num_facts, Rng& rng);

/// Derives the network-under-training from a truth network. The truth
/// network is never mutated; all derived rule weights are re-randomized.
RuleFactNetwork derive_condition(const RuleFactNetwork& truth,
                                 const NetworkCondition& condition, Rng& rng);

/// Text format: `facts <n>`, `rules <m>`, then one `rule <id> <in_a> <in_b>
/// <out> <w_a> <w_b>` per line with weights at 17 significant digits.
/// `#` starts a comment line.
void save_network(const RuleFactNetwork& net, std::ostream& sink);

/// Throws ParseError (with line number) on malformed input and
/// ValidationError when the parsed network violates an invariant.
RuleFactNetwork load_network(std::istream& source);

void save_network_file(const RuleFactNetwork& net, const std::string& path);
RuleFactNetwork load_network_file(const std::string& path);

}  // namespace grades
