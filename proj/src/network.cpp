#include "grades/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "grades/errors.hpp"

namespace grades {

namespace {

constexpr double kWeightSumTol = 1e-9;

// Duplicate identity of a rule: (unordered input pair, output).
std::int64_t rule_key(int num_facts, FactId a, FactId b, FactId out) {
  const auto lo = static_cast<std::int64_t>(std::min(a, b));
  const auto hi = static_cast<std::int64_t>(std::max(a, b));
  return (lo * num_facts + hi) * num_facts + out;
}

std::vector<Fact> make_facts(int num_facts) {
  std::vector<Fact> facts(num_facts);
  for (int i = 0; i < num_facts; ++i) facts[i].id = i;
  return facts;
}

void randomize_weights(Rule& rule, Rng& rng) {
  rule.weight_a = rng.uniform();
  rule.weight_b = 1.0 - rule.weight_a;
}

// Draws one non-duplicate rule structure. Rejection sampling with an
// enumeration fallback so near-saturated networks still terminate.
Rule draw_rule(int num_facts, const std::unordered_set<std::int64_t>& taken,
               Rng& rng) {
  const int max_attempts = 64 * num_facts + 256;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const FactId a = rng.uniform_int(num_facts);
    FactId b = rng.uniform_int(num_facts - 1);
    if (b >= a) ++b;
    FactId out = rng.uniform_int(num_facts - 2);
    if (out >= std::min(a, b)) ++out;
    if (out >= std::max(a, b)) ++out;
    if (taken.count(rule_key(num_facts, a, b, out)) == 0) {
      Rule rule;
      rule.input_a = a;
      rule.input_b = b;
      rule.output = out;
      return rule;
    }
  }
  // Enumerate the free slots and pick one uniformly.
  std::vector<Rule> free_slots;
  for (FactId a = 0; a < num_facts; ++a)
    for (FactId b = a + 1; b < num_facts; ++b)
      for (FactId out = 0; out < num_facts; ++out) {
        if (out == a || out == b) continue;
        if (taken.count(rule_key(num_facts, a, b, out)) != 0) continue;
        Rule rule;
        rule.input_a = a;
        rule.input_b = b;
        rule.output = out;
        free_slots.push_back(rule);
      }
  if (free_slots.empty())
    throw InfeasibleNetworkError("no free rule slots remain");
  return free_slots[rng.uniform_int(static_cast<int>(free_slots.size()))];
}

// Like draw_rule, but the output fact must come from the allowed set.
Rule draw_augmenting_rule(int num_facts, const std::vector<char>& produced,
                          const std::unordered_set<std::int64_t>& taken,
                          Rng& rng) {
  std::vector<FactId> allowed;
  for (FactId f = 0; f < num_facts; ++f)
    if (!produced[f]) allowed.push_back(f);
  if (allowed.empty())
    throw InfeasibleNetworkError("no unconcluded fact available for augmentation");
  const int max_attempts = 64 * num_facts + 256;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const FactId out = allowed[rng.uniform_int(static_cast<int>(allowed.size()))];
    FactId a = rng.uniform_int(num_facts - 1);
    if (a >= out) ++a;
    FactId b = rng.uniform_int(num_facts - 2);
    if (b >= std::min(a, out)) ++b;
    if (b >= std::max(a, out)) ++b;
    if (taken.count(rule_key(num_facts, a, b, out)) == 0) {
      Rule rule;
      rule.input_a = std::min(a, b);
      rule.input_b = std::max(a, b);
      rule.output = out;
      return rule;
    }
  }
  std::vector<Rule> free_slots;
  for (FactId out : allowed)
    for (FactId a = 0; a < num_facts; ++a)
      for (FactId b = a + 1; b < num_facts; ++b) {
        if (a == out || b == out) continue;
        if (taken.count(rule_key(num_facts, a, b, out)) != 0) continue;
        Rule rule;
        rule.input_a = a;
        rule.input_b = b;
        rule.output = out;
        free_slots.push_back(rule);
      }
  if (free_slots.empty())
    throw InfeasibleNetworkError("no free augmenting rule slot remains");
  return free_slots[rng.uniform_int(static_cast<int>(free_slots.size()))];
}

}  // namespace

void RuleFactNetwork::validate() const {
  const int n = num_facts();
  for (int i = 0; i < n; ++i) {
    if (facts[i].id != i)
      throw ValidationError("fact ids must be dense 0..n-1");
    if (facts[i].value < 0.0 || facts[i].value > 1.0)
      throw ValidationError("fact value outside [0,1]");
  }
  std::unordered_set<std::int64_t> seen;
  for (int i = 0; i < num_rules(); ++i) {
    const Rule& r = rules[i];
    if (r.id != i) throw ValidationError("rule ids must be dense 0..m-1");
    for (FactId f : {r.input_a, r.input_b, r.output})
      if (f < 0 || f >= n)
        throw ValidationError("rule " + std::to_string(r.id) +
                              " references unknown fact " + std::to_string(f));
    if (r.input_a == r.input_b)
      throw ValidationError("rule " + std::to_string(r.id) +
                            " has identical input facts");
    if (r.output == r.input_a || r.output == r.input_b)
      throw ValidationError("rule " + std::to_string(r.id) +
                            " outputs one of its input facts");
    if (r.weight_a < 0.0 || r.weight_a > 1.0 || r.weight_b < 0.0 ||
        r.weight_b > 1.0 ||
        std::fabs(r.weight_a + r.weight_b - 1.0) > kWeightSumTol)
      throw ValidationError("rule " + std::to_string(r.id) +
                            " weights must lie in [0,1] and sum to 1");
    if (!seen.insert(rule_key(n, r.input_a, r.input_b, r.output)).second)
      throw ValidationError("duplicate rule (same input pair and output) at id " +
                            std::to_string(r.id));
  }
}

std::string NetworkCondition::label() const {
  char buf[32];
  switch (kind) {
    case ConditionKind::Base:
      return "base";
    case ConditionKind::FullyConnected:
      return "fully-connected";
    case ConditionKind::Random:
      return "random";
    case ConditionKind::Augmented:
      std::snprintf(buf, sizeof(buf), "augmented-%g%%", pct * 100.0);
      return buf;
    case ConditionKind::ErrorInjected:
      std::snprintf(buf, sizeof(buf), "error-%g%%", pct * 100.0);
      return buf;
  }
  return "?";
}

std::int64_t rule_capacity(int num_facts) {
  const std::int64_t n = num_facts;
  return n * (n - 1) / 2 * (n - 2);
}

RuleFactNetwork generate_random_network(int num_facts, int num_rules, Rng& rng) {
  if (num_facts < 3)
    throw InfeasibleNetworkError("need at least 3 facts");
  if (num_rules < 1 || num_rules > rule_capacity(num_facts))
    throw InfeasibleNetworkError(
        std::to_string(num_rules) + " rules requested but only " +
        std::to_string(rule_capacity(num_facts)) + " distinct slots exist for " +
        std::to_string(num_facts) + " facts");

  RuleFactNetwork net;
  net.facts = make_facts(num_facts);
  std::unordered_set<std::int64_t> taken;
  net.rules.reserve(num_rules);
  for (int i = 0; i < num_rules; ++i) {
    Rule rule = draw_rule(num_facts, taken, rng);
    rule.id = i;
    randomize_weights(rule, rng);
    taken.insert(rule_key(num_facts, rule.input_a, rule.input_b, rule.output));
    net.rules.push_back(rule);
  }
  return net;
}

RuleFactNetwork build_fully_connected(int num_facts, Rng& rng) {
  if (num_facts < 3)
    throw InfeasibleNetworkError("need at least 3 facts");
  RuleFactNetwork net;
  net.facts = make_facts(num_facts);
  net.rules.reserve(rule_capacity(num_facts));
  std::int32_t id = 0;
  for (FactId a = 0; a < num_facts; ++a)
    for (FactId b = a + 1; b < num_facts; ++b)
      for (FactId out = 0; out < num_facts; ++out) {
        if (out == a || out == b) continue;
        Rule rule;
        rule.id = id++;
        rule.input_a = a;
        rule.input_b = b;
        rule.output = out;
        randomize_weights(rule, rng);
        net.rules.push_back(rule);
      }
  return net;
}

RuleFactNetwork derive_condition(const RuleFactNetwork& truth,
                                 const NetworkCondition& condition, Rng& rng) {
  const int n = truth.num_facts();
  const int m = truth.num_rules();

  switch (condition.kind) {
    case ConditionKind::FullyConnected:
      return build_fully_connected(n, rng);
    case ConditionKind::Random:
      return generate_random_network(n, m, rng);
    default:
      break;
  }

  RuleFactNetwork net;
  net.facts = make_facts(n);
  net.rules = truth.rules;
  std::unordered_set<std::int64_t> taken;
  for (const Rule& r : net.rules)
    taken.insert(rule_key(n, r.input_a, r.input_b, r.output));

  std::vector<int> corrupted;
  if (condition.kind == ConditionKind::ErrorInjected) {
    const int k = static_cast<int>(std::ceil(condition.pct * m));
    // Choose k victim positions uniformly without replacement. Corruption
    // keeps the rule structure (so the network stays reachable) and is
    // applied to the weightings after the reset below.
    std::vector<int> positions(m);
    for (int i = 0; i < m; ++i) positions[i] = i;
    for (int i = 0; i < k; ++i)
      std::swap(positions[i], positions[i + rng.uniform_int(m - i)]);
    corrupted.assign(positions.begin(), positions.begin() + k);
  } else if (condition.kind == ConditionKind::Augmented) {
    const int k = static_cast<int>(std::ceil(condition.pct * m));
    if (m + k > rule_capacity(n))
      throw InfeasibleNetworkError("augmentation exceeds available rule slots");
    // Added rules extend the knowledge base: they conclude facts that no
    // existing rule produces, rather than overriding existing conclusions.
    std::vector<char> produced(n, 0);
    for (const Rule& r : truth.rules) produced[r.output] = 1;
    for (int i = 0; i < k; ++i) {
      Rule fresh = draw_augmenting_rule(n, produced, taken, rng);
      fresh.id = m + i;
      taken.insert(rule_key(n, fresh.input_a, fresh.input_b, fresh.output));
      net.rules.push_back(fresh);
    }
  }

  // "Reset" weightings start from the symmetric midpoint rather than a
  // fresh uniform draw; newly generated Random/FC networks above keep
  // uniform weights as in initial generation.
  for (Rule& r : net.rules) {
    r.weight_a = 0.5;
    r.weight_b = 0.5;
  }
  // Corrupted rules carry a random weighting instead of the reset value.
  for (int pos : corrupted) randomize_weights(net.rules[pos], rng);
  return net;
}

void save_network(const RuleFactNetwork& net, std::ostream& sink) {
  sink << "facts " << net.num_facts() << "\n";
  sink << "rules " << net.num_rules() << "\n";
  char line[160];
  for (const Rule& r : net.rules) {
    std::snprintf(line, sizeof(line), "rule %d %d %d %d %.17g %.17g\n", r.id,
                  r.input_a, r.input_b, r.output, r.weight_a, r.weight_b);
    sink << line;
  }
}

RuleFactNetwork load_network(std::istream& source) {
  RuleFactNetwork net;
  std::string line;
  int line_no = 0;
  int num_facts = -1;
  int num_rules = -1;
  int rules_seen = 0;
  while (std::getline(source, line)) {
    ++line_no;
    std::istringstream in(line);
    std::string tag;
    if (!(in >> tag) || tag[0] == '#') continue;
    if (tag == "facts") {
      if (num_facts >= 0 || !(in >> num_facts) || num_facts < 0)
        throw ParseError(line_no, "bad facts header");
      net.facts.resize(num_facts);
      for (int i = 0; i < num_facts; ++i) net.facts[i].id = i;
    } else if (tag == "rules") {
      if (num_facts < 0 || num_rules >= 0 || !(in >> num_rules) || num_rules < 0)
        throw ParseError(line_no, "bad rules header");
    } else if (tag == "rule") {
      if (num_rules < 0) throw ParseError(line_no, "rule before headers");
      Rule r;
      if (!(in >> r.id >> r.input_a >> r.input_b >> r.output >> r.weight_a >>
            r.weight_b))
        throw ParseError(line_no, "malformed rule line");
      if (++rules_seen > num_rules)
        throw ParseError(line_no, "more rules than declared");
      net.rules.push_back(r);
    } else {
      throw ParseError(line_no, "unknown directive '" + tag + "'");
    }
  }
  if (num_facts < 0 || num_rules < 0)
    throw ParseError(line_no, "missing facts/rules header");
  if (rules_seen != num_rules)
    throw ParseError(line_no, "fewer rules than declared");
  net.validate();
  return net;
}

void save_network_file(const RuleFactNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_network(net, out);
}

RuleFactNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_network(in);
}

}  // namespace grades
