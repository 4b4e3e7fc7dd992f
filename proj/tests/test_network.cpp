#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "grades/errors.hpp"
#include "grades/network.hpp"
#include "test_support.hpp"

using namespace grades;
using grades::testing::enumerate_rule_slots;

namespace {

using StructKey = std::tuple<FactId, FactId, FactId>;

StructKey structure_of(const Rule& r) {
  return {std::min(r.input_a, r.input_b), std::max(r.input_a, r.input_b),
          r.output};
}

std::multiset<StructKey> structures(const RuleFactNetwork& net) {
  std::multiset<StructKey> keys;
  for (const Rule& r : net.rules) keys.insert(structure_of(r));
  return keys;
}

}  // namespace

TEST_CASE("rule capacity matches brute-force slot enumeration") {
  for (int n = 3; n <= 12; ++n) CHECK(rule_capacity(n) == enumerate_rule_slots(n));
}

TEST_CASE("generate_random_network produces a valid 11/11 network") {
  Rng rng(42);
  const RuleFactNetwork net = generate_random_network(11, 11, rng);
  CHECK(net.num_facts() == 11);
  CHECK(net.num_rules() == 11);
  CHECK_NOTHROW(net.validate());
}

TEST_CASE("3 facts saturate at exactly the 3 possible rules") {
  Rng rng(5);
  const RuleFactNetwork net = generate_random_network(3, 3, rng);
  const auto keys = structures(net);
  CHECK(keys == std::multiset<StructKey>{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}});
}

TEST_CASE("too many rules for the fact count is infeasible") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_random_network(3, 4, rng), InfeasibleNetworkError);
  CHECK_THROWS_AS(generate_random_network(2, 1, rng), InfeasibleNetworkError);
}

TEST_CASE("generation is deterministic under a fixed seed") {
  Rng a(123), b(123);
  const RuleFactNetwork na = generate_random_network(20, 40, a);
  const RuleFactNetwork nb = generate_random_network(20, 40, b);
  REQUIRE(na.num_rules() == nb.num_rules());
  for (int i = 0; i < na.num_rules(); ++i) {
    CHECK(structure_of(na.rules[i]) == structure_of(nb.rules[i]));
    CHECK(na.rules[i].weight_a == nb.rules[i].weight_a);
  }
}

TEST_CASE("fully connected rule counts") {
  Rng rng(9);
  CHECK(build_fully_connected(11, rng).num_rules() == 495);
  CHECK(build_fully_connected(3, rng).num_rules() == 3);
  CHECK(build_fully_connected(10, rng).num_rules() == 360);
  for (int n = 3; n <= 12; ++n) {
    const RuleFactNetwork fc = build_fully_connected(n, rng);
    CHECK(fc.num_rules() == enumerate_rule_slots(n));
    CHECK_NOTHROW(fc.validate());
  }
}

TEST_CASE("derive_condition leaves the truth network untouched") {
  Rng rng(7);
  const RuleFactNetwork truth = generate_random_network(30, 30, rng);
  const RuleFactNetwork snapshot = truth;
  for (const auto& cond :
       {NetworkCondition::base(), NetworkCondition::random(),
        NetworkCondition::augmented(0.25), NetworkCondition::error_injected(0.25),
        NetworkCondition::fully_connected()}) {
    Rng derive_rng(11);
    const RuleFactNetwork derived = derive_condition(truth, cond, derive_rng);
    CHECK_NOTHROW(derived.validate());
  }
  REQUIRE(truth.num_rules() == snapshot.num_rules());
  for (int i = 0; i < truth.num_rules(); ++i) {
    CHECK(structure_of(truth.rules[i]) == structure_of(snapshot.rules[i]));
    CHECK(truth.rules[i].weight_a == snapshot.rules[i].weight_a);
  }
}

TEST_CASE("base condition copies structure and resets weights to 0.5/0.5") {
  Rng rng(3);
  const RuleFactNetwork truth = generate_random_network(50, 50, rng);
  const RuleFactNetwork derived =
      derive_condition(truth, NetworkCondition::base(), rng);
  CHECK(structures(derived) == structures(truth));
  for (const Rule& r : derived.rules) {
    CHECK(r.weight_a == 0.5);
    CHECK(r.weight_b == 0.5);
  }
}

TEST_CASE("augmented condition appends ceil(pct * rules) extra rules") {
  Rng rng(17);
  const RuleFactNetwork truth = generate_random_network(100, 100, rng);
  const RuleFactNetwork derived =
      derive_condition(truth, NetworkCondition::augmented(0.10), rng);
  CHECK(derived.num_rules() == 110);
  CHECK_NOTHROW(derived.validate());
  const auto truth_keys = structures(truth);
  const auto derived_keys = structures(derived);
  for (const auto& key : truth_keys) CHECK(derived_keys.count(key) == 1);

  // 1% of 100 rules still adds one rule.
  CHECK(derive_condition(truth, NetworkCondition::augmented(0.01), rng)
            .num_rules() == 101);
}

TEST_CASE("error injection corrupts exactly ceil(pct * rules) weightings") {
  Rng rng(23);
  const RuleFactNetwork truth = generate_random_network(100, 100, rng);
  const RuleFactNetwork derived =
      derive_condition(truth, NetworkCondition::error_injected(0.25), rng);
  CHECK(derived.num_rules() == 100);
  CHECK_NOTHROW(derived.validate());
  CHECK(structures(derived) == structures(truth));
  int corrupted = 0;
  for (const Rule& r : derived.rules)
    if (r.weight_a != 0.5) ++corrupted;  // untouched rules hold the reset value
  CHECK(corrupted == 25);
}

TEST_CASE("augmentation on a saturated network is infeasible") {
  Rng rng(2);
  const RuleFactNetwork truth = generate_random_network(3, 3, rng);
  CHECK_THROWS_AS(derive_condition(truth, NetworkCondition::augmented(0.5), rng),
                  InfeasibleNetworkError);
}

TEST_CASE("save/load round-trips a network bit-exactly") {
  Rng rng(31);
  const RuleFactNetwork net = generate_random_network(25, 60, rng);
  std::stringstream buffer;
  save_network(net, buffer);
  const RuleFactNetwork loaded = load_network(buffer);
  REQUIRE(loaded.num_facts() == net.num_facts());
  REQUIRE(loaded.num_rules() == net.num_rules());
  for (int i = 0; i < net.num_rules(); ++i) {
    CHECK(loaded.rules[i].id == net.rules[i].id);
    CHECK(structure_of(loaded.rules[i]) == structure_of(net.rules[i]));
    CHECK(loaded.rules[i].weight_a == net.rules[i].weight_a);
    CHECK(loaded.rules[i].weight_b == net.rules[i].weight_b);
  }
}

TEST_CASE("load accepts comments and rejects bad files") {
  SUBCASE("comments and blank lines") {
    std::stringstream in("# generated\n\nfacts 3\nrules 1\nrule 0 0 1 2 0.5 0.5\n");
    CHECK(load_network(in).num_rules() == 1);
  }
  SUBCASE("unknown fact reference") {
    std::stringstream in("facts 10\nrules 1\nrule 0 0 1 99 0.5 0.5\n");
    CHECK_THROWS_AS(load_network(in), ValidationError);
  }
  SUBCASE("weights not summing to one") {
    std::stringstream in("facts 3\nrules 1\nrule 0 0 1 2 0.7 0.4\n");
    CHECK_THROWS_AS(load_network(in), ValidationError);
  }
  SUBCASE("malformed rule line reports its line number") {
    std::stringstream in("facts 3\nrules 1\nrule 0 0 1\n");
    try {
      load_network(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 3);
    }
  }
  SUBCASE("missing header") {
    std::stringstream in("rules 1\nrule 0 0 1 2 0.5 0.5\n");
    CHECK_THROWS_AS(load_network(in), ParseError);
  }
  SUBCASE("rule count mismatch") {
    std::stringstream in("facts 3\nrules 2\nrule 0 0 1 2 0.5 0.5\n");
    CHECK_THROWS_AS(load_network(in), ParseError);
  }
}
