#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mmi/generators.hpp"
#include "mmi/integration.hpp"
#include "mmi/stability.hpp"

using namespace mmi;

namespace {

// Scheme where nothing changes: the society matching is the union of the
// community matchings.
MatchingScheme zero_change_scheme(const Instance& inst) {
  MatchingScheme scheme = stable_scheme(inst, ProposingSide::Men);
  Matching unified;
  for (const auto& mu : scheme.per_community) {
    for (const auto& [a, b] : mu.pairs) unified.pairs[a] = b;
  }
  scheme.society = unified;
  return scheme;
}

}  // namespace

TEST_CASE("raw and percentile ranks") {
  const Instance prop1 = proposition1_instance();
  CHECK(raw_rank(prop1, man_id(2, 2), woman_id(2, 2)) == 4);
  CHECK(percentile_rank(prop1, man_id(2, 2), woman_id(2, 2)) == Rational(1));
  CHECK(raw_rank(prop1, man_id(1, 1), woman_id(2, 1)) == 1);  // top choice
  CHECK(raw_rank(prop1, woman_id(2, 2), man_id(1, 2)) == 3);
  CHECK_THROWS_AS(raw_rank(prop1, man_id(1, 1), man_id(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(raw_rank(prop1, man_id(1, 1), woman_id(3, 1)), std::invalid_argument);

  // In the doubled family the first loser man ranks his post-integration
  // partner fifth: his own winner woman plus three other winners come first.
  const Instance replica = worst_case_instance(2, 4);
  CHECK(raw_rank(replica, man_id(1, 3), woman_id(1, 3)) == 5);
  CHECK(percentile_rank(replica, man_id(1, 3), woman_id(1, 3)) == Rational(5, 8));
}

TEST_CASE("per-agent gains on the 2x2x2 example") {
  const Instance prop1 = proposition1_instance();
  const MatchingScheme scheme = stable_scheme(prop1, ProposingSide::Men);
  CHECK(agent_gain(prop1, scheme, man_id(1, 1)) == Rational(1, 4));
  CHECK(agent_raw_gain(prop1, scheme, man_id(1, 2)) == -2);
  CHECK(agent_gain(prop1, scheme, man_id(2, 2)) == Rational(-3, 4));
  CHECK(agent_raw_gain(prop1, scheme, man_id(2, 2)) == -3);
}

TEST_CASE("gain is undefined for unmatched agents") {
  const Instance prop1 = proposition1_instance();
  MatchingScheme scheme = stable_scheme(prop1, ProposingSide::Men);
  scheme.society.pairs.erase(man_id(1, 1));
  CHECK_THROWS_AS(agent_gain(prop1, scheme, man_id(1, 1)), std::invalid_argument);
}

TEST_CASE("totals on the 2x2x2 example") {
  const Instance prop1 = proposition1_instance();
  const MatchingScheme scheme = stable_scheme(prop1, ProposingSide::Men);
  CHECK(total_gains(prop1, scheme) == Rational(-3, 2));
  CHECK(average_gains(prop1, scheme) == Rational(-3, 16));

  const GainsReport report = gains_report(prop1, scheme);
  CHECK(report.total_raw == -6);
  CHECK(report.gamma == Rational(-3, 2));
  CHECK(report.gamma_bar == Rational(-3, 16));
  CHECK(report.gainers == 4);
  CHECK(report.losers == 4);
  CHECK(report.unchanged == 0);
  // The gainers are exactly the index-1 agents.
  for (Side side : {Side::Man, Side::Woman}) {
    for (int c = 1; c <= 2; ++c) {
      CHECK(report.per_agent.at(AgentId{side, c, 1}).raw_gain == 1);
      CHECK(report.per_agent.at(AgentId{side, c, 2}).raw_gain < 0);
    }
  }
  // Gender symmetry: men and women lose the same raw total.
  long long men_raw = 0;
  for (const auto& [a, o] : report.per_agent) {
    if (a.side == Side::Man) men_raw += o.raw_gain;
  }
  CHECK(men_raw == -3);
}

TEST_CASE("a zero-change scheme has zero gains") {
  const Instance prop1 = proposition1_instance();
  const MatchingScheme scheme = zero_change_scheme(prop1);
  CHECK(total_gains(prop1, scheme) == Rational(0));
  const GainsReport report = gains_report(prop1, scheme);
  CHECK(report.unchanged == 8);
  CHECK(report.gamma_bar == Rational(0));
}

TEST_CASE("closed-form bounds") {
  CHECK(trivial_lower_bound(2, 2) == Rational(-1, 4));
  CHECK(trivial_lower_bound(1, 1) == Rational(1, 2));
  CHECK(trivial_lower_bound(100, 100) == Rational(-1, 2) + Rational(1, 10000));
  CHECK(worst_case_value(2, 2) == Rational(-3, 16));
  CHECK(worst_case_value(2, 4) == Rational(-9, 32));
  CHECK(worst_case_value(4, 2) == Rational(-9, 32));
  CHECK(worst_case_value(2, 8) == Rational(-21, 64));
}

TEST_CASE("worst-case totals match the closed form") {
  const Instance inst = worst_case_instance(2, 4);
  const MatchingScheme scheme = stable_scheme(inst, ProposingSide::Men);
  CHECK(total_gains(inst, scheme) == Rational(-9, 2));  // 3/2 - (3/4) * 8
  CHECK(average_gains(inst, scheme) == Rational(-9, 32));
}

TEST_CASE("gain range and bound invariants on random stable schemes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(2, 4, rng());
    const MatchingScheme scheme = stable_scheme(inst, ProposingSide::Men);
    const GainsReport report = gains_report(inst, scheme);
    const int N = inst.side_size();
    const Rational limit(N - 1, N);
    for (const auto& [a, o] : report.per_agent) {
      CHECK(o.percentile_gain >= -limit);
      CHECK(o.percentile_gain <= limit);
    }
    CHECK(report.gamma_bar > Rational(-1));
    CHECK(report.gamma_bar < Rational(1));
    CHECK(report.gamma_bar >= trivial_lower_bound(inst.kappa, inst.n));
    CHECK(report.gainers >= report.losers);
    CHECK(report.gainers + report.losers + report.unchanged == 2 * N);
    CHECK(report.gamma * N == Rational(report.total_raw));
  }
}
