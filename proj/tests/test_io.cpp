#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "mmi/generators.hpp"
#include "mmi/io.hpp"
#include "mmi/stability.hpp"

using namespace mmi;

TEST_CASE("canonical ids round-trip") {
  CHECK(canonical_id(man_id(1, 2)) == "M1.2");
  CHECK(canonical_id(woman_id(12, 3)) == "W12.3");
  CHECK(parse_canonical_id("M1.2") == man_id(1, 2));
  CHECK(parse_canonical_id("W12.3") == woman_id(12, 3));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const AgentId a{rng() % 2 ? Side::Man : Side::Woman,
                    static_cast<int>(rng() % 50 + 1), static_cast<int>(rng() % 50 + 1)};
    CHECK(parse_canonical_id(canonical_id(a)) == a);
  }
  CHECK_THROWS_AS(parse_canonical_id("X1.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_canonical_id("M1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_canonical_id("M0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_canonical_id("M1.2x"), std::invalid_argument);
}

TEST_CASE("rationals serialize in lowest terms with the sign on the numerator") {
  CHECK(rational_to_string(Rational(-3, 16)) == "-3/16");
  CHECK(rational_to_string(Rational(6, -32)) == "-3/16");
  CHECK(rational_to_string(Rational(0)) == "0/1");
  CHECK(rational_to_string(Rational(4, 2)) == "2/1");
  CHECK(parse_rational("-3/16") == Rational(-3, 16));
  CHECK(parse_rational("6/-32") == Rational(-3, 16));  // re-reduced on parse
  CHECK(parse_rational(rational_to_string(parse_rational("10/40"))) == Rational(1, 4));
  CHECK_THROWS_AS(parse_rational("3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("instance documents round-trip bit-exactly") {
  for (const Instance& inst :
       {proposition1_instance(), worst_case_instance(4, 2), random_instance(2, 4, 7)}) {
    const json doc = instance_to_json(inst);
    const Instance back = instance_from_json(doc);
    CHECK(back == inst);
    CHECK(instance_to_json(back).dump() == doc.dump());
  }
}

TEST_CASE("the 2x2x2 document shows the displayed list order") {
  const json doc = instance_to_json(proposition1_instance());
  const auto& list = doc["men"]["M1.2"];
  REQUIRE(list.size() == 4);
  CHECK(list[0] == "W1.1");
  CHECK(list[1] == "W2.1");
  CHECK(list[2] == "W1.2");
}

TEST_CASE("instance documents are parsed strictly") {
  json doc = instance_to_json(proposition1_instance());

  SECTION("unknown fields are rejected") {
    doc["extra"] = 1;
    CHECK_THROWS_AS(instance_from_json(doc), std::invalid_argument);
  }
  SECTION("wrong format version is rejected") {
    doc["format_version"] = 2;
    CHECK_THROWS_AS(instance_from_json(doc), std::invalid_argument);
  }
  SECTION("short lists are rejected") {
    doc["men"]["M1.2"] = json::array({"W1.1", "W2.1", "W1.2"});
    CHECK_THROWS_WITH(instance_from_json(doc),
                      Catch::Matchers::ContainsSubstring("missing agent"));
  }
  SECTION("out-of-range ids are rejected") {
    doc["men"]["M1.2"][0] = "W3.1";
    CHECK_THROWS_AS(instance_from_json(doc), std::invalid_argument);
  }
  SECTION("missing agents are rejected") {
    doc["men"].erase("M1.2");
    CHECK_THROWS_AS(instance_from_json(doc), std::invalid_argument);
  }
}

TEST_CASE("instance files round-trip through disk") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "mmi_io_test_instance.json";
  const Instance inst = random_instance(2, 4, 7);
  write_instance(inst, path.string());
  CHECK(read_instance(path.string()) == inst);
  fs::remove(path);
}

TEST_CASE("matching documents round-trip and reject double matches") {
  const Matching mu = deferred_acceptance(proposition1_instance(), ProposingSide::Men);
  const json doc = matching_to_json(mu);
  CHECK(matching_from_json(doc) == mu);
  json broken = doc;
  broken["pairs"]["M2.2"] = broken["pairs"]["M1.1"];
  CHECK_THROWS_AS(matching_from_json(broken), std::invalid_argument);
}

TEST_CASE("gains report document carries exact totals") {
  const Instance prop1 = proposition1_instance();
  const MatchingScheme scheme = stable_scheme(prop1, ProposingSide::Men);
  const GainsReport report = gains_report(prop1, scheme);
  const json doc = report_to_json(prop1, scheme, report, ProposingSide::Men);
  CHECK(doc["totals"]["Gamma_bar"] == "-3/16");
  CHECK(doc["totals"]["Gamma"] == "-3/2");
  CHECK(doc["totals"]["total_raw"] == -6);
  CHECK(doc["totals"]["bound_ok"] == true);
  bool found = false;
  for (const auto& row : doc["agents"]) {
    if (row["id"] == "M2.2") {
      found = true;
      CHECK(row["raw_gain"] == -3);
      CHECK(row["percentile_gain"] == "-3/4");
      CHECK(row["pre"] == "W2.1");
      CHECK(row["post"] == "W2.2");
    }
  }
  CHECK(found);
}

TEST_CASE("csv rows stay exact") {
  const Instance prop1 = proposition1_instance();
  const GainsReport report = gains_report(prop1, stable_scheme(prop1, ProposingSide::Men));
  CHECK(csv_header() ==
        "kappa,n,seed_or_family,Gamma_bar_num,Gamma_bar_den,gainers,losers,"
        "unchanged,bound_ok,formula_match");
  CHECK(csv_row(2, 2, "worst", report, "true") == "2,2,worst,-3,16,4,4,0,true,true");
}
