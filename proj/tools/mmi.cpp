// Command-line front end: instance generation, integration analysis,
// stability verification and parameter sweeps over the worst-case family
// or seeded random markets.

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "mmi/generators.hpp"
#include "mmi/integration.hpp"
#include "mmi/io.hpp"
#include "mmi/model.hpp"
#include "mmi/stability.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

mmi::ProposingSide parse_side(const std::string& side) {
  if (side == "men") return mmi::ProposingSide::Men;
  if (side == "women") return mmi::ProposingSide::Women;
  throw std::invalid_argument("side must be \"men\" or \"women\"");
}

int run_gen(const std::string& family, int kappa, int n, std::uint64_t seed,
            const std::string& out) {
  mmi::Instance inst;
  if (family == "prop1") {
    inst = mmi::proposition1_instance();
  } else if (family == "worst") {
    inst = mmi::worst_case_instance(kappa, n);
  } else if (family == "random") {
    inst = mmi::random_instance(kappa, n, seed);
  } else {
    throw std::invalid_argument("unknown family \"" + family + "\"");
  }
  mmi::write_instance(inst, out);
  std::cout << "kappa=" << inst.kappa << " n=" << inst.n;
  if (family == "worst") {
    std::cout << " predicted_Gamma_bar="
              << mmi::rational_to_string(mmi::worst_case_value(inst.kappa, inst.n));
  }
  std::cout << " -> " << out << "\n";
  return kExitOk;
}

int run_analyze(const std::string& instance_path, const std::string& side_name,
                const std::string& report_path, const std::string& csv_path) {
  const mmi::Instance inst = mmi::read_instance(instance_path);
  const mmi::ProposingSide side = parse_side(side_name);
  const mmi::MatchingScheme scheme = mmi::stable_scheme(inst, side);
  const mmi::GainsReport report = mmi::gains_report(inst, scheme);
  if (!mmi::is_unique_stable(mmi::society_problem(inst))) {
    std::cerr << "warning: multiple stable matchings exist; results depend on --side\n";
  }
  const mmi::Rational bound = mmi::trivial_lower_bound(inst.kappa, inst.n);
  std::cout << "Gamma_bar = " << mmi::rational_to_string(report.gamma_bar)
            << "  gainers " << report.gainers << "  losers " << report.losers
            << "  unchanged " << report.unchanged << "  bound_ok "
            << (report.gamma_bar >= bound ? "true" : "false") << "\n";
  if (!report_path.empty()) {
    mmi::write_json_file(mmi::report_to_json(inst, scheme, report, side), report_path);
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write \"" + csv_path + "\"");
    out << mmi::csv_header() << '\n'
        << mmi::csv_row(inst.kappa, inst.n, "instance", report, "") << '\n';
  }
  return kExitOk;
}

int run_verify(const std::string& instance_path, bool exhaustive,
               const std::string& matching_path) {
  const mmi::Instance inst = mmi::read_instance(instance_path);
  mmi::json failures = mmi::json::array();
  auto blocking_failure = [&](const std::string& where, const mmi::Matching& mu,
                              const mmi::Problem& problem) {
    const auto pairs = mmi::blocking_pairs(mu, problem);
    for (const auto& bp : pairs) {
      failures.push_back({{"check", "stability"},
                          {"population", where},
                          {"blocking_man", mmi::canonical_id(bp.man)},
                          {"blocking_woman", mmi::canonical_id(bp.woman)}});
    }
    return pairs.empty();
  };

  const mmi::Problem society = mmi::society_problem(inst);
  if (!matching_path.empty()) {
    const mmi::Matching supplied = mmi::matching_from_json(mmi::read_json_file(matching_path));
    blocking_failure("society (supplied matching)", supplied, society);
  } else {
    const mmi::MatchingScheme scheme = mmi::stable_scheme(inst, mmi::ProposingSide::Men);
    for (int c = 1; c <= inst.kappa; ++c) {
      const mmi::Problem community = mmi::restrict_to(inst, mmi::Population{{c}});
      blocking_failure("C" + std::to_string(c), scheme.community(c), community);
      if (!mmi::is_unique_stable(community)) {
        failures.push_back({{"check", "uniqueness"}, {"population", "C" + std::to_string(c)}});
      }
    }
    blocking_failure("S", scheme.society, society);
    if (!mmi::is_unique_stable(society)) {
      failures.push_back({{"check", "uniqueness"}, {"population", "S"}});
    }
    if (exhaustive) {
      if (society.side_size() > mmi::kEnumerationGuard) {
        throw std::invalid_argument(
            "instance too large for exhaustive enumeration; omit --exhaustive");
      } else {
        const auto all = mmi::enumerate_stable(society);
        mmi::json result;
        result["stable_set_size"] = all.size();
        std::cout << result.dump() << "\n";
        bool contains = false;
        for (const auto& mu : all) contains = contains || mu == scheme.society;
        if (!contains) {
          failures.push_back({{"check", "exhaustive"},
                              {"error", "deferred acceptance output not in stable set"}});
        }
        if (all.size() != 1 && mmi::is_unique_stable(society)) {
          failures.push_back({{"check", "exhaustive"},
                              {"error", "uniqueness criterion disagrees with enumeration"}});
        }
      }
    }
  }
  if (failures.empty()) {
    std::cout << R"({"verified":true})" << "\n";
    return kExitOk;
  }
  mmi::json doc;
  doc["verified"] = false;
  doc["failures"] = failures;
  std::cout << doc.dump(2) << "\n";
  return kExitVerifyFailed;
}

struct SweepItem {
  int kappa = 0;
  int n = 0;
  bool worst = false;
  std::uint64_t seed = 0;
};

int run_sweep(const std::string& spec_path, const std::string& csv_path, int jobs,
              std::ostream& log) {
  const mmi::json spec = mmi::read_json_file(spec_path);
  for (const auto& [key, value] : spec.items()) {
    if (key != "format_version" && key != "mode" && key != "kappa" && key != "n" &&
        key != "seeds" && key != "side") {
      throw std::invalid_argument("sweep spec has unknown field \"" + key + "\"");
    }
  }
  for (const char* k : {"format_version", "mode", "kappa", "n", "side"}) {
    if (!spec.contains(k)) {
      throw std::invalid_argument(std::string("sweep spec is missing field \"") + k + "\"");
    }
  }
  mmi::detail::require_version(spec, "sweep spec");
  const std::string mode = spec["mode"].get<std::string>();
  if (mode != "worst" && mode != "random") {
    throw std::invalid_argument("sweep spec: mode must be \"worst\" or \"random\"");
  }
  if (mode == "random" && !spec.contains("seeds")) {
    throw std::invalid_argument("sweep spec: random mode requires a seeds range");
  }
  const mmi::ProposingSide side = parse_side(spec["side"].get<std::string>());
  const auto kappas = spec["kappa"].get<std::vector<int>>();
  const auto ns = spec["n"].get<std::vector<int>>();
  if (kappas.empty() || ns.empty()) {
    throw std::invalid_argument("sweep spec: kappa and n lists must be nonempty");
  }

  std::vector<SweepItem> items;
  if (mode == "worst") {
    for (int kappa : kappas) {
      for (int n : ns) {
        if (kappa % 2 != 0 || n % 2 != 0) {
          throw std::invalid_argument("sweep spec: worst mode requires even kappa and n");
        }
        items.push_back({kappa, n, true, 0});
      }
    }
  } else {
    const auto& seeds = spec["seeds"];
    mmi::detail::require_keys(seeds, {"start", "count"}, "sweep spec seeds");
    const auto start = seeds["start"].get<std::uint64_t>();
    const auto count = seeds["count"].get<std::uint64_t>();
    if (count == 0) throw std::invalid_argument("sweep spec: seed count must be positive");
    for (int kappa : kappas) {
      for (int n : ns) {
        for (std::uint64_t s = start; s < start + count; ++s) {
          items.push_back({kappa, n, false, s});
        }
      }
    }
  }

  // Work items are independent; results are buffered and emitted in spec
  // order so the CSV is identical for any --jobs value.
  std::vector<std::string> rows(items.size());
  std::vector<mmi::Rational> gamma_bars(items.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (size_t i = cursor.fetch_add(1); i < items.size(); i = cursor.fetch_add(1)) {
      const SweepItem& item = items[i];
      const mmi::Instance inst = item.worst
                                     ? mmi::worst_case_instance(item.kappa, item.n)
                                     : mmi::random_instance(item.kappa, item.n, item.seed);
      const mmi::GainsReport report = mmi::gains_report(inst, mmi::stable_scheme(inst, side));
      gamma_bars[i] = report.gamma_bar;
      std::string label, formula_match;
      if (item.worst) {
        label = "worst";
        const bool match = report.gamma_bar == mmi::worst_case_value(item.kappa, item.n);
        formula_match = match ? "true" : "false";
      } else {
        label = std::to_string(item.seed);
      }
      rows[i] = mmi::csv_row(item.kappa, item.n, label, report, formula_match);
    }
  };
  if (jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write \"" + csv_path + "\"");
  out << mmi::csv_header() << '\n';
  for (const auto& row : rows) out << row << '\n';

  mmi::Rational mean(0);
  for (const auto& g : gamma_bars) mean += g;
  mean /= static_cast<long long>(gamma_bars.size());
  log << items.size() << " rows -> " << csv_path
      << "  mean_Gamma_bar = " << mmi::rational_to_string(mean) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided matching market integration toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string family, gen_out;
  int gen_kappa = 2, gen_n = 2;
  std::uint64_t gen_seed = 0;
  gen->add_option("--family", family, "worst|prop1|random")->required();
  gen->add_option("--kappa", gen_kappa, "number of communities");
  gen->add_option("--n", gen_n, "men (= women) per community");
  gen->add_option("--seed", gen_seed, "seed for --family random");
  gen->add_option("--out", gen_out, "output instance file")->required();

  auto* analyze = app.add_subcommand("analyze", "Solve and report gains from integration");
  std::string an_instance, an_side = "men", an_report, an_csv;
  analyze->add_option("instance", an_instance, "instance file")->required();
  analyze->add_option("--side", an_side, "proposing side: men|women");
  analyze->add_option("--report", an_report, "write JSON report here");
  analyze->add_option("--csv", an_csv, "write one-row CSV here");

  auto* verify = app.add_subcommand("verify", "Check stability and uniqueness");
  std::string ve_instance, ve_matching;
  bool ve_exhaustive = false;
  verify->add_option("instance", ve_instance, "instance file")->required();
  verify->add_flag("--exhaustive", ve_exhaustive, "cross-check against brute-force enumeration");
  verify->add_option("--matching", ve_matching, "check this matching file instead of solving");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid to CSV");
  std::string sw_spec, sw_csv;
  int sw_jobs = 1;
  sweep->add_option("--spec", sw_spec, "sweep spec JSON")->required();
  sweep->add_option("--csv", sw_csv, "output CSV")->required();
  sweep->add_option("--jobs", sw_jobs, "parallel workers");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen(family, gen_kappa, gen_n, gen_seed, gen_out);
    if (analyze->parsed()) return run_analyze(an_instance, an_side, an_report, an_csv);
    if (verify->parsed()) return run_verify(ve_instance, ve_exhaustive, ve_matching);
    if (sweep->parsed()) return run_sweep(sw_spec, sw_csv, sw_jobs, std::cout);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
