#pragma once

// Deterministic serialization: canonical agent identifiers, rationals as
// "p/q" strings, JSON documents for instances, matchings and gains
// reports, and the flat CSV rows used by sweeps. All arrays are emitted in
// canonical agent order so semantically equal objects serialize
// identically.

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mmi/integration.hpp"
#include "mmi/model.hpp"

namespace mmi {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// "M<community>.<index>" or "W<community>.<index>"; e.g. "M1.2" is the
/// second man of community 1.
inline std::string canonical_id(const AgentId& a) {
  return (a.side == Side::Man ? "M" : "W") + std::to_string(a.community) + "." +
         std::to_string(a.index);
}

inline AgentId parse_canonical_id(const std::string& text) {
  auto fail = [&]() -> AgentId {
    throw std::invalid_argument("malformed agent id: \"" + text + "\"");
  };
  if (text.size() < 4 || (text[0] != 'M' && text[0] != 'W')) return fail();
  const auto dot = text.find('.');
  if (dot == std::string::npos || dot < 2 || dot + 1 >= text.size()) return fail();
  AgentId a;
  a.side = text[0] == 'M' ? Side::Man : Side::Woman;
  auto parse_int = [&](size_t from, size_t to) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + from, text.data() + to, value);
    if (ec != std::errc{} || ptr != text.data() + to || value < 1) fail();
    return value;
  };
  a.community = parse_int(1, dot);
  a.index = parse_int(dot + 1, text.size());
  return a;
}

/// Lowest terms with the sign on the numerator, e.g. "-3/16", "0/1".
inline std::string rational_to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("malformed rational: " + text);
  long long num = std::stoll(text.substr(0, slash));
  long long den = std::stoll(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rational(num, den);
}

namespace detail {

inline void require_keys(const json& doc, std::initializer_list<const char*> keys,
                         const char* what) {
  for (const char* k : keys) {
    if (!doc.contains(k)) {
      throw std::invalid_argument(std::string(what) + " is missing field \"" + k + "\"");
    }
  }
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) {
      throw std::invalid_argument(std::string(what) + " has unknown field \"" + key + "\"");
    }
  }
}

inline void require_version(const json& doc, const char* what) {
  if (!doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kFormatVersion) {
    throw std::invalid_argument(std::string(what) + " has unsupported format_version");
  }
}

}  // namespace detail

inline json instance_to_json(const Instance& inst) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kappa"] = inst.kappa;
  doc["n"] = inst.n;
  auto side_object = [&](Side owner, const std::vector<std::vector<int>>& prefs) {
    json obj = json::object();
    for (int s = 0; s < inst.side_size(); ++s) {
      json list = json::array();
      for (int v : prefs[s]) list.push_back(canonical_id(inst.agent(opposite(owner), v)));
      obj[canonical_id(inst.agent(owner, s))] = std::move(list);
    }
    return obj;
  };
  doc["men"] = side_object(Side::Man, inst.men_prefs);
  doc["women"] = side_object(Side::Woman, inst.women_prefs);
  return doc;
}

inline Instance instance_from_json(const json& doc) {
  detail::require_keys(doc, {"format_version", "kappa", "n", "men", "women"},
                       "instance document");
  detail::require_version(doc, "instance document");
  Instance inst;
  inst.kappa = doc["kappa"].get<int>();
  inst.n = doc["n"].get<int>();
  if (inst.kappa < 1 || inst.n < 1) {
    throw std::invalid_argument("instance document: kappa and n must be at least 1");
  }
  const int N = inst.side_size();
  auto read_side = [&](Side owner, const json& obj) {
    std::vector<std::vector<int>> prefs(N);
    if (!obj.is_object() || static_cast<int>(obj.size()) != N) {
      throw std::invalid_argument("instance document: wrong number of agents");
    }
    for (const auto& [key, list] : obj.items()) {
      const AgentId who = parse_canonical_id(key);
      if (who.side != owner || !inst.in_range(who)) {
        throw std::invalid_argument("instance document: unexpected agent \"" + key + "\"");
      }
      std::vector<int> slots;
      for (const auto& entry : list) {
        const AgentId target = parse_canonical_id(entry.get<std::string>());
        if (target.side != opposite(owner) || !inst.in_range(target)) {
          throw std::invalid_argument("instance document: id out of range in list of \"" +
                                      key + "\"");
        }
        slots.push_back(inst.slot(target));
      }
      prefs[inst.slot(who)] = std::move(slots);
    }
    return prefs;
  };
  inst.men_prefs = read_side(Side::Man, doc["men"]);
  inst.women_prefs = read_side(Side::Woman, doc["women"]);
  const auto violations = validate(inst);
  if (!violations.empty()) {
    throw std::invalid_argument("instance document invalid: " + violations.front().kind +
                                ": " + violations.front().detail);
  }
  return inst;
}

/// Pairs are listed once, keyed by the man.
inline json matching_to_json(const Matching& mu) {
  json pairs = json::object();
  for (const auto& [a, b] : mu.pairs) {
    if (a.side == Side::Man) pairs[canonical_id(a)] = canonical_id(b);
  }
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["pairs"] = std::move(pairs);
  return doc;
}

inline Matching matching_from_json(const json& doc) {
  detail::require_keys(doc, {"format_version", "pairs"}, "matching document");
  detail::require_version(doc, "matching document");
  Matching mu;
  for (const auto& [key, value] : doc["pairs"].items()) {
    const AgentId m = parse_canonical_id(key);
    const AgentId w = parse_canonical_id(value.get<std::string>());
    if (m.side != Side::Man || w.side != Side::Woman) {
      throw std::invalid_argument("matching document: pairs must map men to women");
    }
    if (mu.matched(m) || mu.matched(w)) {
      throw std::invalid_argument("matching document: agent matched twice");
    }
    mu.pair(m, w);
  }
  return mu;
}

inline json report_to_json(const Instance& inst, const MatchingScheme& scheme,
                           const GainsReport& report, ProposingSide side) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kappa"] = inst.kappa;
  doc["n"] = inst.n;
  doc["proposing_side"] = side == ProposingSide::Men ? "men" : "women";
  json agents = json::array();
  for (const auto& [a, o] : report.per_agent) {
    json row;
    row["id"] = canonical_id(a);
    row["pre"] = canonical_id(o.pre);
    row["post"] = canonical_id(o.post);
    row["raw_gain"] = o.raw_gain;
    row["percentile_gain"] = rational_to_string(o.percentile_gain);
    agents.push_back(std::move(row));
  }
  doc["agents"] = std::move(agents);
  json totals;
  totals["total_raw"] = report.total_raw;
  totals["Gamma"] = rational_to_string(report.gamma);
  totals["Gamma_bar"] = rational_to_string(report.gamma_bar);
  totals["gainers"] = report.gainers;
  totals["losers"] = report.losers;
  totals["unchanged"] = report.unchanged;
  const Rational bound = trivial_lower_bound(inst.kappa, inst.n);
  totals["trivial_lower_bound"] = rational_to_string(bound);
  totals["bound_ok"] = report.gamma_bar >= bound;
  doc["totals"] = std::move(totals);
  json communities = json::array();
  for (int c = 1; c <= inst.kappa; ++c) {
    json entry;
    entry["community"] = c;
    entry["pairs"] = matching_to_json(scheme.community(c))["pairs"];
    communities.push_back(std::move(entry));
  }
  doc["scheme"] = {{"communities", std::move(communities)},
                   {"society", {{"pairs", matching_to_json(scheme.society)["pairs"]}}}};
  return doc;
}

/// Flat CSV row set for sweeps. Gamma_bar is split into exact
/// numerator/denominator columns; formula_match is only meaningful for
/// worst-case rows and left empty otherwise.
inline std::string csv_header() {
  return "kappa,n,seed_or_family,Gamma_bar_num,Gamma_bar_den,gainers,losers,"
         "unchanged,bound_ok,formula_match";
}

inline std::string csv_row(int kappa, int n, const std::string& seed_or_family,
                           const GainsReport& report, const std::string& formula_match) {
  const bool bound_ok = report.gamma_bar >= trivial_lower_bound(kappa, n);
  std::ostringstream row;
  row << kappa << ',' << n << ',' << seed_or_family << ','
      << report.gamma_bar.numerator() << ',' << report.gamma_bar.denominator() << ','
      << report.gainers << ',' << report.losers << ',' << report.unchanged << ','
      << (bound_ok ? "true" : "false") << ',' << formula_match;
  return row.str();
}

inline void write_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << doc.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read \"" + path + "\"");
  return json::parse(in);
}

inline void write_instance(const Instance& inst, const std::string& path) {
  write_json_file(instance_to_json(inst), path);
}

inline Instance read_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

}  // namespace mmi
