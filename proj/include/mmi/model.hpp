#pragma once

// Core domain types for extended matching problems: agents, instances,
// populations, matchings and matching schemes, plus validation and
// population restriction.

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmi {

using Rational = boost::rational<long long>;

enum class Side { Man, Woman };
enum class ProposingSide { Men, Women };

inline Side opposite(Side s) { return s == Side::Man ? Side::Woman : Side::Man; }

/// One agent, identified by gender, community (1..kappa) and
/// within-community index (1..n).
struct AgentId {
  Side side{};
  int community = 0;
  int index = 0;

  // Canonical order: side, then community, then index.
  auto operator<=>(const AgentId&) const = default;
};

inline AgentId man_id(int community, int index) {
  return AgentId{Side::Man, community, index};
}
inline AgentId woman_id(int community, int index) {
  return AgentId{Side::Woman, community, index};
}

/// A society of kappa communities, each with n men and n women, together
/// with complete strict preferences over the whole opposite side.
///
/// Agents are stored densely: agent (community c, index i) lives at slot
/// (c-1)*n + (i-1) of its gender's preference table, and preference lists
/// hold dense slots of the opposite gender, most preferred first.
struct Instance {
  int kappa = 0;
  int n = 0;
  std::vector<std::vector<int>> men_prefs;
  std::vector<std::vector<int>> women_prefs;

  int side_size() const { return kappa * n; }

  int slot(const AgentId& a) const { return (a.community - 1) * n + (a.index - 1); }

  AgentId agent(Side side, int slot) const {
    return AgentId{side, slot / n + 1, slot % n + 1};
  }

  bool in_range(const AgentId& a) const {
    return a.community >= 1 && a.community <= kappa && a.index >= 1 && a.index <= n;
  }

  const std::vector<int>& prefs(const AgentId& a) const {
    return a.side == Side::Man ? men_prefs[slot(a)] : women_prefs[slot(a)];
  }

  bool operator==(const Instance&) const = default;
};

/// A nonempty set of communities of some society.
struct Population {
  std::set<int> communities;

  auto operator<=>(const Population&) const = default;
};

inline Population all_communities(const Instance& inst) {
  Population p;
  for (int c = 1; c <= inst.kappa; ++c) p.communities.insert(c);
  return p;
}

/// An involution pairing men and women. Self-matches are representable
/// (an absent key means the agent is matched to itself) although every
/// stable matching in this balanced complete-list setting is perfect.
struct Matching {
  std::map<AgentId, AgentId> pairs;

  bool matched(const AgentId& a) const { return pairs.contains(a); }

  AgentId partner_of(const AgentId& a) const {
    auto it = pairs.find(a);
    return it == pairs.end() ? a : it->second;
  }

  void pair(const AgentId& a, const AgentId& b) {
    pairs[a] = b;
    pairs[b] = a;
  }

  auto operator<=>(const Matching&) const = default;
};

/// The sigma(.,C_i) / sigma(.,S) pair of interest: one matching per
/// community plus one matching over the whole society.
struct MatchingScheme {
  std::vector<Matching> per_community;  // index c-1 holds sigma(., C_c)
  Matching society;

  const Matching& community(int c) const { return per_community[c - 1]; }
};

/// A matching problem over a subset of the society's agents. Preference
/// lists hold positions into the local men/women vectors; the vectors keep
/// the original society ids so results map back.
struct Problem {
  std::vector<AgentId> men;
  std::vector<AgentId> women;
  std::vector<std::vector<int>> men_prefs;
  std::vector<std::vector<int>> women_prefs;

  int side_size() const { return static_cast<int>(men.size()); }
};

struct Violation {
  std::string kind;  // "size", "duplicate", "missing agent", "out of range"
  std::string detail;
};

/// Structural check of an instance: every preference list must be a
/// complete strict permutation of the opposite side. Violations are data,
/// not failures; an empty result means the instance is valid.
inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  const int N = inst.side_size();
  if (inst.kappa < 1 || inst.n < 1) {
    out.push_back({"size", "kappa and n must be at least 1"});
    return out;
  }
  auto check_side = [&](const std::vector<std::vector<int>>& prefs, Side owner) {
    if (static_cast<int>(prefs.size()) != N) {
      out.push_back({"size", std::string(owner == Side::Man ? "men" : "women") +
                                 " table has wrong number of agents"});
      return;
    }
    for (int s = 0; s < N; ++s) {
      const AgentId who = inst.agent(owner, s);
      const std::string tag = (owner == Side::Man ? "M" : "W") +
                              std::to_string(who.community) + "." +
                              std::to_string(who.index);
      std::vector<char> seen(N, 0);
      for (int v : prefs[s]) {
        if (v < 0 || v >= N) {
          out.push_back({"out of range", "list of " + tag + " references slot " +
                                             std::to_string(v)});
        } else if (seen[v]) {
          out.push_back({"duplicate", "list of " + tag + " repeats an agent"});
        } else {
          seen[v] = 1;
        }
      }
      for (int v = 0; v < N; ++v) {
        if (!seen[v]) {
          const AgentId missing = inst.agent(opposite(owner), v);
          out.push_back({"missing agent",
                         "list of " + tag + " omits community " +
                             std::to_string(missing.community) + " index " +
                             std::to_string(missing.index)});
        }
      }
    }
  };
  check_side(inst.men_prefs, Side::Man);
  check_side(inst.women_prefs, Side::Woman);
  return out;
}

inline void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (!v.empty()) {
    throw std::invalid_argument("invalid instance: " + v.front().kind + ": " +
                                v.front().detail);
  }
}

/// Restriction of an instance to a population: the same agents and
/// preference lists with out-of-population agents deleted, relative order
/// preserved.
inline Problem restrict_to(const Instance& inst, const Population& pop) {
  if (pop.communities.empty()) throw std::invalid_argument("empty population");
  for (int c : pop.communities) {
    if (c < 1 || c > inst.kappa) {
      throw std::invalid_argument("population references community " +
                                  std::to_string(c) + " outside 1..kappa");
    }
  }
  Problem p;
  std::vector<int> local_of(inst.side_size(), -1);
  for (int c : pop.communities) {
    for (int i = 1; i <= inst.n; ++i) {
      local_of[inst.slot(man_id(c, i))] = static_cast<int>(p.men.size());
      p.men.push_back(man_id(c, i));
      p.women.push_back(woman_id(c, i));
    }
  }
  auto filter = [&](const std::vector<int>& list) {
    std::vector<int> out;
    out.reserve(p.men.size());
    for (int v : list) {
      if (local_of[v] >= 0) out.push_back(local_of[v]);
    }
    return out;
  };
  for (const AgentId& m : p.men) p.men_prefs.push_back(filter(inst.men_prefs[inst.slot(m)]));
  for (const AgentId& w : p.women) p.women_prefs.push_back(filter(inst.women_prefs[inst.slot(w)]));
  return p;
}

inline Problem society_problem(const Instance& inst) {
  return restrict_to(inst, all_communities(inst));
}

}  // namespace mmi
