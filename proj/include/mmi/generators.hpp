#pragma once

// Instance construction: the 2x2x2 negative example, the replica (clone)
// operator, the closed-form worst-case family for any even kappa and n,
// and seeded random markets.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "mmi/model.hpp"

namespace mmi {

enum class Role { Winner, Loser };

struct RoleTag {
  Role role = Role::Winner;
  int loser_order = -1;  // global 0-based position among same-gender losers

  auto operator<=>(const RoleTag&) const = default;
};

using RoleTags = std::map<AgentId, RoleTag>;

namespace detail {

// Appends every opposite-side slot not already listed, in canonical order.
inline void canonical_fill(std::vector<int>& list, int side_size) {
  std::vector<char> present(side_size, 0);
  for (int v : list) present[v] = 1;
  for (int v = 0; v < side_size; ++v) {
    if (!present[v]) list.push_back(v);
  }
}

// Communities are paired consecutively: (1,2), (3,4), ...
inline int partner_community(int c) { return (c % 2 == 1) ? c + 1 : c - 1; }

// Preference table for one gender of the worst-case family. The layout is
// identical for men and women, so one builder serves both sides.
//
// Within community c, indices 1..n/2 are winners and n/2+1..n are losers.
// Winner i lists the winner i of the paired community first (the partner
// gained through integration), then their own-community loser counterpart
// (the partner before integration), then everyone else canonically.
// Loser i lists their own-community winner counterpart first, then the
// remaining winners canonically, then all losers in canonical order; their
// post-integration partner (the loser of equal global order) lands at raw
// rank kappa*n/2 + 1 + order.
inline std::vector<std::vector<int>> family_prefs(int kappa, int n) {
  const int N = kappa * n;
  const int half = n / 2;
  auto slot = [n](int c, int i) { return (c - 1) * n + (i - 1); };
  std::vector<std::vector<int>> prefs(N);
  for (int c = 1; c <= kappa; ++c) {
    for (int i = 1; i <= half; ++i) {
      // winner
      auto& w = prefs[slot(c, i)];
      w.push_back(slot(partner_community(c), i));
      w.push_back(slot(c, half + i));
      canonical_fill(w, N);
      // loser
      auto& l = prefs[slot(c, half + i)];
      l.push_back(slot(c, i));
      for (int cc = 1; cc <= kappa; ++cc) {
        for (int ii = 1; ii <= half; ++ii) {
          if (cc != c || ii != i) l.push_back(slot(cc, ii));
        }
      }
      for (int cc = 1; cc <= kappa; ++cc) {
        for (int ii = half + 1; ii <= n; ++ii) l.push_back(slot(cc, ii));
      }
    }
  }
  return prefs;
}

}  // namespace detail

/// The canonical winner/loser tagging of a worst-case family member.
inline RoleTags family_tags(int kappa, int n) {
  RoleTags tags;
  const int half = n / 2;
  for (Side side : {Side::Man, Side::Woman}) {
    for (int c = 1; c <= kappa; ++c) {
      for (int i = 1; i <= n; ++i) {
        RoleTag tag;
        if (i <= half) {
          tag.role = Role::Winner;
        } else {
          tag.role = Role::Loser;
          tag.loser_order = (c - 1) * half + (i - half - 1);
        }
        tags.emplace(AgentId{side, c, i}, tag);
      }
    }
  }
  return tags;
}

/// The worst-case family member with kappa communities of n men and n
/// women each; both parameters must be even. Its unique stable scheme
/// attains average gains of exactly -3/8 + 3/(4 kappa n).
inline Instance worst_case_instance(int kappa, int n) {
  if (kappa < 2 || n < 2 || kappa % 2 != 0 || n % 2 != 0) {
    throw std::invalid_argument("construction requires even kappa and n");
  }
  Instance inst;
  inst.kappa = kappa;
  inst.n = n;
  inst.men_prefs = detail::family_prefs(kappa, n);
  inst.women_prefs = inst.men_prefs;  // the construction is gender symmetric
  return inst;
}

/// The explicit 2x2x2 negative example, unspecified tails filled
/// canonically. Its unique stable scheme has average gains -3/16.
inline Instance proposition1_instance() {
  Instance inst;
  inst.kappa = 2;
  inst.n = 2;
  const int N = 4;
  auto s = [](int c, int i) { return (c - 1) * 2 + (i - 1); };
  // Displayed lists; m_i^c is slot s(c,i) and the entries name women slots.
  inst.men_prefs = {
      {s(2, 1), s(1, 2)},                  // m_1^1: w_1^2, w_2^1
      {s(1, 1), s(2, 1), s(1, 2)},         // m_2^1: w_1^1, w_1^2, w_2^1
      {s(1, 1), s(2, 2)},                  // m_1^2: w_1^1, w_2^2
      {s(2, 1), s(1, 1), s(1, 2), s(2, 2)} // m_2^2: w_1^2, w_1^1, w_2^1, w_2^2
  };
  inst.women_prefs = {
      {s(2, 1), s(1, 2)},                  // w_1^1: m_1^2, m_2^1
      {s(1, 1), s(2, 1), s(1, 2)},         // w_2^1: m_1^1, m_1^2, m_2^1
      {s(1, 1), s(2, 2)},                  // w_1^2: m_1^1, m_2^2
      {s(2, 1), s(1, 1), s(1, 2), s(2, 2)} // w_2^2: m_1^2, m_1^1, m_2^1, m_2^2
  };
  for (auto& list : inst.men_prefs) detail::canonical_fill(list, N);
  for (auto& list : inst.women_prefs) detail::canonical_fill(list, N);
  return inst;
}

/// Doubles n within every community by adding one clone per agent. Clones
/// keep their original's role; within a community's winner and loser
/// blocks, originals come first and clones after, which realizes
/// "original preferred to clone" through the canonical index order. The
/// result is the worst-case family member with parameters (kappa, 2n).
inline Instance replicate(const Instance& inst, const RoleTags& tags) {
  const auto expected_tags = family_tags(inst.kappa, inst.n);
  if (inst.n < 2 || inst.n % 2 != 0 || inst.kappa % 2 != 0 || tags != expected_tags ||
      inst != worst_case_instance(inst.kappa, inst.n)) {
    throw std::invalid_argument("replicate requires worst-case role structure");
  }
  return worst_case_instance(inst.kappa, 2 * inst.n);
}

/// Each agent's list is an independent uniform random permutation of the
/// opposite side, fully reproducible from the seed.
inline Instance random_instance(int kappa, int n, std::uint64_t seed) {
  if (kappa < 1 || n < 1) throw std::invalid_argument("kappa and n must be at least 1");
  Instance inst;
  inst.kappa = kappa;
  inst.n = n;
  const int N = kappa * n;
  std::mt19937_64 rng(seed);
  auto permutation = [&]() {
    std::vector<int> list(N);
    for (int v = 0; v < N; ++v) list[v] = v;
    for (int v = N - 1; v > 0; --v) {
      std::uniform_int_distribution<int> pick(0, v);
      std::swap(list[v], list[pick(rng)]);
    }
    return list;
  };
  for (int s = 0; s < N; ++s) inst.men_prefs.push_back(permutation());
  for (int s = 0; s < N; ++s) inst.women_prefs.push_back(permutation());
  return inst;
}

}  // namespace mmi
