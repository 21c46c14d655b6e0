#pragma once

// Stable-matching engine: deferred acceptance from either side, blocking
// pair detection, exhaustive enumeration for small problems, uniqueness
// via the MOSM = WOSM criterion, and stable-scheme assembly.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mmi/model.hpp"

namespace mmi {

struct BlockingPair {
  AgentId man;
  AgentId woman;

  auto operator<=>(const BlockingPair&) const = default;
};

namespace detail {

// rank_table[a][b] = position of b in a's list (0 = most preferred).
inline std::vector<std::vector<int>> rank_table(const std::vector<std::vector<int>>& prefs) {
  std::vector<std::vector<int>> rank(prefs.size());
  for (size_t a = 0; a < prefs.size(); ++a) {
    rank[a].assign(prefs[a].size(), 0);
    for (size_t pos = 0; pos < prefs[a].size(); ++pos) rank[a][prefs[a][pos]] = static_cast<int>(pos);
  }
  return rank;
}

// Men-proposing deferred acceptance over local indices; proposal order is
// the canonical agent order. Returns wife_of_man.
inline std::vector<int> propose(const std::vector<std::vector<int>>& proposer_prefs,
                                const std::vector<std::vector<int>>& receiver_prefs) {
  const int N = static_cast<int>(proposer_prefs.size());
  const auto receiver_rank = rank_table(receiver_prefs);
  std::vector<int> next(N, 0);            // next list position to propose to
  std::vector<int> engaged_to(N, -1);     // receiver -> proposer
  std::vector<int> free;                  // stack, canonical order on top
  for (int m = N - 1; m >= 0; --m) free.push_back(m);
  while (!free.empty()) {
    const int m = free.back();
    free.pop_back();
    const int w = proposer_prefs[m][next[m]++];
    const int rival = engaged_to[w];
    if (rival < 0) {
      engaged_to[w] = m;
    } else if (receiver_rank[w][m] < receiver_rank[w][rival]) {
      engaged_to[w] = m;
      free.push_back(rival);
    } else {
      free.push_back(m);
    }
  }
  std::vector<int> wife(N, -1);
  for (int w = 0; w < N; ++w) wife[engaged_to[w]] = w;
  return wife;
}

inline Matching to_matching(const Problem& p, const std::vector<int>& wife_of_man) {
  Matching mu;
  for (size_t m = 0; m < wife_of_man.size(); ++m) mu.pair(p.men[m], p.women[wife_of_man[m]]);
  return mu;
}

inline bool stable_assignment(const std::vector<int>& wife_of_man,
                              const std::vector<std::vector<int>>& men_rank,
                              const std::vector<std::vector<int>>& women_rank,
                              const std::vector<int>& husband_of_woman) {
  const int N = static_cast<int>(wife_of_man.size());
  for (int m = 0; m < N; ++m) {
    for (int w = 0; w < N; ++w) {
      if (w == wife_of_man[m]) continue;
      if (men_rank[m][w] < men_rank[m][wife_of_man[m]] &&
          women_rank[w][m] < women_rank[w][husband_of_woman[w]]) {
        return true;  // found a blocking pair, not stable
      }
    }
  }
  return false;
}

}  // namespace detail

/// Deferred acceptance with the given proposing side. Deterministic,
/// proposer-optimal, and always stable.
inline Matching deferred_acceptance(const Problem& p, ProposingSide side) {
  if (p.men.empty()) throw std::invalid_argument("empty problem");
  if (side == ProposingSide::Men) {
    return detail::to_matching(p, detail::propose(p.men_prefs, p.women_prefs));
  }
  const auto husband = detail::propose(p.women_prefs, p.men_prefs);
  Matching mu;
  for (size_t w = 0; w < husband.size(); ++w) mu.pair(p.women[w], p.men[husband[w]]);
  return mu;
}

inline Matching deferred_acceptance(const Instance& inst, ProposingSide side) {
  require_valid(inst);
  return deferred_acceptance(society_problem(inst), side);
}

/// All blocking pairs of a matching, in canonical (man, woman) order.
/// An agent matched to itself prefers every opposite-side agent to staying
/// single.
inline std::vector<BlockingPair> blocking_pairs(const Matching& mu, const Problem& p) {
  const int N = p.side_size();
  std::map<AgentId, int> man_local, woman_local;
  for (int i = 0; i < N; ++i) {
    man_local[p.men[i]] = i;
    woman_local[p.women[i]] = i;
  }
  for (const auto& [a, b] : mu.pairs) {
    const bool known = a.side == Side::Man ? man_local.contains(a) : woman_local.contains(a);
    if (!known) throw std::invalid_argument("matching references an agent outside the problem");
  }
  const auto men_rank = detail::rank_table(p.men_prefs);
  const auto women_rank = detail::rank_table(p.women_prefs);
  auto partner_rank = [&](const std::vector<std::vector<int>>& rank, int a,
                          const AgentId& id, const std::map<AgentId, int>& local) {
    const AgentId q = mu.partner_of(id);
    if (q == id) return N;  // single: worse than any listed partner
    auto it = local.find(q);
    if (it == local.end()) return N;  // partner outside population: treated as single here
    return rank[a][it->second];
  };
  std::vector<BlockingPair> out;
  for (int m = 0; m < N; ++m) {
    const int m_current = partner_rank(men_rank, m, p.men[m], woman_local);
    for (int w = 0; w < N; ++w) {
      if (mu.partner_of(p.men[m]) == p.women[w]) continue;
      if (men_rank[m][w] < m_current &&
          women_rank[w][m] < partner_rank(women_rank, w, p.women[w], man_local)) {
        out.push_back({p.men[m], p.women[w]});
      }
    }
  }
  return out;
}

inline bool is_stable(const Matching& mu, const Problem& p) {
  return blocking_pairs(mu, p).empty();
}

inline constexpr int kEnumerationGuard = 8;

/// Exact set of all stable matchings by exhaustive search over all perfect
/// matchings. Guarded: refuses problems with more men than the guard.
inline std::vector<Matching> enumerate_stable(const Problem& p,
                                              int guard = kEnumerationGuard) {
  const int N = p.side_size();
  if (N > guard) {
    throw std::invalid_argument("instance too large for exhaustive enumeration");
  }
  const auto men_rank = detail::rank_table(p.men_prefs);
  const auto women_rank = detail::rank_table(p.women_prefs);
  std::vector<int> wife(N);
  std::iota(wife.begin(), wife.end(), 0);
  std::set<Matching> found;
  std::vector<int> husband(N);
  do {
    for (int m = 0; m < N; ++m) husband[wife[m]] = m;
    if (!detail::stable_assignment(wife, men_rank, women_rank, husband)) {
      found.insert(detail::to_matching(p, wife));
    }
  } while (std::next_permutation(wife.begin(), wife.end()));
  return {found.begin(), found.end()};
}

/// True iff the problem has exactly one stable matching, detected by the
/// coincidence of the men-optimal and women-optimal stable matchings.
inline bool is_unique_stable(const Problem& p) {
  return deferred_acceptance(p, ProposingSide::Men) ==
         deferred_acceptance(p, ProposingSide::Women);
}

/// Solves every community restriction and the full society with the given
/// proposing side. When the stable matching is unique everywhere the result
/// does not depend on the side.
inline MatchingScheme stable_scheme(const Instance& inst, ProposingSide side) {
  require_valid(inst);
  MatchingScheme scheme;
  for (int c = 1; c <= inst.kappa; ++c) {
    scheme.per_community.push_back(
        deferred_acceptance(restrict_to(inst, Population{{c}}), side));
  }
  scheme.society = deferred_acceptance(society_problem(inst), side);
  return scheme;
}

}  // namespace mmi
