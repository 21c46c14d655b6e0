#pragma once

// Rank and welfare accounting: raw and percentile ranks, per-agent and
// aggregate gains from integration, and the two closed-form bounds.
// Everything here is exact rational arithmetic; no floating point.

#include <map>
#include <stdexcept>

#include "mmi/model.hpp"

namespace mmi {

/// 1-based position of `partner` in `agent`'s society-wide list (top
/// choice = 1).
inline int raw_rank(const Instance& inst, const AgentId& agent, const AgentId& partner) {
  if (agent.side == partner.side) {
    throw std::invalid_argument("raw rank requires an opposite-side pair");
  }
  if (!inst.in_range(agent) || !inst.in_range(partner)) {
    throw std::invalid_argument("agent outside society");
  }
  const auto& list = inst.prefs(agent);
  const int target = inst.slot(partner);
  for (size_t pos = 0; pos < list.size(); ++pos) {
    if (list[pos] == target) return static_cast<int>(pos) + 1;
  }
  throw std::invalid_argument("partner missing from preference list");
}

inline Rational percentile_rank(const Instance& inst, const AgentId& agent,
                                const AgentId& partner) {
  return Rational(raw_rank(inst, agent, partner), inst.side_size());
}

namespace detail {

inline AgentId matched_partner(const Matching& mu, const AgentId& a, const char* which) {
  const AgentId p = mu.partner_of(a);
  if (p == a) {
    throw std::invalid_argument(std::string("gain undefined for unmatched agent (") +
                                which + " matching)");
  }
  return p;
}

}  // namespace detail

/// Raw-rank gain from integration for one agent: rank before minus rank
/// after; positive means integration improved this agent.
inline int agent_raw_gain(const Instance& inst, const MatchingScheme& scheme,
                          const AgentId& agent) {
  const AgentId pre = detail::matched_partner(scheme.community(agent.community), agent, "community");
  const AgentId post = detail::matched_partner(scheme.society, agent, "society");
  return raw_rank(inst, agent, pre) - raw_rank(inst, agent, post);
}

inline Rational agent_gain(const Instance& inst, const MatchingScheme& scheme,
                           const AgentId& agent) {
  return Rational(agent_raw_gain(inst, scheme, agent), inst.side_size());
}

struct AgentOutcome {
  AgentId pre;              // partner before integration
  AgentId post;             // partner after integration
  int raw_gain = 0;
  Rational percentile_gain; // raw_gain / (kappa n)
};

struct GainsReport {
  std::map<AgentId, AgentOutcome> per_agent;
  long long total_raw = 0;
  Rational gamma;      // sum of percentile gains
  Rational gamma_bar;  // gamma / (2 kappa n)
  int gainers = 0;
  int losers = 0;
  int unchanged = 0;
};

inline Rational total_gains(const Instance& inst, const MatchingScheme& scheme) {
  long long raw = 0;
  for (Side side : {Side::Man, Side::Woman}) {
    for (int s = 0; s < inst.side_size(); ++s) {
      raw += agent_raw_gain(inst, scheme, inst.agent(side, s));
    }
  }
  return Rational(raw, inst.side_size());
}

inline Rational average_gains(const Instance& inst, const MatchingScheme& scheme) {
  return total_gains(inst, scheme) / (2 * inst.side_size());
}

inline GainsReport gains_report(const Instance& inst, const MatchingScheme& scheme) {
  GainsReport report;
  const int N = inst.side_size();
  for (Side side : {Side::Man, Side::Woman}) {
    for (int s = 0; s < N; ++s) {
      const AgentId a = inst.agent(side, s);
      AgentOutcome o;
      o.pre = detail::matched_partner(scheme.community(a.community), a, "community");
      o.post = detail::matched_partner(scheme.society, a, "society");
      o.raw_gain = raw_rank(inst, a, o.pre) - raw_rank(inst, a, o.post);
      o.percentile_gain = Rational(o.raw_gain, N);
      report.total_raw += o.raw_gain;
      if (o.raw_gain > 0) {
        ++report.gainers;
      } else if (o.raw_gain < 0) {
        ++report.losers;
      } else {
        ++report.unchanged;
      }
      report.per_agent.emplace(a, o);
    }
  }
  report.gamma = Rational(report.total_raw, N);
  report.gamma_bar = report.gamma / (2 * N);
  return report;
}

/// Universal lower bound on average gains in any stable scheme:
/// -1/2 + 1/(kappa n).
inline Rational trivial_lower_bound(int kappa, int n) {
  return Rational(-1, 2) + Rational(1, kappa * n);
}

/// Average gains attained by the worst-case family:
/// -3/8 + 3/(4 kappa n).
inline Rational worst_case_value(int kappa, int n) {
  if (kappa < 1 || n < 1) throw std::invalid_argument("kappa and n must be at least 1");
  return Rational(-3, 8) + Rational(3, 4 * kappa * n);
}

}  // namespace mmi
