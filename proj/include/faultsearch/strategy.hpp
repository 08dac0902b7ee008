#ifndef FAULTSEARCH_STRATEGY_HPP
#define FAULTSEARCH_STRATEGY_HPP

/**
 * \file strategy.hpp
 *
 * Strategy representations for the two settings:
 *
 *  - line: a TurnSequence of turning distances on alternating sides of 0.
 *    After the last listed turn the robot heads outward forever, so an empty
 *    sequence is a robot sent straight out in its first direction.
 *  - rays / one-ray cover with returns: a RoundPlan of excursions
 *    origin -> (ray, turn) -> origin. A round with an infinite turn never
 *    returns; after the last round the robot rests at the origin.
 *
 * Robots and rounds are indexed from 0. Rays are numbered 1..m; on the line
 * ray 1 is the positive side and ray 2 the negative side.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "faultsearch/formulas.hpp"

namespace faultsearch {

enum class Setting { line, orc };

inline const char* to_string(Setting s) { return s == Setting::line ? "line" : "orc"; }

template <std::floating_point Real = double>
struct TurnSequence {
    std::vector<Real> turns;  ///< magnitudes, sides alternate
    int first_direction = +1;

    /// +1 or -1 for the side of turn i; i == turns.size() is the final leg.
    int side(std::size_t i) const noexcept { return i % 2 == 0 ? first_direction : -first_direction; }

    friend bool operator==(const TurnSequence&, const TurnSequence&) = default;
};

template <std::floating_point Real = double>
struct Round {
    int ray = 1;
    Real turn = 0;

    friend bool operator==(const Round&, const Round&) = default;
};

template <std::floating_point Real = double>
struct RoundPlan {
    std::vector<Round<Real>> rounds;

    friend bool operator==(const RoundPlan&, const RoundPlan&) = default;
};

/// Closed interval [left, right] that one turn (line) or one round (rays)
/// lambda-covers. left is the earliest point reached in time.
template <std::floating_point Real = double>
struct CoverInterval {
    int robot = 0;
    int round = 0;
    Real left = 0;
    Real right = 0;

    friend bool operator==(const CoverInterval&, const CoverInterval&) = default;
};

template <std::floating_point Real>
void validate(const TurnSequence<Real>& t) {
    if (t.first_direction != 1 && t.first_direction != -1)
        throw std::invalid_argument("turn sequence: first direction must be +1 or -1");
    for (Real v : t.turns)
        if (!(v > 0) || !std::isfinite(v))
            throw std::invalid_argument("turn sequence: turning distances must be finite and positive");
}

template <std::floating_point Real>
void validate(const RoundPlan<Real>& plan, int m) {
    for (std::size_t i = 0; i < plan.rounds.size(); ++i) {
        const auto& r = plan.rounds[i];
        if (r.ray < 1 || r.ray > m)
            throw std::invalid_argument("round plan: ray out of range");
        if (!(r.turn > 0) || std::isnan(r.turn))
            throw std::invalid_argument("round plan: turns must be positive");
        if (std::isinf(r.turn) && i + 1 != plan.rounds.size())
            throw std::invalid_argument("round plan: an infinite round must be the last one");
    }
}

/**
 * The cyclic exponential strategy: robot r (1-based in the exponent) starts on
 * ray 1, visits rays cyclically, and on its (j+3)-rd visit to ray i (j from
 * -2) turns at alpha^{k(i + m j) + m r}. With q = m(f+1), every point x >= 1 of
 * every ray lies in the final f+1 passes (alpha^{e - q}, alpha^e] of distinct
 * robots. Rounds are generated until the exponent passes
 * log_alpha(horizon) + q + mk, enough to cover every ray (f+1)-fold beyond
 * horizon.
 */
template <std::floating_point Real = double>
std::vector<RoundPlan<Real>> make_exponential_strategy(const InstanceParams& p, Real alpha, Real horizon) {
    p.require_nontrivial();
    if (!(alpha > 1) || !std::isfinite(alpha))
        throw std::invalid_argument("exponential strategy: alpha must be finite and > 1");
    if (!(horizon >= 1) || !std::isfinite(horizon))
        throw std::invalid_argument("exponential strategy: horizon must be finite and >= 1");

    const int m = p.m;
    const int k = p.k;
    const Real log_alpha = std::log(alpha);
    const Real last_exponent = std::ceil(std::log(horizon) / log_alpha) + p.q() + m * k;

    std::vector<RoundPlan<Real>> plans(k);
    for (int r = 1; r <= k; ++r) {
        auto& rounds = plans[r - 1].rounds;
        for (long long visit = 0;; ++visit) {
            const int ray = static_cast<int>(visit % m) + 1;
            const long long j = visit / m - 2;
            const long long exponent = static_cast<long long>(k) * (ray + m * j) + static_cast<long long>(m) * r;
            if (Real(exponent) > last_exponent) break;
            rounds.push_back({ray, std::pow(alpha, Real(exponent))});
        }
    }
    return plans;
}

/**
 * Standard form of a line strategy for the symmetric (+-) cover.
 *
 * A point x is +-covered when both x and -x have been reached, which happens
 * on the first leg after which min(positive extent, negative extent) >= x,
 * at time 2 (sum of earlier turns) + x. The strictly increasing records of that
 * minimum, with the unbounded final leg included, form a monotone strategy
 * whose cover times are never later. Non-fruitful turns are then dropped left
 * to right. The result starts in the positive direction and is idempotent
 * under this function.
 */
template <std::floating_point Real = double>
TurnSequence<Real> normalize_line_strategy(const TurnSequence<Real>& t, const CoverParams<Real>& c) {
    validate(t);
    std::vector<Real> records;
    Real pos = 0, neg = 0, level = 0;
    for (std::size_t i = 0; i <= t.turns.size(); ++i) {
        const Real reach = i < t.turns.size() ? t.turns[i] : std::numeric_limits<Real>::infinity();
        (t.side(i) > 0 ? pos : neg) = std::max(t.side(i) > 0 ? pos : neg, reach);
        const Real covered = std::min(pos, neg);
        if (covered > level) {
            level = covered;
            records.push_back(covered);
        }
    }

    const Real mu = c.mu();
    TurnSequence<Real> out;
    Real sum = 0, prev = 0;
    for (Real v : records) {
        const Real lo = std::max((sum + v) / mu, prev);
        if (lo <= v) {
            out.turns.push_back(v);
            sum += v;
            prev = v;
        }
    }
    return out;
}

/**
 * Standard form of a round plan for the one-ray relaxation: non-fruitful
 * rounds are dropped and adjacent inversions t_{i-1} > t_i are swapped (the
 * swap keeps every covered point covered as often as before because round i
 * was fruitful). Ray labels travel with their turns.
 */
template <std::floating_point Real = double>
RoundPlan<Real> normalize_rounds(const RoundPlan<Real>& plan, const CoverParams<Real>& c) {
    const Real mu = c.mu();
    std::vector<Round<Real>> rounds = plan.rounds;
    for (;;) {
        std::vector<Round<Real>> kept;
        Real sum = 0;
        for (const auto& r : rounds) {
            if (sum / mu <= r.turn) {
                kept.push_back(r);
                sum += r.turn;
            }
        }
        rounds = std::move(kept);
        bool swapped = false;
        for (std::size_t i = 1; i < rounds.size(); ++i) {
            if (rounds[i - 1].turn > rounds[i].turn) {
                std::swap(rounds[i - 1], rounds[i]);
                swapped = true;
                break;
            }
        }
        if (!swapped) break;
    }
    return RoundPlan<Real>{std::move(rounds)};
}

/// Intervals [t''_i, t_i] with t''_i = max{(t_1+...+t_i)/mu, t_{i-1}}; only
/// fruitful turns are returned.
template <std::floating_point Real = double>
std::vector<CoverInterval<Real>> cover_intervals(const TurnSequence<Real>& t, const CoverParams<Real>& c,
                                                 int robot = 0) {
    const Real mu = c.mu();
    std::vector<CoverInterval<Real>> out;
    Real sum = 0, prev = 0;
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
        const Real v = t.turns[i];
        sum += v;
        const Real lo = std::max(sum / mu, prev);
        if (lo <= v) out.push_back({robot, static_cast<int>(i), lo, v});
        prev = v;
    }
    return out;
}

/// Intervals [t''_i, t_i] with t''_i = (t_1+...+t_{i-1})/mu: the outbound leg
/// of round i reaches x directly, so the current turn is not charged.
template <std::floating_point Real = double>
std::vector<CoverInterval<Real>> cover_intervals(const RoundPlan<Real>& plan, const CoverParams<Real>& c,
                                                 int robot = 0) {
    const Real mu = c.mu();
    std::vector<CoverInterval<Real>> out;
    Real sum = 0;
    for (std::size_t i = 0; i < plan.rounds.size(); ++i) {
        const Real v = plan.rounds[i].turn;
        const Real lo = sum / mu;
        if (lo <= v) out.push_back({robot, static_cast<int>(i), lo, v});
        sum += v;
    }
    return out;
}

/// Cover intervals of a team; robot ids are positions in the team.
template <class Strategy, std::floating_point Real>
std::vector<CoverInterval<Real>> cover_intervals(const std::vector<Strategy>& team, const CoverParams<Real>& c) {
    std::vector<CoverInterval<Real>> out;
    for (std::size_t r = 0; r < team.size(); ++r) {
        auto part = cover_intervals(team[r], c, static_cast<int>(r));
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Line trajectory as rounds on rays 1 (+) and 2 (-); the unbounded final leg
/// becomes a last round with an infinite turn.
template <std::floating_point Real = double>
RoundPlan<Real> to_rounds(const TurnSequence<Real>& t) {
    validate(t);
    RoundPlan<Real> plan;
    for (std::size_t i = 0; i < t.turns.size(); ++i)
        plan.rounds.push_back({t.side(i) > 0 ? 1 : 2, t.turns[i]});
    plan.rounds.push_back({t.side(t.turns.size()) > 0 ? 1 : 2, std::numeric_limits<Real>::infinity()});
    return plan;
}

/**
 * Two-ray round plan as a line trajectory. Rounds must alternate between rays
 * 1 and 2; an excursion out and back through 0 followed by one on the other
 * ray is the same path as a line turn. The line form continues outward after
 * the last round, so it visits at least what the plan visits.
 */
template <std::floating_point Real = double>
TurnSequence<Real> to_line(const RoundPlan<Real>& plan) {
    TurnSequence<Real> t;
    if (plan.rounds.empty()) return t;
    t.first_direction = plan.rounds.front().ray == 1 ? 1 : -1;
    for (std::size_t i = 0; i < plan.rounds.size(); ++i) {
        const auto& r = plan.rounds[i];
        if (r.ray != 1 && r.ray != 2) throw std::invalid_argument("to_line: plan uses more than two rays");
        if ((r.ray == 1 ? 1 : -1) != t.side(i))
            throw std::invalid_argument("to_line: rounds do not alternate between the two rays");
        if (std::isinf(r.turn)) break;
        t.turns.push_back(r.turn);
    }
    return t;
}

template <std::floating_point Real = double>
std::vector<TurnSequence<Real>> to_line(const std::vector<RoundPlan<Real>>& plans) {
    std::vector<TurnSequence<Real>> out;
    out.reserve(plans.size());
    for (const auto& p : plans) out.push_back(to_line(p));
    return out;
}

}  // namespace faultsearch

#endif
