#ifndef FAULTSEARCH_POTENTIAL_HPP
#define FAULTSEARCH_POTENTIAL_HPP

/**
 * \file potential.hpp
 *
 * Numerical engine for the potential-function lower bound.
 *
 * Assigned intervals are replayed in left-endpoint order. A prefix P carries
 * its covering situation A(P) (the fold-many reals a_fold <= ... <= a_1 such
 * that (a_{j+1}, a_j] is covered exactly j times), the load of every robot
 * (sum of its turns so far) and, in the one-ray setting, the left endpoint
 * b of every robot's next assigned interval. The potentials are
 *
 *   line: f(P) = prod_r L_r^s / prod_{y in A} y,                  |A| = s
 *   orc:  f(P) = prod_r L_r^{q-k} b_r^k / prod_{y in A} y,        |A| = q
 *
 * and adding one interval multiplies f by mu*^e / (x^e (mu* - x)^k), e = s or
 * q - k, which is at least delta = (k+e)^{k+e} / (e^e k^k mu^k). Below the
 * tight ratio delta > 1, so f must grow without bound; in the line setting f
 * is also capped by mu^{ks}. Everything is kept in log form.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "faultsearch/cover.hpp"
#include "faultsearch/formulas.hpp"
#include "faultsearch/strategy.hpp"

namespace faultsearch {

class InvalidAssignmentError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UndefinedPotentialError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Shape of the potential: which setting, how many robots, coverage fold.
struct PotentialShape {
    Setting mode = Setting::line;
    int robots = 1;
    int fold = 1;  ///< |A|: s on the line, q for one-ray cover

    /// Exponent of the loads: s on the line, q - k for one-ray cover.
    int load_exponent() const { return mode == Setting::line ? fold : fold - robots; }
};

template <std::floating_point Real = double>
struct PrefixState {
    PotentialShape shape;
    std::vector<Real> A;          ///< ascending; A.front() is a(P)
    std::vector<Real> load;       ///< per robot
    std::vector<Real> next_left;  ///< per robot, +inf if none (one-ray only)
    Real log_potential = 0;

    Real a() const { return A.front(); }
};

/// log f(P) evaluated from the state's fields.
template <std::floating_point Real = double>
Real potential_value(const PrefixState<Real>& st) {
    const auto& sh = st.shape;
    Real sum_log_a = 0;
    for (Real y : st.A) sum_log_a += std::log(y);
    Real out = -Real(sh.robots) * sum_log_a;
    const int e = sh.load_exponent();
    for (int r = 0; r < sh.robots; ++r) {
        if (!(st.load[r] > 0))
            throw UndefinedPotentialError("potential undefined: robot " + std::to_string(r) + " has zero load");
        out += Real(e) * std::log(st.load[r]);
        if (sh.mode == Setting::orc) {
            if (!std::isfinite(st.next_left[r]))
                throw UndefinedPotentialError("potential undefined: robot " + std::to_string(r) +
                                              " has no next interval");
            out += Real(sh.robots) * std::log(st.next_left[r]);
        }
    }
    return out;
}

/// One audited step of the replay.
template <std::floating_point Real = double>
struct StepRecord {
    std::size_t step = 0;
    AssignedInterval<Real> interval;
    Real a_before = 0;
    Real mu_star = 0;
    Real x = 0;           ///< L/a (line) or L/b' (one-ray)
    Real step_ratio = 0;  ///< mu*^e / (x^e (mu* - x)^k)
    Real log_potential = 0;
};

namespace detail {

template <std::floating_point Real>
bool within_load_bound(Real load, Real mu, Real anchor) {
    return load <= mu * anchor * (1 + Real(64) * std::numeric_limits<Real>::epsilon());
}

}  // namespace detail

/**
 * Adds the next interval of the stream. following_left is the left endpoint
 * of the acting robot's interval after `next` (one-ray setting only; pass
 * +inf on the line). The incremental log potential is the old value plus
 * the log step ratio.
 */
template <std::floating_point Real = double>
std::pair<PrefixState<Real>, StepRecord<Real>> advance(const PrefixState<Real>& state,
                                                       const AssignedInterval<Real>& next, std::type_identity_t<Real> following_left,
                                                       const CoverParams<Real>& c) {
    const auto& sh = state.shape;
    const int r = next.robot;
    if (r < 0 || r >= sh.robots) throw InvalidAssignmentError("advance: robot id out of range");
    const Real a = state.a();
    if (next.left != a)
        throw InvalidAssignmentError("advance: next interval does not start at the frontier a(P)");
    if (sh.mode == Setting::orc && state.next_left[r] != a)
        throw InvalidAssignmentError("advance: frontier is not the acting robot's next left endpoint");

    const Real mu = c.mu();
    const Real load = state.load[r];
    const Real load_after = load + next.right;
    Real anchor = a;
    if (sh.mode == Setting::orc) {
        if (!std::isfinite(following_left))
            throw InvalidAssignmentError("advance: acting robot has no following interval");
        anchor = following_left;
    }
    if (!detail::within_load_bound(load_after, mu, anchor))
        throw InvalidAssignmentError("advance: load bound violated (interval is not lambda-feasible)");

    StepRecord<Real> rec;
    rec.interval = next;
    rec.a_before = a;
    rec.mu_star = load_after / anchor;
    rec.x = load / anchor;
    const Real gap = next.right / anchor;  // mu* - x without cancellation
    const int e = sh.load_exponent();
    const Real log_ratio = Real(e) * (std::log(rec.mu_star) - std::log(rec.x)) - Real(sh.robots) * std::log(gap);
    rec.step_ratio = std::exp(log_ratio);

    PrefixState<Real> out = state;
    out.A.erase(out.A.begin());
    out.A.insert(std::upper_bound(out.A.begin(), out.A.end(), next.right), next.right);
    out.load[r] = load_after;
    if (sh.mode == Setting::orc) out.next_left[r] = following_left;
    out.log_potential = state.log_potential + log_ratio;
    rec.log_potential = out.log_potential;
    return {std::move(out), rec};
}

/// Assigned intervals of every robot in stream order, with lookups for the
/// following left endpoint. Robot ids must be dense 0..robots-1.
template <std::floating_point Real = double>
class RobotIntervals {
public:
    RobotIntervals(const std::vector<AssignedInterval<Real>>& assigned, int robots) : per_robot_(robots) {
        for (const auto& a : assigned) {
            if (a.robot < 0 || a.robot >= robots) throw ConfigurationError("robot id out of range");
            per_robot_[a.robot].push_back(a);
        }
        for (auto& v : per_robot_)
            std::sort(v.begin(), v.end(),
                      [](const auto& x, const auto& y) { return std::tie(x.left, x.round) < std::tie(y.left, y.round); });
    }

    const std::vector<AssignedInterval<Real>>& of(int r) const { return per_robot_[r]; }

    /// Left endpoint of the interval after the i-th (0-based) of robot r.
    Real left_after(int r, std::size_t i) const {
        const auto& v = per_robot_[r];
        return i + 1 < v.size() ? v[i + 1].left : std::numeric_limits<Real>::infinity();
    }

    /// Left endpoint of robot r's i-th interval, +inf past the end.
    Real left_at(int r, std::size_t i) const {
        const auto& v = per_robot_[r];
        return i < v.size() ? v[i].left : std::numeric_limits<Real>::infinity();
    }

private:
    std::vector<std::vector<AssignedInterval<Real>>> per_robot_;
};

/**
 * The state of prefix order[0 .. size) computed from scratch: A(P) by a
 * coverage sweep, loads by summation, next left endpoints by lookup.
 */
template <std::floating_point Real = double>
PrefixState<Real> state_from_scratch(const PrefixStream<Real>& stream, std::size_t size, const RobotIntervals<Real>& lists,
                                     const std::map<int, Real>& base_load, const PotentialShape& shape) {
    PrefixState<Real> st;
    st.shape = shape;
    st.load.assign(shape.robots, Real(0));
    st.next_left.assign(shape.robots, std::numeric_limits<Real>::infinity());
    for (const auto& [r, v] : base_load)
        if (r >= 0 && r < shape.robots) st.load[r] += v;

    std::vector<std::size_t> taken(shape.robots, 0);
    std::vector<std::pair<Real, int>> events;
    for (std::size_t i = 0; i < size; ++i) {
        const auto& iv = stream.order[i];
        st.load[iv.robot] += iv.right;
        ++taken[iv.robot];
        events.emplace_back(iv.left, +1);
        events.emplace_back(iv.right, -1);
    }
    if (shape.mode == Setting::orc)
        for (int r = 0; r < shape.robots; ++r) st.next_left[r] = lists.left_at(r, taken[r]);

    // a_j = sup{y >= 1 : multiplicity(y) >= j}, sup of nothing = 1.
    std::sort(events.begin(), events.end());
    std::vector<Real> a(shape.fold, Real(1));
    int count = 0;
    for (std::size_t i = 0; i < events.size();) {
        const Real at = events[i].first;
        while (i < events.size() && events[i].first == at) count += events[i++].second;
        if (i == events.size()) break;
        const Real seg_end = events[i].first;
        for (int j = 1; j <= std::min(count, shape.fold); ++j) a[j - 1] = std::max(a[j - 1], seg_end);
    }
    st.A.assign(a.rbegin(), a.rend());
    st.log_potential = potential_value(st);
    return st;
}

template <std::floating_point Real = double>
struct GrowthTrace {
    PotentialShape shape;
    Real mu = 0;
    Real frontier_scale = 1;  ///< a(P_0); potentials are invariant under rescaling by it
    Real initial_log_potential = 0;
    std::vector<StepRecord<Real>> steps;
    Real min_step_ratio = std::numeric_limits<Real>::infinity();
    Real max_log_potential = -std::numeric_limits<Real>::infinity();
    Real log_delta = 0;  ///< log of the guaranteed per-step growth
    std::optional<Real> log_cap;  ///< line: ks log mu
    Real final_frontier = 1;
    bool stopped_early = false;  ///< one-ray: acting robot had no following interval
    std::size_t growth_violations = 0;  ///< steps below delta while delta > 1
    std::size_t cap_violations = 0;     ///< line states above mu^{ks}
};

/**
 * Replays the stream from P_0 through every interval with left endpoint
 * below N (where the assignment is exact), recording each step. Robot ids in
 * `assigned` must be dense 0..robots-1; fold is s (line) or q (one-ray).
 */
template <std::floating_point Real = double>
GrowthTrace<Real> audit_growth(const Assignment<Real>& assignment, const CoverParams<Real>& c,
                               const PotentialShape& shape, Real N) {
    const auto stream = prefix_stream(assignment.intervals, shape.robots);
    const RobotIntervals<Real> lists(assignment.intervals, shape.robots);
    const Real mu = c.mu();

    GrowthTrace<Real> tr;
    tr.shape = shape;
    tr.mu = mu;
    tr.log_delta = log_growth_factor<Real>(shape.load_exponent(), shape.robots, mu);
    if (shape.mode == Setting::line) tr.log_cap = Real(shape.robots) * shape.fold * std::log(mu);
    const Real slack = Real(1e-9);

    auto st = state_from_scratch(stream, stream.initial, lists, assignment.base_load, shape);
    tr.frontier_scale = st.a();
    tr.initial_log_potential = st.log_potential;
    tr.max_log_potential = st.log_potential;
    if (tr.log_cap && st.log_potential > *tr.log_cap + slack) ++tr.cap_violations;

    std::vector<std::size_t> taken(shape.robots, 0);
    for (std::size_t i = 0; i < stream.initial; ++i) ++taken[stream.order[i].robot];

    for (std::size_t i = stream.initial; i < stream.order.size(); ++i) {
        const auto& next = stream.order[i];
        if (!(next.left < N)) break;
        if (!std::isfinite(next.right)) {
            tr.stopped_early = true;
            break;
        }
        Real following = std::numeric_limits<Real>::infinity();
        if (shape.mode == Setting::orc) {
            following = lists.left_after(next.robot, taken[next.robot]);
            if (!std::isfinite(following)) {
                tr.stopped_early = true;
                break;
            }
        }
        auto [after, rec] = advance(st, next, following, c);
        rec.step = tr.steps.size();
        ++taken[next.robot];
        st = std::move(after);

        tr.min_step_ratio = std::min(tr.min_step_ratio, rec.step_ratio);
        tr.max_log_potential = std::max(tr.max_log_potential, rec.log_potential);
        if (tr.log_delta > 0 && std::log(rec.step_ratio) < tr.log_delta - slack) ++tr.growth_violations;
        if (tr.log_cap && rec.log_potential > *tr.log_cap + slack) ++tr.cap_violations;
        tr.steps.push_back(rec);
    }
    tr.final_frontier = st.a();
    return tr;
}

struct GapCase1 {};

template <std::floating_point Real = double>
struct GapCase2 {
    int robot = 0;
    int round = 0;        ///< round of the interval starting at t'_i
    Real left = 0;        ///< t'_i
    Real next_left = 0;   ///< t'_{i+1}
    Real ratio = 0;       ///< t'_{i+1} / t'_i
    Real sub_lo = 0;      ///< mu t'_i
    Real sub_hi = 0;      ///< C t'_i
};

template <std::floating_point Real = double>
using GapReport = std::variant<GapCase1, GapCase2<Real>>;

/**
 * Bounded-gap test on consecutive left endpoints of each robot. Case 1 when
 * every ratio t'_{i+1}/t'_i is at most C; otherwise the violating pair with
 * the smallest t'_i (then lowest robot id). In Case 2 the robot covers
 * [mu t'_i, C t'_i] at most once, so the other robots cover it (q-1)-fold.
 */
template <std::floating_point Real = double>
GapReport<Real> detect_gap(const std::vector<AssignedInterval<Real>>& assigned, Real C, const CoverParams<Real>& c) {
    std::map<int, std::vector<const AssignedInterval<Real>*>> by_robot;
    for (const auto& a : assigned) by_robot[a.robot].push_back(&a);
    std::optional<GapCase2<Real>> best;
    for (auto& [r, v] : by_robot) {
        std::sort(v.begin(), v.end(), [](auto* x, auto* y) { return std::tie(x->left, x->round) < std::tie(y->left, y->round); });
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const Real ratio = v[i + 1]->left / v[i]->left;
            if (ratio > C) {
                if (!best || v[i]->left < best->left)
                    best = GapCase2<Real>{r, v[i]->round, v[i]->left, v[i + 1]->left, ratio, c.mu() * v[i]->left,
                                          C * v[i]->left};
                break;
            }
        }
    }
    if (best) return *best;
    return GapCase1{};
}

/// Assigned intervals of every robot except the gap robot, clipped to the
/// gap's subinterval and rescaled so it starts at 1. Robot ids are kept.
template <std::floating_point Real = double>
std::vector<AssignedInterval<Real>> gap_subproblem(const std::vector<AssignedInterval<Real>>& assigned,
                                                   const GapCase2<Real>& gap) {
    std::vector<AssignedInterval<Real>> out;
    const Real scale = gap.sub_lo;
    for (const auto& a : assigned) {
        if (a.robot == gap.robot) continue;
        if (a.right <= gap.sub_lo || a.left >= gap.sub_hi) continue;
        auto b = a;
        b.left = std::max(a.left, gap.sub_lo) / scale;
        b.right = std::min(a.right, gap.sub_hi) / scale;
        b.cover_left = a.cover_left / scale;
        out.push_back(b);
    }
    return out;
}

/// How far the potential still is from its cap when a certificate is issued
/// below the tight ratio: the stream needs at least steps_remaining more
/// intervals, each moving the frontier by at most growth_per_step.
template <std::floating_point Real = double>
struct GrowthBudget {
    Real log_cap = 0;
    Real log_potential = 0;
    long long steps_remaining = 0;
    Real log_frontier_needed = 0;  ///< log of the frontier the stream must pass
};

enum class VerdictKind { coverage_failure, certificate };

inline const char* to_string(VerdictKind k) {
    return k == VerdictKind::coverage_failure ? "coverage_failure" : "certificate";
}

template <std::floating_point Real = double>
struct Verdict {
    VerdictKind kind = VerdictKind::certificate;
    Setting mode = Setting::line;
    InstanceParams params;
    Real lambda = 0;
    Real horizon = 0;
    int fold = 0;          ///< required multiplicity: s (line) or q (one-ray)
    int effective_k = 0;   ///< robots holding assigned intervals
    bool trivial = false;  ///< fold <= k: nothing to audit

    std::optional<Witness<Real>> witness;
    /// Points below this cannot gain coverage from further turns of the same
    /// robots: min over robots of (sum of turns) / mu.
    Real settled_frontier = 0;
    bool witness_settled = false;

    std::optional<GrowthTrace<Real>> trace;
    Real min_step_ratio = std::numeric_limits<Real>::infinity();
    Real max_log_potential = -std::numeric_limits<Real>::infinity();
    std::optional<GapReport<Real>> gap;
    std::optional<GrowthBudget<Real>> budget;
};

namespace detail {

template <std::floating_point Real>
Real total_turns(const TurnSequence<Real>& t) {
    Real s = 0;
    for (Real v : t.turns) s += v;
    return s;
}

template <std::floating_point Real>
Real total_turns(const RoundPlan<Real>& plan) {
    Real s = 0;
    for (const auto& r : plan.rounds) s += r.turn;
    return s;
}

template <class Strategy, std::floating_point Real>
Real settled_frontier(const std::vector<Strategy>& team, Real mu) {
    Real out = std::numeric_limits<Real>::infinity();
    for (const auto& s : team) out = std::min(out, total_turns(s) / mu);
    return team.empty() ? Real(0) : out;
}

template <class Strategy, std::floating_point Real>
Verdict<Real> refute_team(const std::vector<Strategy>& team, Real lambda, const InstanceParams& p, Real N, Setting mode,
                          std::optional<Real> gap_constant) {
    p.validate();
    if (p.regime() == Regime::infeasible) throw RegimeError(Regime::infeasible);
    if (!(N >= 1)) throw std::invalid_argument("refute: N must be at least 1");
    if (mode == Setting::line && p.m != 2) throw std::invalid_argument("refute: line mode needs m = 2");
    if (static_cast<int>(team.size()) != p.k)
        throw ConfigurationError("refute: expected " + std::to_string(p.k) + " strategies, got " +
                                 std::to_string(team.size()));

    const CoverParams<Real> c(lambda);
    Verdict<Real> v;
    v.mode = mode;
    v.params = p;
    v.lambda = lambda;
    v.horizon = N;
    v.fold = mode == Setting::line ? p.s() : p.q();

    std::vector<Strategy> normalized;
    for (const auto& s : team) {
        if constexpr (std::is_same_v<Strategy, TurnSequence<Real>>)
            normalized.push_back(normalize_line_strategy(s, c));
        else
            normalized.push_back(normalize_rounds(s, c));
    }
    v.settled_frontier = settled_frontier(normalized, c.mu());
    const auto cover = cover_intervals(normalized, c);

    if (auto w = verify_multicover(cover, v.fold, Real(1), N)) {
        v.kind = VerdictKind::coverage_failure;
        v.witness = w;
        v.witness_settled = w->point < v.settled_frontier;
        return v;
    }
    v.kind = VerdictKind::certificate;
    if (p.regime() == Regime::trivial || v.fold <= 0) {
        v.trivial = true;
        v.effective_k = p.k;
        return v;
    }

    auto assignment = exact_q_assignment(cover, v.fold, N);
    const auto ids = active_robots(assignment.intervals);
    std::map<int, int> dense;
    for (std::size_t i = 0; i < ids.size(); ++i) dense[ids[i]] = static_cast<int>(i);
    for (auto& a : assignment.intervals) a.robot = dense.at(a.robot);
    std::map<int, Real> base;
    for (const auto& [r, l] : assignment.base_load)
        if (dense.count(r)) base[dense[r]] = l;
    assignment.base_load = std::move(base);
    v.effective_k = static_cast<int>(ids.size());

    const PotentialShape shape{mode, v.effective_k, v.fold};
    if (shape.load_exponent() < 1) {
        v.trivial = true;
        return v;
    }
    v.trace = audit_growth(assignment, c, shape, N);
    v.min_step_ratio = v.trace->min_step_ratio;
    v.max_log_potential = v.trace->max_log_potential;

    std::optional<Real> log_cap = v.trace->log_cap;
    Real log_growth = std::log(std::max(c.mu(), Real(1)));
    if (mode == Setting::orc && gap_constant) {
        v.gap = detect_gap(assignment.intervals, *gap_constant, c);
        if (std::holds_alternative<GapCase1>(*v.gap)) {
            log_cap = Real(v.fold) * shape.robots * std::log(*gap_constant) +
                      Real(shape.load_exponent()) * shape.robots * std::log(c.mu());
            log_growth = std::log(*gap_constant);
        }
    }
    if (log_cap && v.trace->log_delta > 0) {
        GrowthBudget<Real> b;
        b.log_cap = *log_cap;
        const auto& steps = v.trace->steps;
        b.log_potential = steps.empty() ? v.trace->initial_log_potential : steps.back().log_potential;
        b.steps_remaining =
            static_cast<long long>(std::max(Real(0), std::ceil((b.log_cap - b.log_potential) / v.trace->log_delta)));
        b.log_frontier_needed = std::log(v.trace->final_frontier) + Real(b.steps_remaining) * log_growth;
        v.budget = b;
    }
    return v;
}

}  // namespace detail

/**
 * Checks whether the team lambda-covers [1, N] with the multiplicity the
 * setting demands (s-fold symmetric cover on the line, q-fold for one-ray
 * cover with returns). On failure the verdict carries the leftmost deficient
 * point; otherwise the exact assignment is replayed through the potential
 * audit. gap_constant enables the bounded-gap test in the one-ray setting.
 */
template <std::floating_point Real>
Verdict<Real> refute(const std::vector<TurnSequence<Real>>& team, Real lambda, const InstanceParams& p, Real N,
                     Setting mode = Setting::line, std::optional<Real> gap_constant = std::nullopt) {
    if (mode == Setting::line) return detail::refute_team(team, lambda, p, N, mode, gap_constant);
    std::vector<RoundPlan<Real>> plans;
    for (const auto& t : team) plans.push_back(to_rounds(t));
    return detail::refute_team(plans, lambda, p, N, mode, gap_constant);
}

template <std::floating_point Real>
Verdict<Real> refute(const std::vector<RoundPlan<Real>>& team, Real lambda, const InstanceParams& p, Real N,
                     Setting mode = Setting::orc, std::optional<Real> gap_constant = std::nullopt) {
    if (mode == Setting::orc) return detail::refute_team(team, lambda, p, N, mode, gap_constant);
    return detail::refute_team(to_line(team), lambda, p, N, mode, gap_constant);
}

}  // namespace faultsearch

#endif
