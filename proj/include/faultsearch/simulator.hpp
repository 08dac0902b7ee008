#ifndef FAULTSEARCH_SIMULATOR_HPP
#define FAULTSEARCH_SIMULATOR_HPP

/**
 * \file simulator.hpp
 *
 * Unit-speed trajectory evaluation against a crash-fault adversary.
 *
 * The adversary places the target and declares the first f distinct robots
 * that reach it faulty, so detection happens at the (f+1)-st distinct first
 * visit. Between consecutive turning distances on a ray the detection time
 * is c + x with c constant, so tau(x)/x is decreasing on each piece and the
 * supremum over [1, N] is attained at x = 1 or as a right limit just above a
 * turning distance. worst_ratio() evaluates exactly those points.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "faultsearch/formulas.hpp"
#include "faultsearch/strategy.hpp"

namespace faultsearch {

/// A target at distance x on a ray (line: ray 1 is +x, ray 2 is -x).
template <std::floating_point Real = double>
struct Target {
    int ray = 1;
    Real x = 1;

    friend bool operator==(const Target&, const Target&) = default;
};

template <std::floating_point Real = double>
struct Visit {
    int robot = 0;
    Real time = 0;
};

template <std::floating_point Real = double>
struct DetectionReport {
    Real tau = 0;
    std::vector<Visit<Real>> visitors;  ///< every robot that reaches the target, by (time, robot)
    Real ratio = 0;
};

namespace detail {

template <std::floating_point Real>
bool reaches(Real turn, Real x, bool just_above) {
    return just_above ? turn > x : turn >= x;
}

}  // namespace detail

/// Earliest time the line trajectory reaches the target. With just_above,
/// a leg reaches x only if it turns strictly beyond x.
template <std::floating_point Real>
std::optional<Real> first_visit_time(const TurnSequence<Real>& t, const Target<Real>& target, bool just_above) {
    const int side = target.ray == 1 ? 1 : -1;
    Real before = 0;
    for (std::size_t i = 0; i <= t.turns.size(); ++i) {
        const Real reach = i < t.turns.size() ? t.turns[i] : std::numeric_limits<Real>::infinity();
        if (t.side(i) == side && detail::reaches(reach, target.x, just_above)) return 2 * before + target.x;
        if (i < t.turns.size()) before += t.turns[i];
    }
    return std::nullopt;
}

/// Earliest time the round plan reaches the target; none if no round on
/// that ray goes far enough.
template <std::floating_point Real>
std::optional<Real> first_visit_time(const RoundPlan<Real>& plan, const Target<Real>& target, bool just_above) {
    Real before = 0;
    for (const auto& r : plan.rounds) {
        if (r.ray == target.ray && detail::reaches(r.turn, target.x, just_above)) return 2 * before + target.x;
        before += r.turn;
    }
    return std::nullopt;
}

/**
 * Detection time against the adversary that silences the first f visitors:
 * the (f+1)-st smallest first-visit time. Returns nullopt when fewer than
 * f+1 robots ever reach the target.
 */
template <class Strategy, std::floating_point Real>
std::optional<DetectionReport<Real>> detection_time(const std::vector<Strategy>& team, const InstanceParams& p,
                                                    const Target<Real>& target, bool just_above) {
    DetectionReport<Real> report;
    for (std::size_t r = 0; r < team.size(); ++r)
        if (auto t = first_visit_time(team[r], target, just_above))
            report.visitors.push_back({static_cast<int>(r), *t});
    std::sort(report.visitors.begin(), report.visitors.end(), [](const auto& a, const auto& b) {
        return a.time != b.time ? a.time < b.time : a.robot < b.robot;
    });
    const auto needed = static_cast<std::size_t>(p.f) + 1;
    if (report.visitors.size() < needed) return std::nullopt;
    report.tau = report.visitors[needed - 1].time;
    report.ratio = report.tau / target.x;
    return report;
}

namespace detail {

template <std::floating_point Real>
void collect_turns(const TurnSequence<Real>& t, int ray, std::vector<Real>& out) {
    const int side = ray == 1 ? 1 : -1;
    for (std::size_t i = 0; i < t.turns.size(); ++i)
        if (t.side(i) == side) out.push_back(t.turns[i]);
}

template <std::floating_point Real>
void collect_turns(const RoundPlan<Real>& plan, int ray, std::vector<Real>& out) {
    for (const auto& r : plan.rounds)
        if (r.ray == ray && std::isfinite(r.turn)) out.push_back(r.turn);
}

template <class Strategy>
struct real_of;
template <std::floating_point Real>
struct real_of<TurnSequence<Real>> {
    using type = Real;
};
template <std::floating_point Real>
struct real_of<RoundPlan<Real>> {
    using type = Real;
};

}  // namespace detail

/// Turning distances on a ray across the team: the breakpoints of tau(x).
template <class Strategy>
auto breakpoints(const std::vector<Strategy>& team, int ray) {
    using Real = typename detail::real_of<Strategy>::type;
    std::vector<Real> out;
    for (const auto& s : team) detail::collect_turns(s, ray, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// One evaluated target; undetected rows carry an infinite tau and ratio.
template <std::floating_point Real = double>
struct SweepRow {
    Target<Real> target;
    bool just_above = false;
    Real tau = 0;
    Real ratio = 0;
    std::vector<int> robot_order;  ///< visitors by arrival

    bool detected() const { return std::isfinite(tau); }
};

namespace detail {

template <class Strategy, std::floating_point Real>
SweepRow<Real> evaluate(const std::vector<Strategy>& team, const InstanceParams& p, Target<Real> target,
                        bool just_above) {
    SweepRow<Real> row{target, just_above, std::numeric_limits<Real>::infinity(),
                       std::numeric_limits<Real>::infinity(), {}};
    if (auto rep = detection_time(team, p, target, just_above)) {
        row.tau = rep->tau;
        row.ratio = rep->ratio;
        for (const auto& v : rep->visitors) row.robot_order.push_back(v.robot);
    }
    return row;
}

}  // namespace detail

/// Rays a team is evaluated on: 2 for line strategies, p.m for round plans.
template <class Strategy>
int ray_count(const InstanceParams& p) {
    using Real = typename detail::real_of<Strategy>::type;
    return std::is_same_v<Strategy, TurnSequence<Real>> ? 2 : p.m;
}

/// The candidate points of the supremum on every ray: x = 1 and just above
/// each turning distance in [1, N).
template <class Strategy, std::floating_point Real>
std::vector<SweepRow<Real>> sweep_breakpoints(const std::vector<Strategy>& team, const InstanceParams& p, Real N) {
    if (!(N >= 1)) throw std::invalid_argument("sweep: N must be at least 1");
    std::vector<SweepRow<Real>> rows;
    for (int ray = 1; ray <= ray_count<Strategy>(p); ++ray) {
        rows.push_back(detail::evaluate(team, p, Target<Real>{ray, Real(1)}, false));
        for (Real b : breakpoints(team, ray))
            if (b >= 1 && b < N) rows.push_back(detail::evaluate(team, p, Target<Real>{ray, b}, true));
    }
    return rows;
}

/// Geometric grid 1, (1+step), (1+step)^2, ... up to N on every ray, plus N.
template <class Strategy, std::floating_point Real>
std::vector<SweepRow<Real>> sweep_grid(const std::vector<Strategy>& team, const InstanceParams& p, Real N,
                                       Real relative_step) {
    if (!(relative_step > 0)) throw std::invalid_argument("sweep: grid step must be positive");
    std::vector<SweepRow<Real>> rows;
    for (int ray = 1; ray <= ray_count<Strategy>(p); ++ray) {
        for (long long i = 0;; ++i) {
            const Real x = std::pow(1 + relative_step, Real(i));
            if (x >= N) break;
            rows.push_back(detail::evaluate(team, p, Target<Real>{ray, x}, false));
        }
        rows.push_back(detail::evaluate(team, p, Target<Real>{ray, N}, false));
    }
    return rows;
}

template <std::floating_point Real = double>
struct WorstRatio {
    Real ratio = 0;  ///< +inf if some point is never detected
    Target<Real> witness;
    bool just_above = false;

    bool detected() const { return std::isfinite(ratio); }
};

/**
 * Exact sup of tau(x)/x over targets at distance [1, N] on every ray. The
 * witness is the maximizing breakpoint (a right limit when just_above) or
 * the first undetected point.
 */
template <class Strategy, std::floating_point Real>
WorstRatio<Real> worst_ratio(const std::vector<Strategy>& team, const InstanceParams& p, Real N) {
    WorstRatio<Real> best;
    bool first = true;
    for (const auto& row : sweep_breakpoints(team, p, N)) {
        if (first || row.ratio > best.ratio) {
            best = {row.ratio, row.target, row.just_above};
            first = false;
        }
        if (!row.detected()) break;
    }
    return best;
}

}  // namespace faultsearch

#endif
