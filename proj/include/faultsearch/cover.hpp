#ifndef FAULTSEARCH_COVER_HPP
#define FAULTSEARCH_COVER_HPP

/**
 * \file cover.hpp
 *
 * Multicover verification and exact-multiplicity assignment.
 *
 * Intervals are read as half-open (left, right]; single points where only a
 * closed left endpoint would add coverage carry no measure and are ignored.
 * All endpoint comparisons are exact.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "faultsearch/strategy.hpp"

namespace faultsearch {

/// (t', t]: the part of a turn's cover interval kept so that every point is
/// counted exactly q times. cover_left is the untruncated t''.
template <std::floating_point Real = double>
struct AssignedInterval {
    int robot = 0;
    int round = 0;
    Real left = 0;   ///< t'
    Real right = 0;  ///< t, also the turning distance
    Real cover_left = 0;

    friend bool operator==(const AssignedInterval&, const AssignedInterval&) = default;
};

/// The point x is covered only found < required times just above x.
template <std::floating_point Real = double>
struct Witness {
    Real point = 1;
    int found = 0;
    int required = 0;
};

class DeficiencyError : public std::runtime_error {
public:
    DeficiencyError(double point, int found, int required)
        : std::runtime_error("coverage deficient just above " + std::to_string(point) + ": found " +
                             std::to_string(found) + " of " + std::to_string(required)),
          point_(point), found_(found), required_(required) {}

    double point() const noexcept { return point_; }
    int found() const noexcept { return found_; }
    int required() const noexcept { return required_; }

private:
    double point_;
    int found_;
    int required_;
};

/**
 * Sweep-line multiplicity check: returns nullopt if every point of (lo, hi]
 * lies in at least q intervals, otherwise the leftmost deficient point (the
 * start of the first deficient elementary segment).
 */
template <class Interval>
auto verify_multicover(const std::vector<Interval>& intervals, int q, decltype(Interval::left) lo,
                       decltype(Interval::left) hi) -> std::optional<Witness<decltype(Interval::left)>> {
    using Real = decltype(Interval::left);
    if (q <= 0 || !(hi > lo)) return std::nullopt;

    // +1 at a left endpoint, -1 at a right endpoint; both act just above x.
    std::vector<std::pair<Real, int>> events;
    int count = 0;
    for (const auto& iv : intervals) {
        if (!(iv.right > iv.left)) continue;
        if (iv.left <= lo) {
            if (iv.right > lo) {
                ++count;
                events.emplace_back(iv.right, -1);
            }
        } else {
            events.emplace_back(iv.left, +1);
            events.emplace_back(iv.right, -1);
        }
    }
    std::sort(events.begin(), events.end());

    Real at = lo;
    std::size_t i = 0;
    for (;;) {
        if (count < q) return Witness<Real>{at, count, q};
        if (i == events.size()) return std::nullopt;
        at = events[i].first;
        if (!(at < hi)) return std::nullopt;
        while (i < events.size() && events[i].first == at) count += events[i++].second;
    }
}

/// Exact-q assignment plus, per robot, the load of turns that precede its
/// assigned intervals (rounds whose cover lies at or below 1).
template <std::floating_point Real = double>
struct Assignment {
    std::vector<AssignedInterval<Real>> intervals;
    std::map<int, Real> base_load;
};

/**
 * Truncates cover intervals so that every point of (1, N] is covered exactly
 * q times and no point more than q times.
 *
 * Sweeping upward from 1, whenever fewer than q assigned intervals are
 * active at x, the available interval with the smallest right endpoint is
 * started at t' = x; intervals with larger right endpoints keep their left
 * endpoints raised and stay available. Ties go to the lower robot id, then
 * the earlier round. Intervals that end before they are needed are skipped.
 * With nondecreasing turns per robot this keeps t' and t monotone per robot.
 *
 * Throws DeficiencyError if the input does not q-cover (1, N].
 */
template <std::floating_point Real = double>
Assignment<Real> exact_q_assignment(const std::vector<CoverInterval<Real>>& cover, int q, Real N) {
    Assignment<Real> out;
    if (q <= 0) return out;
    if (auto w = verify_multicover(cover, q, Real(1), N)) throw DeficiencyError(double(w->point), w->found, q);

    std::vector<const CoverInterval<Real>*> pending;
    for (const auto& c : cover) {
        if (c.right <= 1)
            out.base_load[c.robot] += c.right;
        else
            pending.push_back(&c);
    }
    const auto avail = [](const CoverInterval<Real>* c) { return std::max(c->left, Real(1)); };
    std::sort(pending.begin(), pending.end(), [&](auto* a, auto* b) { return avail(a) < avail(b); });

    std::vector<Real> positions{Real(1)};
    for (auto* c : pending) {
        positions.push_back(avail(c));
        positions.push_back(c->right);
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

    using Key = std::tuple<Real, int, int, const CoverInterval<Real>*>;
    std::set<Key> pool;
    std::priority_queue<Real, std::vector<Real>, std::greater<>> active;
    std::size_t next = 0;
    for (Real x : positions) {
        while (!active.empty() && active.top() <= x) active.pop();
        while (next < pending.size() && avail(pending[next]) <= x) {
            auto* c = pending[next++];
            pool.emplace(c->right, c->robot, c->round, c);
        }
        while (!pool.empty() && std::get<0>(*pool.begin()) <= x) pool.erase(pool.begin());
        while (static_cast<int>(active.size()) < q && !pool.empty()) {
            auto* c = std::get<3>(*pool.begin());
            pool.erase(pool.begin());
            out.intervals.push_back({c->robot, c->round, x, c->right, c->left});
            active.push(c->right);
        }
        if (static_cast<int>(active.size()) < q && x < N)
            throw std::logic_error("exact_q_assignment: sweep fell short on a verified cover");
    }
    std::sort(out.intervals.begin(), out.intervals.end(), [](const auto& a, const auto& b) {
        return std::tie(a.robot, a.round) < std::tie(b.robot, b.round);
    });
    return out;
}

class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Assigned intervals in stream order: sorted by (left endpoint, robot,
 * round). Prefix P_j is order[0 .. initial + j); P_0 is the shortest prefix
 * that holds an interval of every robot 0..k-1.
 */
template <std::floating_point Real = double>
struct PrefixStream {
    std::vector<AssignedInterval<Real>> order;
    std::size_t initial = 0;

    std::size_t prefix_count() const { return order.size() - initial + 1; }
    std::size_t prefix_size(std::size_t j) const { return initial + j; }
};

template <std::floating_point Real = double>
PrefixStream<Real> prefix_stream(const std::vector<AssignedInterval<Real>>& assigned, int k) {
    PrefixStream<Real> s;
    s.order = assigned;
    std::sort(s.order.begin(), s.order.end(), [](const auto& a, const auto& b) {
        return std::tie(a.left, a.robot, a.round) < std::tie(b.left, b.robot, b.round);
    });
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    int missing = k;
    for (std::size_t i = 0; i < s.order.size() && missing > 0; ++i) {
        const int r = s.order[i].robot;
        if (r < 0 || r >= k) throw ConfigurationError("prefix_stream: robot id out of range");
        if (!seen[r]) {
            seen[r] = true;
            --missing;
        }
        s.initial = i + 1;
    }
    if (missing > 0) {
        const auto r = std::find(seen.begin(), seen.end(), false) - seen.begin();
        throw ConfigurationError("prefix_stream: robot " + std::to_string(r) +
                                 " has no assigned interval; drop it and reduce k");
    }
    return s;
}

/// Robots holding at least one assigned interval, ascending.
template <std::floating_point Real = double>
std::vector<int> active_robots(const std::vector<AssignedInterval<Real>>& assigned) {
    std::set<int> ids;
    for (const auto& a : assigned) ids.insert(a.robot);
    return {ids.begin(), ids.end()};
}

}  // namespace faultsearch

#endif
