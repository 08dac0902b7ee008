#ifndef FAULTSEARCH_FRACTIONAL_HPP
#define FAULTSEARCH_FRACTIONAL_HPP

/**
 * \file fractional.hpp
 *
 * Fractional one-ray cover: n robots with weights summing to 1 must cover
 * every point with total weight eta (a robot counts once per round that
 * covers the point). Its optimal ratio is C(eta) = 2 eta^eta/(eta-1)^{eta-1} + 1.
 * Rational weight vectors reduce to integer instances: with k_i/q close to
 * w_i/eta from above, k_i copies of robot i give a q-fold cover by
 * k = sum k_i robots.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "faultsearch/cover.hpp"
#include "faultsearch/formulas.hpp"
#include "faultsearch/strategy.hpp"

namespace faultsearch {

/// C(eta) for eta > 1, evaluated in log form.
template <std::floating_point Real = double>
Real fractional_ratio(Real eta) {
    if (!(eta > 1) || !std::isfinite(eta)) throw std::domain_error("fractional_ratio: eta must be finite and > 1");
    using detail::xlogx;
    return 2 * std::exp(xlogx(eta) - xlogx(eta - 1)) + 1;
}

template <std::floating_point Real = double>
struct FractionalInstance {
    std::vector<Real> weights;
    Real eta = 2;
    Real delta = 0;  ///< rationalization slack

    void validate() const {
        if (weights.empty()) throw std::invalid_argument("fractional instance: no weights");
        Real sum = 0;
        for (Real w : weights) {
            if (!(w > 0) || !std::isfinite(w)) throw std::invalid_argument("fractional instance: weights must be positive");
            sum += w;
        }
        if (std::abs(sum - 1) > Real(1e-12)) throw std::invalid_argument("fractional instance: weights must sum to 1");
        if (!(eta > 1) || !std::isfinite(eta)) throw std::domain_error("fractional instance: eta must be > 1");
        if (!(delta >= 0)) throw std::invalid_argument("fractional instance: delta must be nonnegative");
    }
};

template <std::floating_point Real = double>
struct Rationalization {
    long long q = 0;
    std::vector<long long> k_i;
    long long k = 0;
    /// eta - q/k: k/q = 1/(eta - epsilon).
    Real epsilon = 0;
};

class CapExceededError : public std::runtime_error {
public:
    CapExceededError(const std::string& what, std::size_t tightest) : std::runtime_error(what), tightest_(tightest) {}
    /// Index of the weight whose bracket rejected the last candidate.
    std::size_t tightest() const noexcept { return tightest_; }

private:
    std::size_t tightest_;
};

/**
 * Smallest q with integers k_i in [q w_i/eta, q (w_i/eta + delta)] for every
 * weight. Candidates are tried in order q = 1, 2, ...; bracket endpoints are
 * compared with a relative slack of 1e-12 so exact ratios such as 1/4 are not
 * lost to rounding.
 */
template <std::floating_point Real = double>
Rationalization<Real> rationalize_weights(const FractionalInstance<Real>& inst, long long cap = 1000000) {
    inst.validate();
    const Real slack = Real(1e-12);
    std::size_t last_failed = 0;
    std::vector<long long> k_i(inst.weights.size());
    for (long long q = 1; q <= cap; ++q) {
        bool ok = true;
        for (std::size_t i = 0; i < inst.weights.size(); ++i) {
            const Real lo = Real(q) * inst.weights[i] / inst.eta;
            const Real hi = Real(q) * (inst.weights[i] / inst.eta + inst.delta);
            const Real ki = std::ceil(lo * (1 - slack));
            if (ki > hi * (1 + slack)) {
                ok = false;
                last_failed = i;
                break;
            }
            k_i[i] = static_cast<long long>(ki);
        }
        if (!ok) continue;
        Rationalization<Real> r;
        r.q = q;
        r.k_i = k_i;
        for (auto v : k_i) r.k += v;
        r.epsilon = inst.eta - Real(q) / Real(r.k);
        return r;
    }
    throw CapExceededError("rationalize_weights: no denominator up to " + std::to_string(cap) +
                               "; tightest bracket is weight " + std::to_string(last_failed),
                           last_failed);
}

/// k_i copies of weighted robot i's plan, in weight order.
template <std::floating_point Real = double>
std::vector<RoundPlan<Real>> lift_strategy(const std::vector<RoundPlan<Real>>& weighted, const Rationalization<Real>& r) {
    if (weighted.size() != r.k_i.size())
        throw ConfigurationError("lift_strategy: " + std::to_string(weighted.size()) + " plans for " +
                                 std::to_string(r.k_i.size()) + " weights");
    std::vector<RoundPlan<Real>> out;
    for (std::size_t i = 0; i < weighted.size(); ++i)
        for (long long c = 0; c < r.k_i[i]; ++c) out.push_back(weighted[i]);
    return out;
}

/// Leftmost point of (lo, hi] whose covering weight is below eta.
template <std::floating_point Real = double>
std::optional<Real> verify_weighted_cover(const std::vector<RoundPlan<Real>>& plans, const std::vector<Real>& weights,
                                          const CoverParams<Real>& c, Real eta, Real lo, Real hi) {
    if (plans.size() != weights.size()) throw ConfigurationError("verify_weighted_cover: arity mismatch");
    std::vector<std::pair<Real, Real>> events;
    Real level = 0;
    for (std::size_t r = 0; r < plans.size(); ++r) {
        for (const auto& iv : cover_intervals(plans[r], c, static_cast<int>(r))) {
            if (!(iv.right > lo) || !(iv.right > iv.left)) continue;
            if (iv.left <= lo)
                level += weights[r];
            else
                events.emplace_back(iv.left, weights[r]);
            events.emplace_back(iv.right, -weights[r]);
        }
    }
    std::sort(events.begin(), events.end());
    const Real need = eta * (1 - Real(1e-12));
    Real at = lo;
    for (std::size_t i = 0;;) {
        if (level < need) return at;
        if (i == events.size()) return std::nullopt;
        at = events[i].first;
        if (!(at < hi)) return std::nullopt;
        while (i < events.size() && events[i].first == at) level += events[i++].second;
    }
}

}  // namespace faultsearch

#endif
