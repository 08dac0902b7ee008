#ifndef FAULTSEARCH_FORMULAS_HPP
#define FAULTSEARCH_FORMULAS_HPP

/**
 * \file formulas.hpp
 *
 * Closed-form quantities for searching m rays with k robots of which f may
 * crash: the tight competitive ratio, the optimal base of the cyclic
 * exponential strategy, the maximizer behind the per-step growth bound, the
 * growth factor of the potential, and finite horizons for the refuter.
 *
 * Every product of powers is evaluated as a sum of logarithms; q^q already
 * overflows a double near q = 170.
 */

#include <cmath>
#include <concepts>
#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace faultsearch {

enum class Regime {
    nontrivial,  ///< f < k < q
    trivial,     ///< k >= q: f+1 robots per ray give ratio 1
    infeasible,  ///< k <= f: every robot may be faulty
};

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::nontrivial: return "nontrivial";
    case Regime::trivial: return "trivial";
    case Regime::infeasible: return "infeasible";
    }
    return "?";
}

/// Raised by the bound computations outside f < k < q.
class RegimeError : public std::domain_error {
public:
    explicit RegimeError(Regime r)
        : std::domain_error(r == Regime::trivial
                                ? "trivial regime (k >= m(f+1)): competitive ratio 1"
                                : "infeasible regime (k <= f): all robots may be faulty"),
          regime_(r) {}

    Regime regime() const noexcept { return regime_; }
    /// Ratio carried by the trivial-case signal; NaN when infeasible.
    double ratio() const noexcept {
        return regime_ == Regime::trivial ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    }

private:
    Regime regime_;
};

/// Problem sizes: m rays, k robots, f crash-faulty robots.
struct InstanceParams {
    int m = 2;
    int k = 1;
    int f = 0;

    /// Required coverage multiplicity over all rays, m(f+1).
    constexpr int q() const noexcept { return m * (f + 1); }
    /// Fold deficit q - k.
    constexpr int s() const noexcept { return q() - k; }
    double rho() const noexcept { return static_cast<double>(q()) / k; }

    constexpr Regime regime() const noexcept {
        if (k <= f) return Regime::infeasible;
        if (k >= q()) return Regime::trivial;
        return Regime::nontrivial;
    }

    void validate() const {
        if (m < 2) throw std::invalid_argument("m must be at least 2, got " + std::to_string(m));
        if (k < 1) throw std::invalid_argument("k must be at least 1, got " + std::to_string(k));
        if (f < 0) throw std::invalid_argument("f must be nonnegative, got " + std::to_string(f));
    }

    void require_nontrivial() const {
        validate();
        if (auto r = regime(); r != Regime::nontrivial) throw RegimeError(r);
    }

    friend constexpr bool operator==(const InstanceParams&, const InstanceParams&) = default;
};

/// lambda and the derived per-unit slack mu = (lambda - 1) / 2.
template <std::floating_point Real = double>
struct CoverParams {
    Real lambda;

    explicit CoverParams(Real lam) : lambda(lam) {
        if (!(lam > Real(1)))
            throw std::invalid_argument("competitive ratio must exceed 1");
    }
    static CoverParams from_mu(Real mu) { return CoverParams(2 * mu + 1); }

    Real mu() const noexcept { return (lambda - 1) / 2; }
};

namespace detail {

template <std::floating_point Real>
Real xlogx(Real x) {
    return x > 0 ? x * std::log(x) : Real(0);
}

}  // namespace detail

/// log of ((k+s)^{k+s} / (s^s k^k))^{1/k}, with 0^0 = 1. s and k need not be
/// integral.
template <std::floating_point Real = double>
Real log_critical_mu(Real s, Real k) {
    using detail::xlogx;
    return (xlogx(k + s) - xlogx(s) - xlogx(k)) / k;
}

/// The critical slack ((k+s)^{k+s}/(s^s k^k))^{1/k}: the potential's growth
/// factor is exactly 1 there.
template <std::floating_point Real = double>
Real critical_mu(Real s, Real k) {
    return std::exp(log_critical_mu(s, k));
}

/// mu(q, k) = ((q^q / ((q-k)^{q-k} k^k))^{1/k}; depends on q/k only.
template <std::floating_point Real = double>
Real mu_qk(Real q, Real k) {
    return critical_mu<Real>(q - k, k);
}

/// Tight competitive ratio 2 mu(q,k) + 1 for m rays, k robots, f faults.
template <std::floating_point Real = double>
Real ratio_lower_bound(const InstanceParams& p) {
    p.require_nontrivial();
    return 2 * mu_qk<Real>(p.q(), p.k) + 1;
}

/// Base alpha = (q/(q-k))^{1/k} minimizing alpha^q / (alpha^k - 1).
template <std::floating_point Real = double>
Real optimal_alpha(const InstanceParams& p) {
    p.require_nontrivial();
    const Real q = p.q();
    const Real s = p.s();
    return std::exp((std::log(q) - std::log(s)) / Real(p.k));
}

/// Maximizer s*mu_star/(k+s) of x^s (mu_star - x)^k on (0, mu_star).
template <std::floating_point Real = double>
Real poly_max_point(int s, int k, Real mu_star) {
    if (s < 1 || k < 1) throw std::domain_error("poly_max_point: s and k must be positive");
    if (!(mu_star > 0)) throw std::domain_error("poly_max_point: mu_star must be positive");
    return Real(s) * mu_star / Real(k + s);
}

/// log delta with delta = (k+s)^{k+s} / (s^s k^k mu^k).
template <std::floating_point Real = double>
Real log_growth_factor(int s, int k, Real mu) {
    if (s < 1 || k < 1) throw std::domain_error("growth_factor_delta: s and k must be positive");
    if (!(mu > 0)) throw std::domain_error("growth_factor_delta: mu must be positive");
    return Real(k) * (log_critical_mu<Real>(s, k) - std::log(mu));
}

/// Per-step growth factor delta of the potential; delta > 1 iff mu is below
/// critical_mu(s, k).
template <std::floating_point Real = double>
Real growth_factor_delta(int s, int k, Real mu) {
    return std::exp(log_growth_factor(s, k, mu));
}

/// A finite horizon N = exp(log_n), kept in log form since it routinely
/// exceeds the double range.
template <std::floating_point Real = double>
struct Horizon {
    Real log_n;
    long long steps;  ///< bound on the number of potential increments
    Real log_delta;
    Real log_cap;     ///< log of the potential's upper bound

    Real value() const { return std::exp(log_n); }  // may be +inf
};

/**
 * Horizon for the returns-to-origin relaxation when consecutive left
 * endpoints of every robot grow by at most C (the bounded-gap case).
 *
 * The potential is capped by C^{qk} mu^{(q-k)k}, grows by at least delta per
 * added interval, and the uncovered frontier moves by at most a factor C per
 * interval. With the initial potential normalized to f0 = 1 this gives
 * N = C^{n_max}, n_max = ceil((qk ln C + (q-k)k ln mu) / ln delta).
 *
 * Returns nullopt when no finite horizon exists (lambda >= lambda_0, i.e.
 * delta <= 1).
 */
template <std::floating_point Real = double>
std::optional<Horizon<Real>> horizon_estimate(const InstanceParams& p, Real lambda, Real C) {
    p.require_nontrivial();
    const CoverParams<Real> cp(lambda);
    const Real mu = cp.mu();
    if (!(C > mu)) throw std::invalid_argument("horizon_estimate: C must exceed mu");
    if (lambda >= ratio_lower_bound<Real>(p)) return std::nullopt;
    const int q = p.q();
    const int k = p.k;
    const Real log_delta = log_growth_factor<Real>(q - k, k, mu);
    if (!(log_delta > 0)) return std::nullopt;
    const Real log_cap = Real(q) * k * std::log(C) + Real(q - k) * k * std::log(mu);
    const Real log_f0 = 0;
    const Real n_max = std::ceil((log_cap - log_f0) / log_delta);
    return Horizon<Real>{n_max * std::log(C), static_cast<long long>(n_max), log_delta, log_cap};
}

/**
 * Horizon for the symmetric line cover (m = 2). No gap constant is needed:
 * a new interval ends before mu times the frontier, so the frontier grows by
 * at most mu per step, and the potential is capped by mu^{ks}.
 */
template <std::floating_point Real = double>
std::optional<Horizon<Real>> line_horizon_estimate(const InstanceParams& p, Real lambda) {
    p.require_nontrivial();
    if (p.m != 2) throw std::invalid_argument("line horizon needs m = 2");
    const Real mu = CoverParams<Real>(lambda).mu();
    if (lambda >= ratio_lower_bound<Real>(p)) return std::nullopt;
    const int s = p.s();
    const int k = p.k;
    const Real log_delta = log_growth_factor<Real>(s, k, mu);
    if (!(log_delta > 0)) return std::nullopt;
    const Real log_cap = Real(k) * s * std::log(mu);
    const Real n_max = std::max(Real(1), std::ceil(log_cap / log_delta));
    return Horizon<Real>{n_max * std::log(std::max(mu, Real(1))), static_cast<long long>(n_max),
                         log_delta, log_cap};
}

}  // namespace faultsearch

#endif
