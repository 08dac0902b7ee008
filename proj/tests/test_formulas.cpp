#include <gtest/gtest.h>

#include <cmath>

#include "faultsearch/formulas.hpp"
#include "oracles.hpp"

using namespace faultsearch;

TEST(Regime, Classification) {
    EXPECT_EQ((InstanceParams{2, 1, 0}.regime()), Regime::nontrivial);
    EXPECT_EQ((InstanceParams{2, 2, 0}.regime()), Regime::trivial);
    EXPECT_EQ((InstanceParams{2, 1, 1}.regime()), Regime::infeasible);
    EXPECT_EQ((InstanceParams{3, 2, 2}.regime()), Regime::infeasible);
}

TEST(Regime, ErrorsCarryKind) {
    try {
        ratio_lower_bound<double>(InstanceParams{2, 4, 1});
        FAIL();
    } catch (const RegimeError& e) {
        EXPECT_EQ(e.regime(), Regime::trivial);
        EXPECT_EQ(e.ratio(), 1.0);
    }
    try {
        ratio_lower_bound<double>(InstanceParams{2, 1, 1});
        FAIL();
    } catch (const RegimeError& e) {
        EXPECT_EQ(e.regime(), Regime::infeasible);
        EXPECT_TRUE(std::isnan(e.ratio()));
    }
    EXPECT_THROW(ratio_lower_bound<double>(InstanceParams{1, 1, 0}), std::invalid_argument);
}

TEST(RatioLowerBound, KnownValues) {
    EXPECT_NEAR(ratio_lower_bound<double>({2, 1, 0}), 9.0, 1e-12);
    EXPECT_NEAR(ratio_lower_bound<double>({2, 3, 1}), 8.0 / 3.0 * std::cbrt(4.0) + 1, 1e-12);
    EXPECT_NEAR(ratio_lower_bound<double>({2, 2, 1}), 9.0, 1e-12);
    EXPECT_NEAR(ratio_lower_bound<double>({3, 1, 0}), 14.5, 1e-12);
}

TEST(RatioLowerBound, MatchesPowerOracle) {
    for (int m = 2; m <= 5; ++m)
        for (int f = 0; f <= 3; ++f)
            for (int k = f + 1; k < m * (f + 1) && k <= 10; ++k) {
                const InstanceParams p{m, k, f};
                EXPECT_NEAR(ratio_lower_bound<double>(p), oracle::lambda0_by_powers(p.q(), k), 1e-9)
                    << m << ' ' << k << ' ' << f;
            }
}

TEST(RatioLowerBound, MonotoneInFaultsAndRobots) {
    for (int m = 2; m <= 5; ++m)
        for (int f = 0; f <= 3; ++f)
            for (int k = f + 1; k <= 10; ++k) {
                const InstanceParams p{m, k, f};
                if (p.regime() != Regime::nontrivial) continue;
                const double v = ratio_lower_bound<double>(p);
                const InstanceParams more_f{m, k, f + 1};
                if (more_f.regime() == Regime::nontrivial) {
                    EXPECT_LT(v, ratio_lower_bound<double>(more_f));
                }
                const InstanceParams more_k{m, k + 1, f};
                if (more_k.regime() == Regime::nontrivial) {
                    EXPECT_GT(v, ratio_lower_bound<double>(more_k));
                }
            }
}

TEST(RatioLowerBound, DependsOnlyOnQAndK) {
    for (int k = 2; k < 4; ++k)
        EXPECT_DOUBLE_EQ(ratio_lower_bound<double>({2, k, 1}), ratio_lower_bound<double>({4, k, 0}));
}

TEST(RatioLowerBound, LargeQStaysFinite) {
    const double v = ratio_lower_bound<double>({200, 150, 3});
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 1);
}

TEST(OptimalAlpha, KnownValues) {
    EXPECT_NEAR(optimal_alpha<double>({2, 1, 0}), 2.0, 1e-12);
    EXPECT_NEAR(optimal_alpha<double>({2, 3, 1}), std::cbrt(4.0), 1e-12);
    EXPECT_NEAR(optimal_alpha<double>({3, 1, 0}), 1.5, 1e-12);
}

TEST(OptimalAlpha, MinimizesStrategyCost) {
    for (auto p : {InstanceParams{2, 1, 0}, InstanceParams{2, 3, 1}, InstanceParams{3, 2, 0}, InstanceParams{4, 5, 1}}) {
        const int q = p.q(), k = p.k;
        auto cost = [&](double a) { return std::pow(a, q) / (std::pow(a, k) - 1); };
        const double found = oracle::golden_section(cost, 1.0 + 1e-9, 8.0);
        EXPECT_NEAR(optimal_alpha<double>(p), found, 1e-6);
        // 1 + 2 * min cost is the tight ratio.
        const double a = optimal_alpha<double>(p);
        EXPECT_NEAR(1 + 2 * std::pow(a, q) / (std::pow(a, k) - 1), ratio_lower_bound<double>(p), 1e-9);
    }
}

TEST(PolyMaxPoint, KnownValues) {
    EXPECT_DOUBLE_EQ(poly_max_point(1, 1, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(poly_max_point(2, 2, 4.0), 2.0);
    EXPECT_DOUBLE_EQ(poly_max_point(1, 3, 1.0), 0.25);
    EXPECT_THROW(poly_max_point(1, 1, 0.0), std::domain_error);
    EXPECT_THROW(poly_max_point(0, 1, 1.0), std::domain_error);
}

TEST(GrowthFactor, KnownValues) {
    EXPECT_NEAR(growth_factor_delta(1, 1, 4.0), 1.0, 1e-12);
    EXPECT_NEAR(growth_factor_delta(1, 1, 2.0), 2.0, 1e-12);
    for (int s = 1; s <= 4; ++s)
        for (int k = 1; k <= 4; ++k) {
            const double crit = critical_mu<double>(s, k);
            EXPECT_GT(growth_factor_delta(s, k, crit * 0.999), 1.0);
            EXPECT_LT(growth_factor_delta(s, k, crit * 1.001), 1.0);
            EXPECT_NEAR(growth_factor_delta(s, k, crit), 1.0, 1e-12);
        }
}

TEST(GrowthFactor, EqualsInverseMaxOfPolynomial) {
    // delta = 1 / max_x x^s (mu - x)^k / mu^s at mu* = mu.
    for (int s = 1; s <= 3; ++s)
        for (int k = 1; k <= 3; ++k) {
            const double mu = 2.5;
            const double x = poly_max_point(s, k, mu);
            const double ratio = std::pow(mu, s) / (std::pow(x, s) * std::pow(mu - x, k));
            EXPECT_NEAR(growth_factor_delta(s, k, mu), ratio, 1e-12 * ratio);
        }
}

TEST(Horizon, FiniteBelowTightRatio) {
    const InstanceParams p{2, 1, 0};
    auto h = horizon_estimate<double>(p, 8.0, 16.0);
    ASSERT_TRUE(h);
    EXPECT_GT(h->log_delta, 0);
    const double mu = 3.5;
    EXPECT_NEAR(h->log_cap, 2 * std::log(16.0) + std::log(mu), 1e-12);
    EXPECT_EQ(h->steps, static_cast<long long>(std::ceil(h->log_cap / h->log_delta)));
    EXPECT_NEAR(h->log_n, double(h->steps) * std::log(16.0), 1e-9);
}

TEST(Horizon, NoneAtOrAboveTightRatio) {
    const InstanceParams p{2, 1, 0};
    EXPECT_FALSE(horizon_estimate<double>(p, 9.0, 16.0));
    EXPECT_FALSE(horizon_estimate<double>(p, 10.0, 16.0));
    EXPECT_FALSE(line_horizon_estimate<double>(p, 9.0));
    EXPECT_THROW(horizon_estimate<double>(p, 8.0, 2.0), std::invalid_argument);
    const InstanceParams q{2, 3, 1};
    EXPECT_FALSE(horizon_estimate<double>(q, ratio_lower_bound<double>(q), 100.0));
}

TEST(Horizon, LineVariant) {
    const InstanceParams p{2, 3, 1};
    const double lam = 0.97 * ratio_lower_bound<double>(p);
    auto h = line_horizon_estimate<double>(p, lam);
    ASSERT_TRUE(h);
    const double mu = (lam - 1) / 2;
    EXPECT_NEAR(h->log_cap, 3 * 1 * std::log(mu), 1e-12);
    EXPECT_THROW(line_horizon_estimate<double>(InstanceParams{3, 1, 0}, 5.0), std::invalid_argument);
}

TEST(CoverParams, RejectsRatioAtMostOne) {
    EXPECT_THROW(CoverParams<double>(1.0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(CoverParams<double>(9.0).mu(), 4.0);
    EXPECT_DOUBLE_EQ(CoverParams<double>::from_mu(4.0).lambda, 9.0);
}

TEST(ExtendedPrecision, AgreesWithDouble) {
    const InstanceParams p{3, 4, 1};
    EXPECT_NEAR(double(ratio_lower_bound<long double>(p)), ratio_lower_bound<double>(p), 1e-12);
}
