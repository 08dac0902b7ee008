#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "faultsearch/fractional.hpp"
#include "faultsearch/formulas.hpp"
#include "oracles.hpp"

using namespace faultsearch;

TEST(FractionalRatio, KnownValues) {
    EXPECT_NEAR(fractional_ratio(2.0), 9.0, 1e-12);
    EXPECT_NEAR(fractional_ratio(1.5), 2 * std::pow(1.5, 1.5) / std::sqrt(0.5) + 1, 1e-12);
    EXPECT_THROW(fractional_ratio(1.0), std::domain_error);
    EXPECT_THROW(fractional_ratio(0.5), std::domain_error);
}

TEST(FractionalRatio, MatchesIntegerInstances) {
    for (int q = 2; q <= 20; ++q)
        for (int k = 1; k < q; ++k)
            EXPECT_NEAR(fractional_ratio(double(q) / k), ratio_lower_bound<double>(InstanceParams{q, k, 0}), 1e-10)
                << q << '/' << k;
}

TEST(FractionalRatio, StrictlyIncreasing) {
    double prev = fractional_ratio(1.0001);
    for (double eta = 1.01; eta < 30; eta += 0.01) {
        const double v = fractional_ratio(eta);
        EXPECT_GT(v, prev) << eta;
        prev = v;
    }
}

TEST(Rationalize, Examples) {
    auto r = rationalize_weights(FractionalInstance<double>{{1.0}, 2.0, 0.0});
    EXPECT_EQ(r.q, 2);
    EXPECT_EQ(r.k_i, (std::vector<long long>{1}));
    EXPECT_NEAR(r.epsilon, 0.0, 1e-15);

    r = rationalize_weights(FractionalInstance<double>{{0.5, 0.5}, 2.0, 0.01});
    EXPECT_EQ(r.q, 4);
    EXPECT_EQ(r.k_i, (std::vector<long long>{1, 1}));
    EXPECT_EQ(r.k, 2);
}

TEST(Rationalize, SmallestDenominatorByBruteForce) {
    const FractionalInstance<double> inst{{1.0 / 3, 2.0 / 3}, 1.5, 0.001};
    const auto r = rationalize_weights(inst);
    auto ok = [&](long long q) {
        for (double w : inst.weights) {
            bool found = false;
            for (long long k = 0; k <= q; ++k) {
                const double v = double(k) / q;
                if (v >= w / inst.eta - 1e-12 && v <= w / inst.eta + inst.delta + 1e-12) found = true;
            }
            if (!found) return false;
        }
        return true;
    };
    EXPECT_TRUE(ok(r.q));
    for (long long q = 1; q < r.q; ++q) EXPECT_FALSE(ok(q)) << q;
    for (std::size_t i = 0; i < inst.weights.size(); ++i) {
        const double v = double(r.k_i[i]) / r.q;
        EXPECT_GE(v, inst.weights[i] / inst.eta - 1e-12);
        EXPECT_LE(v, inst.weights[i] / inst.eta + inst.delta + 1e-12);
    }
    EXPECT_GE(double(r.k) / r.q, 1 / inst.eta - 1e-12);
    EXPECT_NEAR(double(r.k) / r.q, 1 / (inst.eta - r.epsilon), 1e-12);
}

TEST(Rationalize, CapExceeded) {
    const FractionalInstance<double> inst{{1 / std::sqrt(2.0), 1 - 1 / std::sqrt(2.0)}, 1.7, 0.0};
    try {
        rationalize_weights(inst, 1000);
        FAIL();
    } catch (const CapExceededError& e) {
        EXPECT_LT(e.tightest(), 2u);
    }
    EXPECT_THROW(rationalize_weights(FractionalInstance<double>{{0.5, 0.4}, 2.0, 0.0}), std::invalid_argument);
}

TEST(Lift, CopiesPlans) {
    const std::vector<RoundPlan<double>> plans{{{{1, 1.0}}}, {{{1, 2.0}}}};
    Rationalization<double> r;
    r.q = 5;
    r.k_i = {2, 1};
    const auto lifted = lift_strategy(plans, r);
    ASSERT_EQ(lifted.size(), 3u);
    EXPECT_EQ(lifted[1], plans[0]);
    EXPECT_EQ(lifted[2], plans[1]);
    r.k_i = {1};
    EXPECT_THROW(lift_strategy(plans, r), ConfigurationError);
}

TEST(Lift, WeightedCoverBecomesIntegerCover) {
    // One weight-1 robot running doubling on the one ray covers with weight 2
    // at lambda 9; its lift is the integer (q=2,k=1) instance.
    const double lam = 9.0 + 1e-9;
    const CoverParams<double> c(lam);
    RoundPlan<double> dbl;
    for (int i = -1; i < 20; ++i) dbl.rounds.push_back({1, std::ldexp(1.0, i)});
    EXPECT_FALSE(verify_weighted_cover<double>({dbl}, {1.0}, c, 2.0, 1.0, 1e5));
    const auto r = rationalize_weights(FractionalInstance<double>{{1.0}, 2.0, 0.0});
    const auto lifted = lift_strategy<double>({dbl}, r);
    EXPECT_FALSE(verify_multicover(cover_intervals(lifted, c), static_cast<int>(r.q), 1.0, 1e5));

    // Two half-weight robots, each running the exponential strategy of the
    // (q=4, k=2) instance shifted per robot; weight 2 needed.
    const InstanceParams p{4, 2, 0};
    const auto team = make_exponential_strategy<double>(p, optimal_alpha<double>(p), 1e4);
    const CoverParams<double> c2(ratio_lower_bound<double>(p) + 0.01);
    const std::vector<double> w{0.5, 0.5};
    EXPECT_FALSE(verify_weighted_cover(team, w, c2, 2.0, 1.0, 1e4));
    const auto r2 = rationalize_weights(FractionalInstance<double>{w, 2.0, 0.0});
    const auto lifted2 = lift_strategy(team, r2);
    EXPECT_FALSE(verify_multicover(cover_intervals(lifted2, c2), static_cast<int>(r2.q), 1.0, 1e4));
    EXPECT_NEAR(fractional_ratio(double(r2.q) / r2.k), ratio_lower_bound<double>(p), 1e-10);
}

TEST(Lift, SplittingWeightKeepsTheRatio) {
    // k equal copies of the one-robot doubling strategy, each with weight 1/k.
    for (int k = 1; k <= 4; ++k) {
        RoundPlan<double> dbl;
        for (int i = -1; i < 16; ++i) dbl.rounds.push_back({1 + (i + 1) % 2, std::ldexp(1.0, i)});
        const std::vector<RoundPlan<double>> plans(k, dbl);
        const std::vector<double> w(k, 1.0 / k);
        const CoverParams<double> c(9.0 + 1e-9);
        EXPECT_FALSE(verify_weighted_cover(plans, w, c, 2.0, 1.0, 1e4));
        EXPECT_TRUE(verify_weighted_cover(plans, w, CoverParams<double>(8.5), 2.0, 1.0, 1e4));
    }
}
