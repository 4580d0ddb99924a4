#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nflab/firing.hpp"
#include "oracles.hpp"

using namespace nflab;

TEST(FiringRate, ValuesAtThreshold) {
    const FiringRate fr;
    EXPECT_DOUBLE_EQ(f_eval(fr, 0.0, 0), 0.5);
    EXPECT_DOUBLE_EQ(f_eval(fr, 0.0, 1), 0.25);
    EXPECT_NEAR(f_eval(fr, 0.0, 2), 0.0, 1e-17);
    EXPECT_THROW(f_eval(fr, 0.0, 3), std::invalid_argument);
}

TEST(FiringRate, DerivativesMatchFiniteDifferences) {
    for (double beta : {1.0, 4.0, 12.0}) {
        const FiringRate fr(beta, 0.3);
        for (double x = -3.0; x <= 3.0; x += 0.37) {
            const double h = 1e-5;
            const double d1 = (fr.value(x + h) - fr.value(x - h)) / (2 * h);
            const double d2 = (fr.derivative(x + h, 1) - fr.derivative(x - h, 1)) / (2 * h);
            EXPECT_NEAR(fr.derivative(x, 1), d1, 1e-8 * beta * beta);
            EXPECT_NEAR(fr.derivative(x, 2), d2, 1e-7 * beta * beta * beta);
            EXPECT_NEAR(fr.value(x), oracle::logistic(x, beta, 0.3), 1e-15);
        }
    }
}

TEST(FiringRate, InverseRoundTrips) {
    const FiringRate fr;
    EXPECT_DOUBLE_EQ(fr.inverse(0.5), 0.0);
    EXPECT_NEAR(fr.inverse(fr.value(1.283)), 1.283, 1e-10);
    EXPECT_THROW(fr.inverse(0.0), std::domain_error);
    EXPECT_THROW(fr.inverse(1.0), std::domain_error);
    for (double s = 0.001; s < 1.0; s += 0.001) EXPECT_NEAR(fr.value(fr.inverse(s)), s, 1e-12);
    // Beyond |x| ~ 15 the rounding of 1 - f(x) dominates.
    for (double x = -15.0; x <= 15.0; x += 0.25) EXPECT_NEAR(fr.inverse(fr.value(x)), x, 1e-9);
}

TEST(FiringRate, PrimitiveOfInverseClosedForm) {
    const FiringRate fr;
    EXPECT_EQ(fr.primitive_of_inverse(0.0), 0.0);
    EXPECT_EQ(fr.primitive_of_inverse(1.0), 0.0);
    EXPECT_NEAR(fr.primitive_of_inverse(0.5), -std::numbers::ln2, 1e-15);
    EXPECT_NEAR(fr.primitive_of_inverse(0.78296), -0.52313, 1e-5);
    EXPECT_THROW(fr.primitive_of_inverse(-0.1), std::domain_error);
    EXPECT_THROW(fr.primitive_of_inverse(1.1), std::domain_error);
    for (int i = 1; i <= 99; ++i) {
        const double s = i / 100.0;
        EXPECT_NEAR(fr.primitive_of_inverse(s), oracle::phi_quadrature(s), 1e-10) << "s=" << s;
    }
    EXPECT_NEAR(fr.primitive_bound(), std::numbers::ln2, 1e-12);
}

TEST(FiringRate, PrimitiveDerivativeIsInverse) {
    for (double beta : {1.0, 12.0}) {
        const FiringRate fr(beta, 0.5);
        for (double s = 0.01; s <= 0.99; s += 0.01) {
            const double h = 1e-6;
            const double d = (fr.primitive_of_inverse(s + h) - fr.primitive_of_inverse(s - h)) / (2 * h);
            EXPECT_NEAR(d, fr.inverse(s), 1e-6);
        }
    }
}

TEST(FiringRate, PrimitiveAtStateConsistent) {
    const FiringRate fr(12.0, 0.5);
    for (double x = -2.0; x <= 3.0; x += 0.1) {
        EXPECT_NEAR(fr.primitive_at_state(x), fr.primitive_of_inverse(fr.value(x)), 1e-12);
    }
    // Saturated states keep a finite, accurate primitive.
    EXPECT_TRUE(std::isfinite(fr.primitive_at_state(200.0)));
    EXPECT_NEAR(fr.primitive_at_state(200.0), fr.primitive_of_inverse(1.0), 1e-12);
}

TEST(FiringRate, LipschitzAndGrowthBounds) {
    const FiringRate fr;
    EXPECT_DOUBLE_EQ(fr.k1(), 0.25);
    EXPECT_DOUBLE_EQ(fr.k2(), 0.5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    for (int i = 0; i < 20000; ++i) {
        const double x = u(rng), y = u(rng);
        EXPECT_LE(std::abs(fr.value(x) - fr.value(y)), fr.k1() * std::abs(x - y) + 1e-15);
        EXPECT_LE(std::abs(fr.value(x)), fr.k1() * std::abs(x) + fr.k2() + 1e-15);
    }
}

TEST(CheckHypotheses, UnitLogisticPasses) {
    const auto r = check_hypotheses(FiringRate());
    EXPECT_TRUE(r.all_pass());
    const auto* d1 = r.find("H1.derivative_bound");
    ASSERT_NE(d1, nullptr);
    EXPECT_NEAR(d1->measured, 0.25, 1e-5);
    const auto* d2 = r.find("H4.second_derivative_bounded");
    ASSERT_NE(d2, nullptr);
    EXPECT_LT(d2->measured, 3.0);
    for (const char* key : {"reference.k1_classic", "reference.k2_classic", "reference.L_classic"}) {
        ASSERT_NE(r.find(key), nullptr) << key;
        EXPECT_TRUE(r.find(key)->pass) << key;
    }
}

TEST(CheckHypotheses, SteepGainPasses) {
    const auto r = check_hypotheses(FiringRate(12.0, 0.5));
    EXPECT_TRUE(r.all_pass());
    EXPECT_EQ(r.find("reference.k1_classic"), nullptr);
    const double d1 = r.find("H1.derivative_bound")->measured;
    EXPECT_LE(d1, 3.0);
    EXPECT_GT(d1, 2.95);
}

TEST(CheckHypotheses, SineFailsMonotonicity) {
    RateFunctions sine;
    sine.name = "sin";
    sine.value = [](double x) { return std::sin(x); };
    sine.first = [](double x) { return std::cos(x); };
    sine.second = [](double x) { return -std::sin(x); };
    const auto r = check_hypotheses(sine);
    EXPECT_FALSE(r.all_pass());
    EXPECT_FALSE(r.find("H2.nondecreasing")->pass);
    EXPECT_FALSE(r.find("H1.positive_derivative")->pass);
}

TEST(CheckHypotheses, DeterministicForFixedSeed) {
    SampleSpec spec;
    spec.seed = 77;
    const auto a = check_hypotheses(FiringRate(3.0, 0.1), spec);
    const auto b = check_hypotheses(FiringRate(3.0, 0.1), spec);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) EXPECT_EQ(a.entries[i].measured, b.entries[i].measured);
}
