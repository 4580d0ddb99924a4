#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nflab/kernel.hpp"
#include "oracles.hpp"

using namespace nflab;

namespace {

GridFunction random_function(const CircleGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(g.size());
    for (auto& x : v) x = nd(rng);
    return GridFunction(g, v);
}

// Random admissible kernel: an even, non-negative piecewise-linear table.
Kernel random_kernel(const CircleGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs, ys;
    const int m = 6;
    for (int i = -m; i <= m; ++i) xs.push_back(static_cast<double>(i) / m * 0.95);
    std::vector<double> half(m + 1);
    for (auto& v : half) v = u(rng);
    half[m] = 0.0;
    for (int i = -m; i <= m; ++i) ys.push_back(half[static_cast<std::size_t>(std::abs(i))]);
    return make_kernel(KernelProfile::table(xs, ys), g);
}

}  // namespace

TEST(KernelProfile, SupportAndEvenness) {
    const auto b = KernelProfile::bump();
    EXPECT_EQ(b(1.0), 0.0);
    EXPECT_EQ(b(-1.5), 0.0);
    EXPECT_NEAR(b(0.0), std::exp(-1.0), 1e-16);
    for (double x = 0.0; x < 1.0; x += 0.01) EXPECT_EQ(b(x), b(-x));
    const auto s = KernelProfile::scaled_bump(0.9);
    EXPECT_EQ(s(0.9), 0.0);
    EXPECT_GT(s(0.89), 0.0);
    EXPECT_THROW(KernelProfile::scaled_bump(1.1), std::invalid_argument);
    EXPECT_THROW(KernelProfile::scaled_bump(0.0), std::invalid_argument);
}

TEST(KernelProfile, MexicanHatFlagged) {
    const auto mh = KernelProfile::truncated_mexican_hat(4.0, 2.0);
    EXPECT_FALSE(mh.class_member());
    EXPECT_TRUE(KernelProfile::bump().class_member());
    const auto J = make_kernel(mh, build_grid(1.2, 256));
    EXPECT_LT(J.samples().min(), 0.0);
    const auto checks = check_kernel_class(J);
    EXPECT_FALSE(all_pass(checks));
}

TEST(Kernel, BumpNormalization) {
    const auto g = build_grid(1.2, 1024);
    const auto J = make_kernel(KernelProfile::bump(), g);
    EXPECT_NEAR(J.l1_norm(), 1.0, 1e-12);
    EXPECT_NEAR(integrate(J.samples()), 1.0, 1e-12);
    const double expected = std::exp(-1.0) / oracle::bump_integral();
    EXPECT_NEAR(J.linf_norm(), expected, 1e-9);
    EXPECT_NEAR(J.linf_norm(), 0.828569, 1e-6);
    EXPECT_NEAR(J.multipliers()[0], 1.0, 1e-12);
    EXPECT_TRUE(all_pass(check_kernel_class(J)));
}

TEST(Kernel, SamplesEvenAndSupportExact) {
    for (std::size_t n : {64u, 256u, 1024u}) {
        const auto g = build_grid(1.2, n);
        const auto J = make_kernel(KernelProfile::scaled_bump(0.93), g);
        const auto& s = J.samples();
        for (std::size_t d = 1; d < n / 2; ++d) EXPECT_NEAR(s[n / 2 + d], s[n / 2 - d], 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(g.point(i)) > 1.0) EXPECT_EQ(s[i], 0.0);
        }
        EXPECT_EQ(J.offsets()[0], s[n / 2]);
    }
}

TEST(Kernel, RejectsInadmissibleProfiles) {
    const auto g = build_grid(1.2, 256);
    const auto shifted = KernelProfile::custom(
        [](double x) { return oracle::bump(x - 0.3, 0.5); }, 1.0, true, "shifted");
    EXPECT_THROW(make_kernel(shifted, g), std::invalid_argument);

    const auto negative = KernelProfile::custom([](double x) { return -oracle::bump(x); }, 1.0, false, "negative");
    EXPECT_THROW(make_kernel(negative, g), std::invalid_argument);
    EXPECT_NO_THROW(make_kernel(KernelProfile::bump(), build_grid(1.01, 256)));
}

TEST(Convolve, FixesConstants) {
    const auto g = build_grid(1.2, 256);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto J = random_kernel(g, seed);
        for (double c : {-2.0, 0.0, 1.0, 3.5}) {
            const auto r = convolve(J, GridFunction::constant(g, c));
            for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(r[i], c, 1e-13 * (1.0 + std::abs(c)));
        }
    }
}

TEST(Convolve, ShiftEquivariance) {
    for (std::size_t n : {64u, 256u}) {
        const auto g = build_grid(1.2, n);
        const auto J = make_kernel(KernelProfile::bump(), g);
        const auto m = random_function(g, n);
        const auto Jm = convolve(J, m);
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
            const auto a = convolve(J, rotate(m, k));
            const auto b = rotate(Jm, k);
            for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(a[i], b[i], 1e-13);
        }
    }
}

TEST(Convolve, FastMatchesDirect) {
    for (std::size_t n : {64u, 256u, 1024u}) {
        const auto g = build_grid(1.2, n);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto J = random_kernel(g, 100 + seed);
            const auto m = random_function(g, 200 + seed);
            const auto fast = convolve(J, m);
            const auto direct = convolve_direct(J, m);
            EXPECT_LE(linf_norm(fast - direct), 1e-12 * linf_norm(direct));
        }
    }
}

TEST(FourierCoefficients, MatchContinuumOracle) {
    const auto g = build_grid(1.2, 1024);
    const auto J = make_kernel(KernelProfile::bump(), g);
    const auto c = fourier_coefficients(J, 8);
    EXPECT_NEAR(c[0], 1.0, 1e-12);
    for (int k = 1; k <= 8; ++k) {
        EXPECT_NEAR(c[static_cast<std::size_t>(k)], oracle::bump_fourier(k, 1.2), 1e-10) << "k=" << k;
    }
    // Regression constant for the first mode.
    EXPECT_NEAR(c[1], 0.5521499380, 1e-9);
}

TEST(FourierCoefficients, BoundedAndDominatedByFirstMode) {
    // The coefficients oscillate in sign beyond k = 1, so they are not
    // monotone; what holds is |J_k| <= 1 and |J_k| < J_1 for k >= 2.
    const auto J = make_kernel(KernelProfile::bump(), build_grid(1.2, 256));
    const auto c = fourier_coefficients(J, 8);
    for (std::size_t k = 1; k <= 8; ++k) EXPECT_LE(std::abs(c[k]), 1.0);
    for (std::size_t k = 2; k <= 8; ++k) EXPECT_LT(std::abs(c[k]), c[1]);
    EXPECT_LT(c[2], 0.0);
}

TEST(FourierCoefficients, EigenRelation) {
    const auto g = build_grid(1.2, 256);
    const auto J = make_kernel(KernelProfile::bump(), g);
    const auto c = fourier_coefficients(J, 8);
    for (std::size_t k = 0; k <= 8; ++k) {
        const double w = g.wavenumber(static_cast<double>(k));
        const auto cosk = GridFunction::sample(g, [w](double x) { return std::cos(w * x); });
        const auto r = convolve(J, cosk);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r[i] - c[k] * cosk[i]));
        EXPECT_LE(err, 1e-10) << "k=" << k;
        EXPECT_NEAR(J.multipliers()[k], c[k], 1e-13);
    }
    EXPECT_THROW(fourier_coefficients(J, 128), std::invalid_argument);
}

TEST(L1Distance, ScaledBumpFamily) {
    const auto g = build_grid(1.2, 1024);
    const auto J1 = make_kernel(KernelProfile::bump(), g);
    EXPECT_EQ(l1_distance(J1, J1), 0.0);
    double prev = INFINITY;
    for (double a : {0.9, 0.95, 0.99}) {
        const auto Ja = make_kernel(KernelProfile::scaled_bump(a), g);
        const double d = l1_distance(Ja, J1);
        EXPECT_GT(d, 0.0);
        EXPECT_LT(d, prev);
        EXPECT_NEAR(d, oracle::bump_l1_distance(a, 1.0), 2e-4 * d) << "a=" << a;
        prev = d;
    }
}

TEST(L1Distance, TriangleInequality) {
    const auto g = build_grid(1.2, 256);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto A = random_kernel(g, 3 * s), B = random_kernel(g, 3 * s + 1), C = random_kernel(g, 3 * s + 2);
        EXPECT_LE(l1_distance(A, C), l1_distance(A, B) + l1_distance(B, C) + 1e-15);
        EXPECT_NEAR(l1_distance(A, B), l1_distance(B, A), 1e-16);
    }
}

TEST(KernelTable, InterpolatesAndNormalizes) {
    const auto g = build_grid(1.2, 256);
    const auto tri = KernelProfile::table({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    EXPECT_NEAR(tri(0.5), 0.5, 1e-15);
    EXPECT_EQ(tri(1.2), 0.0);
    const auto J = make_kernel(tri, g);
    EXPECT_NEAR(J.l1_norm(), 1.0, 1e-12);
    EXPECT_TRUE(all_pass(check_kernel_class(J)));
}
