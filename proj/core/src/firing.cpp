#include "nflab/firing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nflab {

namespace {

// Logistic 1 / (1 + e^{-z}) without overflow.
double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

FiringRate::FiringRate(double beta, double theta) : beta_(beta), theta_(theta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("firing: beta must be positive");
    if (!std::isfinite(theta)) throw std::invalid_argument("firing: theta must be finite");
}

double FiringRate::value(double x) const { return logistic(beta_ * (x - theta_)); }

double FiringRate::complement(double x) const { return logistic(-beta_ * (x - theta_)); }

double FiringRate::derivative(double x, int order) const {
    const double s = value(x);
    const double c = complement(x);
    switch (order) {
        case 0:
            return s;
        case 1:
            return beta_ * s * c;
        case 2:
            return beta_ * beta_ * s * c * (c - s);
        default:
            throw std::invalid_argument("firing: derivative order must be 0, 1 or 2");
    }
}

double FiringRate::inverse(double s) const {
    if (!(s > 0.0 && s < s_max())) throw std::domain_error("firing: inverse needs 0 < s < 1");
    return theta_ + std::log(s / (1.0 - s)) / beta_;
}

double FiringRate::primitive_of_inverse(double s) const {
    if (!(s >= 0.0 && s <= s_max())) throw std::domain_error("firing: primitive needs 0 <= s <= 1");
    return theta_ * s + (xlogx(s) + xlogx(1.0 - s)) / beta_;
}

double FiringRate::primitive_at_state(double x) const {
    const double s = value(x);
    const double c = complement(x);
    return theta_ * s + (xlogx(s) + xlogx(c)) / beta_;
}

double FiringRate::primitive_bound() const {
    // Phi is convex with Phi(0) = 0, Phi(1) = theta and its minimum where f^{-1} vanishes.
    const double at_min = primitive_at_state(0.0);
    return std::max(std::abs(theta_), std::abs(at_min));
}

double f_eval(const FiringRate& fr, double x, int order) { return fr.derivative(x, order); }

RateFunctions rate_functions(const FiringRate& fr) {
    RateFunctions r;
    r.name = "logistic";
    r.value = [fr](double x) { return fr.value(x); };
    r.first = [fr](double x) { return fr.derivative(x, 1); };
    r.second = [fr](double x) { return fr.derivative(x, 2); };
    r.s_max = FiringRate::s_max();
    r.k1 = fr.k1();
    r.primitive_of_inverse = [fr](double s) { return fr.primitive_of_inverse(s); };
    r.primitive_bound = fr.primitive_bound();
    // |s(1-s)(1-2s)| <= 1/(6 sqrt 3) < 3; the wider bound matches the classic estimate.
    // max |s(1-s)(1-2s)| over [0,1] is sqrt(3)/18, reached at s = (3 -+ sqrt 3)/6.
    r.second_bound = fr.beta() * fr.beta() * std::numbers::sqrt3 / 18.0;
    return r;
}

const CheckEntry* HypothesisReport::find(const std::string& hypothesis) const {
    for (const auto& e : entries) {
        if (e.hypothesis == hypothesis) return &e;
    }
    return nullptr;
}

HypothesisReport check_hypotheses(const RateFunctions& rate, const SampleSpec& spec) {
    if (!(spec.hi > spec.lo) || spec.count < 4) throw std::invalid_argument("hypotheses: bad sample range");
    const double tol = spec.tolerance;

    // Half on a uniform grid (for monotonicity and difference quotients), half seeded.
    std::vector<double> xs;
    xs.reserve(spec.count);
    const std::size_t n_grid = spec.count / 2;
    for (std::size_t i = 0; i < n_grid; ++i) {
        xs.push_back(spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(n_grid - 1));
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(spec.lo, spec.hi);
    while (xs.size() < spec.count) xs.push_back(uni(rng));
    std::sort(xs.begin(), xs.end());

    double min_d1 = std::numeric_limits<double>::infinity();
    double sup_d1 = 0.0, sup_d2 = 0.0, min_f = std::numeric_limits<double>::infinity(), max_f = -min_f;
    double min_increment = std::numeric_limits<double>::infinity();
    double sup_d1_slope = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = rate.value(xs[i]);
        const double d1 = rate.first(xs[i]);
        const double d2 = rate.second(xs[i]);
        min_d1 = std::min(min_d1, d1);
        sup_d1 = std::max(sup_d1, std::abs(d1));
        sup_d2 = std::max(sup_d2, std::abs(d2));
        min_f = std::min(min_f, f);
        max_f = std::max(max_f, f);
        if (i > 0 && xs[i] > xs[i - 1]) {
            min_increment = std::min(min_increment, f - rate.value(xs[i - 1]));
            sup_d1_slope = std::max(sup_d1_slope, std::abs(d1 - rate.first(xs[i - 1])) / (xs[i] - xs[i - 1]));
        }
    }
    const double k1 = rate.k1.value_or(sup_d1);

    HypothesisReport report;
    report.samples = xs.size();
    report.tolerance = tol;
    report.seed = spec.seed;
    auto& e = report.entries;

    e.push_back({"H1.positive_derivative", min_d1 > 0.0, min_d1, 0.0, 0.0});
    e.push_back({"H1.derivative_bound", sup_d1 < k1 + tol, sup_d1, k1, tol});

    // Lipschitz (1.3) on seeded random pairs and linear growth (1.4).
    double lip_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 1000; ++i) {
        const double x = uni(rng), y = uni(rng);
        lip_excess = std::max(lip_excess, std::abs(rate.value(x) - rate.value(y)) - k1 * std::abs(x - y));
    }
    e.push_back({"H1.lipschitz_f", lip_excess <= tol, lip_excess, 0.0, tol});
    const double k2 = std::abs(rate.value(0.0));
    double growth_excess = -std::numeric_limits<double>::infinity();
    for (double x : xs) growth_excess = std::max(growth_excess, std::abs(rate.value(x)) - k1 * std::abs(x) - k2);
    e.push_back({"H1.linear_growth", growth_excess <= tol, growth_excess, 0.0, tol});

    e.push_back({"H2.nondecreasing", min_increment >= -tol, min_increment, 0.0, tol});
    e.push_back({"H2.range_lower", min_f >= 0.0, min_f, 0.0, 0.0});
    e.push_back({"H2.range_upper", max_f <= rate.s_max, max_f, rate.s_max, 0.0});
    if (rate.primitive_of_inverse && rate.primitive_bound) {
        double sup_phi = 0.0;
        const std::size_t m = 10001;
        for (std::size_t i = 0; i < m; ++i) {
            const double s = rate.s_max * static_cast<double>(i) / static_cast<double>(m - 1);
            sup_phi = std::max(sup_phi, std::abs(rate.primitive_of_inverse(s)));
        }
        e.push_back({"H2.primitive_bound", sup_phi <= *rate.primitive_bound + tol, sup_phi,
                     *rate.primitive_bound, tol});
    }

    const double d2_bound = rate.second_bound.value_or(std::numeric_limits<double>::infinity());
    e.push_back({"H4.second_derivative_bounded", std::isfinite(sup_d2) && sup_d2 <= d2_bound + tol, sup_d2, d2_bound,
                 tol});
    // Without a declared bound the sampled sup of f'' can undershoot the true
    // one, so the difference quotients get a small relative allowance.
    const double lip_bound = rate.second_bound ? *rate.second_bound : sup_d2 * (1.0 + 1e-3);
    e.push_back({"H4.derivative_lipschitz", sup_d1_slope <= lip_bound + tol, sup_d1_slope, lip_bound, tol});
    return report;
}

HypothesisReport check_hypotheses(const FiringRate& fr, const SampleSpec& spec) {
    auto report = check_hypotheses(rate_functions(fr), spec);
    if (fr.beta() == 1.0 && fr.theta() == 0.0) {
        // Classic constants for the unit-gain sigmoid: k1 = S_max = 1, k2 = 1/2, L = ln 2.
        const auto* d1 = report.find("H1.derivative_bound");
        const auto* phi = report.find("H2.primitive_bound");
        const double tol = spec.tolerance;
        report.entries.push_back({"reference.k1_classic", d1->measured < 1.0, d1->measured, 1.0, 0.0});
        report.entries.push_back({"reference.k2_classic", std::abs(fr.k2() - 0.5) <= tol, fr.k2(), 0.5, tol});
        report.entries.push_back({"reference.L_classic", std::abs(phi->measured - std::numbers::ln2) <= tol,
                                  phi->measured, std::numbers::ln2, tol});
    }
    return report;
}

}  // namespace nflab
