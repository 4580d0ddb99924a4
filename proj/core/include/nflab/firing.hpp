#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nflab/check.hpp"

namespace nflab {

/**
 * Logistic firing rate f(x) = 1 / (1 + exp(-beta (x - theta))) with values in
 * (0, S_max), S_max = 1.
 *
 * beta = 1, theta = 0 is the classic sigmoid. Its tight Lipschitz constant is
 * 1/4, which makes u -> J*f(u) + h a contraction and leaves a single
 * equilibrium; steeper gains are needed to see pattern-forming states.
 */
class FiringRate {
public:
    explicit FiringRate(double beta = 1.0, double theta = 0.0);

    double beta() const { return beta_; }
    double theta() const { return theta_; }
    static constexpr double s_max() { return 1.0; }

    double value(double x) const;
    /// 1 - f(x), without cancellation for large x.
    double complement(double x) const;
    /// order 0, 1 or 2; std::invalid_argument otherwise.
    double derivative(double x, int order) const;

    /// f^{-1}(s) for 0 < s < 1; std::domain_error otherwise.
    double inverse(double s) const;

    /// Phi(s) = integral_0^s f^{-1}(r) dr on [0, 1], endpoints as limits.
    double primitive_of_inverse(double s) const;
    /// Phi(f(x)) evaluated from x so that s and 1 - s keep full precision.
    double primitive_at_state(double x) const;

    /// sup f' = beta / 4.
    double k1() const { return 0.25 * beta_; }
    /// Smallest k2 with |f(x)| <= k1 |x| + k2, attained at x = 0.
    double k2() const { return value(0.0); }
    /// sup over [0, S_max] of |Phi|.
    double primitive_bound() const;

private:
    double beta_;
    double theta_;
};

double f_eval(const FiringRate& fr, double x, int order);

/// A rate function described only by its pointwise evaluations; used to run
/// the hypothesis checks on rules other than the logistic.
struct RateFunctions {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> first;
    std::function<double(double)> second;
    double s_max = 1.0;
    /// Claimed sup f'; measured from samples when empty.
    std::optional<double> k1;
    /// Closed form of Phi, if known, with its claimed bound L.
    std::function<double(double)> primitive_of_inverse;
    std::optional<double> primitive_bound;
    /// Claimed bound on |f''|.
    std::optional<double> second_bound;
};

RateFunctions rate_functions(const FiringRate& fr);

struct SampleSpec {
    double lo = -50.0;
    double hi = 50.0;
    std::size_t count = 10000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
};

struct HypothesisReport {
    std::vector<CheckEntry> entries;
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;

    bool all_pass() const { return nflab::all_pass(entries); }
    const CheckEntry* find(const std::string& hypothesis) const;
};

HypothesisReport check_hypotheses(const RateFunctions& rate, const SampleSpec& spec = {});
HypothesisReport check_hypotheses(const FiringRate& fr, const SampleSpec& spec = {});

}  // namespace nflab
