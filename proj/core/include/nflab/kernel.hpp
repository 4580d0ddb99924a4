#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nflab/check.hpp"
#include "nflab/grid.hpp"

namespace nflab {

/**
 * Connectivity profile J~ on the real line, supported in [-a, a] with a <= 1.
 *
 * The bump family is non-negative and smooth, so normalized bumps belong to
 * the admissible kernel class (even, non-negative, unit L1 norm, support in
 * [-1, 1]). The truncated mexican hat changes sign and is kept for
 * exploration only: class_member() is false for it.
 */
class KernelProfile {
public:
    enum class Kind { bump, scaled_bump, mexican_hat, table, custom };

    /// exp(-1 / (1 - x^2)) on |x| < 1.
    static KernelProfile bump();
    /// exp(-1 / (1 - (x/a)^2)) on |x| < a, 0 < a <= 1.
    static KernelProfile scaled_bump(double a);
    /// (1 - b2 x^2) exp(-b1 x^2) cut off at |x| = 1.
    static KernelProfile truncated_mexican_hat(double b1, double b2);
    /// Piecewise-linear interpolation of (x, value) pairs; zero outside the table and |x| >= 1.
    static KernelProfile table(std::vector<double> xs, std::vector<double> values);
    /// Reads `x,value` rows (header optional) and builds a table profile.
    static KernelProfile table_from_csv(const std::filesystem::path& path);
    static KernelProfile custom(std::function<double(double)> fn, double support, bool non_negative,
                                std::string label);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    double support() const { return support_; }
    bool class_member() const { return non_negative_; }
    const std::string& label() const { return label_; }

private:
    KernelProfile(Kind kind, double support, bool non_negative, std::string label,
                  std::function<double(double)> fn);

    Kind kind_;
    double support_;
    bool non_negative_;
    std::string label_;
    std::function<double(double)> fn_;
};

/**
 * A profile periodized onto a grid and normalized to unit discrete L1 norm.
 *
 * offsets()[d] is J at displacement d * spacing (mod n), so the weighted
 * circular convolution reads (J * m)_i = w sum_j offsets[(i - j) mod n] m_j.
 * samples() holds the same values indexed by grid point (x = 0 at i = n/2).
 */
class Kernel {
public:
    /// Throws std::invalid_argument for an uneven profile, a non-positive
    /// integral, or a support that would wrap around the circle.
    Kernel(KernelProfile profile, const CircleGrid& grid);

    const CircleGrid& grid() const { return grid_; }
    const KernelProfile& profile() const { return profile_; }
    const GridFunction& samples() const { return samples_; }
    std::span<const double> offsets() const { return offsets_; }
    double l1_norm() const { return l1_norm_; }
    double linf_norm() const { return linf_norm_; }

    /// Discrete Fourier multipliers of the convolution operator, modes 0..n/2.
    std::span<const double> multipliers() const { return multipliers_; }

private:
    KernelProfile profile_;
    CircleGrid grid_;
    std::vector<double> offsets_;
    GridFunction samples_;
    double l1_norm_;
    double linf_norm_;
    std::vector<double> multipliers_;
};

Kernel make_kernel(const KernelProfile& profile, const CircleGrid& grid);

/// Transform-based circular convolution, O(n log n).
GridFunction convolve(const Kernel& J, const GridFunction& m);

/// The defining weighted double sum, O(n^2). Oracle for convolve().
GridFunction convolve_direct(const Kernel& J, const GridFunction& m);

/// J_k = integral of J(x) cos(pi k x / tau) by quadrature, k = 0..kmax (< n/2).
std::vector<double> fourier_coefficients(const Kernel& J, std::size_t kmax);

/// Quadrature of |J1 - J2| over the circle.
double l1_distance(const Kernel& J1, const Kernel& J2);

/// Evenness, sign, support and normalization checks for the admissible class.
std::vector<CheckEntry> check_kernel_class(const Kernel& J);

}  // namespace nflab
