#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nflab {

/**
 * Uniform periodic discretization of the circle, charted as [-tau, tau).
 *
 * Point i sits at x_i = -tau + i * (2 tau / n) and carries the equal
 * quadrature weight 2 tau / n, so the weights sum to the circle's measure
 * 2 tau. The grid is a small value type; two grid functions live on the
 * same grid iff their grids compare equal.
 */
class CircleGrid {
public:
    static constexpr std::size_t kMinPoints = 8;

    /// Throws std::invalid_argument unless tau > 1 and n is even and >= 8.
    CircleGrid(double tau, std::size_t n);

    double tau() const { return tau_; }
    std::size_t size() const { return n_; }
    double spacing() const { return 2.0 * tau_ / static_cast<double>(n_); }
    double weight() const { return spacing(); }
    double measure() const { return 2.0 * tau_; }
    double point(std::size_t i) const { return -tau_ + static_cast<double>(i) * spacing(); }
    std::vector<double> points() const;

    /// Angular wavenumber pi*k/tau of Fourier mode k on this chart.
    double wavenumber(double k) const;

    bool operator==(const CircleGrid&) const = default;

private:
    double tau_;
    std::size_t n_;
};

CircleGrid build_grid(double tau, std::size_t n);

/// Real-valued function sampled on a CircleGrid. Immutable after construction.
class GridFunction {
public:
    /// Throws std::invalid_argument on length mismatch or non-finite values.
    GridFunction(const CircleGrid& grid, std::vector<double> values);

    static GridFunction constant(const CircleGrid& grid, double c);
    static GridFunction zeros(const CircleGrid& grid) { return constant(grid, 0.0); }

    template <class F>
    static GridFunction sample(const CircleGrid& grid, F&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
        return GridFunction(grid, std::move(v));
    }

    const CircleGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double min() const;
    double max() const;

private:
    CircleGrid grid_;
    std::vector<double> values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
GridFunction operator+(const GridFunction& a, double c);

/// Throws std::invalid_argument if the two functions live on different grids.
void require_same_grid(const GridFunction& a, const GridFunction& b);
void require_same_grid(const CircleGrid& a, const CircleGrid& b);

/// Rectangle rule: weight * sum(values), summed in index order.
double integrate(const GridFunction& u);

struct Norms {
    double l1;
    double l2;
    double linf;
    double inner;
};

/// l1/l2/linf of u plus the weighted inner product (u, v).
Norms norms_and_inner(const GridFunction& u, const GridFunction& v);

double inner(const GridFunction& u, const GridFunction& v);
double l1_norm(const GridFunction& u);
double l2_norm(const GridFunction& u);
double linf_norm(const GridFunction& u);
double l2_distance(const GridFunction& u, const GridFunction& v);

/// values'[i] = values[(i + k) mod n]; any integer k.
GridFunction rotate(const GridFunction& u, std::int64_t k);

/// Fourier collocation derivative with the Nyquist mode zeroed.
GridFunction spectral_derivative(const GridFunction& u);

/// CSV with header `x,value`, 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& u);

/// Reads the CSV written by write_csv; tau is recovered from x_0 = -tau.
GridFunction read_csv(std::istream& is);

}  // namespace nflab
