#include "nflab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace nflab {

CircleGrid::CircleGrid(double tau, std::size_t n) : tau_(tau), n_(n) {
    if (!(tau > 1.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("grid: tau must exceed 1 (got " + std::to_string(tau) + ")");
    }
    if (n < kMinPoints) {
        throw std::invalid_argument("grid: n must be at least " + std::to_string(kMinPoints));
    }
    if (n % 2 != 0) throw std::invalid_argument("grid: n must be even");
}

std::vector<double> CircleGrid::points() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = point(i);
    return x;
}

double CircleGrid::wavenumber(double k) const { return std::numbers::pi * k / tau_; }

CircleGrid build_grid(double tau, std::size_t n) { return CircleGrid(tau, n); }

GridFunction::GridFunction(const CircleGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("grid function: expected " + std::to_string(grid_.size()) +
                                    " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid function: non-finite value");
    }
}

GridFunction GridFunction::constant(const CircleGrid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

void require_same_grid(const CircleGrid& a, const CircleGrid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a.grid(), b.grid());
}

namespace {

template <class Op>
GridFunction zip(const GridFunction& a, const GridFunction& b, Op op) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
    return GridFunction(a.grid(), std::move(out));
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    return zip(a, b, std::plus<>{});
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    return zip(a, b, std::minus<>{});
}

GridFunction operator*(double s, const GridFunction& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v *= s;
    return GridFunction(a.grid(), std::move(out));
}

GridFunction operator+(const GridFunction& a, double c) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v += c;
    return GridFunction(a.grid(), std::move(out));
}

double integrate(const GridFunction& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v;
    return u.grid().weight() * sum;
}

Norms norms_and_inner(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    double l1 = 0.0, sq = 0.0, linf = 0.0, uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        l1 += a;
        sq += u[i] * u[i];
        linf = std::max(linf, a);
        uv += u[i] * v[i];
    }
    const double w = u.grid().weight();
    return {w * l1, std::sqrt(w * sq), linf, w * uv};
}

double inner(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return u.grid().weight() * s;
}

double l1_norm(const GridFunction& u) {
    double s = 0.0;
    for (double v : u.values()) s += std::abs(v);
    return u.grid().weight() * s;
}

double l2_norm(const GridFunction& u) {
    double s = 0.0;
    for (double v : u.values()) s += v * v;
    return std::sqrt(u.grid().weight() * s);
}

double linf_norm(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double l2_distance(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return std::sqrt(u.grid().weight() * s);
}

GridFunction rotate(const GridFunction& u, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(u.size());
    const std::int64_t shift = ((k % n) + n) % n;
    std::vector<double> out(u.size());
    for (std::int64_t i = 0; i < n; ++i) out[i] = u[static_cast<std::size_t>((i + shift) % n)];
    return GridFunction(u.grid(), std::move(out));
}

GridFunction spectral_derivative(const GridFunction& u) {
    const auto& fft = detail::RealFft::get(u.size());
    const std::size_t n = u.size();
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(u.values(), spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (k == n / 2) {
            spec[k] = 0.0;
        } else {
            spec[k] *= std::complex<double>(0.0, u.grid().wavenumber(static_cast<double>(k)));
        }
    }
    std::vector<double> out(n);
    fft.inverse(spec, out);
    for (double& v : out) v /= static_cast<double>(n);
    return GridFunction(u.grid(), std::move(out));
}

void write_csv(std::ostream& os, const GridFunction& u) {
    os << "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid().point(i), u[i]);
        os << buf;
    }
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    // Skip comment lines (config fingerprints) before the header.
    while (std::getline(is, line) && !line.empty() && line.front() == '#') {
    }
    if (line != "x,value") throw std::invalid_argument("grid csv: expected header 'x,value'");
    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("grid csv: malformed row '" + line + "'");
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.empty()) throw std::invalid_argument("grid csv: no rows");
    CircleGrid grid(-xs.front(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - grid.point(i)) > 1e-12 * grid.tau()) {
            throw std::invalid_argument("grid csv: points are not a uniform periodic grid");
        }
    }
    return GridFunction(grid, std::move(vs));
}

}  // namespace nflab
