#include "nflab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"

namespace nflab {

namespace {

constexpr double kEvenTol = 1e-12;

double bump_value(double x, double a) {
    const double r = x / a;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

}  // namespace

KernelProfile::KernelProfile(Kind kind, double support, bool non_negative, std::string label,
                             std::function<double(double)> fn)
    : kind_(kind), support_(support), non_negative_(non_negative), label_(std::move(label)),
      fn_(std::move(fn)) {
    if (!(support_ > 0.0) || support_ > 1.0) {
        throw std::invalid_argument("kernel: support half-width must lie in (0, 1]");
    }
}

KernelProfile KernelProfile::bump() {
    return KernelProfile(Kind::bump, 1.0, true, "bump", [](double x) { return bump_value(x, 1.0); });
}

KernelProfile KernelProfile::scaled_bump(double a) {
    if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("kernel: scaled_bump needs 0 < a <= 1");
    std::ostringstream label;
    label.precision(17);
    label << "scaled_bump(" << a << ")";
    return KernelProfile(Kind::scaled_bump, a, true, label.str(),
                         [a](double x) { return bump_value(x, a); });
}

KernelProfile KernelProfile::truncated_mexican_hat(double b1, double b2) {
    if (!(b1 > 0.0) || !(b2 > 0.0)) throw std::invalid_argument("kernel: mexican hat needs b1, b2 > 0");
    std::ostringstream label;
    label.precision(17);
    label << "mexican_hat(" << b1 << "," << b2 << ")";
    return KernelProfile(Kind::mexican_hat, 1.0, false, label.str(), [b1, b2](double x) {
        if (std::abs(x) >= 1.0) return 0.0;
        return (1.0 - b2 * x * x) * std::exp(-b1 * x * x);
    });
}

KernelProfile KernelProfile::table(std::vector<double> xs, std::vector<double> values) {
    if (xs.size() != values.size() || xs.size() < 2) {
        throw std::invalid_argument("kernel: table needs at least two (x, value) pairs");
    }
    if (!std::is_sorted(xs.begin(), xs.end()) ||
        std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw std::invalid_argument("kernel: table x values must be strictly increasing");
    }
    const bool non_negative = std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
    const double support = std::min(1.0, std::max(std::abs(xs.front()), std::abs(xs.back())));
    return KernelProfile(Kind::table, support, non_negative, "table",
                         [xs = std::move(xs), ys = std::move(values)](double x) {
                             if (std::abs(x) >= 1.0 || x < xs.front() || x > xs.back()) return 0.0;
                             auto hi = std::upper_bound(xs.begin(), xs.end(), x);
                             if (hi == xs.end()) return ys.back();
                             const auto j = static_cast<std::size_t>(hi - xs.begin());
                             const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
                             return ys[j - 1] + t * (ys[j] - ys[j - 1]);
                         });
}

KernelProfile KernelProfile::table_from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("kernel: cannot open table '" + path.string() + "'");
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("kernel: malformed table row '" + line + "'");
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            ys.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
            if (xs.empty()) continue;  // header
            throw std::invalid_argument("kernel: malformed table row '" + line + "'");
        }
    }
    auto profile = table(std::move(xs), std::move(ys));
    profile.label_ = "table(" + path.string() + ")";
    return profile;
}

KernelProfile KernelProfile::custom(std::function<double(double)> fn, double support, bool non_negative,
                                    std::string label) {
    return KernelProfile(Kind::custom, support, non_negative, std::move(label), std::move(fn));
}

double KernelProfile::operator()(double x) const {
    if (std::abs(x) >= support_) return 0.0;
    return fn_(x);
}

Kernel::Kernel(KernelProfile profile, const CircleGrid& grid)
    : profile_(std::move(profile)), grid_(grid), samples_(GridFunction::zeros(grid)) {
    const std::size_t n = grid_.size();
    const std::size_t half = n / 2;
    const double hx = grid_.spacing();
    if (!(grid_.tau() > profile_.support())) {
        throw std::invalid_argument("kernel: support must be narrower than the half-period tau");
    }

    // Evaluate at +d*h and -d*h separately so evenness is tested, then store
    // the symmetric periodization exactly.
    std::vector<double> raw(n, 0.0);
    double peak = 0.0;
    for (std::size_t d = 0; d <= half; ++d) {
        const double x = static_cast<double>(d) * hx;
        const double plus = profile_(x);
        const double minus = profile_(-x);
        if (!std::isfinite(plus) || !std::isfinite(minus)) {
            throw std::invalid_argument("kernel: profile is not finite at x=" + std::to_string(x));
        }
        peak = std::max({peak, std::abs(plus), std::abs(minus)});
        if (std::abs(plus - minus) > kEvenTol * std::max(1.0, peak)) {
            throw std::invalid_argument("kernel: profile is not even (J(" + std::to_string(x) +
                                        ") != J(-" + std::to_string(x) + "))");
        }
        raw[d] = plus;
        raw[(n - d) % n] = plus;
    }

    double signed_sum = 0.0, abs_sum = 0.0;
    for (double v : raw) {
        signed_sum += v;
        abs_sum += std::abs(v);
    }
    const double z_signed = grid_.weight() * signed_sum;
    const double z_abs = grid_.weight() * abs_sum;
    if (!(z_signed > 0.0)) throw std::invalid_argument("kernel: profile integral must be positive");

    offsets_.resize(n);
    for (std::size_t d = 0; d < n; ++d) offsets_[d] = raw[d] / z_abs;

    std::vector<double> by_point(n);
    for (std::size_t i = 0; i < n; ++i) by_point[i] = offsets_[(i + n - half) % n];
    samples_ = GridFunction(grid_, std::move(by_point));
    l1_norm_ = nflab::l1_norm(samples_);
    linf_norm_ = nflab::linf_norm(samples_);

    const auto& fft = detail::RealFft::get(n);
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(offsets_, spec);
    multipliers_.resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) multipliers_[k] = grid_.weight() * spec[k].real();
}

Kernel make_kernel(const KernelProfile& profile, const CircleGrid& grid) { return Kernel(profile, grid); }

GridFunction convolve(const Kernel& J, const GridFunction& m) {
    require_same_grid(J.grid(), m.grid());
    const std::size_t n = m.size();
    const auto& fft = detail::RealFft::get(n);
    std::vector<std::complex<double>> spec(fft.spectrum_size());
    fft.forward(m.values(), spec);
    const auto mult = J.multipliers();
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= mult[k];
    std::vector<double> out(n);
    fft.inverse(spec, out);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return GridFunction(m.grid(), std::move(out));
}

GridFunction convolve_direct(const Kernel& J, const GridFunction& m) {
    require_same_grid(J.grid(), m.grid());
    const std::size_t n = m.size();
    const auto K = J.offsets();
    const double w = m.grid().weight();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += K[(i + n - j) % n] * m[j];
        out[i] = w * s;
    }
    return GridFunction(m.grid(), std::move(out));
}

std::vector<double> fourier_coefficients(const Kernel& J, std::size_t kmax) {
    const auto& grid = J.grid();
    if (kmax >= grid.size() / 2) {
        throw std::invalid_argument("kernel: kmax must be below n/2 = " + std::to_string(grid.size() / 2));
    }
    std::vector<double> coeffs(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s += J.samples()[i] * std::cos(grid.wavenumber(static_cast<double>(k)) * grid.point(i));
        }
        coeffs[k] = grid.weight() * s;
    }
    return coeffs;
}

double l1_distance(const Kernel& J1, const Kernel& J2) {
    return l1_norm(J1.samples() - J2.samples());
}

std::vector<CheckEntry> check_kernel_class(const Kernel& J) {
    const auto& s = J.samples();
    const std::size_t n = s.size();
    const std::size_t half = n / 2;

    double asym = 0.0;
    for (std::size_t d = 1; d < half; ++d) asym = std::max(asym, std::abs(s[half + d] - s[half - d]));

    double outside = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(J.grid().point(i)) >= 1.0) outside = std::max(outside, std::abs(s[i]));
    }

    const double smin = s.min();
    const double j0 = integrate(s);
    const bool nonneg_family = J.profile().class_member();
    return {
        {"kernel.even", asym <= kEvenTol, asym, 0.0, kEvenTol},
        {"kernel.non_negative", nonneg_family && smin >= 0.0, smin, 0.0, 0.0},
        {"kernel.support_in_unit_interval", outside == 0.0, outside, 0.0, 0.0},
        {"kernel.unit_l1_norm", std::abs(J.l1_norm() - 1.0) <= 1e-10, J.l1_norm(), 1.0, 1e-10},
        {"kernel.mean_multiplier_is_one", !nonneg_family || std::abs(j0 - 1.0) <= 1e-10, j0, 1.0, 1e-10},
    };
}

}  // namespace nflab
