#pragma once

// Independent reference values for the tests. Nothing here calls into
// nflab's numerics: integrals come from boost.math quadrature, roots from
// plain bisection, scalar flows from boost.odeint.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

inline double logistic(double x, double beta = 1.0, double theta = 0.0) {
    return 1.0 / (1.0 + std::exp(-beta * (x - theta)));
}

inline double bump(double x, double a = 1.0) {
    const double r = x / a;
    return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
}

/// Integral of the (unnormalized) scaled bump over (-a, a).
inline double bump_integral(double a = 1.0) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([a](double x) { return bump(x, a); }, -a, a);
}

/// Continuum Fourier coefficient of the normalized bump on the circle [-tau, tau).
inline double bump_fourier(int k, double tau, double a = 1.0) {
    const double w = std::numbers::pi * k / tau;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double num = ts.integrate([=](double x) { return bump(x, a) * std::cos(w * x); }, -a, a);
    return num / bump_integral(a);
}

/// Continuum L1 distance between normalized scaled bumps.
inline double bump_l1_distance(double a, double b) {
    const double za = bump_integral(a), zb = bump_integral(b);
    const double lim = std::max(a, b);
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [=](double x) { return std::abs(bump(x, a) / za - bump(x, b) / zb); }, -lim, lim, 15, 1e-14);
}

/// Root of c - f(c) - h on [lo, hi] by bisection.
inline double bisect_constant(double h, double beta, double theta, double lo, double hi) {
    auto g = [=](double c) { return c - logistic(c, beta, theta) - h; };
    double glo = g(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Phi(s) = integral_0^s f^{-1}(r) dr for the unit logistic, by quadrature.
inline double phi_quadrature(double s) {
    if (s <= 0.0) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([](double r) { return std::log(r / (1.0 - r)); }, 0.0, s);
}

/// Scalar flow dc/dt = -c + f(c) + h integrated with adaptive Dormand-Prince.
inline double scalar_flow(double c0, double h, double T, double beta = 1.0, double theta = 0.0) {
    using namespace boost::numeric::odeint;
    double c = c0;
    auto rhs = [=](const double& x, double& dx, double) { dx = -x + logistic(x, beta, theta) + h; };
    integrate_adaptive(make_controlled<runge_kutta_dopri5<double>>(1e-14, 1e-14), rhs, c, 0.0, T, 1e-3);
    return c;
}

}  // namespace oracle
