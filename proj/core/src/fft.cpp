#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nflab::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    // Planning arrays are scratch only; FFTW_UNALIGNED lets execution use any buffer.
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const int len = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_r2c_1d(len, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_plan_ = fftw_plan_dft_c2r_1d(len, c, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("fftw planning failed");
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const RealFft& RealFft::get(std::size_t n) {
    // Lock first so the mutex outlives the cache during static destruction.
    std::lock_guard lock(planner_mutex());
    static std::map<std::size_t, std::unique_ptr<RealFft>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::unique_ptr<RealFft>(new RealFft(n))).first;
    }
    return *it->second;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != spectrum_size()) throw std::invalid_argument("fft size mismatch");
    // Out-of-place r2c leaves its input untouched.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
    if (in.size() != spectrum_size() || out.size() != n_) throw std::invalid_argument("fft size mismatch");
    // c2r destroys its input.
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace nflab::detail
