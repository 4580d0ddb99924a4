#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace nflab::detail {

// Thin FFTW wrapper for real transforms of one length. Plans are created once
// per length under a global lock and executed through the new-array API, so a
// shared instance may be used from several threads at once.
class RealFft {
public:
    static const RealFft& get(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    // Unnormalized forward transform: out[k] = sum_j in[j] exp(-2 pi i jk/n).
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

    // Unnormalized inverse; the caller divides by n.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    ~RealFft();

private:
    explicit RealFft(std::size_t n);

    std::size_t n_;
    void* forward_plan_;
    void* inverse_plan_;
};

}  // namespace nflab::detail
