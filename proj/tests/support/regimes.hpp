#pragma once

#include <vector>

#include "nflab/equilibria.hpp"

namespace regime {

/// Default configuration: tau = 1.2, bump kernel, beta = 1, h = 0.5.
inline nflab::FlowParams defaults(std::size_t n = 256, double dt = 0.05) {
    const nflab::CircleGrid grid(1.2, n);
    return nflab::FlowParams(0.5, nflab::FiringRate(1.0, 0.0), nflab::make_kernel(nflab::KernelProfile::bump(), grid),
                             dt);
}

/// Steep gain with threshold 0.5; h is scanned downward from 0.30 until the
/// k = 1 mode of some constant state has growth rate at least 0.6.
inline nflab::FlowParams turing(std::size_t n = 256) {
    const nflab::CircleGrid grid(1.2, n);
    const nflab::FlowParams base(0.30, nflab::FiringRate(12.0, 0.5),
                                 nflab::make_kernel(nflab::KernelProfile::bump(), grid));
    std::vector<double> hs;
    for (int i = 30; i >= 1; --i) hs.push_back(0.01 * i);
    const auto h = nflab::turing_scan(base, hs, 0.6);
    return base.with_h(h.value());
}

}  // namespace regime
