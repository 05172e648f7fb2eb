// ring_walk.hpp — fast state-vector recursion on (magnetic) rings.
//
// Ring Hamiltonians are diagonal in the plane-wave basis, so one evolution
// step is FFT -> phase multiply -> inverse FFT, O(L log L) instead of the
// dense O(L^2) multiply. Detection amplitudes and the collapse after a failed
// attempt act on a single site. Large-ring experiments run on this path; it
// must agree with the dense recursion to 1e-10 on small rings.

#pragma once

#include "qfd/detection.hpp"
#include "qfd/types.hpp"

#include <vector>

namespace qfd {

class RingWalker {
public:
    // Ring of L sites with hopping gamma, flux alpha per hop, detection on
    // internal site index rd (0-based).
    RingWalker(int L, double tau, int rd, double gamma = 1.0,
               double alpha = 0.0);

    // One unitary step followed by a detection attempt; returns F_n and
    // leaves the unnormalized post-collapse state in place.
    double step();

    const Vec& state() const { return psi_; }
    void set_state(Vec psi);
    double survival() const { return psi_.squaredNorm(); }

    // Per-site probability density of the unnormalized surviving state.
    std::vector<double> density() const;

private:
    int length_;
    int rd_;
    Vec phase_;  // exp(-i tau E_k) in FFT ordering
    Vec psi_;
};

// Detection series on a ring, Fourier-space recursion throughout.
DetectionSeries simulate_ring(int L, double tau, int r_in, int rd, int n_max,
                              double gamma = 1.0, double alpha = 0.0);

// Survival operator restricted to the reflection-symmetric subspace about
// the detection site (dimension L/2 + 1, L even). The antisymmetric
// complement is spanned by stationary dark states and is dropped.
Mat symmetric_survival_matrix(int L, double tau, double gamma = 1.0);

}  // namespace qfd
