// experiments.hpp — scripted parameter studies on detection statistics.
//
// Magnetic-ring sweeps of the truncated detection probability 1 - S_N, the
// half-survival crossing time as a fingerprint of tiny flux, the crossover of
// F_n away from the flux-free decay, density spreading on large rings, and
// the census of fast survival-operator eigenvalues. Everything here is
// deterministic; grid cells are independent pure computations and may run on
// worker threads (capped by the QFD_THREADS environment variable).

#pragma once

#include "qfd/detection.hpp"
#include "qfd/types.hpp"

#include <optional>
#include <vector>

namespace qfd {

// Magnetic-ring sweep grid; nodes are labels (ring convention: 1..L).
struct SweepGrid {
    std::vector<double> alphas;
    std::vector<double> taus;
    int L = 6;
    int n_measurements = 50;
    long r_in = 1;
    long r_d = 0;  // 0 == label L (same node, periodic labels)
    double gamma = 1.0;
};

// Row-major [alpha][tau] table of 1 - S_N.
struct SweepResult {
    std::vector<double> alphas;
    std::vector<double> taus;
    std::vector<std::vector<double>> one_minus_sn;
};

struct DensitySnapshot {
    int n = 0;
    std::vector<double> density;  // per site, sums to S_n
    double survival = 0.0;
    double mean_distance = 0.0;  // ring distance to the start site, given survival
};

struct CensusMode {
    enum Kind { full, symmetric_subspace } kind = symmetric_subspace;
};

struct CensusResult {
    int fast_count = 0;
    int total_count = 0;
};

// 1 - S_N for every (alpha, tau) cell; parallel over cells, output ordering
// follows the input grids.
SweepResult sweep_tau_alpha(const SweepGrid& grid);

// First n with S_n < 1/2, or nullopt if not reached within n_cap.
std::optional<int> n_half(int L, double alpha, double tau, long r_in, long r_d,
                          int n_cap, double gamma = 1.0);

// F_n series for each alpha (dense recursion, shared setup).
std::vector<DetectionSeries> fn_crossover(int L, const std::vector<double>& alphas,
                                          double tau, int n_max,
                                          double gamma = 1.0);

// First n at which series.F[n] exceeds factor * baseline.F[n]; nullopt when
// the two series never separate.
std::optional<int> crossover_index(const DetectionSeries& series,
                                   const DetectionSeries& baseline,
                                   double factor = 2.0);

// Envelope level of the excess F_n(alpha) - F_n(0) averaged over `window`
// measurements starting at n_c. F_n oscillates strongly on rings, so point
// values at single n are phase-noisy; the windowed mean of the excess tracks
// the flux-induced plateau.
double crossover_level(const DetectionSeries& series,
                       const DetectionSeries& baseline, int n_c,
                       int window = 12);

// Surviving-density snapshots at the requested measurement counts (ascending),
// start and detect given as internal site indices. Guarded against rings
// larger than max_sites.
std::vector<DensitySnapshot> spread_density(int L, double tau,
                                            const std::vector<int>& snapshot_ns,
                                            int start_site, int detect_site,
                                            double gamma = 1.0,
                                            int max_sites = 1 << 22);

// Counts survival-operator eigenvalues with 1 - |zeta| > threshold on a ring
// with one detection site. The symmetric-subspace mode restricts to the
// reflection-symmetric sector (dimension L/2 + 1) that actually couples to
// the detector; full mode solves the complete L x L operator.
CensusResult fast_eigenvalue_census(int L, double tau, double threshold,
                                    CensusMode mode = {}, double gamma = 1.0);

// Worker count for grid parallelism: QFD_THREADS if set, else the hardware
// concurrency, at least 1.
int sweep_thread_count();

}  // namespace qfd
