// detection.hpp — stroboscopic first-detection machinery.
//
// A particle evolves under U(tau) between projective detection attempts on a
// fixed state psi_d. This module computes the first-detection series F_n /
// survival series S_n by state-vector recursion, the total detection
// probability by three independent routes (sector sum, bright-space
// projection, atomic-measure sum) plus a numerical contour integral of the
// detection amplitude's generating function, and the explicit bright/dark
// subspace bases behind those numbers.

#pragma once

#include "qfd/spectral.hpp"
#include "qfd/types.hpp"

#include <optional>
#include <vector>

namespace qfd {

// Initial state, detection state, and detection period.
struct DetectionSetup {
    Vec psi_in;
    Vec psi_d;
    double tau = 1.0;

    // Throws std::invalid_argument unless both vectors are unit-norm, of
    // equal dimension, and tau > 0.
    DetectionSetup(Vec psi_in, Vec psi_d, double tau);
};

// First-detection probabilities F_1..F_N and survival S_0..S_N, S_0 = 1.
struct DetectionSeries {
    std::vector<double> F;
    std::vector<double> S;

    int steps() const { return static_cast<int>(F.size()); }
};

// A basis vector tagged with the quasienergy sector it came from.
struct LabeledState {
    int sector = 0;
    Vec state;
};

// Bright eigenstates and stationary dark states, one partition of the
// Hilbert space: count(bright) + count(dark) = dim.
struct SubspaceBases {
    std::vector<LabeledState> bright;
    std::vector<LabeledState> dark;
    std::vector<int> completely_dark_sectors;
};

// Spectrum of the survival operator, classified against the unit circle.
struct SurvivalSpectrum {
    Vec eigenvalues;
    std::vector<int> unit_circle_ids;  // |zeta| > 1 - tol
    std::vector<int> interior_ids;
    double zeta_max = 0.0;  // largest interior modulus, 0 if none
};

// Atomic measure of the detection state over quasienergy phases, with the
// transition ratio value attached to each atom. Completely dark sectors are
// excluded.
struct SpectralMeasure {
    struct Atom {
        double phase = 0.0;   // lambda_l
        double weight = 0.0;  // <psi_d| P_l |psi_d>
        cxd value;            // <psi_d| P_l |psi_in> / weight
    };
    std::vector<Atom> atoms;
};

struct ContourResult {
    double value = 0.0;
    double error_estimate = 0.0;  // difference of the last two refinements
    bool converged = false;
};

struct PoleDualityReport {
    double max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0;  // samples too close to an eigenvalue
};

struct DecayFitWindow {
    int n_lo = 0;
    int n_hi = 0;
};

struct DecayRateReport {
    double fitted_rate = 0.0;    // least-squares slope of -ln(S_n - S_inf)
    double spectral_rate = 0.0;  // -2 ln |zeta_max|
    double relative_gap = 0.0;
    bool insufficient_window = false;
    bool ok = false;  // window sufficient and rates within 5%
};

// Survival operator (1 - |psi_d><psi_d|) U.
Mat survival_operator(const Mat& U, const Vec& psi_d);

// Runs n_max detection attempts by repeated application of the survival
// operator to a state vector (matrix powers are never formed).
DetectionSeries simulate(const DetectionSetup& setup, const HermitianMatrix& H,
                         int n_max);

// As above with a precomputed propagator U(tau).
DetectionSeries simulate_with_propagator(const DetectionSetup& setup,
                                         const Mat& U, int n_max);

// Total detection probability as the primed sector sum
//   sum_l' |<psi_d|P_l|psi_in>|^2 / <P_l>_{psi_d},
// skipping sectors with <P_l>_{psi_d} below dark_tol.
double pdet_spectral(const QuasienergySectors& sectors, const Vec& psi_d,
                     const Vec& psi_in, double dark_tol = tol::completely_dark);

// Explicit bright/dark decomposition. Per non-completely-dark sector the
// bright state is P_l psi_d normalized; the g_l - 1 stationary dark states
// follow from the closed-form orthogonalization against psi_d inside the
// sector, then a modified Gram-Schmidt pass. Completely dark sectors
// contribute their whole eigenbasis as dark.
SubspaceBases bright_dark_bases(const QuasienergySectors& sectors,
                                const Vec& psi_d,
                                double dark_tol = tol::completely_dark);

// Total detection probability as the overlap with the bright space.
double pdet_projection(const SubspaceBases& bases, const Vec& psi_in);

// Atomic spectral measure of psi_d with transition values toward psi_in.
SpectralMeasure spectral_measure(const QuasienergySectors& sectors,
                                 const Vec& psi_d, const Vec& psi_in,
                                 double dark_tol = tol::completely_dark);

// Total detection probability as sum_l weight_l |value_l|^2.
double pdet_aleksandrov(const SpectralMeasure& measure);

// First-detection amplitude generating function
//   phi(z) = z * sum_l w_l v_l e^{-i lambda_l} / (1 - z e^{-i lambda_l})
//              / sum_l w_l / (1 - z e^{-i lambda_l}).
// Throws std::domain_error at a pole of the eigen-sum or on top of an atom.
cxd generating_function(const SpectralMeasure& measure, cxd z);
cxd generating_function(const QuasienergySectors& sectors,
                        const DetectionSetup& setup, cxd z);

// Total detection probability as (1/2pi) Int |phi(e^{i theta})|^2 d theta,
// trapezoid on a grid that excludes half-width `exclusion` neighborhoods of
// each atom, refined with Richardson extrapolation until the step estimate
// falls below target_error (or max_refinements is hit).
struct ContourOptions {
    int n_nodes = 4096;
    double exclusion = 1e-4;     // radians around each atom
    double target_error = 1e-8;
    int max_refinements = 8;
};
ContourResult pdet_contour(const DetectionSetup& setup, const HermitianMatrix& H,
                           const ContourOptions& opts = {});

// Full non-Hermitian eigensolve of the survival operator with unit-circle
// classification at 1 - tol.
SurvivalSpectrum survival_spectrum(const Mat& survival, double tol = 1e-8);

// Checks the resolvent/determinant identity linking the survival spectrum to
// the generating function's poles,
//   <psi_d| (1 - U/zeta)^{-1} |psi_d>  =  det(zeta - S) / det(zeta - U),
// at each sample; samples within 1e-6 of either spectrum are skipped.
PoleDualityReport verify_pole_duality(const HermitianMatrix& H,
                                      const DetectionSetup& setup,
                                      const std::vector<cxd>& samples);

// Fits the asymptotic exponential decay of S_n - s_inf and compares it with
// -2 ln |zeta_max|. Default window: the decades [1e-6, 1e-3] relative to the
// decaying component's start, requiring at least six decades of total decay;
// pass an explicit window to override.
DecayRateReport decay_rate_check(const DetectionSeries& series,
                                 const SurvivalSpectrum& spectrum, double s_inf,
                                 std::optional<DecayFitWindow> window = {});

}  // namespace qfd
