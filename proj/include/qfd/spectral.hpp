// spectral.hpp — Hermitian diagonalization, quasienergy sectors, resonances.
//
// The spectral substrate for the detection machinery: exact diagonalization
// of a validated Hermitian matrix, grouping of energy levels into quasienergy
// sectors for a given detection period tau, and detection of resonant periods
// where distinct energies collapse onto one quasienergy.

#pragma once

#include "qfd/types.hpp"

#include <utility>
#include <vector>

namespace qfd {

// Dense Hermitian matrix, validated at construction.
class HermitianMatrix {
public:
    // Throws std::invalid_argument if m is empty, non-square, or violates
    // Hermiticity beyond `eps` (the message names the max asymmetry).
    explicit HermitianMatrix(Mat m, double eps = tol::hermitian);

    const Mat& matrix() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

private:
    Mat mat_;
};

// Eigendecomposition with energies merged into degenerate levels.
// Level l occupies columns [offsets[l], offsets[l] + multiplicities[l]) of
// `eigenvectors`; the full column set is orthonormal.
struct SpectralData {
    std::vector<double> energies;       // distinct levels, ascending
    std::vector<int> multiplicities;    // g_l >= 1
    std::vector<int> offsets;           // column offset of each level
    Mat eigenvectors;                   // dim x dim

    int dim() const { return static_cast<int>(eigenvectors.rows()); }
    int level_count() const { return static_cast<int>(energies.size()); }

    // Orthonormal basis of level l (dim x g_l view).
    Eigen::Block<const Mat> level_basis(int l) const {
        return eigenvectors.block(0, offsets[l], eigenvectors.rows(),
                                  multiplicities[l]);
    }

    // Eigenspace projector of level l.
    Mat projector(int l) const;
};

// One quasienergy sector: all energy levels whose phases tau*E mod 2pi
// coincide, with the pooled orthonormal basis.
struct QuasienergySector {
    double phase = 0.0;            // lambda in [0, 2pi)
    std::vector<int> levels;       // source level indices, ascending
    int multiplicity = 0;          // merged g
    Mat basis;                     // dim x multiplicity

    Mat projector() const { return basis * basis.adjoint(); }
};

struct QuasienergySectors {
    double tau = 0.0;
    std::vector<QuasienergySector> sectors;  // sorted by phase
    bool resonant = false;  // true iff distinct energy levels merged

    int dim() const;
    int sector_count() const { return static_cast<int>(sectors.size()); }
};

// Diagonalizes H; energies closer than rel_tol * spectral range are merged
// into one degenerate level with a pooled orthonormal basis.
SpectralData diagonalize(const HermitianMatrix& H,
                         double rel_tol = tol::degeneracy_rel);

// Groups energy levels into quasienergy sectors at detection period tau.
// Levels whose phases tau*E mod 2pi coincide within phase_tol (circular
// distance, transitively closed) form one sector.
QuasienergySectors build_sectors(const SpectralData& spec, double tau,
                                 double phase_tol = tol::phase);

// All level pairs (k, l), k < l, with (E_k - E_l)*tau = 0 mod 2pi within
// phase_tol. Empty exactly when build_sectors reports resonant = false.
std::vector<std::pair<int, int>> detect_resonances(
    const SpectralData& spec, double tau, double phase_tol = tol::phase);

// Evolution operator U(tau) = sum_l exp(-i tau E_l) P_l.
Mat propagator(const SpectralData& spec, double tau);

}  // namespace qfd
