#include "qfd/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qfd {

HermitianMatrix::HermitianMatrix(Mat m, double eps) : mat_(std::move(m)) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
        throw std::invalid_argument("HermitianMatrix: matrix must be square with dim >= 1");
    }
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index i = 0; i < mat_.rows(); ++i) {
        for (Eigen::Index j = i; j < mat_.cols(); ++j) {
            double a = std::abs(mat_(i, j) - std::conj(mat_(j, i)));
            if (a > worst) {
                worst = a;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > eps) {
        std::ostringstream msg;
        msg << "HermitianMatrix: max asymmetry " << worst << " at (" << wi
            << "," << wj << ") exceeds tolerance " << eps;
        throw std::invalid_argument(msg.str());
    }
    // Symmetrize so downstream arithmetic sees an exactly Hermitian matrix.
    mat_ = 0.5 * (mat_ + mat_.adjoint()).eval();
}

Mat SpectralData::projector(int l) const {
    auto basis = level_basis(l);
    return basis * basis.adjoint();
}

SpectralData diagonalize(const HermitianMatrix& H, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(H.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("diagonalize: eigensolver did not converge");
    }
    const Eigen::VectorXd vals = solver.eigenvalues();  // ascending
    const Mat vecs = solver.eigenvectors();
    const int n = static_cast<int>(vals.size());

    const double range = vals(n - 1) - vals(0);
    const double scale = std::max({range, std::abs(vals(0)), std::abs(vals(n - 1)), 1.0});
    const double merge_tol = rel_tol * scale;

    SpectralData out;
    out.eigenvectors = vecs;
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || vals(i) - vals(i - 1) > merge_tol) {
            const int g = i - start;
            out.energies.push_back(vals.segment(start, g).mean());
            out.multiplicities.push_back(g);
            out.offsets.push_back(start);
            start = i;
        }
    }

    // The solver's columns are orthonormal already; a Householder QR pass per
    // level removes any residual drift inside pooled degenerate blocks.
    for (int l = 0; l < out.level_count(); ++l) {
        const int g = out.multiplicities[l];
        if (g == 1) continue;
        Mat block = out.eigenvectors.block(0, out.offsets[l], n, g);
        Eigen::HouseholderQR<Mat> qr(block);
        Mat q = qr.householderQ() * Mat::Identity(n, g);
        out.eigenvectors.block(0, out.offsets[l], n, g) = q;
    }
    return out;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

QuasienergySectors build_sectors(const SpectralData& spec, double tau,
                                 double phase_tol) {
    if (tau <= 0.0) {
        throw std::invalid_argument("build_sectors: tau must be positive");
    }
    const int nl = spec.level_count();
    std::vector<double> phases(nl);
    for (int l = 0; l < nl; ++l) phases[l] = wrap_phase(tau * spec.energies[l]);

    std::vector<int> parent(nl);
    std::iota(parent.begin(), parent.end(), 0);
    for (int k = 0; k < nl; ++k) {
        for (int l = k + 1; l < nl; ++l) {
            if (circular_distance(phases[k], phases[l]) <= phase_tol) {
                parent[find_root(parent, l)] = find_root(parent, k);
            }
        }
    }

    std::vector<std::vector<int>> groups(nl);
    for (int l = 0; l < nl; ++l) groups[find_root(parent, l)].push_back(l);

    QuasienergySectors out;
    out.tau = tau;
    for (int r = 0; r < nl; ++r) {
        if (groups[r].empty()) continue;
        QuasienergySector sec;
        sec.levels = groups[r];
        std::sort(sec.levels.begin(), sec.levels.end());
        // Circular mean of the member phases; merged members may straddle
        // the 0/2pi seam, so average signed offsets from the first member
        // and snap a near-seam representative down to zero.
        const double anchor = phases[sec.levels.front()];
        double offset = 0.0;
        for (int l : sec.levels) {
            double d = wrap_phase(phases[l] - anchor);
            if (d > std::numbers::pi) d -= two_pi;
            offset += d;
        }
        sec.phase = wrap_phase(anchor + offset / sec.levels.size());
        if (two_pi - sec.phase <= phase_tol) sec.phase = 0.0;
        sec.multiplicity = 0;
        for (int l : sec.levels) sec.multiplicity += spec.multiplicities[l];
        sec.basis.resize(spec.dim(), sec.multiplicity);
        int col = 0;
        for (int l : sec.levels) {
            const int g = spec.multiplicities[l];
            sec.basis.block(0, col, spec.dim(), g) = spec.level_basis(l);
            col += g;
        }
        if (sec.levels.size() > 1) out.resonant = true;
        out.sectors.push_back(std::move(sec));
    }
    std::sort(out.sectors.begin(), out.sectors.end(),
              [](const QuasienergySector& a, const QuasienergySector& b) {
                  return a.phase < b.phase;
              });
    return out;
}

int QuasienergySectors::dim() const {
    int d = 0;
    for (const auto& s : sectors) d += s.multiplicity;
    return d;
}

std::vector<std::pair<int, int>> detect_resonances(const SpectralData& spec,
                                                   double tau,
                                                   double phase_tol) {
    if (tau <= 0.0) {
        throw std::invalid_argument("detect_resonances: tau must be positive");
    }
    std::vector<std::pair<int, int>> pairs;
    const int nl = spec.level_count();
    for (int k = 0; k < nl; ++k) {
        for (int l = k + 1; l < nl; ++l) {
            double gap = wrap_phase(tau * (spec.energies[k] - spec.energies[l]));
            if (std::min(gap, two_pi - gap) <= phase_tol) pairs.emplace_back(k, l);
        }
    }
    return pairs;
}

Mat propagator(const SpectralData& spec, double tau) {
    const int n = spec.dim();
    Vec phases(n);
    for (int l = 0; l < spec.level_count(); ++l) {
        const cxd ph = std::exp(cxd(0.0, -tau * spec.energies[l]));
        for (int m = 0; m < spec.multiplicities[l]; ++m) {
            phases(spec.offsets[l] + m) = ph;
        }
    }
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

}  // namespace qfd
