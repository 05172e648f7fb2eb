#include "qfd/ring_walk.hpp"

#include <unsupported/Eigen/FFT>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace qfd {

RingWalker::RingWalker(int L, double tau, int rd, double gamma, double alpha)
    : length_(L), rd_(rd) {
    if (L < 2) throw std::invalid_argument("RingWalker: L must be >= 2");
    if (rd < 0 || rd >= L) throw std::invalid_argument("RingWalker: rd out of range");
    if (tau <= 0.0) throw std::invalid_argument("RingWalker: tau must be positive");
    phase_.resize(L);
    for (int k = 0; k < L; ++k) {
        const double energy = -2.0 * gamma * std::cos(two_pi * k / L + alpha);
        phase_(k) = std::exp(cxd(0.0, -tau * energy));
    }
    psi_ = Vec::Zero(L);
}

void RingWalker::set_state(Vec psi) {
    if (psi.size() != length_) {
        throw std::invalid_argument("RingWalker: state dimension mismatch");
    }
    psi_ = std::move(psi);
}

double RingWalker::step() {
    // Plane wave with momentum index k is an eigenstate; the forward FFT
    // projects onto exp(-2 pi i k r / L), matching the phase table ordering.
    static thread_local Eigen::FFT<double> fft;
    std::vector<cxd> buf(psi_.data(), psi_.data() + psi_.size());
    std::vector<cxd> hat;
    fft.fwd(hat, buf);
    for (int k = 0; k < length_; ++k) hat[k] *= phase_(k);
    fft.inv(buf, hat);
    for (int r = 0; r < length_; ++r) psi_(r) = buf[r];

    const double fn = std::norm(psi_(rd_));
    psi_(rd_) = 0.0;  // collapse after a failed detection attempt
    return fn;
}

std::vector<double> RingWalker::density() const {
    std::vector<double> rho(length_);
    for (int r = 0; r < length_; ++r) rho[r] = std::norm(psi_(r));
    return rho;
}

DetectionSeries simulate_ring(int L, double tau, int r_in, int rd, int n_max,
                              double gamma, double alpha) {
    if (n_max < 1) throw std::invalid_argument("simulate_ring: n_max must be >= 1");
    RingWalker walker(L, tau, rd, gamma, alpha);
    Vec psi = Vec::Zero(L);
    psi(r_in) = 1.0;
    walker.set_state(std::move(psi));

    DetectionSeries out;
    out.F.reserve(n_max);
    out.S.reserve(n_max + 1);
    out.S.push_back(1.0);
    for (int n = 1; n <= n_max; ++n) {
        out.F.push_back(walker.step());
        out.S.push_back(walker.survival());
    }
    return out;
}

Mat symmetric_survival_matrix(int L, double tau, double gamma) {
    if (L < 4 || L % 2 != 0) {
        throw std::invalid_argument(
            "symmetric_survival_matrix: L must be even and >= 4");
    }
    const int m = L / 2 + 1;

    // Hamiltonian in the symmetric basis {|0>, (|+k>+|-k>)/sqrt2, |L/2>}:
    // a half-line with sqrt(2)-enhanced hops at both ends.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k + 1 < m; ++k) {
        const double hop =
            (k == 0 || k + 2 == m) ? -gamma * std::sqrt(2.0) : -gamma;
        h(k, k + 1) = hop;
        h(k + 1, k) = hop;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric_survival_matrix: eigensolver failed");
    }
    Vec phases(m);
    for (int k = 0; k < m; ++k) {
        phases(k) = std::exp(cxd(0.0, -tau * solver.eigenvalues()(k)));
    }
    const Mat vecs = solver.eigenvectors().cast<cxd>();
    Mat U = vecs * phases.asDiagonal() * vecs.adjoint();
    U.row(0).setZero();  // detection site is basis state 0 in this subspace
    return U;
}

}  // namespace qfd
