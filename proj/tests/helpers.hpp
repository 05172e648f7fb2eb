// Shared fixtures and independent oracles for the test suites. Everything
// here stays deliberately separate from the library's computation paths:
// the matrix exponential is scaling-and-squaring on a Taylor series, and
// spectral projectors are rebuilt by brute-force phase binning.

#pragma once

#include "qfd/detection.hpp"
#include "qfd/graphs.hpp"
#include "qfd/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <random>
#include <vector>

namespace qfd::testing {

// Matrix exponential by scaling-and-squaring over a plain Taylor series.
inline Mat expm(Mat a) {
    int squarings = 0;
    double norm = a.cwiseAbs().sum();
    while (norm > 0.5) {
        a *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    const int n = static_cast<int>(a.rows());
    Mat result = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    for (int k = 1; k <= 24; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = (result * result).eval();
    return result;
}

inline Mat unitary_oracle(const Mat& hamiltonian, double tau) {
    return expm(cxd(0.0, -tau) * hamiltonian);
}

inline Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cxd(g(rng), g(rng));
    v.normalize();
    return v;
}

inline Mat random_unitary(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    // Fix column phases so the factorization is unique-ish (not required,
    // just keeps draws well spread).
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cxd d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

inline Mat random_hermitian(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd(g(rng), g(rng));
    return 0.5 * (a + a.adjoint()).eval();
}

// Hermitian matrix with prescribed eigenvalues (repeats allowed) and a
// random eigenbasis.
inline Mat hermitian_with_spectrum(std::mt19937_64& rng,
                                   const std::vector<double>& eigenvalues) {
    const int dim = static_cast<int>(eigenvalues.size());
    const Mat v = random_unitary(rng, dim);
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i) d(i) = eigenvalues[i];
    Mat h = v * d.asDiagonal() * v.adjoint();
    return 0.5 * (h + h.adjoint()).eval();
}

// Brute-force evaluation of the sector sum for the total detection
// probability, built directly from the propagator oracle: eigenvalues of
// U(tau) are binned by phase, projectors assembled from the binned
// eigenvectors. Independent of SpectralData/QuasienergySectors.
inline double pdet_bruteforce(const Mat& hamiltonian, double tau,
                              const Vec& psi_d, const Vec& psi_in,
                              double bin_tol = 1e-6) {
    const Mat u = unitary_oracle(hamiltonian, tau);
    Eigen::ComplexEigenSolver<Mat> solver(u, true);
    const Vec vals = solver.eigenvalues();
    const Mat vecs = solver.eigenvectors();
    const int n = static_cast<int>(vals.size());

    std::vector<bool> used(n, false);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> group;
        for (int j = i; j < n; ++j) {
            if (!used[j] && std::abs(vals(j) - vals(i)) < bin_tol) {
                group.push_back(j);
                used[j] = true;
            }
        }
        Mat basis(n, group.size());
        for (size_t k = 0; k < group.size(); ++k) basis.col(k) = vecs.col(group[k]);
        // Eigenvectors of a defect-free normal matrix may come out slightly
        // non-orthogonal inside a degenerate cluster; orthonormalize.
        Eigen::HouseholderQR<Mat> qr(basis);
        basis = qr.householderQ() * Mat::Identity(n, group.size());
        const Vec a = basis.adjoint() * psi_d;
        const double weight = a.squaredNorm();
        if (weight < 1e-12) continue;
        const Vec b = basis.adjoint() * psi_in;
        total += std::norm(a.dot(b)) / weight;
    }
    return total;
}

}  // namespace qfd::testing
