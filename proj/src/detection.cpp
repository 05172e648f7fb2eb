#include "qfd/detection.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qfd {

DetectionSetup::DetectionSetup(Vec in, Vec d, double t)
    : psi_in(std::move(in)), psi_d(std::move(d)), tau(t) {
    if (psi_in.size() != psi_d.size() || psi_in.size() == 0) {
        throw std::invalid_argument("DetectionSetup: state dimensions differ");
    }
    if (!is_unit_vector(psi_in) || !is_unit_vector(psi_d)) {
        throw std::invalid_argument("DetectionSetup: states must be unit-norm");
    }
    if (tau <= 0.0) {
        throw std::invalid_argument("DetectionSetup: tau must be positive");
    }
}

Mat survival_operator(const Mat& U, const Vec& psi_d) {
    if (U.rows() != U.cols() || U.rows() != psi_d.size()) {
        throw std::invalid_argument("survival_operator: dimension mismatch");
    }
    return U - psi_d * (psi_d.adjoint() * U);
}

DetectionSeries simulate_with_propagator(const DetectionSetup& setup,
                                         const Mat& U, int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("simulate: n_max must be >= 1");
    }
    if (U.rows() != setup.psi_in.size()) {
        throw std::invalid_argument("simulate: propagator dimension mismatch");
    }
    DetectionSeries out;
    out.F.reserve(n_max);
    out.S.reserve(n_max + 1);
    out.S.push_back(1.0);

    Vec psi = setup.psi_in;
    Vec evolved(psi.size());
    for (int n = 1; n <= n_max; ++n) {
        evolved.noalias() = U * psi;
        const cxd amp = setup.psi_d.dot(evolved);
        out.F.push_back(std::norm(amp));
        psi = evolved - amp * setup.psi_d;  // collapse after a failed attempt
        out.S.push_back(psi.squaredNorm());
    }
    return out;
}

DetectionSeries simulate(const DetectionSetup& setup, const HermitianMatrix& H,
                         int n_max) {
    return simulate_with_propagator(setup, propagator(diagonalize(H), setup.tau),
                                    n_max);
}

double pdet_spectral(const QuasienergySectors& sectors, const Vec& psi_d,
                     const Vec& psi_in, double dark_tol) {
    if (psi_d.size() != psi_in.size() || sectors.dim() != psi_d.size()) {
        throw std::invalid_argument("pdet_spectral: dimension mismatch");
    }
    double total = 0.0;
    for (const auto& sec : sectors.sectors) {
        const Vec a = sec.basis.adjoint() * psi_d;
        const double weight = a.squaredNorm();
        if (weight < dark_tol) continue;  // completely dark sector
        const Vec b = sec.basis.adjoint() * psi_in;
        total += std::norm(a.dot(b)) / weight;
    }
    return total;
}

SubspaceBases bright_dark_bases(const QuasienergySectors& sectors,
                                const Vec& psi_d, double dark_tol) {
    if (sectors.dim() != psi_d.size()) {
        throw std::invalid_argument("bright_dark_bases: dimension mismatch");
    }
    SubspaceBases out;
    for (int s = 0; s < sectors.sector_count(); ++s) {
        const auto& sec = sectors.sectors[s];
        const int g = sec.multiplicity;
        Vec alpha = sec.basis.adjoint() * psi_d;  // <E_m | psi_d>
        const double weight = alpha.squaredNorm();

        if (weight < dark_tol) {
            for (int m = 0; m < g; ++m) {
                out.dark.push_back({s, sec.basis.col(m)});
            }
            out.completely_dark_sectors.push_back(s);
            continue;
        }

        out.bright.push_back({s, (sec.basis * alpha) / std::sqrt(weight)});
        if (g == 1) continue;

        // Order the sector basis by decreasing overlap so the prefix sums in
        // the closed-form dark construction never start at zero.
        std::vector<int> order(g);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::norm(alpha(a)) > std::norm(alpha(b));
        });

        Vec running = Vec::Zero(psi_d.size());  // sum_j a_j |E_j>
        double prefix = 0.0;                    // sum_j |a_j|^2
        std::vector<Vec> sector_dark;
        sector_dark.reserve(g - 1);
        for (int k = 0; k < g; ++k) {
            const cxd a_k = alpha(order[k]);
            const Vec col = sec.basis.col(order[k]);
            if (k > 0) {
                const double next = prefix + std::norm(a_k);
                Vec d = prefix * col - std::conj(a_k) * running;
                d /= std::sqrt(prefix * next);
                sector_dark.push_back(std::move(d));
            }
            running += a_k * col;
            prefix += std::norm(a_k);
        }

        // Modified Gram-Schmidt pass to cap accumulated rounding.
        for (size_t i = 0; i < sector_dark.size(); ++i) {
            for (size_t j = 0; j < i; ++j) {
                sector_dark[i] -= sector_dark[j].dot(sector_dark[i]) * sector_dark[j];
            }
            sector_dark[i].normalize();
            out.dark.push_back({s, sector_dark[i]});
        }
    }
    return out;
}

double pdet_projection(const SubspaceBases& bases, const Vec& psi_in) {
    double total = 0.0;
    for (const auto& b : bases.bright) total += std::norm(b.state.dot(psi_in));
    return total;
}

SpectralMeasure spectral_measure(const QuasienergySectors& sectors,
                                 const Vec& psi_d, const Vec& psi_in,
                                 double dark_tol) {
    if (psi_d.size() != psi_in.size() || sectors.dim() != psi_d.size()) {
        throw std::invalid_argument("spectral_measure: dimension mismatch");
    }
    SpectralMeasure out;
    for (const auto& sec : sectors.sectors) {
        const Vec a = sec.basis.adjoint() * psi_d;
        const double weight = a.squaredNorm();
        if (weight < dark_tol) continue;
        const Vec b = sec.basis.adjoint() * psi_in;
        out.atoms.push_back({sec.phase, weight, a.dot(b) / weight});
    }
    return out;
}

double pdet_aleksandrov(const SpectralMeasure& measure) {
    double total = 0.0;
    for (const auto& atom : measure.atoms) {
        total += atom.weight * std::norm(atom.value);
    }
    return total;
}

cxd generating_function(const SpectralMeasure& measure, cxd z) {
    if (measure.atoms.empty()) {
        throw std::domain_error("generating_function: empty measure");
    }
    cxd num = 0.0, den = 0.0;
    double den_scale = 0.0;
    for (const auto& atom : measure.atoms) {
        const cxd rot = std::exp(cxd(0.0, -atom.phase));
        const cxd gap = 1.0 - z * rot;
        if (std::abs(gap) < 1e-14 * std::max(1.0, std::abs(z))) {
            throw std::domain_error(
                "generating_function: z coincides with a spectral atom");
        }
        num += atom.weight * atom.value * rot / gap;
        den += atom.weight / gap;
        den_scale += atom.weight / std::abs(gap);
    }
    if (std::abs(den) < 1e-10 * den_scale) {
        throw std::domain_error("generating_function: z is at a pole");
    }
    return z * num / den;
}

cxd generating_function(const QuasienergySectors& sectors,
                        const DetectionSetup& setup, cxd z) {
    return generating_function(
        spectral_measure(sectors, setup.psi_d, setup.psi_in), z);
}

namespace {

// Trapezoid over the kept grid points (gaps across excluded windows are
// bridged by the same rule, one sub-interval wide).
double contour_pass(const SpectralMeasure& measure, int n_nodes,
                    double exclusion) {
    std::vector<double> theta;
    std::vector<double> f;
    theta.reserve(n_nodes);
    f.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double t = two_pi * i / n_nodes;
        bool excluded = false;
        for (const auto& atom : measure.atoms) {
            if (circular_distance(t, atom.phase) < exclusion) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        theta.push_back(t);
        f.push_back(std::norm(
            generating_function(measure, std::exp(cxd(0.0, t)))));
    }
    if (theta.size() < 8) {
        throw std::runtime_error("pdet_contour: grid too coarse for exclusions");
    }
    double integral = 0.0;
    const size_t m = theta.size();
    for (size_t i = 0; i < m; ++i) {
        const size_t j = (i + 1) % m;
        double dt = theta[j] - theta[i];
        if (dt <= 0.0) dt += two_pi;
        integral += 0.5 * dt * (f[i] + f[j]);
    }
    return integral / two_pi;
}

}  // namespace

ContourResult pdet_contour(const DetectionSetup& setup, const HermitianMatrix& H,
                           const ContourOptions& opts) {
    const auto sectors = build_sectors(diagonalize(H), setup.tau);
    const auto measure = spectral_measure(sectors, setup.psi_d, setup.psi_in);

    ContourResult out;
    int nodes = std::max(opts.n_nodes, 64);
    double coarse = contour_pass(measure, nodes, opts.exclusion);
    for (int r = 0; r < opts.max_refinements; ++r) {
        nodes *= 2;
        const double fine = contour_pass(measure, nodes, opts.exclusion);
        out.error_estimate = std::abs(fine - coarse);
        out.value = fine + (fine - coarse) / 3.0;  // Richardson, trapezoid order
        if (out.error_estimate < opts.target_error) {
            out.converged = true;
            return out;
        }
        coarse = fine;
    }
    out.converged = false;
    return out;
}

SurvivalSpectrum survival_spectrum(const Mat& survival, double tol) {
    if (survival.rows() != survival.cols() || survival.rows() == 0) {
        throw std::invalid_argument("survival_spectrum: matrix must be square");
    }
    Eigen::ComplexEigenSolver<Mat> solver(survival, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("survival_spectrum: eigensolver failed");
    }
    SurvivalSpectrum out;
    out.eigenvalues = solver.eigenvalues();
    for (int i = 0; i < out.eigenvalues.size(); ++i) {
        const double mag = std::abs(out.eigenvalues(i));
        if (mag > 1.0 - tol) {
            out.unit_circle_ids.push_back(i);
        } else {
            out.interior_ids.push_back(i);
            out.zeta_max = std::max(out.zeta_max, mag);
        }
    }
    return out;
}

PoleDualityReport verify_pole_duality(const HermitianMatrix& H,
                                      const DetectionSetup& setup,
                                      const std::vector<cxd>& samples) {
    const auto spec = diagonalize(H);
    const Mat U = propagator(spec, setup.tau);
    const Mat S = survival_operator(U, setup.psi_d);
    const int n = H.dim();

    // Both spectra, for the proximity guard.
    std::vector<cxd> spectrum;
    for (int l = 0; l < spec.level_count(); ++l) {
        spectrum.push_back(std::exp(cxd(0.0, -setup.tau * spec.energies[l])));
    }
    const auto surv = survival_spectrum(S);
    for (int i = 0; i < surv.eigenvalues.size(); ++i) {
        spectrum.push_back(surv.eigenvalues(i));
    }

    const Mat eye = Mat::Identity(n, n);
    PoleDualityReport report;
    for (const cxd zeta : samples) {
        double min_gap = 1e300;
        for (const cxd ev : spectrum) min_gap = std::min(min_gap, std::abs(zeta - ev));
        if (min_gap < 1e-6) {
            ++report.skipped;
            continue;
        }
        const Mat resolvent = eye - U / zeta;
        const cxd lhs = setup.psi_d.dot(
            resolvent.partialPivLu().solve(setup.psi_d));
        // Matrix determinant lemma applied to zeta*1 - S =
        // (zeta*1 - U) + |psi_d><psi_d| U gives
        //   det(zeta*1 - S) = zeta det(zeta*1 - U) <psi_d|(zeta*1-U)^{-1}|psi_d>,
        // i.e. the resolvent diagonal equals det(zeta*1-S)/det(zeta*1-U).
        const cxd det_s = (zeta * eye - S).partialPivLu().determinant();
        const cxd det_u = (zeta * eye - U).partialPivLu().determinant();
        const cxd rhs = det_s / det_u;
        const double residual =
            std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-12});
        report.max_residual = std::max(report.max_residual, residual);
        ++report.evaluated;
    }
    return report;
}

DecayRateReport decay_rate_check(const DetectionSeries& series,
                                 const SurvivalSpectrum& spectrum, double s_inf,
                                 std::optional<DecayFitWindow> window) {
    DecayRateReport report;
    report.spectral_rate = -2.0 * std::log(std::max(spectrum.zeta_max, 1e-300));

    const int n_total = static_cast<int>(series.S.size());
    const double start = series.S.empty() ? 0.0 : series.S[0] - s_inf;
    if (start <= 0.0 || n_total < 2) {
        report.insufficient_window = true;  // nothing decays (pure dark input)
        return report;
    }

    std::vector<double> xs, ys;
    if (window) {
        const int lo = std::max(window->n_lo, 0);
        const int hi = std::min(window->n_hi, n_total - 1);
        for (int i = lo; i <= hi; ++i) {
            const double y = series.S[i] - s_inf;
            if (y > 0.0) {
                xs.push_back(i);
                ys.push_back(std::log(y));
            }
        }
    } else {
        double tail = start;
        for (double s : series.S) tail = std::min(tail, s - s_inf);
        if (tail > start * 1e-6) {
            report.insufficient_window = true;
            return report;
        }
        for (int i = 0; i < n_total; ++i) {
            const double y = series.S[i] - s_inf;
            if (y > start * 1e-6 && y <= start * 1e-3) {
                xs.push_back(i);
                ys.push_back(std::log(y));
            }
        }
    }
    if (xs.size() < 5) {
        report.insufficient_window = true;
        return report;
    }

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report.fitted_rate = -slope;
    report.relative_gap = std::abs(report.fitted_rate - report.spectral_rate) /
                          std::max(report.spectral_rate, 1e-300);
    report.ok = !report.insufficient_window && report.relative_gap <= 0.05;
    return report;
}

}  // namespace qfd
