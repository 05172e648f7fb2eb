#include "qfd/experiments.hpp"

#include "qfd/graphs.hpp"
#include "qfd/ring_walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace qfd {

int sweep_thread_count() {
    if (const char* env = std::getenv("QFD_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double one_cell(const SweepGrid& grid, double alpha, double tau) {
    const auto spec = GraphSpec::magnetic_ring(grid.L, alpha, grid.gamma);
    const DetectionSetup setup(localized_state(spec, grid.r_in),
                               localized_state(spec, grid.r_d), tau);
    const auto series = simulate(setup, build_graph(spec), grid.n_measurements);
    return 1.0 - series.S.back();
}

}  // namespace

SweepResult sweep_tau_alpha(const SweepGrid& grid) {
    if (grid.alphas.empty() || grid.taus.empty()) {
        throw std::invalid_argument("sweep_tau_alpha: empty grid");
    }
    if (grid.n_measurements < 1) {
        throw std::invalid_argument("sweep_tau_alpha: n_measurements must be >= 1");
    }
    SweepResult out;
    out.alphas = grid.alphas;
    out.taus = grid.taus;
    out.one_minus_sn.assign(grid.alphas.size(),
                            std::vector<double>(grid.taus.size(), 0.0));

    const size_t cells = grid.alphas.size() * grid.taus.size();
    const int workers =
        static_cast<int>(std::min<size_t>(sweep_thread_count(), cells));
    std::atomic<size_t> next{0};
    auto run = [&]() {
        for (size_t cell = next.fetch_add(1); cell < cells;
             cell = next.fetch_add(1)) {
            const size_t ia = cell / grid.taus.size();
            const size_t it = cell % grid.taus.size();
            out.one_minus_sn[ia][it] =
                one_cell(grid, grid.alphas[ia], grid.taus[it]);
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::optional<int> n_half(int L, double alpha, double tau, long r_in, long r_d,
                          int n_cap, double gamma) {
    if (alpha < 0.0) throw std::invalid_argument("n_half: alpha must be >= 0");
    if (n_cap < 1) throw std::invalid_argument("n_half: n_cap must be >= 1");
    const auto spec = GraphSpec::magnetic_ring(L, alpha, gamma);
    const DetectionSetup setup(localized_state(spec, r_in),
                               localized_state(spec, r_d), tau);
    const Mat U = propagator(diagonalize(build_graph(spec)), tau);

    Vec psi = setup.psi_in;
    // Guard band below 1/2: at alpha = 0 the survival converges to exactly
    // 1/2 from above and accumulated rounding (~1e-14) must not register as
    // a crossing.
    const double threshold = 0.5 - 1e-12;
    for (int n = 1; n <= n_cap; ++n) {
        Vec evolved = U * psi;
        psi = evolved - setup.psi_d.dot(evolved) * setup.psi_d;
        if (psi.squaredNorm() < threshold) return n;
    }
    return std::nullopt;
}

std::vector<DetectionSeries> fn_crossover(int L, const std::vector<double>& alphas,
                                          double tau, int n_max, double gamma) {
    std::vector<DetectionSeries> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        const auto spec = GraphSpec::magnetic_ring(L, alpha, gamma);
        const DetectionSetup setup(localized_state(spec, 1),
                                   localized_state(spec, 0L), tau);
        out.push_back(simulate(setup, build_graph(spec), n_max));
    }
    return out;
}

std::optional<int> crossover_index(const DetectionSeries& series,
                                   const DetectionSeries& baseline,
                                   double factor) {
    const int n = std::min(series.steps(), baseline.steps());
    for (int i = 0; i < n; ++i) {
        if (series.F[i] > factor * baseline.F[i]) return i + 1;
    }
    return std::nullopt;
}

double crossover_level(const DetectionSeries& series,
                       const DetectionSeries& baseline, int n_c, int window) {
    const int lo = std::max(n_c, 1);
    const int hi = std::min({lo + window, series.steps() + 1, baseline.steps() + 1});
    if (hi <= lo) {
        throw std::invalid_argument("crossover_level: window outside the series");
    }
    double sum = 0.0;
    for (int n = lo; n < hi; ++n) {
        sum += std::max(series.F[n - 1] - baseline.F[n - 1], 0.0);
    }
    return sum / (hi - lo);
}

std::vector<DensitySnapshot> spread_density(int L, double tau,
                                            const std::vector<int>& snapshot_ns,
                                            int start_site, int detect_site,
                                            double gamma, int max_sites) {
    if (L > max_sites) {
        throw std::length_error("spread_density: ring exceeds the memory guard");
    }
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("spread_density: L must be even and >= 2");
    }
    for (size_t i = 1; i < snapshot_ns.size(); ++i) {
        if (snapshot_ns[i] <= snapshot_ns[i - 1]) {
            throw std::invalid_argument("spread_density: snapshot list must ascend");
        }
    }
    if (!snapshot_ns.empty() && snapshot_ns.front() < 0) {
        throw std::invalid_argument("spread_density: negative measurement index");
    }

    RingWalker walker(L, tau, detect_site, gamma);
    Vec psi = Vec::Zero(L);
    psi(start_site) = 1.0;
    walker.set_state(std::move(psi));

    auto snapshot = [&](int n) {
        DensitySnapshot snap;
        snap.n = n;
        snap.density = walker.density();
        snap.survival = walker.survival();
        double mean = 0.0;
        for (int r = 0; r < L; ++r) {
            const int d = std::abs(r - start_site);
            mean += snap.density[r] * std::min(d, L - d);
        }
        snap.mean_distance = snap.survival > 0.0 ? mean / snap.survival : 0.0;
        return snap;
    };

    std::vector<DensitySnapshot> out;
    out.reserve(snapshot_ns.size());
    int n = 0;
    for (int target : snapshot_ns) {
        while (n < target) {
            walker.step();
            ++n;
        }
        out.push_back(snapshot(n));
    }
    return out;
}

CensusResult fast_eigenvalue_census(int L, double tau, double threshold,
                                    CensusMode mode, double gamma) {
    Mat survival;
    if (mode.kind == CensusMode::symmetric_subspace) {
        survival = symmetric_survival_matrix(L, tau, gamma);
    } else {
        const auto spec = GraphSpec::ring(L, gamma);
        const Mat U = propagator(diagonalize(build_graph(spec)), tau);
        survival = survival_operator(U, localized_state(spec, (long)L));
    }
    const auto spectrum = survival_spectrum(survival);

    CensusResult out;
    out.total_count = static_cast<int>(spectrum.eigenvalues.size());
    for (int i = 0; i < spectrum.eigenvalues.size(); ++i) {
        if (1.0 - std::abs(spectrum.eigenvalues(i)) > threshold) ++out.fast_count;
    }
    return out;
}

}  // namespace qfd
