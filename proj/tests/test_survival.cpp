#include "qfd/detection.hpp"

#include "qfd/graphs.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qfd;

TEST_CASE("survival spectrum of the two-bright-state system") {
    const double tau = 0.9, e1 = -0.6, e2 = 1.1;
    const double wa = 0.35;  // |<beta_1|psi_d>|^2
    Mat h = Mat::Zero(2, 2);
    h.diagonal() << e1, e2;
    Vec psi_d(2);
    psi_d << std::sqrt(wa), std::sqrt(1.0 - wa);
    const Mat u = propagator(diagonalize(HermitianMatrix{h}), tau);
    const auto spectrum = survival_spectrum(survival_operator(u, psi_d));

    REQUIRE(spectrum.eigenvalues.size() == 2);
    const cxd expected = wa * std::exp(cxd(0, -tau * e2)) +
                         (1.0 - wa) * std::exp(cxd(0, -tau * e1));
    std::vector<double> mags{std::abs(spectrum.eigenvalues(0)),
                             std::abs(spectrum.eigenvalues(1))};
    std::sort(mags.begin(), mags.end());
    CHECK(mags[0] < 1e-12);
    CHECK(mags[1] == doctest::Approx(std::abs(expected)).epsilon(1e-12));
    const int big = std::abs(spectrum.eigenvalues(0)) > 0.5 ? 0 : 1;
    CHECK(std::abs(spectrum.eigenvalues(big) - expected) < 1e-12);
    CHECK(spectrum.unit_circle_ids.empty());
    CHECK(spectrum.zeta_max == doctest::Approx(std::abs(expected)).epsilon(1e-12));
}

TEST_CASE("ring survival spectrum has one unit-circle eigenvalue per dark state") {
    const auto spec = GraphSpec::ring(6);
    const auto sd = diagonalize(build_graph(spec));
    const Mat u = propagator(sd, 1.0);
    const Vec psi_d = localized_state(spec, 6);
    const auto spectrum = survival_spectrum(survival_operator(u, psi_d));
    const auto bases = bright_dark_bases(build_sectors(sd, 1.0), psi_d);
    CHECK(spectrum.unit_circle_ids.size() == bases.dark.size());
    CHECK(spectrum.unit_circle_ids.size() == 2);

    // Unit-circle eigenvalues must carry the dark sectors' phases.
    for (int id : spectrum.unit_circle_ids) {
        const cxd zeta = spectrum.eigenvalues(id);
        CHECK(std::abs(zeta) == doctest::Approx(1.0).epsilon(1e-10));
        bool matches_dark_phase = false;
        for (const auto& d : bases.dark) {
            const Vec rotated = u * d.state;
            const cxd phase = d.state.dot(rotated);
            if (std::abs(zeta - phase) < 1e-8) matches_dark_phase = true;
        }
        CHECK(matches_dark_phase);
    }
}

TEST_CASE("survival spectrum of a single site is zero") {
    Vec d = Vec::Ones(1);
    const auto spectrum = survival_spectrum(survival_operator(Mat::Identity(1, 1), d));
    REQUIRE(spectrum.eigenvalues.size() == 1);
    CHECK(std::abs(spectrum.eigenvalues(0)) < 1e-14);
    CHECK(spectrum.zeta_max == 0.0);
}

TEST_CASE("survival eigenvalues never leave the closed unit disk") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 9);
        const Mat h = testing::random_hermitian(rng, dim);
        const Mat u = propagator(diagonalize(HermitianMatrix{h}), 1.2);
        const Vec psi_d = testing::random_unit(rng, dim);
        const auto spectrum = survival_spectrum(survival_operator(u, psi_d));
        for (int i = 0; i < spectrum.eigenvalues.size(); ++i) {
            CHECK(std::abs(spectrum.eigenvalues(i)) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("pole duality between the resolvent and the determinant ratio") {
    SUBCASE("small ring, fixed sample") {
        const auto spec = GraphSpec::ring(4);
        const DetectionSetup setup(localized_state(spec, 1),
                                   localized_state(spec, 4), 1.0);
        const auto report =
            verify_pole_duality(build_graph(spec), setup, {cxd(1.5, 0.3)});
        CHECK(report.evaluated == 1);
        CHECK(report.max_residual < 1e-8);
    }

    SUBCASE("single site reduces to exact scalar algebra") {
        Mat h = Mat::Constant(1, 1, 0.8);
        Vec one = Vec::Ones(1);
        const DetectionSetup setup(one, one, 1.0);
        const auto report =
            verify_pole_duality(HermitianMatrix{h}, setup, {cxd(1.7, -0.4)});
        CHECK(report.evaluated == 1);
        CHECK(report.max_residual < 1e-14);
    }

    SUBCASE("square with center, random annulus samples") {
        std::mt19937_64 rng(67);
        std::uniform_real_distribution<double> mag(1.05, 1.95);
        std::uniform_real_distribution<double> arg(0.0, two_pi);
        std::vector<cxd> samples;
        for (int i = 0; i < 5; ++i) samples.push_back(std::polar(mag(rng), arg(rng)));
        const auto spec = GraphSpec::square_center();
        const DetectionSetup setup(localized_state(spec, 2),
                                   localized_state(spec, 1), 1.0);
        const auto report = verify_pole_duality(build_graph(spec), setup, samples);
        CHECK(report.evaluated == 5);
        CHECK(report.max_residual < 1e-8);
    }

    SUBCASE("samples on top of the spectrum are skipped with notice") {
        Mat h = Mat::Zero(2, 2);
        h.diagonal() << -1.0, 1.0;
        Vec psi_d(2);
        psi_d << std::sqrt(0.5), std::sqrt(0.5);
        const DetectionSetup setup(psi_d, psi_d, 1.0);
        const cxd on_spectrum = std::exp(cxd(0, -1.0));  // eigenvalue of U
        const auto report = verify_pole_duality(HermitianMatrix{h}, setup,
                                                {on_spectrum, cxd(1.6, 0.2)});
        CHECK(report.skipped == 1);
        CHECK(report.evaluated == 1);
        CHECK(report.max_residual < 1e-8);
    }
}

TEST_CASE("asymptotic survival decay matches the subdominant eigenvalue") {
    SUBCASE("plain ring") {
        const auto spec = GraphSpec::ring(6);
        const auto sd = diagonalize(build_graph(spec));
        const Mat u = propagator(sd, 1.0);
        const DetectionSetup setup(localized_state(spec, 1),
                                   localized_state(spec, 6), 1.0);
        const auto series = simulate_with_propagator(setup, u, 300);
        const auto spectrum = survival_spectrum(survival_operator(u, setup.psi_d));
        const auto report = decay_rate_check(series, spectrum, 0.5);
        CHECK_FALSE(report.insufficient_window);
        CHECK(report.ok);
        CHECK(report.relative_gap < 0.05);
    }

    SUBCASE("tiny flux decays at a rate proportional to alpha squared") {
        auto fitted_rate = [](double alpha, int n_max) {
            const auto spec = GraphSpec::magnetic_ring(6, alpha);
            const auto sd = diagonalize(build_graph(spec));
            const Mat u = propagator(sd, 1.0);
            const DetectionSetup setup(localized_state(spec, 1),
                                       localized_state(spec, 6), 1.0);
            const auto series = simulate_with_propagator(setup, u, n_max);
            const auto spectrum =
                survival_spectrum(survival_operator(u, setup.psi_d));
            const auto report = decay_rate_check(
                series, spectrum, 0.0, DecayFitWindow{n_max / 4, n_max});
            CHECK(report.relative_gap < 0.05);
            return report.fitted_rate;
        };
        const double slow = fitted_rate(1e-3, 20000);
        const double fast = fitted_rate(2e-3, 5000);
        CHECK(slow / fast == doctest::Approx(0.25).epsilon(0.2));
    }

    SUBCASE("a dark input has no decay window") {
        const auto spec = GraphSpec::ring(6);
        const auto sd = diagonalize(build_graph(spec));
        const Mat u = propagator(sd, 1.0);
        Vec sine(6);
        for (int r = 1; r <= 6; ++r) sine(r - 1) = std::sin(two_pi * r / 6.0);
        sine.normalize();
        const DetectionSetup setup(sine, localized_state(spec, 6), 1.0);
        const auto series = simulate_with_propagator(setup, u, 100);
        const auto spectrum = survival_spectrum(survival_operator(u, setup.psi_d));
        const auto report = decay_rate_check(series, spectrum, 1.0);
        CHECK(report.insufficient_window);
        CHECK_FALSE(report.ok);
    }
}
