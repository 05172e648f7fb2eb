#include "qfd/spectral.hpp"

#include "qfd/graphs.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qfd;

namespace {

SpectralData ring6(double gamma = 1.0) {
    return diagonalize(build_graph(GraphSpec::ring(6, gamma)));
}

// Brute-force resonance oracle: every level pair, phase gap mod 2pi.
std::vector<std::pair<int, int>> resonant_pairs_oracle(const SpectralData& spec,
                                                       double tau, double tol) {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < spec.level_count(); ++k) {
        for (int l = k + 1; l < spec.level_count(); ++l) {
            const double gap =
                std::fmod(std::abs((spec.energies[k] - spec.energies[l]) * tau),
                          two_pi);
            if (std::min(gap, two_pi - gap) <= tol) out.emplace_back(k, l);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("hermitian validation reports the max asymmetry") {
    Mat bad(2, 2);
    bad << cxd(0, 0), cxd(1, 0.5), cxd(1, 0.5), cxd(0, 0);
    CHECK_THROWS_WITH_AS(HermitianMatrix{bad},
                         doctest::Contains("max asymmetry"),
                         std::invalid_argument);
    CHECK_THROWS_AS(HermitianMatrix{Mat::Zero(2, 3)}, std::invalid_argument);
    CHECK_NOTHROW(HermitianMatrix{Mat::Identity(3, 3)});
}

TEST_CASE("diagonalize merges the ring L=6 spectrum into four levels") {
    const double gamma = 1.0;
    const auto spec = ring6(gamma);
    REQUIRE(spec.level_count() == 4);
    CHECK(spec.energies[0] == doctest::Approx(-2 * gamma).epsilon(1e-12));
    CHECK(spec.energies[1] == doctest::Approx(-gamma).epsilon(1e-12));
    CHECK(spec.energies[2] == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(spec.energies[3] == doctest::Approx(2 * gamma).epsilon(1e-12));
    CHECK(spec.multiplicities == std::vector<int>{1, 2, 2, 1});
}

TEST_CASE("diagonalize handles a 1x1 matrix") {
    const auto spec = diagonalize(HermitianMatrix{Mat::Constant(1, 1, 0.7)});
    REQUIRE(spec.level_count() == 1);
    CHECK(spec.energies[0] == doctest::Approx(0.7));
    CHECK(spec.multiplicities[0] == 1);
}

TEST_CASE("diagonalize finds the square-with-center levels") {
    const auto spec = diagonalize(build_graph(GraphSpec::square_center()));
    const double s5 = std::sqrt(5.0);
    REQUIRE(spec.level_count() == 4);
    CHECK(spec.energies[0] == doctest::Approx(-(1 + s5)).epsilon(1e-12));
    CHECK(spec.energies[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spec.energies[2] == doctest::Approx(s5 - 1).epsilon(1e-12));
    CHECK(spec.energies[3] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(spec.multiplicities == std::vector<int>{1, 2, 1, 1});
}

TEST_CASE("random hermitian matrices: reconstruction and orthonormality") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + static_cast<int>(rng() % 12);
        const Mat h = testing::random_hermitian(rng, dim);
        const auto spec = diagonalize(HermitianMatrix{h});

        const Mat gram =
            spec.eigenvectors.adjoint() * spec.eigenvectors - Mat::Identity(dim, dim);
        CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);

        Mat rebuilt = Mat::Zero(dim, dim);
        for (int l = 0; l < spec.level_count(); ++l) {
            rebuilt += spec.energies[l] * spec.projector(l);
        }
        const double scale = std::max(h.operatorNorm(), 1.0);
        CHECK((rebuilt - h).operatorNorm() / scale < 1e-9);

        int states = 0;
        for (int g : spec.multiplicities) states += g;
        CHECK(states == dim);
    }
}

TEST_CASE("build_sectors on the ring: non-resonant and resonant tau") {
    const auto spec = ring6();

    SUBCASE("tau = 1 gives four sectors") {
        const auto sectors = build_sectors(spec, 1.0);
        CHECK(sectors.sector_count() == 4);
        CHECK_FALSE(sectors.resonant);
        CHECK(resonant_pairs_oracle(spec, 1.0, tol::phase).empty());
    }

    SUBCASE("tau = pi merges into two sectors") {
        const double tau = std::numbers::pi;
        const auto sectors = build_sectors(spec, tau);
        REQUIRE(sectors.sector_count() == 2);
        CHECK(sectors.resonant);
        CHECK(sectors.sectors[0].phase == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(sectors.sectors[0].multiplicity == 2);  // energies -2, +2
        CHECK(sectors.sectors[1].phase ==
              doctest::Approx(std::numbers::pi).epsilon(1e-9));
        CHECK(sectors.sectors[1].multiplicity == 4);  // energies -1, +1
        CHECK(resonant_pairs_oracle(spec, tau, tol::phase).size() == 2);
    }

    SUBCASE("sector multiplicities always sum to dim") {
        for (double tau : {0.3, 1.0, 2.0, std::numbers::pi}) {
            CHECK(build_sectors(spec, tau).dim() == 6);
        }
    }
}

TEST_CASE("build_sectors content is stable under level reordering") {
    const auto spec = ring6();
    SpectralData scrambled = spec;
    // Swap two levels wholesale (energies, multiplicities, column blocks).
    std::swap(scrambled.energies[1], scrambled.energies[2]);
    std::swap(scrambled.multiplicities[1], scrambled.multiplicities[2]);
    scrambled.eigenvectors.block(0, 1, 6, 2) = spec.eigenvectors.block(0, 3, 6, 2);
    scrambled.eigenvectors.block(0, 3, 6, 2) = spec.eigenvectors.block(0, 1, 6, 2);

    const auto a = build_sectors(spec, 1.3);
    const auto b = build_sectors(scrambled, 1.3);
    REQUIRE(a.sector_count() == b.sector_count());
    for (int s = 0; s < a.sector_count(); ++s) {
        CHECK(a.sectors[s].phase == doctest::Approx(b.sectors[s].phase).epsilon(1e-12));
        CHECK(a.sectors[s].multiplicity == b.sectors[s].multiplicity);
        CHECK((a.sectors[s].projector() - b.sectors[s].projector())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("detect_resonances matches the pairwise oracle") {
    const auto spec = ring6();

    SUBCASE("tau = pi pairs (-2,2) and (-1,1)") {
        const auto pairs = detect_resonances(spec, std::numbers::pi);
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0] == std::pair<int, int>{0, 3});
        CHECK(pairs[1] == std::pair<int, int>{1, 2});
    }

    SUBCASE("tau = 1 is clean") {
        CHECK(detect_resonances(spec, 1.0).empty());
    }

    SUBCASE("single level never resonates") {
        const auto one = diagonalize(HermitianMatrix{Mat::Constant(1, 1, 2.0)});
        CHECK(detect_resonances(one, 17.0).empty());
    }

    SUBCASE("nonempty exactly when build_sectors flags resonance") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> tau_draw(0.1, 6.0);
        for (int trial = 0; trial < 25; ++trial) {
            const double tau = tau_draw(rng);
            const bool flagged = build_sectors(spec, tau).resonant;
            CHECK(flagged == !detect_resonances(spec, tau).empty());
        }
        CHECK(build_sectors(spec, std::numbers::pi).resonant);
    }
}

TEST_CASE("propagator basics") {
    SUBCASE("tau = 0 gives the identity") {
        const auto spec = ring6();
        CHECK((propagator(spec, 0.0) - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <
              1e-12);
    }

    SUBCASE("scalar case") {
        const auto spec = diagonalize(HermitianMatrix{Mat::Constant(1, 1, 0.9)});
        const Mat u = propagator(spec, 2.0);
        CHECK(std::abs(u(0, 0) - std::exp(cxd(0, -1.8))) < 1e-14);
    }

    SUBCASE("matches the scaling-and-squaring oracle on the ring") {
        const Mat h = build_graph(GraphSpec::ring(6)).matrix();
        const Mat u = propagator(ring6(), 1.0);
        CHECK((u - testing::unitary_oracle(h, 1.0)).cwiseAbs().maxCoeff() < 1e-10);

        Mat power = Mat::Identity(6, 6);
        for (int k = 0; k < 6; ++k) power = (u * power).eval();
        Vec r = Vec::Zero(6);
        r(2) = 1.0;
        CHECK(std::abs((power * r).norm() - 1.0) < 1e-10);
    }

    SUBCASE("unitarity and eigen-action on random matrices") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const int dim = 2 + static_cast<int>(rng() % 8);
            const auto spec =
                diagonalize(HermitianMatrix{testing::random_hermitian(rng, dim)});
            const Mat u = propagator(spec, 0.8);
            CHECK((u * u.adjoint() - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() <
                  1e-10);
            for (int l = 0; l < spec.level_count(); ++l) {
                const Vec v = spec.eigenvectors.col(spec.offsets[l]);
                const cxd phase = std::exp(cxd(0.0, -0.8 * spec.energies[l]));
                CHECK((u * v - phase * v).norm() < 1e-10);
            }
        }
    }
}
