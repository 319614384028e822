#include <doctest.h>

#include <numbers>

#include "qpol/polarization.hpp"
#include "qpol/su2.hpp"
#include "test_helpers.hpp"

using namespace qpol;
using qpol::testing::phase_insensitive_distance;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Rotation carries a special-unitary mode matrix") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Rotation rot(testing::random_theta(rng), testing::random_phi(rng),
                           trial % 3 == 0 ? testing::random_phi(rng) : 0.0);
        const Eigen::Matrix2cd u = rot.mode_matrix();
        CHECK((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(u.determinant() - 1.0) < 1e-12);

        const Eigen::Matrix2cd inv = rot.inverse().mode_matrix();
        CHECK((u * inv - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);

        const Eigen::Matrix3d m = rot.so3();
        CHECK((m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(m.determinant() == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(Rotation(-0.5, 0.0), ValidationError);
    CHECK_THROWS_AS(Rotation(3.5, 0.0), ValidationError);
}

TEST_CASE("the SO(3) image takes the pole to n(theta,phi)") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = testing::random_theta(rng);
        const double phi = testing::random_phi(rng);
        const Eigen::Vector3d mapped = Rotation(theta, phi).so3() * Eigen::Vector3d{1, 0, 0};
        const Eigen::Vector3d expected{std::cos(theta), std::sin(theta) * std::cos(phi),
                                       std::sin(theta) * std::sin(phi)};
        CHECK((mapped - expected).norm() < 1e-12);
    }
}

TEST_CASE("SU(2) coherent states") {
    const TwoModeBasis basis(4);

    SUBCASE("N=1 closed form") {
        const double theta = 0.9, phi = 2.2;
        const PureState psi = su2_coherent(1, theta, phi, basis);
        CHECK(std::abs(psi.amplitude(1, 0) - std::cos(theta / 2)) < 1e-14);
        CHECK(std::abs(psi.amplitude(0, 1) -
                       std::sin(theta / 2) * Complex(std::cos(phi), std::sin(phi))) < 1e-14);
    }

    SUBCASE("theta=0 puts every photon in mode a") {
        const PureState psi = su2_coherent(3, 0.0, 1.234, basis);
        CHECK(std::abs(psi.amplitude(3, 0) - 1.0) < 1e-14);
    }

    SUBCASE("N=2 equator") {
        const PureState psi = su2_coherent(2, kPi / 2, 0.0, basis);
        CHECK(std::abs(psi.amplitude(2, 0) - 0.5) < 1e-14);
        CHECK(std::abs(psi.amplitude(1, 1) - std::sqrt(2.0) / 2) < 1e-14);
        CHECK(std::abs(psi.amplitude(0, 2) - 0.5) < 1e-14);
    }

    SUBCASE("Stokes vector is S0 times the unit direction") {
        std::mt19937 rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const double theta = testing::random_theta(rng);
            const double phi = testing::random_phi(rng);
            const StokesVector s = stokes_vector(su2_coherent(3, theta, phi, basis));
            const Eigen::Vector3d n{std::cos(theta), std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi)};
            CHECK((s.vector / s.s0 - n).norm() < 1e-12);
        }
    }

    CHECK_THROWS_AS(su2_coherent(5, 0.1, 0.2, basis), CutoffError);
}

TEST_CASE("Fock-state polarization law") {
    const TwoModeBasis basis(8);
    for (int n = 1; n <= 8; ++n) {
        for (int k = 0; k <= n; ++k) {
            const auto p = degree_of_polarization(PureState::fock(basis, k, n - k));
            REQUIRE(p.has_value());
            CHECK(*p == doctest::Approx(std::abs(2.0 * k - n) / n).epsilon(1e-12));
            CHECK((std::abs(*p - 1.0) < 1e-12) == (k == 0 || k == n));
        }
    }
}

TEST_CASE("exponential rotation operator") {
    const TwoModeBasis basis(5);

    SUBCASE("theta=0 is the identity") {
        const OperatorMatrix r = rotation_fock_exp(Rotation(0.0, 1.0), basis);
        CHECK((r.matrix - Matrix::Identity(basis.dimension(), basis.dimension()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }

    SUBCASE("unitarity") {
        std::mt19937 rng(19);
        const OperatorMatrix r =
            rotation_fock_exp(Rotation(testing::random_theta(rng), testing::random_phi(rng)), basis);
        CHECK((r.matrix * r.matrix.adjoint() -
               Matrix::Identity(basis.dimension(), basis.dimension()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }

    SUBCASE("rotating |N,0> lands on the coherent state, including phase") {
        std::mt19937 rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            const double theta = testing::random_theta(rng);
            const double phi = testing::random_phi(rng);
            const int n = 1 + int(rng() % 5);
            const Vector rotated = rotation_fock_exp(Rotation(theta, phi), basis).matrix *
                                   PureState::fock(basis, n, 0).amplitudes();
            const Vector expected = su2_coherent(n, theta, phi, basis).amplitudes();
            CHECK((rotated - expected).norm() < 1e-10);
        }
    }
}

TEST_CASE("Gauss factorization matches the exponential construction") {
    const TwoModeBasis basis(6);

    SUBCASE("theta=0 is the identity") {
        const OperatorMatrix r = rotation_fock_gauss(Rotation(0.0, 0.3), basis);
        CHECK((r.matrix - Matrix::Identity(basis.dimension(), basis.dimension()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }

    SUBCASE("N=1 block at theta=pi/2") {
        const OperatorMatrix r = rotation_fock_gauss(Rotation(kPi / 2, 0.0), basis);
        const int h = basis.index(1, 0);
        const int v = basis.index(0, 1);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(r.matrix(h, h) - inv_sqrt2) < 1e-14);
        CHECK(std::abs(r.matrix(v, h) - inv_sqrt2) < 1e-14);
        CHECK(std::abs(r.matrix(h, v) + inv_sqrt2) < 1e-14);
        CHECK(std::abs(r.matrix(v, v) - inv_sqrt2) < 1e-14);
    }

    SUBCASE("elementwise agreement away from the antipode") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> theta_dist(0.0, kPi - 0.01);
        for (int trial = 0; trial < 20; ++trial) {
            const Rotation rot(theta_dist(rng), testing::random_phi(rng));
            const Matrix gauss = rotation_fock_gauss(rot, basis).matrix;
            const Matrix exp = rotation_fock_exp(rot, basis).matrix;
            CHECK((gauss - exp).cwiseAbs().maxCoeff() < 1e-9);
        }
    }

    SUBCASE("singular near the antipode") {
        CHECK_THROWS_AS(rotation_fock_gauss(Rotation(kPi - 0.005, 0.0), basis), NumericalError);
        CHECK_THROWS_AS(rotation_fock_gauss(Rotation(kPi, 0.0), basis), NumericalError);
    }
}

TEST_CASE("apply_rotation") {
    const TwoModeBasis basis(5);
    std::mt19937 rng(31);

    SUBCASE("identity rotation leaves states alone") {
        const PureState psi = testing::random_pure(basis, rng);
        CHECK(phase_insensitive_distance(apply_rotation(Rotation(0, 0), psi).amplitudes(),
                                         psi.amplitudes()) < 1e-13);
    }

    SUBCASE("|N,0> maps to the coherent state") {
        const double theta = 1.1, phi = 4.0;
        const PureState rotated = apply_rotation(Rotation(theta, phi), PureState::fock(basis, 4, 0));
        CHECK(phase_insensitive_distance(rotated.amplitudes(),
                                         su2_coherent(4, theta, phi, basis).amplitudes()) < 1e-11);
    }

    SUBCASE("Stokes vectors transform by the SO(3) image; p and S0 invariant") {
        for (int trial = 0; trial < 15; ++trial) {
            const Rotation rot(testing::random_theta(rng), testing::random_phi(rng));
            const PureState psi = testing::random_pure(basis, rng);
            const StokesVector before = stokes_vector(psi);
            const StokesVector after = stokes_vector(apply_rotation(rot, psi));
            CHECK((after.vector - rot.so3() * before.vector).norm() < 1e-10);
            CHECK(after.s0 == doctest::Approx(before.s0).epsilon(1e-12));
            CHECK(*after.degree() == doctest::Approx(*before.degree()).epsilon(1e-10));

            const DensityMatrix rho = testing::random_density(basis, rng, 3);
            const StokesVector rb = stokes_vector(rho);
            const StokesVector ra = stokes_vector(apply_rotation(rot, rho));
            CHECK((ra.vector - rot.so3() * rb.vector).norm() < 1e-10);
            CHECK(ra.s0 == doctest::Approx(rb.s0).epsilon(1e-12));
        }
    }

    SUBCASE("rotation after inverse rotation is a no-op") {
        const Rotation rot(2.1, 5.0, 0.7);
        const PureState psi = testing::random_pure(basis, rng);
        const PureState back = apply_rotation(rot.inverse(), apply_rotation(rot, psi));
        CHECK(phase_insensitive_distance(back.amplitudes(), psi.amplitudes()) < 1e-12);
    }

    SUBCASE("basis mismatch is rejected") {
        const TwoModeBasis other(3);
        const OperatorMatrix r = rotation_fock_exp(Rotation(1.0, 1.0), basis);
        CHECK_THROWS_AS(expectation(r, PureState::fock(other, 0, 0)), BasisMismatchError);
    }
}

TEST_CASE("the third angle only dials block phases") {
    const TwoModeBasis basis(4);
    const double theta = 0.8, phi = 1.9, chi = 2.5;
    const PureState plain = apply_rotation(Rotation(theta, phi), PureState::fock(basis, 3, 0));
    const PureState dialed = apply_rotation(Rotation(theta, phi, chi), PureState::fock(basis, 3, 0));
    CHECK(phase_insensitive_distance(plain.amplitudes(), dialed.amplitudes()) < 1e-12);

    std::mt19937 rng(37);
    const PureState psi = testing::random_pure(basis, rng);
    const auto p0 = degree_of_polarization(psi);
    const auto p1 = degree_of_polarization(apply_rotation(Rotation(theta, phi, chi), psi));
    CHECK(*p0 == doctest::Approx(*p1).epsilon(1e-10));
}

TEST_CASE("polarized pure states") {
    const TwoModeBasis basis(8);

    SUBCASE("a single weight reduces to the coherent state") {
        PolarizedPureSpec spec{1.2, 0.4, {{3, 1.0, 0.0}}};
        CHECK(phase_insensitive_distance(polarized_pure_state(spec, basis).amplitudes(),
                                         su2_coherent(3, 1.2, 0.4, basis).amplitudes()) < 1e-13);
    }

    SUBCASE("equal weights along the pole") {
        PolarizedPureSpec spec{0.0, 0.0, {{1, 0.5, 0.0}, {2, 0.5, 0.0}}};
        const PureState psi = polarized_pure_state(spec, basis);
        CHECK(std::abs(psi.amplitude(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-13);
        CHECK(std::abs(psi.amplitude(2, 0) - 1.0 / std::sqrt(2.0)) < 1e-13);
        CHECK(*degree_of_polarization(psi) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("any weight profile is perfectly polarized") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            PolarizedPureSpec spec;
            spec.theta = testing::random_theta(rng);
            spec.phi = testing::random_phi(rng);
            double total = 0.0;
            for (int n = 1; n <= 6; ++n) {
                const double q = u(rng);
                spec.weights.push_back({n, q, u(rng)});
                total += q;
            }
            for (auto& w : spec.weights) w.q /= total;
            // Renormalize exactly; the constructor checks to 1e-12.
            double sum = 0.0;
            for (auto& w : spec.weights) sum += w.q;
            spec.weights.back().q += 1.0 - sum;
            const auto p = degree_of_polarization(polarized_pure_state(spec, basis));
            CHECK(std::abs(*p - 1.0) < 1e-10);
        }
    }

    SUBCASE("Glauber weights give the truncated coherent state") {
        const auto weights = glauber_weights(1.0, 0.3, basis.nmax());
        double sum = 0.0;
        for (const auto& w : weights) sum += w.q;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        PolarizedPureSpec spec{0.7, 1.1, weights};
        const auto p = degree_of_polarization(polarized_pure_state(spec, basis));
        CHECK(std::abs(*p - 1.0) < 1e-10);
    }

    SUBCASE("weights must be normalized and inside the cutoff") {
        CHECK_THROWS_AS(polarized_pure_state({0, 0, {{1, 0.7, 0}}}, basis), ValidationError);
        CHECK_THROWS_AS(polarized_pure_state({0, 0, {{9, 1.0, 0}}}, basis), CutoffError);
        CHECK_THROWS_AS(polarized_pure_state({0, 0, {{1, -0.2, 0}, {2, 1.2, 0}}}, basis),
                        ValidationError);
    }
}
