#ifndef QPOL_TEST_HELPERS_HPP
#define QPOL_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qpol/fock.hpp"
#include "qpol/majorana.hpp"

namespace qpol::testing {

inline Vector random_complex_vector(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    return v;
}

inline PureState random_pure(const TwoModeBasis& basis, std::mt19937& rng) {
    return PureState(basis, random_complex_vector(basis.dimension(), rng));
}

/// Random pure state supported on one photon-number block.
inline PureState random_block_state(const TwoModeBasis& basis, int n, std::mt19937& rng) {
    Vector v = Vector::Zero(basis.dimension());
    v.segment(basis.block_offset(n), basis.block_size(n)) =
        random_complex_vector(basis.block_size(n), rng);
    return PureState(basis, std::move(v));
}

inline DensityMatrix random_density(const TwoModeBasis& basis, std::mt19937& rng, int rank = 0) {
    const int dim = basis.dimension();
    if (rank <= 0) rank = dim;
    Matrix g(dim, rank);
    for (int c = 0; c < rank; ++c) g.col(c) = random_complex_vector(dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(basis, std::move(rho));
}

inline Eigen::MatrixXcd random_psd_unit_trace(int dim, std::mt19937& rng) {
    Matrix g(dim, dim);
    for (int c = 0; c < dim; ++c) g.col(c) = random_complex_vector(dim, rng);
    Matrix sigma = g * g.adjoint();
    sigma /= sigma.trace().real();
    return sigma;
}

inline double random_theta(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    return u(rng);
}

inline double random_phi(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    return u(rng);
}

/// min over a global phase of || e^{i gamma} u - v ||.
inline double phase_insensitive_distance(const Vector& u, const Vector& v) {
    const double overlap = std::abs(u.dot(v));
    return std::sqrt(std::max(0.0, u.squaredNorm() + v.squaredNorm() - 2.0 * overlap));
}

inline double fidelity(const PureState& a, const PureState& b) {
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

/// Greedy pairing of two star multisets; returns the largest matched angle.
inline double max_matched_star_angle(std::vector<Star> a, std::vector<Star> b) {
    double worst = 0.0;
    while (!a.empty()) {
        double best = std::numeric_limits<double>::infinity();
        size_t bi = 0, bj = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            for (size_t j = 0; j < b.size(); ++j) {
                const double d = a[i].angle_to(b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        worst = std::max(worst, best);
        a.erase(a.begin() + bi);
        b.erase(b.begin() + bj);
    }
    return worst;
}

inline double min_pairwise_star_angle(const std::vector<Star>& stars) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < stars.size(); ++i) {
        for (size_t j = i + 1; j < stars.size(); ++j) {
            best = std::min(best, stars[i].angle_to(stars[j]));
        }
    }
    return best;
}

/// Random constellation whose stars keep a minimum pairwise separation.
inline Constellation random_separated_constellation(int n, double min_angle, std::mt19937& rng) {
    Constellation c;
    c.n_photons = n;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    while (int(c.points.size()) < n) {
        // Uniform on the sphere via cos(theta).
        const double theta = std::acos(1.0 - 2.0 * u01(rng));
        const Star candidate{theta, random_phi(rng)};
        bool ok = true;
        for (const Star& s : c.points) {
            if (candidate.angle_to(s) < min_angle) {
                ok = false;
                break;
            }
        }
        if (ok) c.points.push_back(candidate);
    }
    return c;
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qpol::testing

#endif
