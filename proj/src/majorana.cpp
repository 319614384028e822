#include "qpol/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qpol {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double phi) {
    const double two_pi = 2.0 * kPi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

// Greedy row/column scaling by powers of two, after Parlett and Reinsch.
void balance_companion(Matrix& c) {
    const int n = int(c.rows());
    const double gamma = 0.9;
    bool changed;
    do {
        changed = false;
        for (int i = 0; i < n; ++i) {
            const double row_norm = c.row(i).cwiseAbs().sum();
            const double col_norm = c.col(i).cwiseAbs().sum();
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double scaled_col = std::ldexp(col_norm, exponent);
                const double scaled_row = std::ldexp(row_norm, -exponent);
                if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
                    changed = true;
                    c.row(i) *= std::ldexp(1.0, -exponent);
                    c.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
    } while (changed);
}

// Roots of sum_k coeffs[k] t^k with coeffs.back() != 0.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    const int degree = int(coeffs.size()) - 1;
    if (degree < 1) return {};
    Matrix companion = Matrix::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
    balance_companion(companion);
    Eigen::ComplexEigenSolver<Matrix> es(companion, false);
    std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + degree);
    return roots;
}

Complex horner(const std::vector<Complex>& coeffs, Complex t) {
    Complex acc = 0.0;
    for (int k = int(coeffs.size()) - 1; k >= 0; --k) acc = acc * t + coeffs[k];
    return acc;
}

Complex horner_derivative(const std::vector<Complex>& coeffs, Complex t) {
    Complex acc = 0.0;
    for (int k = int(coeffs.size()) - 1; k >= 1; --k) acc = acc * t + double(k) * coeffs[k];
    return acc;
}

double sqrt_factorial_pair(int m, int n) {
    return std::exp(0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)));
}

}  // namespace

Eigen::Vector3d Star::unit_vector() const {
    return {std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)};
}

double Star::angle_to(const Star& other) const {
    const double d = std::clamp(unit_vector().dot(other.unit_vector()), -1.0, 1.0);
    return std::acos(d);
}

int single_block_photon_number(const PureState& state, double tol) {
    int best = 0;
    double best_pop = -1.0;
    for (int n = 0; n <= state.basis().nmax(); ++n) {
        const double pop = state.block_population(n);
        if (pop > best_pop) {
            best_pop = pop;
            best = n;
        }
    }
    if (1.0 - best_pop > tol) {
        throw ValidationError("state is not supported on a single photon-number block (" +
                              std::to_string(1.0 - best_pop) + " outside block N=" +
                              std::to_string(best) + ")");
    }
    return best;
}

PureState constellation_to_state(const Constellation& c, const TwoModeBasis& basis) {
    if (int(c.points.size()) != c.n_photons) {
        throw ValidationError("constellation must carry exactly N stars");
    }
    if (c.n_photons > basis.nmax()) {
        throw CutoffError("constellation photon number exceeds cutoff");
    }
    const int n = c.n_photons;
    // Coefficients of the creation-operator product, indexed by photons in
    // mode b; multiplying one linear factor per star keeps theta = pi exact.
    std::vector<Complex> poly(n + 1, 0.0);
    poly[0] = 1.0;
    int used = 0;
    for (const Star& star : c.points) {
        const double alpha = std::cos(star.theta / 2.0);
        const Complex beta =
            std::sin(star.theta / 2.0) * Complex(std::cos(star.phi), std::sin(star.phi));
        for (int j = ++used; j >= 1; --j) poly[j] = alpha * poly[j] + beta * poly[j - 1];
        poly[0] *= alpha;
    }
    Vector v = Vector::Zero(basis.dimension());
    for (int j = 0; j <= n; ++j) {
        v[basis.index(n - j, j)] = sqrt_factorial_pair(n - j, j) * poly[j];
    }
    return PureState(basis, std::move(v));
}

Constellation state_to_constellation(const PureState& state, std::vector<double>* polish_residuals) {
    const int n = single_block_photon_number(state);
    if (n < 1) {
        throw ValidationError("the vacuum block has no stellar representation");
    }
    // Majorana polynomial coefficients: coeff of t^m is c_m / sqrt(m!(N-m)!).
    std::vector<Complex> coeffs(n + 1);
    double scale = 0.0;
    for (int m = 0; m <= n; ++m) {
        coeffs[m] = state.amplitude(m, n - m) / sqrt_factorial_pair(m, n - m);
        scale = std::max(scale, std::abs(coeffs[m]));
    }

    Constellation result;
    result.n_photons = n;
    if (polish_residuals) polish_residuals->clear();

    // Degree deficit: each missing leading power is a root at infinity,
    // i.e. a star at the theta = pi antipode.
    int degree = n;
    while (degree > 0 && std::abs(coeffs[degree]) <= 1e-13 * scale) {
        result.points.push_back({kPi, 0.0});
        if (polish_residuals) polish_residuals->push_back(0.0);
        --degree;
    }
    coeffs.resize(degree + 1);

    // Exact trailing zeros are roots at t = 0 (stars at the theta = 0 pole).
    int low = 0;
    while (low < degree && std::abs(coeffs[low]) == 0.0) {
        result.points.push_back({0.0, 0.0});
        if (polish_residuals) polish_residuals->push_back(0.0);
        ++low;
    }
    if (low > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + low);

    for (Complex root : polynomial_roots(coeffs)) {
        const Complex dq = horner_derivative(coeffs, root);
        if (std::abs(dq) > 0.0) {
            root -= horner(coeffs, root) / dq;
        }
        if (polish_residuals) polish_residuals->push_back(std::abs(horner(coeffs, root)) / scale);
        const Complex zeta = -root;
        result.points.push_back({2.0 * std::atan(std::abs(zeta)),
                                 std::abs(zeta) > 0.0 ? wrap_angle(std::arg(zeta)) : 0.0});
    }

    std::sort(result.points.begin(), result.points.end(), [](const Star& a, const Star& b) {
        return a.theta != b.theta ? a.theta < b.theta : a.phi < b.phi;
    });
    return result;
}

namespace {

// Overlap with the coherent family and its first and second derivatives,
// for one block with scaled amplitudes a_m = sqrt(binom(N,m)) c_m.
struct OverlapDerivatives {
    Complex f, f_t, f_p, f_tt, f_tp, f_pp;
};

OverlapDerivatives coherent_overlap(const std::vector<Complex>& a, double theta, double phi) {
    const int n = int(a.size()) - 1;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    auto cpow = [&](int k) { return k >= 0 ? std::pow(c, k) : 0.0; };
    auto spow = [&](int k) { return k >= 0 ? std::pow(s, k) : 0.0; };
    OverlapDerivatives d{};
    for (int m = 0; m <= n; ++m) {
        const int q = n - m;
        const double t0 = cpow(m) * spow(q);
        double t1 = 0.0;
        if (q > 0) t1 += 0.5 * q * cpow(m + 1) * spow(q - 1);
        if (m > 0) t1 -= 0.5 * m * cpow(m - 1) * spow(q + 1);
        double t2 = -0.25 * (q * (m + 1) + m * (q + 1)) * t0;
        if (q > 1) t2 += 0.25 * q * (q - 1) * cpow(m + 2) * spow(q - 2);
        if (m > 1) t2 += 0.25 * m * (m - 1) * cpow(m - 2) * spow(q + 2);
        const Complex phase(std::cos(q * phi), -std::sin(q * phi));
        const Complex am_phase = a[m] * phase;
        const Complex ip(0.0, -double(q));
        d.f += am_phase * t0;
        d.f_t += am_phase * t1;
        d.f_p += am_phase * t0 * ip;
        d.f_tt += am_phase * t2;
        d.f_tp += am_phase * t1 * ip;
        d.f_pp += am_phase * t0 * ip * ip;
    }
    return d;
}

double overlap_sq(const std::vector<Complex>& a, double theta, double phi) {
    const int n = int(a.size()) - 1;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Complex f = 0.0;
    for (int m = 0; m <= n; ++m) {
        const int q = n - m;
        f += a[m] * std::pow(c, m) * std::pow(s, q) * Complex(std::cos(q * phi), -std::sin(q * phi));
    }
    return std::norm(f);
}

}  // namespace

FidelityResult max_fidelity_su2(const PureState& state, int grid_theta, int grid_phi) {
    const int n = single_block_photon_number(state);
    if (n < 1) {
        throw ValidationError("fidelity maximization needs at least one photon");
    }
    const PureState block = state.block_state(n);
    std::vector<Complex> a(n + 1);
    for (int m = 0; m <= n; ++m) {
        a[m] = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0))) *
               block.amplitude(m, n - m);
    }

    // Coarse scan; fixed iteration order realizes the smallest-theta,
    // smallest-phi tie break.
    double best_g = -1.0, best_theta = 0.0, best_phi = 0.0;
    for (int i = 0; i < grid_theta; ++i) {
        const double theta = kPi * (i + 0.5) / grid_theta;
        for (int j = 0; j < grid_phi; ++j) {
            const double phi = 2.0 * kPi * j / grid_phi;
            const double g = overlap_sq(a, theta, phi);
            if (g > best_g) {
                best_g = g;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    // Re-frame so the seed sits on the equator, away from chart poles.
    const TwoModeBasis small_basis(n);
    Vector embedded = Vector::Zero(small_basis.dimension());
    for (int m = 0; m <= n; ++m) embedded[small_basis.index(m, n - m)] = block.amplitude(m, n - m);
    const Rotation seed(best_theta, best_phi);
    const Rotation equator(kPi / 2.0, 0.0);
    const Matrix frame = rotation_fock_exp(equator, small_basis).matrix *
                         rotation_fock_exp(seed.inverse(), small_basis).matrix;
    const PureState rotated(small_basis, frame * embedded);
    std::vector<Complex> ar(n + 1);
    for (int m = 0; m <= n; ++m) {
        ar[m] = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0))) *
                rotated.amplitude(m, n - m);
    }

    double theta = kPi / 2.0, phi = 0.0;
    double grad_norm = 0.0;
    int iter = 0;
    for (; iter < 500; ++iter) {
        const OverlapDerivatives d = coherent_overlap(ar, theta, phi);
        const Eigen::Vector2d grad(2.0 * (std::conj(d.f) * d.f_t).real(),
                                   2.0 * (std::conj(d.f) * d.f_p).real());
        grad_norm = grad.norm();
        if (grad_norm < 1e-10) break;
        Eigen::Matrix2d hess;
        hess(0, 0) = 2.0 * ((std::conj(d.f_t) * d.f_t).real() + (std::conj(d.f) * d.f_tt).real());
        hess(0, 1) = 2.0 * ((std::conj(d.f_t) * d.f_p).real() + (std::conj(d.f) * d.f_tp).real());
        hess(1, 0) = hess(0, 1);
        hess(1, 1) = 2.0 * ((std::conj(d.f_p) * d.f_p).real() + (std::conj(d.f) * d.f_pp).real());
        // Modified Newton ascent: clamp Hessian eigenvalues away from zero
        // on the concave side so ridge directions cannot blow up the step.
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
        const double lift = 1e-12 + 1e-6 * es.eigenvalues().cwiseAbs().maxCoeff();
        Eigen::Vector2d lambda = es.eigenvalues();
        for (int k = 0; k < 2; ++k) lambda[k] = std::min(lambda[k], -lift);
        Eigen::Vector2d step =
            -(es.eigenvectors() * lambda.cwiseInverse().asDiagonal() * es.eigenvectors().transpose()) *
            grad;
        const double g0 = std::norm(d.f);
        double scale = 1.0;
        while (scale > 1e-14 &&
               overlap_sq(ar, theta + scale * step[0], phi + scale * step[1]) < g0) {
            scale *= 0.5;
        }
        if (scale <= 1e-14) break;
        theta += scale * step[0];
        phi += scale * step[1];
    }

    // Map the refined direction back to the original frame and evaluate
    // the overlap there for the reported value.
    const Eigen::Vector3d dir{std::cos(theta), std::sin(theta) * std::cos(phi),
                              std::sin(theta) * std::sin(phi)};
    const Eigen::Vector3d back = seed.so3() * equator.so3().transpose() * dir;
    const auto [theta_out, phi_out] = direction_angles(back);
    FidelityResult result;
    result.fidelity = std::sqrt(overlap_sq(a, theta_out, phi_out));
    result.theta = theta_out;
    result.phi = phi_out;
    result.gradient_norm = grad_norm;
    result.iterations = iter;
    return result;
}

}  // namespace qpol
