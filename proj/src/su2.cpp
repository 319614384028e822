#include "qpol/su2.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qpol {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double phi) {
    const double two_pi = 2.0 * kPi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

double sqrt_binomial(int n, int k) {
    return std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace

Rotation::Rotation(double theta, double phi, double chi)
    : theta_(theta), phi_(wrap_angle(phi)), chi_(chi) {
    if (theta_ < -1e-12 || theta_ > kPi + 1e-12) {
        throw ValidationError("rotation polar angle must lie in [0, pi]");
    }
    theta_ = std::clamp(theta_, 0.0, kPi);
    const double c = std::cos(theta_ / 2.0);
    const double s = std::sin(theta_ / 2.0);
    const Complex eip(std::cos(phi_), std::sin(phi_));
    u_ << c, -std::conj(eip) * s, eip * s, c;
    if (chi_ != 0.0) {
        const Complex half(std::cos(chi_ / 2.0), std::sin(chi_ / 2.0));
        u_.col(0) *= half;
        u_.col(1) *= std::conj(half);
    }
}

Eigen::Matrix3d Rotation::so3() const {
    // Adjoint action: tau_1,2,3 are the 2x2 blocks of S1,S2,S3 in the
    // (|1,0>, |0,1>) ordering, i.e. sigma_z, sigma_x, sigma_y.
    Eigen::Matrix2cd tau[3];
    tau[0] << 1, 0, 0, -1;
    tau[1] << 0, 1, 1, 0;
    tau[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Matrix2cd conj_i = u_.adjoint() * tau[i] * u_;
        for (int j = 0; j < 3; ++j) {
            m(i, j) = 0.5 * (conj_i * tau[j]).trace().real();
        }
    }
    return m;
}

Rotation Rotation::inverse() const {
    // U(theta, phi + pi) = U(theta, phi)^dagger; commuting the chi phase
    // past the polar factor shifts phi by chi.
    return Rotation(theta_, phi_ + kPi + chi_, -chi_);
}

std::pair<double, double> direction_angles(const Eigen::Vector3d& v) {
    const double theta = std::atan2(std::hypot(v[1], v[2]), v[0]);
    const double phi = wrap_angle(std::atan2(v[2], v[1]));
    return {theta, phi};
}

PureState su2_coherent(int n_photons, double theta, double phi, const TwoModeBasis& basis) {
    if (n_photons < 0 || n_photons > basis.nmax()) {
        throw CutoffError("coherent-state photon number N=" + std::to_string(n_photons) +
                          " exceeds cutoff");
    }
    Vector v = Vector::Zero(basis.dimension());
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (int m = 0; m <= n_photons; ++m) {
        const double mag = sqrt_binomial(n_photons, m) * std::pow(c, m) * std::pow(s, n_photons - m);
        const double arg = phi * (n_photons - m);
        v[basis.index(m, n_photons - m)] = Complex(mag * std::cos(arg), mag * std::sin(arg));
    }
    return PureState(basis, std::move(v));
}

OperatorMatrix rotation_fock_exp(const Rotation& rot, const TwoModeBasis& basis) {
    const StokesOperators stokes = stokes_operators(basis);
    const Matrix generator =
        (rot.theta() / 2.0) * (std::sin(rot.phi()) * stokes.s2.matrix - std::cos(rot.phi()) * stokes.s3.matrix);
    const int dim = basis.dimension();
    Matrix r = Matrix::Zero(dim, dim);
    for (int total = 0; total <= basis.nmax(); ++total) {
        const int off = basis.block_offset(total);
        const int sz = basis.block_size(total);
        Eigen::SelfAdjointEigenSolver<Matrix> es(generator.block(off, off, sz, sz));
        const Vector phases =
            es.eigenvalues().unaryExpr([](double x) { return Complex(std::cos(x), std::sin(x)); });
        r.block(off, off, sz, sz) =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    if (rot.chi() != 0.0) {
        for (int i = 0; i < dim; ++i) {
            const auto [m, n] = basis.mode_counts(i);
            const double arg = 0.5 * rot.chi() * (m - n);
            r.col(i) *= Complex(std::cos(arg), std::sin(arg));
        }
    }
    return {basis, std::move(r), false};
}

namespace {

// Quad-precision complex ring arithmetic for the Gauss factor assembly.
// The factor matrices carry entries of order tan(theta/2)^N that cancel to
// order one in the product; near the theta guard that cancellation costs
// ~30 decimal digits at nmax = 6, which doubles cannot pay and __float128
// absorbs with room to spare.
struct Cq {
    __float128 re = 0, im = 0;
    Cq() = default;
    Cq(__float128 r, __float128 i = 0) : re(r), im(i) {}
    Cq operator+(const Cq& o) const { return {re + o.re, im + o.im}; }
    Cq operator-(const Cq& o) const { return {re - o.re, im - o.im}; }
    Cq operator*(const Cq& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Cq& operator+=(const Cq& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

using BlockQ = std::vector<std::vector<Cq>>;

BlockQ block_identity(int size) {
    BlockQ m(size, std::vector<Cq>(size));
    for (int i = 0; i < size; ++i) m[i][i] = Cq(1);
    return m;
}

BlockQ block_multiply(const BlockQ& a, const BlockQ& b) {
    const int size = int(a.size());
    BlockQ out(size, std::vector<Cq>(size));
    for (int i = 0; i < size; ++i) {
        for (int k = 0; k < size; ++k) {
            if (a[i][k].re == 0 && a[i][k].im == 0) continue;
            for (int j = 0; j < size; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

}  // namespace

OperatorMatrix rotation_fock_gauss(const Rotation& rot, const TwoModeBasis& basis) {
    if (rot.theta() > kPi - 0.01) {
        throw NumericalError(
            "Gauss factorization is singular near theta = pi; use rotation_fock_exp");
    }
    const __float128 half_theta = __float128(rot.theta()) / 2;
    const __float128 t = tanq(half_theta);
    const __float128 cos_half = cosq(half_theta);
    const Cq eip(cosq(__float128(rot.phi())), sinq(__float128(rot.phi())));
    const Cq a = eip * Cq(t);
    const Cq c = Cq(-cosq(__float128(rot.phi())), sinq(__float128(rot.phi()))) * Cq(t);

    const int dim = basis.dimension();
    Matrix r = Matrix::Zero(dim, dim);
    for (int total = 0; total <= basis.nmax(); ++total) {
        const int size = total + 1;
        // In-block index is m; S+ = a'b raises m, S- = b'a lowers it.
        BlockQ s_plus(size, std::vector<Cq>(size));
        BlockQ s_minus(size, std::vector<Cq>(size));
        for (int m = 0; m < total; ++m) {
            const __float128 amp = sqrtq(__float128((m + 1) * (total - m)));
            s_plus[m + 1][m] = Cq(amp);
            s_minus[m][m + 1] = Cq(amp);
        }

        auto exp_nilpotent = [&](const BlockQ& gen, const Cq& coeff) {
            BlockQ sum = block_identity(size);
            BlockQ term = block_identity(size);
            for (int k = 1; k <= total; ++k) {
                term = block_multiply(gen, term);
                const Cq scaled = coeff * Cq(__float128(1) / k);
                for (auto& row : term) {
                    for (auto& x : row) x = x * scaled;
                }
                // term is now coeff^k gen^k / k!
                for (int i = 0; i < size; ++i) {
                    for (int j = 0; j < size; ++j) sum[i][j] += term[i][j];
                }
            }
            return sum;
        };

        BlockQ middle(size, std::vector<Cq>(size));
        for (int m = 0; m < size; ++m) {
            middle[m][m] = Cq(powq(cos_half, __float128(2 * m - total)));
        }

        const BlockQ product =
            block_multiply(block_multiply(exp_nilpotent(s_minus, a), middle),
                           exp_nilpotent(s_plus, c));
        const int off = basis.block_offset(total);
        for (int i = 0; i < size; ++i) {
            for (int j = 0; j < size; ++j) {
                r(off + i, off + j) = Complex(double(product[i][j].re), double(product[i][j].im));
            }
        }
    }
    if (rot.chi() != 0.0) {
        for (int i = 0; i < dim; ++i) {
            const auto [m, n] = basis.mode_counts(i);
            const double arg = 0.5 * rot.chi() * (m - n);
            r.col(i) *= Complex(std::cos(arg), std::sin(arg));
        }
    }
    return {basis, std::move(r), false};
}

PureState apply_rotation(const Rotation& rot, const PureState& state) {
    const OperatorMatrix r = rotation_fock_exp(rot, state.basis());
    return PureState(state.basis(), r.matrix * state.amplitudes());
}

DensityMatrix apply_rotation(const Rotation& rot, const DensityMatrix& state) {
    const OperatorMatrix r = rotation_fock_exp(rot, state.basis());
    Matrix rotated = r.matrix * state.matrix() * r.matrix.adjoint();
    return DensityMatrix(state.basis(), std::move(rotated), Tolerances{}, false);
}

PureState polarized_pure_state(const PolarizedPureSpec& spec, const TwoModeBasis& basis) {
    double total_q = 0.0;
    for (const auto& w : spec.weights) {
        if (w.n < 0 || w.n > basis.nmax()) {
            throw CutoffError("polarized-state weight at N=" + std::to_string(w.n) +
                              " exceeds cutoff");
        }
        if (w.q < 0.0) {
            throw ValidationError("polarized-state weights must be non-negative");
        }
        total_q += w.q;
    }
    if (std::abs(total_q - 1.0) > 1e-12) {
        throw ValidationError("polarized-state weights must sum to 1 (got " +
                              std::to_string(total_q) + ")");
    }
    Vector v = Vector::Zero(basis.dimension());
    for (const auto& w : spec.weights) {
        const Complex phase(std::cos(w.varphi), std::sin(w.varphi));
        v += std::sqrt(w.q) * phase * su2_coherent(w.n, spec.theta, spec.phi, basis).amplitudes();
    }
    return PureState(basis, std::move(v));
}

std::vector<PolarizedPureSpec::Weight> glauber_weights(double r, double delta, int nmax) {
    if (r <= 0.0) {
        throw ValidationError("Glauber amplitude r must be positive");
    }
    std::vector<PolarizedPureSpec::Weight> weights;
    weights.reserve(nmax + 1);
    double sum = 0.0;
    double log_q = 0.0;  // log(r^{2N}/N!) accumulated incrementally
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) log_q += 2.0 * std::log(r) - std::log(double(n));
        const double q = std::exp(log_q);
        weights.push_back({n, q, delta * n});
        sum += q;
    }
    for (auto& w : weights) w.q /= sum;
    return weights;
}

}  // namespace qpol
