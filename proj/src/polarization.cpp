#include "qpol/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVacuumFloor = 1e-12;

StokesVector stokes_from_expectations(const StokesOperators& ops, const auto& state) {
    StokesVector s;
    s.s0 = expectation_real(ops.s0, state);
    s.vector = {expectation_real(ops.s1, state), expectation_real(ops.s2, state),
                expectation_real(ops.s3, state)};
    return s;
}

std::vector<double> block_populations(const DensityMatrix& rho) {
    std::vector<double> q(rho.basis().nmax() + 1, 0.0);
    for (int i = 0; i < rho.basis().dimension(); ++i) {
        q[rho.basis().mode_counts(i).first + rho.basis().mode_counts(i).second] +=
            rho.matrix()(i, i).real();
    }
    return q;
}

}  // namespace

std::optional<double> StokesVector::degree() const {
    if (s0 <= kVacuumFloor) return std::nullopt;
    return vector.norm() / s0;
}

StokesVector classical_stokes(Complex alpha, Complex beta) {
    if (alpha == Complex(0.0) && beta == Complex(0.0)) {
        throw ValidationError("polarization is undefined for a vanishing field");
    }
    const Complex cross = std::conj(alpha) * beta;
    StokesVector s;
    s.s0 = std::norm(alpha) + std::norm(beta);
    s.vector = {std::norm(alpha) - std::norm(beta), 2.0 * cross.real(), 2.0 * cross.imag()};
    return s;
}

StokesVector stokes_vector(const PureState& state) {
    return stokes_from_expectations(stokes_operators(state.basis()), state);
}

StokesVector stokes_vector(const DensityMatrix& state) {
    return stokes_from_expectations(stokes_operators(state.basis()), state);
}

std::optional<double> degree_of_polarization(const PureState& state) {
    return stokes_vector(state).degree();
}

std::optional<double> degree_of_polarization(const DensityMatrix& state) {
    return stokes_vector(state).degree();
}

SubspaceStokes per_subspace(const PureState& state) {
    const StokesOperators ops = stokes_operators(state.basis());
    SubspaceStokes result;
    for (int n = 0; n <= state.basis().nmax(); ++n) {
        const double q = state.block_population(n);
        if (q <= 1e-14) continue;
        const PureState block = state.block_state(n);
        result.entries.push_back(
            {n, q,
             {expectation_real(ops.s1, block), expectation_real(ops.s2, block),
              expectation_real(ops.s3, block)}});
    }
    return result;
}

std::optional<double> p_from_subspaces(const SubspaceStokes& subspaces) {
    Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
    double total = 0.0;
    for (const auto& e : subspaces.entries) {
        weighted += e.q * e.s;
        total += e.q * e.n;
    }
    if (total <= kVacuumFloor) return std::nullopt;
    return weighted.norm() / total;
}

DensityMatrix perfect_mixed_state(const Eigen::MatrixXcd& sigma, const std::vector<int>& n_values,
                                  double theta, double phi, const TwoModeBasis& basis) {
    const int dim = int(sigma.rows());
    if (sigma.cols() != dim) {
        throw ValidationError("sigma must be square");
    }
    std::vector<int> ns = n_values;
    if (ns.empty()) {
        ns.resize(dim);
        for (int i = 0; i < dim; ++i) ns[i] = i;
    }
    if (int(ns.size()) != dim) {
        throw ValidationError("one photon number per sigma row is required");
    }
    for (size_t i = 0; i < ns.size(); ++i) {
        for (size_t j = i + 1; j < ns.size(); ++j) {
            if (ns[i] == ns[j]) throw ValidationError("sigma photon numbers must be distinct");
        }
    }
    const Tolerances tol;
    if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity) {
        throw ValidationError("sigma must be Hermitian");
    }
    if (std::abs(sigma.trace().real() - 1.0) > tol.trace) {
        throw ValidationError("sigma must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.positivity) {
        throw ValidationError("sigma must be positive semidefinite");
    }

    // Coherent states of distinct N are orthogonal, so the column map below
    // is an isometry and rho inherits sigma's spectrum.
    Matrix isometry(basis.dimension(), dim);
    for (int i = 0; i < dim; ++i) {
        isometry.col(i) = su2_coherent(ns[i], theta, phi, basis).amplitudes();
    }
    Matrix rho = isometry * sigma * isometry.adjoint();
    return DensityMatrix(basis, std::move(rho), tol, false);
}

std::vector<Eigen::VectorXcd> ensemble_from_sigma(const Eigen::MatrixXcd& sigma) {
    const Tolerances tol;
    if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity) {
        throw ValidationError("sigma must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma);
    if (es.eigenvalues().minCoeff() < -tol.positivity) {
        throw ValidationError("sigma must be positive semidefinite");
    }
    std::vector<Eigen::VectorXcd> vectors;
    for (int i = int(es.eigenvalues().size()) - 1; i >= 0; --i) {
        const double w = es.eigenvalues()[i];
        if (w <= 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) continue;
        vectors.push_back(std::sqrt(w) * es.eigenvectors().col(i));
    }
    return vectors;
}

std::string to_string(TableRow row) {
    switch (row) {
        case TableRow::pure_fixed_n: return "pure-fixed-N";
        case TableRow::pure_indeterminate_n: return "pure-indeterminate-N";
        case TableRow::mixed_diagonal: return "mixed-diagonal";
        case TableRow::mixed_general: return "mixed-general";
        case TableRow::not_perfect: return "not-perfect";
    }
    return "not-perfect";
}

namespace {

ClassificationReport classify_density(const DensityMatrix& rho, double tol) {
    ClassificationReport report;
    const StokesVector s = stokes_vector(rho);
    report.p = s.degree();
    if (!report.p || std::abs(*report.p - 1.0) > tol) {
        report.table_row = TableRow::not_perfect;
        return report;
    }
    report.is_perfect = true;
    const auto [theta, phi] = direction_angles(s.vector);
    report.aligned_direction = {{theta, phi}};

    const DensityMatrix aligned = apply_rotation(Rotation(theta, phi).inverse(), rho);
    const StokesVector s_aligned = stokes_vector(aligned);
    report.residual_b_occupation = 0.5 * (s_aligned.s0 - s_aligned.vector[0]);

    const bool pure = rho.purity() > 1.0 - std::max(tol, 1e-12);
    const std::vector<double> q = block_populations(rho);
    const int support = int(std::count_if(q.begin(), q.end(), [&](double x) { return x > tol; }));
    if (pure) {
        report.table_row = support <= 1 ? TableRow::pure_fixed_n : TableRow::pure_indeterminate_n;
        return report;
    }

    // Aligned perfect states live on |N,0>; coherences between different N
    // distinguish the general class from the rotated-diagonal one.
    const TwoModeBasis& basis = rho.basis();
    double max_coherence = 0.0;
    for (int n = 0; n <= basis.nmax(); ++n) {
        for (int np = n + 1; np <= basis.nmax(); ++np) {
            max_coherence = std::max(
                max_coherence, std::abs(aligned.matrix()(basis.index(n, 0), basis.index(np, 0))));
        }
    }
    report.table_row =
        max_coherence > tol ? TableRow::mixed_general : TableRow::mixed_diagonal;
    return report;
}

}  // namespace

ClassificationReport classify_perfect(const PureState& state, double tol) {
    return classify_density(DensityMatrix::from_pure(state), tol);
}

ClassificationReport classify_perfect(const DensityMatrix& state, double tol) {
    return classify_density(state, tol);
}

std::string to_string(DecompositionStrategy strategy) {
    switch (strategy) {
        case DecompositionStrategy::fixed_n: return "fixed-n";
        case DecompositionStrategy::bracketed: return "bracketed";
        case DecompositionStrategy::glauber: return "glauber";
    }
    return "bracketed";
}

namespace {

double truncated_glauber_mean(double r, int nmax) {
    double sum = 0.0, weighted = 0.0, log_q = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) log_q += 2.0 * std::log(r) - std::log(double(n));
        const double q = std::exp(log_q);
        sum += q;
        weighted += q * n;
    }
    return weighted / sum;
}

double solve_glauber_amplitude(double target_mean, int nmax) {
    double lo = 1e-9;
    double hi = std::max(1.0, 2.0 * std::sqrt(target_mean));
    int guard = 0;
    while (truncated_glauber_mean(hi, nmax) < target_mean) {
        hi *= 2.0;
        if (++guard > 60) {
            throw NumericalError("mean photon number is out of reach for the truncated coherent family");
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (truncated_glauber_mean(mid, nmax) < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

DensityMatrix polarized_component(const DensityMatrix& rho, double s0, double theta, double phi,
                                  DecompositionStrategy strategy, std::optional<int> fixed_n,
                                  double* glauber_r) {
    const TwoModeBasis& basis = rho.basis();
    switch (strategy) {
        case DecompositionStrategy::fixed_n: {
            if (!fixed_n) {
                throw ValidationError("fixed-n strategy requires a photon number");
            }
            if (std::abs(double(*fixed_n) - s0) > 1e-9) {
                throw ValidationError("inconsistent strategy: fixed N=" + std::to_string(*fixed_n) +
                                      " but the state's mean photon number is " + std::to_string(s0));
            }
            return DensityMatrix::from_pure(su2_coherent(*fixed_n, theta, phi, basis));
        }
        case DecompositionStrategy::bracketed: {
            const double rounded = std::round(s0);
            if (std::abs(s0 - rounded) <= 1e-9) {
                return DensityMatrix::from_pure(su2_coherent(int(rounded), theta, phi, basis));
            }
            const int lower = int(std::floor(s0));
            if (lower + 1 > basis.nmax()) {
                throw CutoffError("bracketing block exceeds cutoff");
            }
            const double w = double(lower + 1) - s0;
            const Matrix mix =
                w * DensityMatrix::from_pure(su2_coherent(lower, theta, phi, basis)).matrix() +
                (1.0 - w) * DensityMatrix::from_pure(su2_coherent(lower + 1, theta, phi, basis)).matrix();
            return DensityMatrix(basis, mix);
        }
        case DecompositionStrategy::glauber: {
            const double r = solve_glauber_amplitude(s0, basis.nmax());
            if (glauber_r) *glauber_r = r;
            PolarizedPureSpec spec{theta, phi, glauber_weights(r, 0.0, basis.nmax())};
            return DensityMatrix::from_pure(polarized_pure_state(spec, basis));
        }
    }
    throw ValidationError("unknown decomposition strategy");
}

}  // namespace

DecompositionResult decompose(const DensityMatrix& rho, DecompositionStrategy strategy,
                              std::optional<int> fixed_n) {
    const StokesVector s = stokes_vector(rho);
    const std::optional<double> p = s.degree();
    if (!p) {
        throw ValidationError("degree of polarization is undefined for the vacuum");
    }
    DecompositionResult result;
    result.p = *p;
    result.strategy = strategy;
    if (*p <= 1e-12) {
        result.unpolarized = rho;
        result.min_eigenvalue_unpolarized = rho.min_eigenvalue();
        return result;
    }
    if (1.0 - *p <= 1e-12) {
        result.polarized = rho;
        return result;
    }

    const auto [theta, phi] = direction_angles(s.vector);
    const DensityMatrix polarized =
        polarized_component(rho, s.s0, theta, phi, strategy, fixed_n, &result.glauber_r);
    Matrix remainder = (rho.matrix() - *p * polarized.matrix()) / (1.0 - *p);
    Tolerances loose;
    loose.trace = 1e-9;
    DensityMatrix unpolarized(rho.basis(), std::move(remainder), loose, false);
    result.min_eigenvalue_unpolarized = unpolarized.min_eigenvalue();
    result.physical = result.min_eigenvalue_unpolarized >= -Tolerances{}.positivity;
    result.polarized = polarized;
    result.unpolarized = std::move(unpolarized);
    return result;
}

FeasibilityReport pure_decomposition_feasibility(const PureState& psi,
                                                 const FeasibilityOptions& options) {
    FeasibilityReport report;
    report.stokes = stokes_vector(psi);
    if (report.stokes.vector.norm() <= kVacuumFloor * std::max(1.0, report.stokes.s0)) {
        report.already_unpolarized = true;
        return report;
    }
    const std::optional<double> p = report.stokes.degree();
    report.degenerate_perfect = p && std::abs(*p - 1.0) <= 1e-9;

    const TwoModeBasis& basis = psi.basis();
    auto [theta, phi] = direction_angles(report.stokes.vector);
    if (options.direction) {
        theta = options.direction->first;
        phi = options.direction->second;
    }
    report.direction_theta = theta;
    report.direction_phi = phi;

    std::vector<Complex> coeffs(basis.nmax() + 1, 0.0);
    if (options.coefficients) {
        if (int(options.coefficients->size()) > basis.nmax() + 1) {
            throw CutoffError("candidate coefficients extend past the cutoff");
        }
        std::copy(options.coefficients->begin(), options.coefficients->end(), coeffs.begin());
    } else {
        for (int n = 0; n <= basis.nmax(); ++n) {
            coeffs[n] = std::sqrt(psi.block_population(n));
        }
    }

    Vector omega_amps = Vector::Zero(basis.dimension());
    for (int n = 0; n <= basis.nmax(); ++n) {
        if (std::abs(coeffs[n]) == 0.0) continue;
        omega_amps += coeffs[n] * su2_coherent(n, theta, phi, basis).amplitudes();
    }
    const PureState omega(basis, std::move(omega_amps));

    const StokesOperators ops = stokes_operators(basis);
    const Eigen::Vector3cd overlap{
        omega.amplitudes().dot(ops.s1.matrix * psi.amplitudes()),
        omega.amplitudes().dot(ops.s2.matrix * psi.amplitudes()),
        omega.amplitudes().dot(ops.s3.matrix * psi.amplitudes())};
    report.overlap_real = overlap.real();
    report.overlap_imag = overlap.imag();

    const Eigen::Vector3d direction{std::cos(theta), std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi)};
    report.triple_product = std::abs(direction.dot(report.overlap_real.cross(report.overlap_imag)));
    const double s1n = report.overlap_real.norm();
    const double s2n = report.overlap_imag.norm();
    report.normalized_triple_product = (s1n > 1e-15 && s2n > 1e-15)
                                           ? report.triple_product / (s1n * s2n)
                                           : 0.0;

    // Stokes 3-vector of the subtracted combination, up to the positive
    // normalization 1 - |alpha|^2; zero iff the remainder is unpolarized.
    const Eigen::Vector3d s_omega{expectation_real(ops.s1, omega), expectation_real(ops.s2, omega),
                                  expectation_real(ops.s3, omega)};
    auto residual = [&](double alpha, double beta) {
        const Eigen::Vector3d v = report.stokes.vector + alpha * alpha * s_omega -
                                  2.0 * alpha *
                                      (std::cos(beta) * report.overlap_real +
                                       std::sin(beta) * report.overlap_imag);
        return v.norm();
    };

    double best = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0, best_beta = 0.0;
    for (int i = 0; i < options.grid_alpha; ++i) {
        const double alpha = double(i + 1) / double(options.grid_alpha + 1);
        for (int j = 0; j < options.grid_beta; ++j) {
            const double beta = 2.0 * kPi * j / options.grid_beta;
            const double v = residual(alpha, beta);
            if (v < best) {
                best = v;
                best_alpha = alpha;
                best_beta = beta;
            }
        }
    }
    double window_alpha = 1.0 / double(options.grid_alpha + 1);
    double window_beta = 2.0 * kPi / options.grid_beta;
    for (int round = 0; round < 60; ++round) {
        double local_best = best, local_alpha = best_alpha, local_beta = best_beta;
        for (int i = -2; i <= 2; ++i) {
            for (int j = -2; j <= 2; ++j) {
                const double alpha =
                    std::clamp(best_alpha + i * window_alpha / 2.0, 1e-9, 1.0 - 1e-9);
                const double beta = best_beta + j * window_beta / 2.0;
                const double v = residual(alpha, beta);
                if (v < local_best) {
                    local_best = v;
                    local_alpha = alpha;
                    local_beta = beta;
                }
            }
        }
        best = local_best;
        best_alpha = local_alpha;
        best_beta = local_beta;
        window_alpha *= 0.5;
        window_beta *= 0.5;
    }
    report.min_stokes_norm = best;
    report.alpha_at_min = best_alpha;
    report.beta_at_min = std::fmod(best_beta + 2.0 * kPi, 2.0 * kPi);
    report.feasible = best <= 1e-3 * report.stokes.s0;
    return report;
}

std::pair<StokesVector, StokesVector> classical_decompose(const StokesVector& s) {
    if (s.s0 <= 0.0) {
        throw ValidationError("classical decomposition needs positive intensity");
    }
    StokesVector polarized{s.vector.norm(), s.vector};
    StokesVector unpolarized{s.s0 - s.vector.norm(), Eigen::Vector3d::Zero()};
    return {polarized, unpolarized};
}

}  // namespace qpol
