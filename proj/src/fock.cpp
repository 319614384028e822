#include "qpol/fock.hpp"

#include <cmath>
#include <string>

namespace qpol {

TwoModeBasis::TwoModeBasis(int nmax) : nmax_(nmax) {
    if (nmax < 0) {
        throw ValidationError("photon-number cutoff must be non-negative");
    }
}

int TwoModeBasis::index(int m, int n) const {
    if (m < 0 || n < 0 || m + n > nmax_) {
        throw CutoffError("ket |" + std::to_string(m) + "," + std::to_string(n) +
                          "> exceeds cutoff nmax=" + std::to_string(nmax_));
    }
    return block_offset(m + n) + m;
}

std::pair<int, int> TwoModeBasis::mode_counts(int index) const {
    if (index < 0 || index >= dimension()) {
        throw CutoffError("flat index " + std::to_string(index) + " out of range");
    }
    int total = 0;
    while (block_offset(total + 1) <= index) ++total;
    const int m = index - block_offset(total);
    return {m, total - m};
}

PureState::PureState(TwoModeBasis basis, Vector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_.dimension()) {
        throw ValidationError("amplitude vector length does not match basis dimension");
    }
    const double norm = amplitudes_.norm();
    if (norm < 1e-14) {
        throw ValidationError("cannot normalize the zero state");
    }
    amplitudes_ /= norm;
}

double PureState::block_population(int total_n) const {
    const int off = basis_.block_offset(total_n);
    return amplitudes_.segment(off, basis_.block_size(total_n)).squaredNorm();
}

PureState PureState::block_state(int total_n) const {
    if (total_n < 0 || total_n > basis_.nmax()) {
        throw CutoffError("block N=" + std::to_string(total_n) + " outside basis");
    }
    Vector v = Vector::Zero(basis_.dimension());
    const int off = basis_.block_offset(total_n);
    const int sz = basis_.block_size(total_n);
    v.segment(off, sz) = amplitudes_.segment(off, sz);
    if (v.norm() < 1e-14) {
        throw ValidationError("state has no support on block N=" + std::to_string(total_n));
    }
    return PureState(basis_, std::move(v));
}

PureState PureState::fock(const TwoModeBasis& basis, int m, int n) {
    Vector v = Vector::Zero(basis.dimension());
    v[basis.index(m, n)] = 1.0;
    return PureState(basis, std::move(v));
}

DensityMatrix::DensityMatrix(TwoModeBasis basis, Matrix matrix, const Tolerances& tol,
                             bool require_positive)
    : basis_(basis), matrix_(std::move(matrix)) {
    const int dim = basis_.dimension();
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw ValidationError("density matrix shape does not match basis dimension");
    }
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermiticity) {
        throw ValidationError("density matrix not Hermitian (residual " + std::to_string(herm) + ")");
    }
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw ValidationError("density matrix trace " + std::to_string(tr) + " != 1");
    }
    matrix_ /= tr;
    if (require_positive) {
        const double lambda_min = min_eigenvalue();
        if (lambda_min < -tol.positivity) {
            throw ValidationError("density matrix has negative eigenvalue " +
                                  std::to_string(lambda_min));
        }
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    Matrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.basis(), std::move(proj));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

namespace detail {
void require_same_basis(const TwoModeBasis& a, const TwoModeBasis& b) {
    if (a != b) {
        throw BasisMismatchError("operands live on different bases (nmax " +
                                 std::to_string(a.nmax()) + " vs " + std::to_string(b.nmax()) + ")");
    }
}
}  // namespace detail

LadderOperators ladder_operators(const TwoModeBasis& basis) {
    const int dim = basis.dimension();
    Matrix a = Matrix::Zero(dim, dim);
    Matrix b = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const auto [m, n] = basis.mode_counts(i);
        if (m > 0) a(basis.index(m - 1, n), i) = std::sqrt(double(m));
        if (n > 0) b(basis.index(m, n - 1), i) = std::sqrt(double(n));
    }
    return {
        {basis, a, false},
        {basis, a.adjoint(), false},
        {basis, b, false},
        {basis, b.adjoint(), false},
    };
}

StokesOperators stokes_operators(const TwoModeBasis& basis) {
    const int dim = basis.dimension();
    Matrix s0 = Matrix::Zero(dim, dim);
    Matrix s1 = Matrix::Zero(dim, dim);
    Matrix s2 = Matrix::Zero(dim, dim);
    Matrix s3 = Matrix::Zero(dim, dim);
    const Complex i_unit(0.0, 1.0);
    for (int i = 0; i < dim; ++i) {
        const auto [m, n] = basis.mode_counts(i);
        s0(i, i) = double(m + n);
        s1(i, i) = double(m - n);
        // a'b and b'a stay inside the N block, so both are exact under truncation.
        if (n > 0) {
            const double amp = std::sqrt(double((m + 1) * n));
            s2(basis.index(m + 1, n - 1), i) += amp;
            s3(basis.index(m + 1, n - 1), i) += -i_unit * amp;
        }
        if (m > 0) {
            const double amp = std::sqrt(double(m * (n + 1)));
            s2(basis.index(m - 1, n + 1), i) += amp;
            s3(basis.index(m - 1, n + 1), i) += i_unit * amp;
        }
    }
    return {
        {basis, s0, true},
        {basis, s1, true},
        {basis, s2, true},
        {basis, s3, true},
    };
}

Complex expectation(const OperatorMatrix& op, const PureState& state) {
    detail::require_same_basis(op.basis, state.basis());
    return state.amplitudes().dot(op.matrix * state.amplitudes());
}

Complex expectation(const OperatorMatrix& op, const DensityMatrix& state) {
    detail::require_same_basis(op.basis, state.basis());
    return (op.matrix * state.matrix()).trace();
}

double expectation_real(const OperatorMatrix& op, const PureState& state) {
    return expectation(op, state).real();
}

double expectation_real(const OperatorMatrix& op, const DensityMatrix& state) {
    return expectation(op, state).real();
}

StateDiagnostics validate(const PureState& state) {
    StateDiagnostics d;
    d.norm_residual = std::abs(state.amplitudes().norm() - 1.0);
    d.hermiticity_residual = 0.0;
    d.trace_residual = d.norm_residual;
    d.min_eigenvalue = 0.0;
    d.purity = 1.0;
    return d;
}

StateDiagnostics validate(const DensityMatrix& state) {
    return validate(state.basis(), state.matrix());
}

StateDiagnostics validate(const TwoModeBasis& basis, const Vector& amplitudes) {
    if (amplitudes.size() != basis.dimension()) {
        throw ValidationError("amplitude vector length does not match basis dimension");
    }
    StateDiagnostics d;
    d.norm_residual = std::abs(amplitudes.norm() - 1.0);
    d.trace_residual = d.norm_residual;
    return d;
}

StateDiagnostics validate(const TwoModeBasis& basis, const Matrix& matrix) {
    if (matrix.rows() != basis.dimension() || matrix.cols() != basis.dimension()) {
        throw ValidationError("matrix shape does not match basis dimension");
    }
    StateDiagnostics d;
    d.norm_residual = 0.0;
    d.hermiticity_residual = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    d.trace_residual = std::abs(matrix.trace().real() - 1.0);
    const Matrix herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    d.purity = (herm * herm).trace().real();
    return d;
}

}  // namespace qpol
