#ifndef QPOL_FOCK_HPP
#define QPOL_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "qpol/errors.hpp"

namespace qpol {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numeric tolerances shared by state validation across the library.
struct Tolerances {
    double hermiticity = 1e-12;
    double trace = 1e-12;
    double positivity = 1e-10;
};

/// Two-mode Fock space truncated at total photon number nmax.
///
/// Basis kets |m,n> (m photons in mode a, n in mode b, m+n <= nmax) are
/// flattened as blocks of ascending total N = m+n, within a block by
/// ascending m.  Blocks are contiguous, so photon-number-conserving
/// operators are visibly block diagonal.
class TwoModeBasis {
public:
    explicit TwoModeBasis(int nmax);

    int nmax() const { return nmax_; }
    int dimension() const { return (nmax_ + 1) * (nmax_ + 2) / 2; }

    /// Flat index of |m,n>.  Throws CutoffError when m+n exceeds nmax.
    int index(int m, int n) const;

    /// Inverse of index(): (m, n) of a flat index.
    std::pair<int, int> mode_counts(int index) const;

    /// First flat index of the block with total photon number N.
    int block_offset(int total_n) const { return total_n * (total_n + 1) / 2; }
    int block_size(int total_n) const { return total_n + 1; }

    bool operator==(const TwoModeBasis& other) const { return nmax_ == other.nmax_; }
    bool operator!=(const TwoModeBasis& other) const { return !(*this == other); }

private:
    int nmax_;
};

/// Normalized two-mode pure state.  Amplitudes follow the basis ordering;
/// the constructor rescales to unit norm and rejects the zero vector.
class PureState {
public:
    PureState(TwoModeBasis basis, Vector amplitudes);

    const TwoModeBasis& basis() const { return basis_; }
    const Vector& amplitudes() const { return amplitudes_; }

    Complex amplitude(int m, int n) const { return amplitudes_[basis_.index(m, n)]; }

    /// Population sum |c|^2 of the N-photon block.
    double block_population(int total_n) const;

    /// Normalized copy of one block, embedded in the same basis
    /// (all other blocks zeroed).  Throws when the block is empty.
    PureState block_state(int total_n) const;

    /// Basis ket |m,n>.
    static PureState fock(const TwoModeBasis& basis, int m, int n);

private:
    TwoModeBasis basis_;
    Vector amplitudes_;
};

/// Hermitian, unit-trace density matrix over the truncated basis.
///
/// Construction checks hermiticity and trace against the tolerances and, if
/// `require_positive`, the smallest eigenvalue.  Decomposition remainders
/// legitimately violate positivity, so they are built with the check off and
/// carry their minimum eigenvalue as a diagnostic instead.
class DensityMatrix {
public:
    DensityMatrix(TwoModeBasis basis, Matrix matrix, const Tolerances& tol = {},
                  bool require_positive = true);

    static DensityMatrix from_pure(const PureState& psi);

    const TwoModeBasis& basis() const { return basis_; }
    const Matrix& matrix() const { return matrix_; }

    double purity() const { return (matrix_ * matrix_).trace().real(); }
    double min_eigenvalue() const;

private:
    TwoModeBasis basis_;
    Matrix matrix_;
};

/// Dense operator over the truncated basis.
struct OperatorMatrix {
    TwoModeBasis basis;
    Matrix matrix;
    bool hermitian = false;
};

struct LadderOperators {
    OperatorMatrix a;
    OperatorMatrix a_dagger;
    OperatorMatrix b;
    OperatorMatrix b_dagger;
};

struct StokesOperators {
    OperatorMatrix s0;
    OperatorMatrix s1;
    OperatorMatrix s2;
    OperatorMatrix s3;
};

/// Mode annihilation/creation operators.  Raising transitions that would
/// leave the truncated space are dropped, so a'/b' are exact only on states
/// supported on N <= nmax-1; everything photon-number conserving is exact.
LadderOperators ladder_operators(const TwoModeBasis& basis);

/// The four Stokes operators.  All Hermitian and block diagonal in total N;
/// S0 acts as N times the identity on each block.
StokesOperators stokes_operators(const TwoModeBasis& basis);

Complex expectation(const OperatorMatrix& op, const PureState& state);
Complex expectation(const OperatorMatrix& op, const DensityMatrix& state);

/// Expectation of a Hermitian operator; discards the (tiny) imaginary part.
double expectation_real(const OperatorMatrix& op, const PureState& state);
double expectation_real(const OperatorMatrix& op, const DensityMatrix& state);

/// Residuals of the state invariants.  Reporting only; nothing is enforced.
struct StateDiagnostics {
    double norm_residual = 0.0;         // | ||c|| - 1 |
    double hermiticity_residual = 0.0;  // max |rho - rho^dag|
    double trace_residual = 0.0;        // | tr rho - 1 |
    double min_eigenvalue = 0.0;
    double purity = 1.0;
};

StateDiagnostics validate(const PureState& state);
StateDiagnostics validate(const DensityMatrix& state);

/// Diagnostics for raw data that may not satisfy the invariants (and so
/// could never be constructed as a PureState / DensityMatrix).  The
/// min-eigenvalue and purity of a matrix refer to its Hermitian part.
StateDiagnostics validate(const TwoModeBasis& basis, const Vector& amplitudes);
StateDiagnostics validate(const TwoModeBasis& basis, const Matrix& matrix);

namespace detail {
void require_same_basis(const TwoModeBasis& a, const TwoModeBasis& b);
}

}  // namespace qpol

#endif
