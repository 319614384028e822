#ifndef QPOL_POLARIZATION_HPP
#define QPOL_POLARIZATION_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qpol/fock.hpp"
#include "qpol/su2.hpp"

namespace qpol {

/// Stokes parameters: mean photon number s0 and the 3-vector (S1,S2,S3).
struct StokesVector {
    double s0 = 0.0;
    Eigen::Vector3d vector = Eigen::Vector3d::Zero();

    /// |vector| / s0; empty for the vacuum (s0 below 1e-12), which gets no
    /// degree of polarization rather than an arbitrary 0 or 1.
    std::optional<double> degree() const;
};

StokesVector classical_stokes(Complex alpha, Complex beta);

StokesVector stokes_vector(const PureState& state);
StokesVector stokes_vector(const DensityMatrix& state);

std::optional<double> degree_of_polarization(const PureState& state);
std::optional<double> degree_of_polarization(const DensityMatrix& state);

/// Per-block Stokes data of a pure state: block weight q_N and the Stokes
/// 3-vector of the normalized N-photon component.
struct SubspaceStokes {
    struct Entry {
        int n;
        double q;
        Eigen::Vector3d s;
    };
    std::vector<Entry> entries;
};

SubspaceStokes per_subspace(const PureState& state);

/// p = |sum_N q_N S^(N)| / sum_N q_N N; agrees with degree_of_polarization.
std::optional<double> p_from_subspaces(const SubspaceStokes& subspaces);

/// rho = sum_{N,N'} sigma_{N,N'} |thetaphi^(N)><thetaphi^(N')| for a
/// Hermitian, PSD, unit-trace sigma; every such state has p = 1.
/// `n_values[i]` is the photon number of sigma row/column i; when empty,
/// row i means N = i.
DensityMatrix perfect_mixed_state(const Eigen::MatrixXcd& sigma, const std::vector<int>& n_values,
                                  double theta, double phi, const TwoModeBasis& basis);

/// Eigendecomposition factorization sigma_{N,N'} = sum_i lambda_N^(i)
/// conj(lambda_N'^(i)); one vector per nonzero eigenvalue.
std::vector<Eigen::VectorXcd> ensemble_from_sigma(const Eigen::MatrixXcd& sigma);

enum class TableRow {
    pure_fixed_n,
    pure_indeterminate_n,
    mixed_diagonal,
    mixed_general,
    not_perfect,
};

std::string to_string(TableRow row);

struct ClassificationReport {
    std::optional<double> p;
    bool is_perfect = false;
    std::optional<std::pair<double, double>> aligned_direction;
    /// <b'b> after rotating the aligned direction onto the S1 pole: the
    /// structural necessary condition, ~0 for every perfect state.
    double residual_b_occupation = 0.0;
    TableRow table_row = TableRow::not_perfect;
};

ClassificationReport classify_perfect(const PureState& state, double tol = 1e-9);
ClassificationReport classify_perfect(const DensityMatrix& state, double tol = 1e-9);

enum class DecompositionStrategy {
    fixed_n,
    bracketed,
    glauber,
};

std::string to_string(DecompositionStrategy strategy);

/// rho = (1-p) rho_unpolarized + p rho_polarized.  The polarized part is
/// perfectly polarized along S/|S| with mean photon number s0; the remainder
/// has zero Stokes 3-vector by linearity but is not guaranteed positive,
/// which `physical` and `min_eigenvalue_unpolarized` report.
struct DecompositionResult {
    double p = 0.0;
    std::optional<DensityMatrix> polarized;
    std::optional<DensityMatrix> unpolarized;
    DecompositionStrategy strategy = DecompositionStrategy::bracketed;
    double min_eigenvalue_unpolarized = 0.0;
    bool physical = true;
    /// Solved coherent amplitude (glauber strategy only).
    double glauber_r = 0.0;
};

DecompositionResult decompose(const DensityMatrix& rho,
                              DecompositionStrategy strategy = DecompositionStrategy::bracketed,
                              std::optional<int> fixed_n = std::nullopt);

struct FeasibilityOptions {
    /// Coefficients c_N of the perfectly polarized candidate, indexed by
    /// photon number N.  Defaults to the square roots of the state's block
    /// populations.
    std::optional<std::vector<Complex>> coefficients;
    /// Direction of the candidate; defaults to the computed S/|S|.
    std::optional<std::pair<double, double>> direction;
    int grid_alpha = 200;
    int grid_beta = 256;
};

/// Can psi be written as alpha * (perfectly polarized pure state along the
/// Stokes direction) plus a completely unpolarized remainder?  Reports the
/// coplanarity obstruction and a direct numerical search over the
/// subtraction amplitude.
struct FeasibilityReport {
    bool already_unpolarized = false;
    /// |p - 1| below 1e-9: subtracting the state itself works (alpha -> 1).
    bool degenerate_perfect = false;
    StokesVector stokes;
    double direction_theta = 0.0;
    double direction_phi = 0.0;
    Eigen::Vector3d overlap_real = Eigen::Vector3d::Zero();
    Eigen::Vector3d overlap_imag = Eigen::Vector3d::Zero();
    /// |n . (S1 x S2)|, raw and scaled by |S1||S2| (1 = orthogonal triple).
    double triple_product = 0.0;
    double normalized_triple_product = 0.0;
    double min_stokes_norm = 0.0;
    double alpha_at_min = 0.0;
    double beta_at_min = 0.0;
    bool feasible = false;
};

FeasibilityReport pure_decomposition_feasibility(const PureState& psi,
                                                 const FeasibilityOptions& options = {});

/// Classical splitting into a fully polarized and a fully unpolarized beam;
/// unique, and the two parts sum back exactly.
std::pair<StokesVector, StokesVector> classical_decompose(const StokesVector& s);

}  // namespace qpol

#endif
