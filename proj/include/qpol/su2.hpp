#ifndef QPOL_SU2_HPP
#define QPOL_SU2_HPP

#include <Eigen/Dense>
#include <vector>

#include "qpol/fock.hpp"

namespace qpol {

/// Rotation of the Poincare sphere taking the S1 pole to the direction
/// n(theta,phi) = (cos theta, sin theta cos phi, sin theta sin phi).
///
/// An optional third angle chi multiplies the fixed-N blocks by phases
/// only; it never moves a Stokes vector's polar direction relative to the
/// two-angle family and is excluded from every classification path.
class Rotation {
public:
    explicit Rotation(double theta, double phi, double chi = 0.0);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    double chi() const { return chi_; }

    /// 2x2 unitary in the (|1,0>, |0,1>) ordering.
    const Eigen::Matrix2cd& mode_matrix() const { return u_; }

    /// SO(3) image acting on Stokes 3-vectors (S1,S2,S3).
    Eigen::Matrix3d so3() const;

    Rotation inverse() const;

private:
    double theta_, phi_, chi_;
    Eigen::Matrix2cd u_;
};

/// Direction (theta, phi) of a Stokes 3-vector; inverse of n(theta,phi).
std::pair<double, double> direction_angles(const Eigen::Vector3d& v);

/// Perfectly polarized pure state of indeterminate photon number: SU(2)
/// coherent blocks along a common direction with weights q_N and phases
/// varphi_N, sum q_N = 1.
struct PolarizedPureSpec {
    double theta = 0.0;
    double phi = 0.0;
    struct Weight {
        int n;
        double q;
        double varphi;
    };
    std::vector<Weight> weights;
};

/// N-photon SU(2) coherent state: all photons in the rotated mode
/// cos(theta/2) a' + e^{i phi} sin(theta/2) b'.
PureState su2_coherent(int n_photons, double theta, double phi, const TwoModeBasis& basis);

/// Rotation operator on Fock space via exact blockwise matrix exponential
/// of the generator.  Unitary and block diagonal in total N.
OperatorMatrix rotation_fock_exp(const Rotation& rot, const TwoModeBasis& basis);

/// Same operator through the Gauss factorization
/// exp(a S-) exp(b Sz) exp(c S+); the S+- factors are nilpotent within each
/// block, so both outer exponentials are exact polynomials.  Undefined at
/// theta = pi; callers near the antipode must use rotation_fock_exp.
OperatorMatrix rotation_fock_gauss(const Rotation& rot, const TwoModeBasis& basis);

PureState apply_rotation(const Rotation& rot, const PureState& state);
DensityMatrix apply_rotation(const Rotation& rot, const DensityMatrix& state);

/// Superposition of aligned SU(2) coherent blocks; perfectly polarized.
PureState polarized_pure_state(const PolarizedPureSpec& spec, const TwoModeBasis& basis);

/// Glauber weights q_N = e^{-r^2} r^{2N} / N! with varphi_N = delta * N,
/// renormalized over N <= nmax.  Feeding these into polarized_pure_state
/// gives the truncated two-mode coherent state.
std::vector<PolarizedPureSpec::Weight> glauber_weights(double r, double delta, int nmax);

}  // namespace qpol

#endif
