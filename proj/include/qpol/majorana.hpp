#ifndef QPOL_MAJORANA_HPP
#define QPOL_MAJORANA_HPP

#include <Eigen/Dense>
#include <vector>

#include "qpol/fock.hpp"
#include "qpol/su2.hpp"

namespace qpol {

/// One Majorana star on the Poincare sphere.
struct Star {
    double theta;
    double phi;

    Eigen::Vector3d unit_vector() const;
    /// Great-circle angle to another star.
    double angle_to(const Star& other) const;
};

/// The N indistinguishable stars encoding an N-photon pure state.
struct Constellation {
    int n_photons = 0;
    std::vector<Star> points;
};

/// Total photon number of a state supported on a single N block.
/// Throws ValidationError when more than `tol` population lies outside
/// the dominant block.
int single_block_photon_number(const PureState& state, double tol = 1e-10);

/// Expands the creation-operator product over the stars into block-N
/// amplitudes.  Inverse of state_to_constellation up to star permutation
/// and global phase.
PureState constellation_to_state(const Constellation& c, const TwoModeBasis& basis);

/// Stars of a single-block state via companion-matrix roots of the Majorana
/// polynomial.  A degree deficit of d (leading coefficients below
/// 1e-13 * ||c||) contributes d stars at theta = pi.  One Newton polish step
/// is applied per root; `polish_residuals`, when given, receives |Q(root)|
/// after polishing.
Constellation state_to_constellation(const PureState& state,
                                     std::vector<double>* polish_residuals = nullptr);

struct FidelityResult {
    double fidelity = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
};

/// Maximum overlap magnitude between a single-block state and the SU(2)
/// coherent family, with the maximizing direction.  Coarse grid scan
/// (ties broken by smallest theta, then smallest phi) followed by local
/// refinement; the refinement runs in a frame where the seed sits on the
/// equator so the (theta, phi) chart is never degenerate.
FidelityResult max_fidelity_su2(const PureState& state, int grid_theta = 64,
                                int grid_phi = 128);

}  // namespace qpol

#endif
