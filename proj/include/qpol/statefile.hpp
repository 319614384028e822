#ifndef QPOL_STATEFILE_HPP
#define QPOL_STATEFILE_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "qpol/fock.hpp"

namespace qpol {

/// A parsed state file: either a pure state or a density matrix, plus the
/// kind tag it was declared with ("pure", "mixed", "su2-coherent",
/// "perfect-spec").
struct LoadedState {
    std::variant<PureState, DensityMatrix> state;
    std::string kind;

    bool is_pure() const { return std::holds_alternative<PureState>(state); }
    const PureState& pure() const { return std::get<PureState>(state); }
    const DensityMatrix& density() const { return std::get<DensityMatrix>(state); }
    /// The density-matrix view (projector for pure states).
    DensityMatrix as_density() const;
    const TwoModeBasis& basis() const;
};

LoadedState parse_state_json(const nlohmann::json& j);
LoadedState load_state_file(const std::string& path);

nlohmann::ordered_json state_to_json(const PureState& state);
nlohmann::ordered_json state_to_json(const DensityMatrix& state);

/// Serialize with float formatting pinned to 17 significant digits, so that
/// identical values always render to identical bytes.
std::string render_json(const nlohmann::ordered_json& j, int indent = 2);

/// The pinned number format used everywhere output must be reproducible.
std::string format_double(double x);

}  // namespace qpol

#endif
