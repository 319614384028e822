#include "qpol/statefile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "qpol/su2.hpp"

namespace qpol {

namespace {

// Hand-written files carry rounded decimals; accept small drift here and let
// the constructors renormalize, after which the tight invariants hold.
const Tolerances kParseTolerances{1e-9, 1e-6, 1e-10};

int read_int(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw ValidationError(std::string("state file: missing integer field '") + key + "'");
    }
    return j.at(key).get<int>();
}

double read_double(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ValidationError(std::string("state file: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

PureState parse_pure(const nlohmann::json& j, const TwoModeBasis& basis) {
    if (!j.contains("amplitudes") || !j.at("amplitudes").is_array()) {
        throw ValidationError("pure state file needs an 'amplitudes' array");
    }
    Vector v = Vector::Zero(basis.dimension());
    std::set<int> seen;
    for (const auto& entry : j.at("amplitudes")) {
        const int idx = basis.index(read_int(entry, "m"), read_int(entry, "n"));
        if (!seen.insert(idx).second) {
            throw ValidationError("duplicate amplitude entry in state file");
        }
        v[idx] = Complex(read_double(entry, "re"), read_double(entry, "im"));
    }
    return PureState(basis, std::move(v));
}

DensityMatrix parse_mixed(const nlohmann::json& j, const TwoModeBasis& basis) {
    if (!j.contains("entries") || !j.at("entries").is_array()) {
        throw ValidationError("mixed state file needs an 'entries' array");
    }
    Matrix rho = Matrix::Zero(basis.dimension(), basis.dimension());
    std::set<std::pair<int, int>> seen;
    for (const auto& entry : j.at("entries")) {
        const auto& row = entry.at("row");
        const auto& col = entry.at("col");
        if (!row.is_array() || row.size() != 2 || !col.is_array() || col.size() != 2) {
            throw ValidationError("matrix entries need row/col pairs [m, n]");
        }
        const int r = basis.index(row[0].get<int>(), row[1].get<int>());
        const int c = basis.index(col[0].get<int>(), col[1].get<int>());
        if (!seen.insert({r, c}).second) {
            throw ValidationError("duplicate matrix entry in state file");
        }
        rho(r, c) = Complex(read_double(entry, "re"), read_double(entry, "im"));
    }
    return DensityMatrix(basis, std::move(rho), kParseTolerances);
}

}  // namespace

DensityMatrix LoadedState::as_density() const {
    if (is_pure()) return DensityMatrix::from_pure(pure());
    return density();
}

const TwoModeBasis& LoadedState::basis() const {
    return is_pure() ? pure().basis() : density().basis();
}

LoadedState parse_state_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("state file must be a JSON object");
    }
    const TwoModeBasis basis(read_int(j, "nmax"));
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw ValidationError("state file: missing string field 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pure") {
        return {parse_pure(j, basis), kind};
    }
    if (kind == "mixed") {
        return {parse_mixed(j, basis), kind};
    }
    if (kind == "su2-coherent") {
        return {su2_coherent(read_int(j, "n"), read_double(j, "theta"), read_double(j, "phi"), basis),
                kind};
    }
    if (kind == "perfect-spec") {
        PolarizedPureSpec spec;
        spec.theta = read_double(j, "theta");
        spec.phi = read_double(j, "phi");
        if (!j.contains("weights") || !j.at("weights").is_array()) {
            throw ValidationError("perfect-spec file needs a 'weights' array");
        }
        for (const auto& w : j.at("weights")) {
            spec.weights.push_back(
                {read_int(w, "n"), read_double(w, "q"),
                 w.contains("varphi") ? read_double(w, "varphi") : 0.0});
        }
        return {polarized_pure_state(spec, basis), kind};
    }
    throw ValidationError("unknown state kind '" + kind + "'");
}

LoadedState load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open state file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("cannot parse '" + path + "': " + e.what());
    }
    return parse_state_json(j);
}

nlohmann::ordered_json state_to_json(const PureState& state) {
    nlohmann::ordered_json j;
    j["nmax"] = state.basis().nmax();
    j["kind"] = "pure";
    auto& amps = j["amplitudes"] = nlohmann::ordered_json::array();
    for (int i = 0; i < state.basis().dimension(); ++i) {
        const Complex c = state.amplitudes()[i];
        if (std::abs(c) <= 1e-16) continue;
        const auto [m, n] = state.basis().mode_counts(i);
        amps.push_back({{"m", m}, {"n", n}, {"re", c.real()}, {"im", c.imag()}});
    }
    return j;
}

nlohmann::ordered_json state_to_json(const DensityMatrix& state) {
    nlohmann::ordered_json j;
    j["nmax"] = state.basis().nmax();
    j["kind"] = "mixed";
    auto& entries = j["entries"] = nlohmann::ordered_json::array();
    const int dim = state.basis().dimension();
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const Complex v = state.matrix()(r, c);
            if (std::abs(v) <= 1e-16) continue;
            const auto [rm, rn] = state.basis().mode_counts(r);
            const auto [cm, cn] = state.basis().mode_counts(c);
            entries.push_back({{"row", {rm, rn}},
                               {"col", {cm, cn}},
                               {"re", v.real()},
                               {"im", v.imag()}});
        }
    }
    return j;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void render_value(const nlohmann::ordered_json& j, std::string& out, int indent, int depth) {
    const std::string pad(size_t(indent) * depth, ' ');
    const std::string pad_in(size_t(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t k = 0;
            for (const auto& [key, value] : j.items()) {
                out += pad_in + nlohmann::ordered_json(key).dump() + ": ";
                render_value(value, out, indent, depth + 1);
                out += (++k < j.size()) ? ",\n" : "\n";
            }
            out += pad + "}";
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t k = 0; k < j.size(); ++k) {
                out += pad_in;
                render_value(j[k], out, indent, depth + 1);
                out += (k + 1 < j.size()) ? ",\n" : "\n";
            }
            out += pad + "]";
            return;
        }
        case nlohmann::ordered_json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string render_json(const nlohmann::ordered_json& j, int indent) {
    std::string out;
    render_value(j, out, indent, 0);
    out += "\n";
    return out;
}

}  // namespace qpol
