#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpol/fock.hpp"
#include "qpol/majorana.hpp"
#include "qpol/polarization.hpp"
#include "qpol/statefile.hpp"
#include "qpol/su2.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qpol;

void render_text(const ordered_json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            render_text(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) {
            render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else if (j.is_number_float()) {
        out += prefix + " = " + format_double(j.get<double>()) + "\n";
    } else if (j.is_string()) {
        out += prefix + " = " + j.get<std::string>() + "\n";
    } else {
        out += prefix + " = " + j.dump() + "\n";
    }
}

void emit(const ordered_json& report, const std::string& format) {
    if (format == "json") {
        std::cout << render_json(report);
    } else {
        std::string out;
        render_text(report, "", out);
        std::cout << out;
    }
}

ordered_json degree_field(const std::optional<double>& p) {
    if (p) return *p;
    return "undefined";
}

ordered_json stokes_report(const StokesVector& s) {
    ordered_json j;
    j["s0"] = s.s0;
    j["s1"] = s.vector[0];
    j["s2"] = s.vector[1];
    j["s3"] = s.vector[2];
    j["p"] = degree_field(s.degree());
    return j;
}

StokesVector stokes_of(const LoadedState& loaded) {
    return loaded.is_pure() ? stokes_vector(loaded.pure()) : stokes_vector(loaded.density());
}

ordered_json star_list(const Constellation& c) {
    ordered_json stars = ordered_json::array();
    for (const Star& star : c.points) {
        const Eigen::Vector3d v = star.unit_vector();
        stars.push_back({{"theta", star.theta},
                         {"phi", star.phi},
                         {"x", v[0]},
                         {"y", v[1]},
                         {"z", v[2]}});
    }
    return stars;
}

PureState block_of(const LoadedState& loaded, std::optional<int> block) {
    if (!loaded.is_pure()) {
        throw ValidationError("this command expects a pure state input");
    }
    const PureState& psi = loaded.pure();
    if (block) return psi.block_state(*block);
    return psi.block_state(single_block_photon_number(psi));
}

int cmd_stokes(const std::string& input, const std::string& format) {
    ordered_json report;
    report["command"] = "stokes";
    report.update(stokes_report(stokes_of(load_state_file(input))));
    emit(report, format);
    return 0;
}

int cmd_classify(const std::string& input, double tol, const std::string& format) {
    const LoadedState loaded = load_state_file(input);
    const ClassificationReport r = loaded.is_pure() ? classify_perfect(loaded.pure(), tol)
                                                    : classify_perfect(loaded.density(), tol);
    ordered_json report;
    report["command"] = "classify";
    report["p"] = degree_field(r.p);
    report["is_perfect"] = r.is_perfect;
    report["table_row"] = to_string(r.table_row);
    if (r.aligned_direction) {
        report["aligned_theta"] = r.aligned_direction->first;
        report["aligned_phi"] = r.aligned_direction->second;
        report["residual_b_occupation"] = r.residual_b_occupation;
    }
    emit(report, format);
    return 0;
}

int cmd_decompose(const std::string& input, const std::string& strategy_name,
                  std::optional<int> fixed_n, const std::string& output,
                  const std::string& format) {
    DecompositionStrategy strategy;
    if (strategy_name == "fixed-n") {
        strategy = DecompositionStrategy::fixed_n;
    } else if (strategy_name == "bracketed") {
        strategy = DecompositionStrategy::bracketed;
    } else if (strategy_name == "glauber") {
        strategy = DecompositionStrategy::glauber;
    } else {
        throw ValidationError("unknown strategy '" + strategy_name + "'");
    }
    const LoadedState loaded = load_state_file(input);
    const DecompositionResult r = decompose(loaded.as_density(), strategy, fixed_n);
    ordered_json report;
    report["command"] = "decompose";
    report["p"] = r.p;
    report["strategy"] = to_string(r.strategy);
    report["physical"] = r.physical;
    report["min_eigenvalue_unpolarized"] = r.min_eigenvalue_unpolarized;
    if (strategy == DecompositionStrategy::glauber) report["glauber_r"] = r.glauber_r;
    if (!output.empty()) {
        if (r.polarized) {
            const std::string path = output + ".polarized.json";
            std::ofstream(path) << render_json(state_to_json(*r.polarized));
            report["polarized_file"] = path;
        }
        if (r.unpolarized) {
            const std::string path = output + ".unpolarized.json";
            std::ofstream(path) << render_json(state_to_json(*r.unpolarized));
            report["unpolarized_file"] = path;
        }
    }
    emit(report, format);
    return 0;
}

int cmd_constellation(const std::string& input, std::optional<int> block, int frames,
                      double theta, double phi, const std::string& format) {
    const LoadedState loaded = load_state_file(input);
    const PureState psi = block_of(loaded, block);
    const Constellation c = state_to_constellation(psi);
    ordered_json report;
    report["command"] = "constellation";
    report["n_photons"] = c.n_photons;
    report["radius"] = c.n_photons;
    report["stars"] = star_list(c);
    if (frames > 0) {
        auto& frame_list = report["frames"] = ordered_json::array();
        for (int k = 0; k <= frames; ++k) {
            const double fraction = double(k) / frames;
            const PureState rotated = apply_rotation(Rotation(theta * fraction, phi), psi);
            frame_list.push_back({{"step", k},
                                  {"fraction", fraction},
                                  {"stars", star_list(state_to_constellation(rotated))}});
        }
    }
    emit(report, format);
    return 0;
}

int cmd_fidelity(const std::string& input, std::optional<int> block, const std::string& format) {
    const LoadedState loaded = load_state_file(input);
    const PureState psi = block_of(loaded, block);
    const FidelityResult r = max_fidelity_su2(psi);
    const int n = single_block_photon_number(psi);
    ordered_json report;
    report["command"] = "fidelity";
    report["n_photons"] = n;
    report["fidelity"] = r.fidelity;
    report["theta"] = r.theta;
    report["phi"] = r.phi;
    report["lower_bound"] = 1.0 / std::sqrt(n + 1.0);
    report["gradient_norm"] = r.gradient_norm;
    report["iterations"] = r.iterations;
    emit(report, format);
    return 0;
}

int cmd_rotate(const std::string& input, double theta, double phi, const std::string& output,
               const std::string& format) {
    const LoadedState loaded = load_state_file(input);
    const Rotation rot(theta, phi);
    ordered_json report;
    report["command"] = "rotate";
    report["theta"] = theta;
    report["phi"] = phi;
    report["stokes_before"] = stokes_report(stokes_of(loaded));
    ordered_json state_json;
    if (loaded.is_pure()) {
        const PureState rotated = apply_rotation(rot, loaded.pure());
        report["stokes_after"] = stokes_report(stokes_vector(rotated));
        state_json = state_to_json(rotated);
    } else {
        const DensityMatrix rotated = apply_rotation(rot, loaded.density());
        report["stokes_after"] = stokes_report(stokes_vector(rotated));
        state_json = state_to_json(rotated);
    }
    if (!output.empty()) {
        std::ofstream(output) << render_json(state_json);
        report["output_file"] = output;
    } else {
        report["state"] = state_json;
    }
    emit(report, format);
    return 0;
}

int cmd_appendix_b(int n, const std::string& format) {
    if (n <= 1) {
        throw ValidationError("the demonstration needs more than one photon");
    }
    const TwoModeBasis basis(n);
    Vector v = Vector::Zero(basis.dimension());
    v[basis.index(0, n)] = 1.0 / std::sqrt(2.0);
    v[basis.index(n - 1, 1)] = 1.0 / std::sqrt(2.0);
    const PureState psi(basis, std::move(v));

    // The candidate polarized state is aligned with +S1; the computed
    // Stokes vector of the input points the other way, which the report
    // surfaces instead of silently flipping either sign.
    FeasibilityOptions options;
    options.direction = {{0.0, 0.0}};
    const FeasibilityReport r = pure_decomposition_feasibility(psi, options);

    ordered_json report;
    report["command"] = "appendix-b";
    report["n"] = n;
    report["state"] = "(|0," + std::to_string(n) + "> + |" + std::to_string(n - 1) + ",1>)/sqrt(2)";
    report["stokes"] = stokes_report(r.stokes);
    report["candidate_theta"] = r.direction_theta;
    report["candidate_phi"] = r.direction_phi;
    report["overlap_real"] = {r.overlap_real[0], r.overlap_real[1], r.overlap_real[2]};
    report["overlap_imag"] = {r.overlap_imag[0], r.overlap_imag[1], r.overlap_imag[2]};
    report["triple_product"] = r.triple_product;
    report["normalized_triple_product"] = r.normalized_triple_product;
    report["min_stokes_norm"] = r.min_stokes_norm;
    report["alpha_at_min"] = r.alpha_at_min;
    report["beta_at_min"] = r.beta_at_min;
    report["feasible"] = r.feasible;
    auto& notes = report["notes"] = ordered_json::array();
    if (r.stokes.vector[0] < 0.0) {
        notes.push_back("the computed Stokes vector points along -S1; the candidate direction is +S1");
    }
    if (std::abs(r.stokes.vector[1]) > 1e-9) {
        notes.push_back("the Stokes vector has a nonzero S2 component, so it is not aligned with the S1 axis");
    }
    emit(report, format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode quantum polarization analysis"};
    app.require_subcommand(1);

    std::string input, output, format = "text", strategy = "bracketed";
    double tol = 1e-9, theta = 0.0, phi = 0.0;
    int appendix_n = 3, frames = 0;
    std::optional<int> fixed_n, block;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("--input", input, "state file (JSON)")->required();
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* stokes_cmd = app.add_subcommand("stokes", "Stokes parameters and degree of polarization");
    add_common(stokes_cmd, true);

    auto* classify_cmd = app.add_subcommand("classify", "perfect-polarization classification");
    add_common(classify_cmd, true);
    classify_cmd->add_option("--tol", tol, "perfectness tolerance");

    auto* decompose_cmd =
        app.add_subcommand("decompose", "split into perfectly polarized and unpolarized parts");
    add_common(decompose_cmd, true);
    decompose_cmd->add_option("--strategy", strategy, "fixed-n|bracketed|glauber")
        ->check(CLI::IsMember({"fixed-n", "bracketed", "glauber"}));
    decompose_cmd->add_option("--fixed-n", fixed_n, "photon number for the fixed-n strategy");
    decompose_cmd->add_option("--output", output, "prefix for the two component state files");

    auto* constellation_cmd = app.add_subcommand("constellation", "Majorana stars of a block");
    add_common(constellation_cmd, true);
    constellation_cmd->add_option("--block", block, "photon-number block (default: single block)");
    constellation_cmd->add_option("--frames", frames, "emit star sets under a stepped rotation");
    constellation_cmd->add_option("--theta", theta, "rotation polar angle for --frames");
    constellation_cmd->add_option("--phi", phi, "rotation azimuth for --frames");

    auto* fidelity_cmd = app.add_subcommand("fidelity", "closest SU(2) coherent state");
    add_common(fidelity_cmd, true);
    fidelity_cmd->add_option("--block", block, "photon-number block (default: single block)");

    auto* rotate_cmd = app.add_subcommand("rotate", "apply a Poincare-sphere rotation");
    add_common(rotate_cmd, true);
    rotate_cmd->add_option("--theta", theta, "rotation polar angle")->required();
    rotate_cmd->add_option("--phi", phi, "rotation azimuth");
    rotate_cmd->add_option("--output", output, "write the rotated state here");

    auto* appendix_cmd = app.add_subcommand(
        "appendix-b", "feasibility of subtracting an aligned polarized pure state");
    add_common(appendix_cmd, false);
    appendix_cmd->add_option("--n", appendix_n, "photon number of the demonstration state (> 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (stokes_cmd->parsed()) return cmd_stokes(input, format);
        if (classify_cmd->parsed()) return cmd_classify(input, tol, format);
        if (decompose_cmd->parsed()) return cmd_decompose(input, strategy, fixed_n, output, format);
        if (constellation_cmd->parsed())
            return cmd_constellation(input, block, frames, theta, phi, format);
        if (fidelity_cmd->parsed()) return cmd_fidelity(input, block, format);
        if (rotate_cmd->parsed()) return cmd_rotate(input, theta, phi, output, format);
        if (appendix_cmd->parsed()) return cmd_appendix_b(appendix_n, format);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (format == "json") {
            std::cout << render_json({{"error", {{"kind", "validation"}, {"message", e.what()}}}});
        }
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (format == "json") {
            std::cout << render_json({{"error", {{"kind", "numerical"}, {"message", e.what()}}}});
        }
        return 3;
    }
    return 0;
}
