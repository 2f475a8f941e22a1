#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "k3kit/ampleness.hpp"
#include "k3kit/chern.hpp"
#include "k3kit/geometry.hpp"
#include "k3kit/gluing.hpp"
#include "k3kit/serialization.hpp"
#include "k3kit/theta.hpp"

namespace k3kit::cfg {

using ser::json;

enum class Mode { floating, exact };

/// Validated run configuration: geometry draw, gluing scales, weight
/// parameters, tolerance overrides and the RNG seed.
struct ToolConfig {
    geo::GeometryParams geometry;
    glue::GluingConfig gluing;
    ample::WeightParams weights;
    Tolerances tolerances;
    std::uint64_t seed = 1;
    Mode mode = Mode::floating;
    std::optional<theta::HermitianData> theta_override;
    std::optional<std::vector<chern::Symbol>> independent_symbols;
    std::vector<std::string> warnings;
};

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where, std::vector<std::string>& bad) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad.push_back(where + ": unknown key '" + it.key() + "'");
}

inline cx get_complex(const json& j, const std::string& key, std::vector<std::string>& bad,
                      cx fallback = {0, 0}) {
    if (!j.contains(key)) return fallback;
    try {
        return ser::complex_from_json(j.at(key), key);
    } catch (const ParseError& e) {
        bad.push_back(e.what());
        return fallback;
    }
}

} // namespace detail

inline ToolConfig config_from_json(const json& root) {
    std::vector<std::string> bad;
    ToolConfig out;
    detail::require_keys(root,
                         {"geometry", "gluing", "weights", "tolerances", "seed", "mode", "theta"},
                         "config", bad);
    if (root.contains("seed")) out.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("mode")) {
        std::string m = root.at("mode").get<std::string>();
        if (m == "exact") out.mode = Mode::exact;
        else if (m == "float") out.mode = Mode::floating;
        else bad.push_back("mode: expected 'float' or 'exact'");
    }
    if (root.contains("tolerances")) {
        const json& t = root.at("tolerances");
        detail::require_keys(t,
                             {"integrality", "cocycle", "quadrature", "residual", "exact_float",
                              "resonance_floor"},
                             "tolerances", bad);
        auto pick = [&](const char* k, double& dst) {
            if (t.contains(k)) dst = t.at(k).get<double>();
        };
        pick("integrality", out.tolerances.integrality);
        pick("cocycle", out.tolerances.cocycle);
        pick("quadrature", out.tolerances.quadrature);
        pick("residual", out.tolerances.residual);
        pick("exact_float", out.tolerances.exact_float);
        pick("resonance_floor", out.tolerances.resonance_floor);
    }

    if (!root.contains("geometry")) {
        bad.push_back("config: missing 'geometry'");
    } else {
        const json& g = root.at("geometry");
        detail::require_keys(g,
                             {"tau", "p", "q", "exact", "precision_bits", "p0_plus", "p0_minus",
                              "p_plus", "p_minus", "x", "y", "xi", "s", "independent_symbols"},
                             "geometry", bad);
        out.geometry.tau = detail::get_complex(g, "tau", bad, {0, 1});
        if (out.geometry.tau.imag() <= 0) bad.push_back("geometry.tau: Im tau must be positive");
        try {
            bool exact = g.value("exact", false);
            int bits = g.value("precision_bits", 113);
            out.geometry.pair = ser::pair_from_strings(g.value("p", "0"), g.value("q", "0"),
                                                       exact, bits);
        } catch (const ParseError& e) {
            bad.push_back(std::string("geometry: ") + e.what());
        }
        out.geometry.p0_plus = detail::get_complex(g, "p0_plus", bad);
        out.geometry.p0_minus = detail::get_complex(g, "p0_minus", bad);
        for (const char* key : {"p_plus", "p_minus"}) {
            if (!g.contains(key)) { bad.push_back(std::string("geometry: missing ") + key); continue; }
            const json& arr = g.at(key);
            if (!arr.is_array() || arr.size() != 9) {
                bad.push_back(std::string("geometry.") + key + ": need 9 points");
                continue;
            }
            for (int j = 0; j < 9; ++j) {
                cx v = ser::complex_from_json(arr[j], key);
                (std::string(key) == "p_plus" ? out.geometry.p_plus : out.geometry.p_minus)[j] = v;
            }
        }
        if (g.contains("x")) out.geometry.x = detail::get_complex(g, "x", bad);
        if (g.contains("y")) out.geometry.y = detail::get_complex(g, "y", bad);
        if (g.contains("xi")) out.geometry.xi = detail::get_complex(g, "xi", bad);
        if (g.contains("independent_symbols")) {
            std::vector<chern::Symbol> syms;
            for (const auto& name : g.at("independent_symbols")) {
                auto s = chern::symbol_from_name(name.get<std::string>());
                if (!s) bad.push_back("geometry.independent_symbols: unknown symbol " +
                                      name.get<std::string>());
                else syms.push_back(*s);
            }
            out.independent_symbols = std::move(syms);
        }
    }

    if (!root.contains("gluing")) {
        bad.push_back("config: missing 'gluing'");
    } else {
        const json& g = root.at("gluing");
        detail::require_keys(g, {"R", "s", "xi"}, "gluing", bad);
        out.gluing.tau = out.geometry.tau;
        out.gluing.pair = out.geometry.pair;
        out.gluing.R = g.value("R", 2.0);
        out.gluing.s = detail::get_complex(g, "s", bad, {0.01, 0});
        out.gluing.xi = detail::get_complex(g, "xi", bad);
        if (out.gluing.R <= 1) bad.push_back("gluing.R: must exceed 1");
        double as = std::abs(out.gluing.s);
        if (!(as > 0 && as < 1)) bad.push_back("gluing.s: need 0 < |s| < 1");
        out.geometry.s = out.gluing.s;
    }

    if (!root.contains("weights")) {
        bad.push_back("config: missing 'weights'");
    } else {
        const json& w = root.at("weights");
        detail::require_keys(w, {"R1", "R2", "eps", "eps0", "c", "b_over", "eta"}, "weights", bad);
        out.weights.s = out.gluing.s;
        out.weights.R = out.gluing.R;
        out.weights.R1 = w.value("R1", 0.5);
        out.weights.R2 = w.value("R2", 1.0);
        out.weights.eps = w.value("eps", 1e-3);
        out.weights.eps0 = w.value("eps0", 0.05);
        out.weights.c = w.value("c", 0.002);
        out.weights.b_over = w.value("b_over", 3 * pi);
        out.weights.eta = w.value("eta", 0.5);
        try {
            out.weights.validate();
        } catch (const Error& e) {
            bad.push_back(std::string("weights: ") + e.what());
        }
    }

    if (root.contains("theta")) {
        const json& t = root.at("theta");
        detail::require_keys(t, {"a", "b", "c"}, "theta", bad);
        theta::HermitianData H;
        H.a = t.value("a", 0.0);
        H.b = detail::get_complex(t, "b", bad);
        H.c = t.value("c", 0.0);
        out.theta_override = H;
    }

    // torrelation: hard violation in exact mode, warning in float mode
    double tor = std::max(std::abs(out.geometry.torrelation_residual(lat::Side::plus)),
                          std::abs(out.geometry.torrelation_residual(lat::Side::minus)));
    if (tor > out.tolerances.residual) {
        std::string msg = "torrelation: 9 p0 - sum p_j deviates from +-mu by " + std::to_string(tor);
        if (out.mode == Mode::exact || tor > 1e-3) bad.push_back(msg);
        else out.warnings.push_back(msg);
    }

    if (!bad.empty()) throw ValidationError(bad);
    return out;
}

inline ToolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(root);
}

} // namespace k3kit::cfg
