#pragma once

#include <json.hpp>

#include "k3kit/chern.hpp"
#include "k3kit/diophantine.hpp"
#include "k3kit/lattice.hpp"

namespace k3kit::ser {

using json = nlohmann::json;

// complex numbers serialize as [re, im], rationals as "num/den"

inline json to_json(cx z) { return json::array({z.real(), z.imag()}); }

inline cx complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Rational& r) { return to_string(r); }

/// Parses a pair component: "num/den" when exact, otherwise a decimal
/// string evaluated at quad precision.
inline quad parse_decimal(const std::string& s, const std::string& where) {
    try {
        return quad(s);
    } catch (const std::runtime_error&) {
        throw ParseError(where + ": not a number: " + s);
    }
}

inline dio::DiophantinePair pair_from_strings(const std::string& p, const std::string& q,
                                              bool exact, int precision_bits = 113) {
    if (exact) return dio::DiophantinePair::rational(parse_rational(p), parse_rational(q));
    return dio::DiophantinePair::decimal(parse_decimal(p, "p"), parse_decimal(q, "q"),
                                         precision_bits);
}

inline lat::SurfaceClass surface_class_from_csv(const std::string& csv, lat::Side side) {
    lat::SurfaceClass c;
    c.side = side;
    std::size_t pos = 0;
    for (int i = 0; i < 10; ++i) {
        std::size_t next = csv.find(',', pos);
        std::string tok = csv.substr(pos, next == std::string::npos ? next : next - pos);
        try {
            c.q[i] = std::stoll(tok);
        } catch (const std::exception&) {
            throw ParseError("surface class: bad integer '" + tok + "'");
        }
        if (next == std::string::npos) {
            if (i != 9) throw ParseError("surface class needs 10 comma-separated integers");
            break;
        }
        pos = next + 1;
    }
    return c;
}

inline json to_json(const lat::MarkedClass& m) {
    json a = json::array();
    for (int i = 0; i < 22; ++i) a.push_back(m.v[i]);
    return a;
}

inline json to_json(const chern::SymbolicScalar& s) {
    json o = json::object();
    for (const auto& [sym, c] : s.terms) o[chern::symbol_name(sym)] = to_string(c);
    return o;
}

} // namespace k3kit::ser
