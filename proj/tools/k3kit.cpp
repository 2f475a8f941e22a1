#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "k3kit/config.hpp"
#include "k3kit/serialization.hpp"
#include "k3kit/suite.hpp"

using namespace k3kit;
using ser::json;

namespace {

enum ExitCode { kOk = 0, kInvariantFailure = 1, kUsage = 2 };

bool use_mp128() {
    const char* env = std::getenv("K3KIT_PRECISION");
    if (!env) return false;
    std::string v(env);
    if (v == "mp128") return true;
    if (v == "double" || v.empty()) return false;
    throw ParseError("K3KIT_PRECISION must be 'double' or 'mp128'");
}

cx parse_complex_arg(const std::string& s) {
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ParseError("expected a complex value 're' or 're,im', got: " + s);
    }
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error("cannot write " + out_path);
    f << j.dump(2) << "\n";
}

int cmd_check_diophantine(const std::string& p, const std::string& q, bool exact, long long n_max,
                          const std::string& out) {
    int bits = use_mp128() ? 113 : 53;
    auto pair = ser::pair_from_strings(p, q, exact, bits);
    json result;
    result["classification"] = dio::to_string(dio::classify_pair(pair));
    try {
        dio::ExponentReport rep = bits > 53 ? dio::approximation_exponent<quad>(pair, n_max)
                                            : dio::approximation_exponent<double>(pair, n_max);
        result["alpha_hat"] = rep.alpha_hat;
        result["A_hat"] = rep.A_hat;
        if (out == "csv") {
            std::cout << "n,delta\n";
            for (const auto& [n, d] : rep.delta) std::cout << n << "," << d << "\n";
            return kOk;
        }
        json table = json::array();
        for (const auto& [n, d] : rep.delta) table.push_back({n, d});
        result["table"] = table;
    } catch (const TorsionHit& hit) {
        result["classification"] = "torsion";
        result["torsion_level"] = hit.level;
    }
    std::cout << result.dump(2) << "\n";
    return kOk;
}

int cmd_cohomology_solve(const std::string& input, double ell, double floor,
                         const std::string& out) {
    std::ifstream in(input);
    if (!in) throw ParseError("cannot open " + input);
    json spec = json::parse(in);
    cx tau = ser::complex_from_json(spec.at("tau"), "tau");
    auto pair = ser::pair_from_strings(spec.at("p").get<std::string>(),
                                       spec.at("q").get<std::string>(), spec.value("exact", false));
    std::vector<cohom::TorusFourierSection> modes;
    long long expected_n = 1;
    for (const auto& m : spec.at("modes")) {
        long long n = m.at("n").get<long long>();
        if (n != expected_n++) throw ParseError("modes must be listed as n = 1,2,...");
        cohom::TorusFourierSection f;
        f.character = cohom::FlatCharacter::for_mode(pair, n);
        for (const auto& c : m.at("coeffs"))
            f.coeffs[{c[0].get<int>(), c[1].get<int>()}] = cx(c[2].get<double>(), c[3].get<double>());
        modes.push_back(std::move(f));
    }
    auto rep = cohom::solve_vertical_series(tau, pair, modes, ell, floor);
    json rows = json::array();
    for (const auto& r : rep.modes)
        rows.push_back({{"n", r.n},
                        {"denominator", r.denominator},
                        {"g_norm", r.g_norm},
                        {"bound", r.bound}});
    emit(json{{"K_hat", rep.K_hat},
              {"alpha_hat", rep.alpha_hat},
              {"M", rep.M},
              {"ell", rep.ell},
              {"certified_radius", rep.certified_radius},
              {"largest_neglected_inv_kappa", rep.largest_neglected_inv_kappa},
              {"modes", rows}},
         out);
    return kOk;
}

int cmd_leaf(const cfg::ToolConfig& config, double w0_re, double w0_im, long long samples,
             std::uint64_t seed, const std::string& out) {
    auto pts = glue::trace_leaf(config.gluing, cx(w0_re, w0_im), samples, seed);
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    f << "x1,x2,x3\n";
    f.precision(17);
    for (const auto& p : pts) f << p[0] << "," << p[1] << "," << p[2] << "\n";
    std::cout << json{{"samples", pts.size()},
                      {"discrepancy", glue::discrepancy(pts)},
                      {"out", out}}
                     .dump(2)
              << "\n";
    return kOk;
}

int cmd_ampleness_audit(const cfg::ToolConfig& config, long long samples,
                        const std::string& out) {
    auto audit = ample::audit_positivity(config.gluing, config.weights,
                                         ample::DefaultSectionWeight{config.weights.b_over}, samples, config.seed);
    emit(json{{"samples", audit.samples},
              {"min_eigenvalue", audit.min_eig},
              {"min_eigenvalue_inner", audit.min_eig_inner},
              {"min_eigenvalue_mid", audit.min_eig_mid},
              {"min_eigenvalue_blend", audit.min_eig_blend},
              {"branch_counts", {{"L", audit.n_L}, {"C", audit.n_C}, {"blend", audit.n_blend}}},
              {"positive", audit.min_eig > 0}},
         out);
    return audit.min_eig > 0 ? kOk : kInvariantFailure;
}

int cmd_chern(const cfg::ToolConfig& config, const std::string& lplus, const std::string& lminus) {
    auto Lp = ser::surface_class_from_csv(lplus, lat::Side::plus);
    auto Lm = ser::surface_class_from_csv(lminus, lat::Side::minus);
    auto c1 = chern::chern_class(Lp, Lm);
    json result{{"degree_plus", lat::degree_on_C(Lp)},
                {"degree_minus", lat::degree_on_C(Lm)},
                {"n9_plus", Lp.q[9]},
                {"n9_minus", Lm.q[9]},
                {"c1", ser::to_json(c1)},
                {"self_intersection", lat::intersect_marked(c1, c1)}};
    auto sym = chern::verify_sigma_orthogonality_symbolic(config.geometry, Lp, Lm,
                                                          config.tolerances.residual);
    result["symbolic_residual"] = ser::to_json(sym);
    geo::GeometryParams g = config.geometry;
    if (g.x && g.y) {
        result["numeric_residual"] =
            std::abs(chern::verify_sigma_orthogonality(g, Lp, Lm, config.tolerances.residual));
    }
    std::cout << result.dump(2) << "\n";
    return sym.is_zero() ? kOk : kInvariantFailure;
}

int cmd_picard(const cfg::ToolConfig& config) {
    auto Lp = lat::SurfaceClass::H(lat::Side::plus);
    auto Lm = lat::SurfaceClass::H(lat::Side::minus);
    auto sigma = chern::substitute_xifix_and_torrelation(
        chern::sigma_vector(config.geometry, config.tolerances.residual), Lp, Lm);
    auto declared = config.independent_symbols ? *config.independent_symbols
                                               : chern::default_independent_symbols();
    auto pic = chern::generic_picard_lattice(sigma, declared);
    json basis = json::array();
    for (const auto& v : pic.basis) basis.push_back(ser::to_json(v));
    std::cout << json{{"rank", pic.rank},
                      {"basis", basis},
                      {"contains_c1", chern::lattice_contains(pic, chern::chern_class(Lp, Lm))}}
                     .dump(2)
              << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale toolkit for the glued projective K3 construction"};
    app.require_subcommand(1);

    // check-diophantine
    auto* cd = app.add_subcommand("check-diophantine", "classify a pair and estimate exponents");
    std::string cd_p, cd_q, cd_out = "json";
    bool cd_exact = false;
    long long cd_nmax = 1000;
    cd->add_option("--p", cd_p)->required();
    cd->add_option("--q", cd_q)->required();
    cd->add_flag("--exact", cd_exact);
    cd->add_option("--n-max", cd_nmax)->required();
    cd->add_option("--out", cd_out)->check(CLI::IsMember({"json", "csv"}));

    // lattice verify
    auto* latcmd = app.add_subcommand("lattice", "marked K3 lattice checks");
    auto* latverify = latcmd->add_subcommand("verify", "Gram matrix, determinant, signature");
    std::string lat_out = "json";
    latverify->add_option("--out", lat_out)->check(CLI::IsMember({"json"}));

    // theta intersections
    auto* thetacmd = app.add_subcommand("theta", "theta line bundle computations");
    auto* sect = thetacmd->add_subcommand("intersections", "closed form vs cycle integration");
    std::string th_tau = "0,1", th_out = "json";
    double th_a = 0, th_b_re = 0, th_b_im = 0, th_p = 0, th_q = 0;
    int th_grid = 16;
    sect->add_option("--tau", th_tau, "complex, 're,im'");
    sect->add_option("--a", th_a)->required();
    sect->add_option("--b-re", th_b_re);
    sect->add_option("--b-im", th_b_im);
    sect->add_option("--p", th_p)->required();
    sect->add_option("--q", th_q)->required();
    sect->add_option("--grid", th_grid);
    sect->add_option("--out", th_out)->check(CLI::IsMember({"json"}));

    // cohomology solve
    auto* coh = app.add_subcommand("cohomology", "twisted dbar solver");
    auto* solve = coh->add_subcommand("solve", "solve the vertical modes of a series");
    std::string coh_input, coh_out;
    double coh_ell = 0.5, coh_floor = 1e-14;
    solve->add_option("--input", coh_input)->required();
    solve->add_option("--ell", coh_ell)->required();
    solve->add_option("--floor", coh_floor);
    solve->add_option("--out", coh_out)->required();

    // glue check
    auto* gluecmd = app.add_subcommand("glue", "gluing chart checks");
    auto* gluecheck = gluecmd->add_subcommand("check", "run the gluing invariant suite");
    std::string glue_cfg;
    gluecheck->add_option("--config", glue_cfg)->required();

    // leaf
    auto* leaf = app.add_subcommand("leaf", "trace a Levi-flat leaf into the 3-torus");
    std::string leaf_cfg, leaf_out = "trace.csv";
    double leaf_w0re = 0.3, leaf_w0im = 0;
    long long leaf_samples = 1000;
    std::uint64_t leaf_seed = 1;
    bool leaf_seed_set = false;
    leaf->add_option("--config", leaf_cfg)->required();
    leaf->add_option("--w0-re", leaf_w0re)->required();
    leaf->add_option("--w0-im", leaf_w0im);
    leaf->add_option("--samples", leaf_samples)->required();
    leaf->add_option("--seed", leaf_seed)->each([&](const std::string&) { leaf_seed_set = true; });
    leaf->add_option("--out", leaf_out);

    // ampleness audit
    auto* ampcmd = app.add_subcommand("ampleness", "weight positivity audits");
    auto* audit = ampcmd->add_subcommand("audit", "sampled curvature positivity");
    std::string amp_cfg, amp_out;
    long long amp_samples = 2000;
    audit->add_option("--config", amp_cfg)->required();
    audit->add_option("--samples", amp_samples);
    audit->add_option("--out", amp_out)->required();

    // chern
    auto* chcmd = app.add_subcommand("chern", "Chern class of a glued bundle");
    std::string ch_cfg, ch_lp, ch_lm, ch_out = "json";
    chcmd->add_option("--config", ch_cfg)->required();
    chcmd->add_option("--lplus", ch_lp, "10 comma-separated integers (H,E1..E9)")->required();
    chcmd->add_option("--lminus", ch_lm)->required();
    chcmd->add_option("--out", ch_out)->check(CLI::IsMember({"json"}));

    // picard
    auto* pic = app.add_subcommand("picard", "generic Picard lattice by integer kernel");
    std::string pic_cfg, pic_out = "json";
    pic->add_option("--config", pic_cfg)->required();
    pic->add_option("--out", pic_out)->check(CLI::IsMember({"json"}));

    // suite
    auto* suitecmd = app.add_subcommand("suite", "run per-module invariant suites");
    std::string suite_cfg, suite_name = "all";
    bool no_timings = false;
    suitecmd->add_option("--config", suite_cfg)->required();
    suitecmd->add_option("--suite", suite_name)
        ->check(CLI::IsMember({"lattice", "theta", "cohomology", "gluing", "ampleness", "chern", "all"}));
    suitecmd->add_flag("--no-timings", no_timings, "omit timings for byte-stable reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*cd) return cmd_check_diophantine(cd_p, cd_q, cd_exact, cd_nmax, cd_out);
        if (*latverify) {
            std::cout << suite::lattice_verify_json().dump(2) << "\n";
            return kOk;
        }
        if (*sect) {
            cx tau = parse_complex_arg(th_tau);
            theta::ToroidalLattice tl(tau, dio::DiophantinePair::decimal(quad(th_p), quad(th_q)));
            theta::HermitianData H{th_a, cx(th_b_re, th_b_im), 0.0};
            auto closed = theta::intersection_numbers(H, tl);
            json result{{"closed_form", {closed.I_ab, closed.I_bg, closed.I_ga}},
                        {"integrated",
                         {theta::integrate_chern_cycle(H, tl, theta::Cycle::ab, 0.5, th_grid),
                          theta::integrate_chern_cycle(H, tl, theta::Cycle::bg, 0.5, th_grid),
                          theta::integrate_chern_cycle(H, tl, theta::Cycle::ga, 0.5, th_grid)}},
                        {"integrality", theta::integrality_check(H, tl).ok},
                        {"extendable", theta::is_extendable(H, tl)}};
            std::cout << result.dump(2) << "\n";
            return kOk;
        }
        if (*solve) return cmd_cohomology_solve(coh_input, coh_ell, coh_floor, coh_out);
        if (*gluecheck) {
            auto config = cfg::load_config(glue_cfg);
            auto rep = suite::run_suite(config, "gluing");
            std::cout << suite::to_json(rep, true).dump(2) << "\n";
            return rep.all_pass ? kOk : kInvariantFailure;
        }
        if (*leaf) {
            auto config = cfg::load_config(leaf_cfg);
            return cmd_leaf(config, leaf_w0re, leaf_w0im, leaf_samples,
                            leaf_seed_set ? leaf_seed : config.seed, leaf_out);
        }
        if (*audit) return cmd_ampleness_audit(cfg::load_config(amp_cfg), amp_samples, amp_out);
        if (*chcmd) return cmd_chern(cfg::load_config(ch_cfg), ch_lp, ch_lm);
        if (*pic) return cmd_picard(cfg::load_config(pic_cfg));
        if (*suitecmd) {
            auto config = cfg::load_config(suite_cfg);
            auto rep = suite::run_suite(config, suite_name);
            std::cout << suite::to_json(rep, !no_timings).dump(2) << "\n";
            return rep.all_pass ? kOk : kInvariantFailure;
        }
    } catch (const ValidationError& e) {
        json out{{"error", "validation"}, {"violations", e.violations}};
        std::cerr << out.dump(2) << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << json{{"error", "parse"}, {"message", e.what()}}.dump(2) << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << json{{"error", "domain"}, {"message", e.what()}}.dump(2) << "\n";
        return kInvariantFailure;
    }
    return kUsage;
}
