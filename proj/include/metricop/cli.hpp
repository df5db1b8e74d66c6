#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "metricop/demos.hpp"
#include "metricop/report.hpp"

namespace metricop {

struct RunResult {
    int exit_code = 0;
    Json report;
    std::filesystem::path report_path;
};

namespace cli_detail {

struct HandlerOutput {
    Json results;
    Json tolerances;
    int failed = 0;
    std::vector<std::pair<std::string, std::string>> extra_files; // name -> content
};

inline const Json& require_object(const Json& j, const char* what) {
    if (!j.is_object()) throw ParseError(std::string("scenario: ") + what + " must be an object");
    return j;
}

inline Grid grid_from(const Json& scenario, double def_half_width = 10.0, int def_points = 401) {
    double half_width = def_half_width;
    int points = def_points;
    if (scenario.contains("grid")) {
        const Json& g = require_object(scenario.at("grid"), "grid");
        half_width = g.value("half_width", def_half_width);
        points = g.value("points", def_points);
    }
    if (!(half_width > 0.0)) throw ParseError("scenario: grid.half_width must be positive");
    if (points < 3) throw ParseError("scenario: grid.points must be at least 3");
    return Grid::uniform(half_width, points);
}

inline RefinementFamily family_from(const Json& scenario) {
    const int levels = scenario.value("levels", 3);
    if (levels < 3) throw ParseError("scenario: levels must be at least 3");
    if (scenario.contains("family")) {
        const Json& f = require_object(scenario.at("family"), "family");
        const double half_width = f.value("half_width", 10.0);
        const double dl = f.value("dl", 4.0);
        const int points = f.value("points", 101);
        if (!(half_width > 0.0) || points < 3)
            throw ParseError("scenario: family parameters out of range");
        if (dl == 0.0) return RefinementFamily::halving(half_width, points, levels);
        return RefinementFamily::growing(half_width, dl, points, levels);
    }
    if (levels == 3) return RefinementFamily::desk_default();
    return RefinementFamily::growing(10.0, 4.0, 401, levels);
}

inline double positive_tol(const Json& scenario, const char* key, double fallback) {
    const double tol = scenario.value(key, fallback);
    if (!(tol > 0.0)) throw ParseError(std::string("scenario: ") + key + " must be positive");
    return tol;
}

inline Json recipe_params(const Json& scenario) {
    if (!scenario.contains("params")) return Json::object();
    return require_object(scenario.at("params"), "params");
}

inline ComplexMatrix matrix_param(const Json& scenario, const char* key) {
    try {
        return matrix_from_json(scenario.at(key));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("scenario: bad matrix under '") + key + "': " + e.what());
    }
}

inline HandlerOutput handle_lattice(const Json& scenario) {
    const std::string recipe = scenario.value("recipe", "x2");
    MetricRecipe make = named_metric_recipe(recipe, recipe_params(scenario));
    Grid grid = grid_from(scenario);
    SpaceLattice lat = seven_lattice(make(grid), scenario.value("extremes", false));
    HandlerOutput out;
    out.results = Json{{"recipe", recipe}, {"lattice", lattice_to_json(lat)}};
    out.tolerances = Json::object();
    return out;
}

inline HandlerOutput handle_scale(const Json& scenario) {
    const std::string recipe = scenario.value("recipe", "x2");
    const std::string xi_name = scenario.value("xi", "gaussian");
    Json params = recipe_params(scenario);
    MetricRecipe base = named_metric_recipe(recipe, params);
    VectorRecipe xi = named_vector_recipe(xi_name, params);
    std::vector<double> alphas = scenario.contains("alpha_grid")
                                     ? scenario.at("alpha_grid").get<std::vector<double>>()
                                     : default_alpha_grid();
    Grid grid = grid_from(scenario);
    RefinementFamily family = family_from(scenario);

    ScaleFamily fam = build_scale(base(grid), alphas);
    GrowthTable table = end_space_diagnostic(family, base, alphas, xi);

    HandlerOutput out;
    out.results = Json{{"recipe", recipe},
                       {"xi", xi_name},
                       {"scale", scale_to_json(fam)},
                       {"growth", growth_table_to_json(table)}};
    out.tolerances = Json::object();
    out.extra_files.emplace_back("scale_growth.csv", growth_table_to_csv(table));
    return out;
}

inline HandlerOutput handle_spectrum(const Json& scenario) {
    HandlerOutput out;
    SpectrumReport rep;
    std::string source;
    if (scenario.contains("matrix")) {
        rep = SpectrumReport::from_matrix(matrix_param(scenario, "matrix"));
        source = "inline";
    } else {
        const std::string recipe = scenario.value("recipe", "derivative");
        Json params = recipe_params(scenario);
        Grid grid = grid_from(scenario);
        ComplexMatrix m;
        try {
            m = named_operator_recipe(recipe, params)(grid);
        } catch (const UnknownRecipe&) {
            m = named_metric_recipe(recipe, params)(grid).matrix();
        }
        rep = SpectrumReport::from_matrix(m);
        source = recipe;
    }
    out.results = Json{{"source", source}, {"spectrum", spectrum_to_json(rep)}};
    out.tolerances = Json{{"cluster_tol", rep.cluster_tol}};
    out.extra_files.emplace_back("spectrum.csv", spectrum_to_csv(rep));
    return out;
}

inline HandlerOutput similarity_projector(const Json& scenario) {
    Grid grid = grid_from(scenario);
    const double tol_resolvent = positive_tol(scenario, "tol", 1e-10);
    const double tol_cluster = 1e-8;
    ProjectorPair pair = projector_pair(grid, normalized_gaussian(grid));
    IntertwiningCase c = make_case(pair.p, pair.a, pair.t);
    SimilarityVerdict verdict = classify(c);
    SpectrumReport spec_a = SpectrumReport::from_matrix(pair.a);

    // Paper spectrum shape: one eigenvalue at 1, the rest pinned at 0.
    Eigen::Index near_one = 0, near_zero = 0;
    for (const EigenCluster& cl : spec_a.clusters) {
        if (std::abs(cl.value - Complex(1.0, 0.0)) <= tol_cluster) near_one += cl.multiplicity;
        if (std::abs(cl.value) <= tol_cluster) near_zero += cl.multiplicity;
    }
    const bool cluster_pass = near_one == 1 && near_zero == grid.points - 1;

    // Resolvent of A at lambda against the rank-one closed form.
    const double lambda = scenario.value("lambda", 2.0);
    ComplexVector gvec = normalized_gaussian(grid);
    for (int j = 0; j < grid.points; ++j)
        gvec(j) *= (1.0 + 0.25 * std::sin(3.0 * grid.nodes(j))); // deterministic, not an eigenvector
    ComplexVector qphi(grid.points);
    for (int j = 0; j < grid.points; ++j)
        qphi(j) = (1.0 + grid.nodes(j) * grid.nodes(j)) * pair.phi(j);
    ComplexMatrix shifted = pair.a - lambda * ComplexMatrix::Identity(grid.points, grid.points);
    ComplexVector solved = Eigen::PartialPivLU<ComplexMatrix>(shifted).solve(gvec);
    Complex coeff = weighted_inner(grid, gvec, qphi);
    ComplexVector closed = -gvec / lambda;
    for (int j = 0; j < grid.points; ++j)
        closed(j) += coeff / (lambda * (1.0 - lambda)) * pair.phi(j) /
                     (1.0 + grid.nodes(j) * grid.nodes(j));
    const double resolvent_residual = (solved - closed).norm() / std::max(closed.norm(), 1e-300);
    const bool resolvent_pass = resolvent_residual <= tol_resolvent;

    HandlerOutput out;
    out.results = Json{{"recipe", "projector_pair"},
                       {"verdict", verdict_to_json(verdict)},
                       {"intertwine_residual", c.intertwine_residual},
                       {"spectrum_a_phi", spectrum_to_json(spec_a)},
                       {"cluster_verdict", cluster_pass ? "pass" : "fail"},
                       {"lambda", lambda},
                       {"resolvent_residual", resolvent_residual},
                       {"resolvent_verdict", resolvent_pass ? "pass" : "fail"}};
    out.tolerances = Json{{"cluster_tol", tol_cluster}, {"resolvent_tol", tol_resolvent}};
    out.failed += cluster_pass ? 0 : 1;
    out.failed += resolvent_pass ? 0 : 1;
    out.extra_files.emplace_back("spectrum.csv", spectrum_to_csv(spec_a));
    return out;
}

inline HandlerOutput similarity_derivative(const Json& scenario) {
    Grid grid = grid_from(scenario);
    const int levels = scenario.value("levels", 3);
    if (levels < 3) throw ParseError("scenario: levels must be at least 3");
    RefinementFamily family = RefinementFamily::halving(grid.half_width, grid.points, levels);

    std::vector<double> action_residuals, matrix_residuals;
    for (const Grid& g : family.levels) {
        DerivativePair pair = derivative_pair(g);
        IntertwiningCase c = make_case(pair.a, pair.b, pair.t);
        matrix_residuals.push_back(c.intertwine_residual);
        ComplexVector probe = normalized_gaussian(g);
        action_residuals.push_back(action_residual(c, probe, &g.weights));
    }
    std::vector<double> ratios;
    bool order_pass = true;
    for (size_t k = 0; k + 1 < action_residuals.size(); ++k) {
        const double r = std::log2(action_residuals[k] / action_residuals[k + 1]);
        ratios.push_back(r);
        if (r < 1.7 || r > 2.3) order_pass = false;
    }

    DerivativePair base = derivative_pair(grid);
    std::vector<Complex> spec_b = general_eigenvalues(base.b);
    double max_re = 0.0;
    for (Complex z : spec_b) max_re = std::max(max_re, std::abs(z.real()));
    const double axis_tol = 1e-10;
    const bool axis_pass = max_re <= axis_tol;

    HandlerOutput out;
    out.results = Json{{"recipe", "derivative_pair"},
                       {"matrix_residuals", matrix_residuals},
                       {"action_residuals", action_residuals},
                       {"log2_ratios", ratios},
                       {"order_verdict", order_pass ? "pass" : "fail"},
                       {"spectrum_b_max_abs_re", max_re},
                       {"axis_verdict", axis_pass ? "pass" : "fail"}};
    out.tolerances = Json{{"order_bracket", Json::array({1.7, 2.3})}, {"axis_tol", axis_tol}};
    out.failed += order_pass ? 0 : 1;
    out.failed += axis_pass ? 0 : 1;
    return out;
}

inline HandlerOutput similarity_inline(const Json& scenario) {
    ComplexMatrix a = matrix_param(scenario, "a");
    ComplexMatrix b = matrix_param(scenario, "b");
    ComplexMatrix t = matrix_param(scenario, "t");
    std::optional<ComplexMatrix> s;
    if (scenario.contains("s")) s = matrix_param(scenario, "s");
    const double tol = positive_tol(scenario, "tol", 1e-10);

    IntertwiningCase c = make_case(std::move(a), std::move(b), std::move(t), std::move(s));
    ClassifyOptions opts;
    opts.intertwine_tol = tol;
    HandlerOutput out;
    Json verdict_json;
    bool intertwined = true;
    try {
        verdict_json = verdict_to_json(classify(c, opts));
    } catch (const NotIntertwined&) {
        intertwined = false;
        SimilarityVerdict v;
        v.intertwine_residual = c.intertwine_residual;
        v.cond_t = c.cond_t;
        verdict_json = verdict_to_json(v);
    }
    SpectrumReport ra = SpectrumReport::from_matrix(c.a);
    SpectrumReport rb = SpectrumReport::from_matrix(c.b);
    InclusionReport inc = spectral_inclusion(ra, rb, scenario.value("inclusion_tol", 1e-6));
    out.results = Json{{"recipe", "inline"},
                       {"verdict", verdict_json},
                       {"intertwine_verdict", intertwined ? "pass" : "fail"},
                       {"spectrum_a", spectrum_to_json(ra)},
                       {"spectrum_b", spectrum_to_json(rb)},
                       {"inclusion_a_in_b", inclusion_to_json(inc)}};
    out.tolerances = Json{{"intertwine_tol", tol}, {"inclusion_tol", inc.tol}};
    out.failed += intertwined ? 0 : 1;
    return out;
}

inline HandlerOutput handle_similarity(const Json& scenario) {
    if (scenario.contains("a") || scenario.contains("b") || scenario.contains("t"))
        return similarity_inline(scenario);
    const std::string recipe = scenario.value("recipe", "projector_pair");
    if (recipe == "projector_pair") return similarity_projector(scenario);
    if (recipe == "derivative_pair") return similarity_derivative(scenario);
    throw UnknownRecipe("unknown similarity recipe: " + recipe);
}

inline HandlerOutput handle_jay(const Json& scenario) {
    const std::string a_name = scenario.value("a_recipe", "bounded_mult");
    const std::string g_name = scenario.value("g_recipe", "x2");
    Json params = recipe_params(scenario);
    OperatorRecipe a = named_operator_recipe(a_name, params);
    MetricRecipe g = named_metric_recipe(g_name, params);
    std::vector<double> alphas = scenario.contains("alpha_grid")
                                     ? scenario.at("alpha_grid").get<std::vector<double>>()
                                     : default_alpha_grid();
    GrowthOptions opts;
    opts.threshold = scenario.value("growth_threshold", opts.threshold);
    opts.residual_cap = scenario.value("residual_cap", opts.residual_cap);
    JayMap map = jay_scan(a, g, alphas, family_from(scenario), opts);

    HandlerOutput out;
    out.results = Json{{"a_recipe", a_name}, {"g_recipe", g_name}, {"jay", jay_to_json(map)}};
    out.tolerances =
        Json{{"growth_threshold", opts.threshold}, {"residual_cap", opts.residual_cap}};
    out.extra_files.emplace_back("jay_norms.csv", jay_to_csv(map));
    return out;
}

inline HandlerOutput handle_klmn(const Json& scenario) {
    const std::string a_name = scenario.value("a_recipe", "x2_plus_one");
    const std::string g_name = scenario.value("g_recipe", "inv_one_plus_x2");
    Json params = recipe_params(scenario);
    OperatorRecipe a = named_operator_recipe(a_name, params);
    MetricRecipe g = named_metric_recipe(g_name, params);
    const double lambda = scenario.value("lambda", -1.0);
    KlmnOptions opts;
    opts.floor = positive_tol(scenario, "floor", 0.5);
    RefinementFamily family = family_from(scenario);
    KlmnCertificate cert = klmn_restrict(a, g, lambda, family, opts);

    HandlerOutput out;
    out.results = Json{{"a_recipe", a_name},
                       {"g_recipe", g_name},
                       {"certificate", klmn_certificate_to_json(cert)}};
    if (scenario.contains("g2_recipe")) {
        MetricRecipe g2 = named_metric_recipe(scenario.at("g2_recipe").get<std::string>(), params);
        out.results["applicability"] = klmn_applicability_to_json(klmn_applicability(g, g2, family));
    }
    out.tolerances = Json{{"floor", opts.floor}, {"herm_tol", opts.herm_tol}};
    out.failed += cert.pass ? 0 : 1;
    return out;
}

inline HandlerOutput handle_pseudo(const Json& scenario) {
    const double alpha = scenario.value("alpha", 1.0);
    const double omega = scenario.value("omega", 1.0);
    const double tol_real = positive_tol(scenario, "tol", 1e-8);
    const double tol_match = 1e-6;
    Grid grid = grid_from(scenario, 10.0, 400);

    QuasiHermitianPair pair = pt_oscillator(alpha, omega, grid);
    PhysicalSystem sys = physical_hamiltonian(pair);

    std::vector<Complex> spec_h = lowest_interior(sys.spectrum.flattened());
    double max_im = 0.0;
    for (Complex z : spec_h) max_im = std::max(max_im, std::abs(z.imag()));
    const bool real_pass = max_im <= tol_real;

    std::vector<Complex> spec_big = lowest_interior(general_eigenvalues(pair.h));
    double match = 0.0;
    for (size_t k = 0; k < std::min(spec_big.size(), spec_h.size()); ++k)
        match = std::max(match, std::abs(spec_big[k] - spec_h[k]));
    const bool match_pass = match <= tol_match;

    Json lowest = Json::array();
    for (size_t k = 0; k < std::min<size_t>(3, spec_h.size()); ++k)
        lowest.push_back(spec_h[k].real());

    HandlerOutput out;
    out.results = Json{{"alpha", alpha},
                       {"omega", omega},
                       {"physical", physical_to_json(pair, sys)},
                       {"max_im_interior", max_im},
                       {"real_spectrum_verdict", real_pass ? "pass" : "fail"},
                       {"spectrum_match_interior", match},
                       {"match_verdict", match_pass ? "pass" : "fail"},
                       {"lowest_eigenvalues", lowest}};
    out.tolerances = Json{{"real_tol", tol_real}, {"match_tol", tol_match}};
    out.failed += real_pass ? 0 : 1;
    out.failed += match_pass ? 0 : 1;
    out.extra_files.emplace_back("pseudo_spectrum.csv", spectrum_to_csv(sys.spectrum));
    return out;
}

inline HandlerOutput dispatch(const std::string& command, const Json& scenario) {
    if (command == "lattice") return handle_lattice(scenario);
    if (command == "scale") return handle_scale(scenario);
    if (command == "similarity") return handle_similarity(scenario);
    if (command == "spectrum") return handle_spectrum(scenario);
    if (command == "jay") return handle_jay(scenario);
    if (command == "klmn") return handle_klmn(scenario);
    if (command == "pseudo") return handle_pseudo(scenario);
    throw ParseError("scenario: unknown command '" + command + "'");
}

} // namespace cli_detail

// Execute one scenario object; the report lands in out_dir as
// <command>_report.json together with any CSV side files.
inline RunResult run_scenario(Json scenario, const std::filesystem::path& out_dir) {
    RunResult result;
    if (!scenario.is_object()) {
        std::cerr << "scenario must be a JSON object\n";
        result.exit_code = 2;
        return result;
    }
    std::string command;
    if (scenario.contains("command") && scenario.at("command").is_string())
        command = scenario.at("command").get<std::string>();
    if (command == "demo") {
        try {
            Json expanded = demo_scenario(scenario.value("name", ""));
            for (auto& [key, value] : scenario.items())
                if (key != "command" && key != "name") expanded[key] = value;
            return run_scenario(std::move(expanded), out_dir);
        } catch (const Error& e) {
            std::cerr << e.what() << '\n';
            result.exit_code = 2;
            return result;
        }
    }
    if (command.empty()) {
        std::cerr << "scenario: missing command\n";
        result.exit_code = 2;
        return result;
    }

    result.report_path = out_dir / (command + "_report.json");
    const auto started = std::chrono::steady_clock::now();
    try {
        cli_detail::HandlerOutput handled = cli_detail::dispatch(command, scenario);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                .count();
        result.report = Json{{"scenario", scenario},
                             {"results", handled.results},
                             {"provenance", provenance_block(handled.tolerances, wall_ms)}};
        atomic_write(result.report_path, result.report.dump(2) + "\n");
        for (const auto& [name, content] : handled.extra_files)
            atomic_write(out_dir / name, content);
        result.exit_code = handled.failed > 0 ? 1 : 0;
    } catch (const Error& e) {
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                .count();
        std::cerr << e.what() << '\n';
        result.report = Json{{"scenario", scenario},
                             {"error", e.what()},
                             {"provenance", provenance_block(Json::object(), wall_ms)}};
        atomic_write(result.report_path, result.report.dump(2) + "\n");
        result.exit_code = 2;
    }
    return result;
}

inline int cli_main(int argc, char** argv) {
    CLI::App app{"metric-operator workbench: lattices, scales, similarity, boundedness maps"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string scenario_path, out_dir = ".";
    double tol = -1.0;
    int levels = -1;
    app.add_option("--scenario", scenario_path, "scenario JSON file");
    app.add_option("--out", out_dir, "output directory for reports");
    app.add_option("--tol", tol, "override the scenario tolerance");
    app.add_option("--levels", levels, "override the refinement level count");

    for (const char* name :
         {"lattice", "scale", "similarity", "spectrum", "jay", "klmn", "pseudo"})
        app.add_subcommand(name);

    double alpha = 1.0, omega = 1.0;
    CLI::App* pseudo_cmd = app.get_subcommand("pseudo");
    pseudo_cmd->add_option("--alpha", alpha, "metric exponent");
    pseudo_cmd->add_option("--omega", omega, "oscillator frequency");

    std::string demo_name;
    CLI::App* demo_cmd = app.add_subcommand("demo", "run a canned example by name");
    demo_cmd->add_option("name", demo_name, "demo name")->required();

    CLI::App* list_cmd = app.add_subcommand("list-demos", "list canned examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list_cmd->parsed()) {
        for (const auto& [name, description] : demo_descriptions())
            std::cout << name << " - " << description << '\n';
        return 0;
    }

    Json scenario = Json::object();
    if (!scenario_path.empty()) {
        std::ifstream in(scenario_path);
        if (!in) {
            std::cerr << "cannot open scenario file: " << scenario_path << '\n';
            return 2;
        }
        try {
            in >> scenario;
        } catch (const std::exception& e) {
            std::cerr << "scenario parse error: " << e.what() << '\n';
            return 2;
        }
        if (!scenario.is_object()) {
            std::cerr << "scenario must be a JSON object\n";
            return 2;
        }
    }

    for (CLI::App* sub : app.get_subcommands())
        if (sub != demo_cmd && sub != list_cmd) scenario["command"] = sub->get_name();
    if (demo_cmd->parsed()) {
        scenario["command"] = "demo";
        scenario["name"] = demo_name;
    }
    if (tol > 0.0) scenario["tol"] = tol;
    if (levels > 0) scenario["levels"] = levels;
    if (pseudo_cmd->parsed()) {
        if (pseudo_cmd->count("--alpha") > 0) scenario["alpha"] = alpha;
        if (pseudo_cmd->count("--omega") > 0) scenario["omega"] = omega;
    }
    if (!scenario.contains("command")) {
        std::cerr << app.help() << '\n';
        return 2;
    }
    return run_scenario(std::move(scenario), out_dir).exit_code;
}

} // namespace metricop
