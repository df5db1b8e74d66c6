#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricop/grid.hpp"
#include "metricop/pip.hpp"
#include "metricop/scale.hpp"

namespace metricop {

// Named constructors addressable from scenario files. Parameters arrive as
// the scenario's "params" object; unknown names raise UnknownRecipe.

inline MetricRecipe named_metric_recipe(const std::string& name, const nlohmann::json& params) {
    if (name == "x2") {
        // weight x^2 + floor; floor defaults to dx^2 so the weight is
        // positive on grids containing the origin yet vanishes on refinement
        const nlohmann::json floor_param =
            params.contains("floor") ? params.at("floor") : nlohmann::json("dx2");
        return [floor_param](const Grid& grid) {
            const double floor_value = floor_param.is_number()
                                           ? floor_param.get<double>()
                                           : grid.dx * grid.dx;
            ComplexMatrix m = multiplication_op(
                grid, [floor_value](double x) { return x * x + floor_value; });
            return make_metric(std::move(m), -1.0, "x^2");
        };
    }
    if (name == "one_plus_x2") {
        return [](const Grid& grid) {
            ComplexMatrix m = multiplication_op(grid, [](double x) { return 1.0 + x * x; });
            return make_metric(std::move(m), -1.0, "1+x^2");
        };
    }
    if (name == "inv_one_plus_x2") {
        return [](const Grid& grid) {
            ComplexMatrix m =
                multiplication_op(grid, [](double x) { return 1.0 / (1.0 + x * x); });
            return make_metric(std::move(m), -1.0, "(1+x^2)^-1");
        };
    }
    if (name == "exp_ax") {
        const double a = params.value("a", 1.0);
        return [a](const Grid& grid) {
            ComplexMatrix m = multiplication_op(grid, [a](double x) { return std::exp(a * x); });
            return make_metric(std::move(m), -1.0, "exp(ax)");
        };
    }
    if (name == "sobolev") {
        return [](const Grid& grid) { return sobolev_metric(grid); };
    }
    if (name == "identity") {
        return [](const Grid& grid) { return MetricOperator::identity(grid.points); };
    }
    throw UnknownRecipe("unknown metric recipe: " + name);
}

inline OperatorRecipe named_operator_recipe(const std::string& name,
                                            const nlohmann::json& params) {
    if (name == "identity") {
        return [](const Grid& grid) {
            return ComplexMatrix(ComplexMatrix::Identity(grid.points, grid.points));
        };
    }
    if (name == "position") {
        return [](const Grid& grid) { return position_op(grid); };
    }
    if (name == "x2_plus_one") {
        return [](const Grid& grid) {
            return ComplexMatrix(multiplication_op(grid, [](double x) { return x * x; }) +
                                 ComplexMatrix::Identity(grid.points, grid.points));
        };
    }
    if (name == "bounded_mult") {
        return [](const Grid& grid) {
            return multiplication_op(grid, [](double x) { return 1.0 / (1.0 + x * x); });
        };
    }
    if (name == "derivative") {
        return [](const Grid& grid) { return derivative_op(grid); };
    }
    if (name == "derivative_pair_a") {
        return [](const Grid& grid) { return derivative_pair(grid).a; };
    }
    (void)params;
    throw UnknownRecipe("unknown operator recipe: " + name);
}

inline VectorRecipe named_vector_recipe(const std::string& name, const nlohmann::json& params) {
    if (name == "gaussian") {
        return [](const Grid& grid) { return normalized_gaussian(grid); };
    }
    if (name == "slow_decay") {
        // (1 + x^2)^{-1/4 - delta}: in L^2 but outside the weighted space
        // of the x^2 scale; delta controls how marginally
        const double delta = params.value("delta", 0.05);
        return [delta](const Grid& grid) {
            ComplexVector v(grid.points);
            for (int j = 0; j < grid.points; ++j)
                v(j) = std::pow(1.0 + grid.nodes(j) * grid.nodes(j), -0.25 - delta);
            return v;
        };
    }
    throw UnknownRecipe("unknown vector recipe: " + name);
}

// Canned scenarios, one per worked example; `demo <name>` expands the name
// into the scenario below and runs it like any scenario file.
inline const std::map<std::string, std::string>& demo_descriptions() {
    static const std::map<std::string, std::string> demos = {
        {"derivative_pair", "first-derivative intertwining pair and its convergence order"},
        {"exp_ax", "growth table for the scale of exponential-weight spaces"},
        {"projector_pair", "rank-one projector pair with spectrum {0, 1}"},
        {"pt_oscillator", "shifted oscillator with exponential metric and real spectrum"},
        {"sobolev", "spectrum of the grid Sobolev metric"},
        {"x2", "seven-space lattice generated by the x^2 weight"},
    };
    return demos;
}

inline nlohmann::json demo_scenario(const std::string& name) {
    if (name == "x2")
        return nlohmann::json{{"command", "lattice"},
                              {"recipe", "x2"},
                              {"grid", {{"half_width", 10.0}, {"points", 401}}},
                              {"levels", 3}};
    if (name == "exp_ax")
        return nlohmann::json{{"command", "scale"},
                              {"recipe", "exp_ax"},
                              {"xi", "gaussian"},
                              {"levels", 3}};
    if (name == "sobolev")
        return nlohmann::json{{"command", "spectrum"},
                              {"recipe", "sobolev"},
                              {"grid", {{"half_width", 10.0}, {"points", 201}}}};
    if (name == "projector_pair")
        return nlohmann::json{{"command", "similarity"},
                              {"recipe", "projector_pair"},
                              {"grid", {{"half_width", 10.0}, {"points", 401}}},
                              {"lambda", 2.0}};
    if (name == "derivative_pair")
        return nlohmann::json{{"command", "similarity"},
                              {"recipe", "derivative_pair"},
                              {"grid", {{"half_width", 10.0}, {"points", 401}}},
                              {"levels", 3}};
    if (name == "pt_oscillator")
        return nlohmann::json{{"command", "pseudo"},
                              {"alpha", 1.0},
                              {"omega", 1.0},
                              {"grid", {{"half_width", 10.0}, {"points", 400}}}};
    throw UnknownRecipe("unknown demo: " + name);
}

} // namespace metricop
