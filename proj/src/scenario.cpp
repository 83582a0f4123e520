#include "smoothiso/scenario.hpp"

#include <stdexcept>

namespace smoothiso {

namespace {

Scenario make(const std::string& name) {
    Scenario s;
    s.name = name;
    s.weight = uniform_weight();
    if (name == "linear-regression") {
        // lambda(x) = -x, small-band rule b = n^{-1/3}
        s.model = make_regression_model(builtin_function("linear"), 0.1);
        s.rule = BandwidthRule{1.0, 1.0 / 3.0};
        return s;
    }
    if (name == "lambda-a-regression") {
        s.model = make_regression_model(builtin_function("lambda_a", {{"a", 0.0}}), 0.1);
        s.rule = BandwidthRule{1.0, 0.2};
        return s;
    }
    if (name == "quadratic-regression") {
        // lambda(x) = 1 - x - x^2/2: nonzero curvature, fixed-band rule
        s.model = make_regression_model(builtin_function("quadratic"), 0.1);
        s.rule = BandwidthRule{1.0, 0.2};
        return s;
    }
    if (name == "expdec-regression") {
        s.model = make_regression_model(builtin_function("expdec"), 0.1);
        s.rule = BandwidthRule{1.0, 0.2};
        return s;
    }
    if (name == "triangular-density") {
        // density 1.5 - x on [0,1]
        s.model = make_density_model(
            builtin_function("linear", {{"intercept", 1.5}, {"slope", -1.0}}));
        s.rule = BandwidthRule{1.0, 0.2};
        return s;
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace

Scenario scenario_by_name(const std::string& name) { return make(name); }

std::vector<std::string> scenario_names() {
    return {"linear-regression", "lambda-a-regression", "quadratic-regression",
            "expdec-regression", "triangular-density"};
}

}  // namespace smoothiso
