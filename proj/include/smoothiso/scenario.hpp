#pragma once

#include <string>
#include <vector>

#include "smoothiso/core.hpp"
#include "smoothiso/mc.hpp"

namespace smoothiso {

// Named bundle of model, weight, kernel and bandwidth rule, so that
// experiments and tests reference scenarios instead of loose parameters.
struct Scenario {
    std::string name;
    ModelSpec model;
    WeightMeasure weight;
    std::string kernel = "triweight";
    BandwidthRule rule;
};

Scenario scenario_by_name(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace smoothiso
