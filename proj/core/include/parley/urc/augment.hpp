#pragma once

#include <string>
#include <vector>

#include "parley/error.hpp"
#include "parley/prism/ast.hpp"

namespace parley::urc {

class MissingLabel : public ModelError {
public:
    using ModelError::ModelError;
};

class GroundTruthLeak : public ModelError {
public:
    using ModelError::ModelError;
};

class RangeError : public ModelError {
public:
    using ModelError::ModelError;
};

class LengthMismatch : public ModelError {
public:
    using ModelError::ModelError;
};

class InvalidSpec : public ModelError {
public:
    using ModelError::ModelError;
};

struct AugmentSpec {
    std::vector<std::string> pre_labels;
    std::vector<std::string> post_labels;
    std::vector<std::string> decision_vars;
    std::string controlled_constant = "c";
    int c_min = 1;
    int c_max = 10;
    /// Modules holding the ground truth; decision variables may not live there.
    std::vector<std::string> ground_truth_modules;
};

inline constexpr const char* kControllerModule = "Uncertainty_Reduction_Controller";

/// One decision value per parameter, in enumerate_params order.
using Policy = std::vector<int>;

struct ParamInfo {
    std::string name;
    int low = 0;
    int high = 0;

    bool operator==(const ParamInfo&) const = default;
};

/// Adds the controller module, turns the controlled constant into its
/// variable and declares one `decision_<values>` parameter per valuation of
/// the decision variables (first variable most significant).
prism::Model augment(const prism::Model& model, const AugmentSpec& spec);

/// Unbound constants in declaration order with the range of the variable
/// they initialise or are assigned to.
std::vector<ParamInfo> enumerate_params(const prism::Model& model);

prism::Model instantiate(const prism::Model& model, const Policy& policy);

/// Parameter name suffix for a value: `3`, or `m3` for -3.
std::string value_token(int value);

} // namespace parley::urc
