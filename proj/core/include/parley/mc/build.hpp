#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parley/error.hpp"
#include "parley/mc/dtmc.hpp"
#include "parley/prism/ast.hpp"

namespace parley::mc {

class NondeterminismError : public ModelError {
public:
    NondeterminismError(std::string state, std::vector<std::string> actions);
    [[nodiscard]] const std::string& state() const noexcept { return state_; }
    [[nodiscard]] const std::vector<std::string>& actions() const noexcept { return actions_; }

private:
    std::string state_;
    std::vector<std::string> actions_;
};

class DeadlockError : public ModelError {
public:
    explicit DeadlockError(std::string state);
    [[nodiscard]] const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

struct BuildOptions {
    /// States with nothing enabled that satisfy one of these labels get a
    /// self-loop. Labels the model does not define are ignored.
    std::vector<std::string> absorbing_labels{"goal", "crash"};
    /// Give every deadlocked state a self-loop instead of failing.
    bool fix_deadlocks = false;
    std::size_t max_states = 50'000'000;
};

/// A model lowered to flat expression programs. Unbound constants become
/// parameter slots (in declaration order) so one compilation serves many
/// parameter vectors. Copies share the immutable compiled form.
class CompiledModel {
public:
    explicit CompiledModel(const prism::Model& model);

    [[nodiscard]] const std::vector<std::string>& parameters() const noexcept;
    [[nodiscard]] std::size_t num_variables() const noexcept;

    /// Breadth-first exploration from the initial valuation.
    [[nodiscard]] ExplicitDtmc build(std::span<const double> params, const BuildOptions& opts = {}) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
};

/// Builds a model with no unbound constants.
ExplicitDtmc build(const prism::Model& model, const BuildOptions& opts = {});

} // namespace parley::mc
