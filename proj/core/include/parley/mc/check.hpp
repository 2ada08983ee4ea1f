#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "parley/error.hpp"
#include "parley/mc/dtmc.hpp"

namespace parley::mc {

class UnknownLabel : public ModelError {
public:
    explicit UnknownLabel(const std::string& name);
};

class UnknownReward : public ModelError {
public:
    explicit UnknownReward(const std::string& name);
};

class DivergentReward : public ModelError {
public:
    using ModelError::ModelError;
};

enum class Sense { Maximize, Minimize };

struct Property {
    enum class Kind { ReachProbability, ExpectedReward };
    Kind kind = Kind::ReachProbability;
    std::string target;  // label name
    std::string reward;  // ExpectedReward only
    Sense sense = Sense::Maximize;

    static Property reach(std::string target, Sense sense = Sense::Maximize);
    static Property expected(std::string reward, std::string target, Sense sense = Sense::Minimize);

    /// Accepts `P=? [ F "label" ]` and `R{"reward"}=? [ F "label" ]`, with
    /// optional leading `max:`/`min:` to set the sense.
    static Property parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    bool operator==(const Property&) const = default;
};

struct CheckOptions {
    double epsilon = 1e-12;
    std::size_t max_iterations = 1'000'000;
};

struct CheckStats {
    std::size_t iterations = 0;
};

double prob_reach(const ExplicitDtmc& dtmc, std::string_view target, const CheckOptions& opts = {},
                  CheckStats* stats = nullptr);

double expected_reward(const ExplicitDtmc& dtmc, std::string_view reward, std::string_view target,
                       const CheckOptions& opts = {}, CheckStats* stats = nullptr);

double check(const ExplicitDtmc& dtmc, const Property& property, const CheckOptions& opts = {},
             CheckStats* stats = nullptr);

} // namespace parley::mc
