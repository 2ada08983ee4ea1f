#pragma once

#include <vector>

#include "parley/error.hpp"
#include "parley/synth/evaluator.hpp"

namespace parley::synth {

class SearchSpaceTooLarge : public InputError {
public:
    explicit SearchSpaceTooLarge(double size);
    [[nodiscard]] double size() const noexcept { return size_; }

private:
    double size_;
};

/// c_max uniform policies of the given length, the k-th all k.
std::vector<urc::Policy> baseline_policies(int c_max, std::size_t length);
/// One uniform policy per value shared by every parameter range.
std::vector<urc::Policy> uniform_policies(const std::vector<urc::ParamInfo>& params);

/// Number of policies (product of range sizes), as a double.
double search_space_size(const std::vector<urc::ParamInfo>& params);

struct BaselineResult {
    std::vector<EvaluatedPolicy> evaluated;  // every uniform policy, in order
    ParetoFront front;
};

BaselineResult baseline(Evaluator& evaluator);

struct ExhaustiveResult {
    std::vector<EvaluatedPolicy> evaluated;  // lexicographic policy order
    ParetoFront front;
};

/// Evaluates every policy; throws SearchSpaceTooLarge above `cap`.
ExhaustiveResult exhaustive(Evaluator& evaluator, double cap = 1e5);

} // namespace parley::synth
