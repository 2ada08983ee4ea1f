#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "parley/mc/build.hpp"
#include "parley/prism/ast.hpp"
#include "parley/synth/front.hpp"

namespace parley::synth {

/// Cost assigned to minimised rewards whose target is not reached almost surely.
inline constexpr double kDivergentCost = 1e9;

/// Shared memo of evaluations keyed by (model hash, policy). Safe for
/// concurrent use.
class EvalCache {
public:
    std::optional<EvaluatedPolicy> find(std::uint64_t model, const urc::Policy& policy) const;
    void insert(std::uint64_t model, const EvaluatedPolicy& value);
    [[nodiscard]] std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<std::uint64_t, urc::Policy>, EvaluatedPolicy> entries_;
};

/// FNV-1a over the printed model.
std::uint64_t model_hash(const prism::Model& model);

struct EvalOptions {
    mc::CheckOptions check;
    mc::BuildOptions build;
    int jobs = 0;  // 0: util::default_jobs()
};

/// Instantiates, builds and checks policies of one parametric model.
class Evaluator {
public:
    Evaluator(const prism::Model& pmodel, std::vector<Objective> objectives, EvalOptions opts = {},
              std::shared_ptr<EvalCache> cache = nullptr);

    [[nodiscard]] const std::vector<urc::ParamInfo>& params() const noexcept { return params_; }
    [[nodiscard]] const std::vector<Objective>& objectives() const noexcept { return objectives_; }
    [[nodiscard]] std::vector<Sense> senses() const;
    [[nodiscard]] std::uint64_t hash() const noexcept { return hash_; }

    /// Throws urc::LengthMismatch or urc::RangeError for malformed policies.
    EvaluatedPolicy evaluate(const urc::Policy& policy);
    /// Parallel over policies; results in input order.
    std::vector<EvaluatedPolicy> evaluate_all(const std::vector<urc::Policy>& policies);

    [[nodiscard]] std::size_t cache_hits() const noexcept { return hits_; }
    [[nodiscard]] std::size_t model_checks() const noexcept { return checks_; }

private:
    void validate(const urc::Policy& policy) const;

    mc::CompiledModel compiled_;
    std::vector<urc::ParamInfo> params_;
    std::vector<Objective> objectives_;
    EvalOptions opts_;
    std::shared_ptr<EvalCache> cache_;
    std::uint64_t hash_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> checks_{0};
};

EvaluatedPolicy evaluate(const urc::Policy& policy, const prism::Model& pmodel, const std::vector<Objective>& objectives);

} // namespace parley::synth
