#include "parley/synth/evaluator.hpp"

#include <fmt/format.h>

#include "parley/prism/printer.hpp"
#include "parley/util/parallel.hpp"

namespace parley::synth {

std::optional<EvaluatedPolicy> EvalCache::find(std::uint64_t model, const urc::Policy& policy) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({model, policy});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EvalCache::insert(std::uint64_t model, const EvaluatedPolicy& value) {
    std::lock_guard lock(mutex_);
    entries_.emplace(std::make_pair(model, value.policy), value);
}

std::size_t EvalCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::uint64_t model_hash(const prism::Model& model) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : prism::print(model)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

Evaluator::Evaluator(const prism::Model& pmodel, std::vector<Objective> objectives, EvalOptions opts,
                     std::shared_ptr<EvalCache> cache)
    : compiled_(pmodel), params_(urc::enumerate_params(pmodel)), objectives_(std::move(objectives)), opts_(opts),
      cache_(cache ? std::move(cache) : std::make_shared<EvalCache>()), hash_(model_hash(pmodel)) {
    if (objectives_.empty()) throw InputError("at least one objective is required");
}

std::vector<Sense> Evaluator::senses() const {
    std::vector<Sense> out;
    for (const auto& o : objectives_) out.push_back(o.sense());
    return out;
}

void Evaluator::validate(const urc::Policy& policy) const {
    if (policy.size() != params_.size()) {
        throw urc::LengthMismatch(
            fmt::format("policy has {} entries but the model has {} parameters", policy.size(), params_.size()));
    }
    for (std::size_t i = 0; i < policy.size(); ++i) {
        if (policy[i] < params_[i].low || policy[i] > params_[i].high) {
            throw urc::RangeError(fmt::format("value {} for {} outside [{}..{}]", policy[i], params_[i].name, params_[i].low,
                                              params_[i].high));
        }
    }
}

EvaluatedPolicy Evaluator::evaluate(const urc::Policy& policy) {
    validate(policy);
    if (auto hit = cache_->find(hash_, policy)) {
        ++hits_;
        return *hit;
    }
    std::vector<double> values(policy.begin(), policy.end());
    mc::ExplicitDtmc dtmc = compiled_.build(values, opts_.build);
    EvaluatedPolicy out;
    out.policy = policy;
    out.states = dtmc.num_states();
    for (const auto& obj : objectives_) {
        mc::CheckStats stats;
        try {
            out.objectives.push_back(mc::check(dtmc, obj.property, opts_.check, &stats));
        } catch (const mc::DivergentReward&) {
            out.objectives.push_back(obj.sense() == Sense::Minimize ? kDivergentCost : -kDivergentCost);
            out.divergent = true;
        }
        out.iterations += stats.iterations;
    }
    ++checks_;
    cache_->insert(hash_, out);
    return out;
}

std::vector<EvaluatedPolicy> Evaluator::evaluate_all(const std::vector<urc::Policy>& policies) {
    std::vector<EvaluatedPolicy> out(policies.size());
    util::parallel_for(policies.size(), opts_.jobs, [&](std::size_t i) { out[i] = evaluate(policies[i]); });
    return out;
}

EvaluatedPolicy evaluate(const urc::Policy& policy, const prism::Model& pmodel, const std::vector<Objective>& objectives) {
    Evaluator ev(pmodel, objectives);
    return ev.evaluate(policy);
}

} // namespace parley::synth
