#include "parley/synth/nsga2.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "parley/synth/search.hpp"
#include "parley/util/log.hpp"

namespace parley::synth {

void validate(const GaConfig& cfg) {
    if (cfg.population < 4 || cfg.population % 2 != 0) {
        throw InputError(fmt::format("population {} must be even and at least 4", cfg.population));
    }
    if (cfg.generations < 0) throw InputError("generations must be non-negative");
    if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0) throw InputError("crossover rate outside [0,1]");
    if (cfg.mutation_rate > 1.0) throw InputError("mutation rate above 1");
    if (cfg.tournament_size < 1) throw InputError("tournament size must be positive");
}

namespace {

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

Ranked rank_population(const std::vector<EvaluatedPolicy>& pop, const std::vector<Sense>& senses) {
    std::vector<std::vector<double>> pts;
    for (const auto& p : pop) pts.push_back(p.objectives);
    Ranked r{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
    auto fronts = fast_non_dominated_sort(pts, senses);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        auto cd = crowding_distance(pts, fronts[f]);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            r.rank[fronts[f][k]] = f;
            r.crowding[fronts[f][k]] = cd[k];
        }
    }
    return r;
}

class Archive {
public:
    explicit Archive(std::vector<Sense> senses) : senses_(std::move(senses)) {}

    void add(const std::vector<EvaluatedPolicy>& batch) {
        for (const auto& p : batch) {
            if (!seen_.insert(p.objectives).second) continue;
            bool dominated = false;
            for (const auto& a : members_) {
                if (dominates(a.objectives, p.objectives, senses_)) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
            std::erase_if(members_, [&](const EvaluatedPolicy& a) { return dominates(p.objectives, a.objectives, senses_); });
            members_.push_back(p);
        }
    }
    [[nodiscard]] const std::vector<EvaluatedPolicy>& members() const { return members_; }

private:
    std::vector<Sense> senses_;
    std::set<std::vector<double>> seen_;
    std::vector<EvaluatedPolicy> members_;
};

} // namespace

GaResult nsga2(Evaluator& evaluator, const GaConfig& cfg, const GaProgress& progress) {
    validate(cfg);
    const auto& params = evaluator.params();
    if (params.empty()) throw InputError("model has no decision parameters");
    const auto senses = evaluator.senses();
    const std::size_t n = static_cast<std::size_t>(cfg.population);
    const std::size_t len = params.size();
    const double mutation = cfg.mutation_rate < 0.0 ? 1.0 / static_cast<double>(len) : cfg.mutation_rate;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto gene = [&](std::size_t i) { return std::uniform_int_distribution<int>(params[i].low, params[i].high)(rng); };

    std::vector<urc::Policy> initial;
    if (cfg.seed_baseline) {
        for (auto& p : uniform_policies(params)) {
            if (initial.size() < n) initial.push_back(std::move(p));
        }
    }
    while (initial.size() < n) {
        urc::Policy p(len);
        for (std::size_t i = 0; i < len; ++i) p[i] = gene(i);
        initial.push_back(std::move(p));
    }

    GaResult result;
    Archive archive(senses);
    std::vector<EvaluatedPolicy> pop = evaluator.evaluate_all(initial);
    result.evaluations += pop.size();
    archive.add(pop);
    if (progress) progress(0, archive.members().size());

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        Ranked ranked = rank_population(pop, senses);
        auto better = [&](std::size_t a, std::size_t b) {
            if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b];
            return ranked.crowding[a] > ranked.crowding[b];
        };
        auto tournament = [&] {
            std::size_t best = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            for (int k = 1; k < cfg.tournament_size; ++k) {
                std::size_t c = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
                if (better(c, best)) best = c;
            }
            return best;
        };

        std::vector<urc::Policy> offspring;
        while (offspring.size() < n) {
            urc::Policy a = pop[tournament()].policy;
            urc::Policy b = pop[tournament()].policy;
            if (len > 1 && unit(rng) < cfg.crossover_rate) {
                std::size_t cut = std::uniform_int_distribution<std::size_t>(1, len - 1)(rng);
                std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(), b.begin() + static_cast<std::ptrdiff_t>(cut));
            }
            for (auto* child : {&a, &b}) {
                for (std::size_t i = 0; i < len; ++i) {
                    if (unit(rng) < mutation) (*child)[i] = gene(i);
                }
            }
            offspring.push_back(std::move(a));
            offspring.push_back(std::move(b));
        }

        std::vector<EvaluatedPolicy> children = evaluator.evaluate_all(offspring);
        result.evaluations += children.size();
        archive.add(children);

        std::vector<EvaluatedPolicy> combined = std::move(pop);
        combined.insert(combined.end(), children.begin(), children.end());
        std::vector<std::vector<double>> pts;
        for (const auto& p : combined) pts.push_back(p.objectives);
        pop.clear();
        for (const auto& front : fast_non_dominated_sort(pts, senses)) {
            if (pop.size() + front.size() <= n) {
                for (std::size_t i : front) pop.push_back(combined[i]);
                continue;
            }
            auto cd = crowding_distance(pts, front);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            for (std::size_t k = 0; pop.size() < n; ++k) pop.push_back(combined[front[order[k]]]);
            break;
        }
        log::debug("generation {}: archive {}", gen, archive.members().size());
        if (progress) progress(gen, archive.members().size());
    }

    result.archive.objectives = evaluator.objectives();
    result.archive.points = pareto_filter(archive.members(), senses);
    if (cfg.front_source == FrontSource::Archive) {
        result.front = result.archive;
    } else {
        result.front.objectives = evaluator.objectives();
        result.front.points = pareto_filter(pop, senses);
    }
    result.final_population = std::move(pop);
    return result;
}

} // namespace parley::synth
