#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "compiled_impl.hpp"

namespace parley::mc {

NondeterminismError::NondeterminismError(std::string state, std::vector<std::string> actions)
    : ModelError(fmt::format("nondeterminism in state {}: actions {} are all enabled", state, fmt::join(actions, ", "))),
      state_(std::move(state)), actions_(std::move(actions)) {}

DeadlockError::DeadlockError(std::string state)
    : ModelError(fmt::format("deadlock in state {}: no action enabled and no absorbing label holds", state)),
      state_(std::move(state)) {}

namespace {

using detail::CommandSpec;

struct Packing {
    std::vector<std::int32_t> low;
    std::vector<std::uint32_t> shift;
    bool fits = true;
};

struct Enabled {
    std::int32_t action;
    int module;
    const CommandSpec* cmd;
};

class Explorer {
public:
    Explorer(const CompiledModel::Impl& impl, std::span<const double> params, const BuildOptions& opts)
        : impl_(impl), params_(params.data()), opts_(opts), nv_(impl.vars.size()) {}

    ExplicitDtmc run() {
        prepare();
        ExplicitDtmc out;
        for (const auto& v : impl_.vars) out.variables.push_back(v.name);
        out.action_names = impl_.action_names;
        for (const auto& r : impl_.rewards) out.rewards[r.name];
        for (const auto& l : impl_.labels) out.labels[l.name];
        out.row_start.push_back(0);
        std::vector<std::vector<double>*> reward_out;
        for (const auto& r : impl_.rewards) reward_out.push_back(&out.rewards[r.name]);
        std::vector<std::vector<std::uint8_t>*> label_out;
        for (const auto& l : impl_.labels) label_out.push_back(&out.labels[l.name]);
        std::vector<std::uint32_t> absorbing_labels;
        for (const auto& name : opts_.absorbing_labels) {
            for (std::size_t i = 0; i < impl_.labels.size(); ++i) {
                if (impl_.labels[i].name == name) absorbing_labels.push_back(static_cast<std::uint32_t>(i));
            }
        }

        std::vector<std::int32_t> init(nv_);
        for (std::size_t v = 0; v < nv_; ++v) {
            init[v] = to_int(eval(impl_.vars[v].init, nullptr), impl_.vars[v].name);
            check_range(v, init[v], "initial value");
        }
        intern(init, out);

        std::vector<std::int32_t> cur(nv_);
        std::vector<Enabled> enabled;
        std::vector<std::pair<std::uint32_t, double>> row;
        for (std::size_t s = 0; s < num_states_; ++s) {
            std::copy_n(out.valuations.begin() + static_cast<std::ptrdiff_t>(s * nv_), nv_, cur.begin());
            const std::int32_t* st = cur.data();
            collect_enabled(st, enabled);
            std::int32_t chosen = choose(st, enabled, out);

            row.clear();
            if (chosen == kNone) {
                bool absorbing = opts_.fix_deadlocks;
                for (auto li : absorbing_labels) absorbing = absorbing || eval(impl_.labels[li].expr, st) != 0.0;
                if (!absorbing) throw DeadlockError(describe(st));
                row.emplace_back(static_cast<std::uint32_t>(s), 1.0);
                out.action.push_back(ExplicitDtmc::kSelfLoop);
            } else {
                successors(st, enabled, chosen, row, out);
                out.action.push_back(chosen == kPrivate ? private_action_id(out) : chosen);
            }
            std::sort(row.begin(), row.end());
            std::size_t w = 0;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (w > 0 && row[w - 1].first == row[i].first) {
                    row[w - 1].second += row[i].second;
                } else {
                    row[w++] = row[i];
                }
            }
            row.resize(w);
            for (auto [t, p] : row) {
                out.column.push_back(t);
                out.probability.push_back(p);
            }
            out.row_start.push_back(out.column.size());

            for (std::size_t ri = 0; ri < impl_.rewards.size(); ++ri) {
                const auto& r = impl_.rewards[ri];
                double total = 0.0;
                if (chosen != kNone) {
                    std::int32_t act = chosen == kPrivate ? -1 : chosen;
                    for (const auto& item : r.items) {
                        if (item.action != act) continue;
                        if (eval(item.guard, st) == 0.0) continue;
                        double v = eval(item.value, st);
                        if (v < 0.0) throw ModelError(fmt::format("negative reward {} in \"{}\" at state {}", v, r.name, describe(st)));
                        total += v;
                    }
                }
                reward_out[ri]->push_back(total);
            }
            for (std::size_t li = 0; li < impl_.labels.size(); ++li) {
                label_out[li]->push_back(eval(impl_.labels[li].expr, st) != 0.0 ? 1 : 0);
            }
        }
        out.initial = 0;
        return out;
    }

private:
    static constexpr std::int32_t kNone = -2;
    static constexpr std::int32_t kPrivate = -3;

    const CompiledModel::Impl& impl_;
    const double* params_;
    const BuildOptions& opts_;
    std::size_t nv_;
    std::vector<std::int32_t> low_, high_;
    Packing pack_;
    std::unordered_map<std::uint64_t, std::uint32_t> packed_index_;
    std::unordered_map<std::string, std::uint32_t> string_index_;
    std::size_t num_states_ = 0;
    std::int32_t private_id_ = -1;
    std::string key_buf_;
    std::vector<std::int32_t> seen_;
    std::vector<const CommandSpec*> parts_;
    std::vector<std::vector<double>> probs_;
    std::vector<std::size_t> choice_;
    std::vector<std::int32_t> next_;

    struct Table {
        std::int32_t v1 = -1, v2 = -1;
        std::int32_t lo1 = 0, lo2 = 0;
        std::size_t span2 = 1;
        std::vector<double> values;  // NaN: evaluate directly
    };
    std::vector<std::int32_t> table_of_;
    std::vector<Table> tables_;

    double eval(std::uint32_t node, const std::int32_t* st) const {
        if (st == nullptr) return impl_.prog.eval(node, st, params_);
        return impl_.prog.eval_with(node, st, params_, [this](std::uint32_t id, const std::int32_t* s, double& out) {
            std::int32_t t = table_of_[id];
            if (t < 0) return false;
            const Table& tb = tables_[static_cast<std::size_t>(t)];
            std::size_t k = static_cast<std::size_t>(s[tb.v1] - tb.lo1) * tb.span2;
            if (tb.v2 >= 0) k += static_cast<std::size_t>(s[tb.v2] - tb.lo2);
            double v = tb.values[k];
            if (std::isnan(v)) return false;
            out = v;
            return true;
        });
    }

    // Sub-expressions over at most two variables with small ranges are
    // precomputed once per build.
    void tabulate() {
        using detail::Op;
        const auto& nodes = impl_.prog.nodes;
        const std::size_t nn = nodes.size();
        table_of_.assign(nn, -1);
        struct Info {
            std::int32_t d1 = -1, d2 = -1;
            bool many = false;
            std::size_t size = 1;
        };
        std::vector<Info> info(nn);
        auto merge = [](Info& into, const Info& from) {
            into.many = into.many || from.many;
            into.size += from.size;
            for (std::int32_t d : {from.d1, from.d2}) {
                if (d < 0 || d == into.d1 || d == into.d2) continue;
                if (into.d1 < 0) into.d1 = d;
                else if (into.d2 < 0) into.d2 = d;
                else into.many = true;
            }
        };
        for (std::size_t i = 0; i < nn; ++i) {
            const auto& n = nodes[i];
            Info& in = info[i];
            switch (n.op) {
                case Op::Lit:
                case Op::Param: break;
                case Op::Var: in.d1 = n.ref; break;
                case Op::Not:
                case Op::Neg: merge(in, info[n.a]); break;
                default:
                    merge(in, info[n.a]);
                    merge(in, info[n.b]);
            }
        }
        auto span = [this](std::int32_t v) { return static_cast<std::size_t>(high_[static_cast<std::size_t>(v)] - low_[static_cast<std::size_t>(v)]) + 1; };
        std::vector<std::uint8_t> visited(nn, 0);
        std::vector<std::int32_t> scratch(nv_, 0);
        std::vector<std::uint32_t> stack(impl_.roots.begin(), impl_.roots.end());
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (visited[id]) continue;
            visited[id] = 1;
            const Info& in = info[id];
            const auto& n = nodes[id];
            std::size_t cells = in.d1 < 0 ? 0 : span(in.d1) * (in.d2 < 0 ? 1 : span(in.d2));
            if (!in.many && in.d1 >= 0 && in.size >= 6 && cells <= 65536) {
                Table tb;
                tb.v1 = in.d1;
                tb.v2 = in.d2;
                tb.lo1 = low_[static_cast<std::size_t>(in.d1)];
                if (in.d2 >= 0) {
                    tb.lo2 = low_[static_cast<std::size_t>(in.d2)];
                    tb.span2 = span(in.d2);
                }
                tb.values.resize(cells);
                for (std::size_t k = 0; k < cells; ++k) {
                    scratch[static_cast<std::size_t>(tb.v1)] = tb.lo1 + static_cast<std::int32_t>(k / tb.span2);
                    if (tb.v2 >= 0) scratch[static_cast<std::size_t>(tb.v2)] = tb.lo2 + static_cast<std::int32_t>(k % tb.span2);
                    try {
                        tb.values[k] = impl_.prog.eval(id, scratch.data(), params_);
                    } catch (const ModelError&) {
                        tb.values[k] = std::numeric_limits<double>::quiet_NaN();
                    }
                }
                table_of_[id] = static_cast<std::int32_t>(tables_.size());
                tables_.push_back(std::move(tb));
                continue;
            }
            if (n.op == Op::Lit || n.op == Op::Var || n.op == Op::Param) continue;
            stack.push_back(n.a);
            if (n.op != Op::Not && n.op != Op::Neg) stack.push_back(n.b);
        }
    }

    static std::int32_t to_int(double v, const std::string& what) {
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9 || std::abs(r) > 2e9) throw ModelError(fmt::format("non-integer value {} for '{}'", v, what));
        return static_cast<std::int32_t>(r);
    }

    void prepare() {
        low_.resize(nv_);
        high_.resize(nv_);
        pack_.low.resize(nv_);
        pack_.shift.resize(nv_);
        std::uint32_t bits = 0;
        for (std::size_t v = 0; v < nv_; ++v) {
            low_[v] = to_int(eval(impl_.vars[v].low, nullptr), impl_.vars[v].name);
            high_[v] = to_int(eval(impl_.vars[v].high, nullptr), impl_.vars[v].name);
            if (low_[v] > high_[v]) throw ModelError(fmt::format("empty range for '{}'", impl_.vars[v].name));
            auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(high_[v]) - low_[v]) + 1;
            pack_.low[v] = low_[v];
            pack_.shift[v] = bits;
            bits += static_cast<std::uint32_t>(std::bit_width(span - 1));
        }
        pack_.fits = bits <= 64;
        tabulate();
    }

    void check_range(std::size_t v, std::int32_t value, const char* what) const {
        if (value < low_[v] || value > high_[v]) {
            throw ModelError(fmt::format("{} {} of '{}' outside [{}..{}]", what, value, impl_.vars[v].name, low_[v], high_[v]));
        }
    }

    std::string describe(const std::int32_t* st) const {
        std::string s = "(";
        for (std::size_t v = 0; v < nv_; ++v) {
            if (v) s += ',';
            s += fmt::format("{}={}", impl_.vars[v].name, st[v]);
        }
        return s + ")";
    }

    std::uint32_t intern(const std::vector<std::int32_t>& st, ExplicitDtmc& out) {
        auto idx = static_cast<std::uint32_t>(num_states_);
        bool fresh = false;
        std::uint32_t found = 0;
        if (pack_.fits) {
            std::uint64_t key = 0;
            for (std::size_t v = 0; v < nv_; ++v) {
                key |= static_cast<std::uint64_t>(static_cast<std::int64_t>(st[v]) - pack_.low[v]) << pack_.shift[v];
            }
            auto [it, ins] = packed_index_.try_emplace(key, idx);
            fresh = ins;
            found = it->second;
        } else {
            key_buf_.assign(reinterpret_cast<const char*>(st.data()), st.size() * sizeof(std::int32_t));
            auto [it, ins] = string_index_.try_emplace(key_buf_, idx);
            fresh = ins;
            found = it->second;
        }
        if (!fresh) return found;
        if (num_states_ >= opts_.max_states) throw ModelError(fmt::format("state space exceeds {} states", opts_.max_states));
        out.valuations.insert(out.valuations.end(), st.begin(), st.end());
        ++num_states_;
        return idx;
    }

    void collect_enabled(const std::int32_t* st, std::vector<Enabled>& enabled) const {
        enabled.clear();
        for (std::size_t mi = 0; mi < impl_.modules.size(); ++mi) {
            const auto& ms = impl_.modules[mi];
            std::uint32_t last_guard = UINT32_MAX;
            bool last_value = false;
            auto test = [&](std::uint32_t ci) {
                const CommandSpec& c = ms.commands[ci];
                if (c.guard != last_guard) {
                    last_guard = c.guard;
                    last_value = eval(c.guard, st) != 0.0;
                }
                if (last_value) enabled.push_back({c.action, static_cast<int>(mi), &c});
            };
            if (ms.index_var >= 0) {
                std::int64_t slot = static_cast<std::int64_t>(st[ms.index_var]) - ms.index_min;
                if (slot >= 0 && slot < static_cast<std::int64_t>(ms.by_value.size())) {
                    for (auto ci : ms.by_value[static_cast<std::size_t>(slot)]) test(ci);
                }
            }
            for (auto ci : ms.always) test(ci);
        }
    }

    // Returns the single enabled action id, kPrivate for a private command
    // (moved to the front of `enabled`), or kNone.
    std::int32_t choose(const std::int32_t* st, std::vector<Enabled>& enabled, const ExplicitDtmc& out) {
        std::int32_t chosen = kNone;
        std::size_t count = 0;
        std::size_t private_at = 0;
        bool multiple_any = false;
        for (std::size_t i = 0; i < enabled.size(); ++i) {
            if (enabled[i].action < 0) {
                ++count;
                chosen = kPrivate;
                private_at = i;
            }
        }
        seen_.clear();
        for (const auto& e : enabled) {
            if (e.action < 0 || std::find(seen_.begin(), seen_.end(), e.action) != seen_.end()) continue;
            seen_.push_back(e.action);
            bool all = true;
            bool multiple = false;
            for (int m : impl_.action_modules[static_cast<std::size_t>(e.action)]) {
                std::size_t n = 0;
                for (const auto& x : enabled) n += (x.action == e.action && x.module == m) ? 1 : 0;
                if (n == 0) all = false;
                if (n > 1) multiple = true;
            }
            if (!all) continue;
            ++count;
            multiple_any |= multiple;
            chosen = e.action;
        }
        if (count > 1 || multiple_any) report_nondeterminism(st, enabled, out);
        if (chosen == kPrivate) std::swap(enabled[0], enabled[private_at]);
        return chosen;
    }

    [[noreturn]] void report_nondeterminism(const std::int32_t* st, const std::vector<Enabled>& enabled,
                                            const ExplicitDtmc& out) const {
        std::vector<std::string> names;
        for (const auto& e : enabled) {
            if (e.action < 0) {
                names.push_back(fmt::format("[] at {}", e.cmd->where));
            } else {
                const std::string& name = out.action_names[static_cast<std::size_t>(e.action)];
                if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            }
        }
        throw NondeterminismError(describe(st), names);
    }

    std::int32_t private_action_id(ExplicitDtmc& out) {
        if (private_id_ < 0) {
            out.action_names.emplace_back();
            private_id_ = static_cast<std::int32_t>(out.action_names.size() - 1);
        }
        return private_id_;
    }

    void successors(const std::int32_t* st, const std::vector<Enabled>& enabled, std::int32_t chosen,
                    std::vector<std::pair<std::uint32_t, double>>& row, ExplicitDtmc& out) {
        auto& parts = parts_;
        parts.clear();
        if (chosen == kPrivate) {
            parts.push_back(enabled[0].cmd);
        } else {
            for (const auto& e : enabled) {
                if (e.action == chosen) parts.push_back(e.cmd);
            }
        }
        auto& probs = probs_;
        if (probs.size() < parts.size()) probs.resize(parts.size());
        for (std::size_t k = 0; k < parts.size(); ++k) {
            probs[k].clear();
            double sum = 0.0;
            for (const auto& u : parts[k]->updates) {
                double p = eval(u.prob, st);
                if (p < 0.0 || p > 1.0 + 1e-9) {
                    throw ModelError(fmt::format("probability {} outside [0,1] ({}) in state {}", p, parts[k]->where, describe(st)));
                }
                probs[k].push_back(p);
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw ModelError(fmt::format("probabilities sum to {} ({}) in state {}", sum, parts[k]->where, describe(st)));
            }
        }
        auto& choice = choice_;
        choice.assign(parts.size(), 0);
        auto& next = next_;
        next.resize(nv_);
        while (true) {
            double p = 1.0;
            for (std::size_t k = 0; k < parts.size(); ++k) p *= probs[k][choice[k]];
            if (p > 0.0) {
                std::copy_n(st, nv_, next.begin());
                for (std::size_t k = 0; k < parts.size(); ++k) {
                    for (auto [v, expr] : parts[k]->updates[choice[k]].assigns) {
                        std::int32_t val = to_int(eval(expr, st), impl_.vars[v].name);
                        if (val < low_[v] || val > high_[v]) {
                            throw ModelError(fmt::format("update sets '{}' to {} outside [{}..{}] ({}) from state {}", impl_.vars[v].name,
                                                         val, low_[v], high_[v], parts[k]->where, describe(st)));
                        }
                        next[v] = val;
                    }
                }
                row.emplace_back(intern(next, out), p);
            }
            std::size_t k = 0;
            while (k < parts.size() && ++choice[k] == probs[k].size()) choice[k++] = 0;
            if (k == parts.size()) break;
        }
        if (row.empty()) throw ModelError(fmt::format("all branches have probability zero in state {}", describe(st)));
    }
};

} // namespace

ExplicitDtmc CompiledModel::build(std::span<const double> params, const BuildOptions& opts) const {
    if (params.size() != impl_->params.size()) {
        throw ModelError(fmt::format("expected {} parameter values, got {}", impl_->params.size(), params.size()));
    }
    return Explorer(*impl_, params, opts).run();
}

ExplicitDtmc build(const prism::Model& model, const BuildOptions& opts) {
    auto unbound = model.unbound_constants();
    if (!unbound.empty()) throw ModelError(fmt::format("model has unbound constants: {}", fmt::join(unbound, ", ")));
    return CompiledModel(model).build({}, opts);
}

} // namespace parley::mc
