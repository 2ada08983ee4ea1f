#include "parley/webapp/webapp.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "parley/error.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"

namespace parley::webapp {

namespace {

bool is_prob(double v) { return v >= 0.0 && v <= 1.0; }

std::string num(double v) { return prism::format_double(v); }

std::string branches(const std::vector<std::pair<double, std::string>>& outs) {
    std::string s;
    for (const auto& [p, upd] : outs) {
        if (p <= 0.0) continue;
        if (!s.empty()) s += " + ";
        s += fmt::format("{}:{}", num(p), upd);
    }
    return s;
}

} // namespace

WebAppCfg resolved(const WebAppCfg& cfg) {
    WebAppCfg r = cfg;
    const int k = cfg.confidence_levels - 1;
    if (k >= 1 && r.true_positive.empty()) {
        double total = k * (k + 1) / 2.0;
        for (int i = 1; i <= k; ++i) r.true_positive.push_back(0.9 * i / total);
    }
    if (k >= 1 && r.false_positive.empty()) {
        double total = k * (k + 1) / 2.0;
        for (int i = 1; i <= k; ++i) r.false_positive.push_back(0.3 * (k + 1 - i) / total);
    }
    if (r.alert_threshold < 0) r.alert_threshold = std::max(1, (2 * cfg.confidence_levels) / 3);
    return r;
}

void validate(const WebAppCfg& raw) {
    if (raw.confidence_levels < 2 || raw.cost_levels < 2) throw InputError("confidence and cost levels must be at least 2");
    if (raw.horizon < 1) throw InputError("horizon must be positive");
    if (raw.staleness_levels < 1) throw InputError("staleness levels must be positive");
    for (double p : {raw.attack_probability, raw.propagation_probability, raw.rule_update_probability, raw.staleness_decay}) {
        if (!is_prob(p)) throw InputError(fmt::format("probability {} outside [0,1]", p));
    }
    if (raw.staleness_decay * (raw.staleness_levels - 1) > 1.0) throw InputError("staleness decay exceeds 1 at the stalest level");
    for (double c : {raw.restore_a, raw.restore_ab, raw.breach_penalty, raw.scan_a}) {
        if (c < 0.0) throw InputError("costs must be non-negative");
    }
    if (raw.scan != 0 && raw.scan != 1) throw InputError("scan must be 0 or 1");
    const WebAppCfg cfg = resolved(raw);
    for (const auto* rates : {&cfg.true_positive, &cfg.false_positive}) {
        if (static_cast<int>(rates->size()) != cfg.confidence_levels - 1) {
            throw InputError(fmt::format("expected {} alert rates", cfg.confidence_levels - 1));
        }
        for (double p : *rates) {
            if (!is_prob(p)) throw InputError(fmt::format("alert rate {} outside [0,1]", p));
        }
        if (std::accumulate(rates->begin(), rates->end(), 0.0) > 1.0 + 1e-9) throw InputError("alert rates sum above 1");
    }
    if (cfg.alert_threshold < 1 || cfg.alert_threshold >= cfg.confidence_levels) {
        throw InputError(fmt::format("alert threshold {} outside [1..{}]", cfg.alert_threshold, cfg.confidence_levels - 1));
    }
}

int cost_level(const WebAppCfg& cfg, int t) {
    double phase = (1.0 - std::cos(2.0 * std::numbers::pi * t / cfg.horizon)) / 2.0;
    return static_cast<int>(std::lround((cfg.cost_levels - 1) * phase));
}

prism::Model emit_webapp_model(const WebAppCfg& raw) {
    validate(raw);
    const WebAppCfg cfg = resolved(raw);
    const int L = cfg.confidence_levels;
    const int S = cfg.staleness_levels;
    std::string s = "dtmc\n\n";
    s += fmt::format("const int c = {};\n", cfg.scan);
    s += fmt::format("const int H = {};\n", cfg.horizon);
    s += fmt::format("const int thr = {};\n", cfg.alert_threshold);
    s += fmt::format("const double pa = {};\n", num(cfg.attack_probability));
    s += fmt::format("const double pb = {};\n\n", num(cfg.propagation_probability));

    s += "module Environment\n";
    s += "  att : [0..2] init 0;\n";
    s += "  [tick] att=0 -> pa*(1-pb):(att'=1) + pa*pb:(att'=2) + 1-pa:true;\n";
    s += "  [tick] att=1 -> pb:(att'=2) + 1-pb:true;\n";
    s += "  [tick] att=2 -> true;\n";
    s += "  [scan] att=0 -> true;\n";
    s += "  [scan] att>0 -> (att'=0);\n";
    s += "  [noscan] conf>=thr -> (att'=0);\n";
    s += "  [noscan] conf<thr -> true;\n";
    s += "endmodule\n\n";

    s += "module IDS\n";
    s += fmt::format("  conf : [0..{}] init 0;\n", L - 1);
    s += fmt::format("  stale : [0..{}] init 0;\n", S - 1);
    const double u = cfg.rule_update_probability;
    for (int compromised = 0; compromised <= 1; ++compromised) {
        for (int st = 0; st < S; ++st) {
            std::vector<double> dist(static_cast<std::size_t>(L), 0.0);
            const auto& rates = compromised ? cfg.true_positive : cfg.false_positive;
            double quality = compromised ? 1.0 - cfg.staleness_decay * st : 1.0;
            double rest = 1.0;
            for (int k = 1; k < L; ++k) {
                dist[static_cast<std::size_t>(k)] = rates[static_cast<std::size_t>(k - 1)] * quality;
                rest -= dist[static_cast<std::size_t>(k)];
            }
            dist[0] = std::max(0.0, rest);
            const int aged = std::min(st + 1, S - 1);
            std::vector<std::pair<double, std::string>> outs;
            for (int k = 0; k < L; ++k) {
                double pk = dist[static_cast<std::size_t>(k)];
                if (aged == 0) {
                    outs.emplace_back(pk, fmt::format("(conf'={})&(stale'=0)", k));
                } else {
                    outs.emplace_back(pk * u, fmt::format("(conf'={})&(stale'=0)", k));
                    outs.emplace_back(pk * (1.0 - u), fmt::format("(conf'={})&(stale'={})", k, aged));
                }
            }
            s += fmt::format("  [tick] att{}0 & stale={} -> {};\n", compromised ? ">" : "=", st, branches(outs));
        }
    }
    s += "endmodule\n\n";

    s += "module Knowledge\n";
    s += fmt::format("  t : [0..H] init 0;\n  cl : [0..{}] init {};\n", cfg.cost_levels - 1, cost_level(cfg, 0));
    for (int t = 0; t < cfg.horizon; ++t) {
        s += fmt::format("  [tick] t={} -> (t'={})&(cl'={});\n", t, t + 1, cost_level(cfg, t + 1));
    }
    s += "endmodule\n\n";

    s += "module UAC\n";
    s += "  phase : [0..1] init 0;\n";
    s += "  [tick] phase=0 -> (phase'=1);\n";
    s += "  [scan] phase=1 & c=1 -> (phase'=0);\n";
    s += "  [noscan] phase=1 & c=0 -> (phase'=0);\n";
    s += "  [] phase=0 & t=H -> true;\n";
    s += "endmodule\n\n";

    s += "label \"done\" = t=H & phase=0;\n";
    s += "label \"breached\" = att=2;\n\n";

    const std::string scale = fmt::format("(1+cl/{})", cfg.cost_levels - 1);
    s += "rewards \"breach\"\n";
    s += fmt::format("  [scan] att=2 : {};\n", num(cfg.breach_penalty));
    s += fmt::format("  [noscan] att=2 : {};\n", num(cfg.breach_penalty));
    s += "endrewards\n\n";
    s += "rewards \"action\"\n";
    s += fmt::format("  [scan] true : {};\n", num(cfg.scan_a));
    s += fmt::format("  [scan] att=1 : {}*{};\n", num(cfg.restore_a), scale);
    s += fmt::format("  [scan] att=2 : {}*{};\n", num(cfg.restore_ab), scale);
    s += fmt::format("  [noscan] conf>=thr : {}*{};\n", num(cfg.restore_ab), scale);
    s += "endrewards\n";
    return prism::parse(s);
}

urc::AugmentSpec webapp_augment_spec() {
    urc::AugmentSpec spec;
    spec.pre_labels = {"tick"};
    spec.post_labels = {"scan", "noscan"};
    spec.decision_vars = {"cl", "conf"};
    spec.c_min = 0;
    spec.c_max = 1;
    spec.ground_truth_modules = {"Environment"};
    return spec;
}

} // namespace parley::webapp
