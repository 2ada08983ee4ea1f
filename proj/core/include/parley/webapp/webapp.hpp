#pragma once

#include <vector>

#include "parley/prism/ast.hpp"
#include "parley/urc/augment.hpp"

namespace parley::webapp {

struct WebAppCfg {
    int confidence_levels = 11;  // IDS alert confidence 0 (no alert) .. levels-1
    int cost_levels = 12;        // restore-cost level driven by time of day
    int horizon = 24;            // time-of-day steps before the episode ends
    double attack_probability = 0.1;       // clean A becomes compromised
    double propagation_probability = 0.3;  // compromised A infects the database B
    /// P(alert level k | compromised) for k = 1..levels-1; level 0 takes the rest.
    /// Empty: increasing weights summing to 0.9.
    std::vector<double> true_positive;
    /// P(alert level k | clean) for k = 1..levels-1. Empty: decreasing weights summing to 0.3.
    std::vector<double> false_positive;
    int staleness_levels = 3;
    double rule_update_probability = 0.25;  // rule set refreshed, staleness back to 0
    double staleness_decay = 0.2;           // fraction of detections lost per staleness level
    int alert_threshold = -1;               // without a scan, restoreAB on alerts >= this; -1: 2/3 of the levels
    double restore_a = 2.0;
    double restore_ab = 4.0;
    double breach_penalty = 20.0;
    double scan_a = 1.0;
    int scan = 0;  // value of the constant `c` (1: invoke scanA)
};

void validate(const WebAppCfg& cfg);
/// cfg with the empty rate vectors and threshold replaced by their defaults.
WebAppCfg resolved(const WebAppCfg& cfg);

/// Restore-cost level at time-of-day step t.
int cost_level(const WebAppCfg& cfg, int t);

/// Environment / IDS / Knowledge / UAC model with rewards "breach" and
/// "action" and label "done" at the end of the horizon.
prism::Model emit_webapp_model(const WebAppCfg& cfg);

/// tick before the decision, scan/noscan after it; decision variables
/// (cl, conf) in [0..1].
urc::AugmentSpec webapp_augment_spec();

} // namespace parley::webapp
