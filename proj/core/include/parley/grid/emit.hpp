#pragma once

#include "parley/grid/controller.hpp"
#include "parley/grid/map.hpp"
#include "parley/prism/ast.hpp"
#include "parley/urc/augment.hpp"

namespace parley::grid {

struct RobotModelCfg {
    double p = 0.01;  // per wrong direction
    double move_cost = 1.0;
    double localisation_cost = 5.0;
    int c_max = 0;  // 0: the map size
    int c = 2;      // value of the localisation period constant
};

void validate(const RobotModelCfg& cfg);

/// Robot / Adaptation_MAPE_Controller / Knowledge model with a "cost"
/// reward and labels "goal", "crash" and "done".
prism::Model emit_model(const GridMap& map, const MovementPolicy& controller, const RobotModelCfg& cfg);

/// Augmentation inputs for an emitted robot model: moves before, the
/// localisation decision after, estimate (xhat, yhat) as decision variables.
urc::AugmentSpec robot_augment_spec(const prism::Model& robot_model, int c_max);

} // namespace parley::grid
