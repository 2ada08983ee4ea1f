#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parley/grid/map.hpp"

namespace parley::grid {

enum class Move { North, South, East, West };

const char* move_label(Move m);  // "north", ...
int move_dx(Move m);
int move_dy(Move m);

/// Next move from every free cell toward the destination; cells without a
/// path (and the destination itself) have none.
struct MovementPolicy {
    int n = 0;
    std::vector<std::optional<Move>> moves;  // index y*n + x
    std::vector<double> cost_to_go;          // infinity where unreachable

    [[nodiscard]] std::optional<Move> at(int x, int y) const { return moves[static_cast<std::size_t>(y * n + x)]; }
    [[nodiscard]] double cost(int x, int y) const { return cost_to_go[static_cast<std::size_t>(y * n + x)]; }
};

/// Least-cost paths where entering a cell costs `move_cost`, plus
/// `obstacle_penalty` if the cell is 8-adjacent to an obstacle. Ties between
/// moves break in the order east, north, west, south.
MovementPolicy dijkstra_controller(const GridMap& map, double obstacle_penalty = 2.0, double move_cost = 1.0);

/// Cells visited when following the policy from `from` (inclusive of both
/// ends). Throws InputError if the policy does not lead to the destination.
std::vector<Cell> follow(const GridMap& map, const MovementPolicy& policy, Cell from);

/// Number of moves from the start to the destination under the policy.
int path_length(const GridMap& map, const MovementPolicy& policy);

bool near_obstacle(const GridMap& map, int x, int y);

} // namespace parley::grid
