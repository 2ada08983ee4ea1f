#include "parley/grid/controller.hpp"

#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

namespace parley::grid {

namespace {
constexpr Move kOrder[] = {Move::East, Move::North, Move::West, Move::South};
}

const char* move_label(Move m) {
    switch (m) {
        case Move::North: return "north";
        case Move::South: return "south";
        case Move::East: return "east";
        case Move::West: return "west";
    }
    return "";
}

int move_dx(Move m) { return m == Move::East ? 1 : m == Move::West ? -1 : 0; }
int move_dy(Move m) { return m == Move::North ? 1 : m == Move::South ? -1 : 0; }

bool near_obstacle(const GridMap& map, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if ((dx || dy) && map.inside(x + dx, y + dy) && map.is_obstacle(x + dx, y + dy)) return true;
        }
    }
    return false;
}

MovementPolicy dijkstra_controller(const GridMap& map, double obstacle_penalty, double move_cost) {
    const int n = map.n;
    const double inf = std::numeric_limits<double>::infinity();
    MovementPolicy policy;
    policy.n = n;
    policy.moves.assign(static_cast<std::size_t>(n * n), std::nullopt);
    policy.cost_to_go.assign(static_cast<std::size_t>(n * n), inf);
    auto idx = [n](int x, int y) { return static_cast<std::size_t>(y * n + x); };
    auto enter = [&](int x, int y) { return move_cost + (near_obstacle(map, x, y) ? obstacle_penalty : 0.0); };

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    policy.cost_to_go[idx(map.destination.x, map.destination.y)] = 0.0;
    pq.push({0.0, idx(map.destination.x, map.destination.y)});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > policy.cost_to_go[u]) continue;
        int ux = static_cast<int>(u) % n, uy = static_cast<int>(u) / n;
        double w = enter(ux, uy);
        for (Move m : kOrder) {
            // predecessor v moves by m into u
            int vx = ux - move_dx(m), vy = uy - move_dy(m);
            if (!map.inside(vx, vy) || map.is_obstacle(vx, vy)) continue;
            double nd = d + w;
            if (nd < policy.cost_to_go[idx(vx, vy)]) {
                policy.cost_to_go[idx(vx, vy)] = nd;
                pq.push({nd, idx(vx, vy)});
            }
        }
    }
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (map.is_obstacle(x, y) || Cell{x, y} == map.destination) continue;
            if (policy.cost_to_go[idx(x, y)] == inf) continue;
            double best = inf;
            for (Move m : kOrder) {
                int tx = x + move_dx(m), ty = y + move_dy(m);
                if (!map.inside(tx, ty) || map.is_obstacle(tx, ty)) continue;
                double c = enter(tx, ty) + policy.cost_to_go[idx(tx, ty)];
                if (c < best - 1e-9) {
                    best = c;
                    policy.moves[idx(x, y)] = m;
                }
            }
        }
    }
    return policy;
}

std::vector<Cell> follow(const GridMap& map, const MovementPolicy& policy, Cell from) {
    std::vector<Cell> path{from};
    Cell c = from;
    while (c != map.destination) {
        auto m = policy.at(c.x, c.y);
        if (!m || static_cast<int>(path.size()) > map.n * map.n) {
            throw InputError(fmt::format("policy does not reach the destination from ({},{})", from.x, from.y));
        }
        c = {c.x + move_dx(*m), c.y + move_dy(*m)};
        path.push_back(c);
    }
    return path;
}

int path_length(const GridMap& map, const MovementPolicy& policy) {
    return static_cast<int>(follow(map, policy, map.start).size()) - 1;
}

} // namespace parley::grid
