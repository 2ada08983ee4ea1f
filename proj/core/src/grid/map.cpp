#include "parley/grid/map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace parley::grid {

GridMap::GridMap(int size) : n(size), obstacles(static_cast<std::size_t>(size * size), 0), start{0, 0}, destination{size - 1, size - 1} {}

std::size_t GridMap::obstacle_count() const {
    return static_cast<std::size_t>(std::count(obstacles.begin(), obstacles.end(), std::uint8_t{1}));
}

bool has_path(const GridMap& map) {
    if (map.is_obstacle(map.start.x, map.start.y) || map.is_obstacle(map.destination.x, map.destination.y)) return false;
    std::vector<std::uint8_t> seen(map.obstacles.size(), 0);
    std::deque<Cell> queue{map.start};
    seen[static_cast<std::size_t>(map.start.y * map.n + map.start.x)] = 1;
    static constexpr int dx[] = {1, -1, 0, 0};
    static constexpr int dy[] = {0, 0, 1, -1};
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        if (c == map.destination) return true;
        for (int k = 0; k < 4; ++k) {
            int x = c.x + dx[k], y = c.y + dy[k];
            if (!map.inside(x, y) || map.is_obstacle(x, y)) continue;
            auto idx = static_cast<std::size_t>(y * map.n + x);
            if (seen[idx]) continue;
            seen[idx] = 1;
            queue.push_back({x, y});
        }
    }
    return false;
}

void validate(const GridMap& map) {
    if (map.n < 2) throw InputError("map must be at least 2x2");
    if (map.obstacles.size() != static_cast<std::size_t>(map.n * map.n)) throw InputError("map grid has the wrong size");
    if (!map.inside(map.start.x, map.start.y) || !map.inside(map.destination.x, map.destination.y)) {
        throw InputError("start or destination outside the map");
    }
    if (map.start == map.destination) throw InputError("start and destination coincide");
    if (map.is_obstacle(map.start.x, map.start.y) || map.is_obstacle(map.destination.x, map.destination.y)) {
        throw InputError("start or destination is an obstacle");
    }
    if (!has_path(map)) throw InputError("no path from start to destination");
}

GridMap generate_map(int n, std::uint64_t seed, double sigma_threshold, int max_attempts) {
    if (n < 3) throw InputError("map size must be at least 3");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        GridMap map(n);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) map.set_obstacle(x, y, std::abs(normal(rng)) > sigma_threshold);
        }
        map.set_obstacle(map.start.x, map.start.y, false);
        map.set_obstacle(map.destination.x, map.destination.y, false);
        if (has_path(map)) return map;
    }
    throw Exhausted(fmt::format("no connected {}x{} map after {} attempts (seed {})", n, n, max_attempts, seed));
}

std::string to_text(const GridMap& map) {
    std::string out = fmt::format("N={}\n", map.n);
    for (int y = map.n - 1; y >= 0; --y) {
        for (int x = 0; x < map.n; ++x) {
            Cell c{x, y};
            if (c == map.start) {
                out += 'S';
            } else if (c == map.destination) {
                out += 'D';
            } else {
                out += map.is_obstacle(x, y) ? '#' : '.';
            }
        }
        out += '\n';
    }
    return out;
}

GridMap parse_map(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("N=", 0) != 0) throw InputError("map file must start with N=<n>");
    int n = 0;
    try {
        n = std::stoi(line.substr(2));
    } catch (const std::exception&) {
        throw InputError(fmt::format("bad map header '{}'", line));
    }
    if (n < 2 || n > 4096) throw InputError(fmt::format("unsupported map size {}", n));
    GridMap map(n);
    bool have_start = false, have_dest = false;
    for (int row = 0; row < n; ++row) {
        if (!std::getline(in, line)) throw InputError(fmt::format("map has {} rows, expected {}", row, n));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) != n) throw InputError(fmt::format("map row {} has {} cells, expected {}", row + 1, line.size(), n));
        int y = n - 1 - row;
        for (int x = 0; x < n; ++x) {
            switch (line[static_cast<std::size_t>(x)]) {
                case '.': break;
                case '#': map.set_obstacle(x, y); break;
                case 'S':
                    map.start = {x, y};
                    have_start = true;
                    break;
                case 'D':
                    map.destination = {x, y};
                    have_dest = true;
                    break;
                default: throw InputError(fmt::format("unexpected map character '{}'", line[static_cast<std::size_t>(x)]));
            }
        }
    }
    if (!have_start || !have_dest) throw InputError("map needs exactly one S and one D");
    validate(map);
    return map;
}

GridMap read_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("{}: cannot open file", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_map(ss.str());
}

void write_map_file(const GridMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError(fmt::format("{}: cannot write file", path));
    out << to_text(map);
}

} // namespace parley::grid
