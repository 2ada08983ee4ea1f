#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "parley/error.hpp"

namespace parley::grid {

class Exhausted : public Error {
public:
    using Error::Error;
};

struct Cell {
    int x = 0;
    int y = 0;

    auto operator<=>(const Cell&) const = default;
};

/// N x N occupancy grid; y grows upward.
struct GridMap {
    int n = 0;
    std::vector<std::uint8_t> obstacles;  // n*n, index y*n + x
    Cell start;
    Cell destination;

    GridMap() = default;
    explicit GridMap(int size);

    [[nodiscard]] bool inside(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < n && y < n; }
    [[nodiscard]] bool is_obstacle(int x, int y) const { return obstacles[static_cast<std::size_t>(y * n + x)] != 0; }
    void set_obstacle(int x, int y, bool on = true) { obstacles[static_cast<std::size_t>(y * n + x)] = on ? 1 : 0; }
    [[nodiscard]] std::size_t obstacle_count() const;

    bool operator==(const GridMap&) const = default;
};

/// Four-connected obstacle-free path from start to destination.
bool has_path(const GridMap& map);

/// Throws InputError when start/destination are invalid or no path exists.
void validate(const GridMap& map);

/// Draws a standard normal per cell; |value| > sigma_threshold marks an
/// obstacle. Start (0,0) and destination (N-1,N-1) are forced free and the
/// whole map is redrawn until a path exists.
GridMap generate_map(int n, std::uint64_t seed, double sigma_threshold = 1.0, int max_attempts = 10'000);

/// `N=<n>` then N rows of `.#SD`, top row first.
std::string to_text(const GridMap& map);
GridMap parse_map(std::string_view text);
GridMap read_map_file(const std::string& path);
void write_map_file(const GridMap& map, const std::string& path);

} // namespace parley::grid
