#pragma once

#include <string>
#include <vector>

namespace dilemma::ssd {

struct Coord {
    int row = 0;
    int col = 0;
    bool operator==(const Coord&) const = default;
};

// Plain-text grid layout.
//   '#' wall
//   '.' plain ground
//   'A' apple site, holds an apple at reset (Harvest); apple-field cell in Cleanup
//   'a' apple site, empty at reset
//   'W' waste-field cell (Cleanup)
//   'S' agent spawn point
struct MapLayout {
    int rows = 0;
    int cols = 0;
    std::vector<char> cells;  // row-major original characters

    std::vector<Coord> apple_sites;
    std::vector<bool> apple_initial;  // parallel to apple_sites
    std::vector<Coord> waste_sites;
    std::vector<Coord> spawn_points;

    char at(int row, int col) const { return cells[row * cols + col]; }
    bool wall(int row, int col) const { return at(row, col) == '#'; }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < rows && col >= 0 && col < cols;
    }

    static MapLayout parse(const std::string& text);
    static MapLayout load(const std::string& path);
};

// Paths of the layouts shipped under data/maps.
std::string default_map_path(const std::string& name);

}  // namespace dilemma::ssd
