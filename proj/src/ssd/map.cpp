#include "dilemma/ssd/map.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dilemma::ssd {

MapLayout MapLayout::parse(const std::string& text) {
    MapLayout map;
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("map layout is empty");
    map.rows = static_cast<int>(lines.size());
    map.cols = static_cast<int>(lines[0].size());
    map.cells.reserve(map.rows * map.cols);
    for (int r = 0; r < map.rows; ++r) {
        if (static_cast<int>(lines[r].size()) != map.cols)
            throw std::invalid_argument("map rows have inconsistent widths");
        for (int c = 0; c < map.cols; ++c) {
            const char ch = lines[r][c];
            switch (ch) {
                case '#':
                case '.':
                    break;
                case 'A':
                case 'a':
                    map.apple_sites.push_back({r, c});
                    map.apple_initial.push_back(ch == 'A');
                    break;
                case 'W':
                    map.waste_sites.push_back({r, c});
                    break;
                case 'S':
                    map.spawn_points.push_back({r, c});
                    break;
                default:
                    throw std::invalid_argument(std::string("unknown map character '") +
                                                ch + "'");
            }
            map.cells.push_back(ch);
        }
    }
    return map;
}

MapLayout MapLayout::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map layout: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string default_map_path(const std::string& name) {
    return std::string(DILEMMA_DATA_DIR) + "/maps/" + name;
}

}  // namespace dilemma::ssd
