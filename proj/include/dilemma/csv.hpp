#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace dilemma {

// Minimal CSV emitter. Floating-point cells are written with 17 significant
// digits so that values round-trip exactly.
class CsvWriter {
public:
    using Cell = std::variant<long long, double, std::string>;

    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<Cell>& cells);
    void close();
    const std::string& path() const { return path_; }

    static std::string format_double(double v);

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace dilemma
