#include "dilemma/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace dilemma {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open CSV output: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CSV row width does not match header: " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        if (const auto* ll = std::get_if<long long>(&cells[i]))
            out_ << *ll;
        else if (const auto* d = std::get_if<double>(&cells[i]))
            out_ << format_double(*d);
        else
            out_ << std::get<std::string>(cells[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (out_.is_open()) {
        out_.flush();
        if (!out_) throw std::runtime_error("CSV write failed: " + path_);
        out_.close();
    }
}

}  // namespace dilemma
