#include "memslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memslab/errors.hpp"

namespace memslab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

void write_field_csv(const std::string& path, const Grid1D& grid, const Field& f) {
    auto out = open_out(path);
    out << "x,value\n";
    for (int j = 0; j < grid.n_nodes; ++j)
        out << format_double(grid.x(j)) << ',' << format_double(f.values[j]) << '\n';
}

Field read_field_csv(const std::string& path, const Grid1D& grid) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open '" + path + "'");
    Field f(grid.n_nodes);
    std::string line;
    int j = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw config_error("malformed field row in " + path);
        if (j >= grid.n_nodes) throw config_error("too many rows in " + path);
        f.values[j++] = std::stod(cols[1]);
    }
    if (j != grid.n_nodes) throw config_error("row count mismatch in " + path);
    return f;
}

void write_field_json(const std::string& path, const std::vector<double>& coeffs) {
    auto out = open_out(path);
    out << '[';
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k) out << ',';
        out << format_double(coeffs[k]);
    }
    out << "]\n";
}

void write_path_csv(const std::string& path, const Grid1D& grid, const FieldPath& p) {
    auto out = open_out(path);
    out << 't';
    for (int j = 0; j < grid.n_nodes; ++j) out << ',' << format_double(grid.x(j));
    out << '\n';
    for (int i = 0; i < p.size(); ++i) {
        out << format_double(p.time(i));
        for (int j = 0; j < grid.n_nodes; ++j)
            out << ',' << format_double(p.entries[i].values[j]);
        out << '\n';
    }
}

FieldPath read_path_csv(const std::string& path, const Grid1D& grid) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty path file " + path);
    FieldPath p;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (static_cast<int>(cols.size()) != grid.n_nodes + 1)
            throw config_error("column count mismatch in " + path);
        times.push_back(std::stod(cols[0]));
        Field f(grid.n_nodes);
        for (int j = 0; j < grid.n_nodes; ++j) f.values[j] = std::stod(cols[j + 1]);
        p.entries.push_back(std::move(f));
    }
    if (times.size() < 2) throw config_error("path needs at least two rows: " + path);
    p.n_steps = static_cast<int>(times.size()) - 1;
    p.horizon = times.back();
    return p;
}

}  // namespace memslab
