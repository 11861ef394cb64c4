#pragma once

#include <string>
#include <vector>

#include "memslab/grid.hpp"

namespace memslab {

/// Fields serialize as "x,value" rows (interior nodes); trajectory CSVs carry
/// one row per time with header "t,<x_0>,<x_1>,..." so solver and oracle
/// outputs diff column by column.
void write_field_csv(const std::string& path, const Grid1D& grid, const Field& f);
Field read_field_csv(const std::string& path, const Grid1D& grid);

void write_field_json(const std::string& path, const std::vector<double>& coeffs);

void write_path_csv(const std::string& path, const Grid1D& grid, const FieldPath& p);
FieldPath read_path_csv(const std::string& path, const Grid1D& grid);

std::string format_double(double v);  // shortest round-trip form used everywhere

}  // namespace memslab
