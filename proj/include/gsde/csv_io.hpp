#pragma once

#include <ostream>
#include <string>

#include "gsde/model.hpp"

namespace gsde {

/// Shortest decimal string that parses back to exactly the same double.
/// Integers render without a trailing ".0" ("50", not "5e+01").
std::string format_double(double value);

inline constexpr const char* kPathCsvHeader = "k,j,i,t_i,x_i,dB_i,sigma2_i";

void write_path_csv_header(std::ostream& out);

/// Appends one path: a row per grid point, i = 0..n. Row i >= 1 carries the
/// step increment dB_i and the step's variance; row 0 carries the initial
/// value with dB_0 = 0 and the first step's variance.
void append_path_csv(std::ostream& out, int k, int j, const SamplePath& path);

}  // namespace gsde
