#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace trajhedge::csv {

/// Splits one line on commas; no quoting.
std::vector<std::string> split(const std::string& line);

/// Reads the next line that is neither blank nor a `#` comment. Returns false
/// at end of input. `line_no` counts every physical line read.
bool next_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no);

/// Index of `name` in `header`, or -1.
int column(const std::vector<std::string>& header, const std::string& name);

double to_double(const std::string& field, std::size_t line_no);
std::int64_t to_int(const std::string& field, std::size_t line_no);

/// Shortest round-trip decimal representation.
std::string format(double v);

}  // namespace trajhedge::csv
