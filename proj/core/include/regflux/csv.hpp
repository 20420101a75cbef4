#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace regflux {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Writes `header` and one comma-separated line per row.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace regflux
