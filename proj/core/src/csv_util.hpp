#pragma once

#include <string>
#include <vector>

namespace molehill::detail {

/// Splits one CSV line into fields. Double-quoted fields may contain commas and
/// doubled quotes. Returns false on unbalanced quotes.
bool split_csv_line(const std::string& line, std::vector<std::string>& fields);

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);

}  // namespace molehill::detail
