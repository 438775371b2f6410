#pragma once

#include <string>
#include <string_view>

namespace hessbound {

/// Shortest decimal text that parses back to exactly v.
std::string format_number(double v);

/// Parses a complete decimal/scientific literal (surrounding blanks allowed).
/// Correctly rounded; throws std::invalid_argument on malformed text.
double parse_number(std::string_view text);

} // namespace hessbound
