#include "hessbound/numeric_text.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <string>

namespace hessbound {

std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), end);
}

double parse_number(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

} // namespace hessbound
