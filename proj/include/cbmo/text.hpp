#ifndef CBMO_TEXT_HPP
#define CBMO_TEXT_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace cbmo::text {

constexpr bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

constexpr std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

/// Splits on '\n'; a trailing '\r' on each line is dropped. A final newline
/// does not produce an extra empty line.
inline std::vector<std::string_view> split_lines(std::string_view source)
{
    std::vector<std::string_view> lines;
    while (!source.empty()) {
        auto pos = source.find('\n');
        auto line = source.substr(0, pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (pos == std::string_view::npos) {
            break;
        }
        source.remove_prefix(pos + 1);
    }
    return lines;
}

inline std::vector<std::string_view> split_whitespace(std::string_view s)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) {
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(s.substr(start, i - start));
        }
    }
    return tokens;
}

/// Text following the first `skip` whitespace-separated tokens, trimmed.
inline std::string_view rest_after_tokens(std::string_view s, std::size_t skip)
{
    std::size_t i = 0;
    for (std::size_t t = 0; t < skip; ++t) {
        while (i < s.size() && is_space(s[i])) {
            ++i;
        }
        while (i < s.size() && !is_space(s[i])) {
            ++i;
        }
    }
    return trim(s.substr(i));
}

inline bool iequals(std::string_view a, std::string_view b) noexcept
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
        if (lower(a[i]) != lower(b[i])) {
            return false;
        }
    }
    return true;
}

/// Finite decimal number, scientific notation allowed; surrounding blanks
/// are ignored and the whole field must be consumed.
inline std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double value)
{
    std::array<char, 64> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

} // namespace cbmo::text

#endif // CBMO_TEXT_HPP
