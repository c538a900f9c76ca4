#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ordermem::detail {

/// Splits one line into fields. Views point into `line`.
inline void split_fields(std::string_view line, char delimiter, std::vector<std::string_view>& fields) {
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

template <class Int>
std::optional<Int> parse_int(std::string_view text) {
    Int value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return value;
}

inline std::optional<double> parse_double(std::string_view text) {
    double value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return value;
}

/// Line reader with a running 1-based line number.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string_view& line) {
        if (!std::getline(in_, buffer_)) return false;
        ++line_number_;
        line = trim_cr(buffer_);
        return true;
    }

    [[nodiscard]] std::size_t line_number() const noexcept { return line_number_; }

private:
    std::istream& in_;
    std::string buffer_;
    std::size_t line_number_ = 0;
};

}  // namespace ordermem::detail
