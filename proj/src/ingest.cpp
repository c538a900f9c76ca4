#include "ordermem/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include "ordermem/detail/csv.hpp"

namespace ordermem {

namespace {

constexpr std::array<std::string_view, 5> kTradeHeader{"asset", "seq", "price", "bid", "ask"};
constexpr std::array<std::string_view, 4> kPositionHeader{"fund", "asset", "quarter", "position_usd"};
constexpr std::array<std::string_view, 3> kVolumeHeader{"asset", "quarter", "volume_usd"};

template <std::size_t N>
bool header_matches(const std::vector<std::string_view>& fields, const std::array<std::string_view, N>& expected) {
    if (fields.size() < N) return false;
    return std::equal(expected.begin(), expected.end(), fields.begin());
}

template <std::size_t N>
std::string join(const std::array<std::string_view, N>& names, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
        if (i) out += delimiter;
        out += names[i];
    }
    return out;
}

// Reads lines until the first non-blank one and checks it against `expected`.
// Returns false on an empty stream.
template <std::size_t N>
bool read_header(detail::LineReader& reader, char delimiter, const std::array<std::string_view, N>& expected,
                 std::vector<std::string_view>& fields, bool allow_extra) {
    std::string_view line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        const bool extra_ok = allow_extra ? fields.size() <= N + 1 : fields.size() == N;
        if (!header_matches(fields, expected) || !extra_ok) {
            throw ParseError(reader.line_number(), "expected header '" + join(expected, delimiter) + "'");
        }
        return true;
    }
    return false;
}

struct PendingTrade {
    TradeEvent event;
    std::size_t line;
};

}  // namespace

std::optional<Price> Price::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > static_cast<std::size_t>(kMaxParsedDecimals)) return std::nullopt;
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;

    const auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;

    std::int64_t units = 0;
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
    for (char c : whole) {
        if (units > (kMax - (c - '0')) / 10) return std::nullopt;
        units = units * 10 + (c - '0');
    }
    if (units > kMax / kUnitsPerOne) return std::nullopt;
    units *= kUnitsPerOne;
    std::int64_t scale = kUnitsPerOne / 10;
    for (char c : frac) {
        units += (c - '0') * scale;
        scale /= 10;
    }
    return Price{negative ? -units : units};
}

std::string Price::to_string() const {
    const bool negative = units_ < 0;
    const std::uint64_t magnitude =
        negative ? static_cast<std::uint64_t>(-(units_ + 1)) + 1 : static_cast<std::uint64_t>(units_);
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / kUnitsPerOne);
    std::uint64_t frac = magnitude % kUnitsPerOne;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 9 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

TradeTable parse_trades(std::istream& in, const TradeFormat& format) {
    TradeTable table;
    detail::LineReader reader(in);
    std::vector<std::string_view> fields;
    if (!read_header(reader, format.delimiter, kTradeHeader, fields, /*allow_extra=*/true)) return table;
    const bool has_label = fields.size() == kTradeHeader.size() + 1;
    if (has_label) table.label_column = std::string(fields.back());
    const std::size_t width = has_label ? 6 : 5;

    std::map<std::string, std::vector<PendingTrade>> pending;
    std::string_view line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        ++table.total_rows;
        const auto reject = [&](std::string reason) {
            table.rejected.push_back({reader.line_number(), std::move(reason)});
        };
        detail::split_fields(line, format.delimiter, fields);
        if (fields.size() != width) {
            reject("expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty()) {
            reject("empty asset");
            continue;
        }
        const auto seq = detail::parse_int<std::int64_t>(fields[1]);
        if (!seq) {
            reject("non-numeric seq");
            continue;
        }
        const auto price = Price::parse(fields[2]);
        const auto bid = Price::parse(fields[3]);
        const auto ask = Price::parse(fields[4]);
        if (!price || !bid || !ask) {
            reject("non-numeric price field");
            continue;
        }
        if (price->units() <= 0 || bid->units() <= 0 || ask->units() <= 0) {
            reject("non-positive price field");
            continue;
        }
        if (*bid > *ask) {
            reject("crossed-quote");
            continue;
        }
        std::optional<std::int64_t> label;
        if (has_label) {
            label = detail::parse_int<std::int64_t>(fields[5]);
            if (!label) {
                reject("non-numeric label");
                continue;
            }
        }
        std::string asset(fields[0]);
        auto& bucket = pending[asset];
        bucket.push_back({TradeEvent{std::move(asset), *seq, *price, *bid, *ask, label}, reader.line_number()});
    }

    for (auto& [asset, rows] : pending) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const PendingTrade& a, const PendingTrade& b) { return a.event.seq < b.event.seq; });
        auto& events = table.by_asset[asset];
        events.reserve(rows.size());
        for (auto& row : rows) {
            if (!events.empty() && events.back().seq == row.event.seq) {
                table.rejected.push_back({row.line, "duplicate seq"});
                continue;
            }
            events.push_back(std::move(row.event));
        }
        table.accepted_rows += events.size();
    }
    std::sort(table.rejected.begin(), table.rejected.end(),
              [](const RejectedRow& a, const RejectedRow& b) { return a.line < b.line; });
    return table;
}

void write_trades(std::ostream& out, const TradeTable& table, const TradeFormat& format) {
    const char d = format.delimiter;
    out << join(kTradeHeader, d);
    if (table.label_column) out << d << *table.label_column;
    out << '\n';
    for (const auto& [asset, events] : table.by_asset) {
        for (const auto& e : events) {
            out << e.asset_id << d << e.seq << d << e.price.to_string() << d << e.bid.to_string() << d
                << e.ask.to_string();
            if (table.label_column) out << d << (e.label ? std::to_string(*e.label) : std::string{});
            out << '\n';
        }
    }
}

std::map<std::string, std::vector<TradeEvent>> filter_active_assets(
    const std::map<std::string, std::vector<TradeEvent>>& by_asset, const ActivityFilter& filter) {
    std::map<std::string, std::vector<TradeEvent>> kept;
    for (const auto& [asset, events] : by_asset) {
        std::set<std::int64_t> days;
        for (const auto& e : events) {
            if (!e.label) throw std::invalid_argument("activity filter needs a day label on every trade");
            days.insert(*e.label);
        }
        if (days.empty() || days.size() < filter.min_days) continue;
        const double per_day = static_cast<double>(events.size()) / static_cast<double>(days.size());
        if (per_day < filter.min_trades_per_day) continue;
        kept.emplace(asset, events);
    }
    return kept;
}

void OwnershipPanel::note_quarter(int quarter) {
    if (!quarters_) {
        quarters_ = {quarter, quarter};
    } else {
        quarters_->first = std::min(quarters_->first, quarter);
        quarters_->second = std::max(quarters_->second, quarter);
    }
}

void OwnershipPanel::add_position(const std::string& fund, const std::string& asset, int quarter, double usd) {
    if (!std::isfinite(usd)) throw std::invalid_argument("non-finite position");
    const auto [it, inserted] = positions_.emplace(PositionKey{fund, asset, quarter}, usd);
    if (!inserted) {
        throw std::invalid_argument("duplicate position key (" + fund + ", " + asset + ", " +
                                    std::to_string(quarter) + ")");
    }
    funds_by_asset_[asset].insert(fund);
    note_quarter(quarter);
}

void OwnershipPanel::add_volume(const std::string& asset, int quarter, double usd) {
    if (!std::isfinite(usd) || usd <= 0.0) throw std::invalid_argument("volume must be strictly positive");
    const auto [it, inserted] = volumes_.emplace(VolumeKey{asset, quarter}, usd);
    if (!inserted) {
        throw std::invalid_argument("duplicate volume key (" + asset + ", " + std::to_string(quarter) + ")");
    }
    note_quarter(quarter);
}

double OwnershipPanel::position(const std::string& fund, const std::string& asset, int quarter) const {
    const auto it = positions_.find(PositionKey{fund, asset, quarter});
    return it == positions_.end() ? 0.0 : it->second;
}

std::optional<double> OwnershipPanel::volume(const std::string& asset, int quarter) const {
    const auto it = volumes_.find(VolumeKey{asset, quarter});
    if (it == volumes_.end()) return std::nullopt;
    return it->second;
}

const std::set<std::string>& OwnershipPanel::funds_in(const std::string& asset) const {
    static const std::set<std::string> kNone;
    const auto it = funds_by_asset_.find(asset);
    return it == funds_by_asset_.end() ? kNone : it->second;
}

std::set<std::string> OwnershipPanel::assets() const {
    std::set<std::string> out;
    for (const auto& [asset, funds] : funds_by_asset_) out.insert(asset);
    for (const auto& [key, v] : volumes_) out.insert(key.first);
    return out;
}

std::optional<std::pair<int, int>> OwnershipPanel::quarter_range() const { return quarters_; }

OwnershipPanel OwnershipPanel::without_small_funds(double min_usd) const {
    std::map<std::pair<std::string, int>, double> totals;
    for (const auto& [key, usd] : positions_) totals[{std::get<0>(key), std::get<2>(key)}] += usd;

    OwnershipPanel out;
    for (const auto& [key, usd] : positions_) {
        const auto& [fund, asset, quarter] = key;
        if (totals.at({fund, quarter}) >= min_usd) out.add_position(fund, asset, quarter, usd);
    }
    for (const auto& [key, usd] : volumes_) out.add_volume(key.first, key.second, usd);
    out.quarters_ = quarters_;
    return out;
}

void read_positions(std::istream& in, OwnershipPanel& panel, char delimiter) {
    detail::LineReader reader(in);
    std::vector<std::string_view> fields;
    if (!read_header(reader, delimiter, kPositionHeader, fields, /*allow_extra=*/false)) return;
    std::string_view line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        if (fields.size() != kPositionHeader.size()) throw ParseError(reader.line_number(), "wrong field count");
        const auto quarter = detail::parse_int<int>(fields[2]);
        const auto usd = detail::parse_double(fields[3]);
        if (fields[0].empty() || fields[1].empty()) throw ParseError(reader.line_number(), "empty identifier");
        if (!quarter) throw ParseError(reader.line_number(), "non-numeric quarter");
        if (!usd) throw ParseError(reader.line_number(), "non-numeric position_usd");
        try {
            panel.add_position(std::string(fields[0]), std::string(fields[1]), *quarter, *usd);
        } catch (const std::invalid_argument& e) {
            throw ParseError(reader.line_number(), e.what());
        }
    }
}

void read_volumes(std::istream& in, OwnershipPanel& panel, char delimiter) {
    detail::LineReader reader(in);
    std::vector<std::string_view> fields;
    if (!read_header(reader, delimiter, kVolumeHeader, fields, /*allow_extra=*/false)) return;
    std::string_view line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delimiter, fields);
        if (fields.size() != kVolumeHeader.size()) throw ParseError(reader.line_number(), "wrong field count");
        const auto quarter = detail::parse_int<int>(fields[1]);
        const auto usd = detail::parse_double(fields[2]);
        if (fields[0].empty()) throw ParseError(reader.line_number(), "empty identifier");
        if (!quarter) throw ParseError(reader.line_number(), "non-numeric quarter");
        if (!usd) throw ParseError(reader.line_number(), "non-numeric volume_usd");
        if (*usd < 0.0) throw ParseError(reader.line_number(), "negative volume");
        try {
            panel.add_volume(std::string(fields[0]), *quarter, *usd);
        } catch (const std::invalid_argument& e) {
            throw ParseError(reader.line_number(), e.what());
        }
    }
}

OwnershipPanel parse_ownership(std::istream& positions, std::istream& volumes, char delimiter) {
    OwnershipPanel panel;
    read_positions(positions, panel, delimiter);
    read_volumes(volumes, panel, delimiter);

    std::set<int> quarters;
    for (const auto& [key, usd] : panel.positions()) quarters.insert(std::get<2>(key));
    for (const auto& [key, usd] : panel.volumes()) quarters.insert(key.second);
    if (!quarters.empty() && static_cast<int>(quarters.size()) != *quarters.rbegin() - *quarters.begin() + 1) {
        throw ParseError(0, "quarter indices are not consecutive");
    }
    return panel;
}

void write_positions(std::ostream& out, const OwnershipPanel& panel, char delimiter) {
    out << join(kPositionHeader, delimiter) << '\n';
    for (const auto& [key, usd] : panel.positions()) {
        const auto& [fund, asset, quarter] = key;
        out << fund << delimiter << asset << delimiter << quarter << delimiter << format_double(usd) << '\n';
    }
}

void write_volumes(std::ostream& out, const OwnershipPanel& panel, char delimiter) {
    out << join(kVolumeHeader, delimiter) << '\n';
    for (const auto& [key, usd] : panel.volumes()) {
        out << key.first << delimiter << key.second << delimiter << format_double(usd) << '\n';
    }
}

}  // namespace ordermem
