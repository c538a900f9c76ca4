#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ordermem {

/// Hard parse failure: the whole input is unusable.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Fixed-point decimal price in units of 1e-9. Parsed values carry at most
/// 8 decimals so that a mid-price (bid + ask) / 2 is always exact.
class Price {
public:
    static constexpr std::int64_t kUnitsPerOne = 1'000'000'000;
    static constexpr int kMaxParsedDecimals = 8;

    constexpr Price() = default;
    static constexpr Price from_units(std::int64_t units) { return Price{units}; }

    /// Parses a plain decimal such as "101.5". Returns nullopt on anything
    /// else (sign, exponent, too many decimals, overflow).
    static std::optional<Price> parse(std::string_view text);

    [[nodiscard]] constexpr std::int64_t units() const noexcept { return units_; }
    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(units_) / static_cast<double>(kUnitsPerOne);
    }
    /// Shortest decimal form: "101.5", "100", "0.25".
    [[nodiscard]] std::string to_string() const;

    friend constexpr auto operator<=>(Price, Price) = default;

private:
    constexpr explicit Price(std::int64_t units) : units_(units) {}
    std::int64_t units_ = 0;
};

struct TradeEvent {
    std::string asset_id;
    std::int64_t seq = 0;
    Price price;
    Price bid;
    Price ask;
    /// Optional trailing column (trading day, week, quarter...) used for
    /// windowing and the activity filter.
    std::optional<std::int64_t> label;

    friend bool operator==(const TradeEvent&, const TradeEvent&) = default;
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct TradeFormat {
    char delimiter = ',';
};

struct TradeTable {
    std::map<std::string, std::vector<TradeEvent>> by_asset;
    std::vector<RejectedRow> rejected;
    std::size_t total_rows = 0;
    std::size_t accepted_rows = 0;
    /// Name of the optional sixth column, when the header carries one.
    std::optional<std::string> label_column;
};

/// Reads `asset,seq,price,bid,ask[,label]`. Malformed rows are rejected and
/// counted; only a bad header is a hard error. Events come back ordered by
/// seq within each asset; a repeated seq rejects the later row.
TradeTable parse_trades(std::istream& in, const TradeFormat& format = {});

void write_trades(std::ostream& out, const TradeTable& table, const TradeFormat& format = {});

struct ActivityFilter {
    std::size_t min_days = 200;
    double min_trades_per_day = 200.0;
};

/// Keeps assets with at least `min_days` distinct day labels and an average
/// of at least `min_trades_per_day` trades per labelled day. Requires every
/// event to carry a label.
std::map<std::string, std::vector<TradeEvent>> filter_active_assets(
    const std::map<std::string, std::vector<TradeEvent>>& by_asset, const ActivityFilter& filter);

/// Fund positions W(fund, asset, quarter) and traded volume V(asset, quarter),
/// both in dollars. Absent positions read as zero.
class OwnershipPanel {
public:
    void add_position(const std::string& fund, const std::string& asset, int quarter, double usd);
    void add_volume(const std::string& asset, int quarter, double usd);

    [[nodiscard]] double position(const std::string& fund, const std::string& asset, int quarter) const;
    [[nodiscard]] std::optional<double> volume(const std::string& asset, int quarter) const;

    /// Funds with at least one recorded position in `asset` (any quarter).
    [[nodiscard]] const std::set<std::string>& funds_in(const std::string& asset) const;
    [[nodiscard]] std::set<std::string> assets() const;
    [[nodiscard]] std::optional<std::pair<int, int>> quarter_range() const;

    /// Drops every position of a fund in quarter q when the fund's total
    /// invested amount in q is below `min_usd`.
    [[nodiscard]] OwnershipPanel without_small_funds(double min_usd) const;

    using PositionKey = std::tuple<std::string, std::string, int>;
    using VolumeKey = std::pair<std::string, int>;
    [[nodiscard]] const std::map<PositionKey, double>& positions() const noexcept { return positions_; }
    [[nodiscard]] const std::map<VolumeKey, double>& volumes() const noexcept { return volumes_; }

private:
    void note_quarter(int quarter);

    std::map<PositionKey, double> positions_;
    std::map<VolumeKey, double> volumes_;
    std::map<std::string, std::set<std::string>> funds_by_asset_;
    std::optional<std::pair<int, int>> quarters_;
};

/// Appends rows of `fund,asset,quarter,position_usd` to the panel.
void read_positions(std::istream& in, OwnershipPanel& panel, char delimiter = ',');
/// Appends rows of `asset,quarter,volume_usd` to the panel.
void read_volumes(std::istream& in, OwnershipPanel& panel, char delimiter = ',');

/// Both files; every problem is a hard ParseError. Quarter indices across the
/// panel must form one consecutive range.
OwnershipPanel parse_ownership(std::istream& positions, std::istream& volumes, char delimiter = ',');

void write_positions(std::ostream& out, const OwnershipPanel& panel, char delimiter = ',');
void write_volumes(std::ostream& out, const OwnershipPanel& panel, char delimiter = ',');

/// Shortest round-trip text for a double.
std::string format_double(double value);

}  // namespace ordermem
