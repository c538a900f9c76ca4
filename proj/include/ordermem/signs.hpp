#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordermem/ingest.hpp"

namespace ordermem {

/// Market order sign: +1 buyer-initiated, -1 seller-initiated.
enum class Sign : std::int8_t { sell = -1, buy = 1 };

[[nodiscard]] constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
[[nodiscard]] constexpr Sign flip(Sign s) noexcept { return s == Sign::buy ? Sign::sell : Sign::buy; }

struct SignSeries {
    std::string asset_id;
    std::vector<Sign> signs;
    /// seq of the trade each sign came from (parallel to `signs`, may be empty
    /// for simulated series).
    std::vector<std::int64_t> seqs;
    std::size_t dropped_count = 0;

    [[nodiscard]] std::size_t size() const noexcept { return signs.size(); }
    friend bool operator==(const SignSeries&, const SignSeries&) = default;
};

/// (bid + ask) / 2. Throws std::invalid_argument unless 0 < bid <= ask.
[[nodiscard]] Price mid_price(Price bid, Price ask);

/// Mid-price rule: +1 above the prevailing mid, -1 below, trades exactly at
/// the mid are dropped and counted. Comparison is exact (2p against b + a).
[[nodiscard]] SignSeries extract_signs(std::span<const TradeEvent> trades);

}  // namespace ordermem
