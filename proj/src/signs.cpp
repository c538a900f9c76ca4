#include "ordermem/signs.hpp"

#include <stdexcept>

namespace ordermem {

Price mid_price(Price bid, Price ask) {
    if (bid.units() <= 0 || ask.units() <= 0) throw std::invalid_argument("mid_price: quotes must be positive");
    if (bid > ask) throw std::invalid_argument("mid_price: crossed quote (bid > ask)");
    // Both are below 2^62 for any parsed price, so the sum cannot overflow.
    return Price::from_units(bid.units() + (ask.units() - bid.units()) / 2);
}

SignSeries extract_signs(std::span<const TradeEvent> trades) {
    SignSeries out;
    if (!trades.empty()) out.asset_id = trades.front().asset_id;
    out.signs.reserve(trades.size());
    out.seqs.reserve(trades.size());
    for (const auto& t : trades) {
        if (t.bid.units() <= 0 || t.ask.units() <= 0 || t.bid > t.ask) {
            throw std::invalid_argument("extract_signs: invalid quote at seq " + std::to_string(t.seq));
        }
        const auto twice_price = 2 * t.price.units();
        const auto twice_mid = t.bid.units() + t.ask.units();
        if (twice_price == twice_mid) {
            ++out.dropped_count;
            continue;
        }
        out.signs.push_back(twice_price > twice_mid ? Sign::buy : Sign::sell);
        out.seqs.push_back(t.seq);
    }
    return out;
}

}  // namespace ordermem
