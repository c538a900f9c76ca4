#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ordermem/random.hpp"
#include "ordermem/signs.hpp"

using namespace ordermem;

namespace {

Price price(const char* text) { return Price::parse(text).value(); }

TradeEvent trade(std::int64_t seq, const char* p, const char* bid, const char* ask) {
    return TradeEvent{"X", seq, price(p), price(bid), price(ask), std::nullopt};
}

}  // namespace

TEST_CASE("mid_price") {
    CHECK(mid_price(price("101.00"), price("102.00")) == price("101.50"));
    CHECK(mid_price(price("100.00"), price("100.00")) == price("100.00"));
    CHECK(mid_price(price("0.01"), price("0.02")) == price("0.015"));
    CHECK_THROWS_AS((void)mid_price(price("102.00"), price("101.00")), std::invalid_argument);
    CHECK_THROWS_AS((void)mid_price(Price{}, price("1")), std::invalid_argument);
}

TEST_CASE("extract_signs applies the mid-price rule") {
    SUBCASE("above mid") {
        const std::vector<TradeEvent> trades{trade(1, "101.75", "101", "102")};
        const auto s = extract_signs(trades);
        REQUIRE(s.size() == 1);
        CHECK(s.signs[0] == Sign::buy);
    }
    SUBCASE("at mid is dropped") {
        const std::vector<TradeEvent> trades{trade(1, "101.50", "101", "102")};
        const auto s = extract_signs(trades);
        CHECK(s.size() == 0);
        CHECK(s.dropped_count == 1);
    }
    SUBCASE("composition keeps order") {
        const std::vector<TradeEvent> trades{trade(1, "101.75", "101", "102"), trade(2, "101.50", "101", "102"),
                                             trade(3, "101.25", "101", "102")};
        const auto s = extract_signs(trades);
        CHECK(s.signs == std::vector<Sign>{Sign::buy, Sign::sell});
        CHECK(s.seqs == std::vector<std::int64_t>{1, 3});
        CHECK(s.dropped_count == 1);
        CHECK(s.size() == trades.size() - s.dropped_count);
    }
    SUBCASE("sub-tick distance from mid still counts") {
        const std::vector<TradeEvent> trades{trade(1, "100.00000001", "100", "100")};
        CHECK(extract_signs(trades).signs == std::vector<Sign>{Sign::buy});
    }
}

TEST_CASE("property: scale invariance and reflection through the mid") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<TradeEvent> trades;
        std::vector<TradeEvent> scaled;
        std::vector<TradeEvent> reflected;
        const auto k = static_cast<std::int64_t>(1 + rng.below(50));
        const int count = static_cast<int>(rng.below(40));
        for (int i = 0; i < count; ++i) {
            const auto bid = static_cast<std::int64_t>(100 + rng.below(1000)) * 1'000'000;  // 0.001 ticks
            const auto ask = bid + static_cast<std::int64_t>(rng.below(6)) * 1'000'000;
            const auto p = bid + static_cast<std::int64_t>(rng.below(7)) * 1'000'000 - 1'000'000;
            const auto make = [&](std::int64_t pu, std::int64_t bu, std::int64_t au) {
                return TradeEvent{"X", i, Price::from_units(pu), Price::from_units(bu), Price::from_units(au), {}};
            };
            trades.push_back(make(p, bid, ask));
            scaled.push_back(make(p * k, bid * k, ask * k));
            reflected.push_back(make(bid + ask - p, bid, ask));
        }
        const auto base = extract_signs(trades);
        CHECK(extract_signs(scaled) == base);

        const auto mirror = extract_signs(reflected);
        CHECK(mirror.dropped_count == base.dropped_count);
        REQUIRE(mirror.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) CHECK(mirror.signs[i] == flip(base.signs[i]));
    }
}

TEST_CASE("invalid quotes propagate as errors") {
    std::vector<TradeEvent> trades{trade(1, "10", "9", "11")};
    trades[0].bid = price("12");
    CHECK_THROWS_AS((void)extract_signs(trades), std::invalid_argument);
}
