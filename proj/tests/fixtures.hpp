#pragma once

// Small synthetic input files shared by the CLI tests and the acceptance run.

#include <sstream>
#include <string>

#include "ordermem/lmf.hpp"

namespace fixture {

// Trades for `assets` symbols over quarters 2 and 3: prices sit above or
// below the mid according to an LMF sign series, with a few at the mid.
inline std::string synthetic_trades(int assets, std::size_t per_quarter) {
    std::ostringstream t;
    t << "asset,seq,price,bid,ask,quarter\n";
    for (int a = 0; a < assets; ++a) {
        const auto sim = ordermem::simulate(ordermem::LmfConfig{1 + a, 1.5, 2 * per_quarter, static_cast<std::uint64_t>(a), 1});
        for (std::size_t i = 0; i < sim.signs.size(); ++i) {
            const char* price = i % 97 == 0 ? "100.5" : (sim.signs.signs[i] == ordermem::Sign::buy ? "100.75" : "100.25");
            t << "S" << a << "," << i + 1 << "," << price << ",100,101," << (i < per_quarter ? 2 : 3) << "\n";
        }
    }
    return t.str();
}

inline std::string synthetic_ownership(int assets, std::string& volumes) {
    std::ostringstream p, v;
    p << "fund,asset,quarter,position_usd\n";
    v << "asset,quarter,volume_usd\n";
    for (int q = 1; q <= 3; ++q) {
        for (int a = 0; a < assets; ++a) {
            for (int f = 0; f < 3; ++f) p << "F" << f << ",S" << a << "," << q << "," << (a + 1) * (q * 37 + f * 11) % 500 + 1 << "\n";
            v << "S" << a << "," << q << "," << 1000 + a * 10 << "\n";
        }
    }
    volumes = v.str();
    return p.str();
}

}  // namespace fixture
