#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "ordermem/lmf.hpp"
#include "ordermem/memory.hpp"

using namespace ordermem;

namespace {

std::vector<Sign> from_ints(std::initializer_list<int> xs) {
    std::vector<Sign> out;
    for (int x : xs) out.push_back(x > 0 ? Sign::buy : Sign::sell);
    return out;
}

std::vector<Sign> alternating(std::size_t n) {
    std::vector<Sign> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i % 2 == 0 ? Sign::buy : Sign::sell;
    return out;
}

AcfCurve power_curve(double a, double b, std::size_t tau_max, std::size_t n) {
    std::vector<double> values(tau_max);
    for (std::size_t t = 1; t <= tau_max; ++t) values[t - 1] = a * std::pow(static_cast<double>(t), -b);
    return make_curve(std::move(values), n);
}

}  // namespace

TEST_CASE("run_probability examples") {
    CHECK(run_probability(from_ints({1, 1, 1, 1}), 2, Sign::buy) == 1.0);
    CHECK(run_probability(from_ints({1, -1, 1, -1}), 2, Sign::buy) == 0.0);

    const auto signs = oracle::fair_signs(1'000'000, 11);
    CHECK(std::fabs(run_probability(signs, 3, Sign::buy) - 0.125) <= 0.002);
}

TEST_CASE("run_probability errors and conventions") {
    CHECK_THROWS_AS((void)run_probability({}, 1, Sign::buy), std::invalid_argument);
    CHECK_THROWS_AS((void)run_probability(from_ints({1, 1}), 3, Sign::buy), std::invalid_argument);
    CHECK_THROWS_AS((void)run_probability(from_ints({1, 1}), 0, Sign::buy), std::invalid_argument);

    // kappa + 1 reading: kappa = 2 spans three signs
    const auto s = from_ints({1, 1, 1, -1});
    CHECK(run_probability(s, 2, Sign::buy, RunConvention::kappa_plus_one_signs) == doctest::Approx(0.5));
    CHECK(run_probability(s, 2, Sign::buy) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("run table agrees with brute-force window counts and is monotone in kappa") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng.below(300);
        std::vector<Sign> s(n);
        // sticky chain so that long runs occur
        Sign cur = Sign::buy;
        for (auto& x : s) {
            if (rng.below(10) < 3) cur = flip(cur);
            x = cur;
        }
        const auto table = run_probabilities(s, 10);
        for (int k = 1; k <= 10; ++k) {
            for (Sign sign : {Sign::sell, Sign::buy}) {
                CHECK(table.at(sign, k) == doctest::Approx(oracle::run_frequency(s, static_cast<std::size_t>(k), sign))
                                               .epsilon(1e-15));
                if (k > 1) CHECK(table.at(sign, k) <= table.at(sign, k - 1));
            }
        }
        CHECK_THROWS_AS((void)table.at(Sign::buy, 11), std::out_of_range);
    }
}

TEST_CASE("autocorrelation examples") {
    const auto alt = alternating(1000);
    const auto curve = autocorrelation(alt, 5);
    const auto direct = oracle::acf_direct(oracle::as_doubles(alt), 5);
    CHECK(curve.at(1) == doctest::Approx(direct[0]).epsilon(1e-12));
    CHECK(curve.at(1) == doctest::Approx(-0.999).epsilon(1e-12));
    CHECK(curve.noise_level == doctest::Approx(2.0 / std::sqrt(1000.0)));

    const auto iid = oracle::fair_signs(1'000'000, 12);
    CHECK(std::fabs(autocorrelation(iid, 10).at(5)) <= 0.003);

    CHECK_THROWS_WITH_AS((void)autocorrelation(from_ints({1, 1, 1}), 1), doctest::Contains("degenerate series"), std::domain_error);
    CHECK_THROWS_AS((void)autocorrelation(from_ints({1, -1, 1}), 3), std::invalid_argument);
    CHECK_THROWS_AS((void)autocorrelation(from_ints({1, -1, 1}), 0), std::invalid_argument);
}

TEST_CASE("FFT autocorrelation matches the direct sum") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 10 + rng.below(5000);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform_open_zero() - 0.5 + (rng.coin() ? 0.3 : 0.0);
        const std::size_t tau_max = 1 + rng.below(n - 1);
        const auto fast = autocorrelation(std::span<const double>(x), tau_max);
        const auto slow = oracle::acf_direct(x, tau_max);
        double worst = 0.0;
        for (std::size_t t = 0; t < tau_max; ++t) worst = std::max(worst, std::fabs(fast.values[t] - slow[t]));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("blocked FFT path matches the direct sum on a long series") {
    // long enough that several blocks are needed
    const auto s = oracle::fair_signs(300'000, 3);
    const auto fast = autocorrelation(s, 40);
    const auto slow = oracle::acf_direct(oracle::as_doubles(s), 40);
    for (std::size_t t = 0; t < 40; ++t) CHECK(std::fabs(fast.values[t] - slow[t]) <= 1e-9);
}

TEST_CASE("sign flip leaves the ACF unchanged and swaps run tables") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = oracle::fair_signs(200 + rng.below(2000), 100 + static_cast<std::uint64_t>(trial));
        auto flipped = s;
        for (auto& x : flipped) x = flip(x);
        const auto c1 = autocorrelation(s, 20);
        const auto c2 = autocorrelation(flipped, 20);
        for (std::size_t t = 1; t <= 20; ++t) CHECK(c1.at(t) == doctest::Approx(c2.at(t)).epsilon(1e-12));
        const auto p1 = run_probabilities(s, 5);
        const auto p2 = run_probabilities(flipped, 5);
        for (int k = 1; k <= 5; ++k) CHECK(p1.at(Sign::buy, k) == p2.at(Sign::sell, k));
    }
}

TEST_CASE("fit_power_law recovers noiseless curves") {
    const auto fit = fit_power_law(power_curve(0.4, 0.6, 1000, 1'000'000), 1, 1000);
    CHECK(std::fabs(fit.a - 0.4) <= 1e-10);
    CHECK(std::fabs(fit.b - 0.6) <= 1e-10);
    CHECK(fit.points == 1000);

    const auto flat = fit_power_law(make_curve(std::vector<double>(50, 0.25), 100), 1, 50);
    CHECK(std::fabs(flat.b) <= 1e-12);
    CHECK(std::fabs(flat.a - 0.25) <= 1e-12);

    for (double a : {0.01, 0.1, 0.4, 1.0}) {
        for (double b : {0.1, 0.5, 0.6, 1.0, 1.5}) {
            const auto f = fit_power_law(power_curve(a, b, 1000, 1'000'000), 1, 1000);
            CHECK(std::fabs(f.a - a) <= 1e-9);
            CHECK(std::fabs(f.b - b) <= 1e-9);
        }
    }
}

TEST_CASE("fit_power_law skips non-positive lags and needs three points") {
    std::vector<double> v{0.5, -0.1, 0.25, 0.0, 0.125};
    // positive lags 1, 3, 5
    const auto fit = fit_power_law(make_curve(v, 100), 1, 5);
    CHECK(fit.points == 3);
    std::vector<double> x{0.0, std::log(3.0), std::log(5.0)};
    std::vector<double> y{std::log(0.5), std::log(0.25), std::log(0.125)};
    CHECK(fit.b == doctest::Approx(-oracle::ols_slope(x, y)).epsilon(1e-12));

    CHECK_THROWS_WITH_AS((void)fit_power_law(make_curve({0.5, -0.1, 0.25, 0.0}, 100), 1, 4),
                         doctest::Contains("insufficient positive support"), std::domain_error);
}

TEST_CASE("LMF M=1 series has the predicted exponent") {
    const auto sim = simulate(LmfConfig{1, 1.5, 2'000'000, 2024, 1});
    const auto curve = autocorrelation(sim.signs.signs, 1000);
    const auto fit = fit_power_law(curve, 10, 1000);
    CHECK(std::fabs(fit.b - 0.5) <= 0.1);
}

TEST_CASE("memory_length examples") {
    CHECK(memory_length(make_curve({0.5, 0.4, 0.001, 0.3}, 1'000'000), 0.002) == 2);
    CHECK(memory_length(make_curve({0.001, 0.0015, -0.3}, 1'000'000), 0.002) == 0);
    // the curve's own noise level is 2/sqrt(N)
    CHECK(memory_length(make_curve({0.5, 0.4, 0.001, 0.3}, 1'000'000)) == 2);

    const auto c = [](double t) { return 0.4 * std::pow(t, -0.6); };
    const std::size_t expected = oracle::first_passage(c, 0.002, 100'000);
    const auto curve = power_curve(0.4, 0.6, 100'000, 1'000'000);
    CHECK(curve.noise_level == 0.002);
    CHECK(memory_length(curve) == expected);
    CHECK(expected == 6839);
}

TEST_CASE("property: tau* bounded and monotone in the noise level") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 1 + rng.below(200);
        std::vector<double> v(len);
        for (auto& x : v) x = rng.uniform_open_zero() * 0.2 - 0.02;
        const auto curve = make_curve(v, 10'000);
        const double lo = rng.uniform_open_zero() * 0.05;
        const double hi = lo + rng.uniform_open_zero() * 0.05;
        CHECK(memory_length(curve, lo) <= curve.tau_max());
        CHECK(memory_length(curve, hi) <= memory_length(curve, lo));
    }
}

TEST_CASE("compute_metrics composition") {
    SUBCASE("alternating") {
        const auto m = compute_metrics(alternating(1000), MemoryOptions{10, 100, 1, 10});
        CHECK(m.pi.at(Sign::buy, 2) == 0.0);
        CHECK(m.tau_star == 0);
        CHECK(m.tau_star_scaled == 0.0);
        CHECK(m.n == 1000);
    }
    SUBCASE("i.i.d.: b indistinguishable from 0, tau* near 0") {
        const auto s = oracle::fair_signs(1'000'000, 13);
        const auto m = compute_metrics(s, MemoryOptions{10, 1000, 1, 1000});
        CHECK(m.tau_star <= 3);

        // standard error of the slope from the regression residuals
        const auto curve = autocorrelation(s, 1000);
        std::vector<double> x, y;
        for (std::size_t t = 1; t <= 1000; ++t) {
            if (curve.at(t) <= 0.0) continue;
            x.push_back(std::log(static_cast<double>(t)));
            y.push_back(std::log(curve.at(t)));
        }
        const double slope = oracle::ols_slope(x, y);
        CHECK(-slope == doctest::Approx(m.b).epsilon(1e-9));
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
        mx /= static_cast<double>(x.size());
        my /= static_cast<double>(y.size());
        double sxx = 0, rss = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            const double r = y[i] - my - slope * (x[i] - mx);
            rss += r * r;
        }
        const double se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
        CHECK(std::fabs(m.b) <= 3.0 * se);
    }
    SUBCASE("more meta-orders lower the pre-factor") {
        const auto one = simulate(LmfConfig{1, 1.5, 1'000'000, 5, 1});
        const auto ten = simulate(LmfConfig{10, 1.5, 1'000'000, 5, 1});
        const MemoryOptions opt{10, 1000, 10, 1000};
        CHECK(compute_metrics(ten.signs.signs, opt).a < compute_metrics(one.signs.signs, opt).a);
    }
    SUBCASE("tau_max is clamped and fit_max defaults to min(tau*, 1000)") {
        const auto sim = simulate(LmfConfig{1, 1.5, 5000, 1, 1});
        const auto m = compute_metrics(sim.signs.signs, MemoryOptions{});
        CHECK(m.fit_max == std::min<std::size_t>(m.tau_star, 1000));
        CHECK(m.tau_star <= 4999);
        CHECK(m.tau_star_scaled == doctest::Approx(static_cast<double>(m.tau_star) / 5000.0));
    }
}

TEST_CASE("compute_metrics is deterministic") {
    const auto sim = simulate(LmfConfig{3, 1.4, 100'000, 17, 1});
    const MemoryOptions opt{10, 2000, 10, 1000};
    CHECK(compute_metrics(sim.signs.signs, opt) == compute_metrics(sim.signs.signs, opt));
}
