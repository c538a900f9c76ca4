#include "ordermem/memory.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ordermem {

double RunTable::at(Sign s, int kappa) const {
    if (kappa < 1 || kappa > kappa_max_) throw std::out_of_range("kappa " + std::to_string(kappa) + " not in table");
    return s == Sign::buy ? pos_[kappa - 1] : neg_[kappa - 1];
}

RunTable run_probabilities(std::span<const Sign> signs, int kappa_max, RunConvention convention) {
    if (kappa_max < 1) throw std::invalid_argument("kappa_max must be >= 1");
    if (signs.empty()) throw std::invalid_argument("run probability of an empty series");
    const int extra = convention == RunConvention::kappa_plus_one_signs ? 1 : 0;
    const auto widest = static_cast<std::size_t>(kappa_max + extra);
    if (signs.size() < widest) throw std::invalid_argument("series shorter than the run window");

    // hist[s][r]: positions whose same-sign run (ending there) has length
    // min(r, widest). A window of width w ending at i is all-s iff that run
    // is at least w long.
    std::array<std::vector<std::size_t>, 2> hist{std::vector<std::size_t>(widest + 1),
                                                 std::vector<std::size_t>(widest + 1)};
    std::size_t run = 0;
    Sign previous = signs.front();
    for (const Sign s : signs) {
        run = (s == previous) ? run + 1 : 1;
        previous = s;
        ++hist[s == Sign::buy ? 1 : 0][std::min(run, widest)];
    }

    std::vector<double> neg(static_cast<std::size_t>(kappa_max));
    std::vector<double> pos(static_cast<std::size_t>(kappa_max));
    for (int side = 0; side < 2; ++side) {
        std::size_t at_least = 0;
        auto& out = side ? pos : neg;
        std::vector<std::size_t> tail(widest + 1);
        for (std::size_t w = widest; w >= 1; --w) {
            at_least += hist[side][w];
            tail[w] = at_least;
        }
        for (int kappa = 1; kappa <= kappa_max; ++kappa) {
            const auto w = static_cast<std::size_t>(kappa + extra);
            out[static_cast<std::size_t>(kappa - 1)] =
                static_cast<double>(tail[w]) / static_cast<double>(signs.size() - w + 1);
        }
    }
    return RunTable(kappa_max, std::move(neg), std::move(pos));
}

double run_probability(std::span<const Sign> signs, int kappa, Sign s, RunConvention convention) {
    return run_probabilities(signs, kappa, convention).at(s, kappa);
}

AcfCurve make_curve(std::vector<double> values, std::size_t n) {
    if (n == 0) throw std::invalid_argument("curve length must be positive");
    for (const double v : values) {
        if (!(std::abs(v) <= 1.0 + 1e-9)) throw std::invalid_argument("autocorrelation value outside [-1, 1]");
    }
    AcfCurve curve;
    curve.values = std::move(values);
    curve.n = n;
    curve.noise_level = 2.0 / std::sqrt(static_cast<double>(n));
    return curve;
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!raw) throw std::bad_alloc();
    return FftwBuffer<T>(raw);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (!plan_) throw std::runtime_error("FFTW planning failed");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        const std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    [[nodiscard]] fftw_plan get() const noexcept { return plan_; }

private:
    fftw_plan plan_;
};

// Block length trades FFT size against the per-block overhead of computing
// tau_max extra lags.
std::size_t fft_size(std::size_t n, std::size_t tau_max) {
    const std::size_t whole = std::bit_ceil(n + tau_max);
    const std::size_t blocked = std::max<std::size_t>(std::size_t{1} << 15, std::bit_ceil(8 * (tau_max + 1)));
    return std::min(whole, blocked);
}

double value_of(Sign s) { return static_cast<double>(to_int(s)); }
double value_of(double x) { return x; }

template <class T>
AcfCurve autocorrelation_impl(std::span<const T> x, std::size_t tau_max) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("autocorrelation needs at least 2 points");
    if (tau_max < 1 || tau_max >= n) {
        throw std::invalid_argument("tau_max must satisfy 1 <= tau_max < N (N = " + std::to_string(n) + ")");
    }

    long double sum = 0.0L;
    for (const auto& v : x) sum += value_of(v);
    const double mean = static_cast<double>(sum / static_cast<long double>(n));
    long double ss = 0.0L;
    for (const auto& v : x) {
        const double d = value_of(v) - mean;
        ss += static_cast<long double>(d) * d;
    }
    if (ss <= 0.0L) throw std::domain_error("degenerate series (zero variance)");

    const std::size_t size = fft_size(n, tau_max);
    const std::size_t block = size - tau_max;
    const std::size_t bins = size / 2 + 1;

    auto head = fftw_buffer<double>(size);
    auto span_buf = fftw_buffer<double>(size);
    auto head_hat = fftw_buffer<fftw_complex>(bins);
    auto span_hat = fftw_buffer<fftw_complex>(bins);
    auto lagged = fftw_buffer<double>(size);

    std::unique_ptr<Plan> forward;
    std::unique_ptr<Plan> inverse;
    {
        const std::lock_guard lock(planner_mutex());
        const int len = static_cast<int>(size);
        forward = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(len, head.get(), head_hat.get(), FFTW_ESTIMATE));
        inverse = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(len, span_hat.get(), lagged.get(), FFTW_ESTIMATE));
    }

    // sum_i a_i y_{i+tau} over each block, where a is the block and y the
    // block extended by tau_max; the FFT size leaves room so nothing wraps.
    std::vector<long double> acc(tau_max + 1, 0.0L);
    for (std::size_t start = 0; start < n; start += block) {
        const std::size_t a_len = std::min(block, n - start);
        const std::size_t y_len = std::min(block + tau_max, n - start);
        for (std::size_t i = 0; i < size; ++i) {
            const double d = i < y_len ? value_of(x[start + i]) - mean : 0.0;
            span_buf[i] = d;
            head[i] = i < a_len ? d : 0.0;
        }
        fftw_execute_dft_r2c(forward->get(), head.get(), head_hat.get());
        fftw_execute_dft_r2c(forward->get(), span_buf.get(), span_hat.get());
        for (std::size_t k = 0; k < bins; ++k) {
            const std::complex<double> a(head_hat[k][0], -head_hat[k][1]);
            const std::complex<double> y(span_hat[k][0], span_hat[k][1]);
            const auto z = a * y;
            span_hat[k][0] = z.real();
            span_hat[k][1] = z.imag();
        }
        fftw_execute_dft_c2r(inverse->get(), span_hat.get(), lagged.get());
        for (std::size_t tau = 0; tau <= tau_max; ++tau) acc[tau] += lagged[tau];
    }

    const long double scale = static_cast<long double>(size) * ss;
    std::vector<double> values(tau_max);
    for (std::size_t tau = 1; tau <= tau_max; ++tau) {
        values[tau - 1] = static_cast<double>(acc[tau] / scale);
    }
    return make_curve(std::move(values), n);
}

}  // namespace

AcfCurve autocorrelation(std::span<const Sign> signs, std::size_t tau_max) {
    return autocorrelation_impl(signs, tau_max);
}

AcfCurve autocorrelation(std::span<const double> series, std::size_t tau_max) {
    return autocorrelation_impl(series, tau_max);
}

PowerLawFit fit_power_law(const AcfCurve& curve, std::size_t fit_min, std::size_t fit_max) {
    if (fit_min < 1) throw std::invalid_argument("fit_min must be >= 1");
    const std::size_t last = std::min(fit_max, curve.tau_max());

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t tau = fit_min; tau <= last; ++tau) {
        const double c = curve.at(tau);
        if (c > 0.0) {
            xs.push_back(std::log(static_cast<double>(tau)));
            ys.push_back(std::log(c));
        }
    }
    if (xs.size() < 3) throw std::domain_error("insufficient positive support for power-law fit");

    const auto count = static_cast<long double>(xs.size());
    long double mx = 0.0L;
    long double my = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    long double sxx = 0.0L;
    long double sxy = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const long double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    const long double slope = sxy / sxx;
    const long double intercept = my - slope * mx;
    return PowerLawFit{static_cast<double>(std::exp(intercept)), static_cast<double>(-slope), xs.size()};
}

std::size_t memory_length(const AcfCurve& curve) { return memory_length(curve, curve.noise_level); }

std::size_t memory_length(const AcfCurve& curve, double noise_level) {
    std::size_t tau = 0;
    while (tau < curve.values.size() && curve.values[tau] > noise_level) ++tau;
    return tau;
}

MemoryMetrics compute_metrics(std::span<const Sign> signs, const MemoryOptions& options) {
    MemoryMetrics m;
    m.n = signs.size();
    m.pi = run_probabilities(signs, options.kappa_max, options.convention);
    if (signs.size() < 2) throw std::invalid_argument("autocorrelation needs at least 2 points");

    const std::size_t tau_max = std::min(options.tau_max, signs.size() - 1);
    const AcfCurve curve = autocorrelation(signs, tau_max);
    m.tau_star = memory_length(curve);
    m.tau_star_scaled = static_cast<double>(m.tau_star) / static_cast<double>(m.n);

    m.fit_min = options.fit_min;
    m.fit_max = std::min(options.fit_max.value_or(std::min<std::size_t>(m.tau_star, 1000)), tau_max);
    const PowerLawFit fit = fit_power_law(curve, m.fit_min, m.fit_max);
    m.a = fit.a;
    m.b = fit.b;
    return m;
}

}  // namespace ordermem
