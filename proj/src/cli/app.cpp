#include "ordermem/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "ordermem/activity.hpp"
#include "ordermem/classify.hpp"
#include "ordermem/cli/panel.hpp"
#include "ordermem/cli/tables.hpp"
#include "ordermem/detail/csv.hpp"
#include "ordermem/detection.hpp"
#include "ordermem/ingest.hpp"
#include "ordermem/lmf.hpp"
#include "ordermem/memory.hpp"
#include "ordermem/parallel.hpp"
#include "ordermem/signs.hpp"

namespace ordermem::cli {

namespace {

struct Output {
    std::string path;
    bool json = false;
};

// Runs `body`, converting data-level failures into a StageError for `stage`.
template <class F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const ParseError& e) {
        throw StageError(stage, e.what());
    } catch (const std::invalid_argument& e) {
        throw StageError(stage, e.what());
    } catch (const std::domain_error& e) {
        throw StageError(stage, e.what());
    } catch (const std::out_of_range& e) {
        throw StageError(stage, e.what());
    }
}

std::unique_ptr<std::ifstream> open_input(const std::string& path) {
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw StageError("io", "cannot open '" + path + "' for reading");
    return in;
}

// Writes to the --out file when given, else to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw StageError("io", "cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("ORDERMEM_SEED")) {
        const auto parsed = detail::parse_int<std::uint64_t>(env);
        if (!parsed) throw StageError("config", "ORDERMEM_SEED is not an unsigned integer");
        return *parsed;
    }
    return 0;
}

void add_output_flags(CLI::App* sub, Output& output) {
    sub->add_option("-o,--out", output.path, "Output file (default: stdout)");
    sub->add_flag("--json", output.json, "Write a JSON array of row objects instead of CSV");
}

// ---------------------------------------------------------------- signs

struct SignsArgs {
    std::string trades;
    Output output;
    bool filter = false;
    std::size_t min_days = 200;
    double min_trades_per_day = 200.0;
};

void run_signs(const SignsArgs& args, std::ostream& out, std::ostream& err) {
    const TradeTable table = in_stage("ingest", [&] {
        auto in = open_input(args.trades);
        return parse_trades(*in);
    });
    for (const auto& row : table.rejected) err << "ingest: line " << row.line << ": rejected: " << row.reason << '\n';
    err << "ingest: " << table.accepted_rows << " accepted, " << table.rejected.size() << " rejected of "
        << table.total_rows << " rows\n";

    auto by_asset = table.by_asset;
    if (args.filter) {
        by_asset = in_stage("ingest", [&] {
            return filter_active_assets(table.by_asset, ActivityFilter{args.min_days, args.min_trades_per_day});
        });
        err << "ingest: " << by_asset.size() << " of " << table.by_asset.size() << " assets pass the activity filter\n";
    }

    Sink sink(args.output.path, out);
    std::vector<std::string> columns{"asset", "seq", "sign"};
    if (table.label_column) columns.push_back(*table.label_column);
    RowWriter writer(sink.stream(), columns, args.output.json);
    std::size_t dropped = 0;
    for (const auto& [asset, events] : by_asset) {
        const SignSeries series = in_stage("signs", [&] { return extract_signs(events); });
        dropped += series.dropped_count;
        std::size_t e = 0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            while (events[e].seq != series.seqs[i]) ++e;
            writer.text(asset).integer(series.seqs[i]).integer(to_int(series.signs[i]));
            if (table.label_column) writer.integer(events[e].label.value_or(0));
            writer.end_row();
        }
    }
    writer.finish();
    err << "signs: " << dropped << " trades at the mid-price dropped\n";
}

// ---------------------------------------------------------------- memory

struct MemoryArgs {
    std::string signs;
    Output output;
    int kappa_max = 10;
    std::size_t tau_max = 10'000;
    std::size_t fit_min = 1;
    std::optional<std::size_t> fit_max;
    std::string window = "all";
    std::string convention = "kappa";
    std::size_t threads = default_threads();
};

struct WindowTask {
    const std::string* asset;
    std::int64_t window;
    std::span<const Sign> signs;
};

std::vector<WindowTask> make_windows(const SignTable& table, const std::string& policy, std::ostream& err) {
    std::vector<WindowTask> tasks;
    if (policy == "all") {
        for (const auto& [asset, column] : table.by_asset) tasks.push_back({&asset, 0, column.signs});
        return tasks;
    }
    if (const auto size = detail::parse_int<std::size_t>(policy)) {
        if (*size == 0) throw StageError("config", "--window size must be positive");
        for (const auto& [asset, column] : table.by_asset) {
            const std::span<const Sign> all(column.signs);
            const std::size_t full = all.size() / *size;
            for (std::size_t w = 0; w < full; ++w) {
                tasks.push_back({&asset, static_cast<std::int64_t>(w), all.subspan(w * *size, *size)});
            }
            if (all.size() % *size != 0) {
                err << "memory: " << asset << ": dropped " << all.size() % *size << " trailing signs (partial window)\n";
            }
        }
        return tasks;
    }
    if (!table.label_column || *table.label_column != policy) {
        throw StageError("config", "--window '" + policy + "' is neither 'all', a window size, nor a column of the input");
    }
    for (const auto& [asset, column] : table.by_asset) {
        std::set<std::int64_t> seen;
        std::size_t begin = 0;
        const std::span<const Sign> all(column.signs);
        for (std::size_t i = 1; i <= all.size(); ++i) {
            if (i < all.size() && column.labels[i] == column.labels[begin]) continue;
            const auto label = column.labels[begin];
            if (!seen.insert(label).second) {
                throw StageError("memory", asset + ": window label " + std::to_string(label) + " is not contiguous");
            }
            tasks.push_back({&asset, label, all.subspan(begin, i - begin)});
            begin = i;
        }
    }
    return tasks;
}

void run_memory(const MemoryArgs& args, std::ostream& out, std::ostream& err) {
    const bool by_column = args.window != "all" && !detail::parse_int<std::size_t>(args.window);
    const SignTable table = in_stage("ingest", [&] {
        auto in = open_input(args.signs);
        return read_signs(*in, by_column);
    });
    const auto tasks = make_windows(table, args.window, err);

    MemoryOptions options;
    options.kappa_max = args.kappa_max;
    options.tau_max = args.tau_max;
    options.fit_min = args.fit_min;
    options.fit_max = args.fit_max;
    options.convention =
        args.convention == "kappa+1" ? RunConvention::kappa_plus_one_signs : RunConvention::kappa_signs;

    std::vector<MemoryMetrics> results(tasks.size());
    in_stage("memory", [&] {
        parallel_for(tasks.size(), args.threads, [&](std::size_t i) {
            try {
                results[i] = compute_metrics(tasks[i].signs, options);
            } catch (const std::exception& e) {
                throw StageError("memory", *tasks[i].asset + " window " + std::to_string(tasks[i].window) + ": " +
                                               e.what());
            }
        });
    });

    std::vector<std::string> columns{"asset", "window"};
    for (int k = 2; k <= args.kappa_max; ++k) columns.push_back("pi_neg" + std::to_string(k));
    for (int k = 2; k <= args.kappa_max; ++k) columns.push_back("pi_pos" + std::to_string(k));
    for (const char* c : {"a", "b", "tau_star", "tau_star_scaled", "n"}) columns.emplace_back(c);

    Sink sink(args.output.path, out);
    RowWriter writer(sink.stream(), columns, args.output.json);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& m = results[i];
        writer.text(*tasks[i].asset).integer(tasks[i].window);
        for (int k = 2; k <= args.kappa_max; ++k) writer.number(m.pi.at(Sign::sell, k));
        for (int k = 2; k <= args.kappa_max; ++k) writer.number(m.pi.at(Sign::buy, k));
        writer.number(m.a).number(m.b).integer(static_cast<std::int64_t>(m.tau_star)).number(m.tau_star_scaled);
        writer.integer(static_cast<std::int64_t>(m.n));
        writer.end_row();
    }
    writer.finish();
}

// ---------------------------------------------------------------- activity

struct ActivityArgs {
    std::string ownership;
    std::string volumes;
    Output output;
    int groups = 20;
    double min_fund_usd = 0.0;
};

void run_activity(const ActivityArgs& args, std::ostream& out, std::ostream&) {
    OwnershipPanel panel = in_stage("ingest", [&] {
        auto positions = open_input(args.ownership);
        auto volumes = open_input(args.volumes);
        return parse_ownership(*positions, *volumes);
    });
    if (args.min_fund_usd > 0.0) panel = panel.without_small_funds(args.min_fund_usd);

    const auto ratios = in_stage("activity", [&] { return all_activity_ratios(panel); });
    std::map<int, std::map<std::string, double>> r_by_quarter;
    std::map<int, std::map<std::string, double>> s_by_quarter;
    for (const auto& x : ratios) {
        r_by_quarter[x.quarter][x.asset_id] = x.R;
        s_by_quarter[x.quarter][x.asset_id] = x.S;
    }
    std::map<int, GroupAssignment> group_r;
    std::map<int, GroupAssignment> group_s;
    in_stage("activity", [&] {
        for (const auto& [q, values] : r_by_quarter) group_r[q] = quantile_groups(values, args.groups, q);
        for (const auto& [q, values] : s_by_quarter) group_s[q] = quantile_groups(values, args.groups, q);
    });

    Sink sink(args.output.path, out);
    RowWriter writer(sink.stream(), {"asset", "quarter", "r", "R", "S", "group_R", "group_S"}, args.output.json);
    for (const auto& x : ratios) {
        writer.text(x.asset_id).integer(x.quarter).number(x.r).number(x.R).number(x.S);
        writer.integer(group_r.at(x.quarter).group_of.at(x.asset_id));
        writer.integer(group_s.at(x.quarter).group_of.at(x.asset_id));
        writer.end_row();
    }
    writer.finish();
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string metrics;
    std::string activity;
    std::string quarter_map;
    Output output;
    std::string metric = "a";
    std::string target = "S";
    int groups = 20;
    std::optional<int> k_cut;
    bool kcut_all = false;
};

double read_number(const CsvTable& t, std::size_t row, std::size_t col) {
    const auto& cell = t.rows[row][col];
    if (cell == "nan") return std::nan("");
    const auto v = detail::parse_double(cell);
    if (!v) throw ParseError(t.lines[row], "non-numeric value '" + cell + "'");
    return *v;
}

std::int64_t read_integer(const CsvTable& t, std::size_t row, std::size_t col) {
    const auto v = detail::parse_int<std::int64_t>(t.rows[row][col]);
    if (!v) throw ParseError(t.lines[row], "non-integer value '" + t.rows[row][col] + "'");
    return *v;
}

void run_classify(const ClassifyArgs& args, std::ostream& out, std::ostream& err) {
    const auto kind = parse_metric(args.metric);
    if (!kind) throw StageError("config", "unknown metric '" + args.metric + "'");

    // (quarter, asset) -> sum and count of the metric over the quarter's windows
    std::map<int, std::map<std::string, std::pair<double, int>>> sums;
    in_stage("ingest", [&] {
        std::map<std::int64_t, int> quarter_of_window;
        if (!args.quarter_map.empty()) {
            auto in = open_input(args.quarter_map);
            const auto map = read_csv(*in);
            const auto w = map.column("window");
            const auto q = map.column("quarter");
            for (std::size_t i = 0; i < map.rows.size(); ++i) {
                quarter_of_window[read_integer(map, i, w)] = static_cast<int>(read_integer(map, i, q));
            }
        }
        auto in = open_input(args.metrics);
        const auto table = read_csv(*in);
        const auto asset_col = table.column("asset");
        const auto window_col = table.column("window");
        std::vector<std::size_t> value_cols;
        switch (*kind) {
            case MetricKind::pi10: value_cols = {table.column("pi_neg10"), table.column("pi_pos10")}; break;
            case MetricKind::a: value_cols = {table.column("a")}; break;
            case MetricKind::b: value_cols = {table.column("b")}; break;
            case MetricKind::tau: value_cols = {table.column("tau_star")}; break;
            case MetricKind::tau_scaled: value_cols = {table.column("tau_star_scaled")}; break;
        }
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto window = read_integer(table, i, window_col);
            int quarter = static_cast<int>(window);
            if (!args.quarter_map.empty()) {
                const auto it = quarter_of_window.find(window);
                if (it == quarter_of_window.end()) continue;
                quarter = it->second;
            }
            double value = 0.0;
            for (const auto c : value_cols) value += read_number(table, i, c);
            value /= static_cast<double>(value_cols.size());
            if (std::isnan(value)) continue;
            auto& slot = sums[quarter][table.rows[i][asset_col]];
            slot.first += value;
            slot.second += 1;
        }
    });

    std::map<int, GroupAssignment> assignments;
    in_stage("ingest", [&] {
        auto in = open_input(args.activity);
        const auto table = read_csv(*in);
        const auto asset_col = table.column("asset");
        const auto quarter_col = table.column("quarter");
        const auto group_col = table.column(args.target == "R" ? "group_R" : "group_S");
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto q = static_cast<int>(read_integer(table, i, quarter_col));
            const auto g = static_cast<int>(read_integer(table, i, group_col));
            if (g < 1 || g > args.groups) {
                throw ParseError(table.lines[i], "group " + std::to_string(g) + " outside 1.." +
                                                     std::to_string(args.groups));
            }
            auto& a = assignments[q];
            a.quarter = q;
            a.groups = args.groups;
            a.group_of[table.rows[i][asset_col]] = g;
        }
    });

    std::vector<QuarterScores> oriented;
    std::vector<QuarterScores> raw;
    for (const auto& [q, assets] : sums) {
        const auto it = assignments.find(q);
        if (it == assignments.end()) continue;
        QuarterScores o{it->second, {}};
        QuarterScores r{it->second, {}};
        for (const auto& [asset, slot] : assets) {
            const double mean = slot.first / slot.second;
            r.scores[asset] = mean;
            o.scores[asset] = is_negated(*kind) ? -mean : mean;
        }
        oriented.push_back(std::move(o));
        raw.push_back(std::move(r));
    }
    if (oriented.empty()) throw StageError("classify", "no quarter has both metrics and activity groups");
    err << "classify: " << oriented.size() << " quarters\n";

    std::vector<int> cuts;
    if (!args.kcut_all) cuts.push_back(args.k_cut.value_or(std::max(1, args.groups / 2)));

    std::vector<std::pair<std::string, std::vector<CutAuc>>> blocks;
    in_stage("classify", [&] {
        blocks.emplace_back(oriented_name(*kind), auc_by_cut(oriented, cuts));
        if (is_negated(*kind)) blocks.emplace_back(std::string(metric_name(*kind)), auc_by_cut(raw, cuts));
    });

    std::vector<std::string> columns{"metric", "target", "k_cut", "auc_mean"};
    for (const auto& q : oriented) columns.push_back("q" + std::to_string(q.assignment.quarter));
    Sink sink(args.output.path, out);
    RowWriter writer(sink.stream(), columns, args.output.json);
    for (const auto& [name, cuts_auc] : blocks) {
        for (const auto& cut : cuts_auc) {
            writer.text(name).text(args.target).integer(cut.k_cut).number(cut.mean);
            for (const double v : cut.per_quarter) writer.number(v);
            writer.end_row();
        }
    }
    writer.finish();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    LmfConfig config;
    std::optional<std::uint64_t> seed;
    std::string emit = "signs";
    std::string asset = "LMF";
    std::string metaorders_out;
    Output output;
};

void write_metaorders(std::ostream& os, const SimOutput& sim, bool json) {
    RowWriter writer(os, {"id", "start_seq", "length", "sampled_length", "sign", "truncated"}, json);
    for (std::size_t i = 0; i < sim.metaorders.size(); ++i) {
        const auto& m = sim.metaorders[i];
        writer.integer(static_cast<std::int64_t>(i)).integer(static_cast<std::int64_t>(m.start) + 1);
        writer.integer(m.length).integer(m.sampled_length).integer(to_int(m.sign)).integer(m.truncated ? 1 : 0);
        writer.end_row();
    }
    writer.finish();
}

void run_simulate(SimulateArgs args, std::ostream& out, std::ostream& err) {
    args.config.seed = resolve_seed(args.seed);
    in_stage("simulate", [&] { args.config.validate(); });
    err << "simulate: generator=" << Rng::kAlgorithm << " seed=" << args.config.seed << " m=" << args.config.m
        << " beta=" << format_double(args.config.beta) << " n=" << args.config.n << " l_min=" << args.config.l_min
        << '\n';

    if (args.emit == "signs") {
        Sink sink(args.output.path, out);
        RowWriter writer(sink.stream(), {"asset", "seq", "sign"}, args.output.json);
        LmfSimulator sim(args.config);
        for (std::size_t t = 0; t < args.config.n; ++t) {
            writer.text(args.asset).integer(static_cast<std::int64_t>(t) + 1).integer(to_int(sim.step().sign));
            writer.end_row();
        }
        writer.finish();
        return;
    }

    const SimOutput sim = simulate(args.config);
    if (args.emit == "metaorders") {
        Sink sink(args.output.path, out);
        write_metaorders(sink.stream(), sim, args.output.json);
        return;
    }
    if (args.metaorders_out.empty()) throw StageError("config", "--emit both needs --metaorders-out");
    {
        Sink sink(args.output.path, out);
        RowWriter writer(sink.stream(), {"asset", "seq", "sign"}, args.output.json);
        for (std::size_t t = 0; t < sim.signs.size(); ++t) {
            writer.text(args.asset).integer(static_cast<std::int64_t>(t) + 1).integer(to_int(sim.signs.signs[t]));
            writer.end_row();
        }
        writer.finish();
    }
    Sink meta(args.metaorders_out, out);
    write_metaorders(meta.stream(), sim, args.output.json);
}

// ---------------------------------------------------------------- panel

struct PanelArgs {
    PanelConfig config;
    std::optional<std::uint64_t> seed;
    std::string m_levels = "2,50";
    std::string metrics_out;
    Output output;
};

void run_panel(PanelArgs args, std::ostream& out, std::ostream& err) {
    args.config.seed = resolve_seed(args.seed);
    in_stage("config", [&] {
        std::vector<std::string_view> fields;
        detail::split_fields(args.m_levels, ',', fields);
        for (const auto f : fields) {
            const auto m = detail::parse_int<int>(f);
            if (!m) throw std::invalid_argument("--m-levels must be a comma-separated list of integers");
            args.config.m_levels.push_back(*m);
        }
    });
    err << "panel: generator=" << Rng::kAlgorithm << " seed=" << args.config.seed << " assets=" << args.config.assets
        << " m_levels=" << args.m_levels << " beta=" << format_double(args.config.beta) << " n=" << args.config.n
        << '\n';
    const PanelReport report = in_stage("panel", [&] { return synthetic_panel(args.config); });

    if (!args.metrics_out.empty()) {
        Sink sink(args.metrics_out, out);
        std::vector<std::string> columns{"asset", "group", "m", "seed"};
        for (const auto kind : kAllMetrics) columns.emplace_back(metric_name(kind));
        columns.emplace_back("n");
        RowWriter writer(sink.stream(), columns, args.output.json);
        for (const auto& a : report.assets) {
            writer.text(a.id).integer(a.group).integer(a.m).text(std::to_string(a.seed));
            for (const auto kind : kAllMetrics) writer.number(metric_value(a.metrics, kind));
            writer.integer(static_cast<std::int64_t>(a.metrics.n));
            writer.end_row();
        }
        writer.finish();
    }

    Sink sink(args.output.path, out);
    RowWriter writer(sink.stream(), {"metric", "target", "k_cut", "auc_mean", "q0"}, args.output.json);
    for (const auto& block : report.aucs) {
        for (const auto& cut : block.cuts) {
            writer.text(block.metric).text("M").integer(cut.k_cut).number(cut.mean).number(cut.per_quarter.front());
            writer.end_row();
        }
    }
    writer.finish();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Market order sign memory toolkit", "ordermem"};
    app.require_subcommand(1);

    SignsArgs signs;
    auto* signs_cmd = app.add_subcommand("signs", "Trades -> market order signs (mid-price rule)");
    signs_cmd->add_option("-t,--trades", signs.trades, "Trades file asset,seq,price,bid,ask[,label]")->required();
    signs_cmd->add_flag("--filter", signs.filter, "Keep only assets passing the trading-activity filter");
    signs_cmd->add_option("--min-days", signs.min_days, "Filter: minimum distinct day labels")->capture_default_str();
    signs_cmd->add_option("--min-trades-per-day", signs.min_trades_per_day, "Filter: minimum average trades per day")
        ->capture_default_str();
    add_output_flags(signs_cmd, signs.output);

    MemoryArgs memory;
    auto* memory_cmd = app.add_subcommand("memory", "Sign series -> memory metrics per asset and window");
    memory_cmd->add_option("-s,--signs", memory.signs, "Signs file asset,seq,sign[,label]")->required();
    memory_cmd->add_option("--kappa-max", memory.kappa_max, "Largest run length kappa")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    memory_cmd->add_option("--tau-max", memory.tau_max, "Largest autocorrelation lag")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    memory_cmd->add_option("--fit-min", memory.fit_min, "First lag of the power-law fit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    memory_cmd->add_option("--fit-max", memory.fit_max, "Last lag of the power-law fit (default min(tau*, 1000))");
    memory_cmd->add_option("--window", memory.window, "'all', a number of signs per window, or the label column name")
        ->capture_default_str();
    memory_cmd->add_option("--run-convention", memory.convention, "Signs per kappa window: kappa or kappa+1")
        ->check(CLI::IsMember({"kappa", "kappa+1"}))
        ->capture_default_str();
    memory_cmd->add_option("--threads", memory.threads, "Worker threads")->check(CLI::PositiveNumber);
    add_output_flags(memory_cmd, memory.output);

    ActivityArgs activity;
    auto* activity_cmd = app.add_subcommand("activity", "Ownership panel -> activity ratios and quantile groups");
    activity_cmd->add_option("--ownership", activity.ownership, "fund,asset,quarter,position_usd")->required();
    activity_cmd->add_option("--volumes", activity.volumes, "asset,quarter,volume_usd")->required();
    activity_cmd->add_option("--groups", activity.groups, "Number of quantile groups")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    activity_cmd->add_option("--min-fund-usd", activity.min_fund_usd,
                             "Drop fund-quarters with less than this invested in total (0 = off)");
    add_output_flags(activity_cmd, activity.output);

    ClassifyArgs classify;
    auto* classify_cmd = app.add_subcommand("classify", "ROC/AUC of a memory metric against activity groups");
    classify_cmd->add_option("--metrics", classify.metrics, "Output of 'memory'")->required();
    classify_cmd->add_option("--activity", classify.activity, "Output of 'activity'")->required();
    classify_cmd->add_option("--quarter-map", classify.quarter_map, "window,quarter table (default: window = quarter)");
    classify_cmd->add_option("--metric", classify.metric, "Detector")
        ->check(CLI::IsMember({"pi10", "a", "b", "tau", "tau_scaled"}))
        ->capture_default_str();
    classify_cmd->add_option("--target", classify.target, "Activity ratio")
        ->check(CLI::IsMember({"R", "S"}))
        ->capture_default_str();
    classify_cmd->add_option("--groups", classify.groups, "Number of groups in the activity table")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    auto* kcut = classify_cmd->add_option("--kcut", classify.k_cut, "Single cut (default G/2)");
    classify_cmd->add_flag("--kcut-all", classify.kcut_all, "Every cut 1..G-1")->excludes(kcut);
    add_output_flags(classify_cmd, classify.output);

    SimulateArgs simulate_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "Meta-order splitting simulation");
    simulate_cmd->add_option("--m", simulate_args.config.m, "Concurrent meta-orders")->required();
    simulate_cmd->add_option("--beta", simulate_args.config.beta, "Tail exponent of meta-order sizes")->required();
    simulate_cmd->add_option("--n", simulate_args.config.n, "Number of signs")->required();
    simulate_cmd->add_option("--seed", simulate_args.seed, "Seed (fallback: ORDERMEM_SEED, then 0)");
    simulate_cmd->add_option("--l-min", simulate_args.config.l_min, "Minimum meta-order size")->capture_default_str();
    simulate_cmd->add_option("--emit", simulate_args.emit, "signs, metaorders or both")
        ->check(CLI::IsMember({"signs", "metaorders", "both"}))
        ->capture_default_str();
    simulate_cmd->add_option("--asset", simulate_args.asset, "Asset id written in the signs table")
        ->capture_default_str();
    simulate_cmd->add_option("--metaorders-out", simulate_args.metaorders_out, "Meta-order log file for --emit both");
    add_output_flags(simulate_cmd, simulate_args.output);

    PanelArgs panel;
    panel.config.threads = default_threads();
    auto* panel_cmd = app.add_subcommand("panel", "Synthetic detection experiment over simulated assets");
    panel_cmd->add_option("--assets", panel.config.assets, "Number of assets")->capture_default_str();
    panel_cmd->add_option("--m-levels", panel.m_levels, "Comma-separated M per group")->capture_default_str();
    panel_cmd->add_option("--beta", panel.config.beta, "Tail exponent")->capture_default_str();
    panel_cmd->add_option("--n", panel.config.n, "Signs per asset")->capture_default_str();
    panel_cmd->add_option("--seed", panel.seed, "Seed (fallback: ORDERMEM_SEED, then 0)");
    panel_cmd->add_option("--l-min", panel.config.l_min, "Minimum meta-order size")->capture_default_str();
    panel_cmd->add_option("--tau-max", panel.config.memory.tau_max, "Largest autocorrelation lag")
        ->capture_default_str();
    panel_cmd->add_option("--fit-min", panel.config.memory.fit_min, "First lag of the power-law fit")
        ->capture_default_str();
    panel_cmd->add_option("--fit-max", panel.config.memory.fit_max, "Last lag of the power-law fit");
    panel_cmd->add_option("--metrics-out", panel.metrics_out, "Per-asset metrics table");
    panel_cmd->add_option("--threads", panel.config.threads, "Worker threads")->check(CLI::PositiveNumber);
    add_output_flags(panel_cmd, panel.output);

    std::vector<std::string> argv_storage{"ordermem"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*signs_cmd) run_signs(signs, out, err);
        if (*memory_cmd) run_memory(memory, out, err);
        if (*activity_cmd) run_activity(activity, out, err);
        if (*classify_cmd) run_classify(classify, out, err);
        if (*simulate_cmd) run_simulate(simulate_args, out, err);
        if (*panel_cmd) run_panel(panel, out, err);
    } catch (const StageError& e) {
        err << "ordermem " << app.get_subcommands().front()->get_name() << ": " << e.stage() << " stage failed: "
            << e.what() << '\n';
        return e.stage() == "config" ? kUsageError : kDataError;
    } catch (const std::exception& e) {
        err << "ordermem: internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kSuccess;
}

}  // namespace ordermem::cli
