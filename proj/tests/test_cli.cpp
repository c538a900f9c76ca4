#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>

#include "ordermem/cli/app.hpp"
#include "ordermem/cli/panel.hpp"
#include "ordermem/cli/tables.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace ordermem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ordermem_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("end-to-end pipeline is byte-identical across runs") {
    TempDir dir;
    spit(dir / "trades.csv", fixture::synthetic_trades(8, 3000));
    std::string volumes;
    spit(dir / "ownership.csv", fixture::synthetic_ownership(8, volumes));
    spit(dir / "volumes.csv", volumes);

    const std::vector<std::vector<std::string>> steps{
        {"signs", "--trades", dir / "trades.csv", "-o", dir / "signs.csv"},
        {"memory", "--signs", dir / "signs.csv", "--window", "quarter", "--tau-max", "200", "--fit-max", "50", "-o",
         dir / "metrics.csv"},
        {"activity", "--ownership", dir / "ownership.csv", "--volumes", dir / "volumes.csv", "--groups", "4", "-o",
         dir / "activity.csv"},
        {"classify", "--metrics", dir / "metrics.csv", "--activity", dir / "activity.csv", "--groups", "4",
         "--metric", "a", "--kcut-all", "-o", dir / "auc.csv"},
        {"simulate", "--m", "10", "--beta", "1.5", "--n", "100000", "--seed", "7", "--emit", "both",
         "--metaorders-out", dir / "meta.csv", "-o", dir / "sim.csv"},
        {"memory", "--signs", dir / "sim.csv", "-o", dir / "sim_metrics.csv"},
        {"panel", "--assets", "6", "--m-levels", "2,20", "--n", "20000", "--tau-max", "500", "--seed", "3",
         "--metrics-out", dir / "panel_metrics.csv", "-o", dir / "panel.csv"},
    };
    const std::vector<std::string> outputs{"signs.csv", "metrics.csv", "activity.csv", "auc.csv", "sim.csv",
                                           "meta.csv",  "sim_metrics.csv", "panel_metrics.csv", "panel.csv"};

    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
        for (const auto& step : steps) {
            const auto r = run(step);
            INFO(step.front() << ": " << r.err);
            REQUIRE(r.code == 0);
        }
        for (const auto& name : outputs) {
            const auto content = slurp(dir / name);
            CHECK_FALSE(content.empty());
            if (round == 0) first[name] = content;
            else CHECK(content == first[name]);
        }
    }

    // the signs table feeds straight back into the signs reader
    std::ifstream signs_in(dir / "signs.csv");
    const auto table = cli::read_signs(signs_in, true);
    CHECK(table.by_asset.size() == 8);
    CHECK(table.label_column == "quarter");

    // metrics: one row per asset and quarter
    std::ifstream metrics_in(dir / "metrics.csv");
    const auto metrics = cli::read_csv(metrics_in);
    CHECK(metrics.rows.size() == 16);
    CHECK(metrics.header.front() == "asset");

    // classify with every cut: G - 1 rows for "-a" and for raw "a"
    std::ifstream auc_in(dir / "auc.csv");
    const auto auc = cli::read_csv(auc_in);
    CHECK(auc.rows.size() == 6);
    CHECK(auc.header == std::vector<std::string>{"metric", "target", "k_cut", "auc_mean", "q2", "q3"});
}

TEST_CASE("simulate output reaches the seed through the environment") {
    TempDir dir;
    ::setenv("ORDERMEM_SEED", "7", 1);
    const auto env = run({"simulate", "--m", "3", "--beta", "1.5", "--n", "1000"});
    ::unsetenv("ORDERMEM_SEED");
    const auto flag = run({"simulate", "--m", "3", "--beta", "1.5", "--n", "1000", "--seed", "7"});
    const auto other = run({"simulate", "--m", "3", "--beta", "1.5", "--n", "1000", "--seed", "8"});
    REQUIRE(env.code == 0);
    CHECK(env.out == flag.out);
    CHECK(env.out != other.out);
    CHECK(flag.err.find("mt19937_64") != std::string::npos);
}

TEST_CASE("json mirror carries the same rows") {
    const auto csv = run({"simulate", "--m", "2", "--beta", "1.5", "--n", "5", "--seed", "1"});
    const auto json = run({"simulate", "--m", "2", "--beta", "1.5", "--n", "5", "--seed", "1", "--json"});
    REQUIRE(json.code == 0);
    CHECK(json.out.front() == '[');
    CHECK(json.out.find("\"asset\":\"LMF\"") != std::string::npos);
    std::istringstream in(csv.out);
    CHECK(cli::read_csv(in).rows.size() == 5);
}

TEST_CASE("classify on single-class labels names the failing stage") {
    TempDir dir;
    spit(dir / "metrics.csv", "asset,window,a,b\nX,2,0.1,0.5\nY,2,0.2,0.5\nZ,2,0.3,0.5\n");
    spit(dir / "activity.csv", "asset,quarter,group_S\nX,2,2\nY,2,2\nZ,2,2\n");
    const auto r = run({"classify", "--metrics", dir / "metrics.csv", "--activity", dir / "activity.csv",
                        "--groups", "2", "--metric", "b"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("classify stage failed") != std::string::npos);
}

TEST_CASE("panel shape and preconditions") {
    TempDir dir;
    const auto r = run({"panel", "--assets", "8", "--m-levels", "2,5,20,50", "--n", "20000", "--tau-max", "500",
                        "--seed", "5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto table = cli::read_csv(in);
    CHECK(table.header.front() == "metric");
    // four groups: three cuts for each of 5 oriented and 3 raw metrics
    CHECK(table.rows.size() == 8 * 3);

    const auto single = run({"panel", "--assets", "8", "--m-levels", "10", "--n", "1000"});
    CHECK(single.code != 0);
    CHECK(single.err.find("stage failed") != std::string::npos);

    cli::PanelConfig cfg;
    cfg.m_levels = {10};
    CHECK_THROWS_AS((void)cli::synthetic_panel(cfg), std::invalid_argument);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"frobnicate"}).code == cli::kUsageError);
    CHECK(run({"simulate", "--m", "1", "--beta", "1.5", "--n", "10", "--bogus"}).code == cli::kUsageError);
    CHECK(run({"simulate", "--m", "1", "--beta", "0.5", "--n", "10"}).code != 0);
    CHECK(run({"memory", "--signs", "/nonexistent/signs.csv"}).code == cli::kDataError);
    CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("memory rejects malformed sign tables") {
    TempDir dir;
    spit(dir / "bad.csv", "asset,seq,sign\nA,1,1\nA,1,-1\n");
    const auto r = run({"memory", "--signs", dir / "bad.csv"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("ingest stage failed") != std::string::npos);

    spit(dir / "zero.csv", "asset,seq,sign\nA,1,0\n");
    CHECK(run({"memory", "--signs", dir / "zero.csv"}).code == cli::kDataError);
}
