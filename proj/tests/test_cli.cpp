#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const std::string kCli = STOCHLAB_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("stochlab_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("minimal config runs one passing check") {
    TempDir dir;
    const fs::path cfg = dir.path / "cfg.json";
    const fs::path report = dir.path / "report.json";
    const fs::path meta = dir.path / "meta.json";
    write_file(cfg, nlohmann::json{
        {"paths", 10000},
        {"suite", {"ito_isometry"}},
        {"output", {{"report", report.string()}, {"metadata", meta.string()}}},
    }.dump());

    CHECK(run("run " + cfg.string()) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(report));
    CHECK(j["overall_verdict"] == "pass");
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["check"] == "ito_isometry");
    CHECK(fs::exists(meta));
}

TEST_CASE("invalid stable index exits 2") {
    TempDir dir;
    const fs::path cfg = dir.path / "bad.json";
    write_file(cfg, R"({"driver": {"gamma": 2.5}})");
    CHECK(run("run " + cfg.string()) == 2);
}

TEST_CASE("malformed JSON exits 2") {
    TempDir dir;
    const fs::path cfg = dir.path / "broken.json";
    write_file(cfg, "{ not json");
    CHECK(run("run " + cfg.string()) == 2);
}

TEST_CASE("missing config file exits 2") {
    CHECK(run("run /nonexistent/config.json") == 2);
}

TEST_CASE("impossible tolerance makes a check fail with exit 1") {
    TempDir dir;
    const fs::path cfg = dir.path / "cfg.json";
    const fs::path report = dir.path / "report.json";
    // A degree-0 basis cannot represent the integrand 2B_t of F = B_T^2, so
    // the reconstruction residual stays near 1 and the check fails honestly.
    write_file(cfg, nlohmann::json{
        {"paths", 20000},
        {"grid", {{"horizon", 1.0}, {"steps", 64}}},
        {"basis", {{"time_bins", 8}, {"degree", 0}}},
        {"suite", {"clark_ocone"}},
        {"output", {{"report", report.string()},
                    {"metadata", (dir.path / "meta.json").string()}}},
    }.dump());
    const int code = run("run " + cfg.string());
    CHECK(code == 1);
}

TEST_CASE("unwritable report path exits 3") {
    TempDir dir;
    const fs::path cfg = dir.path / "cfg.json";
    write_file(cfg, nlohmann::json{
        {"paths", 1000},
        {"suite", {"dupire"}},
        {"output", {{"report", "/nonexistent_dir/report.json"},
                    {"metadata", (dir.path / "meta.json").string()}}},
    }.dump());
    CHECK(run("run " + cfg.string()) == 3);
}

TEST_CASE("reports are byte-identical across reruns and thread counts") {
    TempDir dir;
    const fs::path cfg = dir.path / "cfg.json";
    const fs::path report = dir.path / "report.json";
    write_file(cfg, nlohmann::json{
        {"paths", 5000},
        {"suite", {"ito_isometry", "centering", "dupire"}},
        {"output", {{"report", report.string()},
                    {"metadata", (dir.path / "meta.json").string()}}},
    }.dump());

    const int a = std::system(("STOCHLAB_THREADS=1 " + kCli + " run " +
                               cfg.string() + " > /dev/null 2>&1").c_str());
    const std::string first = read_file(report);
    const int b = std::system(("STOCHLAB_THREADS=4 " + kCli + " run " +
                               cfg.string() + " > /dev/null 2>&1").c_str());
    const std::string second = read_file(report);
    CHECK(WEXITSTATUS(a) == 0);
    CHECK(WEXITSTATUS(b) == 0);
    CHECK(first == second);
}

TEST_CASE("export selectors") {
    TempDir dir;
    const fs::path cfg = dir.path / "cfg.json";
    write_file(cfg, nlohmann::json{{"paths", 20000}}.dump());

    SUBCASE("clark_ocone_integrand tracks 2x") {
        const fs::path csv = dir.path / "integrand.csv";
        CHECK(run("export " + cfg.string() + " clark_ocone_integrand -o " +
                  csv.string()) == 0);
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,x_bin,fitted,oracle");
        double worst = 0.0;
        for (std::string line; std::getline(in, line);) {
            double t, x, fitted, oracle;
            REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &x, &fitted,
                                &oracle) == 4);
            CHECK(oracle == doctest::Approx(2.0 * x).epsilon(1e-9));
            if (std::abs(x) <= 1.0) worst = std::max(worst, std::abs(fitted - oracle));
        }
        CHECK(worst < 0.1);
    }

    SUBCASE("covariance_heatmap matches the fBM formula") {
        const fs::path csv = dir.path / "heatmap.csv";
        CHECK(run("export " + cfg.string() + " covariance_heatmap -o " +
                  csv.string()) == 0);
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "s,t,sample,closed_form");
        double worst = 0.0;
        std::size_t rows = 0;
        for (std::string line; std::getline(in, line);) {
            double s, t, sample, closed;
            REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &s, &t, &sample,
                                &closed) == 4);
            worst = std::max(worst, std::abs(sample - closed));
            ++rows;
        }
        CHECK(rows == 32 * 32);
        // MC error band at 20000 paths.
        CHECK(worst < 0.05);
    }

    SUBCASE("unknown selector exits 2 and writes nothing") {
        const fs::path csv = dir.path / "nothing.csv";
        CHECK(run("export " + cfg.string() + " bogus_selector -o " +
                  csv.string()) == 2);
        CHECK_FALSE(fs::exists(csv));
    }

    SUBCASE("empty ensemble is refused") {
        const fs::path empty_cfg = dir.path / "empty.json";
        write_file(empty_cfg, nlohmann::json{{"paths", 0}}.dump());
        // paths = 0 fails validation, which is the error path for an empty
        // ensemble request.
        CHECK(run("export " + empty_cfg.string() + " covariance_heatmap -o " +
                  (dir.path / "e.csv").string()) == 2);
        CHECK_FALSE(fs::exists(dir.path / "e.csv"));
    }
}

TEST_CASE("schema prints and exits 0") {
    CHECK(run("schema") == 0);
}
