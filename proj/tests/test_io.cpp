#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stochlab/io.hpp"

using namespace stochlab;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("binary round trip preserves values bit-exactly") {
    const TimeGrid grid(1.0, 32);
    const PathEnsemble ens = simulate_brownian(grid, 100, StreamKey{42, 50});
    TempFile f("stochlab_test_roundtrip.bin");
    write_ensemble_binary(ens, f.path);
    const PathEnsemble back = read_ensemble_binary(f.path);

    CHECK(back.grid == ens.grid);
    CHECK(back.label == ens.label);
    CHECK(back.seed.master_seed == ens.seed.master_seed);
    CHECK(back.seed.stream_id == ens.seed.stream_id);
    CHECK((back.values.array() == ens.values.array()).all());
}

TEST_CASE("binary writer refuses an empty ensemble") {
    PathEnsemble empty;
    empty.grid = TimeGrid(1.0, 4);
    TempFile f("stochlab_test_empty.bin");
    CHECK_THROWS(write_ensemble_binary(empty, f.path));
    CHECK_FALSE(std::filesystem::exists(f.path));
}

TEST_CASE("reader rejects a corrupt magic") {
    TempFile f("stochlab_test_magic.bin");
    std::ofstream out(f.path, std::ios::binary);
    out << "NOTSLEN0greeble";
    out.close();
    CHECK_THROWS(read_ensemble_binary(f.path));
}

TEST_CASE("CSV exports carry the documented headers") {
    const TimeGrid grid(1.0, 4);
    const PathEnsemble ens = simulate_brownian(grid, 3, StreamKey{42, 51});

    TempFile ens_csv("stochlab_test_ens.csv");
    write_ensemble_csv(ens, ens_csv.path);
    std::ifstream in(ens_csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "path,t,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 3 * 5);

    RandomVariableSample sample;
    sample.values = ens.values.col(4);
    sample.provenance = "test";
    TempFile sample_csv("stochlab_test_sample.csv");
    write_sample_csv(sample, sample_csv.path);
    std::ifstream in2(sample_csv.path);
    std::getline(in2, header);
    CHECK(header == "path_id,value");
}
