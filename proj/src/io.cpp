#include "stochlab/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace stochlab {

namespace {

constexpr char kMagic[8] = {'S', 'L', 'E', 'N', '1', '\0', '\0', '\0'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("truncated ensemble file");
    return value;
}

}  // namespace

void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path) {
    if (ensemble.values.size() == 0) {
        throw std::invalid_argument("refusing to write an empty ensemble");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(kMagic, sizeof(kMagic));
    const auto label_len = static_cast<std::uint32_t>(ensemble.label.size());
    write_pod(out, label_len);
    out.write(ensemble.label.data(), label_len);
    write_pod(out, ensemble.grid.horizon);
    write_pod(out, static_cast<std::uint64_t>(ensemble.grid.steps));
    write_pod(out, static_cast<std::uint64_t>(ensemble.path_count()));
    write_pod(out, ensemble.seed.master_seed);
    write_pod(out, ensemble.seed.stream_id);
    for (Eigen::Index p = 0; p < ensemble.values.rows(); ++p) {
        for (Eigen::Index i = 0; i < ensemble.values.cols(); ++i) {
            write_pod(out, ensemble.values(p, i));
        }
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

PathEnsemble read_ensemble_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error(path + " is not an ensemble file");
    }
    const auto label_len = read_pod<std::uint32_t>(in);
    std::string label(label_len, '\0');
    in.read(label.data(), label_len);
    PathEnsemble ensemble;
    ensemble.label = label;
    const double horizon = read_pod<double>(in);
    const auto steps = read_pod<std::uint64_t>(in);
    const auto paths = read_pod<std::uint64_t>(in);
    ensemble.grid = TimeGrid(horizon, steps);
    ensemble.seed.master_seed = read_pod<std::uint64_t>(in);
    ensemble.seed.stream_id = read_pod<std::uint64_t>(in);
    ensemble.values.resize(static_cast<Eigen::Index>(paths),
                           static_cast<Eigen::Index>(steps + 1));
    for (Eigen::Index p = 0; p < ensemble.values.rows(); ++p) {
        for (Eigen::Index i = 0; i < ensemble.values.cols(); ++i) {
            ensemble.values(p, i) = read_pod<double>(in);
        }
    }
    return ensemble;
}

void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path) {
    if (ensemble.values.size() == 0) {
        throw std::invalid_argument("refusing to write an empty ensemble");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "path,t,value\n";
    out.precision(17);
    for (Eigen::Index p = 0; p < ensemble.values.rows(); ++p) {
        for (Eigen::Index i = 0; i < ensemble.values.cols(); ++i) {
            out << p << ',' << ensemble.grid.node(static_cast<std::size_t>(i))
                << ',' << ensemble.values(p, i) << '\n';
        }
    }
}

void write_sample_csv(const RandomVariableSample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "path_id,value\n";
    out.precision(17);
    for (Eigen::Index p = 0; p < sample.values.size(); ++p) {
        out << p << ',' << sample.values(p) << '\n';
    }
}

}  // namespace stochlab
