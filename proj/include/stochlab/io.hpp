#pragma once

#include <string>

#include "stochlab/adjoint.hpp"
#include "stochlab/integration.hpp"
#include "stochlab/paths.hpp"

namespace stochlab {

// Columnar binary ensemble format (little-endian):
//   magic   "SLEN1\0\0\0"            8 bytes
//   label   u32 length + bytes
//   T       f64
//   N       u64 (steps)
//   M       u64 (paths)
//   seed    u64 master_seed, u64 stream_id
//   body    M * (N + 1) f64 values, row-major (path-major)
// Jump records and increments are not serialized.
void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path);
PathEnsemble read_ensemble_binary(const std::string& path);

// CSV with header "path,t,value"; one row per (path, node). Intended for
// small ensembles.
void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path);

// CSV with header "path_id,value".
void write_sample_csv(const RandomVariableSample& sample, const std::string& path);

}  // namespace stochlab
