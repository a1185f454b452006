#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace postaic {

enum class StreamKind : std::uint32_t { Design = 1, Replication = 2 };

/// Independent generator whose state is a pure function of
/// (master_seed, kind, index): replications can run in any order or thread.
std::mt19937_64 make_stream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index);

Eigen::VectorXd standard_normal_vector(std::mt19937_64& rng, Eigen::Index n);

}  // namespace postaic
