#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace mss {

// deterministic low-discrepancy helpers; index 0 is valid for all of them
double halton(std::uint64_t index, int base);
Eigen::VectorXd halton_point(std::uint64_t index, int dim);          // in (0,1)^dim
Eigen::VectorXd halton_normal_point(std::uint64_t index, int dim);   // Box-Muller on Halton pairs
Eigen::VectorXd halton_sphere_point(std::uint64_t index, int ambient_dim);  // on S^{d-1}

// splitmix64-style combine, for decorrelated per-item seeds
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// uniform point in the simplex spanned by the rows (exponential weights)
Eigen::VectorXd simplex_point(const Eigen::MatrixXd& vertex_rows, std::mt19937_64& rng);

}  // namespace mss
