#include "mss/sampling.hpp"

#include <cmath>

namespace mss {

namespace {
const int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
}

double halton(std::uint64_t index, int base) {
  // van der Corput radical inverse; index shifted so index 0 is not 0.0
  std::uint64_t i = index + 1;
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

Eigen::VectorXd halton_point(std::uint64_t index, int dim) {
  Eigen::VectorXd p(dim);
  for (int k = 0; k < dim; ++k) p[k] = halton(index, kPrimes[k]);
  return p;
}

Eigen::VectorXd halton_normal_point(std::uint64_t index, int dim) {
  Eigen::VectorXd z(dim);
  for (int k = 0; k < dim; k += 2) {
    double u1 = halton(index, kPrimes[k]);
    double u2 = halton(index, kPrimes[k + 1]);
    double r = std::sqrt(-2.0 * std::log(u1));
    z[k] = r * std::cos(2.0 * M_PI * u2);
    if (k + 1 < dim) z[k + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  return z;
}

Eigen::VectorXd halton_sphere_point(std::uint64_t index, int ambient_dim) {
  Eigen::VectorXd z = halton_normal_point(index, ambient_dim);
  double n = z.norm();
  if (n < 1e-12) {
    z.setZero();
    z[0] = 1.0;
    return z;
  }
  return z / n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd simplex_point(const Eigen::MatrixXd& vertex_rows, std::mt19937_64& rng) {
  const int k = static_cast<int>(vertex_rows.rows());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd w(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double u = uni(rng);
    w[i] = -std::log(u > 0.0 ? u : 1e-300);
    sum += w[i];
  }
  w /= sum;
  return vertex_rows.transpose() * w;
}

}  // namespace mss
