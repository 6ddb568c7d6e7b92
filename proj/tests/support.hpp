#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include "maslov/symplectic.hpp"

namespace testsupport {

using maslov::cplx;
using maslov::Mat;

inline std::uint64_t suite_seed() {
  if (const char* env = std::getenv("MASLOV_SEED")) return std::stoull(env);
  return 20240611ULL;
}

class Random {
 public:
  explicit Random(std::uint64_t salt = 0) : gen_(suite_seed() ^ (salt * 0x9E3779B97F4A7C15ULL)) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  Mat ginibre(int rows, int cols) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) g(i, j) = cplx(normal(), normal()) / std::sqrt(2.0);
    return g;
  }

  /// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R divided out.
  Mat haar_unitary(int n) {
    Eigen::HouseholderQR<Mat> qr(ginibre(n, n));
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
      const cplx d = r(j, j);
      q.col(j) *= d / std::abs(d);
    }
    return q;
  }

  Mat hermitian(int n, double scale = 1.0) {
    const Mat g = ginibre(n, n);
    return scale * 0.5 * (g + g.adjoint());
  }

  maslov::LagrangianPlane plane(const maslov::SpacePtr& space) {
    return maslov::plane_from_unitary(space, haar_unitary(space->half_dim()));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace testsupport
