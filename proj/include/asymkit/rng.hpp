#pragma once

#include <cstdint>
#include <random>

#include "asymkit/types.hpp"

namespace asymkit {

// Seeded generator with distributions written out by hand so that a seed
// produces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);       // [0, n)
  double normal();
  cplx cnormal();                         // E|z|^2 = 1

  CMatrix ginibre(Eigen::Index rows, Eigen::Index cols);
  CVector pure_state(Eigen::Index dim);
  CMatrix unitary(Eigen::Index dim);
  CMatrix density(Eigen::Index dim, Eigen::Index rank);
  CMatrix hermitian(Eigen::Index dim);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace asymkit
