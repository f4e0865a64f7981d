#include "asymkit/rng.hpp"

#include <cmath>

namespace asymkit {

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

cplx Rng::cnormal() {
  const double a = normal();
  const double b = normal();
  return {a * M_SQRT1_2, b * M_SQRT1_2};
}

CMatrix Rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cnormal();
  return g;
}

CVector Rng::pure_state(Eigen::Index dim) {
  CVector v = ginibre(dim, 1).col(0);
  return v / v.norm();
}

CMatrix Rng::unitary(Eigen::Index dim) {
  CMatrix g = ginibre(dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

CMatrix Rng::density(Eigen::Index dim, Eigen::Index rank) {
  CMatrix g = ginibre(dim, rank);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix Rng::hermitian(Eigen::Index dim) {
  CMatrix g = ginibre(dim, dim);
  return 0.5 * (g + g.adjoint());
}

}  // namespace asymkit
