#include "nkstab/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace nkstab {

namespace {

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

void require_rank(const DenseTensor& t, int rank, const char* what) {
  if (t.rank() != rank) throw TensorError(std::string(what) + ": wrong tensor rank");
}

// P(X,Y,Z,W) = sum_k A(X,Y,k) A(Z,W,k)
DenseTensor nabla_j_pairing(const DenseTensor& a) {
  const int n = a.dim();
  DenseTensor p(n, 4);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) v += a(x, y, k) * a(z, w, k);
          p(x, y, z, w) = v;
        }
  return p;
}

}  // namespace

DenseTensor constant_curvature(int dim, double k) {
  DenseTensor r(dim, 4);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          r(i, j, a, b) = k * (delta(i, b) * delta(j, a) - delta(i, a) * delta(j, b));
  return r.with_symmetry(Symmetry::curvature_pair);
}

double bianchi_residual(const DenseTensor& r) {
  require_rank(r, 4, "bianchi_residual");
  const int n = r.dim();
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          res = std::max(res, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return res;
}

double curvature_symmetry_residual(const DenseTensor& r) {
  return r.symmetry_residual(Symmetry::curvature_pair);
}

Matrix curvature_endomorphism(const DenseTensor& r, int x, int y) {
  require_rank(r, 4, "curvature_endomorphism");
  const int n = r.dim();
  Matrix m(n, n);
  for (int z = 0; z < n; ++z)
    for (int k = 0; k < n; ++k) m(k, z) = r(x, y, z, k);
  return m;
}

double gray1_residual(const DenseTensor& r, const DenseTensor& nabla_j, const Matrix& j) {
  require_rank(r, 4, "gray1_residual");
  require_rank(nabla_j, 3, "gray1_residual");
  const DenseTensor rj = transform_slot(transform_slot(r, 2, j), 3, j);
  return max_abs_diff(rj, r.untagged() + nabla_j_pairing(nabla_j));
}

double const_type_residual(const DenseTensor& nabla_j, const DenseTensor& omega) {
  require_rank(nabla_j, 3, "const_type_residual");
  const int n = nabla_j.dim();
  const DenseTensor p = nabla_j_pairing(nabla_j);
  double res = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const double rhs = delta(x, z) * delta(y, w) - delta(x, w) * delta(y, z) -
                             omega(x, z) * omega(y, w) + omega(x, w) * omega(y, z);
          res = std::max(res, std::abs(p(x, y, z, w) - rhs));
        }
  return res;
}

double nearly_kaehler_residual(const DenseTensor& nabla_j) {
  require_rank(nabla_j, 3, "nearly_kaehler_residual");
  const int n = nabla_j.dim();
  double res = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) res = std::max(res, std::abs(nabla_j(x, y, z) + nabla_j(y, x, z)));
  return res;
}

SecondOrderGrayResiduals second_order_gray_residuals(const DenseTensor& r, const DenseTensor& d2j,
                                                     const Matrix& j) {
  require_rank(r, 4, "second_order_gray_residuals");
  require_rank(d2j, 4, "second_order_gray_residuals");
  const int n = r.dim();
  // rj(X, Y, Z, W) = R(X, JY, Z, W)
  const DenseTensor rj = transform_slot(r, 1, j);
  SecondOrderGrayResiduals out;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const double lhs = 2.0 * d2j(x, y, z, w);
          const double common = -rj(x, y, z, w) - rj(x, w, y, z);
          out.last_x = std::max(out.last_x, std::abs(lhs - (common - rj(x, z, w, x))));
          out.last_y = std::max(out.last_y, std::abs(lhs - (common - rj(x, z, w, y))));
        }
  return out;
}

double grayJ2_residual(const DenseTensor& d2j, const DenseTensor& nabla_j, const Matrix& j) {
  require_rank(d2j, 4, "grayJ2_residual");
  const int n = d2j.dim();
  // d(X, V, Y, Z) = <(nabla^2_{X,V} J)Y, JZ>
  const DenseTensor d = transform_slot(d2j, 3, j);
  double res = 0.0;
  for (int x = 0; x < n; ++x)
    for (int v = 0; v < n; ++v)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double rhs = 0.0;
          for (int k = 0; k < n; ++k)
            rhs += nabla_j(x, y, k) * nabla_j(v, z, k) + nabla_j(v, y, k) * nabla_j(x, z, k);
          res = std::max(res, std::abs(d(x, v, y, z) + d(v, x, y, z) + rhs));
        }
  return res;
}

DenseTensor canonical_curvature(const DenseTensor& r, const DenseTensor& omega) {
  require_rank(r, 4, "canonical_curvature");
  const int n = r.dim();
  DenseTensor out(n, 4);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          out(x, y, z, w) = r(x, y, z, w) +
                            0.25 * (delta(x, z) * delta(y, w) - delta(x, w) * delta(y, z)) +
                            0.5 * omega(x, y) * omega(z, w) -
                            0.75 * (omega(x, z) * omega(y, w) - omega(x, w) * omega(y, z));
  return out;
}

double curvature_action_residual(const DenseTensor& r, const DenseTensor& t) {
  double res = 0.0;
  for (int x = 0; x < r.dim(); ++x)
    for (int y = 0; y < r.dim(); ++y)
      res = std::max(res, derivation(curvature_endomorphism(r, x, y), t.untagged()).max_abs());
  return res;
}

DenseTensor ring_r(const DenseTensor& r, const DenseTensor& h) {
  require_rank(r, 4, "ring_r");
  require_rank(h, 2, "ring_r");
  const int n = r.dim();
  DenseTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) v -= r(i, p, j, q) * h(p, q);
      out(i, j) = v;
    }
  return symmetrize(out);
}

DenseTensor ricci(const DenseTensor& r) {
  require_rank(r, 4, "ricci");
  const int n = r.dim();
  DenseTensor out(n, 2);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += r(i, j, k, i);
      out(j, k) = v;
    }
  return symmetrize(out);
}

double einstein_residual(const DenseTensor& r, double lambda) {
  return max_abs_diff(ricci(r), DenseTensor::metric(r.dim()) * lambda);
}

}  // namespace nkstab
