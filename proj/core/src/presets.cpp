#include "nkstab/presets.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace nkstab {

namespace {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using Basis = std::vector<CMatrix>;

constexpr Complex kI{0.0, 1.0};

double rinner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

Complex cube_root_of_unity() {
  return std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
}

CMatrix unit(int n, int k, int l) {
  CMatrix e = CMatrix::Zero(n, n);
  e(k, l) = 1.0;
  return e;
}

// Real coordinates of a complex matrix.
Vector flatten(const CMatrix& a) {
  Vector v(2 * a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    v(2 * k) = a.data()[k].real();
    v(2 * k + 1) = a.data()[k].imag();
  }
  return v;
}

CMatrix combine(const Basis& basis, const Vector& coeffs) {
  CMatrix out = CMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

// Columns of the returned matrix span the kernel of `m`.
Matrix kernel(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < m.cols(); ++k)
    if (k >= sv.size() || sv(k) <= cutoff) cols.push_back(k);
  Matrix out(m.cols(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(cols[c]);
  return out;
}

// Elements of span(basis) annihilated by the linear map `f`.  The basis must
// be orthonormal for rinner; the result is again orthonormal.
Basis sub_kernel(const Basis& basis, const std::function<CMatrix(const CMatrix&)>& f) {
  const Vector probe = flatten(f(basis.front()));
  Matrix m(probe.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = flatten(f(basis[k]));
  const Matrix ker = kernel(m);
  Basis out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) out.push_back(combine(basis, ker.col(c)));
  return out;
}

// Orthogonal complement of span(sub) inside span(basis).
Basis complement(const Basis& basis, const Basis& sub) {
  Matrix m(static_cast<Eigen::Index>(sub.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < sub.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rinner(sub[a], basis[b]);
  const Matrix ker = kernel(m);
  Basis out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) out.push_back(combine(basis, ker.col(c)));
  return out;
}

Basis u_basis(int n) {
  Basis out;
  const double r = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k < n; ++k) out.push_back(kI * unit(n, k, k));
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      out.push_back(r * (unit(n, k, l) - unit(n, l, k)));
      out.push_back(r * kI * (unit(n, k, l) + unit(n, l, k)));
    }
  return out;
}

Basis so_basis(int n) {
  Basis out;
  const double r = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) out.push_back(r * (unit(n, k, l) - unit(n, l, k)));
  return out;
}

// Structure constants, split and J of g = h + m realized by matrices, with
// sigma the order-three automorphism whose fixed algebra is h.
SpaceDefinition realize(const std::string& name, const Basis& h, const Basis& m,
                        const std::function<CMatrix(const CMatrix&)>& sigma) {
  Basis all = h;
  all.insert(all.end(), m.begin(), m.end());
  const int n = static_cast<int>(all.size());
  Matrix gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gram(a, b) = rinner(all[static_cast<std::size_t>(a)], all[static_cast<std::size_t>(b)]);
  const Eigen::LDLT<Matrix> ldlt(gram);
  auto coords = [&](const CMatrix& x) {
    Vector rhs(n);
    for (int a = 0; a < n; ++a) rhs(a) = rinner(all[static_cast<std::size_t>(a)], x);
    Vector c = ldlt.solve(rhs);
    if ((combine(all, c) - x).cwiseAbs().maxCoeff() > 1e-10)
      throw std::logic_error("preset " + name + ": matrix basis is not closed");
    return c;
  };

  SpaceDefinition def;
  def.name = name;
  def.dim = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const CMatrix& x = all[static_cast<std::size_t>(i)];
      const CMatrix& y = all[static_cast<std::size_t>(j)];
      const Vector c = coords(x * y - y * x);
      for (int k = 0; k < n; ++k)
        if (std::abs(c(k)) > 1e-13) def.structure_constants.push_back({i, j, k, c(k)});
    }
  const int nh = static_cast<int>(h.size());
  for (int i = 0; i < nh; ++i) def.h_indices.push_back(i);
  for (int i = nh; i < n; ++i) def.m_indices.push_back(i);

  Matrix s(6, 6);
  for (int b = 0; b < 6; ++b) {
    const Vector c = coords(sigma(m[static_cast<std::size_t>(b)]));
    for (int a = 0; a < nh; ++a)
      if (std::abs(c(a)) > 1e-10) throw std::logic_error("preset " + name + ": sigma does not preserve m");
    for (int bp = 0; bp < 6; ++bp) s(bp, b) = c(nh + bp);
  }
  def.J = (Matrix::Identity(6, 6) + 2.0 * s) / std::sqrt(3.0);
  for (Eigen::Index k = 0; k < def.J.size(); ++k)
    if (std::abs(def.J.data()[k]) < 1e-14) def.J.data()[k] = 0.0;
  return def;
}

SpaceDefinition build_s3xs3() {
  // su(2) with [E1, E2] = E3 and cyclic.
  std::vector<CMatrix> e;
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;
  for (const auto& s : {s1, s2, s3}) e.push_back(-0.5 * kI * CMatrix(s));
  auto block = [](const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    CMatrix out = CMatrix::Zero(6, 6);
    out.block(0, 0, 2, 2) = a;
    out.block(2, 2, 2, 2) = b;
    out.block(4, 4, 2, 2) = c;
    return out;
  };
  Basis h, m;
  for (int k = 0; k < 3; ++k) h.push_back(block(e[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]));
  for (int k = 0; k < 3; ++k) {
    const CMatrix& x = e[static_cast<std::size_t>(k)];
    m.push_back(block(x, -x, CMatrix::Zero(2, 2)));
    m.push_back(block(x, x, -2.0 * x));
  }
  auto sigma = [&](const CMatrix& x) {
    return block(x.block(2, 2, 2, 2), x.block(4, 4, 2, 2), x.block(0, 0, 2, 2));
  };
  return realize("s3xs3", h, m, sigma);
}

SpaceDefinition build_su3_t2() {
  Basis h, m;
  h.push_back(kI * (unit(3, 0, 0) - unit(3, 1, 1)));
  h.push_back(kI * (unit(3, 0, 0) + unit(3, 1, 1) - 2.0 * unit(3, 2, 2)) / std::sqrt(3.0));
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    m.push_back(unit(3, a, b) - unit(3, b, a));
    m.push_back(kI * (unit(3, a, b) + unit(3, b, a)));
  }
  const Complex z = cube_root_of_unity();
  CMatrix g = CMatrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = z;
  g(2, 2) = z * z;
  const CMatrix gi = g.adjoint();
  return realize("su3_t2", h, m, [&](const CMatrix& x) { return CMatrix(g * x * gi); });
}

SpaceDefinition build_cp3() {
  CMatrix jc = CMatrix::Zero(4, 4);
  jc.block(0, 2, 2, 2) = CMatrix::Identity(2, 2);
  jc.block(2, 0, 2, 2) = -CMatrix::Identity(2, 2);
  const Basis sp2 = sub_kernel(u_basis(4), [&](const CMatrix& x) { return CMatrix(x.transpose() * jc + jc * x); });
  const Complex z = cube_root_of_unity();
  CMatrix g = CMatrix::Zero(4, 4);
  g(0, 0) = 1.0;
  g(1, 1) = z;
  g(2, 2) = 1.0;
  g(3, 3) = std::conj(z);
  const CMatrix gi = g.adjoint();
  auto sigma = [&](const CMatrix& x) { return CMatrix(g * x * gi); };
  const Basis h = sub_kernel(sp2, [&](const CMatrix& x) { return CMatrix(sigma(x) - x); });
  const Basis m = complement(sp2, h);
  return realize("cp3", h, m, sigma);
}

// G2 as the stabilizer of the 3-form phi in so(7), H = SU(3) the stabilizer
// of e_7, and J the cross product with e_7.
SpaceDefinition build_s6() {
  const DenseTensor phi = DenseTensor::form(
      7, 3,
      {{{0, 1, 2}, 1.0}, {{0, 3, 4}, 1.0}, {{0, 5, 6}, 1.0}, {{1, 3, 5}, 1.0},
       {{1, 4, 6}, -1.0}, {{2, 3, 6}, -1.0}, {{2, 4, 5}, -1.0}});
  auto real_part = [](const CMatrix& x) { return Matrix(x.real()); };
  const Basis g2 = sub_kernel(so_basis(7), [&](const CMatrix& x) {
    const DenseTensor d = derivation(real_part(x), phi);
    CMatrix out(static_cast<Eigen::Index>(d.size()), 1);
    for (std::size_t k = 0; k < d.size(); ++k) out(static_cast<Eigen::Index>(k), 0) = d.data()[k];
    return out;
  });
  const Basis h = sub_kernel(g2, [](const CMatrix& x) { return CMatrix(x.col(6)); });
  const Basis m = complement(g2, h);

  Matrix images(7, 6);
  for (int b = 0; b < 6; ++b) images.col(b) = real_part(m[static_cast<std::size_t>(b)]).col(6);
  // rotate: A e_7 -> e_7 x (A e_7); the induced map on m squares to -1
  Matrix cross(7, 7);
  for (int j = 0; j < 7; ++j)
    for (int k = 0; k < 7; ++k) cross(k, j) = phi(6, j, k);
  const Matrix rot = images.colPivHouseholderQr().solve(cross * images);

  // The generic realization computes J from sigma; here J is known directly,
  // so invert J = (1 + 2 sigma)/sqrt(3) to express it through sigma.
  const Matrix s = (std::sqrt(3.0) * rot - Matrix::Identity(6, 6)) / 2.0;
  auto sigma = [&](const CMatrix& x) {
    Vector c(6);
    for (int b = 0; b < 6; ++b) c(b) = rinner(m[static_cast<std::size_t>(b)], x);
    const Vector sc = s * c;
    return combine(m, sc);
  };
  return realize("s6", h, m, sigma);
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"s3xs3", "SU(2)^3 / diagonal SU(2), the 3-symmetric S3 x S3", 9, 0, 2},
      {"su3_t2", "SU(3) / T2, the flag manifold", 8, 2, 0},
      {"cp3", "Sp(2) / (Sp(1) x U(1)), the twistor space CP3", 10, 1, 0},
      {"s6", "G2 / SU(3), the round six-sphere", 14, 0, 0},
  };
  return catalog;
}

bool is_preset(std::string_view name) {
  for (const auto& p : preset_catalog())
    if (p.name == name) return true;
  return false;
}

SpaceDefinition preset_definition(std::string_view name) {
  if (name == "s3xs3") return build_s3xs3();
  if (name == "su3_t2") return build_su3_t2();
  if (name == "cp3") return build_cp3();
  if (name == "s6") return build_s6();
  throw SpaceError("unknown preset '" + std::string(name) + "'");
}

}  // namespace nkstab
