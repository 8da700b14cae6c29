#include "nkstab/su3.hpp"

#include <algorithm>
#include <cmath>

namespace nkstab {

namespace {

constexpr int kDim = 6;

DenseTensor omega_from_j(const Matrix& j) {
  // omega(e_a, e_b) = <J e_a, e_b> = J(b, a)
  return DenseTensor::from_matrix(j.transpose()).with_symmetry(Symmetry::alternating, 1e-9);
}

}  // namespace

SU3Structure standard_model() {
  Matrix j = Matrix::Zero(kDim, kDim);
  for (int k = 0; k < 3; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;   // J e_{2k-1} = e_{2k}
    j(2 * k, 2 * k + 1) = -1.0;  // J e_{2k} = -e_{2k-1}
  }
  const DenseTensor plus = DenseTensor::form(
      kDim, 3, {{{0, 2, 4}, 1.0}, {{0, 3, 5}, -1.0}, {{1, 2, 5}, -1.0}, {{1, 3, 4}, -1.0}});
  return make_su3_structure(j, plus);
}

SU3Structure make_su3_structure(const Matrix& j, const DenseTensor& omega_plus) {
  if (j.rows() != kDim || j.cols() != kDim) throw TensorError("SU(3)-structure needs a 6x6 J");
  if (omega_plus.dim() != kDim || omega_plus.rank() != 3 ||
      omega_plus.symmetry() != Symmetry::alternating)
    throw TensorError("Omega^+ must be an alternating 3-form in dimension 6");
  SU3Structure s;
  s.J = j;
  s.omega = omega_from_j(j);
  s.omega_plus = omega_plus;
  s.omega_minus = alternate(-transform_slot(omega_plus, 0, j));
  s.vol = wedge(s.omega, wedge(s.omega, s.omega)) * (1.0 / 6.0);
  return s;
}

double omega_prop_residual(const SU3Structure& s) {
  double r = 0.0;
  for (const DenseTensor* w : {&s.omega_plus, &s.omega_minus}) {
    const DenseTensor rotated = transform_slot(transform_slot(*w, 1, s.J), 2, s.J);
    r = std::max(r, max_abs_diff(*w, -rotated));
  }
  const DenseTensor jx = transform_slot(s.omega_plus, 0, s.J);
  return std::max(r, max_abs_diff(jx, -s.omega_minus));
}

SU3Residuals su3_residuals(const SU3Structure& s) {
  SU3Residuals r;
  const Matrix id = Matrix::Identity(kDim, kDim);
  r.j_square = (s.J * s.J + id).cwiseAbs().maxCoeff();
  r.j_orthogonal = (s.J.transpose() * s.J - id).cwiseAbs().maxCoeff();
  r.omega_from_j = max_abs_diff(s.omega, DenseTensor::from_matrix(s.J.transpose()));
  r.omega_prop = omega_prop_residual(s);
  r.omega_wedge = std::max(wedge(s.omega, s.omega_plus).max_abs(), wedge(s.omega, s.omega_minus).max_abs());
  const DenseTensor cube = wedge(s.omega, wedge(s.omega, s.omega));
  const DenseTensor vol = DenseTensor::form(kDim, kDim, {{{0, 1, 2, 3, 4, 5}, 1.0}});
  r.omega_cubed = max_abs_diff(cube, vol * 6.0);
  r.normalization = std::max(std::abs(form_inner(s.omega_plus, s.omega_plus) - 4.0),
                             std::abs(form_inner(s.omega_minus, s.omega_minus) - 4.0));
  return r;
}

DenseTensor act_j(const SU3Structure& s, const DenseTensor& t) { return pullback(t, s.J); }

TwoFormSplit split_2form(const SU3Structure& s, const DenseTensor& eta) {
  if (eta.dim() != kDim || eta.rank() != 2 || eta.symmetry() != Symmetry::alternating)
    throw TensorError("split_2form expects a 2-form in dimension 6");
  const DenseTensor jeta = act_j(s, eta);
  TwoFormSplit out;
  out.part6 = (eta - jeta) * 0.5;
  out.omega_coeff = form_inner(eta, s.omega) / form_inner(s.omega, s.omega);
  out.part8 = (eta + jeta) * 0.5 - s.omega * out.omega_coeff;
  return out;
}

SymTensorSplit split_sym(const SU3Structure& s, const DenseTensor& h) {
  if (h.dim() != kDim || h.rank() != 2 || h.symmetry_residual(Symmetry::symmetric) > 1e-9)
    throw TensorError("split_sym expects a symmetric 2-tensor in dimension 6");
  const DenseTensor hs = h.untagged().with_symmetry(Symmetry::symmetric, 1e-9);
  const DenseTensor jh = act_j(s, hs);
  const DenseTensor g = DenseTensor::metric(kDim);
  SymTensorSplit out;
  out.part12 = (hs - jh) * 0.5;
  out.trace_coeff = tensor_inner(hs, g) / tensor_inner(g, g);
  out.part8 = (hs + jh) * 0.5 - g * out.trace_coeff;
  return out;
}

ThreeFormSplit split_3form(const SU3Structure& s, const DenseTensor& eta) {
  if (eta.dim() != kDim || eta.rank() != 3 || eta.symmetry() != Symmetry::alternating)
    throw TensorError("split_3form expects a 3-form in dimension 6");
  ThreeFormSplit out;
  out.c_plus = form_inner(eta, s.omega_plus) / form_inner(s.omega_plus, s.omega_plus);
  out.c_minus = form_inner(eta, s.omega_minus) / form_inner(s.omega_minus, s.omega_minus);

  // alpha minimizes |eta - alpha ^ omega|; alpha -> alpha ^ omega is injective.
  std::vector<DenseTensor> gen;
  gen.reserve(kDim);
  for (int a = 0; a < kDim; ++a) gen.push_back(wedge(DenseTensor::covector(kDim, a), s.omega));
  Matrix gram(kDim, kDim);
  Vector rhs(kDim);
  for (int a = 0; a < kDim; ++a) {
    rhs(a) = form_inner(eta, gen[static_cast<std::size_t>(a)]);
    for (int b = 0; b < kDim; ++b) gram(a, b) = form_inner(gen[static_cast<std::size_t>(a)], gen[static_cast<std::size_t>(b)]);
  }
  out.alpha = gram.ldlt().solve(rhs);
  out.part6 = DenseTensor(kDim, 3, Symmetry::alternating);
  for (int a = 0; a < kDim; ++a) out.part6 += gen[static_cast<std::size_t>(a)] * out.alpha(a);
  out.part12 = eta - s.omega_plus * out.c_plus - s.omega_minus * out.c_minus - out.part6;
  return out;
}

double three_form_characterization_residual(const SU3Structure& s, const DenseTensor& eta) {
  const DenseTensor j0 = transform_slot(eta, 0, s.J);
  const DenseTensor j01 = transform_slot(j0, 1, s.J);
  const DenseTensor j02 = transform_slot(j0, 2, s.J);
  const DenseTensor j12 = transform_slot(transform_slot(eta, 1, s.J), 2, s.J);
  return max_abs_diff(eta.untagged(), j01 + j02 + j12);
}

DenseTensor endo_action(const Matrix& a, const DenseTensor& eta) { return derivation(a, eta); }

DenseTensor sigma_map(const DenseTensor& reference, const DenseTensor& eta) {
  if (eta.rank() != 3 || reference.rank() != 3 || eta.dim() != reference.dim())
    throw TensorError("sigma_map expects 3-forms of equal dimension");
  const int n = eta.dim();
  DenseTensor h(n, 2);
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          v += eta(x, i, j) * reference(y, i, j) + eta(y, i, j) * reference(x, i, j);
      h(x, y) = v;
      h(y, x) = v;
    }
  }
  return h.with_symmetry(Symmetry::symmetric);
}

DenseTensor twist_2form_to_sym(const SU3Structure& s, const DenseTensor& eta) {
  if (eta.rank() != 2 || eta.dim() != kDim) throw TensorError("twist expects a 2-form in dimension 6");
  const DenseTensor h = transform_slot(eta, 0, s.J);
  const double scale = std::max(1.0, h.max_abs());
  if (h.symmetry_residual(Symmetry::symmetric) > 1e-9 * scale)
    throw TensorError("twist_2form_to_sym: input is not J-invariant");
  return symmetrize(h);
}

DenseTensor random_symmetric(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DenseTensor h(dim, 2);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = nd(rng);
      h(i, j) = v;
      h(j, i) = v;
    }
  return h.with_symmetry(Symmetry::symmetric);
}

DenseTensor random_form(int dim, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const auto n = static_cast<Eigen::Index>(increasing_tuples(dim, degree).size());
  Vector c(n);
  for (Eigen::Index k = 0; k < n; ++k) c(k) = nd(rng);
  return form_from_coefficients(dim, degree, c);
}

DenseTensor random_s2_12(const SU3Structure& s, std::mt19937_64& rng) {
  return split_sym(s, random_symmetric(kDim, rng)).part12;
}

DenseTensor random_s2_8(const SU3Structure& s, std::mt19937_64& rng) {
  return split_sym(s, random_symmetric(kDim, rng)).part8;
}

DenseTensor random_lambda3_12(const SU3Structure& s, std::mt19937_64& rng) {
  return endo_action(random_s2_12(s, rng).to_matrix(), s.omega_plus);
}

DenseTensor random_lambda2_8(const SU3Structure& s, std::mt19937_64& rng) {
  return split_2form(s, random_form(kDim, 2, rng)).part8;
}

}  // namespace nkstab
