#include "nkstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "nkstab/curvature.hpp"

namespace nkstab {

namespace {

constexpr int kDim = 6;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix as_matrix(const DenseTensor& t) { return t.to_matrix(); }

// (nabla_x T) as a tensor of rank r, for invariant T with nabla already taken.
DenseTensor slice(const DenseTensor& nabla_t, int x) {
  DenseTensor out(nabla_t.dim(), nabla_t.rank() - 1);
  auto src = nabla_t.data();
  auto dst = out.data();
  std::copy(src.begin() + static_cast<std::ptrdiff_t>(x) * static_cast<std::ptrdiff_t>(dst.size()),
            src.begin() + static_cast<std::ptrdiff_t>(x + 1) * static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
  return out;
}

// M(j, k) = sum_{pq} a(j, p, q) b(k, p, q)
Matrix pair_3(const DenseTensor& a, const DenseTensor& b) {
  Matrix m = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k) {
      double v = 0.0;
      for (int p = 0; p < kDim; ++p)
        for (int q = 0; q < kDim; ++q) v += a(j, p, q) * b(k, p, q);
      m(j, k) = v;
    }
  return m;
}

double scale_of(const DenseTensor& t) { return std::max(1.0, t.max_abs()); }

}  // namespace

// ---------------------------------------------------------------------------
// TT tensors and the stability operator

Vector divergence(const HomogeneousSpace& space, const DenseTensor& h) {
  const DenseTensor nh = covariant_derivative(space, h);
  Vector out = Vector::Zero(kDim);
  for (int j = 0; j < kDim; ++j)
    for (int i = 0; i < kDim; ++i) out(j) -= nh(i, i, j);
  return out;
}

TTTensor make_tt(const HomogeneousSpace& space, const DenseTensor& h) {
  TTTensor out;
  out.h = h;
  double tr = 0.0;
  for (int i = 0; i < kDim; ++i) tr += h(i, i);
  out.trace_residual = std::abs(tr);
  out.divergence_residual = divergence(space, h).cwiseAbs().maxCoeff();
  return out;
}

DenseTensor stability_operator(const HomogeneousSpace& space, const DenseTensor& h) {
  return rough_laplacian(space, h).untagged() - ring_r(space.curvature(), h) * 2.0;
}

double q_form(const HomogeneousSpace& space, const DenseTensor& h, double tol) {
  const TTTensor tt = make_tt(space, h);
  const double bound = tol * scale_of(h);
  if (tt.trace_residual > bound || tt.divergence_residual > bound)
    throw StabilityError("q_form: tensor is not transverse traceless");
  if (h.symmetry_residual(Symmetry::symmetric) > bound) throw StabilityError("q_form: tensor is not symmetric");
  return -tensor_inner(stability_operator(space, h), h.untagged());
}

DenseTensor lichnerowicz_laplacian(const HomogeneousSpace& space, const DenseTensor& h) {
  const Matrix ric = as_matrix(ricci(space.curvature()));
  const Matrix hm = as_matrix(h);
  const DenseTensor ricci_terms = DenseTensor::from_matrix(ric * hm + hm * ric);
  return ring_r(space.curvature(), h) * 2.0 - rough_laplacian(space, h).untagged() - ricci_terms;
}

double lichnerowicz_check(const HomogeneousSpace& space, const DenseTensor& h, double lambda) {
  const DenseTensor sum = stability_operator(space, h) + lichnerowicz_laplacian(space, h) + h.untagged() * (2.0 * lambda);
  return sum.max_abs();
}

double rayleigh_quotient(const DenseTensor& image, const DenseTensor& h) {
  const double n2 = tensor_norm2(h);
  return n2 > 0.0 ? tensor_inner(image.untagged(), h.untagged()) / n2 : 0.0;
}

// ---------------------------------------------------------------------------
// Preconditions

double harmonic_residual(const HomogeneousSpace& space, const DenseTensor& form) {
  return hodge_laplacian(space, form).max_abs();
}

double j_invariance_residual(const SU3Structure& s, const DenseTensor& eta) {
  return max_abs_diff(act_j(s, eta).untagged(), eta.untagged());
}

double primitivity_residual(const SU3Structure& s, const DenseTensor& eta) {
  return std::abs(form_inner(eta, s.omega));
}

double lambda3_12_residual(const SU3Structure& s, const DenseTensor& eta) {
  const ThreeFormSplit sp = split_3form(s, eta);
  return std::max({std::abs(sp.c_plus), std::abs(sp.c_minus), sp.part6.max_abs()});
}

TTTensor destabilizer_from_2form(const HomogeneousSpace& space, const SU3Structure& s,
                                 const DenseTensor& eta, double tol) {
  if (eta.rank() != 2 || eta.symmetry() != Symmetry::alternating)
    throw StabilityError("destabilizer_from_2form expects a 2-form");
  const double bound = tol * scale_of(eta);
  if (j_invariance_residual(s, eta) > bound) throw StabilityError("2-form is not J-invariant");
  if (primitivity_residual(s, eta) > bound) throw StabilityError("2-form is not primitive");
  if (harmonic_residual(space, eta) > bound) throw StabilityError("2-form is not harmonic");
  return make_tt(space, twist_2form_to_sym(s, eta));
}

TTTensor destabilizer_from_3form(const HomogeneousSpace& space, const SU3Structure& s,
                                 const DenseTensor& eta, double tol) {
  if (eta.rank() != 3 || eta.symmetry() != Symmetry::alternating)
    throw StabilityError("destabilizer_from_3form expects a 3-form");
  const double bound = tol * scale_of(eta);
  if (lambda3_12_residual(s, eta) > bound) throw StabilityError("3-form is not in Lambda^3_12");
  if (harmonic_residual(space, eta) > bound) throw StabilityError("3-form is not harmonic");
  return make_tt(space, sigma_plus(s, eta));
}

// ---------------------------------------------------------------------------
// Identities for Lambda^3_12

Matrix eta_omega_plus_pairing(const SU3Structure& s, const DenseTensor& eta) {
  return pair_3(eta, s.omega_plus);
}

double identity_C_residual(const DenseTensor& r, const SU3Structure& s, const DenseTensor& eta) {
  // a(p, q, j) = sum_{il} R_{pqil} eta_{ijl}
  DenseTensor a(kDim, 3);
  for (int p = 0; p < kDim; ++p)
    for (int q = 0; q < kDim; ++q)
      for (int j = 0; j < kDim; ++j) {
        double v = 0.0;
        for (int i = 0; i < kDim; ++i)
          for (int l = 0; l < kDim; ++l) v += r(p, q, i, l) * eta(i, j, l);
        a(p, q, j) = v;
      }
  Matrix m1 = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k)
      for (int p = 0; p < kDim; ++p)
        for (int q = 0; q < kDim; ++q) m1(j, k) += a(p, q, j) * s.omega_plus(k, p, q);
  const Matrix pm = eta_omega_plus_pairing(s, eta);
  const Matrix h = pm + pm.transpose();
  return max_abs(m1 + m1.transpose() - 2.0 * h);
}

ABResiduals identity_AB_residuals(const DenseTensor& r, const SU3Structure& s, const DenseTensor& eta) {
  const Matrix pm = eta_omega_plus_pairing(s, eta);
  const Matrix h = pm + pm.transpose();
  const Matrix om = as_matrix(s.omega);
  const double tau = (pm.array() * om.array()).sum();

  // b(j, p, q) = sum_{il} R_{jpil} eta_{ilq}
  DenseTensor b(kDim, 3);
  for (int j = 0; j < kDim; ++j)
    for (int p = 0; p < kDim; ++p)
      for (int q = 0; q < kDim; ++q) {
        double v = 0.0;
        for (int i = 0; i < kDim; ++i)
          for (int l = 0; l < kDim; ++l) v += r(j, p, i, l) * eta(i, l, q);
        b(j, p, q) = v;
      }
  Matrix part1 = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k)
      for (int i = 0; i < kDim; ++i)
        for (int l = 0; l < kDim; ++l) part1(j, k) += 2.0 * r(j, i, k, l) * pm(i, l);
  const Matrix part2 = 2.0 * pair_3(b, s.omega_plus);
  const Matrix one = part1 - part2;
  const Matrix two = one.transpose();

  ABResiduals out;
  out.total = max_abs(one + two - 6.0 * h);
  const Matrix one_rhs = -pm.transpose() + 7.0 * pm + 1.5 * tau * om;
  const Matrix two_rhs = -pm + 7.0 * pm.transpose() + 1.5 * tau * om.transpose();
  out.part_I = max_abs(one - one_rhs);
  out.part_II = max_abs(two - two_rhs);
  out.omega_cancellation = max_abs(1.5 * tau * (om + om.transpose()));

  Matrix action = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j)
    for (int i = 0; i < kDim; ++i) {
      const DenseTensor ro = derivation(curvature_endomorphism(r, j, i), s.omega_plus.untagged());
      for (int k = 0; k < kDim; ++k)
        for (int p = 0; p < kDim; ++p)
          for (int q = 0; q < kDim; ++q) action(j, k) -= 2.0 * eta(i, p, q) * ro(k, p, q);
    }
  out.curvature_action = max_abs(one - action);
  return out;
}

std::array<double, 3> j_conjugation_residuals(const SU3Structure& s, const DenseTensor& eta) {
  const Matrix pm = eta_omega_plus_pairing(s, eta);
  const DenseTensor eta_j = transform_slot(eta, 0, s.J);
  const DenseTensor op_j0 = transform_slot(s.omega_plus, 0, s.J);
  const DenseTensor op_j1 = transform_slot(s.omega_plus, 1, s.J);
  const Matrix a = pair_3(eta_j, op_j0);
  const Matrix c = pair_3(eta_j, op_j1);
  return {max_abs(a + pm), max_abs(a.transpose() + pm.transpose()), max_abs(c + pm)};
}

double eta_omega_orthogonality(const SU3Structure& s, const DenseTensor& eta) {
  double res = 0.0;
  for (int j = 0; j < kDim; ++j) {
    double v = 0.0;
    for (int p = 0; p < kDim; ++p)
      for (int q = 0; q < kDim; ++q) v += eta(j, p, q) * s.omega(p, q);
    res = std::max(res, std::abs(v));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Weitzenboeck and Bochner

DenseTensor weitzenbock_curvature_term(const DenseTensor& r, const DenseTensor& eta) {
  const int n = eta.dim();
  const int p = eta.rank();
  DenseTensor out(n, p);
  if (p == 0) return out;
  std::vector<DenseTensor> acted;  // acted[i * n + a] = R_{e_i, e_a} . eta
  acted.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) acted.push_back(derivation(curvature_endomorphism(r, i, a), eta.untagged()));
  std::array<int, kMaxRank> arg{};
  for_each_index(n, p, [&](std::span<const int> idx) {
    double v = 0.0;
    for (int s = 0; s < p; ++s) {
      const double sign = (s % 2 == 0) ? 1.0 : -1.0;
      // arguments: (e_i, idx without position s)
      int w = 1;
      for (int t = 0; t < p; ++t)
        if (t != s) arg[static_cast<std::size_t>(w++)] = idx[static_cast<std::size_t>(t)];
      for (int i = 0; i < n; ++i) {
        arg[0] = i;
        v += sign * acted[static_cast<std::size_t>(i * n + idx[static_cast<std::size_t>(s)])].at(
                        std::span<const int>(arg.data(), static_cast<std::size_t>(p)));
      }
    }
    out.at(idx) = v;
  });
  return out;
}

double weitzenbock_residual(const HomogeneousSpace& space, const DenseTensor& eta) {
  const DenseTensor lhs = hodge_laplacian(space, eta).untagged();
  const DenseTensor rhs = rough_laplacian(space, eta).untagged() + weitzenbock_curvature_term(space.curvature(), eta);
  return max_abs_diff(lhs, rhs);
}

double weitzenbock_matrix_residual(const HomogeneousSpace& space, int p) {
  const TensorKind kind = TensorKind::forms(p);
  const auto basis = invariant_basis(space, kind);
  const Matrix lap = operator_matrix(kind, basis, [&](const DenseTensor& t) { return hodge_laplacian(space, t); });
  const Matrix rhs = operator_matrix(kind, basis, [&](const DenseTensor& t) {
    return rough_laplacian(space, t).untagged() + weitzenbock_curvature_term(space.curvature(), t);
  });
  return max_abs(lap - rhs);
}

namespace {

DenseTensor bochner_rhs(const HomogeneousSpace& space, const DenseTensor& eta, double lambda) {
  const DenseTensor& r = space.curvature();
  DenseTensor curv(kDim, 2);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      double v = 0.0;
      for (int p = 0; p < kDim; ++p)
        for (int q = 0; q < kDim; ++q) v += r(i, p, j, q) * eta(p, q);
      curv(i, j) = 2.0 * v;
    }
  return rough_laplacian(space, eta).untagged() + curv + eta.untagged() * (2.0 * lambda);
}

}  // namespace

double bochner_2form_residual(const HomogeneousSpace& space, const DenseTensor& eta, double lambda) {
  return bochner_rhs(space, eta, lambda).max_abs();
}

double bochner_matrix_residual(const HomogeneousSpace& space, double lambda) {
  const TensorKind kind = TensorKind::forms(2);
  const auto basis = invariant_basis(space, kind);
  const Matrix lap = operator_matrix(kind, basis, [&](const DenseTensor& t) { return hodge_laplacian(space, t); });
  const Matrix rhs = operator_matrix(kind, basis, [&](const DenseTensor& t) { return bochner_rhs(space, t, lambda); });
  return max_abs(lap - rhs);
}

// ---------------------------------------------------------------------------
// Omega^+ structure identities

double nabla_omega_plus_residual(const HomogeneousSpace& space, const SU3Structure& s) {
  const DenseTensor nop = covariant_derivative(space, s.omega_plus);
  double res = 0.0;
  for (int x = 0; x < kDim; ++x) {
    const DenseTensor expected = -wedge(DenseTensor::covector(kDim, x), s.omega);
    res = std::max(res, max_abs_diff(slice(nop, x), expected.untagged()));
  }
  return res;
}

double omega_plus_divergence_residual(const HomogeneousSpace& space, const SU3Structure& s) {
  const DenseTensor div = contract(covariant_derivative(space, s.omega_plus), 0, 1);
  return max_abs_diff(div, (s.omega * -4.0).untagged());
}

// ---------------------------------------------------------------------------
// Proof chains

TwoFormChain two_form_chain(const HomogeneousSpace& space, const SU3Structure& s, const DenseTensor& eta) {
  TwoFormChain out;
  const DenseTensor h = twist_2form_to_sym(s, eta);
  const Matrix hm = as_matrix(h);
  const Matrix em = as_matrix(eta);
  const DenseTensor a = covariant_derivative(space, s.omega);  // A(p, i, q) = (nabla_p omega)_{iq}
  const DenseTensor na = covariant_derivative(space, eta);      // (nabla_p eta)_{qj}
  const DenseTensor d2j = second_covariant_j(space);

  Matrix trace_term = Matrix::Zero(kDim, kDim);
  Matrix grad_term = Matrix::Zero(kDim, kDim);  // sum_{pq} (nabla_p omega)_{iq} (nabla_p eta)_{qj}
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int p = 0; p < kDim; ++p)
        for (int q = 0; q < kDim; ++q) {
          trace_term(i, j) -= d2j(p, p, i, q) * em(q, j);
          grad_term(i, j) += a(p, i, q) * na(p, q, j);
        }
  out.d2j_trace = max_abs(trace_term - 4.0 * hm);

  const Matrix lhs = as_matrix(stability_operator(space, h));
  out.reduction = max_abs(lhs - (-2.0 * hm - 2.0 * grad_term));

  DenseTensor v(kDim, 3);  // V(p, i, j) = sum_q (nabla_p omega)_{iq} eta_{qj}
  for (int p = 0; p < kDim; ++p)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        double x = 0.0;
        for (int q = 0; q < kDim; ++q) x += a(p, i, q) * em(q, j);
        v(p, i, j) = x;
      }
  const Matrix dmat = as_matrix(contract(covariant_derivative(space, v), 0, 1));
  out.by_parts = max_abs(-grad_term - (-dmat - 4.0 * hm));

  DenseTensor w(kDim, 1);
  for (int p = 0; p < kDim; ++p) {
    double x = 0.0;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) x += v(p, i, j) * hm(i, j);
    w(p) = x;
  }
  const DenseTensor nw = covariant_derivative(space, w);
  double div = 0.0;
  for (int p = 0; p < kDim; ++p) div += nw(p, p);
  out.divergence_term = std::abs(div);

  double third = 0.0;
  for (int p = 0; p < kDim; ++p)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        double eta_ij = 0.0;  // eta(e_i, (nabla_p J) e_j)
        for (int k = 0; k < kDim; ++k) eta_ij += a(p, j, k) * em(i, k);
        double vq = 0.0;
        for (int q = 0; q < kDim; ++q) vq += a(p, i, q) * em(q, j);
        third -= vq * eta_ij;
      }
  out.third_term = std::abs(third - 2.0 * tensor_norm2(h));
  return out;
}

ThreeFormChain three_form_chain(const HomogeneousSpace& space, const SU3Structure& s, const DenseTensor& eta) {
  ThreeFormChain out;
  const DenseTensor& r = space.curvature();
  const Matrix pm = eta_omega_plus_pairing(s, eta);
  const Matrix h = pm + pm.transpose();
  const DenseTensor ne = covariant_derivative(space, eta);
  const DenseTensor nop = covariant_derivative(space, s.omega_plus);

  Matrix grad = Matrix::Zero(kDim, kDim);
  for (int i = 0; i < kDim; ++i) grad += pair_3(slice(ne, i), slice(nop, i));
  out.gradient_terms = max_abs(-2.0 * (grad + grad.transpose()) + 2.0 * h);

  const Matrix lop = pair_3(rough_laplacian(space, s.omega_plus), eta);
  out.omega_laplacian_terms = max_abs(lop + lop.transpose() - 3.0 * h);

  const DenseTensor rough_e = rough_laplacian(space, eta);
  const Matrix le = pair_3(rough_e, s.omega_plus);
  const Matrix rough_h = as_matrix(rough_laplacian(space, DenseTensor::from_matrix(h, Symmetry::symmetric)));
  out.laplace_h = max_abs(rough_h - (h + le + le.transpose()));

  DenseTensor expected(kDim, 3);
  for (int j = 0; j < kDim; ++j)
    for (int p = 0; p < kDim; ++p)
      for (int q = 0; q < kDim; ++q) {
        double v = -15.0 * eta(j, p, q);
        for (int i = 0; i < kDim; ++i)
          for (int l = 0; l < kDim; ++l)
            v -= r(j, p, i, l) * eta(i, l, q) + r(q, p, i, l) * eta(i, j, l) + r(j, q, i, l) * eta(i, p, l);
        expected(j, p, q) = v;
      }
  out.rough_eta = max_abs_diff(rough_e.untagged(), expected);

  // AB and C left-hand sides, assembled as in the identities
  Matrix ab = Matrix::Zero(kDim, kDim);
  Matrix c = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k) {
      double v_ab = 0.0;
      double v_c = 0.0;
      for (int i = 0; i < kDim; ++i)
        for (int l = 0; l < kDim; ++l) {
          v_ab += 2.0 * r(j, i, k, l) * (pm(i, l) + pm(l, i));
          for (int p = 0; p < kDim; ++p)
            for (int q = 0; q < kDim; ++q) {
              v_ab -= 2.0 * (r(j, p, i, l) * eta(i, l, q) * s.omega_plus(k, p, q) +
                             r(k, p, i, l) * eta(i, l, q) * s.omega_plus(j, p, q));
              v_c += r(p, q, i, l) * (eta(i, j, l) * s.omega_plus(k, p, q) + eta(i, k, l) * s.omega_plus(j, p, q));
            }
        }
      ab(j, k) = v_ab;
      c(j, k) = v_c;
    }
  const Matrix lhs = as_matrix(stability_operator(space, DenseTensor::from_matrix(h, Symmetry::symmetric)));
  out.decomposition = max_abs(lhs - (-14.0 * h + ab + c));
  return out;
}

// ---------------------------------------------------------------------------
// Report

StabilityReport build_report(const HomogeneousSpace& space, const std::vector<DenseTensor>& from_2forms,
                             const std::vector<DenseTensor>& from_3forms, double lambda) {
  StabilityReport rep;
  rep.space = space.name();
  rep.einstein_constant = lambda;
  rep.b2_sector = static_cast<int>(from_2forms.size());
  rep.b3_sector = static_cast<int>(from_3forms.size());

  std::vector<DenseTensor> all;
  auto add = [&](const DenseTensor& h, const char* source, int index) {
    Destabilizer d;
    d.source = source;
    d.index = index;
    d.norm2 = tensor_norm2(h);
    const DenseTensor image = stability_operator(space, h);
    d.q_value = -tensor_inner(image, h.untagged());
    d.stability_eigenvalue = rayleigh_quotient(image, h);
    d.lichnerowicz_eigenvalue = rayleigh_quotient(lichnerowicz_laplacian(space, h), h);
    d.eh_unstable = d.q_value > 0.0;
    d.nu_unstable = d.lichnerowicz_eigenvalue > -2.0 * lambda;
    rep.destabilizers.push_back(d);
    all.push_back(h);
  };
  for (std::size_t k = 0; k < from_2forms.size(); ++k) add(from_2forms[k], "2-form", static_cast<int>(k));
  for (std::size_t k = 0; k < from_3forms.size(); ++k) add(from_3forms[k], "3-form", static_cast<int>(k));

  const auto n = static_cast<Eigen::Index>(all.size());
  if (n > 0) {
    Matrix gram(n, n);
    Matrix q(n, n);
    std::vector<DenseTensor> images;
    for (const auto& h : all) images.push_back(stability_operator(space, h));
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        gram(a, b) = tensor_inner(all[static_cast<std::size_t>(a)].untagged(), all[static_cast<std::size_t>(b)].untagged());
        q(a, b) = -tensor_inner(images[static_cast<std::size_t>(a)], all[static_cast<std::size_t>(b)].untagged());
      }
    Eigen::SelfAdjointEigenSolver<Matrix> ge(gram);
    const double top = ge.eigenvalues().maxCoeff();
    rep.gram_rank = static_cast<int>((ge.eigenvalues().array() > 1e-9 * top).count());
    Eigen::SelfAdjointEigenSolver<Matrix> qe(0.5 * (q + q.transpose()));
    rep.q_min_eigenvalue = qe.eigenvalues().minCoeff();
  }
  rep.coindex_lower_bound = rep.b2_sector + rep.b3_sector;
  if (rep.space == "s3xs3")
    rep.notes.push_back(
        "not computed here: the full coindex of this metric for the nu-entropy is at least 12 + 2 = 14");
  if (rep.destabilizers.empty()) rep.notes.push_back("no harmonic invariant 2- or 3-forms; no instability claim");
  return rep;
}

}  // namespace nkstab
