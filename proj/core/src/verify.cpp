#include "nkstab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nkstab/curvature.hpp"
#include "nkstab/stability.hpp"
#include "nkstab/su3.hpp"

namespace nkstab {

namespace {

constexpr int kDim = 6;
// The curvature identities are linear in eta; a few hundred samples suffice.
constexpr int kRoundIdentitySamples = 200;

std::string indexed(const std::string& id, std::size_t k) { return id + "[" + std::to_string(k) + "]"; }

void check_injections(const std::set<std::string>& inject, bool space) {
  for (const auto& name : inject) {
    if (!known_injections().contains(name)) throw std::invalid_argument("unknown injection '" + name + "'");
    if (!space && name != "flip-omega-plus")
      throw std::invalid_argument("injection '" + name + "' applies to spaces only");
  }
}

// Running maximum keyed by check id, for randomized suites.
struct MaxTable {
  std::vector<std::pair<std::string, double>> rows;
  void update(const std::string& id, double v) {
    for (auto& [k, x] : rows)
      if (k == id) {
        x = std::max(x, v);
        if (std::isnan(v)) x = v;
        return;
      }
    rows.emplace_back(id, v);
  }
};

double sym_matrix_residual(const DenseTensor& h) { return h.symmetry_residual(Symmetry::symmetric); }

}  // namespace

const std::set<std::string>& known_injections() {
  static const std::set<std::string> names = {"flip-omega-plus", "perturb-metric", "non-primitive"};
  return names;
}

// ---------------------------------------------------------------------------
// Flat model

Report verify_model(const ModelOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("samples must be at least 1");
  check_injections(opts.inject, false);
  const double tol = opts.tol.value_or(kFlatTolerance);

  Report rep;
  rep.context = "flat-model";
  SU3Structure s = standard_model();
  if (opts.inject.contains("flip-omega-plus")) s.omega_plus = -s.omega_plus;

  const SU3Residuals r = su3_residuals(s);
  rep.add("j_square", r.j_square, tol);
  rep.add("j_orthogonal", r.j_orthogonal, tol);
  rep.add("omega_from_j", r.omega_from_j, tol);
  rep.add("omega_prop", r.omega_prop, tol);
  rep.add("omega_wedge", r.omega_wedge, tol);
  rep.add("omega_cubed", r.omega_cubed, tol);
  rep.add("su3_normalization", r.normalization, tol);

  const DenseTensor omega_plus_as_nabla_j = s.omega_plus.untagged();
  rep.add("const_type", const_type_residual(omega_plus_as_nabla_j, s.omega), tol);

  // Round S^6 curvature at a point together with A = Omega^+.
  const DenseTensor round = constant_curvature(kDim, 1.0);
  rep.add("round_gray1", gray1_residual(round, omega_plus_as_nabla_j, s.J), tol);
  const DenseTensor round_bar = canonical_curvature(round, s.omega);
  rep.add("round_canonical_omega", curvature_action_residual(round_bar, s.omega), tol);
  rep.add("round_canonical_omega_plus", curvature_action_residual(round_bar, s.omega_plus), tol);
  rep.add("round_canonical_omega_minus", curvature_action_residual(round_bar, s.omega_minus), tol);

  std::mt19937_64 rng(opts.seed);
  MaxTable t;
  const DenseTensor g = DenseTensor::metric(kDim);
  for (int n = 0; n < opts.samples; ++n) {
    const DenseTensor h = random_s2_12(s, rng);
    const Matrix hs = h.to_matrix();
    t.update("sigma_norm", max_abs_diff(sigma_plus(s, endo_action(hs, s.omega_plus)), h * -8.0));
    t.update("sigma_norm_minus", max_abs_diff(sigma_minus(s, endo_action(hs, s.omega_minus)), h * -8.0));
    t.update("s2_12_skew_j", max_abs_diff(act_j(s, h), -h));

    Vector alpha(kDim);
    std::normal_distribution<double> nd;
    for (int a = 0; a < kDim; ++a) alpha(a) = nd(rng);
    const DenseTensor six = wedge(DenseTensor::from_vector(alpha), s.omega);
    t.update("sigma_kernel", std::max(sigma_plus(s, six).max_abs(), sigma_minus(s, six).max_abs()));

    const DenseTensor eta = random_lambda3_12(s, rng);
    t.update("three_form_characterization", three_form_characterization_residual(s, six + eta));
    t.update("lambda3_12_primitive", wedge(eta, s.omega).max_abs());
    t.update("eta_omega_orthogonality", eta_omega_orthogonality(s, eta));
    const auto jc = j_conjugation_residuals(s, eta);
    t.update("j_conjugation_1", jc[0]);
    t.update("j_conjugation_2", jc[1]);
    t.update("j_conjugation_3", jc[2]);

    const DenseTensor x = random_form(kDim, 3, rng);
    const ThreeFormSplit sp = split_3form(s, x);
    const DenseTensor resum = s.omega_plus * sp.c_plus + s.omega_minus * sp.c_minus + sp.part6 + sp.part12;
    t.update("split_3form_resum", max_abs_diff(resum, x));
    const DenseTensor parts[] = {s.omega_plus * sp.c_plus, s.omega_minus * sp.c_minus, sp.part6, sp.part12};
    double orth = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) orth = std::max(orth, std::abs(form_inner(parts[a], parts[b])));
    t.update("split_3form_orthogonal", orth);
    t.update("split_3form_part12", std::max(three_form_characterization_residual(s, sp.part12),
                                            wedge(sp.part12, s.omega).max_abs()));

    const DenseTensor y = random_form(kDim, 2, rng);
    const TwoFormSplit s2 = split_2form(s, y);
    t.update("split_2form_resum", max_abs_diff(s2.part6 + s.omega * s2.omega_coeff + s2.part8, y));
    t.update("split_2form_orthogonal",
             std::max({std::abs(form_inner(s2.part6, s2.part8)), std::abs(form_inner(s2.part6, s.omega)),
                       std::abs(form_inner(s2.part8, s.omega))}));

    const DenseTensor z = random_symmetric(kDim, rng);
    const SymTensorSplit ss = split_sym(s, z);
    t.update("split_sym_resum", max_abs_diff(ss.part12 + g * ss.trace_coeff + ss.part8, z));
    t.update("split_sym_orthogonal",
             std::max({std::abs(tensor_inner(ss.part12, ss.part8)), std::abs(tensor_inner(ss.part12, g)),
                       std::abs(tensor_inner(ss.part8, g))}));

    const DenseTensor jinv = s2.part8 + s.omega * s2.omega_coeff;
    const DenseTensor th = twist_2form_to_sym(s, jinv);
    t.update("twist_norm", std::abs(tensor_norm2(th) - tensor_norm2(jinv)));
    t.update("twist_trace_primitive", std::abs(twist_2form_to_sym(s, s2.part8).to_matrix().trace()));

    if (n < kRoundIdentitySamples) {
      t.update("round_identity_C", identity_C_residual(round, s, eta));
      t.update("round_identity_AB", identity_AB_residuals(round, s, eta).total);
    }
  }
  for (const auto& [id, v] : t.rows) rep.add(id, v, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Homogeneous spaces

SpaceDefinition perturbed_metric(const SpaceDefinition& def, double t) {
  const LieAlgebraData lie(def);
  const Matrix& gm = lie.metric_m();
  const std::size_t nh = lie.h_indices().size();

  // G-self-adjoint endomorphisms of m commuting with the isotropy action.
  const int n2 = kDim * kDim;
  Matrix eq = Matrix::Zero(static_cast<Eigen::Index>((nh + 1) * n2), n2);
  for (int col = 0; col < n2; ++col) {
    Matrix x = Matrix::Zero(kDim, kDim);
    x(col % kDim, col / kDim) = 1.0;
    for (std::size_t a = 0; a < nh; ++a) {
      const Matrix m = lie.isotropy_action_m(static_cast<int>(a));
      const Matrix c = m * x - x * m;
      eq.block(static_cast<Eigen::Index>(a) * n2, col, n2, 1) = Eigen::Map<const Vector>(c.data(), n2);
    }
    const Matrix sa = gm * x - x.transpose() * gm;
    eq.block(static_cast<Eigen::Index>(nh) * n2, col, n2, 1) = Eigen::Map<const Vector>(sa.data(), n2);
  }
  Eigen::JacobiSVD<Matrix> svd(eq, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv(0));
  const Vector id = Eigen::Map<const Vector>(Matrix::Identity(kDim, kDim).eval().data(), n2);
  Vector best;
  double best_norm = 0.0;
  for (Eigen::Index k = 0; k < n2; ++k) {
    if (k < sv.size() && sv(k) > cutoff) continue;
    Vector v = svd.matrixV().col(k);
    v -= (v.dot(id) / id.squaredNorm()) * id;
    if (v.norm() > best_norm) {
      best_norm = v.norm();
      best = v;
    }
  }
  if (best_norm < 1e-8)
    throw SpaceError("isotropy representation has no proper invariant splitting; metric cannot be stretched");
  const Matrix k = Eigen::Map<const Matrix>(best.data(), kDim, kDim);

  // Eigenspaces of k are invariant; stretch the one with the largest eigenvalue.
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(gm * k, gm);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index a = 0; a < ev.size(); ++a)
    if (std::abs(ev(a) - top) < 1e-8 * std::max(1.0, std::abs(top))) cols.push_back(a);
  Matrix b(kDim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
  const Matrix proj = b * (b.transpose() * gm * b).inverse() * b.transpose() * gm;

  SpaceDefinition out = def;
  out.name = def.name + "+stretched";
  out.metric_m = gm + t * proj.transpose() * gm * proj;
  *out.metric_m = 0.5 * (*out.metric_m + out.metric_m->transpose());
  return out;
}

Report verify_space(const SpaceDefinition& input, const SpaceOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("samples must be at least 1");
  check_injections(opts.inject, true);
  const double ta = opts.tol.value_or(kAlgebraTolerance);
  const double tc = opts.tol.value_or(kChainTolerance);

  const SpaceDefinition def =
      opts.inject.contains("perturb-metric") ? perturbed_metric(input, opts.perturbation) : input;
  const HomogeneousSpace raw(def);

  Report rep;
  rep.context = def.name;
  const LieAlgebraData& lie = raw.lie();
  rep.add("jacobi", lie.jacobi_residual(), ta);
  rep.add("reductive", std::max(lie.subalgebra_residual(), lie.reductive_residual()), ta);
  rep.add("metric_invariant", lie.metric_invariance_residual(), ta);
  double jcomm = 0.0;
  for (const Matrix& a : raw.isotropy()) jcomm = std::max(jcomm, (a * raw.J() - raw.J() * a).cwiseAbs().maxCoeff());
  rep.add("j_isotropy", jcomm, ta);

  const EinsteinScaling fit = einstein_fit(raw);
  const double rel = fit.lambda_before > 0.0 ? fit.residual_before / fit.lambda_before : INFINITY;
  rep.add("einstein_fit", rel, ta);
  rep.findings.push_back({"einstein_scaling",
                          "Einstein constant before normalization and the metric factor applied to reach Ric = 5",
                          {{"lambda_before", fit.lambda_before}, {"relative_residual", rel},
                           {"factor", fit.lambda_before / 5.0}}});
  if (!rep.checks.back().pass) {
    rep.findings.push_back({"pipeline_halted", "metric is not Einstein with positive constant; later stages skipped", {}});
    return rep;
  }

  const double lambda = 5.0;
  const HomogeneousSpace space = raw.with_metric_scaled(fit.lambda_before / lambda);
  const DenseTensor& r = space.curvature();
  SU3Structure s = su3_structure(space);
  if (opts.inject.contains("flip-omega-plus")) s.omega_plus = -s.omega_plus;
  const DenseTensor g = DenseTensor::metric(kDim);

  rep.add("einstein", einstein_residual(r, lambda), ta);
  rep.add("curvature_symmetry", curvature_symmetry_residual(r), ta);
  rep.add("bianchi", bianchi_residual(r), ta);
  double skew = 0.0;
  for (int x = 0; x < kDim; ++x) skew = std::max(skew, (space.nomizu(x) + space.nomizu(x).transpose()).cwiseAbs().maxCoeff());
  rep.add("nomizu_skew", skew, ta);
  rep.findings.push_back({"u_term", "max |U(X,Y)|; zero for naturally reductive metrics", {{"u_norm", space.u_term_norm()}}});

  const SU3Residuals sr = su3_residuals(s);
  rep.add("j_square", sr.j_square, ta);
  rep.add("j_orthogonal", sr.j_orthogonal, ta);
  rep.add("omega_prop", sr.omega_prop, ta);
  rep.add("omega_wedge", sr.omega_wedge, ta);
  rep.add("su3_normalization", sr.normalization, ta);

  const DenseTensor nj = covariant_derivative(space, s.omega);
  const DenseTensor d_omega = exterior_derivative(space, s.omega);
  rep.add("nk", nearly_kaehler_residual(nj), ta);
  rep.add("nabla_omega", max_abs_diff(nj, (d_omega * (1.0 / 3.0)).untagged()), ta);
  rep.add("d_omega", max_abs_diff(d_omega, s.omega_plus * 3.0), ta);
  rep.add("d_omega_minus", max_abs_diff(exterior_derivative(space, s.omega_minus), wedge(s.omega, s.omega) * -2.0), ta);
  rep.add("d_omega_plus", exterior_derivative(space, s.omega_plus).max_abs(), ta);
  rep.add("delta_omega", codifferential(space, s.omega).max_abs(), ta);
  rep.add("const_type", const_type_residual(nj, s.omega), ta);
  rep.add("gray1", gray1_residual(r, nj, space.J()), ta);
  const DenseTensor d2j = covariant_derivative(space, nj);
  rep.add("J2", grayJ2_residual(d2j, nj, space.J()), ta);

  const SecondOrderGrayResiduals c2 = second_order_gray_residuals(r, d2j, space.J());
  const bool x_ok = c2.last_x <= ta;
  const bool y_ok = c2.last_y <= ta;
  const std::string verdict = x_ok && y_ok ? "both readings hold"
                              : x_ok       ? "reading with last slot X holds, last slot Y fails"
                              : y_ok       ? "reading with last slot Y holds, last slot X fails"
                                           : "neither reading holds";
  rep.findings.push_back({"gray2_variants", verdict,
                          {{"last_x_residual", c2.last_x}, {"last_y_residual", c2.last_y},
                           {"exactly_one", (x_ok != y_ok) ? 1.0 : 0.0}}});
  rep.add("gray2_one_variant", std::min(c2.last_x, c2.last_y), ta);

  const DenseTensor rbar = canonical_curvature(r, s.omega);
  rep.add("canonical_omega", curvature_action_residual(rbar, s.omega), ta);
  rep.add("canonical_omega_plus", curvature_action_residual(rbar, s.omega_plus), ta);
  rep.add("canonical_omega_minus", curvature_action_residual(rbar, s.omega_minus), ta);

  rep.add("nabla_omega_plus", nabla_omega_plus_residual(space, s), ta);
  rep.add("omega_plus_divergence", omega_plus_divergence_residual(space, s), ta);
  rep.add("rough_omega_plus", max_abs_diff(rough_laplacian(space, s.omega_plus).untagged(), (s.omega_plus * 3.0).untagged()), ta);
  rep.add("ring_r_metric", max_abs_diff(ring_r(r, g), g * lambda), ta);
  rep.add("stability_operator_metric", max_abs_diff(stability_operator(space, g), g * (-2.0 * lambda)), ta);

  // Invariant de Rham complex.
  std::vector<std::vector<DenseTensor>> bases;
  for (int p = 0; p <= kDim; ++p) bases.push_back(invariant_basis(space, TensorKind::forms(p)));
  double dd = 0.0;
  double deldel = 0.0;
  double adjoint = 0.0;
  for (int p = 0; p <= kDim; ++p)
    for (const auto& a : bases[static_cast<std::size_t>(p)]) {
      if (p + 2 <= kDim) dd = std::max(dd, exterior_derivative(space, exterior_derivative(space, a)).max_abs());
      if (p >= 2) deldel = std::max(deldel, codifferential(space, codifferential(space, a)).max_abs());
      if (p + 1 <= kDim)
        for (const auto& b : bases[static_cast<std::size_t>(p + 1)])
          adjoint = std::max(adjoint, std::abs(form_inner(exterior_derivative(space, a), b) - form_inner(a, codifferential(space, b))));
    }
  rep.add("d_squared", dd, ta);
  rep.add("codifferential_squared", deldel, ta);
  rep.add("d_codifferential_adjoint", adjoint, ta);
  rep.add("weitzenbock_2forms", weitzenbock_matrix_residual(space, 2), ta);
  rep.add("weitzenbock_3forms", weitzenbock_matrix_residual(space, 3), ta);
  rep.add("bochner_operator", bochner_matrix_residual(space, lambda), ta);
  rep.add("weitzenbock_omega_plus", weitzenbock_residual(space, s.omega_plus), ta);

  // Pointwise identities for random elements of Lambda^3_12.
  std::mt19937_64 rng(opts.seed);
  double rc = 0.0;
  double rab = 0.0;
  for (int n = 0; n < opts.samples; ++n) {
    const DenseTensor eta = random_lambda3_12(s, rng);
    rc = std::max(rc, identity_C_residual(r, s, eta));
    rab = std::max(rab, identity_AB_residuals(r, s, eta).total);
  }
  rep.add("identity_C_random", rc, ta);
  rep.add("identity_AB_random", rab, ta);

  // Harmonic sectors.
  std::vector<DenseTensor> forms2 = harmonic_invariant_forms(space, 2);
  std::vector<DenseTensor> forms3 = harmonic_invariant_forms(space, 3);
  if (opts.expected_b2) rep.add("b2_sector", std::abs(static_cast<double>(forms2.size()) - *opts.expected_b2), 0.0);
  if (opts.expected_b3) rep.add("b3_sector", std::abs(static_cast<double>(forms3.size()) - *opts.expected_b3), 0.0);
  const bool non_primitive = opts.inject.contains("non-primitive");

  std::vector<DenseTensor> hs2;
  for (std::size_t k = 0; k < forms2.size(); ++k) {
    DenseTensor eta = forms2[k];
    if (non_primitive) eta += s.omega * (1.0 / std::sqrt(3.0));
    rep.add(indexed("eta2_harmonic", k), harmonic_residual(space, eta), tc);
    rep.add(indexed("eta2_j_invariant", k), j_invariance_residual(s, eta), ta);
    rep.add(indexed("eta2_primitive", k), primitivity_residual(s, eta), ta);
    const DenseTensor raw_h = transform_slot(eta, 0, s.J);
    rep.add(indexed("h2_symmetric", k), sym_matrix_residual(raw_h), ta);
    const DenseTensor h = symmetrize(raw_h).with_symmetry(Symmetry::symmetric);
    const TTTensor tt = make_tt(space, h);
    rep.add(indexed("h2_trace", k), tt.trace_residual, ta);
    rep.add(indexed("h2_divergence", k), tt.divergence_residual, ta);
    rep.add(indexed("h2_norm", k), std::abs(tensor_norm2(h) - tensor_norm2(eta)), ta);
    rep.add(indexed("bochner", k), bochner_2form_residual(space, eta, lambda), ta);
    const TwoFormChain ch = two_form_chain(space, s, eta);
    rep.add(indexed("d2j_trace", k), ch.d2j_trace, ta);
    rep.add(indexed("reduction_chain", k), ch.reduction, tc);
    rep.add(indexed("by_parts", k), ch.by_parts, tc);
    rep.add(indexed("divergence_term", k), ch.divergence_term, ta);
    rep.add(indexed("third_term", k), ch.third_term, ta);
    const DenseTensor image = stability_operator(space, h);
    rep.add(indexed("eigen_minus4", k), max_abs_diff(image, (h * -4.0).untagged()), tc);
    const double q = -tensor_inner(image, h.untagged());
    rep.add(indexed("q_value_2form", k), std::abs(q - 4.0 * tensor_norm2(h)), tc);
    rep.add(indexed("lichnerowicz_2form", k), lichnerowicz_check(space, h, lambda), tc);
    hs2.push_back(h);
  }

  std::vector<DenseTensor> hs3;
  for (std::size_t k = 0; k < forms3.size(); ++k) {
    DenseTensor eta = forms3[k];
    if (non_primitive) eta += s.omega_plus * 0.5;
    rep.add(indexed("eta3_harmonic", k), harmonic_residual(space, eta), tc);
    rep.add(indexed("eta3_lambda3_12", k), lambda3_12_residual(s, eta), ta);
    rep.add(indexed("eta3_primitive", k), wedge(eta, s.omega).max_abs(), ta);
    rep.add(indexed("eta_omega_orthogonality", k), eta_omega_orthogonality(s, eta), ta);
    const DenseTensor h = sigma_plus(s, eta);
    const TTTensor tt = make_tt(space, h);
    rep.add(indexed("h3_trace", k), tt.trace_residual, ta);
    rep.add(indexed("h3_divergence", k), tt.divergence_residual, ta);
    rep.add(indexed("h3_skew_j", k), max_abs_diff(act_j(s, h), -h), ta);
    rep.add(indexed("h3_norm", k), std::abs(tensor_norm2(h) - 32.0 * form_inner(eta, eta)), ta);
    rep.add(indexed("identity_C", k), identity_C_residual(r, s, eta), ta);
    const ABResiduals ab = identity_AB_residuals(r, s, eta);
    rep.add(indexed("identity_AB", k), ab.total, ta);
    rep.add(indexed("AB_part_I", k), ab.part_I, ta);
    rep.add(indexed("AB_part_II", k), ab.part_II, ta);
    rep.add(indexed("AB_omega_cancellation", k), ab.omega_cancellation, ta);
    rep.add(indexed("AB_curvature_action", k), ab.curvature_action, ta);
    const auto jc = j_conjugation_residuals(s, eta);
    for (int c = 0; c < 3; ++c) rep.add(indexed("j_conjugation_" + std::to_string(c + 1), k), jc[static_cast<std::size_t>(c)], ta);
    const ThreeFormChain ch = three_form_chain(space, s, eta);
    rep.add(indexed("gradient_terms", k), ch.gradient_terms, tc);
    rep.add(indexed("omega_laplacian_terms", k), ch.omega_laplacian_terms, tc);
    rep.add(indexed("laplace_h", k), ch.laplace_h, tc);
    rep.add(indexed("rough_eta", k), ch.rough_eta, tc);
    rep.add(indexed("decomposition", k), ch.decomposition, tc);
    const DenseTensor image = stability_operator(space, h);
    rep.add(indexed("eigen_minus6", k), max_abs_diff(image, (h * -6.0).untagged()), tc);
    const double q = -tensor_inner(image, h.untagged());
    rep.add(indexed("q_value_3form", k), std::abs(q - 6.0 * tensor_norm2(h)), tc);
    rep.add(indexed("lichnerowicz_3form", k), lichnerowicz_check(space, h, lambda), tc);
    hs3.push_back(h);
  }

  StabilityReport st = build_report(space, hs2, hs3, lambda);
  st.space = rep.context;
  const int sectors = st.b2_sector + st.b3_sector;
  if (sectors > 0) {
    rep.add("gram_rank", std::abs(static_cast<double>(st.gram_rank - sectors)), 0.0);
    rep.add("q_positive_definite", st.q_min_eigenvalue > 0.0 ? 0.0 : 1.0, 0.0);
  }
  rep.stability = std::move(st);
  return rep;
}

}  // namespace nkstab
