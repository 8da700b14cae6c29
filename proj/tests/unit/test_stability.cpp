#include <doctest.h>

#include <cmath>
#include <random>

#include "nkstab/curvature.hpp"
#include "nkstab/stability.hpp"
#include "oracles.hpp"
#include "spaces.hpp"

using namespace nkstab;
using testing_support::kPresets;
using testing_support::normalized_space;

namespace {

struct Reference {
  std::vector<double> r;
  std::vector<oracle::Mat6> l;
};

Reference reference(const HomogeneousSpace& sp) {
  const oracle::NormalMetric m(sp.definition());
  return {m.curvature(sp.frame()), m.half_ad(sp.frame())};
}

oracle::Mat6 reference_stability(const Reference& ref, const oracle::Mat6& h) {
  return oracle::rough_laplacian(ref.l, h) - 2.0 * oracle::ring(ref.r, h);
}

double rpt(const Reference& ref, int a, int b, int c, int d) { return oracle::r4(ref.r, a, b, c, d); }

// sum R_{pqil}(eta_{ijl} W_{kpq} + eta_{ikl} W_{jpq}) - 2 h, written out.
double identity_c_direct(const Reference& ref, const DenseTensor& w, const DenseTensor& eta, const Matrix& h) {
  double m = 0.0;
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      double v = 0.0;
      for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q)
          for (int i = 0; i < 6; ++i)
            for (int l = 0; l < 6; ++l)
              v += rpt(ref, p, q, i, l) * (eta(i, j, l) * w(k, p, q) + eta(i, k, l) * w(j, p, q));
      m = std::max(m, std::abs(v - 2.0 * h(j, k)));
    }
  return m;
}

// 2 sum R_{jikl}(eta_{ipq} W_{lpq} + eta_{lpq} W_{ipq}) - 2 sum (R_{jpil} eta_{ilq} W_{kpq} + R_{kpil} eta_{ilq} W_{jpq}) - 6 h
double identity_ab_direct(const Reference& ref, const DenseTensor& w, const DenseTensor& eta, const Matrix& h) {
  double m = 0.0;
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      double v = 0.0;
      for (int i = 0; i < 6; ++i)
        for (int l = 0; l < 6; ++l) {
          const double rr = rpt(ref, j, i, k, l);
          for (int p = 0; p < 6; ++p)
            for (int q = 0; q < 6; ++q) v += 2.0 * rr * (eta(i, p, q) * w(l, p, q) + eta(l, p, q) * w(i, p, q));
        }
      for (int p = 0; p < 6; ++p)
        for (int i = 0; i < 6; ++i)
          for (int l = 0; l < 6; ++l)
            for (int q = 0; q < 6; ++q)
              v -= 2.0 * (rpt(ref, j, p, i, l) * eta(i, l, q) * w(k, p, q) + rpt(ref, k, p, i, l) * eta(i, l, q) * w(j, p, q));
      m = std::max(m, std::abs(v - 6.0 * h(j, k)));
    }
  return m;
}

}  // namespace

TEST_CASE("stability operator on the metric") {
  for (const char* name : kPresets) {
    const HomogeneousSpace& sp = normalized_space(name);
    const DenseTensor g = DenseTensor::metric(6);
    CHECK(max_abs_diff(stability_operator(sp, g), g * -10.0) < 1e-12);
    CHECK_THROWS_AS(q_form(sp, g), StabilityError);
  }
}

TEST_CASE("destabilizers from harmonic 3-forms") {
  const HomogeneousSpace& sp = normalized_space("s3xs3");
  const SU3Structure s = su3_structure(sp);
  const Reference ref = reference(sp);
  const auto forms = harmonic_invariant_forms(sp, 3);
  REQUIRE(forms.size() == 2);
  std::vector<DenseTensor> hs;
  for (const auto& eta : forms) {
    const TTTensor tt = destabilizer_from_3form(sp, s, eta);
    const DenseTensor& h = tt.h;
    CHECK(tt.trace_residual < 1e-10);
    CHECK(tt.divergence_residual < 1e-10);
    CHECK(max_abs_diff(act_j(s, h), -h) < 1e-12);
    CHECK(tensor_norm2(h) > 1.0);

    const Matrix hm = h.to_matrix();
    const oracle::Mat6 sref = reference_stability(ref, hm);
    CHECK((sref + 6.0 * hm).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((stability_operator(sp, h).to_matrix() - sref).cwiseAbs().maxCoeff() < 1e-10);
    const double q = -(sref.cwiseProduct(hm)).sum();
    CHECK(q == doctest::Approx(6.0 * hm.squaredNorm()).epsilon(1e-10));
    CHECK(q_form(sp, h) == doctest::Approx(q).epsilon(1e-10));
    CHECK(q > 0.0);

    CHECK(identity_c_direct(ref, s.omega_plus, eta, hm) < 1e-10);
    CHECK(identity_C_residual(sp.curvature(), s, eta) < 1e-10);
    CHECK(identity_ab_direct(ref, s.omega_plus, eta, hm) < 1e-10);
    const ABResiduals ab = identity_AB_residuals(sp.curvature(), s, eta);
    CHECK(ab.total < 1e-10);
    CHECK(ab.part_I < 1e-10);
    CHECK(ab.part_II < 1e-10);
    CHECK(ab.omega_cancellation < 1e-10);
    CHECK(ab.curvature_action < 1e-10);

    const ThreeFormChain ch = three_form_chain(sp, s, eta);
    CHECK(ch.gradient_terms < 1e-9);
    CHECK(ch.omega_laplacian_terms < 1e-9);
    CHECK(ch.laplace_h < 1e-9);
    CHECK(ch.rough_eta < 1e-9);
    CHECK(ch.decomposition < 1e-9);

    CHECK(lichnerowicz_check(sp, h, 5.0) < 1e-9);
    CHECK(max_abs_diff(lichnerowicz_laplacian(sp, h), h * -4.0) < 1e-9);
    CHECK(weitzenbock_residual(sp, eta) < 1e-10);
    hs.push_back(h);
  }

  // Both curvature identities are pointwise, so random elements of Lambda^3_12 satisfy them too.
  std::mt19937_64 rng(41);
  for (int n = 0; n < 5; ++n) {
    const DenseTensor eta = random_lambda3_12(s, rng);
    const Matrix hm = sigma_plus(s, eta).to_matrix();
    CHECK(identity_c_direct(ref, s.omega_plus, eta, hm) < 1e-10);
    CHECK(identity_ab_direct(ref, s.omega_plus, eta, hm) < 1e-10);
  }

  const StabilityReport rep = build_report(sp, {}, hs, 5.0);
  CHECK(rep.b2_sector == 0);
  CHECK(rep.b3_sector == 2);
  CHECK(rep.coindex_lower_bound == 2);
  CHECK(rep.gram_rank == 2);
  CHECK(rep.q_min_eigenvalue > 0.0);
  for (const auto& d : rep.destabilizers) {
    CHECK(d.eh_unstable);
    CHECK(d.nu_unstable);
    CHECK(d.stability_eigenvalue == doctest::Approx(-6.0));
    CHECK(d.lichnerowicz_eigenvalue == doctest::Approx(-4.0));
    CHECK(d.lichnerowicz_eigenvalue > -10.0);
  }
  bool noted = false;
  for (const auto& note : rep.notes) noted = noted || note.find("12 + 2 = 14") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("destabilizers from harmonic 2-forms") {
  for (const char* name : {"su3_t2", "cp3"}) {
    CAPTURE(name);
    const HomogeneousSpace& sp = normalized_space(name);
    const SU3Structure s = su3_structure(sp);
    const Reference ref = reference(sp);
    const auto forms = harmonic_invariant_forms(sp, 2);
    REQUIRE(!forms.empty());
    std::vector<DenseTensor> hs;
    for (const auto& eta : forms) {
      CHECK(harmonic_residual(sp, eta) < 1e-10);
      CHECK(j_invariance_residual(s, eta) < 1e-12);
      CHECK(primitivity_residual(s, eta) < 1e-12);
      const TTTensor tt = destabilizer_from_2form(sp, s, eta);
      const DenseTensor& h = tt.h;
      CHECK(tt.trace_residual < 1e-10);
      CHECK(tt.divergence_residual < 1e-10);
      CHECK(tensor_norm2(h) == doctest::Approx(tensor_norm2(eta)));

      const Matrix hm = h.to_matrix();
      const oracle::Mat6 sref = reference_stability(ref, hm);
      CHECK((sref + 4.0 * hm).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((stability_operator(sp, h).to_matrix() - sref).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(q_form(sp, h) == doctest::Approx(4.0 * tensor_norm2(h)).epsilon(1e-10));

      CHECK(bochner_2form_residual(sp, eta, 5.0) < 1e-10);
      const TwoFormChain ch = two_form_chain(sp, s, eta);
      CHECK(ch.d2j_trace < 1e-10);
      CHECK(ch.reduction < 1e-9);
      CHECK(ch.by_parts < 1e-9);
      CHECK(ch.divergence_term < 1e-10);
      CHECK(ch.third_term < 1e-10);
      CHECK(max_abs_diff(lichnerowicz_laplacian(sp, h), h * -6.0) < 1e-9);
      hs.push_back(h);
    }
    const StabilityReport rep = build_report(sp, hs, {}, 5.0);
    CHECK(rep.coindex_lower_bound == static_cast<int>(forms.size()));
    CHECK(rep.gram_rank == static_cast<int>(forms.size()));
    CHECK(rep.q_min_eigenvalue > 0.0);
  }
}

TEST_CASE("precondition rejections") {
  const HomogeneousSpace& sp = normalized_space("su3_t2");
  const SU3Structure s = su3_structure(sp);
  CHECK_THROWS_AS(destabilizer_from_2form(sp, s, s.omega), StabilityError);
  CHECK(destabilizer_from_2form(sp, s, DenseTensor(6, 2, Symmetry::alternating)).h.max_abs() == 0.0);
  CHECK(bochner_2form_residual(sp, s.omega, 5.0) > 0.1);
  CHECK(bochner_2form_residual(sp, DenseTensor(6, 2, Symmetry::alternating), 5.0) == 0.0);

  const HomogeneousSpace& s3 = normalized_space("s3xs3");
  const SU3Structure t = su3_structure(s3);
  CHECK_THROWS_AS(destabilizer_from_3form(s3, t, t.omega_plus), StabilityError);
  CHECK(q_form(s3, DenseTensor(6, 2, Symmetry::symmetric)) == 0.0);
  CHECK(lichnerowicz_check(s3, DenseTensor(6, 2, Symmetry::symmetric), 5.0) == 0.0);
}

TEST_CASE("Weitzenboeck and Bochner operators") {
  for (const char* name : kPresets) {
    CAPTURE(name);
    const HomogeneousSpace& sp = normalized_space(name);
    const SU3Structure s = su3_structure(sp);
    CHECK(weitzenbock_matrix_residual(sp, 2) < 1e-10);
    CHECK(weitzenbock_matrix_residual(sp, 3) < 1e-10);
    CHECK(bochner_matrix_residual(sp, 5.0) < 1e-10);
    CHECK(weitzenbock_residual(sp, s.omega_plus) < 1e-10);
    CHECK(weitzenbock_residual(sp, DenseTensor(6, 3, Symmetry::alternating)) == 0.0);
    for (const auto& b : invariant_basis(sp, TensorKind::forms(3))) CHECK(weitzenbock_residual(sp, b) < 1e-10);
    CHECK(nabla_omega_plus_residual(sp, s) < 1e-10);
    CHECK(omega_plus_divergence_residual(sp, s) < 1e-10);
  }
}

TEST_CASE("pointwise 3-form algebra") {
  const SU3Structure s = standard_model();
  std::mt19937_64 rng(42);
  for (int n = 0; n < 100; ++n) {
    const DenseTensor eta = random_lambda3_12(s, rng);
    CHECK(eta_omega_orthogonality(s, eta) < 1e-12);
    const auto jc = j_conjugation_residuals(s, eta);
    for (double r : jc) CHECK(r < 1e-12);
    const Matrix p = eta_omega_plus_pairing(s, eta);
    CHECK((p + p.transpose() - sigma_plus(s, eta).to_matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(eta_omega_orthogonality(s, wedge(DenseTensor::covector(6, 0), s.omega)) > 1.0);
  CHECK(eta_omega_orthogonality(s, DenseTensor(6, 3, Symmetry::alternating)) == 0.0);
  const DenseTensor zero(6, 3, Symmetry::alternating);
  CHECK(identity_C_residual(constant_curvature(6, 1.0), s, zero) == 0.0);
  CHECK(identity_AB_residuals(constant_curvature(6, 1.0), s, zero).total == 0.0);
}

TEST_CASE("report without harmonic forms") {
  const StabilityReport rep = build_report(normalized_space("s6"), {}, {}, 5.0);
  CHECK(rep.destabilizers.empty());
  CHECK(rep.coindex_lower_bound == 0);
  REQUIRE(!rep.notes.empty());
  CHECK(rep.notes.back().find("no instability claim") != std::string::npos);
}
