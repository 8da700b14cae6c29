#include <doctest.h>

#include <cmath>

#include "nkstab/curvature.hpp"
#include "nkstab/homogeneous.hpp"
#include "nkstab/presets.hpp"
#include "nkstab/su3.hpp"
#include "nkstab/verify.hpp"
#include "oracles.hpp"
#include "spaces.hpp"

using namespace nkstab;
using testing_support::kPresets;
using testing_support::normalized_space;
using testing_support::raw_space;

namespace {

SpaceDefinition two_su2_group() {
  SpaceDefinition d;
  d.name = "su2xsu2";
  d.dim = 6;
  for (int b : {0, 3}) {
    d.structure_constants.push_back({b + 0, b + 1, b + 2, 1.0});
    d.structure_constants.push_back({b + 1, b + 2, b + 0, 1.0});
    d.structure_constants.push_back({b + 2, b + 0, b + 1, 1.0});
  }
  d.m_indices = {0, 1, 2, 3, 4, 5};
  d.J = oracle::standard_j();
  return d;
}

SpaceDefinition abelian() {
  SpaceDefinition d;
  d.name = "abelian";
  d.dim = 6;
  d.m_indices = {0, 1, 2, 3, 4, 5};
  d.metric_m = Matrix::Identity(6, 6);
  d.J = oracle::standard_j();
  return d;
}

double max_diff(const std::vector<double>& ref, const DenseTensor& r) {
  double m = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        for (int d = 0; d < 6; ++d) m = std::max(m, std::abs(oracle::r4(ref, a, b, c, d) - r(a, b, c, d)));
  return m;
}

}  // namespace

TEST_CASE("presets load and match the normal-metric curvature formula") {
  for (const char* name : kPresets) {
    CAPTURE(name);
    const HomogeneousSpace& sp = raw_space(name);
    const oracle::NormalMetric ref(sp.definition());
    const oracle::Mat6 frame = sp.frame();
    CHECK((ref.gram(frame) - oracle::Mat6::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    const std::vector<double> r = ref.curvature(frame);
    CHECK(max_diff(r, sp.curvature()) < 1e-12);
    CHECK(sp.curvature().symmetry() == Symmetry::curvature_pair);
    CHECK(bianchi_residual(sp.curvature()) < 1e-12);

    // Einstein constant of the normal metric -Killing on a 3-symmetric space.
    for (int a = 0; a < 6; ++a) {
      double ric = 0.0;
      for (int i = 0; i < 6; ++i) ric += oracle::r4(r, i, a, a, i);
      CHECK(ric == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    }
    CHECK(einstein_fit(sp).lambda_before == doctest::Approx(5.0 / 12.0).epsilon(1e-12));

    // Levi-Civita operators are 1/2 ad_m: the normal metric is naturally reductive.
    const auto half = ref.half_ad(frame);
    for (int p = 0; p < 6; ++p) CHECK((sp.nomizu(p) - half[static_cast<std::size_t>(p)]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sp.u_term_norm() < 1e-12);
  }
}

TEST_CASE("random sectional curvatures agree with the closed formula") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (const char* name : kPresets) {
    const HomogeneousSpace& sp = raw_space(name);
    const oracle::NormalMetric ref(sp.definition());
    for (int n = 0; n < 20; ++n) {
      oracle::Vec6 x, y;
      for (int a = 0; a < 6; ++a) x(a) = nd(rng), y(a) = nd(rng);
      const oracle::Vec6 xm = sp.frame() * x;
      const oracle::Vec6 ym = sp.frame() * y;
      double lib = 0.0;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
          for (int c = 0; c < 6; ++c)
            for (int d = 0; d < 6; ++d) lib += sp.curvature()(a, b, c, d) * x(a) * y(b) * y(c) * x(d);
      CHECK(lib == doctest::Approx(ref.sectional_numerator(xm, ym)).epsilon(1e-10));
    }
  }
}

TEST_CASE("normalization to Ric = 5") {
  for (const char* name : kPresets) {
    CAPTURE(name);
    const HomogeneousSpace& raw = raw_space(name);
    EinsteinScaling info;
    const HomogeneousSpace sp = scale_to_einstein(raw, 5.0, 1e-9, &info);
    CHECK(einstein_residual(sp.curvature(), 5.0) < 1e-10);
    CHECK(info.factor == doctest::Approx(info.lambda_before / 5.0));
    // Frame components of R scale by 1/c.
    const oracle::NormalMetric ref(raw.definition());
    const std::vector<double> r = ref.curvature(raw.frame());
    std::vector<double> scaled(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) scaled[i] = r[i] / info.factor;
    const oracle::Mat6 rot = raw.frame().inverse() * sp.frame();
    // Frames differ only by the scale.
    CHECK((rot - oracle::Mat6::Identity() / std::sqrt(info.factor)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_diff(scaled, sp.curvature()) < 1e-10);

    EinsteinScaling again;
    (void)scale_to_einstein(sp, 5.0, 1e-9, &again);
    CHECK(again.factor == doctest::Approx(1.0));

    const DenseTensor ric = contract(sp.curvature(), 0, 3);
    for (int a = 1; a < 6; ++a) CHECK(ric(a, a) == doctest::Approx(ric(0, 0)));
  }
}

TEST_CASE("non-Einstein metric is refused by the normalization") {
  const SpaceDefinition stretched = perturbed_metric(preset_definition("s3xs3"), 0.3);
  const HomogeneousSpace sp(stretched);
  CHECK(sp.u_term_norm() > 1e-3);
  CHECK_THROWS_AS(scale_to_einstein(sp), SpaceError);
  CHECK_THROWS_AS(perturbed_metric(preset_definition("s6"), 0.1), SpaceError);
}

TEST_CASE("bi-invariant metric on a compact group") {
  const HomogeneousSpace sp(two_su2_group());
  CHECK(sp.u_term_norm() < 1e-14);
  const oracle::NormalMetric ref(sp.definition());
  const auto half = ref.half_ad(sp.frame());
  for (int p = 0; p < 6; ++p) CHECK((sp.nomizu(p) - half[static_cast<std::size_t>(p)]).cwiseAbs().maxCoeff() < 1e-14);
  // Each SU(2) factor is a round S^3: equal sectional curvatures inside a factor, flat mixed planes.
  const DenseTensor& r = sp.curvature();
  for (int b : {0, 3})
    for (int i = b; i < b + 3; ++i)
      for (int j = b; j < b + 3; ++j)
        if (i != j) CHECK(r(i, j, j, i) == doctest::Approx(r(b, b + 1, b + 1, b)));
  CHECK(r(0, 1, 1, 0) > 0.0);
  CHECK(std::abs(r(0, 3, 3, 0)) < 1e-15);
  CHECK(invariant_basis(sp, TensorKind::forms(3)).size() == 20);
}

TEST_CASE("abelian algebra is flat") {
  const HomogeneousSpace sp(abelian());
  CHECK(sp.curvature().max_abs() == 0.0);
  CHECK(second_covariant_j(sp).max_abs() == 0.0);
  CHECK(invariant_basis(sp, TensorKind::forms(3)).size() == 20);
  CHECK(invariant_basis(sp, TensorKind::symmetric2()).size() == 21);
}

TEST_CASE("loader rejections") {
  // [e0, e1] = e2, [e1, e2] = e1: the Jacobi sum on (e0, e1, e2) is e2.
  SpaceDefinition jac = abelian();
  jac.structure_constants = {{0, 1, 2, 1.0}, {1, 2, 1, 1.0}};
  CHECK_THROWS_AS(HomogeneousSpace{jac}, SpaceError);

  SpaceDefinition s3 = preset_definition("s3xs3");
  SpaceDefinition nonred = s3;
  std::swap(nonred.h_indices[0], nonred.m_indices[0]);
  CHECK_THROWS_AS(HomogeneousSpace{nonred}, SpaceError);

  // Conjugating J by a rotation inside one isotropy summand breaks equivariance.
  SpaceDefinition badj = s3;
  Matrix rot = Matrix::Identity(6, 6);
  rot(0, 0) = rot(1, 1) = std::cos(0.3);
  rot(1, 0) = std::sin(0.3);
  rot(0, 1) = -std::sin(0.3);
  badj.J = rot * s3.J * rot.transpose();
  CHECK_THROWS_WITH_AS(HomogeneousSpace{badj}, doctest::Contains("J is not isotropy-invariant"), SpaceError);

  SpaceDefinition badmetric = s3;
  badmetric.metric_m = -Matrix::Identity(6, 6);
  CHECK_THROWS_AS(HomogeneousSpace{badmetric}, SpaceError);

  SpaceDefinition partition = s3;
  partition.m_indices.pop_back();
  CHECK_THROWS_AS(HomogeneousSpace{partition}, SpaceError);
}

TEST_CASE("covariant derivatives of invariant tensors") {
  const HomogeneousSpace& sp = normalized_space("s3xs3");
  const SU3Structure s = su3_structure(sp);
  CHECK(covariant_derivative(sp, DenseTensor::metric(6)).max_abs() < 1e-14);
  CHECK(codifferential(sp, s.vol).max_abs() == 0.0);
  const DenseTensor nw = covariant_derivative(sp, s.omega);
  CHECK(max_abs_diff(nw, (exterior_derivative(sp, s.omega) * (1.0 / 3.0)).untagged()) < 1e-12);
  CHECK(max_abs_diff(nw, s.omega_plus.untagged()) < 1e-12);
  // A frame covector is not invariant.
  CHECK_THROWS_AS(covariant_derivative(sp, DenseTensor::covector(6, 0)), SpaceError);
}

TEST_CASE("structure equations on every preset") {
  for (const char* name : kPresets) {
    CAPTURE(name);
    const HomogeneousSpace& sp = normalized_space(name);
    const SU3Structure s = su3_structure(sp);
    const SU3Residuals res = su3_residuals(s);
    CHECK(res.j_square < 1e-12);
    CHECK(res.j_orthogonal < 1e-12);
    CHECK(res.omega_prop < 1e-12);
    CHECK(res.normalization < 1e-12);
    const DenseTensor nj = covariant_derivative(sp, s.omega);
    CHECK(nearly_kaehler_residual(nj) < 1e-12);
    CHECK(max_abs_diff(exterior_derivative(sp, s.omega), s.omega_plus * 3.0) < 1e-12);
    CHECK(max_abs_diff(exterior_derivative(sp, s.omega_minus), wedge(s.omega, s.omega) * -2.0) < 1e-12);
    CHECK(codifferential(sp, s.omega).max_abs() < 1e-12);
    CHECK(gray1_residual(sp.curvature(), nj, sp.J()) < 1e-12);
    CHECK(const_type_residual(nj, s.omega) < 1e-12);
    const DenseTensor d2j = second_covariant_j(sp);
    CHECK(grayJ2_residual(d2j, nj, sp.J()) < 1e-12);
    const SecondOrderGrayResiduals g2 = second_order_gray_residuals(sp.curvature(), d2j, sp.J());
    CHECK(g2.last_y < 1e-12);
    CHECK(g2.last_x > 0.1);
    const DenseTensor rb = canonical_curvature(sp.curvature(), s.omega);
    CHECK(curvature_action_residual(rb, s.omega) < 1e-12);
    CHECK(curvature_action_residual(rb, s.omega_plus) < 1e-12);
    CHECK(curvature_action_residual(rb, s.omega_minus) < 1e-12);
    CHECK(max_abs_diff(rough_laplacian(sp, s.omega_plus).untagged(), (s.omega_plus * 3.0).untagged()) < 1e-12);
    CHECK(rough_laplacian(sp, DenseTensor::metric(6)).max_abs() < 1e-13);
    CHECK(max_abs_diff(ring_r(sp.curvature(), DenseTensor::metric(6)), DenseTensor::metric(6) * 5.0) < 1e-12);
  }
}

TEST_CASE("invariant de Rham complex") {
  for (const char* name : kPresets) {
    CAPTURE(name);
    const HomogeneousSpace& sp = normalized_space(name);
    std::vector<std::vector<DenseTensor>> basis;
    for (int p = 0; p <= 6; ++p) basis.push_back(invariant_basis(sp, TensorKind::forms(p)));
    for (int p = 0; p <= 6; ++p)
      for (const auto& a : basis[static_cast<std::size_t>(p)]) {
        if (p <= 4) CHECK(exterior_derivative(sp, exterior_derivative(sp, a)).max_abs() < 1e-12);
        if (p >= 2) CHECK(codifferential(sp, codifferential(sp, a)).max_abs() < 1e-12);
        if (p <= 5)
          for (const auto& b : basis[static_cast<std::size_t>(p + 1)])
            CHECK(std::abs(form_inner(exterior_derivative(sp, a), b) - form_inner(a, codifferential(sp, b))) < 1e-12);
      }
  }
}

TEST_CASE("harmonic invariant forms") {
  struct Expect {
    const char* name;
    std::size_t b2, b3;
  };
  for (const Expect& x : {Expect{"s3xs3", 0, 2}, Expect{"su3_t2", 2, 0}, Expect{"cp3", 1, 0}, Expect{"s6", 0, 0}}) {
    CAPTURE(x.name);
    const HomogeneousSpace& sp = normalized_space(x.name);
    const SU3Structure s = su3_structure(sp);
    const auto h2 = harmonic_invariant_forms(sp, 2);
    const auto h3 = harmonic_invariant_forms(sp, 3);
    CHECK(h2.size() == x.b2);
    CHECK(h3.size() == x.b3);
    for (const auto& eta : h2) {
      CHECK(max_abs_diff(act_j(s, eta), eta) < 1e-12);
      CHECK(std::abs(form_inner(eta, s.omega)) < 1e-12);
      const TwoFormSplit t = split_2form(s, eta);
      CHECK(t.part6.max_abs() < 1e-12);
      CHECK(std::abs(t.omega_coeff) < 1e-12);
    }
    for (const auto& eta : h3) {
      const ThreeFormSplit t = split_3form(s, eta);
      CHECK(std::abs(t.c_plus) < 1e-12);
      CHECK(std::abs(t.c_minus) < 1e-12);
      CHECK(t.part6.max_abs() < 1e-12);
    }
  }
  CHECK(invariant_basis(normalized_space("s3xs3"), TensorKind::forms(3)).size() >= 2);
}

TEST_CASE("rough Laplacian matrix") {
  for (const char* name : {"s3xs3", "su3_t2"}) {
    const HomogeneousSpace& sp = normalized_space(name);
    for (TensorKind k : {TensorKind::symmetric2(), TensorKind::forms(2), TensorKind::forms(3)}) {
      const Matrix m = rough_laplacian_matrix(sp, k);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-11);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
      CHECK(es.eigenvalues().minCoeff() > -1e-11);
    }
  }
}
