#include <doctest.h>

#include <random>

#include "nkstab/curvature.hpp"
#include "nkstab/su3.hpp"

using namespace nkstab;

TEST_CASE("constant curvature model") {
  const DenseTensor r = constant_curvature(6, 1.0);
  CHECK(curvature_symmetry_residual(r) == 0.0);
  CHECK(bianchi_residual(r) == 0.0);
  // Sectional curvature R_{ijji} = 1 for i != j.
  CHECK(r(0, 1, 1, 0) == doctest::Approx(1.0));
  CHECK(r(2, 5, 5, 2) == doctest::Approx(1.0));

  Matrix trace = Matrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int p = 0; p < 6; ++p) trace(i, j) += r(i, p, j, p);
  CHECK((trace + 5.0 * Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-15);

  const DenseTensor g = DenseTensor::metric(6);
  CHECK(max_abs_diff(ring_r(r, g), g * 5.0) < 1e-15);
  CHECK(max_abs_diff(ricci(r), g * 5.0) < 1e-15);
  CHECK(max_abs_diff(ricci(r), contract(r, 0, 3)) < 1e-15);
  CHECK(einstein_residual(r, 5.0) == 0.0);
  CHECK(ring_r(r, DenseTensor(6, 2, Symmetry::symmetric)).max_abs() == 0.0);

  const DenseTensor zero(6, 4, Symmetry::curvature_pair);
  CHECK(ricci(zero).max_abs() == 0.0);
  CHECK(einstein_residual(zero, 0.0) == 0.0);
}

TEST_CASE("ring action is self-adjoint") {
  const DenseTensor r = constant_curvature(6, 0.7) ;
  std::mt19937_64 rng(21);
  for (int n = 0; n < 50; ++n) {
    const DenseTensor a = random_symmetric(6, rng);
    const DenseTensor b = random_symmetric(6, rng);
    CHECK(std::abs(tensor_inner(ring_r(r, a), b) - tensor_inner(a, ring_r(r, b))) < 1e-12);
  }
}

TEST_CASE("first Gray identity") {
  const SU3Structure s = standard_model();
  const DenseTensor r = constant_curvature(6, 1.0);
  // With nabla J = 0 the identity says R is J-invariant in its last pair:
  // true for a flat tensor, false for constant curvature.
  CHECK(gray1_residual(DenseTensor(6, 4), DenseTensor(6, 3), s.J) == 0.0);
  CHECK(gray1_residual(r, DenseTensor(6, 3), s.J) > 0.5);
  // Round S^6 with its nearly-Kaehler structure: nabla J = Omega^+.
  CHECK(gray1_residual(r, s.omega_plus.untagged(), s.J) < 1e-14);
  CHECK(gray1_residual(r, s.omega_plus.untagged() * 2.0, s.J) > 1.0);
}

TEST_CASE("constant type") {
  const SU3Structure s = standard_model();
  CHECK(const_type_residual(s.omega_plus.untagged(), s.omega) < 1e-13);
  CHECK(const_type_residual(s.omega_plus.untagged() * 2.0, s.omega) > 1.0);
  CHECK(nearly_kaehler_residual(s.omega_plus.untagged()) == 0.0);
}

TEST_CASE("second-order Gray identities on trivial data") {
  const SU3Structure s = standard_model();
  const DenseTensor zero4(6, 4);
  const SecondOrderGrayResiduals g2 = second_order_gray_residuals(zero4, zero4, s.J);
  CHECK(g2.last_x == 0.0);
  CHECK(g2.last_y == 0.0);
  CHECK(grayJ2_residual(zero4, DenseTensor(6, 3), s.J) == 0.0);
}

TEST_CASE("canonical curvature") {
  const SU3Structure s = standard_model();
  const DenseTensor zero(6, 4, Symmetry::curvature_pair);
  const DenseTensor rb0 = canonical_curvature(zero, s.omega);
  // Pure omega-polynomial part keeps the pair antisymmetries.
  double anti = 0.0;
  for_each_index(6, 4, [&](std::span<const int> i) {
    anti = std::max(anti, std::abs(rb0(i[0], i[1], i[2], i[3]) + rb0(i[1], i[0], i[2], i[3])));
    anti = std::max(anti, std::abs(rb0(i[0], i[1], i[2], i[3]) + rb0(i[0], i[1], i[3], i[2])));
  });
  CHECK(anti < 1e-15);
  CHECK(rb0.max_abs() > 0.1);

  const DenseTensor rb = canonical_curvature(constant_curvature(6, 1.0), s.omega);
  CHECK(curvature_action_residual(rb, s.omega) < 1e-14);
  CHECK(curvature_action_residual(rb, s.omega_plus) < 1e-14);
  CHECK(curvature_action_residual(rb, s.omega_minus) < 1e-14);
  // The Levi-Civita curvature itself does not preserve omega.
  CHECK(curvature_action_residual(constant_curvature(6, 1.0), s.omega) > 0.1);
}

TEST_CASE("curvature endomorphisms") {
  const DenseTensor r = constant_curvature(6, 1.0);
  const Matrix m = curvature_endomorphism(r, 0, 1);
  // R_{e_1,e_2} e_2 has e_1-component R_{1221} = 1.
  CHECK(m(0, 1) == doctest::Approx(1.0));
  CHECK((m + m.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}
