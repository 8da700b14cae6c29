#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "nkstab/su3.hpp"
#include "nkstab/tensor.hpp"
#include "oracles.hpp"

using namespace nkstab;

namespace {

DenseTensor e(int i) { return DenseTensor::covector(6, i); }
double scalar(const DenseTensor& t) { return t.data()[0]; }

}  // namespace

TEST_CASE("contract traces over the frame") {
  CHECK(scalar(contract(DenseTensor::metric(6), 0, 1)) == doctest::Approx(6.0));

  const SU3Structure s = standard_model();
  const Matrix jj = contract(tensor_product(s.omega, s.omega), 1, 2).to_matrix();
  CHECK((jj + Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(contract(s.omega, 0, 0), TensorError);
  CHECK_THROWS_AS(contract(s.omega, 0, 2), TensorError);
}

TEST_CASE("tensor and form inner products of the model forms") {
  const SU3Structure s = standard_model();
  // Reference values from the complex volume form expanded over all triples.
  double plus_plus = 0.0;
  double plus_minus = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        const auto z = oracle::complex_volume(oracle::unit(i), oracle::unit(j), oracle::unit(k));
        plus_plus += z.real() * z.real();
        plus_minus += z.real() * z.imag();
      }
  const oracle::Mat6 j = oracle::standard_j();
  CHECK(tensor_inner(s.omega, s.omega) == doctest::Approx(j.squaredNorm()));
  CHECK(tensor_inner(s.omega, s.omega) == doctest::Approx(6.0));
  CHECK(std::abs(tensor_inner(s.omega_plus, s.omega_minus) - plus_minus) < 1e-14);
  CHECK(std::abs(tensor_inner(s.omega_plus, s.omega_minus)) < 1e-14);
  CHECK(tensor_inner(DenseTensor(6, 2), s.omega) == 0.0);

  CHECK(form_inner(s.omega, s.omega) == doctest::Approx(3.0));
  const DenseTensor e123 = wedge(wedge(e(0), e(1)), e(2));
  CHECK(form_inner(e123, e123) == doctest::Approx(1.0));
  CHECK(form_inner(s.omega_plus, s.omega_plus) == doctest::Approx(plus_plus / 6.0));
  CHECK(form_inner(s.omega_plus, s.omega_plus) == doctest::Approx(4.0));

  CHECK_THROWS_AS(form_inner(DenseTensor::metric(6), DenseTensor::metric(6)), TensorError);
  CHECK_THROWS_AS(tensor_inner(s.omega, s.omega_plus), TensorError);
}

TEST_CASE("tensor_inner is symmetric, bilinear and positive") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 50; ++n) {
    const DenseTensor a = random_form(6, 3, rng);
    const DenseTensor b = random_form(6, 3, rng);
    const DenseTensor c = random_form(6, 3, rng);
    CHECK(tensor_inner(a, b) == doctest::Approx(tensor_inner(b, a)));
    CHECK(tensor_inner(a * 2.0 + b, c) == doctest::Approx(2.0 * tensor_inner(a, c) + tensor_inner(b, c)));
    CHECK(tensor_inner(a, a) > 0.0);
  }
}

TEST_CASE("wedge uses the determinant normalization") {
  CHECK(wedge(e(0), e(1))(0, 1) == doctest::Approx(1.0));
  CHECK(wedge(e(0), e(1))(1, 0) == doctest::Approx(-1.0));

  const SU3Structure s = standard_model();
  const DenseTensor w3 = wedge(s.omega, wedge(s.omega, s.omega));
  const oracle::FormTable om = oracle::table_of(s.omega);
  const oracle::FormTable om2 = oracle::wedge(om, 2, om, 2);
  const oracle::FormTable om3 = oracle::wedge(om, 2, om2, 4);
  CHECK(oracle::max_diff(om3, w3) < 1e-13);
  CHECK(w3(0, 1, 2, 3, 4, 5) == doctest::Approx(6.0));

  const DenseTensor po = wedge(s.omega_plus, s.omega);
  CHECK(oracle::max_diff(oracle::wedge(oracle::table_of(s.omega_plus), 3, om, 2), po) < 1e-14);
  CHECK(po.max_abs() < 1e-14);

  CHECK_THROWS_AS(wedge(s.omega_plus, w3), TensorError);
}

TEST_CASE("wedge agrees with a permutation-sum reference on random forms") {
  std::mt19937_64 rng(11);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      const DenseTensor a = random_form(6, p, rng);
      const DenseTensor b = random_form(6, q, rng);
      const auto ref = oracle::wedge(oracle::table_of(a), p, oracle::table_of(b), q);
      CHECK(oracle::max_diff(ref, wedge(a, b)) < 1e-12);
    }
}

TEST_CASE("wedge is associative and graded commutative") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> deg(1, 3);
  for (int n = 0; n < 200; ++n) {
    const int p = deg(rng);
    const int q = deg(rng);
    const DenseTensor a = random_form(6, p, rng);
    const DenseTensor b = random_form(6, q, rng);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    CHECK(max_abs_diff(wedge(a, b), wedge(b, a) * sign) < 1e-13);
  }
  for (int n = 0; n < 50; ++n) {
    const DenseTensor a = random_form(6, 1, rng);
    const DenseTensor b = random_form(6, 2, rng);
    const DenseTensor c = random_form(6, 2, rng);
    CHECK(max_abs_diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-12);
  }
}

TEST_CASE("interior product") {
  Vector e1 = Vector::Zero(6);
  e1(0) = 1.0;
  CHECK(max_abs_diff(interior(e1, wedge(e(0), e(1))), e(1)) == 0.0);

  const SU3Structure s = standard_model();
  // Omega^+ = e^135 - e^146 - e^236 - e^245, so i_{e_1} Omega^+ = e^35 - e^46.
  const DenseTensor expected = wedge(e(2), e(4)) - wedge(e(3), e(5));
  CHECK(max_abs_diff(interior(e1, s.omega_plus), expected) < 1e-15);

  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    Vector x = random_form(6, 1, rng).to_vector();
    const DenseTensor a = random_form(6, 2, rng);
    const DenseTensor b = random_form(6, 3, rng);
    CHECK(interior(x, interior(x, b)).max_abs() < 1e-13);
    const DenseTensor lhs = interior(x, wedge(a, b));
    const DenseTensor rhs = wedge(interior(x, a), b) + wedge(a, interior(x, b));
    CHECK(max_abs_diff(lhs, rhs) < 1e-13);
  }
  CHECK_THROWS_AS(interior(e1, DenseTensor(6, 0)), TensorError);
}

TEST_CASE("alternation and symmetrization") {
  const DenseTensor t = tensor_product(e(0), e(1));
  const DenseTensor a = alternate(t);
  CHECK(a(0, 1) == doctest::Approx(0.5));
  CHECK(a(1, 0) == doctest::Approx(-0.5));
  CHECK(a.symmetry() == Symmetry::alternating);

  std::mt19937_64 rng(9);
  for (int r = 2; r <= 4; ++r) {
    DenseTensor x(6, r);
    std::normal_distribution<double> nd;
    for (double& v : x.data()) v = nd(rng);
    const DenseTensor ax = alternate(x);
    CHECK(max_abs_diff(alternate(ax), ax) < 1e-14);
    CHECK(symmetrize(ax).max_abs() < 1e-14);
    if (r == 2) {
      const DenseTensor sx = symmetrize(x);
      CHECK(max_abs_diff(symmetrize(sx), sx) < 1e-14);
    }
  }
}

TEST_CASE("symmetry tags are validated") {
  DenseTensor x(6, 2);
  x(0, 1) = 1.0;
  CHECK_THROWS_AS((void)x.with_symmetry(Symmetry::alternating), TensorError);
  x(1, 0) = -1.0;
  CHECK(x.with_symmetry(Symmetry::alternating).symmetry() == Symmetry::alternating);
  CHECK_THROWS_AS((void)x.with_symmetry(Symmetry::symmetric), TensorError);
}

TEST_CASE("endomorphism actions") {
  std::mt19937_64 rng(1);
  const DenseTensor eta = random_form(6, 3, rng);
  const Matrix id = Matrix::Identity(6, 6);
  CHECK(max_abs_diff(derivation(id, eta), eta * -3.0) < 1e-14);
  CHECK(max_abs_diff(pullback(eta, id), eta) == 0.0);
  const Matrix a = Matrix::Random(6, 6);
  // The derivation is the derivative of the pullback by exp(-tA) at t = 0.
  const double t = 1e-6;
  const Matrix plus = (-t * a).exp();
  const Matrix minus = (t * a).exp();
  const DenseTensor fd = (pullback(eta, plus) - pullback(eta, minus)) * (0.5 / t);
  CHECK(max_abs_diff(fd, derivation(a, eta)) < 1e-6);
}

TEST_CASE("form coordinates round trip") {
  std::mt19937_64 rng(2);
  for (int p = 0; p <= 6; ++p) {
    const DenseTensor f = random_form(6, p, rng);
    CHECK(max_abs_diff(form_from_coefficients(6, p, form_coefficients(f)), f) < 1e-15);
    const auto basis = form_basis(6, p);
    CHECK(basis.size() == increasing_tuples(6, p).size());
  }
  CHECK(symmetric_basis(6).size() == 21);
}
