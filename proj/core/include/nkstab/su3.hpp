#pragma once

// SU(3)-structures on a 6-dimensional inner-product space: the almost complex
// structure J, the fundamental 2-form omega, the real and imaginary parts
// Omega^{+/-} of the complex volume form, and the type decompositions of
// 2-forms, symmetric 2-tensors and 3-forms.

#include <random>

#include "nkstab/tensor.hpp"

namespace nkstab {

struct SU3Structure {
  Matrix J;                 ///< J e_j = sum_i J(i, j) e_i
  DenseTensor omega;        ///< omega(X, Y) = <JX, Y>
  DenseTensor omega_plus;   ///< Re of the (3,0)-form
  DenseTensor omega_minus;  ///< Omega^-(X, Y, Z) = -Omega^+(JX, Y, Z)
  DenseTensor vol;          ///< omega^3 / 6
};

/// J e_1 = e_2, J e_3 = e_4, J e_5 = e_6 and
/// Omega^+ = e^135 - e^146 - e^236 - e^245.
SU3Structure standard_model();

/// Builds the structure from J and Omega^+; omega, Omega^- and vol are derived.
/// Throws TensorError if J is not a 6x6 matrix or Omega^+ is not a 3-form.
SU3Structure make_su3_structure(const Matrix& j, const DenseTensor& omega_plus);

/// Residuals of the algebraic invariants of an SU(3)-structure.
struct SU3Residuals {
  double j_square = 0;        ///< |J^2 + Id|
  double j_orthogonal = 0;    ///< |J^T J - Id|
  double omega_from_j = 0;    ///< |omega(X,Y) - <JX,Y>|
  double omega_prop = 0;      ///< Omega^{+/-}(X,Y,Z) = -Omega^{+/-}(X,JY,JZ), Omega^+(JX,..) = -Omega^-(X,..)
  double omega_wedge = 0;     ///< |omega ^ Omega^{+/-}|
  double omega_cubed = 0;     ///< |omega^3 - 6 vol|
  double normalization = 0;   ///< |form_inner(Omega^{+/-}, Omega^{+/-}) - 4|
};
SU3Residuals su3_residuals(const SU3Structure& s);

/// Residual of Omega^{+/-}(X,Y,Z) = -Omega^{+/-}(X,JY,JZ) and
/// Omega^+(JX,Y,Z) = -Omega^-(X,Y,Z) over all frame triples.
double omega_prop_residual(const SU3Structure& s);

/// (J.eta)(X_1, ..., X_p) = eta(JX_1, ..., JX_p); same for symmetric tensors.
DenseTensor act_j(const SU3Structure& s, const DenseTensor& t);

struct TwoFormSplit {
  DenseTensor part6;  ///< skew J-invariant
  double omega_coeff = 0;
  DenseTensor part8;  ///< primitive J-invariant
};

struct SymTensorSplit {
  DenseTensor part12;  ///< skew J-invariant
  double trace_coeff = 0;
  DenseTensor part8;   ///< trace-free J-invariant
};

struct ThreeFormSplit {
  double c_plus = 0;
  double c_minus = 0;
  Vector alpha;        ///< part6 = alpha ^ omega
  DenseTensor part6;
  DenseTensor part12;
};

TwoFormSplit split_2form(const SU3Structure& s, const DenseTensor& eta);
SymTensorSplit split_sym(const SU3Structure& s, const DenseTensor& h);
ThreeFormSplit split_3form(const SU3Structure& s, const DenseTensor& eta);

/// max |eta(X,Y,Z) - eta(JX,JY,Z) - eta(JX,Y,JZ) - eta(X,JY,JZ)|; vanishes
/// exactly on the sum of the 6- and 12-dimensional summands.
double three_form_characterization_residual(const SU3Structure& s, const DenseTensor& eta);

/// (A.eta)(X,Y,Z) = -eta(AX,Y,Z) - eta(X,AY,Z) - eta(X,Y,AZ).
DenseTensor endo_action(const Matrix& a, const DenseTensor& eta);

/// sigma(eta)(X,Y) = sum_ij eta(X,e_i,e_j) ref(Y,e_i,e_j) + (X <-> Y).
DenseTensor sigma_map(const DenseTensor& reference, const DenseTensor& eta);
inline DenseTensor sigma_plus(const SU3Structure& s, const DenseTensor& eta) {
  return sigma_map(s.omega_plus, eta);
}
inline DenseTensor sigma_minus(const SU3Structure& s, const DenseTensor& eta) {
  return sigma_map(s.omega_minus, eta);
}

/// h(X, Y) = eta(JX, Y).  Throws TensorError when eta is not J-invariant.
DenseTensor twist_2form_to_sym(const SU3Structure& s, const DenseTensor& eta);

// Random elements of the irreducible summands, for property checks.
DenseTensor random_symmetric(int dim, std::mt19937_64& rng);
DenseTensor random_form(int dim, int degree, std::mt19937_64& rng);
DenseTensor random_s2_12(const SU3Structure& s, std::mt19937_64& rng);
DenseTensor random_s2_8(const SU3Structure& s, std::mt19937_64& rng);
/// h.Omega^+ for a random h in S^2_12.
DenseTensor random_lambda3_12(const SU3Structure& s, std::mt19937_64& rng);
DenseTensor random_lambda2_8(const SU3Structure& s, std::mt19937_64& rng);

}  // namespace nkstab
