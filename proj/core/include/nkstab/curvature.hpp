#pragma once

// Algebraic curvature tensors in an orthonormal frame.
//
// Sign conventions: R_{X,Y}Z = [nabla_X, nabla_Y]Z - nabla_{[X,Y]}Z,
// R(e_i, e_j, e_k, e_l) = <R_{e_i,e_j} e_k, e_l>, so the sectional curvature
// of the plane {e_i, e_j} is R_{ijji}.  Ric_{jk} = sum_i R_{ijki}, which gives
// Ric = (n-1) g on the unit sphere.  The curvature action on symmetric
// 2-tensors is (ring_R h)_{ij} = -sum_{pq} R_{ipjq} h_{pq}.
//
// A "nabla J" tensor is A(X, Y, Z) = <(nabla_X J)Y, Z>; a "D2J" tensor is
// <(nabla^2_{X,Y} J)Z, W>.

#include "nkstab/tensor.hpp"

namespace nkstab {

/// k (delta_il delta_jk - delta_ik delta_jl): constant sectional curvature k.
DenseTensor constant_curvature(int dim, double k = 1.0);

/// max |R_ijkl + R_jkil + R_kijl|.
double bianchi_residual(const DenseTensor& r);
/// Residual of the curvature-pair symmetries.
double curvature_symmetry_residual(const DenseTensor& r);

/// R_{e_x, e_y} as an endomorphism: column z holds R_{e_x,e_y} e_z.
Matrix curvature_endomorphism(const DenseTensor& r, int x, int y);

/// max over frame tuples of |R(X,Y,JZ,JW) - R(X,Y,Z,W) - <(nabla_X J)Y, (nabla_Z J)W>|.
double gray1_residual(const DenseTensor& r, const DenseTensor& nabla_j, const Matrix& j);

/// Residual of <(nabla_X J)Y, (nabla_Z J)W> = g(X,Z)g(Y,W) - g(X,W)g(Y,Z)
///   - omega(X,Z)omega(Y,W) + omega(X,W)omega(Y,Z).
double const_type_residual(const DenseTensor& nabla_j, const DenseTensor& omega);

/// Polarized nearly-Kaehler condition: max |A(X,Y,Z) + A(Y,X,Z)|.
double nearly_kaehler_residual(const DenseTensor& nabla_j);

struct SecondOrderGrayResiduals {
  /// 2<(nabla^2_{X,Y}J)Z,W> = -R(X,JY,Z,W) - R(X,JZ,W,X) - R(X,JW,Y,Z)
  double last_x = 0;
  /// Same with the last slot of the middle term equal to Y: -R(X,JZ,W,Y).
  double last_y = 0;
};
/// Both readings of the second-order Gray identity; exactly one is expected to hold.
SecondOrderGrayResiduals second_order_gray_residuals(const DenseTensor& r, const DenseTensor& d2j,
                                                     const Matrix& j);

/// Polarized form of <(nabla^2_{X,X}J)Y, JZ> = -<(nabla_X J)Y, (nabla_X J)Z>.
double grayJ2_residual(const DenseTensor& d2j, const DenseTensor& nabla_j, const Matrix& j);

/// Curvature of the canonical Hermitian connection of a nearly-Kaehler
/// 6-manifold normalized to Ric = 5.
DenseTensor canonical_curvature(const DenseTensor& r, const DenseTensor& omega);

/// max over X, Y of |R_{X,Y} . t|, with R_{X,Y} acting as a derivation.
double curvature_action_residual(const DenseTensor& r, const DenseTensor& t);

DenseTensor ring_r(const DenseTensor& r, const DenseTensor& h);
DenseTensor ricci(const DenseTensor& r);
double einstein_residual(const DenseTensor& r, double lambda);

}  // namespace nkstab
