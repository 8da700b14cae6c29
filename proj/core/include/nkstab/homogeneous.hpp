#pragma once

// Geometry of a reductive homogeneous space G/H at the base point, computed
// from the structure constants of the Lie algebra g = h + m.
//
// All tangent computations happen in an orthonormal frame {f_a} of m.  The
// Levi-Civita connection of the invariant metric is encoded by the Nomizu
// operators
//     Lambda(X)Y = 1/2 [X,Y]_m + U(X,Y),
//     <U(X,Y),Z> = 1/2 (<[Z,X]_m, Y> + <X, [Z,Y]_m>),
// and for an invariant tensor field T one has (nabla_X T)_o = Lambda(X).T,
// where endomorphisms act on covariant tensors as derivations.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkstab/su3.hpp"
#include "nkstab/tensor.hpp"

namespace nkstab {

/// Raised when a space definition is rejected (schema, Jacobi, reductivity,
/// metric or J not isotropy-invariant).
class SpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0;  ///< [e_i, e_j] has e_k-component `value`
  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

/// In-memory form of a space-definition document.
struct SpaceDefinition {
  std::string name;
  int dim = 0;
  std::vector<StructureConstant> structure_constants;
  std::vector<int> h_indices;
  std::vector<int> m_indices;
  /// Dense metric on m in the m_indices basis; empty means the normal metric
  /// normal_scale * (-Killing form).
  std::optional<Matrix> metric_m;
  double normal_scale = 1.0;
  /// Almost complex structure on m in the m_indices basis.
  Matrix J;
};

/// Validated Lie-algebra data with dense structure constants.
class LieAlgebraData {
 public:
  explicit LieAlgebraData(const SpaceDefinition& def);

  [[nodiscard]] int dim() const { return n_; }
  /// c(i, j, k): e_k-component of [e_i, e_j].
  [[nodiscard]] double c(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  [[nodiscard]] const std::vector<int>& h_indices() const { return h_; }
  [[nodiscard]] const std::vector<int>& m_indices() const { return m_; }
  [[nodiscard]] const Matrix& metric_m() const { return metric_m_; }

  [[nodiscard]] double jacobi_residual() const;
  [[nodiscard]] Matrix killing_form() const;
  /// max |[h,h]_m| and max |[h,m]_h|.
  [[nodiscard]] double subalgebra_residual() const;
  [[nodiscard]] double reductive_residual() const;
  /// max over isotropy generators of the ad(h)-invariance defect of metric_m.
  [[nodiscard]] double metric_invariance_residual() const;
  /// ad(e_alpha) restricted to m, in m_indices coordinates.
  [[nodiscard]] Matrix isotropy_action_m(int alpha) const;

 private:
  int n_;
  std::vector<double> c_;
  std::vector<int> h_;
  std::vector<int> m_;
  Matrix metric_m_;
};

/// A validated reductive homogeneous space with an invariant almost complex
/// structure, together with its Nomizu operators and curvature at the origin.
class HomogeneousSpace {
 public:
  /// Validates and builds.  Throws SpaceError on rejection.
  explicit HomogeneousSpace(SpaceDefinition def);

  [[nodiscard]] const std::string& name() const { return def_.name; }
  [[nodiscard]] const SpaceDefinition& definition() const { return def_; }
  [[nodiscard]] const LieAlgebraData& lie() const { return lie_; }
  [[nodiscard]] int dim() const { return 6; }

  /// Columns express the orthonormal frame in m_indices coordinates.
  [[nodiscard]] const Matrix& frame() const { return frame_; }
  /// J in the orthonormal frame.
  [[nodiscard]] const Matrix& J() const { return j_; }
  /// Isotropy generators acting on m, in the frame.
  [[nodiscard]] const std::vector<Matrix>& isotropy() const { return isotropy_; }
  /// Nomizu operator of frame vector a (matrix acting on frame coordinates).
  [[nodiscard]] const Matrix& nomizu(int a) const { return nomizu_[static_cast<std::size_t>(a)]; }
  [[nodiscard]] Matrix nomizu(const Vector& x) const;
  /// Frame coordinates of [f_a, f_b]_m.
  [[nodiscard]] Vector bracket_m(int a, int b) const;
  /// h_indices coordinates of [f_a, f_b]_h.
  [[nodiscard]] Vector bracket_h(int a, int b) const;
  /// max |U(X,Y)| over frame pairs; zero for naturally reductive metrics.
  [[nodiscard]] double u_term_norm() const { return u_norm_; }
  [[nodiscard]] const DenseTensor& curvature() const { return curvature_; }

  /// Returns the same space with metric c * g.
  [[nodiscard]] HomogeneousSpace with_metric_scaled(double c) const;

 private:
  SpaceDefinition def_;
  LieAlgebraData lie_;
  Matrix frame_;
  Matrix frame_inv_;
  Matrix j_;
  std::vector<Matrix> isotropy_;
  std::vector<Matrix> bracket_m_;  // bracket_m_[a].col(b)
  std::vector<Matrix> bracket_h_;  // bracket_h_[a].col(b)
  std::vector<Matrix> nomizu_;
  double u_norm_ = 0;
  DenseTensor curvature_;
};

struct EinsteinScaling {
  double lambda_before = 0;  ///< Einstein constant before scaling
  double factor = 1;         ///< metric multiplied by this factor
  double residual_before = 0;
};

/// Rescales so that Ric = target * g.  Throws SpaceError if the metric is not
/// Einstein to relative tolerance `tol`.
HomogeneousSpace scale_to_einstein(const HomogeneousSpace& space, double target = 5.0,
                                   double tol = 1e-9, EinsteinScaling* info = nullptr);
/// Ric = lambda * g fit: lambda = tr(Ric)/6, residual max|Ric - lambda g|.
EinsteinScaling einstein_fit(const HomogeneousSpace& space);

// ---------------------------------------------------------------------------
// Invariant tensor calculus at the origin

/// max over isotropy generators of |A_alpha . t|.
double invariance_residual(const HomogeneousSpace& space, const DenseTensor& t);
/// (nabla t)(X; Y_1..Y_r) = -sum_s t(Y_1, .., Lambda(X)Y_s, ..).  Throws
/// SpaceError if t is not invariant.
DenseTensor covariant_derivative(const HomogeneousSpace& space, const DenseTensor& t);
/// nabla^2_{X,Y} t for frame vectors X = f_x, Y = f_y.
DenseTensor second_derivative(const HomogeneousSpace& space, const DenseTensor& t, int x, int y);
/// nabla^* nabla t = -sum_p nabla^2_{p,p} t.
DenseTensor rough_laplacian(const HomogeneousSpace& space, const DenseTensor& t);
DenseTensor exterior_derivative(const HomogeneousSpace& space, const DenseTensor& form);
DenseTensor codifferential(const HomogeneousSpace& space, const DenseTensor& form);
DenseTensor hodge_laplacian(const HomogeneousSpace& space, const DenseTensor& form);
/// <(nabla^2_{X,Y} J)Z, W> = (nabla nabla omega)(X, Y, Z, W).
DenseTensor second_covariant_j(const HomogeneousSpace& space);

/// omega, and Omega^+ := d omega / 3 with Omega^- derived from J.
SU3Structure su3_structure(const HomogeneousSpace& space);

/// Tensor spaces for which invariant bases are computed.
struct TensorKind {
  int degree = 2;
  bool symmetric = false;  ///< symmetric 2-tensors instead of forms

  static TensorKind forms(int p) { return {p, false}; }
  static TensorKind symmetric2() { return {2, true}; }
};

/// Natural inner product for the kind: form_inner or tensor_inner.
double kind_inner(TensorKind kind, const DenseTensor& a, const DenseTensor& b);

/// Orthonormal basis of isotropy-invariant tensors of the given kind (SVD
/// nullspace, singular values below 1e-9 sigma_max treated as zero).
std::vector<DenseTensor> invariant_basis(const HomogeneousSpace& space, TensorKind kind);
/// Kernel of dd* + d*d on invariant p-forms (eigenvalues below 1e-9 of the
/// largest treated as zero); orthonormal w.r.t. form_inner.
std::vector<DenseTensor> harmonic_invariant_forms(const HomogeneousSpace& space, int p);

/// Matrix of an operator on the invariant basis: M(a, b) = <B_a, op(B_b)>.
template <class Op>
Matrix operator_matrix(TensorKind kind, const std::vector<DenseTensor>& basis, Op&& op) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix m(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const DenseTensor image = op(basis[static_cast<std::size_t>(b)]);
    for (Eigen::Index a = 0; a < n; ++a) m(a, b) = kind_inner(kind, basis[static_cast<std::size_t>(a)], image);
  }
  return m;
}

Matrix rough_laplacian_matrix(const HomogeneousSpace& space, TensorKind kind);

}  // namespace nkstab
