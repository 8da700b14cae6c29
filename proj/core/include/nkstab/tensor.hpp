#pragma once

// Dense multilinear algebra over a finite-dimensional real inner-product
// space.  Every tensor is expressed in an orthonormal frame, so the metric is
// the identity and raising/lowering indices is a relabeling.
//
// Conventions:
//   * tensor_inner sums over all index tuples ("tensor norm").
//   * form_inner(a, b) = tensor_inner(a, b) / p! for p-forms.
//   * wedge uses the determinant normalization, (e^1 ^ e^2)(e_1, e_2) = 1.
//   * an endomorphism A is a dim x dim matrix with A e_j = sum_i A(i, j) e_i.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nkstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown for shape, rank and symmetry-tag violations.
class TensorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Symmetry { none, alternating, symmetric, curvature_pair };

std::string to_string(Symmetry s);

inline constexpr int kMaxRank = 6;

class DenseTensor {
 public:
  DenseTensor() : DenseTensor(6, 0) {}
  DenseTensor(int dim, int rank, Symmetry sym = Symmetry::none);

  /// Identity bilinear form (the metric in an orthonormal frame).
  static DenseTensor metric(int dim);
  /// The covector e^i.
  static DenseTensor covector(int dim, int i);
  static DenseTensor from_vector(const Vector& v);
  /// Rank-2 tensor with T(i, j) = m(i, j).
  static DenseTensor from_matrix(const Matrix& m, Symmetry sym = Symmetry::none);
  /// Alternating p-form from components on strictly increasing index tuples;
  /// all other components are filled by antisymmetry, so the tag holds exactly.
  static DenseTensor form(int dim, int degree,
                          std::initializer_list<std::pair<std::vector<int>, double>> terms);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] Symmetry symmetry() const { return sym_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  [[nodiscard]] std::span<const double> data() const { return data_; }
  [[nodiscard]] std::span<double> data() { return data_; }

  template <class... I>
  [[nodiscard]] double operator()(I... idx) const {
    static_assert(sizeof...(I) <= kMaxRank);
    return data_[offset_of({static_cast<int>(idx)...})];
  }
  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) <= kMaxRank);
    return data_[offset_of({static_cast<int>(idx)...})];
  }

  [[nodiscard]] double at(std::span<const int> idx) const { return data_[offset(idx)]; }
  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  [[nodiscard]] std::size_t offset(std::span<const int> idx) const;

  /// Rank-2 tensor as a matrix M(i, j) = T(i, j).
  [[nodiscard]] Matrix to_matrix() const;
  /// Rank-1 tensor as a vector.
  [[nodiscard]] Vector to_vector() const;

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double symmetry_residual(Symmetry s) const;

  /// Returns a copy carrying tag `s`, after checking that the components obey
  /// it to within `tol` (relative to max(1, max_abs)).
  [[nodiscard]] DenseTensor with_symmetry(Symmetry s, double tol = 1e-12) const;
  /// Drops the tag.
  [[nodiscard]] DenseTensor untagged() const;

  /// result(i_0, ..., i_{r-1}) = T(i_{perm[0]}, ..., i_{perm[r-1]}).
  [[nodiscard]] DenseTensor permuted(std::span<const int> perm) const;

  DenseTensor& operator+=(const DenseTensor& o);
  DenseTensor& operator-=(const DenseTensor& o);
  DenseTensor& operator*=(double s);

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator-(DenseTensor a) { return a *= -1.0; }

 private:
  std::size_t offset_of(std::initializer_list<int> idx) const;
  void check_same_shape(const DenseTensor& o, const char* op) const;

  int dim_;
  int rank_;
  Symmetry sym_;
  std::vector<double> data_;
};

/// Max-abs difference; shapes must agree.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// Visits every multi-index of the given rank over [0, dim).
template <class F>
void for_each_index(int dim, int rank, F&& f) {
  std::array<int, kMaxRank> idx{};
  std::size_t total = 1;
  for (int r = 0; r < rank; ++r) total *= static_cast<std::size_t>(dim);
  for (std::size_t n = 0; n < total; ++n) {
    f(std::span<const int>(idx.data(), static_cast<std::size_t>(rank)));
    for (int s = rank - 1; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] < dim) break;
      idx[static_cast<std::size_t>(s)] = 0;
    }
  }
}

/// Strictly increasing index tuples of length p in [0, dim), lexicographic.
std::vector<std::vector<int>> increasing_tuples(int dim, int p);

// ---------------------------------------------------------------------------
// Core operations

/// Trace over slots a and b; rank drops by 2.
DenseTensor contract(const DenseTensor& t, int slot_a, int slot_b);
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);
double tensor_inner(const DenseTensor& a, const DenseTensor& b);
double tensor_norm2(const DenseTensor& a);
/// Inner product of p-forms, tensor_inner / p!.
double form_inner(const DenseTensor& a, const DenseTensor& b);
DenseTensor wedge(const DenseTensor& a, const DenseTensor& b);
/// i_X alpha.
DenseTensor interior(const Vector& x, const DenseTensor& alpha);
DenseTensor alternate(const DenseTensor& t);
DenseTensor symmetrize(const DenseTensor& t);

// ---------------------------------------------------------------------------
// Endomorphism actions

/// result(..., y, ...) = sum_i a(i, y) t(..., i, ...) on the given slot,
/// i.e. t evaluated with A applied to that argument.
DenseTensor transform_slot(const DenseTensor& t, int slot, const Matrix& a);
/// t(A X_1, ..., A X_r).
DenseTensor pullback(const DenseTensor& t, const Matrix& a);
/// Derivation action (A . t)(X_1, ...) = -sum_s t(..., A X_s, ...).
DenseTensor derivation(const Matrix& a, const DenseTensor& t);

// ---------------------------------------------------------------------------
// Coordinates on forms and symmetric 2-tensors

/// Coefficients on the orthonormal basis {e^I : I increasing}.
Vector form_coefficients(const DenseTensor& form);
DenseTensor form_from_coefficients(int dim, int degree, const Vector& coeffs);
/// Orthonormal basis (w.r.t. tensor_inner) of symmetric 2-tensors.
std::vector<DenseTensor> symmetric_basis(int dim);
/// Orthonormal basis (w.r.t. form_inner) of p-forms.
std::vector<DenseTensor> form_basis(int dim, int degree);

}  // namespace nkstab
