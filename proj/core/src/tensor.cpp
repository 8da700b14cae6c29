#include "nkstab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nkstab {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

int factorial(int n) {
  int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Sign of the permutation given as an arrangement of distinct values.
int permutation_sign(std::span<const int> p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

// Writes value*sign(sigma) at every permutation sigma of the increasing tuple.
void fill_antisymmetric(DenseTensor& t, const std::vector<int>& increasing, double value) {
  std::vector<int> perm(increasing.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> idx(increasing.size());
  do {
    for (std::size_t s = 0; s < perm.size(); ++s) idx[s] = increasing[static_cast<std::size_t>(perm[s])];
    t.at(idx) = permutation_sign(perm) * value;
  } while (std::next_permutation(perm.begin(), perm.end()));
}

bool is_form(const DenseTensor& t) {
  return t.rank() <= 1 || t.symmetry() == Symmetry::alternating;
}

}  // namespace

std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::alternating: return "alternating";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::curvature_pair: return "curvature-pair";
  }
  return "?";
}

DenseTensor::DenseTensor(int dim, int rank, Symmetry sym) : dim_(dim), rank_(rank), sym_(sym) {
  if (dim <= 0) throw TensorError("tensor dimension must be positive");
  if (rank < 0 || rank > kMaxRank)
    throw TensorError("tensor rank " + std::to_string(rank) + " outside [0, " +
                      std::to_string(kMaxRank) + "]");
  if (sym == Symmetry::curvature_pair && rank != 4)
    throw TensorError("curvature-pair symmetry requires rank 4");
  data_.assign(ipow(dim, rank), 0.0);
}

DenseTensor DenseTensor::metric(int dim) {
  DenseTensor g(dim, 2, Symmetry::symmetric);
  for (int i = 0; i < dim; ++i) g(i, i) = 1.0;
  return g;
}

DenseTensor DenseTensor::covector(int dim, int i) {
  if (i < 0 || i >= dim) throw TensorError("covector index out of range");
  DenseTensor e(dim, 1);
  e(i) = 1.0;
  return e;
}

DenseTensor DenseTensor::from_vector(const Vector& v) {
  DenseTensor e(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) e(i) = v(i);
  return e;
}

DenseTensor DenseTensor::from_matrix(const Matrix& m, Symmetry sym) {
  if (m.rows() != m.cols()) throw TensorError("from_matrix requires a square matrix");
  DenseTensor t(static_cast<int>(m.rows()), 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return sym == Symmetry::none ? t : t.with_symmetry(sym);
}

DenseTensor DenseTensor::form(int dim, int degree,
                              std::initializer_list<std::pair<std::vector<int>, double>> terms) {
  DenseTensor t(dim, degree, Symmetry::alternating);
  for (const auto& [idx, value] : terms) {
    if (static_cast<int>(idx.size()) != degree) throw TensorError("form term has wrong degree");
    for (std::size_t s = 0; s + 1 < idx.size(); ++s)
      if (idx[s] >= idx[s + 1]) throw TensorError("form terms need strictly increasing indices");
    fill_antisymmetric(t, idx, value);
  }
  return t;
}

std::size_t DenseTensor::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank_) throw TensorError("index arity does not match rank");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw TensorError("tensor index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

std::size_t DenseTensor::offset_of(std::initializer_list<int> idx) const {
  return offset(std::span<const int>(idx.begin(), idx.size()));
}

Matrix DenseTensor::to_matrix() const {
  if (rank_ != 2) throw TensorError("to_matrix requires rank 2");
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Vector DenseTensor::to_vector() const {
  if (rank_ != 1) throw TensorError("to_vector requires rank 1");
  return Eigen::Map<const Vector>(data_.data(), dim_);
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseTensor::symmetry_residual(Symmetry s) const {
  if (s == Symmetry::none) return 0.0;
  double res = 0.0;
  if (s == Symmetry::curvature_pair) {
    if (rank_ != 4) throw TensorError("curvature-pair residual requires rank 4");
    const DenseTensor& t = *this;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          for (int l = 0; l < dim_; ++l) {
            const double v = t(i, j, k, l);
            res = std::max({res, std::abs(v + t(j, i, k, l)), std::abs(v + t(i, j, l, k)),
                            std::abs(v - t(k, l, i, j))});
          }
    return res;
  }
  const double sign = (s == Symmetry::alternating) ? -1.0 : 1.0;
  std::array<int, kMaxRank> swapped{};
  for_each_index(dim_, rank_, [&](std::span<const int> idx) {
    const double v = at(idx);
    for (int a = 0; a + 1 < rank_; ++a) {
      std::copy(idx.begin(), idx.end(), swapped.begin());
      std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(a + 1)]);
      const double w = at(std::span<const int>(swapped.data(), idx.size()));
      res = std::max(res, std::abs(v - sign * w));
    }
  });
  return res;
}

DenseTensor DenseTensor::with_symmetry(Symmetry s, double tol) const {
  const double r = symmetry_residual(s);
  if (!(r <= tol * std::max(1.0, max_abs())))
    throw TensorError("tensor violates " + to_string(s) + " symmetry (residual " +
                      std::to_string(r) + ")");
  DenseTensor out = *this;
  out.sym_ = s;
  return out;
}

DenseTensor DenseTensor::untagged() const {
  DenseTensor out = *this;
  out.sym_ = Symmetry::none;
  return out;
}

DenseTensor DenseTensor::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != rank_) throw TensorError("permutation arity mismatch");
  DenseTensor out(dim_, rank_);
  std::array<int, kMaxRank> src{};
  for_each_index(dim_, rank_, [&](std::span<const int> idx) {
    for (int s = 0; s < rank_; ++s) src[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
    out.at(idx) = at(std::span<const int>(src.data(), idx.size()));
  });
  return out;
}

void DenseTensor::check_same_shape(const DenseTensor& o, const char* op) const {
  if (dim_ != o.dim_ || rank_ != o.rank_)
    throw TensorError(std::string(op) + ": shape mismatch");
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& o) {
  check_same_shape(o, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& o) {
  check_same_shape(o, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) throw TensorError("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

std::vector<std::vector<int>> increasing_tuples(int dim, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > dim) return out;
  std::vector<int> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int s = p - 1;
    while (s >= 0 && idx[static_cast<std::size_t>(s)] == dim - p + s) --s;
    if (s < 0) break;
    ++idx[static_cast<std::size_t>(s)];
    for (int t = s + 1; t < p; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

DenseTensor contract(const DenseTensor& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a == slot_b) throw TensorError("contract: slots must differ");
  if (slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r)
    throw TensorError("contract: slot out of range");
  DenseTensor out(t.dim(), r - 2);
  std::array<int, kMaxRank> full{};
  for_each_index(t.dim(), r - 2, [&](std::span<const int> idx) {
    double sum = 0.0;
    for (int k = 0; k < t.dim(); ++k) {
      int src = 0;
      for (int s = 0; s < r; ++s) {
        if (s == slot_a || s == slot_b)
          full[static_cast<std::size_t>(s)] = k;
        else
          full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(src++)];
      }
      sum += t.at(std::span<const int>(full.data(), static_cast<std::size_t>(r)));
    }
    out.at(idx) = sum;
  });
  return out;
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim()) throw TensorError("tensor_product: dimension mismatch");
  DenseTensor out(a.dim(), a.rank() + b.rank());
  auto da = a.data();
  auto db = b.data();
  auto dout = out.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < db.size(); ++j) dout[i * db.size() + j] = da[i] * db[j];
  return out;
}

double tensor_inner(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) throw TensorError("tensor_inner: shape mismatch");
  if (a.symmetry() != b.symmetry() && a.symmetry() != Symmetry::none &&
      b.symmetry() != Symmetry::none)
    throw TensorError("tensor_inner: symmetry mismatch");
  double s = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
  return s;
}

double tensor_norm2(const DenseTensor& a) { return tensor_inner(a, a); }

double form_inner(const DenseTensor& a, const DenseTensor& b) {
  if (!is_form(a) || !is_form(b)) throw TensorError("form_inner: arguments must be alternating");
  return tensor_inner(a, b) / factorial(a.rank());
}

DenseTensor wedge(const DenseTensor& a, const DenseTensor& b) {
  if (!is_form(a) || !is_form(b)) throw TensorError("wedge: arguments must be alternating");
  if (a.dim() != b.dim()) throw TensorError("wedge: dimension mismatch");
  const int p = a.rank();
  const int q = b.rank();
  const int n = p + q;
  if (n > a.dim() || n > kMaxRank) throw TensorError("wedge: rank overflow");
  DenseTensor out(a.dim(), n, n >= 2 ? Symmetry::alternating : Symmetry::none);
  if (p == 0 || q == 0) {
    const double s = (p == 0) ? a.data()[0] : b.data()[0];
    const DenseTensor& other = (p == 0) ? b : a;
    auto src = other.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
    return out;
  }
  const auto positions = increasing_tuples(n, p);
  std::vector<int> ia(static_cast<std::size_t>(p));
  std::vector<int> ib(static_cast<std::size_t>(q));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (const auto& tuple : increasing_tuples(a.dim(), n)) {
    double value = 0.0;
    for (const auto& pos : positions) {
      std::vector<bool> chosen(static_cast<std::size_t>(n), false);
      for (int s : pos) chosen[static_cast<std::size_t>(s)] = true;
      int na = 0;
      int nb = 0;
      for (int s = 0; s < n; ++s) {
        if (chosen[static_cast<std::size_t>(s)])
          ia[static_cast<std::size_t>(na++)] = tuple[static_cast<std::size_t>(s)];
        else
          ib[static_cast<std::size_t>(nb++)] = tuple[static_cast<std::size_t>(s)];
      }
      int k = 0;
      for (int s : pos) order[static_cast<std::size_t>(k++)] = s;
      for (int s = 0; s < n; ++s)
        if (!chosen[static_cast<std::size_t>(s)]) order[static_cast<std::size_t>(k++)] = s;
      value += permutation_sign(order) * a.at(ia) * b.at(ib);
    }
    fill_antisymmetric(out, tuple, value);
  }
  return out;
}

DenseTensor interior(const Vector& x, const DenseTensor& alpha) {
  if (alpha.rank() == 0) throw TensorError("interior: cannot contract a 0-form");
  if (x.size() != alpha.dim()) throw TensorError("interior: dimension mismatch");
  const int r = alpha.rank() - 1;
  DenseTensor out(alpha.dim(), r, (is_form(alpha) && r >= 2) ? Symmetry::alternating : Symmetry::none);
  auto src = alpha.data();
  auto dst = out.data();
  const std::size_t block = dst.size();
  for (int k = 0; k < alpha.dim(); ++k) {
    if (x(k) == 0.0) continue;
    for (std::size_t i = 0; i < block; ++i) dst[i] += x(k) * src[static_cast<std::size_t>(k) * block + i];
  }
  return out;
}

DenseTensor alternate(const DenseTensor& t) {
  const int r = t.rank();
  DenseTensor out(t.dim(), r, r >= 2 ? Symmetry::alternating : Symmetry::none);
  if (r <= 1) {
    std::copy(t.data().begin(), t.data().end(), out.data().begin());
    return out;
  }
  const double norm = 1.0 / factorial(r);
  std::vector<int> perm(static_cast<std::size_t>(r));
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (const auto& tuple : increasing_tuples(t.dim(), r)) {
    std::iota(perm.begin(), perm.end(), 0);
    double v = 0.0;
    do {
      for (int s = 0; s < r; ++s) idx[static_cast<std::size_t>(s)] = tuple[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
      v += permutation_sign(perm) * t.at(idx);
    } while (std::next_permutation(perm.begin(), perm.end()));
    fill_antisymmetric(out, tuple, v * norm);
  }
  return out;
}

DenseTensor symmetrize(const DenseTensor& t) {
  const int r = t.rank();
  DenseTensor out(t.dim(), r, r >= 2 ? Symmetry::symmetric : Symmetry::none);
  const double norm = 1.0 / factorial(r);
  std::vector<int> perm(static_cast<std::size_t>(r));
  std::vector<int> src(static_cast<std::size_t>(r));
  for_each_index(t.dim(), r, [&](std::span<const int> idx) {
    std::iota(perm.begin(), perm.end(), 0);
    double v = 0.0;
    do {
      for (int s = 0; s < r; ++s) src[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
      v += t.at(src);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.at(idx) = v * norm;
  });
  return out;
}

DenseTensor transform_slot(const DenseTensor& t, int slot, const Matrix& a) {
  const int n = t.dim();
  if (slot < 0 || slot >= t.rank()) throw TensorError("transform_slot: slot out of range");
  if (a.rows() != n || a.cols() != n) throw TensorError("transform_slot: matrix size mismatch");
  DenseTensor out(n, t.rank());
  const std::size_t stride = ipow(n, t.rank() - 1 - slot);
  const std::size_t outer = ipow(n, slot);
  auto src = t.data();
  auto dst = out.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < stride; ++in) {
      const std::size_t base = o * static_cast<std::size_t>(n) * stride + in;
      for (int y = 0; y < n; ++y) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += a(i, y) * src[base + static_cast<std::size_t>(i) * stride];
        dst[base + static_cast<std::size_t>(y) * stride] = v;
      }
    }
  }
  return out;
}

DenseTensor pullback(const DenseTensor& t, const Matrix& a) {
  DenseTensor out = t.untagged();
  for (int s = 0; s < t.rank(); ++s) out = transform_slot(out, s, a);
  if (t.symmetry() != Symmetry::none) out = out.with_symmetry(t.symmetry(), 1e-9);
  return out;
}

DenseTensor derivation(const Matrix& a, const DenseTensor& t) {
  DenseTensor out(t.dim(), t.rank());
  for (int s = 0; s < t.rank(); ++s) out -= transform_slot(t, s, a);
  if (t.symmetry() != Symmetry::none) out = out.with_symmetry(t.symmetry(), 1e-9);
  return out;
}

Vector form_coefficients(const DenseTensor& form) {
  const auto tuples = increasing_tuples(form.dim(), form.rank());
  Vector c(static_cast<Eigen::Index>(tuples.size()));
  for (std::size_t k = 0; k < tuples.size(); ++k) c(static_cast<Eigen::Index>(k)) = form.at(tuples[k]);
  return c;
}

DenseTensor form_from_coefficients(int dim, int degree, const Vector& coeffs) {
  const auto tuples = increasing_tuples(dim, degree);
  if (static_cast<std::size_t>(coeffs.size()) != tuples.size())
    throw TensorError("form_from_coefficients: wrong coefficient count");
  DenseTensor t(dim, degree, degree >= 2 ? Symmetry::alternating : Symmetry::none);
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    if (degree == 0)
      t.data()[0] = coeffs(0);
    else
      fill_antisymmetric(t, tuples[k], coeffs(static_cast<Eigen::Index>(k)));
  }
  return t;
}

std::vector<DenseTensor> symmetric_basis(int dim) {
  std::vector<DenseTensor> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      DenseTensor e(dim, 2);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = r;
        e(j, i) = r;
      }
      out.push_back(e.with_symmetry(Symmetry::symmetric));
    }
  }
  return out;
}

std::vector<DenseTensor> form_basis(int dim, int degree) {
  std::vector<DenseTensor> out;
  const auto n = static_cast<Eigen::Index>(increasing_tuples(dim, degree).size());
  for (Eigen::Index k = 0; k < n; ++k) out.push_back(form_from_coefficients(dim, degree, Vector::Unit(n, k)));
  return out;
}

}  // namespace nkstab
