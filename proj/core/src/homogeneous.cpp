#include "nkstab/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nkstab/curvature.hpp"

namespace nkstab {

namespace {

constexpr double kLoadTol = 1e-9;
constexpr int kTangentDim = 6;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Matrix symmetric_power(const Matrix& g, double exponent) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const Vector ev = es.eigenvalues().array().pow(exponent);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Sets slice x of a rank r+1 tensor from a rank r tensor.
void set_leading_slice(DenseTensor& out, int x, const DenseTensor& slice) {
  auto src = slice.data();
  auto dst = out.data();
  std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(x) * static_cast<std::ptrdiff_t>(src.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// LieAlgebraData

LieAlgebraData::LieAlgebraData(const SpaceDefinition& def) : n_(def.dim) {
  if (n_ <= 0) throw SpaceError("space definition: dim must be positive");
  h_ = def.h_indices;
  m_ = def.m_indices;
  if (static_cast<int>(m_.size()) != kTangentDim)
    throw SpaceError("space definition: m_indices must list exactly 6 indices");
  std::set<int> seen;
  for (int i : h_) seen.insert(i);
  for (int i : m_) seen.insert(i);
  if (static_cast<int>(seen.size()) != n_ || static_cast<int>(h_.size() + m_.size()) != n_ ||
      *seen.begin() != 0 || *seen.rbegin() != n_ - 1)
    throw SpaceError("space definition: h_indices and m_indices must partition 0..dim-1");

  c_.assign(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
  std::vector<bool> set(c_.size(), false);
  auto put = [&](int i, int j, int k, double v) {
    const std::size_t off = (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    if (set[off] && c_[off] != v)
      throw SpaceError("space definition: conflicting structure constants for [" +
                       std::to_string(i) + "," + std::to_string(j) + "]");
    c_[off] = v;
    set[off] = true;
  };
  for (const auto& sc : def.structure_constants) {
    if (sc.i < 0 || sc.j < 0 || sc.k < 0 || sc.i >= n_ || sc.j >= n_ || sc.k >= n_)
      throw SpaceError("space definition: structure constant index out of range");
    if (sc.i == sc.j) {
      if (sc.value != 0.0) throw SpaceError("space definition: [e_i, e_i] must vanish");
      continue;
    }
    put(sc.i, sc.j, sc.k, sc.value);
    put(sc.j, sc.i, sc.k, -sc.value);
  }

  const double jac = jacobi_residual();
  if (jac > kLoadTol) throw SpaceError("Jacobi identity fails (residual " + fmt(jac) + ")");
  if (const double r = subalgebra_residual(); r > kLoadTol)
    throw SpaceError("h is not a subalgebra (residual " + fmt(r) + ")");
  if (const double r = reductive_residual(); r > kLoadTol)
    throw SpaceError("split is not reductive: [h, m] leaves m (residual " + fmt(r) + ")");

  if (def.metric_m) {
    if (def.metric_m->rows() != kTangentDim || def.metric_m->cols() != kTangentDim)
      throw SpaceError("space definition: metric_m must be 6x6");
    metric_m_ = *def.metric_m;
  } else {
    if (!(def.normal_scale > 0.0)) throw SpaceError("space definition: normal scale must be positive");
    const Matrix b = killing_form();
    metric_m_.resize(kTangentDim, kTangentDim);
    for (int a = 0; a < kTangentDim; ++a)
      for (int c = 0; c < kTangentDim; ++c)
        metric_m_(a, c) = -def.normal_scale * b(m_[static_cast<std::size_t>(a)], m_[static_cast<std::size_t>(c)]);
  }
  if ((metric_m_ - metric_m_.transpose()).cwiseAbs().maxCoeff() > kLoadTol * metric_m_.cwiseAbs().maxCoeff())
    throw SpaceError("metric on m is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(metric_m_);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw SpaceError("metric on m is not positive definite");
  if (const double r = metric_invariance_residual(); r > kLoadTol * std::max(1.0, metric_m_.cwiseAbs().maxCoeff()))
    throw SpaceError("metric on m is not ad(h)-invariant (residual " + fmt(r) + ")");
}

double LieAlgebraData::jacobi_residual() const {
  double res = 0.0;
  std::vector<double> ij(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k)
        for (int m = 0; m < n_; ++m) {
          double v = 0.0;
          for (int l = 0; l < n_; ++l)
            v += c(i, j, l) * c(l, k, m) + c(j, k, l) * c(l, i, m) + c(k, i, l) * c(l, j, m);
          res = std::max(res, std::abs(v));
        }
  return res;
}

Matrix LieAlgebraData::killing_form() const {
  Matrix b = Matrix::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double v = 0.0;
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) v += c(i, l, k) * c(j, k, l);
      b(i, j) = v;
    }
  return b;
}

double LieAlgebraData::subalgebra_residual() const {
  double res = 0.0;
  for (int a : h_)
    for (int b : h_)
      for (int k : m_) res = std::max(res, std::abs(c(a, b, k)));
  return res;
}

double LieAlgebraData::reductive_residual() const {
  double res = 0.0;
  for (int a : h_)
    for (int b : m_)
      for (int k : h_) res = std::max(res, std::abs(c(a, b, k)));
  return res;
}

Matrix LieAlgebraData::isotropy_action_m(int alpha) const {
  const int ha = h_.at(static_cast<std::size_t>(alpha));
  Matrix a(kTangentDim, kTangentDim);
  for (int b = 0; b < kTangentDim; ++b)
    for (int bp = 0; bp < kTangentDim; ++bp)
      a(bp, b) = c(ha, m_[static_cast<std::size_t>(b)], m_[static_cast<std::size_t>(bp)]);
  return a;
}

double LieAlgebraData::metric_invariance_residual() const {
  double res = 0.0;
  for (std::size_t alpha = 0; alpha < h_.size(); ++alpha) {
    const Matrix a = isotropy_action_m(static_cast<int>(alpha));
    res = std::max(res, (a.transpose() * metric_m_ + metric_m_ * a).cwiseAbs().maxCoeff());
  }
  return res;
}

// ---------------------------------------------------------------------------
// HomogeneousSpace

HomogeneousSpace::HomogeneousSpace(SpaceDefinition def) : def_(std::move(def)), lie_(def_) {
  if (def_.J.rows() != kTangentDim || def_.J.cols() != kTangentDim)
    throw SpaceError("space definition: J must be 6x6");
  const std::size_t nh = lie_.h_indices().size();
  double commute = 0.0;
  for (std::size_t alpha = 0; alpha < nh; ++alpha) {
    const Matrix a = lie_.isotropy_action_m(static_cast<int>(alpha));
    commute = std::max(commute, (a * def_.J - def_.J * a).cwiseAbs().maxCoeff());
  }
  if (commute > kLoadTol) throw SpaceError("J is not isotropy-invariant (residual " + fmt(commute) + ")");

  const Matrix& g = lie_.metric_m();
  frame_ = symmetric_power(g, -0.5);
  frame_inv_ = symmetric_power(g, 0.5);
  j_ = frame_inv_ * def_.J * frame_;

  for (std::size_t alpha = 0; alpha < nh; ++alpha)
    isotropy_.push_back(frame_inv_ * lie_.isotropy_action_m(static_cast<int>(alpha)) * frame_);

  const auto& m = lie_.m_indices();
  const auto& h = lie_.h_indices();
  const int n = lie_.dim();
  bracket_m_.assign(kTangentDim, Matrix::Zero(kTangentDim, kTangentDim));
  bracket_h_.assign(kTangentDim, Matrix::Zero(static_cast<Eigen::Index>(nh), kTangentDim));
  for (int a = 0; a < kTangentDim; ++a)
    for (int b = 0; b < kTangentDim; ++b) {
      Vector full = Vector::Zero(n);
      for (int c = 0; c < kTangentDim; ++c)
        for (int d = 0; d < kTangentDim; ++d) {
          const double w = frame_(c, a) * frame_(d, b);
          if (w == 0.0) continue;
          for (int k = 0; k < n; ++k) full(k) += w * lie_.c(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(d)], k);
        }
      Vector vm(kTangentDim);
      for (int c = 0; c < kTangentDim; ++c) vm(c) = full(m[static_cast<std::size_t>(c)]);
      bracket_m_[static_cast<std::size_t>(a)].col(b) = frame_inv_ * vm;
      for (std::size_t alpha = 0; alpha < nh; ++alpha)
        bracket_h_[static_cast<std::size_t>(a)](static_cast<Eigen::Index>(alpha), b) = full(h[alpha]);
    }

  // C(a, b, c) = <[f_a, f_b]_m, f_c>
  auto bc = [&](int a, int b, int c) { return bracket_m_[static_cast<std::size_t>(a)](c, b); };
  nomizu_.assign(kTangentDim, Matrix::Zero(kTangentDim, kTangentDim));
  for (int a = 0; a < kTangentDim; ++a)
    for (int b = 0; b < kTangentDim; ++b)
      for (int c = 0; c < kTangentDim; ++c) {
        const double u = 0.5 * (bc(c, a, b) + bc(c, b, a));
        u_norm_ = std::max(u_norm_, std::abs(u));
        nomizu_[static_cast<std::size_t>(a)](c, b) = 0.5 * bc(a, b, c) + u;
      }

  DenseTensor r(kTangentDim, 4);
  for (int a = 0; a < kTangentDim; ++a)
    for (int b = 0; b < kTangentDim; ++b) {
      const Matrix& la = nomizu_[static_cast<std::size_t>(a)];
      const Matrix& lb = nomizu_[static_cast<std::size_t>(b)];
      Matrix endo = la * lb - lb * la - nomizu(Vector(bracket_m_[static_cast<std::size_t>(a)].col(b)));
      for (std::size_t alpha = 0; alpha < nh; ++alpha)
        endo -= bracket_h_[static_cast<std::size_t>(a)](static_cast<Eigen::Index>(alpha), b) * isotropy_[alpha];
      for (int c = 0; c < kTangentDim; ++c)
        for (int d = 0; d < kTangentDim; ++d) r(a, b, c, d) = endo(d, c);
    }
  const double sym = r.symmetry_residual(Symmetry::curvature_pair);
  curvature_ = (sym <= 1e-9 * std::max(1.0, r.max_abs())) ? r.with_symmetry(Symmetry::curvature_pair, 1e-9) : r;
}

Matrix HomogeneousSpace::nomizu(const Vector& x) const {
  Matrix out = Matrix::Zero(kTangentDim, kTangentDim);
  for (int a = 0; a < kTangentDim; ++a)
    if (x(a) != 0.0) out += x(a) * nomizu_[static_cast<std::size_t>(a)];
  return out;
}

Vector HomogeneousSpace::bracket_m(int a, int b) const { return bracket_m_.at(static_cast<std::size_t>(a)).col(b); }
Vector HomogeneousSpace::bracket_h(int a, int b) const { return bracket_h_.at(static_cast<std::size_t>(a)).col(b); }

HomogeneousSpace HomogeneousSpace::with_metric_scaled(double c) const {
  if (!(c > 0.0)) throw SpaceError("metric scale factor must be positive");
  SpaceDefinition def = def_;
  if (def.metric_m)
    *def.metric_m *= c;
  else
    def.normal_scale *= c;
  return HomogeneousSpace(std::move(def));
}

EinsteinScaling einstein_fit(const HomogeneousSpace& space) {
  const DenseTensor ric = ricci(space.curvature());
  EinsteinScaling out;
  double tr = 0.0;
  for (int i = 0; i < kTangentDim; ++i) tr += ric(i, i);
  out.lambda_before = tr / kTangentDim;
  out.residual_before = max_abs_diff(ric, DenseTensor::metric(kTangentDim) * out.lambda_before);
  return out;
}

HomogeneousSpace scale_to_einstein(const HomogeneousSpace& space, double target, double tol,
                                   EinsteinScaling* info) {
  EinsteinScaling fit = einstein_fit(space);
  if (!(fit.lambda_before > 0.0)) throw SpaceError("Einstein constant is not positive");
  if (fit.residual_before > tol * fit.lambda_before)
    throw SpaceError("metric is not Einstein (residual " + fmt(fit.residual_before) + ")");
  fit.factor = fit.lambda_before / target;
  if (info) *info = fit;
  if (fit.factor == 1.0) return space;
  return space.with_metric_scaled(fit.factor);
}

// ---------------------------------------------------------------------------
// Invariant calculus

double invariance_residual(const HomogeneousSpace& space, const DenseTensor& t) {
  double res = 0.0;
  for (const Matrix& a : space.isotropy()) res = std::max(res, derivation(a, t.untagged()).max_abs());
  return res;
}

namespace {

void require_invariant(const HomogeneousSpace& space, const DenseTensor& t, const char* what) {
  const double r = invariance_residual(space, t);
  if (r > 1e-9 * std::max(1.0, t.max_abs()))
    throw SpaceError(std::string(what) + ": tensor is not isotropy-invariant (residual " + fmt(r) + ")");
}

DenseTensor nabla_along(const HomogeneousSpace& space, const Matrix& lambda, const DenseTensor& t) {
  (void)space;
  return derivation(lambda, t.untagged());
}

}  // namespace

DenseTensor covariant_derivative(const HomogeneousSpace& space, const DenseTensor& t) {
  require_invariant(space, t, "covariant_derivative");
  if (t.rank() + 1 > kMaxRank) throw TensorError("covariant_derivative: rank overflow");
  DenseTensor out(kTangentDim, t.rank() + 1);
  for (int x = 0; x < kTangentDim; ++x) set_leading_slice(out, x, nabla_along(space, space.nomizu(x), t));
  return out;
}

DenseTensor second_derivative(const HomogeneousSpace& space, const DenseTensor& t, int x, int y) {
  const Matrix& lx = space.nomizu(x);
  const DenseTensor inner = nabla_along(space, space.nomizu(y), t);
  return nabla_along(space, lx, inner) - nabla_along(space, space.nomizu(Vector(lx.col(y))), t);
}

DenseTensor rough_laplacian(const HomogeneousSpace& space, const DenseTensor& t) {
  require_invariant(space, t, "rough_laplacian");
  DenseTensor out(kTangentDim, t.rank());
  for (int p = 0; p < kTangentDim; ++p) out -= second_derivative(space, t, p, p);
  if (t.symmetry() != Symmetry::none) out = out.with_symmetry(t.symmetry(), 1e-9);
  return out;
}

DenseTensor exterior_derivative(const HomogeneousSpace& space, const DenseTensor& form) {
  if (form.rank() >= 2 && form.symmetry() != Symmetry::alternating)
    throw TensorError("exterior_derivative expects a form");
  return alternate(covariant_derivative(space, form)) * static_cast<double>(form.rank() + 1);
}

DenseTensor codifferential(const HomogeneousSpace& space, const DenseTensor& form) {
  if (form.rank() == 0) throw TensorError("codifferential of a function");
  if (form.rank() >= 2 && form.symmetry() != Symmetry::alternating)
    throw TensorError("codifferential expects a form");
  if (form.rank() == kTangentDim) {
    // Top-degree forms are multiples of the parallel volume form.
    if (invariance_residual(space, form) > 1e-9 * std::max(1.0, form.max_abs()))
      throw SpaceError("covariant_derivative: tensor is not isotropy-invariant");
    return DenseTensor(kTangentDim, kTangentDim - 1, Symmetry::alternating);
  }
  DenseTensor out = -contract(covariant_derivative(space, form), 0, 1);
  return out.rank() >= 2 ? alternate(out) : out;
}

DenseTensor hodge_laplacian(const HomogeneousSpace& space, const DenseTensor& form) {
  DenseTensor out = form.rank() < kTangentDim ? codifferential(space, exterior_derivative(space, form))
                                              : DenseTensor(kTangentDim, form.rank(), Symmetry::alternating);
  if (form.rank() > 0) out += exterior_derivative(space, codifferential(space, form));
  return out;
}

DenseTensor second_covariant_j(const HomogeneousSpace& space) {
  const SU3Structure s = su3_structure(space);
  return covariant_derivative(space, covariant_derivative(space, s.omega));
}

SU3Structure su3_structure(const HomogeneousSpace& space) {
  const DenseTensor omega =
      DenseTensor::from_matrix(space.J().transpose()).untagged();
  // omega is alternating only when J is metric-compatible; keep the raw tensor
  // otherwise so the caller's compatibility checks see the defect.
  const double skew = omega.symmetry_residual(Symmetry::alternating);
  const DenseTensor form = (skew <= 1e-9) ? omega.with_symmetry(Symmetry::alternating, 1e-9) : alternate(omega);
  const DenseTensor plus = exterior_derivative(space, form) * (1.0 / 3.0);
  return make_su3_structure(space.J(), plus);
}

double kind_inner(TensorKind kind, const DenseTensor& a, const DenseTensor& b) {
  // images of operators may carry no tag; pair the raw components
  const double raw = tensor_inner(a.untagged(), b.untagged());
  if (kind.symmetric) return raw;
  double fact = 1.0;
  for (int k = 2; k <= kind.degree; ++k) fact *= k;
  return raw / fact;
}

std::vector<DenseTensor> invariant_basis(const HomogeneousSpace& space, TensorKind kind) {
  const std::vector<DenseTensor> full =
      kind.symmetric ? symmetric_basis(kTangentDim) : form_basis(kTangentDim, kind.degree);
  const auto n = static_cast<Eigen::Index>(full.size());
  const auto& iso = space.isotropy();
  if (iso.empty()) return full;

  auto coords = [&](const DenseTensor& t) {
    if (!kind.symmetric) return form_coefficients(t);
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = tensor_inner(full[static_cast<std::size_t>(k)], t.untagged());
    return v;
  };
  Matrix stacked(static_cast<Eigen::Index>(iso.size()) * n, n);
  for (std::size_t alpha = 0; alpha < iso.size(); ++alpha)
    for (Eigen::Index k = 0; k < n; ++k)
      stacked.block(static_cast<Eigen::Index>(alpha) * n, k, n, 1) = coords(derivation(iso[alpha], full[static_cast<std::size_t>(k)]));

  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-9 * (sv.size() > 0 ? sv(0) : 0.0);
  std::vector<DenseTensor> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool null = (k >= sv.size()) || sv(k) <= cutoff;
    if (!null) continue;
    const Vector v = svd.matrixV().col(k);
    DenseTensor t(kTangentDim, kind.degree);
    for (Eigen::Index b = 0; b < n; ++b) t += full[static_cast<std::size_t>(b)].untagged() * v(b);
    if (kind.degree >= 2) t = t.with_symmetry(kind.symmetric ? Symmetry::symmetric : Symmetry::alternating, 1e-9);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<DenseTensor> harmonic_invariant_forms(const HomogeneousSpace& space, int p) {
  const TensorKind kind = TensorKind::forms(p);
  const auto basis = invariant_basis(space, kind);
  if (basis.empty()) return {};
  Matrix lap = operator_matrix(kind, basis, [&](const DenseTensor& t) { return hodge_laplacian(space, t); });
  lap = 0.5 * (lap + lap.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  const Vector& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  std::vector<DenseTensor> out;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (top > 0.0 && std::abs(ev(k)) > 1e-9 * top) continue;
    DenseTensor t(kTangentDim, p);
    for (std::size_t b = 0; b < basis.size(); ++b) t += basis[b].untagged() * es.eigenvectors()(static_cast<Eigen::Index>(b), k);
    if (p >= 2) t = t.with_symmetry(Symmetry::alternating, 1e-9);
    out.push_back(std::move(t));
  }
  return out;
}

Matrix rough_laplacian_matrix(const HomogeneousSpace& space, TensorKind kind) {
  const auto basis = invariant_basis(space, kind);
  return operator_matrix(kind, basis, [&](const DenseTensor& t) { return rough_laplacian(space, t); });
}

}  // namespace nkstab
