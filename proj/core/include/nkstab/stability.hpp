#pragma once

// Destabilizing TT tensors built from harmonic 2- and 3-forms, the stability
// operator nabla^* nabla - 2 ring_R, and the pointwise identities that enter
// the instability argument.  Index conventions follow curvature.hpp; all
// contractions run over an orthonormal frame.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkstab/homogeneous.hpp"
#include "nkstab/su3.hpp"

namespace nkstab {

/// Raised when a destabilizer is requested from a form that violates the
/// structural preconditions (not J-invariant, not primitive, not in L3_12,
/// not harmonic).
class StabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TTTensor {
  DenseTensor h;
  double trace_residual = 0;       ///< |tr h|
  double divergence_residual = 0;  ///< max |delta h|
};

/// (delta h)_j = -sum_i (nabla_{e_i} h)(e_i, e_j).
Vector divergence(const HomogeneousSpace& space, const DenseTensor& h);
TTTensor make_tt(const HomogeneousSpace& space, const DenseTensor& h);

/// (nabla^* nabla - 2 ring_R) h.
DenseTensor stability_operator(const HomogeneousSpace& space, const DenseTensor& h);
/// Q(h, h) = -<(nabla^* nabla - 2 ring_R) h, h>.  Throws StabilityError when
/// h is not TT to within tol * max(1, |h|).
double q_form(const HomogeneousSpace& space, const DenseTensor& h, double tol = 1e-10);
/// Delta_L h = -nabla^* nabla h + 2 ring_R h - Ric o h - h o Ric.
DenseTensor lichnerowicz_laplacian(const HomogeneousSpace& space, const DenseTensor& h);
/// max |(nabla^* nabla - 2 ring_R) h + Delta_L h + 2 lambda h|.
double lichnerowicz_check(const HomogeneousSpace& space, const DenseTensor& h, double lambda);
/// <a h, h> / <h, h> for a symmetric operator a; zero for h = 0.
double rayleigh_quotient(const DenseTensor& image, const DenseTensor& h);

// ---------------------------------------------------------------------------
// Preconditions

double harmonic_residual(const HomogeneousSpace& space, const DenseTensor& form);
/// max |eta(JX, JY) - eta(X, Y)|.
double j_invariance_residual(const SU3Structure& s, const DenseTensor& eta);
/// |<eta, omega>| (form inner product).
double primitivity_residual(const SU3Structure& s, const DenseTensor& eta);
/// max(|c_+|, |c_-|, |Lambda^3_6 part|) of the type decomposition.
double lambda3_12_residual(const SU3Structure& s, const DenseTensor& eta);

/// h(X, Y) = eta(JX, Y) for a harmonic, J-invariant, primitive 2-form.
TTTensor destabilizer_from_2form(const HomogeneousSpace& space, const SU3Structure& s,
                                 const DenseTensor& eta, double tol = 1e-9);
/// h_eta = sigma^+(eta) for a harmonic 3-form in Lambda^3_12.
TTTensor destabilizer_from_3form(const HomogeneousSpace& space, const SU3Structure& s,
                                 const DenseTensor& eta, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Pointwise identities for 3-forms eta in Lambda^3_12

/// P(j, k) = sum_{pq} eta_{jpq} Omega^+_{kpq}; h_eta = P + P^T.
Matrix eta_omega_plus_pairing(const SU3Structure& s, const DenseTensor& eta);

/// sum R_{pqil}(eta_{ijl} Omega^+_{kpq} + eta_{ikl} Omega^+_{jpq}) = 2 (h_eta)_{jk}.
double identity_C_residual(const DenseTensor& r, const SU3Structure& s, const DenseTensor& eta);

struct ABResiduals {
  double total = 0;           ///< I + II = 6 h_eta
  double part_I = 0;          ///< I = -P^T + 7P + 3/2 tau omega
  double part_II = 0;         ///< II = I with j, k exchanged
  double omega_cancellation = 0;  ///< the tau omega terms of I and II cancel
  double curvature_action = 0;    ///< I = -2 sum eta_{ipq} (R_{e_j e_i} . Omega^+)_{kpq}
};
ABResiduals identity_AB_residuals(const DenseTensor& r, const SU3Structure& s, const DenseTensor& eta);

/// The three J-conjugation identities
///   sum eta(Je_j, e_p, e_q) Omega^+(Je_k, e_p, e_q) = -P(j, k),
///   sum eta(Je_k, e_p, e_q) Omega^+(Je_j, e_p, e_q) = -P(k, j),
///   sum eta(Je_j, e_p, e_q) Omega^+(e_k, Je_p, e_q) = -P(j, k).
std::array<double, 3> j_conjugation_residuals(const SU3Structure& s, const DenseTensor& eta);

/// max_j |sum_{pq} eta_{jpq} omega_{pq}|.
double eta_omega_orthogonality(const SU3Structure& s, const DenseTensor& eta);

// ---------------------------------------------------------------------------
// Weitzenboeck and Bochner

/// Curvature term of the Weitzenboeck formula for p-forms:
///   sum_s (-1)^s sum_i (R_{e_i, e_{j_s}} . eta)(e_i, j_1, .., j_s omitted, .., j_p).
DenseTensor weitzenbock_curvature_term(const DenseTensor& r, const DenseTensor& eta);
/// max |(d delta + delta d) eta - nabla^* nabla eta - curvature term|.
double weitzenbock_residual(const HomogeneousSpace& space, const DenseTensor& eta);
/// Same, as the max entry of the operator difference on invariant p-forms.
double weitzenbock_matrix_residual(const HomogeneousSpace& space, int p);
/// Bochner formula for harmonic 2-forms on an Einstein space with constant
/// lambda: max |(nabla^* nabla eta)_{ij} + 2 sum R_{ipjq} eta_{pq} + 2 lambda eta_{ij}|.
double bochner_2form_residual(const HomogeneousSpace& space, const DenseTensor& eta, double lambda);
/// Operator form of the 2-form Weitzenboeck identity
///   Delta = nabla^* nabla + 2 sum R_{ipjq} (.)_{pq} + 2 lambda
/// on invariant 2-forms (max matrix entry of the difference).
double bochner_matrix_residual(const HomogeneousSpace& space, double lambda);

// ---------------------------------------------------------------------------
// Structure identities of Omega^+ on a normalized nearly-Kaehler space

/// max_X |nabla_X Omega^+ + X^flat ^ omega|.
double nabla_omega_plus_residual(const HomogeneousSpace& space, const SU3Structure& s);
/// max |sum_i (nabla_{e_i} Omega^+)_{ipq} + 4 omega_{pq}|.
double omega_plus_divergence_residual(const HomogeneousSpace& space, const SU3Structure& s);

// ---------------------------------------------------------------------------
// Proof chains evaluated pointwise

struct TwoFormChain {
  /// -sum_{pq} <(nabla^2_{pp} J) e_i, e_q> eta_{qj} = 4 h_{ij}
  double d2j_trace = 0;
  /// (nabla^* nabla h - 2 ring_R h)_{ij} = -2 h_{ij} - 2 sum (nabla_p omega)_{iq} (nabla_p eta)_{qj}
  double reduction = 0;
  /// -sum (nabla_p omega)_{iq} (nabla_p eta)_{qj} = -D_{ij} - 4 h_{ij}, D the divergence of
  /// V_{pij} = sum_q (nabla_p omega)_{iq} eta_{qj}
  double by_parts = 0;
  /// |div W| for W_p = sum V_{pij} h_{ij}, the scalar divergence term
  double divergence_term = 0;
  /// third by-parts term: -sum (nabla_p omega)_{iq} eta_{qj} eta(e_i, (nabla_p J) e_j) = 2|h|^2
  double third_term = 0;
};
TwoFormChain two_form_chain(const HomogeneousSpace& space, const SU3Structure& s, const DenseTensor& eta);

struct ThreeFormChain {
  /// -2 sum (nabla_i eta)_{jpq} (nabla_i Omega^+)_{kpq} - (j <-> k) = -2 h_eta
  double gradient_terms = 0;
  /// sum (nabla^* nabla Omega^+)_{jpq} eta_{kpq} + (j <-> k) = 3 h_eta
  double omega_laplacian_terms = 0;
  /// nabla^* nabla h_eta = h_eta + sum ((nabla^* nabla eta)_{jpq} Omega^+_{kpq} + (j <-> k))
  double laplace_h = 0;
  /// harmonic eta: (nabla^* nabla eta)_{jpq} = -15 eta_{jpq} - sum R_{jpil} eta_{ilq}
  ///   - sum R_{qpil} eta_{ijl} - sum R_{jqil} eta_{ipl}
  double rough_eta = 0;
  /// (nabla^* nabla - 2 ring_R) h_eta = -14 h_eta + (A+B terms) + (C terms)
  double decomposition = 0;
};
ThreeFormChain three_form_chain(const HomogeneousSpace& space, const SU3Structure& s, const DenseTensor& eta);

// ---------------------------------------------------------------------------
// Report

struct Destabilizer {
  std::string source;  ///< "2-form" or "3-form"
  int index = 0;
  double norm2 = 0;                   ///< |h|^2 (tensor norm)
  double q_value = 0;                 ///< Q(h, h)
  double stability_eigenvalue = 0;    ///< Rayleigh quotient of nabla^* nabla - 2 ring_R
  double lichnerowicz_eigenvalue = 0; ///< Rayleigh quotient of Delta_L
  bool eh_unstable = false;           ///< Q(h, h) > 0
  bool nu_unstable = false;           ///< Delta_L eigenvalue > -2 lambda
};

struct StabilityReport {
  std::string space;
  double einstein_constant = 5;
  int b2_sector = 0;
  int b3_sector = 0;
  std::vector<Destabilizer> destabilizers;
  int gram_rank = 0;
  double q_min_eigenvalue = 0;  ///< smallest eigenvalue of Q on the span (0 if empty)
  int coindex_lower_bound = 0;
  std::vector<std::string> notes;
};

/// Builds the report from already-validated destabilizers.
StabilityReport build_report(const HomogeneousSpace& space, const std::vector<DenseTensor>& from_2forms,
                             const std::vector<DenseTensor>& from_3forms, double lambda);

}  // namespace nkstab
