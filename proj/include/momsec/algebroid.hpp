#ifndef MOMSEC_ALGEBROID_HPP
#define MOMSEC_ALGEBROID_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "momsec/tensor.hpp"

namespace momsec {

struct ConnectionData;

/// Scale-aware residual of one identity check: `rel` is `abs` divided by the
/// largest contributing term magnitude over the samples, floored at 1 so that
/// identities whose terms all vanish are judged on the absolute residual.
struct ResidualStat {
  double abs = 0.0;
  double scale = 0.0;
  std::vector<double> argmax_point;

  double rel() const { return abs / std::max(scale, 1.0); }
  bool pass(double tol) const { return rel() < tol; }
};

/// Lie algebroid structure data on a trivialized bundle: anchor components
/// rho^i_a and structure functions C^c_{ab} (antisymmetric in ab).
struct LieAlgebroidModel {
  BundleShape shape;
  MixedField rho;  // sig (1,0,0,1)
  MixedField C;    // sig (0,0,1,2)

  LieAlgebroidModel() = default;
  LieAlgebroidModel(BundleShape s, MixedField rho_, MixedField C_);

  Expr rho_comp(int i, int a) const { return rho.at({i}, {}, {}, {a}); }
  Expr c_comp(int c, int a, int b) const { return C.get({}, {}, {c}, {a, b}); }

  /// The vector field rho(e_a) as a pure TM-up field.
  MixedField anchor_of_frame(int a) const;
};

/// Section of wedge^m E (pure E-up block); m = 1 is a plain section.
using ESection = MixedField;

ESection make_esection(const BundleShape& shape, int m);

/// Residuals of the two defining identities of a Lie algebroid
/// (anchor-bracket compatibility and the Jacobi-type identity).
struct AlgebroidCheck {
  ResidualStat identity1;  // rho_a d rho_b - rho_b d rho_a = C rho
  ResidualStat identity2;  // C C + rho dC + cyclic = 0
  bool pass(double tol) const {
    return identity1.pass(tol) && identity2.pass(tol);
  }
};

AlgebroidCheck check_lie_algebroid(const LieAlgebroidModel& L,
                                   const std::vector<std::vector<double>>& pts);

/// Lie algebroid differential on Omega^k(M, wedge^m E*). For k > 0 the anchor
/// acts on the form part by Lie derivative (the convention reproducing the
/// paper's own worked computations; the covariantized differential lives in
/// the connection module).
MixedField e_differential(const LieAlgebroidModel& L, const MixedField& alpha);

/// Component (I, A) of the anchor action of the frame section e_b on alpha:
/// the Lie derivative along rho(e_b) of the TM-form part, E block spectator.
Expr anchor_action_component(const LieAlgebroidModel& L, int b,
                             const MixedField& alpha, const std::vector<int>& I,
                             const std::vector<int>& A);

/// Homology operator on wedge^m E built from the covariantized bracket
/// [e_a,e_b]^nabla = -T(e_a,e_b), extended to non-decomposable sections by
/// the Leibniz rule. Returns the zero section for m < 2.
ESection homology_boundary(const LieAlgebroidModel& L,
                           const ConnectionData& conn, const ESection& w);

struct KernelMembership {
  bool member = false;
  double boundary_norm = 0.0;
};

KernelMembership lie_kernel_membership(const LieAlgebroidModel& L,
                                       const ConnectionData& conn,
                                       const ESection& w,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol);

/// Nullspace basis of the homology operator on wedge^m R^rank, for models
/// whose covariantized bracket coefficients are constant in x (checked).
/// Deterministic ordering by pivot.
std::vector<ESection> lie_kernel_basis_constant(const LieAlgebroidModel& L,
                                                const ConnectionData& conn,
                                                int m);

}  // namespace momsec

#endif
