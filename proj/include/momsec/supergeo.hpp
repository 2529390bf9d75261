#ifndef MOMSEC_SUPERGEO_HPP
#define MOMSEC_SUPERGEO_HPP

#include <functional>
#include <map>

#include "momsec/algebroid.hpp"
#include "momsec/connection.hpp"

namespace momsec {

/// Grassmann polynomial in the odd fiber generators q^a with Expr
/// coefficients: a function on E[1]. Monomials are stored on strictly
/// increasing generator subsets; reordering signs come from the same
/// canonical-subset convention as the tensor module.
class SuperPolynomial {
public:
  SuperPolynomial() = default;
  explicit SuperPolynomial(int rank) : rank_(rank) {}

  static SuperPolynomial scalar(int rank, Expr c);
  static SuperPolynomial monomial(int rank, std::vector<int> subset,
                                  Expr c = Expr::number(1.0));

  int rank() const { return rank_; }
  const std::map<std::vector<int>, Expr>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(std::vector<int> subset, const Expr& c);

  SuperPolynomial operator+(const SuperPolynomial& o) const;
  SuperPolynomial operator-(const SuperPolynomial& o) const;
  SuperPolynomial operator*(const SuperPolynomial& o) const;  // Koszul signs
  SuperPolynomial scaled(const Expr& c) const;

  /// Left derivative d/dq^a.
  SuperPolynomial dq(int a) const;
  /// Coefficientwise d/dx^i.
  SuperPolynomial dx(int i) const;

  /// Restriction to monomials of one Grassmann degree.
  SuperPolynomial degree_part(int m) const;

  double max_abs(const std::vector<std::vector<double>>& pts) const;

private:
  int rank_ = 0;
  std::map<std::vector<int>, Expr> terms_;
};

/// Grassmann-degree +1 vector field c^i(x,q) d/dx^i + c^a(x,q) d/dq^a with
/// odd x-coefficients and even q-coefficients; build_Q produces the
/// homological vector field of a Lie algebroid.
struct OddVectorField {
  std::vector<SuperPolynomial> x_coeff;  // per coordinate, degree 1
  std::vector<SuperPolynomial> q_coeff;  // per generator, degree 2

  SuperPolynomial apply(const SuperPolynomial& p) const;
};

/// Q = rho^i_a q^a d/dx^i - 1/2 C^c_{ab} q^a q^b d/dq^c.
OddVectorField build_Q(const LieAlgebroidModel& L);

SuperPolynomial apply_Q(const OddVectorField& Q, const SuperPolynomial& p);

/// Max residual of Q(Q(x^i)) and Q(Q(q^a)) over samples; zero within
/// tolerance exactly when the classical algebroid identities hold.
ResidualStat q_squared_residual(const LieAlgebroidModel& L,
                                const std::vector<std::vector<double>>& pts);

/// Identification Gamma(wedge^m E*) -> C^inf(E[1]).
SuperPolynomial to_super(const MixedField& alpha);
/// Inverse identification at fixed degree.
MixedField from_super(const BundleShape& shape, const SuperPolynomial& p, int m);

/// Componentwise difference between e_differential(alpha) and j*(Q alpha).
ResidualStat j_star_correspondence(const LieAlgebroidModel& L,
                                   const MixedField& alpha,
                                   const std::vector<std::vector<double>>& pts);

/// Homology of a decomposable element through the derived bracket
/// [[u_i, Q], u_j] acting on the graded algebra. [[u,Q],v] realizes the
/// bracket of the actual sections (not C-infinity-linear in them), so this
/// agrees with homology_boundary at trivial connection on decomposables with
/// constant coefficients.
ESection derived_bracket_homology(const LieAlgebroidModel& L,
                                  const std::vector<ESection>& sections);

/// Difference between Q and its manifestly covariant rewriting
/// rho xi (d + omega xi d_xi) + 1/2 T xi xi d_xi on basis monomials;
/// an algebraic identity, checked numerically.
ResidualStat covariant_Q_check(const LieAlgebroidModel& L,
                               const ConnectionData& conn,
                               const std::vector<std::vector<double>>& pts);

}  // namespace momsec

#endif
