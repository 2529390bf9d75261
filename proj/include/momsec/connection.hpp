#ifndef MOMSEC_CONNECTION_HPP
#define MOMSEC_CONNECTION_HPP

#include "momsec/algebroid.hpp"
#include "momsec/tensor.hpp"

namespace momsec {

/// Connection 1-form omega^b_{ai} of an ordinary connection on E. Frame
/// convention: nabla_i e_a = -omega^b_{ai} e_b, so components of sections
/// transform as nabla_i u^a = d_i u^a - omega^a_{bi} u^b and
/// nabla_i mu_a = d_i mu_a + omega^b_{ai} mu_b.
struct ConnectionData {
  MixedField omega;  // sig (0,1,1,1): omega.at({},{i},{b},{a})

  ConnectionData() = default;
  explicit ConnectionData(MixedField om) : omega(std::move(om)) {}

  Expr comp(int b, int a, int i) const { return omega.at({}, {i}, {b}, {a}); }
  bool is_zero() const;
};

ConnectionData trivial_connection(const BundleShape& shape);

/// Plain covariant derivative along the coordinate direction j: applies the
/// omega corrections to every E block, no antisymmetrization with the form
/// block.
MixedField covariant_dir(const ConnectionData& conn, int j, const MixedField& a);

/// Exterior covariant derivative: covariant_dir antisymmetrized into the
/// TM-form block with the de Rham alternation convention. Reduces to de_rham
/// when omega = 0.
MixedField nabla(const ConnectionData& conn, const MixedField& a);

/// Standard E-connection along the frame section e_b: nabla_{rho(e_b)}.
MixedField e_connection_E_dir(const LieAlgebroidModel& L,
                              const ConnectionData& conn, int b,
                              const MixedField& a);

/// Standard E-connection along a general section e of E.
MixedField e_connection_E(const LieAlgebroidModel& L, const ConnectionData& conn,
                          const ESection& e, const MixedField& a);

/// Opposite E-connection on TM: E nabla_e v = [rho(e), v] + rho(nabla_v e).
MixedField e_connection_TM(const LieAlgebroidModel& L, const ConnectionData& conn,
                           const ESection& e, const MixedField& v);

/// E-torsion T(e1,e2) = Enabla_{e1} e2 - Enabla_{e2} e1 - [e1,e2]; components
/// T^c_{ab} = -C^c_{ab} - rho^j_a omega^c_{bj} + rho^j_b omega^c_{aj}.
MixedField e_torsion(const LieAlgebroidModel& L, const ConnectionData& conn);

/// Coefficients of the covariantized bracket on the frame,
/// [e_a,e_b]^nabla = -T(e_a,e_b).
MixedField bracket_nabla_coeffs(const LieAlgebroidModel& L,
                                const ConnectionData& conn);

/// Covariantized bracket on general sections (the Lie bracket written
/// covariantly): [u,v]^nabla = -T(u,v) + nabla_{rho(u)} v - nabla_{rho(v)} u.
ESection covariantized_bracket(const LieAlgebroidModel& L,
                               const ConnectionData& conn, const ESection& u,
                               const ESection& v);

/// Covariantized anchor action rho^nabla(e) alpha = nabla_{rho(e)} alpha.
MixedField covariantized_anchor(const LieAlgebroidModel& L,
                                const ConnectionData& conn, const ESection& e,
                                const MixedField& alpha);

/// Curvature of the standard E-connection on E, one endomorphism field per
/// argument index (direction pair stored antisymmetrically, argument last).
struct ECurvature {
  std::vector<MixedField> by_argument;  // each sig (0,0,1,2)
};

struct CurvatureReport {
  MixedField T;  // sig (0,0,1,2)
  MixedField R;  // sig (0,2,1,1): R^c_{ij a}
  ECurvature ER;
  MixedField S;            // sig (0,1,1,2): nabla T + rho-contracted R
  MixedField S_lie_route;  // independent construction from Lie derivatives
};

CurvatureReport curvatures(const LieAlgebroidModel& L, const ConnectionData& conn);

/// Lie algebroid differential rewritten through rho^nabla and [.,.]^nabla
/// (the covariant form); defined on Gamma(wedge^m E*) and equal to
/// e_differential there.
MixedField covariant_e_differential(const LieAlgebroidModel& L,
                                    const ConnectionData& conn,
                                    const MixedField& alpha);

}  // namespace momsec

#endif
