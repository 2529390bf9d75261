#ifndef MOMSEC_MOMENTUM_MAP_HPP
#define MOMSEC_MOMENTUM_MAP_HPP

#include "momsec/momentum.hpp"

namespace momsec {

/// Constant structure constants f^c_{ab} of a Lie algebra, antisymmetric
/// in the lower pair.
struct LieAlgebraData {
  int dim = 0;
  std::vector<double> f;  // dim^3, index ((c*dim)+a)*dim+b

  explicit LieAlgebraData(int r = 0)
      : dim(r), f(static_cast<std::size_t>(r) * r * r, 0.0) {}

  double f_at(int c, int a, int b) const { return f[(c * dim + a) * dim + b]; }
  /// Sets f^c_{ab} = v and f^c_{ba} = -v.
  void set_f(int c, int a, int b, double v) {
    f[(c * dim + a) * dim + b] = v;
    f[(c * dim + b) * dim + a] = -v;
  }

  /// Max residual of the Jacobi identity f f + cyclic over all index tuples.
  double jacobi_residual() const;
};

/// Action Lie algebroid on a trivial bundle: C^c_{ab} = f^c_{ab} constants,
/// trivial connection.
struct ActionAlgebroidModel {
  LieAlgebraData algebra;
  LieAlgebroidModel model;
  ConnectionData conn;

  static ActionAlgebroidModel make(const BundleShape& shape,
                                   const LieAlgebraData& g,
                                   const std::vector<std::vector<Expr>>& rho);
};

/// Chevalley-Eilenberg differential: the bracket-only part of the Lie
/// algebroid differential, with constant structure constants.
MixedField d_CE(const LieAlgebraData& g, const MixedField& alpha);

/// The anchor-derivative part of the split E_d = ad*_rho + d_CE on an action
/// algebroid.
MixedField ad_star_rho(const ActionAlgebroidModel& A, const MixedField& alpha);

/// Residuals of the homotopy momentum map equations
///   d hmu_{k-1} + d_CE hmu_k = (-1)^{n-k+1} iota_rho^{n+1-k} omega.
HmsReport hmm_residuals(const ActionAlgebroidModel& A, const PrePlecticForm& P,
                        const MomentumData& hmu,
                        const std::vector<std::vector<double>>& pts, double tol);

/// Sign map hmu_k = (-1)^{n-k+1} mu_k (an involution).
MomentumData hms_to_hmm(const MomentumData& mu, int n);

/// Lie algebra homology operator on constant elements of wedge^m g.
ESection lie_algebra_homology(const LieAlgebraData& g, const BundleShape& shape,
                              const ESection& w);

/// Degree-k weak homotopy momentum map pairing (0 <= k <= n):
///   < d hmu_{k-1} - (-1)^{n-k+1} iota_rho^{n+1-k} omega , w >
/// for w in the kernel of the Lie algebra homology operator; the k = 0
/// clause has no hmu term.
WeakHmsResult whmm_residuals(const ActionAlgebroidModel& A,
                             const PrePlecticForm& P, const MomentumData& hmu,
                             const ESection& w, int k,
                             const std::vector<std::vector<double>>& pts,
                             double tol);

}  // namespace momsec

#endif
