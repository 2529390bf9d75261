#ifndef MOMSEC_GALLERY_HPP
#define MOMSEC_GALLERY_HPP

#include <map>
#include <optional>
#include <string>

#include "momsec/momentum_map.hpp"
#include "momsec/sigma.hpp"

namespace momsec {

struct GalleryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A fully wired example: model plus whatever verification data it carries
/// and the advertised verdict of each applicable checker.
struct GalleryInstance {
  std::string name;
  LieAlgebroidModel model;
  ConnectionData conn;
  std::optional<LieAlgebraData> algebra;
  std::optional<PrePlecticForm> plectic;
  std::optional<MomentumData> mu;
  std::optional<SigmaTargetData> sigma;
  std::vector<std::string> checks;
  std::map<std::string, bool> expected;
};

// -- multivector helpers (component conventions of the Poisson family) -------

/// Schouten bracket of two bivectors via the cyclic component formula
/// [a,b]^{ijk} = sum_cyc(ijk) sum_l (a^{li} d_l b^{jk} + b^{li} d_l a^{jk});
/// for a = b this is [pi,pi]^{ijk} = 2 sum_cyc pi^{li} d_l pi^{jk}.
MixedField schouten_bivector(const MixedField& a, const MixedField& b);

/// <ox^3 pi, H>(dx^i,dx^j,dx^k) = H(pi# dx^i, pi# dx^j, pi# dx^k).
MixedField pi_cubed_pairing(const MixedField& pi, const MixedField& H);

// -- constructors -------------------------------------------------------------

ActionAlgebroidModel make_action_algebroid(
    const BundleShape& shape, const LieAlgebraData& g,
    const std::vector<std::vector<Expr>>& rho_exprs);

/// Lie algebroid of a Poisson bivector on E = T*M: anchor -pi#, bracket the
/// opposite of the Koszul bracket on the coordinate coframe (the pair that
/// satisfies the algebroid identities), C^c_{ab} = -d_c pi^{ab}.
LieAlgebroidModel make_poisson_algebroid(const MixedField& pi,
                                         const std::vector<std::vector<double>>& pts,
                                         double tol);

struct TwistedPoissonDemo {
  LieAlgebroidModel model;
  ConnectionData conn;
  PrePlecticForm plectic;  // n = 2, omega = H
  MomentumData mu;         // mu_0 = pi as an element of Gamma(wedge^2 E*)
};

/// Twisted Poisson structure: accepts (pi, H) with dH = 0 and
/// 1/2 [pi,pi] = <ox^3 pi, H>; bracket gains the term
/// -H_{mnc} pi^{am} pi^{bn} on the coframe.
TwistedPoissonDemo make_twisted_poisson(const MixedField& pi, const MixedField& H,
                                        const std::vector<std::vector<double>>& pts,
                                        double tol);

struct RPoissonDemo {
  LieAlgebroidModel model;  // plain Poisson algebroid of pi
  ConnectionData conn;
  PrePlecticForm plectic;   // omega = H
  MomentumData mu;          // mu_0 = J, higher mu zero
};

/// Twisted R-Poisson data for n = 2 (J a bivector): requires [pi,pi] = 0 and
/// dH = 0; whether (pi, J, H) satisfies the defining relation is left to the
/// checker (the k = 0 momentum-section equation).
RPoissonDemo make_twisted_r_poisson(const MixedField& pi, const MixedField& J,
                                    const MixedField& H, int n,
                                    const std::vector<std::vector<double>>& pts,
                                    double tol);

GalleryInstance make_symplectic_momentum_example();
GalleryInstance make_multisymplectic_momentum_example();

std::vector<std::string> gallery_names();
GalleryInstance make_gallery(const std::string& name);

}  // namespace momsec

#endif
