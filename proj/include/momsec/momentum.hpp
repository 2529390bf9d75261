#ifndef MOMSEC_MOMENTUM_HPP
#define MOMSEC_MOMENTUM_HPP

#include "momsec/connection.hpp"

namespace momsec {

/// A closed (n+1)-form on the patch. Closedness is checked by
/// closedness_residual, not enforced by construction.
struct PrePlecticForm {
  int n = 1;
  MixedField omega;  // sig (0, n+1, 0, 0)
};

ResidualStat closedness_residual(const PrePlecticForm& P,
                                 const std::vector<std::vector<double>>& pts);

/// The tuple mu_0..mu_{n-1} submitted for verification;
/// mu[k] has sig (0, k, 0, n-k).
struct MomentumData {
  std::vector<MixedField> mu;
};

MomentumData zero_momentum(const BundleShape& shape, int n);

/// iota_rho^k applied to the pre-n-plectic form: contracts k TM slots with
/// the anchor in the reversed insertion order
///   (iota_rho^k w)(v...)(e_1..e_k) = w(rho(e_k), ..., rho(e_1), v...),
/// realized as k forward first-slot contractions times (-1)^{k(k-1)/2}.
/// Output E-down indices ordered (a_1..a_k).
MixedField iota_rho_k(const LieAlgebroidModel& L, const PrePlecticForm& P, int k);

struct HmsLine {
  int k = 0;  // form degree of the equation
  ResidualStat stat;
};

struct HmsReport {
  std::vector<HmsLine> lines;  // k = n down to 0
  bool pass = false;
  // informational only; neither condition is imposed
  double nabla_sq_norm = 0.0;
  double total_sq_norm = 0.0;
};

/// Residuals of the n+1 graded components of the defining equation
///   (nabla + E_d) mu = - sum_k iota_rho^{n+1-k} omega.
HmsReport hms_residuals(const LieAlgebroidModel& L, const ConnectionData& conn,
                        const PrePlecticForm& P, const MomentumData& mu,
                        const std::vector<std::vector<double>>& pts, double tol);

struct HamiltonianReport {
  HmsReport hms;
  ResidualStat nabla_iota;  // nabla iota_rho omega
  bool pass = false;
};

HamiltonianReport homotopy_hamiltonian_check(
    const LieAlgebroidModel& L, const ConnectionData& conn,
    const PrePlecticForm& P, const MomentumData& mu,
    const std::vector<std::vector<double>>& pts, double tol);

/// Residual of the equivariance condition
///   (rho^nabla(e) alpha)(e_1..e_m)
///     = sum_i (-1)^{i-1} alpha([e, e_i]^nabla, e_1..e_i-hat..e_m)
/// maximized over frame directions e = e_b and sample points.
ResidualStat equivariance_residual(const LieAlgebroidModel& L,
                                   const ConnectionData& conn,
                                   const MixedField& alpha,
                                   const std::vector<std::vector<double>>& pts);

struct WeakHmsResult {
  bool kernel_ok = false;
  double boundary_norm = 0.0;  // |homology_boundary(w)| when kernel_ok fails
  ResidualStat stat;
};

/// Pairing of the degree-k weak equation with a Lie kernel element w of
/// matching E-degree n+1-k (1 <= k <= n):
///   < nabla mu_{k-1} + iota_rho^{n+1-k} omega , w >  as an Omega^k(M) field.
WeakHmsResult weak_hms_residual(const LieAlgebroidModel& L,
                                const ConnectionData& conn,
                                const PrePlecticForm& P, const MomentumData& mu,
                                const ESection& w, int k,
                                const std::vector<std::vector<double>>& pts,
                                double tol);

}  // namespace momsec

#endif
