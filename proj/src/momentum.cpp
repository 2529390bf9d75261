#include "momsec/momentum.hpp"

#include <cmath>
#include <stdexcept>

namespace momsec {

ResidualStat closedness_residual(const PrePlecticForm& P,
                                 const std::vector<std::vector<double>>& pts) {
  MixedField dw = de_rham(P.omega);
  ResidualStat stat;
  auto fs = max_abs(dw, pts);
  stat.abs = fs.max_abs;
  stat.argmax_point = fs.argmax_point;
  stat.scale = max_abs(P.omega, pts).max_abs;
  return stat;
}

MomentumData zero_momentum(const BundleShape& shape, int n) {
  MomentumData md;
  for (int k = 0; k < n; ++k)
    md.mu.emplace_back(shape, BlockSig{0, k, 0, n - k});
  return md;
}

MixedField iota_rho_k(const LieAlgebroidModel& L, const PrePlecticForm& P,
                      int k) {
  if (k < 1 || k > P.n + 1)
    throw std::invalid_argument("iota_rho_k: k out of range");
  int d = L.shape.patch.dim;
  MixedField cur = P.omega;
  for (int step = 0; step < k; ++step) {
    BlockSig sig = cur.sig();
    sig.tm_down -= 1;
    sig.e_down += 1;
    MixedField next(L.shape, sig);
    if (!next.structurally_zero() && !cur.structurally_zero()) {
      next.for_each_mut([&](const auto&, const auto& I, const auto&,
                            const auto& B, Expr& comp) {
        // representative with the newly appended E index last
        std::vector<int> prev(B.begin(), B.end() - 1);
        int b = B.back();
        Expr sum;
        for (int j = 0; j < d; ++j) {
          Expr rj = L.rho_comp(j, b);
          if (rj.is_zero()) continue;
          std::vector<int> full;
          full.reserve(I.size() + 1);
          full.push_back(j);
          full.insert(full.end(), I.begin(), I.end());
          sum = sum + rj * cur.get({}, full, {}, prev);
        }
        comp = sum;
      });
    }
    cur = std::move(next);
  }
  // reversed insertion order of the defining convention
  if ((k * (k - 1) / 2) % 2 != 0) cur = -cur;
  return cur;
}

namespace {

ResidualStat stat_of_terms(const std::vector<MixedField>& terms,
                           const std::vector<std::vector<double>>& pts) {
  ResidualStat stat;
  if (terms.empty()) return stat;
  MixedField sum = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) sum = sum + terms[i];
  auto fs = max_abs(sum, pts);
  stat.abs = fs.max_abs;
  stat.argmax_point = fs.argmax_point;
  for (const auto& t : terms)
    stat.scale = std::max(stat.scale, max_abs(t, pts).max_abs);
  return stat;
}

}  // namespace

HmsReport hms_residuals(const LieAlgebroidModel& L, const ConnectionData& conn,
                        const PrePlecticForm& P, const MomentumData& mu,
                        const std::vector<std::vector<double>>& pts, double tol) {
  int n = P.n;
  if (static_cast<int>(mu.mu.size()) != n)
    throw std::invalid_argument("momentum data must carry mu_0..mu_{n-1}");
  HmsReport rep;
  rep.pass = true;
  for (int k = n; k >= 0; --k) {
    std::vector<MixedField> terms;
    if (k >= 1) terms.push_back(nabla(conn, mu.mu[k - 1]));
    if (k <= n - 1) terms.push_back(e_differential(L, mu.mu[k]));
    terms.push_back(iota_rho_k(L, P, n + 1 - k));
    HmsLine line;
    line.k = k;
    line.stat = stat_of_terms(terms, pts);
    rep.pass = rep.pass && line.stat.pass(tol);
    rep.lines.push_back(std::move(line));
  }

  // informational: nabla^2 mu and (nabla + E_d)^2 mu
  for (int k = 0; k < n; ++k) {
    rep.nabla_sq_norm = std::max(
        rep.nabla_sq_norm, max_abs(nabla(conn, nabla(conn, mu.mu[k])), pts).max_abs);
  }
  for (int j = 0; j <= n + 1; ++j) {
    std::vector<MixedField> parts;
    if (j >= 2 && j - 2 < n) parts.push_back(nabla(conn, nabla(conn, mu.mu[j - 2])));
    if (j >= 1 && j - 1 < n) {
      parts.push_back(nabla(conn, e_differential(L, mu.mu[j - 1])));
      parts.push_back(e_differential(L, nabla(conn, mu.mu[j - 1])));
    }
    if (j < n) parts.push_back(e_differential(L, e_differential(L, mu.mu[j])));
    if (parts.empty()) continue;
    MixedField sum = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) sum = sum + parts[i];
    rep.total_sq_norm = std::max(rep.total_sq_norm, max_abs(sum, pts).max_abs);
  }
  return rep;
}

HamiltonianReport homotopy_hamiltonian_check(
    const LieAlgebroidModel& L, const ConnectionData& conn,
    const PrePlecticForm& P, const MomentumData& mu,
    const std::vector<std::vector<double>>& pts, double tol) {
  HamiltonianReport rep;
  rep.hms = hms_residuals(L, conn, P, mu, pts, tol);
  MixedField iota = iota_rho_k(L, P, 1);
  MixedField ni = nabla(conn, iota);
  auto fs = max_abs(ni, pts);
  rep.nabla_iota.abs = fs.max_abs;
  rep.nabla_iota.argmax_point = fs.argmax_point;
  rep.nabla_iota.scale = max_abs(iota, pts).max_abs;
  rep.pass = rep.hms.pass && rep.nabla_iota.pass(tol);
  return rep;
}

ResidualStat equivariance_residual(const LieAlgebroidModel& L,
                                   const ConnectionData& conn,
                                   const MixedField& alpha,
                                   const std::vector<std::vector<double>>& pts) {
  if (alpha.sig().tm_up != 0 || alpha.sig().e_up != 0)
    throw std::invalid_argument("equivariance expects Omega^k(M, wedge^m E*)");
  int r = L.shape.rank;
  MixedField B = bracket_nabla_coeffs(L, conn);
  ResidualStat stat;
  if (!pts.empty()) stat.argmax_point = pts.front();
  for (int b = 0; b < r; ++b) {
    MixedField lhs = e_connection_E_dir(L, conn, b, alpha);
    MixedField rhs(alpha.shape(), alpha.sig());
    rhs.for_each_mut([&](const auto&, const auto& I, const auto&, const auto& A,
                         Expr& comp) {
      Expr sum;
      for (std::size_t t = 0; t < A.size(); ++t) {
        std::vector<int> rest;
        for (std::size_t u = 0; u < A.size(); ++u)
          if (u != t) rest.push_back(A[u]);
        for (int c = 0; c < r; ++c) {
          Expr bc = B.get({}, {}, {c}, {b, A[t]});
          if (bc.is_zero()) continue;
          std::vector<int> ins;
          ins.push_back(c);
          ins.insert(ins.end(), rest.begin(), rest.end());
          Expr term = bc * alpha.get({}, I, {}, ins);
          sum = (t % 2 == 0) ? sum + term : sum - term;
        }
      }
      comp = sum;
    });
    auto fs = max_abs(lhs - rhs, pts);
    if (fs.max_abs > stat.abs) {
      stat.abs = fs.max_abs;
      stat.argmax_point = fs.argmax_point;
    }
    stat.scale = std::max({stat.scale, max_abs(lhs, pts).max_abs,
                           max_abs(rhs, pts).max_abs});
  }
  return stat;
}

WeakHmsResult weak_hms_residual(const LieAlgebroidModel& L,
                                const ConnectionData& conn,
                                const PrePlecticForm& P, const MomentumData& mu,
                                const ESection& w, int k,
                                const std::vector<std::vector<double>>& pts,
                                double tol) {
  int n = P.n;
  if (k < 1 || k > n)
    throw std::invalid_argument("weak_hms_residual: k out of range");
  if (w.sig().e_up != n + 1 - k)
    throw std::invalid_argument("weak_hms_residual: kernel degree mismatch");
  WeakHmsResult res;
  auto km = lie_kernel_membership(L, conn, w, pts, tol);
  res.kernel_ok = km.member;
  res.boundary_norm = km.boundary_norm;
  if (!res.kernel_ok) return res;
  MixedField grad = nabla(conn, mu.mu[k - 1]);
  MixedField iota = iota_rho_k(L, P, n + 1 - k);
  MixedField paired = pair_E(grad + iota, w);
  auto fs = max_abs(paired, pts);
  res.stat.abs = fs.max_abs;
  res.stat.argmax_point = fs.argmax_point;
  res.stat.scale = std::max(max_abs(pair_E(grad, w), pts).max_abs,
                            max_abs(pair_E(iota, w), pts).max_abs);
  return res;
}

}  // namespace momsec
