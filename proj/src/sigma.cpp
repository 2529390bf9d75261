#include "momsec/sigma.hpp"

#include <cmath>
#include <stdexcept>

namespace momsec {

int sigma_eps(int k, int n) {
  int s = 0;
  for (int j = k + 1; j <= n - 1; ++j) s += j;
  return (s % 2 == 0) ? 1 : -1;
}

int sigma_factor(int k, int n) {
  int s = 0;
  for (int j = k; j <= n - 1; ++j) s += j;
  return (s % 2 == 0) ? 1 : -1;
}

int sigma_tau(int k, int n) {
  return ((n % 2 == 0) ? 1 : -1) * sigma_factor(k, n);
}

ResidualStat isometry_residual(const LieAlgebroidModel& L,
                               const ConnectionData& conn, const MetricField& g,
                               const std::vector<std::vector<double>>& pts) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  // E nabla_a acting on a covector index i picks up
  // A^k_{ai} = d_i rho^k_a + rho^k_b omega^b_{ai}
  std::vector<Expr> A(static_cast<std::size_t>(d) * d * r);
  auto A_at = [&](int k, int a, int i) -> Expr& { return A[(k * r + a) * d + i]; };
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < r; ++a)
      for (int i = 0; i < d; ++i) {
        Expr s = L.rho_comp(k, a).diff(i);
        for (int b = 0; b < r; ++b)
          s = s + L.rho_comp(k, b) * conn.comp(b, a, i);
        A_at(k, a, i) = s;
      }
  ResidualStat stat;
  if (!pts.empty()) stat.argmax_point = pts.front();
  for (int a = 0; a < r; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Expr res, scale_term;
        for (int k = 0; k < d; ++k) {
          res = res + L.rho_comp(k, a) * g.at(i, j).diff(k) +
                A_at(k, a, i) * g.at(k, j) + A_at(k, a, j) * g.at(i, k);
        }
        for (const auto& p : pts) {
          double v = std::abs(res.eval(p));
          if (v > stat.abs) {
            stat.abs = v;
            stat.argmax_point = p;
          }
          stat.scale = std::max(stat.scale, std::abs(g.at(i, j).eval(p)));
        }
      }
  return stat;
}

bool metric_positive_definite(const MetricField& g,
                              const std::vector<std::vector<double>>& pts) {
  int d = g.shape.patch.dim;
  for (const auto& p : pts) {
    std::vector<double> m(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i * d + j] = g.at(i, j).eval(p);
    // Sylvester: all leading principal minors positive
    for (int k = 1; k <= d; ++k) {
      std::vector<double> sub(static_cast<std::size_t>(k) * k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub[i * k + j] = m[i * d + j];
      // determinant by elimination
      double det = 1.0;
      for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int row = col; row < k; ++row)
          if (std::abs(sub[row * k + col]) > std::abs(sub[piv * k + col]))
            piv = row;
        if (sub[piv * k + col] == 0.0) {
          det = 0.0;
          break;
        }
        if (piv != col) {
          for (int cc = 0; cc < k; ++cc)
            std::swap(sub[piv * k + cc], sub[col * k + cc]);
          det = -det;
        }
        det *= sub[col * k + col];
        for (int row = col + 1; row < k; ++row) {
          double f = sub[row * k + col] / sub[col * k + col];
          for (int cc = col; cc < k; ++cc) sub[row * k + cc] -= f * sub[col * k + cc];
        }
      }
      if (!(det > 0.0)) return false;
    }
  }
  return true;
}

HmsReport gnlsm_residuals(const LieAlgebroidModel& L, const ConnectionData& conn,
                          const SigmaTargetData& data,
                          const std::vector<std::vector<double>>& pts,
                          double tol) {
  int n = data.n;
  if (static_cast<int>(data.tmu.size()) != n)
    throw std::invalid_argument("sigma data must carry tmu_0..tmu_{n-1}");
  PrePlecticForm PH{n, data.H};
  HmsReport rep;
  rep.pass = true;
  for (int k = n; k >= 0; --k) {
    std::vector<MixedField> terms;
    if (k >= 1) terms.push_back(nabla(conn, data.tmu[k - 1]));
    if (k <= n - 1) {
      MixedField ed = e_differential(L, data.tmu[k]);
      terms.push_back((k % 2 == 0) ? ed : -ed);
    }
    MixedField iota = iota_rho_k(L, PH, n + 1 - k);
    terms.push_back(sigma_tau(k, n) == 1 ? iota : -iota);
    HmsLine line;
    line.k = k;
    MixedField sum = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) sum = sum + terms[i];
    auto fs = max_abs(sum, pts);
    line.stat.abs = fs.max_abs;
    line.stat.argmax_point = fs.argmax_point;
    for (const auto& t : terms)
      line.stat.scale = std::max(line.stat.scale, max_abs(t, pts).max_abs);
    rep.pass = rep.pass && line.stat.pass(tol);
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

namespace {

// residual of  target = sgn * iota_rho(source)  with the contracted E index
// in the first slot of the full logical tuple (b, A)
ResidualStat first_slot_contraction_residual(
    const LieAlgebroidModel& L, const MixedField& target,
    const MixedField& source, int sgn,
    const std::vector<std::vector<double>>& pts) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  ResidualStat stat;
  if (!pts.empty()) stat.argmax_point = pts.front();
  // iterate logical tuples: A ranges over canonical E combos of the source,
  // b over all frame indices, I over canonical TM combos of the target
  const auto& tm_combos = multiidx::combos(d, target.sig().tm_down);
  const auto& e_combos = multiidx::combos(r, source.sig().e_down);
  for (const auto& I : tm_combos)
    for (const auto& A : e_combos)
      for (int b = 0; b < r; ++b) {
        Expr contracted;
        for (int j = 0; j < d; ++j) {
          Expr rj = L.rho_comp(j, b);
          if (rj.is_zero()) continue;
          std::vector<int> full;
          full.push_back(j);
          full.insert(full.end(), I.begin(), I.end());
          contracted = contracted + rj * source.get({}, full, {}, A);
        }
        std::vector<int> eidx;
        eidx.push_back(b);
        eidx.insert(eidx.end(), A.begin(), A.end());
        Expr tgt = target.get({}, I, {}, eidx);
        Expr res = (sgn == 1) ? tgt - contracted : tgt + contracted;
        for (const auto& p : pts) {
          double v = std::abs(res.eval(p));
          if (v > stat.abs) {
            stat.abs = v;
            stat.argmax_point = p;
          }
          stat.scale = std::max({stat.scale, std::abs(tgt.eval(p)),
                                 std::abs(contracted.eval(p))});
        }
      }
  return stat;
}

}  // namespace

ResidualStat contraction_condition_residual(
    const LieAlgebroidModel& L, const SigmaTargetData& data,
    const std::vector<std::vector<double>>& pts) {
  ResidualStat worst;
  if (!pts.empty()) worst.argmax_point = pts.front();
  for (int k = 1; k <= data.n - 1; ++k) {
    int sgn = (k % 2 == 0) ? 1 : -1;
    ResidualStat s = first_slot_contraction_residual(L, data.tmu[k - 1],
                                                     data.tmu[k], sgn, pts);
    if (s.abs > worst.abs) {
      worst.abs = s.abs;
      worst.argmax_point = s.argmax_point;
    }
    worst.scale = std::max(worst.scale, s.scale);
  }
  return worst;
}

ResidualStat algebraic_condition_residual(
    const LieAlgebroidModel& L, const MomentumData& mu, int n,
    const std::vector<std::vector<double>>& pts) {
  ResidualStat worst;
  if (!pts.empty()) worst.argmax_point = pts.front();
  for (int k = 1; k <= n - 1; ++k) {
    ResidualStat s =
        first_slot_contraction_residual(L, mu.mu[k - 1], mu.mu[k], 1, pts);
    if (s.abs > worst.abs) {
      worst.abs = s.abs;
      worst.argmax_point = s.argmax_point;
    }
    worst.scale = std::max(worst.scale, s.scale);
  }
  return worst;
}

std::pair<MomentumData, PrePlecticForm> gnlsm_to_hms(const SigmaTargetData& data) {
  int n = data.n;
  MomentumData mu;
  for (int k = 0; k < n; ++k) {
    int e = sigma_eps(k, n);
    mu.mu.push_back(e == 1 ? data.tmu[k] : -data.tmu[k]);
  }
  PrePlecticForm P;
  P.n = n;
  P.omega = (n % 2 == 0) ? data.H : -data.H;
  return {std::move(mu), std::move(P)};
}

Theorem61Report theorem61_roundtrip(const LieAlgebroidModel& L,
                                    const ConnectionData& conn,
                                    const SigmaTargetData& data,
                                    const std::vector<std::vector<double>>& pts,
                                    double tol) {
  Theorem61Report rep;
  rep.gnlsm_pass = gnlsm_residuals(L, conn, data, pts, tol).pass;
  rep.contraction_pass = contraction_condition_residual(L, data, pts).pass(tol);
  auto [mu, P] = gnlsm_to_hms(data);
  rep.hms_pass = hms_residuals(L, conn, P, mu, pts, tol).pass;
  rep.algecond_pass = algebraic_condition_residual(L, mu, data.n, pts).pass(tol);
  rep.equivalent = (rep.gnlsm_pass && rep.contraction_pass) ==
                   (rep.hms_pass && rep.algecond_pass);
  return rep;
}

}  // namespace momsec
