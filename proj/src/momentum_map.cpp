#include "momsec/momentum_map.hpp"

#include <cmath>
#include <stdexcept>

namespace momsec {

double LieAlgebraData::jacobi_residual() const {
  double worst = 0.0;
  for (int e = 0; e < dim; ++e)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c) {
          double s = 0.0;
          int tri[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
          for (auto& t : tri)
            for (int d2 = 0; d2 < dim; ++d2)
              s += f_at(e, t[0], d2) * f_at(d2, t[1], t[2]);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

ActionAlgebroidModel ActionAlgebroidModel::make(
    const BundleShape& shape, const LieAlgebraData& g,
    const std::vector<std::vector<Expr>>& rho) {
  if (g.dim != shape.rank)
    throw std::invalid_argument("algebra dimension must equal bundle rank");
  MixedField rho_f(shape, BlockSig{1, 0, 0, 1});
  for (int i = 0; i < shape.patch.dim; ++i)
    for (int a = 0; a < shape.rank; ++a)
      rho_f.at({i}, {}, {}, {a}) = rho.at(i).at(a);
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  C.for_each_mut([&](const auto&, const auto&, const auto& cu, const auto& ab,
                     Expr& e) { e = Expr::number(g.f_at(cu[0], ab[0], ab[1])); });
  ActionAlgebroidModel A;
  A.algebra = g;
  A.model = LieAlgebroidModel(shape, std::move(rho_f), std::move(C));
  A.conn = trivial_connection(shape);
  return A;
}

MixedField d_CE(const LieAlgebraData& g, const MixedField& alpha) {
  if (alpha.sig().tm_up != 0 || alpha.sig().e_up != 0)
    throw std::invalid_argument("d_CE expects Omega^k(M, wedge^m g*)");
  BlockSig sig = alpha.sig();
  sig.e_down += 1;
  MixedField out(alpha.shape(), sig);
  if (out.structurally_zero() || alpha.structurally_zero()) return out;
  int r = g.dim;
  out.for_each_mut([&](const auto&, const auto& I, const auto&, const auto& B,
                       Expr& comp) {
    Expr sum;
    int m1 = static_cast<int>(B.size());
    for (int l = 0; l < m1; ++l)
      for (int p = l + 1; p < m1; ++p) {
        std::vector<int> rest;
        for (int t = 0; t < m1; ++t)
          if (t != l && t != p) rest.push_back(B[t]);
        for (int c = 0; c < r; ++c) {
          double fc = g.f_at(c, B[l], B[p]);
          if (fc == 0.0) continue;
          std::vector<int> ins;
          ins.push_back(c);
          ins.insert(ins.end(), rest.begin(), rest.end());
          Expr term = Expr::number(fc) * alpha.get({}, I, {}, ins);
          sum = ((l + p) % 2 == 0) ? sum + term : sum - term;
        }
      }
    comp = sum;
  });
  return out;
}

MixedField ad_star_rho(const ActionAlgebroidModel& A, const MixedField& alpha) {
  if (alpha.sig().tm_up != 0 || alpha.sig().e_up != 0)
    throw std::invalid_argument("ad_star_rho expects Omega^k(M, wedge^m g*)");
  BlockSig sig = alpha.sig();
  sig.e_down += 1;
  MixedField out(alpha.shape(), sig);
  if (out.structurally_zero() || alpha.structurally_zero()) return out;
  out.for_each_mut([&](const auto&, const auto& I, const auto&, const auto& B,
                       Expr& comp) {
    Expr sum;
    int m1 = static_cast<int>(B.size());
    for (int l = 0; l < m1; ++l) {
      std::vector<int> rest;
      for (int t = 0; t < m1; ++t)
        if (t != l) rest.push_back(B[t]);
      Expr term = anchor_action_component(A.model, B[l], alpha, I, rest);
      sum = (l % 2 == 0) ? sum + term : sum - term;
    }
    comp = sum;
  });
  return out;
}

HmsReport hmm_residuals(const ActionAlgebroidModel& A, const PrePlecticForm& P,
                        const MomentumData& hmu,
                        const std::vector<std::vector<double>>& pts, double tol) {
  int n = P.n;
  if (static_cast<int>(hmu.mu.size()) != n)
    throw std::invalid_argument("momentum data must carry hmu_0..hmu_{n-1}");
  HmsReport rep;
  rep.pass = true;
  for (int k = n; k >= 0; --k) {
    std::vector<MixedField> terms;
    if (k >= 1) terms.push_back(de_rham(hmu.mu[k - 1]));
    if (k <= n - 1) terms.push_back(d_CE(A.algebra, hmu.mu[k]));
    double sgn = ((n - k + 1) % 2 == 0) ? 1.0 : -1.0;
    terms.push_back(-sgn * iota_rho_k(A.model, P, n + 1 - k));
    HmsLine line;
    line.k = k;
    ResidualStat stat;
    MixedField sum = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) sum = sum + terms[i];
    auto fs = max_abs(sum, pts);
    stat.abs = fs.max_abs;
    stat.argmax_point = fs.argmax_point;
    for (const auto& t : terms)
      stat.scale = std::max(stat.scale, max_abs(t, pts).max_abs);
    line.stat = stat;
    rep.pass = rep.pass && stat.pass(tol);
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

MomentumData hms_to_hmm(const MomentumData& mu, int n) {
  MomentumData out;
  for (int k = 0; k < static_cast<int>(mu.mu.size()); ++k) {
    double sgn = ((n - k + 1) % 2 == 0) ? 1.0 : -1.0;
    out.mu.push_back(sgn * mu.mu[k]);
  }
  (void)n;
  return out;
}

ESection lie_algebra_homology(const LieAlgebraData& g, const BundleShape& shape,
                              const ESection& w) {
  if (w.sig().tm_up != 0 || w.sig().tm_down != 0 || w.sig().e_down != 0)
    throw std::invalid_argument("lie_algebra_homology expects wedge^m g");
  bool constant = true;
  w.for_each([&](const auto&, const auto&, const auto&, const auto&,
                 const Expr& e) { constant = constant && e.is_constant(); });
  if (!constant)
    throw std::invalid_argument("lie_algebra_homology expects constant w");
  int m = w.sig().e_up;
  ESection out = make_esection(shape, std::max(m - 1, 0));
  if (m < 2 || w.structurally_zero()) return out;
  int r = g.dim;
  w.for_each([&](const auto&, const auto&, const auto& A, const auto&,
                 const Expr& wA) {
    if (wA.is_zero()) return;
    int sz = static_cast<int>(A.size());
    for (int l = 0; l < sz; ++l)
      for (int p = l + 1; p < sz; ++p) {
        std::vector<int> rest;
        for (int t = 0; t < sz; ++t)
          if (t != l && t != p) rest.push_back(A[t]);
        int sgn = ((l + p) % 2 == 0) ? 1 : -1;
        for (int c = 0; c < r; ++c) {
          double fc = g.f_at(c, A[l], A[p]);
          if (fc == 0.0) continue;
          std::vector<int> idx;
          idx.push_back(c);
          idx.insert(idx.end(), rest.begin(), rest.end());
          int s = multiidx::sort_sign(idx);
          if (s == 0) continue;
          Expr& slot = out.at({}, {}, idx, {});
          Expr term = Expr::number(sgn * s * fc) * wA;
          slot = slot + term;
        }
      }
  });
  return out;
}

WeakHmsResult whmm_residuals(const ActionAlgebroidModel& A,
                             const PrePlecticForm& P, const MomentumData& hmu,
                             const ESection& w, int k,
                             const std::vector<std::vector<double>>& pts,
                             double tol) {
  int n = P.n;
  if (k < 0 || k > n)
    throw std::invalid_argument("whmm_residuals: k out of range");
  if (w.sig().e_up != n + 1 - k)
    throw std::invalid_argument("whmm_residuals: kernel degree mismatch");
  WeakHmsResult res;
  ESection dw = lie_algebra_homology(A.algebra, A.model.shape, w);
  res.boundary_norm = max_abs(dw, pts).max_abs;
  res.kernel_ok = res.boundary_norm < tol;
  if (!res.kernel_ok) return res;
  double sgn = ((n - k + 1) % 2 == 0) ? 1.0 : -1.0;
  MixedField iota = (-sgn) * iota_rho_k(A.model, P, n + 1 - k);
  MixedField total = (k >= 1) ? de_rham(hmu.mu[k - 1]) + iota : iota;
  MixedField paired = pair_E(total, w);
  auto fs = max_abs(paired, pts);
  res.stat.abs = fs.max_abs;
  res.stat.argmax_point = fs.argmax_point;
  res.stat.scale = max_abs(pair_E(iota, w), pts).max_abs;
  if (k >= 1)
    res.stat.scale = std::max(
        res.stat.scale, max_abs(pair_E(de_rham(hmu.mu[k - 1]), w), pts).max_abs);
  return res;
}

}  // namespace momsec
