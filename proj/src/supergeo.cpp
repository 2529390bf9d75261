#include "momsec/supergeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momsec {

SuperPolynomial SuperPolynomial::scalar(int rank, Expr c) {
  SuperPolynomial p(rank);
  p.add_term({}, c);
  return p;
}

SuperPolynomial SuperPolynomial::monomial(int rank, std::vector<int> subset,
                                          Expr c) {
  int s = multiidx::sort_sign(subset);
  SuperPolynomial p(rank);
  if (s == 0) return p;
  p.add_term(std::move(subset), s == 1 ? c : -c);
  return p;
}

void SuperPolynomial::add_term(std::vector<int> subset, const Expr& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(subset);
  if (it == terms_.end())
    terms_.emplace(std::move(subset), c);
  else
    it->second = it->second + c;
}

SuperPolynomial SuperPolynomial::operator+(const SuperPolynomial& o) const {
  SuperPolynomial out = *this;
  for (const auto& [s, c] : o.terms_) out.add_term(s, c);
  return out;
}

SuperPolynomial SuperPolynomial::operator-(const SuperPolynomial& o) const {
  SuperPolynomial out = *this;
  for (const auto& [s, c] : o.terms_) out.add_term(s, -c);
  return out;
}

SuperPolynomial SuperPolynomial::operator*(const SuperPolynomial& o) const {
  SuperPolynomial out(rank_);
  for (const auto& [A, ca] : terms_)
    for (const auto& [B, cb] : o.terms_) {
      // Koszul sign of interleaving two increasing subsets: one inversion per
      // pair (a, b) with a in A, b in B, a > b. Zero on a shared generator.
      bool shared = false;
      for (int a : A)
        if (std::binary_search(B.begin(), B.end(), a)) shared = true;
      if (shared) continue;
      int inv = 0;
      for (int a : A)
        for (int b : B)
          if (a > b) ++inv;
      std::vector<int> merged;
      merged.reserve(A.size() + B.size());
      std::merge(A.begin(), A.end(), B.begin(), B.end(),
                 std::back_inserter(merged));
      Expr c = ca * cb;
      out.add_term(std::move(merged), (inv % 2 == 0) ? c : -c);
    }
  return out;
}

SuperPolynomial SuperPolynomial::scaled(const Expr& c) const {
  SuperPolynomial out(rank_);
  for (const auto& [s, e] : terms_) out.add_term(s, c * e);
  return out;
}

SuperPolynomial SuperPolynomial::dq(int a) const {
  SuperPolynomial out(rank_);
  for (const auto& [s, c] : terms_) {
    auto it = std::find(s.begin(), s.end(), a);
    if (it == s.end()) continue;
    auto posn = static_cast<int>(it - s.begin());
    std::vector<int> rest;
    rest.reserve(s.size() - 1);
    for (int v : s)
      if (v != a) rest.push_back(v);
    out.add_term(std::move(rest), (posn % 2 == 0) ? c : -c);
  }
  return out;
}

SuperPolynomial SuperPolynomial::dx(int i) const {
  SuperPolynomial out(rank_);
  for (const auto& [s, c] : terms_) out.add_term(s, c.diff(i));
  return out;
}

SuperPolynomial SuperPolynomial::degree_part(int m) const {
  SuperPolynomial out(rank_);
  for (const auto& [s, c] : terms_)
    if (static_cast<int>(s.size()) == m) out.add_term(s, c);
  return out;
}

double SuperPolynomial::max_abs(
    const std::vector<std::vector<double>>& pts) const {
  double worst = 0.0;
  for (const auto& [s, c] : terms_)
    for (const auto& p : pts) worst = std::max(worst, std::abs(c.eval(p)));
  return worst;
}

SuperPolynomial OddVectorField::apply(const SuperPolynomial& p) const {
  SuperPolynomial out(p.rank());
  for (std::size_t i = 0; i < x_coeff.size(); ++i)
    out = out + x_coeff[i] * p.dx(static_cast<int>(i));
  for (std::size_t a = 0; a < q_coeff.size(); ++a)
    out = out + q_coeff[a] * p.dq(static_cast<int>(a));
  return out;
}

OddVectorField build_Q(const LieAlgebroidModel& L) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  OddVectorField Q;
  Q.x_coeff.resize(static_cast<std::size_t>(d), SuperPolynomial(r));
  Q.q_coeff.resize(static_cast<std::size_t>(r), SuperPolynomial(r));
  for (int i = 0; i < d; ++i) {
    SuperPolynomial ci(r);
    for (int a = 0; a < r; ++a) ci.add_term({a}, L.rho_comp(i, a));
    Q.x_coeff[i] = std::move(ci);
  }
  for (int c = 0; c < r; ++c) {
    SuperPolynomial cc(r);
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        cc.add_term({a, b}, -L.c_comp(c, a, b));  // -1/2 C q q over ordered pairs
    Q.q_coeff[c] = std::move(cc);
  }
  return Q;
}

SuperPolynomial apply_Q(const OddVectorField& Q, const SuperPolynomial& p) {
  return Q.apply(p);
}

ResidualStat q_squared_residual(const LieAlgebroidModel& L,
                                const std::vector<std::vector<double>>& pts) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  OddVectorField Q = build_Q(L);
  // split into the d/dx and d/dq parts so the scale reflects the four
  // summands of Q^2 rather than their cancelling total
  OddVectorField Qx{Q.x_coeff, std::vector<SuperPolynomial>(
                                   static_cast<std::size_t>(r),
                                   SuperPolynomial(r))};
  OddVectorField Qq{std::vector<SuperPolynomial>(static_cast<std::size_t>(d),
                                                 SuperPolynomial(r)),
                    Q.q_coeff};
  ResidualStat stat;
  if (!pts.empty()) stat.argmax_point = pts.front();
  auto probe = [&](const SuperPolynomial& p) {
    SuperPolynomial qp = Q.apply(p);
    SuperPolynomial total = Q.apply(qp);
    for (const auto* part : {&Qx, &Qq}) {
      for (const auto* part2 : {&Qx, &Qq})
        stat.scale = std::max(stat.scale, part2->apply(part->apply(p)).max_abs(pts));
    }
    for (const auto& [s, c] : total.terms()) {
      (void)s;
      for (const auto& pt : pts) {
        double v = std::abs(c.eval(pt));
        if (v > stat.abs) {
          stat.abs = v;
          stat.argmax_point = pt;
        }
      }
    }
  };
  for (int i = 0; i < d; ++i)
    probe(SuperPolynomial::scalar(r, L.shape.patch.coordinate(i)));
  for (int a = 0; a < r; ++a) probe(SuperPolynomial::monomial(r, {a}));
  return stat;
}

SuperPolynomial to_super(const MixedField& alpha) {
  if (alpha.sig().tm_up != 0 || alpha.sig().tm_down != 0 ||
      alpha.sig().e_up != 0)
    throw std::invalid_argument("to_super expects Gamma(wedge^m E*)");
  SuperPolynomial p(alpha.shape().rank);
  alpha.for_each([&](const auto&, const auto&, const auto&, const auto& A,
                     const Expr& c) { p.add_term(A, c); });
  return p;
}

MixedField from_super(const BundleShape& shape, const SuperPolynomial& p,
                      int m) {
  MixedField out(shape, BlockSig{0, 0, 0, m});
  for (const auto& [s, c] : p.terms())
    if (static_cast<int>(s.size()) == m && !out.structurally_zero())
      out.at({}, {}, {}, s) = c;
  return out;
}

ResidualStat j_star_correspondence(const LieAlgebroidModel& L,
                                   const MixedField& alpha,
                                   const std::vector<std::vector<double>>& pts) {
  SuperPolynomial qa = apply_Q(build_Q(L), to_super(alpha));
  SuperPolynomial ed = to_super(e_differential(L, alpha));
  SuperPolynomial diff = qa - ed;
  ResidualStat stat;
  stat.abs = diff.max_abs(pts);
  stat.scale = std::max(qa.max_abs(pts), ed.max_abs(pts));
  if (!pts.empty()) stat.argmax_point = pts.front();
  return stat;
}

ESection derived_bracket_homology(const LieAlgebroidModel& L,
                                  const std::vector<ESection>& sections) {
  using Op = std::function<SuperPolynomial(const SuperPolynomial&)>;
  int r = L.shape.rank;
  int m = static_cast<int>(sections.size());
  ESection out = make_esection(L.shape, std::max(m - 1, 0));
  if (m < 2) return out;

  OddVectorField Q = build_Q(L);
  auto ubar = [&](const ESection& u) -> Op {
    return [&u, r](const SuperPolynomial& p) {
      SuperPolynomial acc(r);
      for (int a = 0; a < r; ++a) {
        const Expr& ua = u.at({}, {}, {a}, {});
        if (!ua.is_zero()) acc = acc + p.dq(a).scaled(ua);
      }
      return acc;
    };
  };
  auto qop = [&](const SuperPolynomial& p) { return Q.apply(p); };

  std::vector<Op> us;
  us.reserve(sections.size());
  for (const auto& u : sections) us.push_back(ubar(u));

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      // [[u_i, Q], u_j]: graded commutators, [u,Q] an anticommutator
      Op inner = [&, i](const SuperPolynomial& p) {
        return us[i](qop(p)) + qop(us[i](p));
      };
      Op derived = [&, j, inner](const SuperPolynomial& p) {
        return inner(us[j](p)) - us[j](inner(p));
      };
      // remaining factors applied right to left
      int sgn = ((i + j) % 2 == 0) ? 1 : -1;  // 1-based (-1)^{i+j}
      for (const auto& B : multiidx::combos(r, m - 1)) {
        SuperPolynomial p = SuperPolynomial::monomial(r, B);
        for (int t = m - 1; t >= 0; --t) {
          if (t == i || t == j) continue;
          p = us[t](p);
        }
        p = derived(p);
        auto it = p.terms().find(std::vector<int>{});
        if (it == p.terms().end()) continue;
        Expr val = it->second;
        int k = m - 1;
        if ((k * (k - 1) / 2) % 2 != 0) val = -val;
        Expr& slot = out.at({}, {}, B, {});
        slot = (sgn == 1) ? slot + val : slot - val;
      }
    }
  return out;
}

ResidualStat covariant_Q_check(const LieAlgebroidModel& L,
                               const ConnectionData& conn,
                               const std::vector<std::vector<double>>& pts) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  OddVectorField Q = build_Q(L);
  MixedField T = e_torsion(L, conn);

  // rho^i_a xi^a (d_i + omega^c_{bi} xi^b d_{xi^c}) + 1/2 T^c_{ab} xi^a xi^b d_{xi^c}
  OddVectorField Qc;
  Qc.x_coeff = Q.x_coeff;
  Qc.q_coeff.resize(static_cast<std::size_t>(r), SuperPolynomial(r));
  for (int c = 0; c < r; ++c) {
    SuperPolynomial cc(r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        if (a == b) continue;
        Expr coeff;
        for (int i = 0; i < d; ++i)
          coeff = coeff + L.rho_comp(i, a) * conn.comp(c, b, i);
        if (!coeff.is_zero())
          cc = cc + SuperPolynomial::monomial(r, {a, b}, coeff);
      }
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        cc.add_term({a, b}, T.get({}, {}, {c}, {a, b}));
    Qc.q_coeff[c] = std::move(cc);
  }

  ResidualStat stat;
  if (!pts.empty()) stat.argmax_point = pts.front();
  auto probe = [&](const SuperPolynomial& p) {
    SuperPolynomial qa = Q.apply(p), qb = Qc.apply(p);
    stat.abs = std::max(stat.abs, (qa - qb).max_abs(pts));
    stat.scale = std::max({stat.scale, qa.max_abs(pts), qb.max_abs(pts)});
  };
  for (int i = 0; i < d; ++i)
    probe(SuperPolynomial::scalar(r, L.shape.patch.coordinate(i)));
  for (int a = 0; a < r; ++a) probe(SuperPolynomial::monomial(r, {a}));
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b)
      probe(SuperPolynomial::monomial(
          r, {a, b}, L.shape.patch.coordinate(0)));
  return stat;
}

}  // namespace momsec
