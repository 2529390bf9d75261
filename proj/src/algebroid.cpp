#include "momsec/algebroid.hpp"

#include <cmath>
#include <stdexcept>

#include "momsec/connection.hpp"

namespace momsec {

using multiidx::combos;

LieAlgebroidModel::LieAlgebroidModel(BundleShape s, MixedField rho_,
                                     MixedField C_)
    : shape(std::move(s)), rho(std::move(rho_)), C(std::move(C_)) {
  if (!(rho.sig() == BlockSig{1, 0, 0, 1}) || !(C.sig() == BlockSig{0, 0, 1, 2}))
    throw std::invalid_argument("algebroid data has wrong block signatures");
}

MixedField LieAlgebroidModel::anchor_of_frame(int a) const {
  MixedField v(shape, BlockSig{1, 0, 0, 0});
  for (int i = 0; i < shape.patch.dim; ++i) v.at({i}, {}, {}, {}) = rho_comp(i, a);
  return v;
}

ESection make_esection(const BundleShape& shape, int m) {
  return MixedField(shape, BlockSig{0, 0, m, 0});
}

AlgebroidCheck check_lie_algebroid(const LieAlgebroidModel& L,
                                   const std::vector<std::vector<double>>& pts) {
  int d = L.shape.patch.dim, r = L.shape.rank;
  AlgebroidCheck out;
  if (!pts.empty()) {
    out.identity1.argmax_point = pts.front();
    out.identity2.argmax_point = pts.front();
  }

  // symbolic derivatives prepared once
  std::vector<Expr> rho_e(static_cast<std::size_t>(d) * r);
  std::vector<Expr> drho(static_cast<std::size_t>(d) * d * r);
  auto rho_at = [&](int i, int a) -> Expr& { return rho_e[i * r + a]; };
  auto drho_at = [&](int j, int i, int a) -> Expr& {
    return drho[(j * d + i) * r + a];
  };
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < r; ++a) {
      rho_at(i, a) = L.rho_comp(i, a);
      for (int j = 0; j < d; ++j) drho_at(j, i, a) = rho_at(i, a).diff(j);
    }
  std::vector<Expr> c_e(static_cast<std::size_t>(r) * r * r);
  std::vector<Expr> dc(static_cast<std::size_t>(d) * r * r * r);
  auto c_at = [&](int c, int a, int b) -> Expr& { return c_e[(c * r + a) * r + b]; };
  auto dc_at = [&](int i, int c, int a, int b) -> Expr& {
    return dc[((i * r + c) * r + a) * r + b];
  };
  for (int c = 0; c < r; ++c)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        c_at(c, a, b) = L.c_comp(c, a, b);
        for (int i = 0; i < d; ++i) dc_at(i, c, a, b) = c_at(c, a, b).diff(i);
      }

  for (const auto& p : pts) {
    std::vector<double> rv(rho_e.size()), drv(drho.size()), cv(c_e.size()),
        dcv(dc.size());
    for (std::size_t i = 0; i < rho_e.size(); ++i) rv[i] = rho_e[i].eval(p);
    for (std::size_t i = 0; i < drho.size(); ++i) drv[i] = drho[i].eval(p);
    for (std::size_t i = 0; i < c_e.size(); ++i) cv[i] = c_e[i].eval(p);
    for (std::size_t i = 0; i < dc.size(); ++i) dcv[i] = dc[i].eval(p);
    auto R = [&](int i, int a) { return rv[i * r + a]; };
    auto dR = [&](int j, int i, int a) { return drv[(j * d + i) * r + a]; };
    auto Cc = [&](int c, int a, int b) { return cv[(c * r + a) * r + b]; };
    auto dC = [&](int i, int c, int a, int b) {
      return dcv[((i * r + c) * r + a) * r + b];
    };

    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        for (int i = 0; i < d; ++i) {
          double t1 = 0, t2 = 0, t3 = 0;
          for (int j = 0; j < d; ++j) {
            t1 += R(j, a) * dR(j, i, b);
            t2 += R(j, b) * dR(j, i, a);
          }
          for (int c = 0; c < r; ++c) t3 += Cc(c, a, b) * R(i, c);
          double res = std::abs(t1 - t2 - t3);
          double sc = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
          out.identity1.scale = std::max(out.identity1.scale, sc);
          if (res > out.identity1.abs) {
            out.identity1.abs = res;
            out.identity1.argmax_point = p;
          }
        }

    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        for (int c = b + 1; c < r; ++c)
          for (int e = 0; e < r; ++e) {
            double res = 0;
            int tri[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
            for (auto& t : tri) {
              double quad = 0, der = 0;
              for (int dd = 0; dd < r; ++dd)
                quad += Cc(e, t[0], dd) * Cc(dd, t[1], t[2]);
              for (int i = 0; i < d; ++i)
                der += R(i, t[0]) * dC(i, e, t[1], t[2]);
              res += quad + der;
              out.identity2.scale = std::max(
                  out.identity2.scale, std::max(std::abs(quad), std::abs(der)));
            }
            if (std::abs(res) > out.identity2.abs) {
              out.identity2.abs = std::abs(res);
              out.identity2.argmax_point = p;
            }
          }
  }
  return out;
}

Expr anchor_action_component(const LieAlgebroidModel& L, int b,
                             const MixedField& alpha, const std::vector<int>& I,
                             const std::vector<int>& A) {
  int d = L.shape.patch.dim;
  Expr sum;
  for (int j = 0; j < d; ++j) {
    Expr rj = L.rho_comp(j, b);
    if (!rj.is_zero()) sum = sum + rj * alpha.at({}, I, {}, A).diff(j);
  }
  for (std::size_t t = 0; t < I.size(); ++t)
    for (int j = 0; j < d; ++j) {
      Expr dr = L.rho_comp(j, b).diff(I[t]);
      if (dr.is_zero()) continue;
      std::vector<int> J = I;
      J[t] = j;
      sum = sum + dr * alpha.get({}, J, {}, A);
    }
  return sum;
}

MixedField e_differential(const LieAlgebroidModel& L, const MixedField& alpha) {
  if (alpha.sig().tm_up != 0 || alpha.sig().e_up != 0)
    throw std::invalid_argument("e_differential expects Omega^k(M, wedge^m E*)");
  BlockSig sig = alpha.sig();
  sig.e_down += 1;
  MixedField out(L.shape, sig);
  if (out.structurally_zero() || alpha.structurally_zero()) return out;
  int r = L.shape.rank;
  out.for_each_mut([&](const auto&, const auto& I, const auto&,
                       const auto& B, Expr& comp) {
    Expr sum;
    int m1 = static_cast<int>(B.size());
    for (int l = 0; l < m1; ++l) {
      std::vector<int> rest;
      rest.reserve(B.size() - 1);
      for (int t = 0; t < m1; ++t)
        if (t != l) rest.push_back(B[t]);
      Expr term = anchor_action_component(L, B[l], alpha, I, rest);
      sum = (l % 2 == 0) ? sum + term : sum - term;
    }
    for (int l = 0; l < m1; ++l)
      for (int p = l + 1; p < m1; ++p) {
        std::vector<int> rest;
        for (int t = 0; t < m1; ++t)
          if (t != l && t != p) rest.push_back(B[t]);
        for (int c = 0; c < r; ++c) {
          Expr cc = L.c_comp(c, B[l], B[p]);
          if (cc.is_zero()) continue;
          std::vector<int> ins;
          ins.reserve(rest.size() + 1);
          ins.push_back(c);
          ins.insert(ins.end(), rest.begin(), rest.end());
          Expr term = cc * alpha.get({}, I, {}, ins);
          sum = ((l + p) % 2 == 0) ? sum + term : sum - term;
        }
      }
    comp = sum;
  });
  return out;
}

namespace {

void accumulate_esection(ESection& out, std::vector<int> idx, const Expr& term) {
  int s = multiidx::sort_sign(idx);
  if (s == 0 || term.is_zero()) return;
  Expr& slot = out.at({}, {}, idx, {});
  slot = (s == 1) ? slot + term : slot - term;
}

}  // namespace

ESection homology_boundary(const LieAlgebroidModel& L, const ConnectionData& conn,
                           const ESection& w) {
  if (w.sig().tm_up != 0 || w.sig().tm_down != 0 || w.sig().e_down != 0)
    throw std::invalid_argument("homology_boundary expects a section of wedge E");
  int m = w.sig().e_up;
  ESection out = make_esection(L.shape, std::max(m - 1, 0));
  if (m < 2 || w.structurally_zero()) return out;
  MixedField B = bracket_nabla_coeffs(L, conn);
  int d = L.shape.patch.dim, r = L.shape.rank;

  w.for_each([&](const auto&, const auto&, const auto& A, const auto&,
                 const Expr& wA) {
    if (wA.is_zero()) return;
    int sz = static_cast<int>(A.size());
    // bracket terms
    for (int l = 0; l < sz; ++l)
      for (int p = l + 1; p < sz; ++p) {
        std::vector<int> rest;
        for (int t = 0; t < sz; ++t)
          if (t != l && t != p) rest.push_back(A[t]);
        // 1-based (-1)^{i+j} = (-1)^{l+p} for 0-based l,p
        int sgn = ((l + p) % 2 == 0) ? 1 : -1;
        for (int c = 0; c < r; ++c) {
          Expr bc = B.get({}, {}, {c}, {A[l], A[p]});
          if (bc.is_zero()) continue;
          std::vector<int> idx;
          idx.reserve(rest.size() + 1);
          idx.push_back(c);
          idx.insert(idx.end(), rest.begin(), rest.end());
          accumulate_esection(out, idx, (sgn == 1) ? wA * bc : -(wA * bc));
        }
      }
    // Leibniz terms for x-dependent coefficients, with the sign
    // (-1)^i on the i-th slot (1-based): the unique choice under which
    // the boundary squares to zero given the algebroid identities
    for (int l = 0; l < sz; ++l) {
      std::vector<int> rest;
      for (int t = 0; t < sz; ++t)
        if (t != l) rest.push_back(A[t]);
      Expr der;
      for (int j = 0; j < d; ++j) {
        Expr rj = L.rho_comp(j, A[l]);
        if (!rj.is_zero()) der = der + rj * wA.diff(j);
      }
      if (der.is_zero()) continue;
      accumulate_esection(out, rest, (l % 2 == 0) ? -der : der);
    }
  });
  return out;
}

KernelMembership lie_kernel_membership(const LieAlgebroidModel& L,
                                       const ConnectionData& conn,
                                       const ESection& w,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol) {
  ESection dw = homology_boundary(L, conn, w);
  KernelMembership km;
  km.boundary_norm = max_abs(dw, pts).max_abs;
  km.member = km.boundary_norm < tol;
  return km;
}

std::vector<ESection> lie_kernel_basis_constant(const LieAlgebroidModel& L,
                                                const ConnectionData& conn,
                                                int m) {
  int r = L.shape.rank;
  MixedField B = bracket_nabla_coeffs(L, conn);
  bool constant = true;
  B.for_each([&](const auto&, const auto&, const auto&, const auto&,
                 const Expr& e) { constant = constant && e.is_constant(); });
  if (!constant)
    throw std::invalid_argument(
        "lie_kernel_basis_constant requires constant bracket coefficients");

  const auto& cols = combos(r, m);
  std::vector<ESection> basis;
  if (m < 2) {
    for (const auto& A : cols) {
      ESection e = make_esection(L.shape, m);
      e.at({}, {}, A, {}) = Expr::number(1.0);
      basis.push_back(std::move(e));
    }
    return basis;
  }

  std::vector<double> origin(static_cast<std::size_t>(L.shape.patch.dim), 0.0);
  const auto& rows = combos(r, m - 1);
  std::size_t nr = rows.size(), nc = cols.size();
  std::vector<double> M(nr * nc, 0.0);
  for (std::size_t col = 0; col < nc; ++col) {
    const auto& A = cols[col];
    int sz = static_cast<int>(A.size());
    for (int l = 0; l < sz; ++l)
      for (int p = l + 1; p < sz; ++p) {
        std::vector<int> rest;
        for (int t = 0; t < sz; ++t)
          if (t != l && t != p) rest.push_back(A[t]);
        int sgn = ((l + p) % 2 == 0) ? 1 : -1;
        for (int c = 0; c < r; ++c) {
          double bc = B.get({}, {}, {c}, {A[l], A[p]}).eval(origin);
          if (bc == 0.0) continue;
          std::vector<int> idx;
          idx.push_back(c);
          idx.insert(idx.end(), rest.begin(), rest.end());
          int s = multiidx::sort_sign(idx);
          if (s == 0) continue;
          M[multiidx::rank(idx, r) * nc + col] += sgn * s * bc;
        }
      }
  }

  // reduced row echelon form, partial pivoting
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t best = row;
    for (std::size_t rr = row; rr < nr; ++rr)
      if (std::abs(M[rr * nc + col]) > std::abs(M[best * nc + col])) best = rr;
    if (std::abs(M[best * nc + col]) < 1e-12) continue;
    for (std::size_t cc = 0; cc < nc; ++cc)
      std::swap(M[row * nc + cc], M[best * nc + cc]);
    double piv = M[row * nc + col];
    for (std::size_t cc = 0; cc < nc; ++cc) M[row * nc + cc] /= piv;
    for (std::size_t rr = 0; rr < nr; ++rr) {
      if (rr == row) continue;
      double f = M[rr * nc + col];
      if (f == 0.0) continue;
      for (std::size_t cc = 0; cc < nc; ++cc) M[rr * nc + cc] -= f * M[row * nc + cc];
    }
    pivot_col.push_back(col);
    ++row;
  }

  for (std::size_t f = 0; f < nc; ++f) {
    bool is_pivot = false;
    for (auto pc : pivot_col)
      if (pc == f) is_pivot = true;
    if (is_pivot) continue;
    ESection e = make_esection(L.shape, m);
    e.at({}, {}, cols[f], {}) = Expr::number(1.0);
    for (std::size_t rr = 0; rr < pivot_col.size(); ++rr) {
      double v = -M[rr * nc + f];
      if (v != 0.0) e.at({}, {}, cols[pivot_col[rr]], {}) = Expr::number(v);
    }
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace momsec
