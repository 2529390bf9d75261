#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace momsec;
using namespace momsec::testing;

TEST_CASE("nabla reduces to de Rham at zero connection") {
  GalleryInstance so3 = make_gallery("so3_r3");
  ConnectionData conn = trivial_connection(so3.model.shape);
  auto pts = pts_of(so3.model.shape.patch, 12);
  SplitMix64 rng(31);
  MixedField a = rnd_field(so3.model.shape, BlockSig{0, 1, 0, 1}, rng);
  CHECK(max_diff(nabla(conn, a), de_rham(a), pts) == 0.0);
}

TEST_CASE("dual connection defining property") {
  GalleryInstance so3 = make_gallery("so3_r3");
  const BundleShape& shape = so3.model.shape;
  auto pts = pts_of(shape.patch, 16);
  SplitMix64 rng(32);
  ConnectionData conn = rnd_connection(shape, rng);
  int d = shape.patch.dim, r = shape.rank;
  for (int t = 0; t < 4; ++t) {
    MixedField mu = rnd_field(shape, BlockSig{0, 0, 0, 1}, rng);
    MixedField e = rnd_field(shape, BlockSig{0, 0, 1, 0}, rng);
    MixedField nmu = nabla(conn, mu);       // (0,1,0,1)
    MixedField ne = nabla(conn, e);         // (0,1,1,0)
    // d<mu,e> - <nabla mu, e> - <mu, nabla e> componentwise
    for (int i = 0; i < d; ++i) {
      Expr res;
      for (int a = 0; a < r; ++a) {
        res = res + (mu.at({}, {}, {}, {a}) * e.at({}, {}, {a}, {})).diff(i) -
              nmu.at({}, {i}, {}, {a}) * e.at({}, {}, {a}, {}) -
              mu.at({}, {}, {}, {a}) * ne.at({}, {i}, {a}, {});
      }
      for (const auto& p : pts) CHECK(std::abs(res.eval(p)) < 1e-12);
    }
  }
}

TEST_CASE("constant connection on a line bundle") {
  // r = 1, d = 1, constant omega and mu: (nabla mu)_a = omega^b_{a} mu_b dx
  Patch patch = unit_patch({"x"});
  BundleShape shape{patch, 1};
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  rho.at({0}, {}, {}, {0}) = Expr::number(1.0);
  LieAlgebroidModel L(shape, rho, MixedField(shape, BlockSig{0, 0, 1, 2}));
  ConnectionData conn = trivial_connection(shape);
  conn.omega.at({}, {0}, {0}, {0}) = Expr::number(0.7);
  MixedField mu(shape, BlockSig{0, 0, 0, 1});
  mu.at({}, {}, {}, {0}) = Expr::number(2.0);
  MixedField nmu = nabla(conn, mu);
  CHECK(nmu.at({}, {0}, {}, {0}).eval({0.4}) == doctest::Approx(1.4));
  // standard E-connection with rho = 1: E nabla mu = d_x mu + c mu
  MixedField emu = e_connection_E(L, conn, frame_section(shape, 0), mu);
  CHECK(emu.at({}, {}, {}, {0}).eval({0.2}) == doctest::Approx(1.4));
}

TEST_CASE("opposite E-connection on TM") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  const BundleShape& shape = so2.model.shape;
  auto pts = pts_of(shape.patch);
  ConnectionData conn = trivial_connection(shape);
  MixedField ddx(shape, BlockSig{1, 0, 0, 0});
  ddx.at({0}, {}, {}, {}) = Expr::number(1.0);
  // E nabla_{e_1} d/dx = -(d_j rho^i) v^j with rho = (-y, x): gives (0, -1)
  MixedField r = e_connection_TM(so2.model, conn, frame_section(shape, 0), ddx);
  for (const auto& p : pts) {
    CHECK(r.at({0}, {}, {}, {}).eval(p) == doctest::Approx(0.0));
    CHECK(r.at({1}, {}, {}, {}).eval(p) == doctest::Approx(-1.0));
  }
  // rho = 0 gives zero
  Patch p2 = unit_patch({"x"});
  BundleShape sh2{p2, 1};
  LieAlgebroidModel null_model(sh2, MixedField(sh2, BlockSig{1, 0, 0, 1}),
                               MixedField(sh2, BlockSig{0, 0, 1, 2}));
  MixedField v(sh2, BlockSig{1, 0, 0, 0});
  v.at({0}, {}, {}, {}) = p2.coordinate(0);
  CHECK(field_norm(e_connection_TM(null_model, trivial_connection(sh2),
                                   frame_section(sh2, 0), v),
                   pts_of(p2)) == 0.0);
}

TEST_CASE("torsion components and the commutator definition") {
  GalleryInstance so3 = make_gallery("so3_r3");
  const BundleShape& shape = so3.model.shape;
  auto pts = pts_of(shape.patch, 12);
  SplitMix64 rng(33);
  ConnectionData conn = rnd_connection(shape, rng);

  // omega = 0: T = -C
  MixedField t0 = e_torsion(so3.model, trivial_connection(shape));
  CHECK(max_diff(t0, -so3.model.C, pts) == 0.0);

  // dual route: T(e_a,e_b) = Enabla_{e_a} e_b - Enabla_{e_b} e_a - [e_a,e_b]
  MixedField T = e_torsion(so3.model, conn);
  int r = shape.rank;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      MixedField direct =
          e_connection_E(so3.model, conn, frame_section(shape, a),
                         frame_section(shape, b)) -
          e_connection_E(so3.model, conn, frame_section(shape, b),
                         frame_section(shape, a));
      for (int c = 0; c < r; ++c) {
        Expr want = direct.at({}, {}, {c}, {}) - so3.model.c_comp(c, a, b);
        Expr got = T.get({}, {}, {c}, {a, b});
        for (const auto& p : pts)
          CHECK(std::abs(got.eval(p) - want.eval(p)) < 1e-12);
      }
    }

  // rank-1 torsion vanishes by antisymmetry
  GalleryInstance so2 = make_gallery("so2_symplectic");
  ConnectionData c2 = trivial_connection(so2.model.shape);
  c2.omega.at({}, {0}, {0}, {0}) = Expr::number(1.0);
  CHECK(e_torsion(so2.model, c2).structurally_zero());
}

TEST_CASE("covariantized bracket is the Lie bracket in covariant form") {
  GalleryInstance so3 = make_gallery("so3_r3");
  const BundleShape& shape = so3.model.shape;
  auto pts = pts_of(shape.patch, 12);
  SplitMix64 rng(34);
  ConnectionData conn = rnd_connection(shape, rng);

  // omega = 0 on frames: [e_a, e_b]^nabla = C^c_{ab} e_c
  ConnectionData flat = trivial_connection(shape);
  ESection br = covariantized_bracket(so3.model, flat, frame_section(shape, 0),
                                      frame_section(shape, 1));
  CHECK(br.at({}, {}, {2}, {}).eval({0.1, 0.2, 0.3}) == doctest::Approx(1.0));

  // Leibniz in the second slot
  Expr f = rnd_poly(shape.patch, rng);
  ESection e1 = frame_section(shape, 0), e2 = frame_section(shape, 1);
  ESection lhs = covariantized_bracket(so3.model, conn, e1, f * e2);
  ESection rhs = f * covariantized_bracket(so3.model, conn, e1, e2);
  Expr rho_f;
  for (int j = 0; j < 3; ++j)
    rho_f = rho_f + so3.model.rho_comp(j, 0) * f.diff(j);
  rhs = rhs + rho_f * e2;
  CHECK(max_diff(lhs, rhs, pts) < 1e-11);

  // Jacobi identity, cyclic
  ESection u = rnd_field(shape, BlockSig{0, 0, 1, 0}, rng);
  ESection v = rnd_field(shape, BlockSig{0, 0, 1, 0}, rng);
  ESection w = rnd_field(shape, BlockSig{0, 0, 1, 0}, rng);
  auto bk = [&](const ESection& a, const ESection& b) {
    return covariantized_bracket(so3.model, conn, a, b);
  };
  ESection jac = bk(bk(u, v), w) + bk(bk(v, w), u) + bk(bk(w, u), v);
  CHECK(field_norm(jac, pts) < 1e-9);
}

TEST_CASE("curvature report") {
  GalleryInstance so3 = make_gallery("so3_r3");
  const BundleShape& shape = so3.model.shape;
  auto pts = pts_of(shape.patch, 12);

  // flat constant model: all four tensors vanish
  LieAlgebroidModel ab = abelian_r3();
  CurvatureReport flat = curvatures(ab, trivial_connection(ab.shape));
  auto pts_ab = pts_of(ab.shape.patch, 8);
  CHECK(field_norm(flat.T, pts_ab) == 0.0);
  CHECK(field_norm(flat.R, pts_ab) == 0.0);
  CHECK(field_norm(flat.S, pts_ab) == 0.0);
  for (const auto& er : flat.ER.by_argument) CHECK(field_norm(er, pts_ab) == 0.0);

  // omega = 0 with x-dependent C: R = 0 and S = -dC
  Patch p2 = unit_patch({"x", "y"});
  BundleShape tm2{p2, 2};
  MixedField pi(tm2, BlockSig{2, 0, 0, 0});
  pi.at({0, 1}, {}, {}, {}) = Expr::number(0.5) * p2.coordinate(0) *
                              p2.coordinate(0);
  LieAlgebroidModel pois = make_poisson_algebroid(pi, pts_of(p2), 1e-9);
  CurvatureReport cr = curvatures(pois, trivial_connection(pois.shape));
  CHECK(field_norm(cr.R, pts_of(p2)) == 0.0);
  MixedField minus_dC(pois.shape, BlockSig{0, 1, 1, 2});
  minus_dC.for_each_mut([&](const auto&, const auto& iv, const auto& cu,
                            const auto& ab2, Expr& e) {
    e = -pois.c_comp(cu[0], ab2[0], ab2[1]).diff(iv[0]);
  });
  CHECK(max_diff(cr.S, minus_dC, pts_of(p2)) < 1e-13);

  // the two S routes agree on randomized connections
  SplitMix64 rng(35);
  for (int t = 0; t < 3; ++t) {
    ConnectionData conn = rnd_connection(shape, rng);
    CurvatureReport rep = curvatures(so3.model, conn);
    CHECK(max_diff(rep.S, rep.S_lie_route, pts) < 1e-9);
    // E-curvature of the standard E-connection contracts the ordinary
    // curvature with two anchors on a valid algebroid
    for (int cidx = 0; cidx < 3; ++cidx) {
      MixedField want(shape, BlockSig{0, 0, 1, 2});
      want.for_each_mut([&](const auto&, const auto&, const auto& du,
                            const auto& ab, Expr& e) {
        Expr s;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            s = s - so3.model.rho_comp(i, ab[0]) * so3.model.rho_comp(j, ab[1]) *
                        rep.R.get({}, {i, j}, {du[0]}, {cidx});
        e = s;
      });
      CHECK(max_diff(rep.ER.by_argument[cidx], want, pts) < 1e-9);
    }
    // R antisymmetry in the TM pair is structural; verify the commutator
    // meaning of R on a random section instead
    MixedField u = rnd_field(shape, BlockSig{0, 0, 1, 0}, rng);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        MixedField comm =
            covariant_dir(conn, i, covariant_dir(conn, j, u)) -
            covariant_dir(conn, j, covariant_dir(conn, i, u));
        for (int cidx = 0; cidx < 3; ++cidx) {
          Expr want;
          for (int a = 0; a < 3; ++a)
            want = want - rep.R.get({}, {i, j}, {cidx}, {a}) *
                              u.at({}, {}, {a}, {});
          for (const auto& p : pts)
            CHECK(std::abs(comm.at({}, {}, {cidx}, {}).eval(p) - want.eval(p)) <
                  1e-11);
        }
      }
  }
}

TEST_CASE("covariant form of the E-differential") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  GalleryInstance so3 = make_gallery("so3_r3");
  SplitMix64 rng(36);
  for (const auto* g : {&so2, &so3}) {
    auto pts = pts_of(g->model.shape.patch, 16);
    for (int t = 0; t < 3; ++t) {
      ConnectionData conn = rnd_connection(g->model.shape, rng);
      for (int m = 0; m <= std::min(2, g->model.shape.rank); ++m) {
        MixedField alpha = rnd_field(g->model.shape, BlockSig{0, 0, 0, m}, rng);
        MixedField lhs = covariant_e_differential(g->model, conn, alpha);
        MixedField rhs = e_differential(g->model, alpha);
        CHECK(max_diff(lhs, rhs, pts) < 1e-9);
      }
    }
    // omega = 0 collapses to the plain differential exactly
    ConnectionData flat = trivial_connection(g->model.shape);
    MixedField alpha = rnd_field(g->model.shape, BlockSig{0, 0, 0, 1}, rng);
    CHECK(max_diff(covariant_e_differential(g->model, flat, alpha),
                   e_differential(g->model, alpha), pts_of(g->model.shape.patch)) <
          1e-14);
  }
}
