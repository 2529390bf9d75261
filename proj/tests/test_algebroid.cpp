#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "momsec/connection.hpp"

using namespace momsec;
using namespace momsec::testing;

TEST_CASE("defining identities on valid and broken models") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  auto pts2 = pts_of(so2.model.shape.patch);
  CHECK(check_lie_algebroid(so2.model, pts2).pass(1e-9));

  GalleryInstance so3 = make_gallery("so3_r3");
  auto pts3 = pts_of(so3.model.shape.patch);
  AlgebroidCheck ok = check_lie_algebroid(so3.model, pts3);
  CHECK(ok.pass(1e-9));
  CHECK(ok.identity1.abs < 1e-12);
  CHECK(ok.identity2.abs < 1e-12);

  // abelian constant model: residuals exactly zero
  LieAlgebroidModel ab = abelian_r3();
  AlgebroidCheck zero = check_lie_algebroid(ab, pts_of(ab.shape.patch));
  CHECK(zero.identity1.abs == 0.0);
  CHECK(zero.identity2.abs == 0.0);

  // broken anchors fail loudly
  AlgebroidCheck bad1 = check_lie_algebroid(perturbed_so3(), pts3);
  CHECK(!bad1.pass(1e-3));
  LieAlgebroidModel ni = noninvolutive_rank2();
  AlgebroidCheck bad2 = check_lie_algebroid(ni, pts_of(ni.shape.patch));
  CHECK(bad2.identity1.abs > 1e-3);
}

TEST_CASE("E-differential on functions") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  const Patch& patch = so2.model.shape.patch;
  auto pts = pts_of(patch);
  Expr x = patch.coordinate(0), y = patch.coordinate(1);

  MixedField f(so2.model.shape, BlockSig{0, 0, 0, 0});
  f.at({}, {}, {}, {}) = Expr::number(0.5) * (x * x + y * y);
  CHECK(field_norm(e_differential(so2.model, f), pts) < 1e-14);

  // rho = 0, C = 0 kills everything
  Patch p2 = unit_patch({"x", "y"});
  BundleShape sh{p2, 2};
  LieAlgebroidModel null_model(sh, MixedField(sh, BlockSig{1, 0, 0, 1}),
                               MixedField(sh, BlockSig{0, 0, 1, 2}));
  SplitMix64 rng(21);
  MixedField a = rnd_field(sh, BlockSig{0, 1, 0, 1}, rng);
  CHECK(field_norm(e_differential(null_model, a), pts_of(p2)) == 0.0);
}

TEST_CASE("E-differential is nilpotent exactly on valid models") {
  GalleryInstance so3 = make_gallery("so3_r3");
  auto pts = pts_of(so3.model.shape.patch, 16);
  SplitMix64 rng(22);
  for (int m = 0; m <= 1; ++m)
    for (int k = 0; k <= 2; ++k) {
      MixedField a = rnd_field(so3.model.shape, BlockSig{0, k, 0, m}, rng);
      MixedField dd = e_differential(so3.model, e_differential(so3.model, a));
      CHECK(field_norm(dd, pts) < 1e-9);
    }
  // negative control: perturbed anchor violates nilpotency on some input
  LieAlgebroidModel bad = perturbed_so3();
  double worst = 0.0;
  for (int m = 0; m <= 1; ++m) {
    MixedField a = rnd_field(bad.shape, BlockSig{0, 0, 0, m}, rng);
    worst = std::max(worst,
                     field_norm(e_differential(bad, e_differential(bad, a)), pts));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("E-differential satisfies the derivation property") {
  GalleryInstance so3 = make_gallery("so3_r3");
  auto pts = pts_of(so3.model.shape.patch, 16);
  SplitMix64 rng(23);
  MixedField f(so3.model.shape, BlockSig{0, 0, 0, 0});
  f.at({}, {}, {}, {}) = rnd_poly(so3.model.shape.patch, rng);
  MixedField alpha = rnd_field(so3.model.shape, BlockSig{0, 0, 0, 1}, rng);
  MixedField lhs = e_differential(so3.model, f.at({}, {}, {}, {}) * alpha);
  MixedField rhs = wedge(e_differential(so3.model, f), alpha) +
                   f.at({}, {}, {}, {}) * e_differential(so3.model, alpha);
  CHECK(max_diff(lhs, rhs, pts) < 1e-9);
}

TEST_CASE("tangent algebroid reproduces de Rham") {
  Patch patch = unit_patch({"x", "y", "z"});
  BundleShape shape{patch, 3};
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  for (int i = 0; i < 3; ++i) rho.at({i}, {}, {}, {i}) = Expr::number(1.0);
  LieAlgebroidModel tangent(shape, rho, MixedField(shape, BlockSig{0, 0, 1, 2}));
  auto pts = pts_of(patch, 16);
  SplitMix64 rng(24);
  for (int m = 0; m <= 2; ++m) {
    MixedField alpha = rnd_field(shape, BlockSig{0, 0, 0, m}, rng);
    MixedField ed = e_differential(tangent, alpha);
    // transcribe to a pure form and compare with de_rham componentwise
    MixedField as_form(shape, BlockSig{0, m, 0, 0});
    as_form.for_each_mut([&](const auto&, const auto& I, const auto&,
                             const auto&, Expr& e) {
      e = alpha.at({}, {}, {}, I);
    });
    MixedField want = de_rham(as_form);
    MixedField got(shape, BlockSig{0, m + 1, 0, 0});
    got.for_each_mut([&](const auto&, const auto& I, const auto&, const auto&,
                         Expr& e) { e = ed.at({}, {}, {}, I); });
    CHECK(max_diff(got, want, pts) < 1e-12);
  }
}

TEST_CASE("homology boundary on so(3)") {
  GalleryInstance so3 = make_gallery("so3_r3");
  ConnectionData conn = trivial_connection(so3.model.shape);
  auto pts = pts_of(so3.model.shape.patch);

  ESection w = wedge(frame_section(so3.model.shape, 0),
                     frame_section(so3.model.shape, 1));
  ESection dw = homology_boundary(so3.model, conn, w);
  // (-1)^{1+2} [e_0, e_1] = -e_2 with C = epsilon
  CHECK(dw.at({}, {}, {2}, {}).eval({0, 0, 0}) == doctest::Approx(-1.0));
  CHECK(dw.at({}, {}, {0}, {}).is_zero());
  CHECK(dw.at({}, {}, {1}, {}).is_zero());

  // abelian: boundary vanishes
  LieAlgebroidModel ab = abelian_r3();
  ESection wab = wedge(frame_section(ab.shape, 0), frame_section(ab.shape, 1));
  CHECK(field_norm(homology_boundary(ab, trivial_connection(ab.shape), wab),
                   pts_of(ab.shape.patch)) == 0.0);

  // boundary of the top element and nilpotency
  ESection top = wedge(w, frame_section(so3.model.shape, 2));
  ESection dtop = homology_boundary(so3.model, conn, top);
  CHECK(field_norm(dtop, pts) < 1e-14);
  ESection ddw = homology_boundary(so3.model, conn, dw);
  CHECK(field_norm(ddw, pts) < 1e-14);
}

TEST_CASE("homology boundary satisfies the Leibniz formula") {
  GalleryInstance so3 = make_gallery("so3_r3");
  ConnectionData conn = trivial_connection(so3.model.shape);
  const Patch& patch = so3.model.shape.patch;
  auto pts = pts_of(patch);
  SplitMix64 rng(25);
  Expr f = rnd_poly(patch, rng);

  ESection w = wedge(frame_section(so3.model.shape, 0),
                     frame_section(so3.model.shape, 1));
  ESection lhs = homology_boundary(so3.model, conn, f * w);
  // f d(e_0^e_1) - (rho(e_0)f) e_1 + (rho(e_1)f) e_0; the alternating sign
  // starts negative, which is what makes the boundary square to zero
  ESection rhs = f * homology_boundary(so3.model, conn, w);
  for (int l = 0; l < 2; ++l) {
    Expr der;
    for (int j = 0; j < 3; ++j)
      der = der + so3.model.rho_comp(j, l) * f.diff(j);
    ESection term = der * frame_section(so3.model.shape, 1 - l);
    rhs = (l == 0) ? rhs - term : rhs + term;
  }
  CHECK(max_diff(lhs, rhs, pts) < 1e-12);

  // the boundary is square-zero on multi-coefficient inputs as well
  SplitMix64 rng2(27);
  ESection wr = rnd_field(so3.model.shape, BlockSig{0, 0, 3, 0}, rng2);
  CHECK(field_norm(homology_boundary(so3.model, conn,
                                     homology_boundary(so3.model, conn, wr)),
                   pts) < 1e-9);
}

TEST_CASE("nilpotency of the boundary with a connection") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  GalleryInstance tw = make_gallery("twisted_poisson_demo");
  SplitMix64 rng(26);
  for (const auto* g : {&so2, &tw}) {
    auto pts = pts_of(g->model.shape.patch, 12);
    ConnectionData conn = trivial_connection(g->model.shape);
    int r = g->model.shape.rank;
    for (int m = 2; m <= std::min(3, r); ++m) {
      ESection w = rnd_field(g->model.shape, BlockSig{0, 0, m, 0}, rng);
      ESection dd = homology_boundary(g->model, conn,
                                      homology_boundary(g->model, conn, w));
      CHECK(field_norm(dd, pts) < 1e-9);
    }
  }
}

TEST_CASE("kernel membership") {
  GalleryInstance so3 = make_gallery("so3_r3");
  ConnectionData conn = trivial_connection(so3.model.shape);
  auto pts = pts_of(so3.model.shape.patch);

  ESection w12 = wedge(frame_section(so3.model.shape, 0),
                       frame_section(so3.model.shape, 1));
  CHECK(!lie_kernel_membership(so3.model, conn, w12, pts, 1e-9).member);
  ESection top = wedge(w12, frame_section(so3.model.shape, 2));
  CHECK(lie_kernel_membership(so3.model, conn, top, pts, 1e-9).member);

  LieAlgebroidModel ab = abelian_r3();
  ESection wab = wedge(frame_section(ab.shape, 0), frame_section(ab.shape, 2));
  CHECK(lie_kernel_membership(ab, trivial_connection(ab.shape), wab,
                              pts_of(ab.shape.patch), 1e-9)
            .member);
}

TEST_CASE("constant kernel bases") {
  LieAlgebroidModel ab = abelian_r3();
  CHECK(lie_kernel_basis_constant(ab, trivial_connection(ab.shape), 2).size() ==
        3);

  GalleryInstance so3 = make_gallery("so3_r3");
  ConnectionData conn = trivial_connection(so3.model.shape);
  CHECK(lie_kernel_basis_constant(so3.model, conn, 2).empty());
  auto basis3 = lie_kernel_basis_constant(so3.model, conn, 3);
  REQUIRE(basis3.size() == 1);
  CHECK(basis3[0].at({}, {}, {0, 1, 2}, {}).eval({0, 0, 0}) ==
        doctest::Approx(1.0));

  // non-constant bracket coefficients are rejected
  GalleryInstance tw = make_gallery("twisted_poisson_demo");
  CHECK_THROWS_AS(
      lie_kernel_basis_constant(tw.model, trivial_connection(tw.model.shape), 2),
      std::invalid_argument);
}
