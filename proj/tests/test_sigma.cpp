#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace momsec;
using namespace momsec::testing;

namespace {

SigmaTargetData perturb_tmu(const SigmaTargetData& base, SplitMix64& rng,
                            const Patch& patch) {
  SigmaTargetData out = base;
  int k = static_cast<int>(rng.next() % out.tmu.size());
  if (out.tmu[k].structurally_zero()) k = out.tmu.size() - 1;
  MixedField bump(out.tmu[k].shape(), out.tmu[k].sig());
  bool first = true;
  // a product of two coordinates keeps the bump non-closed whichever
  // component slot it lands in
  Expr xy = patch.coordinate(0) * patch.coordinate(1 % patch.dim);
  bump.for_each_mut([&](const auto&, const auto&, const auto&, const auto&,
                        Expr& e) {
    if (first) {
      e = Expr::number(0.5 + rng.uniform01()) * xy;
      first = false;
    }
  });
  out.tmu[k] = out.tmu[k] + bump;
  return out;
}

}  // namespace

TEST_CASE("sign tables") {
  // n = 1: eps_0 = +1, omega = -H
  CHECK(sigma_eps(0, 1) == 1);
  CHECK(sigma_tau(1, 1) == -1);
  CHECK(sigma_tau(0, 1) == -1);
  // n = 2: eps_1 = +1, eps_0 = -1, omega = +H
  CHECK(sigma_eps(1, 2) == 1);
  CHECK(sigma_eps(0, 2) == -1);
  // translation factors relate the residual systems per degree
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(sigma_tau(k, n) ==
            ((n % 2 == 0) ? 1 : -1) * sigma_factor(k, n));
}

TEST_CASE("isometry condition") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  auto pts = pts_of(so2.model.shape.patch);
  CHECK(isometry_residual(so2.model, so2.conn, so2.sigma->g, pts).abs < 1e-13);

  // zero anchor: trivially isometric
  Patch p2 = unit_patch({"x", "y"});
  BundleShape sh{p2, 1};
  LieAlgebroidModel null_model(sh, MixedField(sh, BlockSig{1, 0, 0, 1}),
                               MixedField(sh, BlockSig{0, 0, 1, 2}));
  MetricField g(sh);
  g.at(0, 0) = Expr::number(1.0);
  g.at(1, 1) = Expr::number(1.0) + p2.coordinate(0) * p2.coordinate(0);
  CHECK(isometry_residual(null_model, trivial_connection(sh), g, pts_of(p2))
            .abs == 0.0);

  // x-translation does not preserve diag(1, 1+x^2); at zero connection the
  // residual is exactly the Lie derivative of g along the anchor
  MixedField rho(sh, BlockSig{1, 0, 0, 1});
  rho.at({0}, {}, {}, {0}) = Expr::number(1.0);
  LieAlgebroidModel trans(sh, rho, MixedField(sh, BlockSig{0, 0, 1, 2}));
  ResidualStat bad_iso =
      isometry_residual(trans, trivial_connection(sh), g, pts_of(p2));
  CHECK(bad_iso.abs > 1e-2);
  double lie_g = 0.0;  // max |(L_{d/dx} g)_{ij}| = max |d_x g_{ij}| over samples
  for (const auto& p : pts_of(p2))
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        lie_g = std::max(lie_g, std::abs(g.at(i, j).diff(0).eval(p)));
  CHECK(bad_iso.abs == doctest::Approx(lie_g));

  // Killing reduction: with omega = 0 the residual is the Lie derivative of g
  GalleryInstance so3 = make_gallery("so3_r3");
  MetricField g3(so3.model.shape);
  for (int i = 0; i < 3; ++i) g3.at(i, i) = Expr::number(1.0);
  ResidualStat iso = isometry_residual(so3.model, so3.conn, g3,
                                       pts_of(so3.model.shape.patch));
  CHECK(iso.abs < 1e-13);
}

TEST_CASE("positive definiteness probe") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  auto pts = pts_of(so2.model.shape.patch);
  CHECK(metric_positive_definite(so2.sigma->g, pts));
  MetricField lorentz(so2.model.shape);
  lorentz.at(0, 0) = Expr::number(1.0);
  lorentz.at(1, 1) = Expr::number(-1.0);
  CHECK(!metric_positive_definite(lorentz, pts));
}

TEST_CASE("gauge-invariance system on the gallery instances") {
  for (const char* name : {"so2_symplectic", "multisymplectic_translation"}) {
    GalleryInstance g = make_gallery(name);
    REQUIRE(g.sigma.has_value());
    auto pts = pts_of(g.model.shape.patch);
    CAPTURE(name);
    CHECK(gnlsm_residuals(g.model, g.conn, *g.sigma, pts, 1e-9).pass);
    CHECK(contraction_condition_residual(g.model, *g.sigma, pts).pass(1e-9));
    Theorem61Report rep = theorem61_roundtrip(g.model, g.conn, *g.sigma, pts,
                                              1e-9);
    CHECK(rep.gnlsm_pass);
    CHECK(rep.hms_pass);
    CHECK(rep.equivalent);
  }
}

TEST_CASE("zero data passes everything") {
  GalleryInstance mt = make_gallery("multisymplectic_translation");
  auto pts = pts_of(mt.model.shape.patch);
  SigmaTargetData zero = *mt.sigma;
  for (auto& t : zero.tmu) t = MixedField(t.shape(), t.sig());
  zero.H = MixedField(zero.H.shape(), zero.H.sig());
  CHECK(gnlsm_residuals(mt.model, mt.conn, zero, pts, 1e-9).pass);
  CHECK(theorem61_roundtrip(mt.model, mt.conn, zero, pts, 1e-9).equivalent);
}

TEST_CASE("per-degree proportionality of the two residual systems") {
  // the gnlsm residual of degree k equals sigma_factor(k, n) times the
  // translated homotopy-momentum-section residual, as fields
  GalleryInstance mt = make_gallery("multisymplectic_translation");
  auto pts = pts_of(mt.model.shape.patch, 16);
  SplitMix64 rng(71);
  SigmaTargetData data = *mt.sigma;
  // fully random data of the right degrees
  for (int k = 0; k < data.n; ++k)
    data.tmu[k] = rnd_field(mt.model.shape, BlockSig{0, k, 0, data.n - k}, rng);
  data.H = rnd_field(mt.model.shape, BlockSig{0, data.n + 1, 0, 0}, rng);

  auto [mu, P] = gnlsm_to_hms(data);
  HmsReport sig = gnlsm_residuals(mt.model, mt.conn, data, pts, 1e-9);
  HmsReport hms = hms_residuals(mt.model, mt.conn, P, mu, pts, 1e-9);
  REQUIRE(sig.lines.size() == hms.lines.size());
  for (std::size_t i = 0; i < sig.lines.size(); ++i) {
    CHECK(sig.lines[i].k == hms.lines[i].k);
    CHECK(sig.lines[i].stat.abs ==
          doctest::Approx(hms.lines[i].stat.abs).epsilon(1e-12));
  }
}

TEST_CASE("n = 1 degeneration is the momentum-section check bit for bit") {
  GalleryInstance so2 = make_gallery("so2_symplectic");
  auto pts = pts_of(so2.model.shape.patch);
  SplitMix64 rng(72);
  SigmaTargetData data = *so2.sigma;
  data.tmu[0] = rnd_field(so2.model.shape, BlockSig{0, 0, 0, 1}, rng);
  data.H = rnd_field(so2.model.shape, BlockSig{0, 2, 0, 0}, rng);
  auto [mu, P] = gnlsm_to_hms(data);  // mu_0 = tmu_0, omega = -H
  HmsReport sig = gnlsm_residuals(so2.model, so2.conn, data, pts, 1e-9);
  HmsReport hms = hms_residuals(so2.model, so2.conn, P, mu, pts, 1e-9);
  REQUIRE(sig.lines.size() == 2);
  CHECK(sig.lines[0].stat.abs == hms.lines[0].stat.abs);
  CHECK(sig.lines[1].stat.abs == hms.lines[1].stat.abs);
}

TEST_CASE("contraction condition") {
  GalleryInstance mt = make_gallery("multisymplectic_translation");
  auto pts = pts_of(mt.model.shape.patch);

  // n = 1 is vacuous
  GalleryInstance so2 = make_gallery("so2_symplectic");
  CHECK(contraction_condition_residual(so2.model, *so2.sigma,
                                       pts_of(so2.model.shape.patch))
            .abs == 0.0);

  // mu_1 = -x dy with rho = d/dz contracts to zero, matching mu_0 = 0
  CHECK(contraction_condition_residual(mt.model, *mt.sigma, pts).abs < 1e-14);

  // a constant mu_0 breaks it with residual 1 (needs rank >= 2 for a
  // nonzero two-index block)
  LieAlgebroidModel ab = abelian_r3();
  MomentumData m2 = zero_momentum(ab.shape, 2);
  MixedField c0(ab.shape, BlockSig{0, 0, 0, 2});
  c0.at({}, {}, {}, {0, 1}) = Expr::number(1.0);
  m2.mu[0] = c0;
  m2.mu[1] = MixedField(ab.shape, BlockSig{0, 1, 0, 1});
  ResidualStat bad = algebraic_condition_residual(ab, m2, 2, pts_of(ab.shape.patch));
  CHECK(bad.abs == doctest::Approx(1.0));
}

TEST_CASE("theorem 6.1 verdict equivalence under perturbations") {
  GalleryInstance mt = make_gallery("multisymplectic_translation");
  auto pts = pts_of(mt.model.shape.patch);
  SplitMix64 rng(73);
  // designed failures still produce agreeing verdicts on both sides
  for (int t = 0; t < 5; ++t) {
    SigmaTargetData bad = perturb_tmu(*mt.sigma, rng, mt.model.shape.patch);
    Theorem61Report rep = theorem61_roundtrip(mt.model, mt.conn, bad, pts, 1e-9);
    CHECK(!rep.gnlsm_pass);
    CHECK(!rep.hms_pass);
    CHECK(rep.equivalent);
  }
}
