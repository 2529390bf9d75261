#ifndef MOMSEC_TESTS_HELPERS_HPP
#define MOMSEC_TESTS_HELPERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "momsec/gallery.hpp"

namespace momsec::testing {

inline Patch unit_patch(std::vector<std::string> names) {
  Patch p;
  p.dim = static_cast<int>(names.size());
  p.coords = std::move(names);
  p.box.assign(static_cast<std::size_t>(p.dim), {-1.0, 1.0});
  return p;
}

inline std::vector<std::vector<double>> pts_of(const Patch& p, int n = 32,
                                               std::uint64_t seed = 42) {
  return sample_points(p, n, seed);
}

inline double field_norm(const MixedField& f,
                         const std::vector<std::vector<double>>& pts) {
  return max_abs(f, pts).max_abs;
}

inline double max_diff(const MixedField& a, const MixedField& b,
                       const std::vector<std::vector<double>>& pts) {
  return field_norm(a - b, pts);
}

// deterministic random polynomial coefficient and field
inline Expr rnd_poly(const Patch& patch, SplitMix64& rng) {
  auto coef = [&] { return Expr::number(2.0 * rng.uniform01() - 1.0); };
  Expr e = coef();
  for (int i = 0; i < patch.dim; ++i) {
    e = e + coef() * patch.coordinate(i);
    for (int j = i; j < patch.dim; ++j)
      e = e + coef() * patch.coordinate(i) * patch.coordinate(j);
  }
  return e;
}

inline MixedField rnd_field(const BundleShape& shape, BlockSig sig,
                            SplitMix64& rng) {
  MixedField f(shape, sig);
  f.for_each_mut([&](const auto&, const auto&, const auto&, const auto&,
                     Expr& e) { e = rnd_poly(shape.patch, rng); });
  return f;
}

inline ConnectionData rnd_connection(const BundleShape& shape, SplitMix64& rng,
                                     double amp = 0.4) {
  ConnectionData conn(MixedField(shape, BlockSig{0, 1, 1, 1}));
  conn.omega.for_each_mut([&](const auto&, const auto&, const auto&,
                              const auto&, Expr& e) {
    e = Expr::number(amp) * rnd_poly(shape.patch, rng);
  });
  return conn;
}

inline ESection frame_section(const BundleShape& shape, int a) {
  ESection e = make_esection(shape, 1);
  e.at({}, {}, {a}, {}) = Expr::number(1.0);
  return e;
}

// so(3) action model with the anchor perturbed away from a Lie algebra
// morphism; negative control for the nilpotency family
inline LieAlgebroidModel perturbed_so3() {
  GalleryInstance g = make_gallery("so3_r3");
  MixedField rho = g.model.rho;
  Expr x = g.model.shape.patch.coordinate(0);
  rho.at({0}, {}, {}, {0}) =
      rho.at({0}, {}, {}, {0}) + Expr::number(0.5) * x * x;
  return LieAlgebroidModel(g.model.shape, rho, g.model.C);
}

// rank-2 translation model that is not involutive: rho(e_0) = d/dx,
// rho(e_1) = d/dy + x^2 d/dx, C = 0
inline LieAlgebroidModel noninvolutive_rank2() {
  Patch patch = unit_patch({"x", "y"});
  BundleShape shape{patch, 2};
  Expr x = patch.coordinate(0);
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  rho.at({0}, {}, {}, {0}) = Expr::number(1.0);
  rho.at({1}, {}, {}, {1}) = Expr::number(1.0);
  rho.at({0}, {}, {}, {1}) = x * x;
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  return LieAlgebroidModel(shape, rho, C);
}

// abelian rank-3 translation algebroid on R^3
inline LieAlgebroidModel abelian_r3() {
  Patch patch = unit_patch({"x", "y", "z"});
  BundleShape shape{patch, 3};
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  for (int a = 0; a < 3; ++a) rho.at({a}, {}, {}, {a}) = Expr::number(1.0);
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  return LieAlgebroidModel(shape, rho, C);
}

}  // namespace momsec::testing

#endif
