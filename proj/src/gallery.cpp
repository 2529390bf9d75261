#include "momsec/gallery.hpp"

#include <cmath>

namespace momsec {

namespace {

Patch make_box_patch(std::vector<std::string> names) {
  Patch p;
  p.dim = static_cast<int>(names.size());
  p.coords = std::move(names);
  p.box.assign(static_cast<std::size_t>(p.dim), {-1.0, 1.0});
  return p;
}

std::vector<std::vector<double>> default_pts(const Patch& p) {
  return sample_points(p, 32, 42);
}

constexpr double kCtorTol = 1e-9;

}  // namespace

MixedField schouten_bivector(const MixedField& a, const MixedField& b) {
  if (!(a.sig() == BlockSig{2, 0, 0, 0}) || !(b.sig() == BlockSig{2, 0, 0, 0}))
    throw std::invalid_argument("schouten_bivector expects two bivectors");
  int d = a.shape().patch.dim;
  MixedField out(a.shape(), BlockSig{3, 0, 0, 0});
  if (out.structurally_zero()) return out;
  out.for_each_mut([&](const auto& ijk, const auto&, const auto&, const auto&,
                       Expr& comp) {
    Expr sum;
    int cyc[3][3] = {{ijk[0], ijk[1], ijk[2]},
                     {ijk[1], ijk[2], ijk[0]},
                     {ijk[2], ijk[0], ijk[1]}};
    for (auto& t : cyc)
      for (int l = 0; l < d; ++l) {
        sum = sum + a.get({l, t[0]}, {}, {}, {}) *
                        b.get({t[1], t[2]}, {}, {}, {}).diff(l) +
              b.get({l, t[0]}, {}, {}, {}) *
                  a.get({t[1], t[2]}, {}, {}, {}).diff(l);
      }
    comp = sum;
  });
  return out;
}

MixedField pi_cubed_pairing(const MixedField& pi, const MixedField& H) {
  int d = pi.shape().patch.dim;
  MixedField out(pi.shape(), BlockSig{3, 0, 0, 0});
  if (out.structurally_zero()) return out;
  out.for_each_mut([&](const auto& ijk, const auto&, const auto&, const auto&,
                       Expr& comp) {
    Expr sum;
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        for (int p = 0; p < d; ++p) {
          Expr h = H.get({}, {m, n, p}, {}, {});
          if (h.is_zero()) continue;
          sum = sum + h * pi.get({ijk[0], m}, {}, {}, {}) *
                          pi.get({ijk[1], n}, {}, {}, {}) *
                          pi.get({ijk[2], p}, {}, {}, {});
        }
    comp = sum;
  });
  return out;
}

ActionAlgebroidModel make_action_algebroid(
    const BundleShape& shape, const LieAlgebraData& g,
    const std::vector<std::vector<Expr>>& rho_exprs) {
  return ActionAlgebroidModel::make(shape, g, rho_exprs);
}

namespace {

LieAlgebroidModel poisson_model_with_bracket(const MixedField& pi,
                                             const MixedField* H) {
  const Patch& patch = pi.shape().patch;
  int d = patch.dim;
  BundleShape shape{patch, d};  // E = T*M, fiber index <-> coordinate index
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a)
      rho.at({i}, {}, {}, {a}) = -pi.get({a, i}, {}, {}, {});
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  C.for_each_mut([&](const auto&, const auto&, const auto& cu, const auto& ab,
                     Expr& comp) {
    int c = cu[0], a = ab[0], b = ab[1];
    Expr sum = -pi.get({a, b}, {}, {}, {}).diff(c);
    if (H) {
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          Expr h = H->get({}, {m, n, c}, {}, {});
          if (h.is_zero()) continue;
          sum = sum - h * pi.get({a, m}, {}, {}, {}) * pi.get({b, n}, {}, {}, {});
        }
    }
    comp = sum;
  });
  return LieAlgebroidModel(shape, std::move(rho), std::move(C));
}

MixedField bivector_as_e_form(const BundleShape& shape, const MixedField& pi) {
  MixedField mu0(shape, BlockSig{0, 0, 0, 2});
  mu0.for_each_mut([&](const auto&, const auto&, const auto&, const auto& ab,
                       Expr& comp) { comp = pi.get({ab[0], ab[1]}, {}, {}, {}); });
  return mu0;
}

}  // namespace

LieAlgebroidModel make_poisson_algebroid(
    const MixedField& pi, const std::vector<std::vector<double>>& pts,
    double tol) {
  MixedField ss = schouten_bivector(pi, pi);
  double res = max_abs(ss, pts).max_abs;
  if (res >= tol)
    throw GalleryError("bivector is not Poisson: |[pi,pi]| = " +
                       std::to_string(res));
  return poisson_model_with_bracket(pi, nullptr);
}

TwistedPoissonDemo make_twisted_poisson(
    const MixedField& pi, const MixedField& H,
    const std::vector<std::vector<double>>& pts, double tol) {
  double dh = max_abs(de_rham(H), pts).max_abs;
  if (dh >= tol)
    throw GalleryError("H is not closed: |dH| = " + std::to_string(dh));
  MixedField rel = 0.5 * schouten_bivector(pi, pi) - pi_cubed_pairing(pi, H);
  double res = max_abs(rel, pts).max_abs;
  if (res >= tol)
    throw GalleryError(
        "twisted Poisson relation 1/2[pi,pi] = <ox^3 pi, H> violated: " +
        std::to_string(res));
  TwistedPoissonDemo demo;
  demo.model = poisson_model_with_bracket(pi, &H);
  demo.conn = trivial_connection(demo.model.shape);
  demo.plectic = PrePlecticForm{2, H};
  demo.mu.mu.push_back(bivector_as_e_form(demo.model.shape, pi));
  demo.mu.mu.emplace_back(demo.model.shape, BlockSig{0, 1, 0, 1});
  return demo;
}

RPoissonDemo make_twisted_r_poisson(const MixedField& pi, const MixedField& J,
                                    const MixedField& H, int n,
                                    const std::vector<std::vector<double>>& pts,
                                    double tol) {
  if (n != 2 || !(J.sig() == BlockSig{2, 0, 0, 0}))
    throw GalleryError("twisted R-Poisson demo supports n = 2 with a bivector J");
  double pp = max_abs(schouten_bivector(pi, pi), pts).max_abs;
  if (pp >= tol)
    throw GalleryError("pi is not Poisson: |[pi,pi]| = " + std::to_string(pp));
  double dh = max_abs(de_rham(H), pts).max_abs;
  if (dh >= tol)
    throw GalleryError("H is not closed: |dH| = " + std::to_string(dh));
  RPoissonDemo demo;
  demo.model = poisson_model_with_bracket(pi, nullptr);
  demo.conn = trivial_connection(demo.model.shape);
  demo.plectic = PrePlecticForm{n, H};
  demo.mu.mu.push_back(bivector_as_e_form(demo.model.shape, J));
  demo.mu.mu.emplace_back(demo.model.shape, BlockSig{0, 1, 0, 1});
  return demo;
}

namespace {

GalleryInstance so2_symplectic() {
  GalleryInstance g;
  g.name = "so2_symplectic";
  Patch patch = make_box_patch({"x", "y"});
  BundleShape shape{patch, 1};
  Expr x = patch.coordinate(0), y = patch.coordinate(1);

  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  rho.at({0}, {}, {}, {0}) = -y;
  rho.at({1}, {}, {}, {0}) = x;
  MixedField C(shape, BlockSig{0, 0, 1, 2});  // structurally zero, r = 1
  g.model = LieAlgebroidModel(shape, rho, C);
  g.conn = trivial_connection(shape);

  MixedField omega(shape, BlockSig{0, 2, 0, 0});
  omega.at({}, {0, 1}, {}, {}) = Expr::number(1.0);
  g.plectic = PrePlecticForm{1, omega};

  MomentumData mu;
  MixedField mu0(shape, BlockSig{0, 0, 0, 1});
  mu0.at({}, {}, {}, {0}) = Expr::number(0.5) * (x * x + y * y);
  mu.mu.push_back(mu0);
  g.mu = mu;

  SigmaTargetData sd;
  sd.n = 1;
  sd.g = MetricField(shape);
  sd.g.at(0, 0) = Expr::number(1.0);
  sd.g.at(1, 1) = Expr::number(1.0);
  sd.H = -omega;  // omega = (-1)^n H with n = 1
  sd.tmu.push_back(mu0);  // eps_0 = +1
  g.sigma = sd;

  g.checks = {"lie_algebroid", "hms", "equivariance", "homotopy_hamiltonian"};
  for (const auto& c : g.checks) g.expected[c] = true;
  g.expected["sigma_gnlsm"] = true;
  g.expected["sigma_isometry"] = true;
  g.expected["theorem61"] = true;
  g.expected["weak_hms"] = true;
  return g;
}

GalleryInstance so3_r3() {
  GalleryInstance g;
  g.name = "so3_r3";
  Patch patch = make_box_patch({"x", "y", "z"});
  BundleShape shape{patch, 3};
  auto eps = [](int a, int b, int c) -> double {
    if (a == b || b == c || a == c) return 0.0;
    if ((a == 0 && b == 1 && c == 2) || (a == 1 && b == 2 && c == 0) ||
        (a == 2 && b == 0 && c == 1))
      return 1.0;
    return -1.0;
  };
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      Expr sum;
      for (int j = 0; j < 3; ++j) {
        double e = eps(a, i, j);
        if (e != 0.0) sum = sum + Expr::number(e) * patch.coordinate(j);
      }
      rho.at({i}, {}, {}, {a}) = sum;
    }
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  C.for_each_mut([&](const auto&, const auto&, const auto& cu, const auto& ab,
                     Expr& c) { c = Expr::number(eps(ab[0], ab[1], cu[0])); });
  g.model = LieAlgebroidModel(shape, rho, C);
  g.conn = trivial_connection(shape);
  LieAlgebraData alg(3);
  alg.set_f(2, 0, 1, 1.0);
  alg.set_f(0, 1, 2, 1.0);
  alg.set_f(1, 2, 0, 1.0);
  g.algebra = alg;
  g.checks = {"lie_algebroid", "e_d_nilpotency", "q_squared", "jstar"};
  for (const auto& c : g.checks) g.expected[c] = true;
  return g;
}

GalleryInstance abelian_translation() {
  GalleryInstance g;
  g.name = "abelian_translation";
  Patch patch = make_box_patch({"x", "y"});
  BundleShape shape{patch, 1};
  Expr y = patch.coordinate(1);
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  rho.at({0}, {}, {}, {0}) = Expr::number(1.0);
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  g.model = LieAlgebroidModel(shape, rho, C);
  g.conn = trivial_connection(shape);
  MixedField omega(shape, BlockSig{0, 2, 0, 0});
  omega.at({}, {0, 1}, {}, {}) = Expr::number(1.0);
  g.plectic = PrePlecticForm{1, omega};
  MomentumData mu;
  MixedField mu0(shape, BlockSig{0, 0, 0, 1});
  mu0.at({}, {}, {}, {0}) = -y;  // d mu_0 = -iota_rho omega = -dy
  mu.mu.push_back(mu0);
  g.mu = mu;
  g.checks = {"lie_algebroid", "hms", "equivariance", "weak_hms"};
  for (const auto& c : g.checks) g.expected[c] = true;
  return g;
}

GalleryInstance poisson_const() {
  GalleryInstance g;
  g.name = "poisson_const";
  Patch patch = make_box_patch({"x", "y"});
  BundleShape tm_shape{patch, 2};
  MixedField pi(tm_shape, BlockSig{2, 0, 0, 0});
  pi.at({0, 1}, {}, {}, {}) = Expr::number(1.0);
  g.model = make_poisson_algebroid(pi, default_pts(patch), kCtorTol);
  g.conn = trivial_connection(g.model.shape);
  g.checks = {"lie_algebroid", "e_d_nilpotency", "q_squared"};
  for (const auto& c : g.checks) g.expected[c] = true;
  return g;
}

GalleryInstance twisted_poisson_demo() {
  GalleryInstance g;
  g.name = "twisted_poisson_demo";
  Patch patch = make_box_patch({"x", "y", "z", "w"});
  BundleShape tm_shape{patch, 4};
  Expr y = patch.coordinate(1);
  MixedField pi(tm_shape, BlockSig{2, 0, 0, 0});
  pi.at({0, 1}, {}, {}, {}) = Expr::number(1.0);
  pi.at({2, 3}, {}, {}, {}) = Expr::number(1.0) / (Expr::number(1.0) + y * y);
  MixedField H(tm_shape, BlockSig{0, 3, 0, 0});
  H.at({}, {1, 2, 3}, {}, {}) = Expr::number(2.0) * y;
  TwistedPoissonDemo demo =
      make_twisted_poisson(pi, H, default_pts(patch), kCtorTol);
  g.model = demo.model;
  g.conn = demo.conn;
  g.plectic = demo.plectic;
  g.mu = demo.mu;
  g.checks = {"lie_algebroid", "hms_fragment", "q_squared"};
  for (const auto& c : g.checks) g.expected[c] = true;
  return g;
}

GalleryInstance r_poisson_demo() {
  GalleryInstance g;
  g.name = "r_poisson_demo";
  Patch patch = make_box_patch({"x", "y", "z", "w"});
  BundleShape tm_shape{patch, 4};
  Expr y = patch.coordinate(1);
  MixedField pi(tm_shape, BlockSig{2, 0, 0, 0});
  pi.at({0, 1}, {}, {}, {}) = Expr::number(1.0);
  pi.at({2, 3}, {}, {}, {}) = Expr::number(1.0);
  MixedField J(tm_shape, BlockSig{2, 0, 0, 0});
  J.at({2, 3}, {}, {}, {}) = y;
  MixedField H(tm_shape, BlockSig{0, 3, 0, 0});
  H.at({}, {1, 2, 3}, {}, {}) = Expr::number(1.0);
  RPoissonDemo demo =
      make_twisted_r_poisson(pi, J, H, 2, default_pts(patch), kCtorTol);
  g.model = demo.model;
  g.conn = demo.conn;
  g.plectic = demo.plectic;
  g.mu = demo.mu;
  g.checks = {"lie_algebroid", "hms_fragment"};
  for (const auto& c : g.checks) g.expected[c] = true;
  return g;
}

GalleryInstance multisymplectic_translation() {
  GalleryInstance g;
  g.name = "multisymplectic_translation";
  Patch patch = make_box_patch({"x", "y", "z"});
  BundleShape shape{patch, 1};
  Expr x = patch.coordinate(0);
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  rho.at({2}, {}, {}, {0}) = Expr::number(1.0);  // rho = d/dz
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  g.model = LieAlgebroidModel(shape, rho, C);
  g.conn = trivial_connection(shape);
  MixedField omega(shape, BlockSig{0, 3, 0, 0});
  omega.at({}, {0, 1, 2}, {}, {}) = Expr::number(1.0);
  g.plectic = PrePlecticForm{2, omega};
  MomentumData mu;
  MixedField mu0(shape, BlockSig{0, 0, 0, 2});  // structurally zero, r = 1
  MixedField mu1(shape, BlockSig{0, 1, 0, 1});
  mu1.at({}, {1}, {}, {0}) = -x;  // mu_1 = -x dy, d mu_1 = -iota_rho omega
  mu.mu.push_back(mu0);
  mu.mu.push_back(mu1);
  g.mu = mu;

  SigmaTargetData sd;
  sd.n = 2;
  sd.g = MetricField(shape);
  for (int i = 0; i < 3; ++i) sd.g.at(i, i) = Expr::number(1.0);
  sd.H = omega;                        // omega = (-1)^n H with n = 2
  sd.tmu.push_back(-mu0);              // eps_0 = -1
  sd.tmu.push_back(mu1);               // eps_1 = +1
  g.sigma = sd;

  g.checks = {"lie_algebroid", "hms", "equivariance", "homotopy_hamiltonian",
              "weak_hms"};
  for (const auto& c : g.checks) g.expected[c] = true;
  g.expected["sigma_gnlsm"] = true;
  g.expected["sigma_isometry"] = true;
  g.expected["sigma_contraction"] = true;
  g.expected["theorem61"] = true;
  return g;
}

}  // namespace

GalleryInstance make_symplectic_momentum_example() { return so2_symplectic(); }
GalleryInstance make_multisymplectic_momentum_example() {
  return multisymplectic_translation();
}

std::vector<std::string> gallery_names() {
  return {"so2_symplectic",       "so3_r3",
          "abelian_translation",  "poisson_const",
          "twisted_poisson_demo", "r_poisson_demo",
          "multisymplectic_translation"};
}

GalleryInstance make_gallery(const std::string& name) {
  if (name == "so2_symplectic") return so2_symplectic();
  if (name == "so3_r3") return so3_r3();
  if (name == "abelian_translation") return abelian_translation();
  if (name == "poisson_const") return poisson_const();
  if (name == "twisted_poisson_demo") return twisted_poisson_demo();
  if (name == "r_poisson_demo") return r_poisson_demo();
  if (name == "multisymplectic_translation") return multisymplectic_translation();
  throw GalleryError("unknown gallery model '" + name + "'");
}

}  // namespace momsec
