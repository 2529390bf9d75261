#include "momsec/checks.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "momsec/sign_ledger.hpp"
#include "momsec/supergeo.hpp"

namespace momsec {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Ctx {
  const ModelDocument& doc;
  std::vector<std::vector<double>> pts;
  double tol;
};

[[noreturn]] void missing(const std::string& check, const std::string& section) {
  throw ModelError("check '" + check + "' requires the '" + section +
                       "' section",
                   "/" + section);
}

CheckResult from_stat(const std::string& name, const ResidualStat& s,
                      double tol) {
  CheckResult r;
  r.name = name;
  r.max_residual = s.abs;
  r.rel_residual = s.rel();
  r.argmax = s.argmax_point;
  r.tolerance = tol;
  r.pass = s.pass(tol);
  return r;
}

// deterministic pseudo-random polynomial of degree two in the coordinates
Expr random_poly(const Patch& patch, SplitMix64& rng) {
  auto coef = [&] { return Expr::number(2.0 * rng.uniform01() - 1.0); };
  Expr e = coef();
  for (int i = 0; i < patch.dim; ++i) {
    e = e + coef() * patch.coordinate(i);
    for (int j = i; j < patch.dim; ++j)
      e = e + coef() * patch.coordinate(i) * patch.coordinate(j);
  }
  return e;
}

MixedField random_field(const BundleShape& shape, BlockSig sig,
                        SplitMix64& rng) {
  MixedField f(shape, sig);
  f.for_each_mut([&](const auto&, const auto&, const auto&, const auto&,
                     Expr& e) { e = random_poly(shape.patch, rng); });
  return f;
}

ConnectionData random_connection(const BundleShape& shape, SplitMix64& rng) {
  ConnectionData conn(MixedField(shape, BlockSig{0, 1, 1, 1}));
  conn.omega.for_each_mut([&](const auto&, const auto&, const auto&,
                              const auto&, Expr& e) {
    e = Expr::number(0.3) * random_poly(shape.patch, rng);
  });
  return conn;
}

CheckResult check_lie_algebroid_doc(const Ctx& c) {
  AlgebroidCheck ac = check_lie_algebroid(c.doc.model, c.pts);
  ResidualStat worst = ac.identity1.rel() >= ac.identity2.rel() ? ac.identity1
                                                                : ac.identity2;
  CheckResult r = from_stat("lie_algebroid", worst, c.tol);
  r.pass = ac.pass(c.tol);
  r.info = {{"identity1_abs", ac.identity1.abs},
            {"identity2_abs", ac.identity2.abs}};
  return r;
}

CheckResult check_plectic_closed(const Ctx& c) {
  if (!c.doc.plectic) missing("plectic_closed", "plectic");
  return from_stat("plectic_closed", closedness_residual(*c.doc.plectic, c.pts),
                   c.tol);
}

CheckResult check_ed_nilpotency(const Ctx& c) {
  const auto& L = c.doc.model;
  SplitMix64 rng(c.doc.config.seed ^ 0x9D2C5680ULL);
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  int d = L.shape.patch.dim, r = L.shape.rank;
  // the Lie-derivative extension is a differential on Gamma(wedge E*) always,
  // and on form-valued sections exactly when the structure functions are
  // constant (otherwise dC wedges in); test the admissible degrees
  bool c_const = true;
  L.C.for_each([&](const auto&, const auto&, const auto&, const auto&,
                   const Expr& e) { c_const = c_const && e.is_constant(); });
  int kmax = c_const ? std::min(2, d) : 0;
  for (int m = 0; m <= r; ++m)
    for (int k = 0; k <= kmax; ++k) {
      MixedField alpha = random_field(L.shape, BlockSig{0, k, 0, m}, rng);
      MixedField once = e_differential(L, alpha);
      MixedField twice = e_differential(L, once);
      auto fs = max_abs(twice, c.pts);
      if (fs.max_abs > worst.abs) {
        worst.abs = fs.max_abs;
        worst.argmax_point = fs.argmax_point;
      }
      worst.scale = std::max({worst.scale, max_abs(once, c.pts).max_abs,
                              max_abs(alpha, c.pts).max_abs});
    }
  return from_stat("e_d_nilpotency", worst, c.tol);
}

CheckResult check_hms(const Ctx& c) {
  if (!c.doc.plectic) missing("hms", "plectic");
  if (!c.doc.mu) missing("hms", "momentum");
  HmsReport rep = hms_residuals(c.doc.model, c.doc.conn, *c.doc.plectic,
                                *c.doc.mu, c.pts, c.tol);
  ResidualStat worst;
  for (const auto& line : rep.lines)
    if (line.stat.rel() >= worst.rel()) worst = line.stat;
  CheckResult r = from_stat("hms", worst, c.tol);
  r.pass = rep.pass;
  for (const auto& line : rep.lines)
    r.info.emplace_back("residual_k" + std::to_string(line.k), line.stat.abs);
  r.info.emplace_back("nabla_sq", rep.nabla_sq_norm);
  r.info.emplace_back("total_sq", rep.total_sq_norm);
  return r;
}

CheckResult check_hms_fragment(const Ctx& c) {
  if (!c.doc.plectic) missing("hms_fragment", "plectic");
  if (!c.doc.mu) missing("hms_fragment", "momentum");
  const auto& L = c.doc.model;
  int n = c.doc.plectic->n;
  MixedField ed = e_differential(L, c.doc.mu->mu[0]);
  MixedField iota = iota_rho_k(L, *c.doc.plectic, n + 1);
  ResidualStat stat;
  auto fs = max_abs(ed + iota, c.pts);
  stat.abs = fs.max_abs;
  stat.argmax_point = fs.argmax_point;
  stat.scale = std::max(max_abs(ed, c.pts).max_abs, max_abs(iota, c.pts).max_abs);
  return from_stat("hms_fragment", stat, c.tol);
}

CheckResult check_hamiltonian(const Ctx& c) {
  if (!c.doc.plectic) missing("homotopy_hamiltonian", "plectic");
  if (!c.doc.mu) missing("homotopy_hamiltonian", "momentum");
  HamiltonianReport rep = homotopy_hamiltonian_check(
      c.doc.model, c.doc.conn, *c.doc.plectic, *c.doc.mu, c.pts, c.tol);
  CheckResult r = from_stat("homotopy_hamiltonian", rep.nabla_iota, c.tol);
  r.pass = rep.pass;
  r.info.emplace_back("nabla_iota_abs", rep.nabla_iota.abs);
  return r;
}

CheckResult check_equivariance(const Ctx& c) {
  if (!c.doc.mu) missing("equivariance", "momentum");
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  for (const auto& mk : c.doc.mu->mu) {
    if (mk.structurally_zero()) continue;
    ResidualStat s = equivariance_residual(c.doc.model, c.doc.conn, mk, c.pts);
    if (s.rel() >= worst.rel()) worst = s;
  }
  return from_stat("equivariance", worst, c.tol);
}

CheckResult check_weak_hms(const Ctx& c) {
  if (!c.doc.plectic) missing("weak_hms", "plectic");
  if (!c.doc.mu) missing("weak_hms", "momentum");
  int n = c.doc.plectic->n;
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  int kernel_elems = 0;
  for (int k = 1; k <= n; ++k) {
    auto basis = lie_kernel_basis_constant(c.doc.model, c.doc.conn, n + 1 - k);
    for (const auto& w : basis) {
      auto res = weak_hms_residual(c.doc.model, c.doc.conn, *c.doc.plectic,
                                   *c.doc.mu, w, k, c.pts, c.tol);
      ++kernel_elems;
      if (res.stat.rel() >= worst.rel()) worst = res.stat;
    }
  }
  CheckResult r = from_stat("weak_hms", worst, c.tol);
  r.info.emplace_back("kernel_elements", kernel_elems);
  return r;
}

CheckResult check_hmm(const Ctx& c) {
  if (!c.doc.algebra) missing("hmm", "lie_algebra");
  if (!c.doc.plectic) missing("hmm", "plectic");
  if (!c.doc.mu) missing("hmm", "momentum");
  ActionAlgebroidModel A{*c.doc.algebra, c.doc.model,
                         trivial_connection(c.doc.model.shape)};
  MomentumData hmu = hms_to_hmm(*c.doc.mu, c.doc.plectic->n);
  HmsReport rep = hmm_residuals(A, *c.doc.plectic, hmu, c.pts, c.tol);
  ResidualStat worst;
  for (const auto& line : rep.lines)
    if (line.stat.rel() >= worst.rel()) worst = line.stat;
  CheckResult r = from_stat("hmm", worst, c.tol);
  r.pass = rep.pass;
  r.info.emplace_back("jacobi_residual", c.doc.algebra->jacobi_residual());
  return r;
}

CheckResult check_adce_split(const Ctx& c) {
  if (!c.doc.algebra) missing("adce_split", "lie_algebra");
  ActionAlgebroidModel A{*c.doc.algebra, c.doc.model,
                         trivial_connection(c.doc.model.shape)};
  SplitMix64 rng(c.doc.config.seed ^ 0x7F4A7C15ULL);
  int r = c.doc.model.shape.rank;
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  for (int m = 0; m < r; ++m) {
    MixedField alpha = random_field(c.doc.model.shape, BlockSig{0, 0, 0, m}, rng);
    MixedField lhs = e_differential(c.doc.model, alpha);
    MixedField rhs = ad_star_rho(A, alpha) + d_CE(A.algebra, alpha);
    auto fs = max_abs(lhs - rhs, c.pts);
    if (fs.max_abs > worst.abs) {
      worst.abs = fs.max_abs;
      worst.argmax_point = fs.argmax_point;
    }
    worst.scale = std::max(worst.scale, max_abs(lhs, c.pts).max_abs);
  }
  return from_stat("adce_split", worst, c.tol);
}

CheckResult check_q_squared(const Ctx& c) {
  return from_stat("q_squared", q_squared_residual(c.doc.model, c.pts), c.tol);
}

CheckResult check_jstar(const Ctx& c) {
  SplitMix64 rng(c.doc.config.seed ^ 0x133111EBULL);
  int r = c.doc.model.shape.rank;
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  for (int m = 0; m <= std::min(3, r); ++m) {
    MixedField alpha = random_field(c.doc.model.shape, BlockSig{0, 0, 0, m}, rng);
    ResidualStat s = j_star_correspondence(c.doc.model, alpha, c.pts);
    if (s.rel() >= worst.rel()) worst = s;
  }
  return from_stat("jstar", worst, c.tol);
}

CheckResult check_derived_bracket(const Ctx& c) {
  const auto& L = c.doc.model;
  int r = L.shape.rank;
  SplitMix64 rng(c.doc.config.seed ^ 0x1CE4E5B9ULL);
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  ConnectionData flat = trivial_connection(L.shape);
  auto compare = [&](const std::vector<ESection>& secs) {
    ESection lhs = derived_bracket_homology(L, secs);
    ESection w = secs.front();
    for (std::size_t t = 1; t < secs.size(); ++t) w = wedge(w, secs[t]);
    ESection rhs = homology_boundary(L, flat, w);
    auto fs = max_abs(lhs - rhs, c.pts);
    if (fs.max_abs > worst.abs) {
      worst.abs = fs.max_abs;
      worst.argmax_point = fs.argmax_point;
    }
    worst.scale = std::max({worst.scale, max_abs(lhs, c.pts).max_abs,
                            max_abs(rhs, c.pts).max_abs});
  };
  auto frame = [&](int a) {
    ESection e = make_esection(L.shape, 1);
    e.at({}, {}, {a}, {}) = Expr::number(1.0);
    return e;
  };
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) compare({frame(a), frame(b)});
  if (r >= 2) {
    // the graded formula computes the bracket of the actual sections, so it
    // matches the homology operator on constant-coefficient decomposables
    ESection u = make_esection(L.shape, 1);
    for (int a = 0; a < r; ++a)
      u.at({}, {}, {a}, {}) = Expr::number(2.0 * rng.uniform01() - 1.0);
    compare({u, frame(r - 1)});
  }
  if (r >= 3) compare({frame(0), frame(1), frame(2)});
  return from_stat("derived_bracket", worst, c.tol);
}

CheckResult check_covariant_q(const Ctx& c) {
  return from_stat("covariant_q",
                   covariant_Q_check(c.doc.model, c.doc.conn, c.pts), c.tol);
}

CheckResult check_lemma_covariant_ed(const Ctx& c) {
  const auto& L = c.doc.model;
  SplitMix64 rng(c.doc.config.seed ^ 0x85EBCA6BULL);
  ConnectionData rnd = random_connection(L.shape, rng);
  ResidualStat worst;
  if (!c.pts.empty()) worst.argmax_point = c.pts.front();
  for (const ConnectionData* conn :
       std::initializer_list<const ConnectionData*>{&c.doc.conn, &rnd}) {
    for (int m = 0; m <= std::min(2, L.shape.rank); ++m) {
      MixedField alpha = random_field(L.shape, BlockSig{0, 0, 0, m}, rng);
      MixedField lhs = covariant_e_differential(L, *conn, alpha);
      MixedField rhs = e_differential(L, alpha);
      auto fs = max_abs(lhs - rhs, c.pts);
      if (fs.max_abs > worst.abs) {
        worst.abs = fs.max_abs;
        worst.argmax_point = fs.argmax_point;
      }
      worst.scale = std::max(worst.scale, max_abs(rhs, c.pts).max_abs);
    }
  }
  return from_stat("lemma_covariant_ed", worst, c.tol);
}

CheckResult check_curvature_consistency(const Ctx& c) {
  CurvatureReport rep = curvatures(c.doc.model, c.doc.conn);
  ResidualStat stat;
  auto fs = max_abs(rep.S - rep.S_lie_route, c.pts);
  stat.abs = fs.max_abs;
  stat.argmax_point = fs.argmax_point;
  stat.scale = std::max(max_abs(rep.S, c.pts).max_abs,
                        max_abs(rep.S_lie_route, c.pts).max_abs);
  return from_stat("curvature_consistency", stat, c.tol);
}

CheckResult check_sigma_isometry(const Ctx& c) {
  if (!c.doc.sigma) missing("sigma_isometry", "sigma");
  return from_stat(
      "sigma_isometry",
      isometry_residual(c.doc.model, c.doc.conn, c.doc.sigma->g, c.pts), c.tol);
}

CheckResult check_sigma_gnlsm(const Ctx& c) {
  if (!c.doc.sigma) missing("sigma_gnlsm", "sigma");
  HmsReport rep =
      gnlsm_residuals(c.doc.model, c.doc.conn, *c.doc.sigma, c.pts, c.tol);
  ResidualStat worst;
  for (const auto& line : rep.lines)
    if (line.stat.rel() >= worst.rel()) worst = line.stat;
  CheckResult r = from_stat("sigma_gnlsm", worst, c.tol);
  r.pass = rep.pass;
  for (const auto& line : rep.lines)
    r.info.emplace_back("residual_k" + std::to_string(line.k), line.stat.abs);
  return r;
}

CheckResult check_sigma_contraction(const Ctx& c) {
  if (!c.doc.sigma) missing("sigma_contraction", "sigma");
  return from_stat(
      "sigma_contraction",
      contraction_condition_residual(c.doc.model, *c.doc.sigma, c.pts), c.tol);
}

CheckResult check_theorem61(const Ctx& c) {
  if (!c.doc.sigma) missing("theorem61", "sigma");
  Theorem61Report rep =
      theorem61_roundtrip(c.doc.model, c.doc.conn, *c.doc.sigma, c.pts, c.tol);
  CheckResult r;
  r.name = "theorem61";
  r.tolerance = c.tol;
  r.pass = rep.equivalent;
  r.info = {{"gnlsm_pass", rep.gnlsm_pass ? 1.0 : 0.0},
            {"contraction_pass", rep.contraction_pass ? 1.0 : 0.0},
            {"hms_pass", rep.hms_pass ? 1.0 : 0.0},
            {"algecond_pass", rep.algecond_pass ? 1.0 : 0.0}};
  return r;
}

using CheckFn = std::function<CheckResult(const Ctx&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> reg = {
      {"lie_algebroid", check_lie_algebroid_doc},
      {"plectic_closed", check_plectic_closed},
      {"e_d_nilpotency", check_ed_nilpotency},
      {"hms", check_hms},
      {"hms_fragment", check_hms_fragment},
      {"homotopy_hamiltonian", check_hamiltonian},
      {"equivariance", check_equivariance},
      {"weak_hms", check_weak_hms},
      {"hmm", check_hmm},
      {"adce_split", check_adce_split},
      {"q_squared", check_q_squared},
      {"jstar", check_jstar},
      {"derived_bracket", check_derived_bracket},
      {"covariant_q", check_covariant_q},
      {"lemma_covariant_ed", check_lemma_covariant_ed},
      {"curvature_consistency", check_curvature_consistency},
      {"sigma_isometry", check_sigma_isometry},
      {"sigma_gnlsm", check_sigma_gnlsm},
      {"sigma_contraction", check_sigma_contraction},
      {"theorem61", check_theorem61},
  };
  return reg;
}

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> names;
  for (const auto& [n, fn] : registry()) names.push_back(n);
  return names;
}

Report run_checks(const ModelDocument& doc) {
  Ctx ctx{doc,
          sample_points(doc.model.shape.patch, doc.config.sample_points,
                        doc.config.seed),
          doc.config.tolerance};
  Report rep;
  rep.config = doc.config;
  for (const auto& name : doc.checks) {
    const CheckFn* fn = nullptr;
    for (const auto& [n, f] : registry())
      if (n == name) fn = &f;
    if (!fn) throw ModelError("unknown check name '" + name + "'", "/checks");
    CheckResult res = (*fn)(ctx);
    rep.all_pass = rep.all_pass && res.pass;
    rep.results.push_back(std::move(res));
  }
  return rep;
}

std::string report_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  {
    std::ostringstream hx;
    hx << std::hex << sign_ledger_hash();
    j["sign_ledger_hash"] = hx.str();
  }
  j["seed"] = rep.config.seed;
  j["sample_points"] = rep.config.sample_points;
  j["tolerance"] = rep.config.tolerance;
  j["all_pass"] = rep.all_pass;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rep.results) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["max_residual"] = r.max_residual;
    c["rel_residual"] = r.rel_residual;
    c["argmax"] = r.argmax;
    c["tolerance"] = r.tolerance;
    nlohmann::ordered_json info;
    for (const auto& [k, v] : r.info) info[k] = v;
    c["info"] = std::move(info);
    arr.push_back(std::move(c));
  }
  j["checks"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string report_text(const Report& rep) {
  std::ostringstream os;
  for (const auto& r : rep.results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
       << "  max_residual=" << r.max_residual << "  rel=" << r.rel_residual
       << "  tol=" << r.tolerance << "\n";
  }
  os << (rep.all_pass ? "all checks passed" : "some checks FAILED") << "\n";
  return os.str();
}

}  // namespace momsec
