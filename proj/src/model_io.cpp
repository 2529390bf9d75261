#include "momsec/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace momsec {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ModelError(path + ": " + msg, path);
}

const ordered_json& need(const ordered_json& j, const std::string& key,
                         const std::string& path) {
  if (!j.contains(key)) fail(path + "/" + key, "missing required field");
  return j.at(key);
}

Expr parse_component(const std::string& src, const Patch& patch,
                     const std::string& path) {
  try {
    return parse(src, patch.coords);
  } catch (const ParseError& e) {
    fail(path, std::string("expression error: ") + e.what());
  }
}

std::vector<int> read_index(const ordered_json& j, int bound, std::size_t len,
                            const std::string& path) {
  if (!j.is_array() || j.size() != len)
    fail(path, "expected a multi-index of length " + std::to_string(len) +
                   ", found " + std::to_string(j.is_array() ? j.size() : 0));
  std::vector<int> idx;
  for (const auto& v : j) {
    int k = v.get<int>();
    if (k < 0 || k >= bound) fail(path, "index out of range");
    idx.push_back(k);
  }
  return idx;
}

MixedField read_field(const ordered_json& comps, const BundleShape& shape,
                      BlockSig sig, const std::string& path) {
  MixedField f(shape, sig);
  if (!comps.is_array()) fail(path, "expected an array of components");
  for (std::size_t t = 0; t < comps.size(); ++t) {
    const auto& c = comps[t];
    std::string cpath = path + "/" + std::to_string(t);
    auto tm = read_index(need(c, "tm", cpath), shape.patch.dim,
                         static_cast<std::size_t>(sig.tm_down), cpath + "/tm");
    auto ed = read_index(need(c, "e", cpath), shape.rank,
                         static_cast<std::size_t>(sig.e_down), cpath + "/e");
    int sgn = 1;
    int s1 = multiidx::sort_sign(tm), s2 = multiidx::sort_sign(ed);
    if (s1 == 0 || s2 == 0) fail(cpath, "repeated index in multi-index");
    sgn = s1 * s2;
    Expr e = parse_component(need(c, "expr", cpath).get<std::string>(),
                             shape.patch, cpath + "/expr");
    if (f.structurally_zero()) fail(cpath, "component on a zero-degree block");
    f.at({}, tm, {}, ed) = (sgn == 1) ? e : -e;
  }
  return f;
}

ordered_json dump_field(const MixedField& f) {
  ordered_json arr = ordered_json::array();
  f.for_each([&](const auto&, const auto& tm, const auto&, const auto& ed,
                 const Expr& e) {
    if (e.is_zero()) return;
    ordered_json c;
    c["tm"] = tm;
    c["e"] = ed;
    c["expr"] = e.print();
    arr.push_back(std::move(c));
  });
  return arr;
}

}  // namespace

ModelDocument load_model_text(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what(), "/");
  }

  ModelDocument doc;
  const auto& jp = need(j, "patch", "");
  Patch patch;
  patch.dim = need(jp, "dim", "/patch").get<int>();
  if (patch.dim < 1) fail("/patch/dim", "dimension must be positive");
  for (const auto& c : need(jp, "coords", "/patch"))
    patch.coords.push_back(c.get<std::string>());
  if (static_cast<int>(patch.coords.size()) != patch.dim)
    fail("/patch/coords", "expected " + std::to_string(patch.dim) + " names");
  for (std::size_t i = 0; i < patch.coords.size(); ++i)
    for (std::size_t k = i + 1; k < patch.coords.size(); ++k)
      if (patch.coords[i] == patch.coords[k])
        fail("/patch/coords", "coordinate names must be distinct");
  const auto& jbox = need(jp, "box", "/patch");
  if (!jbox.is_array() || static_cast<int>(jbox.size()) != patch.dim)
    fail("/patch/box", "expected one interval per coordinate");
  for (const auto& iv : jbox) {
    if (!iv.is_array() || iv.size() != 2) fail("/patch/box", "bad interval");
    patch.box.push_back({iv[0].get<double>(), iv[1].get<double>()});
    if (!(patch.box.back()[0] <= patch.box.back()[1]))
      fail("/patch/box", "empty interval");
  }

  int rank = need(need(j, "bundle", ""), "rank", "/bundle").get<int>();
  if (rank < 1) fail("/bundle/rank", "rank must be positive");
  BundleShape shape{patch, rank};

  const auto& ja = need(j, "algebroid", "");
  const auto& jrho = need(ja, "rho", "/algebroid");
  if (!jrho.is_array() || static_cast<int>(jrho.size()) != patch.dim)
    fail("/algebroid/rho", "expected dim rows, found " +
                               std::to_string(jrho.size()));
  MixedField rho(shape, BlockSig{1, 0, 0, 1});
  for (int i = 0; i < patch.dim; ++i) {
    if (!jrho[i].is_array() || static_cast<int>(jrho[i].size()) != rank)
      fail("/algebroid/rho/" + std::to_string(i),
           "expected rank entries, found " + std::to_string(jrho[i].size()));
    for (int a = 0; a < rank; ++a)
      rho.at({i}, {}, {}, {a}) = parse_component(
          jrho[i][a].get<std::string>(), patch,
          "/algebroid/rho/" + std::to_string(i) + "/" + std::to_string(a));
  }
  MixedField C(shape, BlockSig{0, 0, 1, 2});
  if (ja.contains("C")) {
    for (std::size_t t = 0; t < ja["C"].size(); ++t) {
      const auto& e = ja["C"][t];
      std::string p = "/algebroid/C/" + std::to_string(t);
      int c = need(e, "c", p).get<int>(), a = need(e, "a", p).get<int>(),
          b = need(e, "b", p).get<int>();
      if (c < 0 || c >= rank || a < 0 || a >= rank || b < 0 || b >= rank)
        fail(p, "fiber index out of range");
      if (a == b) fail(p, "structure functions are antisymmetric, a != b");
      Expr ex = parse_component(need(e, "expr", p).get<std::string>(), patch,
                                p + "/expr");
      if (C.structurally_zero()) fail(p, "rank < 2 admits no structure functions");
      std::vector<int> ab{a, b};
      int s = multiidx::sort_sign(ab);
      C.at({}, {}, {c}, ab) = (s == 1) ? ex : -ex;
    }
  }
  doc.model = LieAlgebroidModel(shape, std::move(rho), std::move(C));

  doc.conn = trivial_connection(shape);
  if (j.contains("connection") && j["connection"].contains("omega")) {
    const auto& jo = j["connection"]["omega"];
    for (std::size_t t = 0; t < jo.size(); ++t) {
      const auto& e = jo[t];
      std::string p = "/connection/omega/" + std::to_string(t);
      int b = need(e, "b", p).get<int>(), a = need(e, "a", p).get<int>(),
          i = need(e, "i", p).get<int>();
      if (b < 0 || b >= rank || a < 0 || a >= rank || i < 0 || i >= patch.dim)
        fail(p, "index out of range");
      doc.conn.omega.at({}, {i}, {b}, {a}) = parse_component(
          need(e, "expr", p).get<std::string>(), patch, p + "/expr");
    }
  }

  if (j.contains("lie_algebra")) {
    const auto& jl = j["lie_algebra"];
    LieAlgebraData alg(rank);
    for (std::size_t t = 0; t < need(jl, "f", "/lie_algebra").size(); ++t) {
      const auto& e = jl["f"][t];
      std::string p = "/lie_algebra/f/" + std::to_string(t);
      int c = need(e, "c", p).get<int>(), a = need(e, "a", p).get<int>(),
          b = need(e, "b", p).get<int>();
      if (c < 0 || c >= rank || a < 0 || a >= rank || b < 0 || b >= rank)
        fail(p, "fiber index out of range");
      alg.set_f(c, a, b, need(e, "value", p).get<double>());
    }
    doc.algebra = alg;
  }

  if (j.contains("plectic")) {
    const auto& jpl = j["plectic"];
    int n = need(jpl, "n", "/plectic").get<int>();
    if (n < 1) fail("/plectic/n", "n must be positive");
    PrePlecticForm P;
    P.n = n;
    P.omega = read_field(need(jpl, "omega", "/plectic"), shape,
                         BlockSig{0, n + 1, 0, 0}, "/plectic/omega");
    doc.plectic = std::move(P);
  }

  if (j.contains("momentum")) {
    if (!doc.plectic) fail("/momentum", "momentum data requires a plectic section");
    int n = doc.plectic->n;
    const auto& jmu = need(j["momentum"], "mu", "/momentum");
    MomentumData mu = zero_momentum(shape, n);
    for (std::size_t t = 0; t < jmu.size(); ++t) {
      std::string p = "/momentum/mu/" + std::to_string(t);
      int k = need(jmu[t], "k", p).get<int>();
      if (k < 0 || k >= n) fail(p + "/k", "k out of range 0..n-1");
      mu.mu[k] = read_field(need(jmu[t], "components", p), shape,
                            BlockSig{0, k, 0, n - k}, p + "/components");
    }
    doc.mu = std::move(mu);
  }

  if (j.contains("sigma")) {
    const auto& js = j["sigma"];
    SigmaTargetData sd;
    sd.n = need(js, "n", "/sigma").get<int>();
    if (sd.n < 1) fail("/sigma/n", "n must be positive");
    sd.g = MetricField(shape);
    for (std::size_t t = 0; t < need(js, "g", "/sigma").size(); ++t) {
      const auto& e = js["g"][t];
      std::string p = "/sigma/g/" + std::to_string(t);
      int i = need(e, "i", p).get<int>(), k = need(e, "j", p).get<int>();
      if (i < 0 || i >= patch.dim || k < 0 || k >= patch.dim)
        fail(p, "index out of range");
      Expr ex = parse_component(need(e, "expr", p).get<std::string>(), patch,
                                p + "/expr");
      sd.g.at(i, k) = ex;
      sd.g.at(k, i) = ex;
    }
    sd.H = read_field(need(js, "H", "/sigma"), shape,
                      BlockSig{0, sd.n + 1, 0, 0}, "/sigma/H");
    for (int k = 0; k < sd.n; ++k)
      sd.tmu.emplace_back(shape, BlockSig{0, k, 0, sd.n - k});
    if (js.contains("tmu")) {
      for (std::size_t t = 0; t < js["tmu"].size(); ++t) {
        std::string p = "/sigma/tmu/" + std::to_string(t);
        int k = need(js["tmu"][t], "k", p).get<int>();
        if (k < 0 || k >= sd.n) fail(p + "/k", "k out of range 0..n-1");
        sd.tmu[k] = read_field(need(js["tmu"][t], "components", p), shape,
                               BlockSig{0, k, 0, sd.n - k}, p + "/components");
      }
    }
    doc.sigma = std::move(sd);
  }

  if (j.contains("checks"))
    for (const auto& c : j["checks"]) doc.checks.push_back(c.get<std::string>());
  if (j.contains("tolerance")) doc.config.tolerance = j["tolerance"].get<double>();
  if (j.contains("sample_points"))
    doc.config.sample_points = j["sample_points"].get<int>();
  if (j.contains("seed")) doc.config.seed = j["seed"].get<std::uint64_t>();
  return doc;
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'", "/");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model_text(ss.str());
}

std::string to_model_json(const GalleryInstance& g, const RunConfig& cfg) {
  const Patch& patch = g.model.shape.patch;
  int d = patch.dim, r = g.model.shape.rank;
  ordered_json j;
  j["patch"]["dim"] = d;
  j["patch"]["coords"] = patch.coords;
  ordered_json box = ordered_json::array();
  for (const auto& iv : patch.box) box.push_back({iv[0], iv[1]});
  j["patch"]["box"] = std::move(box);
  j["bundle"]["rank"] = r;

  ordered_json rho = ordered_json::array();
  for (int i = 0; i < d; ++i) {
    ordered_json row = ordered_json::array();
    for (int a = 0; a < r; ++a) row.push_back(g.model.rho_comp(i, a).print());
    rho.push_back(std::move(row));
  }
  j["algebroid"]["rho"] = std::move(rho);
  ordered_json cj = ordered_json::array();
  g.model.C.for_each([&](const auto&, const auto&, const auto& cu,
                         const auto& ab, const Expr& e) {
    if (e.is_zero()) return;
    ordered_json entry;
    entry["c"] = cu[0];
    entry["a"] = ab[0];
    entry["b"] = ab[1];
    entry["expr"] = e.print();
    cj.push_back(std::move(entry));
  });
  j["algebroid"]["C"] = std::move(cj);

  if (!g.conn.is_zero()) {
    ordered_json oj = ordered_json::array();
    g.conn.omega.for_each([&](const auto&, const auto& iv, const auto& bu,
                              const auto& ad, const Expr& e) {
      if (e.is_zero()) return;
      ordered_json entry;
      entry["b"] = bu[0];
      entry["a"] = ad[0];
      entry["i"] = iv[0];
      entry["expr"] = e.print();
      oj.push_back(std::move(entry));
    });
    j["connection"]["omega"] = std::move(oj);
  }

  if (g.algebra) {
    ordered_json fj = ordered_json::array();
    for (int c = 0; c < r; ++c)
      for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
          if (g.algebra->f_at(c, a, b) != 0.0) {
            ordered_json entry;
            entry["c"] = c;
            entry["a"] = a;
            entry["b"] = b;
            entry["value"] = g.algebra->f_at(c, a, b);
            fj.push_back(std::move(entry));
          }
    j["lie_algebra"]["f"] = std::move(fj);
  }

  if (g.plectic) {
    j["plectic"]["n"] = g.plectic->n;
    j["plectic"]["omega"] = dump_field(g.plectic->omega);
  }
  if (g.mu) {
    ordered_json arr = ordered_json::array();
    for (std::size_t k = 0; k < g.mu->mu.size(); ++k) {
      ordered_json entry;
      entry["k"] = k;
      entry["components"] = dump_field(g.mu->mu[k]);
      arr.push_back(std::move(entry));
    }
    j["momentum"]["mu"] = std::move(arr);
  }
  if (g.sigma) {
    j["sigma"]["n"] = g.sigma->n;
    ordered_json gj = ordered_json::array();
    for (int i = 0; i < d; ++i)
      for (int k = i; k < d; ++k)
        if (!g.sigma->g.at(i, k).is_zero()) {
          ordered_json entry;
          entry["i"] = i;
          entry["j"] = k;
          entry["expr"] = g.sigma->g.at(i, k).print();
          gj.push_back(std::move(entry));
        }
    j["sigma"]["g"] = std::move(gj);
    j["sigma"]["H"] = dump_field(g.sigma->H);
    ordered_json arr = ordered_json::array();
    for (std::size_t k = 0; k < g.sigma->tmu.size(); ++k) {
      ordered_json entry;
      entry["k"] = k;
      entry["components"] = dump_field(g.sigma->tmu[k]);
      arr.push_back(std::move(entry));
    }
    j["sigma"]["tmu"] = std::move(arr);
  }

  j["checks"] = g.checks;
  j["tolerance"] = cfg.tolerance;
  j["sample_points"] = cfg.sample_points;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

ModelDocument document_of(const GalleryInstance& g, const RunConfig& cfg) {
  return load_model_text(to_model_json(g, cfg));
}

}  // namespace momsec
