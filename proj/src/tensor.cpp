#include "momsec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace momsec {

namespace multiidx {

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
  return r;
}

const std::vector<std::vector<int>>& combos(int n, int k) {
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<std::vector<int>> all;
  std::vector<int> cur(static_cast<std::size_t>(std::max(k, 0)));
  if (k >= 0 && k <= n) {
    // lexicographic enumeration
    for (int i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
      all.push_back(cur);
      int i = k - 1;
      while (i >= 0 && cur[i] == n - k + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    if (k == 0) all.assign(1, {});
  }
  return cache.emplace(key, std::move(all)).first->second;
}

std::size_t rank(const std::vector<int>& combo, int n) {
  // combinatorial number system, lexicographic order
  std::size_t r = 0;
  int k = static_cast<int>(combo.size());
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < combo[i]; ++v)
      r += binom(n - 1 - v, k - 1 - i);
    prev = combo[i];
  }
  return r;
}

int sort_sign(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && v[j - 1] > v[j]) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] == v[i]) return 0;
  return sign;
}

}  // namespace multiidx

using multiidx::binom;
using multiidx::combos;

MixedField::MixedField(BundleShape shape, BlockSig sig)
    : shape_(std::move(shape)), sig_(sig) {
  int d = shape_.patch.dim, r = shape_.rank;
  structurally_zero_ = sig.tm_up < 0 || sig.tm_up > d || sig.tm_down < 0 ||
                       sig.tm_down > d || sig.e_up < 0 || sig.e_up > r ||
                       sig.e_down < 0 || sig.e_down > r;
  if (!structurally_zero_) {
    std::size_t n = binom(d, sig.tm_up) * binom(d, sig.tm_down) *
                    binom(r, sig.e_up) * binom(r, sig.e_down);
    comps_.assign(n, Expr());
  }
}

std::size_t MixedField::flat_index(const std::vector<int>& tm_up,
                                   const std::vector<int>& tm_down,
                                   const std::vector<int>& e_up,
                                   const std::vector<int>& e_down) const {
  int d = shape_.patch.dim, r = shape_.rank;
  std::size_t idx = multiidx::rank(tm_up, d);
  idx = idx * binom(d, sig_.tm_down) + multiidx::rank(tm_down, d);
  idx = idx * binom(r, sig_.e_up) + multiidx::rank(e_up, r);
  idx = idx * binom(r, sig_.e_down) + multiidx::rank(e_down, r);
  return idx;
}

Expr& MixedField::at(const std::vector<int>& tm_up,
                     const std::vector<int>& tm_down,
                     const std::vector<int>& e_up,
                     const std::vector<int>& e_down) {
  if (structurally_zero_)
    throw std::logic_error("write access to a structurally zero field");
  return comps_[flat_index(tm_up, tm_down, e_up, e_down)];
}

const Expr& MixedField::at(const std::vector<int>& tm_up,
                           const std::vector<int>& tm_down,
                           const std::vector<int>& e_up,
                           const std::vector<int>& e_down) const {
  static const Expr zero;
  if (structurally_zero_) return zero;
  return comps_[flat_index(tm_up, tm_down, e_up, e_down)];
}

Expr MixedField::get(std::vector<int> tm_up, std::vector<int> tm_down,
                     std::vector<int> e_up, std::vector<int> e_down) const {
  if (structurally_zero_) return Expr();
  int s = 1;
  for (auto* blk : {&tm_up, &tm_down, &e_up, &e_down}) {
    int bs = multiidx::sort_sign(*blk);
    if (bs == 0) return Expr();
    s *= bs;
  }
  const Expr& c = at(tm_up, tm_down, e_up, e_down);
  if (s == 1) return c;
  return -c;
}

void MixedField::for_each(
    const std::function<void(const std::vector<int>&, const std::vector<int>&,
                             const std::vector<int>&, const std::vector<int>&,
                             const Expr&)>& fn) const {
  if (structurally_zero_) return;
  int d = shape_.patch.dim, r = shape_.rank;
  for (const auto& a : combos(d, sig_.tm_up))
    for (const auto& b : combos(d, sig_.tm_down))
      for (const auto& c : combos(r, sig_.e_up))
        for (const auto& e : combos(r, sig_.e_down))
          fn(a, b, c, e, at(a, b, c, e));
}

void MixedField::for_each_mut(
    const std::function<void(const std::vector<int>&, const std::vector<int>&,
                             const std::vector<int>&, const std::vector<int>&,
                             Expr&)>& fn) {
  if (structurally_zero_) return;
  int d = shape_.patch.dim, r = shape_.rank;
  for (const auto& a : combos(d, sig_.tm_up))
    for (const auto& b : combos(d, sig_.tm_down))
      for (const auto& c : combos(r, sig_.e_up))
        for (const auto& e : combos(r, sig_.e_down))
          fn(a, b, c, e, at(a, b, c, e));
}

std::vector<double> MixedField::eval(std::span<const double> point) const {
  std::vector<double> out;
  out.reserve(comps_.size());
  for (const auto& e : comps_) out.push_back(e.eval(point));
  return out;
}

static void require_compatible(const MixedField& a, const MixedField& b) {
  if (!a.shape().compatible(b.shape()))
    throw std::invalid_argument("mixed fields live on different bundles");
}

MixedField operator+(const MixedField& a, const MixedField& b) {
  require_compatible(a, b);
  if (!(a.sig() == b.sig()))
    throw std::invalid_argument("block signature mismatch in field addition");
  MixedField out(a.shape(), a.sig());
  out.for_each_mut([&](const auto& i, const auto& j, const auto& k,
                       const auto& l, Expr& e) {
    e = a.at(i, j, k, l) + b.at(i, j, k, l);
  });
  return out;
}

MixedField operator-(const MixedField& a, const MixedField& b) {
  return a + (-b);
}

MixedField operator-(const MixedField& a) {
  MixedField out(a.shape(), a.sig());
  out.for_each_mut([&](const auto& i, const auto& j, const auto& k,
                       const auto& l, Expr& e) { e = -a.at(i, j, k, l); });
  return out;
}

MixedField operator*(const Expr& c, const MixedField& a) {
  MixedField out(a.shape(), a.sig());
  out.for_each_mut([&](const auto& i, const auto& j, const auto& k,
                       const auto& l, Expr& e) { e = c * a.at(i, j, k, l); });
  return out;
}

MixedField operator*(double c, const MixedField& a) {
  return Expr::number(c) * a;
}

MetricField::MetricField(BundleShape s) : shape(std::move(s)) {
  g.assign(static_cast<std::size_t>(shape.patch.dim) * shape.patch.dim, Expr());
}
Expr& MetricField::at(int i, int j) { return g[i * shape.patch.dim + j]; }
const Expr& MetricField::at(int i, int j) const {
  return g[i * shape.patch.dim + j];
}

// -- wedge -------------------------------------------------------------------

namespace {

// All splits of a strictly increasing multi-index into an ordered pair of
// sub-multi-indices of sizes (ka, |combo|-ka), with the shuffle sign.
struct Split {
  std::vector<int> left, right;
  int sign;
};

std::vector<Split> shuffle_splits(const std::vector<int>& combo, int ka) {
  int n = static_cast<int>(combo.size());
  std::vector<Split> out;
  for (const auto& pos : combos(n, ka)) {
    Split s;
    s.sign = 1;
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (int t = 0; t < ka; ++t) {
      s.left.push_back(combo[pos[t]]);
      taken[pos[t]] = true;
      // inversions created by moving this element left past the untaken ones
      if ((pos[t] - t) % 2 != 0) s.sign = -s.sign;
    }
    for (int i = 0; i < n; ++i)
      if (!taken[i]) s.right.push_back(combo[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

MixedField wedge(const MixedField& a, const MixedField& b) {
  require_compatible(a, b);
  BlockSig sig{a.sig().tm_up + b.sig().tm_up, a.sig().tm_down + b.sig().tm_down,
               a.sig().e_up + b.sig().e_up, a.sig().e_down + b.sig().e_down};
  MixedField out(a.shape(), sig);
  if (out.structurally_zero() || a.structurally_zero() || b.structurally_zero())
    return out;
  out.for_each_mut([&](const auto& iu, const auto& id, const auto& eu,
                       const auto& ed, Expr& comp) {
    Expr sum;
    for (const auto& su : shuffle_splits(iu, a.sig().tm_up))
      for (const auto& sd : shuffle_splits(id, a.sig().tm_down))
        for (const auto& qu : shuffle_splits(eu, a.sig().e_up))
          for (const auto& qd : shuffle_splits(ed, a.sig().e_down)) {
            int sgn = su.sign * sd.sign * qu.sign * qd.sign;
            Expr term = a.at(su.left, sd.left, qu.left, qd.left) *
                        b.at(su.right, sd.right, qu.right, qd.right);
            sum = (sgn == 1) ? sum + term : sum - term;
          }
    comp = sum;
  });
  return out;
}

MixedField contract_TM(const MixedField& v, const MixedField& a) {
  require_compatible(v, a);
  if (!(v.sig() == BlockSig{1, 0, 0, 0}))
    throw std::invalid_argument("contract_TM expects a pure vector field");
  if (a.sig().tm_down < 1)
    throw std::invalid_argument("contract_TM target has no TM-form slot");
  BlockSig sig = a.sig();
  sig.tm_down -= 1;
  MixedField out(a.shape(), sig);
  if (out.structurally_zero() || a.structurally_zero()) return out;
  int d = a.shape().patch.dim;
  out.for_each_mut([&](const auto& iu, const auto& id, const auto& eu,
                       const auto& ed, Expr& comp) {
    Expr sum;
    for (int j = 0; j < d; ++j) {
      const Expr& vj = v.at({j}, {}, {}, {});
      if (vj.is_zero()) continue;
      std::vector<int> full;
      full.reserve(id.size() + 1);
      full.push_back(j);
      full.insert(full.end(), id.begin(), id.end());
      sum = sum + vj * a.get(iu, full, eu, ed);
    }
    comp = sum;
  });
  return out;
}

MixedField pair_E(const MixedField& alpha, const MixedField& w) {
  require_compatible(alpha, w);
  if (alpha.sig().e_up != 0 || w.sig().e_down != 0 || w.sig().tm_up != 0 ||
      w.sig().tm_down != 0)
    throw std::invalid_argument("pair_E expects alpha in Omega(.,wedge E*) and w in wedge E");
  if (alpha.sig().e_down != w.sig().e_up)
    throw std::invalid_argument("pair_E degree mismatch");
  BlockSig sig = alpha.sig();
  int m = sig.e_down;
  sig.e_down = 0;
  MixedField out(alpha.shape(), sig);
  if (alpha.structurally_zero() || w.structurally_zero()) return out;
  int r = alpha.shape().rank;
  out.for_each_mut([&](const auto& iu, const auto& id, const auto& eu,
                       const auto& ed, Expr& comp) {
    (void)eu;
    (void)ed;
    Expr sum;
    for (const auto& A : combos(r, m))
      sum = sum + alpha.at(iu, id, {}, A) * w.at({}, {}, A, {});
    comp = sum;
  });
  return out;
}

MixedField lie_derivative(const MixedField& X, const MixedField& a) {
  require_compatible(X, a);
  if (!(X.sig() == BlockSig{1, 0, 0, 0}))
    throw std::invalid_argument("lie_derivative expects a pure vector field");
  if (a.sig().tm_up != 0 || a.sig().e_up != 0 || a.sig().e_down != 0)
    throw std::invalid_argument("lie_derivative expects a pure TM form");
  MixedField out(a.shape(), a.sig());
  if (a.structurally_zero()) return out;
  int d = a.shape().patch.dim;
  out.for_each_mut([&](const auto&, const auto& I, const auto&, const auto&,
                       Expr& comp) {
    Expr sum;
    for (int j = 0; j < d; ++j) {
      const Expr& Xj = X.at({j}, {}, {}, {});
      if (!Xj.is_zero()) sum = sum + Xj * a.at({}, I, {}, {}).diff(j);
    }
    // (d X^j) terms, one per form slot
    for (std::size_t l = 0; l < I.size(); ++l) {
      for (int j = 0; j < d; ++j) {
        Expr dX = X.at({j}, {}, {}, {}).diff(I[l]);
        if (dX.is_zero()) continue;
        std::vector<int> J = I;
        J[l] = j;
        sum = sum + dX * a.get({}, J, {}, {});
      }
    }
    comp = sum;
  });
  return out;
}

MixedField de_rham(const MixedField& a) {
  if (a.sig().tm_up != 0)
    throw std::invalid_argument("de_rham expects no TM-up block");
  BlockSig sig = a.sig();
  sig.tm_down += 1;
  MixedField out(a.shape(), sig);
  if (out.structurally_zero() || a.structurally_zero()) return out;
  out.for_each_mut([&](const auto& iu, const auto& J, const auto& eu,
                       const auto& ed, Expr& comp) {
    Expr sum;
    for (std::size_t l = 0; l < J.size(); ++l) {
      std::vector<int> rest;
      rest.reserve(J.size() - 1);
      for (std::size_t t = 0; t < J.size(); ++t)
        if (t != l) rest.push_back(J[t]);
      Expr term = a.at(iu, rest, eu, ed).diff(J[l]);
      sum = (l % 2 == 0) ? sum + term : sum - term;
    }
    comp = sum;
  });
  return out;
}

// -- sampling ----------------------------------------------------------------

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<double>> sample_points(const Patch& patch, int n,
                                               std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::vector<double> p(static_cast<std::size_t>(patch.dim));
    for (int i = 0; i < patch.dim; ++i) {
      double lo = patch.box[i][0], hi = patch.box[i][1];
      p[i] = lo + (hi - lo) * rng.uniform01();
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

FieldStat max_abs(const MixedField& f,
                  const std::vector<std::vector<double>>& points) {
  FieldStat stat;
  if (!points.empty()) stat.argmax_point = points.front();
  for (const auto& p : points) {
    auto vals = f.eval(p);
    for (double v : vals) {
      double av = std::abs(v);
      if (av > stat.max_abs) {
        stat.max_abs = av;
        stat.argmax_point = p;
      }
    }
  }
  return stat;
}

double max_scale(const std::vector<const MixedField*>& fields,
                 const std::vector<std::vector<double>>& points) {
  double scale = 0.0;
  for (const auto* f : fields)
    scale = std::max(scale, max_abs(*f, points).max_abs);
  return scale;
}

}  // namespace momsec
