#ifndef MOMSEC_TENSOR_HPP
#define MOMSEC_TENSOR_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "momsec/expr.hpp"

namespace momsec {

/// Single coordinate chart. All computation in this library happens on one
/// patch; residual checks sample points uniformly from `box`.
struct Patch {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<std::array<double, 2>> box;  // one closed interval per coordinate

  Expr coordinate(int i) const { return Expr::coordinate(i, coords.at(i)); }
};

/// Vector bundle E over a patch, described by its fiber rank.
struct BundleShape {
  Patch patch;
  int rank = 0;

  bool compatible(const BundleShape& o) const {
    return patch.dim == o.patch.dim && rank == o.rank;
  }
};

/// Antisymmetric degrees of the four index blocks of a MixedField.
struct BlockSig {
  int tm_up = 0;    // multivector slots on TM
  int tm_down = 0;  // differential-form slots on TM
  int e_up = 0;     // wedge slots on E
  int e_down = 0;   // wedge slots on E*

  bool operator==(const BlockSig&) const = default;
};

namespace multiidx {

std::uint64_t binom(int n, int k);

/// Strictly increasing k-subsets of {0..n-1} in lexicographic order.
const std::vector<std::vector<int>>& combos(int n, int k);

/// Lexicographic rank of a strictly increasing combo within combos(n, k).
std::size_t rank(const std::vector<int>& combo, int n);

/// Sorts `v` in place; returns the permutation sign, or 0 on a repeated
/// entry.
int sort_sign(std::vector<int>& v);

}  // namespace multiidx

/// Densely stored tensor field with four antisymmetric index blocks
/// (TM-up, TM-down, E-up, E-down). Components are kept on strictly
/// increasing multi-indices; reads at permuted indices apply the permutation
/// sign and repeated indices read as zero. A block degree exceeding its
/// bound makes the field identically zero (stored empty).
///
/// Values are immutable in spirit: operators return new fields, and
/// evaluation never mutates, so concurrent evaluation is safe.
class MixedField {
public:
  MixedField() = default;
  MixedField(BundleShape shape, BlockSig sig);

  const BundleShape& shape() const { return shape_; }
  const BlockSig& sig() const { return sig_; }

  /// True if a block degree is out of range (field is identically zero and
  /// has no storage).
  bool structurally_zero() const { return structurally_zero_; }
  std::size_t component_count() const { return comps_.size(); }

  /// Canonical access: all four multi-indices strictly increasing.
  Expr& at(const std::vector<int>& tm_up, const std::vector<int>& tm_down,
           const std::vector<int>& e_up, const std::vector<int>& e_down);
  const Expr& at(const std::vector<int>& tm_up, const std::vector<int>& tm_down,
                 const std::vector<int>& e_up, const std::vector<int>& e_down) const;

  /// General read: indices in any order, sign applied, zero on repeats.
  Expr get(std::vector<int> tm_up, std::vector<int> tm_down,
           std::vector<int> e_up, std::vector<int> e_down) const;

  /// Visits every canonical component (multi-indices passed per block).
  void for_each(const std::function<void(const std::vector<int>& tm_up,
                                         const std::vector<int>& tm_down,
                                         const std::vector<int>& e_up,
                                         const std::vector<int>& e_down,
                                         const Expr&)>& fn) const;
  void for_each_mut(const std::function<void(const std::vector<int>&,
                                             const std::vector<int>&,
                                             const std::vector<int>&,
                                             const std::vector<int>&, Expr&)>& fn);

  std::vector<double> eval(std::span<const double> point) const;

  friend MixedField operator+(const MixedField&, const MixedField&);
  friend MixedField operator-(const MixedField&, const MixedField&);
  friend MixedField operator-(const MixedField&);
  friend MixedField operator*(const Expr&, const MixedField&);
  friend MixedField operator*(double, const MixedField&);

private:
  std::size_t flat_index(const std::vector<int>& tm_up,
                         const std::vector<int>& tm_down,
                         const std::vector<int>& e_up,
                         const std::vector<int>& e_down) const;

  BundleShape shape_;
  BlockSig sig_;
  bool structurally_zero_ = true;
  std::vector<Expr> comps_;
};

/// Symmetric 2-tensor g_ij on the patch (no antisymmetric storage).
struct MetricField {
  BundleShape shape;
  std::vector<Expr> g;  // row-major dim x dim, kept symmetric

  MetricField() = default;
  explicit MetricField(BundleShape s);
  Expr& at(int i, int j);
  const Expr& at(int i, int j) const;
};

// -- Multilinear operations --------------------------------------------------

/// Graded antisymmetrized product; each block is a shuffle product and blocks
/// carry independent gradings (no cross-block Koszul sign).
MixedField wedge(const MixedField& a, const MixedField& b);

/// Interior product with a vector field in the first TM-form slot:
/// (iota_v a)(v2..vk) = a(v, v2..vk).
MixedField contract_TM(const MixedField& v, const MixedField& a);

/// Full pairing of the E-down block of `alpha` with the E-up block of `w`
/// (degree m against degree m, the 1/m! pairing); remaining blocks of
/// `alpha` pass through.
MixedField pair_E(const MixedField& alpha, const MixedField& w);

/// Lie derivative of a pure k-form along a pure vector field.
MixedField lie_derivative(const MixedField& X, const MixedField& a);

/// Exterior derivative on the TM-form block; E blocks pass through.
MixedField de_rham(const MixedField& a);

// -- Sampling and residual statistics ---------------------------------------

/// Deterministic PRNG (splitmix64); identical streams on every platform.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double uniform01();
};

std::vector<std::vector<double>> sample_points(const Patch& patch, int n,
                                               std::uint64_t seed);

/// Max absolute component value of a field over a set of sample points,
/// with the sample point attaining the max (ties resolved by index order,
/// keeping the reduction deterministic).
struct FieldStat {
  double max_abs = 0.0;
  std::vector<double> argmax_point;
};

FieldStat max_abs(const MixedField& f,
                  const std::vector<std::vector<double>>& points);

/// Max over samples of the largest |component| among several fields; used as
/// the scale for relative residuals.
double max_scale(const std::vector<const MixedField*>& fields,
                 const std::vector<std::vector<double>>& points);

}  // namespace momsec

#endif
