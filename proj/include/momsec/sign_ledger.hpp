#ifndef MOMSEC_SIGN_LEDGER_HPP
#define MOMSEC_SIGN_LEDGER_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace momsec {

/// Every orientation/sign convention of the library in one place. Reports
/// embed a hash of this table so a convention change shows up in goldens.
inline constexpr std::array<std::string_view, 14> kSignLedger = {
    "storage: antisymmetric blocks on strictly increasing multi-indices;"
    " permuted reads carry the permutation sign",
    "wedge: blockwise shuffle products, no cross-block Koszul sign",
    "de_rham: (da)_{j0<...<jk} = sum_l (-1)^l d_{j_l} a_{rest}",
    "interior product: first-slot contraction",
    "pair_E: <alpha|w> = sum over increasing multi-indices (the 1/m! pairing)",
    "nabla frame: nabla_i e_a = -omega^b_{ai} e_b; exterior covariant"
    " derivative alternates like de_rham",
    "iota_rho^k: reversed insertion omega(rho(e_k)..rho(e_1), v...) ="
    " (-1)^{k(k-1)/2} x iterated forward contraction, new E index last",
    "E_d: anchor acts on the form part by Lie derivative; bracket inserted in"
    " the first E slot with (-1)^{i+j}",
    "torsion: T^c_{ab} = -C^c_{ab} - rho^j_a omega^c_{bj} + rho^j_b omega^c_{aj}",
    "homology: sum_{i<j} (-1)^{i+j} [e_i,e_j]^nabla wedge rest, bracket -T",
    "hms residual: nabla mu_{k-1} + E_d mu_k + iota_rho^{n+1-k} omega",
    "hmm residual: d hmu_{k-1} + d_CE hmu_k - (-1)^{n-k+1} iota_rho^{n+1-k}"
    " omega; sign map hmu_k = (-1)^{n-k+1} mu_k",
    "gnlsm residual: nabla tmu_{k-1} + (-1)^k E_d tmu_k + tau_k"
    " iota_rho^{n+1-k} H, tau_k = (-1)^{n + sum_{j=k}^{n-1} j};"
    " translation mu_k = (-1)^{sum_{j=k+1}^{n-1} j} tmu_k, omega = (-1)^n H",
    "contraction condition: tmu_{k-1} = (-1)^k iota_rho tmu_k, contracted"
    " E index in the first slot",
};

/// FNV-1a over the concatenated ledger lines.
constexpr std::uint64_t sign_ledger_hash() {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (auto line : kSignLedger)
    for (char c : line) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
  return h;
}

}  // namespace momsec

#endif
