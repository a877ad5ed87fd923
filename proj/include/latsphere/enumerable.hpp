#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "latsphere/partition.hpp"
#include "latsphere/qcalc.hpp"

namespace latsphere {

enum class RingKind { VectorSpace, PrimePowerModule };

/* Parameters of one of the two enumerable lattice families:
 *   VectorSpace       subspaces of F_q^N        top type (1^N)
 *   PrimePowerModule  submodules of Z_{p^s}^N   top type (s^N)
 * Text form: "F:q=2,N=4" or "Z:p=2,s=2,N=2".
 */
struct LatticeProfile {
    RingKind kind = RingKind::VectorSpace;
    unsigned long base = 2; // q for VectorSpace, p for PrimePowerModule
    unsigned s = 1;
    unsigned n = 1;

    static LatticeProfile vector_space(unsigned long q, unsigned n);
    static LatticeProfile prime_power(unsigned long p, unsigned s, unsigned n);
    static LatticeProfile parse(std::string_view text);

    Partition top_type() const { return Partition::rectangle(s, n); }
    unsigned top_height() const { return s * n; }
    std::string to_string() const;

    bool operator==(const LatticeProfile&) const = default;
};

using Radii = std::vector<unsigned>;

/* α/β counting engine with memoized chain and γ recursions.
 *
 * α(μ,φ)  number of type-φ elements below a fixed type-μ element
 * β(μ,φ)  number of type-φ elements above it, via β(μ,φ) = α(λ−μ, λ−φ)
 *
 * γ and γ′ depend on the centre u only through tp(u), so every cache is keyed
 * by partitions. Lookups are thread safe; a value may be computed twice on a
 * race but the cache is never left inconsistent.
 */
class CountTable {
public:
    explicit CountTable(LatticeProfile profile);

    const LatticeProfile& profile() const noexcept { return profile_; }
    const Partition& top_type() const noexcept { return lambda_; }

    BigCount alpha(const Partition& mu, const Partition& phi) const;
    BigCount beta(const Partition& mu, const Partition& phi) const;

    // Chains x_1 <= ... <= x_n <= u with h(x_i) = rs[i], tp(u) = mu. Empty rs gives 1.
    BigCount alpha_chain(const Partition& mu, const Radii& rs) const;
    // Chains x_1 >= ... >= x_n >= u with h(x_i) = rs[i].
    BigCount beta_chain(const Partition& mu, const Radii& rs) const;

    /* Tuples (x_1..x_k, v) with h(x_i)=rs[i], tp(v)=mu and x_1 <= ... <= x_k = u∧v.
     * Requires |mu| <= |tp_u|. With a single radius r_0 this is |{v in L_mu : h(u∧v) = r_0}|. */
    BigCount gamma(const Partition& tp_u, const Partition& mu, const Radii& rs) const;

    /* Tuples with x_1 >= ... >= x_k = u∨v. Requires |mu| > |tp_u|.
     * With a single radius r_0 this is |{v in L_mu : h(u∨v) = r_0}|. */
    BigCount gamma_dual(const Partition& tp_u, const Partition& mu, const Radii& rs) const;

    // |S(u,r,mu)| for a centre of type tp_u.
    BigCount sphere_layer_by_type(const Partition& tp_u, unsigned r, const Partition& mu) const;
    // |S(u,r,l)|
    BigCount sphere_layer_by_height(const Partition& tp_u, unsigned r, unsigned l) const;
    // |S(u,r)|
    BigCount sphere_size(const Partition& tp_u, unsigned r) const;

    // |L_phi| = α(λ,φ)
    BigCount type_count(const Partition& phi) const { return alpha(lambda_, phi); }
    // |L_l|
    BigCount height_count(unsigned l) const;
    // Number of height-l elements below a fixed type-mu element.
    BigCount height_count_below(const Partition& mu, unsigned l) const;

    // Types that actually occur in the lattice (all μ ≤ λ; only (1^k) for vector spaces).
    std::vector<Partition> types() const;
    std::vector<Partition> types_of_height(unsigned l) const;

private:
    void require_type(const Partition& mu, const char* what) const;
    BigCount alpha_uncached(const Partition& mu, const Partition& phi) const;

    LatticeProfile profile_;
    Partition lambda_;

    using PairKey = std::pair<Partition, Partition>;
    using ChainKey = std::pair<Partition, Radii>;
    using GammaKey = std::tuple<Partition, Partition, Radii>;

    mutable std::mutex mutex_;
    mutable std::map<PairKey, BigCount> alpha_memo_;
    mutable std::map<ChainKey, BigCount> alpha_chain_memo_;
    mutable std::map<ChainKey, BigCount> beta_chain_memo_;
    mutable std::map<GammaKey, BigCount> gamma_memo_;
    mutable std::map<GammaKey, BigCount> gamma_dual_memo_;
};

} // namespace latsphere
