#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "latsphere/enumerable.hpp"
#include "latsphere/partition.hpp"

namespace latsphere {

using Element = std::uint32_t;

/* Z_{p^{e_1}} × ... × Z_{p^{e_N}} with its elements encoded as mixed-radix integers
 * (component 0 is the least significant digit). F_p^N is the case e_i = 1.
 *
 * Text forms: the profile syntax "F:q=2,N=3" / "Z:p=2,s=2,N=2", plus
 * "Z:p=2,exps=[2,1]" for products of cyclic groups of different orders.
 */
class ConcreteModule {
public:
    static constexpr std::size_t default_element_cap = 4096;

    ConcreteModule(unsigned long p, std::vector<unsigned> exponents,
                   std::size_t element_cap = default_element_cap);

    static ConcreteModule from_profile(const LatticeProfile& profile,
                                       std::size_t element_cap = default_element_cap);
    static ConcreteModule parse(std::string_view text, std::size_t element_cap = default_element_cap);

    unsigned long prime() const noexcept { return p_; }
    const std::vector<unsigned>& exponents() const noexcept { return exps_; }
    std::size_t rank() const noexcept { return exps_.size(); }
    std::size_t size() const noexcept { return size_; }
    unsigned long modulus(std::size_t i) const { return moduli_[i]; }
    // Largest exponent, i.e. the s in Z_{p^s}.
    unsigned max_exponent() const noexcept;
    std::string to_string() const;

    Element encode(const std::vector<long>& coords) const;
    std::vector<long> decode(Element x) const;

    Element add(Element a, Element b) const;
    Element scale(long k, Element a) const;
    Element zero() const noexcept { return 0; }

    // Σ x_i y_i computed in Z_{p^s} after embedding each component; used for annihilators.
    unsigned long pairing(Element a, Element b) const;

private:
    unsigned long p_;
    std::vector<unsigned> exps_;
    std::vector<unsigned long> moduli_;
    std::size_t size_ = 1;
};

/* Fixed-size bitset. A submodule is stored as the set of its element codes, so equal
 * submodules have equal bits and this doubles as the canonical form. */
class BitSet {
public:
    BitSet() = default;
    explicit BitSet(std::size_t universe) : words_((universe + 63) / 64, 0) {}

    bool contains(std::size_t x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
    void insert(std::size_t x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
    std::size_t count() const;
    bool subset_of(const BitSet& other) const;
    BitSet intersect(const BitSet& other) const;
    // indices of set bits, ascending
    std::vector<std::size_t> members() const;
    std::optional<std::size_t> first() const;
    std::optional<std::size_t> last() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }
    bool operator==(const BitSet&) const = default;
    auto operator<=>(const BitSet&) const = default;

private:
    std::vector<std::uint64_t> words_;
};

using Submodule = BitSet;

// ⟨generators⟩
Submodule span(const ConcreteModule& module, const std::vector<Element>& generators);
// base + ⟨extra⟩
Submodule span_with(const ConcreteModule& module, const Submodule& base, const std::vector<Element>& extra);

unsigned height_of(const ConcreteModule& module, const Submodule& sub);
// λ'_j = log_p |p^{j−1}U| − log_p |p^j U|, then conjugated.
Partition type_of_submodule(const ConcreteModule& module, const Submodule& sub);

/* Explicit submodule lattice L(M). Indices are sorted by cardinality, so 0 is the
 * zero submodule and size()-1 is M itself. */
class ConcreteLattice {
public:
    static constexpr std::size_t default_lattice_cap = 200000;

    const ConcreteModule& module() const noexcept { return module_; }
    std::size_t size() const noexcept { return subs_.size(); }
    std::size_t bottom() const noexcept { return 0; }
    std::size_t top() const noexcept { return subs_.size() - 1; }

    const Submodule& sub(std::size_t i) const { return subs_[i]; }
    const std::vector<Element>& generators(std::size_t i) const { return gens_[i]; }
    unsigned height(std::size_t i) const { return heights_[i]; }
    const Partition& type(std::size_t i) const { return types_[i]; }
    bool leq(std::size_t a, std::size_t b) const { return up_[a].contains(b); }
    std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
    std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }

    std::optional<std::size_t> index_of(const Submodule& s) const;
    std::vector<std::size_t> of_height(unsigned l) const;
    std::vector<std::size_t> of_type(const Partition& mu) const;
    std::vector<Partition> types_present() const;
    // Elements covering i (one step up in the Hasse diagram).
    std::vector<std::size_t> upper_covers(std::size_t i) const;

    friend ConcreteLattice enumerate_lattice(const ConcreteModule& module, std::size_t lattice_cap);

private:
    explicit ConcreteLattice(ConcreteModule module) : module_(std::move(module)) {}

    ConcreteModule module_;
    std::vector<Submodule> subs_;
    std::vector<std::vector<Element>> gens_;
    std::vector<unsigned> heights_;
    std::vector<Partition> types_;
    // up_[a] / down_[a] are bitsets over lattice indices
    std::vector<BitSet> up_;
    std::vector<BitSet> down_;
    std::vector<std::uint32_t> meet_;
    std::vector<std::uint32_t> join_;
};

/* Closes the cyclic submodules ⟨m⟩ under joins, starting from 0.
 * Throws CapExceeded past lattice_cap submodules. */
ConcreteLattice enumerate_lattice(const ConcreteModule& module,
                                  std::size_t lattice_cap = ConcreteLattice::default_lattice_cap);

// h(u∨v) − h(u∧v)
unsigned distance(const ConcreteLattice& lat, std::size_t u, std::size_t v);

struct SphereFilter {
    std::optional<unsigned> height;
    std::optional<Partition> type;
};

std::vector<std::size_t> oracle_sphere(const ConcreteLattice& lat, std::size_t u, unsigned r,
                                       const SphereFilter& filter = {});

// |{w ∈ L_mu : w ≤ u}|  and  |{w ∈ L_mu : w ≥ u}|
std::size_t count_below(const ConcreteLattice& lat, std::size_t u, const Partition& mu);
std::size_t count_above(const ConcreteLattice& lat, std::size_t u, const Partition& mu);
// |{v ∈ L_mu : h(u∧v) = r0}|  and  |{v ∈ L_mu : h(u∨v) = r0}|
std::size_t count_meet_height(const ConcreteLattice& lat, std::size_t u, const Partition& mu, unsigned r0);
std::size_t count_join_height(const ConcreteLattice& lat, std::size_t u, const Partition& mu, unsigned r0);
// Chains x_1 ≤ ... ≤ x_n ≤ u (resp. x_1 ≥ ... ≥ x_n ≥ u) with h(x_i) = rs[i], by enumeration.
std::size_t count_chains_below(const ConcreteLattice& lat, std::size_t u, const Radii& rs);
std::size_t count_chains_above(const ConcreteLattice& lat, std::size_t u, const Radii& rs);

struct EnumerabilityWitness {
    std::size_t u = 0;
    std::size_t v = 0;
    Partition mu;
    std::size_t count_u = 0;
    std::size_t count_v = 0;
    bool upward = false;
};

struct EnumerabilityReport {
    bool down = true;
    bool up = true;
    std::optional<EnumerabilityWitness> witness;
};

EnumerabilityReport check_enumerability(const ConcreteLattice& lat);

/* Checks S(u1,r) ∩ S(u2,r) = ∅ ⇔ S(u1,r,t) ∩ S(u2,r,t) = ∅ for all u1, u2 ∈ L_l and
 * t ∈ {l−r, l−r+2, ..., l+r} ∩ [0, h(1_L)]. */
struct DisjointnessReport {
    bool holds = true;
    std::size_t pairs_checked = 0;
    std::optional<std::tuple<std::size_t, std::size_t, unsigned>> violation;
};

DisjointnessReport check_layer_disjointness_theorem(const ConcreteLattice& lat, unsigned l, unsigned r);

struct CodeConstraint {
    std::optional<unsigned> height;
    std::optional<Partition> type;

    static CodeConstraint of_height(unsigned l) { return {l, std::nullopt}; }
    static CodeConstraint of_type(Partition mu) { return {std::nullopt, std::move(mu)}; }
};

struct CodeSearchResult {
    std::vector<std::size_t> code;
    bool exact = true;
    std::size_t size() const noexcept { return code.size(); }
};

/* Largest constant-height (or constant-type) code with minimum distance ≥ D, by
 * branch and bound on the compatibility graph. Past node_cap search nodes the best
 * code so far is returned with exact = false. */
CodeSearchResult max_code_search(const ConcreteLattice& lat, const CodeConstraint& constraint, unsigned min_distance,
                                 std::size_t node_cap = 5'000'000);

// Minimum distance of a set of lattice elements (0 for fewer than two).
unsigned minimum_distance(const ConcreteLattice& lat, const std::vector<std::size_t>& code);

// JSON with one record per element: id, height, type, upper covers, generators.
std::string export_lattice_json(const ConcreteLattice& lat);

} // namespace latsphere
