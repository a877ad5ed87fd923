#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latsphere/enumerable.hpp"
#include "latsphere/oracle.hpp"
#include "latsphere/partition.hpp"
#include "latsphere/qcalc.hpp"

namespace latsphere {

enum class BoundKind { PackingUpper, CoveringLowerExistence, SingletonUpper };

std::string to_string(BoundKind kind);

// Which part of the lattice a bound counts in: a height t or a type φ.
struct LayerSelector {
    std::optional<unsigned> height;
    std::optional<Partition> type;

    static LayerSelector of_height(unsigned t) { return {t, std::nullopt}; }
    static LayerSelector of_type(Partition phi) { return {std::nullopt, std::move(phi)}; }
    // "3" selects a height, "[2,1]" a type
    static LayerSelector parse(const std::string& text);
    std::string to_string() const;
};

struct BoundRequest {
    CodeConstraint constraint; // height l or type μ of the codewords
    unsigned min_distance = 1; // D
    std::optional<LayerSelector> layer;
};

/* One evaluated selector. For packing and covering, bound = numerator / denominator
 * rounded down resp. up; for singleton rows the denominator is 1 and radius is the
 * puncturing depth t = (D−2)/2. */
struct BoundRow {
    LayerSelector selector;
    unsigned radius = 0;
    BigCount numerator;
    BigCount denominator;
    BigCount bound;
    // |t − l| ≡ radius (mod 2): a layer at which disjointness certifies whole-sphere disjointness
    bool parity_matched = false;
};

struct BoundResult {
    BoundKind kind = BoundKind::PackingUpper;
    std::vector<BoundRow> rows;
    std::size_t best = 0;
    std::vector<std::string> notes;

    const BoundRow& best_row() const { return rows.at(best); }
    const BigCount& value() const { return best_row().bound; }
};

/* Enumerable lattices: spheres depend only on the centre type, so the min/max over
 * centres is a min/max over the types occurring at the code's height.
 * Without an explicit layer every admissible selector is evaluated and the tightest
 * row wins (minimum for upper bounds, maximum for the covering existence bound). */
BoundResult packing_bound(const CountTable& table, const BoundRequest& req);
BoundResult covering_bound(const CountTable& table, const BoundRequest& req);
BoundResult singleton_bound(const CountTable& table, const BoundRequest& req);

// Same bounds for an arbitrary explicit modular lattice, with min/max over actual centres.
BoundResult packing_bound(const ConcreteLattice& lat, const BoundRequest& req);
BoundResult covering_bound(const ConcreteLattice& lat, const BoundRequest& req);
BoundResult singleton_bound(const ConcreteLattice& lat, const BoundRequest& req);

std::string format_bound_table(const BoundResult& result);
std::string format_bound_csv(const BoundResult& result);
std::string format_bound_json(const BoundResult& result);

} // namespace latsphere
