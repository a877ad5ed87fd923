#include "latsphere/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "latsphere/error.hpp"

namespace latsphere {

// ---------------------------------------------------------------- module

ConcreteModule::ConcreteModule(unsigned long p, std::vector<unsigned> exponents, std::size_t element_cap)
    : p_(p)
    , exps_(std::move(exponents))
{
    if (p_ < 2)
        throw ValidationError("module needs a prime p, got " + std::to_string(p_));
    for (unsigned long d = 2; d * d <= p_; ++d)
        if (p_ % d == 0)
            throw ValidationError("module needs a prime p, got " + std::to_string(p_));
    if (exps_.empty())
        throw ValidationError("module needs at least one cyclic factor");
    // largest factor first, so ⟨e_1⟩ is a cyclic of maximal order
    std::sort(exps_.begin(), exps_.end(), std::greater<>{});
    if (exps_.back() == 0)
        throw ValidationError("cyclic factor exponents must be positive");
    for (unsigned e : exps_) {
        unsigned long m = 1;
        for (unsigned i = 0; i < e; ++i) {
            m *= p_;
            if (m > element_cap)
                throw CapExceeded("module " + to_string() + " exceeds the element cap " + std::to_string(element_cap));
        }
        moduli_.push_back(m);
        size_ *= m;
        if (size_ > element_cap)
            throw CapExceeded("module " + to_string() + " exceeds the element cap " + std::to_string(element_cap));
    }
}

ConcreteModule ConcreteModule::from_profile(const LatticeProfile& profile, std::size_t element_cap)
{
    if (profile.kind == RingKind::VectorSpace) {
        const auto q = profile.base;
        for (unsigned long d = 2; d * d <= q; ++d)
            if (q % d == 0)
                throw ValidationError("explicit vector spaces need a prime q, got " + std::to_string(q));
        return ConcreteModule(q, std::vector<unsigned>(profile.n, 1), element_cap);
    }
    return ConcreteModule(profile.base, std::vector<unsigned>(profile.n, profile.s), element_cap);
}

ConcreteModule ConcreteModule::parse(std::string_view text, std::size_t element_cap)
{
    const auto pos = text.find("exps=");
    if (pos == std::string_view::npos)
        return from_profile(LatticeProfile::parse(text), element_cap);

    const std::string original(text);
    if (!text.starts_with("Z:p="))
        throw ValidationError("module must look like Z:p=2,exps=[2,1], got '" + original + "'");
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || comma > pos)
        throw ValidationError("module must look like Z:p=2,exps=[2,1], got '" + original + "'");
    unsigned long p = 0;
    try {
        p = std::stoul(std::string(text.substr(4, comma - 4)));
    } catch (const std::exception&) {
        throw ValidationError("bad prime in '" + original + "'");
    }
    const Partition exps = Partition::parse(text.substr(pos + 5));
    if (exps.empty())
        throw ValidationError("exps must be non-empty in '" + original + "'");
    return ConcreteModule(p, exps.parts(), element_cap);
}

unsigned ConcreteModule::max_exponent() const noexcept
{
    return exps_.front();
}

std::string ConcreteModule::to_string() const
{
    const bool homogeneous = std::all_of(exps_.begin(), exps_.end(), [&](unsigned e) { return e == exps_.front(); });
    if (homogeneous && exps_.front() == 1)
        return "F:q=" + std::to_string(p_) + ",N=" + std::to_string(exps_.size());
    if (homogeneous)
        return "Z:p=" + std::to_string(p_) + ",s=" + std::to_string(exps_.front()) + ",N=" + std::to_string(exps_.size());
    std::string out = "Z:p=" + std::to_string(p_) + ",exps=[";
    for (std::size_t i = 0; i < exps_.size(); ++i)
        out += (i ? "," : "") + std::to_string(exps_[i]);
    return out + "]";
}

Element ConcreteModule::encode(const std::vector<long>& coords) const
{
    if (coords.size() != rank())
        throw ValidationError("element has " + std::to_string(coords.size()) + " coordinates, module rank is " +
                              std::to_string(rank()));
    Element code = 0;
    for (std::size_t i = rank(); i-- > 0;) {
        const long m = static_cast<long>(moduli_[i]);
        const long c = ((coords[i] % m) + m) % m;
        code = static_cast<Element>(code * m + c);
    }
    return code;
}

std::vector<long> ConcreteModule::decode(Element x) const
{
    std::vector<long> out(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        out[i] = static_cast<long>(x % moduli_[i]);
        x = static_cast<Element>(x / moduli_[i]);
    }
    return out;
}

Element ConcreteModule::add(Element a, Element b) const
{
    Element code = 0;
    Element mult = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        const auto m = moduli_[i];
        const auto d = (a % m + b % m) % m;
        code += static_cast<Element>(d * mult);
        mult = static_cast<Element>(mult * m);
        a = static_cast<Element>(a / m);
        b = static_cast<Element>(b / m);
    }
    return code;
}

Element ConcreteModule::scale(long k, Element a) const
{
    Element code = 0;
    Element mult = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        const long m = static_cast<long>(moduli_[i]);
        const long kk = ((k % m) + m) % m;
        const long d = (kk * static_cast<long>(a % m)) % m;
        code += static_cast<Element>(d * mult);
        mult = static_cast<Element>(mult * m);
        a = static_cast<Element>(a / m);
    }
    return code;
}

unsigned long ConcreteModule::pairing(Element a, Element b) const
{
    const unsigned long top = moduli_.front();
    const auto xa = decode(a);
    const auto xb = decode(b);
    unsigned long acc = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        const unsigned long lift = top / moduli_[i];
        acc = (acc + static_cast<unsigned long>(xa[i]) * static_cast<unsigned long>(xb[i]) % top * lift) % top;
    }
    return acc;
}

// ---------------------------------------------------------------- bitsets

std::size_t BitSet::count() const
{
    std::size_t c = 0;
    for (auto w : words_)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitSet::subset_of(const BitSet& other) const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i])
            return false;
    return true;
}

BitSet BitSet::intersect(const BitSet& other) const
{
    BitSet out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i)
        out.words_[i] &= other.words_[i];
    return out;
}

std::vector<std::size_t> BitSet::members() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto w = words_[i];
        while (w) {
            out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

std::optional<std::size_t> BitSet::first() const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i])
            return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return std::nullopt;
}

std::optional<std::size_t> BitSet::last() const
{
    for (std::size_t i = words_.size(); i-- > 0;)
        if (words_[i])
            return i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[i]));
    return std::nullopt;
}

// ---------------------------------------------------------------- submodules

Submodule span_with(const ConcreteModule& module, const Submodule& base, const std::vector<Element>& extra)
{
    Submodule out = base;
    std::vector<Element> list;
    for (auto x : base.members())
        list.push_back(static_cast<Element>(x));
    if (list.empty()) {
        out.insert(module.zero());
        list.push_back(module.zero());
    }
    // closing a subgroup S under +g yields S + ⟨g⟩ since g has finite order
    for (Element g : extra) {
        if (out.contains(g))
            continue;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Element y = module.add(list[i], g);
            if (!out.contains(y)) {
                out.insert(y);
                list.push_back(y);
            }
        }
    }
    return out;
}

Submodule span(const ConcreteModule& module, const std::vector<Element>& generators)
{
    return span_with(module, Submodule(module.size()), generators);
}

namespace {

unsigned log_p(std::size_t n, unsigned long p)
{
    unsigned e = 0;
    while (n > 1) {
        n /= p;
        ++e;
    }
    return e;
}

} // namespace

unsigned height_of(const ConcreteModule& module, const Submodule& sub)
{
    return log_p(sub.count(), module.prime());
}

Partition type_of_submodule(const ConcreteModule& module, const Submodule& sub)
{
    const auto p = static_cast<long>(module.prime());
    std::vector<unsigned> layer_heights; // h(p^j U) for j = 0, 1, ...
    std::vector<Element> current;
    for (auto x : sub.members())
        current.push_back(static_cast<Element>(x));
    layer_heights.push_back(log_p(current.size(), module.prime()));
    while (current.size() > 1) {
        std::set<Element> next;
        for (Element x : current)
            next.insert(module.scale(p, x));
        current.assign(next.begin(), next.end());
        layer_heights.push_back(log_p(current.size(), module.prime()));
    }
    std::vector<unsigned> conj;
    for (std::size_t j = 1; j < layer_heights.size(); ++j)
        conj.push_back(layer_heights[j - 1] - layer_heights[j]);
    return conjugate(Partition(std::move(conj)));
}

// ---------------------------------------------------------------- lattice

ConcreteLattice enumerate_lattice(const ConcreteModule& module, std::size_t lattice_cap)
{
    ConcreteLattice lat(module);
    const std::size_t n_elems = module.size();

    // distinct cyclic submodules, each with one generator
    std::map<Submodule, Element> cyclic;
    for (Element x = 0; x < n_elems; ++x) {
        auto c = span(module, {x});
        cyclic.emplace(std::move(c), x);
    }

    std::map<Submodule, std::vector<Element>> found;
    std::deque<const std::pair<const Submodule, std::vector<Element>>*> queue;
    {
        Submodule zero(n_elems);
        zero.insert(module.zero());
        auto [it, _] = found.emplace(std::move(zero), std::vector<Element>{});
        queue.push_back(&*it);
    }
    while (!queue.empty()) {
        const auto* cur = queue.front();
        queue.pop_front();
        for (const auto& [c, g] : cyclic) {
            if (c.subset_of(cur->first))
                continue;
            Submodule joined = span_with(module, cur->first, {g});
            if (found.contains(joined))
                continue;
            auto gens = cur->second;
            gens.push_back(g);
            auto [it, _] = found.emplace(std::move(joined), std::move(gens));
            queue.push_back(&*it);
            if (found.size() > lattice_cap)
                throw CapExceeded("submodule lattice of " + module.to_string() + " exceeds the cap " +
                                  std::to_string(lattice_cap));
        }
    }

    std::vector<std::pair<Submodule, std::vector<Element>>> items(found.begin(), found.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.first.count() < b.first.count(); });

    const std::size_t n = items.size();
    for (auto& [s, g] : items) {
        lat.heights_.push_back(height_of(module, s));
        lat.types_.push_back(type_of_submodule(module, s));
        lat.subs_.push_back(std::move(s));
        lat.gens_.push_back(std::move(g));
    }

    lat.up_.assign(n, BitSet(n));
    lat.down_.assign(n, BitSet(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (lat.subs_[a].subset_of(lat.subs_[b])) {
                lat.up_[a].insert(b);
                lat.down_[b].insert(a);
            }

    // indices are sorted by size, so the least upper bound is the first common upper
    // bound and the greatest lower bound the last common lower bound
    lat.meet_.resize(n * n);
    lat.join_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const auto j = *lat.up_[a].intersect(lat.up_[b]).first();
            const auto m = *lat.down_[a].intersect(lat.down_[b]).last();
            lat.join_[a * n + b] = lat.join_[b * n + a] = static_cast<std::uint32_t>(j);
            lat.meet_[a * n + b] = lat.meet_[b * n + a] = static_cast<std::uint32_t>(m);
        }
    return lat;
}

std::optional<std::size_t> ConcreteLattice::index_of(const Submodule& s) const
{
    auto it = std::lower_bound(subs_.begin(), subs_.end(), s,
                               [](const Submodule& a, const Submodule& b) { return a.count() < b.count(); });
    for (; it != subs_.end() && it->count() == s.count(); ++it)
        if (*it == s)
            return static_cast<std::size_t>(it - subs_.begin());
    return std::nullopt;
}

std::vector<std::size_t> ConcreteLattice::of_height(unsigned l) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (heights_[i] == l)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> ConcreteLattice::of_type(const Partition& mu) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (types_[i] == mu)
            out.push_back(i);
    return out;
}

std::vector<Partition> ConcreteLattice::types_present() const
{
    std::set<Partition> seen(types_.begin(), types_.end());
    std::vector<Partition> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) { return a.weight() < b.weight(); });
    return out;
}

std::vector<std::size_t> ConcreteLattice::upper_covers(std::size_t i) const
{
    std::vector<std::size_t> out;
    for (auto j : up_[i].members())
        if (heights_[j] == heights_[i] + 1)
            out.push_back(j);
    return out;
}

unsigned distance(const ConcreteLattice& lat, std::size_t u, std::size_t v)
{
    return lat.height(lat.join(u, v)) - lat.height(lat.meet(u, v));
}

std::vector<std::size_t> oracle_sphere(const ConcreteLattice& lat, std::size_t u, unsigned r, const SphereFilter& filter)
{
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < lat.size(); ++v) {
        if (filter.height && lat.height(v) != *filter.height)
            continue;
        if (filter.type && lat.type(v) != *filter.type)
            continue;
        if (distance(lat, u, v) <= r)
            out.push_back(v);
    }
    return out;
}

std::size_t count_below(const ConcreteLattice& lat, std::size_t u, const Partition& mu)
{
    std::size_t c = 0;
    for (std::size_t w = 0; w < lat.size(); ++w)
        if (lat.type(w) == mu && lat.leq(w, u))
            ++c;
    return c;
}

std::size_t count_above(const ConcreteLattice& lat, std::size_t u, const Partition& mu)
{
    std::size_t c = 0;
    for (std::size_t w = 0; w < lat.size(); ++w)
        if (lat.type(w) == mu && lat.leq(u, w))
            ++c;
    return c;
}

std::size_t count_meet_height(const ConcreteLattice& lat, std::size_t u, const Partition& mu, unsigned r0)
{
    std::size_t c = 0;
    for (std::size_t v = 0; v < lat.size(); ++v)
        if (lat.type(v) == mu && lat.height(lat.meet(u, v)) == r0)
            ++c;
    return c;
}

std::size_t count_join_height(const ConcreteLattice& lat, std::size_t u, const Partition& mu, unsigned r0)
{
    std::size_t c = 0;
    for (std::size_t v = 0; v < lat.size(); ++v)
        if (lat.type(v) == mu && lat.height(lat.join(u, v)) == r0)
            ++c;
    return c;
}

namespace {

std::size_t chains_from(const ConcreteLattice& lat, std::size_t anchor, const Radii& rs, std::size_t k, bool downward)
{
    if (k == 0)
        return 1;
    std::size_t total = 0;
    for (std::size_t x = 0; x < lat.size(); ++x) {
        if (lat.height(x) != rs[k - 1])
            continue;
        if (downward ? !lat.leq(x, anchor) : !lat.leq(anchor, x))
            continue;
        total += chains_from(lat, x, rs, k - 1, downward);
    }
    return total;
}

} // namespace

std::size_t count_chains_below(const ConcreteLattice& lat, std::size_t u, const Radii& rs)
{
    return chains_from(lat, u, rs, rs.size(), true);
}

std::size_t count_chains_above(const ConcreteLattice& lat, std::size_t u, const Radii& rs)
{
    return chains_from(lat, u, rs, rs.size(), false);
}

EnumerabilityReport check_enumerability(const ConcreteLattice& lat)
{
    EnumerabilityReport report;
    const auto types = lat.types_present();
    for (bool upward : {false, true}) {
        for (const auto& mu : types) {
            // first element seen of each type, with its count
            std::map<Partition, std::pair<std::size_t, std::size_t>> reference;
            for (std::size_t u = 0; u < lat.size(); ++u) {
                const std::size_t c = upward ? count_above(lat, u, mu) : count_below(lat, u, mu);
                auto [it, fresh] = reference.emplace(lat.type(u), std::make_pair(u, c));
                if (fresh || it->second.second == c)
                    continue;
                (upward ? report.up : report.down) = false;
                if (!report.witness)
                    report.witness = EnumerabilityWitness{it->second.first, u, mu, it->second.second, c, upward};
            }
            if (upward ? !report.up : !report.down)
                break;
        }
    }
    return report;
}

DisjointnessReport check_layer_disjointness_theorem(const ConcreteLattice& lat, unsigned l, unsigned r)
{
    DisjointnessReport report;
    const auto layer = lat.of_height(l);
    const unsigned top = lat.height(lat.top());
    const std::size_t n = lat.size();

    std::vector<BitSet> height_mask(top + 1, BitSet(n));
    for (std::size_t v = 0; v < n; ++v)
        height_mask[lat.height(v)].insert(v);

    std::vector<BitSet> spheres;
    spheres.reserve(layer.size());
    for (auto u : layer) {
        BitSet s(n);
        for (auto v : oracle_sphere(lat, u, r))
            s.insert(v);
        spheres.push_back(std::move(s));
    }

    std::vector<unsigned> ts;
    for (long t = static_cast<long>(l) - static_cast<long>(r); t <= static_cast<long>(l + r); t += 2)
        if (t >= 0 && t <= static_cast<long>(top))
            ts.push_back(static_cast<unsigned>(t));

    for (std::size_t i = 0; i < layer.size(); ++i)
        for (std::size_t j = i; j < layer.size(); ++j) {
            ++report.pairs_checked;
            const BitSet common = spheres[i].intersect(spheres[j]);
            const bool whole_disjoint = !common.first().has_value();
            for (unsigned t : ts) {
                const bool layer_disjoint = !common.intersect(height_mask[t]).first().has_value();
                if (whole_disjoint != layer_disjoint) {
                    report.holds = false;
                    if (!report.violation)
                        report.violation = std::make_tuple(layer[i], layer[j], t);
                }
            }
        }
    return report;
}

unsigned minimum_distance(const ConcreteLattice& lat, const std::vector<std::size_t>& code)
{
    unsigned best = 0;
    bool any = false;
    for (std::size_t i = 0; i < code.size(); ++i)
        for (std::size_t j = i + 1; j < code.size(); ++j) {
            const unsigned d = distance(lat, code[i], code[j]);
            if (!any || d < best)
                best = d;
            any = true;
        }
    return best;
}

namespace {

// Maximum clique with greedy-colouring bounds.
class CliqueSearch {
public:
    CliqueSearch(std::vector<BitSet> adjacency, std::size_t node_cap)
        : adj_(std::move(adjacency))
        , node_cap_(node_cap)
    {
    }

    std::vector<std::size_t> run()
    {
        std::vector<std::size_t> all(adj_.size());
        std::iota(all.begin(), all.end(), 0);
        // higher degree first tends to find large cliques early
        std::stable_sort(all.begin(), all.end(),
                         [&](std::size_t a, std::size_t b) { return adj_[a].count() > adj_[b].count(); });
        // greedy clique as the incumbent, so an aborted search still returns something useful
        for (auto v : all)
            if (std::all_of(best_.begin(), best_.end(), [&](std::size_t w) { return adj_[v].contains(w); }))
                best_.push_back(v);
        std::vector<std::size_t> current;
        expand(all, current);
        return best_;
    }

    bool exact() const noexcept { return !aborted_; }

private:
    void expand(std::vector<std::size_t> candidates, std::vector<std::size_t>& current)
    {
        if (aborted_)
            return;
        if (++nodes_ > node_cap_) {
            aborted_ = true;
            return;
        }
        std::vector<unsigned> colour;
        colour_sort(candidates, colour);
        for (std::size_t i = candidates.size(); i-- > 0;) {
            if (current.size() + colour[i] <= best_.size())
                return;
            const auto v = candidates[i];
            current.push_back(v);
            std::vector<std::size_t> next;
            for (std::size_t k = 0; k < i; ++k)
                if (adj_[v].contains(candidates[k]))
                    next.push_back(candidates[k]);
            if (next.empty()) {
                if (current.size() > best_.size())
                    best_ = current;
            } else {
                expand(std::move(next), current);
            }
            current.pop_back();
            if (aborted_)
                return;
        }
    }

    // Reorders candidates by colour class; colour[i] bounds the clique within candidates[0..i].
    void colour_sort(std::vector<std::size_t>& candidates, std::vector<unsigned>& colour) const
    {
        std::vector<std::vector<std::size_t>> classes;
        for (auto v : candidates) {
            std::size_t c = 0;
            for (; c < classes.size(); ++c) {
                bool clash = false;
                for (auto w : classes[c])
                    if (adj_[v].contains(w)) {
                        clash = true;
                        break;
                    }
                if (!clash)
                    break;
            }
            if (c == classes.size())
                classes.emplace_back();
            classes[c].push_back(v);
        }
        candidates.clear();
        colour.clear();
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (auto v : classes[c]) {
                candidates.push_back(v);
                colour.push_back(static_cast<unsigned>(c + 1));
            }
    }

    std::vector<BitSet> adj_;
    std::size_t node_cap_;
    std::size_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<std::size_t> best_;
};

} // namespace

CodeSearchResult max_code_search(const ConcreteLattice& lat, const CodeConstraint& constraint, unsigned min_distance,
                                 std::size_t node_cap)
{
    if (constraint.height.has_value() == constraint.type.has_value())
        throw ValidationError("code search needs exactly one of a height or a type constraint");
    const auto words = constraint.height ? lat.of_height(*constraint.height) : lat.of_type(*constraint.type);
    const std::size_t n = words.size();

    std::vector<BitSet> adj(n, BitSet(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(lat, words[i], words[j]) >= min_distance) {
                adj[i].insert(j);
                adj[j].insert(i);
            }

    CliqueSearch search(std::move(adj), node_cap);
    const auto clique = search.run();
    CodeSearchResult result;
    result.exact = search.exact();
    for (auto i : clique)
        result.code.push_back(words[i]);
    std::sort(result.code.begin(), result.code.end());
    return result;
}

std::string export_lattice_json(const ConcreteLattice& lat)
{
    nlohmann::ordered_json doc;
    doc["module"] = lat.module().to_string();
    doc["size"] = lat.size();
    doc["height"] = lat.height(lat.top());
    auto& elements = doc["elements"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < lat.size(); ++i) {
        nlohmann::ordered_json e;
        e["id"] = i;
        e["height"] = lat.height(i);
        e["type"] = lat.type(i).to_string();
        e["order"] = lat.sub(i).count();
        e["covers"] = lat.upper_covers(i);
        auto& gens = e["generators"] = nlohmann::ordered_json::array();
        for (auto g : lat.generators(i))
            gens.push_back(lat.module().decode(g));
        elements.push_back(std::move(e));
    }
    return doc.dump(2);
}

} // namespace latsphere
