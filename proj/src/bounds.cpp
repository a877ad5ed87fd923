#include "latsphere/bounds.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latsphere/error.hpp"

namespace latsphere {

std::string to_string(BoundKind kind)
{
    switch (kind) {
    case BoundKind::PackingUpper:
        return "packing";
    case BoundKind::CoveringLowerExistence:
        return "covering";
    case BoundKind::SingletonUpper:
        return "singleton";
    }
    return "unknown";
}

LayerSelector LayerSelector::parse(const std::string& text)
{
    if (!text.empty() && text.front() == '[')
        return of_type(Partition::parse(text));
    try {
        std::size_t used = 0;
        const unsigned long t = std::stoul(text, &used);
        if (used != text.size())
            throw ValidationError("");
        return of_height(static_cast<unsigned>(t));
    } catch (const std::exception&) {
        throw ValidationError("layer must be a height like 2 or a type like [2,1], got '" + text + "'");
    }
}

std::string LayerSelector::to_string() const
{
    if (type)
        return "phi=" + type->to_string();
    if (height)
        return "t=" + std::to_string(*height);
    return "-";
}

namespace {

unsigned selector_weight(const LayerSelector& sel)
{
    return sel.type ? sel.type->weight() : *sel.height;
}

unsigned code_height(const CodeConstraint& c)
{
    return c.type ? c.type->weight() : *c.height;
}

BigCount ceil_div(const BigCount& a, const BigCount& b)
{
    return (a + b - 1) / b;
}

// Uniform view of "how the lattice counts" for the bound recipes below.
class EnumerableView {
public:
    using Centre = Partition;

    explicit EnumerableView(const CountTable& t) : table_(t) {}

    unsigned top_height() const { return table_.profile().top_height(); }

    std::vector<Centre> centres(const CodeConstraint& c) const
    {
        if (c.type) {
            if (!leq(*c.type, table_.top_type()))
                return {};
            return {*c.type};
        }
        if (*c.height > top_height())
            return {};
        return table_.types_of_height(*c.height);
    }

    std::vector<Partition> types() const { return table_.types(); }
    std::vector<Partition> types_of_height(unsigned h) const { return table_.types_of_height(h); }

    BigCount layer_count(const LayerSelector& sel) const
    {
        if (sel.type)
            return leq(*sel.type, table_.top_type()) ? table_.type_count(*sel.type) : BigCount(0);
        return *sel.height <= top_height() ? table_.height_count(*sel.height) : BigCount(0);
    }

    BigCount sphere(const Centre& u, unsigned r, const LayerSelector& sel) const
    {
        if (sel.type)
            return leq(*sel.type, table_.top_type()) ? table_.sphere_layer_by_type(u, r, *sel.type) : BigCount(0);
        return table_.sphere_layer_by_height(u, r, *sel.height);
    }

    // min over elements w of type phi of |{x ≤ w : h(x) = level}|; type-invariant here
    BigCount min_below_of_type(const Partition& phi, unsigned level) const
    {
        return table_.height_count_below(phi, level);
    }

private:
    const CountTable& table_;
};

class ConcreteView {
public:
    using Centre = std::size_t;

    explicit ConcreteView(const ConcreteLattice& lat) : lat_(lat) {}

    unsigned top_height() const { return lat_.height(lat_.top()); }

    std::vector<Centre> centres(const CodeConstraint& c) const
    {
        return c.type ? lat_.of_type(*c.type) : lat_.of_height(*c.height);
    }

    std::vector<Partition> types() const { return lat_.types_present(); }

    std::vector<Partition> types_of_height(unsigned h) const
    {
        std::vector<Partition> out;
        for (const auto& mu : lat_.types_present())
            if (mu.weight() == h)
                out.push_back(mu);
        return out;
    }

    BigCount layer_count(const LayerSelector& sel) const
    {
        return sel.type ? lat_.of_type(*sel.type).size() : lat_.of_height(*sel.height).size();
    }

    BigCount sphere(const Centre& u, unsigned r, const LayerSelector& sel) const
    {
        return oracle_sphere(lat_, u, r, SphereFilter{sel.height, sel.type}).size();
    }

    BigCount min_below_of_type(const Partition& phi, unsigned level) const
    {
        std::optional<std::size_t> best;
        for (auto w : lat_.of_type(phi)) {
            std::size_t c = 0;
            for (std::size_t x = 0; x < lat_.size(); ++x)
                if (lat_.height(x) == level && lat_.leq(x, w))
                    ++c;
            if (!best || c < *best)
                best = c;
        }
        return best.value_or(0);
    }

private:
    const ConcreteLattice& lat_;
};

void require_constraint(const BoundRequest& req)
{
    if (req.constraint.height.has_value() == req.constraint.type.has_value())
        throw ValidationError("a bound needs exactly one of a code height or a code type");
    if (req.min_distance < 1)
        throw ValidationError("minimum distance D must be >= 1");
}

std::size_t pick(const std::vector<BoundRow>& rows, bool minimise)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (minimise ? rows[i].bound < rows[best].bound : rows[i].bound > rows[best].bound)
            best = i;
    return best;
}

template <class View>
BoundResult packing_impl(const View& view, const BoundRequest& req)
{
    require_constraint(req);
    const auto centres = view.centres(req.constraint);
    if (centres.empty())
        throw ValidationError("the code layer is empty");
    const unsigned l = code_height(req.constraint);
    const unsigned H = view.top_height();
    const unsigned r = (req.min_distance - 1) / 2;

    auto eval = [&](const LayerSelector& sel, unsigned radius) -> std::optional<BoundRow> {
        std::optional<BigCount> den;
        for (const auto& u : centres) {
            BigCount s = view.sphere(u, radius, sel);
            if (!den || s < *den)
                den = std::move(s);
        }
        if (!den || *den == 0)
            return std::nullopt;
        BoundRow row;
        row.selector = sel;
        row.radius = radius;
        row.numerator = view.layer_count(sel);
        row.denominator = *den;
        row.bound = row.numerator / row.denominator;
        const long gap = static_cast<long>(selector_weight(sel)) - static_cast<long>(l);
        row.parity_matched = (std::abs(gap) % 2) == (radius % 2);
        return row;
    };

    BoundResult result;
    result.kind = BoundKind::PackingUpper;
    if (req.layer) {
        auto row = eval(*req.layer, r);
        if (!row)
            throw ValidationError("sphere layer " + req.layer->to_string() + " at radius " + std::to_string(r) +
                                  " is empty; that selector gives no bound");
        result.rows.push_back(std::move(*row));
    } else if (req.constraint.height) {
        auto family = [&](unsigned radius) {
            const unsigned lo = l > radius ? l - radius : 0;
            const unsigned hi = std::min(H, l + radius);
            for (unsigned t = lo; t <= hi; ++t)
                if (auto row = eval(LayerSelector::of_height(t), radius))
                    result.rows.push_back(std::move(*row));
        };
        family(r);
        // radius r−1 spheres are disjoint too; their layers are the parity-matched ones when r is odd
        if (r % 2 == 1)
            family(r - 1);
    } else {
        for (const auto& phi : view.types())
            if (auto row = eval(LayerSelector::of_type(phi), r))
                result.rows.push_back(std::move(*row));
    }
    if (result.rows.empty())
        throw ValidationError("no admissible packing selector");
    result.best = pick(result.rows, true);
    return result;
}

template <class View>
BoundResult covering_impl(const View& view, const BoundRequest& req)
{
    require_constraint(req);
    const auto centres = view.centres(req.constraint);
    if (centres.empty())
        throw ValidationError("the code layer is empty");
    if (req.layer && req.layer->type.has_value() != req.constraint.type.has_value())
        throw ValidationError("covering bound pairs a height constraint with a height layer and a type constraint "
                              "with a type layer");
    const unsigned l = code_height(req.constraint);
    const unsigned H = view.top_height();
    // codewords share a height, so their distances are even and an odd D acts as D+1;
    // D = 1 then gives radius 0, the whole layer
    const unsigned even_d = req.min_distance + req.min_distance % 2;
    const unsigned base = even_d - 2;

    auto eval = [&](const LayerSelector& sel) -> std::optional<BoundRow> {
        const unsigned w = selector_weight(sel);
        const unsigned radius = base + (w > l ? w - l : l - w);
        BigCount den = 0;
        for (const auto& u : centres)
            den = std::max(den, view.sphere(u, radius, sel));
        if (den == 0)
            return std::nullopt;
        BoundRow row;
        row.selector = sel;
        row.radius = radius;
        row.numerator = view.layer_count(sel);
        row.denominator = den;
        row.bound = ceil_div(row.numerator, row.denominator);
        row.parity_matched = true;
        return row;
    };

    BoundResult result;
    result.kind = BoundKind::CoveringLowerExistence;
    if (req.min_distance % 2 == 1)
        result.notes.push_back("odd minimum distance: same-height distances are even, so D = " +
                               std::to_string(req.min_distance) + " is evaluated as D = " + std::to_string(even_d));
    if (req.layer) {
        if (req.layer->type && !leq(*req.constraint.type, *req.layer->type))
            throw ValidationError("covering bound needs mu <= phi, got mu=" + req.constraint.type->to_string() +
                                  " phi=" + req.layer->type->to_string());
        if (req.layer->height && *req.layer->height > H)
            throw ValidationError("layer height exceeds h(1_L)");
        auto row = eval(*req.layer);
        if (!row)
            throw ValidationError("empty covering layer " + req.layer->to_string());
        result.rows.push_back(std::move(*row));
    } else if (req.constraint.height) {
        for (unsigned t = 0; t <= H; ++t)
            if (auto row = eval(LayerSelector::of_height(t)))
                result.rows.push_back(std::move(*row));
    } else {
        for (const auto& phi : view.types())
            if (leq(*req.constraint.type, phi))
                if (auto row = eval(LayerSelector::of_type(phi)))
                    result.rows.push_back(std::move(*row));
    }
    if (result.rows.empty())
        throw ValidationError("no admissible covering selector");
    result.best = pick(result.rows, false);
    return result;
}

template <class View>
BoundResult singleton_impl(const View& view, const BoundRequest& req)
{
    require_constraint(req);
    if (view.centres(req.constraint).empty())
        throw ValidationError("the code layer is empty");
    const unsigned l = code_height(req.constraint);
    const unsigned H = view.top_height();
    const unsigned D = req.min_distance;

    BoundResult result;
    result.kind = BoundKind::SingletonUpper;
    const unsigned t = D >= 2 ? (D - 2) / 2 : 0;
    if (D % 2 == 1)
        result.notes.push_back("odd minimum distance: puncturing depth taken as floor((D-2)/2) = " +
                               std::to_string(t) + "; convention unspecified for odd D");

    if (t > l) {
        // two height-l elements are at most 2l apart, so such a code has at most one word
        BoundRow row;
        row.selector = LayerSelector::of_height(l);
        row.radius = t;
        row.numerator = 1;
        row.denominator = 1;
        row.bound = 1;
        result.rows.push_back(row);
        result.notes.push_back("l - t < 0: the code has at most one codeword");
        return result;
    }
    const unsigned level = l - t;
    const unsigned top = H - t;

    auto eval = [&](const Partition& phi) {
        BoundRow row;
        row.selector = LayerSelector::of_type(phi);
        row.radius = t;
        row.numerator = view.min_below_of_type(phi, level);
        row.denominator = 1;
        row.bound = row.numerator;
        return row;
    };

    if (req.layer) {
        if (!req.layer->type || req.layer->type->weight() != top)
            throw ValidationError("singleton layer must be a type of height h(1_L) - t = " + std::to_string(top));
        const auto present = view.types_of_height(top);
        if (std::find(present.begin(), present.end(), *req.layer->type) == present.end())
            throw ValidationError("type " + req.layer->type->to_string() + " does not occur in the lattice");
        result.rows.push_back(eval(*req.layer->type));
    } else {
        for (const auto& phi : view.types_of_height(top))
            result.rows.push_back(eval(phi));
    }
    if (result.rows.empty())
        throw ValidationError("no element of height h(1_L) - t to puncture with");
    result.best = pick(result.rows, true);
    return result;
}

} // namespace

BoundResult packing_bound(const CountTable& table, const BoundRequest& req)
{
    return packing_impl(EnumerableView(table), req);
}

BoundResult covering_bound(const CountTable& table, const BoundRequest& req)
{
    return covering_impl(EnumerableView(table), req);
}

BoundResult singleton_bound(const CountTable& table, const BoundRequest& req)
{
    return singleton_impl(EnumerableView(table), req);
}

BoundResult packing_bound(const ConcreteLattice& lat, const BoundRequest& req)
{
    return packing_impl(ConcreteView(lat), req);
}

BoundResult covering_bound(const ConcreteLattice& lat, const BoundRequest& req)
{
    return covering_impl(ConcreteView(lat), req);
}

BoundResult singleton_bound(const ConcreteLattice& lat, const BoundRequest& req)
{
    return singleton_impl(ConcreteView(lat), req);
}

std::string format_bound_table(const BoundResult& result)
{
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"selector", "radius", "numerator", "denominator", "bound"});
    for (const auto& row : result.rows)
        cells.push_back({row.selector.to_string(), std::to_string(row.radius), to_decimal(row.numerator),
                         to_decimal(row.denominator), to_decimal(row.bound)});
    std::array<std::size_t, 5> width{};
    for (const auto& line : cells)
        for (std::size_t c = 0; c < 5; ++c)
            width[c] = std::max(width[c], line[c].size());

    std::ostringstream os;
    os << to_string(result.kind) << " bound: " << to_decimal(result.value()) << " at "
       << result.best_row().selector.to_string() << " (radius " << result.best_row().radius << ")\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        os << (i > 0 && i - 1 == result.best ? "* " : "  ");
        for (std::size_t c = 0; c < 5; ++c) {
            os << cells[i][c] << std::string(width[c] - cells[i][c].size(), ' ');
            os << (c + 1 < 5 ? "  " : "\n");
        }
    }
    for (const auto& note : result.notes)
        os << "note: " << note << "\n";
    return os.str();
}

std::string format_bound_csv(const BoundResult& result)
{
    std::ostringstream os;
    os << "selector,radius,numerator,denominator,bound\n";
    for (const auto& row : result.rows)
        os << row.selector.to_string() << ',' << row.radius << ',' << to_decimal(row.numerator) << ','
           << to_decimal(row.denominator) << ',' << to_decimal(row.bound) << '\n';
    return os.str();
}

std::string format_bound_json(const BoundResult& result)
{
    auto row_json = [](const BoundRow& row) {
        nlohmann::ordered_json j;
        j["selector"] = row.selector.to_string();
        j["radius"] = row.radius;
        j["numerator"] = to_decimal(row.numerator);
        j["denominator"] = to_decimal(row.denominator);
        j["bound"] = to_decimal(row.bound);
        j["parity_matched"] = row.parity_matched;
        return j;
    };
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(result.kind);
    doc["value"] = to_decimal(result.value());
    doc["best"] = row_json(result.best_row());
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : result.rows)
        rows.push_back(row_json(row));
    doc["notes"] = result.notes;
    return doc.dump(2);
}

} // namespace latsphere
