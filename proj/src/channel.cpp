#include "latsphere/channel.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "latsphere/error.hpp"

namespace latsphere {

EraErr era_err(const ConcreteLattice& lat, std::size_t u, std::size_t v)
{
    const unsigned m = lat.height(lat.meet(u, v));
    EraErr out;
    out.era = lat.height(u) - m;
    out.err = lat.height(v) - m;
    out.dist = lat.height(lat.join(u, v)) - m;
    return out;
}

EraErr era_err(const ConcreteModule& module, const Submodule& u, const Submodule& v)
{
    const unsigned m = height_of(module, u.intersect(v));
    const unsigned j = height_of(module, span_with(module, u, generators_of(module, v)));
    EraErr out;
    out.era = height_of(module, u) - m;
    out.err = height_of(module, v) - m;
    out.dist = j - m;
    return out;
}

bool NetworkEdge::active(unsigned round) const
{
    return rounds.empty() || std::find(rounds.begin(), rounds.end(), round) != rounds.end();
}

NetworkTopology::NetworkTopology(std::vector<std::string> vertices, std::vector<NetworkEdge> edges, std::size_t source,
                                 std::size_t sink)
    : vertices_(std::move(vertices))
    , edges_(std::move(edges))
    , source_(source)
    , sink_(sink)
{
    const std::size_t n = vertices_.size();
    if (n == 0)
        throw ValidationError("topology has no vertices");
    if (source_ >= n || sink_ >= n)
        throw ValidationError("source or sink is not a vertex");
    if (source_ == sink_)
        throw ValidationError("source and sink must differ");

    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& e : edges_) {
        if (e.from >= n || e.to >= n)
            throw ValidationError("edge endpoint is not a vertex");
        if (e.from == e.to)
            throw ValidationError("self-loop at vertex '" + vertices_[e.from] + "'");
        out[e.from].push_back(e.to);
        ++indeg[e.to];
    }
    if (indeg[source_] != 0)
        throw ValidationError("source '" + vertices_[source_] + "' has incoming edges");

    // Kahn, smallest index first so the order is deterministic
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0)
            ready.push_back(v);
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        const std::size_t v = *it;
        ready.erase(it);
        order_.push_back(v);
        for (auto w : out[v])
            if (--indeg[w] == 0)
                ready.push_back(w);
    }
    if (order_.size() != n)
        throw ValidationError("topology has a directed cycle");

    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{source_};
    seen[source_] = true;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto w : out[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    if (!seen[sink_])
        throw ValidationError("sink '" + vertices_[sink_] + "' is not reachable from the source");
}

NetworkTopology NetworkTopology::from_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("topology is not valid JSON: ") + e.what());
    }
    try {
        std::vector<std::string> names = doc.at("vertices").get<std::vector<std::string>>();
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!index.emplace(names[i], i).second)
                throw ValidationError("duplicate vertex '" + names[i] + "'");
        auto lookup = [&](const nlohmann::json& j) {
            const auto name = j.get<std::string>();
            auto it = index.find(name);
            if (it == index.end())
                throw ValidationError("unknown vertex '" + name + "'");
            return it->second;
        };
        std::vector<NetworkEdge> edges;
        for (const auto& e : doc.at("edges")) {
            NetworkEdge edge;
            edge.from = lookup(e.at("from"));
            edge.to = lookup(e.at("to"));
            if (e.contains("rounds"))
                edge.rounds = e.at("rounds").get<std::vector<unsigned>>();
            edges.push_back(std::move(edge));
        }
        return NetworkTopology(std::move(names), std::move(edges), lookup(doc.at("source")), lookup(doc.at("sink")));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed topology: ") + e.what());
    }
}

std::string NetworkTopology::to_json() const
{
    nlohmann::ordered_json doc;
    doc["vertices"] = vertices_;
    doc["source"] = vertices_[source_];
    doc["sink"] = vertices_[sink_];
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : edges_) {
        nlohmann::ordered_json j;
        j["from"] = vertices_[e.from];
        j["to"] = vertices_[e.to];
        if (!e.rounds.empty())
            j["rounds"] = e.rounds;
        edges.push_back(std::move(j));
    }
    return doc.dump(2);
}

NetworkTopology NetworkTopology::line(std::size_t edges)
{
    if (edges == 0)
        throw ValidationError("a line needs at least one edge");
    std::vector<std::string> names{"s"};
    std::vector<NetworkEdge> list;
    for (std::size_t i = 1; i < edges; ++i)
        names.push_back("v" + std::to_string(i));
    names.push_back("t");
    for (std::size_t i = 0; i < edges; ++i)
        list.push_back({i, i + 1, {}});
    return NetworkTopology(std::move(names), std::move(list), 0, edges);
}

NetworkTopology NetworkTopology::butterfly()
{
    // 0 s, 1 a, 2 b, 3 c, 4 d, 5 t
    std::vector<NetworkEdge> edges{{0, 1, {}}, {0, 2, {}}, {1, 3, {}}, {2, 3, {}},
                                   {3, 4, {}}, {1, 5, {}}, {4, 5, {}}, {2, 5, {}}};
    return NetworkTopology({"s", "a", "b", "c", "d", "t"}, std::move(edges), 0, 5);
}

std::vector<Element> generators_of(const ConcreteModule& module, const Submodule& sub)
{
    std::vector<Element> gens;
    Submodule acc = span(module, {});
    for (auto x : sub.members()) {
        if (acc.contains(x))
            continue;
        gens.push_back(static_cast<Element>(x));
        acc = span_with(module, acc, {static_cast<Element>(x)});
    }
    return gens;
}

ChannelOutcome simulate(const NetworkTopology& topology, const ConcreteModule& module,
                        const std::vector<Element>& sent_generators, const std::vector<ErrorInjection>& errors,
                        const SimulationOptions& options)
{
    for (auto g : sent_generators)
        if (g >= module.size())
            throw ValidationError("generator " + std::to_string(g) + " is not an element of " + module.to_string());
    for (const auto& e : errors) {
        if (e.edge >= topology.edges().size())
            throw ValidationError("error injected on unknown edge " + std::to_string(e.edge));
        if (e.value >= module.size())
            throw ValidationError("injected error is not an element of " + module.to_string());
    }

    std::mt19937_64 rng(options.seed);
    long ring_size = 1;
    for (unsigned i = 0; i < module.max_exponent(); ++i)
        ring_size *= static_cast<long>(module.prime());
    std::uniform_int_distribution<long> coeff(0, ring_size - 1);

    const auto& edges = topology.edges();
    std::vector<std::vector<std::size_t>> out_edges(topology.vertices().size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        out_edges[edges[i].from].push_back(i);

    std::vector<std::vector<Element>> buffer(topology.vertices().size());
    buffer[topology.source()] = sent_generators;
    std::vector<bool> injected(errors.size(), false);
    std::vector<Element> delivered_errors;

    for (unsigned round = 0; round < options.rounds; ++round) {
        for (auto v : topology.topological_order()) {
            for (auto ei : out_edges[v]) {
                const auto& edge = edges[ei];
                if (!edge.active(round))
                    continue;
                // snapshot: packets sent this round are built from what v held before sending
                const std::vector<Element> held = buffer[v];
                for (unsigned k = 0; k < options.per_edge; ++k) {
                    Element y = module.zero();
                    for (auto m : held)
                        y = module.add(y, module.scale(coeff(rng), m));
                    buffer[edge.to].push_back(y);
                }
                for (std::size_t j = 0; j < errors.size(); ++j) {
                    if (injected[j] || errors[j].edge != ei)
                        continue;
                    injected[j] = true;
                    buffer[edge.to].push_back(errors[j].value);
                    delivered_errors.push_back(errors[j].value);
                }
            }
        }
    }

    ChannelOutcome outcome;
    outcome.sent = span(module, sent_generators);
    outcome.received = span(module, buffer[topology.sink()]);
    outcome.packets_at_sink = buffer[topology.sink()].size();
    const auto e = era_err(module, outcome.sent, outcome.received);
    outcome.era = e.era;
    outcome.err = e.err;
    outcome.dist = e.dist;
    outcome.injected_error_rank_profile = type_of_submodule(module, span(module, delivered_errors));
    return outcome;
}

std::string outcome_to_json(const ConcreteModule& module, const ChannelOutcome& outcome)
{
    auto describe = [&](const Submodule& s) {
        nlohmann::ordered_json j;
        j["height"] = height_of(module, s);
        j["type"] = type_of_submodule(module, s).to_string();
        auto& gens = j["generators"] = nlohmann::ordered_json::array();
        for (auto g : generators_of(module, s))
            gens.push_back(module.decode(g));
        return j;
    };
    nlohmann::ordered_json doc;
    doc["module"] = module.to_string();
    doc["sent"] = describe(outcome.sent);
    doc["received"] = describe(outcome.received);
    doc["era"] = outcome.era;
    doc["err"] = outcome.err;
    doc["dist"] = outcome.dist;
    doc["injected_error_rank_profile"] = outcome.injected_error_rank_profile.to_string();
    doc["packets_at_sink"] = outcome.packets_at_sink;
    return doc.dump(2);
}

DecodeResult md_decode(const ConcreteLattice& lat, const std::vector<std::size_t>& code, std::size_t v)
{
    if (code.empty())
        throw ValidationError("md_decode needs a non-empty code");
    DecodeResult result;
    result.distance = distance(lat, code.front(), v);
    for (auto c : code) {
        const unsigned d = distance(lat, c, v);
        if (d < result.distance) {
            result.distance = d;
            result.nearest.clear();
        }
        if (d == result.distance)
            result.nearest.push_back(c);
    }
    return result;
}

} // namespace latsphere
