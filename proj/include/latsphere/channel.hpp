#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latsphere/oracle.hpp"
#include "latsphere/partition.hpp"

namespace latsphere {

struct EraErr {
    unsigned era = 0;  // h(U) − h(U∧V)
    unsigned err = 0;  // h(V) − h(U∧V)
    unsigned dist = 0; // h(U∨V) − h(U∧V)

    bool operator==(const EraErr&) const = default;
};

EraErr era_err(const ConcreteLattice& lat, std::size_t u, std::size_t v);
EraErr era_err(const ConcreteModule& module, const Submodule& u, const Submodule& v);

struct NetworkEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    // rounds in which the edge delivers; empty means every round
    std::vector<unsigned> rounds;

    bool active(unsigned round) const;
};

/* JSON form:
 *   {"vertices": ["s", "a", "t"], "source": "s", "sink": "t",
 *    "edges": [{"from": "s", "to": "a"}, {"from": "a", "to": "t", "rounds": [0, 2]}]}
 * Edges are referred to by their position in "edges".
 */
class NetworkTopology {
public:
    NetworkTopology(std::vector<std::string> vertices, std::vector<NetworkEdge> edges, std::size_t source,
                    std::size_t sink);

    static NetworkTopology from_json(const std::string& text);
    std::string to_json() const;

    // s → a → ... : a path of the given number of edges
    static NetworkTopology line(std::size_t edges);
    // s, a, b, c, d, t with the bottleneck edge c → d
    static NetworkTopology butterfly();

    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::vector<NetworkEdge>& edges() const noexcept { return edges_; }
    std::size_t source() const noexcept { return source_; }
    std::size_t sink() const noexcept { return sink_; }
    const std::vector<std::size_t>& topological_order() const noexcept { return order_; }

private:
    std::vector<std::string> vertices_;
    std::vector<NetworkEdge> edges_;
    std::size_t source_;
    std::size_t sink_;
    std::vector<std::size_t> order_;
};

struct ErrorInjection {
    std::size_t edge = 0;
    Element value = 0;
};

struct SimulationOptions {
    std::uint64_t seed = 1;
    unsigned rounds = 1;
    unsigned per_edge = 1; // combinations sent on an active edge per round
};

struct ChannelOutcome {
    Submodule sent;
    Submodule received;
    unsigned era = 0;
    unsigned err = 0;
    unsigned dist = 0;
    // type of the span of the error packets that were actually delivered
    Partition injected_error_rank_profile;
    std::size_t packets_at_sink = 0;
};

/* Random linear network coding. The source holds the generators of U; in each round
 * every vertex, in topological order, sends per_edge random combinations of everything
 * it has received so far along each active out-edge. An injected error is one extra
 * packet on its edge in the edge's first active round. V is the span of what reached
 * the sink. Coefficients are uniform over Z_{p^s}. */
ChannelOutcome simulate(const NetworkTopology& topology, const ConcreteModule& module,
                        const std::vector<Element>& sent_generators, const std::vector<ErrorInjection>& errors,
                        const SimulationOptions& options);

std::string outcome_to_json(const ConcreteModule& module, const ChannelOutcome& outcome);

// A small generating set of a submodule, chosen greedily in element order.
std::vector<Element> generators_of(const ConcreteModule& module, const Submodule& sub);

struct DecodeResult {
    std::vector<std::size_t> nearest; // every codeword at the minimum distance
    unsigned distance = 0;
    bool unique() const noexcept { return nearest.size() == 1; }
};

DecodeResult md_decode(const ConcreteLattice& lat, const std::vector<std::size_t>& code, std::size_t v);

} // namespace latsphere
