#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "latsphere/channel.hpp"
#include "latsphere/error.hpp"

using namespace latsphere;

namespace {

Submodule span_of(const ConcreteModule& m, const std::vector<std::vector<long>>& gens)
{
    std::vector<Element> g;
    for (const auto& c : gens)
        g.push_back(m.encode(c));
    return span(m, g);
}

} // namespace

TEST_CASE("era and err")
{
    const auto m = ConcreteModule::parse("Z:p=2,s=2,N=2");
    const auto u = span_of(m, {{1, 0}});
    const auto v = span_of(m, {{2, 0}, {0, 2}});
    CHECK(era_err(m, u, v) == EraErr{1, 1, 2});
    CHECK(era_err(m, u, u) == EraErr{0, 0, 0});
    CHECK(era_err(m, span_of(m, {{1, 0}, {0, 1}}), span_of(m, {{2, 0}})) == EraErr{3, 0, 3});

    const auto lat = enumerate_lattice(m);
    for (std::size_t a = 0; a < lat.size(); ++a)
        for (std::size_t b = 0; b < lat.size(); ++b) {
            const auto e = era_err(lat, a, b);
            CHECK(e == era_err(m, lat.sub(a), lat.sub(b)));
            CHECK(e.dist == e.era + e.err);
            CHECK(e.dist == distance(lat, a, b));
        }
}

TEST_CASE("topology validation")
{
    CHECK_NOTHROW(NetworkTopology::butterfly());
    const auto line = NetworkTopology::line(3);
    CHECK(line.vertices().size() == 4);
    CHECK(line.topological_order() == std::vector<std::size_t>{0, 1, 2, 3});

    const auto parsed = NetworkTopology::from_json(R"({"vertices":["s","a","t"],"source":"s","sink":"t",
        "edges":[{"from":"s","to":"a"},{"from":"a","to":"t","rounds":[1]}]})");
    CHECK(parsed.edges().size() == 2);
    CHECK(parsed.edges()[1].active(1));
    CHECK_FALSE(parsed.edges()[1].active(0));
    CHECK(NetworkTopology::from_json(parsed.to_json()).to_json() == parsed.to_json());

    CHECK_THROWS_AS(NetworkTopology::from_json(R"({"vertices":["s","a","t"],"source":"s","sink":"t",
        "edges":[{"from":"s","to":"a"},{"from":"a","to":"s"},{"from":"a","to":"t"}]})"),
                    ValidationError);
    CHECK_THROWS_AS(NetworkTopology::from_json(R"({"vertices":["s","a","t"],"source":"s","sink":"t",
        "edges":[{"from":"s","to":"a"},{"from":"a","to":"b"}]})"),
                    ValidationError);
    CHECK_THROWS_AS(NetworkTopology::from_json(R"({"vertices":["s","a","t"],"source":"s","sink":"t",
        "edges":[{"from":"s","to":"a"}]})"),
                    ValidationError);
    CHECK_THROWS_AS(NetworkTopology::from_json(R"({"vertices":["s","t"],"source":"s","sink":"t"})"), ValidationError);
    CHECK_THROWS_AS(NetworkTopology::from_json("not json"), ValidationError);
    CHECK_THROWS_AS(NetworkTopology({"s", "a", "t"}, {{1, 0, {}}, {0, 2, {}}, {2, 1, {}}}, 1, 2), ValidationError);
    CHECK_THROWS_AS(NetworkTopology({"s", "t"}, {{0, 0, {}}}, 0, 1), ValidationError);
}

TEST_CASE("error-free line delivers U")
{
    const auto m = ConcreteModule::parse("Z:p=2,s=2,N=3");
    const std::vector<Element> gens{m.encode({1, 0, 0}), m.encode({0, 2, 1})};
    const auto o = simulate(NetworkTopology::line(2), m, gens, {}, {7, 12, 2});
    CHECK(o.received == o.sent);
    CHECK(o.era == 0);
    CHECK(o.err == 0);
    CHECK(o.dist == 0);
    CHECK(o.injected_error_rank_profile == Partition{});
}

TEST_CASE("nothing sent means total erasure")
{
    const auto m = ConcreteModule::parse("Z:p=2,s=2,N=2");
    const std::vector<Element> gens{m.encode({1, 0}), m.encode({0, 1})};
    const auto o = simulate(NetworkTopology::butterfly(), m, gens, {}, {3, 0, 1});
    CHECK(o.received.count() == 1);
    CHECK(o.era == 4);
    CHECK(o.err == 0);
    CHECK(o.dist == 4);
}

TEST_CASE("butterfly with an injected error")
{
    const auto m = ConcreteModule::parse("Z:p=2,s=2,N=2");
    const std::vector<Element> gens{m.encode({1, 0})};
    const Element e = m.encode({0, 1});
    const unsigned he = height_of(m, span(m, {e}));
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto o = simulate(NetworkTopology::butterfly(), m, gens, {{4, e}}, {seed, 3, 1});
        CHECK(o.err <= he);
        CHECK(o.dist == o.era + o.err);
        CHECK(o.injected_error_rank_profile == Partition{2});
        CHECK(o.received.subset_of(span(m, {gens[0], e})));
    }
}

TEST_CASE("simulation is deterministic")
{
    const auto m = ConcreteModule::parse("F:q=3,N=3");
    const std::vector<Element> gens{m.encode({1, 2, 0}), m.encode({0, 1, 1})};
    const auto a = simulate(NetworkTopology::butterfly(), m, gens, {{2, m.encode({1, 1, 1})}}, {99, 2, 1});
    const auto b = simulate(NetworkTopology::butterfly(), m, gens, {{2, m.encode({1, 1, 1})}}, {99, 2, 1});
    CHECK(a.received == b.received);
    CHECK(outcome_to_json(m, a) == outcome_to_json(m, b));
    const auto j = nlohmann::json::parse(outcome_to_json(m, a));
    for (const char* key : {"sent", "received", "era", "err", "dist", "injected_error_rank_profile"})
        CHECK(j.contains(key));
}

TEST_CASE("the identity over ten thousand runs")
{
    const std::vector<ConcreteModule> modules{ConcreteModule::parse("Z:p=2,s=2,N=2"), ConcreteModule::parse("Z:p=2,s=3,N=2"),
                                              ConcreteModule::parse("F:q=2,N=4"), ConcreteModule::parse("F:q=3,N=3")};
    const std::vector<NetworkTopology> topologies{NetworkTopology::line(1), NetworkTopology::line(3),
                                                  NetworkTopology::butterfly()};
    std::mt19937_64 pick(2024);
    std::size_t violations = 0, not_below = 0;
    for (std::uint64_t run = 0; run < 10000; ++run) {
        const auto& m = modules[run % modules.size()];
        const auto& topo = topologies[(run / modules.size()) % topologies.size()];
        std::uniform_int_distribution<Element> elem(0, static_cast<Element>(m.size() - 1));
        std::vector<Element> gens(1 + pick() % 3);
        for (auto& g : gens)
            g = elem(pick);
        std::vector<ErrorInjection> errors;
        const bool noisy = run % 2 == 1;
        if (noisy)
            errors.push_back({pick() % topo.edges().size(), elem(pick)});
        const auto o = simulate(topo, m, gens, errors, {run, 1 + static_cast<unsigned>(pick() % 3), 1});
        if (o.dist != o.era + o.err)
            ++violations;
        if (!noisy && !o.received.subset_of(o.sent))
            ++not_below;
    }
    CHECK(violations == 0);
    CHECK(not_below == 0);
}

TEST_CASE("minimum distance decoding")
{
    const auto lat = enumerate_lattice(ConcreteModule::parse("F:q=2,N=4"));
    const auto code = max_code_search(lat, CodeConstraint::of_height(2), 4).code;
    REQUIRE(code.size() == 5);
    for (auto c : code) {
        const auto exact = md_decode(lat, code, c);
        CHECK(exact.unique());
        CHECK(exact.nearest.front() == c);
        CHECK(exact.distance == 0);
        for (auto v : oracle_sphere(lat, c, 1)) {
            const auto d = md_decode(lat, code, v);
            CHECK(d.unique());
            CHECK(d.nearest.front() == c);
        }
    }
    // the zero subspace is at distance 2 from every codeword
    const auto tie = md_decode(lat, code, lat.bottom());
    CHECK(tie.nearest.size() == code.size());
    CHECK(tie.distance == 2);
    CHECK_THROWS_AS(md_decode(lat, {}, 0), ValidationError);
}
