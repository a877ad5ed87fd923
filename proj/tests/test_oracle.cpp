#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latsphere/enumerable.hpp"
#include "latsphere/error.hpp"
#include "latsphere/oracle.hpp"

using namespace latsphere;

namespace {

const ConcreteLattice& z4z2()
{
    static const ConcreteLattice lat = enumerate_lattice(ConcreteModule::parse("Z:p=2,exps=[2,1]"));
    return lat;
}

const ConcreteLattice& z4z4()
{
    static const ConcreteLattice lat = enumerate_lattice(ConcreteModule::parse("Z:p=2,s=2,N=2"));
    return lat;
}

std::size_t index_of_span(const ConcreteLattice& lat, const std::vector<std::vector<long>>& gens)
{
    std::vector<Element> g;
    for (const auto& c : gens)
        g.push_back(lat.module().encode(c));
    return lat.index_of(span(lat.module(), g)).value();
}

std::map<Partition, std::size_t> type_histogram(const ConcreteLattice& lat)
{
    std::map<Partition, std::size_t> h;
    for (std::size_t i = 0; i < lat.size(); ++i)
        ++h[lat.type(i)];
    return h;
}

Submodule annihilator(const ConcreteModule& m, const Submodule& u)
{
    Submodule out(m.size());
    const auto members = u.members();
    for (Element x = 0; x < m.size(); ++x) {
        bool kills = true;
        for (auto y : members)
            if (m.pairing(x, static_cast<Element>(y)) != 0) {
                kills = false;
                break;
            }
        if (kills)
            out.insert(x);
    }
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("module arithmetic")
{
    const auto m = ConcreteModule::parse("Z:p=2,exps=[2,1]");
    CHECK(m.size() == 8);
    CHECK(m.exponents() == std::vector<unsigned>{2, 1});
    const Element a = m.encode({3, 1});
    CHECK(m.decode(a) == std::vector<long>{3, 1});
    CHECK(m.decode(m.add(a, a)) == std::vector<long>{2, 0});
    CHECK(m.decode(m.scale(3, a)) == std::vector<long>{1, 1});
    CHECK(m.decode(m.scale(-1, a)) == std::vector<long>{1, 1});
    CHECK(m.encode({-1, 3}) == m.encode({3, 1}));
    CHECK(ConcreteModule::parse("F:q=3,N=2").size() == 9);
    CHECK(ConcreteModule::parse("Z:p=3,s=2,N=2").size() == 81);
    CHECK_THROWS_AS(ConcreteModule::parse("F:q=4,N=2"), ValidationError);
    CHECK_THROWS_AS(ConcreteModule::parse("Z:p=2,s=13,N=1"), CapExceeded);
    CHECK(ConcreteModule::parse("Z:p=2,s=13,N=1", 1 << 13).size() == 8192);
    CHECK_THROWS_AS(ConcreteModule(6, {1}), ValidationError);
}

TEST_CASE("figure lattices")
{
    CHECK(z4z2().size() == 8);
    CHECK(z4z4().size() == 15);
    CHECK(enumerate_lattice(ConcreteModule::parse("F:q=2,N=2")).size() == 5);
    const std::map<Partition, std::size_t> expected{{{}, 1},    {{1}, 3},    {{2}, 6},
                                                    {{1, 1}, 1}, {{2, 1}, 3}, {{2, 2}, 1}};
    CHECK(type_histogram(z4z4()) == expected);
    const std::map<Partition, std::size_t> left{{{}, 1}, {{1}, 3}, {{2}, 2}, {{1, 1}, 1}, {{2, 1}, 1}};
    CHECK(type_histogram(z4z2()) == left);
    CHECK(z4z2().type(z4z2().top()) == Partition{2, 1});
    CHECK(z4z4().height(z4z4().top()) == 4);
    CHECK(z4z4().height(z4z4().bottom()) == 0);
}

TEST_CASE("types of explicit submodules")
{
    const auto& lat = z4z4();
    CHECK(lat.type(index_of_span(lat, {{2, 0}})) == Partition{1});
    CHECK(lat.type(index_of_span(lat, {{1, 0}})) == Partition{2});
    CHECK(lat.type(index_of_span(lat, {{2, 0}, {0, 2}})) == Partition{1, 1});
    CHECK(lat.type(index_of_span(lat, {{1, 0}, {0, 2}})) == Partition{2, 1});
    // p^{k_i} e_i generates Z_{p^{e_i−k_i}} factors
    const ConcreteModule big(3, {3, 2, 1}, 1000);
    CHECK(type_of_submodule(big, span(big, {big.encode({3, 0, 0}), big.encode({0, 1, 0})})) == Partition{2, 2});
    CHECK(type_of_submodule(big, span(big, {big.encode({9, 0, 0}), big.encode({0, 3, 0}), big.encode({0, 0, 1})})) ==
          Partition{1, 1, 1});
    CHECK(type_of_submodule(big, span(big, {big.encode({1, 1, 1})})) == Partition{3});
    CHECK(type_of_submodule(big, span(big, {big.encode({1, 0, 0}), big.encode({0, 1, 0}), big.encode({0, 0, 1})})) ==
          Partition{3, 2, 1});
}

TEST_CASE("lattice invariants: modularity, metric, meets and joins")
{
    for (const char* text : {"Z:p=2,exps=[2,1]", "Z:p=2,s=2,N=2", "Z:p=2,s=3,N=1", "F:q=2,N=3", "F:q=3,N=2",
                             "Z:p=3,s=2,N=2", "Z:p=2,exps=[3,1]"}) {
        CAPTURE(text);
        const auto lat = enumerate_lattice(ConcreteModule::parse(text));
        const std::size_t n = lat.size();
        std::size_t bad_mod = 0, bad_sym = 0, bad_tri = 0, bad_meet = 0, bad_join = 0;
        for (std::size_t u = 0; u < n; ++u) {
            CHECK(distance(lat, u, u) == 0);
            for (std::size_t v = 0; v < n; ++v) {
                const std::size_t m = lat.meet(u, v), j = lat.join(u, v);
                if (lat.height(u) + lat.height(v) != lat.height(m) + lat.height(j))
                    ++bad_mod;
                if (distance(lat, u, v) != distance(lat, v, u))
                    ++bad_sym;
                if (lat.sub(m) != lat.sub(u).intersect(lat.sub(v)))
                    ++bad_meet;
                std::vector<Element> gv(lat.generators(v).begin(), lat.generators(v).end());
                if (lat.sub(j) != span_with(lat.module(), lat.sub(u), gv))
                    ++bad_join;
                if (lat.leq(u, v) != lat.sub(u).subset_of(lat.sub(v)))
                    ++bad_meet;
                for (std::size_t w = 0; w < n; w += 3)
                    if (distance(lat, u, w) > distance(lat, u, v) + distance(lat, v, w))
                        ++bad_tri;
            }
        }
        CHECK(bad_mod == 0);
        CHECK(bad_sym == 0);
        CHECK(bad_tri == 0);
        CHECK(bad_meet == 0);
        CHECK(bad_join == 0);
    }
}

TEST_CASE("every submodule appears exactly once")
{
    // brute force over all subsets is feasible for |M| = 8: closed, zero-containing subsets
    const auto m = ConcreteModule::parse("Z:p=2,exps=[2,1]");
    std::size_t subgroups = 0;
    for (unsigned mask = 0; mask < 256; ++mask) {
        if (!(mask & 1))
            continue;
        bool closed = true;
        for (Element a = 0; a < 8 && closed; ++a)
            for (Element b = 0; b < 8 && closed; ++b)
                if ((mask >> a & 1) && (mask >> b & 1) && !(mask >> m.add(a, b) & 1))
                    closed = false;
        subgroups += closed;
    }
    CHECK(subgroups == z4z2().size());
    const auto f = ConcreteModule::parse("F:q=2,N=4");
    CHECK(enumerate_lattice(f).size() == 67);
}

TEST_CASE("annihilators reverse the order of Z_{p^s}^N")
{
    for (const char* text : {"Z:p=2,s=2,N=2", "Z:p=3,s=2,N=2", "Z:p=2,s=3,N=1", "F:q=2,N=3"}) {
        CAPTURE(text);
        const auto lat = enumerate_lattice(ConcreteModule::parse(text));
        const auto& m = lat.module();
        const auto lambda = Partition::rectangle(m.max_exponent(), static_cast<unsigned>(m.rank()));
        std::vector<std::size_t> image(lat.size());
        for (std::size_t u = 0; u < lat.size(); ++u) {
            const auto ann = annihilator(m, lat.sub(u));
            const auto idx = lat.index_of(ann);
            REQUIRE(idx.has_value());
            image[u] = *idx;
            CHECK(lat.sub(u).count() * ann.count() == m.size());
            CHECK(lat.type(*idx) == complement(lambda, lat.type(u)));
        }
        for (std::size_t u = 0; u < lat.size(); ++u) {
            CHECK(image[image[u]] == u);
            for (std::size_t v = 0; v < lat.size(); ++v)
                CHECK(lat.leq(u, v) == lat.leq(image[v], image[u]));
        }
    }
}

TEST_CASE("distances in the figure lattices")
{
    const auto& lat = z4z2();
    const auto atoms = lat.of_type(Partition{1});
    REQUIRE(atoms.size() == 3);
    CHECK(distance(lat, atoms[0], atoms[1]) == 2);
    CHECK(distance(z4z4(), z4z4().bottom(), z4z4().top()) == 4);
}

TEST_CASE("the sphere anomaly in Z_4 x Z_2")
{
    const auto& lat = z4z2();
    const std::size_t black = index_of_span(lat, {{2, 0}});
    std::multiset<std::size_t> sizes;
    for (auto u : lat.of_type(Partition{1}))
        sizes.insert(oracle_sphere(lat, u, 1).size());
    CHECK(sizes == std::multiset<std::size_t>{3, 3, 5});
    CHECK(oracle_sphere(lat, black, 1).size() == 5);
    CHECK(count_above(lat, black, Partition{2}) == 2);
    for (auto u : lat.of_type(Partition{1}))
        if (u != black)
            CHECK(count_above(lat, u, Partition{2}) == 0);

    const auto rep = check_enumerability(lat);
    CHECK(rep.down);
    CHECK_FALSE(rep.up);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->upward);
    CHECK(lat.type(rep.witness->u) == lat.type(rep.witness->v));
    CHECK(rep.witness->count_u != rep.witness->count_v);
    CHECK(count_above(lat, rep.witness->u, rep.witness->mu) == rep.witness->count_u);
    CHECK(count_above(lat, rep.witness->v, rep.witness->mu) == rep.witness->count_v);
    for (std::size_t u = 0; u < lat.size(); ++u)
        CHECK(oracle_sphere(lat, u, 6).size() == lat.size());
}

TEST_CASE("enumerable lattices")
{
    for (const char* text : {"Z:p=2,s=2,N=2", "F:q=2,N=3", "Z:p=3,s=2,N=2"}) {
        const auto rep = check_enumerability(enumerate_lattice(ConcreteModule::parse(text)));
        CHECK(rep.down);
        CHECK(rep.up);
        CHECK_FALSE(rep.witness.has_value());
    }
}

TEST_CASE("type counts match alpha(lambda, phi)")
{
    for (const char* text : {"Z:p=2,s=2,N=2", "Z:p=2,s=3,N=1", "Z:p=3,s=2,N=2", "F:q=2,N=3", "F:q=3,N=2"}) {
        CAPTURE(text);
        const CountTable t(LatticeProfile::parse(text));
        const auto lat = enumerate_lattice(ConcreteModule::from_profile(t.profile()));
        for (const auto& phi : t.types())
            CHECK(t.alpha(t.top_type(), phi) == lat.of_type(phi).size());
    }
}

TEST_CASE("layer disjointness theorem")
{
    for (const char* text : {"Z:p=2,s=2,N=2", "F:q=2,N=4", "Z:p=2,exps=[2,1]"}) {
        const auto lat = enumerate_lattice(ConcreteModule::parse(text));
        const unsigned H = lat.height(lat.top());
        for (unsigned l = 0; l <= H; ++l)
            for (unsigned r = 0; r <= 3; ++r) {
                const auto rep = check_layer_disjointness_theorem(lat, l, r);
                CHECK(rep.holds);
                CHECK(rep.pairs_checked > 0);
            }
    }
}

TEST_CASE("maximum code search")
{
    const auto f = enumerate_lattice(ConcreteModule::parse("F:q=2,N=4"));
    const auto spread = max_code_search(f, CodeConstraint::of_height(2), 4);
    CHECK(spread.exact);
    CHECK(spread.size() == 5);
    CHECK(minimum_distance(f, spread.code) >= 4);
    for (auto c : spread.code)
        CHECK(f.height(c) == 2);
    CHECK(max_code_search(f, CodeConstraint::of_height(2), 1).size() == 35);
    CHECK(max_code_search(f, CodeConstraint::of_height(2), 2).size() == 35);

    const auto& z = z4z4();
    const auto typed = max_code_search(z, CodeConstraint::of_type(Partition{2}), 4);
    CHECK(typed.exact);
    CHECK(typed.size() == 3);
    CHECK(minimum_distance(z, typed.code) >= 4);
    CHECK(max_code_search(z, CodeConstraint::of_type(Partition{2}), 1).size() == 6);

    const auto capped = max_code_search(f, CodeConstraint::of_height(2), 4, 3);
    CHECK_FALSE(capped.exact);
    CHECK(capped.size() >= 2);
    CHECK(capped.size() <= 5);
    CHECK(minimum_distance(f, capped.code) >= 4);
}

TEST_CASE("lattice export matches the golden files")
{
    for (const auto& [text, file] : std::vector<std::pair<std::string, std::string>>{
             {"Z:p=2,exps=[2,1]", "z4xz2.json"}, {"Z:p=2,s=2,N=2", "z4xz4.json"}}) {
        const auto lat = enumerate_lattice(ConcreteModule::parse(text));
        const auto produced = nlohmann::json::parse(export_lattice_json(lat));
        const auto golden = nlohmann::json::parse(read_file(std::string(LATSPHERE_GOLDEN_DIR) + "/" + file));
        CHECK(produced == golden);
        CHECK(produced["elements"].size() == lat.size());
        std::size_t covers = 0;
        for (const auto& e : produced["elements"])
            covers += e["covers"].size();
        // Hasse edges: Z_4 x Z_2 has 11, Z_4 x Z_4 has 24
        CHECK(covers == (lat.size() == 8 ? 11u : 24u));
    }
}
