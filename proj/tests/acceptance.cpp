// Acceptance suite: one PASS/FAIL line per criterion, each with its time limit.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latsphere/bounds.hpp"
#include "latsphere/channel.hpp"
#include "latsphere/enumerable.hpp"
#include "latsphere/oracle.hpp"

using namespace latsphere;

namespace {

const char* const five[] = {"Z:p=2,s=2,N=2", "Z:p=2,s=3,N=1", "Z:p=3,s=2,N=2", "F:q=2,N=3", "F:q=3,N=2"};

struct Outcome {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        } else if (!cond) {
            detail += "; " + what;
        }
    }
};

std::map<Partition, std::size_t> histogram(const ConcreteLattice& lat)
{
    std::map<Partition, std::size_t> h;
    for (std::size_t i = 0; i < lat.size(); ++i)
        ++h[lat.type(i)];
    return h;
}

struct Pair {
    CountTable table;
    ConcreteLattice lat;
    explicit Pair(const char* text)
        : table(LatticeProfile::parse(text))
        , lat(enumerate_lattice(ConcreteModule::from_profile(table.profile())))
    {
    }
};

Outcome figure_one()
{
    Outcome o;
    const auto left = enumerate_lattice(ConcreteModule::parse("Z:p=2,exps=[2,1]"));
    const auto right = enumerate_lattice(ConcreteModule::parse("Z:p=2,s=2,N=2"));
    o.expect(left.size() == 8, "Z4xZ2 has " + std::to_string(left.size()) + " submodules");
    o.expect(right.size() == 15, "Z4xZ4 has " + std::to_string(right.size()) + " submodules");
    const std::map<Partition, std::size_t> want{{{}, 1}, {{1}, 3}, {{2}, 6}, {{1, 1}, 1}, {{2, 1}, 3}, {{2, 2}, 1}};
    o.expect(histogram(right) == want, "Z4xZ4 type counts differ");
    return o;
}

Outcome sphere_anomaly()
{
    Outcome o;
    const auto lat = enumerate_lattice(ConcreteModule::parse("Z:p=2,exps=[2,1]"));
    std::multiset<std::size_t> sizes;
    for (auto u : lat.of_type(Partition{1}))
        sizes.insert(oracle_sphere(lat, u, 1).size());
    o.expect(sizes == std::multiset<std::size_t>{3, 3, 5}, "radius-1 sphere sizes are not {5,3,3}");
    const auto rep = check_enumerability(lat);
    o.expect(rep.down, "not down-enumerable");
    o.expect(!rep.up, "reported up-enumerable");
    o.expect(rep.witness.has_value(), "no witness");
    if (rep.witness) {
        const auto& w = *rep.witness;
        o.expect(lat.type(w.u) == lat.type(w.v) && w.count_u != w.count_v, "witness does not separate");
        o.expect(count_above(lat, w.u, w.mu) == w.count_u && count_above(lat, w.v, w.mu) == w.count_v,
                 "witness counts do not reproduce");
    }
    return o;
}

template <class Fn>
Outcome over_five(Fn&& body)
{
    Outcome o;
    for (const char* text : five) {
        const Pair p(text);
        std::size_t cases = 0, bad = 0;
        body(p, cases, bad);
        o.expect(bad == 0, std::string(text) + ": " + std::to_string(bad) + "/" + std::to_string(cases) + " mismatches");
        o.expect(cases > 0, std::string(text) + ": nothing checked");
    }
    return o;
}

Outcome duality()
{
    return over_five([](const Pair& p, std::size_t& cases, std::size_t& bad) {
        for (std::size_t u = 0; u < p.lat.size(); ++u)
            for (const auto& phi : p.table.types()) {
                ++cases;
                bad += p.table.beta(p.lat.type(u), phi) != count_above(p.lat, u, phi);
            }
    });
}

Outcome butler_gauss()
{
    return over_five([](const Pair& p, std::size_t& cases, std::size_t& bad) {
        for (std::size_t u = 0; u < p.lat.size(); ++u)
            for (const auto& phi : p.table.types()) {
                ++cases;
                bad += p.table.alpha(p.lat.type(u), phi) != count_below(p.lat, u, phi);
            }
    });
}

Outcome recursions()
{
    return over_five([](const Pair& p, std::size_t& cases, std::size_t& bad) {
        const unsigned H = p.table.profile().top_height();
        for (std::size_t u = 0; u < p.lat.size(); ++u) {
            const Partition& tp = p.lat.type(u);
            for (const auto& mu : p.table.types()) {
                if (mu.weight() <= tp.weight()) {
                    for (unsigned r0 = 0; r0 <= mu.weight(); ++r0) {
                        ++cases;
                        bad += p.table.gamma(tp, mu, {r0}) != count_meet_height(p.lat, u, mu, r0);
                    }
                } else {
                    for (unsigned r0 = mu.weight(); r0 <= H; ++r0) {
                        ++cases;
                        bad += p.table.gamma_dual(tp, mu, {r0}) != count_join_height(p.lat, u, mu, r0);
                    }
                }
            }
            for (unsigned r = 0; r <= 2 * H; ++r) {
                ++cases;
                bad += p.table.sphere_size(tp, r) != oracle_sphere(p.lat, u, r).size();
            }
        }
    });
}

Outcome layer_disjointness()
{
    Outcome o;
    for (const char* text : {"Z:p=2,s=2,N=2", "F:q=2,N=4"}) {
        const auto lat = enumerate_lattice(ConcreteModule::parse(text));
        for (unsigned l = 0; l <= lat.height(lat.top()); ++l)
            for (unsigned r = 0; r <= 3; ++r)
                o.expect(check_layer_disjointness_theorem(lat, l, r).holds,
                         std::string(text) + " l=" + std::to_string(l) + " r=" + std::to_string(r));
    }
    return o;
}

struct ProbeData {
    ConcreteLattice lat = enumerate_lattice(ConcreteModule::parse("F:q=2,N=4"));
    CodeSearchResult code;
};

ProbeData& probe()
{
    static ProbeData data;
    return data;
}

Outcome bound_probe()
{
    Outcome o;
    const CountTable t(LatticeProfile::parse("F:q=2,N=4"));
    auto& data = probe();
    const BoundRequest at_t1{CodeConstraint::of_height(2), 4, LayerSelector::of_height(1)};
    const BoundRequest sweep{CodeConstraint::of_height(2), 4, std::nullopt};
    const BigCount packing = packing_bound(t, at_t1).value();
    const BigCount packing_best = packing_bound(t, sweep).value();
    const BigCount singleton = singleton_bound(t, sweep).value();
    const BigCount covering = covering_bound(t, sweep).value();
    data.code = max_code_search(data.lat, CodeConstraint::of_height(2), 4);
    const BigCount found = data.code.size();
    o.expect(packing == 5, "packing at t=1 is " + to_decimal(packing));
    o.expect(data.code.exact && found == 5, "search found " + to_decimal(found));
    o.expect(minimum_distance(data.lat, data.code.code) >= 4, "search code violates D");
    o.expect(singleton == 7, "singleton is " + to_decimal(singleton));
    o.expect(covering >= 2, "covering is " + to_decimal(covering));
    o.expect(covering <= found && found <= std::min(packing_best, singleton), "ordering covering <= 5 <= min fails");
    return o;
}

Outcome channel_identity()
{
    Outcome o;
    const std::vector<ConcreteModule> modules{ConcreteModule::parse("Z:p=2,s=2,N=2"), ConcreteModule::parse("Z:p=2,s=3,N=2"),
                                              ConcreteModule::parse("F:q=2,N=4"), ConcreteModule::parse("F:q=3,N=3")};
    const std::vector<NetworkTopology> topologies{NetworkTopology::line(1), NetworkTopology::line(2),
                                                  NetworkTopology::butterfly()};
    std::mt19937_64 pick(8);
    std::size_t broken = 0, escaped = 0, noisy_runs = 0;
    for (std::uint64_t run = 0; run < 10000; ++run) {
        const auto& m = modules[run % modules.size()];
        const auto& topo = topologies[pick() % topologies.size()];
        std::uniform_int_distribution<Element> elem(0, static_cast<Element>(m.size() - 1));
        std::vector<Element> gens(1 + pick() % 3);
        for (auto& g : gens)
            g = elem(pick);
        std::vector<ErrorInjection> errors;
        const bool noisy = pick() % 2 == 0;
        if (noisy) {
            ++noisy_runs;
            for (unsigned k = 0, n = 1 + static_cast<unsigned>(pick() % 2); k < n; ++k)
                errors.push_back({pick() % topo.edges().size(), elem(pick)});
        }
        const auto out = simulate(topo, m, gens, errors, {run, 1 + static_cast<unsigned>(pick() % 3), 1});
        broken += out.dist != out.era + out.err;
        if (!noisy)
            escaped += !out.received.subset_of(out.sent);
    }
    o.expect(broken == 0, std::to_string(broken) + " runs break dist = era + err");
    o.expect(escaped == 0, std::to_string(escaped) + " error-free runs have V not below U");
    o.expect(noisy_runs > 0 && noisy_runs < 10000, "runs do not mix error and error-free cases");
    return o;
}

Outcome unique_decoding()
{
    Outcome o;
    auto& data = probe();
    if (data.code.size() != 5)
        data.code = max_code_search(data.lat, CodeConstraint::of_height(2), 4);
    o.expect(data.code.size() == 5, "no size-5 code");
    std::size_t checked = 0;
    for (auto u : data.code.code)
        for (std::size_t v = 0; v < data.lat.size(); ++v) {
            if (distance(data.lat, u, v) > 1)
                continue;
            ++checked;
            const auto d = md_decode(data.lat, data.code.code, v);
            o.expect(d.unique() && d.nearest.front() == u, "V=#" + std::to_string(v) + " does not decode to #" +
                                                              std::to_string(u));
        }
    o.expect(checked > 5, "too few received elements checked");
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "figure lattices: 8 and 15 submodules with per-type counts", 1, figure_one},
        {2, "sphere anomaly in Z4xZ2: sizes {5,3,3}, down-only enumerable", 1, sphere_anomaly},
        {3, "beta by duality equals oracle up-counts on five instances", 30, duality},
        {4, "alpha (Butler / Gaussian) equals oracle down-counts", 30, butler_gauss},
        {5, "gamma, gamma_dual and sphere sizes equal oracle counts", 60, recursions},
        {6, "layer-disjointness theorem for r <= 3 on Z4xZ4 and F2^4", 60, layer_disjointness},
        {7, "F2^4, l=2, D=4: packing 5, search 5, singleton 7, covering >= 2", 120, bound_probe},
        {8, "channel: dist = era + err on 10^4 runs, error-free V <= U", 60, channel_identity},
        {9, "unique decoding within radius 1 of the size-5 code", 30, unique_decoding},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.ok && in_time;
        failures += !pass;
        std::printf("[%s] criterion %d: %s (%.3f s, limit %.0f s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.limit_s, o.ok ? "" : " -- ", o.detail.c_str());
        if (!in_time)
            std::printf("       exceeded the time limit\n");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
