#include "latsphere/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "latsphere/bounds.hpp"
#include "latsphere/channel.hpp"
#include "latsphere/enumerable.hpp"
#include "latsphere/error.hpp"
#include "latsphere/oracle.hpp"
#include "latsphere/verify.hpp"

namespace latsphere::cli {

namespace {

struct Common {
    std::string profile;
    std::string module;
    std::string format = "table";
    std::optional<std::size_t> cap;

    std::size_t element_cap() const
    {
        if (cap)
            return *cap;
        if (const char* env = std::getenv("LATSPHERE_CAP")) {
            try {
                std::size_t used = 0;
                const auto v = std::stoull(env, &used);
                if (used == std::string(env).size())
                    return static_cast<std::size_t>(v);
            } catch (const std::exception&) {
            }
            throw ValidationError(std::string("LATSPHERE_CAP must be a positive integer, got '") + env + "'");
        }
        return ConcreteModule::default_element_cap;
    }

    ConcreteLattice lattice() const
    {
        const std::string& text = module.empty() ? profile : module;
        return enumerate_lattice(ConcreteModule::parse(text, element_cap()));
    }
};

void add_common(CLI::App* cmd, Common& c, bool with_profile)
{
    if (with_profile)
        cmd->add_option("--profile", c.profile, "enumerable profile, e.g. F:q=2,N=4 or Z:p=2,s=2,N=2");
    cmd->add_option("--module", c.module, "explicit module for the oracle, e.g. Z:p=2,exps=[2,1]");
    cmd->add_option("--format", c.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--cap", c.cap, "maximum module size (elements) the oracle accepts");
}

void need_one_source(const Common& c)
{
    if (c.profile.empty() == c.module.empty())
        throw ValidationError("give exactly one of --profile or --module");
}

// ---------------------------------------------------------------- spheres

struct SpheresArgs {
    Common common;
    std::string type;
    std::optional<std::size_t> center;
    unsigned radius = 0;
};

struct LayerCount {
    unsigned height;
    Partition type;
    BigCount count;
};

void emit_spheres(std::ostream& out, const std::string& format, const std::string& source, const Partition& centre,
                  std::optional<std::size_t> centre_id, unsigned radius, const std::vector<LayerCount>& layers)
{
    BigCount total = 0;
    std::map<unsigned, BigCount> by_height;
    for (const auto& l : layers) {
        total += l.count;
        by_height[l.height] += l.count;
    }
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["source"] = source;
        doc["center_type"] = centre.to_string();
        if (centre_id)
            doc["center_id"] = *centre_id;
        doc["radius"] = radius;
        doc["total"] = to_decimal(total);
        auto& arr = doc["layers"] = nlohmann::ordered_json::array();
        for (const auto& [h, n] : by_height) {
            nlohmann::ordered_json j;
            j["height"] = h;
            j["count"] = to_decimal(n);
            auto& types = j["types"] = nlohmann::ordered_json::array();
            for (const auto& l : layers)
                if (l.height == h)
                    types.push_back({{"type", l.type.to_string()}, {"count", to_decimal(l.count)}});
            arr.push_back(std::move(j));
        }
        out << doc.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        out << "height,type,count\n";
        for (const auto& l : layers)
            out << l.height << ",\"" << l.type.to_string() << "\"," << to_decimal(l.count) << "\n";
        return;
    }
    out << "sphere around " << centre;
    if (centre_id)
        out << " (#" << *centre_id << ")";
    out << " radius " << radius << " in " << source << "\n";
    out << "total: " << to_decimal(total) << "\n";
    for (const auto& [h, n] : by_height) {
        out << "  height " << h << ": " << to_decimal(n) << "\n";
        for (const auto& l : layers)
            if (l.height == h)
                out << "    " << l.type << ": " << to_decimal(l.count) << "\n";
    }
}

int cmd_spheres(const SpheresArgs& a, std::ostream& out)
{
    need_one_source(a.common);
    std::vector<LayerCount> layers;
    if (!a.common.profile.empty()) {
        if (a.center)
            throw ValidationError("--center needs --module");
        if (a.type.empty())
            throw ValidationError("spheres needs --type for the centre");
        const CountTable table(LatticeProfile::parse(a.common.profile));
        const Partition centre = Partition::parse(a.type);
        if (!leq(centre, table.top_type()))
            throw ValidationError("centre type " + centre.to_string() + " is not <= " + table.top_type().to_string());
        for (const auto& mu : table.types()) {
            BigCount n = table.sphere_layer_by_type(centre, a.radius, mu);
            if (n != 0)
                layers.push_back({mu.weight(), mu, std::move(n)});
        }
        std::stable_sort(layers.begin(), layers.end(),
                         [](const LayerCount& x, const LayerCount& y) { return x.height < y.height; });
        emit_spheres(out, a.common.format, table.profile().to_string(), centre, std::nullopt, a.radius, layers);
        return Success;
    }
    const auto lat = a.common.lattice();
    std::size_t u = 0;
    if (a.center) {
        if (*a.center >= lat.size())
            throw ValidationError("--center must be below " + std::to_string(lat.size()));
        u = *a.center;
        if (!a.type.empty() && lat.type(u) != Partition::parse(a.type))
            throw ValidationError("element #" + std::to_string(u) + " has type " + lat.type(u).to_string());
    } else {
        if (a.type.empty())
            throw ValidationError("spheres needs --type or --center");
        const auto of_type = lat.of_type(Partition::parse(a.type));
        if (of_type.empty())
            throw ValidationError("no element of type " + a.type + " in " + lat.module().to_string());
        u = of_type.front();
    }
    std::map<std::pair<unsigned, Partition>, std::size_t> counts;
    for (auto v : oracle_sphere(lat, u, a.radius))
        ++counts[{lat.height(v), lat.type(v)}];
    for (const auto& [key, n] : counts)
        layers.push_back({key.first, key.second, n});
    // descending type order within a height, as for profiles
    std::stable_sort(layers.begin(), layers.end(), [](const LayerCount& x, const LayerCount& y) {
        return x.height != y.height ? x.height < y.height : y.type < x.type;
    });
    emit_spheres(out, a.common.format, lat.module().to_string(), lat.type(u), u, a.radius, layers);
    return Success;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    Common common;
    std::string kind;
    std::string type;
    std::optional<unsigned> height;
    unsigned min_distance = 0;
    std::string layer;
    bool sweep = false;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out)
{
    need_one_source(a.common);
    if (a.type.empty() == !a.height.has_value())
        throw ValidationError("give exactly one of --height or --type for the code");
    if (a.sweep && !a.layer.empty())
        throw ValidationError("--sweep and --layer are mutually exclusive");
    BoundRequest req;
    req.constraint = a.height ? CodeConstraint::of_height(*a.height) : CodeConstraint::of_type(Partition::parse(a.type));
    req.min_distance = a.min_distance;
    if (!a.layer.empty())
        req.layer = LayerSelector::parse(a.layer);

    BoundResult result;
    if (!a.common.profile.empty()) {
        const CountTable table(LatticeProfile::parse(a.common.profile));
        if (a.kind == "packing")
            result = packing_bound(table, req);
        else if (a.kind == "covering")
            result = covering_bound(table, req);
        else
            result = singleton_bound(table, req);
    } else {
        const auto lat = a.common.lattice();
        if (a.kind == "packing")
            result = packing_bound(lat, req);
        else if (a.kind == "covering")
            result = covering_bound(lat, req);
        else
            result = singleton_bound(lat, req);
    }
    if (a.common.format == "json")
        out << format_bound_json(result) << "\n";
    else if (a.common.format == "csv")
        out << format_bound_csv(result);
    else
        out << format_bound_table(result);
    return Success;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    Common common;
    bool all = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    need_one_source(a.common);
    const auto lat = a.common.lattice();
    const auto report = verify_lattice(lat, a.all);
    if (a.common.format == "json")
        out << verify_report_json(report) << "\n";
    else
        out << format_verify_report(report);
    return report.ok() ? Success : VerificationMismatch;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::string topology = "line:1";
    std::string sent;
    std::vector<std::string> errors;
    unsigned rounds = 1;
    unsigned per_edge = 1;
    std::optional<unsigned long long> seed;
    unsigned runs = 1;
};

NetworkTopology load_topology(const std::string& where)
{
    if (where == "butterfly")
        return NetworkTopology::butterfly();
    if (where.rfind("line:", 0) == 0) {
        try {
            return NetworkTopology::line(std::stoul(where.substr(5)));
        } catch (const std::logic_error&) {
            throw ValidationError("bad topology '" + where + "'");
        }
    }
    std::ifstream in(where);
    if (!in)
        throw ValidationError("cannot read topology file '" + where + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return NetworkTopology::from_json(buf.str());
}

Element parse_element(const ConcreteModule& module, const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != module.rank())
        throw ValidationError("element must be a list of " + std::to_string(module.rank()) + " integers");
    std::vector<long> coords;
    for (const auto& c : j) {
        if (!c.is_number_integer())
            throw ValidationError("element coordinates must be integers");
        coords.push_back(c.get<long>());
    }
    return module.encode(coords);
}

std::vector<Element> parse_generators(const ConcreteModule& module, const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("--sent must be a JSON list of elements like [[1,0],[0,1]]");
    }
    if (!j.is_array())
        throw ValidationError("--sent must be a JSON list of elements");
    std::vector<Element> gens;
    for (const auto& e : j)
        gens.push_back(parse_element(module, e));
    return gens;
}

ErrorInjection parse_error(const ConcreteModule& module, const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("--error takes EDGE:[x,y,...], got '" + text + "'");
    ErrorInjection e;
    try {
        e.edge = std::stoul(text.substr(0, colon));
        e.value = parse_element(module, nlohmann::json::parse(text.substr(colon + 1)));
    } catch (const std::logic_error&) {
        throw ValidationError("--error takes EDGE:[x,y,...], got '" + text + "'");
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("--error takes EDGE:[x,y,...], got '" + text + "'");
    }
    return e;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
    if (a.common.module.empty())
        throw ValidationError("simulate needs --module");
    const auto module = ConcreteModule::parse(a.common.module, a.common.element_cap());
    const auto topology = load_topology(a.topology);
    if (a.sent.empty())
        throw ValidationError("simulate needs --sent");
    const auto gens = parse_generators(module, a.sent);
    std::vector<ErrorInjection> errors;
    for (const auto& e : a.errors)
        errors.push_back(parse_error(module, e));
    if (a.runs == 0)
        throw ValidationError("--runs must be >= 1");

    const unsigned long long seed = a.seed.value_or(default_seed);
    if (a.runs == 1) {
        const auto outcome = simulate(topology, module, gens, errors, {seed, a.rounds, a.per_edge});
        const bool identity = outcome.dist == outcome.era + outcome.err;
        if (a.common.format == "json") {
            auto doc = nlohmann::ordered_json::parse(outcome_to_json(module, outcome));
            doc["seed"] = seed;
            out << doc.dump(2) << "\n";
        } else {
            out << "seed: " << seed << "\n";
            out << "sent: " << type_of_submodule(module, outcome.sent) << " (height "
                << height_of(module, outcome.sent) << ")\n";
            out << "received: " << type_of_submodule(module, outcome.received) << " (height "
                << height_of(module, outcome.received) << ")\n";
            out << "era: " << outcome.era << "\nerr: " << outcome.err << "\ndist: " << outcome.dist << "\n";
            out << "injected error type: " << outcome.injected_error_rank_profile << "\n";
        }
        return identity ? Success : VerificationMismatch;
    }

    std::size_t violations = 0, exact = 0;
    for (unsigned i = 0; i < a.runs; ++i) {
        const auto o = simulate(topology, module, gens, errors, {seed + i, a.rounds, a.per_edge});
        if (o.dist != o.era + o.err)
            ++violations;
        if (o.dist == 0)
            ++exact;
    }
    if (a.common.format == "json") {
        nlohmann::ordered_json doc{{"seed", seed}, {"runs", a.runs}, {"received_exactly", exact},
                                   {"identity_violations", violations}};
        out << doc.dump(2) << "\n";
    } else {
        out << "seed: " << seed << " (runs use seed, seed+1, ...)\n";
        out << "runs: " << a.runs << "\nreceived exactly: " << exact << "\nidentity violations: " << violations
            << "\n";
    }
    return violations == 0 ? Success : VerificationMismatch;
}

// ---------------------------------------------------------------- export-lattice

int cmd_export(const Common& c, std::ostream& out)
{
    need_one_source(c);
    out << export_lattice_json(c.lattice()) << "\n";
    return Success;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spheres, bounds and channel simulation on lattices of submodules", "latsphere"};
    app.require_subcommand(1);

    SpheresArgs sph;
    auto* spheres = app.add_subcommand("spheres", "sphere sizes with a per-layer breakdown");
    add_common(spheres, sph.common, true);
    spheres->add_option("--type", sph.type, "centre type, e.g. [1]");
    spheres->add_option("--center", sph.center, "centre element id (with --module)");
    spheres->add_option("--radius", sph.radius, "sphere radius")->required();

    BoundsArgs bnd;
    auto* bounds = app.add_subcommand("bounds", "packing, covering and singleton bounds");
    add_common(bounds, bnd.common, true);
    bounds->add_option("kind", bnd.kind, "packing, covering or singleton")
        ->required()
        ->check(CLI::IsMember({"packing", "covering", "singleton"}));
    bounds->add_option("--height", bnd.height, "codeword height l");
    bounds->add_option("--type", bnd.type, "codeword type mu");
    bounds->add_option("--min-distance", bnd.min_distance, "minimum distance D")->required();
    bounds->add_option("--layer", bnd.layer, "single selector: a height like 1 or a type like [1,1]");
    bounds->add_flag("--sweep", bnd.sweep, "evaluate every admissible selector (the default)");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "compare the counting formulas with the oracle");
    add_common(verify, ver.common, true);
    verify->add_flag("--all", ver.all, "also chains and the layer-disjointness theorem");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "random linear network coding over a module");
    add_common(simulate_cmd, sim.common, false);
    simulate_cmd->add_option("--topology", sim.topology, "JSON file, butterfly, or line:K");
    simulate_cmd->add_option("--sent", sim.sent, "generators of U as JSON, e.g. [[1,0],[0,1]]");
    simulate_cmd->add_option("--error", sim.errors, "EDGE:[x,...] extra packet on an edge (repeatable)");
    simulate_cmd->add_option("--rounds", sim.rounds, "transmission rounds");
    simulate_cmd->add_option("--per-edge", sim.per_edge, "combinations per active edge per round");
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
    simulate_cmd->add_option("--runs", sim.runs, "repeat with consecutive seeds and summarise");

    Common exp;
    auto* export_cmd = app.add_subcommand("export-lattice", "dump the submodule lattice as JSON");
    add_common(export_cmd, exp, true);

    std::vector<const char*> argv;
    argv.push_back("latsphere");
    for (const auto& s : args)
        argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return ValidationFailure;
    }

    try {
        if (spheres->parsed())
            return cmd_spheres(sph, out);
        if (bounds->parsed())
            return cmd_bounds(bnd, out);
        if (verify->parsed())
            return cmd_verify(ver, out);
        if (simulate_cmd->parsed())
            return cmd_simulate(sim, out);
        if (export_cmd->parsed())
            return cmd_export(exp, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return ValidationFailure;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << " (raise --cap or LATSPHERE_CAP)\n";
        return ValidationFailure;
    }
    return ValidationFailure;
}

int run(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace latsphere::cli
