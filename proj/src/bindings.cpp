#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latsphere/bounds.hpp"
#include "latsphere/channel.hpp"
#include "latsphere/cli.hpp"
#include "latsphere/enumerable.hpp"
#include "latsphere/error.hpp"
#include "latsphere/oracle.hpp"
#include "latsphere/verify.hpp"

namespace py = pybind11;
using namespace latsphere;

namespace {

// counts cross the boundary as decimal text so Python gets an exact int
py::object to_py(const BigCount& c)
{
    return py::reinterpret_steal<py::object>(PyLong_FromString(to_decimal(c).c_str(), nullptr, 10));
}

Partition to_partition(const std::vector<unsigned>& parts)
{
    return Partition(parts);
}

py::tuple from_partition(const Partition& p)
{
    return py::cast(p.parts());
}

py::dict bound_dict(const BoundResult& r)
{
    py::list rows;
    for (const auto& row : r.rows) {
        py::dict d;
        d["selector"] = row.selector.to_string();
        d["radius"] = row.radius;
        d["numerator"] = to_py(row.numerator);
        d["denominator"] = to_py(row.denominator);
        d["bound"] = to_py(row.bound);
        d["parity_matched"] = row.parity_matched;
        rows.append(d);
    }
    py::dict out;
    out["kind"] = to_string(r.kind);
    out["value"] = to_py(r.value());
    out["selector"] = r.best_row().selector.to_string();
    out["radius"] = r.best_row().radius;
    out["rows"] = rows;
    out["notes"] = r.notes;
    return out;
}

BoundRequest make_request(std::optional<unsigned> height, std::optional<std::vector<unsigned>> type,
                          unsigned min_distance, std::optional<std::string> layer)
{
    BoundRequest req;
    if (height.has_value() == type.has_value())
        throw ValidationError("give exactly one of height or type");
    req.constraint = height ? CodeConstraint::of_height(*height) : CodeConstraint::of_type(to_partition(*type));
    req.min_distance = min_distance;
    if (layer)
        req.layer = LayerSelector::parse(*layer);
    return req;
}

std::vector<Element> elements(const ConcreteModule& m, const std::vector<std::vector<long>>& coords)
{
    std::vector<Element> out;
    for (const auto& c : coords)
        out.push_back(m.encode(c));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Sphere sizes, code bounds and channel simulation on lattices of submodules";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

    m.def("gaussian_binomial", [](long l, long k, unsigned long q) { return to_py(gaussian_binomial(l, k, q)); },
          py::arg("l"), py::arg("k"), py::arg("q"));
    m.def("partitions_of", [](unsigned n) {
        py::list out;
        for (const auto& p : partitions_of(n))
            out.append(from_partition(p));
        return out;
    });
    m.def("conjugate", [](const std::vector<unsigned>& p) { return from_partition(conjugate(to_partition(p))); });

    py::class_<CountTable>(m, "CountTable")
        .def(py::init([](const std::string& profile) { return new CountTable(LatticeProfile::parse(profile)); }),
             py::arg("profile"))
        .def_property_readonly("profile", [](const CountTable& t) { return t.profile().to_string(); })
        .def("types", [](const CountTable& t) {
            py::list out;
            for (const auto& p : t.types())
                out.append(from_partition(p));
            return out;
        })
        .def("alpha", [](const CountTable& t, const std::vector<unsigned>& mu, const std::vector<unsigned>& phi) {
            return to_py(t.alpha(to_partition(mu), to_partition(phi)));
        })
        .def("beta", [](const CountTable& t, const std::vector<unsigned>& mu, const std::vector<unsigned>& phi) {
            return to_py(t.beta(to_partition(mu), to_partition(phi)));
        })
        .def("gamma", [](const CountTable& t, const std::vector<unsigned>& tp, const std::vector<unsigned>& mu,
                         const Radii& rs) { return to_py(t.gamma(to_partition(tp), to_partition(mu), rs)); })
        .def("gamma_dual", [](const CountTable& t, const std::vector<unsigned>& tp, const std::vector<unsigned>& mu,
                              const Radii& rs) { return to_py(t.gamma_dual(to_partition(tp), to_partition(mu), rs)); })
        .def("sphere_layer_by_type",
             [](const CountTable& t, const std::vector<unsigned>& tp, unsigned r, const std::vector<unsigned>& mu) {
                 return to_py(t.sphere_layer_by_type(to_partition(tp), r, to_partition(mu)));
             })
        .def("sphere_layer_by_height", [](const CountTable& t, const std::vector<unsigned>& tp, unsigned r,
                                          unsigned l) { return to_py(t.sphere_layer_by_height(to_partition(tp), r, l)); })
        .def("sphere_size", [](const CountTable& t, const std::vector<unsigned>& tp,
                               unsigned r) { return to_py(t.sphere_size(to_partition(tp), r)); })
        .def("height_count", [](const CountTable& t, unsigned l) { return to_py(t.height_count(l)); })
        .def("type_count",
             [](const CountTable& t, const std::vector<unsigned>& mu) { return to_py(t.type_count(to_partition(mu))); });

    py::class_<ConcreteLattice>(m, "Lattice")
        .def(py::init([](const std::string& module, std::size_t cap) {
                 return enumerate_lattice(ConcreteModule::parse(module, cap));
             }),
             py::arg("module"), py::arg("cap") = ConcreteModule::default_element_cap)
        .def("__len__", &ConcreteLattice::size)
        .def_property_readonly("module", [](const ConcreteLattice& l) { return l.module().to_string(); })
        .def_property_readonly("top", &ConcreteLattice::top)
        .def("height", &ConcreteLattice::height)
        .def("type", [](const ConcreteLattice& l, std::size_t i) { return from_partition(l.type(i)); })
        .def("leq", &ConcreteLattice::leq)
        .def("meet", &ConcreteLattice::meet)
        .def("join", &ConcreteLattice::join)
        .def("distance", [](const ConcreteLattice& l, std::size_t u, std::size_t v) { return distance(l, u, v); })
        .def("sphere", [](const ConcreteLattice& l, std::size_t u, unsigned r) { return oracle_sphere(l, u, r); })
        .def("of_height", &ConcreteLattice::of_height)
        .def("of_type", [](const ConcreteLattice& l, const std::vector<unsigned>& mu) { return l.of_type(to_partition(mu)); })
        .def("era_err", [](const ConcreteLattice& l, std::size_t u, std::size_t v) {
            const auto e = era_err(l, u, v);
            return py::make_tuple(e.era, e.err, e.dist);
        })
        .def("check_enumerability", [](const ConcreteLattice& l) {
            const auto r = check_enumerability(l);
            py::dict d;
            d["down"] = r.down;
            d["up"] = r.up;
            if (r.witness)
                d["witness"] = py::make_tuple(r.witness->u, r.witness->v, from_partition(r.witness->mu));
            else
                d["witness"] = py::none();
            return d;
        })
        .def("max_code_search",
             [](const ConcreteLattice& l, std::optional<unsigned> height, std::optional<std::vector<unsigned>> type,
                unsigned min_distance) {
                 if (height.has_value() == type.has_value())
                     throw ValidationError("give exactly one of height or type");
                 const auto c = height ? CodeConstraint::of_height(*height) : CodeConstraint::of_type(to_partition(*type));
                 const auto r = max_code_search(l, c, min_distance);
                 return py::make_tuple(r.code, r.exact);
             },
             py::arg("height") = py::none(), py::arg("type") = py::none(), py::arg("min_distance"))
        .def("md_decode",
             [](const ConcreteLattice& l, const std::vector<std::size_t>& code, std::size_t v) {
                 const auto r = md_decode(l, code, v);
                 return py::make_tuple(r.nearest, r.distance);
             })
        .def("verify", [](const ConcreteLattice& l, bool full) { return verify_lattice(l, full).ok(); },
             py::arg("full") = false)
        .def("to_json", [](const ConcreteLattice& l) { return export_lattice_json(l); });

    auto bound = [&](const char* name, auto enumerable_fn, auto concrete_fn) {
        m.def(
            name,
            [=](const std::string& source, std::optional<unsigned> height, std::optional<std::vector<unsigned>> type,
                unsigned min_distance, std::optional<std::string> layer, bool oracle) {
                const auto req = make_request(height, type, min_distance, layer);
                if (oracle)
                    return bound_dict(concrete_fn(enumerate_lattice(ConcreteModule::parse(source)), req));
                return bound_dict(enumerable_fn(CountTable(LatticeProfile::parse(source)), req));
            },
            py::arg("source"), py::arg("height") = py::none(), py::arg("type") = py::none(), py::arg("min_distance"),
            py::arg("layer") = py::none(), py::arg("oracle") = false);
    };
    bound(
        "packing_bound", [](const CountTable& t, const BoundRequest& r) { return packing_bound(t, r); },
        [](const ConcreteLattice& l, const BoundRequest& r) { return packing_bound(l, r); });
    bound(
        "covering_bound", [](const CountTable& t, const BoundRequest& r) { return covering_bound(t, r); },
        [](const ConcreteLattice& l, const BoundRequest& r) { return covering_bound(l, r); });
    bound(
        "singleton_bound", [](const CountTable& t, const BoundRequest& r) { return singleton_bound(t, r); },
        [](const ConcreteLattice& l, const BoundRequest& r) { return singleton_bound(l, r); });

    m.def(
        "simulate",
        [](const std::string& module, const std::vector<std::vector<long>>& sent, const std::string& topology,
           const std::vector<std::pair<std::size_t, std::vector<long>>>& errors, std::uint64_t seed, unsigned rounds,
           unsigned per_edge) {
            const auto mod = ConcreteModule::parse(module);
            const auto topo = topology == "butterfly" ? NetworkTopology::butterfly()
                              : topology == "line"    ? NetworkTopology::line(1)
                                                      : NetworkTopology::from_json(topology);
            std::vector<ErrorInjection> injected;
            for (const auto& [edge, coords] : errors)
                injected.push_back({edge, mod.encode(coords)});
            const auto o = simulate(topo, mod, elements(mod, sent), injected, {seed, rounds, per_edge});
            py::dict d;
            d["era"] = o.era;
            d["err"] = o.err;
            d["dist"] = o.dist;
            d["sent_height"] = height_of(mod, o.sent);
            d["received_height"] = height_of(mod, o.received);
            d["received_below_sent"] = o.received.subset_of(o.sent);
            d["injected_error_rank_profile"] = from_partition(o.injected_error_rank_profile);
            return d;
        },
        py::arg("module"), py::arg("sent"), py::arg("topology") = "line",
        py::arg("errors") = std::vector<std::pair<std::size_t, std::vector<long>>>{}, py::arg("seed") = 1,
        py::arg("rounds") = 1, py::arg("per_edge") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
