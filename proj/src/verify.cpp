#include "latsphere/verify.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace latsphere {

namespace {

constexpr std::size_t max_samples = 5;

class Recorder {
public:
    explicit Recorder(std::string name) { check_.name = std::move(name); }

    template <class A, class B>
    void compare(const A& formula, const B& oracle, const std::string& context)
    {
        ++check_.cases;
        if (BigCount(formula) == BigCount(oracle))
            return;
        ++check_.mismatches;
        if (check_.samples.size() < max_samples)
            check_.samples.push_back(context + ": formula " + to_decimal(BigCount(formula)) + ", oracle " +
                                     to_decimal(BigCount(oracle)));
    }

    VerifyCheck take() { return std::move(check_); }

private:
    VerifyCheck check_;
};

std::string ctx(const char* fn, std::size_t u, const Partition& tp, const std::string& rest)
{
    return std::string(fn) + "(u=#" + std::to_string(u) + " " + tp.to_string() + rest + ")";
}

} // namespace

bool VerifyReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.ok(); });
}

std::optional<LatticeProfile> profile_of(const ConcreteModule& module)
{
    const auto& e = module.exponents();
    if (e.empty() || std::adjacent_find(e.begin(), e.end(), std::not_equal_to<>()) != e.end())
        return std::nullopt;
    const auto n = static_cast<unsigned>(e.size());
    if (e.front() == 1)
        return LatticeProfile::vector_space(module.prime(), n);
    return LatticeProfile::prime_power(module.prime(), e.front(), n);
}

VerifyReport verify_lattice(const ConcreteLattice& lat, bool full)
{
    VerifyReport report;
    report.module = lat.module().to_string();
    report.submodules = lat.size();
    for (std::size_t i = 0; i < lat.size(); ++i)
        ++report.type_counts[lat.type(i)];
    report.enumerability = check_enumerability(lat);
    report.profile = profile_of(lat.module());
    if (!report.profile)
        return report;

    const CountTable table(*report.profile);
    const auto types = table.types();
    const unsigned H = table.profile().top_height();

    Recorder alpha("alpha"), beta("beta"), gamma("gamma"), gamma_dual("gamma_dual");
    Recorder layer("sphere_layer_by_type"), sphere("sphere_size");
    for (std::size_t u = 0; u < lat.size(); ++u) {
        const Partition& tp = lat.type(u);
        for (const auto& mu : types) {
            const std::string m = " mu=" + mu.to_string();
            alpha.compare(table.alpha(tp, mu), count_below(lat, u, mu), ctx("alpha", u, tp, m));
            beta.compare(table.beta(tp, mu), count_above(lat, u, mu), ctx("beta", u, tp, m));
            if (mu.weight() <= tp.weight()) {
                for (unsigned r0 = 0; r0 <= mu.weight(); ++r0)
                    gamma.compare(table.gamma(tp, mu, {r0}), count_meet_height(lat, u, mu, r0),
                                  ctx("gamma", u, tp, m + " r0=" + std::to_string(r0)));
            } else {
                for (unsigned r0 = mu.weight(); r0 <= H; ++r0)
                    gamma_dual.compare(table.gamma_dual(tp, mu, {r0}), count_join_height(lat, u, mu, r0),
                                       ctx("gamma_dual", u, tp, m + " r0=" + std::to_string(r0)));
            }
            for (unsigned r = 0; r <= H; ++r)
                layer.compare(table.sphere_layer_by_type(tp, r, mu),
                              oracle_sphere(lat, u, r, SphereFilter{std::nullopt, mu}).size(),
                              ctx("sphere_layer", u, tp, m + " r=" + std::to_string(r)));
        }
        for (unsigned r = 0; r <= H; ++r)
            sphere.compare(table.sphere_size(tp, r), oracle_sphere(lat, u, r).size(),
                           ctx("sphere_size", u, tp, " r=" + std::to_string(r)));
    }
    for (auto* rec : {&alpha, &beta, &gamma, &gamma_dual, &layer, &sphere})
        report.checks.push_back(rec->take());

    if (!full)
        return report;

    Recorder achain("alpha_chain"), bchain("beta_chain");
    for (std::size_t u = 0; u < lat.size(); ++u) {
        const Partition& tp = lat.type(u);
        for (unsigned a = 0; a <= H; ++a)
            for (unsigned b = 0; b <= H; ++b) {
                const Radii rs{a, b};
                const std::string tail = " rs=(" + std::to_string(a) + "," + std::to_string(b) + ")";
                achain.compare(table.alpha_chain(tp, rs), count_chains_below(lat, u, rs),
                               ctx("alpha_chain", u, tp, tail));
                bchain.compare(table.beta_chain(tp, rs), count_chains_above(lat, u, rs),
                               ctx("beta_chain", u, tp, tail));
            }
    }
    report.checks.push_back(achain.take());
    report.checks.push_back(bchain.take());

    VerifyCheck disjoint;
    disjoint.name = "layer_disjointness";
    for (unsigned l = 0; l <= H; ++l)
        for (unsigned r = 0; r <= 3; ++r) {
            const auto d = check_layer_disjointness_theorem(lat, l, r);
            ++disjoint.cases;
            if (!d.holds) {
                ++disjoint.mismatches;
                if (disjoint.samples.size() < max_samples && d.violation) {
                    const auto& [u1, u2, t] = *d.violation;
                    disjoint.samples.push_back("l=" + std::to_string(l) + " r=" + std::to_string(r) + " u1=#" +
                                               std::to_string(u1) + " u2=#" + std::to_string(u2) +
                                               " t=" + std::to_string(t));
                }
            }
        }
    report.checks.push_back(std::move(disjoint));
    return report;
}

std::string format_verify_report(const VerifyReport& report)
{
    std::ostringstream os;
    os << "module: " << report.module << "\n";
    os << "submodules: " << report.submodules << "\n";
    os << "types:";
    for (const auto& [mu, n] : report.type_counts)
        os << " " << mu << "x" << n;
    os << "\n";
    os << "down-enumerable: " << (report.enumerability.down ? "yes" : "no") << "\n";
    os << "up-enumerable: " << (report.enumerability.up ? "yes" : "no") << "\n";
    if (const auto& w = report.enumerability.witness)
        os << "witness: #" << w->u << " and #" << w->v << " share a type but have " << w->count_u << " vs "
           << w->count_v << " elements of type " << w->mu << (w->upward ? " above" : " below") << "\n";
    if (!report.profile) {
        os << "formula checks: skipped (no counting profile for this module)\n";
        return os.str();
    }
    os << "profile: " << report.profile->to_string() << "\n";
    for (const auto& c : report.checks) {
        os << (c.ok() ? "ok   " : "FAIL ") << c.name << ": " << c.cases - c.mismatches << "/" << c.cases
           << " match\n";
        for (const auto& s : c.samples)
            os << "       " << s << "\n";
    }
    os << (report.ok() ? "all checks match" : "MISMATCH") << "\n";
    return os.str();
}

std::string verify_report_json(const VerifyReport& report)
{
    nlohmann::ordered_json doc;
    doc["module"] = report.module;
    doc["submodules"] = report.submodules;
    auto& types = doc["types"] = nlohmann::ordered_json::object();
    for (const auto& [mu, n] : report.type_counts)
        types[mu.to_string()] = n;
    doc["down_enumerable"] = report.enumerability.down;
    doc["up_enumerable"] = report.enumerability.up;
    if (const auto& w = report.enumerability.witness)
        doc["witness"] = {{"u", w->u}, {"v", w->v}, {"type", w->mu.to_string()},
                          {"count_u", w->count_u}, {"count_v", w->count_v}, {"upward", w->upward}};
    doc["profile"] = report.profile ? nlohmann::ordered_json(report.profile->to_string()) : nlohmann::ordered_json();
    auto& checks = doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"cases", c.cases}, {"mismatches", c.mismatches}, {"samples", c.samples}});
    doc["ok"] = report.ok();
    return doc.dump(2);
}

} // namespace latsphere
