#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latsphere/enumerable.hpp"
#include "latsphere/oracle.hpp"

namespace latsphere {

struct VerifyCheck {
    std::string name;
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::vector<std::string> samples; // first few mismatches, human readable

    bool ok() const noexcept { return mismatches == 0; }
};

struct VerifyReport {
    std::string module;
    std::size_t submodules = 0;
    std::map<Partition, std::size_t> type_counts;
    EnumerabilityReport enumerability;
    // set when the module is Z_{p^s}^N or F_p^N, i.e. has a counting profile
    std::optional<LatticeProfile> profile;
    std::vector<VerifyCheck> checks;

    bool ok() const;
};

// The module behind an enumerable profile, if it has one.
std::optional<LatticeProfile> profile_of(const ConcreteModule& module);

/* Compares the counting formulas with direct counts on the lattice, element by element:
 * alpha, beta, gamma, gamma_dual (single radius), sphere layers and sphere sizes.
 * With `full`, also two-step chains and the layer-disjointness theorem for r <= 3. */
VerifyReport verify_lattice(const ConcreteLattice& lat, bool full);

std::string format_verify_report(const VerifyReport& report);
std::string verify_report_json(const VerifyReport& report);

} // namespace latsphere
