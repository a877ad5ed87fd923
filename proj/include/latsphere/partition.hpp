#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace latsphere {

/* An integer partition: a non-increasing sequence of positive parts.
 *
 * Trailing zeros are stripped on construction, so two partitions that only
 * differ by zero padding compare equal. Reading a part past the end yields 0,
 * and indices in part() / conj_part() are 1-based to keep formulas readable.
 */
class Partition {
public:
    using part_type = unsigned;

    Partition() = default;
    Partition(std::initializer_list<part_type> parts);
    explicit Partition(std::vector<part_type> parts);

    // (s^l): l copies of s.
    static Partition rectangle(part_type s, unsigned l);

    const std::vector<part_type>& parts() const noexcept { return parts_; }
    std::size_t length() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }

    part_type part(std::size_t i) const noexcept
    {
        return (i >= 1 && i <= parts_.size()) ? parts_[i - 1] : 0;
    }

    // λ'_j = |{i : λ_i >= j}|
    part_type conj_part(std::size_t j) const noexcept;

    unsigned weight() const noexcept;
    bool is_rectangular() const noexcept;

    auto operator<=>(const Partition&) const = default;
    bool operator==(const Partition&) const = default;

    std::string to_string() const;
    static Partition parse(std::string_view text);

private:
    std::vector<part_type> parts_;
};

std::ostream& operator<<(std::ostream& os, const Partition& p);

inline unsigned weight(const Partition& p) { return p.weight(); }

// Componentwise order μ ≤ λ.
bool leq(const Partition& mu, const Partition& lambda);

Partition conjugate(const Partition& lambda);

/* λ−μ := (s−μ_l, ..., s−μ_1) for a rectangle λ = (s^l) and μ ≤ λ.
 * Throws ValidationError if λ is not rectangular or μ ≰ λ. */
Partition complement(const Partition& rect, const Partition& mu);

// All partitions of n in descending lexicographic order, optionally only those ≤ bound.
std::vector<Partition> partitions_of(unsigned n, const std::optional<Partition>& bound = std::nullopt);

// Every partition μ ≤ bound, ordered by weight and then descending lexicographically.
std::vector<Partition> partitions_below(const Partition& bound);

} // namespace latsphere
