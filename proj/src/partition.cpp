#include "latsphere/partition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

#include "latsphere/error.hpp"

namespace latsphere {

Partition::Partition(std::initializer_list<part_type> parts)
    : Partition(std::vector<part_type>(parts))
{
}

Partition::Partition(std::vector<part_type> parts)
    : parts_(std::move(parts))
{
    if (!std::is_sorted(parts_.begin(), parts_.end(), std::greater<>{}))
        throw ValidationError("partition parts must be non-increasing: " + to_string());
    while (!parts_.empty() && parts_.back() == 0)
        parts_.pop_back();
}

Partition Partition::rectangle(part_type s, unsigned l)
{
    if (s == 0)
        return {};
    return Partition(std::vector<part_type>(l, s));
}

Partition::part_type Partition::conj_part(std::size_t j) const noexcept
{
    if (j == 0)
        return 0;
    // parts_ is sorted descending, so count the prefix with parts >= j
    auto it = std::partition_point(parts_.begin(), parts_.end(),
                                   [j](part_type x) { return x >= j; });
    return static_cast<part_type>(it - parts_.begin());
}

unsigned Partition::weight() const noexcept
{
    return std::accumulate(parts_.begin(), parts_.end(), 0u);
}

bool Partition::is_rectangular() const noexcept
{
    return parts_.empty() || parts_.front() == parts_.back();
}

std::string Partition::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(parts_[i]);
    }
    out += ']';
    return out;
}

Partition Partition::parse(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ValidationError("partition must be written as [a,b,...]: '" + std::string(text) + "'");
    s = trim(s.substr(1, s.size() - 2));

    std::vector<part_type> parts;
    while (!s.empty()) {
        auto comma = s.find(',');
        std::string_view tok = trim(s.substr(0, comma));
        part_type v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ValidationError("bad partition part '" + std::string(tok) + "' in '" + std::string(text) + "'");
        parts.push_back(v);
        if (comma == std::string_view::npos)
            break;
        s = trim(s.substr(comma + 1));
        if (s.empty())
            throw ValidationError("trailing comma in partition '" + std::string(text) + "'");
    }
    return Partition(std::move(parts));
}

std::ostream& operator<<(std::ostream& os, const Partition& p)
{
    return os << p.to_string();
}

bool leq(const Partition& mu, const Partition& lambda)
{
    if (mu.length() > lambda.length())
        return false;
    for (std::size_t i = 1; i <= mu.length(); ++i)
        if (mu.part(i) > lambda.part(i))
            return false;
    return true;
}

Partition conjugate(const Partition& lambda)
{
    std::vector<Partition::part_type> out;
    if (lambda.empty())
        return {};
    out.reserve(lambda.part(1));
    for (std::size_t j = 1; j <= lambda.part(1); ++j)
        out.push_back(lambda.conj_part(j));
    return Partition(std::move(out));
}

Partition complement(const Partition& rect, const Partition& mu)
{
    if (!rect.is_rectangular())
        throw ValidationError("complement needs a rectangular partition, got " + rect.to_string());
    if (!leq(mu, rect))
        throw ValidationError("complement needs " + mu.to_string() + " <= " + rect.to_string());
    const std::size_t l = rect.length();
    const auto s = rect.part(1);
    std::vector<Partition::part_type> out(l);
    for (std::size_t i = 1; i <= l; ++i)
        out[i - 1] = s - mu.part(l + 1 - i);
    return Partition(std::move(out));
}

namespace {

void enumerate(unsigned remaining, unsigned max_part, std::vector<Partition::part_type>& cur,
               const std::optional<Partition>& bound, std::vector<Partition>& out)
{
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    unsigned cap = std::min(remaining, max_part);
    if (bound) {
        cap = std::min<unsigned>(cap, bound->part(cur.size() + 1));
        // the remaining parts cannot exceed what the bound still allows
        unsigned room = 0;
        for (std::size_t i = cur.size() + 1; i <= bound->length(); ++i)
            room += std::min<unsigned>(bound->part(i), cap);
        if (room < remaining)
            return;
    }
    for (unsigned p = cap; p >= 1; --p) {
        cur.push_back(p);
        enumerate(remaining - p, p, cur, bound, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<Partition> partitions_of(unsigned n, const std::optional<Partition>& bound)
{
    std::vector<Partition> out;
    std::vector<Partition::part_type> cur;
    enumerate(n, n, cur, bound, out);
    return out;
}

std::vector<Partition> partitions_below(const Partition& bound)
{
    std::vector<Partition> out;
    for (unsigned n = 0; n <= bound.weight(); ++n) {
        auto layer = partitions_of(n, bound);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

} // namespace latsphere
