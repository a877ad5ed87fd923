#include "latsphere/enumerable.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "latsphere/error.hpp"

namespace latsphere {

namespace {

bool is_prime(unsigned long n)
{
    if (n < 2)
        return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

bool is_prime_power(unsigned long n)
{
    if (n < 2)
        return false;
    unsigned long d = 2;
    while (n % d != 0)
        ++d;
    while (n % d == 0)
        n /= d;
    return n == 1;
}

template <class Map, class Key, class Fn>
BigCount memoized(std::mutex& mutex, Map& memo, const Key& key, Fn&& compute)
{
    {
        std::lock_guard lock(mutex);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
    }
    // computed unlocked: the recursion re-enters the cache
    BigCount value = compute();
    std::lock_guard lock(mutex);
    memo.insert_or_assign(key, value);
    return value;
}

Radii drop_last(const Radii& rs)
{
    return Radii(rs.begin(), rs.end() - 1);
}

Radii append(const Radii& rs, unsigned r)
{
    Radii out = rs;
    out.push_back(r);
    return out;
}

} // namespace

LatticeProfile LatticeProfile::vector_space(unsigned long q, unsigned n)
{
    if (!is_prime_power(q))
        throw ValidationError("F profile needs a prime power q, got " + std::to_string(q));
    if (n == 0)
        throw ValidationError("profile needs N >= 1");
    return {RingKind::VectorSpace, q, 1, n};
}

LatticeProfile LatticeProfile::prime_power(unsigned long p, unsigned s, unsigned n)
{
    if (!is_prime(p))
        throw ValidationError("Z profile needs a prime p, got " + std::to_string(p));
    if (s == 0 || n == 0)
        throw ValidationError("Z profile needs s >= 1 and N >= 1");
    return {RingKind::PrimePowerModule, p, s, n};
}

LatticeProfile LatticeProfile::parse(std::string_view text)
{
    const std::string original(text);
    if (text.size() < 2 || text[1] != ':' || (text[0] != 'F' && text[0] != 'Z'))
        throw ValidationError("profile must look like F:q=2,N=4 or Z:p=2,s=2,N=2, got '" + original + "'");
    const char kind = text[0];
    text.remove_prefix(2);

    std::map<std::string, unsigned long> fields;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("bad profile field '" + std::string(item) + "' in '" + original + "'");
        std::string key(item.substr(0, eq));
        std::string_view val = item.substr(eq + 1);
        unsigned long v = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (val.empty() || ec != std::errc{} || ptr != val.data() + val.size())
            throw ValidationError("bad value for '" + key + "' in '" + original + "'");
        fields[key] = v;
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    auto need = [&](const char* key) {
        auto it = fields.find(key);
        if (it == fields.end())
            throw ValidationError(std::string("profile '") + original + "' is missing " + key);
        return it->second;
    };
    if (kind == 'F') {
        if (fields.size() != 2)
            throw ValidationError("F profile takes exactly q and N: '" + original + "'");
        return vector_space(need("q"), static_cast<unsigned>(need("N")));
    }
    if (fields.size() != 3)
        throw ValidationError("Z profile takes exactly p, s and N: '" + original + "'");
    return prime_power(need("p"), static_cast<unsigned>(need("s")), static_cast<unsigned>(need("N")));
}

std::string LatticeProfile::to_string() const
{
    if (kind == RingKind::VectorSpace)
        return "F:q=" + std::to_string(base) + ",N=" + std::to_string(n);
    return "Z:p=" + std::to_string(base) + ",s=" + std::to_string(s) + ",N=" + std::to_string(n);
}

CountTable::CountTable(LatticeProfile profile)
    : profile_(profile)
    , lambda_(profile.top_type())
{
}

void CountTable::require_type(const Partition& mu, const char* what) const
{
    if (!leq(mu, lambda_))
        throw ValidationError(std::string(what) + " " + mu.to_string() + " is not <= top type " + lambda_.to_string());
}

std::vector<Partition> CountTable::types() const
{
    return partitions_below(lambda_);
}

std::vector<Partition> CountTable::types_of_height(unsigned l) const
{
    return partitions_of(l, lambda_);
}

BigCount CountTable::alpha(const Partition& mu, const Partition& phi) const
{
    require_type(mu, "alpha: type");
    if (!leq(phi, mu))
        return 0;
    return memoized(mutex_, alpha_memo_, PairKey{mu, phi}, [&] { return alpha_uncached(mu, phi); });
}

BigCount CountTable::alpha_uncached(const Partition& mu, const Partition& phi) const
{
    const auto p = profile_.base;
    if (profile_.kind == RingKind::VectorSpace)
        return gaussian_binomial(mu.length(), phi.length(), p);

    // Butler: ∏_{j=1}^{μ_1} p^{φ'_{j+1}(μ'_j − φ'_j)} [μ'_j − φ'_{j+1} choose φ'_j − φ'_{j+1}]_p
    BigCount acc = 1;
    for (std::size_t j = 1; j <= mu.part(1); ++j) {
        const long mj = mu.conj_part(j);
        const long fj = phi.conj_part(j);
        const long fj1 = phi.conj_part(j + 1);
        acc *= ppow(p, static_cast<unsigned>(fj1 * (mj - fj)));
        acc *= gaussian_binomial(mj - fj1, fj - fj1, p);
    }
    return acc;
}

BigCount CountTable::beta(const Partition& mu, const Partition& phi) const
{
    require_type(mu, "beta: type");
    if (!leq(mu, phi) || !leq(phi, lambda_))
        return 0;
    return alpha(complement(lambda_, mu), complement(lambda_, phi));
}

BigCount CountTable::alpha_chain(const Partition& mu, const Radii& rs) const
{
    require_type(mu, "alpha_chain: type");
    if (rs.empty())
        return 1;
    if (rs.back() > mu.weight())
        return 0;
    return memoized(mutex_, alpha_chain_memo_, ChainKey{mu, rs}, [&] {
        BigCount sum = 0;
        const Radii head = drop_last(rs);
        for (const auto& theta : partitions_of(rs.back(), mu))
            sum += alpha(mu, theta) * alpha_chain(theta, head);
        return sum;
    });
}

BigCount CountTable::beta_chain(const Partition& mu, const Radii& rs) const
{
    require_type(mu, "beta_chain: type");
    if (rs.empty())
        return 1;
    if (rs.back() < mu.weight() || rs.back() > profile_.top_height())
        return 0;
    return memoized(mutex_, beta_chain_memo_, ChainKey{mu, rs}, [&] {
        BigCount sum = 0;
        const Radii head = drop_last(rs);
        for (const auto& theta : partitions_of(rs.back(), lambda_)) {
            if (!leq(mu, theta))
                continue;
            sum += beta(mu, theta) * beta_chain(theta, head);
        }
        return sum;
    });
}

BigCount CountTable::gamma(const Partition& tp_u, const Partition& mu, const Radii& rs) const
{
    require_type(tp_u, "gamma: centre type");
    require_type(mu, "gamma: type");
    if (mu.weight() > tp_u.weight())
        throw ValidationError("gamma needs |mu| <= |tp(u)|; use gamma_dual for " + mu.to_string() +
                              " against " + tp_u.to_string());
    if (rs.empty())
        throw ValidationError("gamma needs at least one radius");

    const unsigned top = mu.weight();
    const unsigned last = rs.back();
    if (last > top)
        return 0;
    if (last == top)
        return alpha(tp_u, mu) * alpha_chain(mu, drop_last(rs));

    return memoized(mutex_, gamma_memo_, GammaKey{tp_u, mu, rs}, [&] {
        const Radii head = drop_last(rs);
        BigCount delta = 0;
        for (const auto& theta : partitions_of(last, tp_u))
            delta += alpha(tp_u, theta) * beta(theta, mu) * alpha_chain(theta, head);
        BigCount above = 0;
        for (unsigned l = last + 1; l <= top; ++l)
            above += gamma(tp_u, mu, append(rs, l));
        return BigCount(delta - above);
    });
}

BigCount CountTable::gamma_dual(const Partition& tp_u, const Partition& mu, const Radii& rs) const
{
    require_type(tp_u, "gamma_dual: centre type");
    require_type(mu, "gamma_dual: type");
    if (mu.weight() <= tp_u.weight())
        throw ValidationError("gamma_dual needs |mu| > |tp(u)|; use gamma for " + mu.to_string() +
                              " against " + tp_u.to_string());
    if (rs.empty())
        throw ValidationError("gamma_dual needs at least one radius");

    const unsigned bottom = mu.weight();
    const unsigned last = rs.back();
    if (last < bottom || last > profile_.top_height())
        return 0;
    // h(u∨v) = |μ| forces u∨v = v, i.e. v ≥ u
    if (last == bottom)
        return beta(tp_u, mu) * beta_chain(mu, drop_last(rs));

    return memoized(mutex_, gamma_dual_memo_, GammaKey{tp_u, mu, rs}, [&] {
        const Radii head = drop_last(rs);
        BigCount delta = 0;
        for (const auto& theta : partitions_of(last, lambda_)) {
            if (!leq(tp_u, theta))
                continue;
            delta += beta(tp_u, theta) * alpha(theta, mu) * beta_chain(theta, head);
        }
        BigCount below = 0;
        for (unsigned l = bottom; l < last; ++l)
            below += gamma_dual(tp_u, mu, append(rs, l));
        return BigCount(delta - below);
    });
}

BigCount CountTable::sphere_layer_by_type(const Partition& tp_u, unsigned r, const Partition& mu) const
{
    require_type(tp_u, "sphere: centre type");
    require_type(mu, "sphere: layer type");
    const long hu = tp_u.weight();
    const long hm = mu.weight();
    const long rr = r;

    BigCount sum = 0;
    if (hm <= hu) {
        // d(u,v) = |φ| + |μ| − 2 h(u∧v) ≤ r
        const long num = hu + hm - rr;
        const long lo = num <= 0 ? 0 : (num + 1) / 2;
        for (long r0 = lo; r0 <= hm; ++r0)
            sum += gamma(tp_u, mu, {static_cast<unsigned>(r0)});
    } else {
        // d(u,v) = 2 h(u∨v) − |φ| − |μ| ≤ r
        const long hi = std::min<long>((hu + hm + rr) / 2, profile_.top_height());
        for (long r0 = hm; r0 <= hi; ++r0)
            sum += gamma_dual(tp_u, mu, {static_cast<unsigned>(r0)});
    }
    return sum;
}

BigCount CountTable::sphere_layer_by_height(const Partition& tp_u, unsigned r, unsigned l) const
{
    BigCount sum = 0;
    for (const auto& mu : types_of_height(l))
        sum += sphere_layer_by_type(tp_u, r, mu);
    return sum;
}

BigCount CountTable::sphere_size(const Partition& tp_u, unsigned r) const
{
    require_type(tp_u, "sphere: centre type");
    const long h = tp_u.weight();
    const long lo = std::max<long>(0, h - static_cast<long>(r));
    const long hi = std::min<long>(profile_.top_height(), h + static_cast<long>(r));
    BigCount sum = 0;
    for (long l = lo; l <= hi; ++l)
        sum += sphere_layer_by_height(tp_u, r, static_cast<unsigned>(l));
    return sum;
}

BigCount CountTable::height_count(unsigned l) const
{
    return height_count_below(lambda_, l);
}

BigCount CountTable::height_count_below(const Partition& mu, unsigned l) const
{
    require_type(mu, "height_count_below: type");
    BigCount sum = 0;
    for (const auto& theta : partitions_of(l, mu))
        sum += alpha(mu, theta);
    return sum;
}

} // namespace latsphere
