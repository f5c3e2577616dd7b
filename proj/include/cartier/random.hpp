#ifndef CARTIER_RANDOM_HPP
#define CARTIER_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <cartier/dfao.hpp>
#include <cartier/multi_polynomial.hpp>
#include <cartier/polynomial.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// Seedable generator that produces the same stream on every platform:
// std::mt19937_64 is fully specified by the standard, and bounded draws use
// rejection sampling here instead of std::uniform_int_distribution (whose
// algorithm is implementation-defined).
class Rng
{
public:
    explicit Rng(std::uint64_t seed = 1) : engine_{seed} {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
        for (;;) {
            const auto x = engine_();
            if (x < limit) {
                return x % n;
            }
        }
    }
    std::int64_t between(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool coin() { return below(2) == 1; }

private:
    std::mt19937_64 engine_;
};

inline std::vector<std::uint32_t> random_digits(Rng &rng, std::uint32_t p, std::size_t len)
{
    std::vector<std::uint32_t> v(len);
    for (auto &c : v) {
        c = static_cast<std::uint32_t>(rng.below(p));
    }
    return v;
}

// Uniform polynomial of degree at most max_degree.
inline Poly random_poly(Rng &rng, std::uint32_t p, int max_degree)
{
    return Poly(p, random_digits(rng, p, static_cast<std::size_t>(max_degree + 1)));
}

// Series with offset 0 and N uniformly random known coefficients.
inline Series random_series(Rng &rng, std::uint32_t p, std::int64_t N)
{
    return Series::from_coeffs(p, 0, random_digits(rng, p, static_cast<std::size_t>(N)), N);
}

// Random series with a nonzero coefficient at a random offset in [lo, hi].
inline Series random_nonzero_series(Rng &rng, std::uint32_t p, std::int64_t lo, std::int64_t hi, std::int64_t len)
{
    auto v = random_digits(rng, p, static_cast<std::size_t>(len));
    v[0] = 1 + static_cast<std::uint32_t>(rng.below(p - 1));
    const auto off = rng.between(lo, hi);
    return Series::from_coeffs(p, off, std::move(v), off + len);
}

// Automaton with uniformly drawn transitions and outputs.
inline Dfao random_dfao(Rng &rng, std::uint32_t p, std::size_t states)
{
    std::vector<std::vector<std::size_t>> delta(states);
    std::vector<std::uint32_t> tau(states);
    for (std::size_t s = 0; s < states; ++s) {
        for (std::uint32_t d = 0; d < p; ++d) {
            delta[s].push_back(static_cast<std::size_t>(rng.below(states)));
        }
        tau[s] = static_cast<std::uint32_t>(rng.below(p));
    }
    return Dfao(p, {}, delta, 0, tau);
}

} // namespace cartier

#endif
