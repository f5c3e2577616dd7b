#ifndef CARTIER_PRIME_FIELD_HPP
#define CARTIER_PRIME_FIELD_HPP

#include <cstdint>
#include <string>

#include <cartier/error.hpp>

namespace cartier
{

inline bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

// Arithmetic context for F_p. Elements are plain residues 0..p-1; the modulus is
// runtime data so that a single binary can serve every prime.
class PrimeField
{
public:
    using value_type = std::uint32_t;

    explicit PrimeField(std::uint32_t p) : p_{p}
    {
        if (!is_prime(p) || p > (1u << 20)) {
            throw domain_error("PrimeField: modulus " + std::to_string(p) + " is not a supported prime");
        }
    }

    std::uint32_t p() const noexcept { return p_; }

    value_type reduce(long long v) const noexcept
    {
        long long r = v % static_cast<long long>(p_);
        return static_cast<value_type>(r < 0 ? r + p_ : r);
    }
    value_type add(value_type a, value_type b) const noexcept
    {
        value_type s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    value_type neg(value_type a) const noexcept { return a == 0 ? 0 : p_ - a; }
    value_type mul(value_type a, value_type b) const noexcept
    {
        return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
    }
    value_type pow(value_type a, std::uint64_t e) const noexcept
    {
        value_type r = 1 % p_;
        while (e != 0) {
            if (e & 1u) {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    value_type inv(value_type a) const
    {
        if (a % p_ == 0) {
            throw domain_error("PrimeField: inverse of zero");
        }
        return pow(a, p_ - 2);
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

    friend bool operator==(const PrimeField &, const PrimeField &) = default;

private:
    std::uint32_t p_;
};

} // namespace cartier

#endif
