#ifndef CARTIER_FINITE_FIELD_HPP
#define CARTIER_FINITE_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/polynomial.hpp>
#include <cartier/prime_field.hpp>

namespace cartier
{

inline constexpr std::uint32_t max_field_order = 1024;

// GF(q) for q = p^k <= max_field_order, built as F_p[t]/(m) with m the first
// monic irreducible of degree k in lexicographic order. An element is encoded
// as the integer sum d_i p^i of its coefficient digits, so the prime field is
// exactly {0, ..., p-1} and its integer values are the F_p residues.
class FiniteField
{
public:
    explicit FiniteField(std::uint32_t q) : q_{q}
    {
        if (q < 2 || q > max_field_order) {
            throw domain_error("field order " + std::to_string(q) + " outside [2, " + std::to_string(max_field_order) +
                               "]");
        }
        std::uint32_t p = 2;
        while (q % p != 0) {
            ++p;
        }
        std::uint32_t k = 0;
        for (std::uint32_t r = q; r > 1; r /= p) {
            if (r % p != 0) {
                throw domain_error(std::to_string(q) + " is not a prime power");
            }
            ++k;
        }
        p_ = p;
        k_ = k;
        modulus_ = find_irreducible(p, k);
        build_tables();
    }

    std::uint32_t q() const noexcept { return q_; }
    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return k_; }
    const Poly &modulus() const noexcept { return modulus_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t inv(std::uint32_t a) const
    {
        if (a == 0) {
            throw domain_error("finite field: inverse of zero");
        }
        return inv_[a];
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const
    {
        std::uint32_t r = 1;
        while (e != 0) {
            if (e & 1u) {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    bool in_prime_field(std::uint32_t a) const noexcept { return a < p_; }

    // Element as polynomial in the generator t, e.g. "t^2 + 2".
    std::string describe(std::uint32_t a) const
    {
        Poly e(p_, digits(a));
        auto s = e.to_string();
        for (auto &c : s) {
            if (c == 'X') {
                c = 't';
            }
        }
        return s;
    }

    std::vector<std::uint32_t> digits(std::uint32_t a) const
    {
        std::vector<std::uint32_t> d(k_, 0);
        for (std::uint32_t i = 0; i < k_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
        return d;
    }
    std::uint32_t encode(const Poly &e) const
    {
        std::uint32_t a = 0;
        for (std::uint32_t i = k_; i-- > 0;) {
            a = a * p_ + e.coeff(i);
        }
        return a;
    }

private:
    static Poly find_irreducible(std::uint32_t p, std::uint32_t k)
    {
        if (k == 1) {
            return Poly::x(p);
        }
        std::uint32_t count = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            count *= p;
        }
        for (std::uint32_t low = 0; low < count; ++low) {
            std::vector<std::uint32_t> c(k + 1, 0);
            c[k] = 1;
            for (std::uint32_t i = 0, v = low; i < k; ++i, v /= p) {
                c[i] = v % p;
            }
            const Poly m(p, c);
            if (is_irreducible(m)) {
                return m;
            }
        }
        throw domain_error("no irreducible polynomial found"); // unreachable for prime p
    }

    // Trial division by every monic polynomial of degree <= deg/2.
    static bool is_irreducible(const Poly &m)
    {
        const auto p = m.p();
        const int d = m.degree();
        for (int dd = 1; dd <= d / 2; ++dd) {
            std::uint32_t count = 1;
            for (int i = 0; i < dd; ++i) {
                count *= p;
            }
            for (std::uint32_t low = 0; low < count; ++low) {
                std::vector<std::uint32_t> c(static_cast<std::size_t>(dd) + 1, 0);
                c[static_cast<std::size_t>(dd)] = 1;
                for (int i = 0, v = static_cast<int>(low); i < dd; ++i, v /= static_cast<int>(p)) {
                    c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v) % p;
                }
                if ((m % Poly(p, c)).is_zero()) {
                    return false;
                }
            }
        }
        return true;
    }

    void build_tables()
    {
        add_.assign(q_ * q_, 0);
        mul_.assign(q_ * q_, 0);
        neg_.assign(q_, 0);
        inv_.assign(q_, 0);
        const PrimeField f{p_};
        std::vector<Poly> polys;
        for (std::uint32_t a = 0; a < q_; ++a) {
            polys.emplace_back(p_, digits(a));
        }
        for (std::uint32_t a = 0; a < q_; ++a) {
            const auto da = digits(a);
            std::vector<std::uint32_t> n(k_);
            for (std::uint32_t i = 0; i < k_; ++i) {
                n[i] = f.neg(da[i]);
            }
            neg_[a] = encode(Poly(p_, n));
            for (std::uint32_t b = 0; b < q_; ++b) {
                add_[a * q_ + b] = encode(polys[a] + polys[b]);
                mul_[a * q_ + b] = encode((polys[a] * polys[b]) % modulus_);
            }
        }
        for (std::uint32_t a = 1; a < q_; ++a) {
            for (std::uint32_t b = 1; b < q_; ++b) {
                if (mul_[a * q_ + b] == 1) {
                    inv_[a] = b;
                    break;
                }
            }
        }
    }

    std::uint32_t q_;
    std::uint32_t p_ = 0;
    std::uint32_t k_ = 0;
    Poly modulus_;
    std::vector<std::uint32_t> add_;
    std::vector<std::uint32_t> mul_;
    std::vector<std::uint32_t> neg_;
    std::vector<std::uint32_t> inv_;
};

// Value wrapper so generic polynomial evaluation can run over GF(q).
struct GfValue {
    const FiniteField *field = nullptr;
    std::uint32_t v = 0;

    friend GfValue operator+(GfValue a, GfValue b) { return {a.field, a.field->add(a.v, b.v)}; }
    friend GfValue operator*(GfValue a, GfValue b) { return {a.field, a.field->mul(a.v, b.v)}; }
    friend bool operator==(GfValue a, GfValue b) { return a.v == b.v; }
};

// Evaluates an F_p[X] coefficient at X = x in GF(q).
inline GfValue eval_in(const FiniteField &F, const Poly &c, std::uint32_t x)
{
    std::uint32_t r = 0;
    for (std::size_t k = c.coeffs().size(); k-- > 0;) {
        r = F.add(F.mul(r, x), c.coeffs()[k]);
    }
    return {&F, r};
}

} // namespace cartier

#endif
