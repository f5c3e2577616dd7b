#ifndef CARTIER_POLYNOMIAL_HPP
#define CARTIER_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/prime_field.hpp>

namespace cartier
{

// Univariate polynomial over F_p, coefficients little-endian in the exponent.
//
// A default-constructed polynomial has no modulus attached (p() == 0); it acts
// as the zero polynomial and adopts the modulus of whatever it is combined with.
class PrimePolynomial
{
public:
    // degree() of the zero polynomial.
    static constexpr int minus_infinity = -1;

    PrimePolynomial() = default;
    explicit PrimePolynomial(std::uint32_t p) : p_{p} { PrimeField{p}; }
    PrimePolynomial(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_{p}, c_{std::move(coeffs)}
    {
        const PrimeField f{p};
        for (auto &c : c_) {
            c %= p;
        }
        normalize();
    }

    static PrimePolynomial constant(std::uint32_t p, long long c)
    {
        return PrimePolynomial(p, {PrimeField{p}.reduce(c)});
    }
    static PrimePolynomial monomial(std::uint32_t p, long long c, std::size_t k)
    {
        std::vector<std::uint32_t> v(k + 1, 0);
        v[k] = PrimeField{p}.reduce(c);
        return PrimePolynomial(p, std::move(v));
    }
    static PrimePolynomial x(std::uint32_t p) { return monomial(p, 1, 1); }

    std::uint32_t p() const noexcept { return p_; }
    PrimeField field() const { return PrimeField{p_}; }
    int degree() const noexcept { return c_.empty() ? minus_infinity : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    const std::vector<std::uint32_t> &coeffs() const noexcept { return c_; }
    std::uint32_t coeff(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0; }
    std::uint32_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

    // Lowest exponent with a nonzero coefficient; minus_infinity for zero.
    int valuation() const noexcept
    {
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] != 0) {
                return static_cast<int>(k);
            }
        }
        return minus_infinity;
    }

    std::uint32_t eval(std::uint32_t x) const
    {
        const PrimeField f{p_};
        std::uint32_t r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            r = f.add(f.mul(r, x), *it);
        }
        return r;
    }

    PrimePolynomial operator-() const
    {
        PrimePolynomial r = *this;
        const PrimeField f{p_ == 0 ? 2 : p_};
        for (auto &c : r.c_) {
            c = f.neg(c);
        }
        return r;
    }

    PrimePolynomial &operator+=(const PrimePolynomial &o) { return *this = *this + o; }
    PrimePolynomial &operator-=(const PrimePolynomial &o) { return *this = *this - o; }
    PrimePolynomial &operator*=(const PrimePolynomial &o) { return *this = *this * o; }

    friend PrimePolynomial operator+(const PrimePolynomial &a, const PrimePolynomial &b)
    {
        const auto p = common_p(a, b);
        if (p == 0) {
            return {};
        }
        const PrimeField f{p};
        std::vector<std::uint32_t> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t k = 0; k < r.size(); ++k) {
            r[k] = f.add(a.coeff(k), b.coeff(k));
        }
        return PrimePolynomial(p, std::move(r));
    }
    friend PrimePolynomial operator-(const PrimePolynomial &a, const PrimePolynomial &b)
    {
        const auto p = common_p(a, b);
        if (p == 0) {
            return {};
        }
        const PrimeField f{p};
        std::vector<std::uint32_t> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t k = 0; k < r.size(); ++k) {
            r[k] = f.sub(a.coeff(k), b.coeff(k));
        }
        return PrimePolynomial(p, std::move(r));
    }
    friend PrimePolynomial operator*(const PrimePolynomial &a, const PrimePolynomial &b)
    {
        const auto p = common_p(a, b);
        if (a.is_zero() || b.is_zero()) {
            return PrimePolynomial(p);
        }
        std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
        // Accumulate in 64 bits and reduce lazily; p < 2^20 keeps products < 2^40.
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                acc[i + j] += static_cast<std::uint64_t>(a.c_[i]) * b.c_[j];
                if (acc[i + j] >= (1ull << 62)) {
                    acc[i + j] %= p;
                }
            }
        }
        std::vector<std::uint32_t> r(acc.size());
        for (std::size_t k = 0; k < acc.size(); ++k) {
            r[k] = static_cast<std::uint32_t>(acc[k] % p);
        }
        return PrimePolynomial(p, std::move(r));
    }

    PrimePolynomial scale(std::uint32_t s) const
    {
        if (p_ == 0) {
            return *this;
        }
        const PrimeField f{p_};
        std::vector<std::uint32_t> r(c_);
        for (auto &c : r) {
            c = f.mul(c, s);
        }
        return PrimePolynomial(p_, std::move(r));
    }

    // Multiplication by X^k.
    PrimePolynomial shift(std::size_t k) const
    {
        if (is_zero()) {
            return *this;
        }
        std::vector<std::uint32_t> r(k, 0);
        r.insert(r.end(), c_.begin(), c_.end());
        return PrimePolynomial(p_, std::move(r));
    }

    PrimePolynomial monic() const
    {
        if (is_zero()) {
            return *this;
        }
        return scale(PrimeField{p_}.inv(leading()));
    }

    PrimePolynomial pow(std::uint64_t e) const
    {
        PrimePolynomial r = constant(p_, 1);
        PrimePolynomial b = *this;
        while (e != 0) {
            if (e & 1u) {
                r = r * b;
            }
            e >>= 1;
            if (e != 0) {
                b = b * b;
            }
        }
        return r;
    }

    PrimePolynomial derivative() const
    {
        if (c_.size() <= 1) {
            return PrimePolynomial(p_);
        }
        const PrimeField f{p_};
        std::vector<std::uint32_t> r(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) {
            r[k - 1] = f.mul(c_[k], f.reduce(static_cast<long long>(k)));
        }
        return PrimePolynomial(p_, std::move(r));
    }

    // P^p, which over F_p is P(X^p).
    PrimePolynomial frobenius() const
    {
        if (is_zero()) {
            return *this;
        }
        std::vector<std::uint32_t> r((c_.size() - 1) * p_ + 1, 0);
        for (std::size_t k = 0; k < c_.size(); ++k) {
            r[k * p_] = c_[k];
        }
        return PrimePolynomial(p_, std::move(r));
    }

    // Cartier operator: coefficient n of the result is coefficient p*n+i of *this.
    PrimePolynomial cartier(std::uint32_t i) const
    {
        if (i >= p_) {
            throw domain_error("cartier: digit out of range");
        }
        std::vector<std::uint32_t> r;
        for (std::size_t k = i; k < c_.size(); k += p_) {
            r.push_back(c_[k]);
        }
        return PrimePolynomial(p_, std::move(r));
    }

    std::string to_string() const
    {
        if (is_zero()) {
            return "0";
        }
        std::string s;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k] == 0) {
                continue;
            }
            if (!s.empty()) {
                s += " + ";
            }
            s += term_string(c_[k], k);
        }
        return s;
    }

    std::size_t term_count() const noexcept
    {
        return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](auto c) { return c != 0; }));
    }

    friend bool operator==(const PrimePolynomial &a, const PrimePolynomial &b) noexcept
    {
        return a.c_ == b.c_ && (a.p_ == b.p_ || a.p_ == 0 || b.p_ == 0);
    }
    friend bool operator<(const PrimePolynomial &a, const PrimePolynomial &b) noexcept
    {
        if (a.c_.size() != b.c_.size()) {
            return a.c_.size() < b.c_.size();
        }
        return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
    }

    static std::string term_string(std::uint32_t c, std::size_t k)
    {
        std::string s;
        if (k == 0) {
            return std::to_string(c);
        }
        if (c != 1) {
            s += std::to_string(c) + "*";
        }
        s += "X";
        if (k > 1) {
            s += "^" + std::to_string(k);
        }
        return s;
    }

private:
    static std::uint32_t common_p(const PrimePolynomial &a, const PrimePolynomial &b)
    {
        if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_) {
            throw domain_error("polynomial arithmetic over different primes");
        }
        return a.p_ != 0 ? a.p_ : b.p_;
    }

    void normalize()
    {
        while (!c_.empty() && c_.back() == 0) {
            c_.pop_back();
        }
    }

    std::uint32_t p_ = 0;
    std::vector<std::uint32_t> c_;
};

using Poly = PrimePolynomial;

struct PolyDivision {
    Poly quotient;
    Poly remainder;
};

inline PolyDivision divmod(const Poly &a, const Poly &b)
{
    if (b.is_zero()) {
        throw domain_error("polynomial division by zero");
    }
    const std::uint32_t p = b.p();
    const PrimeField f{p};
    if (a.degree() < b.degree()) {
        return {Poly(p), a.is_zero() ? Poly(p) : a};
    }
    std::vector<std::uint32_t> r = a.coeffs();
    const auto &d = b.coeffs();
    const std::size_t db = d.size() - 1;
    std::vector<std::uint32_t> q(r.size() - db, 0);
    const auto inv_lead = f.inv(d.back());
    for (std::size_t k = r.size(); k-- > db;) {
        const auto c = f.mul(r[k], inv_lead);
        q[k - db] = c;
        if (c == 0) {
            continue;
        }
        for (std::size_t j = 0; j <= db; ++j) {
            r[k - db + j] = f.sub(r[k - db + j], f.mul(c, d[j]));
        }
    }
    return {Poly(p, std::move(q)), Poly(p, std::move(r))};
}

inline Poly operator/(const Poly &a, const Poly &b) { return divmod(a, b).quotient; }
inline Poly operator%(const Poly &a, const Poly &b) { return divmod(a, b).remainder; }

// Quotient of a division that must be exact.
inline Poly exact_div(const Poly &a, const Poly &b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) {
        throw domain_error("exact_div: " + a.to_string() + " is not divisible by " + b.to_string());
    }
    return q;
}

// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

struct PolyEuclid {
    Poly quotient;
    Poly remainder;
    Poly gcd;
};

// One-shot Euclidean data for a pair: a = q*b + r, plus the monic gcd.
inline PolyEuclid poly_euclid(const Poly &a, const Poly &b)
{
    auto [q, r] = divmod(a, b);
    return {std::move(q), std::move(r), gcd(a, b)};
}

// Element of F_p(X) kept in lowest terms with a monic denominator.
class RationalFunction
{
public:
    RationalFunction() = default;
    explicit RationalFunction(Poly num) : num_{std::move(num)}, den_{Poly::constant(num_.p() == 0 ? 2 : num_.p(), 1)}
    {
    }
    RationalFunction(Poly num, Poly den) : num_{std::move(num)}, den_{std::move(den)}
    {
        if (den_.is_zero()) {
            throw domain_error("rational function with zero denominator");
        }
        normalize();
    }

    const Poly &numerator() const noexcept { return num_; }
    const Poly &denominator() const noexcept { return den_; }
    std::uint32_t p() const noexcept { return den_.p(); }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.degree() == 0; }

    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b)
    {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b)
    {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b)
    {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b)
    {
        if (b.is_zero()) {
            throw domain_error("rational function division by zero");
        }
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    RationalFunction operator-() const { return {-num_, den_}; }

    // Lambda_i(N/D) = Lambda_i(N * D^(p-1)) / D, since N/D = N*D^(p-1) / D^p.
    RationalFunction cartier(std::uint32_t i) const
    {
        const auto p = this->p();
        return {(num_ * den_.pow(p - 1)).cartier(i), den_};
    }

    std::string to_string() const
    {
        if (is_polynomial()) {
            return num_.to_string();
        }
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

    friend bool operator==(const RationalFunction &a, const RationalFunction &b) noexcept
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void normalize()
    {
        const auto p = den_.p();
        if (num_.is_zero()) {
            num_ = Poly(p);
            den_ = Poly::constant(p, 1);
            return;
        }
        const auto g = gcd(num_, den_);
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
        const auto lead_inv = PrimeField{p}.inv(den_.leading());
        num_ = num_.scale(lead_inv);
        den_ = den_.scale(lead_inv);
    }

    Poly num_;
    Poly den_;
};

} // namespace cartier

#endif
