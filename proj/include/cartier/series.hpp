#ifndef CARTIER_SERIES_HPP
#define CARTIER_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/polynomial.hpp>
#include <cartier/prime_field.hpp>

namespace cartier
{

inline constexpr std::int64_t default_truncation = 128;

// Norm p^(-c) on F_p((X)), stored as the exponent c.
struct Valuation {
    enum class Kind { exact_zero, order, at_least };
    Kind kind = Kind::exact_zero;
    // For order: the exact c. For at_least: all coefficients below c vanish and
    // nothing is known beyond, so the norm is at most p^(-c).
    std::int64_t c = 0;

    static Valuation zero() { return {}; }
    static Valuation order_of(std::int64_t c) { return {Kind::order, c}; }
    static Valuation bounded(std::int64_t c) { return {Kind::at_least, c}; }

    bool is_exact_zero() const noexcept { return kind == Kind::exact_zero; }
    bool is_definite() const noexcept { return kind != Kind::at_least; }

    friend Valuation operator*(const Valuation &a, const Valuation &b)
    {
        if (a.is_exact_zero() || b.is_exact_zero()) {
            return zero();
        }
        const auto kind = (a.kind == Kind::order && b.kind == Kind::order) ? Kind::order : Kind::at_least;
        return {kind, a.c + b.c};
    }
    friend bool operator==(const Valuation &, const Valuation &) = default;

    std::string to_string(std::uint32_t p) const
    {
        switch (kind) {
        case Kind::exact_zero:
            return "0";
        case Kind::order:
            return std::to_string(p) + "^" + std::to_string(-c);
        case Kind::at_least:
            break;
        }
        return "<= " + std::to_string(p) + "^" + std::to_string(-c);
    }
};

// True only when |a| <= |b| is certain from the available information.
inline bool norm_at_most(const Valuation &a, const Valuation &b)
{
    if (a.is_exact_zero()) {
        return true;
    }
    if (b.is_exact_zero()) {
        return false;
    }
    if (b.kind == Valuation::Kind::at_least) {
        return false;
    }
    return a.c >= b.c;
}

inline Valuation norm_max(const Valuation &a, const Valuation &b) { return norm_at_most(a, b) ? b : a; }

// Element of F_p((X)) known up to X^trunc.
//
// Coefficients of X^k for offset <= k < trunc are stored; every coefficient
// below offset is zero. Coefficients at or beyond trunc are unknown. Series
// built from polynomials are exact: they have no truncation at all. A nonzero
// series always has a nonzero coefficient at offset; a series whose known
// coefficients all vanish stores no coefficients and has offset == trunc.
class TruncatedLaurentSeries
{
public:
    static constexpr std::int64_t infinite = std::numeric_limits<std::int64_t>::max();

    TruncatedLaurentSeries() = default;
    explicit TruncatedLaurentSeries(std::uint32_t p) : p_{p} { PrimeField{p}; }

    // Inexact series: coefficients from X^offset on, zeros implied up to trunc.
    static TruncatedLaurentSeries from_coeffs(std::uint32_t p, std::int64_t offset, std::vector<std::uint32_t> coeffs,
                                              std::int64_t trunc)
    {
        TruncatedLaurentSeries s(p);
        s.exact_ = false;
        if (trunc < offset) {
            trunc = offset;
        }
        coeffs.resize(static_cast<std::size_t>(trunc - offset), 0);
        for (auto &c : coeffs) {
            c %= p;
        }
        s.offset_ = offset;
        s.c_ = std::move(coeffs);
        s.trunc_ = trunc;
        s.normalize();
        return s;
    }
    // Exact series with finitely many nonzero coefficients.
    static TruncatedLaurentSeries exact(std::uint32_t p, std::int64_t offset, std::vector<std::uint32_t> coeffs)
    {
        TruncatedLaurentSeries s(p);
        for (auto &c : coeffs) {
            c %= p;
        }
        s.offset_ = offset;
        s.c_ = std::move(coeffs);
        s.normalize();
        return s;
    }
    static TruncatedLaurentSeries from_poly(const Poly &P) { return exact(P.p(), 0, P.coeffs()); }
    static TruncatedLaurentSeries constant(std::uint32_t p, long long v)
    {
        return exact(p, 0, {PrimeField{p}.reduce(v)});
    }
    static TruncatedLaurentSeries monomial(std::uint32_t p, long long c, std::int64_t k)
    {
        return exact(p, k, {PrimeField{p}.reduce(c)});
    }
    // Zero known only up to X^trunc.
    static TruncatedLaurentSeries zero_to(std::uint32_t p, std::int64_t trunc) { return from_coeffs(p, trunc, {}, trunc); }
    static TruncatedLaurentSeries from_rational(const RationalFunction &f, std::int64_t trunc = default_truncation)
    {
        const auto num = from_poly(f.numerator());
        if (f.is_polynomial()) {
            return num;
        }
        return (num * from_poly(f.denominator()).inverse(trunc)).truncate(trunc);
    }

    std::uint32_t p() const noexcept { return p_; }
    bool is_exact() const noexcept { return exact_; }
    std::int64_t trunc() const noexcept { return exact_ ? infinite : trunc_; }
    // Valuation for nonzero series; trunc for zero-so-far; 0 for exact zero.
    std::int64_t offset() const noexcept { return offset_; }
    const std::vector<std::uint32_t> &coeffs() const noexcept { return c_; }

    // No known nonzero coefficient (exact zero or zero so far).
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_exact_zero() const noexcept { return exact_ && c_.empty(); }

    std::uint32_t coeff(std::int64_t k) const
    {
        if (!exact_ && k >= trunc_) {
            throw precision_error("coefficient of X^" + std::to_string(k) + " requested beyond truncation order " +
                                  std::to_string(trunc_));
        }
        if (k < offset_ || k - offset_ >= static_cast<std::int64_t>(c_.size())) {
            return 0;
        }
        return c_[static_cast<std::size_t>(k - offset_)];
    }
    std::uint32_t operator[](std::int64_t k) const { return coeff(k); }

    // Known coefficients of X^0..X^(n-1).
    std::vector<std::uint32_t> prefix(std::int64_t n) const
    {
        std::vector<std::uint32_t> r(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
        for (std::int64_t k = 0; k < n; ++k) {
            r[static_cast<std::size_t>(k)] = coeff(k);
        }
        return r;
    }

    Valuation norm() const
    {
        if (!c_.empty()) {
            return Valuation::order_of(offset_);
        }
        return exact_ ? Valuation::zero() : Valuation::bounded(trunc_);
    }

    // Lower truncation order (no-op if already at most n).
    TruncatedLaurentSeries truncate(std::int64_t n) const
    {
        if (!exact_ && trunc_ <= n) {
            return *this;
        }
        std::vector<std::uint32_t> v;
        for (std::int64_t k = offset_; k < n && k - offset_ < static_cast<std::int64_t>(c_.size()); ++k) {
            v.push_back(c_[static_cast<std::size_t>(k - offset_)]);
        }
        return from_coeffs(p_, std::min(offset_, n), std::move(v), n);
    }

    TruncatedLaurentSeries operator-() const { return scale(PrimeField{p_}.neg(1)); }

    TruncatedLaurentSeries scale(std::uint32_t s) const
    {
        const PrimeField f{p_};
        auto r = *this;
        for (auto &c : r.c_) {
            c = f.mul(c, s);
        }
        r.normalize();
        return r;
    }

    // Multiplication by X^k (exact).
    TruncatedLaurentSeries shift(std::int64_t k) const
    {
        auto r = *this;
        if (!r.is_exact_zero()) {
            r.offset_ += k;
        }
        if (!exact_) {
            r.trunc_ += k;
        }
        return r;
    }

    friend TruncatedLaurentSeries operator+(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b)
    {
        return combine(a, b, false);
    }
    friend TruncatedLaurentSeries operator-(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b)
    {
        return combine(a, b, true);
    }

    // Precision: a = X^va (known to X^Na), b likewise; the product is known up
    // to X^min(Na + vb, Nb + va). A zero-so-far factor counts with v = N.
    friend TruncatedLaurentSeries operator*(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b)
    {
        const auto p = check_p(a, b);
        if (a.is_exact_zero() || b.is_exact_zero()) {
            return TruncatedLaurentSeries(p);
        }
        const auto va = a.offset_;
        const auto vb = b.offset_;
        if (a.exact_ && b.exact_) {
            return exact(p, va + vb, convolve(p, a.c_, b.c_, a.c_.size() + b.c_.size()));
        }
        std::int64_t trunc = infinite;
        if (!a.exact_) {
            trunc = std::min(trunc, a.trunc_ + vb);
        }
        if (!b.exact_) {
            trunc = std::min(trunc, b.trunc_ + va);
        }
        const auto len = static_cast<std::size_t>(std::max<std::int64_t>(trunc - va - vb, 0));
        return from_coeffs(p, va + vb, convolve(p, a.c_, b.c_, len), trunc);
    }

    TruncatedLaurentSeries &operator+=(const TruncatedLaurentSeries &o) { return *this = *this + o; }
    TruncatedLaurentSeries &operator-=(const TruncatedLaurentSeries &o) { return *this = *this - o; }
    TruncatedLaurentSeries &operator*=(const TruncatedLaurentSeries &o) { return *this = *this * o; }

    // Multiplicative inverse by coefficient recursion. For inexact input with
    // valuation v and truncation N the result is known to X^(N - 2v). Exact
    // input that is not a monomial yields an expansion with `terms` known
    // coefficients.
    TruncatedLaurentSeries inverse(std::int64_t terms = default_truncation) const
    {
        if (is_zero()) {
            throw domain_error("cannot invert a series indistinguishable from zero (known to X^" +
                               std::to_string(trunc()) + ")");
        }
        const PrimeField f{p_};
        const auto v = offset_;
        if (exact_ && c_.size() == 1) {
            return exact(p_, -v, {f.inv(c_[0])});
        }
        const std::int64_t len = exact_ ? terms : trunc_ - v;
        std::vector<std::uint32_t> r(static_cast<std::size_t>(len), 0);
        const auto u0 = f.inv(c_[0]);
        for (std::int64_t k = 0; k < len; ++k) {
            std::uint32_t s = k == 0 ? 1 : 0;
            for (std::int64_t j = 1; j <= k && j < static_cast<std::int64_t>(c_.size()); ++j) {
                s = f.sub(s, f.mul(c_[static_cast<std::size_t>(j)], r[static_cast<std::size_t>(k - j)]));
            }
            r[static_cast<std::size_t>(k)] = f.mul(s, u0);
        }
        return from_coeffs(p_, -v, std::move(r), -v + len);
    }

    // p-th power factors go through frobenius(), which keeps p times the precision.
    TruncatedLaurentSeries pow(std::uint64_t e) const
    {
        if (e != 0 && e % p_ == 0) {
            return pow(e / p_).frobenius();
        }
        auto r = constant(p_, 1);
        auto b = *this;
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

    // F^p = F(X^p) over F_p.
    TruncatedLaurentSeries frobenius() const
    {
        std::vector<std::uint32_t> v(c_.empty() ? 0 : (c_.size() - 1) * p_ + 1, 0);
        for (std::size_t k = 0; k < c_.size(); ++k) {
            v[k * p_] = c_[k];
        }
        if (exact_) {
            return exact(p_, offset_ * p_, std::move(v));
        }
        return from_coeffs(p_, offset_ * p_, std::move(v), trunc_ * p_);
    }

    // Lambda_i: coefficient n of the result is coefficient p*n+i of this series.
    // Known up to X^ceil((N - i) / p).
    TruncatedLaurentSeries cartier(std::uint32_t i) const
    {
        if (i >= p_) {
            throw domain_error("cartier: digit " + std::to_string(i) + " out of range for p = " + std::to_string(p_));
        }
        if (!is_zero() && offset_ < 0) {
            throw domain_error("cartier operators are defined on F_p[[X]] only (series has valuation " +
                               std::to_string(offset_) + ")");
        }
        if (!exact_ && trunc_ < 0) {
            throw domain_error("cartier: no coefficient of F_p[[X]] is known");
        }
        const std::int64_t top = exact_ ? offset_ + static_cast<std::int64_t>(c_.size()) : trunc_;
        const std::int64_t len = top > i ? (top - i + p_ - 1) / p_ : 0;
        std::vector<std::uint32_t> v(static_cast<std::size_t>(len));
        for (std::int64_t n = 0; n < len; ++n) {
            v[static_cast<std::size_t>(n)] = coeff(n * p_ + i);
        }
        return exact_ ? exact(p_, 0, std::move(v)) : from_coeffs(p_, 0, std::move(v), len);
    }

    // G_j = sum_{i >= j} f_i X^(i - j); F = (f_0 + ... + f_(j-1) X^(j-1)) + X^j G_j.
    TruncatedLaurentSeries tail_section(std::int64_t j) const
    {
        if (j < 0) {
            throw domain_error("tail_section: negative index");
        }
        if (!is_zero() && offset_ < 0) {
            throw domain_error("tail_section: series must lie in F_p[[X]]");
        }
        if (!exact_ && j >= trunc_) {
            throw precision_error("tail_section: index " + std::to_string(j) + " is at or beyond truncation order " +
                                  std::to_string(trunc_));
        }
        const std::int64_t top = exact_ ? offset_ + static_cast<std::int64_t>(c_.size()) : trunc_;
        std::vector<std::uint32_t> v;
        for (std::int64_t k = j; k < top; ++k) {
            v.push_back(coeff(k));
        }
        return exact_ ? exact(p_, 0, std::move(v)) : from_coeffs(p_, 0, std::move(v), trunc_ - j);
    }

    // Polynomial part sum_{i < j} f_i X^i as an exact series.
    TruncatedLaurentSeries head(std::int64_t j) const
    {
        std::vector<std::uint32_t> v;
        for (std::int64_t k = std::min<std::int64_t>(offset_, 0); k < j; ++k) {
            v.push_back(coeff(k));
        }
        return exact(p_, std::min<std::int64_t>(offset_, 0), std::move(v));
    }

    // Equal on all exponents below n (both series must be known that far).
    bool equal_mod(const TruncatedLaurentSeries &o, std::int64_t n) const
    {
        const auto lo = std::min(offset_, o.offset_);
        for (std::int64_t k = lo; k < n; ++k) {
            if (coeff(k) != o.coeff(k)) {
                return false;
            }
        }
        return true;
    }

    // Equality at the common truncation order.
    bool agrees_with(const TruncatedLaurentSeries &o) const
    {
        if (exact_ && o.exact_) {
            return *this == o;
        }
        return equal_mod(o, std::min(trunc(), o.trunc()));
    }

    // First exponent below the common truncation where the two differ, or
    // the common truncation if none (infinite only for equal exact series).
    std::int64_t first_difference(const TruncatedLaurentSeries &o) const
    {
        const auto n = std::min(trunc(), o.trunc());
        const auto lo = std::min(offset_, o.offset_);
        const auto hi = exact_ && o.exact_
                            ? std::max(offset_ + static_cast<std::int64_t>(c_.size()),
                                       o.offset_ + static_cast<std::int64_t>(o.c_.size()))
                            : n;
        for (std::int64_t k = lo; k < hi; ++k) {
            if (coeff(k) != o.coeff(k)) {
                return k;
            }
        }
        return n;
    }

    // Exact polynomial if the series is exact with nonnegative offset.
    Poly to_poly() const
    {
        if (!exact_ || (!c_.empty() && offset_ < 0)) {
            throw domain_error("series is not an exact polynomial");
        }
        if (c_.empty()) {
            return Poly(p_);
        }
        std::vector<std::uint32_t> v(static_cast<std::size_t>(offset_), 0);
        v.insert(v.end(), c_.begin(), c_.end());
        return Poly(p_, std::move(v));
    }
    bool is_polynomial() const noexcept { return exact_ && (c_.empty() || offset_ >= 0); }

    // Text format: p=2 offset=0 coeffs=1,1,0,1 trunc=128 (trunc=inf if exact).
    std::string to_string() const
    {
        std::ostringstream o;
        o << "p=" << p_ << " offset=" << offset_ << " coeffs=";
        std::size_t len = c_.size();
        while (len > 0 && c_[len - 1] == 0) {
            --len;
        }
        for (std::size_t k = 0; k < len; ++k) {
            o << (k ? "," : "") << c_[k];
        }
        o << " trunc=";
        if (exact_) {
            o << "inf";
        } else {
            o << trunc_;
        }
        return o.str();
    }

    static TruncatedLaurentSeries parse(const std::string &text)
    {
        std::istringstream in(text);
        std::string tok;
        long long p = -1;
        std::int64_t offset = 0;
        std::vector<std::uint32_t> cs;
        bool have_trunc = false;
        bool inf = false;
        std::int64_t trunc = 0;
        while (in >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) {
                throw parse_error("series: expected key=value, got '" + tok + "'");
            }
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            try {
                if (key == "p") {
                    p = std::stoll(val);
                } else if (key == "offset") {
                    offset = std::stoll(val);
                } else if (key == "coeffs") {
                    std::istringstream cl(val);
                    std::string item;
                    while (std::getline(cl, item, ',')) {
                        if (!item.empty()) {
                            const auto c = std::stoll(item);
                            if (c < 0) {
                                throw parse_error("series: negative coefficient");
                            }
                            cs.push_back(static_cast<std::uint32_t>(c));
                        }
                    }
                } else if (key == "trunc") {
                    have_trunc = true;
                    inf = val == "inf";
                    if (!inf) {
                        trunc = std::stoll(val);
                    }
                } else {
                    throw parse_error("series: unknown key '" + key + "'");
                }
            } catch (const std::logic_error &) {
                throw parse_error("series: malformed value in '" + tok + "'");
            }
        }
        if (p < 0 || !have_trunc) {
            throw parse_error("series: both p= and trunc= are required");
        }
        if (p > (1 << 20) || !is_prime(static_cast<std::uint64_t>(p))) {
            throw parse_error("series: p=" + std::to_string(p) + " is not a supported prime");
        }
        for (auto c : cs) {
            if (c >= p) {
                throw parse_error("series: coefficient " + std::to_string(c) + " is not reduced mod " + std::to_string(p));
            }
        }
        const auto up = static_cast<std::uint32_t>(p);
        if (inf) {
            return exact(up, offset, std::move(cs));
        }
        if (trunc < offset + static_cast<std::int64_t>(cs.size())) {
            throw parse_error("series: more coefficients than the truncation order allows");
        }
        return from_coeffs(up, offset, std::move(cs), trunc);
    }

    // Representation equality (same knowledge, same coefficients).
    friend bool operator==(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b) noexcept
    {
        return a.p_ == b.p_ && a.exact_ == b.exact_ && a.offset_ == b.offset_ && a.c_ == b.c_ &&
               (a.exact_ || a.trunc_ == b.trunc_);
    }

private:
    static std::uint32_t check_p(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b)
    {
        if (a.p_ != b.p_) {
            throw domain_error("series over different primes");
        }
        return a.p_;
    }

    static std::vector<std::uint32_t> convolve(std::uint32_t p, const std::vector<std::uint32_t> &a,
                                               const std::vector<std::uint32_t> &b, std::size_t len)
    {
        std::vector<std::uint64_t> acc(len, 0);
        for (std::size_t i = 0; i < a.size() && i < len; ++i) {
            if (a[i] == 0) {
                continue;
            }
            const std::size_t jmax = std::min(b.size(), len - i);
            for (std::size_t j = 0; j < jmax; ++j) {
                acc[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
                if (acc[i + j] >= (1ull << 62)) {
                    acc[i + j] %= p;
                }
            }
        }
        std::vector<std::uint32_t> r(len);
        for (std::size_t k = 0; k < len; ++k) {
            r[k] = static_cast<std::uint32_t>(acc[k] % p);
        }
        return r;
    }

    static TruncatedLaurentSeries combine(const TruncatedLaurentSeries &a, const TruncatedLaurentSeries &b, bool minus)
    {
        const auto p = check_p(a, b);
        const PrimeField f{p};
        const bool ex = a.exact_ && b.exact_;
        auto top_of = [](const TruncatedLaurentSeries &s) {
            return s.exact_ ? s.offset_ + static_cast<std::int64_t>(s.c_.size()) : s.trunc_;
        };
        const std::int64_t trunc = ex ? std::max(top_of(a), top_of(b)) : std::min(a.trunc(), b.trunc());
        std::int64_t lo = std::min(a.is_exact_zero() ? trunc : a.offset_, b.is_exact_zero() ? trunc : b.offset_);
        lo = std::min(lo, trunc);
        std::vector<std::uint32_t> v(static_cast<std::size_t>(trunc - lo));
        for (std::int64_t k = lo; k < trunc; ++k) {
            const auto x = a.coeff(k);
            const auto y = b.coeff(k);
            v[static_cast<std::size_t>(k - lo)] = minus ? f.sub(x, y) : f.add(x, y);
        }
        return ex ? exact(p, lo, std::move(v)) : from_coeffs(p, lo, std::move(v), trunc);
    }

    void normalize()
    {
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead] == 0) {
            ++lead;
        }
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            offset_ += static_cast<std::int64_t>(lead);
        }
        if (exact_) {
            while (!c_.empty() && c_.back() == 0) {
                c_.pop_back();
            }
            if (c_.empty()) {
                offset_ = 0;
            }
        } else if (c_.empty()) {
            offset_ = trunc_;
        }
    }

    std::uint32_t p_ = 2;
    std::int64_t offset_ = 0;
    std::vector<std::uint32_t> c_;
    bool exact_ = true;
    std::int64_t trunc_ = 0;
};

using Series = TruncatedLaurentSeries;

// F = sum_i X^i (part_i)^p; known up to min_i (p * N_i + i).
inline Series reassemble(const std::vector<Series> &parts)
{
    if (parts.empty()) {
        throw domain_error("reassemble: no parts");
    }
    const auto p = parts.front().p();
    if (parts.size() != p) {
        throw domain_error("reassemble: expected " + std::to_string(p) + " parts, got " + std::to_string(parts.size()));
    }
    Series r(p);
    for (std::uint32_t i = 0; i < p; ++i) {
        if (!parts[i].is_zero() && parts[i].offset() < 0) {
            throw domain_error("reassemble: parts must lie in F_p[[X]]");
        }
        r = r + parts[i].frobenius().shift(i);
    }
    return r;
}

inline std::vector<Series> cartier_parts(const Series &F)
{
    std::vector<Series> parts;
    for (std::uint32_t i = 0; i < F.p(); ++i) {
        parts.push_back(F.cartier(i));
    }
    return parts;
}

// Limit of a coefficientwise-stabilizing sequence: coefficient k is the value
// shared by every term from some index on. The result is known up to the first
// exponent that has not stabilized within the sequence (the last term alone
// never certifies stability, so at least two terms must agree).
inline Series cauchy_limit(const std::vector<Series> &seq)
{
    if (seq.size() < 2) {
        throw domain_error("cauchy_limit: need at least two terms");
    }
    const auto p = seq.front().p();
    const auto &last = seq.back();
    const auto &before = seq[seq.size() - 2];
    auto n = std::min(last.trunc(), before.trunc());
    if (n == Series::infinite) {
        n = std::max(last.offset() + static_cast<std::int64_t>(last.coeffs().size()),
                     before.offset() + static_cast<std::int64_t>(before.coeffs().size()));
    }
    std::vector<std::uint32_t> v;
    std::int64_t k = 0;
    for (; k < n; ++k) {
        if (last.coeff(k) != before.coeff(k)) {
            break;
        }
        v.push_back(last.coeff(k));
    }
    return Series::from_coeffs(p, 0, std::move(v), k);
}

} // namespace cartier

#endif
