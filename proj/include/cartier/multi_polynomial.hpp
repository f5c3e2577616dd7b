#ifndef CARTIER_MULTI_POLYNOMIAL_HPP
#define CARTIER_MULTI_POLYNOMIAL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/polynomial.hpp>

namespace cartier
{

using Exponent = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponent &e)
{
    return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

// Graded lexicographic order, largest first, so that a map iterates from the
// leading term down. Y1 is the most significant variable.
struct GrlexGreater {
    bool operator()(const Exponent &a, const Exponent &b) const
    {
        const auto da = total_degree(a);
        const auto db = total_degree(b);
        if (da != db) {
            return da > db;
        }
        return a > b;
    }
};

// Sparse polynomial in Y1..Yn whose coefficients come from a ring C.
//
// C must provide C::constant(p, v), is_zero(), p() and the ring operators. The
// two instantiations used in the toolkit are C = PrimePolynomial (the constant
// ring K = F_p[X]) and C = TruncatedLaurentSeries (for polynomials whose
// coefficients are already-deduced series values).
template <class C> class MultiPolynomial
{
public:
    using coeff_type = C;
    using term_map = std::map<Exponent, C, GrlexGreater>;

    MultiPolynomial() = default;
    MultiPolynomial(std::uint32_t p, std::size_t n) : p_{p}, n_{n} {}

    static MultiPolynomial constant(std::uint32_t p, std::size_t n, C c)
    {
        MultiPolynomial r(p, n);
        r.add_term(Exponent(n, 0), std::move(c));
        return r;
    }
    static MultiPolynomial constant(std::uint32_t p, std::size_t n, long long v)
    {
        return constant(p, n, C::constant(p, v));
    }
    static MultiPolynomial variable(std::uint32_t p, std::size_t n, std::size_t i)
    {
        return monomial(p, n, C::constant(p, 1), unit_exponent(n, i, 1));
    }
    static MultiPolynomial monomial(std::uint32_t p, std::size_t n, C c, Exponent e)
    {
        MultiPolynomial r(p, n);
        r.add_term(std::move(e), std::move(c));
        return r;
    }
    static Exponent unit_exponent(std::size_t n, std::size_t i, std::uint32_t k)
    {
        Exponent e(n, 0);
        e.at(i) = k;
        return e;
    }

    std::uint32_t p() const noexcept { return p_; }
    std::size_t n() const noexcept { return n_; }
    const term_map &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    // Adds c*Y^e, dropping the term if the coefficient cancels.
    void add_term(Exponent e, C c)
    {
        if (e.size() != n_) {
            throw domain_error("exponent length does not match variable count");
        }
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    int total_degree() const noexcept
    {
        return terms_.empty() ? -1 : static_cast<int>(cartier::total_degree(terms_.begin()->first));
    }
    int degree_in(std::size_t i) const
    {
        int d = -1;
        for (const auto &[e, c] : terms_) {
            d = std::max(d, static_cast<int>(e.at(i)));
        }
        return d;
    }
    bool mentions(std::size_t i) const { return degree_in(i) > 0; }
    bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent(n_, 0)); }
    std::vector<std::size_t> variables() const
    {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < n_; ++i) {
            if (mentions(i)) {
                v.push_back(i);
            }
        }
        return v;
    }

    C constant_term() const
    {
        auto it = terms_.find(Exponent(n_, 0));
        return it == terms_.end() ? C::constant(p_, 0) : it->second;
    }
    const Exponent &leading_exponent() const { return terms_.begin()->first; }
    const C &leading_coeff() const { return terms_.begin()->second; }

    // Coefficients with respect to Y_i: result[k] is the coefficient of Y_i^k,
    // a polynomial not mentioning Y_i.
    std::vector<MultiPolynomial> univariate(std::size_t i) const
    {
        std::vector<MultiPolynomial> r(static_cast<std::size_t>(std::max(degree_in(i), 0)) + 1, MultiPolynomial(p_, n_));
        for (const auto &[e, c] : terms_) {
            auto f = e;
            const auto k = f[i];
            f[i] = 0;
            r[k].add_term(std::move(f), c);
        }
        return r;
    }
    static MultiPolynomial from_univariate(std::uint32_t p, std::size_t n, std::size_t i, const std::vector<MultiPolynomial> &cs)
    {
        MultiPolynomial r(p, n);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            for (const auto &[e, c] : cs[k].terms_) {
                auto f = e;
                f[i] += static_cast<std::uint32_t>(k);
                r.add_term(std::move(f), c);
            }
        }
        return r;
    }
    MultiPolynomial coefficient_in(std::size_t i, std::size_t k) const
    {
        MultiPolynomial r(p_, n_);
        for (const auto &[e, c] : terms_) {
            if (e[i] == k) {
                auto f = e;
                f[i] = 0;
                r.add_term(std::move(f), c);
            }
        }
        return r;
    }

    MultiPolynomial operator-() const
    {
        MultiPolynomial r(p_, n_);
        for (const auto &[e, c] : terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }
    friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial &b)
    {
        a.adopt(b);
        for (const auto &[e, c] : b.terms_) {
            a.add_term(e, c);
        }
        return a;
    }
    friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial &b)
    {
        a.adopt(b);
        for (const auto &[e, c] : b.terms_) {
            a.add_term(e, -c);
        }
        return a;
    }
    friend MultiPolynomial operator*(const MultiPolynomial &a, const MultiPolynomial &b)
    {
        MultiPolynomial r(a.p_ != 0 ? a.p_ : b.p_, a.n_);
        r.adopt(b);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Exponent e(ea.size());
                for (std::size_t k = 0; k < e.size(); ++k) {
                    e[k] = ea[k] + eb[k];
                }
                r.add_term(std::move(e), ca * cb);
            }
        }
        return r;
    }
    MultiPolynomial &operator+=(const MultiPolynomial &o) { return *this = *this + o; }
    MultiPolynomial &operator-=(const MultiPolynomial &o) { return *this = *this - o; }
    MultiPolynomial &operator*=(const MultiPolynomial &o) { return *this = *this * o; }

    MultiPolynomial scale(const C &s) const
    {
        MultiPolynomial r(p_, n_);
        for (const auto &[e, c] : terms_) {
            r.add_term(e, c * s);
        }
        return r;
    }

    MultiPolynomial pow(std::uint64_t k) const
    {
        auto r = constant(p_, n_, 1);
        auto b = *this;
        while (k != 0) {
            if (k & 1u) {
                r = r * b;
            }
            k >>= 1;
            if (k != 0) {
                b = b * b;
            }
        }
        return r;
    }

    // Formal partial derivative in Y_i; exponents divisible by p vanish.
    MultiPolynomial partial(std::size_t i) const
    {
        MultiPolynomial r(p_, n_);
        for (const auto &[e, c] : terms_) {
            const auto k = e.at(i);
            if (k % p_ == 0) {
                continue;
            }
            auto f = e;
            f[i] = k - 1;
            r.add_term(std::move(f), c * C::constant(p_, k % p_));
        }
        return r;
    }

    // Replaces Y_i by q (q must live in the same variable space).
    MultiPolynomial substitute(std::size_t i, const MultiPolynomial &q) const
    {
        const auto d = degree_in(i);
        if (d <= 0) {
            return *this;
        }
        std::vector<MultiPolynomial> powers{constant(p_, n_, 1)};
        for (int k = 1; k <= d; ++k) {
            powers.push_back(powers.back() * q);
        }
        MultiPolynomial r(p_, n_);
        for (const auto &[e, c] : terms_) {
            auto f = e;
            const auto k = f[i];
            f[i] = 0;
            r += monomial(p_, n_, c, std::move(f)) * powers[k];
        }
        return r;
    }

    // Moves Y_k to position target[k] in an n'-variable space. Variables mapped
    // to npos must not occur.
    MultiPolynomial remap(std::size_t new_n, const std::vector<std::size_t> &target) const
    {
        MultiPolynomial r(p_, new_n);
        for (const auto &[e, c] : terms_) {
            Exponent f(new_n, 0);
            for (std::size_t k = 0; k < n_; ++k) {
                if (e[k] == 0) {
                    continue;
                }
                if (target.at(k) >= new_n) {
                    throw domain_error("remap drops a variable that occurs");
                }
                f[target[k]] += e[k];
            }
            r.add_term(std::move(f), c);
        }
        return r;
    }

    // Appends extra variables at the end (indices n..n+extra-1).
    MultiPolynomial extend(std::size_t extra) const
    {
        std::vector<std::size_t> t(n_);
        std::iota(t.begin(), t.end(), std::size_t{0});
        return remap(n_ + extra, t);
    }

    template <class F> auto map_coefficients(std::uint32_t p, F f) const
    {
        using D = decltype(f(std::declval<const C &>()));
        MultiPolynomial<D> r(p, n_);
        for (const auto &[e, c] : terms_) {
            r.add_term(e, f(c));
        }
        return r;
    }

    // Generic evaluation: embed maps a coefficient into the value ring V.
    template <class V, class Embed> V evaluate(const std::vector<V> &point, Embed embed, V zero) const
    {
        if (point.size() != n_) {
            throw domain_error("evaluation point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                               std::to_string(n_) + " variables");
        }
        V acc = zero;
        for (const auto &[e, c] : terms_) {
            V t = embed(c);
            for (std::size_t k = 0; k < n_; ++k) {
                for (std::uint32_t j = 0; j < e[k]; ++j) {
                    t = t * point[k];
                }
            }
            acc = acc + t;
        }
        return acc;
    }

    friend bool operator==(const MultiPolynomial &a, const MultiPolynomial &b)
    {
        if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) {
            return false;
        }
        auto ib = b.terms_.begin();
        for (const auto &[e, c] : a.terms_) {
            if (e != ib->first || !(c == ib->second)) {
                return false;
            }
            ++ib;
        }
        return true;
    }

private:
    void adopt(const MultiPolynomial &o)
    {
        if (n_ != o.n_) {
            throw domain_error("polynomials live in different variable spaces");
        }
        if (p_ == 0) {
            p_ = o.p_;
        }
    }

    std::uint32_t p_ = 0;
    std::size_t n_ = 0;
    term_map terms_;
};

using MultiPoly = MultiPolynomial<Poly>;

inline std::string monomial_string(const Exponent &e)
{
    std::string s;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += "Y" + std::to_string(k + 1);
        if (e[k] > 1) {
            s += "^" + std::to_string(e[k]);
        }
    }
    return s;
}

// Canonical printing: terms in descending grlex order, multi-term coefficients
// parenthesized, unit coefficients omitted in front of a monomial.
template <class C> std::string to_string(const MultiPolynomial<C> &P)
{
    if (P.is_zero()) {
        return "0";
    }
    std::string out;
    const bool single = P.term_count() == 1;
    for (const auto &[e, c] : P.terms()) {
        if (!out.empty()) {
            out += " + ";
        }
        const auto m = monomial_string(e);
        auto cs = c.to_string();
        const bool compound = cs.find(' ') != std::string::npos;
        if (m.empty()) {
            out += (compound && !single) ? "(" + cs + ")" : cs;
        } else if (cs == "1") {
            out += m;
        } else {
            out += (compound ? "(" + cs + ")" : cs) + "*" + m;
        }
    }
    return out;
}

// Gcd of all F_p[X] coefficients (monic); zero for the zero polynomial.
inline Poly content(const MultiPoly &P)
{
    Poly g(P.p());
    for (const auto &[e, c] : P.terms()) {
        g = gcd(g, c);
        if (g.is_one()) {
            break;
        }
    }
    return g;
}

// Divides out the content and scales so that the leading coefficient (in
// grlex order) is monic in X. A canonical representative up to units of F_p[X].
inline MultiPoly primitive_part(const MultiPoly &P)
{
    if (P.is_zero()) {
        return P;
    }
    const auto g = content(P);
    const auto u = PrimeField{P.p()}.inv(exact_div(P.leading_coeff(), g).leading());
    MultiPoly r(P.p(), P.n());
    for (const auto &[e, c] : P.terms()) {
        r.add_term(e, exact_div(c, g).scale(u));
    }
    return r;
}

inline int x_degree(const MultiPoly &P)
{
    int d = -1;
    for (const auto &[e, c] : P.terms()) {
        d = std::max(d, c.degree());
    }
    return d;
}

// Exact division in F_p[X][Y1..Yn]; throws if b does not divide a.
inline MultiPoly exact_div(MultiPoly a, const MultiPoly &b)
{
    if (b.is_zero()) {
        throw domain_error("multivariate division by zero");
    }
    MultiPoly q(b.p(), b.n());
    const auto &eb = b.leading_exponent();
    const auto &cb = b.leading_coeff();
    while (!a.is_zero()) {
        const auto &ea = a.leading_exponent();
        Exponent e(ea.size());
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (ea[k] < eb[k]) {
                throw domain_error("multivariate exact division failed");
            }
            e[k] = ea[k] - eb[k];
        }
        auto [qc, rc] = divmod(a.leading_coeff(), cb);
        if (!rc.is_zero()) {
            throw domain_error("multivariate exact division failed");
        }
        auto t = MultiPoly::monomial(b.p(), b.n(), qc, e);
        q += t;
        a -= t * b;
    }
    return q;
}

} // namespace cartier

#endif
