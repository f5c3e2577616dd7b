#ifndef CARTIER_NETWORK_HPP
#define CARTIER_NETWORK_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/finite_field.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// Ambient rings a network can live in. Each supplies value equality, the two
// ring operations and a printer; exact ambients also supply a lookup key so
// triple discovery can hash instead of scanning.

struct FieldAmbient {
    using value_type = std::uint32_t;
    static constexpr bool exact_keys = true;

    std::shared_ptr<const FiniteField> field;

    explicit FieldAmbient(std::uint32_t q) : field{std::make_shared<const FiniteField>(q)} {}

    bool equal(value_type a, value_type b) const { return a == b; }
    value_type add(value_type a, value_type b) const { return field->add(a, b); }
    value_type mul(value_type a, value_type b) const { return field->mul(a, b); }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    std::string describe(value_type a) const { return field->describe(a); }
    value_type key(value_type a) const { return a; }
};

// F_p((X)) at truncation: values are equal when they agree up to their common
// precision, so identity of network nodes is "equal mod X^N".
struct SeriesAmbient {
    using value_type = Series;
    static constexpr bool exact_keys = false;

    std::uint32_t p = 2;

    explicit SeriesAmbient(std::uint32_t p) : p{p} { PrimeField{p}; }

    bool equal(const Series &a, const Series &b) const
    {
        const auto n = std::min(a.trunc(), b.trunc());
        return n == Series::infinite ? a == b : a.equal_mod(b, n);
    }
    Series add(const Series &a, const Series &b) const { return a + b; }
    Series mul(const Series &a, const Series &b) const { return a * b; }
    Series zero() const { return Series::constant(p, 0); }
    Series one() const { return Series::constant(p, 1); }
    std::string describe(const Series &a) const { return a.to_string(); }
};

template <class Ambient> struct NetworkElement {
    std::string name;
    std::string expr;
    typename Ambient::value_type value;
    // Member of the constant field K: every pseudo-morphism fixes it.
    bool constant = false;
};

using Triple = std::array<std::size_t, 3>;

// Finite witness set A with every valid addition a + b = c and multiplication
// a * b = c among its members (ordered pairs, so both a + b and b + a appear).
template <class Ambient> class ConstraintNetwork
{
public:
    using value_type = typename Ambient::value_type;
    using element_type = NetworkElement<Ambient>;

    ConstraintNetwork(Ambient ambient, std::vector<element_type> elements, std::vector<Triple> add,
                      std::vector<Triple> mul)
        : ambient_{std::move(ambient)}, elements_{std::move(elements)}, add_{std::move(add)}, mul_{std::move(mul)}
    {
        const auto n = elements_.size();
        for (const auto *ts : {&add_, &mul_}) {
            for (const auto &t : *ts) {
                if (t[0] >= n || t[1] >= n || t[2] >= n) {
                    throw domain_error("network triple references a non-member");
                }
            }
        }
        for (std::size_t k = 0; k < add_.size(); ++k) {
            const auto &t = add_[k];
            if (!ambient_.equal(ambient_.add(value(t[0]), value(t[1])), value(t[2]))) {
                throw domain_error("invalid addition triple " + triple_string(t, " + "));
            }
        }
        for (const auto &t : mul_) {
            if (!ambient_.equal(ambient_.mul(value(t[0]), value(t[1])), value(t[2]))) {
                throw domain_error("invalid multiplication triple " + triple_string(t, " * "));
            }
        }
    }

    const Ambient &ambient() const noexcept { return ambient_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<element_type> &elements() const noexcept { return elements_; }
    const element_type &element(std::size_t i) const { return elements_.at(i); }
    const value_type &value(std::size_t i) const { return elements_.at(i).value; }
    bool is_constant(std::size_t i) const { return elements_.at(i).constant; }
    const std::vector<Triple> &add_triples() const noexcept { return add_; }
    const std::vector<Triple> &mul_triples() const noexcept { return mul_; }

    std::optional<std::size_t> index_of(const std::string &name) const
    {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (elements_[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::optional<std::size_t> find(const value_type &v) const
    {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (ambient_.equal(elements_[i].value, v)) {
                return i;
            }
        }
        return std::nullopt;
    }

    // Sub-network on the listed members (in that order), keeping the triples
    // that stay inside.
    ConstraintNetwork restrict_to(const std::vector<std::size_t> &keep) const
    {
        std::vector<std::size_t> pos(elements_.size(), elements_.size());
        std::vector<element_type> sub;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            pos.at(keep[k]) = k;
            sub.push_back(elements_.at(keep[k]));
        }
        auto filter = [&](const std::vector<Triple> &ts) {
            std::vector<Triple> out;
            for (const auto &t : ts) {
                if (pos[t[0]] < keep.size() && pos[t[1]] < keep.size() && pos[t[2]] < keep.size()) {
                    out.push_back({pos[t[0]], pos[t[1]], pos[t[2]]});
                }
            }
            return out;
        };
        return ConstraintNetwork(ambient_, std::move(sub), filter(add_), filter(mul_));
    }

    std::string triple_string(const Triple &t, const std::string &op) const
    {
        return "(" + elements_[t[0]].name + op + elements_[t[1]].name + " = " + elements_[t[2]].name + ")";
    }

private:
    Ambient ambient_;
    std::vector<element_type> elements_;
    std::vector<Triple> add_;
    std::vector<Triple> mul_;
};

// Discovers every addition and multiplication triple among the elements and
// marks 0 and 1 as constants (stored exactly). Two members equal in the ambient (at truncation
// for series) make the witness set ambiguous and are rejected.
template <class Ambient>
ConstraintNetwork<Ambient> build_network(Ambient ambient, std::vector<NetworkElement<Ambient>> elements)
{
    const auto n = elements.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (elements[i].name.empty()) {
            elements[i].name = "e" + std::to_string(i);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (ambient.equal(elements[i].value, elements[j].value)) {
                throw domain_error("ambiguous identity: " + elements[j].name + " and " + elements[i].name +
                                   " are the same element" +
                                   (Ambient::exact_keys ? std::string() : std::string(" at truncation")));
            }
        }
        if (ambient.equal(elements[i].value, ambient.zero())) {
            elements[i].constant = true;
            elements[i].value = ambient.zero();
        } else if (ambient.equal(elements[i].value, ambient.one())) {
            elements[i].constant = true;
            elements[i].value = ambient.one();
        }
    }
    std::vector<Triple> add;
    std::vector<Triple> mul;
    auto lookup = [&](const typename Ambient::value_type &v) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < n; ++k) {
            if (ambient.equal(elements[k].value, v)) {
                return k;
            }
        }
        return std::nullopt;
    };
    if constexpr (Ambient::exact_keys) {
        std::map<decltype(ambient.key(elements[0].value)), std::size_t> index;
        for (std::size_t k = 0; k < n; ++k) {
            index.emplace(ambient.key(elements[k].value), k);
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (auto it = index.find(ambient.key(ambient.add(elements[a].value, elements[b].value)));
                    it != index.end()) {
                    add.push_back({a, b, it->second});
                }
                if (auto it = index.find(ambient.key(ambient.mul(elements[a].value, elements[b].value)));
                    it != index.end()) {
                    mul.push_back({a, b, it->second});
                }
            }
        }
    } else {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (auto c = lookup(ambient.add(elements[a].value, elements[b].value))) {
                    add.push_back({a, b, *c});
                }
                if (auto c = lookup(ambient.mul(elements[a].value, elements[b].value))) {
                    mul.push_back({a, b, *c});
                }
            }
        }
    }
    return ConstraintNetwork<Ambient>(std::move(ambient), std::move(elements), std::move(add), std::move(mul));
}

// True iff phi fixes every constant and respects every stored triple.
template <class Ambient>
bool is_pseudo_morphism(const ConstraintNetwork<Ambient> &net, const std::vector<typename Ambient::value_type> &phi)
{
    if (phi.size() != net.size()) {
        return false;
    }
    const auto &amb = net.ambient();
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.is_constant(i) && !amb.equal(phi[i], net.value(i))) {
            return false;
        }
    }
    for (const auto &t : net.add_triples()) {
        if (!amb.equal(amb.add(phi[t[0]], phi[t[1]]), phi[t[2]])) {
            return false;
        }
    }
    for (const auto &t : net.mul_triples()) {
        if (!amb.equal(amb.mul(phi[t[0]], phi[t[1]]), phi[t[2]])) {
            return false;
        }
    }
    return true;
}

using FieldNetwork = ConstraintNetwork<FieldAmbient>;
using SeriesNetwork = ConstraintNetwork<SeriesAmbient>;

// Network over F_q on the given element codes; names are the field printouts.
inline FieldNetwork field_network(std::uint32_t q, const std::vector<std::uint32_t> &codes)
{
    FieldAmbient amb(q);
    std::vector<NetworkElement<FieldAmbient>> els;
    for (auto c : codes) {
        if (c >= q) {
            throw domain_error("element code " + std::to_string(c) + " outside GF(" + std::to_string(q) + ")");
        }
        els.push_back({amb.describe(c), amb.describe(c), c, false});
    }
    return build_network(std::move(amb), std::move(els));
}

} // namespace cartier

#endif
