#ifndef CARTIER_ENUMERATE_HPP
#define CARTIER_ENUMERATE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/network.hpp>

namespace cartier
{

struct EnumerateOptions {
    std::size_t max_results = 1u << 20;
    // Restrict to maps sending the first non-constant element to this value.
    // The union over all values is the full enumeration.
    std::optional<std::uint32_t> first_value;
};

// All pseudo-morphisms A -> F_q by backtracking: constants are fixed, and an
// element whose value is implied by a triple with both other members already
// assigned gets that value only. Every completed map is rechecked in full.
inline std::vector<std::vector<std::uint32_t>> enumerate_pseudo_morphisms(const FieldNetwork &net,
                                                                          const EnumerateOptions &opt = {})
{
    const auto n = net.size();
    const auto &F = *net.ambient().field;
    const auto q = F.q();
    std::vector<std::vector<std::pair<Triple, bool>>> touching(n);
    for (const auto &t : net.add_triples()) {
        for (auto m : t) {
            touching[m].push_back({t, false});
        }
    }
    for (const auto &t : net.mul_triples()) {
        for (auto m : t) {
            touching[m].push_back({t, true});
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return net.is_constant(i); });
    std::optional<std::size_t> first_free;
    for (auto i : order) {
        if (!net.is_constant(i)) {
            first_free = i;
            break;
        }
    }

    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> phi(n, 0);
    std::vector<bool> set(n, false);

    auto implied = [&](std::size_t e) -> std::optional<std::uint32_t> {
        for (const auto &[t, is_mul] : touching[e]) {
            const auto a = t[0];
            const auto b = t[1];
            const auto c = t[2];
            if (c == e && a != e && b != e && set[a] && set[b]) {
                return is_mul ? F.mul(phi[a], phi[b]) : F.add(phi[a], phi[b]);
            }
            if (!is_mul && set[c] && c != e) {
                if (a == e && b != e && set[b]) {
                    return F.sub(phi[c], phi[b]);
                }
                if (b == e && a != e && set[a]) {
                    return F.sub(phi[c], phi[a]);
                }
            }
            if (is_mul && set[c] && c != e) {
                if (a == e && b != e && set[b] && phi[b] != 0) {
                    return F.mul(phi[c], F.inv(phi[b]));
                }
                if (b == e && a != e && set[a] && phi[a] != 0) {
                    return F.mul(phi[c], F.inv(phi[a]));
                }
            }
        }
        return std::nullopt;
    };
    auto consistent = [&](std::size_t e) {
        for (const auto &[t, is_mul] : touching[e]) {
            if (set[t[0]] && set[t[1]] && set[t[2]]) {
                const auto v = is_mul ? F.mul(phi[t[0]], phi[t[1]]) : F.add(phi[t[0]], phi[t[1]]);
                if (v != phi[t[2]]) {
                    return false;
                }
            }
        }
        return true;
    };
    auto recurse = [&](auto &&self, std::size_t k) -> void {
        if (k == n) {
            if (out.size() >= opt.max_results) {
                throw bound_error("more than " + std::to_string(opt.max_results) + " pseudo-morphisms");
            }
            out.push_back(phi);
            return;
        }
        const auto e = order[k];
        std::vector<std::uint32_t> candidates;
        if (net.is_constant(e)) {
            candidates.push_back(net.value(e));
        } else if (auto v = implied(e)) {
            candidates.push_back(*v);
        } else if (first_free && e == *first_free && opt.first_value) {
            candidates.push_back(*opt.first_value);
        } else {
            candidates.resize(q);
            std::iota(candidates.begin(), candidates.end(), 0u);
        }
        for (auto v : candidates) {
            if (first_free && e == *first_free && opt.first_value && v != *opt.first_value) {
                continue;
            }
            phi[e] = v;
            set[e] = true;
            if (consistent(e)) {
                self(self, k + 1);
            }
            set[e] = false;
        }
    };
    recurse(recurse, 0);
    return out;
}

// Elements of F_q fixed by every pseudo-morphism of the whole field. The full
// field is the strongest witness set: any pseudo-morphism on F_q restricts to
// every subset, so a value forced by some finite subset is forced here too.
inline std::vector<std::uint32_t> characterizable_subfield(std::uint32_t q, const EnumerateOptions &opt = {})
{
    std::vector<std::uint32_t> all(q);
    std::iota(all.begin(), all.end(), 0u);
    const auto net = field_network(q, all);
    const auto maps = enumerate_pseudo_morphisms(net, opt);
    std::vector<std::uint32_t> fixed;
    for (std::uint32_t x = 0; x < q; ++x) {
        if (std::all_of(maps.begin(), maps.end(), [&](const auto &phi) { return phi[x] == x; })) {
            fixed.push_back(x);
        }
    }
    return fixed;
}

} // namespace cartier

#endif
