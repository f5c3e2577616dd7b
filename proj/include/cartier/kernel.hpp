#ifndef CARTIER_KERNEL_HPP
#define CARTIER_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <cartier/dfao.hpp>
#include <cartier/error.hpp>

namespace cartier
{

// Finite p-kernel: element j is a sequence u_j, closure[j][i] is the index of
// Lambda_i u_j (n -> u_j(p n + i)) and outputs[j] = u_j(0). Element 0 is the
// sequence itself.
struct KernelTable {
    std::uint32_t p = 2;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> closure;
    std::vector<std::uint32_t> outputs;

    std::size_t size() const noexcept { return labels.size(); }
};

// Kernel of an automatic sequence together with the data that realizes each
// element: u_j(n) = g_j(delta*(q0, digits(n))) on the leading-zero-normalized
// automaton.
struct AutomatonKernel {
    KernelTable table;
    Dfao normalized;
    std::vector<std::vector<std::uint32_t>> functions;

    // Automaton whose nth_term is u_j.
    Dfao element_automaton(std::size_t j) const
    {
        return Dfao(normalized.p(), normalized.names(), normalized.transitions(), normalized.q0(), functions.at(j));
    }
};

inline std::vector<std::string> default_labels(std::size_t n)
{
    std::vector<std::string> v;
    for (std::size_t k = 0; k < n; ++k) {
        v.push_back("K" + std::to_string(k));
    }
    return v;
}

// Exact p-kernel of n -> M.nth_term(n). After trimming to reachable states and
// making leading zeros harmless, u(p^k n + j) = g(delta*(q0, digits(n))) where
// g = tau o delta*(., d) for the k-digit word d of j, and Lambda_i acts as
// g -> g o delta(., i). Distinct functions on reachable states are distinct
// sequences, so the closure below is the kernel itself. Its size is at most
// |outputs|^|states|.
inline AutomatonKernel kernel_from_automaton(const Dfao &M, std::size_t max_size = default_max_states)
{
    const auto N = minimize(normalize_leading_zeros(minimize(M)));
    using Fn = std::vector<std::uint32_t>;
    AutomatonKernel out{{N.p(), {}, {}, {}}, N, {}};
    std::map<Fn, std::size_t> ids;
    out.functions.push_back(N.outputs());
    ids.emplace(N.outputs(), 0);
    for (std::size_t k = 0; k < out.functions.size(); ++k) {
        std::vector<std::size_t> row;
        for (std::uint32_t i = 0; i < N.p(); ++i) {
            Fn g(N.size());
            for (std::size_t q = 0; q < N.size(); ++q) {
                g[q] = out.functions[k][N.delta(q, i)];
            }
            auto [it, fresh] = ids.emplace(g, out.functions.size());
            if (fresh) {
                if (out.functions.size() >= max_size) {
                    throw bound_error("kernel exceeds " + std::to_string(max_size) + " elements");
                }
                out.functions.push_back(g);
            }
            row.push_back(it->second);
        }
        out.table.closure.push_back(std::move(row));
    }
    for (const auto &g : out.functions) {
        out.table.outputs.push_back(g[N.q0()]);
    }
    out.table.labels = default_labels(out.functions.size());
    return out;
}

// Least-significant-digit-first automaton of a kernel table: reading the
// digits of n from the low end walks Lambda_(d0), Lambda_(d1), ... and the
// element reached has u(n) as its value at 0.
inline Dfao lsd_automaton(const KernelTable &k)
{
    return Dfao(k.p, k.labels, k.closure, 0, k.outputs);
}

// Automaton (most significant digit first, minimized) generating element 0 of a
// kernel table. The table must be total and consistent: Lambda_0 preserves the
// value at 0, since u(p*0 + 0) = u(0).
inline Dfao automaton_from_kernel(const KernelTable &k, std::size_t max_states = default_max_states)
{
    const auto n = k.labels.size();
    if (n == 0) {
        throw domain_error("automaton_from_kernel: empty kernel");
    }
    if (k.closure.size() != n || k.outputs.size() != n) {
        throw domain_error("automaton_from_kernel: closure table is not total");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (k.closure[j].size() != k.p) {
            throw domain_error("automaton_from_kernel: closure table is not total at " + k.labels[j]);
        }
        for (auto t : k.closure[j]) {
            if (t >= n) {
                throw domain_error("automaton_from_kernel: closure of " + k.labels[j] + " leaves the label set");
            }
        }
        if (k.outputs[j] >= k.p) {
            throw domain_error("automaton_from_kernel: output of " + k.labels[j] + " is not a digit");
        }
        if (k.outputs[k.closure[j][0]] != k.outputs[j]) {
            throw domain_error("automaton_from_kernel: Lambda_0 of " + k.labels[j] +
                               " changes the value at 0, no sequence has this kernel");
        }
    }
    return reverse(lsd_automaton(k), max_states);
}

} // namespace cartier

#endif
