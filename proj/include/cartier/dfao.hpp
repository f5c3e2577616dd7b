#ifndef CARTIER_DFAO_HPP
#define CARTIER_DFAO_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/prime_field.hpp>

namespace cartier
{

inline constexpr std::size_t default_max_states = 4096;

// Base-p digits of n, most significant first; 0 has the empty expansion.
inline std::vector<std::uint32_t> base_digits(std::uint64_t n, std::uint32_t p)
{
    std::vector<std::uint32_t> d;
    for (; n != 0; n /= p) {
        d.push_back(static_cast<std::uint32_t>(n % p));
    }
    std::reverse(d.begin(), d.end());
    return d;
}

// Deterministic finite automaton with output over the digit alphabet
// {0..p-1}; outputs are also digits. States are dense indices, names are
// metadata.
class Dfao
{
public:
    Dfao() = default;
    Dfao(std::uint32_t p, std::vector<std::string> names, std::vector<std::vector<std::size_t>> delta, std::size_t q0,
         std::vector<std::uint32_t> tau)
        : p_{p}, names_{std::move(names)}, delta_{std::move(delta)}, q0_{q0}, tau_{std::move(tau)}
    {
        PrimeField{p};
        const auto n = delta_.size();
        if (n == 0) {
            throw domain_error("automaton has no states");
        }
        if (names_.empty()) {
            for (std::size_t s = 0; s < n; ++s) {
                names_.push_back("s" + std::to_string(s));
            }
        }
        if (names_.size() != n || tau_.size() != n) {
            throw domain_error("automaton: state, transition and output counts disagree");
        }
        if (q0_ >= n) {
            throw domain_error("automaton: initial state out of range");
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (delta_[s].size() != p_) {
                throw domain_error("automaton: state " + names_[s] + " needs exactly " + std::to_string(p_) +
                                   " successors");
            }
            for (auto t : delta_[s]) {
                if (t >= n) {
                    throw domain_error("automaton: transition target out of range");
                }
            }
            if (tau_[s] >= p_) {
                throw domain_error("automaton: output of state " + names_[s] + " is not a digit");
            }
        }
    }

    std::uint32_t p() const noexcept { return p_; }
    std::size_t size() const noexcept { return delta_.size(); }
    const std::vector<std::string> &names() const noexcept { return names_; }
    std::size_t q0() const noexcept { return q0_; }
    std::size_t delta(std::size_t s, std::uint32_t d) const { return delta_.at(s).at(d); }
    const std::vector<std::vector<std::size_t>> &transitions() const noexcept { return delta_; }
    std::uint32_t tau(std::size_t s) const { return tau_.at(s); }
    const std::vector<std::uint32_t> &outputs() const noexcept { return tau_; }

    std::size_t run(std::size_t s, const std::vector<std::uint32_t> &w) const
    {
        for (auto d : w) {
            if (d >= p_) {
                throw domain_error("digit " + std::to_string(d) + " out of range for p = " + std::to_string(p_));
            }
            s = delta_[s][d];
        }
        return s;
    }

    // Reads w from q0, first digit first; the empty word yields tau(q0).
    std::uint32_t eval_word(const std::vector<std::uint32_t> &w) const { return tau_[run(q0_, w)]; }

    std::uint32_t nth_term(std::uint64_t n) const { return eval_word(base_digits(n, p_)); }

    std::vector<std::uint32_t> sequence(std::size_t count) const
    {
        std::vector<std::uint32_t> v(count);
        for (std::size_t n = 0; n < count; ++n) {
            v[n] = nth_term(n);
        }
        return v;
    }

    // States reachable from q0 in breadth-first order (digits ascending).
    std::vector<std::size_t> reachable() const
    {
        std::vector<std::size_t> order{q0_};
        std::vector<bool> seen(size(), false);
        seen[q0_] = true;
        for (std::size_t k = 0; k < order.size(); ++k) {
            for (auto t : delta_[order[k]]) {
                if (!seen[t]) {
                    seen[t] = true;
                    order.push_back(t);
                }
            }
        }
        return order;
    }

    // Canonical text form:
    //   p = 2
    //   states = a b
    //   q0 = a
    //   delta a = a b
    //   delta b = b a
    //   tau = 0 1
    std::string to_text() const
    {
        std::ostringstream o;
        o << "p = " << p_ << "\nstates =";
        for (const auto &n : names_) {
            o << ' ' << n;
        }
        o << "\nq0 = " << names_[q0_] << '\n';
        for (std::size_t s = 0; s < size(); ++s) {
            o << "delta " << names_[s] << " =";
            for (auto t : delta_[s]) {
                o << ' ' << names_[t];
            }
            o << '\n';
        }
        o << "tau =";
        for (auto t : tau_) {
            o << ' ' << t;
        }
        o << '\n';
        return o.str();
    }

    static Dfao parse(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        long long p = -1;
        std::vector<std::string> names;
        std::string q0_name;
        std::map<std::string, std::vector<std::string>> delta_names;
        std::vector<std::uint32_t> tau;
        bool have_tau = false;
        int lineno = 0;
        auto bad = [&](const std::string &what) {
            return parse_error("automaton line " + std::to_string(lineno) + ": " + what);
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) {
                line.erase(h);
            }
            const auto eq = line.find('=');
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            if (eq == std::string::npos) {
                throw bad("expected 'key = value'");
            }
            std::istringstream lhs(line.substr(0, eq));
            std::istringstream rhs(line.substr(eq + 1));
            std::string key;
            lhs >> key;
            std::vector<std::string> vals;
            for (std::string v; rhs >> v;) {
                vals.push_back(v);
            }
            if (key == "p") {
                if (vals.size() != 1) {
                    throw bad("p takes one value");
                }
                try {
                    p = std::stoll(vals[0]);
                } catch (const std::logic_error &) {
                    throw bad("p is not an integer");
                }
            } else if (key == "states") {
                names = vals;
            } else if (key == "q0") {
                if (vals.size() != 1) {
                    throw bad("q0 takes one state name");
                }
                q0_name = vals[0];
            } else if (key == "delta") {
                std::string state;
                if (!(lhs >> state)) {
                    throw bad("delta needs a state name");
                }
                if (delta_names.count(state) != 0) {
                    throw bad("duplicate delta for state " + state);
                }
                delta_names[state] = vals;
            } else if (key == "tau") {
                have_tau = true;
                for (const auto &v : vals) {
                    try {
                        const auto t = std::stoll(v);
                        if (t < 0) {
                            throw bad("negative output");
                        }
                        tau.push_back(static_cast<std::uint32_t>(t));
                    } catch (const std::logic_error &) {
                        throw bad("output '" + v + "' is not an integer");
                    }
                }
            } else {
                throw bad("unknown key '" + key + "'");
            }
        }
        if (p < 2 || p > (1 << 20) || !is_prime(static_cast<std::uint64_t>(p))) {
            throw parse_error("automaton: missing or invalid prime p");
        }
        if (names.empty() || q0_name.empty() || !have_tau) {
            throw parse_error("automaton: states, q0 and tau are required");
        }
        std::map<std::string, std::size_t> index;
        for (std::size_t s = 0; s < names.size(); ++s) {
            if (!index.emplace(names[s], s).second) {
                throw parse_error("automaton: duplicate state name " + names[s]);
            }
        }
        auto lookup = [&](const std::string &n) {
            auto it = index.find(n);
            if (it == index.end()) {
                throw parse_error("automaton: unknown state " + n);
            }
            return it->second;
        };
        std::vector<std::vector<std::size_t>> delta(names.size());
        for (std::size_t s = 0; s < names.size(); ++s) {
            auto it = delta_names.find(names[s]);
            if (it == delta_names.end()) {
                throw parse_error("automaton: no delta line for state " + names[s]);
            }
            for (const auto &t : it->second) {
                delta[s].push_back(lookup(t));
            }
        }
        for (const auto &[n, v] : delta_names) {
            lookup(n);
        }
        try {
            return Dfao(static_cast<std::uint32_t>(p), names, delta, lookup(q0_name), tau);
        } catch (const parse_error &) {
            throw;
        } catch (const domain_error &e) {
            throw parse_error(e.what());
        }
    }

    friend bool operator==(const Dfao &, const Dfao &) = default;

private:
    std::uint32_t p_ = 2;
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> delta_;
    std::size_t q0_ = 0;
    std::vector<std::uint32_t> tau_;
};

// Moore partition refinement; block ids of every state (unreachable states
// included) under observational equivalence.
inline std::vector<std::size_t> equivalence_classes(const Dfao &M)
{
    const auto n = M.size();
    std::vector<std::size_t> block(n);
    for (std::size_t s = 0; s < n; ++s) {
        block[s] = M.tau(s);
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sig_ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> sig{block[s]};
            for (std::uint32_t d = 0; d < M.p(); ++d) {
                sig.push_back(block[M.delta(s, d)]);
            }
            next[s] = sig_ids.emplace(std::move(sig), sig_ids.size()).first->second;
        }
        const auto before = std::set<std::size_t>(block.begin(), block.end()).size();
        block = std::move(next);
        if (sig_ids.size() == before) {
            return block;
        }
    }
}

// Minimal automaton: unreachable states dropped, equivalent states merged,
// states renumbered in breadth-first order from q0 so that equivalent inputs
// give identical results. A merged state keeps the name of its first member.
inline Dfao minimize(const Dfao &M)
{
    const auto block = equivalence_classes(M);
    std::map<std::size_t, std::size_t> renum;
    std::vector<std::size_t> rep;
    // BFS over blocks.
    std::queue<std::size_t> work;
    renum[block[M.q0()]] = 0;
    rep.push_back(M.q0());
    work.push(M.q0());
    while (!work.empty()) {
        const auto s = work.front();
        work.pop();
        for (std::uint32_t d = 0; d < M.p(); ++d) {
            const auto t = M.delta(s, d);
            if (renum.emplace(block[t], rep.size()).second) {
                rep.push_back(t);
                work.push(t);
            }
        }
    }
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> delta;
    std::vector<std::uint32_t> tau;
    for (auto s : rep) {
        names.push_back(M.names()[s]);
        std::vector<std::size_t> row;
        for (std::uint32_t d = 0; d < M.p(); ++d) {
            row.push_back(renum.at(block[M.delta(s, d)]));
        }
        delta.push_back(std::move(row));
        tau.push_back(M.tau(s));
    }
    return Dfao(M.p(), names, delta, 0, tau);
}

// True when reading a 0 from q0 leads to a state equivalent to q0, i.e. the
// computed sequence does not depend on leading zeros.
inline bool leading_zero_invariant(const Dfao &M)
{
    const auto block = equivalence_classes(M);
    return block[M.delta(M.q0(), 0)] == block[M.q0()];
}

// Equivalent automaton (on canonical expansions) in which leading zeros are
// harmless: a fresh initial state loops on 0 and otherwise copies q0.
inline Dfao normalize_leading_zeros(const Dfao &M)
{
    if (leading_zero_invariant(M)) {
        return M;
    }
    auto names = M.names();
    auto delta = M.transitions();
    auto tau = M.outputs();
    const auto fresh = M.size();
    auto row = delta[M.q0()];
    row[0] = fresh;
    std::string name = M.names()[M.q0()] + "'";
    while (std::find(names.begin(), names.end(), name) != names.end()) {
        name += "'";
    }
    names.push_back(name);
    delta.push_back(row);
    tau.push_back(M.tau(M.q0()));
    return Dfao(M.p(), names, delta, fresh, tau);
}

// Automaton computing w -> M(reverse(w)). Its states are the functions
// h_w(q) = tau(delta*(q, reverse(w))), with h_(w a) = h_w o delta(., a), and the
// output of h is h(q0). The result is minimized.
inline Dfao reverse(const Dfao &M, std::size_t max_states = default_max_states)
{
    using Fn = std::vector<std::uint32_t>;
    std::map<Fn, std::size_t> ids;
    std::vector<Fn> fns{M.outputs()};
    ids.emplace(M.outputs(), 0);
    std::vector<std::vector<std::size_t>> delta;
    for (std::size_t k = 0; k < fns.size(); ++k) {
        std::vector<std::size_t> row;
        for (std::uint32_t a = 0; a < M.p(); ++a) {
            Fn g(M.size());
            for (std::size_t q = 0; q < M.size(); ++q) {
                g[q] = fns[k][M.delta(q, a)];
            }
            auto [it, fresh] = ids.emplace(g, fns.size());
            if (fresh) {
                if (fns.size() >= max_states) {
                    throw bound_error("reversed automaton exceeds " + std::to_string(max_states) + " states");
                }
                fns.push_back(g);
            }
            row.push_back(it->second);
        }
        delta.push_back(std::move(row));
    }
    std::vector<std::uint32_t> tau;
    for (const auto &h : fns) {
        tau.push_back(h[M.q0()]);
    }
    return minimize(Dfao(M.p(), {}, delta, 0, tau));
}

} // namespace cartier

#endif
