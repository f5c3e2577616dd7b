#ifndef CARTIER_TOOLS_CLI_HPP
#define CARTIER_TOOLS_CLI_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cartier/cartier.hpp>

namespace cartier::cli
{

using json = nlohmann::ordered_json;

struct RunConfig {
    std::uint32_t p = 2;
    std::int64_t trunc = default_truncation;
    std::uint64_t seed = 1;
    std::optional<std::size_t> max_kernel;
    std::optional<std::size_t> max_iters;
    std::string format = "human";

    bool structured() const { return format == "structured"; }

    void check() const
    {
        if (!is_prime(p)) {
            throw CLI::ValidationError("--p", std::to_string(p) + " is not a prime");
        }
        if (trunc < 8) {
            throw CLI::ValidationError("--trunc", "truncation must be at least 8");
        }
        if ((max_kernel && *max_kernel == 0) || (max_iters && *max_iters == 0)) {
            throw CLI::ValidationError("bounds", "size bounds must be positive");
        }
    }
};

inline std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw domain_error("cannot read " + path);
    }
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// A series argument is series text ("p=2 offset=0 coeffs=... trunc=..."), a
// polynomial in X (exact), a quotient A/B of such polynomials (expanded to the
// truncation order), or @path naming a file holding one of these.
inline Series read_series(std::string arg, const RunConfig &cfg)
{
    if (!arg.empty() && arg[0] == '@') {
        arg = slurp(arg.substr(1));
    }
    arg = trim(arg);
    if (arg.find("coeffs=") != std::string::npos) {
        auto s = Series::parse(arg);
        if (s.p() != cfg.p) {
            throw domain_error("series has p = " + std::to_string(s.p()) + " but --p is " + std::to_string(cfg.p));
        }
        return s;
    }
    int depth = 0;
    std::size_t slash = std::string::npos;
    for (std::size_t k = 0; k < arg.size(); ++k) {
        depth += arg[k] == '(' ? 1 : arg[k] == ')' ? -1 : 0;
        if (arg[k] == '/' && depth == 0) {
            slash = k;
        }
    }
    if (slash == std::string::npos) {
        return Series::from_poly(parse_univariate(arg, cfg.p));
    }
    const RationalFunction f(parse_univariate(arg.substr(0, slash), cfg.p),
                             parse_univariate(arg.substr(slash + 1), cfg.p));
    return Series::from_rational(f, cfg.trunc);
}

inline MultiPoly read_annihilator(const std::string &arg, const RunConfig &cfg)
{
    const auto text = !arg.empty() && arg[0] == '@' ? trim(slurp(arg.substr(1))) : arg;
    if (PolyParser::max_variable(text) > 1) {
        throw domain_error("annihilator must be a polynomial in Y and X only: " + text);
    }
    return parse_polynomial(text, cfg.p, 1);
}

inline Dfao read_automaton(const std::string &path) { return Dfao::parse(slurp(path)); }

inline GoodEquationalSystem read_system_file(const std::string &path) { return read_system(slurp(path)); }

inline json series_json(const Series &s)
{
    return {{"series", s.to_string()}, {"norm", s.norm().to_string(s.p())}, {"exact", s.is_exact()}};
}

inline json kernel_json(const KernelTable &k)
{
    return {{"p", k.p}, {"size", k.size()}, {"labels", k.labels}, {"closure", k.closure}, {"outputs", k.outputs}};
}

inline std::string kernel_text(const KernelTable &k)
{
    std::ostringstream o;
    o << "kernel size " << k.size() << "\nelement";
    for (std::uint32_t i = 0; i < k.p; ++i) {
        o << "  L" << i;
    }
    o << "  u(0)\n";
    for (std::size_t j = 0; j < k.size(); ++j) {
        o << k.labels[j];
        for (auto t : k.closure[j]) {
            o << "  " << k.labels[t];
        }
        o << "  " << k.outputs[j] << "\n";
    }
    return o.str();
}

inline json deduction_json(const SeriesNetwork &net, const DeductionState &st)
{
    json els = json::array();
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto &e = net.element(i);
        const auto &d = st.elements[i];
        json j{{"handle", e.name}, {"expression", e.expr}, {"constant", e.constant}, {"status", to_string(d.status)}};
        if (d.status == DeductionStatus::forced) {
            j["rule"] = d.rule;
            j["identity"] = net.ambient().equal(d.value, e.value);
        } else if (d.status == DeductionStatus::root_of) {
            j["relation"] = relation_string(d.relation);
            j["candidates"] = d.candidates.size();
            j["candidates_complete"] = d.candidates_complete;
        }
        els.push_back(std::move(j));
    }
    return els;
}

inline json system_json(const GoodEquationalSystem &s, const Trace &trace)
{
    return {{"system", write_system(s)}, {"variables", s.n()}, {"polynomials", s.sigma.size()}, {"trace", trace}};
}

inline std::string list_string(const FiniteField &F, const std::vector<std::uint32_t> &codes)
{
    std::string s = "{";
    for (std::size_t k = 0; k < codes.size(); ++k) {
        s += (k ? ", " : "") + F.describe(codes[k]);
    }
    return s + "}";
}

inline PropagationOptions propagation_options(const RunConfig &cfg)
{
    PropagationOptions o;
    if (cfg.max_iters) {
        o.max_rounds = *cfg.max_iters;
    }
    return o;
}

inline KernelOptions kernel_options(const RunConfig &cfg)
{
    KernelOptions o;
    if (cfg.max_kernel) {
        o.max_size = *cfg.max_kernel;
    }
    return o;
}

// Runs one command line. Exit status: 0 success, 1 domain error, 2 usage.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Cartier operators, automatic series and Tyszka characterizability", "cartier"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--p", cfg.p, "characteristic")->envname("CARTIER_P");
    app.add_option("--trunc", cfg.trunc, "truncation order N")->envname("CARTIER_TRUNC");
    app.add_option("--seed", cfg.seed, "root residue, or RNG seed for random inputs")->envname("CARTIER_SEED");
    app.add_option("--max-kernel", cfg.max_kernel, "kernel size bound")->envname("CARTIER_MAX_KERNEL");
    app.add_option("--max-iters", cfg.max_iters, "iteration cap (propagation rounds, reduction steps)")
        ->envname("CARTIER_MAX_ITERS");
    app.add_option("--format", cfg.format, "human or structured")
        ->check(CLI::IsMember({"human", "structured"}))
        ->envname("CARTIER_FORMAT");

    std::function<void()> action;
    auto emit = [&](const json &j, const std::string &human) {
        if (cfg.structured()) {
            out << j.dump(2) << "\n";
        } else {
            out << human;
            if (!human.empty() && human.back() != '\n') {
                out << "\n";
            }
        }
    };

    // series
    auto *series = app.add_subcommand("series", "truncated Laurent series");
    series->require_subcommand(1);
    std::string s_arg;
    std::vector<std::string> s_parts;
    auto *s_show = series->add_subcommand("show", "normalize a series and report its norm");
    s_show->add_option("series", s_arg, "series text, polynomial, A/B or @file")->required();
    s_show->callback([&] {
        action = [&] {
            const auto F = read_series(s_arg, cfg);
            emit(series_json(F), F.to_string() + "\nnorm " + F.norm().to_string(cfg.p));
        };
    });
    auto *s_parts_cmd = series->add_subcommand("parts", "Cartier components Lambda_0..Lambda_(p-1)");
    s_parts_cmd->add_option("series", s_arg)->required();
    s_parts_cmd->callback([&] {
        action = [&] {
            const auto F = read_series(s_arg, cfg);
            const auto parts = cartier_parts(F);
            const auto back = reassemble(parts);
            json j{{"parts", json::array()}, {"reassembled", back.to_string()}, {"identity", back.agrees_with(F)}};
            std::string h;
            for (std::uint32_t i = 0; i < parts.size(); ++i) {
                j["parts"].push_back(parts[i].to_string());
                h += "L" + std::to_string(i) + " " + parts[i].to_string() + "\n";
            }
            h += std::string("reassembly ") + (back.agrees_with(F) ? "agrees" : "DIFFERS");
            emit(j, h);
        };
    });
    auto *s_reassemble = series->add_subcommand("reassemble", "sum_i X^i part_i^p");
    s_reassemble->add_option("parts", s_parts, "p series")->required();
    s_reassemble->callback([&] {
        action = [&] {
            std::vector<Series> parts;
            for (const auto &a : s_parts) {
                parts.push_back(read_series(a, cfg));
            }
            const auto F = reassemble(parts);
            emit(series_json(F), F.to_string());
        };
    });
    auto *s_inverse = series->add_subcommand("inverse", "multiplicative inverse");
    s_inverse->add_option("series", s_arg)->required();
    s_inverse->callback([&] {
        action = [&] {
            const auto F = read_series(s_arg, cfg).inverse(cfg.trunc);
            emit(series_json(F), F.to_string());
        };
    });
    auto *s_random = series->add_subcommand("random", "random series in F_p[[X]] known to X^trunc");
    s_random->callback([&] {
        action = [&] {
            Rng rng(cfg.seed);
            const auto F = random_series(rng, cfg.p, cfg.trunc);
            emit(series_json(F), F.to_string());
        };
    });
    std::string s_poly;
    auto *s_root = series->add_subcommand("root", "root of an annihilator P(X, Y) with residue --seed");
    s_root->add_option("poly", s_poly, "polynomial in Y and X")->required();
    s_root->callback([&] {
        action = [&] {
            const auto P = read_annihilator(s_poly, cfg);
            const auto F = AlgebraicSeries::from_seed(P, static_cast<std::uint32_t>(cfg.seed), cfg.trunc);
            emit(series_json(F.expansion), F.expansion.to_string());
        };
    });

    // automaton
    auto *automaton = app.add_subcommand("automaton", "automata with output");
    automaton->require_subcommand(1);
    std::string a_file;
    std::uint64_t a_count = 32;
    std::size_t a_states = 3;
    auto *a_terms = automaton->add_subcommand("terms", "first terms of the generated sequence");
    a_terms->add_option("file", a_file)->required();
    a_terms->add_option("--count", a_count, "number of terms");
    a_terms->callback([&] {
        action = [&] {
            const auto M = read_automaton(a_file);
            std::vector<std::uint32_t> t;
            std::string h;
            for (std::uint64_t n = 0; n < a_count; ++n) {
                t.push_back(M.nth_term(n));
                h += std::to_string(t.back());
                h += n + 1 < a_count && M.p() > 9 ? "," : "";
            }
            emit(json{{"p", M.p()}, {"terms", t}}, h);
        };
    });
    auto *a_min = automaton->add_subcommand("minimize", "minimal equivalent automaton");
    a_min->add_option("file", a_file)->required();
    a_min->callback([&] {
        action = [&] {
            const auto M = minimize(read_automaton(a_file));
            emit(json{{"states", M.size()}, {"automaton", M.to_text()}}, M.to_text());
        };
    });
    auto *a_series = automaton->add_subcommand("series", "sum_(n < trunc) u(n) X^n");
    a_series->add_option("file", a_file)->required();
    a_series->callback([&] {
        action = [&] {
            const auto F = automatic_series(read_automaton(a_file), cfg.trunc);
            emit(series_json(F), F.to_string());
        };
    });
    auto *a_random = automaton->add_subcommand("random", "random automaton over digits 0..p-1");
    a_random->add_option("--states", a_states, "state count")->check(CLI::Range(1, 64));
    a_random->callback([&] {
        action = [&] {
            Rng rng(cfg.seed);
            const auto M = random_dfao(rng, cfg.p, a_states);
            emit(json{{"states", M.size()}, {"automaton", M.to_text()}}, M.to_text());
        };
    });

    // kernel
    auto *kernel = app.add_subcommand("kernel", "p-kernel of an automaton or a series");
    std::string k_automaton;
    std::string k_series;
    std::string k_poly;
    auto *k_a = kernel->add_option("--automaton", k_automaton, "automaton file");
    auto *k_s = kernel->add_option("--series", k_series, "series text, polynomial, A/B or @file");
    auto *k_p = kernel->add_option("--poly", k_poly, "annihilator; the root has residue --seed");
    k_a->excludes(k_s)->excludes(k_p);
    k_s->excludes(k_p);
    kernel->callback([&] {
        action = [&] {
            if (!k_automaton.empty()) {
                const auto K = cfg.max_kernel ? kernel_from_automaton(read_automaton(k_automaton), *cfg.max_kernel)
                                              : kernel_from_automaton(read_automaton(k_automaton));
                auto j = kernel_json(K.table);
                j["certified"] = true;
                emit(j, kernel_text(K.table) + "exact (automaton)");
                return;
            }
            Series F(cfg.p);
            if (!k_series.empty()) {
                F = read_series(k_series, cfg);
            } else if (!k_poly.empty()) {
                F = AlgebraicSeries::from_seed(read_annihilator(k_poly, cfg), static_cast<std::uint32_t>(cfg.seed),
                                               cfg.trunc)
                        .expansion;
            } else {
                throw CLI::RequiredError("one of --automaton, --series, --poly");
            }
            const auto K = series_kernel(F, kernel_options(cfg));
            auto j = kernel_json(K.table);
            j["certified"] = K.certified;
            if (!K.certified) {
                j["precision"] = K.precision;
            }
            emit(j, kernel_text(K.table) + (K.certified ? "exact"
                                                         : "equal mod X^" + std::to_string(K.precision) +
                                                               " (not certified)"));
        };
    });

    // christol
    auto *christol = app.add_subcommand("christol", "automaton <-> algebraic series");
    christol->require_subcommand(1);
    std::string c_file;
    std::string c_poly;
    auto *c_to_poly = christol->add_subcommand("to-poly", "annihilator of an automatic series");
    c_to_poly->add_option("automaton", c_file)->required();
    c_to_poly->callback([&] {
        action = [&] {
            const auto r = automaton_to_polynomial(read_automaton(c_file));
            json j{{"annihilator", to_string(r.annihilator)}, {"method", r.method},
                   {"verdict", r.verdict.to_string()}, {"kernel_size", r.kernel.size()}};
            if (!r.note.empty()) {
                j["note"] = r.note;
            }
            emit(j, to_string(r.annihilator) + "\n" + r.verdict.to_string() + " (" + r.method + ", kernel size " +
                        std::to_string(r.kernel.size()) + ")");
        };
    });
    auto *c_to_aut = christol->add_subcommand("to-automaton", "automaton of the root with residue --seed");
    c_to_aut->add_option("poly", c_poly, "polynomial in Y and X, or @file")->required();
    c_to_aut->callback([&] {
        action = [&] {
            const auto F = AlgebraicSeries::from_seed(read_annihilator(c_poly, cfg),
                                                      static_cast<std::uint32_t>(cfg.seed), cfg.trunc);
            const auto r = polynomial_to_automaton(F, cfg.trunc, kernel_options(cfg));
            json j{{"states", r.automaton.size()}, {"kernel_size", r.kernel.table.size()},
                   {"truncation", r.truncation}, {"certified", r.kernel.certified}, {"automaton", r.automaton.to_text()}};
            if (cfg.structured()) {
                emit(j, "");
            } else {
                out << r.automaton.to_text();
                err << "# kernel size " << r.kernel.table.size() << " at truncation " << r.truncation
                    << (r.kernel.certified ? "" : " (equal mod X^" + std::to_string(r.kernel.precision) + ", not certified)")
                    << "\n";
            }
        };
    });

    // tyszka
    auto *tyszka = app.add_subcommand("tyszka", "pseudo-morphisms and witness sets");
    tyszka->require_subcommand(1);
    std::string t_poly;
    bool t_tc = false;
    std::uint32_t t_field = 4;
    std::vector<std::uint32_t> t_set;
    std::size_t t_max_maps = 1u << 20;
    std::string t_f;
    std::string t_g;
    auto *t_witness = tyszka->add_subcommand("witness", "witness set of the root with residue --seed");
    t_witness->add_option("--poly", t_poly, "annihilator in Y and X")->required();
    t_witness->add_flag("--tc", t_tc, "isolate the root (TC witness)");
    t_witness->callback([&] {
        action = [&] {
            const auto F = AlgebraicSeries::from_seed(read_annihilator(t_poly, cfg),
                                                      static_cast<std::uint32_t>(cfg.seed), cfg.trunc);
            const auto w = t_tc ? witness_tc_series(F, cfg.trunc) : witness_from_polynomial(F, cfg.trunc);
            const auto st = propagate_closure(w.network, {}, propagation_options(cfg));
            const auto &d = st.elements[w.target];
            json roots = json::array();
            for (const auto &r : w.roots) {
                roots.push_back(r.to_string());
            }
            json j{{"annihilator", to_string(w.annihilator)}, {"target", w.network.element(w.target).name},
                   {"target_status", to_string(d.status)}, {"roots", roots}, {"roots_complete", w.roots_complete},
                   {"elements", deduction_json(w.network, st)}};
            if (w.separation >= 0) {
                j["separation"] = w.separation;
            }
            std::string h = witness_table(w.network, &st) + "target " + w.network.element(w.target).name + ": " +
                            to_string(d.status) + "\nroots of " + to_string(w.annihilator) + ": " +
                            std::to_string(w.roots.size()) + (w.roots_complete ? "" : "+") + "\n";
            emit(j, h);
        };
    });
    auto *t_enum = tyszka->add_subcommand("enumerate", "all pseudo-morphisms on a subset of F_q");
    t_enum->add_option("--field", t_field, "field order q")->required();
    t_enum->add_option("--set", t_set, "element codes (base-p digits of the coordinates)")->required()->delimiter(',');
    t_enum->add_option("--max-maps", t_max_maps, "enumeration bound")->check(CLI::PositiveNumber);
    t_enum->callback([&] {
        action = [&] {
            const auto net = field_network(t_field, t_set);
            EnumerateOptions opt;
            opt.max_results = t_max_maps;
            const auto maps = enumerate_pseudo_morphisms(net, opt);
            const auto &F = *net.ambient().field;
            json j{{"field", t_field}, {"set", t_set}, {"count", maps.size()}, {"maps", maps}};
            std::ostringstream h;
            h << maps.size() << " pseudo-morphisms on " << net.size() << " elements of GF(" << t_field << ")\n";
            for (const auto &m : maps) {
                for (std::size_t k = 0; k < m.size(); ++k) {
                    h << (k ? ", " : "") << net.element(k).name << " -> " << F.describe(m[k]);
                }
                h << "\n";
            }
            emit(j, h.str());
        };
    });
    auto *t_sub = tyszka->add_subcommand("subfield", "elements fixed by every pseudo-morphism of F_q");
    t_sub->add_option("--field", t_field, "field order q")->required();
    t_sub->callback([&] {
        action = [&] {
            EnumerateOptions opt;
            opt.max_results = t_max_maps;
            const auto fixed = characterizable_subfield(t_field, opt);
            const FiniteField F(t_field);
            emit(json{{"field", t_field}, {"subfield", fixed}}, list_string(F, fixed));
        };
    });
    auto *t_cex = tyszka->add_subcommand("counterexample", "H2 forced from H1 = F^p + X G^p");
    t_cex->add_option("--f", t_f, "series F (default: random from --seed)");
    t_cex->add_option("--g", t_g, "series G (default: random from --seed)");
    t_cex->callback([&] {
        action = [&] {
            Rng rng(cfg.seed);
            const auto F = t_f.empty() ? random_series(rng, cfg.p, cfg.trunc) : read_series(t_f, cfg);
            const auto G = t_g.empty() ? random_series(rng, cfg.p, cfg.trunc) : read_series(t_g, cfg);
            const auto r = counterexample_311(F, G);
            const auto &H1 = r.network.value(r.h1);
            const auto kf = khat_members({H1}, 1, F);
            const auto kg = khat_members({H1}, 1, G);
            json j{{"forced", r.forced}, {"degenerate", r.degenerate}, {"caveat", r.caveat()},
                   {"khat_F", {{"member", kf.member}, {"depth", kf.depth}, {"detail", kf.detail}}},
                   {"khat_G", {{"member", kg.member}, {"depth", kg.depth}, {"detail", kg.detail}}},
                   {"elements", deduction_json(r.network, r.state)}};
            std::string h = witness_table(r.network, &r.state) + "H2: " + (r.forced ? "forced" : "not forced") +
                            "\nF in K-hat: " + (kf.member ? "yes, depth " + std::to_string(kf.depth) : "not shown") +
                            "\nG in K-hat: " + (kg.member ? "yes, depth " + std::to_string(kg.depth) : "not shown") +
                            "\n" + r.caveat();
            emit(j, h);
        };
    });

    // eqsys
    auto *eqsys = app.add_subcommand("eqsys", "good equational systems");
    eqsys->require_subcommand(1);
    std::string e_file;
    std::size_t e_var = 0;
    bool e_trace = false;
    auto emit_system = [&](const GoodEquationalSystem &s, const Trace &trace) {
        if (cfg.structured()) {
            emit(system_json(s, trace), "");
            return;
        }
        if (e_trace) {
            for (const auto &line : trace) {
                err << "# " << line << "\n";
            }
        }
        out << write_system(s);
    };
    auto var_index = [&](const GoodEquationalSystem &s) {
        if (e_var < 1 || e_var > s.n()) {
            throw domain_error("--var must lie in 1.." + std::to_string(s.n()));
        }
        return e_var - 1;
    };
    auto *e_simplify = eqsys->add_subcommand("simplify", "leave at most one polynomial in Y_var");
    e_simplify->add_option("file", e_file)->required();
    e_simplify->add_option("--var", e_var, "variable index (1-based)")->required();
    e_simplify->add_flag("--trace", e_trace, "print the step log");
    e_simplify->callback([&] {
        action = [&] {
            const auto s = read_system_file(e_file);
            Trace tr;
            emit_system(simplify_over_variable(s, var_index(s), &tr), tr);
        };
    });
    auto *e_split = eqsys->add_subcommand("split", "split polynomials whose Y-exponents are all divisible by p");
    e_split->add_option("file", e_file)->required();
    e_split->add_flag("--trace", e_trace, "print the step log");
    e_split->callback([&] {
        action = [&] {
            auto s = read_system_file(e_file);
            const auto gco = gco_instance(s.p);
            Trace tr;
            std::vector<MultiPoly> sigma;
            for (const auto &P : s.sigma) {
                if (!P.variables().empty() && all_exponents_divisible(P)) {
                    const auto parts = split_polynomial(P, gco);
                    tr.push_back("split " + to_string(P) + " into " + std::to_string(parts.size()) + " components");
                    sigma.insert(sigma.end(), parts.begin(), parts.end());
                } else {
                    sigma.push_back(P);
                }
            }
            s.sigma = std::move(sigma);
            detail::tidy(s);
            emit_system(s, tr);
        };
    });
    auto *e_elim = eqsys->add_subcommand("eliminate", "project out Y_var");
    e_elim->add_option("file", e_file)->required();
    e_elim->add_option("--var", e_var, "variable index (1-based)")->required();
    e_elim->add_flag("--trace", e_trace, "print the step log");
    e_elim->callback([&] {
        action = [&] {
            const auto s = read_system_file(e_file);
            Trace tr;
            emit_system(eliminate_variable(s, var_index(s), &tr), tr);
        };
    });
    auto *e_reduce = eqsys->add_subcommand("reduce", "univariate annihilator for every target");
    e_reduce->add_option("file", e_file)->required();
    e_reduce->add_flag("--trace", e_trace, "print the step log");
    e_reduce->callback([&] {
        action = [&] {
            const auto s = read_system_file(e_file);
            ReduceOptions opt;
            if (cfg.max_iters) {
                opt.max_steps = *cfg.max_iters;
            }
            const auto r = reduce_system(s, opt);
            json targets = json::array();
            std::string h;
            for (const auto &[k, P] : r.annihilators) {
                const auto &v = r.verdicts.at(k);
                targets.push_back({{"index", k + 1}, {"name", detail::var_name(s, k)}, {"annihilator", to_string(P)},
                                   {"verdict", v.to_string()}});
                h += detail::var_name(s, k) + ": " + to_string(P) + "  [" + v.to_string() + "]\n";
            }
            json j{{"targets", targets}, {"steps", r.steps}};
            if (e_trace) {
                j["trace"] = r.trace;
                if (!cfg.structured()) {
                    for (const auto &line : r.trace) {
                        err << "# " << line << "\n";
                    }
                }
            }
            emit(j, h);
        };
    });

    try {
        app.parse(argc, argv);
        cfg.check();
        if (!action) {
            throw CLI::RequiredError("a subcommand");
        }
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        if (argc <= 1) {
            err << app.help();
        } else {
            err << "error: " << e.what() << "\n";
            err << "run with --help for usage\n";
        }
        return 2;
    }
    try {
        action();
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace cartier::cli

#endif
