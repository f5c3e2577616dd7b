#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

using namespace cartier;
using json = nlohmann::ordered_json;

namespace
{

struct Outcome {
    int status = 0;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "cartier");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string data(const std::string &name) { return std::string(CARTIER_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string &name, const std::string &text)
{
    const auto path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST(Cli, NoArgumentsIsUsage)
{
    const auto r = run({});
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({"frobnicate"}).status, 2);
    EXPECT_EQ(run({"series"}).status, 2);
    EXPECT_EQ(run({"--p", "4", "series", "random"}).status, 2);
    EXPECT_EQ(run({"--trunc", "4", "series", "random"}).status, 2);
    EXPECT_EQ(run({"--format", "xml", "series", "random"}).status, 2);
    EXPECT_EQ(run({"tyszka", "subfield"}).status, 2);
    EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, DomainErrorsExitOne)
{
    const auto r = run({"tyszka", "subfield", "--field", "6"});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("prime power"), std::string::npos);
    EXPECT_EQ(run({"christol", "to-poly", data("missing.aut")}).status, 1);
    EXPECT_EQ(run({"series", "show", "1/0"}).status, 1);
    EXPECT_EQ(run({"series", "show", "1 + Y"}).status, 1);
}

TEST(Cli, ThueMorseKernel)
{
    const auto r = run({"kernel", "--automaton", data("tm.aut")});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("kernel size 2"), std::string::npos);
    const auto s = run({"--format", "structured", "kernel", "--automaton", data("tm.aut")});
    ASSERT_EQ(s.status, 0) << s.err;
    const auto j = json::parse(s.out);
    EXPECT_EQ(j["size"], 2);
    EXPECT_EQ(j["outputs"], (std::vector<int>{0, 1}));
}

TEST(Cli, SeriesKernelOfRationalSeries)
{
    // 1/(1+X) over F_2 is 1 + X + X^2 + ...; both Cartier components equal it.
    const auto r = run({"--format", "structured", "kernel", "--series", "1/(1+X)"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["size"], 1);
}

TEST(Cli, PrimeSubfield)
{
    const auto r = run({"tyszka", "subfield", "--field", "9"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "{0, 1, 2}\n");
}

TEST(Cli, EnvironmentOverridesDefaults)
{
    ::setenv("CARTIER_P", "5", 1);
    ::setenv("CARTIER_TRUNC", "12", 1);
    const auto r = run({"series", "random"});
    ::unsetenv("CARTIER_P");
    ::unsetenv("CARTIER_TRUNC");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto F = Series::parse(r.out);
    EXPECT_EQ(F.p(), 5u);
    EXPECT_EQ(F.trunc(), 12);
    ::setenv("CARTIER_P", "5", 1);
    const auto flag = run({"--p", "3", "series", "random"});
    ::unsetenv("CARTIER_P");
    EXPECT_EQ(Series::parse(flag.out).p(), 3u);
}

TEST(Cli, StructuredOutputIsDeterministic)
{
    const std::vector<std::vector<std::string>> cmds = {
        {"--format", "structured", "--seed", "7", "series", "random"},
        {"--format", "structured", "--seed", "7", "--p", "3", "automaton", "random", "--states", "4"},
        {"--format", "structured", "--seed", "3", "--trunc", "32", "tyszka", "counterexample"},
        {"--format", "structured", "eqsys", "reduce", data("cartier_pipeline.sys"), "--trace"},
    };
    for (const auto &c : cmds) {
        const auto a = run(c);
        const auto b = run(c);
        ASSERT_EQ(a.status, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_TRUE(json::accept(a.out));
    }
}

TEST(Cli, SeriesOutputsReparse)
{
    for (const auto &c : std::vector<std::vector<std::string>>{{"series", "show", "1/(1+X+X^2)"},
                                                              {"series", "inverse", "X + X^2"},
                                                              {"--p", "3", "series", "random"},
                                                              {"--p", "3", "series", "root", "Y^2 - 1 - X", "--seed", "2"}}) {
        const auto r = run(c);
        ASSERT_EQ(r.status, 0) << r.err;
        const auto first = r.out.substr(0, r.out.find('\n'));
        const auto F = Series::parse(first);
        EXPECT_EQ(F.to_string(), first);
    }
    // parts -> reassemble reproduces the series.
    const std::string F = "p=3 offset=0 coeffs=1,2,0,1,1,2,0,0,1,2,2,1 trunc=12";
    const auto parts = run({"--p", "3", "--format", "structured", "series", "parts", F});
    ASSERT_EQ(parts.status, 0) << parts.err;
    const auto j = json::parse(parts.out);
    EXPECT_TRUE(j["identity"].get<bool>());
    std::vector<std::string> args{"--p", "3", "series", "reassemble"};
    for (const auto &s : j["parts"]) {
        args.push_back(s.get<std::string>());
    }
    const auto back = run(args);
    ASSERT_EQ(back.status, 0) << back.err;
    EXPECT_TRUE(Series::parse(back.out.substr(0, back.out.find('\n'))).agrees_with(Series::parse(F)));
}

TEST(Cli, AutomatonOutputsReparse)
{
    const auto M = Dfao::parse(cli::slurp(data("rudin_shapiro.aut")));
    const auto r = run({"automaton", "minimize", data("rudin_shapiro.aut")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto N = Dfao::parse(r.out);
    for (std::uint64_t n = 0; n < 512; ++n) {
        ASSERT_EQ(N.nth_term(n), M.nth_term(n)) << n;
    }
    const auto rnd = run({"--p", "3", "--seed", "11", "automaton", "random", "--states", "5"});
    ASSERT_EQ(rnd.status, 0) << rnd.err;
    EXPECT_EQ(Dfao::parse(rnd.out).to_text(), rnd.out);
}

TEST(Cli, ChristolOutputsReparse)
{
    const auto tm = Dfao::parse(cli::slurp(data("tm.aut")));
    const auto r = run({"christol", "to-poly", data("tm.aut")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto P = parse_polynomial(r.out.substr(0, r.out.find('\n')), 2, 1);
    EXPECT_TRUE(verify_annihilation(P, automatic_series(tm, 256)).holds);

    const auto path = temp_file("tm_poly.txt", to_string(P));
    const auto a = run({"christol", "to-automaton", "@" + path, "--seed", "0"});
    ASSERT_EQ(a.status, 0) << a.err;
    const auto M = Dfao::parse(a.out);
    for (std::uint64_t n = 0; n < 256; ++n) {
        ASSERT_EQ(M.nth_term(n), tm.nth_term(n)) << n;
    }
}

TEST(Cli, TyszkaReports)
{
    const auto w = run({"--p", "3", "--format", "structured", "tyszka", "witness", "--poly", "(Y - 1 - X)*(X*Y - 1)",
                        "--seed", "1"});
    ASSERT_EQ(w.status, 0) << w.err;
    const auto j = json::parse(w.out);
    EXPECT_EQ(j["target_status"], "forced");
    EXPECT_EQ(j["roots"].size(), 1u);

    const auto e = run({"--format", "structured", "tyszka", "enumerate", "--field", "4", "--set", "0,1,2,3"});
    ASSERT_EQ(e.status, 0) << e.err;
    // Pseudo-morphisms of all of GF(4): the identity and Frobenius.
    EXPECT_EQ(json::parse(e.out)["count"], 2);

    const auto c = run({"--format", "structured", "--p", "2", "--trunc", "64", "tyszka", "counterexample"});
    ASSERT_EQ(c.status, 0) << c.err;
    EXPECT_TRUE(json::parse(c.out)["forced"].get<bool>());
}

TEST(Cli, EqsysOutputsReparse)
{
    const auto sys = data("cartier_pipeline.sys");
    const auto split = run({"eqsys", "split", sys});
    ASSERT_EQ(split.status, 0) << split.err;
    const auto s = read_system(split.out);
    EXPECT_EQ(read_system(write_system(s)).sigma, s.sigma);
    EXPECT_EQ(s.sigma.size(), 3u);

    const auto two = data("two_roots.sys");
    const auto simp = run({"eqsys", "simplify", two, "--var", "2"});
    ASSERT_EQ(simp.status, 0) << simp.err;
    const auto path = temp_file("simplified.sys", simp.out);
    const auto elim = run({"eqsys", "eliminate", path, "--var", "2", "--trace"});
    ASSERT_EQ(elim.status, 0) << elim.err;
    EXPECT_NE(elim.err.find("eliminate"), std::string::npos);
    EXPECT_EQ(read_system(elim.out).n(), 1u);

    const auto red = run({"--format", "structured", "eqsys", "reduce", sys});
    ASSERT_EQ(red.status, 0) << red.err;
    const auto j = json::parse(red.out);
    ASSERT_EQ(j["targets"].size(), 1u);
    // H2 = G^2 + X F^2 with F = 1 + X^2, G = 1 + X + X^3.
    EXPECT_EQ(parse_polynomial(j["targets"][0]["annihilator"].get<std::string>(), 2, 1),
              parse_polynomial("Y + 1 + X + X^2 + X^5 + X^6", 2, 1));
}
