#include <kw/cli.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using kw::cli::json;

namespace {

struct Outcome {
    int code;
    json out;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "kw");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream os;
    const int code = kw::cli::run(static_cast<int>(argv.size()), argv.data(), os);
    return {code, json::parse(os.str())};
}

/// Runs the installed binary through the shell and returns (exit code, stdout).
std::pair<int, std::string> shell(const std::string &args) {
    const std::string cmd = std::string(KW_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    std::string text;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

} // namespace

TEST(Cli, JmaxExample) {
    auto res = call({"jmax", "--p", "3", "--f", "2", "--r", "1,3", "--J", "0"});
    EXPECT_EQ(res.code, 0);
    EXPECT_EQ(res.out.dump(), R"({"J_max":[1]})");
}

TEST(Cli, CarryWithNegativeEntries) {
    auto res = call({"carry", "--p", "3", "--f", "2", "--r=-1,3"});
    EXPECT_EQ(res.code, 0);
    EXPECT_EQ(res.out.dump(), R"({"kind":"strings","strings":[{"start":0,"len":1,"sign":1}]})");
}

TEST(Cli, RankOneIsoOnIdenticalModules) {
    auto res = call({"rankone-iso", "--p", "3", "--r1", "2,2", "--a1", "1", "--r2", "2,2", "--a2", "1"});
    EXPECT_EQ(res.out.dump(), R"({"isomorphic":true})");
    res = call({"rankone-iso", "--p", "3", "--r1", "2,2", "--a1", "1", "--r2", "0,8", "--a2", "1"});
    EXPECT_EQ(res.out["isomorphic"], true);
    res = call({"rankone-iso", "--p", "3", "--r1", "2,2", "--a1", "1", "--r2", "2,2", "--a2", "2"});
    EXPECT_EQ(res.out["isomorphic"], false);
}

TEST(Cli, ExtensionCommands) {
    auto red = call({"ext-reduce", "--p", "3", "--r", "2", "--J", "0", "--a", "1", "--b", "1", "--x", "0,0,1,1"});
    ASSERT_EQ(red.code, 0);
    auto e = kw::io::extension_from_json(red.out["reduced"]);
    EXPECT_EQ(e.x[0], kw::TruncatedSeries::from_ints(e.field_ptr(), 9, std::vector<int>{1, 0, 0, 1}));

    auto eq = call({"ext-equiv", "--p", "3", "--r", "2", "--J", "0", "--a", "1", "--b", "1", "--x1", "0,0,1", "--x2", "1"});
    EXPECT_EQ(eq.out["equivalent"], true);
    eq = call({"ext-equiv", "--p", "3", "--r", "2", "--J", "0", "--a", "1", "--b", "1", "--x1", "1", "--x2", "2", "--scaling", "true"});
    EXPECT_EQ(eq.out["equivalent"], true);
    EXPECT_TRUE(eq.out.contains("scale"));

    auto forms = call({"ext-forms", "--p", "3", "--r", "2", "--J", "0", "--a", "1", "--b", "2"});
    EXPECT_EQ(forms.out["count"], 3);
    EXPECT_EQ(forms.out["exceptional"], false);

    auto raise = call({"raise", "--p", "3", "--r", "1,3", "--J", "0", "--a", "1", "--b", "1", "--x", "1", "--x", "0"});
    ASSERT_EQ(raise.code, 0);
    EXPECT_EQ(raise.out["J_max"].dump(), "[1]");
    EXPECT_EQ(raise.out["extension"]["J"].dump(), "[1]");
    EXPECT_EQ(raise.out["steps"].size(), 1u);
}

TEST(Cli, WeightCommands) {
    EXPECT_EQ(call({"weights-equiv", "--p", "3", "--w1", "1,0", "--w2", "3,2"}).out["equivalent"], true);
    EXPECT_EQ(call({"hodge-type", "--w", "1,0;2,0"}).out.dump(), R"({"hodge_type":[[2,0],[3,0]]})");
    EXPECT_EQ(call({"bdj1", "--p", "3", "--f", "1", "--exponents", "2,0", "--w", "1,0"}).out.dump(),
              R"({"member":true,"witnesses":[[],[0]]})");
    EXPECT_EQ(call({"bdj2", "--p", "3", "--f", "1", "--exponents", "2,6", "--w", "1,0"}).out["witnesses"].size(), 2u);
    auto rb = call({"rebalance", "--p", "3", "--b", "1,0;2,0;3,0;1,0", "--J", "1,2,3,5,6"});
    EXPECT_EQ(rb.out.dump(), R"({"J":[1,2,3,4]})");
    EXPECT_EQ(call({"ghat-unique", "--p", "3", "--r", "3,3", "--J", "0,1"}).out["unique"], false);
    EXPECT_EQ(call({"beta-val", "--p", "3", "--r", "2", "--J", "0", "--i", "0"}).out.dump(), R"({"num":3,"den":1})");
    EXPECT_EQ(call({"pset", "--p", "3", "--r", "3,1"}).out["member"], true);
    EXPECT_EQ(call({"rankone-char", "--p", "3", "--r", "1,2", "--a", "1"}).out["exponent"], 5);
    auto canon = call({"rankone-canon", "--p", "5", "--trunc", "12", "--c", "0,2", "--c", "0,0,0,1,1"});
    EXPECT_EQ(canon.out["r"].dump(), "[1,3]");
}

TEST(Cli, InputFileMergesWithFlags) {
    const auto path = std::filesystem::temp_directory_path() / "kw_cli_input.json";
    {
        std::ofstream o(path);
        o << R"({"p": 3, "r": [1, 3], "J": [1]})";
    }
    auto res = call({"jmax", "--input", path.string()});
    EXPECT_EQ(res.out.dump(), R"({"J_max":[1]})");
    res = call({"jmax", "--input", path.string(), "--J", "0"});
    EXPECT_EQ(res.out.dump(), R"({"J_max":[1]})");
    std::filesystem::remove(path);
}

TEST(Cli, ErrorCodes) {
    auto res = call({"jmax", "--p", "3", "--r", "1,x"});
    EXPECT_EQ(res.code, 1);
    EXPECT_EQ(res.out["error"], "malformed_input");
    EXPECT_TRUE(res.out.contains("commands"));

    res = call({"frobnicate"});
    EXPECT_EQ(res.code, 1);

    res = call({"jmax", "--p", "3", "--r", "1,4"});
    EXPECT_EQ(res.code, 2);
    EXPECT_EQ(res.out["error"], "domain");
    EXPECT_FALSE(res.out.contains("commands"));

    res = call({"carry", "--p", "3", "--r", "1,0"});
    EXPECT_EQ(res.code, 2);
    EXPECT_EQ(res.out["error"], "not_in_kernel");

    res = call({"jmax", "--input", "/nonexistent/params.json"});
    EXPECT_EQ(res.code, 1);
    res = call({"jmax", "--r", "1,3"});
    EXPECT_EQ(res.code, 1);
}

TEST(Cli, SuiteCommand) {
    auto res = call({"suite", "--name", "lemma73"});
    EXPECT_EQ(res.code, 0);
    EXPECT_EQ(res.out.at("passed"), true);
    EXPECT_EQ(res.out.at("failures"), 0);
    // Deterministic: two runs agree byte for byte.
    EXPECT_EQ(call({"suite", "--name", "lemma73"}).out.dump(), res.out.dump());
    EXPECT_EQ(call({"suite", "--name", "nonesuch"}).code, 2);
}

TEST(Cli, BinaryExitCodes) {
    auto [code, text] = shell("jmax --p 3 --f 2 --r 1,3 --J 0");
    EXPECT_EQ(code, 0);
    EXPECT_EQ(text, "{\"J_max\":[1]}\n");
    EXPECT_EQ(shell("jmax --p 3 --r 1,4").first, 2);
    EXPECT_EQ(shell("").first, 1);
    EXPECT_EQ(shell("--help").first, 0);
}
