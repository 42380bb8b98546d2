#include "fibft/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fibft");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = fibft::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / ("fibft_cli_test_" + name);
    std::ofstream(p) << content;
    return p;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, requires_a_subcommand) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST(Cli, curves_golden_output) {
    Result r = run({"curves", "--eps", "1e-4,2e-4", "--j-max", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "epsilon,j,eps_css,acceptance\n"
              "1.00000e-04,1,5.48137e-03,9.92826e-01\n"
              "1.00000e-04,2,2.65062e-04,9.99563e-01\n"
              "2.00000e-04,1,1.11276e-02,9.85702e-01\n"
              "2.00000e-04,2,1.12038e-03,9.98233e-01\n");
}

TEST(Cli, threshold_report) {
    Result r = run({"threshold"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("interval: [6.86318e-04, 6.89247e-04]"), std::string::npos) << r.out;
    Result d = run({"threshold", "--model", "depolarizing"});
    ASSERT_EQ(d.code, 0);
    EXPECT_NE(d.out.find("model: depolarizing"), std::string::npos);
}

TEST(Cli, threshold_trace_header) {
    auto p = std::filesystem::temp_directory_path() / "fibft_cli_test_trace.csv";
    Result r = run({"threshold", "--trace", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "level,type,quantity,value");
}

TEST(Cli, threshold_bad_arguments) {
    EXPECT_EQ(run({"threshold", "--tolerance", "bogus"}).code, 1);
    EXPECT_EQ(run({"threshold", "--j-max", "3"}).code, 1);
    EXPECT_EQ(run({"threshold", "--model", "gaussian"}).code, 1);
}

TEST(Cli, ancilla_report) {
    Result r = run({"ancilla"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("eps_anc: 6.08878e-02"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("below_distillation_threshold: yes"), std::string::npos);
}

TEST(Cli, overhead_report) {
    Result r = run({"overhead", "--j", "3"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("B: 400\n"), std::string::npos);
    EXPECT_NE(r.out.find("closed_forms_agree: yes"), std::string::npos);
    EXPECT_EQ(run({"overhead", "--epsilon", "1e-2"}).code, 1);
}

TEST(Cli, simulate_header_and_determinism) {
    std::vector<std::string> args = {"simulate", "--circuit", "bp", "--j", "1", "--epsilon", "1e-3",
                                     "--trials", "500", "--seed", "4"};
    Result a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(first_line(a.out), "circuit,j,epsilon,trials,accepted,rate-name,rate,halfwidth,bound,verdict");
    args.push_back("--serial");
    Result b = run(args);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, simulate_rejects_bad_arguments) {
    EXPECT_EQ(run({"simulate", "--circuit", "purification", "--epsilon", "1e-2", "--trials", "100", "--nsigma", "-1"}).code, 1);
    EXPECT_EQ(run({"simulate", "--circuit", "bp", "--j", "9"}).code, 1);
    EXPECT_EQ(run({"simulate", "--circuit", "bp", "--trials", "0"}).code, 1);
}

TEST(Cli, config_file_and_override) {
    auto cfg = temp_file("a.cfg", "# comment\nseed=4\nj=1\ncircuit=bp\nepsilon=0\ntrials=500\n");
    Result a = run({"--config", cfg.string(), "simulate", "--epsilon", "1e-3"});
    ASSERT_EQ(a.code, 0) << a.err;
    Result b = run({"simulate", "--circuit", "bp", "--j", "1", "--epsilon", "1e-3", "--trials", "500", "--seed", "4"});
    EXPECT_EQ(a.out, b.out);
    auto bad = temp_file("b.cfg", "warp=9\n");
    EXPECT_EQ(run({"--config", bad.string(), "threshold"}).code, 1);
    EXPECT_EQ(run({"--config", "/nonexistent/fibft.cfg", "threshold"}).code, 1);
}

TEST(Cli, out_flag_writes_file) {
    auto p = std::filesystem::temp_directory_path() / "fibft_cli_test_out.csv";
    std::filesystem::remove(p);
    Result r = run({"--out", p.string(), "curves", "--eps", "1e-4", "--j-max", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "epsilon,j,eps_css,acceptance");
    EXPECT_EQ(run({"--out", "/nonexistent/dir/x.csv", "ancilla"}).code, 1);
}

TEST(Cli, decode_file) {
    auto f = temp_file("leaves.txt", "# level-1 blocks\n0000\n\n0100\n1100\n");
    Result r = run({"decode", "--file", f.string(), "--level", "1", "--basis", "z"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "0 false\n1 true\n1 false\n");
    auto bad = temp_file("bad.txt", "01x0\n");
    EXPECT_EQ(run({"decode", "--file", bad.string(), "--level", "1"}).code, 1);
    auto wrong = temp_file("wrong.txt", "000\n");
    EXPECT_EQ(run({"decode", "--file", wrong.string(), "--level", "1"}).code, 1);
    EXPECT_EQ(run({"decode"}).code, 1);
}

TEST(Cli, non_convergence_exit_code) {
    EXPECT_EQ(run({"ancilla", "--epsilon", "0.2"}).code, 2);
}
