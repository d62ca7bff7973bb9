#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qerr_cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qerr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qerr::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(QERR_SAMPLES_DIR) + "/" + name; }

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(CliTable, KnownRows) {
    const auto r = run({"--format", "csv", "table", "--n-min", "1", "--n-max", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "\n2,1/10,0.100000000000,1/3,0.333333333333,1/5,0.200000000000,1/2,"
                                "0.500000000000,1/3,0.333333333333,1/10,0.100000000000,OK\n"));
    EXPECT_TRUE(contains(r.out, "\n3,1/5,0.200000000000,2/5,"));
    EXPECT_TRUE(contains(r.out, ",7/16,0.437500000000,OK\n"));
    EXPECT_TRUE(contains(r.out, "\n4,9/34,"));
}

TEST(CliTable, ByteIdenticalAcrossRuns) {
    for (const char* fmt : {"table", "csv", "json-lines"}) {
        const auto a = run({"--format", fmt, "table", "--n-max", "20"});
        const auto b = run({"--format", fmt, "table", "--n-max", "20"});
        ASSERT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << fmt;
    }
}

TEST(CliTable, RangeValidation) {
    EXPECT_EQ(run({"table", "--n-min", "5", "--n-max", "3"}).code, 2);
    EXPECT_EQ(run({"table", "--n-min", "0"}).code, 2);
}

TEST(CliSimulate, Examples) {
    auto r = run({"--format", "csv", "simulate", "eq", "--n", "2", "--input", "000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "eq,2,000,3,9/10,0.900000000000,1/10,0.100000000000"));

    r = run({"--format", "csv", "simulate", "eq", "--n", "3", "--input", "1010"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "eq,3,1010,0,0,0.000000000000,0,"));

    r = run({"--format", "csv", "simulate", "and", "--n", "2", "--exhaustive"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "and,2,1/10,0.100000000000,1/10,0.100000000000,true"));
}

TEST(CliSimulate, InputErrors) {
    EXPECT_EQ(run({"simulate", "eq", "--n", "2", "--input", "00"}).code, 2);  // wrong length
    EXPECT_EQ(run({"simulate", "eq", "--n", "2", "--input", "0a0"}).code, 2);
    EXPECT_EQ(run({"simulate", "xor", "--n", "2", "--input", "000"}).code, 2);
    EXPECT_EQ(run({"simulate", "eq", "--n", "2"}).code, 2);  // neither --input nor --exhaustive
    EXPECT_EQ(run({"simulate", "eq", "--n", "2", "--input", "000", "--exhaustive"}).code, 2);
}

TEST(CliSimulate, SeededShotsAreReproducible) {
    const std::vector<std::string> args{"simulate", "eq", "--n", "4", "--input", "01111", "--shots", "500", "--seed", "3"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(CliSimulate, ExhaustiveBudget) {
    EXPECT_EQ(run({"simulate", "eq", "--n", "30", "--exhaustive"}).code, 3);
}

TEST(CliBlekherman, Probability) {
    const auto r = run({"--format", "csv", "blekherman", "probability", "--n", "4", "--s", "2", "--b", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "4,2,1,2/3,0.666666666667,2/3,0.666666666667,true"));
}

TEST(CliBlekherman, VerifySampleCertificate) {
    auto r = run({"blekherman", "verify", "--cert", sample("cert_n2_square.json"), "--q", "1,-2,1"});
    EXPECT_EQ(r.code, 0) << r.err;
    r = run({"blekherman", "verify", "--cert", sample("cert_n2_square.json"), "--poly",
             sample("poly_n2_half_one_plus_x1x2.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    r = run({"blekherman", "verify", "--cert", sample("cert_n4_weight.json"), "--q", "0,4,-1"});
    EXPECT_EQ(r.code, 0) << r.err;
    r = run({"--format", "csv", "blekherman", "verify", "--cert", sample("cert_n2_square.json"), "--q", "1,-2,2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, ",false,"));
}

TEST(CliBlekherman, FindReportsInfeasibleWithoutFailing) {
    const auto r = run({"--format", "csv", "blekherman", "find", "--q", "-1", "--n", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "infeasible"));
}

TEST(CliBlekherman, FindWritesAVerifiableCertificate) {
    const auto path = std::filesystem::temp_directory_path() / "qerr_test_cli_cert.json";
    auto r = run({"blekherman", "find", "--poly", sample("poly_n5_linear.json"), "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run({"blekherman", "verify", "--cert", path.string(), "--poly", sample("poly_n5_linear.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    std::filesystem::remove(path);
}

TEST(CliBlekherman, ParseErrors) {
    const auto path = std::filesystem::temp_directory_path() / "qerr_test_cli_bad.json";
    std::ofstream(path) << R"({"n":2,"t":1,"terms":[{"j":0,"squares":[["1","x"]]}]})";
    const auto r = run({"blekherman", "verify", "--cert", path.string(), "--q", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "squares")) << r.err;
    std::filesystem::remove(path);
    EXPECT_EQ(run({"blekherman", "verify", "--cert", "/nonexistent/cert.json", "--q", "1"}).code, 2);
    EXPECT_EQ(run({"blekherman", "find", "--q", "1,2,zz", "--n", "4"}).code, 2);
}

TEST(CliBlekherman, Projector) {
    const auto r = run({"--format", "csv", "blekherman", "projector", "--n", "4", "--b", "1", "--alpha", "1,0,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, ",true,"));
    EXPECT_EQ(run({"blekherman", "projector", "--n", "9", "--b", "1", "--alpha", "1,0,0,0,0,0,0,0"}).code, 3);
}

TEST(CliBound, Value) {
    const auto r = run({"--format", "csv", "bound", "value", "--n", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "3,1/5,0.200000000000,2/5,0.400000000000,4/13,0.307692307692"));
}

TEST(CliBound, Witness) {
    auto r = run({"--format", "csv", "bound", "witness", "--n", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "2,2/5,-2/5,1/10,0,1/10,0.100000000000,true"));
    r = run({"bound", "witness", "--witness", sample("witness_n2_optimal.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    r = run({"bound", "witness", "--n", "2", "--epsilon", "9/100"});
    EXPECT_EQ(r.code, 1);
}

TEST(CliBound, FalsifyBelowTheBoundFindsNothing) {
    const auto r = run({"--format", "csv", "bound", "falsify", "--n", "2", "--epsilon", "9/100"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, ",none,"));
}

TEST(CliBound, FalsifyBudget) {
    EXPECT_EQ(run({"bound", "falsify", "--n", "9", "--epsilon", "1/2"}).code, 3);
    EXPECT_EQ(run({"bound", "falsify", "--n", "2", "--epsilon", "1/2", "--resolution", "2000"}).code, 3);
    EXPECT_EQ(run({"--unsafe-budget", "bound", "falsify", "--n", "9", "--epsilon", "1/2", "--resolution", "4"}).code, 0);
}

TEST(CliBound, SearchRequiresFiftyRestarts) {
    EXPECT_EQ(run({"bound", "search", "--n", "2", "--restarts", "10"}).code, 2);
}

TEST(CliUsage, Errors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "table"}).code, 2);
    EXPECT_EQ(run({"bound"}).code, 2);
    EXPECT_EQ(run({"bound", "value"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliFormat, JsonLinesIsOneObjectPerRow) {
    const auto r = run({"--format", "json-lines", "table", "--n-max", "4"});
    ASSERT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto doc = nlohmann::json::parse(line);
        EXPECT_TRUE(doc.is_object());
        EXPECT_EQ(doc["n"], std::to_string(++count));
    }
    EXPECT_EQ(count, 4);
}
