#include "iqpv/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace iqpv;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "iqpv");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("iqpv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void generate(std::uint64_t seed) {
        const CliResult r = run({"generate", "--q", "7", "--redundant", "3", "--scrambles", "50", "--seed",
                                 std::to_string(seed), "--challenge-out", path("challenge.json"), "--key-out",
                                 path("key.json")});
        ASSERT_EQ(r.code, kExitOk) << r.err;
    }

    fs::path dir_;
};

const fs::path kFixtures = IQPV_FIXTURE_DIR;

}  // namespace

TEST_F(CliTest, generate_matches_golden_files) {
    generate(1);
    EXPECT_EQ(read_text_file(path("challenge.json")), read_text_file(kFixtures / "golden" / "seed1_challenge.json"));
    EXPECT_EQ(read_text_file(path("key.json")), read_text_file(kFixtures / "golden" / "seed1_key.json"));
}

TEST_F(CliTest, generate_is_deterministic) {
    generate(77);
    const std::string first = read_text_file(path("challenge.json"));
    generate(77);
    EXPECT_EQ(read_text_file(path("challenge.json")), first);
    generate(78);
    EXPECT_NE(read_text_file(path("challenge.json")), first);
}

TEST_F(CliTest, challenge_file_holds_no_secret) {
    generate(5);
    const json challenge = read_json_file(path("challenge.json"));
    EXPECT_FALSE(challenge.contains("secret"));
    EXPECT_EQ(challenge["metadata"], json({{"q", 7}}));
    EXPECT_EQ(read_text_file(path("challenge.json")).find("secret"), std::string::npos);
}

TEST_F(CliTest, sample_then_verify_passes_strict) {
    generate(2);
    CliResult r = run({"sample", "--challenge", path("challenge.json"), "--shots", "100000", "--seed", "3", "--out",
                       path("counts.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    r = run({"verify", "--counts", path("counts.json"), "--key", path("key.json"), "--ideal-challenge",
             path("challenge.json"), "--json", path("report.json"), "--strict"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    EXPECT_NE(r.out.find("QUANTUM_CONSISTENT"), std::string::npos) << r.out;
    const json report = read_json_file(path("report.json"));
    EXPECT_EQ(report["verdict"], "QUANTUM_CONSISTENT");
    EXPECT_NEAR(report["fitted_epsilon"].get<double>(), 0.0, 0.01);
}

TEST_F(CliTest, attack_then_verify_fails_strict) {
    generate(2);
    CliResult r = run({"attack", "--challenge", path("challenge.json"), "--shots", "100000", "--seed", "4", "--out",
                       path("counts.json"), "--bit-order", "qubit0_rightmost"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(read_json_file(path("counts.json"))["bit_order"], "qubit0_rightmost");
    r = run({"verify", "--counts", path("counts.json"), "--key", path("key.json")});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("CLASSICAL_ATTACK_CONSISTENT"), std::string::npos) << r.out;
    r = run({"verify", "--counts", path("counts.json"), "--key", path("key.json"), "--strict"});
    EXPECT_EQ(r.code, kExitNegative);
}

TEST_F(CliTest, noisy_sample_reports_fitted_epsilon) {
    generate(3);
    ASSERT_EQ(run({"sample", "--challenge", path("challenge.json"), "--shots", "1000000", "--seed", "5", "--epsilon",
                   "0.0679", "--out", path("counts.json")})
                  .code,
              kExitOk);
    const CliResult r = run({"verify", "--counts", path("counts.json"), "--key", path("key.json"),
                             "--ideal-challenge", path("challenge.json"), "--json", "-"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json report = json::parse(r.out.substr(r.out.find('{')));
    EXPECT_NEAR(report["fitted_epsilon"].get<double>(), 0.0679, 0.01);
}

TEST_F(CliTest, simulate_and_export_qasm) {
    generate(4);
    CliResult r = run({"simulate", "--challenge", path("challenge.json"), "--out", path("dist.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const OutputDistribution d = distribution_from_json(read_json_file(path("dist.json")));
    EXPECT_EQ(d.n_qubits(), 5u);
    const KeyFile key = read_key(path("key.json"));
    EXPECT_NEAR(bias_from_dist(d, key.secret), std::pow(std::cos(std::numbers::pi / 8), 2), 1e-12);

    r = run({"export-qasm", "--challenge", path("challenge.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, export_qasm(read_challenge(path("challenge.json"))));
}

TEST_F(CliTest, usage_and_input_errors_exit_2) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"generate"}).code, kExitUsage);
    EXPECT_EQ(run({"generate", "--seed", "1", "--q", "11", "--challenge-out", path("c.json"), "--key-out",
                   path("k.json")})
                  .code,
              kExitUsage);
    EXPECT_EQ(run({"generate", "--seed", "-1"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", "--counts", path("missing.json"), "--key", path("missing.json")}).code, kExitUsage);
    EXPECT_EQ(run({"sample", "--challenge", path("missing.json"), "--seed", "1"}).code, kExitUsage);
    EXPECT_EQ(run({"sample", "--challenge", path("x.json"), "--seed", "1", "--bit-order", "big"}).code, kExitUsage);

    write_text_atomic(path("bad.json"), "{\"format\": \"iqp-counts\"");
    generate(6);
    const CliResult r = run({"verify", "--counts", path("bad.json"), "--key", path("key.json")});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("bad.json"), std::string::npos) << r.err;
}

TEST_F(CliTest, key_of_wrong_width_exits_2) {
    generate(7);
    ASSERT_EQ(run({"sample", "--challenge", path("challenge.json"), "--seed", "1", "--shots", "100", "--out",
                   path("counts.json")})
                  .code,
              kExitOk);
    const CliResult r = run({"verify", "--counts", path("counts.json"), "--key", (kFixtures / "reference_key.json").string(),
                             "--ideal-challenge", path("challenge.json")});
    EXPECT_EQ(r.code, kExitOk);
    write_json_atomic(path("key13.json"), key_to_json(KeyFile{BitVector::unit(13, 0), {}}));
    EXPECT_EQ(run({"verify", "--counts", path("counts.json"), "--key", path("key13.json")}).code, kExitUsage);
}

TEST_F(CliTest, help_exits_0) {
    const CliResult r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("generate"), std::string::npos);
}
