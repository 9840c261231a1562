#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run cli(const std::string& args) {
    Run r;
    const std::string cmd = std::string(HSCRAN_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hscran_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out_dir() const { return (dir_ / "out").string(); }
    fs::path dir_;
};

} // namespace

TEST_F(CliTest, SimulateWritesReportAndFrames) {
    const auto r = cli("simulate --snr-db 25 --out " + out_dir());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto rep = json::parse(slurp(dir_ / "out" / "report.json"));
    EXPECT_EQ(rep["schema_version"], 1);
    EXPECT_TRUE(rep["summary"]["success"].get<bool>());
    EXPECT_TRUE(rep["summary"]["text_ok"].get<bool>());
    EXPECT_EQ(rep["runs"].size(), 1u);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "rx_frame_0.ppm"));
    EXPECT_EQ(slurp(dir_ / "out" / "rx_text.txt").substr(0, 5), "hello");
    EXPECT_FALSE(fs::exists(dir_ / "out" / "timings.json"));
}

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRuns) {
    const std::string args = "simulate --snr-db 12 --fading rayleigh --seed 5 --delay 77 --out " + out_dir();
    ASSERT_EQ(cli(args).status, 0);
    const auto first = slurp(dir_ / "out" / "report.json");
    const auto frame = slurp(dir_ / "out" / "rx_frame_0.ppm");
    ASSERT_EQ(cli(args + " --timings").status, 0);
    EXPECT_EQ(slurp(dir_ / "out" / "report.json"), first);
    EXPECT_EQ(slurp(dir_ / "out" / "rx_frame_0.ppm"), frame);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "timings.json"));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
    {
        std::ofstream cfg(dir_ / "cfg.json");
        cfg << R"({"snr_db": 3.0, "seed": 42, "text": "from config", "modulation": "16qam"})";
    }
    ASSERT_EQ(cli("simulate --config " + (dir_ / "cfg.json").string() + " --snr-db 30 --out " + out_dir()).status, 0);
    const auto rep = json::parse(slurp(dir_ / "out" / "report.json"));
    EXPECT_EQ(rep["config"]["snr_db"].get<double>(), 30.0);
    EXPECT_EQ(rep["config"]["seed"], 42);
    EXPECT_EQ(rep["config"]["text"], "from config");
    EXPECT_EQ(rep["config"]["modulation"], "16qam");
    EXPECT_EQ(rep["runs"][0]["snr_db"].get<double>(), 30.0);
}

TEST_F(CliTest, UnknownConfigKeyIsAnError) {
    {
        std::ofstream cfg(dir_ / "cfg.json");
        cfg << R"({"snr": 3.0})";
    }
    EXPECT_EQ(cli("simulate --config " + (dir_ / "cfg.json").string() + " --out " + out_dir()).status, 2);
}

TEST_F(CliTest, DeepNoiseExitsNonZero) {
    const auto r = cli("simulate --snr-db -20 --out " + out_dir());
    EXPECT_EQ(r.status, 1);
    const auto rep = json::parse(slurp(dir_ / "out" / "report.json"));
    EXPECT_FALSE(rep["runs"][0]["sync"]["found"].get<bool>());
    EXPECT_FALSE(rep["summary"]["success"].get<bool>());
}

TEST_F(CliTest, NonConformingPluginFallsBackWithNote) {
    const auto r = cli("simulate --codec plugin --plugin-cmd '" + std::string(HSCRAN_STUB_PATH) +
                       " --mode echo' --out " + out_dir());
    ASSERT_EQ(r.status, 0);
    const auto rep = json::parse(slurp(dir_ / "out" / "report.json"));
    const auto notes = rep["runs"][0]["codec_notes"].dump();
    EXPECT_NE(notes.find("ProtocolViolation"), std::string::npos);
    EXPECT_NE(notes.find("fell back"), std::string::npos);
}

TEST_F(CliTest, StrictPluginFailureIsAnError) {
    const auto r = cli("simulate --codec plugin --strict-plugin --plugin-cmd '" + std::string(HSCRAN_STUB_PATH) +
                       " --mode crash' --out " + out_dir());
    EXPECT_EQ(r.status, 2);
}

TEST_F(CliTest, BadArgumentsAreRejected) {
    EXPECT_NE(cli("simulate --fading sometimes").status, 0);
    EXPECT_NE(cli("nonsense").status, 0);
    EXPECT_EQ(cli("simulate --used-subcarriers 250 --out " + out_dir()).status, 2);
}

TEST(Cli, BerCsv) {
    const auto r = cli("ber --n-bits 20000");
    ASSERT_EQ(r.status, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "snr_db,ber,n_bits,theory_ber");
    for (std::size_t i = 1; i < l.size(); ++i) EXPECT_NE(l[i].find(",20000,"), std::string::npos) << l[i];
    EXPECT_EQ(cli("ber --n-bits 20000").out, r.out);
}

TEST(Cli, SweepCsvIsDeterministic) {
    const std::string args = "sweep --snr-db 0,20 --trials 2";
    const auto a = cli(args);
    ASSERT_EQ(a.status, 0);
    const auto l = lines(a.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "snr_db,psnr_db,ms_ssim,text_ok_rate");
    EXPECT_EQ(l[1].substr(0, 5), "0.00,");
    EXPECT_EQ(l[2].substr(0, 6), "20.00,");
    EXPECT_EQ(cli(args).out, a.out);
}
