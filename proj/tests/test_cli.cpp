#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coldplate/cli.hpp"
#include "coldplate/errors.hpp"
#include "coldplate/io.hpp"

using namespace coldplate;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "coldplate");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("coldplate_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::vector<std::string> small_grid() { return {"--set", "nx=22", "--set", "ny=29"}; }

    Result generate(const std::string& out, int n = 12, int seed = 4) {
        std::vector<std::string> a{"generate", "--n", std::to_string(n), "--seed", std::to_string(seed), "--out", out};
        for (const auto& s : small_grid()) a.push_back(s);
        return run_cli(a);
    }

    fs::path dir_;
};

std::vector<std::uint8_t> bytes_of(const std::string& p) { return io::read_file(p); }

}  // namespace

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli({}).code, cli::kConfig);
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kConfig);
    EXPECT_EQ(run_cli({"generate", "--n", "0", "--seed", "1", "--out", path("x.pctd")}).code, cli::kConfig);
    EXPECT_EQ(run_cli({"solve", "--mask", "ones", "--set", "nonsense=1"}).code, cli::kConfig);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, SolveAllOnes) {
    const Result r = run_cli({"solve", "--mask", "ones", "--out-field", path("f.csv"), "--out-image", path("f.ppm")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("min_celsius=25.1706"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(path("f.csv")));
    EXPECT_TRUE(fs::exists(path("f.ppm")));
}

TEST_F(CliTest, SolveWithoutChannelsIsASolverError) {
    const Result r = run_cli({"solve", "--mask", "zeros"});
    EXPECT_EQ(r.code, cli::kSolver);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, GenerateIsByteIdenticalOnRerun) {
    ASSERT_EQ(generate(path("a.pctd")).code, cli::kOk);
    std::vector<std::string> serial{"generate", "--n", "12", "--seed", "4", "--out", path("b.pctd"), "--serial"};
    for (const auto& s : small_grid()) serial.push_back(s);
    const Result r = run_cli(serial);
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(bytes_of(path("a.pctd")), bytes_of(path("b.pctd")));
    EXPECT_NE(r.out.find("sample,layout"), std::string::npos);
}

TEST_F(CliTest, TrainEvalAndDeterminism) {
    ASSERT_EQ(generate(path("d.pctd")).code, cli::kOk);
    auto train_args = [&](const std::string& tag) {
        return std::vector<std::string>{"train", "--data", path("d.pctd"), "--mode", "piml", "--epochs", "2",
                                        "--out-model", path(tag + ".pctm"), "--curves", path(tag + ".csv"),
                                        "--w2", "1e-3", "--w3", "1e-3", "--set", "channels=4", "--set", "kernel=5",
                                        "--seed", "9"};
    };
    ASSERT_EQ(run_cli(train_args("a")).code, cli::kOk);
    ASSERT_EQ(run_cli(train_args("b")).code, cli::kOk);
    EXPECT_EQ(bytes_of(path("a.pctm")), bytes_of(path("b.pctm")));
    EXPECT_EQ(bytes_of(path("a.csv")), bytes_of(path("b.csv")));

    const Result ev = run_cli({"eval", "--model", path("a.pctm"), "--data", path("d.pctd"), "--split", "test",
                               "--seed", "9", "--report", path("r.csv"), "--error-maps", path("maps")});
    ASSERT_EQ(ev.code, cli::kOk) << ev.err;
    EXPECT_NE(ev.out.find("rmse_celsius="), std::string::npos) << ev.out;
    EXPECT_TRUE(fs::exists(path("r.csv")));
    EXPECT_FALSE(fs::is_empty(path("maps")));

    auto zero = train_args("z");
    zero[6] = "0";
    EXPECT_EQ(run_cli(zero).code, cli::kConfig);
}

TEST_F(CliTest, CorruptedFilesExitFour) {
    ASSERT_EQ(generate(path("d.pctd"), 2).code, cli::kOk);
    auto bytes = bytes_of(path("d.pctd"));
    bytes[0] = 'X';
    io::write_file(path("bad.pctd"), bytes);
    const Result r = run_cli({"train", "--data", path("bad.pctd"), "--epochs", "1", "--out-model", path("m.pctm")});
    EXPECT_EQ(r.code, cli::kIo);
    EXPECT_NE(r.err.find("byte 0"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli({"eval", "--model", path("missing.pctm"), "--data", path("d.pctd")}).code, cli::kIo);
}

TEST_F(CliTest, DivergenceExitsFive) {
    ASSERT_EQ(generate(path("d.pctd"), 4).code, cli::kOk);
    const Result r = run_cli({"train", "--data", path("d.pctd"), "--mode", "piml", "--epochs", "2", "--lr", "1e300",
                              "--out-model", path("m.pctm"), "--curves", path("c.csv"), "--set", "channels=2"});
    EXPECT_EQ(r.code, cli::kDivergence) << r.err;
}

TEST_F(CliTest, CompareIsByteIdenticalOnRerun) {
    ASSERT_EQ(generate(path("d.pctd")).code, cli::kOk);
    auto args = [&](const std::string& out) {
        return std::vector<std::string>{"compare", "--data", path("d.pctd"), "--out-dir", path(out), "--epochs", "2",
                                        "--set", "channels=4", "--set", "kernel=5", "--w2", "1e-3", "--w3", "1e-3"};
    };
    const Result a = run_cli(args("a"));
    ASSERT_EQ(a.code, cli::kOk) << a.err;
    ASSERT_EQ(run_cli(args("b")).code, cli::kOk);
    for (const auto& entry : fs::recursive_directory_iterator(path("a"))) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), path("a"));
        EXPECT_EQ(bytes_of(entry.path().string()), bytes_of((fs::path(path("b")) / rel).string())) << rel;
    }
    EXPECT_TRUE(fs::exists(path("a/summary.txt")));
    EXPECT_TRUE(fs::exists(path("a/data_curves.csv")));
    EXPECT_TRUE(fs::exists(path("a/piml_curves.csv")));
}

TEST(MaskArgument, Forms) {
    const GridSpec s = grid_spec_default();
    EXPECT_EQ(cli::parse_mask_argument("ones", s).count_ones(), s.size());
    EXPECT_EQ(cli::parse_mask_argument("zeros", s).count_ones(), 0u);
    EXPECT_EQ(cli::parse_mask_argument("straight:count=2,width=10,margin=10", s).count_ones(), 4060u);
    EXPECT_THROW(cli::parse_mask_argument("wavy:count=2", s), Error);
}
