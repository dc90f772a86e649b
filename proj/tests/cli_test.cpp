#include "puregauss/cli.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "puregauss/catalog.hpp"
#include "puregauss/io.hpp"
#include "puregauss/steady.hpp"

namespace puregauss {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("puregauss_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, CatalogListNamesEveryEntry) {
  const Result r = run({"catalog", "list"});
  EXPECT_EQ(r.code, cli::kOk);
  for (const char* name : {"single_opo", "cascaded_opos", "cv_cluster", "h_graph",
                           "harmonic_chain", "two_mode_squeezed"}) {
    EXPECT_TRUE(contains(r.out, name)) << name;
  }
  EXPECT_TRUE(contains(r.out, "kappa"));
}

TEST_F(CliTest, CatalogShowPrintsChainAdjacency) {
  const Result r = run({"catalog", "show", "harmonic_chain", "--set", "n=4", "--set", "r=1"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(contains(r.out, "X:"));
  const std::size_t x = r.out.find("X:");
  const std::string block = r.out.substr(x, r.out.find("Y:") - x);
  std::istringstream rows(block);
  std::string line;
  std::getline(rows, line);
  std::vector<std::vector<double>> parsed;
  while (std::getline(rows, line)) {
    std::istringstream cells(line);
    std::vector<double> row;
    double v;
    while (cells >> v) row.push_back(v);
    if (!row.empty()) parsed.push_back(row);
  }
  ASSERT_EQ(parsed.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double expected = (i + 1 == j || j + 1 == i) ? 1.0 : 0.0;
      EXPECT_EQ(parsed[i][j], expected);
    }
  }
  EXPECT_EQ(run({"catalog", "show", "nothing"}).code, cli::kError);
}

TEST_F(CliTest, AnalyzeCascadedOpos) {
  const Result r =
      run({"analyze", "--catalog", "cascaded_opos", "--set", "kappa=6.0", "--set", "eps=4.8"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "verdict: pure-unique"));
  EXPECT_TRUE(contains(r.out, "log negativity {1} | rest: 1.0986"));
}

TEST_F(CliTest, AnalyzeSingleOpoVerdicts) {
  const Result vacuum = run({"analyze", "--catalog", "single_opo", "--set", "eps=0", "--json"});
  EXPECT_EQ(vacuum.code, cli::kOk);
  const io::Json doc = io::parse(vacuum.out);
  EXPECT_EQ(doc.at("verdict"), "pure-unique");
  EXPECT_NEAR(doc.at("Vs")[0][0].get<double>(), 0.5, 1e-10);
  EXPECT_NEAR(doc.at("Vs")[1][1].get<double>(), 0.5, 1e-10);
  EXPECT_NEAR(doc.at("Vs")[0][1].get<double>(), 0.0, 1e-10);

  EXPECT_EQ(run({"analyze", "--catalog", "single_opo", "--set", "eps=1.5"}).code,
            cli::kNotPure);
  const Result boundary = run({"analyze", "--catalog", "single_opo", "--set", "eps=3"});
  EXPECT_EQ(boundary.code, cli::kNotUnique);
  EXPECT_TRUE(contains(boundary.out, "verdict: not-unique"));
}

TEST_F(CliTest, AnalyzeRejectsAsymmetricHamiltonian) {
  const std::string file =
      write("bad.json", R"({"n": 1, "m": 1, "G": [[1, 0.5], [0.2, 1]], "C": [[1, [0, 1]]]})");
  const Result r = run({"analyze", file});
  EXPECT_EQ(r.code, cli::kError);
  EXPECT_TRUE(contains(r.err, "Schema"));
  EXPECT_TRUE(contains(r.err, "G[1][0]"));
}

TEST_F(CliTest, ExportThenAnalyzeGivesIdenticalReport) {
  const std::string file = path("cascaded.json");
  const Result exported = run({"catalog", "export", "cascaded_opos", "--set", "kappa=6",
                               "--set", "eps=4.8", "-o", file});
  ASSERT_EQ(exported.code, cli::kOk) << exported.err;
  const Result from_file = run({"analyze", file, "--json"});
  const Result in_memory =
      run({"analyze", "--catalog", "cascaded_opos", "--set", "kappa=6", "--set", "eps=4.8",
           "--json"});
  EXPECT_EQ(from_file.code, cli::kOk);
  EXPECT_EQ(from_file.out, in_memory.out);
  // And against the library directly.
  const io::Json doc = io::parse(from_file.out);
  const Theorem1Report report = analyze(catalog::cascaded_opos(6.0, 4.8, -4.8));
  EXPECT_EQ(io::canonical_dump(doc.at("Vs")),
            io::canonical_dump(io::real_matrix_json(report.vs->matrix())));
}

TEST_F(CliTest, EngineerChainPurelyDissipative) {
  const std::string spec = path("chain.json");
  ASSERT_EQ(run({"catalog", "export", "harmonic_chain", "--set", "n=4", "--set", "r=1", "-o",
                 spec})
                .code,
            cli::kOk);
  const std::string out = path("sys.json");
  const Result r = run({"engineer", spec, "--purely-dissipative", "-o", out});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "support sizes: 2 3 3 2"));
  EXPECT_TRUE(contains(r.out, "L1={1,2} L2={1,2,3} L3={2,3,4} L4={3,4}"));
  EXPECT_TRUE(contains(r.out, "rank condition: holds"));
  EXPECT_EQ(run({"analyze", out}).code, cli::kOk);
}

TEST_F(CliTest, EngineerChainSingleChannelRing) {
  const std::string params = write("params.json", R"({
    "P": [[1], [0], [0], [0]],
    "R": [[0, 1, 0, -1], [1, 0, 0, 0], [0, 0, 0, 1], [-1, 0, 1, 0]],
    "Gamma": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]})");
  const Result r = run({"engineer", "--catalog", "harmonic_chain", "--set", "n=4", "--params",
                        params, "-o", path("sys.json")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "hamiltonian edges: 1-2 1-4 2-3 3-4"));
  EXPECT_TRUE(contains(r.out, "L1={1,2}"));
}

TEST_F(CliTest, EngineerRankFailureExitsFour) {
  const std::string params = write("params.json", R"({
    "P": [[1], [0], [0], [0]],
    "R": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    "Gamma": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]})");
  const Result r = run({"engineer", "--catalog", "harmonic_chain", "--set", "n=4", "--params",
                        params, "-o", path("sys.json")});
  EXPECT_EQ(r.code, cli::kRankConditionFailed);
  EXPECT_TRUE(contains(r.err, "RankConditionFailed: rank 1 < 4"));
}

TEST_F(CliTest, EngineerNeedsExactlyOneParameterSource) {
  EXPECT_EQ(run({"engineer", "--catalog", "harmonic_chain"}).code, cli::kError);
  EXPECT_EQ(run({"engineer", "--catalog", "harmonic_chain", "--purely-dissipative", "--params",
                 path("x.json")})
                .code,
            cli::kError);
  EXPECT_EQ(run({"engineer", "--catalog", "single_opo", "--purely-dissipative"}).code,
            cli::kError);
}

TEST_F(CliTest, SimulateVacuumStart) {
  const std::string csv = path("run.csv");
  const Result r = run({"simulate", "--catalog", "cascaded_opos", "--init", "vacuum",
                        "--t-final", "1", "--dt", "0.01", "-o", csv});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(slurp(csv));
  std::string header;
  std::string first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header.rfind("t,fidelity,purity,mean_q1,mean_q2,mean_p1,mean_p2,V_1_1,V_1_2", 0), 0u);
  std::istringstream cells(first);
  std::string t, fidelity, purity, rest;
  std::getline(cells, t, ',');
  std::getline(cells, fidelity, ',');
  std::getline(cells, purity, ',');
  EXPECT_EQ(std::stod(t), 0.0);
  EXPECT_NEAR(std::stod(purity), 1.0, 1e-15);
  std::getline(cells, rest);
  EXPECT_TRUE(contains(rest, "0.5"));
}

TEST_F(CliTest, SimulateConvergesFromScaledStart) {
  const std::string csv = path("run.csv");
  const Result r = run({"simulate", "--catalog", "cascaded_opos", "--set", "kappa=6", "--set",
                        "eps=4.8", "--init", "scaled:1", "-o", csv});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(slurp(csv));
  std::string line;
  std::string last;
  std::size_t rows = 0;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    if (!line.empty()) {
      last = line;
      ++rows;
    }
  }
  EXPECT_LE(rows, 2000u);
  std::istringstream cells(last);
  std::string t, fidelity, purity;
  std::getline(cells, t, ',');
  std::getline(cells, fidelity, ',');
  std::getline(cells, purity, ',');
  EXPECT_NEAR(std::stod(t), 40.0 / 0.6, 1e-9);
  EXPECT_NEAR(std::stod(fidelity), 1.0, 1e-4);
  EXPECT_NEAR(std::stod(purity), 1.0, 1e-4);
}

TEST_F(CliTest, SimulateRefusesNonHurwitz) {
  const Result r = run({"simulate", "--catalog", "single_opo", "--set", "kappa=6", "--set",
                        "eps=6", "-o", path("x.csv")});
  EXPECT_EQ(r.code, cli::kNotUnique);
  EXPECT_TRUE(contains(r.err, "NotHurwitz"));
  const Result forced = run({"simulate", "--catalog", "single_opo", "--set", "eps=6", "--force",
                             "--t-final", "0.5", "--dt", "0.01", "-o", path("x.csv")});
  EXPECT_EQ(forced.code, cli::kOk) << forced.err;
  EXPECT_TRUE(contains(slurp(path("x.csv")), ",nan,"));
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, cli::kError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kError);
  EXPECT_EQ(run({"analyze"}).code, cli::kError);
  EXPECT_EQ(run({"analyze", path("missing.json")}).code, cli::kError);
  EXPECT_EQ(run({"analyze", "--catalog", "single_opo", "--set", "eps=abc"}).code, cli::kError);
  EXPECT_EQ(run({"analyze", "--catalog", "harmonic_chain"}).code, cli::kError);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

#ifdef PUREGAUSS_CLI_PATH
int run_binary(const std::string& args, const std::string& out_file) {
  const std::string command =
      std::string("\"") + PUREGAUSS_CLI_PATH + "\" " + args + " > \"" + out_file + "\" 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string log = path("log.txt");
  EXPECT_EQ(run_binary("analyze --catalog cascaded_opos --set kappa=6.0 --set eps=4.8", log), 0);
  EXPECT_TRUE(contains(slurp(log), "1.0986"));
  EXPECT_EQ(run_binary("analyze --catalog single_opo --set eps=1.5", log), 2);
  EXPECT_EQ(run_binary("analyze --catalog single_opo --set eps=3", log), 3);
  EXPECT_EQ(run_binary("analyze --catalog nope", log), 1);
  const std::string params = write("params.json", R"({"P": [[1], [0], [0], [0]],
    "R": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
    "Gamma": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  EXPECT_EQ(run_binary("engineer --catalog harmonic_chain --set n=4 --params \"" + params +
                           "\" -o \"" + path("sys.json") + "\"",
                       log),
            4);
  EXPECT_TRUE(contains(slurp(log), "rank 1"));
}
#endif

}  // namespace
}  // namespace puregauss
