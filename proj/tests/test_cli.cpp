#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mcpde_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

const std::string kTinyConfig =
    "[model]\n"
    "s0 = 100\nstrike = 100\nv0 = 0.20\nmaturity = 0.5\nrate = 0.01\n"
    "kappa = 5.0\ntheta = 0.18\nlambda = 0.90\nrho = -0.35\n"
    "[run]\nmethod = mixing\nsteps_per_day = 2\nn_paths = 2000\nseed = 7\n";

const std::string cli = MCPDE_CLI_PATH;

}  // namespace

TEST_CASE("price command writes a CSV with one data row") {
    TempDir dir;
    const auto cfg = dir.path / "tiny.ini";
    write_file(cfg, kTinyConfig);
    const auto out = dir.path / "price.csv";
    const int rc = run(cli + " price --config " + cfg.string() + " --format csv --out " +
                       out.string() + " >/dev/null 2>&1");
    REQUIRE(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("method,scheme,") == 0);
    CHECK(body.find("\nmixing,-,2,2000,") != std::string::npos);
}

TEST_CASE("price command accepts overrides") {
    TempDir dir;
    const auto cfg = dir.path / "tiny.ini";
    write_file(cfg, kTinyConfig);
    const auto out = dir.path / "full.csv";
    const int rc = run(cli + " price --config " + cfg.string() +
                       " --method full_mc --paths 1500 --format csv --out " + out.string() +
                       " >/dev/null 2>&1");
    REQUIRE(rc == 0);
    CHECK(slurp(out).find("\nfull_mc,-,2,1500,") != std::string::npos);
}

TEST_CASE("implied-vol command inverts a known price") {
    TempDir dir;
    const auto out = dir.path / "iv.txt";
    // put price at vol 0.20, s=k=100, r=0.01, t=0.5
    const int rc = run(cli +
                       " implied-vol --price 5.3772721530958358 --spot 100 --strike 100"
                       " --rate 0.01 --maturity 0.5 > " +
                       out.string() + " 2>/dev/null");
    REQUIRE(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("implied_vol_pct 20.000000") != std::string::npos);
}

TEST_CASE("bad configs exit nonzero with a diagnostic") {
    TempDir dir;
    const auto cfg = dir.path / "bad.ini";
    write_file(cfg, "[model]\nkhappa = 1\n");
    const auto err = dir.path / "err.txt";
    const int rc = run(cli + " price --config " + cfg.string() + " 2> " + err.string() +
                       " >/dev/null");
    CHECK(rc != 0);
    CHECK(slurp(err).find("khappa") != std::string::npos);
}

TEST_CASE("table command emits rows in input order") {
    TempDir dir;
    const auto cfg = dir.path / "table.ini";
    write_file(cfg, kTinyConfig +
                        "[benchmark]\nmethod = mixing\nsteps_per_day = 2\nn_paths = 4000\n"
                        "[row]\nmethod = full_mc\nsteps_per_day = 2\nn_paths = 2000\n"
                        "[row]\nmethod = mixed\nsteps_per_day = 0.5\nn_paths = 50\nm_points = 80\n");
    const auto out = dir.path / "table.csv";
    const int rc =
        run(cli + " table --config " + cfg.string() + " --out " + out.string() + " >/dev/null 2>&1");
    REQUIRE(rc == 0);
    std::istringstream in(slurp(out));
    std::string header, l1, l2, l3;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(l1.rfind("mixing,", 0) == 0);
    CHECK(l2.rfind("full_mc,", 0) == 0);
    CHECK(l3.rfind("mixed,crank_nicolson,", 0) == 0);
    // benchmark has no abs err; dependents do
    std::string no_more;
    CHECK(!std::getline(in, no_more));
}
