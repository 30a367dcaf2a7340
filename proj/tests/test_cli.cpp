#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdmt/cli.hpp"
#include "sdmt/errors.hpp"

using namespace sdmt;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sdmt_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("grid parsing") {
    CHECK(parse_grid("5") == std::vector<double>{5.0});
    CHECK(parse_grid("0.5,1,1.5") == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(parse_grid("0:5:30") == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
    const auto fine = parse_grid("0:0.1:1");
    REQUIRE(fine.size() == 11);
    CHECK(fine[3] == 0.3);
    CHECK(fine.back() == 1.0);
    CHECK(parse_grid("-10:5:0") == std::vector<double>{-10, -5, 0});
    CHECK_THROWS_AS(parse_grid(""), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:0:5"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:-1:5"), ValidationError);
    CHECK_THROWS_AS(parse_grid("5:1:0"), ValidationError);
    CHECK_THROWS_AS(parse_grid("1:2"), ValidationError);
    CHECK_THROWS_AS(parse_grid("a,b"), ValidationError);
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run({}).status == kExitUsage);
    CHECK(run({"bogus"}).status == kExitUsage);
    CHECK(run({"gain"}).status == kExitUsage);
    CHECK(run({"gain", "--config", "4,2"}).status == kExitUsage);
    CHECK(run({"gain", "--config", "4,2,1", "--trials", "10"}).status == kExitUsage);
    CHECK(run({"outage-curve", "--config", "4,2,1", "--trials", "999"}).status == kExitUsage);
    CHECK(run({"outage-curve", "--config", "4,2,1", "--rs", "3"}).status == kExitUsage);
    CHECK(run({"outage-curve", "--config", "4,2,1", "--snr-db", "0:0:5"}).status == kExitUsage);
    CHECK(run({"outage-curve", "--config", "4,2,1", "--alloc", "greedy"}).status == kExitUsage);
    CHECK(run({"outage-curve", "--config", "4,2,1", "--moments", "closed"}).status == kExitUsage);
    const auto huge = run({"outage-curve", "--config", "4,2,1", "--snr-db", "4000", "--trials", "1000",
                           "--gain-trials", "10000", "--out", fresh_dir("huge").string()});
    CHECK(huge.status == kExitUsage);
    CHECK(huge.err.find("out of range") != std::string::npos);
}

TEST_CASE("infeasible configuration exits with status 3") {
    const auto r = run({"gain", "--config", "2,2,2"});
    CHECK(r.status == kExitInfeasible);
    CHECK(r.err.find("infeasible") != std::string::npos);
    CHECK(run({"asymptote", "--config", "2,3,3"}).status == kExitInfeasible);
}

TEST_CASE("numerical failures map to status 4 and name the module") {
    std::ostringstream err;
    CHECK(report_failure(std::make_exception_ptr(OptimizerError("stalled")), err) == kExitNumerical);
    CHECK(err.str().find("bounds optimizer") != std::string::npos);
    err.str("");
    CHECK(report_failure(std::make_exception_ptr(QuadratureError("no convergence")), err) == kExitNumerical);
    CHECK(err.str().find("gaussian-approx") != std::string::npos);
    CHECK(report_failure(std::make_exception_ptr(NumericalDegeneracyError("pivot")), err) == kExitNumerical);
    CHECK(report_failure(std::make_exception_ptr(InfeasibleError("n_e >= n_t")), err) == kExitInfeasible);
    CHECK(report_failure(std::make_exception_ptr(DomainError("r_s")), err) == kExitUsage);
    CHECK_THROWS_AS(report_failure(std::make_exception_ptr(std::bad_alloc()), err), std::bad_alloc);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.status == kExitOk);
    CHECK(r.out.find("outage-curve") != std::string::npos);
    CHECK(run({"check", "--help"}).status == kExitOk);
}

TEST_CASE("gain is deterministic and writes a manifest") {
    const auto dir = fresh_dir("gain");
    const auto a = run({"gain", "--config", "3,2,1", "--trials", "20000", "--seed", "7", "--out", dir.string()});
    const auto b = run({"gain", "--config", "3,2,1", "--trials", "20000", "--seed", "7"});
    REQUIRE(a.status == kExitOk);
    REQUIRE(b.status == kExitOk);
    CHECK(a.out.substr(0, a.out.find("wrote")) == b.out);
    CHECK(a.out.find("std_err = ") != std::string::npos);
    CHECK(fs::exists(dir / "manifest.txt"));
    const auto c = run({"gain", "--config", "3,2,1", "--trials", "20000", "--seed", "8"});
    CHECK(c.out != b.out);
}

TEST_CASE("outage curve end to end") {
    const auto dir = fresh_dir("outage");
    const std::vector<std::string> args{"outage-curve", "--config", "4,2,1", "--rs", "0.5,1.0", "--snr-db",
                                        "0:10:20", "--trials", "5000", "--gain-trials", "20000",
                                        "--seed", "7", "--out", dir.string()};
    const auto r = run(args);
    REQUIRE(r.status == kExitOk);
    const auto csv = slurp(dir / "outage.csv");
    CHECK(csv.find("eta_db,r_s,series,value,std_err") != std::string::npos);
    CHECK(csv.find("# g = ") != std::string::npos);
    CHECK(csv.find("# seed = 7") != std::string::npos);
    for (const std::string series : {",mc,", ",upper,", ",lower,", ",naive,", ",gauss,"})
        CHECK(count(csv, series) == 6);
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(fs::exists(dir / "outage.gp"));

    REQUIRE(run(args).status == kExitOk);
    CHECK(slurp(dir / "outage.csv") == csv);

    // Reusing the manifest pins g, so the CSV is unchanged.
    auto reuse = args;
    reuse.insert(reuse.end(), {"--manifest", (dir / "manifest.txt").string()});
    const auto other = fresh_dir("outage_reuse");
    reuse[reuse.size() - 3] = other.string();
    REQUIRE(run(reuse).status == kExitOk);
    CHECK(slurp(other / "outage.csv") == csv);
}

TEST_CASE("dmt curve end to end") {
    const auto dir = fresh_dir("dmt");
    const auto r = run({"dmt-curve", "--config", "4,2,1", "--rs", "0.5:0.5:1.5", "--snr-db", "5", "--trials",
                        "20000", "--gain-trials", "20000", "--seed", "3", "--out", dir.string()});
    REQUIRE(r.status == kExitOk);
    const auto csv = slurp(dir / "dmt.csv");
    for (const std::string series : {",d_upper,", ",d_lower,", ",d_gauss,", ",d_asymptotic,", ",d_highsnr_upper,"})
        CHECK(count(csv, series) == 3);
    CHECK(count(csv, ",d_empirical,") + count(r.err, "omitted") >= 1);
    CHECK(fs::exists(dir / "dmt.gp"));
}

TEST_CASE("asymptote tables") {
    const auto r = run({"asymptote", "--config", "4,2,1"});
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("upper 5.000000, lower 6") != std::string::npos);
    const auto finite = run({"asymptote", "--config", "4,2,1", "--snr-db", "10,80", "--gain-trials", "20000"});
    REQUIRE(finite.status == kExitOk);
    CHECK(finite.out.find("low-rate maxima at finite SNR") != std::string::npos);
}
