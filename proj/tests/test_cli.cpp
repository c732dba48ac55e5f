#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "levyqs/report.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(QS_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[512];
    while (fgets(buf, sizeof buf, p)) out += buf;
    const int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::string write_tmp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kBrownianJson =
    R"({"kind":"LinearBrownian","drift":-1.0,"sigma":1.0,"jump_rate":0.0,"jump_param":1.0})";
const std::string kMm1Json =
    R"({"kind":"SpectrallyPositiveCP","drift":-1.0,"sigma":0.0,"jump_rate":1.0,"jump_param":2.0})";
const std::string kUnstableJson =
    R"({"kind":"SpectrallyPositiveCP","drift":-1.0,"sigma":0.0,"jump_rate":2.0,"jump_param":1.0})";

} // namespace

TEST_CASE("analyze") {
    const std::string model = write_tmp("b.json", kBrownianJson);
    const RunResult r = run("analyze --model " + model);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("-0.5") != std::string::npos);   // zeta*
    CHECK(r.out.find("theta*") != std::string::npos);

    const std::string bad = write_tmp("unstable.json", kUnstableJson);
    const RunResult r2 = run("analyze --model " + bad);
    CHECK(r2.exit_code == 2);
    CHECK(r2.out.find("E X(1)") != std::string::npos);

    const std::string garbage = write_tmp("garbage.json", "{nope");
    CHECK(run("analyze --model " + garbage).exit_code == 1);
}

TEST_CASE("analyze --json reports the M/M/1 fingerprint") {
    const std::string model = write_tmp("m.json", kMm1Json);
    const RunResult r = run("analyze --json --model " + model);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("theta_star") != std::string::npos);
    CHECK(r.out.find("-0.5857864376") != std::string::npos);
}

TEST_CASE("density closed form and byte-identical reruns") {
    const std::string model = write_tmp("b2.json", kBrownianJson);
    const RunResult r = run("density --model " + model +
                            " --marginal QS_right --method closed_form --grid 0:10:101 "
                            "--out /tmp/qsr.csv");
    CHECK(r.exit_code == 0);
    const std::string first = slurp("/tmp/qsr.csv");
    CHECK(first.rfind("x,f\n", 0) == 0);
    // f(1) = 1*e^{-1}
    CHECK(first.find("0.36787944117144233") != std::string::npos);
    run("density --model " + model +
        " --marginal QS_right --method closed_form --grid 0:10:101 --out /tmp/qsr.csv");
    CHECK(slurp("/tmp/qsr.csv") == first);
    // manifest digest matches the file
    const std::string man = slurp("/tmp/qsr.csv.manifest.json");
    CHECK(man.find(levyqs::sha256_hex(first)) != std::string::npos);
}

TEST_CASE("density error paths") {
    const std::string model = write_tmp("m2.json", kMm1Json);
    // stationary law of CP input has an atom: no closed-form density table
    CHECK(run("density --model " + model +
              " --marginal stationary --method closed_form --grid 0:10:11 --out /tmp/x.csv")
              .exit_code == 3);
    CHECK(run("density --model " + model +
              " --marginal QS_left --method closed_form --grid -1:10:11 --out /tmp/x.csv")
              .exit_code == 1);
}

TEST_CASE("density inversion agrees with closed form") {
    const std::string model = write_tmp("b3.json", kBrownianJson);
    CHECK(run("density --model " + model +
              " --marginal QS_right --method closed_form --grid 0.1:8:80 --out /tmp/cf.csv")
              .exit_code == 0);
    CHECK(run("density --model " + model +
              " --marginal QS_right --method inversion --grid 0.1:8:80 --out /tmp/inv.csv")
              .exit_code == 0);
    std::ifstream a("/tmp/cf.csv"), b("/tmp/inv.csv");
    std::string la, lb;
    std::getline(a, la);
    std::getline(b, lb);
    while (std::getline(a, la) && std::getline(b, lb)) {
        const double fa = std::strtod(la.substr(la.find(',') + 1).c_str(), nullptr);
        const double fb = std::strtod(lb.substr(lb.find(',') + 1).c_str(), nullptr);
        CHECK(std::abs(fa - fb) < 1e-6);
    }
}

TEST_CASE("simulate writes pairs, summary, and manifest") {
    const std::string model = write_tmp("m3.json", kMm1Json);
    const RunResult r = run("simulate --model " + model +
                            " --t 2 --paths 20000 --seed 9 --out /tmp/pairs.csv "
                            "--summary /tmp/summary.json");
    CHECK(r.exit_code == 0);
    const std::string pairs = slurp("/tmp/pairs.csv");
    CHECK(pairs.rfind("path_index,q0,qt", 0) == 0);
    const std::string summary = slurp("/tmp/summary.json");
    CHECK(summary.find("survival_estimate") != std::string::npos);
    CHECK(summary.find("splitmix64") != std::string::npos);
    // rerun is byte-identical
    run("simulate --model " + model +
        " --t 2 --paths 20000 --seed 9 --out /tmp/pairs2.csv --summary /tmp/summary2.json");
    CHECK(slurp("/tmp/pairs2.csv") == pairs);
}

TEST_CASE("verify guards against underpowered runs") {
    const std::string model = write_tmp("m4.json", kMm1Json);
    const RunResult r = run("verify --model " + model + " --t 10 --paths 100 --seed 4");
    CHECK(r.exit_code == 5);
}

TEST_CASE("transform and tail surfaces") {
    const std::string model = write_tmp("b4.json", kBrownianJson);
    const RunResult r = run("transform --model " + model + " --vt 1 --alpha 0 --beta 0 --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("master_sp") != std::string::npos);
    CHECK(r.out.find("master_sn") != std::string::npos);
    CHECK(r.out.find("0.26794919243112") != std::string::npos);  // 2 - sqrt(3)

    const RunResult t = run("tail --model " + model + " --t 8 --json");
    CHECK(t.exit_code == 0);
    CHECK(t.out.find("0.0012916865846") != std::string::npos);
    CHECK(t.out.find("0.0007656441212") != std::string::npos);
}
