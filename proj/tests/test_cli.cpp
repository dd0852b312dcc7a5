#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

// End-to-end checks of the installed command-line binary.

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SLM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

double json_number(const std::string& body, const std::string& key) {
    const auto pos = body.find("\"" + key + "\":");
    REQUIRE(pos != std::string::npos);
    return std::stod(body.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("defect subcommand emits m_T and n_T") {
    const auto r = run_cli("defect --model bridge:mu=0.4 --T 1");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.out, "m_T") == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(json_number(r.out, "n_T") == doctest::Approx(0.2533).epsilon(1e-3));
}

TEST_CASE("price subcommand reports a vanishing parity residual") {
    const auto r =
        run_cli("price --model cev:beta=1,sigma=1,s0=1 --T 1 --x 0 --alpha 0.5");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(json_number(r.out, "parity_residual")) <= 1e-8);
    CHECK(json_number(r.out, "call") ==
          doctest::Approx(json_number(r.out, "call_uncollateralised") +
                          0.5 * json_number(r.out, "m_T"))
              .epsilon(1e-12));
}

TEST_CASE("smile csv output is deterministic and thread-invariant") {
    const std::string args =
        "smile --model cev:beta=2.4,sigma=0.1,s0=1 --T 1 --x 0:2:0.25 --alpha 1 "
        "--format csv";
    setenv("SLM_THREADS", "1", 1);
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    setenv("SLM_THREADS", "2", 1);
    const auto c = run_cli(args);
    unsetenv("SLM_THREADS");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.rfind("x,put_iv,call_iv_alpha,wing_order1,wing_order2,residual\n", 0) ==
          0);
    int rows = 0;
    for (char ch : a.out)
        if (ch == '\n') ++rows;
    CHECK(rows == 10);  // header + 9 grid points
}

TEST_CASE("smile output feeds back into detect") {
    const auto smile = run_cli(
        "smile --model cev:beta=1,sigma=1,s0=1 --T 1 --x 2.5:12:0.5 --alpha 1 "
        "--format csv");
    REQUIRE(smile.exit_code == 0);

    // keep (x, put_iv) columns only, as the detector schema expects
    const std::string tmp = "/tmp/slm_test_quotes.csv";
    {
        std::ofstream out(tmp);
        out << "log_strike,implied_vol\n";
        std::istringstream in(smile.out);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            out << line.substr(0, c1) << ',' << line.substr(c1 + 1, c2 - c1 - 1) << '\n';
        }
    }
    const auto det = run_cli("detect --input " + tmp + " --T 1 --flat-tol 0.02");
    CHECK(det.exit_code == 0);
    CHECK(det.out.find("\"verdict\":\"StrictLocal\"") != std::string::npos);
    const double m_hat = json_number(det.out, "m_hat");
    CHECK(std::abs(m_hat - 0.317311) <= 0.1);
    std::remove(tmp.c_str());
}

TEST_CASE("classify subcommand") {
    const auto r = run_cli("classify --a 1 --b 0 --c 0 --s0 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("StrictSupermartingale") != std::string::npos);
}

TEST_CASE("dual-check subcommand reports vanishing residuals") {
    const auto r = run_cli("dual-check --sigma 1 --T 1 --x -1:2:1 --alpha 0.5");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.out, "m_T") == doctest::Approx(0.317311).epsilon(1e-5));
    CHECK(std::abs(json_number(r.out, "call_res")) <= 1e-7);
    CHECK(std::abs(json_number(r.out, "put_res")) <= 1e-7);
    CHECK(std::abs(json_number(r.out, "smile_res")) <= 1e-7);
}

TEST_CASE("smile json format carries the same fields") {
    const auto r = run_cli(
        "smile --model cev:beta=1,sigma=1,s0=1 --T 1 --x 0:1:0.5 --alpha 0.5 "
        "--format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"put_iv\":") != std::string::npos);
    CHECK(r.out.find("\"call_iv_alpha\":") != std::string::npos);
    CHECK(r.out.find("\"wing_order2\":") != std::string::npos);
}

TEST_CASE("boundary subcommand checks the sandwich") {
    const auto r = run_cli("boundary --model bridge:mu=0.4 --T 1 --alpha 0.5");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.out, "x_star") == doctest::Approx(std::log(0.7)).epsilon(1e-9));
    CHECK(r.out.find("\"sandwich_ok\":true") != std::string::npos);
}

TEST_CASE("mc subcommand is reproducible") {
    const std::string args =
        "mc --model cev:beta=1,sigma=1,s0=1 --T 1 --paths 4000 --steps 100 --seed 7 "
        "--z-levels 2,4,8";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(json_number(a.out, "defect_oracle") == doctest::Approx(0.317311).epsilon(1e-5));
    CHECK(std::abs(json_number(a.out, "pi_hat") - 0.3173) < 0.25);
}

TEST_CASE("exit codes distinguish parse, domain and data errors") {
    CHECK(run_cli("defect --model cev:beta=1 --bogus 1").exit_code == 2);   // unknown flag
    CHECK(run_cli("defect --model nosuch:a=1 --T 1").exit_code == 2);       // bad grammar
    CHECK(run_cli("defect --model cev:beta=1,zeta=2 --T 1").exit_code == 2);
    CHECK(run_cli("mc --model bridge:mu=0.4 --T 1").exit_code == 3);        // Dirac sup
    CHECK(run_cli("boundary --model bridge:mu=0.4 --T 1 --alpha 2").exit_code == 3);
    CHECK(run_cli("defect --model bridge:mu=1 --T 1").exit_code == 3);      // mu = 1
    const auto missing = run_cli("detect --input /nonexistent.csv --T 1");
    CHECK(missing.exit_code == 3);
}
