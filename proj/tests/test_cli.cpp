/**
 * Copyright 2026 The MQSVIS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mqs/cli.hpp"
#include "mqs/tiling.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "mqsvis");
    const int code = mqs::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct CwdGuard {
    fs::path saved = fs::current_path();
    fs::path dir;
    explicit CwdGuard(const std::string& name) : dir(fs::temp_directory_path() / ("mqsvis_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        fs::current_path(dir);
    }
    ~CwdGuard() {
        fs::current_path(saved);
        fs::remove_all(dir);
    }
};

std::string value_of(const std::string& report, const std::string& label) {
    const auto pos = report.find(label + "=");
    REQUIRE(pos != std::string::npos);
    const auto start = pos + label.size() + 1;
    return report.substr(start, report.find('\n', start) - start);
}

}  // namespace

TEST_CASE("norm") {
    CHECK(run({"norm", "5", "0"}).out == "1\n");
    CHECK(run({"norm", "5", "1"}).out == "1\n");
    const Run r = run({"norm", "5", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1.0285714285714287\n");
    CHECK(std::stod(r.out) == doctest::Approx(36.0 / 35.0).epsilon(1e-15));
    CHECK(std::stod(run({"norm", "5", "2", "--strategy", "tail"}).out) == doctest::Approx(36.0 / 35.0).epsilon(1e-14));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"norm", "5"}).code == 2);
    CHECK(run({"norm", "5", "2", "3"}).code == 2);
    CHECK(run({"norm", "-5", "2"}).code == 2);
    CHECK(run({"norm", "5", "2.5"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"tile", "5", "2", "0", "1", "10", "0", "0", "1", "a"}).code == 2);
    CHECK(run({"tile", "5", "2", "1.5", "1", "10", "0", "0", "1", "a", "b"}).code == 2);
    CHECK(run({"gather", "5", "2", "0", "0"}).code == 2);
    CHECK(run({"norm", "--help"}).code == 0);
}

TEST_CASE("program name selects the subcommand") {
    std::ostringstream out, err;
    CHECK(mqs::cli::run({"/usr/bin/mqsvis_norm", "5", "2"}, out, err) == 0);
    CHECK(out.str() == "1.0285714285714287\n");
}

TEST_CASE("computation errors exit with 1") {
    CwdGuard cwd("errors");
    const Run r = run({"gather", "5", "2", "0", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("(0,0)") != std::string::npos);
    // |N|^2 below 1 cannot come from any preselection
    CHECK(run({"tile", "5", "2", "0", "0.5", "10", "0", "0", "1", "/dev/null", "/dev/null"}).code == 1);
}

TEST_CASE("session pipeline") {
    CwdGuard cwd("session");
    const std::string n2 = run({"norm", "5", "2"}).out.substr(0, 18);
    struct Step {
        const char *x, *y, *p1, *p2;
    };
    for (const Step& s : {Step{"0", "0", "plot-0,0.txt", "/dev/null"}, Step{"1", "0", "plot-1,0.txt", "plot-0,1.txt"},
                          Step{"1", "1", "plot-1,1.txt", "/dev/null"}}) {
        const Run r = run({"tile", "5", "2", "0", n2, "10", s.x, s.y, "1", s.p1, s.p2});
        REQUIRE(r.code == 0);
        std::ofstream(std::string("M5_Dth2_r0-") + s.x + "," + s.y + ".txt") << r.out;
    }
    CHECK(fs::exists("plot-0,1.txt"));
    const Run g = run({"gather", "5", "2", "0", "2"});
    REQUIRE(g.code == 0);
    CHECK(value_of(g.out, "simple visibility computed from the overlap") == "1.000");
    CHECK(g.out.find("visibility with Gaussian blur (3sigma=1.5)=") != std::string::npos);
    CHECK(g.out.find("maximal value=") != std::string::npos);
    CHECK(g.out.rfind("total probability sum=", 0) == 0);

    const Run full = run({"gather", "5", "2", "0", "2", "--full"});
    const auto report = mqs::discover_and_gather({2, 10, "5", "2", "0"}, ".");
    CHECK(std::stod(value_of(full.out, "total probability sum")) == report.total_prob);
    CHECK(std::stod(value_of(full.out, "mean k")) == report.mean_k);
}

TEST_CASE("blur is off by default for the beam splitter") {
    CwdGuard cwd("bsblur");
    const std::string n2 = run({"norm", "5", "0"}).out;
    const Run plain = run({"tile", "5", "0", "0.1", "1", "6", "0", "0", "2", "/dev/null", "/dev/null"});
    REQUIRE(plain.code == 0);
    CHECK(plain.out.find("blur_overlap") == std::string::npos);
    const Run forced = run({"tile", "5", "0", "0.1", "1", "6", "0", "0", "2", "/dev/null", "/dev/null", "--blur",
                            "--three-sigma", "1.5"});
    CHECK(forced.out.find("blur_overlap_3sigma_1.5=") != std::string::npos);
    const Run th = run({"tile", "5", "0", "0", "1", "6", "0", "0", "2", "/dev/null", "/dev/null", "--no-blur"});
    CHECK(th.out.find("blur_overlap") == std::string::npos);
}

TEST_CASE("thread count does not change tile output") {
    CwdGuard cwd("threads");
    const std::vector<std::string> base = {"tile", "5", "2", "0.1", "1.9285087291524403", "8", "1", "0", "1",
                                           "/dev/null", "/dev/null"};
    auto with = [&](const char* t) {
        auto args = base;
        args.insert(args.end(), {"--threads", t});
        return run(args).out;
    };
    const std::string one = with("1");
    CHECK(with("3") == one);
    CHECK(with("8") == one);
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("MQSVIS_BIN");
    if (bin == nullptr) return;
    const std::string cmd = std::string(bin) + " norm 5 > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
