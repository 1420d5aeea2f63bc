// SPDX-License-Identifier: Apache-2.0
//
// hris-sim: link-level simulation and optimization for hybrid RIS assisted MIMO
// Copyright (C) 2026 The hris-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Drives the hris-bench executable and checks its exit codes and outputs.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace
{

const fs::path work = fs::temp_directory_path() / ("hris_cli_" + std::to_string(::getpid()));

int run(const std::string &args)
{
    const std::string cmd = std::string("\"") + HRIS_BENCH_EXE + "\" " + args + " >\"" + (work / "stdout.txt").string() +
                            "\" 2>\"" + (work / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string read(const fs::path &p)
{
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), {}};
}

void write(const fs::path &p, const std::string &body)
{
    std::ofstream os(p);
    os << body;
}

const char *tiny_config = R"({
  "episodes": 2, "steps_per_episode": 32, "eval_channels": 4,
  "system": {"n_ris": 8, "n_active": 2},
  "ppo": {"batch_len": 32, "minibatch_size": 16, "epochs_per_update": 1, "hidden": [16]},
  "ao": {"restarts": 1},
  "sweep_k": {"k_values": [0, 1], "modes": ["passive", "dynamic"]},
  "bench_runtime": {"n_values": [4, 8], "trials": 100, "warmup": 1}
})";

struct Workspace
{
    Workspace()
    {
        fs::remove_all(work);
        fs::create_directories(work);
        write(work / "tiny.json", tiny_config);
    }
    ~Workspace() { fs::remove_all(work); }
};

} // namespace

TEST_CASE("usage errors exit with code 2", "[cli]")
{
    Workspace ws;
    CHECK(run("") == 2);
    CHECK(run("fly") == 2);
    CHECK(run("train --bogus") == 2);
    CHECK(run("train --profile laptop") == 2);
    CHECK(run("train --seed minus-one") == 2);
    CHECK(run("train --config \"" + (work / "absent.json").string() + "\"") == 2);
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
}

TEST_CASE("config errors exit with code 2 and name the key", "[cli]")
{
    Workspace ws;
    write(work / "bad.json", R"({"ppo": {"gama": 0.9}})");
    CHECK(run("train --config \"" + (work / "bad.json").string() + "\"") == 2);
    CHECK(read(work / "stderr.txt").find("ppo.gama") != std::string::npos);
}

TEST_CASE("numeric failures exit with code 3", "[cli]")
{
    Workspace ws;
    // a^2 overflows, so the noise covariance is not positive definite.
    write(work / "overflow.json", R"({"episodes": 1, "steps_per_episode": 8, "system": {"amp_factor": 1e200},
        "ppo": {"batch_len": 8, "minibatch_size": 8, "hidden": [8]}})");
    CHECK(run("train --config \"" + (work / "overflow.json").string() + "\" --out \"" + (work / "o").string() +
              "\"") == 3);
}

TEST_CASE("missing artifacts exit with code 4", "[cli]")
{
    Workspace ws;
    const std::string common = "--config \"" + (work / "tiny.json").string() + "\" --out \"" + (work / "o").string() + "\"";
    CHECK(run("evaluate " + common) == 4);
    write(work / "junk.ckpt", "junk");
    CHECK(run("evaluate " + common + " --checkpoint \"" + (work / "junk.ckpt").string() + "\"") == 4);
    CHECK(run("plot \"" + (work / "none.csv").string() + "\"") == 4);
}

TEST_CASE("every subcommand runs end to end", "[cli]")
{
    Workspace ws;
    const fs::path out = work / "o";
    const std::string common = "--config \"" + (work / "tiny.json").string() + "\" --out \"" + out.string() + "\"";

    REQUIRE(run("train " + common + " --seed 3") == 0);
    CHECK(fs::exists(out / "reward_dynamic.csv"));
    CHECK(fs::exists(out / "checkpoints" / "dynamic_N8_K2_seed3.ckpt"));
    CHECK(read(out / "reward_dynamic.csv").find("# seed=3\n") != std::string::npos);
    CHECK(read(work / "stderr.txt").find("episode 2/2") != std::string::npos);

    REQUIRE(run("train " + common + " --seed 3 --mode passive") == 0);
    CHECK(fs::exists(out / "reward_passive.csv"));

    REQUIRE(run("evaluate " + common + " --seed 3") == 0);
    CHECK(fs::exists(out / "se_dynamic.csv"));

    REQUIRE(run("sweep-k " + common) == 0);
    CHECK(fs::exists(out / "se_vs_k.csv"));

    REQUIRE(run("bench-runtime " + common) == 0);
    CHECK(fs::exists(out / "runtime_vs_n.csv"));

    REQUIRE(run("plot \"" + (out / "reward_dynamic.csv").string() + "\" \"" + (out / "se_vs_k.csv").string() +
                "\" \"" + (out / "runtime_vs_n.csv").string() + "\" --out \"" + (work / "svg").string() + "\"") == 0);
    for (const char *name : {"reward_dynamic.svg", "se_vs_k.svg", "runtime_vs_n.svg"})
        CHECK(fs::exists(work / "svg" / name));
}
