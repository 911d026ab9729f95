// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const auto log = fixtures::scratch_dir("cli-log") / "out.txt";
    const std::string cmd = std::string(SGRECON_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = sgrecon::read_file(log);
    return r;
}

const fs::path& dataset()
{
    static const auto dir = [] {
        const auto d = fixtures::scratch_dir("cli") / "dataset";
        const auto r = run("generate --out " + d.string() + " --threads 1");
        REQUIRE(r.code == 0);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("generate prints the manifest")
{
    const auto dir = fixtures::scratch_dir("cli-gen") / "d";
    const auto r = run("generate --out " + dir.string() + " --seed 42 --threads 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("42 files") != std::string::npos);
    CHECK(r.out.find("node11_test.csv") != std::string::npos);
    CHECK(sgrecon::read_file(dir / sgrecon::kDigestFile) == sgrecon::read_file(dataset() / sgrecon::kDigestFile));
}

TEST_CASE("malformed config exits 2 with the field name")
{
    const auto dir = fixtures::scratch_dir("cli-badcfg");
    sgrecon::write_file(dir / "bad.json", R"({"attack": {"group_max": 0}})");
    auto r = run("generate --config " + (dir / "bad.json").string() + " --out " + (dir / "out").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("group_max") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
    sgrecon::write_file(dir / "broken.json", "{ nope");
    r = run("generate --config " + (dir / "broken.json").string() + " --out " + (dir / "out").string());
    CHECK(r.code == 2);
    r = run("generate --config " + (dir / "missing.json").string() + " --out " + (dir / "out").string());
    CHECK(r.code == 3);
}

TEST_CASE("usage errors exit 2")
{
    CHECK(run("").code == 2);
    CHECK(run("validate").code == 2);
    CHECK(run("frobnicate --in x").code == 2);
}

TEST_CASE("validate: clean, truncated and corrupted datasets")
{
    auto r = run("validate --in " + dataset().string() + " --out " + (fixtures::scratch_dir("cli-rep")).string());
    CHECK(r.code == 0);
    CHECK(r.out.find("validation passed") != std::string::npos);

    const auto trunc = fixtures::scratch_dir("cli-trunc") / "d";
    fixtures::copy_dataset(dataset(), trunc);
    fixtures::truncate_csv(trunc / "node7_test.csv", 10);
    r = run("validate --in " + trunc.string());
    CHECK(r.code == 3);
    CHECK(r.out.find("node7_test.csv") != std::string::npos);

    const auto leak = fixtures::scratch_dir("cli-leak") / "d";
    fixtures::copy_dataset(dataset(), leak);
    fixtures::corrupt_normalization(leak);
    r = run("validate --in " + leak.string() + " --out " + fixtures::scratch_dir("cli-leak-rep").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL standardization") != std::string::npos);
}

TEST_CASE("baseline prints the macro row")
{
    const auto out = fixtures::scratch_dir("cli-base");
    auto r = run("baseline --in " + dataset().string() + " --out " + out.string() + " --train-seed 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("model,Precision,Recall,F1,Accuracy") != std::string::npos);
    CHECK(fs::exists(out / "baseline_test_metrics.csv"));
    const auto again = run("baseline --in " + dataset().string() + " --out " + out.string() + " --train-seed 3 --seed 999");
    CHECK(again.out == r.out);

    const auto no_train = fixtures::scratch_dir("cli-notrain") / "d";
    fixtures::copy_dataset(dataset(), no_train);
    for (int i = 0; i < 12; ++i) {
        fs::remove(no_train / sgrecon::node_file_name(i, sgrecon::Split::Train));
    }
    r = run("baseline --in " + no_train.string());
    CHECK(r.code == 3);
}
