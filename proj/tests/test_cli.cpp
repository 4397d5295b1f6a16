#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "linkmirage/report.hpp"
#include "support.hpp"

using linkmirage::read_text;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(LINKMIRAGE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("full pipeline and exit codes") {
    testing::TempDir dir;
    const auto in = dir.path() / "in";
    REQUIRE(run("generate --out " + q(in) + " --vertices 80 --groups 4 --p-in 0.25 --p-out 0.01 --snapshots 3") == 0);
    const auto manifest = in / "manifest.txt";

    const auto out = [&](const std::string& name) { return dir.path() / name; };
    const std::string common = "--manifest " + q(manifest) + " --seed 5 --k 2";
    const std::string metrics = " --metric ud,modularity,structural,spectral,anti-aggregation,pagerank --l 1,3";

    for (const auto& [name, threads] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 4}}) {
        const std::string args = common + " --out " + q(out(name)) + " --threads " + std::to_string(threads);
        REQUIRE(run("perturb " + args) == 0);
        REQUIRE(run("metrics " + args + metrics) == 0);
        REQUIRE(run("eval " + args) == 0);
        REQUIRE(run("report " + args) == 0);
    }
    for (const char* file : {"g_prime_0.txt", "g_prime_1.txt", "g_prime_2.txt", "metrics.csv", "eval.csv",
                             "report.csv", "record.json"}) {
        CAPTURE(file);
        const auto a = read_text(out("a") / file);
        CHECK_FALSE(a.empty());
        CHECK(a == read_text(out("b") / file));
        CHECK(a == read_text(out("c") / file));
    }

    SUBCASE("config files are read and flags override them") {
        const auto cfg = dir.write("run.cfg", "manifest = " + manifest.string() + "\nseed = 5\nk = 9\n");
        REQUIRE(run("perturb --config " + q(cfg) + " --k 2 --out " + q(out("d"))) == 0);
        CHECK(read_text(out("d") / "g_prime_1.txt") == read_text(out("a") / "g_prime_1.txt"));
    }
    SUBCASE("configuration errors exit 2") {
        CHECK(run("perturb --out " + q(out("e"))) == 2);
        CHECK(run("perturb " + common + " --out " + q(out("e")) + " --bogus 1") == 2);
        CHECK(run("perturb " + common + " --out " + q(out("e")) + " --k 0") == 2);
        CHECK(run("eval " + common + " --out " + q(out("a")) + " --eval sybil") == 2);
        CHECK(run("metrics " + common + " --out " + q(out("a")) + " --metric nonsense") == 2);
        CHECK(run("") == 2);
    }
    SUBCASE("unreadable input exits 3") {
        const auto bad = dir.write("bad/m.txt", "s.txt\n");
        dir.write("bad/s.txt", "1 2\nnot an edge\n");
        CHECK(run("perturb --manifest " + q(bad) + " --out " + q(out("f"))) == 3);
    }
    SUBCASE("stale or missing artifacts exit 4") {
        CHECK(run("metrics --manifest " + q(manifest) + " --seed 6 --k 2 --out " + q(out("a")) + " --metric ud") == 4);
        CHECK(run("metrics " + common + " --out " + q(out("never")) + " --metric ud") == 4);
        CHECK(run("report " + common + " --out " + q(out("never"))) == 4);
    }
    SUBCASE("sybil evaluation through a scenario file") {
        const auto scen = dir.write("sybil.cfg", "sybil-vertices = 30\nattack-edges = 5\nwalk-length = 6\n");
        REQUIRE(run("eval " + common + " --out " + q(out("a")) + " --eval sybil --sybil-config " + q(scen)) == 0);
        const auto text = read_text(out("a") / "eval.csv");
        CHECK(text.find("false_positive_rate") != std::string::npos);
    }
}
