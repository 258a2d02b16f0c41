// Drives the installed command line binary end to end: exit codes, report
// shapes, artifact determinism and the ANSI toggle. Each case shells out to
// OPENBOOK_CLI_PATH with artifacts kept in a per-run scratch directory.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "openbook/io.hpp"
#include "openbook/random_front.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace openbook;
using nlohmann::json;

namespace {

struct RunResult {
    int exit = 0;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("openbook-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string drain(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
    fs::path olog = scratch_dir() / "run.out", elog = scratch_dir() / "run.err";
    std::string cmd = env + (env.empty() ? "" : " ") + OPENBOOK_CLI_PATH + " " + args +
                      " > " + olog.string() + " 2> " + elog.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit = WEXITSTATUS(rc);
    r.out = drain(olog);
    r.err = drain(elog);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

fs::path samples() { return fs::path(OPENBOOK_SAMPLES_DIR); }

} // namespace

TEST_CASE("validate accepts exported builtins and reports mutations") {
    RunResult ok = run("validate " + (samples() / "ex_2_1_a.morse").string());
    CHECK(ok.exit == 0);
    CHECK(json::parse(ok.out)["ok"] == true);

    fs::path trunc = scratch_dir() / "trunc.morse";
    spit(trunc, "tori 2\nedge 0 a 1 0 1/4\n");
    RunResult bad = run("validate " + trunc.string());
    CHECK(bad.exit == 2);
    CHECK(bad.err.find("parse error") != std::string::npos);
    CHECK(bad.err.find("line 2") != std::string::npos);

    // drop one label pairing: axiom (ii) must be the verdict, exit code 1
    std::string text = slurp(samples() / "ex_2_1_a.morse");
    auto at = text.find("edge 0 a");
    REQUIRE(at != std::string::npos);
    fs::path mut = scratch_dir() / "mut.morse";
    spit(mut, text.replace(at, 8, "edge 0 c"));
    RunResult m = run("validate " + mut.string());
    CHECK(m.exit == 1);
    CHECK(m.out.find("axiom(ii)") != std::string::npos);
}

TEST_CASE("pipeline emits validated artifacts with zero slack") {
    fs::path out = scratch_dir() / "pipe";
    RunResult r = run("pipeline " + (samples() / "knot.front").string() + " --out " +
                      out.string() + " --svg");
    REQUIRE(r.exit == 0);
    json manifest = json::parse(r.out);
    CHECK(manifest["report"]["bennequin_slack"] == 0);
    CHECK(manifest["report"]["is_sqp"] == true);
    CHECK(manifest["epsilon"].get<std::string>() == "1/72");

    for (const char* name : {"knot.arc", "knot.bsurf", "knot.report.json"})
        CHECK(fs::exists(out / name));
    RunResult v = run("validate " + (out / "knot.arc").string() + " --morse " +
                      (samples() / "ex_2_1_b.morse").string());
    CHECK(v.exit == 0);

    // a second run reproduces every artifact byte for byte
    fs::path out2 = scratch_dir() / "pipe2";
    run("pipeline " + (samples() / "knot.front").string() + " --out " + out2.string() +
        " --svg");
    for (const auto& e : fs::directory_iterator(out))
        CHECK(slurp(e.path()) == slurp(out2 / e.path().filename()));
}

TEST_CASE("twenty generated fronts all report zero slack through the binary") {
    fs::path dir = scratch_dir() / "sweep";
    fs::create_directories(dir);
    int done = 0;
    for (std::uint64_t seed = 1; done < 20 && seed <= 100; ++seed) {
        MorseDiagram d = builtin_diagram("ex_2_1_b");
        GraphFront f;
        try {
            f = random_graph_front(d, seed, 2);
        } catch (const PreconditionError&) {
            continue;
        }
        fs::path front = dir / ("s" + std::to_string(seed) + ".front");
        spit(front, write_front(f, "builtin:ex_2_1_b"));
        RunResult r = run("pipeline " + front.string() + " --out " + dir.string());
        if (r.exit == 3) continue; // degenerate heights refused honestly
        REQUIRE(r.exit == 0);
        json rep = json::parse(r.out)["report"];
        CHECK(rep["bennequin_slack"] == 0);
        CHECK(rep["is_sqp"] == true);
        ++done;
    }
    CHECK(done == 20);
}

TEST_CASE("empty fronts produce a vacuous report") {
    fs::path front = scratch_dir() / "empty.front";
    spit(front, write_front(GraphFront{}, "builtin:disk_identity"));
    RunResult r = run("pipeline " + front.string() + " --out " +
                      (scratch_dir() / "empty").string());
    REQUIRE(r.exit == 0);
    json rep = json::parse(r.out)["report"];
    CHECK(rep["euler_char"] == 0);
    CHECK(rep["boundary_components"] == 0);
    CHECK(rep["bennequin_slack"] == 0);
}

TEST_CASE("render is deterministic and refuses surfaces") {
    fs::path a = scratch_dir() / "ra", b = scratch_dir() / "rb";
    REQUIRE(run("render " + (samples() / "ex_2_1_b.morse").string() + " --out " +
                a.string())
                .exit == 0);
    REQUIRE(run("render " + (samples() / "ex_2_1_b.morse").string() + " --out " +
                b.string())
                .exit == 0);
    CHECK(slurp(a / "ex_2_1_b.0.svg") == slurp(b / "ex_2_1_b.0.svg"));

    RunResult s = run("render " + (samples() / "trefoil.bsurf").string() + " --out " +
                      a.string());
    CHECK(s.exit == 3);
    CHECK(s.err.find("Unrenderable") != std::string::npos);
}

TEST_CASE("cable and satellite subcommands mirror the library verdicts") {
    fs::path annulus = scratch_dir() / "annulus.bsurf";
    BennequinSurface s;
    s.disks.push_back({0, Rat(1, 3)});
    s.disks.push_back({0, Rat(2, 3)});
    s.bands.push_back({Rat(1, 3), 0, 1, 1});
    s.bands.push_back({Rat(2, 3), 0, 1, 1});
    spit(annulus, write_bsurf(s));

    RunResult pos = run("cable " + annulus.string() + " -p 2 -q 3");
    REQUIRE(pos.exit == 0);
    json jp = json::parse(pos.out);
    CHECK(jp["euler_char"] == -3);
    CHECK(jp["is_sqp"] == true);
    CHECK(jp["bennequin_slack"] == 0);

    RunResult neg = run("cable " + annulus.string() + " -p 3 -q -2");
    REQUIRE(neg.exit == 0);
    json jn = json::parse(neg.out);
    CHECK(jn["euler_char"] == -4);
    CHECK(jn["is_sqp"] == false);
    CHECK(jn["bennequin_slack"] == 8);

    // the one-strand empty pattern hands the companion straight back
    fs::path echo = scratch_dir() / "echo.bsurf";
    RunResult sat = run("satellite " + annulus.string() + " --out " + echo.string());
    REQUIRE(sat.exit == 0);
    CHECK(json::parse(sat.out)["euler_char"] == 0);
    CHECK(slurp(echo) == slurp(annulus));

    RunResult flip = run("satellite " + annulus.string() +
                         " --strands 2 --band 1/2,0,1,-1");
    CHECK(flip.exit == 3);
    CHECK(flip.err.find("NegativePatternBand") != std::string::npos);
}

TEST_CASE("stabilize and gen round out the toolbox") {
    fs::path tre = samples() / "trefoil.bsurf";
    fs::path up = scratch_dir() / "up.bsurf";
    REQUIRE(run("stabilize " + tre.string() + " --out " + up.string()).exit == 0);
    BennequinSurface s0 = read_bsurf(slurp(tre));
    BennequinSurface s1 = read_bsurf(slurp(up));
    CHECK(s1.disks.size() == s0.disks.size() + 1);
    fs::path down = scratch_dir() / "down.bsurf";
    REQUIRE(run("stabilize " + up.string() + " --undo --out " + down.string()).exit == 0);
    CHECK(slurp(down) == slurp(tre));

    fs::path g1 = scratch_dir() / "g1.front", g2 = scratch_dir() / "g2.front";
    REQUIRE(run("gen ex_2_1_c --seed 9 --size 3 --out " + g1.string()).exit == 0);
    REQUIRE(run("gen ex_2_1_c --seed 9 --size 3 --out " + g2.string()).exit == 0);
    CHECK(slurp(g1) == slurp(g2));
    CHECK(run("validate " + g1.string()).exit == 0);
    CHECK(run("gen no_such_diagram").exit == 3);
}

TEST_CASE("the ANSI toggle only fires when the variable is set") {
    std::string bad = "render " + (samples() / "trefoil.bsurf").string();
    RunResult plain = run(bad);
    CHECK(plain.err.find('\033') == std::string::npos);
    RunResult colored = run(bad, "OPENBOOK_RIBBONS_COLOR=1");
    CHECK(colored.err.find("\033[31m") != std::string::npos);
    RunResult off = run(bad, "OPENBOOK_RIBBONS_COLOR=0");
    CHECK(off.err.find('\033') == std::string::npos);
}
