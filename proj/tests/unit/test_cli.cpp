#include "cli.hpp"
#include "detail.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
    fs::path root;
    Scratch()
    {
        std::random_device rd;
        root = fs::temp_directory_path() / ("invasion_cli_" + std::to_string(rd()));
        fs::create_directories(root);
    }
    ~Scratch() { fs::remove_all(root); }
    fs::path operator/(const std::string& name) const { return root / name; }
};

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "invasion");
    std::ostringstream o, e;
    const int code = invasion::cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

json read_json(const fs::path& p)
{
    std::ifstream in(p);
    return json::parse(in);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Every file in the directory is the manifest or listed by it, and vice versa.
void check_manifest_complete(const fs::path& dir)
{
    REQUIRE(fs::exists(dir / "manifest.json"));
    const json m = read_json(dir / "manifest.json");
    CHECK(m["status"] == "ok");
    std::set<std::string> listed, present;
    for (const auto& f : m["files"]) {
        listed.insert(f["name"].get<std::string>());
    }
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() != "manifest.json") {
            present.insert(e.path().filename().string());
        }
    }
    CHECK(listed == present);
}

std::size_t data_rows(const fs::path& p)
{
    std::ifstream in(p);
    std::size_t n = 0;
    bool header = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        ++n;
    }
    return n;
}

const std::vector<std::string> small_kpp{"--gamma", "1", "--v0", "0", "--L", "80", "--N", "800", "--t-end", "30"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& more)
{
    base.insert(base.end(), more.begin(), more.end());
    return base;
}

}  // namespace

TEST_CASE("grid and label helpers")
{
    const auto g = invasion::cli::log_grid(0.1, 1e3, 2);
    REQUIRE(g.size() == 9);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 1e3);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(invasion::cli::log_grid(1.0, 50.0, 1).size() == 3);
    CHECK(invasion::cli::detail::label(0.25) == "0.25");
    CHECK(invasion::cli::detail::label(1e5) == "100000");
    CHECK(invasion::cli::detail::label(1e11) == "1e11");
    CHECK(invasion::cli::detail::label(1e-5) == "1e-5");
    CHECK(invasion::cli::detail::label(10.0) == "10");
}

TEST_CASE("validation happens before any output")
{
    Scratch s;
    const Outcome bad = cli({"simulate", "--v0", "1.2", "--out", (s / "bad").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("v0") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "bad"));

    CHECK(cli({"sweep", "--out", (s / "sweep").string()}).code == 2);
    CHECK(cli({"reproduce", "fig9", "--out", (s / "fig").string()}).code == 2);
    CHECK(cli({"simulate", "--ic", "gaussian"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK_FALSE(fs::exists(s / "sweep"));
}

TEST_CASE("simulate, determinism and fit-speed")
{
    Scratch s;
    const Outcome r = cli(with(small_kpp, {"simulate", "--snapshots", "4", "--out", (s / "one").string()}));
    REQUIRE(r.code == 0);
    check_manifest_complete(s / "one");
    const json m = read_json(s / "one" / "manifest.json");
    CHECK(m["command"] == "simulate");
    CHECK(m["config"]["v0"] == 0.0);
    CHECK(m["files"].size() == 3);
    const double c = m["results"]["c"].get<double>();
    CHECK(std::abs(c - 2.0) < 0.1);
    CHECK(data_rows(s / "one" / "snapshots.csv") == 4 * 800);

    SUBCASE("identical configuration gives identical payloads")
    {
        REQUIRE(cli(with(small_kpp, {"simulate", "--snapshots", "4", "--out", (s / "two").string()})).code == 0);
        for (const char* f : {"front_trace.csv", "snapshots.csv", "speed_fit.csv"}) {
            CAPTURE(f);
            CHECK(slurp(s / "one" / f) == slurp(s / "two" / f));
        }
    }
    SUBCASE("refitting the written trace reproduces the speed")
    {
        const std::string trace = (s / "one" / "front_trace.csv").string();
        REQUIRE(cli({"fit-speed", "--trace", trace, "--out", (s / "fit").string()}).code == 0);
        check_manifest_complete(s / "fit");
        CHECK(read_json(s / "fit" / "manifest.json")["results"]["c"].get<double>() == c);

        REQUIRE(cli({"fit-speed", "--trace", trace, "--t-min", "20", "--out", (s / "fit2").string()}).code == 0);
        const json w = read_json(s / "fit2" / "manifest.json")["results"]["window"];
        CHECK(w[0] == 20.0);
        CHECK(w[1] == 30.0);
    }
}

TEST_CASE("config file with flag overrides")
{
    Scratch s;
    {
        std::ofstream ini(s / "run.ini");
        ini << "gamma = 3\nv0 = 0.25\nL = 40\nN = 400\nt-end = 2\n[simulate]\nsnapshots = 3\n";
    }
    const Outcome r = cli({"simulate", "--config", (s / "run.ini").string(), "--gamma", "2", "--out",
                           (s / "out").string()});
    REQUIRE(r.code == 0);
    const json cfg = read_json(s / "out" / "manifest.json")["config"];
    CHECK(cfg["gamma"] == 2.0);
    CHECK(cfg["v0"] == 0.25);
    CHECK(cfg["N"] == 400);
    CHECK(cfg["snapshots"] == 3);
    check_manifest_complete(s / "out");
}

TEST_CASE("failures leave an error record and no manifest")
{
    Scratch s;
    const Outcome r = cli({"fit-speed", "--trace", (s / "missing.csv").string(), "--out", (s / "out").string()});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(s / "out" / "manifest.json"));
    REQUIRE(fs::exists(s / "out" / "error.json"));
    const json e = read_json(s / "out" / "error.json");
    CHECK(e["status"] == "failed");
    CHECK(e["error"]["kind"] == "domain");
    CHECK(e["files"].empty());

    // Front shots need real front eigenvalues: V_inf below V_c = 0.5 at c = 1 fails.
    CHECK(cli({"tw-trajectory", "--shot", "front", "--c", "1", "--v0", "0.3", "--out", (s / "tw").string()}).code == 1);
    CHECK(fs::exists(s / "tw" / "error.json"));
}

TEST_CASE("output directory reuse")
{
    Scratch s;
    const std::vector<std::string> args{"tw-trajectory", "--gamma", "1", "--v0", "0.75", "--out", (s / "o").string()};
    REQUIRE(cli(args).code == 0);
    CHECK(cli(args).code == 2);
    CHECK(cli(with(args, {"--overwrite"})).code == 0);
    check_manifest_complete(s / "o");

    fs::create_directories(s / "foreign");
    std::ofstream(s / "foreign" / "notes.txt") << "keep";
    CHECK(cli({"tw-trajectory", "--out", (s / "foreign").string(), "--overwrite"}).code == 2);
    CHECK(fs::exists(s / "foreign" / "notes.txt"));
}

TEST_CASE("sweep: grid order, per-row failures, thread independence")
{
    Scratch s;
    const std::vector<std::string> base{"sweep", "--gammas", "1", "2", "--v0", "0.5", "--as", "0.5", "0.005",
                                        "--L", "60", "--N", "600", "--t-end", "24"};
    const Outcome one = cli(with(base, {"--threads", "1", "--out", (s / "t1").string()}));
    const Outcome two = cli(with(base, {"--threads", "2", "--out", (s / "t2").string()}));
    REQUIRE(one.code == 0);
    REQUIRE(two.code == 0);
    check_manifest_complete(s / "t1");
    CHECK(slurp(s / "t1" / "sweep.csv") == slurp(s / "t2" / "sweep.csv"));

    const json m = read_json(s / "t1" / "manifest.json");
    REQUIRE(m["runs"].size() == 4);
    // With a = 0.005, u > 1/2 on the whole domain: there is no front to track.
    CHECK(m["runs"][0]["status"] == "ok");
    CHECK(m["runs"][1]["status"] == "failed");
    CHECK(m["runs"][2]["status"] == "ok");
    CHECK(m["runs"][3]["status"] == "failed");
    CHECK(m["results"]["failed"] == 2);

    std::ifstream in(s / "t1" / "sweep.csv");
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l[0] != '#') {
            lines.push_back(l);
        }
    }
    REQUIRE(lines.size() == 5);
    CHECK(lines[1].rfind("0,1,0.5,exp,0.5,", 0) == 0);
    CHECK(lines[4].rfind("3,2,0.5,exp,0.0050000000000000001,nan,", 0) == 0);
    CHECK(lines[4].find("failed") != std::string::npos);
}

TEST_CASE("travelling-wave and asymptotics commands")
{
    Scratch s;
    REQUIRE(cli({"tw-trajectory", "--gamma", "1", "--v0", "0.5", "--out", (s / "tw").string()}).code == 0);
    const json t = read_json(s / "tw" / "manifest.json")["results"];
    CHECK(t["c"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(data_rows(s / "tw" / "trajectory.csv") > 10);

    REQUIRE(cli({"tw-branch", "--v-inf", "0.5", "--gamma-min", "1", "--gamma-max", "100", "--per-decade", "1",
                 "--out", (s / "br").string()})
                .code == 0);
    check_manifest_complete(s / "br");
    CHECK(data_rows(s / "br" / "branch_v0.5.csv") == 3);

    REQUIRE(cli({"asymptotics", "--v-inf", "0.25", "0.5", "--gamma-min", "10", "--gamma-max", "1e4", "--per-decade",
                 "1", "--threads", "2", "--out", (s / "as").string()})
                .code == 0);
    check_manifest_complete(s / "as");
    const json a = read_json(s / "as" / "manifest.json")["results"];
    CHECK(std::abs(a["A0"].get<double>() - 0.1419) < 5e-4);
    CHECK(a["A_I"]["0.5"].get<double>() == doctest::Approx(1.485).epsilon(0.005));
    CHECK(data_rows(s / "as" / "matching.csv") == 8);
}

TEST_CASE("reproduce: layout names only emitted files")
{
    Scratch s;
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"fig4", {}},
        {"fig5", {"--gamma-max", "1e4", "--per-decade", "1"}},
        {"fig6", {"--gamma-max", "100", "--per-decade", "1", "--pde-gammas", "1", "--L", "60", "--N", "600",
                  "--t-end", "20"}},
    };
    for (const auto& [fig, extra] : runs) {
        CAPTURE(fig);
        const fs::path dir = s / fig;
        REQUIRE(cli(with({"reproduce", fig, "--out", dir.string()}, extra)).code == 0);
        check_manifest_complete(dir);
        const json layout = read_json(dir / "layout.json");
        CHECK(layout["figure"] == fig);
        for (const auto& p : layout["panels"]) {
            for (const auto& sr : p["series"]) {
                if (sr.contains("file")) {
                    CHECK(fs::exists(dir / sr["file"].get<std::string>()));
                }
            }
        }
    }
    const json f6 = read_json(s / "fig6" / "manifest.json");
    CHECK(f6["runs"].size() == 3);
    for (const auto& r : f6["runs"]) {
        CHECK(r["status"] == "ok");
    }
    CHECK(data_rows(s / "fig5" / "fig5_v0.5.csv") == 4);
}
