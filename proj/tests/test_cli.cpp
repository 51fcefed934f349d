#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "floc/json_io.hpp"

using namespace floc;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Spawns the real binary; stderr is dropped, stdout captured.
RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(FLOC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Json parse_report(const RunResult& r) {
    REQUIRE_FALSE(r.out.empty());
    return Json::parse(r.out);
}

void require_schema(const std::string& verb, const Json& report) {
    Json schema = load_json_file(std::string(FLOC_SCHEMA_DIR) + "/" + verb + ".json");
    std::vector<std::string> errs = schema_errors(schema, report);
    for (const std::string& e : errs) UNSCOPED_INFO(e);
    REQUIRE(errs.empty());
}

std::string tmp_path(const std::string& name) {
    return "/tmp/floc_cli_test_" + std::to_string(::getpid()) + "_" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// report text without the generated_at line
std::string strip_timestamp(const std::string& text) {
    std::string out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.find("\"generated_at\"") == std::string::npos) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("verify-sp accepts the facing-arc rule on the 8-circle") {
    RunResult r = run_cli("verify-sp --mech pcd --space circle:8 --n 3");
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("verify-sp", rep);
    CHECK(rep["status"] == "ok");
    CHECK(rep["witness"].is_null());
    CHECK(rep["values"]["profiles"] == 512);
}

TEST_CASE("verify-sp reports the clamped quadratic rule's deviation with exit 2") {
    RunResult r = run_cli("verify-sp --mech qcd:q=1/4 --space circle:8 --n 3");
    CHECK(r.exit_code == 2);
    Json rep = parse_report(r);
    require_schema("verify-sp", rep);
    CHECK(rep["status"] == "violation");
    CHECK(rep["witness"]["profile"] == Json::array({0, 1, 4}));
    CHECK(rep["witness"]["agent"] == 2);
    CHECK(rep["witness"]["deviation"] == 3);
    CHECK(rep["witness"]["gain"] == "17/7656");
}

TEST_CASE("worst-ratio reports exact ratios and witnesses") {
    RunResult r = run_cli("worst-ratio --mech qcd:q=1/4 --space circle:8 --n 3");
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("worst-ratio", rep);
    CHECK(rep["values"]["ratio"] == "137/116");
    CHECK(rep["witness"]["profile"] == Json::array({0, 1, 4}));

    r = run_cli("worst-ratio --mech rd --space circle:12 --n 3");
    CHECK(r.exit_code == 0);
    rep = parse_report(r);
    require_schema("worst-ratio", rep);
    CHECK(rep["values"]["ratio"] == "4/3");
}

TEST_CASE("dominates distinguishes the two directions") {
    RunResult r = run_cli("dominates --mech pd --against rd --space circle:12 --n 3");
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("dominates", rep);
    CHECK(rep["status"] == "dominates");
    CHECK(rep["witness"]["kind"] == "strict");

    r = run_cli("dominates --mech rd --against pd --space circle:12 --n 3");
    CHECK(r.exit_code == 2);
    rep = parse_report(r);
    require_schema("dominates", rep);
    CHECK(rep["status"] == "not-dominated");
    CHECK(rep["witness"]["kind"] == "counterexample");
}

TEST_CASE("family finds the grid maximum at x = 1/4") {
    std::string csv = tmp_path("family.csv");
    RunResult r = run_cli("family --csv " + csv);
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("family", rep);
    CHECK(rep["values"]["max"] == "7/6");
    CHECK(rep["values"]["argmax"] == "1/4");
    std::string curve = slurp(csv);
    CHECK(curve.rfind("x,ratio\n", 0) == 0);
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 34);  // header + 33 grid points
    std::remove(csv.c_str());
}

TEST_CASE("amd reproduces the graph lower bound through the CLI") {
    std::string table = tmp_path("fig4_table.json");
    RunResult r = run_cli("amd --space builtin:fig4 --mode rational --table " + table);
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("amd", rep);
    CHECK(rep["values"]["alpha"] == "13/12");
    CHECK(rep["values"]["validated"] == true);
    CHECK(rep["values"]["sp_violations"] == 0);
    CHECK(rep["values"]["table_worst_ratio"] == "13/12");
    CHECK(rep["stats"]["vars"] == 1297);
    CHECK(rep["stats"]["rows"] == 4320);

    Json t = Json::parse(slurp(table));
    CHECK(t["alpha"] == "13/12");
    CHECK(t["table"].size() == 216);
    // stored lotteries parse back into unit-mass distributions
    Lottery first = lottery_from_json(t["table"][0]["lottery"]);
    CHECK(first.total() == Rat(1));
    MetricSpace s = space_from_json(t["space"]);
    CHECK(s.matrix() == fig_graph6().matrix());
    std::remove(table.c_str());
}

TEST_CASE("amd solves the 3-circle to alpha 1") {
    std::string table = tmp_path("c3_table.json");
    RunResult r = run_cli("amd --space circle:3 --mode rational --table " + table);
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("amd", rep);
    CHECK(rep["values"]["alpha"] == "1");
    CHECK(rep["values"]["exact"] == true);
    std::remove(table.c_str());
}

TEST_CASE("amd-sweep emits the six-column CSV and matching JSON rows") {
    std::string csv = tmp_path("sweep.csv");
    RunResult r = run_cli("amd-sweep --circle 3..5 --csv " + csv);
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("amd-sweep", rep);
    const Json& rows = rep["values"]["rows"];
    REQUIRE(rows.size() == 3);
    for (const Json& row : rows) CHECK(row["alpha"] == row["alpha_peaks_only"]);
    CHECK(rows[0]["M"] == 3);
    CHECK(rows[0]["vars"] == 28);
    CHECK(rows[0]["rows"] == 99);

    std::string text = slurp(csv);
    CHECK(text.rfind("M,alpha,alpha_peaks_only,vars,rows,seconds\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    std::remove(csv.c_str());
}

TEST_CASE("plane-mm search lands on the known worst triangle") {
    RunResult r = run_cli("plane-mm --search");
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("plane-mm", rep);
    double ratio = rep["values"]["ratio"];
    CHECK(ratio > 1.1179);
    CHECK(ratio < 1.1181);
    CHECK(std::abs((double)rep["values"]["x"] - 0.5) < 0.02);
    CHECK(std::abs((double)rep["values"]["y"] - 1.0) < 0.02);
    CHECK(std::abs((double)rep["values"]["z"] - 0.0) < 0.02);
}

TEST_CASE("plane-demo-manipulation reports the known gain") {
    RunResult r = run_cli("plane-demo-manipulation");
    CHECK(r.exit_code == 0);
    Json rep = parse_report(r);
    require_schema("plane-demo-manipulation", rep);
    CHECK(std::abs((double)rep["values"]["gain"] - 0.172598993) < 1e-6);
}

TEST_CASE("report-table flags the refuted bound and exits 2") {
    std::string out = tmp_path("rt.json");
    RunResult r = run_cli("report-table --sweep-max 4 --out " + out);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("qcd(1/4) worst ratio") != std::string::npos);
    CHECK(r.out.find("137/116") != std::string::npos);
    CHECK(r.out.find("FAILED") != std::string::npos);

    Json rep = Json::parse(slurp(out));
    require_schema("report-table", rep);
    CHECK(rep["status"] == "failed");
    CHECK(rep["values"]["failed"] == 1);
    int verified = 0;
    for (const Json& c : rep["values"]["cells"]) {
        if (c["status"] == "verified") verified++;
        else CHECK(c["cell"] == "qcd(1/4) worst ratio");
    }
    CHECK(verified == (int)rep["values"]["cells"].size() - 1);
    std::remove(out.c_str());
}

TEST_CASE("report-table broken fixture row is flagged failed") {
    std::string out = tmp_path("rt_broken.json");
    RunResult r = run_cli("report-table --sweep-max 3 --self-test-broken --out " + out);
    CHECK(r.exit_code == 2);
    Json rep = Json::parse(slurp(out));
    require_schema("report-table", rep);
    bool saw_broken = false;
    for (const Json& c : rep["values"]["cells"])
        if (c["cell"] == "broken fixture") {
            saw_broken = true;
            CHECK(c["status"] == "failed");
            CHECK(c["computed"] == "unbounded");
        }
    CHECK(saw_broken);
    std::remove(out.c_str());
}

TEST_CASE("identical configs give byte-identical reports modulo the timestamp") {
    std::string args = "verify-sp --mech pd --space circle:6 --n 3";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("bogus-verb").exit_code == 1);
    CHECK(run_cli("worst-ratio --mech nope --space circle:8").exit_code == 1);
    CHECK(run_cli("worst-ratio --mech rd --space nope:8").exit_code == 1);
    CHECK(run_cli("verify-sp --mech rd").exit_code == 1);  // missing --space
    CHECK(run_cli("plane-mm").exit_code == 1);             // missing --search
}

TEST_CASE("spaces, profiles and lotteries round-trip through JSON") {
    MetricSpace g = fig_graph6();
    CHECK(space_from_json(space_to_json(g)).matrix() == g.matrix());
    MetricSpace c = make_circle(9);
    CHECK(space_from_json(space_to_json(c)).matrix() == c.matrix());
    CHECK(space_from_json(space_to_json(c)).circle_size() == 9);

    Profile a{0, 3, 7};
    CHECK(profile_from_json(profile_to_json(a)) == a);

    Lottery f;
    f.add(2, Rat(1, 3));
    f.add(5, Rat(2, 3));
    CHECK(lottery_from_json(lottery_to_json(f)) == f);
}

TEST_CASE("graph files load in both encodings") {
    std::string jpath = tmp_path("g.json"), tpath = tmp_path("g.txt");
    {
        std::ofstream j(jpath);
        j << R"({"n":4,"edges":[[0,1,1,2],[1,2,1,2],[2,3,3,4]]})";
        std::ofstream t(tpath);
        t << "4\n0 1 1/2\n1 2 1/2\n2 3 3/4\n";
    }
    MetricSpace a = load_graph_file(jpath);
    MetricSpace b = load_graph_file(tpath);
    CHECK(a.matrix() == b.matrix());
    CHECK(a.dist(0, 3) == Rat(7, 4));
    std::remove(jpath.c_str());
    std::remove(tpath.c_str());
}

TEST_CASE("schema checker rejects malformed reports") {
    Json schema = load_json_file(std::string(FLOC_SCHEMA_DIR) + "/worst-ratio.json");
    Json bad = {{"verb", "worst-ratio"},
                {"config", {{"mech", "rd"}, {"space", "circle:8"}, {"n", 3}, {"jobs", 1}}},
                {"generated_at", "not a timestamp"},
                {"status", "ok"},
                {"witness", {{"profile", Json::array({0, 1, 2})}, {"sc", "1/2"}, {"opt", "1/2"}}},
                {"values", {{"ratio", "4/3"}, {"ratio_double", 4.0 / 3.0}}}};
    CHECK_FALSE(schema_errors(schema, bad).empty());  // bad timestamp
    bad["generated_at"] = "2026-01-01T00:00:00Z";
    CHECK(schema_errors(schema, bad).empty());
    bad["values"].erase("ratio");
    CHECK_FALSE(schema_errors(schema, bad).empty());  // missing required key
    bad["values"]["ratio"] = "4/3";
    bad["extra"] = 1;
    CHECK_FALSE(schema_errors(schema, bad).empty());  // additionalProperties
}
