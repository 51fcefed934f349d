// Command-line front end. Every verb prints one JSON report to stdout
// (text table for report-table) and exits 0 on success, 2 when a verb that
// asserts a property found a violation, 1 on usage errors.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include "floc/amd.hpp"
#include "floc/json_io.hpp"
#include "floc/plane.hpp"
#include "floc/verification.hpp"

namespace {

using floc::Json;
using floc::Rat;

const char* kSpaceListing =
    "known spaces: circle:<M>, graph:<path>, builtin:fig4, builtin:star3";
const char* kMechListing =
    "known mechanisms: rd, pcd, qcd:q=<num>/<den> (q in [0, 1/2]), pd, pd-general, median";

floc::MetricSpace parse_space(const std::string& spec) {
    size_t colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "circle") {
        auto m = floc::parse_rat(rest);
        if (!m || floc::rat_den(*m) != 1 || *m < 3 || *m > 1000)
            throw std::invalid_argument("bad circle size: " + spec);
        return floc::make_circle((int)floc::rat_num(*m));
    }
    if (head == "graph") return floc::load_graph_file(rest);
    if (head == "builtin") {
        if (rest == "fig4") return floc::fig_graph6();
        if (rest == "star3") return floc::star3_graph();
        throw std::invalid_argument("unknown builtin space: " + rest);
    }
    throw std::invalid_argument("unknown space: " + spec);
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

Json envelope(const std::string& verb, Json config) {
    Json j;
    j["verb"] = verb;
    j["config"] = std::move(config);
    j["generated_at"] = iso_now();
    return j;
}

Json violation_json(const floc::SpViolation& v) {
    Json j;
    j["profile"] = floc::profile_to_json(v.profile);
    j["agent"] = v.agent;
    j["deviation"] = v.deviation;
    j["truthful_cost"] = floc::rat_to_json(v.truthful_cost);
    j["deviating_cost"] = floc::rat_to_json(v.deviating_cost);
    j["gain"] = floc::rat_to_json(v.gain());
    return j;
}

// stdout always; --out gets the same bytes
void emit(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write: " + out_path);
        f << text;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write: " + path);
    f << text;
}

struct CommonArgs {
    std::string space, mech, out;
    int n = 3;
    int jobs = 1;
};

int run_verify_sp(const CommonArgs& a) {
    floc::MetricSpace s = parse_space(a.space);
    floc::Mechanism f = floc::make_mechanism(a.mech);
    auto w = floc::check_strategyproof(s, f, a.n, a.jobs);
    Json rep = envelope("verify-sp", {{"mech", a.mech},
                                      {"space", a.space},
                                      {"n", a.n},
                                      {"jobs", a.jobs}});
    rep["status"] = w ? "violation" : "ok";
    rep["witness"] = w ? violation_json(*w) : Json(nullptr);
    rep["values"] = {{"space_size", s.size()},
                     {"profiles", (long long)floc::profile_count(s.size(), a.n)},
                     {"mechanism_note", f.sp_note}};
    emit(rep, a.out);
    return w ? 2 : 0;
}

int run_dominates(const CommonArgs& a, const std::string& against) {
    floc::MetricSpace s = parse_space(a.space);
    floc::Mechanism f = floc::make_mechanism(a.mech);
    floc::Mechanism g = floc::make_mechanism(against);
    floc::DominanceReport rep = floc::check_dominates(s, f, g, a.n, a.jobs);
    Json out = envelope("dominates", {{"mech", a.mech},
                                      {"against", against},
                                      {"space", a.space},
                                      {"n", a.n},
                                      {"jobs", a.jobs}});
    out["status"] = rep.dominates ? "dominates" : "not-dominated";
    Json wit(nullptr);
    const std::optional<floc::Profile>& p =
        rep.dominates ? rep.strict_witness : rep.counterexample;
    if (p) {
        wit = Json{{"profile", floc::profile_to_json(*p)},
                   {"kind", rep.dominates ? "strict" : "counterexample"},
                   {"mech_sc", floc::rat_to_json(rep.f_sc)},
                   {"against_sc", floc::rat_to_json(rep.g_sc)}};
    }
    out["witness"] = wit;
    out["values"] = {{"profiles", (long long)floc::profile_count(s.size(), a.n)}};
    emit(out, a.out);
    return rep.dominates ? 0 : 2;
}

int run_worst_ratio(const CommonArgs& a) {
    floc::MetricSpace s = parse_space(a.space);
    floc::Mechanism f = floc::make_mechanism(a.mech);
    floc::RatioReport rep = floc::worst_ratio(s, f, a.n, a.jobs);
    Json out = envelope("worst-ratio", {{"mech", a.mech},
                                        {"space", a.space},
                                        {"n", a.n},
                                        {"jobs", a.jobs}});
    out["status"] = rep.unbounded ? "unbounded" : "ok";
    out["witness"] = {{"profile", floc::profile_to_json(rep.witness)},
                      {"sc", floc::rat_to_json(rep.witness_sc)},
                      {"opt", floc::rat_to_json(rep.witness_opt)}};
    out["values"] = {{"ratio", floc::rat_to_json(rep.ratio)},
                     {"ratio_double", floc::rat_to_double(rep.ratio)}};
    emit(out, a.out);
    return rep.unbounded ? 2 : 0;
}

int run_family(int grid_den, const std::string& csv, const std::string& out_path) {
    if (grid_den < 3) throw std::invalid_argument("family: grid denominator must be >= 3");
    Rat best(-1), argmax(0);
    std::ostringstream rows;
    rows << "x,ratio\n";
    rows.precision(12);
    for (int i = 1; 3 * i <= grid_den; i++) {
        Rat x(i, grid_den);
        Rat r = floc::qcd_family_ratio(x);
        rows << floc::rat_to_double(x) << "," << floc::rat_to_double(r) << "\n";
        if (r > best) {
            best = r;
            argmax = x;
        }
    }
    Json rep = envelope("family", {{"grid_den", grid_den}});
    rep["status"] = "ok";
    rep["witness"] = {{"x", floc::rat_to_json(argmax)}};
    rep["values"] = {{"max", floc::rat_to_json(best)},
                     {"max_double", floc::rat_to_double(best)},
                     {"argmax", floc::rat_to_json(argmax)},
                     {"argmax_double", floc::rat_to_double(argmax)}};
    if (!csv.empty()) {
        write_file(csv, rows.str());
        rep["csv_path"] = csv;
    }
    emit(rep, out_path);
    return 0;
}

floc::AmdFlags parse_flags(const std::vector<std::string>& names) {
    floc::AmdFlags f;
    for (const std::string& n : names) {
        if (n == "peaks_only") f.peaks_only = true;
        else if (n == "antipodal") f.antipodal = true;
        else if (n == "fix_first_agent") f.fix_first_agent = true;
        else if (n == "anonymity_links") f.anonymity_links = true;
        else
            throw std::invalid_argument(
                "unknown flag: " + n +
                " (flags: peaks_only, antipodal, fix_first_agent, anonymity_links)");
    }
    return f;
}

Json table_json(const floc::SolvedMechanism& sol) {
    Json t;
    t["space"] = floc::space_to_json(sol.space);
    t["n"] = sol.n;
    t["alpha"] = floc::rat_to_json(sol.alpha);
    Json rows = Json::array();
    long long total = floc::profile_count(sol.space.size(), sol.n);
    for (long long r = 0; r < total; r++)
        rows.push_back(Json{{"profile", floc::profile_to_json(
                                            floc::profile_at(r, sol.space.size(), sol.n))},
                            {"lottery", floc::lottery_to_json(sol.table[r])}});
    t["table"] = std::move(rows);
    return t;
}

int run_amd(const CommonArgs& a, const std::vector<std::string>& flag_names,
            const std::string& mode, const std::string& table_path) {
    floc::MetricSpace s = parse_space(a.space);
    floc::AmdFlags flags = parse_flags(flag_names);
    floc::AmdMode md = mode == "float" ? floc::AmdMode::Float : floc::AmdMode::Rational;
    floc::SolvedMechanism sol = floc::solve_optimal_mechanism(s, a.n, flags, md);
    Json rep = envelope("amd", {{"space", a.space},
                                {"n", a.n},
                                {"flags", flag_names},
                                {"mode", mode},
                                {"jobs", a.jobs}});
    bool bad = sol.validated && (sol.sp_violations > 0 || sol.table_worst_ratio != sol.alpha);
    rep["status"] = bad ? "invalid" : "ok";
    rep["witness"] = sol.sp_witness ? violation_json(*sol.sp_witness) : Json(nullptr);
    rep["values"] = {{"alpha", floc::rat_to_json(sol.alpha)},
                     {"alpha_double", floc::rat_to_double(sol.alpha)},
                     {"exact", sol.exact},
                     {"validated", sol.validated},
                     {"sp_violations", sol.sp_violations},
                     {"table_worst_ratio",
                      sol.validated ? Json(floc::rat_str(sol.table_worst_ratio)) : Json(nullptr)},
                     {"max_row_violation", floc::rat_to_json(sol.max_row_violation)}};
    rep["stats"] = {{"vars", sol.lp_vars},
                    {"rows", sol.lp_rows},
                    {"iterations", sol.lp.iterations},
                    {"solver_note", sol.lp.note},
                    {"max_residual", sol.lp.max_residual}};
    write_file(table_path, table_json(sol).dump(2) + "\n");
    rep["table_path"] = table_path;
    emit(rep, a.out);
    return bad ? 2 : 0;
}

int run_amd_sweep(const std::string& range, const std::string& mode, const std::string& csv,
                  const std::string& out_path, int jobs) {
    size_t dots = range.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("sweep range must look like 3..12");
    int lo = std::stoi(range.substr(0, dots));
    int hi = std::stoi(range.substr(dots + 2));
    floc::AmdMode md = mode == "float" ? floc::AmdMode::Float : floc::AmdMode::Rational;
    std::vector<floc::SweepRow> rows = floc::amd_sweep(lo, hi, md);
    std::ostringstream os;
    os << "M,alpha,alpha_peaks_only,vars,rows,seconds\n";
    os.precision(12);
    for (const floc::SweepRow& r : rows)
        os << r.M << "," << floc::rat_to_double(r.alpha) << ","
           << floc::rat_to_double(r.alpha_peaks_only) << "," << r.lp_vars << "," << r.lp_rows
           << "," << r.seconds << "\n";
    write_file(csv, os.str());
    Json rep = envelope("amd-sweep",
                        {{"circle", range}, {"mode", mode}, {"jobs", jobs}});
    rep["status"] = "ok";
    Json jrows = Json::array();
    for (const floc::SweepRow& r : rows)
        jrows.push_back(Json{{"M", r.M},
                             {"alpha", floc::rat_to_json(r.alpha)},
                             {"alpha_double", floc::rat_to_double(r.alpha)},
                             {"alpha_peaks_only", floc::rat_to_json(r.alpha_peaks_only)},
                             {"alpha_peaks_only_double", floc::rat_to_double(r.alpha_peaks_only)},
                             {"vars", r.lp_vars},
                             {"rows", r.lp_rows}});
    rep["values"] = {{"rows", std::move(jrows)}};
    rep["csv_path"] = csv;
    emit(rep, out_path);
    return 0;
}

int run_plane_mm(double grid_step, int refine, bool restrict_non_obtuse,
                 const std::string& out_path) {
    floc::PlaneSearchResult res =
        floc::mm_worst_ratio_search(grid_step, refine, restrict_non_obtuse);
    Json rep = envelope("plane-mm", {{"search", true},
                                     {"grid_step", grid_step},
                                     {"refine", refine},
                                     {"restrict_non_obtuse", restrict_non_obtuse}});
    rep["status"] = "ok";
    rep["witness"] = Json(nullptr);
    rep["values"] = {{"ratio", res.ratio},
                     {"x", res.witness.x},
                     {"y", res.witness.y},
                     {"z", res.witness.z}};
    emit(rep, out_path);
    return 0;
}

int run_plane_demo(const std::string& out_path) {
    floc::ManipulationDemo d = floc::demo_optimal_not_sp();
    Json rep = envelope("plane-demo-manipulation", Json::object());
    rep["status"] = "ok";
    Json prof = Json::array();
    for (const floc::PlanePoint& p : d.profile) prof.push_back(Json::array({p[0], p[1]}));
    rep["witness"] = {{"profile", std::move(prof)},
                      {"agent", d.agent},
                      {"deviation", Json::array({d.deviation[0], d.deviation[1]})},
                      {"truthful_cost", d.truthful_cost},
                      {"deviating_cost", d.deviating_cost},
                      {"gain", d.gain}};
    rep["values"] = {{"gain", d.gain}};
    emit(rep, out_path);
    return 0;
}

struct TableCell {
    std::string cell, space, expected, computed, note;
    bool ok = false;
};

TableCell ratio_cell(const std::string& name, const std::string& space_spec,
                     const std::string& mech, const Rat& expected, int jobs) {
    floc::MetricSpace s = parse_space(space_spec);
    floc::RatioReport rep = floc::worst_ratio(s, floc::make_mechanism(mech), 3, jobs);
    TableCell c;
    c.cell = name;
    c.space = space_spec;
    c.expected = floc::rat_str(expected);
    if (rep.unbounded) {
        c.computed = "unbounded";
        c.note = "SC > 0 on a profile with OPT = 0";
        return c;
    }
    c.computed = floc::rat_str(rep.ratio);
    c.ok = rep.ratio == expected;
    if (!c.ok) {
        std::string w;
        for (size_t i = 0; i < rep.witness.size(); i++)
            w += (i ? "," : "") + std::to_string(rep.witness[i]);
        c.note = "exhaustive maximum differs from the claimed bound; worst profile (" + w + ")";
    }
    return c;
}

int run_report_table(int sweep_max, int jobs, bool self_test_broken,
                     const std::string& out_path) {
    if (sweep_max < 3 || sweep_max > 16)
        throw std::invalid_argument("report-table: --sweep-max must lie in 3..16");
    std::vector<TableCell> cells;
    cells.push_back(ratio_cell("rd worst ratio", "circle:12", "rd", Rat(4, 3), jobs));
    cells.push_back(ratio_cell("pcd worst ratio", "circle:8", "pcd", Rat(5, 4), jobs));
    cells.push_back(ratio_cell("pd worst ratio", "circle:8", "pd", Rat(5, 4), jobs));

    {
        // symmetric-instance family of the clamped quadratic rule, 1/100 grid
        TableCell c;
        c.cell = "qcd family max";
        c.space = "arcs (x, x, 1-2x)";
        c.expected = "7/6 at x = 1/4";
        Rat best(-1), argmax(0);
        for (int i = 1; 3 * i <= 100; i++) {
            Rat r = floc::qcd_family_ratio(Rat(i, 100));
            if (r > best) {
                best = r;
                argmax = Rat(i, 100);
            }
        }
        c.computed = floc::rat_str(best) + " at x = " + floc::rat_str(argmax);
        c.ok = best == Rat(7, 6) && argmax == Rat(1, 4);
        cells.push_back(c);
    }

    cells.push_back(ratio_cell("qcd(1/4) worst ratio", "circle:8", "qcd:q=1/4", Rat(7, 6), jobs));

    {
        floc::SolvedMechanism sol = floc::solve_optimal_mechanism(
            floc::fig_graph6(), 3, {}, floc::AmdMode::Rational);
        TableCell c;
        c.cell = "graph lower bound";
        c.space = "builtin:fig4";
        c.expected = "13/12";
        c.computed = floc::rat_str(sol.alpha);
        c.ok = sol.alpha == Rat(13, 12) && sol.validated && sol.sp_violations == 0;
        cells.push_back(c);
    }

    for (const floc::SweepRow& r : floc::amd_sweep(3, sweep_max, floc::AmdMode::Rational)) {
        TableCell c;
        c.cell = "circle LP alpha, M=" + std::to_string(r.M);
        c.space = "circle:" + std::to_string(r.M);
        c.expected = r.M % 2 == 0 ? "peaks-only equal, <= 7/6" : "peaks-only equal";
        c.computed = floc::rat_str(r.alpha);
        c.ok = r.alpha == r.alpha_peaks_only && (r.M % 2 == 1 || r.alpha <= Rat(7, 6));
        if (r.alpha != r.alpha_peaks_only)
            c.note = "peaks-only alpha " + floc::rat_str(r.alpha_peaks_only);
        cells.push_back(c);
    }

    if (self_test_broken) {
        // negative control: a rule that ignores reports cannot meet any bound
        floc::Mechanism broken{"broken", "test fixture, intentionally not bounded",
                               [](const floc::MetricSpace&, const floc::Profile&) {
                                   return floc::Lottery::point(0);
                               }};
        floc::RatioReport rep = floc::worst_ratio(parse_space("circle:12"), broken, 3, jobs);
        TableCell c;
        c.cell = "broken fixture";
        c.space = "circle:12";
        c.expected = "4/3";
        c.computed = rep.unbounded ? "unbounded" : floc::rat_str(rep.ratio);
        c.ok = !rep.unbounded && rep.ratio == Rat(4, 3);
        c.note = "negative control, must be flagged";
        cells.push_back(c);
    }

    size_t w0 = 4, w1 = 5, w2 = 8, w3 = 8;
    for (const TableCell& c : cells) {
        w0 = std::max(w0, c.cell.size());
        w1 = std::max(w1, c.space.size());
        w2 = std::max(w2, c.expected.size());
        w3 = std::max(w3, c.computed.size());
    }
    auto pad = [](const std::string& s, size_t w) {
        return s + std::string(w - s.size() + 2, ' ');
    };
    int failed = 0;
    std::ostringstream os;
    os << pad("cell", w0) << pad("space", w1) << pad("expected", w2) << pad("computed", w3)
       << "status\n";
    for (const TableCell& c : cells) {
        os << pad(c.cell, w0) << pad(c.space, w1) << pad(c.expected, w2) << pad(c.computed, w3)
           << (c.ok ? "verified" : "FAILED") << "\n";
        if (!c.note.empty()) os << "    note: " << c.note << "\n";
        if (!c.ok) failed++;
    }
    os << cells.size() << " cells, " << failed << " failed\n";
    std::fputs(os.str().c_str(), stdout);

    if (!out_path.empty()) {
        Json rep = envelope("report-table", {{"sweep_max", sweep_max},
                                             {"jobs", jobs},
                                             {"self_test_broken", self_test_broken}});
        rep["status"] = failed ? "failed" : "ok";
        Json jcells = Json::array();
        for (const TableCell& c : cells)
            jcells.push_back(Json{{"cell", c.cell},
                                  {"space", c.space},
                                  {"expected", c.expected},
                                  {"computed", c.computed},
                                  {"status", c.ok ? "verified" : "failed"},
                                  {"note", c.note}});
        rep["values"] = {{"cells", std::move(jcells)}, {"failed", failed}};
        write_file(out_path, rep.dump(2) + "\n");
    }
    return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategyproof facility-location toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    CommonArgs va;
    CLI::App* verify = app.add_subcommand("verify-sp", "exhaustive strategyproofness check");
    verify->add_option("--mech", va.mech, "mechanism name")->required();
    verify->add_option("--space", va.space, "space spec")->required();
    verify->add_option("--n", va.n, "agent count")->check(CLI::Range(1, 7));
    verify->add_option("--jobs", va.jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", va.out, "also write the JSON report here");
    verify->callback([&] { rc = run_verify_sp(va); });

    CommonArgs da;
    std::string against;
    CLI::App* dom = app.add_subcommand("dominates", "social-cost dominance check");
    dom->add_option("--mech", da.mech, "dominating candidate")->required();
    dom->add_option("--against", against, "baseline mechanism")->required();
    dom->add_option("--space", da.space, "space spec")->required();
    dom->add_option("--n", da.n, "agent count")->check(CLI::Range(1, 7));
    dom->add_option("--jobs", da.jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    dom->add_option("--out", da.out, "also write the JSON report here");
    dom->callback([&] { rc = run_dominates(da, against); });

    CommonArgs ra;
    CLI::App* ratio = app.add_subcommand("worst-ratio", "exhaustive approximation ratio");
    ratio->add_option("--mech", ra.mech, "mechanism name")->required();
    ratio->add_option("--space", ra.space, "space spec")->required();
    ratio->add_option("--n", ra.n, "agent count")->check(CLI::Range(1, 7));
    ratio->add_option("--jobs", ra.jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    ratio->add_option("--out", ra.out, "also write the JSON report here");
    ratio->callback([&] { rc = run_worst_ratio(ra); });

    int grid_den = 100;
    std::string family_csv, family_out;
    CLI::App* fam = app.add_subcommand(
        "family", "symmetric-instance ratio curve of the clamped quadratic rule");
    fam->add_option("--grid", grid_den, "grid denominator for x");
    fam->add_option("--csv", family_csv, "write the (x, ratio) curve here");
    fam->add_option("--out", family_out, "also write the JSON report here");
    fam->callback([&] { rc = run_family(grid_den, family_csv, family_out); });

    CommonArgs aa;
    std::vector<std::string> amd_flags;
    std::string amd_mode = "rational", amd_table = "amd_table.json";
    CLI::App* amd = app.add_subcommand("amd", "solve for the optimal mechanism");
    amd->add_option("--space", aa.space, "space spec")->required();
    amd->add_option("--n", aa.n, "agent count")->check(CLI::Range(2, 5));
    amd->add_option("--flags", amd_flags, "model restrictions, comma separated")
        ->delimiter(',');
    amd->add_option("--mode", amd_mode, "rational or float")
        ->check(CLI::IsMember({"rational", "float"}));
    amd->add_option("--table", amd_table, "where to store the solved lottery table");
    amd->add_option("--jobs", aa.jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    amd->add_option("--out", aa.out, "also write the JSON report here");
    amd->callback([&] { rc = run_amd(aa, amd_flags, amd_mode, amd_table); });

    std::string sweep_range = "3..8", sweep_mode = "rational", sweep_csv = "amd_sweep.csv",
                sweep_out;
    int sweep_jobs = 1;
    CLI::App* sweep = app.add_subcommand("amd-sweep", "optimal alpha per circle size");
    sweep->add_option("--circle", sweep_range, "size range, e.g. 3..12");
    sweep->add_option("--mode", sweep_mode, "rational or float")
        ->check(CLI::IsMember({"rational", "float"}));
    sweep->add_option("--csv", sweep_csv, "CSV artifact path");
    sweep->add_option("--jobs", sweep_jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "also write the JSON report here");
    sweep->callback(
        [&] { rc = run_amd_sweep(sweep_range, sweep_mode, sweep_csv, sweep_out, sweep_jobs); });

    double mm_grid = 0.01;
    int mm_refine = 3;
    bool mm_search = false, mm_restrict = false;
    std::string mm_out;
    CLI::App* mm = app.add_subcommand("plane-mm", "coordinatewise-median worst case");
    mm->add_flag("--search", mm_search, "run the grid search")->required();
    mm->add_option("--grid", mm_grid, "grid step");
    mm->add_option("--refine", mm_refine, "refinement levels");
    mm->add_flag("--restrict-non-obtuse", mm_restrict, "restrict to the interior-optimum region");
    mm->add_option("--out", mm_out, "also write the JSON report here");
    mm->callback([&] { rc = run_plane_mm(mm_grid, mm_refine, mm_restrict, mm_out); });

    std::string demo_out;
    CLI::App* demo = app.add_subcommand("plane-demo-manipulation",
                                        "misreport against the exact cost minimizer");
    demo->add_option("--out", demo_out, "also write the JSON report here");
    demo->callback([&] { rc = run_plane_demo(demo_out); });

    int sweep_max = 6, rt_jobs = 1;
    bool broken = false;
    std::string rt_out;
    CLI::App* rt = app.add_subcommand("report-table", "reproduction of the headline bounds");
    rt->add_option("--sweep-max", sweep_max, "largest circle in the LP sweep");
    rt->add_option("--jobs", rt_jobs, "worker threads")
        ->envname("FLOC_JOBS")
        ->check(CLI::PositiveNumber);
    rt->add_flag("--self-test-broken", broken, "plug in a failing fixture row");
    rt->add_option("--out", rt_out, "write a JSON version of the table here");
    rt->callback([&] { rc = run_report_table(sweep_max, rt_jobs, broken, rt_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << "verbs:";
        for (const CLI::App* sub : app.get_subcommands({})) std::cerr << " " << sub->get_name();
        std::cerr << "\n" << kSpaceListing << "\n" << kMechListing << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n" << kSpaceListing << "\n" << kMechListing
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
