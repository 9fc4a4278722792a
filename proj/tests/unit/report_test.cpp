#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <regex>
#include <string>

#include "twoterm/report.hpp"

namespace twoterm {
namespace {

const std::filesystem::path kJobs = TWOTERM_JOBS_DIR;

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

TEST(JobConfig, ParsesDefaultsAndOverrides) {
    const JobConfig c = parse_job_config(R"({
        "f": "2*x + 3 + 1/x", "phi1": "x", "phi2": "1",
        "domain": {"T": 1, "x0": "inf"},
        "numerics": {"limit_tol": 1e-7, "period_hint": "2*pi", "strategy": "wynn"},
        "flags": {"tauberian": false}
    })");
    EXPECT_EQ(c.f, "2*x + 3 + 1/x");
    EXPECT_TRUE(c.domain.infinite());
    EXPECT_EQ(c.domain.approach, Approach::FromBelow);
    EXPECT_EQ(c.numerics.limit_tol, 1e-7);
    ASSERT_TRUE(c.numerics.period_hint);
    EXPECT_NEAR(*c.numerics.period_hint, 2.0 * std::numbers::pi, 1e-15);
    EXPECT_TRUE(c.flags.convexity);
    EXPECT_FALSE(c.flags.tauberian);
    EXPECT_FALSE(c.power_scale);

    const JobConfig p = parse_job_config(R"({"f": "x^2 + x", "power_scale": {"alpha1": 2, "alpha2": 1}})");
    ASSERT_TRUE(p.power_scale);
    EXPECT_EQ(p.power_scale->alpha1, 2.0);
    EXPECT_EQ(p.power_scale->direction, PowerDirection::ToInfinity);
}

TEST(JobConfig, RejectsMalformedDocuments) {
    const char* bad[] = {
        "not json",
        R"({"phi1": "x", "phi2": "1", "domain": {"T": 1, "x0": "inf"}})",
        R"({"f": "x", "phi1": "x", "phi2": "1", "domain": {"T": 1, "x0": "inf"}, "colour": 1})",
        R"({"f": "x", "phi1": "x", "phi2": "1", "domain": {"T": 1, "x0": "inf", "approach": "sideways"}})",
        R"({"f": "x", "phi1": "x", "phi2": "1", "domain": {"T": 1, "x0": "inf"}, "numerics": {"grid_size": 2}})",
        R"({"f": "x", "phi1": "x", "power_scale": {"alpha1": 2, "alpha2": 1}})",
        R"({"f": "x", "power_scale": {"alpha1": 1, "alpha2": 2}})",
    };
    for (const char* doc : bad) EXPECT_THROW(parse_job_config(doc), ConfigError) << doc;
    EXPECT_THROW(load_job_config(kJobs / "missing.json"), IoError);
}

TEST(Jobs, ExitCodes) {
    EXPECT_EQ(run_job_file(kJobs / "g1.json").exit_code, kExitDefinite);
    EXPECT_EQ(run_job_file(kJobs / "asymptote.json").exit_code, kExitDefinite);
    const JobResult degenerate = run_job_file(kJobs / "degenerate.json");
    EXPECT_EQ(degenerate.exit_code, kExitScaleInvalid);
    EXPECT_TRUE(degenerate.invalid_clause);
    EXPECT_EQ(run_job_file(kJobs / "oscillatory.json").exit_code, kExitIndeterminate);
    EXPECT_EQ(run_job_file(kJobs / "missing.json").exit_code, kExitIo);
    JobConfig bad_subject = load_job_config(kJobs / "asymptote.json");
    bad_subject.f = "x + foo(x)";
    EXPECT_EQ(run_job(bad_subject).exit_code, kExitConfig);
}

TEST(Jobs, BatchKeepsOrder) {
    const auto paths = batch_jobs(kJobs);
    ASSERT_GE(paths.size(), 6u);
    EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end()));
    const auto results = run_batch(paths);
    ASSERT_EQ(results.size(), paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
        EXPECT_EQ(results[i].exit_code, run_job_file(paths[i]).exit_code) << paths[i];
}

TEST(MachineReport, RoundTripsAndIsDeterministic) {
    for (const char* name : {"g1.json", "loglog.json", "asymptote.json"}) {
        const JobResult a = run_job_file(kJobs / name);
        ASSERT_TRUE(a.report) << name;
        const std::string s = render_machine(*a.report);
        EXPECT_EQ(render_machine(parse_machine(s)), s) << name;
        EXPECT_FALSE(std::regex_search(s, std::regex(R"(:\s*-?(nan|NaN|inf|Infinity)\b)"))) << name;

        const std::string doc = render_report(a, ReportFormat::Machine);
        EXPECT_EQ(render_machine(parse_machine(doc)), s) << name;
        EXPECT_EQ(render_report(run_job_file(kJobs / name), ReportFormat::Machine), doc) << name;
    }
}

TEST(TextReport, NamesVerdictsAndIdentity) {
    const JobResult g1 = run_job_file(kJobs / "g1.json");
    const std::string t = render_report(g1, ReportFormat::Text);
    EXPECT_TRUE(has(t, "limit tangent curve")) << t;
    EXPECT_TRUE(has(t, "gamma identity")) << t;
    EXPECT_TRUE(has(t, "exit code: 0")) << t;

    const std::string l = render_report(run_job_file(kJobs / "loglog.json"), ReportFormat::Text);
    EXPECT_TRUE(has(l, "first-order expansion only")) << l;
    EXPECT_TRUE(has(l, "limit of f2*")) << l;

    const std::string d = render_report(run_job_file(kJobs / "degenerate.json"), ReportFormat::Text);
    EXPECT_TRUE(has(d, "exit code: 2")) << d;
}

TEST(GridDump, HeaderAndRows) {
    const JobResult g = run_job_file(kJobs / "asymptote.json");
    ASSERT_TRUE(g.config && g.report);
    const std::string csv = dump_grid(*g.config, *g.report);
    ASSERT_EQ(csv.rfind("x,f1_star,f2_star,F_star,R\n", 0), 0u) << csv.substr(0, 80);
    EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 4);
}

}  // namespace
}  // namespace twoterm
