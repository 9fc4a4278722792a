#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twoterm/report.hpp"

namespace fs = std::filesystem;
using namespace twoterm;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-term asymptotic expansion analyzer"};
    app.require_subcommand(1);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Analyze a job file or a directory of job files");
    std::string input, format = "text", out_path, grid_path;
    std::optional<std::uint64_t> seed;
    analyze_cmd->add_option("config", input, "Job file (JSON) or directory of job files")->required();
    analyze_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "machine"}));
    analyze_cmd->add_option("--out", out_path, "Output file (directory in batch mode)");
    analyze_cmd->add_option("--seed", seed, "Recorded in the report; the analysis draws no random numbers");
    analyze_cmd->add_option("--dump-grid", grid_path, "CSV of x, f1*, f2*, F*, R (directory in batch mode)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const ReportFormat fmt = format == "machine" ? ReportFormat::Machine : ReportFormat::Text;
    const bool batch = fs::is_directory(input);
    try {
        std::vector<fs::path> paths;
        std::vector<JobResult> results;
        if (batch) {
            paths = batch_jobs(input);
            results = run_batch(paths);
        } else {
            paths = {input};
            results = {run_job_file(input)};
        }
        int code = 0;
        for (JobResult& r : results) {
            r.seed = seed;
            code = std::max(code, r.exit_code);
        }

        if (!grid_path.empty()) {
            if (batch) ensure_dir(grid_path);
            for (std::size_t i = 0; i < results.size(); ++i) {
                const JobResult& r = results[i];
                if (!r.config || !r.report) continue;
                const fs::path dest = batch ? fs::path(grid_path) / (paths[i].stem().string() + ".csv") : fs::path(grid_path);
                write_file(dest, dump_grid(*r.config, *r.report));
            }
        }

        if (!batch) {
            const std::string text = render_report(results[0], fmt);
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
        } else if (!out_path.empty()) {
            ensure_dir(out_path);
            const char* ext = fmt == ReportFormat::Machine ? ".json" : ".txt";
            for (std::size_t i = 0; i < results.size(); ++i)
                write_file(fs::path(out_path) / (paths[i].stem().string() + ext), render_report(results[i], fmt));
        } else if (fmt == ReportFormat::Machine) {
            std::cout << "[\n";
            for (std::size_t i = 0; i < results.size(); ++i) {
                std::string doc = render_report(results[i], fmt);
                doc.pop_back();
                std::cout << doc << (i + 1 < results.size() ? ",\n" : "\n");
            }
            std::cout << "]\n";
        } else {
            for (std::size_t i = 0; i < results.size(); ++i)
                std::cout << "== " << paths[i].filename().string() << "\n" << render_report(results[i], fmt) << "\n";
        }
        for (const JobResult& r : results)
            if (!r.error.empty()) std::cerr << r.error << "\n";
        return code;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
}
