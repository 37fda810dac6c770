// Command-line front end: reproduces the path-presence tables, compensation
// fringes, presence scans and error landscapes as machine-readable files, and
// runs the verification suite.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fcomp/angleio.hpp"
#include "fcomp/jobs.hpp"

using namespace fcomp;

namespace {

void print_outcome(const jobs::JobOutcome& outcome, const std::string& out_dir) {
    std::cout << outcome.summary;
    if (!out_dir.empty() && !outcome.files.empty()) {
        std::cout << "wrote:";
        for (const std::string& f : outcome.files) std::cout << ' ' << out_dir << '/' << f;
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedback-compensation interferometry toolkit"};
    app.set_version_flag("--version", std::string(jobs::kToolName) + " " + jobs::kVersion);
    app.require_subcommand(1);

    // table
    auto* table = app.add_subcommand("table", "print the path-presence tables");
    double a1 = 2.0 / std::sqrt(5.0), a2 = 1.0 / std::sqrt(5.0);
    std::string ratio, chi_text = "0", table_out;
    table->add_option("--a1", a1, "path-1 amplitude");
    table->add_option("--a2", a2, "path-2 amplitude");
    table->add_option("--ratio", ratio, "intensity ratio, e.g. 4:1 (overrides --a1/--a2)");
    table->add_option("--chi", chi_text, "interferometer phase (pi multiple or radians)");
    table->add_option("--out-dir", table_out, "directory for table.txt/table.json");

    // config-file commands
    struct FileCmd {
        CLI::App* cmd = nullptr;
        std::string config, out_dir;
        uint64_t seed = 0;
        bool seed_set = false;
    };
    const auto add_file_cmd = [&](const char* name, const char* help, bool takes_seed) {
        FileCmd fc;
        fc.cmd = app.add_subcommand(name, help);
        fc.cmd->add_option("--config", fc.config, "JSON config (or a manifest.json)")
            ->required();
        fc.cmd->add_option("--out-dir", fc.out_dir, "output directory")->required();
        if (takes_seed)
            fc.cmd->add_option("--seed", fc.seed, "override the config seed");
        return fc;
    };
    FileCmd fringe = add_file_cmd("fringe", "simulate and fit compensation fringes", true);
    FileCmd scan = add_file_cmd("presence-scan",
                                "presence versus coupling strength (simulate + fit)", true);
    FileCmd ozawa = add_file_cmd("ozawa", "measurement-error landscape over estimates", false);

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    uint64_t verify_seed = 20260809;
    std::string verify_out;
    int criterion = 0;
    verify->add_option("--seed", verify_seed, "suite seed");
    verify->add_option("--out-dir", verify_out, "directory for report.json");
    verify->add_option("--criterion", criterion, "run a single criterion (1..9)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*table) {
            BeamConfig cfg;
            if (!ratio.empty())
                cfg = jobs::beam_from_json_text("{\"ratio\": \"" + ratio + "\"}");
            else
                cfg = jobs::beam_from_amplitudes(a1, a2, 0.0);
            cfg.chi = angleio::parse_angle(chi_text);
            cfg.validate();
            print_outcome(jobs::run_table_job(cfg, table_out), table_out);
        } else if (*fringe.cmd) {
            jobs::FringeJob job = jobs::fringe_job_from_json_text(
                jobs::load_text_file(fringe.config));
            if (fringe.cmd->count("--seed")) job.seed = fringe.seed;
            print_outcome(jobs::run_fringe_job(job, fringe.out_dir), fringe.out_dir);
        } else if (*scan.cmd) {
            jobs::ScanJob job = jobs::scan_job_from_json_text(jobs::load_text_file(scan.config));
            if (scan.cmd->count("--seed")) job.seed = scan.seed;
            print_outcome(jobs::run_scan_job(job, scan.out_dir), scan.out_dir);
        } else if (*ozawa.cmd) {
            const jobs::OzawaJob job =
                jobs::ozawa_job_from_json_text(jobs::load_text_file(ozawa.config));
            print_outcome(jobs::run_ozawa_job(job, ozawa.out_dir), ozawa.out_dir);
        } else if (*verify) {
            if (criterion != 0) {
                const acceptance::CriterionResult r =
                    acceptance::run_criterion(criterion, verify_seed);
                std::printf("%s  %d %s  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                            r.details.c_str());
                return r.pass ? 0 : 1;
            }
            const jobs::JobOutcome outcome = jobs::run_verify_job(verify_seed, verify_out);
            print_outcome(outcome, verify_out);
            if (outcome.summary.find("CRITERIA FAILED") != std::string::npos) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
