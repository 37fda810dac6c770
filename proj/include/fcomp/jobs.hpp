#pragma once

#include <string>
#include <vector>

#include "fcomp/acceptance.hpp"
#include "fcomp/analytic.hpp"
#include "fcomp/estimator.hpp"
#include "fcomp/simkit.hpp"
#include "fcomp/types.hpp"

namespace fcomp::jobs {

inline constexpr const char* kToolName = "fcomp";
inline constexpr const char* kVersion = "0.1.0";

/// Everything a command run leaves behind: the files it wrote (absolute or
/// out-dir-relative paths) and a short text summary for the terminal.
struct JobOutcome {
    std::vector<std::string> files;
    std::string summary;
};

// ---------------------------------------------------------------- table ----

/// Fixed-width text rendering of both presence tables, with exact rationals
/// where the entries are (near-)rational and 12-digit decimals throughout.
std::string render_presence_table(const BeamConfig& cfg);

/// Same content as a JSON document; dark ports carry "divergent": true.
std::string presence_table_json(const BeamConfig& cfg);

JobOutcome run_table_job(const BeamConfig& cfg, const std::string& out_dir);

// --------------------------------------------------------------- fringe ----

struct FringeRun {
    std::string label;
    simkit::Context context;
};

struct FringeJob {
    BeamConfig beam;
    double alpha = 0.0;
    std::vector<double> beta_schedule;
    uint64_t shots_per_setting = 1000;
    bool poisson_totals = true;
    uint64_t seed = 1;
    std::vector<FringeRun> runs;
};

FringeJob fringe_job_from_json_text(const std::string& text);
std::string to_json_text(const FringeJob& job);

/// Samples, fits and writes per run: <label>.csv, <label>.json,
/// <label>_overlay.csv (exact fringe on a fine grid), plus fits.json and
/// manifest.json.
JobOutcome run_fringe_job(const FringeJob& job, const std::string& out_dir);

// ----------------------------------------------------- presence scan -------

struct ScanJob {
    BeamConfig beam;
    std::vector<double> alphas;
    std::vector<analytic::MeasurementContext> contexts;
    std::vector<double> beta_schedule;
    uint64_t shots_per_setting = 10000;
    bool poisson_totals = false;
    uint64_t seed = 1;
};

ScanJob scan_job_from_json_text(const std::string& text);
std::string to_json_text(const ScanJob& job);

/// Writes presence.csv, presence.json and manifest.json.
JobOutcome run_scan_job(const ScanJob& job, const std::string& out_dir);

// ---------------------------------------------------------------- ozawa ----

struct OzawaJob {
    BeamConfig beam;
    double est_min = -1.5;
    double est_max = 2.5;
    size_t grid_count = 81;
};

OzawaJob ozawa_job_from_json_text(const std::string& text);
std::string to_json_text(const OzawaJob& job);

/// Writes ozawa_grid.csv (est_plus,est_minus,eps2), ozawa.json with the grid
/// minimizer, the common-estimate minimizer and the analytic minimum, and
/// manifest.json. Dark ports are reported as divergent instead of a grid.
JobOutcome run_ozawa_job(const OzawaJob& job, const std::string& out_dir);

// --------------------------------------------------------------- verify ----

/// Runs the acceptance suite; writes report.json when out_dir is nonempty.
JobOutcome run_verify_job(uint64_t seed, const std::string& out_dir,
                          const acceptance::Tolerances& tol = {});

std::string report_to_json(const acceptance::Report& report);

// -------------------------------------------------------------- helpers ----

/// Reads a whole file; throws std::runtime_error with the path on failure.
std::string load_text_file(const std::string& path);

/// Parses an angle that may be a JSON number or a pi-multiple string; used by
/// every config loader.
double angle_from_json_text(const std::string& json_value_dump);

/// Beam block of a config: either {"a1":.., "a2":.., "chi":..} or
/// {"ratio": "4:1", "chi": ..}; chi accepts pi-multiple strings.
BeamConfig beam_from_json_text(const std::string& json_object_dump);

/// Amplitudes as a user typed them; renormalizes deviations up to 1e-6
/// (decimal rounding), rejects anything larger.
BeamConfig beam_from_amplitudes(double a1, double a2, double chi);

} // namespace fcomp::jobs
