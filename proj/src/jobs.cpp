#include "fcomp/jobs.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "fcomp/angleio.hpp"
#include "fcomp/rng.hpp"

namespace fcomp::jobs {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ------------------------------------------------------------- parsing ----

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is the offset; report it as line/column
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument("config parse error at line " + std::to_string(line) +
                                    ", column " + std::to_string(col) + ": " + e.what());
    }
}

const json& require(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(std::string("config: missing \"") + key + "\" in " + where);
    return *it;
}

double angle_from_json(const json& j, const char* where) {
    try {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return angleio::parse_angle(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(where) + ": " + e.what());
    }
    throw std::invalid_argument(std::string("config: ") + where +
                                " must be a number or a pi-multiple string");
}

BeamConfig beam_from_json(const json& j) {
    BeamConfig cfg;
    if (j.contains("ratio")) {
        const std::string ratio = j.at("ratio").get<std::string>();
        const size_t colon = ratio.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("config: beam ratio must look like \"4:1\"");
        char* end = nullptr;
        const double w1 = std::strtod(ratio.c_str(), &end);
        if (end != ratio.c_str() + colon)
            throw std::invalid_argument("config: bad beam ratio '" + ratio + "'");
        const double w2 = std::strtod(ratio.c_str() + colon + 1, &end);
        if (end != ratio.c_str() + ratio.size())
            throw std::invalid_argument("config: bad beam ratio '" + ratio + "'");
        cfg = BeamConfig::from_ratio(w1, w2);
    } else {
        cfg = beam_from_amplitudes(require(j, "a1", "beam").get<double>(),
                                   require(j, "a2", "beam").get<double>(), 0.0);
    }
    if (j.contains("chi")) cfg.chi = angle_from_json(j.at("chi"), "beam.chi");
    cfg.validate();
    return cfg;
}

std::vector<double> schedule_from_json(const json& j) {
    if (j.contains("beta_schedule")) {
        std::vector<double> grid;
        for (const json& v : j.at("beta_schedule"))
            grid.push_back(angle_from_json(v, "beta_schedule"));
        return grid;
    }
    const json& beta = require(j, "beta", "config");
    const double start = angle_from_json(require(beta, "start", "beta"), "beta.start");
    const double stop = angle_from_json(require(beta, "stop", "beta"), "beta.stop");
    const size_t count = require(beta, "count", "beta").get<size_t>();
    if (count < 1 || !(stop > start))
        throw std::invalid_argument("config: beta grid needs stop > start and count >= 1");
    return estimator::make_schedule(start, stop, count);
}

// a manifest may stand in for its config
const json unwrap_manifest(json j) {
    if (j.contains("command") && j.contains("config")) return j.at("config");
    return j;
}

simkit::Context context_from_run(const json& run) {
    const std::string kind = require(run, "context", "runs[]").get<std::string>();
    if (kind == "whichway") {
        const int blocked = require(run, "blocked_path", "whichway run").get<int>();
        if (blocked != 1 && blocked != 2)
            throw std::invalid_argument("config: blocked_path must be 1 or 2");
        return simkit::Context::whichway(blocked == 1 ? Path::one : Path::two);
    }
    if (kind != "interference")
        throw std::invalid_argument("config: run context must be whichway or interference");
    const std::string port = run.value("port", "both");
    if (port == "+" || port == "plus") return simkit::Context::interference(Port::plus);
    if (port == "-" || port == "minus") return simkit::Context::interference(Port::minus);
    if (port == "both") return simkit::Context::interference_unselected();
    throw std::invalid_argument("config: run port must be \"+\", \"-\" or \"both\"");
}

json context_to_run_json(const simkit::Context& ctx) {
    json j;
    if (ctx.kind == simkit::ContextKind::whichway) {
        j["context"] = "whichway";
        j["blocked_path"] = static_cast<int>(ctx.blocked_path);
    } else {
        j["context"] = "interference";
        j["port"] = ctx.selection == simkit::PortSelection::plus    ? "+"
                    : ctx.selection == simkit::PortSelection::minus ? "-"
                                                                    : "both";
    }
    return j;
}

// ------------------------------------------------------------- writing ----

std::string write_file(const std::string& out_dir, const std::string& name,
                       const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    return name;
}

void write_manifest(const std::string& out_dir, const std::string& command, uint64_t seed,
                    json config, JobOutcome& outcome) {
    json manifest{{"tool", kToolName},
                  {"version", kVersion},
                  {"command", command},
                  {"seed", seed},
                  {"config", std::move(config)},
                  {"outputs", outcome.files}};
    outcome.files.push_back(write_file(out_dir, "manifest.json", manifest.dump(2) + "\n"));
}

// ---------------------------------------------------------- formatting ----

std::optional<std::pair<long, long>> try_rational(double x, long max_den = 10000) {
    // continued-fraction expansion
    double v = x;
    long p_prev = 1, q_prev = 0, p = std::lround(std::floor(v)), q = 1;
    v -= std::floor(v);
    for (int iter = 0; iter < 32 && q <= max_den; ++iter) {
        if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <=
            1e-12 * std::max(1.0, std::abs(x)))
            return std::make_pair(p, q);
        if (v < 1e-15) break;
        v = 1.0 / v;
        const long a = std::lround(std::floor(v));
        v -= std::floor(v);
        const long p_next = a * p + p_prev, q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return std::nullopt;
}

std::string cell(double value) {
    char buf[64];
    if (const auto frac = try_rational(value)) {
        const double exact = static_cast<double>(frac->first) / static_cast<double>(frac->second);
        if (frac->second == 1)
            std::snprintf(buf, sizeof buf, "%ld = %.12f", frac->first, exact);
        else
            std::snprintf(buf, sizeof buf, "%ld/%ld = %.12f", frac->first, frac->second, exact);
    } else {
        std::snprintf(buf, sizeof buf, "%.12f", value);
    }
    return buf;
}

std::string pad(const std::string& s, size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

double exact_sigma_x(const simkit::ExperimentConfig& config, double beta) {
    const simkit::OutcomeDistribution d = simkit::outcome_distribution(config, beta);
    double plus = 0.0, minus = 0.0;
    if (config.context.kind == simkit::ContextKind::whichway ||
        config.context.selection == simkit::PortSelection::both) {
        for (Port port : {Port::plus, Port::minus}) {
            plus += d.at(port, 0);
            minus += d.at(port, 1);
        }
    } else {
        const Port port =
            config.context.selection == simkit::PortSelection::plus ? Port::plus : Port::minus;
        plus = d.at(port, 0);
        minus = d.at(port, 1);
    }
    if (plus + minus <= kDarkPortTol)
        throw std::domain_error("this configuration sends no events to the analyzer");
    return (plus - minus) / (plus + minus);
}

json fit_to_json(const estimator::FringeFit& fit) {
    return json{{"beta0", fit.beta0},
                {"visibility", fit.visibility},
                {"beta0_std", fit.beta0_std},
                {"visibility_std", fit.visibility_std},
                {"chi2_per_dof", fit.chi2_per_dof}};
}

} // namespace

// ------------------------------------------------------------------ table --

std::string render_presence_table(const BeamConfig& cfg) {
    cfg.validate();
    const analytic::PresenceTable inter =
        analytic::presence_table(cfg, analytic::MeasurementContext::interference);
    const analytic::PresenceTable ww =
        analytic::presence_table(cfg, analytic::MeasurementContext::whichway);

    std::ostringstream os;
    char head[160];
    std::snprintf(head, sizeof head, "path presence table  (a1 = %.15g, a2 = %.15g, chi = %s)\n",
                  cfg.a1, cfg.a2, angleio::format_angle(cfg.chi).c_str());
    os << head;
    const size_t w = 28;
    os << "\ninitial probabilities\n"
       << "  " << pad("p1 = " + cell(cfg.p1()), w + 6) << pad("p2 = " + cell(cfg.p2()), w) << "\n";
    const auto emit = [&](const analytic::PresenceTable& table, const char* title) {
        os << "\n" << title << "\n";
        os << "  " << pad("outcome", 10) << pad("probability", w) << pad("presence in path 1", w)
           << pad("presence in path 2", w) << "\n";
        for (const analytic::PresenceRow& row : table.rows) {
            os << "  " << pad(row.outcome, 10) << pad(cell(row.probability), w);
            if (row.divergent)
                os << pad("divergent", w) << pad("divergent", w);
            else
                os << pad(cell(row.presence1), w) << pad(cell(row.presence2), w);
            os << "\n";
        }
        os << "  " << pad("average", 10) << pad("", w) << pad(cell(table.avg_presence1), w)
           << pad(cell(table.avg_presence2), w) << "\n";
        os << "  " << pad("spread", 10) << pad("", w) << pad(cell(table.presence_spread), w)
           << pad(cell(table.presence_spread), w) << "\n";
    };
    emit(inter, "interference context");
    emit(ww, "which-way context");
    return os.str();
}

std::string presence_table_json(const BeamConfig& cfg) {
    json out{{"beam", {{"a1", cfg.a1}, {"a2", cfg.a2}, {"chi", cfg.chi}}}};
    for (analytic::MeasurementContext ctx :
         {analytic::MeasurementContext::interference, analytic::MeasurementContext::whichway}) {
        const analytic::PresenceTable table = analytic::presence_table(cfg, ctx);
        json rows = json::array();
        for (const analytic::PresenceRow& row : table.rows) {
            json r{{"outcome", row.outcome}, {"probability", row.probability}};
            if (row.divergent) {
                r["divergent"] = true;
            } else {
                r["presence1"] = row.presence1;
                r["presence2"] = row.presence2;
            }
            rows.push_back(std::move(r));
        }
        out[analytic::to_label(ctx)] = {{"rows", std::move(rows)},
                                        {"avg_presence1", table.avg_presence1},
                                        {"avg_presence2", table.avg_presence2},
                                        {"presence_spread", table.presence_spread}};
    }
    return out.dump(2) + "\n";
}

JobOutcome run_table_job(const BeamConfig& cfg, const std::string& out_dir) {
    JobOutcome outcome;
    outcome.summary = render_presence_table(cfg);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        outcome.files.push_back(write_file(out_dir, "table.txt", outcome.summary));
        outcome.files.push_back(write_file(out_dir, "table.json", presence_table_json(cfg)));
        write_manifest(out_dir, "table", 0,
                       json{{"beam", {{"a1", cfg.a1}, {"a2", cfg.a2}, {"chi", cfg.chi}}}},
                       outcome);
    }
    return outcome;
}

// ----------------------------------------------------------------- fringe --

FringeJob fringe_job_from_json_text(const std::string& text) {
    const json j = unwrap_manifest(parse_json_text(text));
    FringeJob job;
    job.beam = beam_from_json(require(j, "beam", "config"));
    job.alpha = angle_from_json(require(j, "alpha", "config"), "alpha");
    job.beta_schedule = schedule_from_json(j);
    job.shots_per_setting = require(j, "shots_per_setting", "config").get<uint64_t>();
    if (job.shots_per_setting < 1)
        throw std::invalid_argument("config: shots_per_setting must be >= 1");
    job.poisson_totals = j.value("poisson_totals", true);
    job.seed = j.value("seed", uint64_t{1});
    const json& runs = require(j, "runs", "config");
    if (!runs.is_array() || runs.empty())
        throw std::invalid_argument("config: runs must be a nonempty array");
    for (const json& run : runs) {
        FringeRun fr;
        fr.context = context_from_run(run);
        fr.label = run.value("label", simkit::to_label(fr.context));
        job.runs.push_back(std::move(fr));
    }
    return job;
}

std::string to_json_text(const FringeJob& job) {
    json runs = json::array();
    for (const FringeRun& run : job.runs) {
        json r = context_to_run_json(run.context);
        r["label"] = run.label;
        runs.push_back(std::move(r));
    }
    return json{{"beam", {{"a1", job.beam.a1}, {"a2", job.beam.a2}, {"chi", job.beam.chi}}},
                {"alpha", job.alpha},
                {"beta_schedule", job.beta_schedule},
                {"shots_per_setting", job.shots_per_setting},
                {"poisson_totals", job.poisson_totals},
                {"seed", job.seed},
                {"runs", runs}}
        .dump(2);
}

JobOutcome run_fringe_job(const FringeJob& job, const std::string& out_dir) {
    if (out_dir.empty()) throw std::invalid_argument("fringe: an output directory is required");
    fs::create_directories(out_dir);
    JobOutcome outcome;
    json fits = json::array();
    std::ostringstream summary;
    for (size_t i = 0; i < job.runs.size(); ++i) {
        const FringeRun& run = job.runs[i];
        simkit::ExperimentConfig config;
        config.beam = job.beam;
        config.alpha = job.alpha;
        config.context = run.context;
        config.beta_schedule = job.beta_schedule;
        config.shots_per_setting = job.shots_per_setting;
        config.poisson_totals = job.poisson_totals;
        config.seed = rng::derive(job.seed, i);

        const simkit::FringeDataset dataset = simkit::sample_run(config);
        const estimator::FringeFit fit = estimator::fit_fringe(dataset);

        // exact fringe of the same configuration, as overlay and as theory
        std::vector<estimator::FringePoint> exact;
        std::ostringstream overlay;
        overlay << "beta_rad,sigma_x\n";
        for (double beta : estimator::make_schedule(-M_PI, M_PI, 128)) {
            const double y = exact_sigma_x(config, beta);
            char line[64];
            std::snprintf(line, sizeof line, "%.17g,%.17g\n", beta, y);
            overlay << line;
            exact.push_back({beta, y, 0.0});
        }
        const estimator::FringeFit theory = estimator::fit_fringe(exact);

        std::ostringstream csv;
        simkit::write_csv(dataset, csv);
        outcome.files.push_back(write_file(out_dir, run.label + ".csv", csv.str()));
        outcome.files.push_back(
            write_file(out_dir, run.label + ".json", simkit::to_json(dataset) + "\n"));
        outcome.files.push_back(
            write_file(out_dir, run.label + "_overlay.csv", overlay.str()));

        json entry = context_to_run_json(run.context);
        entry["label"] = run.label;
        entry["seed"] = config.seed;
        entry["fit"] = fit_to_json(fit);
        entry["theory"] = {{"beta0", theory.beta0}, {"visibility", theory.visibility}};
        fits.push_back(std::move(entry));

        char line[160];
        std::snprintf(line, sizeof line,
                      "%-24s beta0 = %+.5f +- %.5f  (theory %+.5f)   nu = %.4f +- %.4f\n",
                      run.label.c_str(), fit.beta0, fit.beta0_std, theory.beta0, fit.visibility,
                      fit.visibility_std);
        summary << line;
    }
    outcome.files.push_back(
        write_file(out_dir, "fits.json", json{{"runs", fits}}.dump(2) + "\n"));
    write_manifest(out_dir, "fringe", job.seed, json::parse(to_json_text(job)), outcome);
    outcome.summary = summary.str();
    return outcome;
}

// ------------------------------------------------------------------- scan --

ScanJob scan_job_from_json_text(const std::string& text) {
    const json j = unwrap_manifest(parse_json_text(text));
    ScanJob job;
    job.beam = beam_from_json(require(j, "beam", "config"));
    for (const json& a : require(j, "alphas", "config"))
        job.alphas.push_back(angle_from_json(a, "alphas"));
    if (job.alphas.empty()) throw std::invalid_argument("config: alphas must be nonempty");
    for (double a : job.alphas)
        if (a == 0.0) throw std::invalid_argument("config: alphas must be nonzero");
    if (j.contains("contexts")) {
        for (const json& c : j.at("contexts")) {
            const std::string name = c.get<std::string>();
            if (name == "interference")
                job.contexts.push_back(analytic::MeasurementContext::interference);
            else if (name == "whichway")
                job.contexts.push_back(analytic::MeasurementContext::whichway);
            else
                throw std::invalid_argument("config: unknown context '" + name + "'");
        }
    } else {
        job.contexts = {analytic::MeasurementContext::interference,
                        analytic::MeasurementContext::whichway};
    }
    job.beta_schedule = schedule_from_json(j);
    job.shots_per_setting = require(j, "shots_per_setting", "config").get<uint64_t>();
    if (job.shots_per_setting < 1)
        throw std::invalid_argument("config: shots_per_setting must be >= 1");
    job.poisson_totals = j.value("poisson_totals", false);
    job.seed = j.value("seed", uint64_t{1});
    return job;
}

std::string to_json_text(const ScanJob& job) {
    json contexts = json::array();
    for (analytic::MeasurementContext c : job.contexts) contexts.push_back(analytic::to_label(c));
    return json{{"beam", {{"a1", job.beam.a1}, {"a2", job.beam.a2}, {"chi", job.beam.chi}}},
                {"alphas", job.alphas},
                {"contexts", contexts},
                {"beta_schedule", job.beta_schedule},
                {"shots_per_setting", job.shots_per_setting},
                {"poisson_totals", job.poisson_totals},
                {"seed", job.seed}}
        .dump(2);
}

JobOutcome run_scan_job(const ScanJob& job, const std::string& out_dir) {
    if (out_dir.empty())
        throw std::invalid_argument("presence-scan: an output directory is required");
    fs::create_directories(out_dir);
    JobOutcome outcome;
    std::ostringstream csv, summary;
    csv << "alpha_rad,context,label,presence,presence_std,theory_exact,theory_weak\n";
    json points = json::array();
    for (size_t ic = 0; ic < job.contexts.size(); ++ic) {
        const analytic::MeasurementContext context = job.contexts[ic];
        estimator::ScanOptions options;
        options.beta_schedule = job.beta_schedule;
        options.shots_per_setting = job.shots_per_setting;
        options.poisson_totals = job.poisson_totals;
        options.seed = rng::derive(job.seed, ic);
        const std::vector<estimator::PresencePoint> scan =
            estimator::presence_scan(job.alphas, job.beam, context, options);
        for (const estimator::PresencePoint& p : scan) {
            char line[200];
            std::snprintf(line, sizeof line, "%.17g,%s,%s,%.17g,%.17g,%.17g,%.17g\n", p.alpha,
                          analytic::to_label(context), p.label.c_str(), p.presence,
                          p.presence_std, p.theory_exact, p.theory_weak);
            csv << line;
            points.push_back(json{{"alpha", p.alpha},
                                  {"context", analytic::to_label(context)},
                                  {"label", p.label},
                                  {"presence", p.presence},
                                  {"presence_std", p.presence_std},
                                  {"theory_exact", p.theory_exact},
                                  {"theory_weak", p.theory_weak}});
            char txt[160];
            std::snprintf(txt, sizeof txt,
                          "%-13s %-6s alpha = %-8.5f presence = %+.4f +- %.4f (exact %+.4f)\n",
                          analytic::to_label(context), p.label.c_str(), p.alpha, p.presence,
                          p.presence_std, p.theory_exact);
            summary << txt;
        }
    }
    outcome.files.push_back(write_file(out_dir, "presence.csv", csv.str()));
    outcome.files.push_back(
        write_file(out_dir, "presence.json", json{{"points", points}}.dump(2) + "\n"));
    write_manifest(out_dir, "presence-scan", job.seed, json::parse(to_json_text(job)), outcome);
    outcome.summary = summary.str();
    return outcome;
}

// ------------------------------------------------------------------ ozawa --

OzawaJob ozawa_job_from_json_text(const std::string& text) {
    const json j = unwrap_manifest(parse_json_text(text));
    OzawaJob job;
    job.beam = beam_from_json(require(j, "beam", "config"));
    if (j.contains("grid")) {
        const json& grid = j.at("grid");
        job.est_min = grid.value("min", job.est_min);
        job.est_max = grid.value("max", job.est_max);
        job.grid_count = grid.value("count", job.grid_count);
    }
    if (!(job.est_max > job.est_min) || job.grid_count < 2)
        throw std::invalid_argument("config: ozawa grid needs max > min and count >= 2");
    return job;
}

std::string to_json_text(const OzawaJob& job) {
    return json{{"beam", {{"a1", job.beam.a1}, {"a2", job.beam.a2}, {"chi", job.beam.chi}}},
                {"grid",
                 {{"min", job.est_min}, {"max", job.est_max}, {"count", job.grid_count}}}}
        .dump(2);
}

JobOutcome run_ozawa_job(const OzawaJob& job, const std::string& out_dir) {
    if (out_dir.empty()) throw std::invalid_argument("ozawa: an output directory is required");
    fs::create_directories(out_dir);
    JobOutcome outcome;
    json result;
    try {
        const double w_plus = analytic::weak_value(Path::one, Port::plus, job.beam).value.real();
        const double w_minus = analytic::weak_value(Path::one, Port::minus, job.beam).value.real();
        const double step =
            (job.est_max - job.est_min) / static_cast<double>(job.grid_count - 1);
        std::ostringstream csv;
        csv << "est_plus,est_minus,eps2\n";
        double best = 1e300, best_p = 0.0, best_m = 0.0;
        double best_common = 1e300, best_common_est = 0.0;
        for (size_t i = 0; i < job.grid_count; ++i) {
            const double ep = job.est_min + step * static_cast<double>(i);
            for (size_t k = 0; k < job.grid_count; ++k) {
                const double em = job.est_min + step * static_cast<double>(k);
                const double eps2 = analytic::ozawa_error({ep, em}, job.beam);
                char line[120];
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", ep, em, eps2);
                csv << line;
                if (eps2 < best) {
                    best = eps2;
                    best_p = ep;
                    best_m = em;
                }
            }
            const double diag = analytic::ozawa_error({ep, ep}, job.beam);
            if (diag < best_common) {
                best_common = diag;
                best_common_est = ep;
            }
        }
        outcome.files.push_back(write_file(out_dir, "ozawa_grid.csv", csv.str()));
        result = {{"divergent", false},
                  {"weak_values", {{"plus", w_plus}, {"minus", w_minus}}},
                  {"eps2_at_weak_values", analytic::ozawa_error({w_plus, w_minus}, job.beam)},
                  {"grid_minimum", {{"est_plus", best_p}, {"est_minus", best_m}, {"eps2", best}}},
                  {"common_estimate_minimum",
                   {{"est", best_common_est}, {"eps2", best_common}}}};
        char txt[220];
        std::snprintf(txt, sizeof txt,
                      "grid minimum eps^2 = %.6g at (%.4f, %.4f); weak values (%.4f, %.4f); "
                      "common-estimate minimum %.6g at %.4f\n",
                      best, best_p, best_m, w_plus, w_minus, best_common, best_common_est);
        outcome.summary = txt;
    } catch (const DivergentWeakValue& e) {
        result = {{"divergent", true}, {"detail", e.what()}};
        outcome.summary = std::string("dark port: ") + e.what() + "\n";
    }
    outcome.files.push_back(write_file(out_dir, "ozawa.json", result.dump(2) + "\n"));
    write_manifest(out_dir, "ozawa", 0, json::parse(to_json_text(job)), outcome);
    return outcome;
}

// ----------------------------------------------------------------- verify --

std::string report_to_json(const acceptance::Report& report) {
    // timings stay on the console; the report must be identical for a seed
    json criteria = json::array();
    for (const acceptance::CriterionResult& r : report.results)
        criteria.push_back(
            json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    return json{{"seed", report.seed}, {"all_pass", report.all_pass()}, {"criteria", criteria}}
               .dump(2) +
           "\n";
}

JobOutcome run_verify_job(uint64_t seed, const std::string& out_dir,
                          const acceptance::Tolerances& tol) {
    const acceptance::Report report = acceptance::run_all(seed, tol);
    JobOutcome outcome;
    outcome.summary = acceptance::render_text(report);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        outcome.files.push_back(write_file(out_dir, "report.json", report_to_json(report)));
        write_manifest(out_dir, "verify", seed, json::object(), outcome);
    }
    if (!report.all_pass()) outcome.summary += "VERIFY FAILED\n";
    return outcome;
}

// ---------------------------------------------------------------- helpers --

BeamConfig beam_from_amplitudes(double a1, double a2, double chi) {
    const double n2 = a1 * a1 + a2 * a2;
    if (a1 < 0.0 || a2 < 0.0 || std::abs(n2 - 1.0) > 1e-6)
        throw std::invalid_argument("config: beam amplitudes must satisfy a1^2 + a2^2 = 1");
    if (std::abs(n2 - 1.0) <= kExactTol) return BeamConfig{a1, a2, chi}; // keep bits as given
    const double n = std::sqrt(n2);
    return BeamConfig{a1 / n, a2 / n, chi};
}

std::string load_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double angle_from_json_text(const std::string& json_value_dump) {
    return angle_from_json(parse_json_text(json_value_dump), "angle");
}

BeamConfig beam_from_json_text(const std::string& json_object_dump) {
    return beam_from_json(parse_json_text(json_object_dump));
}

} // namespace fcomp::jobs
