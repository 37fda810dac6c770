#include "fcomp/simkit.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fcomp/qcore.hpp"
#include "fcomp/rng.hpp"

namespace fcomp::simkit {

using nlohmann::json;

std::string to_label(const Context& ctx) {
    if (ctx.kind == ContextKind::whichway)
        return ctx.blocked_path == Path::two ? "whichway-path1" : "whichway-path2";
    switch (ctx.selection) {
        case PortSelection::plus: return "interference-port+";
        case PortSelection::minus: return "interference-port-";
        case PortSelection::both: return "interference-unselected";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    beam.validate();
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    if (beta_schedule.empty()) throw std::invalid_argument("beta schedule must be nonempty");
    for (double b : beta_schedule)
        if (!std::isfinite(b)) throw std::invalid_argument("beta schedule entries must be finite");
    if (shots_per_setting < 1) throw std::invalid_argument("shots_per_setting must be >= 1");
}

double OutcomeDistribution::total() const {
    double t = absorbed;
    for (const auto& row : port_spin) t += row[0] + row[1];
    return t;
}

OutcomeDistribution outcome_distribution(const ExperimentConfig& config, double beta) {
    config.validate();
    qcore::CompositeState state = qcore::prepare_initial(config.beam);
    state = qcore::apply_coupling(state, config.alpha);

    OutcomeDistribution dist;
    if (config.context.kind == ContextKind::whichway) {
        const double before = state.norm2();
        state = qcore::block_path(state, config.context.blocked_path);
        dist.absorbed = before - state.norm2();
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (Port port : {Port::plus, Port::minus}) {
        qcore::CompositeState exit = qcore::project_exit(state, port, config.beam);
        exit = qcore::apply_compensation(exit, beta);
        double px_plus = 0.0, px_minus = 0.0;
        for (Path p : {Path::one, Path::two}) {
            px_plus += std::norm(r * (exit.at(p, Spin::up) + exit.at(p, Spin::down)));
            px_minus += std::norm(r * (exit.at(p, Spin::up) - exit.at(p, Spin::down)));
        }
        dist.at(port, 0) = px_plus;
        dist.at(port, 1) = px_minus;
    }
    return dist;
}

namespace {

// fixed event order for the CDF walk
enum Event : int { kPlusXPlus = 0, kPlusXMinus, kMinusXPlus, kMinusXMinus, kAbsorbed };

struct EventCdf {
    double edge[5];
};

EventCdf make_cdf(const OutcomeDistribution& dist) {
    EventCdf cdf{};
    double acc = 0.0;
    const double p[5] = {dist.port_spin[0][0], dist.port_spin[0][1], dist.port_spin[1][0],
                         dist.port_spin[1][1], dist.absorbed};
    for (int i = 0; i < 5; ++i) {
        acc += p[i];
        cdf.edge[i] = acc;
    }
    cdf.edge[4] = 1.0; // guard against rounding in the last bin
    return cdf;
}

SettingCounts sample_setting(const ExperimentConfig& config, uint64_t setting_index) {
    const double beta = config.beta_schedule[setting_index];
    const OutcomeDistribution dist = outcome_distribution(config, beta);
    const EventCdf cdf = make_cdf(dist);

    const uint64_t run_key = rng::derive(config.seed, 0x5EEDULL);
    const uint64_t setting_key = rng::derive(run_key, setting_index);
    uint64_t shots = config.shots_per_setting;
    if (config.poisson_totals) {
        rng::Stream totals(rng::derive(setting_key, 1));
        shots = rng::poisson(totals, static_cast<double>(config.shots_per_setting));
    }

    const uint64_t shot_key = rng::derive(setting_key, 2);
    uint64_t n[5] = {0, 0, 0, 0, 0};
    for (uint64_t s = 0; s < shots; ++s) {
        const double u = rng::unit_at(shot_key, s);
        int e = 0;
        while (e < 4 && u >= cdf.edge[e]) ++e;
        ++n[e];
    }

    SettingCounts counts;
    counts.beta = beta;
    switch (config.context.kind == ContextKind::whichway ? PortSelection::both
                                                         : config.context.selection) {
        case PortSelection::plus:
            counts.n_x_plus = n[kPlusXPlus];
            counts.n_x_minus = n[kPlusXMinus];
            counts.n_absorbed = n[kMinusXPlus] + n[kMinusXMinus] + n[kAbsorbed];
            break;
        case PortSelection::minus:
            counts.n_x_plus = n[kMinusXPlus];
            counts.n_x_minus = n[kMinusXMinus];
            counts.n_absorbed = n[kPlusXPlus] + n[kPlusXMinus] + n[kAbsorbed];
            break;
        case PortSelection::both:
            counts.n_x_plus = n[kPlusXPlus] + n[kMinusXPlus];
            counts.n_x_minus = n[kPlusXMinus] + n[kMinusXMinus];
            counts.n_absorbed = n[kAbsorbed];
            break;
    }
    return counts;
}

} // namespace

FringeDataset sample_run(const ExperimentConfig& config, unsigned max_threads) {
    config.validate();
    const size_t n_settings = config.beta_schedule.size();
    FringeDataset dataset;
    dataset.config = config;
    dataset.rows.resize(n_settings);

    unsigned workers = max_threads == 0 ? std::thread::hardware_concurrency() : max_threads;
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n_settings));

    // keyed streams make the result independent of the partitioning
    if (workers <= 1 || config.shots_per_setting * n_settings < 100000) {
        for (size_t i = 0; i < n_settings; ++i) dataset.rows[i] = sample_setting(config, i);
        return dataset;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w]() {
            for (size_t i = w; i < n_settings; i += workers)
                dataset.rows[i] = sample_setting(config, i);
        }));
    }
    for (auto& f : futures) f.get();
    return dataset;
}

SigmaXEstimate estimate_sigma_x(uint64_t n_x_plus, uint64_t n_x_minus) {
    const double np = static_cast<double>(n_x_plus);
    const double nm = static_cast<double>(n_x_minus);
    const double n = np + nm;
    if (n <= 0.0) throw std::invalid_argument("estimate_sigma_x: zero detected counts");
    return {(np - nm) / n, 2.0 * std::sqrt(np * nm / (n * n * n))};
}

double regularized_sigma_x_error(uint64_t n_x_plus, uint64_t n_x_minus) {
    const double np = static_cast<double>(n_x_plus) + 0.5;
    const double nm = static_cast<double>(n_x_minus) + 0.5;
    const double n = np + nm;
    return 2.0 * std::sqrt(np * nm / (n * n * n));
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json context_to_json(const Context& ctx) {
    json j;
    if (ctx.kind == ContextKind::whichway) {
        j["kind"] = "whichway";
        j["blocked_path"] = static_cast<int>(ctx.blocked_path);
    } else {
        j["kind"] = "interference";
        j["selection"] = ctx.selection == PortSelection::plus    ? "plus"
                         : ctx.selection == PortSelection::minus ? "minus"
                                                                 : "both";
    }
    return j;
}

Context context_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "whichway") {
        const int blocked = j.at("blocked_path").get<int>();
        if (blocked != 1 && blocked != 2)
            throw std::invalid_argument("blocked_path must be 1 or 2");
        return Context::whichway(blocked == 1 ? Path::one : Path::two);
    }
    if (kind != "interference")
        throw std::invalid_argument("context kind must be whichway or interference");
    const std::string sel = j.value("selection", "both");
    if (sel == "plus") return Context::interference(Port::plus);
    if (sel == "minus") return Context::interference(Port::minus);
    if (sel == "both") return Context::interference_unselected();
    throw std::invalid_argument("selection must be plus, minus or both");
}

json config_to_json_obj(const ExperimentConfig& c) {
    return json{{"beam", {{"a1", c.beam.a1}, {"a2", c.beam.a2}, {"chi", c.beam.chi}}},
                {"alpha", c.alpha},
                {"context", context_to_json(c.context)},
                {"beta_schedule", c.beta_schedule},
                {"shots_per_setting", c.shots_per_setting},
                {"seed", c.seed},
                {"poisson_totals", c.poisson_totals}};
}

ExperimentConfig config_from_json_obj(const json& j) {
    ExperimentConfig c;
    const json& beam = j.at("beam");
    c.beam.a1 = beam.at("a1").get<double>();
    c.beam.a2 = beam.at("a2").get<double>();
    c.beam.chi = beam.value("chi", 0.0);
    c.alpha = j.at("alpha").get<double>();
    c.context = context_from_json(j.at("context"));
    c.beta_schedule = j.at("beta_schedule").get<std::vector<double>>();
    c.shots_per_setting = j.at("shots_per_setting").get<uint64_t>();
    c.seed = j.value("seed", uint64_t{0});
    c.poisson_totals = j.value("poisson_totals", false);
    c.validate();
    return c;
}

} // namespace

void write_csv(const FringeDataset& dataset, std::ostream& out) {
    out << "beta_rad,n_x_plus,n_x_minus,n_absorbed\n";
    for (const SettingCounts& row : dataset.rows)
        out << fmt_double(row.beta) << ',' << row.n_x_plus << ',' << row.n_x_minus << ','
            << row.n_absorbed << '\n';
}

std::vector<SettingCounts> read_csv_rows(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "beta_rad,n_x_plus,n_x_minus,n_absorbed")
        throw std::invalid_argument("fringe CSV: missing or unexpected header");
    std::vector<SettingCounts> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        SettingCounts row;
        char* end = nullptr;
        const char* p = line.c_str();
        row.beta = std::strtod(p, &end);
        unsigned long long v[3];
        for (int i = 0; i < 3; ++i) {
            if (*end != ',')
                throw std::invalid_argument("fringe CSV line " + std::to_string(lineno) +
                                            ": expected 4 comma-separated fields");
            v[i] = std::strtoull(end + 1, &end, 10);
        }
        if (*end != '\0' && *end != '\r')
            throw std::invalid_argument("fringe CSV line " + std::to_string(lineno) +
                                        ": trailing characters");
        row.n_x_plus = v[0];
        row.n_x_minus = v[1];
        row.n_absorbed = v[2];
        rows.push_back(row);
    }
    return rows;
}

std::string to_json(const ExperimentConfig& config) { return config_to_json_obj(config).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

std::string to_json(const FringeDataset& dataset) {
    json rows = json::array();
    for (const SettingCounts& row : dataset.rows)
        rows.push_back(json{{"beta_rad", row.beta},
                            {"n_x_plus", row.n_x_plus},
                            {"n_x_minus", row.n_x_minus},
                            {"n_absorbed", row.n_absorbed}});
    return json{{"config", config_to_json_obj(dataset.config)}, {"rows", rows}}.dump(2);
}

FringeDataset dataset_from_json(const std::string& text) {
    const json j = json::parse(text);
    FringeDataset dataset;
    dataset.config = config_from_json_obj(j.at("config"));
    for (const json& r : j.at("rows"))
        dataset.rows.push_back(SettingCounts{r.at("beta_rad").get<double>(),
                                             r.at("n_x_plus").get<uint64_t>(),
                                             r.at("n_x_minus").get<uint64_t>(),
                                             r.at("n_absorbed").get<uint64_t>()});
    return dataset;
}

} // namespace fcomp::simkit
