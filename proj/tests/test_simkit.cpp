#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fcomp/analytic.hpp"
#include "fcomp/rng.hpp"
#include "fcomp/simkit.hpp"
#include "oracle.hpp"

using namespace fcomp;
using namespace fcomp::simkit;

namespace {

const BeamConfig kFourToOne = BeamConfig::from_ratio(4.0, 1.0);

ExperimentConfig base_config(Context ctx, double alpha, size_t n_beta = 8,
                             uint64_t shots = 1000) {
    ExperimentConfig c;
    c.beam = kFourToOne;
    c.alpha = alpha;
    c.context = ctx;
    for (size_t i = 0; i < n_beta; ++i)
        c.beta_schedule.push_back(-M_PI + 2.0 * M_PI * static_cast<double>(i) /
                                             static_cast<double>(n_beta));
    c.shots_per_setting = shots;
    c.seed = 0x5eed;
    return c;
}

} // namespace

TEST_CASE("outcome probabilities sum to one") {
    std::mt19937_64 gen(0x1);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const BeamConfig beam = oracle::random_beam(gen, trial % 2 ? angle(gen) : 0.0);
        ExperimentConfig c = base_config(unit(gen) < 0.5
                                             ? Context::whichway(unit(gen) < 0.5 ? Path::one
                                                                                 : Path::two)
                                             : Context::interference_unselected(),
                                         angle(gen));
        c.beam = beam;
        const OutcomeDistribution d = outcome_distribution(c, angle(gen));
        CHECK(std::abs(d.total() - 1.0) <= 1e-12);
        for (const auto& row : d.port_spin)
            for (double p : row) CHECK(p >= -1e-15);
        CHECK(d.absorbed >= -1e-15);
    }
}

TEST_CASE("which-way block: absorbed weight and restored spin at beta = alpha") {
    const double alpha = 0.6321;
    const ExperimentConfig c = base_config(Context::whichway(Path::two), alpha);
    const OutcomeDistribution d = outcome_distribution(c, alpha);
    CHECK(d.absorbed == doctest::Approx(0.2).epsilon(1e-12));
    const double x_plus = d.at(Port::plus, 0) + d.at(Port::minus, 0);
    const double x_minus = d.at(Port::plus, 1) + d.at(Port::minus, 1);
    CHECK(x_plus == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(x_minus <= 1e-15);
}

TEST_CASE("interference: perfect compensation empties the x- bin of the port") {
    const double alpha = M_PI / 4.0;
    const double beta0 = analytic::compensation_solution(Port::plus, alpha, kFourToOne)
                             .beta0.real();
    const ExperimentConfig c = base_config(Context::interference(Port::plus), alpha);
    const OutcomeDistribution d = outcome_distribution(c, beta0);
    CHECK(d.at(Port::plus, 1) <= 1e-12);
    CHECK(d.at(Port::plus, 0) == doctest::Approx(0.869551813004515).epsilon(1e-10));
}

TEST_CASE("no coupling, no compensation: ports split 9:1, all spins x+") {
    const ExperimentConfig c = base_config(Context::interference_unselected(), 0.0);
    const OutcomeDistribution d = outcome_distribution(c, 0.0);
    CHECK(d.at(Port::plus, 0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(d.at(Port::minus, 0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(d.at(Port::plus, 1) <= 1e-15);
    CHECK(d.at(Port::minus, 1) <= 1e-15);
    CHECK(d.absorbed == 0.0);
}

TEST_CASE("port-swap identity: chi = pi relabels the ports") {
    for (double alpha : {0.3, M_PI / 4.0}) {
        ExperimentConfig zero = base_config(Context::interference_unselected(), alpha);
        ExperimentConfig swapped = zero;
        swapped.beam.chi = M_PI;
        for (double beta : zero.beta_schedule) {
            const OutcomeDistribution d0 = outcome_distribution(zero, beta);
            const OutcomeDistribution dp = outcome_distribution(swapped, beta);
            for (int s = 0; s < 2; ++s) {
                CHECK(std::abs(dp.at(Port::plus, s) - d0.at(Port::minus, s)) <= 1e-12);
                CHECK(std::abs(dp.at(Port::minus, s) - d0.at(Port::plus, s)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("sampling is deterministic in the seed and thread count") {
    ExperimentConfig c = base_config(Context::interference(Port::plus), 0.4, 16, 20000);
    c.poisson_totals = true;
    const FringeDataset a = sample_run(c);
    const FringeDataset b = sample_run(c);
    const FringeDataset serial = sample_run(c, 1);
    const FringeDataset wide = sample_run(c, 7);
    REQUIRE(a.rows.size() == c.beta_schedule.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].n_x_plus == b.rows[i].n_x_plus);
        CHECK(a.rows[i].n_x_minus == b.rows[i].n_x_minus);
        CHECK(a.rows[i].n_absorbed == b.rows[i].n_absorbed);
        CHECK(a.rows[i].n_x_plus == serial.rows[i].n_x_plus);
        CHECK(a.rows[i].n_x_plus == wide.rows[i].n_x_plus);
        CHECK(a.rows[i].n_absorbed == wide.rows[i].n_absorbed);
    }
    ExperimentConfig other = c;
    other.seed = c.seed + 1;
    const FringeDataset different = sample_run(other);
    size_t same = 0;
    for (size_t i = 0; i < a.rows.size(); ++i)
        same += a.rows[i].n_x_plus == different.rows[i].n_x_plus;
    CHECK(same < a.rows.size());
}

TEST_CASE("per-setting totals are conserved") {
    ExperimentConfig c = base_config(Context::interference(Port::minus), 0.7, 12, 5000);
    const FringeDataset fixed = sample_run(c);
    for (const SettingCounts& row : fixed.rows) CHECK(row.total() == c.shots_per_setting);

    c.poisson_totals = true;
    const FringeDataset dispersed = sample_run(c);
    double mean = 0.0;
    bool varied = false;
    for (const SettingCounts& row : dispersed.rows) {
        mean += static_cast<double>(row.total());
        varied |= row.total() != c.shots_per_setting;
    }
    mean /= static_cast<double>(dispersed.rows.size());
    CHECK(varied);
    CHECK(std::abs(mean - 5000.0) <=
          5.0 * std::sqrt(5000.0 / static_cast<double>(dispersed.rows.size())));
}

TEST_CASE("empirical frequencies converge to the outcome distribution") {
    ExperimentConfig c = base_config(Context::whichway(Path::two), M_PI / 4.0, 1, 1000000);
    c.beta_schedule = {0.9};
    const OutcomeDistribution d = outcome_distribution(c, 0.9);
    const FringeDataset data = sample_run(c);
    const double n = static_cast<double>(c.shots_per_setting);
    const double px = d.at(Port::plus, 0) + d.at(Port::minus, 0);
    const double pm = d.at(Port::plus, 1) + d.at(Port::minus, 1);
    const auto within5 = [&](uint64_t count, double p) {
        const double sigma = std::sqrt(p * (1.0 - p) * n);
        return std::abs(static_cast<double>(count) - p * n) <= 5.0 * sigma;
    };
    CHECK(within5(data.rows[0].n_x_plus, px));
    CHECK(within5(data.rows[0].n_x_minus, pm));
    CHECK(within5(data.rows[0].n_absorbed, d.absorbed));
}

TEST_CASE("blocking the only occupied path leaves nothing to detect") {
    ExperimentConfig c;
    c.beam = {1.0, 0.0};
    c.alpha = 0.5;
    c.context = Context::whichway(Path::one);
    c.beta_schedule = {0.0, 1.0, 2.0};
    c.shots_per_setting = 1000;
    c.seed = 3;
    const FringeDataset data = sample_run(c);
    for (const SettingCounts& row : data.rows) {
        CHECK(row.detected() == 0);
        CHECK(row.n_absorbed == c.shots_per_setting);
    }
}

TEST_CASE("analyzer readout estimate") {
    const SigmaXEstimate sure = estimate_sigma_x(100, 0);
    CHECK(sure.value == 1.0);
    CHECK(sure.std_error == 0.0);
    const SigmaXEstimate even = estimate_sigma_x(50, 50);
    CHECK(even.value == 0.0);
    CHECK(even.std_error == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(estimate_sigma_x(0, 0), std::invalid_argument);
    CHECK(regularized_sigma_x_error(100, 0) > 0.0);
}

TEST_CASE("readout at the optimum stays at +1 within counting noise") {
    const double alpha = M_PI / 8.0;
    const double beta0 = analytic::compensation_solution(Port::plus, alpha, kFourToOne)
                             .beta0.real();
    ExperimentConfig c = base_config(Context::interference(Port::plus), alpha, 1, 10000);
    c.beta_schedule = {beta0};
    const FringeDataset data = sample_run(c);
    const SigmaXEstimate est = estimate_sigma_x(data.rows[0].n_x_plus, data.rows[0].n_x_minus);
    CHECK(est.value >= 0.999);
}

TEST_CASE("six reference runs converge to the analytic fringe at N = 1e6") {
    for (double alpha : {M_PI / 4.0, M_PI / 8.0, M_PI / 16.0}) {
        for (int which : {0, 1}) {
            const Context ctx = which == 0 ? Context::whichway(Path::two)
                                           : Context::interference(Port::plus);
            ExperimentConfig c = base_config(ctx, alpha, 16, 1000000);
            c.seed = 0xC0DE + which + static_cast<uint64_t>(alpha * 1e6);
            const FringeDataset data = sample_run(c);
            for (const SettingCounts& row : data.rows) {
                const SigmaXEstimate est = estimate_sigma_x(row.n_x_plus, row.n_x_minus);
                const double expected =
                    which == 0 ? std::cos(row.beta - alpha)
                               : analytic::spin_expectations(Port::plus, alpha, row.beta,
                                                             kFourToOne)
                                     .x;
                const double se = std::max(est.std_error, 1e-6);
                CHECK(std::abs(est.value - expected) < 5.0 * se);
            }
        }
    }
}

TEST_CASE("CSV round trip and header stability") {
    ExperimentConfig c = base_config(Context::whichway(Path::one), 0.25, 5, 200);
    const FringeDataset data = sample_run(c);
    std::ostringstream out;
    write_csv(data, out);
    CHECK(out.str().substr(0, out.str().find('\n')) == "beta_rad,n_x_plus,n_x_minus,n_absorbed");
    std::istringstream in(out.str());
    const std::vector<SettingCounts> rows = read_csv_rows(in);
    REQUIRE(rows.size() == data.rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].beta == data.rows[i].beta);
        CHECK(rows[i].n_x_plus == data.rows[i].n_x_plus);
        CHECK(rows[i].n_x_minus == data.rows[i].n_x_minus);
        CHECK(rows[i].n_absorbed == data.rows[i].n_absorbed);
    }
    std::istringstream bad("wrong,header\n");
    CHECK_THROWS_AS(read_csv_rows(bad), std::invalid_argument);
}

TEST_CASE("JSON round trip embeds the full run configuration") {
    ExperimentConfig c = base_config(Context::interference(Port::minus), 0.33, 4, 77);
    c.poisson_totals = true;
    c.beam.chi = 0.5;
    const FringeDataset data = sample_run(c);
    const FringeDataset back = dataset_from_json(to_json(data));
    CHECK(back.config.beam.a1 == c.beam.a1);
    CHECK(back.config.beam.chi == c.beam.chi);
    CHECK(back.config.alpha == c.alpha);
    CHECK(back.config.context.kind == c.context.kind);
    CHECK(back.config.context.selection == c.context.selection);
    CHECK(back.config.shots_per_setting == c.shots_per_setting);
    CHECK(back.config.seed == c.seed);
    CHECK(back.config.poisson_totals == c.poisson_totals);
    REQUIRE(back.rows.size() == data.rows.size());
    for (size_t i = 0; i < back.rows.size(); ++i)
        CHECK(back.rows[i].n_x_plus == data.rows[i].n_x_plus);

    CHECK_THROWS(config_from_json("{\"beam\": {\"a1\": 1.0, \"a2\": 0.0}}"));
    CHECK_THROWS(config_from_json(to_json(c).substr(10)));
}

TEST_CASE("config validation") {
    ExperimentConfig c = base_config(Context::interference(Port::plus), 0.1);
    c.beta_schedule.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    ExperimentConfig c2 = base_config(Context::interference(Port::plus), 0.1);
    c2.shots_per_setting = 0;
    CHECK_THROWS_AS(c2.validate(), std::invalid_argument);
    ExperimentConfig c3 = base_config(Context::interference(Port::plus), 0.1);
    c3.beam.a2 = 0.9;
    CHECK_THROWS_AS(c3.validate(), std::invalid_argument);
}

TEST_CASE("poisson sampler: moments and exact small-mean pmf") {
    rng::Stream stream(rng::derive(42, 1));
    const double lambda = 50.0;
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(rng::poisson(stream, lambda));
        sum += k;
        sum2 += k * k;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - lambda) <= 5.0 * std::sqrt(lambda / n));
    CHECK(std::abs(var - lambda) <= 0.05 * lambda);

    // small mean goes through the inversion branch; check the pmf head
    rng::Stream small(rng::derive(42, 2));
    const double mu = 3.0;
    std::array<int, 12> hist{};
    for (int i = 0; i < n; ++i) {
        const uint64_t k = rng::poisson(small, mu);
        if (k < hist.size()) ++hist[k];
    }
    double pmf = std::exp(-mu);
    for (size_t k = 0; k < hist.size(); ++k) {
        const double expected = pmf * n;
        const double sigma = std::sqrt(std::max(expected, 1.0));
        CHECK(std::abs(hist[k] - expected) <= 5.0 * sigma);
        pmf *= mu / static_cast<double>(k + 1);
    }
    CHECK(rng::poisson(stream, 0.0) == 0);
}

TEST_CASE("keyed uniforms are reproducible and well spread") {
    CHECK(rng::unit_at(1, 0) == rng::unit_at(1, 0));
    CHECK(rng::unit_at(1, 0) != rng::unit_at(1, 1));
    CHECK(rng::unit_at(1, 0) != rng::unit_at(2, 0));
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng::unit_at(0xABCD, static_cast<uint64_t>(i));
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) <= 5.0 / std::sqrt(12.0 * n));
}
