#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "wlanfair/config.hpp"
#include "wlanfair/errors.hpp"
#include "wlanfair/sweep.hpp"

using namespace wlanfair;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

SweepSpec small_spec() {
    SweepSpec spec;
    spec.scenario_name = "s1";
    spec.base = built_in_scenario("s1");
    spec.buffer_values = {5, 20};
    spec.variants = {"new_cubic", "old_quartic", "exact_transcendental",
                     "simulation"};
    spec.seeds = {1, 2};
    spec.sim.duration = 2.0;
    return spec;
}

SweepRow sim_row(const std::string& scenario, int buffer, std::uint64_t seed,
                 double ratio) {
    SweepRow r;
    r.scenario = scenario;
    r.up = 1;
    r.down = 1;
    r.window = 42;
    r.buffer = buffer;
    r.variant = "simulation";
    r.seed = seed;
    r.ratio_up_down = ratio;
    r.up_pps = 100.0;
    r.down_pps = 100.0 / ratio;
    r.jain = 0.9;
    return r;
}

SweepRow model_row(const std::string& scenario, int buffer,
                   const std::string& variant, double ratio) {
    SweepRow r;
    r.scenario = scenario;
    r.up = 1;
    r.down = 1;
    r.window = 42;
    r.buffer = buffer;
    r.variant = variant;
    r.r_model = 1.0 / ratio;
    r.ratio_up_down = ratio;
    r.loss_prob = 0.1;
    r.pr_raw_flag = 0;
    r.extra = 0.0;
    r.residual = 1e-12;
    return r;
}

}  // namespace

TEST_CASE("built-in scenarios") {
    CHECK(built_in_scenario("s1").up_stations == 1);
    CHECK(built_in_scenario("s1").down_stations == 1);
    CHECK(built_in_scenario("s2").up_stations == 2);
    CHECK(built_in_scenario("s2").down_stations == 2);
    CHECK(built_in_scenario("s3").up_stations == 1);
    CHECK(built_in_scenario("s3").down_stations == 2);
    CHECK(built_in_scenario("s4").up_stations == 2);
    CHECK(built_in_scenario("s4").down_stations == 1);
    CHECK(built_in_scenario("s3").max_window == 42);
    CHECK(is_built_in_scenario("s2"));
    CHECK_FALSE(is_built_in_scenario("s5"));
    CHECK_THROWS_AS(built_in_scenario("s5"), std::invalid_argument);
}

TEST_CASE("sweep spec validation") {
    CHECK_NOTHROW(validate_sweep_spec(small_spec()));

    SweepSpec s = small_spec();
    s.buffer_values = {};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.buffer_values = {20, 5};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.buffer_values = {5, 5};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.variants = {};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.variants = {"cubic"};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.seeds = {};
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.seeds = {};
    s.variants = {"new_cubic"};  // seeds only matter when simulating
    CHECK_NOTHROW(validate_sweep_spec(s));
    s = small_spec();
    s.scenario_name = "a,b";
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
    s = small_spec();
    s.sim.warmup = s.sim.duration;
    CHECK_THROWS_AS(validate_sweep_spec(s), std::invalid_argument);
}

TEST_CASE("sweep rows come out in declaration order with the right fields") {
    std::vector<SweepRow> rows = run_sweep(small_spec());
    // per buffer: three analytic rows plus one simulation row per seed
    REQUIRE(rows.size() == 2 * (3 + 2));

    const char* expected_variant[] = {"new_cubic", "old_quartic",
                                      "exact_transcendental", "simulation",
                                      "simulation"};
    for (int block = 0; block < 2; ++block) {
        int buffer = block == 0 ? 5 : 20;
        for (int i = 0; i < 5; ++i) {
            const SweepRow& r = rows[static_cast<std::size_t>(block * 5 + i)];
            CHECK(r.scenario == "s1");
            CHECK(r.buffer == buffer);
            CHECK(r.variant == expected_variant[i]);
            CHECK(r.status == "ok");
            if (r.variant == "simulation") {
                CHECK(r.seed == (i == 3 ? 1u : 2u));
                CHECK(r.ratio_up_down.has_value());
                CHECK(r.up_pps.has_value());
                CHECK(r.jain.has_value());
                CHECK_FALSE(r.r_model.has_value());
                CHECK_FALSE(r.residual.has_value());
            } else {
                CHECK_FALSE(r.seed.has_value());
                CHECK(r.r_model.has_value());
                CHECK(r.ratio_up_down.has_value());
                CHECK(r.loss_prob.has_value());
                CHECK(r.pr_raw_flag.has_value());
                CHECK(r.residual.has_value());
                CHECK_FALSE(r.up_pps.has_value());
                CHECK_FALSE(r.jain.has_value());
            }
        }
    }
}

TEST_CASE("parallel sweeps reproduce the serial rows") {
    SweepSpec spec = small_spec();
    std::vector<SweepRow> serial = run_sweep(spec, 1);
    std::vector<SweepRow> parallel = run_sweep(spec, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(rows_equal(serial[i], parallel[i]));
    CHECK_THROWS_AS(run_sweep(spec, -1), std::invalid_argument);
}

TEST_CASE("analytic failures become row statuses") {
    SweepSpec spec;
    spec.scenario_name = "deep";
    spec.base.up_stations = 2;
    spec.base.down_stations = 1;
    spec.base.max_window = 42;
    spec.buffer_values = {1100};
    spec.variants = {"new_cubic", "old_quartic"};

    std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "ok");
    CHECK(rows[0].ratio_up_down.has_value());
    CHECK(rows[1].status == "numeric_range");
    CHECK_FALSE(rows[1].ratio_up_down.has_value());
    CHECK_FALSE(rows[1].r_model.has_value());
}

TEST_CASE("csv output shape") {
    std::vector<SweepRow> rows = {sim_row("s1", 5, 1, 2.0),
                                  model_row("s1", 5, "new_cubic", 15.4)};
    std::ostringstream out;
    write_csv(rows, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == kCsvHeader);
    int data_lines = 0;
    while (std::getline(in, line)) {
        data_lines++;
        CHECK(std::count(line.begin(), line.end(), ',') == 16);
    }
    CHECK(data_lines == 2);
}

TEST_CASE("csv round-trip preserves every field, including non-finite") {
    std::vector<SweepRow> rows;
    rows.push_back(model_row("s1", 5, "new_cubic", 15.375180993393975));
    rows.push_back(sim_row("s1", 5, 1, 2.0));
    SweepRow inf_row = sim_row("s1", 10, 2, 1.0);
    inf_row.ratio_up_down = std::numeric_limits<double>::infinity();
    inf_row.down_pps = 0.0;
    rows.push_back(inf_row);
    SweepRow nan_row = sim_row("s1", 20, 3, 1.0);
    nan_row.ratio_up_down = std::numeric_limits<double>::quiet_NaN();
    nan_row.jain = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(nan_row);
    SweepRow failed;
    failed.scenario = "s1";
    failed.up = 2;
    failed.down = 1;
    failed.window = 42;
    failed.buffer = 1100;
    failed.variant = "old_quartic";
    failed.status = "numeric_range";
    rows.push_back(failed);

    std::string path = temp_path("wlanfair_roundtrip.csv");
    write_csv_file(rows, path);
    std::vector<SweepRow> loaded = load_csv_file(path);
    std::filesystem::remove(path);

    REQUIRE(loaded.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(rows_equal(rows[i], loaded[i]));
}

TEST_CASE("csv round-trip on a real sweep") {
    std::vector<SweepRow> rows = run_sweep(small_spec());
    std::string path = temp_path("wlanfair_sweep_rt.csv");
    write_csv_file(rows, path);
    std::vector<SweepRow> loaded = load_csv_file(path);
    std::filesystem::remove(path);
    REQUIRE(loaded.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(rows_equal(rows[i], loaded[i]));
}

TEST_CASE("csv loader reports file and line for malformed input") {
    CHECK_THROWS_AS(load_csv_file(temp_path("wlanfair_missing.csv")),
                    ConfigError);

    std::string path = temp_path("wlanfair_bad.csv");
    auto expect_load_error = [&](const std::string& content,
                                 const std::string& needle, int line) {
        {
            std::ofstream out(path);
            out << content;
        }
        try {
            load_csv_file(path);
            FAIL("expected ConfigError mentioning: " << needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            CHECK(e.line() == line);
        }
    };

    expect_load_error("scenario,whatever\n", "unrecognized header", 1);
    expect_load_error(std::string(kCsvHeader) + "\n" +
                          "s1,1,1,42,5,new_cubic,,,,,,,,,,\n",
                      "expected 17 cells", 2);
    expect_load_error(std::string(kCsvHeader) + "\n" +
                          "s1,1,1,42,5,new_cubic,,abc,,,,,,,,,ok\n",
                      "malformed number", 2);
    expect_load_error(std::string(kCsvHeader) + "\n" +
                          "s1,1,1,42,5,new_cubic,,,,,,,,,,,weird\n",
                      "unknown status", 2);
    std::filesystem::remove(path);
}

TEST_CASE("row equality treats nan as equal to itself") {
    SweepRow a = sim_row("s1", 5, 1, 2.0);
    SweepRow b = a;
    CHECK(rows_equal(a, b));
    a.ratio_up_down = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(rows_equal(a, b));
    b.ratio_up_down = std::numeric_limits<double>::quiet_NaN();
    CHECK(rows_equal(a, b));
    b.seed = 2;
    CHECK_FALSE(rows_equal(a, b));
}

TEST_CASE("plot tables average simulation seeds and skip non-finite points") {
    std::vector<SweepRow> rows;
    rows.push_back(sim_row("s9", 5, 1, 1.0));
    rows.push_back(sim_row("s9", 5, 2, 3.0));
    SweepRow bad = sim_row("s9", 5, 3, 1.0);
    bad.ratio_up_down = std::numeric_limits<double>::infinity();
    rows.push_back(bad);
    rows.push_back(sim_row("s9", 10, 1, 5.0));
    rows.push_back(model_row("s9", 5, "new_cubic", 12.5));

    std::string dir = temp_path("wlanfair_plots");
    emit_plot_data(rows, dir);

    std::ifstream sim_in(dir + "/s9_simulation.dat");
    REQUIRE(sim_in.good());
    std::string line;
    std::getline(sim_in, line);
    CHECK(line == "# B ratio_up_down");
    std::getline(sim_in, line);
    CHECK(line == "5 2");
    std::getline(sim_in, line);
    CHECK(line == "10 5");

    std::ifstream model_in(dir + "/s9_new_cubic.dat");
    REQUIRE(model_in.good());
    std::getline(model_in, line);
    std::getline(model_in, line);
    CHECK(line == "5 12.5");
    sim_in.close();
    model_in.close();
    std::filesystem::remove_all(dir);
}

TEST_CASE("comparing a row set against itself gives zero error") {
    std::vector<SweepRow> rows = {model_row("s1", 5, "new_cubic", 15.4),
                                  sim_row("s1", 5, 1, 2.0),
                                  sim_row("s1", 5, 2, 4.0)};
    std::vector<ComparisonRow> cmp = compare_rows(rows, rows);
    REQUIRE(cmp.size() == 2);  // one model group, one simulation group
    for (const ComparisonRow& r : cmp) {
        CHECK(r.abs_error == 0.0);
        CHECK(r.rel_error == 0.0);
        CHECK_FALSE(r.flagged);
    }
    CHECK(cmp[1].value_a == doctest::Approx(3.0));  // seed mean
}

TEST_CASE("comparison prefers the same variant and falls back to simulation") {
    std::vector<SweepRow> a = {
        model_row("s1", 5, "exact_transcendental", 1.4),
        model_row("s1", 5, "new_cubic", 0.1),
    };
    std::vector<SweepRow> b = {
        sim_row("s1", 5, 1, 14.0),
        sim_row("s1", 5, 2, 14.0),
        model_row("s1", 5, "new_cubic", 0.2),
    };
    std::vector<ComparisonRow> cmp = compare_rows(a, b);
    REQUIRE(cmp.size() == 2);

    // no exact rows on side B: reference is B's simulation mean
    CHECK(cmp[0].variant == "exact_transcendental");
    CHECK(*cmp[0].value_b == doctest::Approx(14.0));
    CHECK(*cmp[0].abs_error == doctest::Approx(12.6));
    CHECK(*cmp[0].rel_error == doctest::Approx(0.9));

    // new_cubic exists on side B and wins over the simulation fallback
    CHECK(cmp[1].variant == "new_cubic");
    CHECK(*cmp[1].value_b == doctest::Approx(0.2));
    CHECK(*cmp[1].rel_error == doctest::Approx(0.5));
}

TEST_CASE("comparison flags non-finite members and missing references") {
    std::vector<SweepRow> a = {sim_row("s1", 5, 1, 2.0)};
    SweepRow nan_seed = sim_row("s1", 5, 2, 1.0);
    nan_seed.ratio_up_down = std::numeric_limits<double>::quiet_NaN();
    a.push_back(nan_seed);
    a.push_back(model_row("s1", 7, "new_cubic", 3.0));  // no match on B side

    std::vector<SweepRow> b = {sim_row("s1", 5, 1, 2.0)};
    std::vector<ComparisonRow> cmp = compare_rows(a, b);
    REQUIRE(cmp.size() == 2);
    CHECK(cmp[0].flagged);  // one seed was nan
    CHECK(*cmp[0].value_a == doctest::Approx(2.0));
    CHECK(cmp[1].flagged);  // nothing to compare against
    CHECK_FALSE(cmp[1].value_b.has_value());

    std::vector<SweepRow> disjoint = {sim_row("s1", 99, 1, 2.0)};
    CHECK_THROWS_AS(compare_rows(a, disjoint), std::invalid_argument);
}

TEST_CASE("comparison output file shape") {
    std::vector<SweepRow> rows = {sim_row("s1", 5, 1, 2.0)};
    std::vector<ComparisonRow> cmp = compare_rows(rows, rows);
    std::string path = temp_path("wlanfair_cmp.csv");
    write_comparison_file(cmp, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "scenario,B,variant,ratio_a,ratio_b,abs_error,rel_error,flag");
    REQUIRE(std::getline(in, line));
    CHECK(line == "s1,5,simulation,2,2,0,0,0");
    in.close();
    std::filesystem::remove(path);
}

TEST_CASE("config loader fills defaults and honors every section") {
    std::string path = temp_path("wlanfair_cfg.toml");
    {
        std::ofstream out(path);
        out << "# sweep description\n"
            << "[scenario]\n"
            << "name = \"office#3\"  # quoted hash stays\n"
            << "up = 2\n"
            << "down = 1\n"
            << "window = 21\n"
            << "rtt = 0.2\n"
            << "\n"
            << "[sweep]\n"
            << "buffers = [5, 20, 84]\n"
            << "variants = [\"new_cubic\", \"simulation\"]\n"
            << "seeds = [7, 8]\n"
            << "\n"
            << "[sim]\n"
            << "duration = 12.5\n"
            << "warmup = 2.5\n"
            << "wireless_rate = 5.5e6\n"
            << "data_frame = 500\n"
            << "ack_frame = 20\n"
            << "wired_delay = 2e-3\n";
    }
    SweepSpec spec = load_config(path);
    std::filesystem::remove(path);

    CHECK(spec.scenario_name == "office#3");
    CHECK(spec.base.up_stations == 2);
    CHECK(spec.base.down_stations == 1);
    CHECK(spec.base.max_window == 21);
    CHECK(spec.base.rtt == doctest::Approx(0.2));
    CHECK(spec.buffer_values == std::vector<int>{5, 20, 84});
    CHECK(spec.variants ==
          std::vector<std::string>{"new_cubic", "simulation"});
    CHECK(spec.seeds == std::vector<std::uint64_t>{7, 8});
    CHECK(spec.sim.duration == doctest::Approx(12.5));
    CHECK(spec.sim.warmup == doctest::Approx(2.5));
    CHECK(spec.sim.wireless_rate == doctest::Approx(5.5e6));
    CHECK(spec.sim.data_frame == 500);
    CHECK(spec.sim.ack_frame == 20);
    CHECK(spec.sim.wired_delay == doctest::Approx(2e-3));

    {
        std::ofstream out(path);
        out << "[scenario]\nup = 1\ndown = 1\n[sweep]\nbuffers = [10]\n";
    }
    SweepSpec defaults = load_config(path);
    std::filesystem::remove(path);
    CHECK(defaults.scenario_name == "custom");
    CHECK(defaults.base.max_window == 42);
    CHECK(defaults.base.rtt == doctest::Approx(0.1));
    CHECK(defaults.variants.size() == 4);
    CHECK(defaults.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(defaults.sim.duration == doctest::Approx(100.0));
}

TEST_CASE("config loader rejects malformed input with file and line") {
    std::string path = temp_path("wlanfair_badcfg.toml");
    auto write_and_expect = [&](const std::string& text,
                                const std::string& needle, int line) {
        {
            std::ofstream out(path);
            out << text;
        }
        try {
            load_config(path);
            FAIL("expected ConfigError for: " << needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            CHECK(e.line() == line);
        }
    };

    write_and_expect("[bogus]\n", "unknown section", 1);
    write_and_expect("[scenario]\nup = 1\nflavor = 3\n", "unknown key", 3);
    write_and_expect("up = 1\n", "before any section", 1);
    write_and_expect("[scenario]\nup = one\n", "malformed integer", 2);
    write_and_expect("[scenario]\nup 1\n", "expected 'key = value'", 2);
    write_and_expect("[scenario]\nname = unquoted\nup = 1\n",
                     "expected a quoted string", 2);
    write_and_expect("[sweep]\nbuffers = 5\n", "expected an array", 2);
    write_and_expect("[scenario]\ndown = 1\n[sweep]\nbuffers = [5]\n",
                     "missing required key 'up'", 0);
    write_and_expect("[scenario]\nup = 1\ndown = 1\n", "buffers", 0);
    write_and_expect(
        "[scenario]\nup = 1\ndown = 1\n[sweep]\nbuffers = [20, 5]\n",
        "strictly ascending", 0);
    write_and_expect(
        "[scenario]\nup = 1\ndown = 1\n[sweep]\nbuffers = [5]\nseeds = [-1]\n",
        "nonnegative", 6);

    CHECK_THROWS_AS(load_config(temp_path("wlanfair_nofile.toml")), ConfigError);
    std::filesystem::remove(path);
}
