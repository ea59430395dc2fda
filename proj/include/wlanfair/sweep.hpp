#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wlanfair/analytic_model.hpp"
#include "wlanfair/wlan_sim.hpp"

namespace wlanfair {

// Variant strings accepted in configs and emitted in CSV. "simulation"
// runs the event simulator once per seed; the others are analytic.
bool is_variant_name(const std::string& name);

// Overridable simulator knobs carried by a sweep specification.
struct SimOverrides {
    double duration = 100.0;
    double warmup = 0.0;
    double wireless_rate = 11e6;
    double wired_delay = 1e-3;
    int data_frame = 1040;
    int ack_frame = 40;
};

struct SweepSpec {
    std::string scenario_name = "custom";
    ScenarioParams base;                  // buffer_size ignored, swept instead
    std::vector<int> buffer_values;       // strictly ascending, nonempty
    std::vector<std::string> variants;    // nonempty
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    SimOverrides sim;
};

void validate_sweep_spec(const SweepSpec& spec);

// Built-in station mixes: s1 = 1 up / 1 down, s2 = 2/2, s3 = 1/2,
// s4 = 2/1, all with a 42-packet window.
ScenarioParams built_in_scenario(const std::string& name);
bool is_built_in_scenario(const std::string& name);

// One CSV row. Absent fields serialize as empty cells. Analytic rows have
// no seed or per-direction throughput; simulation rows have no model
// fields. status is "ok", "no_physical_root" or "numeric_range"; failed
// rows keep only the identifying columns.
struct SweepRow {
    std::string scenario;
    int up = 0, down = 0, window = 0, buffer = 0;
    std::string variant;
    std::optional<std::uint64_t> seed;
    std::optional<double> r_model;
    std::optional<double> ratio_up_down;
    std::optional<double> loss_prob;
    std::optional<int> pr_raw_flag;
    std::optional<double> extra;
    std::optional<double> up_pps;
    std::optional<double> down_pps;
    std::optional<double> jain;
    std::optional<double> residual;
    std::string status = "ok";
};

// Field-wise equality with NaN == NaN, for round-trip checks.
bool rows_equal(const SweepRow& a, const SweepRow& b);

// Evaluates every (buffer, variant[, seed]) point. Row order is buffer
// major, then variant in specification order, then seed. Analytic
// failures become row statuses, never aborts. Simulation rows may be
// computed on `jobs` threads (0 = hardware concurrency); the row order is
// reassembled deterministically either way.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);

extern const char* const kCsvHeader;

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_csv_file(const std::vector<SweepRow>& rows, const std::string& path);

// Parses a file produced by write_csv. Header must match exactly.
std::vector<SweepRow> load_csv_file(const std::string& path);

// Per-variant plot tables: for each (scenario, variant) a whitespace
// separated (B, ratio_up_down) file named <scenario>_<variant>.dat, with
// simulation rows averaged over seeds (non-finite values excluded).
void emit_plot_data(const std::vector<SweepRow>& rows, const std::string& dir);

// Comparison of two row sets matched by (scenario, buffer). Within a side,
// rows are grouped by variant and seed means taken first. A group from
// side A is compared against the side-B group of the same variant when
// present, otherwise against side B's simulation mean. Rows whose value is
// non-finite or missing are excluded from means and flagged. Disjoint
// buffer grids are an error.
struct ComparisonRow {
    std::string scenario;
    int buffer = 0;
    std::string variant;
    std::optional<double> value_a;
    std::optional<double> value_b;
    std::optional<double> abs_error;
    std::optional<double> rel_error;  // relative to side B
    bool flagged = false;
};

std::vector<ComparisonRow> compare_rows(const std::vector<SweepRow>& a,
                                        const std::vector<SweepRow>& b);

void write_comparison_file(const std::vector<ComparisonRow>& rows,
                           const std::string& path);

}  // namespace wlanfair
