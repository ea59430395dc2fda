#include "wlanfair/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "wlanfair/errors.hpp"

namespace wlanfair {

namespace {

const char* const kVariantNames[] = {"new_cubic", "old_quartic",
                                     "exact_transcendental", "simulation"};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool is_variant_name(const std::string& name) {
    for (const char* v : kVariantNames)
        if (name == v) return true;
    return false;
}

void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.scenario_name.empty())
        throw std::invalid_argument("sweep: scenario name must not be empty");
    if (spec.scenario_name.find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument(
            "sweep: scenario name must not contain commas or newlines");
    ScenarioParams base = spec.base;
    base.buffer_size = 1;  // swept separately
    validate_scenario(base);
    if (spec.buffer_values.empty())
        throw std::invalid_argument("sweep: buffer list must not be empty");
    for (std::size_t i = 0; i < spec.buffer_values.size(); ++i) {
        if (spec.buffer_values[i] < 1)
            throw std::invalid_argument("sweep: buffer sizes must be >= 1");
        if (i > 0 && spec.buffer_values[i] <= spec.buffer_values[i - 1])
            throw std::invalid_argument(
                "sweep: buffer sizes must be strictly ascending");
    }
    if (spec.variants.empty())
        throw std::invalid_argument("sweep: variant list must not be empty");
    for (const std::string& v : spec.variants)
        if (!is_variant_name(v))
            throw std::invalid_argument("sweep: unknown variant '" + v + "'");
    bool needs_sim = false;
    for (const std::string& v : spec.variants)
        needs_sim = needs_sim || v == "simulation";
    if (needs_sim && spec.seeds.empty())
        throw std::invalid_argument("sweep: seed list must not be empty");
    if (!(spec.sim.duration > 0.0))
        throw std::invalid_argument("sweep: duration must be positive");
    if (spec.sim.warmup < 0.0 || spec.sim.warmup >= spec.sim.duration)
        throw std::invalid_argument("sweep: warmup must lie in [0, duration)");
    if (!(spec.sim.wireless_rate > 0.0))
        throw std::invalid_argument("sweep: wireless_rate must be positive");
    if (spec.sim.wired_delay < 0.0)
        throw std::invalid_argument("sweep: wired_delay must be >= 0");
    if (spec.sim.data_frame < 1 || spec.sim.ack_frame < 1)
        throw std::invalid_argument("sweep: frame sizes must be >= 1 byte");
}

bool is_built_in_scenario(const std::string& name) {
    return name == "s1" || name == "s2" || name == "s3" || name == "s4";
}

ScenarioParams built_in_scenario(const std::string& name) {
    ScenarioParams p;
    p.max_window = 42;
    if (name == "s1") {
        p.up_stations = 1;
        p.down_stations = 1;
    } else if (name == "s2") {
        p.up_stations = 2;
        p.down_stations = 2;
    } else if (name == "s3") {
        p.up_stations = 1;
        p.down_stations = 2;
    } else if (name == "s4") {
        p.up_stations = 2;
        p.down_stations = 1;
    } else {
        throw std::invalid_argument("unknown scenario '" + name +
                                    "' (expected s1, s2, s3 or s4)");
    }
    return p;
}

namespace {

SweepRow make_base_row(const SweepSpec& spec, int buffer,
                       const std::string& variant) {
    SweepRow row;
    row.scenario = spec.scenario_name;
    row.up = spec.base.up_stations;
    row.down = spec.base.down_stations;
    row.window = spec.base.max_window;
    row.buffer = buffer;
    row.variant = variant;
    return row;
}

SweepRow analytic_row(const SweepSpec& spec, int buffer,
                      const std::string& variant) {
    SweepRow row = make_base_row(spec, buffer, variant);
    ScenarioParams p = spec.base;
    p.buffer_size = buffer;
    ModelVariant v = variant == "new_cubic" ? ModelVariant::new_cubic
                     : variant == "old_quartic"
                         ? ModelVariant::old_quartic
                         : ModelVariant::exact_transcendental;
    try {
        ModelSolution sol = solve_model(p, v);
        row.r_model = sol.ratio_down_up;
        row.ratio_up_down = sol.ratio_up_down;
        row.loss_prob = sol.loss_prob;
        row.pr_raw_flag = sol.pr_clamped ? 1 : 0;
        row.extra = sol.extra;
        row.residual = sol.residual;
    } catch (const NoPhysicalRootError&) {
        row.status = "no_physical_root";
    } catch (const NumericRangeError&) {
        row.status = "numeric_range";
    }
    return row;
}

SweepRow simulation_row(const SweepSpec& spec, int buffer, std::uint64_t seed) {
    SweepRow row = make_base_row(spec, buffer, "simulation");
    row.seed = seed;
    SimConfig cfg;
    cfg.scenario = spec.base;
    cfg.scenario.buffer_size = buffer;
    cfg.seed = seed;
    cfg.duration = spec.sim.duration;
    cfg.warmup = spec.sim.warmup;
    cfg.wireless_rate = spec.sim.wireless_rate;
    cfg.wired_delay = spec.sim.wired_delay;
    cfg.data_frame = spec.sim.data_frame;
    cfg.ack_frame = spec.sim.ack_frame;
    SimResult res = run_simulation(cfg);
    row.ratio_up_down = res.ratio_up_down;
    row.up_pps = res.up_total;
    row.down_pps = res.down_total;
    row.jain = res.jain;
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
    validate_sweep_spec(spec);
    if (jobs < 0) throw std::invalid_argument("sweep: jobs must be >= 0");
    if (jobs == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        jobs = hc == 0 ? 1 : static_cast<int>(hc);
    }

    struct SimTask {
        std::size_t idx;
        int buffer;
        std::uint64_t seed;
    };
    std::vector<SweepRow> rows;
    std::vector<SimTask> sim_tasks;
    for (int buffer : spec.buffer_values) {
        for (const std::string& variant : spec.variants) {
            if (variant == "simulation") {
                for (std::uint64_t seed : spec.seeds) {
                    sim_tasks.push_back({rows.size(), buffer, seed});
                    rows.push_back(make_base_row(spec, buffer, variant));
                }
            } else {
                rows.push_back(analytic_row(spec, buffer, variant));
            }
        }
    }

    if (jobs <= 1 || sim_tasks.size() <= 1) {
        for (const SimTask& t : sim_tasks)
            rows[t.idx] = simulation_row(spec, t.buffer, t.seed);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= sim_tasks.size()) return;
            const SimTask& t = sim_tasks[i];
            try {
                rows[t.idx] = simulation_row(spec, t.buffer, t.seed);
            } catch (...) {
                std::lock_guard<std::mutex> lk(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), sim_tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

const char* const kCsvHeader =
    "scenario,U,D,w,B,variant,seed,R_model,ratio_up_down,Pr,pr_raw_flag,E,"
    "up_pps,down_pps,jain_index,residual_eq13,status";

namespace {

void append_cell(std::string& line, const std::optional<double>& v) {
    line += ',';
    if (v) line += fmt_double(*v);
}

}  // namespace

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        std::string line = r.scenario;
        line += ',' + std::to_string(r.up);
        line += ',' + std::to_string(r.down);
        line += ',' + std::to_string(r.window);
        line += ',' + std::to_string(r.buffer);
        line += ',' + r.variant;
        line += ',';
        if (r.seed) line += std::to_string(*r.seed);
        append_cell(line, r.r_model);
        append_cell(line, r.ratio_up_down);
        append_cell(line, r.loss_prob);
        line += ',';
        if (r.pr_raw_flag) line += std::to_string(*r.pr_raw_flag);
        append_cell(line, r.extra);
        append_cell(line, r.up_pps);
        append_cell(line, r.down_pps);
        append_cell(line, r.jain);
        append_cell(line, r.residual);
        line += ',' + r.status;
        out << line << '\n';
    }
}

void write_csv_file(const std::vector<SweepRow>& rows,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(rows, out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double_cell(const std::string& cell, const std::string& path,
                         int line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(path, line_no, "malformed number '" + cell + "'");
    return v;
}

long parse_long_cell(const std::string& cell, const std::string& path,
                     int line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError(path, line_no, "malformed integer '" + cell + "'");
    return v;
}

std::optional<double> opt_double(const std::string& cell,
                                 const std::string& path, int line_no) {
    if (cell.empty()) return std::nullopt;
    return parse_double_cell(cell, path, line_no);
}

}  // namespace

std::vector<SweepRow> load_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path, 1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw ConfigError(path, 1, "unrecognized header");

    std::vector<SweepRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != 17)
            throw ConfigError(path, line_no,
                              "expected 17 cells, got " +
                                  std::to_string(cells.size()));
        SweepRow r;
        r.scenario = cells[0];
        r.up = static_cast<int>(parse_long_cell(cells[1], path, line_no));
        r.down = static_cast<int>(parse_long_cell(cells[2], path, line_no));
        r.window = static_cast<int>(parse_long_cell(cells[3], path, line_no));
        r.buffer = static_cast<int>(parse_long_cell(cells[4], path, line_no));
        r.variant = cells[5];
        if (!is_variant_name(r.variant))
            throw ConfigError(path, line_no,
                              "unknown variant '" + r.variant + "'");
        if (!cells[6].empty())
            r.seed = static_cast<std::uint64_t>(
                parse_long_cell(cells[6], path, line_no));
        r.r_model = opt_double(cells[7], path, line_no);
        r.ratio_up_down = opt_double(cells[8], path, line_no);
        r.loss_prob = opt_double(cells[9], path, line_no);
        if (!cells[10].empty())
            r.pr_raw_flag =
                static_cast<int>(parse_long_cell(cells[10], path, line_no));
        r.extra = opt_double(cells[11], path, line_no);
        r.up_pps = opt_double(cells[12], path, line_no);
        r.down_pps = opt_double(cells[13], path, line_no);
        r.jain = opt_double(cells[14], path, line_no);
        r.residual = opt_double(cells[15], path, line_no);
        r.status = cells[16];
        if (r.status != "ok" && r.status != "no_physical_root" &&
            r.status != "numeric_range")
            throw ConfigError(path, line_no,
                              "unknown status '" + r.status + "'");
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

bool opt_eq(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    if (std::isnan(*a) && std::isnan(*b)) return true;
    return *a == *b;
}

}  // namespace

bool rows_equal(const SweepRow& a, const SweepRow& b) {
    return a.scenario == b.scenario && a.up == b.up && a.down == b.down &&
           a.window == b.window && a.buffer == b.buffer &&
           a.variant == b.variant && a.seed == b.seed &&
           opt_eq(a.r_model, b.r_model) &&
           opt_eq(a.ratio_up_down, b.ratio_up_down) &&
           opt_eq(a.loss_prob, b.loss_prob) &&
           a.pr_raw_flag == b.pr_raw_flag && opt_eq(a.extra, b.extra) &&
           opt_eq(a.up_pps, b.up_pps) && opt_eq(a.down_pps, b.down_pps) &&
           opt_eq(a.jain, b.jain) && opt_eq(a.residual, b.residual) &&
           a.status == b.status;
}

void emit_plot_data(const std::vector<SweepRow>& rows, const std::string& dir) {
    std::filesystem::create_directories(dir);
    // (scenario, variant) -> buffer -> finite ratio samples
    std::map<std::pair<std::string, std::string>,
             std::map<int, std::vector<double>>>
        groups;
    for (const SweepRow& r : rows) {
        if (!r.ratio_up_down || !std::isfinite(*r.ratio_up_down)) continue;
        groups[{r.scenario, r.variant}][r.buffer].push_back(*r.ratio_up_down);
    }
    for (const auto& [key, by_buffer] : groups) {
        std::string path = dir + "/" + key.first + "_" + key.second + ".dat";
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << "# B ratio_up_down\n";
        for (const auto& [buffer, samples] : by_buffer) {
            double sum = 0.0;
            for (double v : samples) sum += v;
            out << buffer << ' ' << fmt_double(sum / samples.size()) << '\n';
        }
    }
}

namespace {

struct GroupStats {
    double sum = 0.0;
    int count = 0;
    bool skipped_any = false;  // non-finite or absent ratios in the group

    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / count;
    }
};

using GroupKey = std::tuple<std::string, int, std::string>;

std::map<GroupKey, GroupStats> group_side(const std::vector<SweepRow>& rows) {
    std::map<GroupKey, GroupStats> out;
    for (const SweepRow& r : rows) {
        GroupStats& g = out[{r.scenario, r.buffer, r.variant}];
        if (r.ratio_up_down && std::isfinite(*r.ratio_up_down)) {
            g.sum += *r.ratio_up_down;
            g.count++;
        } else {
            g.skipped_any = true;
        }
    }
    return out;
}

}  // namespace

std::vector<ComparisonRow> compare_rows(const std::vector<SweepRow>& a,
                                        const std::vector<SweepRow>& b) {
    std::map<GroupKey, GroupStats> ga = group_side(a);
    std::map<GroupKey, GroupStats> gb = group_side(b);

    bool shared_point = false;
    for (const auto& [key, stats] : ga) {
        GroupKey sim_key{std::get<0>(key), std::get<1>(key), "simulation"};
        if (gb.count(key) || gb.count(sim_key)) shared_point = true;
    }
    if (!shared_point)
        throw std::invalid_argument(
            "comparison inputs share no (scenario, buffer) points");

    std::vector<ComparisonRow> out;
    std::set<GroupKey> emitted;
    for (const SweepRow& ar : a) {  // preserve side A's first-appearance order
        GroupKey key{ar.scenario, ar.buffer, ar.variant};
        if (!emitted.insert(key).second) continue;
        const GroupStats& stats_a = ga.at(key);

        ComparisonRow row;
        row.scenario = ar.scenario;
        row.buffer = ar.buffer;
        row.variant = ar.variant;
        row.value_a = stats_a.mean();
        row.flagged = stats_a.skipped_any || !row.value_a;

        const GroupStats* ref = nullptr;
        auto it = gb.find(key);
        if (it != gb.end()) {
            ref = &it->second;
        } else {
            GroupKey sim_key{ar.scenario, ar.buffer, "simulation"};
            auto st = gb.find(sim_key);
            if (st != gb.end()) ref = &st->second;
        }
        if (ref) {
            row.value_b = ref->mean();
            row.flagged = row.flagged || ref->skipped_any || !row.value_b;
        } else {
            row.flagged = true;
        }
        if (row.value_a && row.value_b) {
            double abs_err = std::fabs(*row.value_a - *row.value_b);
            row.abs_error = abs_err;
            if (*row.value_b != 0.0)
                row.rel_error = abs_err / std::fabs(*row.value_b);
            else if (abs_err == 0.0)
                row.rel_error = 0.0;
            else
                row.flagged = true;  // reference is zero, ratio undefined
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_comparison_file(const std::vector<ComparisonRow>& rows,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "scenario,B,variant,ratio_a,ratio_b,abs_error,rel_error,flag\n";
    for (const ComparisonRow& r : rows) {
        std::string line = r.scenario;
        line += ',' + std::to_string(r.buffer);
        line += ',' + r.variant;
        append_cell(line, r.value_a);
        append_cell(line, r.value_b);
        append_cell(line, r.abs_error);
        append_cell(line, r.rel_error);
        line += ',' + std::to_string(r.flagged ? 1 : 0);
        out << line << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wlanfair
