#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlanfair/analytic_model.hpp"
#include "wlanfair/config.hpp"
#include "wlanfair/errors.hpp"
#include "wlanfair/sweep.hpp"
#include "wlanfair/wlan_sim.hpp"

namespace {

wlanfair::ModelVariant parse_variant(const std::string& name) {
    if (name == "new" || name == "new_cubic")
        return wlanfair::ModelVariant::new_cubic;
    if (name == "old" || name == "old_quartic")
        return wlanfair::ModelVariant::old_quartic;
    if (name == "exact" || name == "exact_transcendental")
        return wlanfair::ModelVariant::exact_transcendental;
    throw std::invalid_argument("unknown model variant '" + name +
                                "' (expected new, old or exact)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) items.push_back(cur);
    return items;
}

int parse_int(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size())
        throw std::invalid_argument("malformed " + what + " '" + text + "'");
    return v;
}

struct ModelArgs {
    int up = 1, down = 1, window = 42, buffer = 50;
    double rtt = 0.1;
    std::string variant = "new";
};

int run_model(const ModelArgs& a) {
    wlanfair::ScenarioParams p;
    p.up_stations = a.up;
    p.down_stations = a.down;
    p.max_window = a.window;
    p.buffer_size = a.buffer;
    p.rtt = a.rtt;
    wlanfair::ModelVariant v = parse_variant(a.variant);
    wlanfair::ModelSolution sol = wlanfair::solve_model(p, v);

    std::cout << std::setprecision(10);
    std::cout << "variant            " << wlanfair::variant_name(v) << "\n";
    std::cout << "R (down/up)        " << sol.ratio_down_up << "\n";
    std::cout << "ratio up/down      " << sol.ratio_up_down << "\n";
    std::cout << "loss probability   " << sol.loss_prob;
    if (sol.pr_clamped)
        std::cout << "   (clamped from " << sol.pr_raw << ")";
    std::cout << "\n";
    std::cout << "extra service E    " << sol.extra << "\n";
    std::cout << "utilization rho    " << sol.rho << "\n";
    std::cout << "balance residual   " << sol.residual << "\n";
    return 0;
}

struct SimulateArgs {
    int up = 1, down = 1, window = 42, buffer = 50;
    double rtt = 0.1;
    std::uint64_t seed = 1;
    double duration = 100.0, warmup = 0.0;
    double rate = 11e6, wired_delay = 1e-3;
    int data_frame = 1040, ack_frame = 40;
};

int run_simulate(const SimulateArgs& a) {
    wlanfair::SimConfig cfg;
    cfg.scenario.up_stations = a.up;
    cfg.scenario.down_stations = a.down;
    cfg.scenario.max_window = a.window;
    cfg.scenario.buffer_size = a.buffer;
    cfg.scenario.rtt = a.rtt;
    cfg.seed = a.seed;
    cfg.duration = a.duration;
    cfg.warmup = a.warmup;
    cfg.wireless_rate = a.rate;
    cfg.wired_delay = a.wired_delay;
    cfg.data_frame = a.data_frame;
    cfg.ack_frame = a.ack_frame;

    wlanfair::SimResult res = wlanfair::run_simulation(cfg);
    std::cout << std::setprecision(10);
    std::cout << "flow  dir   delivered  pkts/s      timeouts  fast_retx\n";
    for (const wlanfair::FlowStats& f : res.per_flow) {
        std::cout << std::left << std::setw(6) << f.flow << std::setw(6)
                  << (f.uplink ? "up" : "down") << std::setw(11) << f.delivered
                  << std::setw(12) << f.throughput << std::setw(10)
                  << f.timeouts << f.fast_retransmits << "\n";
    }
    std::cout << "uplink total       " << res.up_total << " pkts/s\n";
    std::cout << "downlink total     " << res.down_total << " pkts/s\n";
    std::cout << "ratio up/down      " << res.ratio_up_down << "\n";
    std::cout << "jain index         " << res.jain << "\n";
    std::cout << "ap drops data/ack  " << res.ap_drops_data << "/"
              << res.ap_drops_ack << "\n";
    std::cout << "ap max occupancy   " << res.ap_max_occupancy << "\n";
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string scenario;
    std::string buffers;
    std::string variants;
    std::string seeds;
    std::string out;
    std::string plot;
    int jobs = 1;
};

int run_sweep_cmd(const SweepArgs& a) {
    wlanfair::SweepSpec spec;
    if (!a.config.empty()) {
        spec = wlanfair::load_config(a.config);
    } else {
        spec.scenario_name = a.scenario;
        spec.base = wlanfair::built_in_scenario(a.scenario);
        spec.buffer_values = {5, 10, 20, 30, 42, 63, 84, 105, 126, 147, 168};
        spec.variants = {"new_cubic", "old_quartic", "exact_transcendental",
                         "simulation"};
    }
    if (!a.buffers.empty()) {
        spec.buffer_values.clear();
        for (const std::string& it : split_list(a.buffers))
            spec.buffer_values.push_back(parse_int(it, "buffer size"));
    }
    if (!a.variants.empty()) spec.variants = split_list(a.variants);
    if (!a.seeds.empty()) {
        spec.seeds.clear();
        for (const std::string& it : split_list(a.seeds)) {
            int s = parse_int(it, "seed");
            if (s < 0) throw std::invalid_argument("seeds must be nonnegative");
            spec.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }

    std::vector<wlanfair::SweepRow> rows = wlanfair::run_sweep(spec, a.jobs);
    wlanfair::write_csv_file(rows, a.out);
    std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
    if (!a.plot.empty()) {
        wlanfair::emit_plot_data(rows, a.plot);
        std::cout << "wrote plot tables to " << a.plot << "\n";
    }
    long failed = 0;
    for (const wlanfair::SweepRow& r : rows)
        if (r.status != "ok") failed++;
    if (failed > 0)
        std::cout << failed << " row(s) carry a failure status\n";
    return 0;
}

struct CompareArgs {
    std::string a, b, out;
};

int run_compare(const CompareArgs& c) {
    std::vector<wlanfair::SweepRow> side_a = wlanfair::load_csv_file(c.a);
    std::vector<wlanfair::SweepRow> side_b = wlanfair::load_csv_file(c.b);
    std::vector<wlanfair::ComparisonRow> rows =
        wlanfair::compare_rows(side_a, side_b);
    wlanfair::write_comparison_file(rows, c.out);
    long flagged = 0;
    for (const wlanfair::ComparisonRow& r : rows)
        if (r.flagged) flagged++;
    std::cout << "wrote " << rows.size() << " comparison rows to " << c.out
              << " (" << flagged << " flagged)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Uplink/downlink TCP fairness in an infrastructure WLAN: analytic "
        "buffer-size model and event simulator"};
    app.require_subcommand(1);

    ModelArgs margs;
    CLI::App* model = app.add_subcommand(
        "model", "Solve one analytic operating point");
    model->add_option("--up", margs.up, "uplink stations")->required();
    model->add_option("--down", margs.down, "downlink stations")->required();
    model->add_option("--wnd", margs.window, "TCP max window (packets)");
    model->add_option("--buffer", margs.buffer, "AP buffer size (packets)")
        ->required();
    model->add_option("--rtt", margs.rtt, "base round-trip time (s)");
    model->add_option("--variant", margs.variant,
                      "new | old | exact (full names accepted)");

    SimulateArgs sargs;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run the event simulator once");
    simulate->add_option("--up", sargs.up, "uplink stations")->required();
    simulate->add_option("--down", sargs.down, "downlink stations")->required();
    simulate->add_option("--wnd", sargs.window, "TCP max window (packets)");
    simulate->add_option("--buffer", sargs.buffer, "AP buffer size (packets)")
        ->required();
    simulate->add_option("--rtt", sargs.rtt, "base round-trip time (s)");
    simulate->add_option("--seed", sargs.seed, "RNG seed");
    simulate->add_option("--duration", sargs.duration, "simulated seconds");
    simulate->add_option("--warmup", sargs.warmup,
                         "seconds excluded from throughput");
    simulate->add_option("--rate", sargs.rate, "wireless rate (bits/s)");
    simulate->add_option("--wired-delay", sargs.wired_delay,
                         "one-way wired delay (s)");
    simulate->add_option("--data-frame", sargs.data_frame, "data frame bytes");
    simulate->add_option("--ack-frame", sargs.ack_frame, "ack frame bytes");

    SweepArgs wargs;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Evaluate model variants and simulation over a buffer range");
    CLI::Option* opt_config =
        sweep->add_option("--config", wargs.config, "sweep config file");
    CLI::Option* opt_scenario = sweep->add_option(
        "--scenario", wargs.scenario, "built-in scenario (s1..s4)");
    opt_config->excludes(opt_scenario);
    sweep->add_option("--buffers", wargs.buffers,
                      "comma-separated buffer sizes (override)");
    sweep->add_option("--variants", wargs.variants,
                      "comma-separated variant names (override)");
    sweep->add_option("--seeds", wargs.seeds,
                      "comma-separated simulation seeds (override)");
    sweep->add_option("--out", wargs.out, "output CSV path")->required();
    sweep->add_option("--plot", wargs.plot, "directory for plot tables");
    sweep->add_option("--jobs", wargs.jobs,
                      "simulation threads (0 = all cores)");

    CompareArgs cargs;
    CLI::App* compare = app.add_subcommand(
        "compare", "Compare two sweep CSVs point by point");
    compare->add_option("--a", cargs.a, "first CSV")->required();
    compare->add_option("--b", cargs.b, "second CSV (reference side)")
        ->required();
    compare->add_option("--out", cargs.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (model->parsed()) return run_model(margs);
        if (simulate->parsed()) return run_simulate(sargs);
        if (sweep->parsed()) {
            if (wargs.config.empty() && wargs.scenario.empty())
                throw std::invalid_argument(
                    "sweep needs either --config or --scenario");
            return run_sweep_cmd(wargs);
        }
        if (compare->parsed()) return run_compare(cargs);
        return 1;
    } catch (const wlanfair::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wlanfair::NumericRangeError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const wlanfair::NoPhysicalRootError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
