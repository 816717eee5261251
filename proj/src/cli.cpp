#include "mcqhe/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcqhe/engine.hpp"
#include "mcqhe/fluct.hpp"
#include "mcqhe/ladder.hpp"

namespace mcqhe {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt(bool v) {
    return v ? "true" : "false";
}

std::string fmt(int v) {
    return std::to_string(v);
}

class Csv {
public:
    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((body_ += (first ? (first = false, "") : ","), body_ += field(fields)), ...);
        body_ += '\n';
    }

    const std::string& str() const { return body_; }

private:
    static std::string field(const std::string& s) { return s; }
    static std::string field(const char* s) { return s; }
    static std::string field(double v) { return fmt(v); }
    static std::string field(bool v) { return fmt(v); }
    static std::string field(int v) { return fmt(v); }

    std::string body_;
};

int emit(const std::string& path, const std::string& content, std::ostream& out,
         std::ostream& err) {
    if (path == "-") {
        out << content;
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "failed to open output file: " << path << "\n";
        return 1;
    }
    file << content;
    file.flush();
    if (!file) {
        err << "failed to write output file: " << path << "\n";
        return 1;
    }
    return 0;
}

struct CommandResult {
    std::string content;
    int status = 0;
};

EngineSpec spec_from(double bh_omega, double bc_omega, int n) {
    if (bh_omega < 0.0 || bc_omega < 0.0) {
        throw UsageError("beta*omega products must be non-negative");
    }
    if (n < 1) {
        throw UsageError("--n must be at least 1");
    }
    return EngineSpec{bh_omega, bc_omega, 1.0, n};
}

CommandResult do_region(double bh, double bc, int n) {
    const EngineSpec spec = spec_from(bh, bc, n);
    const bool inside = operating_region(spec);
    Csv csv;
    csv.row("key", "value");
    csv.row("in_region", inside);
    csv.row("region_lhs", region_lhs(spec));
    return {csv.str(), inside ? 0 : 2};
}

CommandResult do_optimal(double bh, double bc) {
    const OptimalCycle cycle = optimal_three_stroke(spec_from(bh, bc, 1));
    Csv csv;
    csv.row("eta_1", "p1_over_omega", "e0", "e1", "e2");
    csv.row(cycle.eta, cycle.work, cycle.energies[0], cycle.energies[1], cycle.energies[2]);
    return {csv.str(), 0};
}

CommandResult do_multistroke(double bh, double bc, int n, int n_max) {
    Csv csv;
    csv.row("n", "eta_n", "pn_over_omega", "e0");
    if (n_max > 0) {
        int emitted = 0;
        for (int k = 1; k <= n_max; ++k) {
            const EngineSpec spec = spec_from(bh, bc, k);
            if (!operating_region(spec)) {
                break;  // the region only shrinks with n
            }
            const OptimalCycle cycle = optimal_multistroke(spec);
            csv.row(k, cycle.eta, cycle.work, cycle.energies[0]);
            ++emitted;
        }
        if (emitted == 0) {
            throw OutOfRegionError(region_lhs(spec_from(bh, bc, 1)));
        }
        return {csv.str(), 0};
    }
    const OptimalCycle cycle = optimal_multistroke(spec_from(bh, bc, n));
    csv.row(n, cycle.eta, cycle.work, cycle.energies[0]);
    return {csv.str(), 0};
}

CommandResult do_sweep(double h_min, double h_max, int h_steps, double c_min, double c_max,
                       int c_steps, int n) {
    if (h_steps < 2 || c_steps < 2) {
        throw UsageError("sweep axes need at least 2 steps");
    }
    if (!(h_min < h_max) || !(c_min < c_max)) {
        throw UsageError("sweep axis minimum must be below its maximum");
    }
    if (!(h_min > 0.0) || !(c_min > 0.0)) {
        throw UsageError("sweep axis ranges must be positive");
    }
    Csv csv;
    csv.row("beta_h_omega", "beta_c_omega", "in_region", "eta_1", "p1_over_omega", "eta_carnot");
    for (int i = 0; i < h_steps; ++i) {
        const double bh = h_min + i * (h_max - h_min) / (h_steps - 1);
        for (int j = 0; j < c_steps; ++j) {
            const double bc = c_min + j * (c_max - c_min) / (c_steps - 1);
            const EngineSpec spec = spec_from(bh, bc, n);
            const std::string carnot = fmt(1.0 - bh / bc);
            if (operating_region(spec)) {
                const OptimalCycle cycle = optimal_multistroke(spec);
                csv.row(bh, bc, true, cycle.eta, cycle.work, carnot);
            } else {
                csv.row(bh, bc, false, "", "", carnot);
            }
        }
    }
    return {csv.str(), 0};
}

CommandResult do_otto(double y, int steps) {
    if (!(y >= 1.0)) {
        throw UsageError("--y must be at least 1");
    }
    if (steps < 1) {
        throw UsageError("--steps must be at least 1");
    }
    Csv csv;
    csv.row("eta_otto", "p_otto_per_gap");
    const double carnot = 1.0 - 1.0 / y;
    if (carnot == 0.0 || steps == 1) {
        csv.row(0.0, otto_optimal(y, 0.0));
        return {csv.str(), 0};
    }
    for (int i = 0; i < steps; ++i) {
        const double eta = carnot * i / (steps - 1);
        csv.row(eta, otto_optimal(y, eta));
    }
    return {csv.str(), 0};
}

CommandResult do_extract(double beta_omega, double energy_fraction, double alpha) {
    if (!(beta_omega > 0.0)) {
        throw UsageError("--beta-omega must be positive");
    }
    const ControlMarginalState state = make_state(energy_fraction, alpha, 1.0);
    const BathParams bath(beta_omega, 1.0);
    const double z = state.z();
    const double b = z * z >= 1.0 ? 0.0 : alpha * alpha / ((1.0 - z) * (1.0 + z));
    const ExtractionThresholds th = extraction_thresholds(bath.boltzmann(), z, b);
    const SingleBathExtraction wmax = single_bath_wmax(state.energy(), beta_omega, 1.0);
    const double gain = delta_r_max(state, bath);

    Csv csv;
    csv.row("key", "value");
    csv.row("delta_r_max_over_omega", gain);
    csv.row("extraction_possible", gain > 0.0);
    csv.row("n_steps", wmax.n_steps);
    csv.row("w_max_over_omega", wmax.w_max);
    if (th.lambda0_numeric) {
        csv.row("lambda0_numeric", *th.lambda0_numeric);
        csv.row("lambda0_closed", *th.lambda0_closed);
        csv.row("lambda0_match", th.lambda0_match);
    } else {
        csv.row("lambda0_numeric", "no positive extraction possible");
    }
    if (th.z0_numeric) {
        csv.row("z0_numeric", *th.z0_numeric);
    } else {
        csv.row("z0_numeric", "no positive extraction possible");
    }
    csv.row("z0_closed", th.z0_closed);
    csv.row("z0_match", th.z0_match);
    csv.row("z_plus", th.z_plus);
    csv.row("z_minus", th.z_minus);
    return {csv.str(), 0};
}

CommandResult do_simulate(double bh, double bc, int n, int cycles, const std::string& start) {
    const EngineSpec spec = spec_from(bh, bc, n);
    if (cycles < 1) {
        throw UsageError("--cycles must be at least 1");
    }
    if (!operating_region(spec)) {
        throw OutOfRegionError(region_lhs(spec));
    }
    double excited = 0.0;
    if (start == "stationary") {
        excited = stationary_state(spec).excited_population;
    } else if (start != "ground") {
        throw UsageError("--start must be 'ground' or 'stationary'");
    }
    JointLadderState state = JointLadderState::qubit_at_origin(excited, cycles * n + 1);
    Csv csv;
    csv.row("cycle", "work_over_omega", "excited_population", "battery_mean_over_omega",
            "battery_variance");
    double mean = state.battery_mean();
    for (int c = 1; c <= cycles; ++c) {
        state = apply_t_map(state, spec);
        const double next_mean = state.battery_mean();
        const double variance = state.battery_second_moment() - next_mean * next_mean;
        csv.row(c, next_mean - mean, state.excited_population(), next_mean, variance);
        mean = next_mean;
    }
    return {csv.str(), 0};
}

CommandResult do_fluct(double bh, double bc, int cycles) {
    const EngineSpec spec = spec_from(bh, bc, 1);
    if (cycles < 2 || cycles % 2 != 0) {
        throw UsageError("--cycles must be an even number >= 2");
    }
    if (!operating_region(spec)) {
        throw OutOfRegionError(region_lhs(spec));
    }
    const double stationary_excited = stationary_state(spec).excited_population;
    const BatteryDistribution correlated =
        correlated_distribution(cycles, stationary_excited, spec);
    const BatteryDistribution uncorrelated = uncorrelated_distribution(cycles, spec);
    Csv csv;
    csv.row("offset", "p_correlated", "p_uncorrelated");
    for (int k = -cycles; k <= cycles; k += 2) {
        csv.row(k, correlated.probability(k), uncorrelated.probability(k));
    }
    return {csv.str(), 0};
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"minimal-coupling qubit heat engine: optima, oracles and ledgers", "mcqhe"};
    app.require_subcommand(1);

    std::string out_path = "-";
    app.add_option("--out", out_path, "output file, or '-' for stdout")->capture_default_str();

    double bh = 0.0;
    double bc = 0.0;
    int n = 1;
    int n_max = 0;
    int cycles = 2;
    int steps = 101;
    double y = 1.0;
    double beta_omega = 0.0;
    double energy_fraction = 0.0;
    double alpha = 0.0;
    double h_min = 0.0, h_max = 0.0, c_min = 0.0, c_max = 0.0;
    int h_steps = 2, c_steps = 2;
    std::string start = "stationary";

    auto* region = app.add_subcommand("region", "positive-efficiency condition check");
    region->add_option("--beta-h-omega", bh)->required();
    region->add_option("--beta-c-omega", bc)->required();
    region->add_option("--n", n);

    auto* optimal = app.add_subcommand("optimal", "optimal three-stroke engine");
    optimal->add_option("--beta-h-omega", bh)->required();
    optimal->add_option("--beta-c-omega", bc)->required();

    auto* multistroke = app.add_subcommand("multistroke", "optimal n-stroke engine");
    multistroke->add_option("--beta-h-omega", bh)->required();
    multistroke->add_option("--beta-c-omega", bc)->required();
    multistroke->add_option("--n", n);
    multistroke->add_option("--n-max", n_max, "emit rows for n = 1..n-max while in region");

    auto* sweep = app.add_subcommand("sweep", "grid over (beta_h*omega, beta_c*omega)");
    sweep->add_option("--beta-h-min", h_min)->required();
    sweep->add_option("--beta-h-max", h_max)->required();
    sweep->add_option("--beta-h-steps", h_steps)->required();
    sweep->add_option("--beta-c-min", c_min)->required();
    sweep->add_option("--beta-c-max", c_max)->required();
    sweep->add_option("--beta-c-steps", c_steps)->required();
    sweep->add_option("--n", n);

    auto* otto = app.add_subcommand("otto", "Otto-cycle work production per gap");
    otto->add_option("--y", y, "beta_c/beta_h ratio")->required();
    otto->add_option("--steps", steps);

    auto* extract = app.add_subcommand("extract", "single-bath extraction and thresholds");
    extract->add_option("--beta-omega", beta_omega)->required();
    extract->add_option("--energy-fraction", energy_fraction)->required();
    extract->add_option("--alpha", alpha);

    auto* simulate = app.add_subcommand("simulate", "battery-ladder realization ledger");
    simulate->add_option("--beta-h-omega", bh)->required();
    simulate->add_option("--beta-c-omega", bc)->required();
    simulate->add_option("--n", n);
    simulate->add_option("--cycles", cycles)->required();
    simulate->add_option("--start", start, "ground or stationary")->capture_default_str();

    auto* fluct = app.add_subcommand("fluct", "correlated vs uncorrelated work distribution");
    fluct->add_option("--beta-h-omega", bh)->required();
    fluct->add_option("--beta-c-omega", bc)->required();
    fluct->add_option("--cycles", cycles)->required();

    // Let --out given after a subcommand fall through to the main app.
    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        CommandResult result;
        if (*region) {
            result = do_region(bh, bc, n);
        } else if (*optimal) {
            result = do_optimal(bh, bc);
        } else if (*multistroke) {
            result = do_multistroke(bh, bc, n, n_max);
        } else if (*sweep) {
            result = do_sweep(h_min, h_max, h_steps, c_min, c_max, c_steps, n);
        } else if (*otto) {
            result = do_otto(y, steps);
        } else if (*extract) {
            result = do_extract(beta_omega, energy_fraction, alpha);
        } else if (*simulate) {
            result = do_simulate(bh, bc, n, cycles, start);
        } else if (*fluct) {
            result = do_fluct(bh, bc, cycles);
        }
        const int emit_status = emit(out_path, result.content, out, err);
        return emit_status != 0 ? emit_status : result.status;
    } catch (const OutOfRegionError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mcqhe
