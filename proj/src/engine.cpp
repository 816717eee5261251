#include "mcqhe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

namespace mcqhe {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

double checked_region_lhs(const EngineSpec& spec) {
    validate(spec);
    const double lhs = region_lhs(spec);
    if (lhs > 2.0 + kBoundaryTolerance) {
        throw OutOfRegionError(lhs);
    }
    return lhs;
}

}  // namespace

void validate(const EngineSpec& spec) {
    if (!std::isfinite(spec.gap) || spec.gap <= 0.0) {
        throw std::invalid_argument("engine gap must be positive");
    }
    if (!(spec.beta_h >= 0.0) || !(spec.beta_c >= 0.0)) {
        throw std::invalid_argument("inverse temperatures must be non-negative");
    }
    if (spec.n_strokes < 1) {
        throw std::invalid_argument("stroke count must be at least 1");
    }
}

BathParams hot_bath(const EngineSpec& spec) {
    return BathParams(spec.beta_h, spec.gap);
}

BathParams cold_bath(const EngineSpec& spec) {
    return BathParams(spec.beta_c, spec.gap);
}

double region_lhs(const EngineSpec& spec) {
    return std::exp(spec.n_strokes * spec.beta_h * spec.gap) + std::exp(-spec.beta_c * spec.gap);
}

bool operating_region(const EngineSpec& spec) {
    validate(spec);
    return region_lhs(spec) < 2.0;
}

OutOfRegionError::OutOfRegionError(double lhs_in)
    : std::runtime_error("no positive-efficiency engine exists: exp(n*beta_h*omega) + "
                         "exp(-beta_c*omega) = " +
                         std::to_string(lhs_in) + " >= 2"),
      lhs(lhs_in) {}

OptimalCycle optimal_three_stroke(const EngineSpec& spec) {
    EngineSpec s = spec;
    s.n_strokes = 1;
    const double lhs = checked_region_lhs(s);
    const double w = s.gap;
    const double bh = s.beta_h * w;
    const double bc = s.beta_c * w;
    const double z1 = 1.0 + std::exp(-(bh + bc));

    OptimalCycle cycle;
    cycle.eta = 1.0 - std::expm1(bh) / (-std::expm1(-bc));
    cycle.work = w * (2.0 * std::exp(-bh) / z1 - 1.0);
    cycle.energies = {w * std::exp(-(bh + bc)) / z1, w * std::exp(-bh) / z1,
                      w * (1.0 - std::exp(-bh) / z1)};
    cycle.marginal = lhs >= 2.0 - kBoundaryTolerance;
    return cycle;
}

OptimalCycle optimal_multistroke(const EngineSpec& spec) {
    const double lhs = checked_region_lhs(spec);
    const double w = spec.gap;
    const int n = spec.n_strokes;
    const double ah = std::exp(-spec.beta_h * w);
    const double ac = std::exp(-spec.beta_c * w);
    const double ahn = std::pow(ah, n);

    OptimalCycle cycle;
    if (ah == 1.0) {
        // beta_h = 0 limit of the formulas below.
        cycle.eta = 1.0;
        cycle.work = w * (2.0 * n / (1.0 + ac) - n);
    } else {
        cycle.eta = 1.0 - (1.0 - ah) * (1.0 - ahn) /
                              ((1.0 - ahn) * (1.0 + ah) - n * (1.0 + ac * ahn) * (1.0 - ah));
        cycle.work = w * (2.0 * ah * (1.0 - ahn) / ((1.0 - ah) * (1.0 + ac * ahn)) - n);
    }
    const double zn = 1.0 + ac * ahn;
    cycle.energies.reserve(2 * n + 1);
    cycle.energies.push_back(w * ac * ahn / zn);
    for (int k = 1; k <= n; ++k) {
        const double ahk = std::pow(ah, k);
        cycle.energies.push_back(w * ahk / zn);
        cycle.energies.push_back(w * (1.0 - ahk / zn));
    }
    cycle.marginal = lhs >= 2.0 - kBoundaryTolerance;
    return cycle;
}

ProtocolStep hot_stroke(double lambda, double gamma) {
    return ProtocolStep{StrokeLabel::Hot, ThermalStrokeParams{lambda, gamma}};
}

ProtocolStep cold_stroke(double lambda, double gamma) {
    return ProtocolStep{StrokeLabel::Cold, ThermalStrokeParams{lambda, gamma}};
}

ProtocolStep battery_stroke(double theta) {
    return ProtocolStep{StrokeLabel::Battery, WorkStrokeParams{theta}};
}

CycleTrace run_cycle(const ControlMarginalState& initial, const EngineSpec& spec,
                     const Protocol& protocol) {
    validate(spec);
    CycleTrace trace;
    trace.steps.reserve(protocol.size());
    ControlMarginalState state = initial;
    for (const ProtocolStep& step : protocol) {
        StrokeOutcome outcome = [&] {
            if (step.label == StrokeLabel::Battery) {
                const auto* work = std::get_if<WorkStrokeParams>(&step.params);
                if (work == nullptr) {
                    throw std::invalid_argument("battery stroke requires work-stroke parameters");
                }
                return work_stroke(state, *work);
            }
            const auto* thermal = std::get_if<ThermalStrokeParams>(&step.params);
            if (thermal == nullptr) {
                throw std::invalid_argument("bath stroke requires thermal-stroke parameters");
            }
            const BathParams bath =
                step.label == StrokeLabel::Hot ? hot_bath(spec) : cold_bath(spec);
            return thermal_stroke(state, bath, *thermal);
        }();
        switch (step.label) {
            case StrokeLabel::Hot: trace.heat_hot += outcome.energy_flow; break;
            case StrokeLabel::Cold: trace.heat_cold += outcome.energy_flow; break;
            case StrokeLabel::Battery: trace.work += outcome.energy_flow; break;
        }
        state = outcome.state_after;
        trace.steps.push_back({step.label, state, outcome.energy_flow});
    }
    trace.efficiency = trace.work / trace.heat_hot;
    trace.closure_residual = std::fabs(state.energy() - initial.energy()) +
                             std::fabs(state.coherence() - initial.coherence());
    trace.first_law_residual = std::fabs((state.energy() - initial.energy()) + trace.work -
                                         trace.heat_hot - trace.heat_cold);
    return trace;
}

namespace {

// The grid search works in units of the gap (z coordinates); candidates are
// converted to energy units on output.
struct GridContext {
    double ah;
    double ac;
    double step;  // 1/M
    long long m;  // grid denominator
};

struct CellCandidate {
    bool feasible = false;
    BruteForcePoint point{};
};

// Evaluates one (e0, alpha0, lambda_h) cell.  The closing cold stroke can
// land on z0 from any z2 outside the open interval between z0 (identity,
// lambda_c = 0) and the extremal landing point (ac - 1 - z0)/ac
// (lambda_c = 1); in between the required lambda_c leaves [0,1].  Scans xi
// upward over the two feasible segments; the first feasible xi carries the
// cell's maximal efficiency since eta strictly decreases with xi at fixed
// heat intake.
template <typename Fn>
void scan_cell(const GridContext& g, double e0, double alpha0, double lambda_h, bool stop_at_first,
               Fn&& emit) {
    const double z0 = 2.0 * e0 - 1.0;
    const double gamma_h = gamma_max(lambda_h, g.ah);
    const double z1 = z0 - lambda_h * (z0 * (1.0 + g.ah) + 1.0 - g.ah);
    const double alpha1 = gamma_h * alpha0;
    const double r1 = std::hypot(z1, alpha1);
    const double ergotropy1 = 0.5 * (z1 + r1);
    if (ergotropy1 <= 0.0) {
        return;  // no positive-work stroke available
    }
    const double heat_hot = 0.5 * (z1 - z0);

    const double z2_at_one = (g.ac - 1.0 - z0) / g.ac;
    const double gap_lo = std::min(z0, z2_at_one);
    const double gap_hi = std::max(z0, z2_at_one);
    // xi ranges of the two segments, in grid steps; per-k checks below
    // re-verify feasibility exactly, so the 1e-9 fuzz is safe.
    const long long k_gap_lo = static_cast<long long>(std::floor(0.5 * (gap_lo + r1) * g.m + 1e-9));
    const long long k_gap_hi = static_cast<long long>(std::ceil(0.5 * (gap_hi + r1) * g.m - 1e-9));
    const std::pair<long long, long long> segments[2] = {
        {0LL, k_gap_lo},
        {std::max({0LL, k_gap_lo + 1, k_gap_hi}), static_cast<long long>(g.m)}};

    for (const auto& [k_begin, k_end] : segments) {
        for (long long k = k_begin; k <= k_end; ++k) {
            const double xi = static_cast<double>(k) / g.m;
            const double work = ergotropy1 - xi;
            if (work <= 0.0) {
                return;  // larger xi only lowers the work further
            }
            const double z2 = -r1 + 2.0 * xi;
            const double alpha2 = std::sqrt(std::max(0.0, (r1 - z2) * (r1 + z2)));
            const double denom = z2 * (1.0 + g.ac) + 1.0 - g.ac;
            double lambda_c;
            if (z2 == z0) {
                lambda_c = 0.0;
            } else {
                lambda_c = (z2 - z0) / denom;
                if (!std::isfinite(lambda_c) || lambda_c < -1e-9 || lambda_c > 1.0 + 1e-9) {
                    continue;
                }
                lambda_c = std::clamp(lambda_c, 0.0, 1.0);
            }
            double gamma_c = 0.0;
            if (alpha2 > 1e-15) {
                gamma_c = alpha0 / alpha2;
                if (gamma_c > gamma_max(lambda_c, g.ac) + 1e-9) {
                    continue;
                }
            } else if (alpha0 != 0.0) {
                continue;
            }
            emit(BruteForcePoint{work / heat_hot, work, heat_hot, e0, lambda_h, xi, alpha0,
                                 lambda_c, gamma_c});
            if (stop_at_first) {
                return;
            }
        }
    }
}

bool better(const BruteForcePoint& a, const BruteForcePoint& b) {
    if (a.eta != b.eta) return a.eta > b.eta;
    if (a.e0 != b.e0) return a.e0 < b.e0;
    return std::fabs(1.0 - a.lambda_h) < std::fabs(1.0 - b.lambda_h);
}

template <typename Fn>
void scan_row(const GridContext& g, double e0, int alpha_steps, bool stop_at_first, Fn&& emit) {
    const double z0 = 2.0 * e0 - 1.0;
    const double alpha_cap = std::sqrt(std::max(0.0, (1.0 - z0) * (1.0 + z0)));
    for (int m = 0; m < alpha_steps; ++m) {
        if (m > 0 && alpha_cap == 0.0) {
            break;
        }
        const double alpha0 =
            alpha_steps > 1 ? alpha_cap * m / (alpha_steps - 1) : 0.0;
        for (long long j = 1; j <= g.m; ++j) {
            scan_cell(g, e0, alpha0, static_cast<double>(j) / g.m, stop_at_first, emit);
        }
    }
}

GridContext make_grid(const EngineSpec& spec, double grid_resolution) {
    validate(spec);
    if (spec.n_strokes != 1) {
        throw std::invalid_argument("grid search covers three-stroke engines only (n = 1)");
    }
    if (!(grid_resolution > 0.0 && grid_resolution <= 0.1)) {
        throw std::invalid_argument("grid resolution out of range (0, 0.1]");
    }
    GridContext g;
    g.ah = std::exp(-spec.beta_h * spec.gap);
    g.ac = std::exp(-spec.beta_c * spec.gap);
    g.m = std::max(1LL, std::llround(1.0 / grid_resolution));
    g.step = 1.0 / static_cast<double>(g.m);
    return g;
}

// Initial energies with a chance of positive extraction: E < 1 - 1/(2 a_H).
long long row_count(const GridContext& g) {
    const double e_max = 1.0 - 0.5 / g.ah;
    if (e_max <= 0.0) {
        return 0;
    }
    return static_cast<long long>(std::ceil(e_max * g.m - 1e-12));
}

BruteForcePoint scale_to_energy_units(BruteForcePoint p, double gap) {
    p.work *= gap;
    p.heat_hot *= gap;
    p.e0 *= gap;
    p.xi *= gap;
    return p;
}

}  // namespace

std::optional<BruteForcePoint> brute_force_optimum(const EngineSpec& spec, double grid_resolution,
                                                   int alpha_steps, int threads) {
    const GridContext g = make_grid(spec, grid_resolution);
    const long long rows = row_count(g);
    if (rows == 0) {
        return std::nullopt;
    }

    std::vector<CellCandidate> row_best(static_cast<size_t>(rows));
    const auto run_rows = [&](long long begin, long long end) {
        for (long long i = begin; i < end; ++i) {
            CellCandidate& best = row_best[static_cast<size_t>(i)];
            scan_row(g, static_cast<double>(i) / g.m, alpha_steps, true,
                     [&](const BruteForcePoint& p) {
                         if (!best.feasible || better(p, best.point)) {
                             best.feasible = true;
                             best.point = p;
                         }
                     });
        }
    };

    const unsigned hw = threads > 0 ? static_cast<unsigned>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    const long long workers = std::min<long long>(hw, rows);
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<size_t>(workers));
    const long long chunk = (rows + workers - 1) / workers;
    for (long long w = 0; w < workers; ++w) {
        const long long begin = w * chunk;
        const long long end = std::min(rows, begin + chunk);
        futures.push_back(std::async(std::launch::async, run_rows, begin, end));
    }
    for (auto& f : futures) {
        f.get();
    }

    // Deterministic reduction in grid order.
    std::optional<BruteForcePoint> best;
    for (const CellCandidate& c : row_best) {
        if (c.feasible && (!best || better(c.point, *best))) {
            best = c.point;
        }
    }

    if (best) {
        // The optimum sits on a feasibility corner in E^0, so refine that
        // axis around the coarse best (same idiom as the stroke-gain
        // oracle: coarse scan, fine rescan near the max).
        const double e_max = 1.0 - 0.5 / g.ah;
        const double fine = g.step / 20.0;
        const double lo = std::max(0.0, best->e0 - g.step);
        for (int i = 0; i <= 40; ++i) {
            const double e0 = lo + i * fine;
            if (e0 >= e_max) {
                break;
            }
            scan_row(g, e0, alpha_steps, true, [&](const BruteForcePoint& p) {
                if (better(p, *best)) {
                    *best = p;
                }
            });
        }
        best = scale_to_energy_units(*best, spec.gap);
    }
    return best;
}

std::vector<BruteForcePoint> brute_force_feasible_cycles(const EngineSpec& spec,
                                                         double grid_resolution, int alpha_steps) {
    const GridContext g = make_grid(spec, grid_resolution);
    const long long rows = row_count(g);
    std::vector<BruteForcePoint> cycles;
    for (long long i = 0; i < rows; ++i) {
        scan_row(g, static_cast<double>(i) / g.m, alpha_steps, false,
                 [&](const BruteForcePoint& p) {
                     cycles.push_back(scale_to_energy_units(p, spec.gap));
                 });
    }
    return cycles;
}

SingleBathExtraction single_bath_wmax(double energy, double beta, double gap) {
    if (!std::isfinite(gap) || gap <= 0.0) {
        throw std::invalid_argument("gap must be positive");
    }
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw std::invalid_argument("inverse temperature must be positive");
    }
    if (!(energy >= 0.0 && energy <= gap)) {
        throw std::invalid_argument("energy out of range [0, omega]");
    }
    const double arg = 2.0 * (1.0 - energy / gap);
    if (arg <= 1.0) {
        return {0, 0.0};
    }
    const double bw = beta * gap;
    const int n = static_cast<int>(std::floor(std::log(arg) / bw));
    if (n <= 0) {
        return {0, 0.0};
    }
    const double a = std::exp(-bw);
    const double w_max =
        2.0 * a * (gap - energy) * (1.0 - std::pow(a, n)) / (1.0 - a) - n * gap;
    return {n, w_max};
}

ReferenceEfficiencies reference_efficiencies(const EngineSpec& spec) {
    validate(spec);
    if (!(spec.beta_c > spec.beta_h) || !(spec.beta_h > 0.0)) {
        throw std::invalid_argument("reference efficiencies require beta_c > beta_h > 0");
    }
    const double ratio = spec.beta_h / spec.beta_c;
    return {1.0 - ratio, 1.0 - std::sqrt(ratio)};
}

double otto_optimal(double y, double eta_otto) {
    if (!(y >= 1.0)) {
        throw std::invalid_argument("bath-temperature ratio y must be at least 1");
    }
    const double carnot = 1.0 - 1.0 / y;
    if (!(eta_otto >= 0.0) || eta_otto > carnot + 1e-12) {
        throw std::invalid_argument("otto efficiency out of range [0, 1 - 1/y]");
    }
    const auto maximand = [&](double zv) {
        return 1.0 / (1.0 + std::exp(zv / (1.0 - eta_otto))) - 1.0 / (1.0 + std::exp(zv * y));
    };
    // Beyond z = 20 both logistic terms are below 2e-9.
    constexpr double kZMax = 20.0;
    constexpr double kScanStep = 1e-3;
    double best_z = kScanStep;
    double best = maximand(best_z);
    for (double zv = 2.0 * kScanStep; zv <= kZMax; zv += kScanStep) {
        const double v = maximand(zv);
        if (v > best) {
            best = v;
            best_z = zv;
        }
    }
    // Golden-section refinement around the scan maximum.
    constexpr double kGolden = 0.61803398874989484820;
    double lo = std::max(best_z - kScanStep, kScanStep * 0.5);
    double hi = std::min(best_z + kScanStep, kZMax);
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = maximand(x1);
    double f2 = maximand(x2);
    for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = maximand(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = maximand(x1);
        }
    }
    return std::max({best, f1, f2, 0.0});
}

}  // namespace mcqhe
