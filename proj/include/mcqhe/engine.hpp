#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "mcqhe/strokes.hpp"

namespace mcqhe {

struct EngineSpec {
    double beta_h;      // hot inverse temperature, >= 0
    double beta_c;      // cold inverse temperature, >= 0
    double gap = 1.0;   // qubit gap omega, > 0
    int n_strokes = 1;  // number of hot/battery pairs per cycle, >= 1
};

void validate(const EngineSpec& spec);

BathParams hot_bath(const EngineSpec& spec);
BathParams cold_bath(const EngineSpec& spec);

// Left-hand side of the positive-efficiency condition,
// exp(n beta_h omega) + exp(-beta_c omega); engines exist strictly below 2.
double region_lhs(const EngineSpec& spec);
bool operating_region(const EngineSpec& spec);

// Thrown when a command needs a working engine outside the operating region.
class OutOfRegionError : public std::runtime_error {
public:
    explicit OutOfRegionError(double lhs);
    double lhs;  // boundary value, to be compared against 2
};

struct OptimalCycle {
    double eta;
    double work;                   // P, energy units
    std::vector<double> energies;  // stationary energies E^0 .. E^{2n}, energy units
    bool marginal = false;         // exactly on the region boundary (eta = P = 0)
};

// Closed-form optimum over all three-stroke cycles (n = 1).
OptimalCycle optimal_three_stroke(const EngineSpec& spec);

// Closed-form optimum of the n-stroke generalization; reduces to the
// three-stroke result at n = 1.
OptimalCycle optimal_multistroke(const EngineSpec& spec);

enum class StrokeLabel { Hot, Battery, Cold };

struct ProtocolStep {
    StrokeLabel label;
    std::variant<ThermalStrokeParams, WorkStrokeParams> params;
};

using Protocol = std::vector<ProtocolStep>;

ProtocolStep hot_stroke(double lambda, double gamma);
ProtocolStep cold_stroke(double lambda, double gamma);
ProtocolStep battery_stroke(double theta);

struct CycleTrace {
    struct Step {
        StrokeLabel label;
        ControlMarginalState state_after;
        double energy_flow;
    };
    std::vector<Step> steps;
    double work = 0.0;      // total battery gain
    double heat_hot = 0.0;  // heat drawn from the hot bath
    double heat_cold = 0.0;
    double efficiency = 0.0;  // work / heat_hot (NaN when heat_hot == 0)
    // |E_f - E_i| + |alpha_f - alpha_i|; zero for a closed cycle.
    double closure_residual = 0.0;
    // |dE_S + W - Q_H - Q_C|; reduces to |W - Q_H - Q_C| on closed cycles.
    double first_law_residual = 0.0;
};

CycleTrace run_cycle(const ControlMarginalState& initial, const EngineSpec& spec,
                     const Protocol& protocol);

// One feasible closed cycle found by the grid search.
struct BruteForcePoint {
    double eta;
    double work;      // energy units
    double heat_hot;  // energy units
    double e0;        // initial energy, energy units
    double lambda_h;
    double xi;      // work understoring, energy units
    double alpha0;  // initial coherence
    double lambda_c;
    double gamma_c;
};

// Exhaustive grid search over three-stroke cycles of the H,B,C shape:
// E^0 and lambda_H on a grid of the given resolution, xi >= 0 likewise,
// alpha^0 on a coarser axis of `alpha_steps` fractions of its admissible
// range.  The closing cold stroke is solved exactly (linear in lambda_C),
// so every reported cycle closes to rounding.  Returns the feasible
// positive-work point of maximal efficiency, or nothing if the grid holds
// no closed positive-work cycle.  Rows are reduced in grid order, so any
// thread count (0 = hardware) reports the bit-identical optimum.
std::optional<BruteForcePoint> brute_force_optimum(const EngineSpec& spec, double grid_resolution,
                                                   int alpha_steps = 5, int threads = 0);

// Enumerates every feasible closed positive-work grid cycle (same grid as
// brute_force_optimum); test hook for cycle-level properties.
std::vector<BruteForcePoint> brute_force_feasible_cycles(const EngineSpec& spec,
                                                         double grid_resolution,
                                                         int alpha_steps = 5);

struct SingleBathExtraction {
    int n_steps;
    double w_max;  // energy units
};

// Maximal work extractable from a single bath starting from a diagonal
// state of the given energy, via alternating extremal thermal strokes and
// maximal ergotropy storings.
SingleBathExtraction single_bath_wmax(double energy, double beta, double gap);

struct ReferenceEfficiencies {
    double carnot;          // 1 - beta_h/beta_c
    double curzon_ahlborn;  // 1 - sqrt(beta_h/beta_c)
};

ReferenceEfficiencies reference_efficiencies(const EngineSpec& spec);

// Maximal work production per unit gap of the two-temperature Otto cycle
// at efficiency eta_otto, for bath-temperature ratio y = beta_c/beta_h.
// 1-D scan over the free parameter plus golden-section refinement.
double otto_optimal(double y, double eta_otto);

}  // namespace mcqhe
