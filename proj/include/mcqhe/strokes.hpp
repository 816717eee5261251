#pragma once

#include <optional>

#include "mcqhe/qstate.hpp"

namespace mcqhe {

// Thermal stroke: convex mixture of the identity and the extremal thermal
// process (weight lambda), with coherence damping factor gamma.
struct ThermalStrokeParams {
    double lambda;  // in [0,1]
    double gamma;   // in [0, gamma_max(lambda, a)]
};

// Work stroke: planar rotation of the real Bloch vector (alpha, z).
struct WorkStrokeParams {
    double theta;  // radians, in [-pi, pi]
};

struct StrokeOutcome {
    ControlMarginalState state_after;
    // Heat Q for thermal strokes (into the working body positive);
    // work W for work strokes (stored in the battery positive).
    double energy_flow;
};

// Largest admissible coherence damping factor, sqrt((1-lambda*a)(1-lambda)).
double gamma_max(double lambda, double a);

// z' = z - lambda [z(1+a) + 1 - a],  alpha' = gamma * alpha,  Q = E' - E.
StrokeOutcome thermal_stroke(const ControlMarginalState& state, const BathParams& bath,
                             const ThermalStrokeParams& params);

// (alpha', z') = R(theta) (alpha, z); preserves r and entropy.  W = E - E'.
StrokeOutcome work_stroke(const ControlMarginalState& state, const WorkStrokeParams& params);

// The extremal work stroke: rotates onto the passive state (alpha, z) -> (0, -r),
// storing the full ergotropy, W = R_S.
StrokeOutcome max_ergotropy_storing(const ControlMarginalState& state);

// Largest ergotropy gain achievable by a single thermal stroke:
// max[2 (omega - E_S) a - omega - R_S, 0], attained by the extremal process.
double delta_r_max(const ControlMarginalState& state, const BathParams& bath);

// Thresholds of the positive-extraction window for a state with Bloch
// coordinate z and coherence alpha^2 = B (1 - z^2) against a bath with
// Boltzmann weight a.  The numeric roots are the reference; the closed
// forms are reported alongside for comparison only.
struct ExtractionThresholds {
    // Smallest mixing weight with positive ergotropy gain; empty when no
    // positive extraction is possible for this state.
    std::optional<double> lambda0_numeric;
    std::optional<double> lambda0_closed;
    bool lambda0_match = true;  // closed form within 1e-9 of the numeric root

    // Largest z (at this a, B) still admitting positive extraction; empty
    // when extraction is impossible even from the ground state.
    std::optional<double> z0_numeric;
    double z0_closed;
    bool z0_match = true;

    // Convexity-window edges of the ergotropy gain as a function of lambda.
    double z_plus;
    double z_minus;
};

ExtractionThresholds extraction_thresholds(double a, double z, double B);

}  // namespace mcqhe
