#include "mcqhe/strokes.hpp"

#include <cmath>
#include <string>

namespace mcqhe {

namespace {

constexpr double kGammaTolerance = 1e-12;
constexpr double kRootTolerance = 1e-12;
constexpr int kMaxBisectionIterations = 200;
constexpr double kPi = 3.14159265358979323846;

void check_bath_matches(const ControlMarginalState& state, const BathParams& bath) {
    if (state.gap() != bath.gap) {
        throw std::invalid_argument("bath gap does not match the working-body gap");
    }
}

ControlMarginalState state_from_z(double z, double alpha, double gap) {
    return ControlMarginalState(0.5 * (1.0 + z), alpha, gap);
}

// Ergotropy gain of the thermal stroke (lambda, gamma_max) on the given state.
double delta_r_at(const ControlMarginalState& state, const BathParams& bath, double lambda) {
    const ThermalStrokeParams params{lambda, gamma_max(lambda, bath.boltzmann())};
    const StrokeOutcome outcome = thermal_stroke(state, bath, params);
    return ergotropy(outcome.state_after) - ergotropy(state);
}

// inf{x in (lo,hi] : pred(x)} given pred(lo) == false and pred(hi) == true.
double bisect_threshold(double lo, double hi, const auto& pred) {
    for (int i = 0; i < kMaxBisectionIterations && hi - lo > kRootTolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double gamma_max(double lambda, double a) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("mixing weight lambda out of range [0,1]");
    }
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("Boltzmann weight out of range (0,1]");
    }
    return std::sqrt((1.0 - lambda * a) * (1.0 - lambda));
}

StrokeOutcome thermal_stroke(const ControlMarginalState& state, const BathParams& bath,
                             const ThermalStrokeParams& params) {
    check_bath_matches(state, bath);
    const double a = bath.boltzmann();
    const double bound = gamma_max(params.lambda, a);
    if (!(params.gamma >= 0.0)) {
        throw std::invalid_argument("damping factor gamma must be non-negative");
    }
    if (params.gamma > bound + kGammaTolerance) {
        throw std::invalid_argument("damping factor gamma = " + std::to_string(params.gamma) +
                                    " exceeds the admissible bound " + std::to_string(bound));
    }
    const double z = state.z();
    const double z_after = z - params.lambda * (z * (1.0 + a) + 1.0 - a);
    const double alpha_after = std::min(params.gamma, bound) * state.coherence();
    ControlMarginalState after = state_from_z(z_after, alpha_after, state.gap());
    return StrokeOutcome{after, after.energy() - state.energy()};
}

StrokeOutcome work_stroke(const ControlMarginalState& state, const WorkStrokeParams& params) {
    if (!(params.theta >= -kPi && params.theta <= kPi)) {
        throw std::invalid_argument("rotation angle theta out of range [-pi, pi]");
    }
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    const double alpha = state.coherence();
    const double z = state.z();
    const double z_after = s * alpha + c * z;
    // The sign of the rotated coherence is a phase; keep alpha >= 0.
    const double alpha_after = std::fabs(c * alpha - s * z);
    ControlMarginalState after = state_from_z(z_after, alpha_after, state.gap());
    return StrokeOutcome{after, state.energy() - after.energy()};
}

StrokeOutcome max_ergotropy_storing(const ControlMarginalState& state) {
    ControlMarginalState after = state_from_z(-state.r(), 0.0, state.gap());
    return StrokeOutcome{after, state.energy() - after.energy()};
}

double delta_r_max(const ControlMarginalState& state, const BathParams& bath) {
    check_bath_matches(state, bath);
    const double omega = state.gap();
    const double gain =
        2.0 * (omega - state.energy()) * bath.boltzmann() - omega - ergotropy(state);
    return std::max(gain, 0.0);
}

ExtractionThresholds extraction_thresholds(double a, double z, double B) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("Boltzmann weight out of range (0,1]");
    }
    if (!(z >= -1.0 && z <= 1.0)) {
        throw std::invalid_argument("Bloch coordinate z out of range [-1,1]");
    }
    if (!(B >= 0.0 && B <= 1.0)) {
        throw std::invalid_argument("coherence fraction B out of range [0,1]");
    }
    ExtractionThresholds out{};
    const BathParams bath(-std::log(a), 1.0);

    const auto state_at = [&](double zz) {
        return state_from_z(zz, std::sqrt(B * (1.0 - zz) * (1.0 + zz)), 1.0);
    };

    // lambda0: smallest mixing weight with positive extraction for this state.
    const ControlMarginalState state = state_at(z);
    if (delta_r_at(state, bath, 1.0) > 0.0) {
        out.lambda0_numeric =
            bisect_threshold(0.0, 1.0, [&](double l) { return delta_r_at(state, bath, l) > 0.0; });
        const double h = -z * (1.0 + a) - 1.0 + a;
        const double r = state.r();
        if (B == 0.0) {
            out.lambda0_closed = -z / h;
        } else {
            out.lambda0_closed = 1.0 + (r - z - 2.0 * h) / (a * (r - z));
        }
        out.lambda0_match = std::fabs(*out.lambda0_closed - *out.lambda0_numeric) <= 1e-9;
    }

    // z0: largest z still admitting extraction, found where the extremal
    // stroke's ergotropy gain changes sign.
    const auto extremal_gain_positive = [&](double zz) {
        return delta_r_at(state_at(zz), bath, 1.0) > 0.0;
    };
    if (extremal_gain_positive(-1.0)) {
        out.z0_numeric = bisect_threshold(-1.0, 1.0, [&](double zz) {
            return !extremal_gain_positive(zz);
        });
    }
    out.z0_closed = -((1.0 - a) * (1.0 + 2.0 * a) -
                      std::sqrt(4.0 * a * a + 4.0 * a * (3.0 * B - 2.0) + (2.0 - B) * (2.0 - B))) /
                    (2.0 * a * (1.0 + a) + 0.5 * B);
    out.z0_match = out.z0_numeric && std::fabs(out.z0_closed - *out.z0_numeric) <= 1e-9;

    const double root =
        std::sqrt((2.0 - B) * (2.0 - B) * (1.0 + a * a) + 2.0 * a * (-B * B + 6.0 * B - 4.0));
    const double denom = 2.0 * a * (2.0 - B) + B * (1.0 + a * a);
    out.z_plus = -((1.0 - a) * (2.0 + 2.0 * a + root)) / denom;
    out.z_minus = -((1.0 - a) * (2.0 + 2.0 * a - root)) / denom;
    return out;
}

}  // namespace mcqhe
