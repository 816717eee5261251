#include "mcqhe/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcqhe {

namespace {
constexpr double kBlochTolerance = 1e-12;
}

ControlMarginalState::ControlMarginalState(double energy_fraction, double coherence, double gap)
    : energy_fraction_(energy_fraction), coherence_(coherence), gap_(gap) {
    if (!std::isfinite(gap) || gap <= 0.0) {
        throw std::invalid_argument("state gap must be positive");
    }
    if (!std::isfinite(energy_fraction) || energy_fraction < 0.0 || energy_fraction > 1.0) {
        throw std::invalid_argument("energy fraction out of range [0,1]");
    }
    if (!std::isfinite(coherence) || coherence < 0.0) {
        throw std::invalid_argument("coherence must be non-negative");
    }
    const double zz = z();
    const double rr = std::hypot(zz, coherence);
    if (rr > 1.0 + kBlochTolerance) {
        throw std::invalid_argument("state outside the Bloch ball (r = " + std::to_string(rr) +
                                    " > 1)");
    }
    if (rr > 1.0) {
        // Clamp alpha so that r lands exactly on the ball.
        coherence_ = std::sqrt(std::max(0.0, (1.0 - zz) * (1.0 + zz)));
    }
}

double ControlMarginalState::r() const {
    return std::min(1.0, std::hypot(z(), coherence_));
}

ControlMarginalState make_state(double energy_fraction, double coherence, double gap) {
    return ControlMarginalState(energy_fraction, coherence, gap);
}

BathParams::BathParams(double beta_in, double gap_in) : beta(beta_in), gap(gap_in) {
    if (!std::isfinite(gap) || gap <= 0.0) {
        throw std::invalid_argument("bath gap must be positive");
    }
    if (!std::isfinite(beta) || beta < 0.0) {
        throw std::invalid_argument("inverse temperature must be non-negative");
    }
}

double BathParams::boltzmann() const {
    return std::exp(-beta * gap);
}

double ergotropy(const ControlMarginalState& state) {
    return 0.5 * state.gap() * (state.z() + state.r());
}

double passive_energy(const ControlMarginalState& state) {
    return 0.5 * state.gap() * (1.0 - state.r());
}

double entropy(const ControlMarginalState& state) {
    const double r = state.r();
    const double lp = 0.5 * (1.0 + r);
    const double lm = 0.5 * (1.0 - r);
    double s = 0.0;
    if (lp > 0.0) s -= lp * std::log(lp);
    if (lm > 0.0) s -= lm * std::log(lm);
    return s;
}

double free_energy(const ControlMarginalState& state, double beta) {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw std::invalid_argument("inverse temperature must be non-negative");
    }
    if (beta == 0.0) {
        throw std::domain_error("free energy undefined at infinite temperature (beta = 0)");
    }
    return state.energy() - entropy(state) / beta;
}

ScalarFunctionals scalar_functionals(const ControlMarginalState& state, double beta) {
    ScalarFunctionals f{};
    f.energy = state.energy();
    f.passive_energy = passive_energy(state);
    f.entropy = entropy(state);
    f.free_energy = free_energy(state, beta);
    return f;
}

ControlMarginalState gibbs_state(const BathParams& bath) {
    const double a = bath.boltzmann();
    return ControlMarginalState(a / (1.0 + a), 0.0, bath.gap);
}

}  // namespace mcqhe
