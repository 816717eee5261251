#pragma once

#include <stdexcept>

namespace mcqhe {

// Two-level control-marginal state, stored as (E/omega, alpha, omega).
// Bloch coordinates are derived on demand: z = 2E/omega - 1 in [-1,1],
// r = sqrt(z^2 + alpha^2) in [0,1].  The coherence alpha is a single
// non-negative real; its phase carries no thermodynamic content.
class ControlMarginalState {
public:
    // Validates all invariants.  States with r slightly above 1 (up to
    // 1e-12, floating-point closure after repeated strokes) are accepted
    // and clamped back onto the Bloch ball; anything beyond is rejected.
    ControlMarginalState(double energy_fraction, double coherence, double gap);

    double energy_fraction() const { return energy_fraction_; }
    double coherence() const { return coherence_; }
    double gap() const { return gap_; }

    double energy() const { return energy_fraction_ * gap_; }
    double z() const { return 2.0 * energy_fraction_ - 1.0; }
    double r() const;

private:
    double energy_fraction_;  // E/omega in [0,1]
    double coherence_;        // alpha >= 0
    double gap_;              // omega > 0
};

ControlMarginalState make_state(double energy_fraction, double coherence, double gap);

// Heat bath at inverse temperature beta coupled to a qubit of the given gap.
struct BathParams {
    double beta;  // >= 0
    double gap;   // > 0, must match the working body gap

    BathParams(double beta_in, double gap_in);

    // Boltzmann weight a = exp(-beta*omega), in (0,1].
    double boltzmann() const;
};

// Scalar state functionals.  Entropy is in nats (k = 1).
double ergotropy(const ControlMarginalState& state);       // R_S = (omega/2)(z + r)
double passive_energy(const ControlMarginalState& state);  // P_S = E_S - R_S
double entropy(const ControlMarginalState& state);
double free_energy(const ControlMarginalState& state, double beta);  // F = E - S/beta

struct ScalarFunctionals {
    double energy;
    double passive_energy;
    double entropy;
    double free_energy;
};

// Bundles the four functionals; throws if beta == 0 (free energy is
// undefined at infinite temperature).
ScalarFunctionals scalar_functionals(const ControlMarginalState& state, double beta);

// Gibbs state of the bath, as a control-marginal state.
ControlMarginalState gibbs_state(const BathParams& bath);

}  // namespace mcqhe
