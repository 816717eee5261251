#pragma once

#include "mcqhe/ladder.hpp"

namespace mcqhe {

// Per-cycle transition probabilities of the battery walk driven by the
// three-stroke engine: right, left, and the two-cycle standstill.
// p_plus + p_minus + p_zero = 1 holds exactly by construction.
struct WalkParams {
    double p_plus;   // a_H (1 - a_C)
    double p_minus;  // 1 - a_H
    double p_zero;   // a_H a_C
};

WalkParams walk_params(const EngineSpec& spec);  // n_strokes must be 1

// Excited population of the refreshed qubits in the uncorrelated charging
// scenario (the pre-storing energy of the stationary cycle).
double uncorrelated_up_probability(const EngineSpec& spec);

// Battery distribution after the given number of engine cycles, computed
// by exact evolution of the joint populations.  This is the reference.
BatteryDistribution correlated_distribution(int cycles, double initial_excited,
                                            const EngineSpec& spec);

// Trinomial-walk closed form of the same distribution (even cycle counts).
// Evaluated for comparison against the exact evolution.
BatteryDistribution correlated_closed_form(int cycles, double initial_excited,
                                           const EngineSpec& spec);

// Battery distribution after charging through independent qubits, computed
// by exact convolution of +-1 steps.  This is the reference.
BatteryDistribution uncorrelated_distribution(int strokes, const EngineSpec& spec);

// Binomial closed form with the up/down exponents swapped, i.e. the mirror
// image of the distribution.  Kept so the swap stays documented by tests.
BatteryDistribution uncorrelated_closed_form_mirrored(int strokes, const EngineSpec& spec);

// Binomial closed form with the exponents matching the convolution
// (n + k up-steps to end at +2k).
BatteryDistribution uncorrelated_closed_form(int strokes, const EngineSpec& spec);

struct Moments {
    double mean;      // units of omega
    double variance;  // units of omega^2
};

// First and second central moments; rejects unnormalized input (1e-9).
Moments moments(const BatteryDistribution& dist);

}  // namespace mcqhe
