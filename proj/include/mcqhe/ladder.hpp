#pragma once

#include <vector>

#include "mcqhe/engine.hpp"

namespace mcqhe {

// Diagonal populations of the working body (g/e) joined with a battery
// ladder of integer offsets k in [-K, K], spacing omega.
class JointLadderState {
public:
    explicit JointLadderState(int half_width);

    static JointLadderState point_mass(bool excited, int offset, int half_width);
    // Mixed qubit (given excited population) with the battery at offset 0.
    static JointLadderState qubit_at_origin(double excited_population, int half_width);

    int half_width() const { return half_width_; }
    double probability(bool excited, int offset) const;
    void add_probability(bool excited, int offset, double mass);

    double total_mass() const;
    double excited_population() const;
    double battery_mean() const;  // units of omega
    double battery_second_moment() const;
    int support_radius() const;  // largest |k| carrying mass

private:
    int half_width_;
    std::vector<double> ground_;
    std::vector<double> excited_;
};

struct BatteryDistribution {
    std::vector<double> mass;  // offsets min_offset .. min_offset + size - 1
    int min_offset = 0;
    double mean = 0.0;      // units of omega
    double variance = 0.0;  // units of omega^2

    double probability(int offset) const;
};

BatteryDistribution make_distribution(std::vector<double> mass, int min_offset);

// One engine cycle applied to the joint populations.  The window must
// leave room for the walk: half_width >= support_radius + n_strokes.
JointLadderState apply_t_map(const JointLadderState& state, const EngineSpec& spec);

struct StationaryInfo {
    double excited_population;   // a_H^n a_C / (1 + a_H^n a_C)
    double fixed_point_residual; // qubit-marginal change under one cycle
};

StationaryInfo stationary_state(const EngineSpec& spec);

struct EvolutionResult {
    JointLadderState final_state;
    std::vector<double> per_cycle_work;  // battery mean-energy change, energy units
};

EvolutionResult evolve_cycles(const JointLadderState& initial, const EngineSpec& spec, int cycles);

// Battery marginal q[k] = p[g][k] + p[e][k], trimmed to the support.
BatteryDistribution battery_distribution(const JointLadderState& state);

}  // namespace mcqhe
