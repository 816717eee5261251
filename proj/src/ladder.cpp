#include "mcqhe/ladder.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mcqhe {

JointLadderState::JointLadderState(int half_width) : half_width_(half_width) {
    if (half_width < 0) {
        throw std::invalid_argument("window half-width must be non-negative");
    }
    ground_.assign(2 * half_width + 1, 0.0);
    excited_.assign(2 * half_width + 1, 0.0);
}

JointLadderState JointLadderState::point_mass(bool excited, int offset, int half_width) {
    JointLadderState state(half_width);
    state.add_probability(excited, offset, 1.0);
    return state;
}

JointLadderState JointLadderState::qubit_at_origin(double excited_population, int half_width) {
    if (!(excited_population >= 0.0 && excited_population <= 1.0)) {
        throw std::invalid_argument("excited population out of range [0,1]");
    }
    JointLadderState state(half_width);
    state.add_probability(false, 0, 1.0 - excited_population);
    state.add_probability(true, 0, excited_population);
    return state;
}

double JointLadderState::probability(bool excited, int offset) const {
    if (offset < -half_width_ || offset > half_width_) {
        return 0.0;
    }
    const auto& v = excited ? excited_ : ground_;
    return v[static_cast<size_t>(offset + half_width_)];
}

void JointLadderState::add_probability(bool excited, int offset, double mass) {
    if (offset < -half_width_ || offset > half_width_) {
        throw std::out_of_range("battery offset " + std::to_string(offset) +
                                " outside window; enlarge the half-width");
    }
    auto& v = excited ? excited_ : ground_;
    v[static_cast<size_t>(offset + half_width_)] += mass;
}

double JointLadderState::total_mass() const {
    return std::accumulate(ground_.begin(), ground_.end(), 0.0) +
           std::accumulate(excited_.begin(), excited_.end(), 0.0);
}

double JointLadderState::excited_population() const {
    return std::accumulate(excited_.begin(), excited_.end(), 0.0);
}

double JointLadderState::battery_mean() const {
    double mean = 0.0;
    for (int k = -half_width_; k <= half_width_; ++k) {
        mean += k * (probability(false, k) + probability(true, k));
    }
    return mean;
}

double JointLadderState::battery_second_moment() const {
    double m2 = 0.0;
    for (int k = -half_width_; k <= half_width_; ++k) {
        m2 += static_cast<double>(k) * k * (probability(false, k) + probability(true, k));
    }
    return m2;
}

int JointLadderState::support_radius() const {
    int radius = 0;
    for (int k = -half_width_; k <= half_width_; ++k) {
        if (probability(false, k) != 0.0 || probability(true, k) != 0.0) {
            radius = std::max(radius, std::abs(k));
        }
    }
    return radius;
}

double BatteryDistribution::probability(int offset) const {
    const long long idx = static_cast<long long>(offset) - min_offset;
    if (idx < 0 || idx >= static_cast<long long>(mass.size())) {
        return 0.0;
    }
    return mass[static_cast<size_t>(idx)];
}

BatteryDistribution make_distribution(std::vector<double> mass, int min_offset) {
    BatteryDistribution dist;
    dist.mass = std::move(mass);
    dist.min_offset = min_offset;
    double mean = 0.0;
    double m2 = 0.0;
    for (size_t i = 0; i < dist.mass.size(); ++i) {
        const double k = static_cast<double>(min_offset) + static_cast<double>(i);
        mean += k * dist.mass[i];
        m2 += k * k * dist.mass[i];
    }
    dist.mean = mean;
    dist.variance = m2 - mean * mean;
    return dist;
}

JointLadderState apply_t_map(const JointLadderState& state, const EngineSpec& spec) {
    validate(spec);
    const int n = spec.n_strokes;
    const int K = state.half_width();
    if (state.support_radius() + n > K) {
        throw std::out_of_range("battery window too small for one more cycle; enlarge the "
                                "half-width to at least support + n_strokes");
    }
    const double ah = std::exp(-spec.beta_h * spec.gap);
    const double ac = std::exp(-spec.beta_c * spec.gap);
    const double ahn = std::pow(ah, n);

    JointLadderState next(K);
    for (int m = -K; m <= K; ++m) {
        const double pg = state.probability(false, m);
        if (pg != 0.0) {
            next.add_probability(false, m + n, pg * ahn * (1.0 - ac));
            next.add_probability(true, m + n, pg * ahn * ac);
            double ahk = 1.0;
            for (int k = 0; k < n; ++k) {
                next.add_probability(false, m - n + 2 * k, pg * ahk * (1.0 - ah));
                ahk *= ah;
            }
        }
        const double pe = state.probability(true, m);
        if (pe != 0.0) {
            next.add_probability(false, m - n, pe);
        }
    }
    return next;
}

StationaryInfo stationary_state(const EngineSpec& spec) {
    validate(spec);
    const double weight =
        std::exp(-(spec.n_strokes * spec.beta_h + spec.beta_c) * spec.gap);  // a_H^n a_C
    StationaryInfo info{};
    info.excited_population = weight / (1.0 + weight);
    const JointLadderState probe =
        JointLadderState::qubit_at_origin(info.excited_population, spec.n_strokes + 1);
    info.fixed_point_residual =
        std::fabs(apply_t_map(probe, spec).excited_population() - info.excited_population);
    return info;
}

EvolutionResult evolve_cycles(const JointLadderState& initial, const EngineSpec& spec,
                              int cycles) {
    if (cycles < 0) {
        throw std::invalid_argument("cycle count must be non-negative");
    }
    EvolutionResult result{initial, {}};
    result.per_cycle_work.reserve(static_cast<size_t>(cycles));
    double mean = initial.battery_mean();
    for (int c = 0; c < cycles; ++c) {
        result.final_state = apply_t_map(result.final_state, spec);
        const double next_mean = result.final_state.battery_mean();
        result.per_cycle_work.push_back((next_mean - mean) * spec.gap);
        mean = next_mean;
    }
    return result;
}

BatteryDistribution battery_distribution(const JointLadderState& state) {
    const int radius = state.support_radius();
    std::vector<double> mass;
    mass.reserve(static_cast<size_t>(2 * radius + 1));
    for (int k = -radius; k <= radius; ++k) {
        mass.push_back(state.probability(false, k) + state.probability(true, k));
    }
    return make_distribution(std::move(mass), -radius);
}

}  // namespace mcqhe
