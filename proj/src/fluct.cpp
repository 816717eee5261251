#include "mcqhe/fluct.hpp"

#include <cmath>

namespace mcqhe {

namespace {

void require_three_stroke(const EngineSpec& spec) {
    validate(spec);
    if (spec.n_strokes != 1) {
        throw std::invalid_argument("work-fluctuation formulas cover the three-stroke engine "
                                    "(n_strokes = 1)");
    }
}

void require_even(int count) {
    if (count < 2 || count % 2 != 0) {
        throw std::invalid_argument("closed-form distributions need an even count >= 2");
    }
}

// p^n contribution to a log-probability; zero probability with a positive
// count kills the whole term.
bool accumulate_power(double p, int n, double& log_weight) {
    if (n == 0) {
        return true;
    }
    if (p <= 0.0) {
        return false;
    }
    log_weight += n * std::log(p);
    return true;
}

// Trinomial weight for np right steps, nm left steps and n0 standstills,
// via log-gamma so counts up to ~1e4 stay finite.
double trinomial_pmf(int np, int nm, int n0, const WalkParams& w) {
    if (np < 0 || nm < 0 || n0 < 0) {
        return 0.0;
    }
    double lw = std::lgamma(np + nm + n0 + 1.0) - std::lgamma(np + 1.0) -
                std::lgamma(nm + 1.0) - std::lgamma(n0 + 1.0);
    if (!accumulate_power(w.p_plus, np, lw) || !accumulate_power(w.p_minus, nm, lw) ||
        !accumulate_power(w.p_zero, n0, lw)) {
        return 0.0;
    }
    return std::exp(lw);
}

double binomial_pmf(int trials, int successes, double p) {
    if (successes < 0 || successes > trials) {
        return 0.0;
    }
    double lw = std::lgamma(trials + 1.0) - std::lgamma(successes + 1.0) -
                std::lgamma(trials - successes + 1.0);
    if (!accumulate_power(p, successes, lw) || !accumulate_power(1.0 - p, trials - successes, lw)) {
        return 0.0;
    }
    return std::exp(lw);
}

// Probability of displacement 2k after 2m cycles starting from the ground
// state, battery offset absorbed into k.  Trajectories are counted as
// right/left steps plus paired standstills; the trailing unpaired
// standstill (ending excited) contributes the p_zero-weighted shifted term.
double ground_walk_even(int k, int m, const WalkParams& w) {
    double total = 0.0;
    for (int i = std::abs(k); i <= m; ++i) {
        total += trinomial_pmf(i + k, i - k, m - i, w);
        if (i + k >= 1) {
            total += w.p_zero * trinomial_pmf(i + k - 1, i - k, m - i, w);
        }
    }
    return total;
}

// Displacement 2k+1 after 2m+1 cycles from the ground state.
double ground_walk_odd(int k, int m, const WalkParams& w) {
    double total = 0.0;
    for (int i = std::max(0, k); i <= m; ++i) {
        total += trinomial_pmf(k + i + 1, i - k, m - i, w);
        if (k + i >= 0) {
            total += w.p_zero * trinomial_pmf(k + i, i - k, m - i, w);
        }
    }
    return total;
}

BatteryDistribution binomial_family(int strokes, const EngineSpec& spec, bool mirrored) {
    require_three_stroke(spec);
    require_even(strokes);
    const double p = uncorrelated_up_probability(spec);
    const int n = strokes / 2;
    std::vector<double> mass(static_cast<size_t>(2 * strokes + 1), 0.0);
    for (int k = -n; k <= n; ++k) {
        const int ups = mirrored ? n - k : n + k;
        mass[static_cast<size_t>(2 * k + strokes)] = binomial_pmf(strokes, ups, p);
    }
    return make_distribution(std::move(mass), -strokes);
}

}  // namespace

WalkParams walk_params(const EngineSpec& spec) {
    require_three_stroke(spec);
    const double ah = std::exp(-spec.beta_h * spec.gap);
    const double ac = std::exp(-spec.beta_c * spec.gap);
    WalkParams w{};
    w.p_minus = 1.0 - ah;
    w.p_zero = ah * ac;
    w.p_plus = 1.0 - w.p_minus - w.p_zero;  // a_H (1 - a_C), summing to 1 exactly
    return w;
}

double uncorrelated_up_probability(const EngineSpec& spec) {
    require_three_stroke(spec);
    const double ah = std::exp(-spec.beta_h * spec.gap);
    const double ac = std::exp(-spec.beta_c * spec.gap);
    return ah / (1.0 + ah * ac);
}

BatteryDistribution correlated_distribution(int cycles, double initial_excited,
                                            const EngineSpec& spec) {
    validate(spec);
    if (cycles < 1) {
        throw std::invalid_argument("cycle count must be at least 1");
    }
    JointLadderState state = JointLadderState::qubit_at_origin(
        initial_excited, cycles * spec.n_strokes + 1);
    for (int c = 0; c < cycles; ++c) {
        state = apply_t_map(state, spec);
    }
    return battery_distribution(state);
}

BatteryDistribution correlated_closed_form(int cycles, double initial_excited,
                                           const EngineSpec& spec) {
    require_three_stroke(spec);
    require_even(cycles);
    if (!(initial_excited >= 0.0 && initial_excited <= 1.0)) {
        throw std::invalid_argument("excited population out of range [0,1]");
    }
    const WalkParams w = walk_params(spec);
    const int n = cycles / 2;
    std::vector<double> mass(static_cast<size_t>(2 * cycles + 1), 0.0);
    for (int k = -n; k <= n; ++k) {
        // A start in the excited state drops deterministically first, so it
        // follows the odd-length ground walk shifted by one.
        const double from_ground = ground_walk_even(k, n, w);
        const double from_excited = ground_walk_odd(k, n - 1, w);
        mass[static_cast<size_t>(2 * k + cycles)] =
            (1.0 - initial_excited) * from_ground + initial_excited * from_excited;
    }
    return make_distribution(std::move(mass), -cycles);
}

BatteryDistribution uncorrelated_distribution(int strokes, const EngineSpec& spec) {
    require_three_stroke(spec);
    if (strokes < 1) {
        throw std::invalid_argument("stroke count must be at least 1");
    }
    const double p = uncorrelated_up_probability(spec);
    std::vector<double> mass(static_cast<size_t>(2 * strokes + 1), 0.0);
    mass[static_cast<size_t>(strokes)] = 1.0;
    for (int s = 0; s < strokes; ++s) {
        std::vector<double> next(mass.size(), 0.0);
        for (size_t i = 0; i < mass.size(); ++i) {
            if (mass[i] == 0.0) {
                continue;
            }
            if (i + 1 < mass.size()) {
                next[i + 1] += mass[i] * p;
            }
            if (i >= 1) {
                next[i - 1] += mass[i] * (1.0 - p);
            }
        }
        mass.swap(next);
    }
    return make_distribution(std::move(mass), -strokes);
}

BatteryDistribution uncorrelated_closed_form_mirrored(int strokes, const EngineSpec& spec) {
    return binomial_family(strokes, spec, true);
}

BatteryDistribution uncorrelated_closed_form(int strokes, const EngineSpec& spec) {
    return binomial_family(strokes, spec, false);
}

Moments moments(const BatteryDistribution& dist) {
    double total = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    for (size_t i = 0; i < dist.mass.size(); ++i) {
        const double k = static_cast<double>(dist.min_offset) + static_cast<double>(i);
        total += dist.mass[i];
        mean += k * dist.mass[i];
        m2 += k * k * dist.mass[i];
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("distribution is not normalized");
    }
    return {mean, m2 - mean * mean};
}

}  // namespace mcqhe
