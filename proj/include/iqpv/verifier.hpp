#pragma once

// Verifier-side statistics: bias estimation, noise-rate fitting and verdicts.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iqpv/errors.hpp"
#include "iqpv/gf2.hpp"
#include "iqpv/simulator.hpp"

namespace iqpv {

struct BiasEstimate {
    double bias = 0.0;
    double std_error = 0.0;  // Wald: sqrt(p (1 - p) / N)
    std::uint64_t n_shots = 0;
};

/// Fraction of shots orthogonal to s, with its binomial standard error.
inline BiasEstimate estimate_bias(const SampleSet& samples, const BitVector& s) {
    if (samples.empty()) {
        throw InvalidParameter("estimate_bias: empty sample set");
    }
    const std::uint64_t mask = detail::outcome_mask(s, samples.n_qubits(), "estimate_bias");
    std::uint64_t orthogonal = 0;
    for (const auto& [x, c] : samples.counts()) {
        if (!detail::parity(x & mask)) {
            orthogonal += c;
        }
    }
    const auto n = static_cast<double>(samples.total());
    const double p = static_cast<double>(orthogonal) / n;
    return BiasEstimate{p, std::sqrt(p * (1.0 - p) / n), samples.total()};
}

struct FitPoint {
    std::uint64_t s = 0;
    std::size_t weight = 0;
    double ratio = 0.0;
    double log_ratio = 0.0;
    double residual = 0.0;
};

struct EpsilonFit {
    double epsilon = 0.0;
    double slope = 0.0;               // fitted log(1 - 2 eps)
    std::vector<FitPoint> used;
    std::vector<std::uint64_t> excluded_nonpositive;  // ratio <= 0
    std::size_t below_floor = 0;      // |ideal correlation| <= floor
};

/// Fits <Z_s>_emp / <Z_s>_ideal = (1 - 2 eps)^|s| by least squares of the log
/// ratio against |s|, with the line forced through the origin.
inline EpsilonFit fit_epsilon(const OutputDistribution& empirical, const OutputDistribution& ideal,
                              double ideal_floor = 1e-6) {
    if (empirical.n_qubits() != ideal.n_qubits()) {
        throw DimensionError("fit_epsilon: distributions have different qubit counts");
    }
    const std::vector<double> emp = fwht(empirical);
    const std::vector<double> ref = fwht(ideal);
    EpsilonFit fit;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::uint64_t s = 1; s < emp.size(); ++s) {
        if (std::abs(ref[s]) * std::ldexp(1.0, static_cast<int>(ideal.n_qubits())) <= ideal_floor) {
            ++fit.below_floor;
            continue;
        }
        const double ratio = emp[s] / ref[s];
        if (!(ratio > 0.0)) {
            fit.excluded_nonpositive.push_back(s);
            continue;
        }
        FitPoint pt;
        pt.s = s;
        pt.weight = static_cast<std::size_t>(std::popcount(s));
        pt.ratio = ratio;
        pt.log_ratio = std::log(ratio);
        sxy += static_cast<double>(pt.weight) * pt.log_ratio;
        sxx += static_cast<double>(pt.weight * pt.weight);
        fit.used.push_back(pt);
    }
    if (fit.used.empty()) {
        throw FitFailure("fit_epsilon: no correlation with a positive ratio above the floor (" +
                         std::to_string(fit.excluded_nonpositive.size()) + " non-positive, " +
                         std::to_string(fit.below_floor) + " below floor)");
    }
    fit.slope = sxy / sxx;
    fit.epsilon = (1.0 - std::exp(fit.slope)) / 2.0;
    for (auto& pt : fit.used) {
        pt.residual = pt.log_ratio - fit.slope * static_cast<double>(pt.weight);
    }
    return fit;
}

enum class Verdict { QuantumConsistent, ClassicalAttackConsistent, RandomConsistent, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::QuantumConsistent:
            return "QUANTUM_CONSISTENT";
        case Verdict::ClassicalAttackConsistent:
            return "CLASSICAL_ATTACK_CONSISTENT";
        case Verdict::RandomConsistent:
            return "RANDOM_CONSISTENT";
        case Verdict::Inconclusive:
            return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

/// Landmark biases and the acceptance window half-width max(k * sigma, min_window).
struct Thresholds {
    double quantum = 0.854;
    double classical = 0.75;
    double random = 0.5;
    double k = 3.0;
    double min_window = 0.01;

    double window(double std_error) const { return std::max(k * std_error, min_window); }
};

/// Classifies a bias estimate against the three landmarks. A bias inside more
/// than one window, or a window wide enough to overlap a neighbouring landmark's
/// window, is INCONCLUSIVE.
inline Verdict decide(double bias, double std_error, const Thresholds& t = {}) {
    const double w = t.window(std_error);
    const double min_gap = std::min(std::abs(t.quantum - t.classical), std::abs(t.classical - t.random));
    if (2.0 * w >= min_gap) {
        return Verdict::Inconclusive;
    }
    const bool quantum = std::abs(bias - t.quantum) <= w && bias - t.classical > w;
    const bool classical = std::abs(bias - t.classical) <= w;
    const bool random = std::abs(bias - t.random) <= w;
    if (quantum + classical + random != 1) {
        return Verdict::Inconclusive;
    }
    return quantum ? Verdict::QuantumConsistent
                   : (classical ? Verdict::ClassicalAttackConsistent : Verdict::RandomConsistent);
}

struct VerificationReport {
    std::uint64_t n_shots = 0;
    std::size_t n_qubits = 0;
    double bias_estimate = 0.0;
    double std_error = 0.0;
    std::size_t secret_weight = 0;
    std::optional<double> ideal_bias;
    std::optional<double> fitted_epsilon;
    std::optional<EpsilonFit> fit;
    Verdict verdict = Verdict::Inconclusive;
    Thresholds thresholds;
    std::vector<std::string> diagnostics;
};

/// Full report for a sample set. When `ideal` is given, its bias is reported and
/// the noise rate is fitted from the empirical distribution.
inline VerificationReport verify(const SampleSet& samples, const BitVector& secret, const Thresholds& thresholds = {},
                                 const OutputDistribution* ideal = nullptr) {
    VerificationReport r;
    const BiasEstimate est = estimate_bias(samples, secret);
    r.n_shots = est.n_shots;
    r.n_qubits = samples.n_qubits();
    r.bias_estimate = est.bias;
    r.std_error = est.std_error;
    r.secret_weight = hamming_weight(secret);
    r.thresholds = thresholds;
    r.verdict = decide(est.bias, est.std_error, thresholds);
    if (ideal != nullptr) {
        r.ideal_bias = bias_from_dist(*ideal, secret);
        try {
            r.fit = fit_epsilon(samples.to_distribution(), *ideal);
            r.fitted_epsilon = r.fit->epsilon;
            if (!r.fit->excluded_nonpositive.empty()) {
                r.diagnostics.push_back("noise fit excluded " + std::to_string(r.fit->excluded_nonpositive.size()) +
                                        " correlations with non-positive ratio");
            }
        } catch (const FitFailure& e) {
            r.diagnostics.push_back(std::string("noise fit failed: ") + e.what());
        }
    }
    if (r.verdict == Verdict::ClassicalAttackConsistent || r.verdict == Verdict::Inconclusive) {
        r.diagnostics.push_back(
            "the 0.75 classical-attack landmark is asymptotic in n; small instances may deviate from it");
    }
    return r;
}

inline std::string render_text(const VerificationReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "verdict:        " << to_string(r.verdict) << "\n";
    os << "bias estimate:  " << r.bias_estimate << " +/- " << r.std_error << " (" << r.n_shots << " shots)\n";
    os << "window:         +/- " << r.thresholds.window(r.std_error) << " around landmarks " << r.thresholds.quantum
       << " / " << r.thresholds.classical << " / " << r.thresholds.random << "\n";
    os << "secret weight:  " << r.secret_weight << " of " << r.n_qubits << " qubits\n";
    if (r.ideal_bias) {
        os << "ideal bias:     " << *r.ideal_bias << "\n";
    }
    if (r.fitted_epsilon) {
        os << "fitted epsilon: " << *r.fitted_epsilon << " (" << r.fit->used.size() << " correlations)\n";
    }
    for (const auto& d : r.diagnostics) {
        os << "note: " << d << "\n";
    }
    return os.str();
}

}  // namespace iqpv
