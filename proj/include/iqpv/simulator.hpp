#pragma once

// Exact statevector simulation of X-programs and analysis of output distributions.
//
// Outcome convention: qubit k is bit k of the outcome integer (qubit 0 is the
// least significant bit).

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iqpv/errors.hpp"
#include "iqpv/gf2.hpp"
#include "iqpv/rng.hpp"
#include "iqpv/xprogram.hpp"

namespace iqpv {

inline constexpr std::size_t kDefaultQubitCap = 26;
inline constexpr std::size_t kMaxOutcomeBits = 63;

namespace detail {

inline std::uint64_t outcome_mask(const BitVector& v, std::size_t n_qubits, const char* what) {
    if (v.size() != n_qubits) {
        throw DimensionError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                             " does not match " + std::to_string(n_qubits) + " qubits");
    }
    return v.to_index();
}

inline bool parity(std::uint64_t x) { return std::popcount(x) & 1; }

inline void check_outcome_width(std::size_t n_qubits, const char* what) {
    if (n_qubits == 0 || n_qubits > kMaxOutcomeBits) {
        throw InvalidParameter(std::string(what) + ": n_qubits must be in [1, 63]");
    }
}

}  // namespace detail

class StateVector {
   public:
    explicit StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
        detail::check_outcome_width(n_qubits, "StateVector");
        amplitudes_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    std::size_t n_qubits() const { return n_qubits_; }
    std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }

    /// exp(i theta X_p) = cos(theta) I + i sin(theta) X_p, applied as pairwise
    /// rotations between x and x ^ p.
    void apply_x_rotation(std::uint64_t p, double theta) {
        if (p == 0 || (p >> n_qubits_) != 0) {
            throw InvalidParameter("apply_x_rotation: gate mask out of range");
        }
        const double c = std::cos(theta);
        const std::complex<double> is(0.0, std::sin(theta));
        const std::uint64_t low = p & (~p + 1);
        const std::uint64_t dim = amplitudes_.size();
        for (std::uint64_t x = 0; x < dim; ++x) {
            if (x & low) {
                continue;
            }
            const std::uint64_t y = x ^ p;
            const std::complex<double> ax = amplitudes_[x];
            const std::complex<double> ay = amplitudes_[y];
            amplitudes_[x] = c * ax + is * ay;
            amplitudes_[y] = c * ay + is * ax;
        }
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) {
            s += std::norm(a);
        }
        return s;
    }

   private:
    std::size_t n_qubits_;
    std::vector<std::complex<double>> amplitudes_;
};

class OutputDistribution {
   public:
    static constexpr double kNormTolerance = 1e-10;
    static constexpr double kNegativeTolerance = 1e-12;

    /// Validates normalization; entries in [-1e-12, 0) are clamped to zero.
    OutputDistribution(std::size_t n_qubits, std::vector<double> probs) : n_qubits_(n_qubits), probs_(std::move(probs)) {
        detail::check_outcome_width(n_qubits, "OutputDistribution");
        if (probs_.size() != (std::size_t{1} << n_qubits)) {
            throw DimensionError("OutputDistribution: expected 2^" + std::to_string(n_qubits) + " entries, got " +
                                 std::to_string(probs_.size()));
        }
        double total = 0.0;
        for (auto& p : probs_) {
            if (!(p >= -kNegativeTolerance)) {
                throw InvalidParameter("OutputDistribution: negative or NaN probability " + std::to_string(p));
            }
            p = std::max(p, 0.0);
            total += p;
        }
        if (std::abs(total - 1.0) > kNormTolerance) {
            throw InvalidParameter("OutputDistribution: probabilities sum to " + std::to_string(total));
        }
    }

    static OutputDistribution point_mass(std::size_t n_qubits, std::uint64_t outcome) {
        detail::check_outcome_width(n_qubits, "point_mass");
        std::vector<double> p(std::size_t{1} << n_qubits, 0.0);
        p.at(outcome) = 1.0;
        return OutputDistribution(n_qubits, std::move(p));
    }

    static OutputDistribution uniform(std::size_t n_qubits) {
        detail::check_outcome_width(n_qubits, "uniform");
        const std::size_t dim = std::size_t{1} << n_qubits;
        return OutputDistribution(n_qubits, std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
    }

    std::size_t n_qubits() const { return n_qubits_; }
    std::span<const double> probs() const { return probs_; }
    double operator[](std::uint64_t x) const { return probs_.at(x); }

   private:
    std::size_t n_qubits_;
    std::vector<double> probs_;
};

/// Multiset of measurement outcomes stored as (outcome, count) pairs.
class SampleSet {
   public:
    explicit SampleSet(std::size_t n_qubits) : n_qubits_(n_qubits) {
        detail::check_outcome_width(n_qubits, "SampleSet");
    }

    void add(std::uint64_t outcome, std::uint64_t count = 1) {
        if ((outcome >> n_qubits_) != 0) {
            throw InvalidParameter("SampleSet: outcome " + std::to_string(outcome) + " does not fit in " +
                                   std::to_string(n_qubits_) + " bits");
        }
        if (count == 0) {
            return;
        }
        counts_[outcome] += count;
        total_ += count;
    }

    std::size_t n_qubits() const { return n_qubits_; }
    std::uint64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }
    const std::map<std::uint64_t, std::uint64_t>& counts() const { return counts_; }

    std::uint64_t count(std::uint64_t outcome) const {
        auto it = counts_.find(outcome);
        return it == counts_.end() ? 0 : it->second;
    }

    /// Normalized empirical distribution. Requires n_qubits within the dense cap.
    OutputDistribution to_distribution(std::size_t qubit_cap = kDefaultQubitCap) const {
        if (empty()) {
            throw InvalidParameter("SampleSet: cannot normalize an empty sample set");
        }
        if (n_qubits_ > qubit_cap) {
            throw ResourceLimit("SampleSet: " + std::to_string(n_qubits_) + " qubits exceeds dense cap");
        }
        std::vector<double> p(std::size_t{1} << n_qubits_, 0.0);
        for (const auto& [x, c] : counts_) {
            p[x] = static_cast<double>(c) / static_cast<double>(total_);
        }
        return OutputDistribution(n_qubits_, std::move(p));
    }

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

   private:
    std::size_t n_qubits_;
    std::map<std::uint64_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

inline StateVector simulate_state(const XProgram& program, std::size_t qubit_cap = kDefaultQubitCap) {
    if (program.n_qubits() > qubit_cap) {
        throw ResourceLimit("simulate: " + std::to_string(program.n_qubits()) + " qubits exceeds cap of " +
                            std::to_string(qubit_cap));
    }
    StateVector state(program.n_qubits());
    for (const auto& g : program.gates()) {
        state.apply_x_rotation(g.to_index(), program.theta());
    }
    return state;
}

/// |<x| exp(i theta H) |0^n>|^2 for every outcome x.
inline OutputDistribution simulate(const XProgram& program, std::size_t qubit_cap = kDefaultQubitCap) {
    const StateVector state = simulate_state(program, qubit_cap);
    std::vector<double> probs;
    probs.reserve(state.amplitudes().size());
    for (const auto& a : state.amplitudes()) {
        probs.push_back(std::norm(a));
    }
    return OutputDistribution(program.n_qubits(), std::move(probs));
}

/// `shots` i.i.d. draws by inverse CDF.
inline SampleSet sample(const OutputDistribution& d, std::uint64_t shots, Rng& rng) {
    if (shots == 0) {
        throw InvalidParameter("sample: shots must be positive");
    }
    const auto probs = d.probs();
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        acc += probs[x];
        cdf[x] = acc;
    }
    // Last outcome with nonzero mass absorbs rounding in the tail.
    std::size_t last = probs.size() - 1;
    while (last > 0 && probs[last] == 0.0) {
        --last;
    }
    SampleSet out(d.n_qubits());
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = rng.uniform_real() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t x = static_cast<std::size_t>(it - cdf.begin());
        out.add(std::min(x, last));
    }
    return out;
}

/// <Z_s> = sum_x p(x) (-1)^(x . s).
inline double correlation(const OutputDistribution& d, const BitVector& s) {
    const std::uint64_t mask = detail::outcome_mask(s, d.n_qubits(), "correlation");
    const auto probs = d.probs();
    double acc = 0.0;
    for (std::uint64_t x = 0; x < probs.size(); ++x) {
        acc += detail::parity(x & mask) ? -probs[x] : probs[x];
    }
    return acc;
}

/// Total probability on outcomes orthogonal to s.
inline double bias_from_dist(const OutputDistribution& d, const BitVector& s) {
    const std::uint64_t mask = detail::outcome_mask(s, d.n_qubits(), "bias_from_dist");
    const auto probs = d.probs();
    double acc = 0.0;
    for (std::uint64_t x = 0; x < probs.size(); ++x) {
        if (!detail::parity(x & mask)) {
            acc += probs[x];
        }
    }
    return acc;
}

/// Unnormalized in-place Walsh-Hadamard butterfly.
inline void walsh_hadamard_in_place(std::span<double> v) {
    const std::size_t dim = v.size();
    if (!std::has_single_bit(dim)) {
        throw DimensionError("walsh_hadamard: length must be a power of two");
    }
    for (std::size_t half = 1; half < dim; half <<= 1) {
        for (std::size_t block = 0; block < dim; block += 2 * half) {
            for (std::size_t k = block; k < block + half; ++k) {
                const double a = v[k];
                const double b = v[k + half];
                v[k] = a + b;
                v[k + half] = a - b;
            }
        }
    }
}

/// Fourier coefficients p_hat(s) = 2^-n sum_x p(x) (-1)^(x . s), indexed by s.
inline std::vector<double> fwht(const OutputDistribution& d) {
    std::vector<double> v(d.probs().begin(), d.probs().end());
    walsh_hadamard_in_place(v);
    const double scale = std::ldexp(1.0, -static_cast<int>(d.n_qubits()));
    for (auto& x : v) {
        x *= scale;
    }
    return v;
}

/// p(x) = sum_s p_hat(s) (-1)^(x . s); inverse of fwht.
inline std::vector<double> inverse_fwht(std::span<const double> coefficients) {
    std::vector<double> v(coefficients.begin(), coefficients.end());
    walsh_hadamard_in_place(v);
    return v;
}

/// Builds a distribution from raw values after a transform: entries down to
/// -1e-12 are clamped and the result renormalized; larger negatives are a bug.
inline OutputDistribution distribution_from_transform(std::size_t n_qubits, std::vector<double> probs) {
    double total = 0.0;
    for (auto& p : probs) {
        if (p < -OutputDistribution::kNegativeTolerance) {
            throw ConsistencyError("transform produced probability " + std::to_string(p));
        }
        p = std::max(p, 0.0);
        total += p;
    }
    for (auto& p : probs) {
        p /= total;
    }
    return OutputDistribution(n_qubits, std::move(probs));
}

/// Independent bit flip with probability eps on every output bit, applied as
/// p_hat(s) -> (1 - 2 eps)^|s| p_hat(s).
inline OutputDistribution apply_dephasing(const OutputDistribution& d, double eps) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw InvalidParameter("apply_dephasing: eps must lie in [0, 0.5]");
    }
    std::vector<double> coeffs = fwht(d);
    const double damping = 1.0 - 2.0 * eps;
    std::vector<double> factor(d.n_qubits() + 1);
    for (std::size_t w = 0; w <= d.n_qubits(); ++w) {
        factor[w] = std::pow(damping, static_cast<double>(w));
    }
    for (std::uint64_t s = 0; s < coeffs.size(); ++s) {
        coeffs[s] *= factor[static_cast<std::size_t>(std::popcount(s))];
    }
    return distribution_from_transform(d.n_qubits(), inverse_fwht(coeffs));
}

}  // namespace iqpv
