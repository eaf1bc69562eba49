#pragma once

// X-programs: a list of X-type Pauli products sharing one rotation angle.
//
// A gate is a bit vector of length n_qubits; gate p stands for the term
// prod_{i : p_i = 1} X_i and the program implements exp(i * theta * sum_p X_p).
// Gates are stored as rows. The column-per-gate layout used in some write-ups is
// the transpose of this.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iqpv/errors.hpp"
#include "iqpv/gf2.hpp"
#include "iqpv/rng.hpp"

namespace iqpv {

inline constexpr double kDefaultTheta = std::numbers::pi / 8;

class XProgram {
   public:
    XProgram(std::size_t n_qubits, double theta, std::vector<BitVector> gates)
        : n_qubits_(n_qubits), theta_(theta), gates_(std::move(gates)) {
        if (n_qubits_ == 0) {
            throw InvalidParameter("XProgram: n_qubits must be positive");
        }
        if (!std::isfinite(theta_)) {
            throw InvalidParameter("XProgram: theta must be finite");
        }
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            if (gates_[k].size() != n_qubits_) {
                throw DimensionError("XProgram: gate " + std::to_string(k) + " has length " +
                                     std::to_string(gates_[k].size()) + ", expected " + std::to_string(n_qubits_));
            }
            if (gates_[k].is_zero()) {
                throw InvalidParameter("XProgram: gate " + std::to_string(k) + " is the identity");
            }
        }
    }

    std::size_t n_qubits() const { return n_qubits_; }
    double theta() const { return theta_; }
    const std::vector<BitVector>& gates() const { return gates_; }

    XProgram with_gates(std::vector<BitVector> gates) const { return XProgram(n_qubits_, theta_, std::move(gates)); }
    XProgram with_theta(double theta) const { return XProgram(n_qubits_, theta, gates_); }

    friend bool operator==(const XProgram&, const XProgram&) = default;

   private:
    std::size_t n_qubits_;
    double theta_;
    std::vector<BitVector> gates_;
};

/// An X-program together with the secret string it was built around.
class KeyedProgram {
   public:
    KeyedProgram(XProgram program, BitVector secret) : program_(std::move(program)), secret_(std::move(secret)) {
        if (secret_.size() != program_.n_qubits()) {
            throw DimensionError("KeyedProgram: secret length does not match n_qubits");
        }
        if (secret_.is_zero()) {
            throw InvalidParameter("KeyedProgram: secret must be nonzero");
        }
        bool any_main = false;
        for (const auto& g : program_.gates()) {
            any_main = any_main || inner_product(g, secret_);
        }
        if (!any_main) {
            throw InvalidParameter("KeyedProgram: no gate is non-orthogonal to the secret");
        }
    }

    const XProgram& program() const { return program_; }
    const BitVector& secret() const { return secret_; }

    friend bool operator==(const KeyedProgram&, const KeyedProgram&) = default;

   private:
    XProgram program_;
    BitVector secret_;
};

struct GatePartition {
    std::vector<BitVector> main;       // p . s = 1
    std::vector<BitVector> redundant;  // p . s = 0
};

inline GatePartition main_part(const XProgram& program, const BitVector& secret) {
    GatePartition out;
    for (const auto& g : program.gates()) {
        (inner_product(g, secret) ? out.main : out.redundant).push_back(g);
    }
    return out;
}

inline GatePartition main_part(const KeyedProgram& kp) { return main_part(kp.program(), kp.secret()); }

/// Requires (q + 1) divisible by 8 and q prime.
inline void require_qrc_prime(std::uint64_t q) {
    if (!is_prime(q) || (q + 1) % 8 != 0) {
        throw InvalidParameter("q = " + std::to_string(q) + " must be a prime with (q + 1) divisible by 8");
    }
}

/// Generating rows of the quadratic residue code of length q: the all-ones row
/// followed by (q + 1) / 2 cyclic shifts of the residue indicator. Row m + 1 has
/// bit (r - 1 + m) mod q set for every residue r.
inline std::vector<BitVector> qrc_generating_rows(std::uint64_t q) {
    require_qrc_prime(q);
    const std::size_t n_shifts = static_cast<std::size_t>((q + 1) / 2);
    const auto residues = quadratic_residues(q);
    std::vector<BitVector> rows;
    rows.reserve(n_shifts + 1);
    BitVector ones(q);
    for (std::size_t j = 0; j < q; ++j) {
        ones.set(j, true);
    }
    rows.push_back(std::move(ones));
    for (std::size_t m = 0; m < n_shifts; ++m) {
        BitVector row(q);
        for (std::uint64_t r : residues) {
            row.set(static_cast<std::size_t>((r - 1 + m) % q), true);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Appends `count` distinct nonzero gates orthogonal to the secret, sampled
/// uniformly from that subspace. A draw p with p . s = 1 is mapped into the
/// subspace by flipping the lowest set index of s; zero draws and duplicates are
/// redrawn.
inline KeyedProgram add_redundant_gates(const KeyedProgram& kp, std::size_t count, Rng& rng) {
    const std::size_t n = kp.program().n_qubits();
    const BitVector& s = kp.secret();
    std::set<BitVector> present(kp.program().gates().begin(), kp.program().gates().end());
    std::size_t existing_orthogonal = 0;
    for (const auto& g : present) {
        existing_orthogonal += inner_product(g, s) ? 0 : 1;
    }
    // Nonzero vectors orthogonal to s: 2^(n-1) - 1.
    const long double available =
        std::ldexp(1.0L, static_cast<int>(std::min<std::size_t>(n - 1, 4000))) - 1.0L - existing_orthogonal;
    if (static_cast<long double>(count) > available) {
        throw InvalidParameter("add_redundant_gates: only " + std::to_string(static_cast<std::uint64_t>(available)) +
                               " distinct redundant gates remain, " + std::to_string(count) + " requested");
    }
    const std::size_t pivot = s.first_set();
    std::vector<BitVector> gates = kp.program().gates();
    std::size_t added = 0;
    while (added < count) {
        BitVector g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.set(i, rng.next_u64() & 1);
        }
        if (inner_product(g, s)) {
            g.flip(pivot);
        }
        if (g.is_zero() || !present.insert(g).second) {
            continue;
        }
        gates.push_back(std::move(g));
        ++added;
    }
    return KeyedProgram(kp.program().with_gates(std::move(gates)), s);
}

/// Keyed program from the quadratic residue code of length q.
///
/// n_qubits = (q + 3) / 2, theta = pi / 8, secret = e_0. Main gate j (0 <= j < q)
/// has bit 0 set, and bit m + 1 set iff row m + 1 of qrc_generating_rows(q) has
/// bit j set. `n_redundant` distinct gates orthogonal to e_0 are appended.
inline KeyedProgram generate_qrc_keyed(std::uint64_t q, std::size_t n_redundant, Rng& rng) {
    const auto rows = qrc_generating_rows(q);
    const std::size_t n = rows.size();
    std::vector<BitVector> gates;
    gates.reserve(q + n_redundant);
    for (std::size_t j = 0; j < q; ++j) {
        BitVector g(n);
        for (std::size_t m = 0; m < n; ++m) {
            g.set(m, rows[m].get(j));
        }
        gates.push_back(std::move(g));
    }
    if (std::set<BitVector>(gates.begin(), gates.end()).size() != gates.size()) {
        throw ConsistencyError("generate_qrc_keyed: duplicate main gates for q = " + std::to_string(q));
    }
    KeyedProgram base(XProgram(n, kDefaultTheta, std::move(gates)), BitVector::unit(n, 0));
    return add_redundant_gates(base, n_redundant, rng);
}

/// Adds qubit column j into qubit column i of every gate and updates the secret
/// by s_j ^= s_i, which keeps every p . s unchanged.
inline KeyedProgram apply_column_add(const KeyedProgram& kp, std::size_t i, std::size_t j) {
    const std::size_t n = kp.program().n_qubits();
    if (i == j || i >= n || j >= n) {
        throw InvalidParameter("apply_column_add: need distinct in-range qubit indices");
    }
    std::vector<BitVector> gates = kp.program().gates();
    for (auto& g : gates) {
        if (g.get(j)) {
            g.flip(i);
        }
    }
    BitVector s = kp.secret();
    if (s.get(i)) {
        s.flip(j);
    }
    return KeyedProgram(kp.program().with_gates(std::move(gates)), std::move(s));
}

/// `times` random column additions followed by one shuffle of the gate order.
inline KeyedProgram scramble(const KeyedProgram& kp, std::size_t times, Rng& rng) {
    const std::size_t n = kp.program().n_qubits();
    if (n < 2) {
        throw InvalidParameter("scramble: need at least 2 qubits");
    }
    KeyedProgram out = kp;
    for (std::size_t t = 0; t < times; ++t) {
        const auto i = static_cast<std::size_t>(rng.uniform_below(n));
        auto j = static_cast<std::size_t>(rng.uniform_below(n - 1));
        if (j >= i) {
            ++j;
        }
        out = apply_column_add(out, i, j);
    }
    std::vector<BitVector> gates = out.program().gates();
    for (std::size_t k = gates.size(); k > 1; --k) {
        std::swap(gates[k - 1], gates[rng.uniform_below(k)]);
    }
    return KeyedProgram(out.program().with_gates(std::move(gates)), out.secret());
}

/// Generation followed by scrambling, both drawing from one stream.
inline KeyedProgram generate_scrambled_qrc(std::uint64_t q, std::size_t n_redundant, std::size_t scrambles, Rng& rng) {
    return scramble(generate_qrc_keyed(q, n_redundant, rng), scrambles, rng);
}

/// Support of one Hamiltonian term, as 0-based qubit indices.
struct XTerm {
    std::vector<std::size_t> qubits;
    friend bool operator==(const XTerm&, const XTerm&) = default;
};

inline std::vector<XTerm> to_hamiltonian_terms(const XProgram& program) {
    std::vector<XTerm> terms;
    terms.reserve(program.gates().size());
    for (const auto& g : program.gates()) {
        terms.push_back(XTerm{g.support()});
    }
    return terms;
}

/// Display form with 1-based qubit labels, e.g. "X1X3X4".
inline std::string to_string(const XTerm& term) {
    std::string out;
    for (std::size_t q : term.qubits) {
        out += "X" + std::to_string(q + 1);
    }
    return out;
}

inline std::string hamiltonian_string(const XProgram& program) {
    std::string out;
    for (const auto& term : to_hamiltonian_terms(program)) {
        if (!out.empty()) {
            out += " + ";
        }
        out += to_string(term);
    }
    return out;
}

/// Closed-form bias of the quadratic-residue program with secret e_0:
/// the average of cos^2(theta * (q - 2|c|)) over all codewords c.
inline double exact_bias_qrc(std::uint64_t q, double theta, std::uint64_t cap = kDefaultEnumerationCap) {
    const auto rows = qrc_generating_rows(q);
    const auto code = span_enumerate(rows, cap);
    const double qd = static_cast<double>(q);
    double sum = 0.0;
    for (const auto& c : code) {
        const double x = std::cos(theta * (qd - 2.0 * static_cast<double>(hamming_weight(c))));
        sum += x * x;
    }
    return sum / static_cast<double>(code.size());
}

}  // namespace iqpv
