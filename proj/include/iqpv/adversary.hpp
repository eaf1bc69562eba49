#pragma once

// Classical provers used as negative controls. Both see only the public program.

#include <cstdint>
#include <span>
#include <vector>

#include "iqpv/errors.hpp"
#include "iqpv/rng.hpp"
#include "iqpv/simulator.hpp"
#include "iqpv/xprogram.hpp"

namespace iqpv {

/// One response of the quadratic-residue spoofing attack: keep the gates g with
/// g . d = 1 and g . e = 1, and return their XOR (0 if none survive).
inline std::uint64_t qrc_attack_response(std::span<const std::uint64_t> gates, std::uint64_t d, std::uint64_t e) {
    std::uint64_t y = 0;
    for (std::uint64_t g : gates) {
        if (detail::parity(g & d) && detail::parity(g & e)) {
            y ^= g;
        }
    }
    return y;
}

/// Per shot, draws d and e uniformly from {0,1}^n and emits qrc_attack_response.
inline SampleSet qrc_attack_respond(const XProgram& program, std::uint64_t shots, Rng& rng) {
    if (shots == 0) {
        throw InvalidParameter("qrc_attack_respond: shots must be positive");
    }
    if (program.gates().empty()) {
        throw InvalidParameter("qrc_attack_respond: program has no gates");
    }
    const auto n = static_cast<unsigned>(program.n_qubits());
    detail::check_outcome_width(n, "qrc_attack_respond");
    std::vector<std::uint64_t> gates;
    gates.reserve(program.gates().size());
    for (const auto& g : program.gates()) {
        gates.push_back(g.to_index());
    }
    SampleSet out(n);
    for (std::uint64_t k = 0; k < shots; ++k) {
        const std::uint64_t d = rng.uniform_bits(n);
        const std::uint64_t e = rng.uniform_bits(n);
        out.add(qrc_attack_response(gates, d, e));
    }
    return out;
}

/// I.i.d. uniform n-bit strings.
inline SampleSet uniform_respond(std::size_t n_qubits, std::uint64_t shots, Rng& rng) {
    if (shots == 0) {
        throw InvalidParameter("uniform_respond: shots must be positive");
    }
    SampleSet out(n_qubits);
    for (std::uint64_t k = 0; k < shots; ++k) {
        out.add(rng.uniform_bits(static_cast<unsigned>(n_qubits)));
    }
    return out;
}

}  // namespace iqpv
