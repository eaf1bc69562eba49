#pragma once

// The reference five-qubit instance: ten gates (seven non-orthogonal to the
// secret, three orthogonal) with secret (1,1,1,1,0) and theta = pi/8.

#include <string>
#include <vector>

#include "iqpv/gf2.hpp"
#include "iqpv/xprogram.hpp"

namespace iqpv::testing {

/// Gates in publication order, qubit 0 leftmost.
inline const std::vector<std::string>& reference_gate_strings() {
    static const std::vector<std::string> gates = {
        "01000", "00100", "00010", "00011", "01001",  // main
        "01110", "00101",                             // main
        "00110", "10100", "10010",                    // redundant
    };
    return gates;
}

inline std::string reference_hamiltonian() {
    return "X2 + X3 + X4 + X4X5 + X2X5 + X2X3X4 + X3X5 + X3X4 + X1X3 + X1X4";
}

inline KeyedProgram reference_instance(double theta = kDefaultTheta) {
    std::vector<BitVector> gates;
    for (const auto& g : reference_gate_strings()) {
        gates.push_back(BitVector::from_string(g));
    }
    return KeyedProgram(XProgram(5, theta, std::move(gates)), BitVector::from_string("11110"));
}

}  // namespace iqpv::testing
