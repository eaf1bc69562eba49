// One round of the verification game in memory: the verifier builds a keyed
// challenge, three provers answer it, and the verifier scores each answer.

#include <iomanip>
#include <iostream>

#include "iqpv/iqpv.hpp"

int main() {
    using namespace iqpv;

    Rng rng(2024);
    const KeyedProgram keyed = generate_scrambled_qrc(7, 3, 50, rng);
    const XProgram& challenge = keyed.program();

    std::cout << "challenge: " << challenge.n_qubits() << " qubits, theta = " << challenge.theta() << "\n";
    std::cout << "H = " << hamiltonian_string(challenge) << "\n";
    std::cout << "exact bias of the honest prover: " << exact_bias_qrc(7, challenge.theta()) << "\n\n";

    const std::uint64_t shots = 100000;
    const OutputDistribution ideal = simulate(challenge);

    struct Prover {
        const char* name;
        SampleSet answer;
    };
    const Prover provers[] = {
        {"quantum (noiseless)", sample(ideal, shots, rng)},
        {"quantum (eps = 0.05)", sample(apply_dephasing(ideal, 0.05), shots, rng)},
        {"classical attack", qrc_attack_respond(challenge, shots, rng)},
        {"random bits", uniform_respond(challenge.n_qubits(), shots, rng)},
    };

    std::cout << std::fixed << std::setprecision(4);
    for (const auto& p : provers) {
        const VerificationReport r = verify(p.answer, keyed.secret(), {}, &ideal);
        std::cout << std::left << std::setw(22) << p.name << " bias " << r.bias_estimate << " +/- " << r.std_error
                  << "  " << to_string(r.verdict);
        if (r.fitted_epsilon) {
            std::cout << "  (fitted eps " << *r.fitted_epsilon << ")";
        }
        std::cout << "\n";
    }
}
