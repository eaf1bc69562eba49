#pragma once

// Command-line front end. Exit codes: 0 success, 1 negative verification result
// (with --strict) or failed selftest, 2 usage or input errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"

#include "iqpv/adversary.hpp"
#include "iqpv/protocol.hpp"
#include "iqpv/rng.hpp"
#include "iqpv/simulator.hpp"
#include "iqpv/verifier.hpp"
#include "iqpv/xprogram.hpp"
#include "iqpv/testing/acceptance.hpp"

#ifndef IQPV_FIXTURE_DIR
#define IQPV_FIXTURE_DIR "tests/fixtures"
#endif

namespace iqpv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

namespace cli_detail {

inline void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
    } else {
        write_text_atomic(out_path, text);
    }
}

inline void emit_json(const std::string& out_path, const json& j, std::ostream& out) {
    emit(out_path, j.dump(2) + "\n", out);
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"IQP verification toolkit: challenge generation, simulation, spoofing and verification"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Create a scrambled challenge and its secret key");
    std::uint64_t q = 7;
    std::size_t redundant = 3;
    std::size_t scrambles = 50;
    std::uint64_t gen_seed = 0;
    std::string challenge_out = "challenge.json";
    std::string key_out = "key.json";
    gen->add_option("--q", q, "Prime with (q+1) divisible by 8")->capture_default_str();
    gen->add_option("--redundant", redundant, "Number of redundant gates")->capture_default_str();
    gen->add_option("--scrambles", scrambles, "Number of column additions")->capture_default_str();
    gen->add_option("--seed", gen_seed, "64-bit seed")->required();
    gen->add_option("--challenge-out", challenge_out, "Challenge file to write")->capture_default_str();
    gen->add_option("--key-out", key_out, "Key file to write")->capture_default_str();

    // export-qasm
    auto* qasm = app.add_subcommand("export-qasm", "Emit the challenge as an OpenQASM 2.0 circuit");
    std::string challenge_path;
    std::string out_path;
    qasm->add_option("--challenge", challenge_path, "Challenge file")->required();
    qasm->add_option("--out", out_path, "Output file (stdout if omitted)");

    auto bit_order_option = [](CLI::App* sub, std::string& target) {
        target = "qubit0_leftmost";
        sub->add_option("--bit-order", target, "Bitstring order of the written file")
            ->check(CLI::IsMember({"qubit0_leftmost", "qubit0_rightmost"}))
            ->capture_default_str();
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "Write the exact output distribution of a challenge");
    double sim_eps = 0.0;
    std::string sim_order;
    sim->add_option("--challenge", challenge_path, "Challenge file")->required();
    sim->add_option("--epsilon", sim_eps, "Dephasing rate in [0, 0.5]")->capture_default_str();
    sim->add_option("--out", out_path, "Output file (stdout if omitted)");
    bit_order_option(sim, sim_order);

    // sample
    auto* smp = app.add_subcommand("sample", "Honest prover: sample the challenge's output distribution");
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    double smp_eps = 0.0;
    std::string smp_order;
    smp->add_option("--challenge", challenge_path, "Challenge file")->required();
    smp->add_option("--shots", shots, "Number of shots")->capture_default_str();
    smp->add_option("--seed", seed, "64-bit seed")->required();
    smp->add_option("--epsilon", smp_eps, "Dephasing rate in [0, 0.5]")->capture_default_str();
    smp->add_option("--out", out_path, "Counts file (stdout if omitted)");
    bit_order_option(smp, smp_order);

    // attack
    auto* atk = app.add_subcommand("attack", "Classical cheater: respond with the quadratic-residue attack");
    std::string atk_order;
    atk->add_option("--challenge", challenge_path, "Challenge file")->required();
    atk->add_option("--shots", shots, "Number of shots")->capture_default_str();
    atk->add_option("--seed", seed, "64-bit seed")->required();
    atk->add_option("--out", out_path, "Counts file (stdout if omitted)");
    bit_order_option(atk, atk_order);

    // verify
    auto* ver = app.add_subcommand("verify", "Estimate the bias of a counts file against a key");
    std::string counts_path;
    std::string key_path;
    std::string ideal_path;
    std::string json_path;
    bool strict = false;
    Thresholds thresholds;
    ver->add_option("--counts", counts_path, "Counts file")->required();
    ver->add_option("--key", key_path, "Key file")->required();
    ver->add_option("--ideal-challenge", ideal_path, "Challenge file used to fit the noise rate");
    ver->add_option("--json", json_path, "Also write the report as JSON to this file ('-' for stdout)");
    ver->add_flag("--strict", strict, "Exit 1 unless the verdict is QUANTUM_CONSISTENT");
    ver->add_option("--k", thresholds.k, "Window width in standard errors")->capture_default_str();
    ver->add_option("--min-window", thresholds.min_window, "Smallest window half-width")->capture_default_str();

    // selftest
    auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
    std::string fixtures = IQPV_FIXTURE_DIR;
    self->add_option("--fixtures", fixtures, "Fixture directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            Rng rng(gen_seed);
            const KeyedProgram kp = generate_scrambled_qrc(q, redundant, scrambles, rng);
            write_json_atomic(challenge_out, challenge_to_json(kp.program(), json{{"q", q}}));
            write_json_atomic(key_out, key_to_json(KeyFile{kp.secret(), {q, redundant, scrambles, gen_seed}}));
            out << "wrote " << challenge_out << " (" << kp.program().n_qubits() << " qubits, "
                << kp.program().gates().size() << " gates) and " << key_out << "\n";
        } else if (*qasm) {
            cli_detail::emit(out_path, export_qasm(read_challenge(challenge_path)), out);
        } else if (*sim) {
            OutputDistribution d = simulate(read_challenge(challenge_path));
            if (sim_eps > 0.0) {
                d = apply_dephasing(d, sim_eps);
            }
            cli_detail::emit_json(out_path, distribution_to_json(d, parse_bit_order(sim_order)), out);
        } else if (*smp) {
            OutputDistribution d = simulate(read_challenge(challenge_path));
            if (smp_eps > 0.0) {
                d = apply_dephasing(d, smp_eps);
            }
            Rng rng(seed);
            cli_detail::emit_json(out_path, counts_to_json(sample(d, shots, rng), parse_bit_order(smp_order)), out);
        } else if (*atk) {
            Rng rng(seed);
            const SampleSet s = qrc_attack_respond(read_challenge(challenge_path), shots, rng);
            cli_detail::emit_json(out_path, counts_to_json(s, parse_bit_order(atk_order)), out);
        } else if (*ver) {
            const SampleSet samples = read_counts(counts_path);
            const KeyFile key = read_key(key_path);
            std::optional<OutputDistribution> ideal;
            if (!ideal_path.empty()) {
                const XProgram program = read_challenge(ideal_path);
                if (program.n_qubits() != key.secret.size()) {
                    throw DimensionError("challenge and key disagree on the number of qubits");
                }
                if (program.n_qubits() <= kDefaultQubitCap) {
                    ideal = simulate(program);
                }
            }
            const VerificationReport report = verify(samples, key.secret, thresholds, ideal ? &*ideal : nullptr);
            out << render_text(report);
            if (!json_path.empty()) {
                cli_detail::emit_json(json_path, report_to_json(report), out);
            }
            if (strict && report.verdict != Verdict::QuantumConsistent) {
                return kExitNegative;
            }
        } else if (*self) {
            return testing::run_acceptance(fixtures, out) ? kExitOk : kExitNegative;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace iqpv
