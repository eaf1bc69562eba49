#pragma once

// Wire formats exchanged between the verifier and a prover, and the OpenQASM
// exporter for running a challenge on real hardware.
//
// All files are JSON objects with "format" and "format_version" fields. Every
// bitstring field is accompanied by an explicit bit order:
//   qubit0_leftmost   character k of the string is qubit k
//   qubit0_rightmost  character n-1-k of the string is qubit k (Qiskit counts)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "iqpv/errors.hpp"
#include "iqpv/gf2.hpp"
#include "iqpv/simulator.hpp"
#include "iqpv/verifier.hpp"
#include "iqpv/xprogram.hpp"

namespace iqpv {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

enum class BitOrder { Qubit0Leftmost, Qubit0Rightmost };

inline const char* to_string(BitOrder order) {
    return order == BitOrder::Qubit0Leftmost ? "qubit0_leftmost" : "qubit0_rightmost";
}

inline BitOrder parse_bit_order(std::string_view text) {
    if (text == "qubit0_leftmost") {
        return BitOrder::Qubit0Leftmost;
    }
    if (text == "qubit0_rightmost") {
        return BitOrder::Qubit0Rightmost;
    }
    throw ParseError("unknown bit_order '" + std::string(text) + "' (expected qubit0_leftmost or qubit0_rightmost)");
}

inline std::string outcome_to_string(std::uint64_t outcome, std::size_t n_qubits, BitOrder order) {
    std::string s(n_qubits, '0');
    for (std::size_t k = 0; k < n_qubits; ++k) {
        if ((outcome >> k) & 1) {
            s[order == BitOrder::Qubit0Leftmost ? k : n_qubits - 1 - k] = '1';
        }
    }
    return s;
}

inline std::uint64_t outcome_from_string(std::string_view text, std::size_t n_qubits, BitOrder order) {
    if (text.size() != n_qubits) {
        throw ParseError("key '" + std::string(text) + "' has length " + std::to_string(text.size()) + ", expected " +
                         std::to_string(n_qubits));
    }
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '0' && text[i] != '1') {
            throw ParseError("key '" + std::string(text) + "' contains a character other than 0/1");
        }
        if (text[i] == '1') {
            const std::size_t qubit = order == BitOrder::Qubit0Leftmost ? i : n_qubits - 1 - i;
            x |= std::uint64_t{1} << qubit;
        }
    }
    return x;
}

namespace detail {

inline json parse_json_text(std::string_view text, std::string_view source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ParseError(std::string(source) + ": line " + std::to_string(line) + ": " + e.what());
    }
}

inline const json& require_field(const json& j, const char* key, std::string_view source) {
    if (!j.is_object()) {
        throw ParseError(std::string(source) + ": top level must be a JSON object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string(source) + ": missing field '" + key + "'");
    }
    return *it;
}

inline std::string require_string(const json& j, const char* key, std::string_view source) {
    const json& v = require_field(j, key, source);
    if (!v.is_string()) {
        throw ParseError(std::string(source) + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

/// True for integers >= 0, whether stored signed or unsigned.
inline bool is_nonnegative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline std::uint64_t require_uint(const json& j, const char* key, std::string_view source) {
    const json& v = require_field(j, key, source);
    if (!is_nonnegative_integer(v)) {
        throw ParseError(std::string(source) + ": field '" + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

inline void require_header(const json& j, const char* format, std::string_view source) {
    const std::string f = require_string(j, "format", source);
    if (f != format) {
        throw ParseError(std::string(source) + ": format is '" + f + "', expected '" + format + "'");
    }
    const std::uint64_t v = require_uint(j, "format_version", source);
    if (v != kFormatVersion) {
        throw ParseError(std::string(source) + ": unsupported format_version " + std::to_string(v));
    }
}

inline std::size_t require_qubits(const json& j, std::string_view source) {
    const std::uint64_t n = require_uint(j, "n_qubits", source);
    if (n == 0 || n > kMaxOutcomeBits) {
        throw ParseError(std::string(source) + ": n_qubits must be in [1, 63]");
    }
    return static_cast<std::size_t>(n);
}

inline std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline double parse_double(const std::string& text, std::string_view what) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(x)) {
        throw ParseError(std::string(what) + ": '" + text + "' is not a finite decimal number");
    }
    return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Challenge file

/// Keys that must never appear in challenge metadata.
inline bool is_secret_metadata_key(std::string_view key) {
    return key == "secret" || key == "key" || key == "seed" || key == "s";
}

/// Public challenge. `metadata` is an optional JSON object (e.g. {"q": 7}).
inline json challenge_to_json(const XProgram& program, const json& metadata = json::object()) {
    if (!metadata.is_object()) {
        throw InvalidParameter("challenge metadata must be a JSON object");
    }
    for (const auto& [key, value] : metadata.items()) {
        if (is_secret_metadata_key(key)) {
            throw InvalidParameter("challenge metadata may not carry key material ('" + key + "')");
        }
    }
    json gates = json::array();
    for (const auto& g : program.gates()) {
        gates.push_back(g.to_string());
    }
    return json{{"format", "iqp-challenge"},
                {"format_version", kFormatVersion},
                {"n_qubits", program.n_qubits()},
                {"theta", detail::format_double(program.theta())},
                {"gate_bit_order", to_string(BitOrder::Qubit0Leftmost)},
                {"gates", std::move(gates)},
                {"metadata", metadata}};
}

inline XProgram challenge_from_json(const json& j, std::string_view source = "challenge") {
    detail::require_header(j, "iqp-challenge", source);
    const std::size_t n = detail::require_qubits(j, source);
    const double theta = detail::parse_double(detail::require_string(j, "theta", source), "theta");
    BitOrder order = BitOrder::Qubit0Leftmost;
    if (j.contains("gate_bit_order")) {
        order = parse_bit_order(detail::require_string(j, "gate_bit_order", source));
    }
    const json& gates = detail::require_field(j, "gates", source);
    if (!gates.is_array()) {
        throw ParseError(std::string(source) + ": 'gates' must be an array");
    }
    std::vector<BitVector> out;
    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (!gates[k].is_string()) {
            throw ParseError(std::string(source) + ": gates[" + std::to_string(k) + "] must be a bitstring");
        }
        try {
            const std::uint64_t mask = outcome_from_string(gates[k].get<std::string>(), n, order);
            if (mask == 0) {
                throw ParseError("all-zero gate");
            }
            out.push_back(BitVector::from_index(mask, n));
        } catch (const ParseError& e) {
            throw ParseError(std::string(source) + ": gates[" + std::to_string(k) + "]: " + e.what());
        }
    }
    if (j.contains("metadata")) {
        const json& meta = j["metadata"];
        if (!meta.is_object()) {
            throw ParseError(std::string(source) + ": 'metadata' must be an object");
        }
        for (const auto& [key, value] : meta.items()) {
            if (is_secret_metadata_key(key)) {
                throw ParseError(std::string(source) + ": metadata carries key material ('" + key + "')");
            }
        }
    }
    return XProgram(n, theta, std::move(out));
}

// ---------------------------------------------------------------------------
// Key file

struct KeyProvenance {
    std::optional<std::uint64_t> q;
    std::optional<std::uint64_t> n_redundant;
    std::optional<std::uint64_t> scrambles;
    std::optional<std::uint64_t> seed;
};

struct KeyFile {
    BitVector secret;
    KeyProvenance provenance;
};

inline json key_to_json(const KeyFile& key) {
    if (key.secret.is_zero()) {
        throw InvalidParameter("key file: secret must be nonzero");
    }
    json prov = json::object();
    auto put = [&](const char* name, const std::optional<std::uint64_t>& v) {
        if (v) {
            prov[name] = *v;
        }
    };
    put("q", key.provenance.q);
    put("n_redundant", key.provenance.n_redundant);
    put("scrambles", key.provenance.scrambles);
    put("seed", key.provenance.seed);
    return json{{"format", "iqp-key"},
                {"format_version", kFormatVersion},
                {"n_qubits", key.secret.size()},
                {"bit_order", to_string(BitOrder::Qubit0Leftmost)},
                {"secret", key.secret.to_string()},
                {"provenance", std::move(prov)}};
}

inline KeyFile key_from_json(const json& j, std::string_view source = "key") {
    detail::require_header(j, "iqp-key", source);
    const std::size_t n = detail::require_qubits(j, source);
    const BitOrder order = parse_bit_order(detail::require_string(j, "bit_order", source));
    const std::uint64_t mask = outcome_from_string(detail::require_string(j, "secret", source), n, order);
    if (mask == 0) {
        throw ParseError(std::string(source) + ": secret must be nonzero");
    }
    KeyFile key{BitVector::from_index(mask, n), {}};
    if (j.contains("provenance")) {
        const json& p = j["provenance"];
        auto get = [&](const char* name) -> std::optional<std::uint64_t> {
            if (!p.contains(name)) {
                return std::nullopt;
            }
            if (!detail::is_nonnegative_integer(p[name])) {
                throw ParseError(std::string(source) + ": provenance." + name + " must be a nonnegative integer");
            }
            return p[name].get<std::uint64_t>();
        };
        key.provenance = {get("q"), get("n_redundant"), get("scrambles"), get("seed")};
    }
    return key;
}

// ---------------------------------------------------------------------------
// Counts file

inline json counts_to_json(const SampleSet& samples, BitOrder order = BitOrder::Qubit0Leftmost) {
    json counts = json::object();
    for (const auto& [x, c] : samples.counts()) {
        counts[outcome_to_string(x, samples.n_qubits(), order)] = c;
    }
    return json{{"format", "iqp-counts"},
                {"format_version", kFormatVersion},
                {"n_qubits", samples.n_qubits()},
                {"bit_order", to_string(order)},
                {"counts", std::move(counts)}};
}

/// SampleSet in internal order (qubit 0 = least significant bit of the outcome).
inline SampleSet counts_from_json(const json& j, std::string_view source = "counts") {
    detail::require_header(j, "iqp-counts", source);
    const std::size_t n = detail::require_qubits(j, source);
    BitOrder order;
    try {
        order = parse_bit_order(detail::require_string(j, "bit_order", source));
    } catch (const ParseError& e) {
        throw ParseError(std::string(source) + ": " + e.what());
    }
    const json& counts = detail::require_field(j, "counts", source);
    if (!counts.is_object()) {
        throw ParseError(std::string(source) + ": 'counts' must be an object");
    }
    SampleSet out(n);
    for (const auto& [key, value] : counts.items()) {
        if (!detail::is_nonnegative_integer(value)) {
            throw ParseError(std::string(source) + ": counts['" + key + "'] must be a nonnegative integer");
        }
        std::uint64_t x;
        try {
            x = outcome_from_string(key, n, order);
        } catch (const ParseError& e) {
            throw ParseError(std::string(source) + ": counts: " + e.what());
        }
        out.add(x, value.get<std::uint64_t>());
    }
    if (out.empty()) {
        throw ParseError(std::string(source) + ": total count is zero");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distribution file

inline json distribution_to_json(const OutputDistribution& d, BitOrder order = BitOrder::Qubit0Leftmost) {
    json probs = json::object();
    for (std::uint64_t x = 0; x < d.probs().size(); ++x) {
        probs[outcome_to_string(x, d.n_qubits(), order)] = d[x];
    }
    return json{{"format", "iqp-distribution"},
                {"format_version", kFormatVersion},
                {"n_qubits", d.n_qubits()},
                {"bit_order", to_string(order)},
                {"probabilities", std::move(probs)}};
}

inline OutputDistribution distribution_from_json(const json& j, std::string_view source = "distribution") {
    detail::require_header(j, "iqp-distribution", source);
    const std::size_t n = detail::require_qubits(j, source);
    if (n > kDefaultQubitCap) {
        throw ParseError(std::string(source) + ": too many qubits for a dense distribution");
    }
    const BitOrder order = parse_bit_order(detail::require_string(j, "bit_order", source));
    const json& probs = detail::require_field(j, "probabilities", source);
    if (!probs.is_object()) {
        throw ParseError(std::string(source) + ": 'probabilities' must be an object");
    }
    std::vector<double> p(std::size_t{1} << n, 0.0);
    for (const auto& [key, value] : probs.items()) {
        if (!value.is_number()) {
            throw ParseError(std::string(source) + ": probabilities['" + key + "'] must be a number");
        }
        p[outcome_from_string(key, n, order)] = value.get<double>();
    }
    try {
        return OutputDistribution(n, std::move(p));
    } catch (const Error& e) {
        throw ParseError(std::string(source) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Report

inline json report_to_json(const VerificationReport& r) {
    json j{{"format", "iqp-report"},
           {"format_version", kFormatVersion},
           {"verdict", to_string(r.verdict)},
           {"n_shots", r.n_shots},
           {"n_qubits", r.n_qubits},
           {"bias_estimate", r.bias_estimate},
           {"std_error", r.std_error},
           {"secret_weight", r.secret_weight},
           {"thresholds",
            {{"quantum", r.thresholds.quantum},
             {"classical", r.thresholds.classical},
             {"random", r.thresholds.random},
             {"k", r.thresholds.k},
             {"min_window", r.thresholds.min_window},
             {"window", r.thresholds.window(r.std_error)}}},
           {"ideal_bias", r.ideal_bias ? json(*r.ideal_bias) : json(nullptr)},
           {"fitted_epsilon", r.fitted_epsilon ? json(*r.fitted_epsilon) : json(nullptr)},
           {"diagnostics", r.diagnostics}};
    if (r.fit) {
        json points = json::array();
        for (const auto& pt : r.fit->used) {
            points.push_back({{"s", outcome_to_string(pt.s, r.n_qubits, BitOrder::Qubit0Leftmost)},
                              {"weight", pt.weight},
                              {"ratio", pt.ratio},
                              {"residual", pt.residual}});
        }
        j["fit"] = {{"slope", r.fit->slope},
                    {"points", std::move(points)},
                    {"excluded_nonpositive", r.fit->excluded_nonpositive.size()},
                    {"below_floor", r.fit->below_floor}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string() + ": cannot open for reading");
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline json read_json_file(const std::filesystem::path& path) {
    return detail::parse_json_text(read_text_file(path), path.string());
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(tmp.string() + ": cannot open for writing");
        }
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) {
            throw Error(tmp.string() + ": write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(path.string() + ": rename failed: " + ec.message());
    }
}

inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

inline XProgram read_challenge(const std::filesystem::path& path) {
    return challenge_from_json(read_json_file(path), path.string());
}
inline KeyFile read_key(const std::filesystem::path& path) { return key_from_json(read_json_file(path), path.string()); }
inline SampleSet read_counts(const std::filesystem::path& path) {
    return counts_from_json(read_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// OpenQASM export

/// IQP circuit for the program: H on every qubit, one diagonal block per gate,
/// H on every qubit, measure all.
///
/// The block for a gate with support i_1 < ... < i_k computes the parity onto
/// i_k with a CNOT ladder, applies exp(i theta Z) there, and uncomputes the
/// ladder. exp(i theta Z) is emitted as tdg when theta = pi/8 (equal up to a
/// global phase) and as rz(-2 theta) otherwise. Connectivity is assumed to be
/// all-to-all.
inline std::string export_qasm(const XProgram& program) {
    const std::size_t n = program.n_qubits();
    const bool use_tdg = std::abs(program.theta() - std::numbers::pi / 8) < 1e-12;
    std::ostringstream os;
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << n << "];\n";
    os << "creg c[" << n << "];\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << "h q[" << i << "];\n";
    }
    for (const auto& g : program.gates()) {
        const auto support = g.support();
        os << "// gate " << g.to_string() << "\n";
        for (std::size_t k = 0; k + 1 < support.size(); ++k) {
            os << "cx q[" << support[k] << "],q[" << support[k + 1] << "];\n";
        }
        const std::size_t target = support.back();
        if (use_tdg) {
            os << "tdg q[" << target << "];\n";
        } else {
            os << "rz(" << detail::format_double(-2.0 * program.theta()) << ") q[" << target << "];\n";
        }
        for (std::size_t k = support.size() - 1; k > 0; --k) {
            os << "cx q[" << support[k - 1] << "],q[" << support[k] << "];\n";
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        os << "h q[" << i << "];\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        os << "measure q[" << i << "] -> c[" << i << "];\n";
    }
    return os.str();
}

}  // namespace iqpv
