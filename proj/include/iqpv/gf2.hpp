#pragma once

// Linear algebra over GF(2).
//
// Index convention: every index is 0-based. A bitstring written as text puts
// component 0 leftmost, so "11010" has bits 0, 1 and 3 set. When a bit vector is
// converted to an integer, component i becomes integer bit i (least significant
// bit = component 0).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iqpv/errors.hpp"

namespace iqpv {

/// Packed bit vector with explicit length (>= 1).
class BitVector {
   public:
    explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {
        if (len == 0) {
            throw InvalidParameter("BitVector: length must be at least 1");
        }
    }

    static BitVector from_string(std::string_view bits) {
        BitVector v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw InvalidParameter("BitVector: '" + std::string(bits) + "' is not a bitstring");
            }
        }
        return v;
    }

    static BitVector from_bits(std::initializer_list<int> bits) {
        BitVector v(bits.size());
        std::size_t i = 0;
        for (int b : bits) {
            if (b != 0 && b != 1) {
                throw InvalidParameter("BitVector: entries must be 0 or 1");
            }
            v.set(i++, b == 1);
        }
        return v;
    }

    /// Component i taken from integer bit i.
    static BitVector from_index(std::uint64_t value, std::size_t len) {
        if (len < 64 && (value >> len) != 0) {
            throw InvalidParameter("BitVector: value does not fit in " + std::to_string(len) + " bits");
        }
        BitVector v(len);
        v.words_[0] = value;
        return v;
    }

    static BitVector unit(std::size_t len, std::size_t i) {
        BitVector v(len);
        v.set(i, true);
        return v;
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const {
        check_index(i);
        return (words_[i / 64] >> (i % 64)) & 1;
    }

    void set(std::size_t i, bool value) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value) {
            words_[i / 64] |= mask;
        } else {
            words_[i / 64] &= ~mask;
        }
    }

    void flip(std::size_t i) {
        check_index(i);
        words_[i / 64] ^= std::uint64_t{1} << (i % 64);
    }

    bool is_zero() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    /// Lowest set index, or size() if zero.
    std::size_t first_set() const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) {
                return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
            }
        }
        return len_;
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    /// Integer with bit i = component i. Requires size() <= 64.
    std::uint64_t to_index() const {
        if (len_ > 64) {
            throw DimensionError("BitVector: more than 64 bits cannot be packed into an index");
        }
        return words_[0];
    }

    std::span<const std::uint64_t> words() const { return words_; }

    BitVector& operator^=(const BitVector& other) {
        require_same_length(other, "xor");
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    friend bool operator==(const BitVector& a, const BitVector& b) = default;

    /// Total order (length first, then words) for sorting and deduplication.
    friend bool operator<(const BitVector& a, const BitVector& b) {
        if (a.len_ != b.len_) {
            return a.len_ < b.len_;
        }
        return std::lexicographical_compare(a.words_.rbegin(), a.words_.rend(), b.words_.rbegin(), b.words_.rend());
    }

    void require_same_length(const BitVector& other, const char* what) const {
        if (other.len_ != len_) {
            throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(len_) + " vs " +
                                 std::to_string(other.len_) + ")");
        }
    }

   private:
    void check_index(std::size_t i) const {
        if (i >= len_) {
            throw InvalidParameter("BitVector: index " + std::to_string(i) + " out of range for length " +
                                   std::to_string(len_));
        }
    }

    std::size_t len_;
    std::vector<std::uint64_t> words_;
};

/// Sum of u_i v_i mod 2.
inline bool inner_product(const BitVector& u, const BitVector& v) {
    u.require_same_length(v, "inner_product");
    std::uint64_t acc = 0;
    const auto uw = u.words();
    const auto vw = v.words();
    for (std::size_t w = 0; w < uw.size(); ++w) {
        acc ^= uw[w] & vw[w];
    }
    return std::popcount(acc) & 1;
}

inline std::size_t hamming_weight(const BitVector& v) {
    std::size_t n = 0;
    for (std::uint64_t w : v.words()) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

/// Number of positions where both vectors are 1.
inline std::size_t overlap(const BitVector& u, const BitVector& v) {
    u.require_same_length(v, "overlap");
    std::size_t n = 0;
    const auto uw = u.words();
    const auto vw = v.words();
    for (std::size_t w = 0; w < uw.size(); ++w) {
        n += static_cast<std::size_t>(std::popcount(uw[w] & vw[w]));
    }
    return n;
}

/// Dense bit matrix stored as rows.
class BitMatrix {
   public:
    BitMatrix(std::size_t n_rows, std::size_t n_cols) : n_cols_(n_cols) {
        if (n_rows == 0 || n_cols == 0) {
            throw InvalidParameter("BitMatrix: dimensions must be positive");
        }
        rows_.assign(n_rows, BitVector(n_cols));
    }

    explicit BitMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
        if (rows_.empty()) {
            throw InvalidParameter("BitMatrix: at least one row required");
        }
        n_cols_ = rows_.front().size();
        for (const auto& r : rows_) {
            rows_.front().require_same_length(r, "BitMatrix");
        }
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m.set(i, i, true);
        }
        return m;
    }

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return n_cols_; }

    bool get(std::size_t r, std::size_t c) const { return row_at(r).get(c); }
    void set(std::size_t r, std::size_t c, bool value) { row_at(r).set(c, value); }

    const BitVector& row(std::size_t r) const { return row_at(r); }
    const std::vector<BitVector>& rows() const { return rows_; }

    BitVector column(std::size_t c) const {
        BitVector col(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            col.set(r, rows_[r].get(c));
        }
        return col;
    }

    std::vector<BitVector> columns() const {
        std::vector<BitVector> out;
        out.reserve(n_cols_);
        for (std::size_t c = 0; c < n_cols_; ++c) {
            out.push_back(column(c));
        }
        return out;
    }

    BitMatrix transpose() const { return BitMatrix(columns()); }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

   private:
    const BitVector& row_at(std::size_t r) const {
        if (r >= rows_.size()) {
            throw InvalidParameter("BitMatrix: row " + std::to_string(r) + " out of range");
        }
        return rows_[r];
    }
    BitVector& row_at(std::size_t r) {
        return const_cast<BitVector&>(static_cast<const BitMatrix&>(*this).row_at(r));
    }

    std::vector<BitVector> rows_;
    std::size_t n_cols_ = 0;
};

/// Adds column j into column i (column i ^= column j).
inline BitMatrix col_add(BitMatrix m, std::size_t i, std::size_t j) {
    if (i == j) {
        throw InvalidParameter("col_add: column indices must differ");
    }
    if (i >= m.n_cols() || j >= m.n_cols()) {
        throw InvalidParameter("col_add: column index out of range");
    }
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        if (m.get(r, j)) {
            m.set(r, i, !m.get(r, i));
        }
    }
    return m;
}

/// Reduced row-echelon basis of the span of `generators`. Zero rows are dropped.
inline std::vector<BitVector> row_reduce(std::span<const BitVector> generators) {
    std::vector<BitVector> basis;
    for (const auto& g : generators) {
        BitVector v = g;
        for (const auto& b : basis) {
            if (v.get(b.first_set())) {
                v ^= b;
            }
        }
        if (v.is_zero()) {
            continue;
        }
        const std::size_t pivot = v.first_set();
        for (auto& b : basis) {
            if (b.get(pivot)) {
                b ^= v;
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rank(std::span<const BitVector> generators) { return row_reduce(generators).size(); }

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// Every element of the span, each exactly once, in Gray-code order starting at 0.
inline std::vector<BitVector> span_enumerate(std::span<const BitVector> generators,
                                             std::uint64_t cap = kDefaultEnumerationCap) {
    if (generators.empty()) {
        throw InvalidParameter("span_enumerate: no generators");
    }
    for (const auto& g : generators) {
        generators.front().require_same_length(g, "span_enumerate");
    }
    const std::vector<BitVector> basis = row_reduce(generators);
    const std::size_t r = basis.size();
    if (r >= 63 || (std::uint64_t{1} << r) > cap) {
        throw ResourceLimit("span_enumerate: span of rank " + std::to_string(r) + " exceeds enumeration cap " +
                            std::to_string(cap));
    }
    const std::uint64_t count = std::uint64_t{1} << r;
    std::vector<BitVector> out;
    out.reserve(count);
    BitVector current(generators.front().size());
    out.push_back(current);
    for (std::uint64_t k = 1; k < count; ++k) {
        current ^= basis[static_cast<std::size_t>(std::countr_zero(k))];
        out.push_back(current);
    }
    return out;
}

inline bool is_prime(std::uint64_t q) {
    if (q < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            return false;
        }
    }
    return true;
}

/// Nonzero quadratic residues modulo an odd prime q, ascending.
inline std::vector<std::uint64_t> quadratic_residues(std::uint64_t q) {
    if (q == 2 || !is_prime(q)) {
        throw InvalidParameter("quadratic_residues: " + std::to_string(q) + " is not an odd prime");
    }
    std::vector<bool> hit(q, false);
    for (std::uint64_t x = 1; x < q; ++x) {
        hit[(x * x) % q] = true;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t j = 1; j < q; ++j) {
        if (hit[j]) {
            out.push_back(j);
        }
    }
    return out;
}

}  // namespace iqpv
