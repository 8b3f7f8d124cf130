#ifndef REGDIGRAPH_CORE_HPP
#define REGDIGRAPH_CORE_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regdigraph {

/// Raised when an input violates a documented precondition (bad matrix,
/// malformed config, out-of-range parameter). The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot complete (budget exceeded, no
/// convergence). The CLI maps it to exit code 2.
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// Fixed-length bit vector, word-packed. Used both for matrix rows and for
/// index subsets of [n].
class BitVector {
public:
    static constexpr std::size_t word_bits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_((size + word_bits - 1) / word_bits, 0) {}

    static BitVector from_indices(std::size_t size, const IndexSet& indices) {
        BitVector out(size);
        for (auto k : indices) {
            if (k >= size) {
                throw ValidationError("index " + std::to_string(k) + " out of range for size " + std::to_string(size));
            }
            out.set(k, true);
        }
        return out;
    }

    static BitVector full(std::size_t size) {
        BitVector out(size);
        for (std::size_t k = 0; k < size; ++k) {
            out.set(k, true);
        }
        return out;
    }

    std::size_t size() const { return size_; }
    std::size_t word_count() const { return words_.size(); }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool test(std::size_t k) const { return (words_[k / word_bits] >> (k % word_bits)) & 1U; }

    void set(std::size_t k, bool value) {
        auto mask = std::uint64_t{1} << (k % word_bits);
        if (value) {
            words_[k / word_bits] |= mask;
        } else {
            words_[k / word_bits] &= ~mask;
        }
    }

    void flip(std::size_t k) { words_[k / word_bits] ^= std::uint64_t{1} << (k % word_bits); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    IndexSet to_indices() const {
        IndexSet out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits != 0) {
                auto b = static_cast<std::size_t>(std::countr_zero(bits));
                out.push_back(w * word_bits + b);
                bits &= bits - 1;
            }
        }
        return out;
    }

    /// Complement within [0, size).
    BitVector complemented() const {
        BitVector out(size_);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            out.words_[w] = ~words_[w];
        }
        out.clear_tail();
        return out;
    }

    BitVector& operator&=(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] &= o.words_[w];
        }
        return *this;
    }
    BitVector& operator|=(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] |= o.words_[w];
        }
        return *this;
    }
    BitVector& operator^=(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= o.words_[w];
        }
        return *this;
    }

    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    /// |a & b| without materializing the intersection.
    friend std::size_t intersection_count(const BitVector& a, const BitVector& b) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            c += static_cast<std::size_t>(std::popcount(a.words_[w] & b.words_[w]));
        }
        return c;
    }

private:
    void clear_tail() {
        auto rem = size_ % word_bits;
        if (rem != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << rem) - 1;
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Mutable square 0/1 matrix with bit-packed rows. Working storage for
/// samplers and resamplers; the validated type is RegularDigraphMatrix.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : n_(n), rows_(n, BitVector(n)) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
    void set(std::size_t i, std::size_t j, bool v) { rows_[i].set(j, v); }
    const BitVector& row(std::size_t i) const { return rows_[i]; }
    BitVector& row(std::size_t i) { return rows_[i]; }

    std::size_t row_sum(std::size_t i) const { return rows_[i].count(); }

    std::vector<std::size_t> column_sums() const {
        std::vector<std::size_t> sums(n_, 0);
        for (const auto& r : rows_) {
            for (auto k : r.to_indices()) {
                ++sums[k];
            }
        }
        return sums;
    }

    BitMatrix transposed() const {
        BitMatrix t(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (auto k : rows_[i].to_indices()) {
                t.set(k, i, true);
            }
        }
        return t;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    /// Row-major lexicographic order with 0 < 1.
    friend bool operator<(const BitMatrix& a, const BitMatrix& b) {
        for (std::size_t i = 0; i < a.n_; ++i) {
            for (std::size_t j = 0; j < a.n_; ++j) {
                bool x = a.get(i, j);
                bool y = b.get(i, j);
                if (x != y) {
                    return y;
                }
            }
        }
        return false;
    }

private:
    std::size_t n_ = 0;
    std::vector<BitVector> rows_;
};

struct ValidationIssue {
    enum class Kind { NotSquare, BadEntry, RowSum, ColumnSum, BadDegree };
    Kind kind;
    std::size_t index = 0;  // row or column (0-based); for BadEntry, the row
    long long actual = 0;   // offending sum or entry value
    std::size_t column = 0; // BadEntry only

    std::string describe() const {
        switch (kind) {
        case Kind::NotSquare:
            return "row " + std::to_string(index) + " has length " + std::to_string(actual);
        case Kind::BadEntry:
            return "entry (" + std::to_string(index) + "," + std::to_string(column) + ") = " + std::to_string(actual);
        case Kind::RowSum:
            return "row " + std::to_string(index) + " sums to " + std::to_string(actual);
        case Kind::ColumnSum:
            return "column " + std::to_string(index) + " sums to " + std::to_string(actual);
        case Kind::BadDegree:
            return "degree " + std::to_string(actual) + " exceeds dimension";
        }
        return "unknown issue";
    }
};

struct ValidationResult;

/// An element of M_{n,d}: n x n, 0/1 entries, every row and column sum equal to d.
/// Immutable once constructed; obtain one through validate().
class RegularDigraphMatrix {
public:
    std::size_t n() const { return bits_.size(); }
    std::size_t d() const { return d_; }
    bool operator()(std::size_t i, std::size_t j) const { return bits_.get(i, j); }
    const BitVector& row(std::size_t i) const { return bits_.row(i); }
    const BitMatrix& bits() const { return bits_; }

    friend bool operator==(const RegularDigraphMatrix&, const RegularDigraphMatrix&) = default;
    friend bool operator<(const RegularDigraphMatrix& a, const RegularDigraphMatrix& b) { return a.bits_ < b.bits_; }

    /// Wraps storage already known to satisfy the invariants (samplers keep
    /// them by construction). Checked in debug builds only.
    static RegularDigraphMatrix trusted(BitMatrix bits, std::size_t d) {
#ifndef NDEBUG
        for (std::size_t i = 0; i < bits.size(); ++i) {
            assert(bits.row_sum(i) == d);
        }
#endif
        return RegularDigraphMatrix(std::move(bits), d);
    }

private:
    RegularDigraphMatrix(BitMatrix bits, std::size_t d) : bits_(std::move(bits)), d_(d) {}

    BitMatrix bits_;
    std::size_t d_ = 0;

    friend ValidationResult validate(const BitMatrix&, std::size_t);
};

struct ValidationResult {
    std::optional<RegularDigraphMatrix> matrix;
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    std::string summary() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < issues.size(); ++k) {
            os << (k ? "; " : "") << issues[k].describe();
        }
        return os.str();
    }
};

/// Checks all 2n sum constraints and reports every violation.
inline ValidationResult validate(const BitMatrix& m, std::size_t d) {
    ValidationResult res;
    const auto n = m.size();
    if (d > n) {
        res.issues.push_back({ValidationIssue::Kind::BadDegree, 0, static_cast<long long>(d)});
        return res;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto s = m.row_sum(i);
        if (s != d) {
            res.issues.push_back({ValidationIssue::Kind::RowSum, i, static_cast<long long>(s)});
        }
    }
    auto cols = m.column_sums();
    for (std::size_t j = 0; j < n; ++j) {
        if (cols[j] != d) {
            res.issues.push_back({ValidationIssue::Kind::ColumnSum, j, static_cast<long long>(cols[j])});
        }
    }
    if (res.issues.empty()) {
        res.matrix = RegularDigraphMatrix(m, d);
    }
    return res;
}

/// Validates a dense candidate given as nested integer rows.
inline ValidationResult validate(const std::vector<std::vector<int>>& m, std::size_t d) {
    ValidationResult res;
    const auto n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) {
            res.issues.push_back({ValidationIssue::Kind::NotSquare, i, static_cast<long long>(m[i].size())});
        }
    }
    if (!res.issues.empty()) {
        return res;
    }
    BitMatrix bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto v = m[i][j];
            if (v != 0 && v != 1) {
                res.issues.push_back({ValidationIssue::Kind::BadEntry, i, v, j});
            } else {
                bits.set(i, j, v == 1);
            }
        }
    }
    if (!res.issues.empty()) {
        return res;
    }
    return validate(bits, d);
}

/// Validates or throws ValidationError with the full issue list.
inline RegularDigraphMatrix validated(const BitMatrix& m, std::size_t d) {
    auto res = validate(m, d);
    if (!res.ok()) {
        throw ValidationError("not a member of M_{n,d}: " + res.summary());
    }
    return std::move(*res.matrix);
}

/// J - A, a member of M_{n,n-d}.
inline RegularDigraphMatrix complement(const RegularDigraphMatrix& a) {
    const auto n = a.n();
    BitMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.row(i) = a.row(i).complemented();
    }
    return RegularDigraphMatrix::trusted(std::move(out), n - a.d());
}

inline RegularDigraphMatrix transpose(const RegularDigraphMatrix& a) {
    return RegularDigraphMatrix::trusted(a.bits().transposed(), a.d());
}

struct SwitchingSet {
    std::pair<Index, Index> rowPair;
    IndexSet indices;
};

/// Indicator of {k : a_ik != a_jk} as a bit vector.
inline BitVector switching_mask(const BitMatrix& a, Index i, Index j) {
    if (i == j) {
        throw ValidationError("switching set needs two distinct rows");
    }
    return a.row(i) ^ a.row(j);
}

inline SwitchingSet switching_set(const RegularDigraphMatrix& a, Index i, Index j) {
    if (i >= a.n() || j >= a.n()) {
        throw ValidationError("row index out of range");
    }
    return {{i, j}, switching_mask(a.bits(), i, j).to_indices()};
}

/// Switching set of columns i and j, i.e. the row switching set of the transpose.
inline SwitchingSet column_switching_set(const RegularDigraphMatrix& a, Index i, Index j) {
    return switching_set(transpose(a), i, j);
}

/// omega_{i,j}(S) = sum over k in S of (a_ik - a_jk).
inline long long switching_weight(const BitMatrix& a, Index i, Index j, const BitVector& s) {
    auto pos = intersection_count(a.row(i), s);
    auto neg = intersection_count(a.row(j), s);
    return static_cast<long long>(pos) - static_cast<long long>(neg);
}

inline long long switching_weight(const RegularDigraphMatrix& a, Index i, Index j, const IndexSet& s) {
    return switching_weight(a.bits(), i, j, BitVector::from_indices(a.n(), s));
}

// Text format: "n d" then n lines of n characters from {0,1}.

inline void write_matrix(std::ostream& os, const RegularDigraphMatrix& a) {
    os << a.n() << ' ' << a.d() << '\n';
    std::string line(a.n(), '0');
    for (std::size_t i = 0; i < a.n(); ++i) {
        for (std::size_t j = 0; j < a.n(); ++j) {
            line[j] = a(i, j) ? '1' : '0';
        }
        os << line << '\n';
    }
}

inline std::string to_text(const RegularDigraphMatrix& a) {
    std::ostringstream os;
    write_matrix(os, a);
    return os.str();
}

/// Reads one matrix record, skipping leading blank lines. Returns nullopt at
/// end of input; throws ValidationError on malformed or invalid records.
inline std::optional<RegularDigraphMatrix> read_matrix(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            break;
        }
    }
    if (!is && line.empty()) {
        return std::nullopt;
    }
    std::istringstream header(line);
    long long n = -1;
    long long d = -1;
    if (!(header >> n >> d) || n <= 0 || d < 0) {
        throw ValidationError("bad matrix header: '" + line + "'");
    }
    std::vector<std::vector<int>> rows;
    for (long long i = 0; i < n; ++i) {
        if (!std::getline(is, line)) {
            throw ValidationError("matrix truncated after " + std::to_string(i) + " rows");
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::vector<int> row;
        row.reserve(line.size());
        for (char c : line) {
            if (c != '0' && c != '1') {
                throw ValidationError("bad matrix character '" + std::string(1, c) + "' in row " + std::to_string(i));
            }
            row.push_back(c - '0');
        }
        rows.push_back(std::move(row));
    }
    auto res = validate(rows, static_cast<std::size_t>(d));
    if (!res.ok()) {
        throw ValidationError("invalid matrix: " + res.summary());
    }
    return std::move(res.matrix);
}

inline RegularDigraphMatrix from_text(const std::string& text) {
    std::istringstream is(text);
    auto m = read_matrix(is);
    if (!m) {
        throw ValidationError("empty matrix text");
    }
    return std::move(*m);
}

} // namespace regdigraph

#endif
