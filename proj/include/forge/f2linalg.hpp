#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace forge {

// Dense bit vector over F2.
struct Bitvec {
    std::size_t n = 0;
    std::vector<std::uint64_t> w;

    Bitvec() = default;
    explicit Bitvec(std::size_t size) : n(size), w((size + 63) / 64, 0) {}

    std::size_t size() const { return n; }

    bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v)
            w[i >> 6] |= mask;
        else
            w[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    bool is_zero() const {
        for (std::uint64_t x : w)
            if (x) return false;
        return true;
    }

    // Index of the lowest set bit, or npos when zero.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t leading() const {
        for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k]) {
#if defined(__GNUC__) || defined(__clang__)
                return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w[k]));
#else
                for (std::size_t b = 0; b < 64; ++b)
                    if ((w[k] >> b) & 1u) return k * 64 + b;
#endif
            }
        return npos;
    }

    int popcount() const {
        int c = 0;
        for (std::uint64_t x : w) {
#if defined(__GNUC__) || defined(__clang__)
            c += __builtin_popcountll(x);
#else
            while (x) {
                c += static_cast<int>(x & 1u);
                x >>= 1;
            }
#endif
        }
        return c;
    }

    Bitvec& operator^=(const Bitvec& o) {
        if (o.n != n) throw std::invalid_argument("Bitvec: size mismatch");
        for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= o.w[k];
        return *this;
    }
    friend Bitvec operator^(Bitvec a, const Bitvec& b) { return a ^= b; }

    friend bool operator==(const Bitvec& a, const Bitvec& b) { return a.n == b.n && a.w == b.w; }
    friend bool operator!=(const Bitvec& a, const Bitvec& b) { return !(a == b); }
    friend bool operator<(const Bitvec& a, const Bitvec& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.w < b.w;
    }
};

// Incrementally maintained echelon basis of a subspace of F2^n.
// Rows are kept reduced against each other, ordered by leading index,
// which makes membership tests and coset reduction cheap.
class Echelon {
  public:
    Echelon() = default;
    explicit Echelon(std::size_t ambient) : n_(ambient) {}

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<Bitvec>& basis() const { return rows_; }

    // Reduces v against the stored basis; the residue is zero iff v is in the span.
    Bitvec reduce(Bitvec v) const {
        for (const Bitvec& r : rows_) {
            const std::size_t lead = r.leading();
            if (lead != Bitvec::npos && v.get(lead)) v ^= r;
        }
        return v;
    }

    bool contains(const Bitvec& v) const { return reduce(v).is_zero(); }

    // Inserts v; returns true when the span grew.
    bool insert(const Bitvec& v) {
        if (n_ == 0 && v.size() > 0) n_ = v.size();
        Bitvec res = reduce(v);
        const std::size_t lead = res.leading();
        if (lead == Bitvec::npos) return false;
        // Back-substitute into existing rows to keep the basis fully reduced.
        for (Bitvec& r : rows_)
            if (r.get(lead)) r ^= res;
        auto it = rows_.begin();
        while (it != rows_.end() && it->leading() < lead) ++it;
        rows_.insert(it, res);
        return true;
    }

  private:
    std::size_t n_ = 0;
    std::vector<Bitvec> rows_;
};

// Dense F2 matrix acting on column vectors: y = M x, with rows() = dim(target)
// and cols() = dim(source). Rows are stored as Bitvecs of length cols().
class F2Matrix {
  public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows, Bitvec(cols)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { data_[r].set(c, v); }

    const Bitvec& row(std::size_t r) const { return data_[r]; }
    Bitvec& row(std::size_t r) { return data_[r]; }

    // Sets column c to the target-space vector v.
    void set_column(std::size_t c, const Bitvec& v) {
        if (v.size() != rows_) throw std::invalid_argument("F2Matrix: column size mismatch");
        for (std::size_t r = 0; r < rows_; ++r) data_[r].set(c, v.get(r));
    }

    Bitvec column(std::size_t c) const {
        Bitvec v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            if (data_[r].get(c)) v.set(r);
        return v;
    }

    Bitvec apply(const Bitvec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("F2Matrix: apply size mismatch");
        Bitvec y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            // Row-vector dot product over packed words.
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < data_[r].w.size(); ++k) acc ^= data_[r].w[k] & x.w[k];
#if defined(__GNUC__) || defined(__clang__)
            if (__builtin_popcountll(acc) & 1) y.set(r);
#else
            int c = 0;
            while (acc) {
                c ^= static_cast<int>(acc & 1u);
                acc >>= 1;
            }
            if (c) y.set(r);
#endif
        }
        return y;
    }

    // In-place reduced row echelon form; returns the pivot columns in order.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t pr = r;
            while (pr < rows_ && !data_[pr].get(c)) ++pr;
            if (pr == rows_) continue;
            std::swap(data_[r], data_[pr]);
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != r && data_[i].get(c)) data_[i] ^= data_[r];
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        F2Matrix copy = *this;
        return copy.rref().size();
    }

    // Basis of {x : Mx = 0} in the source space.
    std::vector<Bitvec> kernel_basis() const {
        F2Matrix copy = *this;
        const std::vector<std::size_t> pivots = copy.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        std::vector<Bitvec> basis;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            Bitvec v(cols_);
            v.set(c);
            for (std::size_t i = 0; i < pivots.size(); ++i)
                if (copy.data_[i].get(c)) v.set(pivots[i]);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Pivot columns of the original matrix span the image.
    std::vector<std::size_t> image_pivot_columns() const {
        F2Matrix copy = *this;
        return copy.rref();
    }

    std::vector<Bitvec> image_basis() const {
        std::vector<Bitvec> basis;
        for (std::size_t c : image_pivot_columns()) basis.push_back(column(c));
        return basis;
    }

    // Solves Mx = b; returns one solution or nullopt.
    std::optional<Bitvec> solve(const Bitvec& b) const {
        if (b.size() != rows_) throw std::invalid_argument("F2Matrix: solve size mismatch");
        F2Matrix aug(rows_, cols_ + 1);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = 0; k < data_[r].w.size(); ++k) aug.data_[r].w[k] = data_[r].w[k];
            if (b.get(r)) aug.data_[r].set(cols_);
        }
        const std::vector<std::size_t> pivots = aug.rref();
        for (std::size_t p : pivots)
            if (p == cols_) return std::nullopt;  // inconsistent row 0...0 | 1
        Bitvec x(cols_);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (aug.data_[i].get(cols_)) x.set(pivots[i]);
        return x;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Bitvec> data_;
};

}  // namespace forge
