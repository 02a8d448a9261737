#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

struct OverflowError : std::runtime_error {
    OverflowError() : std::runtime_error("integer overflow") {}
};

// Overflow-checked 64-bit integer. Arithmetic throws OverflowError instead of
// wrapping, which lets Smith-normal-form callers retry with big integers.
struct CheckedInt {
    long long v = 0;

    CheckedInt() = default;
    CheckedInt(long long x) : v(x) {}

    friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
        long long r;
        if (__builtin_add_overflow(a.v, b.v, &r)) throw OverflowError();
        return r;
    }
    friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
        long long r;
        if (__builtin_sub_overflow(a.v, b.v, &r)) throw OverflowError();
        return r;
    }
    friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
        long long r;
        if (__builtin_mul_overflow(a.v, b.v, &r)) throw OverflowError();
        return r;
    }
    friend CheckedInt operator/(CheckedInt a, CheckedInt b) { return a.v / b.v; }
    friend CheckedInt operator%(CheckedInt a, CheckedInt b) { return a.v % b.v; }
    CheckedInt operator-() const {
        if (v == std::numeric_limits<long long>::min()) throw OverflowError();
        return -v;
    }
    CheckedInt& operator+=(CheckedInt o) { return *this = *this + o; }
    CheckedInt& operator-=(CheckedInt o) { return *this = *this - o; }

    friend bool operator==(CheckedInt a, CheckedInt b) { return a.v == b.v; }
    friend bool operator!=(CheckedInt a, CheckedInt b) { return a.v != b.v; }
    friend bool operator<(CheckedInt a, CheckedInt b) { return a.v < b.v; }
    friend bool operator>(CheckedInt a, CheckedInt b) { return a.v > b.v; }
};

inline CheckedInt abs_val(CheckedInt x) { return x.v < 0 ? -x : x; }
inline boost::multiprecision::cpp_int abs_val(const boost::multiprecision::cpp_int& x) {
    return x < 0 ? boost::multiprecision::cpp_int(-x) : x;
}

// Dense integer matrix in row-major order.
template <typename T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    T& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const T& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

template <typename T>
struct SmithResult {
    std::vector<T> diag;  // nonzero invariant entries d1 | d2 | ... | dr
    Mat<T> u;             // row transform, only filled when requested
    Mat<T> v;             // column transform: u * A * v is diagonal
    bool u_tracked = false;
};

// Smith normal form by smallest-pivot elimination. Returns the nonzero
// diagonal (with the divisibility chain enforced) plus the column transform V;
// the row transform U is tracked only when track_u is set, since it can be the
// largest object in play.
template <typename T>
SmithResult<T> smith(Mat<T> s, bool track_u = false) {
    const std::size_t m = s.rows, n = s.cols;
    SmithResult<T> res;
    res.v = Mat<T>::identity(n);
    res.u_tracked = track_u;
    if (track_u) res.u = Mat<T>::identity(m);

    auto row_swap = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(s.at(i, c), s.at(j, c));
        if (track_u)
            for (std::size_t c = 0; c < m; ++c) std::swap(res.u.at(i, c), res.u.at(j, c));
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m; ++r) std::swap(s.at(r, i), s.at(r, j));
        for (std::size_t r = 0; r < n; ++r) std::swap(res.v.at(r, i), res.v.at(r, j));
    };
    auto row_axpy = [&](std::size_t dst, std::size_t src, T q) {
        // row_dst -= q * row_src
        for (std::size_t c = 0; c < n; ++c) s.at(dst, c) -= q * s.at(src, c);
        if (track_u)
            for (std::size_t c = 0; c < m; ++c) res.u.at(dst, c) -= q * res.u.at(src, c);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, T q) {
        for (std::size_t r = 0; r < m; ++r) s.at(r, dst) -= q * s.at(r, src);
        for (std::size_t r = 0; r < n; ++r) res.v.at(r, dst) -= q * res.v.at(r, src);
    };

    std::size_t t = 0;
    while (t < m && t < n) {
        // Locate the smallest-magnitude nonzero entry of the trailing block.
        std::size_t pr = t, pc = t;
        bool found = false;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c) {
                if (s.at(r, c) == T(0)) continue;
                if (!found || abs_val(s.at(r, c)) < abs_val(s.at(pr, pc))) {
                    pr = r;
                    pc = c;
                    found = true;
                }
            }
        if (!found) break;
        row_swap(t, pr);
        col_swap(t, pc);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t r = t + 1; r < m; ++r) {
                if (s.at(r, t) == T(0)) continue;
                T q = s.at(r, t) / s.at(t, t);
                row_axpy(r, t, q);
                if (s.at(r, t) != T(0)) {
                    // Remainder became the smaller pivot: promote it and restart.
                    row_swap(t, r);
                    clean = false;
                }
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (s.at(t, c) == T(0)) continue;
                T q = s.at(t, c) / s.at(t, t);
                col_axpy(c, t, q);
                if (s.at(t, c) != T(0)) {
                    col_swap(t, c);
                    clean = false;
                }
            }
        }

        // Enforce the divisibility chain: fold in any entry the pivot misses.
        bool redo = false;
        for (std::size_t r = t + 1; r < m && !redo; ++r)
            for (std::size_t c = t + 1; c < n && !redo; ++c)
                if (s.at(r, c) % s.at(t, t) != T(0)) {
                    row_axpy(t, r, T(0) - T(1));  // add row r to row t
                    redo = true;
                }
        if (redo) continue;

        if (s.at(t, t) < T(0)) {
            for (std::size_t c = t; c < n; ++c) s.at(t, c) = T(0) - s.at(t, c);
            if (track_u)
                for (std::size_t c = 0; c < m; ++c) res.u.at(t, c) = T(0) - res.u.at(t, c);
        }
        res.diag.push_back(s.at(t, t));
        ++t;
    }
    return res;
}

namespace detail {

inline long long to_ll(const boost::multiprecision::cpp_int& x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
        throw std::overflow_error("Smith normal form result exceeds 64 bits");
    return static_cast<long long>(x);
}

}  // namespace detail

struct SmithResultLL {
    std::vector<long long> diag;
    Mat<long long> u;
    Mat<long long> v;
    bool u_tracked = false;
};

// 64-bit Smith normal form with automatic big-integer retry on overflow.
inline SmithResultLL smith_auto(const Mat<long long>& a, bool track_u = false) {
    SmithResultLL out;
    try {
        Mat<CheckedInt> ci(a.rows, a.cols);
        for (std::size_t i = 0; i < a.a.size(); ++i) ci.a[i] = CheckedInt(a.a[i]);
        SmithResult<CheckedInt> r = smith(std::move(ci), track_u);
        for (CheckedInt d : r.diag) out.diag.push_back(d.v);
        out.v = Mat<long long>(r.v.rows, r.v.cols);
        for (std::size_t i = 0; i < r.v.a.size(); ++i) out.v.a[i] = r.v.a[i].v;
        if (track_u) {
            out.u = Mat<long long>(r.u.rows, r.u.cols);
            for (std::size_t i = 0; i < r.u.a.size(); ++i) out.u.a[i] = r.u.a[i].v;
        }
        out.u_tracked = track_u;
        return out;
    } catch (const OverflowError&) {
        using boost::multiprecision::cpp_int;
        Mat<cpp_int> bi(a.rows, a.cols);
        for (std::size_t i = 0; i < a.a.size(); ++i) bi.a[i] = a.a[i];
        SmithResult<cpp_int> r = smith(std::move(bi), track_u);
        for (const cpp_int& d : r.diag) out.diag.push_back(detail::to_ll(d));
        out.v = Mat<long long>(r.v.rows, r.v.cols);
        for (std::size_t i = 0; i < r.v.a.size(); ++i) out.v.a[i] = detail::to_ll(r.v.a[i]);
        if (track_u) {
            out.u = Mat<long long>(r.u.rows, r.u.cols);
            for (std::size_t i = 0; i < r.u.a.size(); ++i) out.u.a[i] = detail::to_ll(r.u.a[i]);
        }
        out.u_tracked = track_u;
        return out;
    }
}

// Basis of the integer kernel lattice {x : Ax = 0}: the columns of V past the
// diagonal rank.
inline std::vector<std::vector<long long>> kernel_lattice(const Mat<long long>& a) {
    SmithResultLL r = smith_auto(a, /*track_u=*/false);
    const std::size_t rank = r.diag.size();
    std::vector<std::vector<long long>> basis;
    for (std::size_t c = rank; c < a.cols; ++c) {
        std::vector<long long> v(a.cols);
        for (std::size_t i = 0; i < a.cols; ++i) v[i] = r.v.at(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves AX = B over the integers, columnwise; nullopt when unsolvable.
inline std::optional<Mat<long long>> solve_integer(const Mat<long long>& a,
                                                   const Mat<long long>& b) {
    if (b.rows != a.rows) throw std::invalid_argument("solve_integer: shape mismatch");
    SmithResultLL r = smith_auto(a, /*track_u=*/true);
    const std::size_t rank = r.diag.size();
    Mat<long long> x(a.cols, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) {
        // y = U b_j, solve diag * z = y, then x_j = V z.
        std::vector<long long> y(a.rows, 0);
        for (std::size_t i = 0; i < a.rows; ++i) {
            long long acc = 0;
            for (std::size_t k = 0; k < a.rows; ++k) acc += r.u.at(i, k) * b.at(k, j);
            y[i] = acc;
        }
        std::vector<long long> z(a.cols, 0);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i < rank) {
                if (y[i] % r.diag[i] != 0) return std::nullopt;
                z[i] = y[i] / r.diag[i];
            } else if (y[i] != 0) {
                return std::nullopt;
            }
        }
        for (std::size_t i = 0; i < a.cols; ++i) {
            long long acc = 0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += r.v.at(i, k) * z[k];
            x.at(i, j) = acc;
        }
    }
    return x;
}

// Invariant factors of coker(A) = Z^rows / colspan(A): the nontrivial diagonal
// entries plus (rows - rank) free generators, reported as (factors, free rank).
inline std::pair<std::vector<long long>, int> cokernel_presentation(const Mat<long long>& a) {
    SmithResultLL r = smith_auto(a, /*track_u=*/false);
    std::vector<long long> factors;
    for (long long d : r.diag)
        if (d != 1) factors.push_back(d);
    const int free_rank = static_cast<int>(a.rows - r.diag.size());
    return {factors, free_rank};
}

}  // namespace forge
