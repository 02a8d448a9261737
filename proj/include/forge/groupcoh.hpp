#pragma once

#include <cctype>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/abelian.hpp"
#include "forge/f2linalg.hpp"
#include "forge/qz.hpp"
#include "forge/snf.hpp"

namespace forge::groupcoh {

// ------------------------------------------------------------------
// Finite abelian groups with tuple element representation
// ------------------------------------------------------------------

struct FiniteAbelianGroup {
    std::vector<long long> factors;  // invariant chain d1 | d2 | ... | dk, each >= 2

    static FiniteAbelianGroup from_orders(const std::vector<long long>& orders) {
        std::vector<std::int64_t> o(orders.begin(), orders.end());
        AbelianGroup canon = AbelianGroup::from_orders(o);
        if (canon.free_rank > 0)
            throw std::invalid_argument("finite group expected, got a free summand");
        FiniteAbelianGroup g;
        g.factors.assign(canon.factors.begin(), canon.factors.end());
        return g;
    }

    // Accepts "Z2", "Z2xZ4", "Z2 x Z2", "1" (trivial).
    static FiniteAbelianGroup parse(const std::string& text) {
        std::vector<long long> orders;
        std::size_t i = 0;
        auto skip_ws = [&]() {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        skip_ws();
        if (i >= text.size()) throw std::invalid_argument("group: empty description");
        while (i < text.size()) {
            skip_ws();
            if (text[i] == '1') {
                ++i;
            } else if (text[i] == 'Z' || text[i] == 'z') {
                ++i;
                long long d = 0;
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    throw std::invalid_argument("group: expected order after Z in '" + text + "'");
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    d = d * 10 + (text[i++] - '0');
                if (d < 1) throw std::invalid_argument("group: order must be positive");
                if (d > 1) orders.push_back(d);
            } else {
                throw std::invalid_argument("group: unexpected character in '" + text + "'");
            }
            skip_ws();
            if (i < text.size()) {
                if (text[i] != 'x' && text[i] != '*')
                    throw std::invalid_argument("group: expected 'x' between factors");
                ++i;
            }
        }
        return from_orders(orders);
    }

    long long order() const {
        long long n = 1;
        for (long long d : factors) n *= d;
        return n;
    }

    std::vector<long long> tuple_of(long long index) const {
        std::vector<long long> t(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            t[i] = index % factors[i];
            index /= factors[i];
        }
        return t;
    }

    long long index_of(const std::vector<long long>& t) const {
        long long idx = 0;
        for (std::size_t i = factors.size(); i-- > 0;) {
            long long c = ((t[i] % factors[i]) + factors[i]) % factors[i];
            idx = idx * factors[i] + c;
        }
        return idx;
    }

    long long op(long long a, long long b) const {
        std::vector<long long> ta = tuple_of(a), tb = tuple_of(b);
        for (std::size_t i = 0; i < factors.size(); ++i) ta[i] += tb[i];
        return index_of(ta);
    }

    long long inv(long long a) const {
        std::vector<long long> t = tuple_of(a);
        for (auto& c : t) c = -c;
        return index_of(t);
    }

    std::string to_string() const {
        if (factors.empty()) return "1";
        std::ostringstream out;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out << " x ";
            out << "Z" << factors[i];
        }
        return out.str();
    }
};

// ------------------------------------------------------------------
// Coefficient modules (trivial action)
// ------------------------------------------------------------------

// The circle coefficients are realized 2-locally (rationals with power-of-2
// denominator mod 1): every group in scope is a 2-group, so the odd part of
// the coefficient module never contributes.
struct Coefficient {
    enum class Kind { Z, Zm, Cx };
    Kind kind = Kind::Z;
    long long m = 0;

    static Coefficient integers() { return {Kind::Z, 0}; }
    static Coefficient zmod(long long m) {
        if (m < 2) throw std::invalid_argument("coefficient: modulus must be at least 2");
        return {Kind::Zm, m};
    }
    static Coefficient circle() { return {Kind::Cx, 0}; }

    static Coefficient parse(const std::string& text) {
        std::string s;
        for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (s == "z") return integers();
        if (s == "cx" || s == "c^x" || s == "qmodz" || s == "qmodz-2local") return circle();
        if (s.size() > 1 && s[0] == 'z') {
            long long m = std::stoll(s.substr(1));
            return zmod(m);
        }
        throw std::invalid_argument("coefficient: unknown kind '" + text + "'");
    }
};

constexpr long long kDefaultCap = 10'000'000;

// ------------------------------------------------------------------
// Normalized bar resolution
// ------------------------------------------------------------------

namespace detail {

inline long long ipow_capped(long long base, int exp, long long cap) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base + 1) return cap + 1;
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}

}  // namespace detail

// Number of nondegenerate n-tuples of nonidentity elements.
inline long long bar_dimension(const FiniteAbelianGroup& g, int n, long long cap = kDefaultCap) {
    if (n < 0) return 0;
    if (n == 0) return 1;
    const long long d = detail::ipow_capped(g.order() - 1, n, cap);
    if (d > cap) throw std::length_error("bar resolution size cap exceeded");
    return d;
}

// Coboundary matrix D_n : C^n(G) -> C^{n+1}(G) on normalized cochains with
// trivial coefficient action. Tuples whose letters multiply to the identity
// drop out (the normalized complex treats degenerate tuples as zero).
inline Mat<long long> bar_boundary(const FiniteAbelianGroup& g, int n,
                                   long long cap = kDefaultCap) {
    if (n < 0) return Mat<long long>(bar_dimension(g, 0, cap), 0);
    const long long letters = g.order() - 1;
    const long long rows = bar_dimension(g, n + 1, cap);
    const long long cols = bar_dimension(g, n, cap);
    if (rows > cap / (cols > 0 ? cols : 1))
        throw std::length_error("bar resolution size cap exceeded");
    Mat<long long> d(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    if (letters == 0) return d;  // trivial group: everything above degree 0 vanishes

    std::vector<long long> tuple(static_cast<std::size_t>(n) + 1);
    for (long long row = 0; row < rows; ++row) {
        long long rem = row;
        for (int i = 0; i <= n; ++i) {
            tuple[static_cast<std::size_t>(i)] = rem % letters + 1;  // element ids 1..N-1
            rem /= letters;
        }
        auto col_index = [&](const std::vector<long long>& t) {
            long long idx = 0;
            for (std::size_t i = t.size(); i-- > 0;) idx = idx * letters + (t[i] - 1);
            return idx;
        };
        std::vector<long long> sub(static_cast<std::size_t>(n));
        // Drop the first letter.
        for (int i = 1; i <= n; ++i)
            sub[static_cast<std::size_t>(i - 1)] = tuple[static_cast<std::size_t>(i)];
        d.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col_index(sub))) += 1;
        // Merge adjacent letters.
        long long sign = -1;
        for (int i = 1; i <= n; ++i) {
            const long long p = g.op(tuple[static_cast<std::size_t>(i - 1)],
                                     tuple[static_cast<std::size_t>(i)]);
            if (p != 0) {
                int k = 0;
                for (int j = 0; j <= n; ++j) {
                    if (j == i - 1) {
                        sub[static_cast<std::size_t>(k++)] = p;
                        ++j;  // skip the merged partner
                    } else {
                        sub[static_cast<std::size_t>(k++)] = tuple[static_cast<std::size_t>(j)];
                    }
                }
                d.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col_index(sub))) +=
                    sign;
            }
            sign = -sign;
        }
        // Drop the last letter.
        for (int i = 0; i < n; ++i)
            sub[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i)];
        d.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col_index(sub))) += sign;
    }
    return d;
}

namespace detail {

// Basis (as matrix columns) of the lattice {f : D f = 0 mod m}.
inline Mat<long long> mod_kernel_lattice(const Mat<long long>& d, long long m) {
    SmithResultLL r = smith_auto(d, /*track_u=*/false);
    Mat<long long> k(d.cols, d.cols);
    for (std::size_t j = 0; j < d.cols; ++j) {
        const long long scale =
            j < r.diag.size() ? m / std::gcd(r.diag[j], m) : 1;
        for (std::size_t i = 0; i < d.cols; ++i) k.at(i, j) = r.v.at(i, j) * scale;
    }
    return k;
}

inline AbelianGroup group_from_presentation(const std::vector<long long>& factors,
                                            int free_rank) {
    if (free_rank != 0)
        throw std::runtime_error("group cohomology: unexpected free summand");
    std::vector<std::int64_t> o(factors.begin(), factors.end());
    return AbelianGroup::from_orders(o);
}

inline AbelianGroup two_primary_part(const AbelianGroup& g) {
    std::vector<std::int64_t> o;
    for (std::int64_t d : g.factors) {
        std::int64_t p = 1;
        while (d % 2 == 0) {
            p *= 2;
            d /= 2;
        }
        if (p > 1) o.push_back(p);
    }
    return AbelianGroup::from_orders(o);
}

}  // namespace detail

// ------------------------------------------------------------------
// Cohomology of G with trivial coefficients
// ------------------------------------------------------------------

inline AbelianGroup cohomology(const FiniteAbelianGroup& g, const Coefficient& coeff, int n,
                               long long cap = kDefaultCap) {
    if (n < 0) throw std::invalid_argument("cohomology: negative degree");

    switch (coeff.kind) {
        case Coefficient::Kind::Cx: {
            // Exponential dimension shift: H^n(G; C^x) = H^{n+1}(G; Z) for
            // n >= 1 (the 2-local circle sees the 2-torsion); H^0 is the
            // full coefficient module.
            if (n == 0) return AbelianGroup::symbol("Z(2^inf)");
            return detail::two_primary_part(cohomology(g, Coefficient::integers(), n + 1, cap));
        }
        case Coefficient::Kind::Z: {
            if (n == 0) return AbelianGroup::free(1);
            const Mat<long long> dn = bar_boundary(g, n, cap);
            const Mat<long long> dprev = bar_boundary(g, n - 1, cap);
            const auto kbasis = kernel_lattice(dn);
            Mat<long long> k(dn.cols, kbasis.size());
            for (std::size_t j = 0; j < kbasis.size(); ++j)
                for (std::size_t i = 0; i < dn.cols; ++i) k.at(i, j) = kbasis[j][i];
            const auto x = solve_integer(k, dprev);
            if (!x) throw std::runtime_error("group cohomology: boundary escapes the cocycles");
            const auto [factors, free_rank] = cokernel_presentation(*x);
            return detail::group_from_presentation(factors, free_rank);
        }
        case Coefficient::Kind::Zm: {
            if (n == 0) return AbelianGroup::cyclic(coeff.m);
            const Mat<long long> dn = bar_boundary(g, n, cap);
            const Mat<long long> dprev = bar_boundary(g, n - 1, cap);
            if (coeff.m == 2) {
                // Fast path over F2: the answer is elementary.
                F2Matrix a(dn.rows, dn.cols), b(dprev.rows, dprev.cols);
                for (std::size_t i = 0; i < dn.rows; ++i)
                    for (std::size_t j = 0; j < dn.cols; ++j)
                        if (dn.at(i, j) % 2) a.set(i, j, 1);
                for (std::size_t i = 0; i < dprev.rows; ++i)
                    for (std::size_t j = 0; j < dprev.cols; ++j)
                        if (dprev.at(i, j) % 2) b.set(i, j, 1);
                const int betti =
                    static_cast<int>(dn.cols) - static_cast<int>(a.rank()) -
                    static_cast<int>(b.rank());
                return AbelianGroup::elementary_two_group(betti);
            }
            const Mat<long long> k = detail::mod_kernel_lattice(dn, coeff.m);
            Mat<long long> rel(dn.cols, dprev.cols + dn.cols);
            for (std::size_t i = 0; i < dprev.rows; ++i)
                for (std::size_t j = 0; j < dprev.cols; ++j) rel.at(i, j) = dprev.at(i, j);
            for (std::size_t i = 0; i < dn.cols; ++i) rel.at(i, dprev.cols + i) = coeff.m;
            const auto x = solve_integer(k, rel);
            if (!x) throw std::runtime_error("group cohomology: relations escape the cocycles");
            const auto [factors, free_rank] = cokernel_presentation(*x);
            return detail::group_from_presentation(factors, free_rank);
        }
    }
    throw std::logic_error("cohomology: unhandled coefficient kind");
}

// Independent route to the circle coefficients: H^n(G; C^x) as the stable
// image of H^n(G; Z_{2^k}) -> H^n(G; Z_{2^{2k}}) along the coefficient
// inclusions x -> 2^k x, with 2^k at least |G| so that every torsion exponent
// in sight has saturated. kmax bounds the largest exponent the caller allows.
inline AbelianGroup cohomology_via_colimit(const FiniteAbelianGroup& g, int n, int kmax,
                                           long long cap = kDefaultCap) {
    if (n < 1)
        throw std::invalid_argument("colimit method applies to positive degrees only");
    int k0 = 1;
    while ((1LL << k0) < g.order()) ++k0;
    if (kmax < 2 * k0)
        throw std::invalid_argument("colimit window too small: need exponent at least " +
                                    std::to_string(2 * k0));
    const long long m1 = 1LL << k0;
    const long long m2 = 1LL << (2 * k0);

    const Mat<long long> dn = bar_boundary(g, n, cap);
    const Mat<long long> dprev = bar_boundary(g, n - 1, cap);
    const Mat<long long> k1 = detail::mod_kernel_lattice(dn, m1);
    const Mat<long long> k2 = detail::mod_kernel_lattice(dn, m2);

    // Relations of the target group, in the k2 basis.
    Mat<long long> rel(dn.cols, dprev.cols + dn.cols);
    for (std::size_t i = 0; i < dprev.rows; ++i)
        for (std::size_t j = 0; j < dprev.cols; ++j) rel.at(i, j) = dprev.at(i, j);
    for (std::size_t i = 0; i < dn.cols; ++i) rel.at(i, dprev.cols + i) = m2;
    const auto x2 = solve_integer(k2, rel);

    // Images of the source cocycles under the coefficient inclusion.
    Mat<long long> shifted(k1.rows, k1.cols);
    for (std::size_t i = 0; i < k1.a.size(); ++i) shifted.a[i] = (m2 / m1) * k1.a[i];
    const auto y = solve_integer(k2, shifted);
    if (!x2 || !y) throw std::runtime_error("colimit: inclusion escapes the cocycles");

    // Kernel of the induced map Z^s -> Z^t / relations, then its image type.
    Mat<long long> stacked(y->rows, y->cols + x2->cols);
    for (std::size_t i = 0; i < y->rows; ++i) {
        for (std::size_t j = 0; j < y->cols; ++j) stacked.at(i, j) = y->at(i, j);
        for (std::size_t j = 0; j < x2->cols; ++j)
            stacked.at(i, y->cols + j) = x2->at(i, j);
    }
    const auto ker = kernel_lattice(stacked);
    Mat<long long> proj(y->cols, ker.size());
    for (std::size_t j = 0; j < ker.size(); ++j)
        for (std::size_t i = 0; i < y->cols; ++i) proj.at(i, j) = ker[j][i];
    const auto [factors, free_rank] = cokernel_presentation(proj);
    return detail::group_from_presentation(factors, free_rank);
}

// ------------------------------------------------------------------
// Normalized 2-cocycle representatives with circle values
// ------------------------------------------------------------------

// One representative per class of H^2(K; C^x): for K = prod Z_{d_i} on
// generators e_i, the class is determined by the pairings c_ij in
// Z_{gcd(d_i, d_j)} for i < j, realized by the bilinear cocycle
// alpha(x, y) = sum_{i<j} c_ij x_i y_j / gcd(d_i, d_j) mod 1.
struct TwoCocycle {
    FiniteAbelianGroup group;
    std::vector<long long> pair_coeffs;  // c_ij in row-major i < j order

    QZ value(long long x, long long y) const {
        const auto tx = group.tuple_of(x);
        const auto ty = group.tuple_of(y);
        QZ v = QZ::zero();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < group.factors.size(); ++i)
            for (std::size_t j = i + 1; j < group.factors.size(); ++j) {
                const long long g = std::gcd(group.factors[i], group.factors[j]);
                v = v + QZ(pair_coeffs[idx] * tx[i] * ty[j], g);
                ++idx;
            }
        return v;
    }

    bool is_trivial() const {
        for (long long c : pair_coeffs)
            if (c) return false;
        return true;
    }
};

inline std::vector<TwoCocycle> two_cocycle_classes(const FiniteAbelianGroup& k) {
    if (k.order() > 16)
        throw std::invalid_argument("two_cocycle_classes: group order above the supported bound");
    std::vector<long long> moduli;
    for (std::size_t i = 0; i < k.factors.size(); ++i)
        for (std::size_t j = i + 1; j < k.factors.size(); ++j)
            moduli.push_back(std::gcd(k.factors[i], k.factors[j]));
    std::vector<TwoCocycle> out;
    std::vector<long long> c(moduli.size(), 0);
    for (;;) {
        out.push_back(TwoCocycle{k, c});
        std::size_t p = 0;
        while (p < c.size()) {
            if (++c[p] < moduli[p]) break;
            c[p++] = 0;
        }
        if (p == c.size()) break;
    }
    return out;
}

}  // namespace forge::groupcoh
