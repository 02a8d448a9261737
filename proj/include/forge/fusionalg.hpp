#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forge/groupcoh.hpp"
#include "forge/qz.hpp"

namespace forge::fusionalg {

// ------------------------------------------------------------------
// Pointed braided categories
// ------------------------------------------------------------------
//
// A pointed braided category with finite abelian label group A is captured by
// its quadratic form q: A -> Q/Z, the self-braiding phase of each simple
// label. The full braiding is the polar form b(x,y) = q(xy) - q(x) - q(y),
// and validity demands b be bilinear.

struct PointedBraided {
    groupcoh::FiniteAbelianGroup group;
    std::vector<QZ> q;  // self-braiding phase per element index

    long long order() const { return group.order(); }

    const QZ& q_of(long long x) const { return q[static_cast<std::size_t>(x)]; }

    QZ b(long long x, long long y) const {
        return q_of(group.op(x, y)) - q_of(x) - q_of(y);
    }

    void validate() const {
        const long long n = order();
        if (static_cast<long long>(q.size()) != n)
            throw std::invalid_argument("pointed category: form table does not match the group");
        if (!q[0].is_zero())
            throw std::invalid_argument("pointed category: the unit must have trivial "
                                        "self-braiding");
        for (long long x = 0; x < n; ++x)
            for (long long y = 0; y < n; ++y)
                for (long long z = 0; z < n; ++z)
                    if (b(group.op(x, y), z) != b(x, z) + b(y, z))
                        throw std::invalid_argument(
                            "pointed category: the polar form of q is not bilinear");
    }

    // The label group {1, f, e, fe} with two transparent fermions f, e and
    // the boson fe: the ambient category of the super-order computations.
    static PointedBraided svec_square() {
        PointedBraided cat;
        cat.group = groupcoh::FiniteAbelianGroup::from_orders({2, 2});
        cat.q = {QZ::zero(), QZ::half(), QZ::half(), QZ::zero()};
        return cat;
    }
};

namespace detail {

inline long long element_order(const groupcoh::FiniteAbelianGroup& g, long long x) {
    const auto t = g.tuple_of(x);
    long long ord = 1;
    for (std::size_t i = 0; i < g.factors.size(); ++i)
        ord = std::lcm(ord, g.factors[i] / std::gcd(t[i], g.factors[i]));
    return ord;
}

inline long long power(const groupcoh::FiniteAbelianGroup& g, long long x, long long k) {
    long long acc = 0;
    for (long long i = 0; i < k; ++i) acc = g.op(acc, x);
    return acc;
}

// All invariant-factor chains d1 | d2 | ... with product dividing n.
inline void factor_chains(long long n, long long min_factor, std::vector<long long>& cur,
                          std::vector<std::vector<long long>>& out) {
    out.push_back(cur);
    for (long long d = std::max<long long>(2, min_factor); d <= n; ++d) {
        if (n % d || d % min_factor) continue;
        cur.push_back(d);
        factor_chains(n / d, d, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

// A subgroup of the label group in abstract form: its invariant-factor
// structure together with the embedding of each abstract index into A.
struct Subgroup {
    groupcoh::FiniteAbelianGroup k;
    std::vector<long long> embed;  // embed[abstract index] = element of A
};

// Enumerates every subgroup of the label group, each with a deterministic
// choice of basis, ordered by (order, element set). Found by running over
// injective homomorphisms from abstract candidates, so the invariant factors
// come out right by construction.
inline std::vector<Subgroup> subgroups(const groupcoh::FiniteAbelianGroup& a) {
    const long long n = a.order();
    std::vector<std::vector<long long>> chains;
    std::vector<long long> cur;
    detail::factor_chains(n, 1, cur, chains);

    std::map<std::vector<long long>, Subgroup> found;  // key: sorted image set
    for (const auto& chain : chains) {
        groupcoh::FiniteAbelianGroup k;
        k.factors = chain;
        const std::size_t r = chain.size();
        std::vector<long long> gens(r, 0);
        for (;;) {
            bool orders_ok = true;
            for (std::size_t i = 0; i < r; ++i)
                if (chain[i] % detail::element_order(a, gens[i])) orders_ok = false;
            if (orders_ok) {
                std::vector<long long> embed(static_cast<std::size_t>(k.order()));
                std::vector<long long> image;
                for (long long idx = 0; idx < k.order(); ++idx) {
                    const auto t = k.tuple_of(idx);
                    long long e = 0;
                    for (std::size_t i = 0; i < r; ++i)
                        e = a.op(e, detail::power(a, gens[i], t[i]));
                    embed[static_cast<std::size_t>(idx)] = e;
                    image.push_back(e);
                }
                std::sort(image.begin(), image.end());
                if (std::adjacent_find(image.begin(), image.end()) == image.end())
                    found.emplace(image, Subgroup{k, std::move(embed)});
            }
            std::size_t p = 0;
            while (p < r) {
                if (++gens[p] < n) break;
                gens[p++] = 0;
            }
            if (p == r) break;
        }
    }

    std::vector<std::pair<std::pair<long long, std::vector<long long>>, Subgroup>> rows;
    for (auto& [image, sg] : found)
        rows.push_back({{static_cast<long long>(image.size()), image}, std::move(sg)});
    std::sort(rows.begin(), rows.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Subgroup> out;
    for (auto& row : rows) out.push_back(std::move(row.second));
    return out;
}

// ------------------------------------------------------------------
// Algebra objects and invertibility
// ------------------------------------------------------------------

// A simple algebra object: a subgroup K of the label group together with a
// class of H^2(K; C^x), realized as a twisted group algebra on K.
struct AlgebraObject {
    groupcoh::FiniteAbelianGroup k;
    std::vector<long long> embed;
    groupcoh::TwoCocycle alpha;

    long long order() const { return k.order(); }
};

inline void validate_object(const AlgebraObject& obj, const PointedBraided& cat) {
    const long long m = obj.k.order();
    if (static_cast<long long>(obj.embed.size()) != m || m == 0 || obj.embed[0] != 0)
        throw std::invalid_argument("algebra object: embedding table malformed");
    std::vector<long long> image = obj.embed;
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end())
        throw std::invalid_argument("algebra object: the support is not embedded");
    for (long long x = 0; x < m; ++x) {
        if (obj.embed[static_cast<std::size_t>(x)] < 0 ||
            obj.embed[static_cast<std::size_t>(x)] >= cat.order())
            throw std::invalid_argument("algebra object: support outside the label group");
        for (long long y = 0; y < m; ++y)
            if (obj.embed[static_cast<std::size_t>(obj.k.op(x, y))] !=
                cat.group.op(obj.embed[static_cast<std::size_t>(x)],
                             obj.embed[static_cast<std::size_t>(y)]))
                throw std::invalid_argument("algebra object: the support map is not a "
                                            "homomorphism");
    }
    if (obj.alpha.group.factors != obj.k.factors)
        throw std::invalid_argument("algebra object: malformed cocycle, wrong group");
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < obj.k.factors.size(); ++i)
        for (std::size_t j = i + 1; j < obj.k.factors.size(); ++j) ++pairs;
    if (obj.alpha.pair_coeffs.size() != pairs)
        throw std::invalid_argument("algebra object: malformed cocycle, wrong arity");
}

// All simple algebra objects of the category: every (K, alpha) pair, counted
// by the class-count formula sum over subgroups of |H^2(K; C^x)|.
inline std::vector<AlgebraObject> algebra_objects(const PointedBraided& cat) {
    cat.validate();
    if (cat.order() > 16)
        throw std::invalid_argument("algebra_objects: label group order above the supported "
                                    "bound");
    std::vector<AlgebraObject> out;
    for (const Subgroup& sg : subgroups(cat.group))
        for (const groupcoh::TwoCocycle& alpha : groupcoh::two_cocycle_classes(sg.k))
            out.push_back(AlgebraObject{sg.k, sg.embed, alpha});
    return out;
}

// A bicharacter beta with beta(x, x) = q(x), fixing the braiding phases of
// the skeletal model used by invertibility and by tensor products. It is the
// sum of a parity form and the strict-upper polarization:
//     beta(x, y) = (sum_i x_i p_i)(sum_j y_j p_j)/2 + sum_{i<j} x_i y_j b(g_i, g_j),
// where p_i = 2 q(g_i) in {0, 1} marks fermionic generators. The parity term
// makes two mutually transparent fermions cross with a -1 (the Koszul sign of
// the super world); dropping it would relabel the two full-support cocycle
// classes and decouple the verdicts from the tensor factorizations. The model
// covers exactly the sign-valued forms (every label a boson or a fermion).
struct Bicharacter {
    const PointedBraided* cat;
    std::vector<long long> parity;       // p_i = 2 q(g_i), 0 or 1
    std::vector<std::vector<QZ>> upper;  // b(g_i, g_j) for i < j

    QZ value(long long x, long long y) const {
        const auto tx = cat->group.tuple_of(x);
        const auto ty = cat->group.tuple_of(y);
        long long px = 0, py = 0;
        QZ v = QZ::zero();
        for (std::size_t i = 0; i < tx.size(); ++i) {
            px += tx[i] * parity[i];
            py += ty[i] * parity[i];
            for (std::size_t j = i + 1; j < ty.size(); ++j) v += (tx[i] * ty[j]) * upper[i][j];
        }
        v += (px * py) * QZ::half();
        return v;
    }
};

inline Bicharacter canonical_bicharacter(const PointedBraided& cat) {
    Bicharacter beta;
    beta.cat = &cat;
    const std::size_t r = cat.group.factors.size();
    beta.parity.resize(r);
    beta.upper.assign(r, std::vector<QZ>(r, QZ::zero()));
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<long long> t(r, 0);
        t[i] = 1;
        const long long gi = cat.group.index_of(t);
        const QZ qi = cat.q_of(gi);
        if (qi.is_zero())
            beta.parity[i] = 0;
        else if (qi == QZ::half())
            beta.parity[i] = 1;
        else
            throw std::invalid_argument(
                "canonical_bicharacter: generator self-braidings must be signs (bosons or "
                "fermions); this form is not realizable in the sign-valued model");
        for (std::size_t j = i + 1; j < r; ++j) {
            std::vector<long long> s(r, 0);
            s[j] = 1;
            beta.upper[i][j] = cat.b(gi, cat.group.index_of(s));
        }
    }
    return beta;
}

// Invertibility of the twisted group algebra on (K, alpha): the braiding
// bicharacter twisted by the cocycle commutator,
//     B(x, y) = beta(x, y) + alpha(x, y) - alpha(y, x),
// must be nondegenerate on K. A radical element x has B(x, x) = q(x) = 0, so
// it is automatically a boson, and it is transparent in the module category:
// exactly the etale direction that obstructs invertibility. Fermionic
// elements keep B(x, x) = 1/2 and never enter the radical (Clifford
// directions are harmless). With the Koszul-signed beta, the product of two
// single-fermion lines lands on the full-support class whose generators
// anticommute, and that class is the invertible one; the commuting class
// absorbs the transparent boson fe and fails.
inline bool is_invertible(const AlgebraObject& obj, const PointedBraided& cat) {
    validate_object(obj, cat);
    const Bicharacter beta = canonical_bicharacter(cat);
    const long long m = obj.k.order();
    for (long long x = 1; x < m; ++x) {
        bool radical = true;
        for (long long y = 0; y < m && radical; ++y) {
            const QZ form = beta.value(obj.embed[static_cast<std::size_t>(x)],
                                       obj.embed[static_cast<std::size_t>(y)]) +
                            obj.alpha.value(x, y) - obj.alpha.value(y, x);
            if (!form.is_zero()) radical = false;
        }
        if (radical) return false;
    }
    return true;
}

// ------------------------------------------------------------------
// Braided tensor products of twisted algebras
// ------------------------------------------------------------------
//
// The tensor square of an algebra object is no longer supported on a subgroup
// (the support map acquires a kernel), so products live in a slightly wider
// type: a finite group with a multiplication table, a support map to the
// label group, and an explicit cocycle table. Moving a right factor past a
// left one under multiplication inserts one braiding phase, which requires a
// bicharacter refining q; the canonical one is assembled factor by factor.

struct TwistedAlgebra {
    long long n = 1;
    std::vector<std::vector<long long>> op;
    std::vector<long long> support;
    std::vector<std::vector<QZ>> gamma;
};

inline TwistedAlgebra to_twisted(const AlgebraObject& obj, const PointedBraided& cat) {
    validate_object(obj, cat);
    TwistedAlgebra t;
    t.n = obj.k.order();
    t.op.assign(static_cast<std::size_t>(t.n), std::vector<long long>(t.n));
    t.gamma.assign(static_cast<std::size_t>(t.n),
                   std::vector<QZ>(static_cast<std::size_t>(t.n), QZ::zero()));
    t.support = obj.embed;
    for (long long x = 0; x < t.n; ++x)
        for (long long y = 0; y < t.n; ++y) {
            t.op[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = obj.k.op(x, y);
            t.gamma[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                obj.alpha.value(x, y);
        }
    return t;
}

inline TwistedAlgebra tensor_product(const TwistedAlgebra& lhs, const TwistedAlgebra& rhs,
                                     const PointedBraided& cat) {
    const Bicharacter beta = canonical_bicharacter(cat);
    TwistedAlgebra t;
    t.n = lhs.n * rhs.n;
    t.op.assign(static_cast<std::size_t>(t.n), std::vector<long long>(t.n));
    t.gamma.assign(static_cast<std::size_t>(t.n),
                   std::vector<QZ>(static_cast<std::size_t>(t.n), QZ::zero()));
    t.support.resize(static_cast<std::size_t>(t.n));
    auto split = [&](long long g) { return std::pair<long long, long long>{g % lhs.n, g / lhs.n}; };
    for (long long g = 0; g < t.n; ++g) {
        const auto [g1, g2] = split(g);
        t.support[static_cast<std::size_t>(g)] =
            cat.group.op(lhs.support[static_cast<std::size_t>(g1)],
                         rhs.support[static_cast<std::size_t>(g2)]);
        for (long long h = 0; h < t.n; ++h) {
            const auto [h1, h2] = split(h);
            t.op[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] =
                lhs.op[static_cast<std::size_t>(g1)][static_cast<std::size_t>(h1)] +
                lhs.n * rhs.op[static_cast<std::size_t>(g2)][static_cast<std::size_t>(h2)];
            t.gamma[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] =
                lhs.gamma[static_cast<std::size_t>(g1)][static_cast<std::size_t>(h1)] +
                rhs.gamma[static_cast<std::size_t>(g2)][static_cast<std::size_t>(h2)] +
                beta.value(rhs.support[static_cast<std::size_t>(g2)],
                           lhs.support[static_cast<std::size_t>(h1)]);
        }
    }
    return t;
}

// The same nondegeneracy scan on the wider type. A radical basis element is a
// transparent boson, so finding one soundly refutes invertibility; when the
// support map is injective the scan is exact, and when it has a kernel it is
// a one-sided witness search, which is all the invertible-class group law
// requires.
inline bool is_invertible(const TwistedAlgebra& alg, const PointedBraided& cat) {
    const Bicharacter beta = canonical_bicharacter(cat);
    for (long long g = 1; g < alg.n; ++g) {
        bool radical = true;
        for (long long h = 0; h < alg.n && radical; ++h) {
            const QZ form = beta.value(alg.support[static_cast<std::size_t>(g)],
                                       alg.support[static_cast<std::size_t>(h)]) +
                            alg.gamma[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] -
                            alg.gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)];
            if (!form.is_zero()) radical = false;
        }
        if (radical) return false;
    }
    return true;
}

// ------------------------------------------------------------------
// Clifford parity and the Cheshire fusion square
// ------------------------------------------------------------------

// Morita class of a simple superalgebra: even (a matrix superalgebra) or odd
// (an odd Clifford algebra). Classes add under tensor.
struct SuperAlgebraClass {
    int parity = 0;  // 0 even, 1 odd

    friend SuperAlgebraClass operator+(SuperAlgebraClass a, SuperAlgebraClass b) {
        return {(a.parity + b.parity) % 2};
    }
    friend bool operator==(SuperAlgebraClass a, SuperAlgebraClass b) {
        return a.parity == b.parity;
    }
};

inline SuperAlgebraClass cliff(int n) { return {((n % 2) + 2) % 2}; }

enum class Sector { Bosonic, Fermionic };

struct FusionResult {
    std::vector<std::string> summands;
    std::string note;
};

// The square of the Cheshire string. Bosonic sector: the function algebra
// O(Z2) tensors to the functions on Z2 x Z2, and the diagonal-difference
// splitting (the projections at x = y and x = -y) gives two copies of the
// Cheshire string. Fermionic sector: the Cheshire string is Cliff(1), so its
// square is Cliff(2), a matrix superalgebra, hence Morita trivial.
inline FusionResult cheshire_square(Sector sector) {
    FusionResult r;
    if (sector == Sector::Bosonic) {
        std::vector<std::vector<std::pair<int, int>>> blocks(2);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                blocks[static_cast<std::size_t>((x + y) % 2)].push_back({x, y});
        for (const auto& block : blocks) {
            if (block.size() != 2)
                throw std::logic_error("cheshire_square: diagonal splitting failed");
            r.summands.push_back("c");
        }
        r.note = "O(Z2) x O(Z2) = O(Z2 x Z2); the projections at x = y and x = -y each "
                 "carry one copy of c";
        return r;
    }
    const SuperAlgebraClass square = cliff(1) + cliff(1);
    if (!(square == cliff(0)))
        throw std::logic_error("cheshire_square: Clifford parity failed to cancel");
    r.summands = {"1"};
    r.note = "Cliff(1) x Cliff(1) = Cliff(2) = Mat(1|1), Morita trivial";
    return r;
}

// ------------------------------------------------------------------
// The magnetic-string square
// ------------------------------------------------------------------

struct MSquareResult {
    bool derivable = false;
    std::string conclusion;
    std::string witness;
};

// Fixes m^2 among {1, c}: the self-braiding of m is a particle x with
// x^2 = 1, so the self-braiding of m^2 is x^4 = 1, trivial. Were m^2 the
// Cheshire string, c would inherit a trivial self-braiding — contradicting
// the nontrivial one the Cheshire string carries. The control flag drops
// that input hypothesis, and with it the conclusion.
inline MSquareResult m_square_constraint(const std::string& self_braiding = "1",
                                         bool cheshire_self_braiding_nontrivial = true) {
    if (self_braiding != "1" && self_braiding != "e")
        throw std::invalid_argument("m_square_constraint: the self-braiding of m must be 1 "
                                    "or e, got '" + self_braiding + "'");
    MSquareResult r;
    r.derivable = cheshire_self_braiding_nontrivial;
    r.conclusion = r.derivable ? "m^2 = 1" : "underdetermined: m^2 = 1 or m^2 = c";
    r.witness = "self-braiding of m^2 is x^4 = 1 for x = " + self_braiding;
    r.witness += r.derivable
                     ? "; m^2 = c would force a trivial self-braiding on c, contradicting "
                       "beta_{c,c} = e"
                     : "; with beta_{c,c} = 1 hypothetically trivial, m^2 = c is not excluded";
    return r;
}

// ------------------------------------------------------------------
// The sixteen minimal modular extensions of SVec
// ------------------------------------------------------------------

inline const char* kMmeCitation = "[MR2200691]";

struct MMEEntry {
    int k = 0;                     // index mod 16
    bool ising = false;            // Ising-type iff k odd
    int twice_central_charge = 0;  // 2c, with c = k/2 mod 8
    std::string name;

    std::string central_charge() const {
        if (twice_central_charge % 2 == 0) return std::to_string(twice_central_charge / 2);
        return std::to_string(twice_central_charge) + "/2";
    }
};

// The sixteen minimal modular extensions of the super vector spaces: the
// Spin(k)_1 modular categories for k mod 16, Ising-type exactly at odd k,
// with central charge k/2 mod 8 [MR2200691].
inline std::vector<MMEEntry> mme_table() {
    std::vector<MMEEntry> out;
    for (int k = 0; k < 16; ++k) {
        MMEEntry e;
        e.k = k;
        e.ising = (k % 2) == 1;
        e.twice_central_charge = k;
        e.name = "Spin(" + std::to_string(k) + ")_1";
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace forge::fusionalg
