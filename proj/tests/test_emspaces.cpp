#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "forge/emspaces.hpp"

using forge::AbelianGroup;
using forge::emspaces::ClassElt;
using forge::emspaces::Space;
using forge::emspaces::SpaceDesc;

namespace {

std::vector<int> dims_upto(const Space& sp, int dmax) {
    std::vector<int> out;
    for (int d = 0; d <= dmax; ++d) out.push_back(sp.dim(d));
    return out;
}

std::vector<int> sq1_ranks_upto(const Space& sp, int dmax) {
    std::vector<int> out;
    for (int d = 0; d <= dmax; ++d) {
        forge::F2Matrix m = sp.sq1_matrix(d);
        out.push_back(static_cast<int>(m.rank()));
    }
    return out;
}

// dim of ker(Sq1 at d) / im(Sq1 from d-1).
std::vector<int> sq1_homology(const Space& sp, int dlo, int dhi) {
    std::vector<int> out;
    for (int d = dlo; d <= dhi; ++d) {
        forge::F2Matrix at = sp.sq1_matrix(d);
        forge::F2Matrix below = sp.sq1_matrix(d - 1);
        out.push_back(sp.dim(d) - static_cast<int>(at.rank()) -
                      static_cast<int>(below.rank()));
    }
    return out;
}

std::string group_str(const Space& sp, int n) { return sp.cx_group(n).group().to_string(); }

}  // namespace

TEST_CASE("space descriptions parse and print", "[emspaces]") {
    SpaceDesc d = SpaceDesc::parse("K(Z2,3;E)xK(Z2,2;M)");
    REQUIRE(d.factors.size() == 2);
    REQUIRE(d.factors[0].gen_name == "E");
    REQUIRE(d.factors[0].pi_degree == 3);
    REQUIRE(d.factors[1].gen_name == "M");
    REQUIRE(d.to_string() == "K(Z2,3;E)xK(Z2,2;M)");

    REQUIRE(SpaceDesc::parse("pt").factors.empty());
    REQUIRE(SpaceDesc::parse("K(Z,2)").factors[0].gen_name == "t");
    REQUIRE(SpaceDesc::parse("K(Z2,1)").factors[0].gen_name == "x");
    REQUIRE(SpaceDesc::parse("K(Z2,2)").factors[0].gen_name == "M");
    REQUIRE(SpaceDesc::parse("K(Z2,3)").factors[0].gen_name == "E");
    REQUIRE(SpaceDesc::parse(" K(Z2,2;A) x K(Z2,2;B) ").factors.size() == 2);

    REQUIRE_THROWS_AS(SpaceDesc::parse("K(Z2,4)"), std::invalid_argument);
    REQUIRE_THROWS_AS(SpaceDesc::parse("K(Z,3)"), std::invalid_argument);
    REQUIRE_THROWS_AS(SpaceDesc::parse("K(Z2,2;M)xK(Z2,3;M)"), std::invalid_argument);
    REQUIRE_THROWS_AS(SpaceDesc::parse("K(Z5,2)"), std::invalid_argument);
}

TEST_CASE("mod-2 dimensions of the classifying spaces", "[emspaces]") {
    Space m2(SpaceDesc::parse("K(Z2,2;M)"), 14);
    REQUIRE(dims_upto(m2, 13) ==
            std::vector<int>{1, 0, 1, 1, 1, 2, 2, 2, 3, 4, 4, 5, 6, 6});

    Space e3(SpaceDesc::parse("K(Z2,3;E)"), 14);
    REQUIRE(dims_upto(e3, 13) ==
            std::vector<int>{1, 0, 0, 1, 1, 1, 2, 2, 2, 4, 5, 5, 7, 9});

    Space prod(SpaceDesc::parse("K(Z2,3;E)xK(Z2,2;M)"), 14);
    REQUIRE(dims_upto(prod, 13) ==
            std::vector<int>{1, 0, 1, 2, 2, 4, 6, 7, 11, 17, 21, 29, 41, 52});

    // Kuenneth: the product dimensions are the convolution of the factors.
    for (int d = 0; d <= 13; ++d) {
        int conv = 0;
        for (int a = 0; a <= d; ++a) conv += e3.dim(a) * m2.dim(d - a);
        REQUIRE(prod.dim(d) == conv);
    }

    Space x1(SpaceDesc::parse("K(Z2,1;x)"), 14);
    REQUIRE(dims_upto(x1, 13) == std::vector<int>(14, 1));

    Space t2(SpaceDesc::parse("K(Z,2;t)"), 14);
    REQUIRE(dims_upto(t2, 13) ==
            std::vector<int>{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0});
}

TEST_CASE("Sq1 ranks and homology", "[emspaces]") {
    Space m2(SpaceDesc::parse("K(Z2,2;M)"), 14);
    REQUIRE(sq1_ranks_upto(m2, 13) ==
            std::vector<int>{0, 0, 1, 0, 0, 1, 1, 1, 1, 2, 2, 3, 2, 3});
    REQUIRE(sq1_homology(m2, 1, 12) ==
            std::vector<int>{0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1});

    Space e3(SpaceDesc::parse("K(Z2,3;E)"), 14);
    REQUIRE(sq1_ranks_upto(e3, 13) ==
            std::vector<int>{0, 0, 0, 1, 0, 1, 1, 1, 1, 3, 2, 3, 3, 5});
    REQUIRE(sq1_homology(e3, 1, 11) == std::vector<int>(11, 0));

    Space x1(SpaceDesc::parse("K(Z2,1;x)"), 14);
    REQUIRE(sq1_ranks_upto(x1, 13) ==
            std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1});

    Space t2(SpaceDesc::parse("K(Z,2;t)"), 14);
    REQUIRE(sq1_ranks_upto(t2, 13) == std::vector<int>(14, 0));
}

TEST_CASE("squaring action on fundamental classes", "[emspaces]") {
    Space sp = Space::parse("K(Z2,3;E)xK(Z2,2;M)");
    const ClassElt E = sp.fundamental("E");
    const ClassElt M = sp.fundamental("M");

    REQUIRE(sp.class_name(sp.sq_act(1, M)) == "Sq1M");
    REQUIRE(sp.class_name(sp.sq_act(2, sp.sq_act(1, M))) == "Sq2Sq1M");
    REQUIRE(sp.sq_act(2, M) == M * M);      // top square
    REQUIRE(sp.sq_act(3, M).is_zero());     // instability
    REQUIRE(sp.sq_act(3, E) == E * E);
    REQUIRE(sp.sq_act(4, E).is_zero());
    REQUIRE(sp.sq_act(0, E * M) == E * M);  // identity operation

    // Sq1 Sq2 E = Sq3 E = E^2 via the relations.
    REQUIRE(sp.sq_act(1, sp.sq_act(2, E)) == E * E);

    // Cartan on a product class.
    const ClassElt lhs = sp.sq_act(2, E * M);
    const ClassElt rhs = sp.sq_act(2, E) * M + sp.sq_act(1, E) * sp.sq_act(1, M) +
                         E * sp.sq_act(2, M);
    REQUIRE(lhs == rhs);

    // Sq1 is a derivation.
    const ClassElt d1 = sp.sq_act(1, E * M);
    REQUIRE(d1 == sp.sq_act(1, E) * M + E * sp.sq_act(1, M));
    REQUIRE(sp.sq_act(1, M * M).is_zero());
}

TEST_CASE("squaring powers of a one-dimensional class", "[emspaces]") {
    Space sp(SpaceDesc::parse("K(Z2,1;x)"), 17);
    const ClassElt x = sp.fundamental("x");
    std::vector<ClassElt> pow(18);
    pow[0] = ClassElt::one();
    for (int n = 1; n <= 17; ++n) pow[n] = pow[n - 1] * x;

    // Sq^k x^n = C(n,k) x^{n+k}.
    for (int n = 0; n <= 8; ++n)
        for (int k = 0; k <= n + 1 && n + k <= 17; ++k) {
            const ClassElt got = sp.sq_act(k, pow[static_cast<std::size_t>(n)]);
            if (forge::steenrod::binom_mod2(n, k))
                REQUIRE(got == pow[static_cast<std::size_t>(n + k)]);
            else
                REQUIRE(got.is_zero());
        }
}

TEST_CASE("squaring powers of the degree-two integral class", "[emspaces]") {
    Space sp(SpaceDesc::parse("K(Z,2;t)"), 18);
    const ClassElt t = sp.fundamental("t");
    std::vector<ClassElt> pow(9);
    pow[0] = ClassElt::one();
    for (int n = 1; n <= 8; ++n) pow[n] = pow[n - 1] * t;

    // Odd operations vanish; Sq^{2i} t^k = C(k,i) t^{k+i}.
    for (int k = 1; k <= 5; ++k)
        for (int j = 0; 2 * (k + j) <= 16 && j <= k + 1; ++j) {
            REQUIRE(sp.sq_act(2 * j + 1, pow[static_cast<std::size_t>(k)]).is_zero());
            const ClassElt got = sp.sq_act(2 * j, pow[static_cast<std::size_t>(k)]);
            if (forge::steenrod::binom_mod2(k, j))
                REQUIRE(got == pow[static_cast<std::size_t>(k + j)]);
            else
                REQUIRE(got.is_zero());
        }
}

TEST_CASE("circle coefficients of the double classifying space", "[emspaces]") {
    Space sp = Space::parse("K(Z2,2;M)");
    REQUIRE(group_str(sp, 0) == "Cx");
    REQUIRE(group_str(sp, 1) == "0");
    REQUIRE(group_str(sp, 2) == "Z2");
    REQUIRE(group_str(sp, 3) == "0");
    REQUIRE(group_str(sp, 4) == "Z4");
    REQUIRE(group_str(sp, 5) == "Z2");
    REQUIRE(group_str(sp, 6) == "Z2");
    REQUIRE(group_str(sp, 7) == "Z2");

    const auto& deg4 = sp.cx_group(4);
    REQUIRE(deg4.z4.size() == 1);
    REQUIRE(deg4.z4[0].lower_name == "M^2");
    REQUIRE(deg4.z4[0].upper_name == "M*Sq1M + Sq2Sq1M");

    // The order-4 witness pair: the lower class maps to twice a generator,
    // the upper class is killed by the sign reduction.
    const ClassElt lower = sp.parse_class("M^2");
    auto v4 = sp.reduce_class(lower, 4);
    REQUIRE(v4.z4 == std::vector<int>{2});
    const ClassElt upper = sp.parse_class("Sq2Sq1M + M*Sq1M");
    REQUIRE(sp.reduce_class(upper, 5).is_zero());

    // Degree 5 carries exactly one kernel class.
    REQUIRE(sp.cx_group(5).kernel.size() == 1);
    REQUIRE(sp.cx_group(5).z2_pivots.size() == 1);
}

TEST_CASE("circle coefficients of the triple classifying space", "[emspaces]") {
    Space sp = Space::parse("K(Z2,3;E)");
    REQUIRE(group_str(sp, 0) == "Cx");
    REQUIRE(group_str(sp, 1) == "0");
    REQUIRE(group_str(sp, 2) == "0");
    REQUIRE(group_str(sp, 3) == "Z2");
    REQUIRE(group_str(sp, 4) == "0");
    REQUIRE(group_str(sp, 5) == "Z2");
    REQUIRE(group_str(sp, 6) == "Z2");
    REQUIRE(group_str(sp, 7) == "Z2");

    // The degree-5 summand is generated by the sign class of Sq2 E.
    const auto& deg5 = sp.cx_group(5);
    REQUIRE(deg5.z2_pivots.size() == 1);
    REQUIRE(sp.monomial_name(deg5.z2_pivots[0]) == "Sq2E");
    REQUIRE(deg5.z4.empty());
}

TEST_CASE("circle coefficients of the circle classifying space", "[emspaces]") {
    Space sp = Space::parse("K(Z2,1;x)");
    for (int n = 0; n <= 7; ++n) {
        const std::string expect = n == 0 ? "Cx" : (n % 2 ? "Z2" : "0");
        REQUIRE(group_str(sp, n) == expect);
    }
    // Even positive degrees die entirely under the sign reduction.
    for (int n = 2; n <= 6; n += 2) REQUIRE(sp.cx_group(n).kernel.size() == 1);
    for (int n = 1; n <= 7; n += 2) REQUIRE(sp.cx_group(n).kernel.empty());

    const ClassElt x = sp.fundamental("x");
    REQUIRE(sp.reduce_class(x * x, 2).is_zero());
    REQUIRE(sp.reduce_class(x * x * x, 3).z2 == std::vector<int>{1});
}

TEST_CASE("circle coefficients of the infinite projective space", "[emspaces]") {
    Space sp = Space::parse("K(Z,2;t)");
    for (int n = 0; n <= 7; ++n) REQUIRE(group_str(sp, n) == (n % 2 ? "0" : "Cx"));

    // The sign class of t^k generates a divisible summand and is nontrivial.
    const ClassElt t = sp.fundamental("t");
    REQUIRE(sp.reduce_class(t, 2).circle == std::vector<int>{1});
    REQUIRE(sp.reduce_class(t * t, 4).circle == std::vector<int>{1});
    REQUIRE(sp.reduce_class(ClassElt::zero(), 4).is_zero());
    REQUIRE(sp.cx_group(4).kernel.empty());
}

TEST_CASE("degree-five circle cohomology of the product", "[emspaces]") {
    Space sp = Space::parse("K(Z2,3;E)xK(Z2,2;M)");

    AbelianGroup g5 = sp.cx_group(5).group();
    REQUIRE(g5.factors == std::vector<std::int64_t>{2, 2, 2});
    REQUIRE(g5.circle_rank == 0);

    // The stated generating set reduces to three independent order-2 values.
    const ClassElt a = sp.parse_class("Sq2E");
    const ClassElt b = sp.parse_class("E*M");
    const ClassElt c = sp.parse_class("Sq2Sq1M");
    const auto va = sp.reduce_class(a, 5);
    const auto vb = sp.reduce_class(b, 5);
    const auto vc = sp.reduce_class(c, 5);
    forge::F2Matrix span(3, 3);
    for (int i = 0; i < 3; ++i) {
        span.set(static_cast<std::size_t>(i), 0, va.z2[static_cast<std::size_t>(i)]);
        span.set(static_cast<std::size_t>(i), 1, vb.z2[static_cast<std::size_t>(i)]);
        span.set(static_cast<std::size_t>(i), 2, vc.z2[static_cast<std::size_t>(i)]);
    }
    REQUIRE(span.rank() == 3);

    // The reduction kernel in degree 5 is spanned by one class.
    const auto& cx5 = sp.cx_group(5);
    REQUIRE(cx5.kernel.size() == 1);
    const ClassElt kernel_class = sp.from_vector(cx5.kernel[0], 5);
    REQUIRE(kernel_class == sp.parse_class("Sq2Sq1M + M*Sq1M"));

    // Identified pair: the two names of the kernel class agree after reduction.
    REQUIRE(sp.reduce_class(sp.parse_class("Sq2Sq1M"), 5).z2 ==
            sp.reduce_class(sp.parse_class("M*Sq1M"), 5).z2);

    // Degree 4 is one order-4 summand.
    AbelianGroup g4 = sp.cx_group(4).group();
    REQUIRE(g4.factors == std::vector<std::int64_t>{4});
    REQUIRE(sp.cx_group(4).z4.size() == 1);
    REQUIRE(sp.cx_group(4).kernel.size() == 1);  // the boundary Sq1 E
    REQUIRE(sp.from_vector(sp.cx_group(4).kernel[0], 4) == sp.sq_act(1, sp.fundamental("E")));
}

TEST_CASE("mixed product with an integral factor", "[emspaces]") {
    Space sp = Space::parse("K(Z,2;t)xK(Z2,2;M)");
    // t * Sq1 M is a boundary: it is Sq1(t M).
    const ClassElt t = sp.fundamental("t");
    const ClassElt M = sp.fundamental("M");
    REQUIRE(sp.sq_act(1, t * M) == t * sp.sq_act(1, M));
    REQUIRE(sp.reduce_class(t * sp.sq_act(1, M), 5).is_zero());

    // Divisible summands in low even degrees: 1, t, t^2 paired with M-torsion.
    REQUIRE(sp.cx_group(0).group().to_string() == "Cx");
    REQUIRE(sp.cx_group(2).group().circle_rank == 1);
    REQUIRE(sp.cx_group(2).group().factors == std::vector<std::int64_t>{2});
    REQUIRE(sp.cx_group(4).group().circle_rank == 1);

    // The sign class of t^2 survives in the product as well.
    REQUIRE(!sp.reduce_class(t * t, 4).is_zero());
}

TEST_CASE("class expression parsing", "[emspaces]") {
    Space sp = Space::parse("K(Z2,3;E)xK(Z2,2;M)");
    const ClassElt E = sp.fundamental("E");
    const ClassElt M = sp.fundamental("M");

    REQUIRE(sp.parse_class("E*M") == E * M);
    REQUIRE(sp.parse_class("EM") == E * M);
    REQUIRE(sp.parse_class("E M") == E * M);
    REQUIRE(sp.parse_class("M^3") == M * M * M);
    REQUIRE(sp.parse_class("Sq2E + EM") == sp.sq_act(2, E) + E * M);
    REQUIRE(sp.parse_class("Sq2Sq1M") == sp.sq_act(2, sp.sq_act(1, M)));
    REQUIRE(sp.parse_class("(E + Sq1M)^2") == E * E + sp.sq_act(1, M) * sp.sq_act(1, M));
    REQUIRE(sp.parse_class("Sq2(EM)") == sp.sq_act(2, E * M));
    REQUIRE(sp.parse_class("Sq1M*M") == sp.sq_act(1, M) * M);
    REQUIRE(sp.parse_class("0").is_zero());
    REQUIRE(sp.parse_class("1") == ClassElt::one());
    REQUIRE(sp.parse_class("M^2 + 0") == M * M);

    REQUIRE_THROWS_AS(sp.parse_class("E + M"), std::invalid_argument);   // inhomogeneous
    REQUIRE_THROWS_AS(sp.parse_class("Q"), std::invalid_argument);       // unknown name
    REQUIRE_THROWS_AS(sp.parse_class("(M"), std::invalid_argument);      // unbalanced
    REQUIRE_THROWS_AS(sp.parse_class("M +"), std::invalid_argument);     // dangling
}

TEST_CASE("restriction and reparameterization", "[emspaces]") {
    Space sp = Space::parse("K(Z2,3;E)xK(Z2,2;M)");
    const ClassElt cls = sp.parse_class("Sq2E + EM + Sq2Sq1M");
    REQUIRE(sp.restrict_killing(cls, {"E"}) == sp.parse_class("Sq2Sq1M"));
    REQUIRE(sp.restrict_killing(cls, {"M"}) == sp.parse_class("Sq2E"));
    REQUIRE(sp.restrict_killing(cls, {"E", "M"}).is_zero());
    REQUIRE_THROWS_AS(sp.restrict_killing(cls, {"Q"}), std::invalid_argument);

    // E -> E + Sq1 M acts on derived generators by naturality.
    const ClassElt d = sp.parse_class("Sq1M");
    REQUIRE(sp.substitute(sp.parse_class("E"), "E", d) == sp.parse_class("E + Sq1M"));
    REQUIRE(sp.substitute(sp.parse_class("Sq2E"), "E", d) ==
            sp.parse_class("Sq2E + Sq2Sq1M"));
    REQUIRE(sp.substitute(sp.parse_class("EM"), "E", d) == sp.parse_class("EM + M*Sq1M"));
    // Applying the shift twice undoes it.
    const ClassElt once = sp.substitute(cls, "E", d);
    REQUIRE(sp.substitute(once, "E", d) == cls);
}

TEST_CASE("window guards", "[emspaces]") {
    Space sp(SpaceDesc::parse("K(Z2,2;M)"), 9);
    REQUIRE_THROWS_AS(sp.basis(10), std::out_of_range);
    REQUIRE_THROWS_AS(sp.sq_act(5, sp.parse_class("M^3")), std::out_of_range);
    REQUIRE_THROWS_AS(sp.cx_group(8), std::out_of_range);
    REQUIRE_THROWS_AS(sp.cx_group(-1), std::invalid_argument);
    REQUIRE_THROWS_AS(Space::parse("K(Z2,2)").sq_act(-1, ClassElt::one()),
                      std::invalid_argument);
}

TEST_CASE("point space", "[emspaces]") {
    Space sp = Space::parse("pt");
    REQUIRE(sp.dim(0) == 1);
    for (int d = 1; d <= 7; ++d) REQUIRE(sp.dim(d) == 0);
    REQUIRE(group_str(sp, 0) == "Cx");
    for (int n = 1; n <= 7; ++n) REQUIRE(group_str(sp, n) == "0");
}
