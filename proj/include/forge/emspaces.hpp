#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "forge/abelian.hpp"
#include "forge/f2linalg.hpp"
#include "forge/steenrod.hpp"

namespace forge::emspaces {

// ------------------------------------------------------------------
// Space descriptions
// ------------------------------------------------------------------

// One Eilenberg-MacLane factor K(pi, n) with a printable name for its
// fundamental class. Supported: pi = Z2 with n in {1,2,3}, pi = Z with n = 2.
struct Factor {
    enum class Group { Z2, Z };
    Group group = Group::Z2;
    int pi_degree = 2;
    std::string gen_name;
};

struct SpaceDesc {
    std::vector<Factor> factors;

    bool simply_connected() const {
        for (const Factor& f : factors)
            if (f.pi_degree < 2) return false;
        return true;
    }

    std::string to_string() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out << "x";
            const Factor& f = factors[i];
            out << "K(" << (f.group == Factor::Group::Z ? "Z" : "Z2") << "," << f.pi_degree
                << ";" << f.gen_name << ")";
        }
        if (factors.empty()) out << "pt";
        return out.str();
    }

    // Parses "K(Z2,3;E)xK(Z2,2;M)" or "pt". The generator name is optional;
    // defaults are x (n=1), t (Z), M (Z2,2), E (Z2,3).
    static SpaceDesc parse(const std::string& text) {
        SpaceDesc desc;
        std::size_t i = 0;
        auto skip_ws = [&]() {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        skip_ws();
        if (text.compare(i, 2, "pt") == 0) return desc;
        while (i < text.size()) {
            skip_ws();
            if (text.compare(i, 2, "K(") != 0)
                throw std::invalid_argument("space: expected 'K(' in '" + text + "'");
            i += 2;
            Factor f;
            if (text.compare(i, 2, "Z2") == 0) {
                f.group = Factor::Group::Z2;
                i += 2;
            } else if (text.compare(i, 1, "Z") == 0) {
                f.group = Factor::Group::Z;
                i += 1;
            } else {
                throw std::invalid_argument("space: unknown coefficient group in '" + text + "'");
            }
            if (i >= text.size() || text[i] != ',')
                throw std::invalid_argument("space: expected ',' in '" + text + "'");
            ++i;
            f.pi_degree = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                f.pi_degree = f.pi_degree * 10 + (text[i++] - '0');
            if (i < text.size() && text[i] == ';') {
                ++i;
                while (i < text.size() && text[i] != ')') f.gen_name += text[i++];
            }
            if (i >= text.size() || text[i] != ')')
                throw std::invalid_argument("space: expected ')' in '" + text + "'");
            ++i;
            if (f.gen_name.empty()) {
                if (f.group == Factor::Group::Z)
                    f.gen_name = "t";
                else if (f.pi_degree == 1)
                    f.gen_name = "x";
                else if (f.pi_degree == 2)
                    f.gen_name = "M";
                else
                    f.gen_name = "E";
            }
            if (f.group == Factor::Group::Z && f.pi_degree != 2)
                throw std::invalid_argument(
                    "space: integral factors are supported only at degree 2");
            if (f.group == Factor::Group::Z2 && (f.pi_degree < 1 || f.pi_degree > 3))
                throw std::invalid_argument("space: Z2 factors are supported at degrees 1..3");
            desc.factors.push_back(f);
            skip_ws();
            if (i < text.size()) {
                if (text[i] != 'x')
                    throw std::invalid_argument("space: expected 'x' between factors");
                ++i;
            }
        }
        std::set<std::string> names;
        for (const Factor& f : desc.factors)
            if (!names.insert(f.gen_name).second)
                throw std::invalid_argument("space: duplicate generator name " + f.gen_name);
        return desc;
    }
};

// ------------------------------------------------------------------
// Monomial basis of mod-2 cohomology
// ------------------------------------------------------------------

// Multiplicative generator: an admissible squaring word applied to the
// fundamental class of one factor (empty word = the class itself).
struct Generator {
    int factor = 0;
    steenrod::Word word;
    int degree = 0;
    std::string name;
};

// Monomial in the polynomial generators: sorted (generator id, exponent >= 1).
using Monomial = std::vector<std::pair<int, int>>;

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
            r.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first)
            r.push_back(b[j++]);
        else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

inline Monomial monomial_square(const Monomial& m) {
    Monomial r = m;
    for (auto& [g, e] : r) e *= 2;
    return r;
}

// Mod-2 cohomology class: a symmetric-difference set of monomials.
struct ClassElt {
    std::set<Monomial> terms;

    static ClassElt zero() { return {}; }
    static ClassElt one() { return ClassElt{{Monomial{}}}; }

    bool is_zero() const { return terms.empty(); }

    void xor_insert(const Monomial& m) {
        auto it = terms.find(m);
        if (it == terms.end())
            terms.insert(m);
        else
            terms.erase(it);
    }

    friend ClassElt operator+(const ClassElt& a, const ClassElt& b) {
        ClassElt r = a;
        for (const Monomial& m : b.terms) r.xor_insert(m);
        return r;
    }

    friend ClassElt operator*(const ClassElt& a, const ClassElt& b) {
        ClassElt r;
        for (const Monomial& x : a.terms)
            for (const Monomial& y : b.terms) r.xor_insert(monomial_mul(x, y));
        return r;
    }

    ClassElt squared() const {
        ClassElt r;
        for (const Monomial& m : terms) r.xor_insert(monomial_square(m));
        return r;
    }

    friend bool operator==(const ClassElt& a, const ClassElt& b) { return a.terms == b.terms; }
    friend bool operator!=(const ClassElt& a, const ClassElt& b) { return !(a == b); }
};

inline int env_window(int fallback) {
    if (const char* s = std::getenv("FORGE_WINDOW")) {
        const int w = std::atoi(s);
        if (w > 0) return w;
    }
    return fallback;
}

// Default validation window for mod-2 computations.
inline int default_window() { return env_window(12); }

// Circle-coefficient computations are validated only through this degree.
constexpr int kCircleWindow = 7;

// ------------------------------------------------------------------
// Circle-coefficient structures
// ------------------------------------------------------------------

// An order-4 summand of H^n(X; C^x): the mod-2 witness pair. The lower class
// reduces to twice a generator; the upper class (one degree up) is the
// reduction kernel element it produces.
struct PairSummand {
    Monomial lower;
    std::string lower_name;
    std::string upper_name;
};

// H^n(X; C^x) in the validated window: elementary 2-part, order-4 pairs,
// divisible summands, and the kernel of the sign reduction x -> (-1)^x from
// mod-2 cohomology.
struct CxGroup {
    int degree = 0;
    std::vector<Monomial> z2_pivots;
    std::vector<PairSummand> z4;
    std::vector<Monomial> circle_products;
    std::vector<Bitvec> kernel;  // coordinates in the degree-n monomial basis

    AbelianGroup group() const {
        std::vector<std::int64_t> orders;
        for (std::size_t i = 0; i < z2_pivots.size(); ++i) orders.push_back(2);
        for (std::size_t i = 0; i < z4.size(); ++i) orders.push_back(4);
        AbelianGroup g = AbelianGroup::from_orders(orders);
        g.circle_rank = static_cast<int>(circle_products.size());
        return g;
    }
};

// Value of a class (-1)^x in the summand coordinates of a CxGroup: order-2
// coordinates are 0/1, order-4 coordinates land in the image of reduction
// (0 or 2), divisible coordinates are signs (0, or 1 meaning -1).
struct CxValue {
    std::vector<int> z2;
    std::vector<int> z4;
    std::vector<int> circle;

    bool is_zero() const {
        auto all0 = [](const std::vector<int>& v) {
            for (int x : v)
                if (x) return false;
            return true;
        };
        return all0(z2) && all0(z4) && all0(circle);
    }
};

// ------------------------------------------------------------------
// The cohomology engine for one product of Eilenberg-MacLane factors
// ------------------------------------------------------------------

class Space {
  public:
    explicit Space(SpaceDesc desc, int window = -1)
        : desc_(std::move(desc)), window_(window > 0 ? window : default_window()) {
        build_generators();
    }

    static Space parse(const std::string& text, int window = -1) {
        return Space(SpaceDesc::parse(text), window);
    }

    const SpaceDesc& desc() const { return desc_; }
    int window() const { return window_; }
    const std::vector<Generator>& generators() const { return gens_; }

    // ----- basis bookkeeping -----

    const std::vector<Monomial>& basis(int degree) const {
        check_window(degree);
        auto it = basis_cache_.find(degree);
        if (it != basis_cache_.end()) return it->second;
        std::vector<Monomial> out;
        if (degree >= 0) {
            Monomial current;
            enumerate(degree, 0, current, out);
            std::sort(out.begin(), out.end());
        }
        auto pos = basis_cache_.emplace(degree, std::move(out)).first;
        auto& index = index_cache_[degree];
        for (std::size_t k = 0; k < pos->second.size(); ++k) index[pos->second[k]] = k;
        return pos->second;
    }

    int dim(int degree) const {
        if (degree < 0) return 0;
        return static_cast<int>(basis(degree).size());
    }

    int monomial_degree(const Monomial& m) const {
        int d = 0;
        for (auto [g, e] : m) d += gens_[static_cast<std::size_t>(g)].degree * e;
        return d;
    }

    // Homogeneous degree of a class; nullopt for zero, throws when mixed.
    std::optional<int> degree_of(const ClassElt& e) const {
        std::optional<int> d;
        for (const Monomial& m : e.terms) {
            const int md = monomial_degree(m);
            if (d && *d != md) throw std::invalid_argument("class is not homogeneous");
            d = md;
        }
        return d;
    }

    Bitvec to_vector(const ClassElt& e, int degree) const {
        basis(degree);
        const auto& index = index_cache_.at(degree);
        Bitvec v(index.size());
        for (const Monomial& m : e.terms) {
            if (monomial_degree(m) != degree)
                throw std::invalid_argument("to_vector: degree mismatch");
            v.flip(index.at(m));
        }
        return v;
    }

    ClassElt from_vector(const Bitvec& v, int degree) const {
        const auto& b = basis(degree);
        ClassElt e;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (v.get(i)) e.xor_insert(b[i]);
        return e;
    }

    ClassElt fundamental(const std::string& gen_name) const {
        for (std::size_t f = 0; f < desc_.factors.size(); ++f)
            if (desc_.factors[f].gen_name == gen_name) {
                ClassElt e;
                e.xor_insert(Monomial{{gen_index_.at({static_cast<int>(f), {}}), 1}});
                return e;
            }
        throw std::invalid_argument("unknown fundamental class " + gen_name);
    }

    // ----- Steenrod action -----

    // Total squaring action Sq^k on a class, by the Cartan rule over the
    // monomial factorization. Instability (vanishing above the degree, top
    // operation squaring) is a consequence of the evaluation rules.
    ClassElt sq_act(int k, const ClassElt& e) const {
        if (k < 0) throw std::invalid_argument("sq_act: negative operation degree");
        ClassElt r;
        for (const Monomial& m : e.terms) r = r + sq_on_monomial(k, m);
        return r;
    }

    // Matrix of Sq^1 from degree d to degree d+1.
    const F2Matrix& sq1_matrix(int d) const {
        auto it = sq1_cache_.find(d);
        if (it != sq1_cache_.end()) return it->second;
        const auto& src = basis(d);
        F2Matrix m(static_cast<std::size_t>(dim(d + 1)), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            m.set_column(c, to_vector(sq_on_monomial(1, src[c]), d + 1));
        return sq1_cache_.emplace(d, std::move(m)).first->second;
    }

    // ----- names -----

    std::string monomial_name(const Monomial& m) const {
        if (m.empty()) return "1";
        std::ostringstream out;
        bool first = true;
        for (auto [g, e] : m) {
            if (!first) out << "*";
            first = false;
            out << gens_[static_cast<std::size_t>(g)].name;
            if (e > 1) out << "^" << e;
        }
        return out.str();
    }

    std::string class_name(const ClassElt& e) const {
        if (e.is_zero()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const Monomial& m : e.terms) {
            if (!first) out << " + ";
            first = false;
            out << monomial_name(m);
        }
        return out.str();
    }

    std::vector<std::string> basis_names(int degree) const {
        std::vector<std::string> names;
        for (const Monomial& m : basis(degree)) names.push_back(monomial_name(m));
        return names;
    }

    // ----- circle-coefficient cohomology -----

    const CxGroup& cx_group(int n) const {
        if (n < 0) throw std::invalid_argument("cx_group: negative degree");
        if (n > kCircleWindow)
            throw std::out_of_range("circle-coefficient computation requested in degree " +
                                    std::to_string(n) + ", validated only through degree " +
                                    std::to_string(kCircleWindow));
        auto cached = cx_cache_.find(n);
        if (cached != cx_cache_.end()) return cached->second;
        return cx_cache_.emplace(n, compute_cx_group(n)).first->second;
    }

    // Writes the circle-valued class (-1)^e in the summand coordinates of
    // cx_group(n), where e is a mod-2 class of degree n.
    CxValue reduce_class(const ClassElt& e, int n) const {
        const CxGroup& cx = cx_group(n);
        const Bitvec target = to_vector(e, n);
        const std::size_t dim_n = static_cast<std::size_t>(dim(n));

        // Decomposition basis: kernel | order-2 pivots | order-4 lowers | torus.
        std::vector<Bitvec> cols;
        for (const Bitvec& v : cx.kernel) cols.push_back(v);
        const std::size_t z2_at = cols.size();
        for (const Monomial& m : cx.z2_pivots) cols.push_back(unit_vector(m, n));
        const std::size_t z4_at = cols.size();
        for (const PairSummand& p : cx.z4) cols.push_back(unit_vector(p.lower, n));
        const std::size_t circle_at = cols.size();
        for (const Monomial& m : cx.circle_products) cols.push_back(unit_vector(m, n));

        F2Matrix m(dim_n, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
        const auto sol = m.solve(target);
        if (!sol)
            throw std::runtime_error("reduce_class: decomposition failed in degree " +
                                     std::to_string(n) + " (unvalidated window)");

        CxValue value;
        for (std::size_t i = 0; i < cx.z2_pivots.size(); ++i)
            value.z2.push_back(sol->get(z2_at + i) ? 1 : 0);
        for (std::size_t i = 0; i < cx.z4.size(); ++i)
            value.z4.push_back(sol->get(z4_at + i) ? 2 : 0);
        for (std::size_t i = 0; i < cx.circle_products.size(); ++i)
            value.circle.push_back(sol->get(circle_at + i) ? 1 : 0);
        return value;
    }

    // ----- class expressions -----

    // Grammar: expr := term ('+' term)*; term := factor (['*'] factor)*;
    // factor := atom ['^' int]; atom := 'Sq' int atom | name | '(' expr ')'
    // | '1' | '0'. Squaring operations act via sq_act.
    ClassElt parse_class(const std::string& text) const;

    // Restriction along the section that kills the listed fundamental classes:
    // monomials involving any generator of those factors are dropped.
    ClassElt restrict_killing(const ClassElt& e, const std::vector<std::string>& names) const {
        std::set<int> killed;
        for (const auto& nm : names) {
            bool found = false;
            for (std::size_t f = 0; f < desc_.factors.size(); ++f)
                if (desc_.factors[f].gen_name == nm) {
                    killed.insert(static_cast<int>(f));
                    found = true;
                }
            if (!found) throw std::invalid_argument("restrict: unknown generator " + nm);
        }
        ClassElt r;
        for (const Monomial& m : e.terms) {
            bool keep = true;
            for (auto [g, ex] : m)
                if (killed.count(gens_[static_cast<std::size_t>(g)].factor)) keep = false;
            if (keep) r.xor_insert(m);
        }
        return r;
    }

    // Substitution fundamental -> fundamental + delta, extended to the derived
    // generators by naturality of the squaring operations and then
    // multiplicatively (a reparameterization of the corresponding factor).
    ClassElt substitute(const ClassElt& e, const std::string& gen_name,
                        const ClassElt& delta) const {
        int fidx = -1;
        for (std::size_t f = 0; f < desc_.factors.size(); ++f)
            if (desc_.factors[f].gen_name == gen_name) fidx = static_cast<int>(f);
        if (fidx < 0) throw std::invalid_argument("substitute: unknown generator " + gen_name);
        ClassElt out;
        for (const Monomial& m : e.terms) {
            ClassElt term = ClassElt::one();
            for (auto [g, ex] : m) {
                ClassElt base;
                base.xor_insert(Monomial{{g, 1}});
                if (gens_[static_cast<std::size_t>(g)].factor == fidx) {
                    ClassElt image = delta;
                    const steenrod::Word& w = gens_[static_cast<std::size_t>(g)].word;
                    for (auto it = w.rbegin(); it != w.rend(); ++it)
                        image = sq_act(*it, image);
                    base = base + image;
                }
                for (int k = 0; k < ex; ++k) term = term * base;
            }
            out = out + term;
        }
        return out;
    }

  private:
    SpaceDesc desc_;
    int window_;
    std::vector<Generator> gens_;
    std::map<std::pair<int, steenrod::Word>, int> gen_index_;
    mutable std::map<int, std::vector<Monomial>> basis_cache_;
    mutable std::map<int, std::map<Monomial, std::size_t>> index_cache_;
    mutable std::map<int, F2Matrix> sq1_cache_;
    mutable std::map<std::tuple<int, int, int>, ClassElt> power_cache_;
    mutable std::map<int, CxGroup> cx_cache_;

    void check_window(int degree) const {
        if (degree > window_)
            throw std::out_of_range("degree " + std::to_string(degree) +
                                    " exceeds the configured window " + std::to_string(window_));
    }

    Bitvec unit_vector(const Monomial& m, int degree) const {
        basis(degree);
        const auto& index = index_cache_.at(degree);
        Bitvec v(index.size());
        v.set(index.at(m));
        return v;
    }

    // Admissible words of excess < n generate the cohomology of a mod-2
    // factor; integral degree-2 factors contribute the fundamental class only.
    void build_generators() {
        for (std::size_t f = 0; f < desc_.factors.size(); ++f) {
            const Factor& fac = desc_.factors[f];
            push_generator(static_cast<int>(f), {});
            if (fac.group == Factor::Group::Z) continue;
            std::vector<steenrod::Word> frontier{steenrod::Word{}};
            // Grow admissible words on the left; the new exponent must keep the
            // word admissible and its excess below the factor degree.
            while (!frontier.empty()) {
                std::vector<steenrod::Word> next;
                for (const steenrod::Word& w : frontier) {
                    const int rest = steenrod::degree(w);
                    const int lo = w.empty() ? 1 : 2 * w[0];
                    for (int i1 = lo; fac.pi_degree + rest + i1 <= window_; ++i1) {
                        if (i1 - rest >= fac.pi_degree) break;  // excess reached the cap
                        steenrod::Word grown;
                        grown.push_back(i1);
                        grown.insert(grown.end(), w.begin(), w.end());
                        push_generator(static_cast<int>(f), grown);
                        next.push_back(std::move(grown));
                    }
                }
                frontier = std::move(next);
            }
        }
        std::sort(gens_.begin(), gens_.end(), [](const Generator& a, const Generator& b) {
            return std::tie(a.factor, a.degree, a.word) < std::tie(b.factor, b.degree, b.word);
        });
        gen_index_.clear();
        for (std::size_t g = 0; g < gens_.size(); ++g)
            gen_index_[{gens_[g].factor, gens_[g].word}] = static_cast<int>(g);
    }

    void push_generator(int factor, steenrod::Word word) {
        const Factor& fac = desc_.factors[static_cast<std::size_t>(factor)];
        Generator g;
        g.factor = factor;
        g.degree = fac.pi_degree + steenrod::degree(word);
        if (g.degree > window_) return;
        std::ostringstream name;
        for (int i : word) name << "Sq" << i;
        name << fac.gen_name;
        g.name = name.str();
        g.word = std::move(word);
        gens_.push_back(std::move(g));
    }

    void enumerate(int remaining, std::size_t from, Monomial& current,
                   std::vector<Monomial>& out) const {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (std::size_t g = from; g < gens_.size(); ++g) {
            const int d = gens_[g].degree;
            if (d > remaining) continue;
            for (int e = 1; e * d <= remaining; ++e) {
                current.emplace_back(static_cast<int>(g), e);
                enumerate(remaining - e * d, g + 1, current, out);
                current.pop_back();
            }
        }
    }

    // Sq^k on a single generator.
    ClassElt sq_on_generator(int k, int gen_id) const {
        const Generator& gen = gens_[static_cast<std::size_t>(gen_id)];
        const Factor& fac = desc_.factors[static_cast<std::size_t>(gen.factor)];
        ClassElt r;
        if (fac.group == Factor::Group::Z) {
            // Integral degree-2 class: only the identity and the top square act;
            // the odd operation out of it vanishes.
            if (k == 0)
                r.xor_insert(Monomial{{gen_id, 1}});
            else if (k == 2)
                r.xor_insert(Monomial{{gen_id, 2}});
            return r;
        }
        steenrod::Word w;
        if (k > 0) w.push_back(k);
        w.insert(w.end(), gen.word.begin(), gen.word.end());
        for (const steenrod::Word& term : steenrod::adem_reduce(w).terms)
            r = r + evaluate_word(term, gen.factor);
        return r;
    }

    // Evaluates an admissible word on the fundamental class of a mod-2 factor:
    // below-excess words are generators, excess-equal words split off a top
    // square, above-excess words vanish.
    ClassElt evaluate_word(const steenrod::Word& w, int factor) const {
        const int n = desc_.factors[static_cast<std::size_t>(factor)].pi_degree;
        const int ex = steenrod::excess(w);
        ClassElt r;
        if (ex > n) return r;
        if (ex < n) {
            auto it = gen_index_.find({factor, w});
            if (it == gen_index_.end())
                throw std::out_of_range("squaring action leaves the configured window");
            r.xor_insert(Monomial{{it->second, 1}});
            return r;
        }
        steenrod::Word rest(w.begin() + 1, w.end());
        return evaluate_word(rest, factor).squared();
    }

    ClassElt sq_on_power(int k, int gen_id, int e) const {
        if (e == 0) return k == 0 ? ClassElt::one() : ClassElt::zero();
        if (e == 1) return sq_on_generator(k, gen_id);
        const auto key = std::make_tuple(k, gen_id, e);
        auto it = power_cache_.find(key);
        if (it != power_cache_.end()) return it->second;
        ClassElt r;
        const int gdeg = gens_[static_cast<std::size_t>(gen_id)].degree;
        for (int i = 0; i <= k && i <= gdeg; ++i) {
            ClassElt left = sq_on_generator(i, gen_id);
            if (left.is_zero()) continue;
            ClassElt right = sq_on_power(k - i, gen_id, e - 1);
            if (right.is_zero()) continue;
            r = r + left * right;
        }
        return power_cache_.emplace(key, std::move(r)).first->second;
    }

    ClassElt sq_on_monomial(int k, const Monomial& m) const {
        check_window(monomial_degree(m) + k);
        // Cartan convolution across the distinct generator powers.
        std::vector<ClassElt> table(static_cast<std::size_t>(k) + 1);
        table[0] = ClassElt::one();
        for (auto [g, e] : m) {
            std::vector<ClassElt> next(static_cast<std::size_t>(k) + 1);
            for (int total = 0; total <= k; ++total) {
                ClassElt sum;
                for (int i = 0; i <= total; ++i) {
                    const ClassElt& prev = table[static_cast<std::size_t>(total - i)];
                    if (prev.is_zero()) continue;
                    ClassElt part = sq_on_power(i, g, e);
                    if (part.is_zero()) continue;
                    sum = sum + prev * part;
                }
                next[static_cast<std::size_t>(total)] = std::move(sum);
            }
            table = std::move(next);
        }
        return table[static_cast<std::size_t>(k)];
    }

    // Canonical representatives for the Sq^1-homology within the validated
    // window: products of integral-generator powers times at most one pair
    // component (lower M^2 in degree 4, upper Sq2Sq1M + M*Sq1M in degree 5)
    // contributed by a degree-2 mod-2 factor.
    struct Survivor {
        ClassElt cls;
        int kind = 0;  // 0 = torus product, 1 = lower, 2 = upper
        std::string upper_name;
    };

    std::vector<Survivor> canonical_survivors(int degree) const {
        std::vector<int> torus_gens;
        for (std::size_t g = 0; g < gens_.size(); ++g)
            if (desc_.factors[static_cast<std::size_t>(gens_[g].factor)].group ==
                Factor::Group::Z)
                torus_gens.push_back(static_cast<int>(g));

        // All torus products of a fixed degree.
        auto torus_products = [&](int d) {
            std::vector<Monomial> out;
            if (d < 0) return out;
            Monomial cur;
            std::function<void(int, std::size_t)> rec = [&](int rem, std::size_t from) {
                if (rem == 0) {
                    out.push_back(cur);
                    return;
                }
                for (std::size_t i = from; i < torus_gens.size(); ++i) {
                    const int gd = gens_[static_cast<std::size_t>(torus_gens[i])].degree;
                    for (int e = 1; e * gd <= rem; ++e) {
                        cur.emplace_back(torus_gens[i], e);
                        rec(rem - e * gd, i + 1);
                        cur.pop_back();
                    }
                }
            };
            if (d % 2 == 0) rec(d, 0);
            return out;
        };

        std::vector<Survivor> out;
        for (const Monomial& m : torus_products(degree)) {
            Survivor s;
            s.cls.xor_insert(m);
            s.kind = 0;
            out.push_back(std::move(s));
        }
        for (std::size_t f = 0; f < desc_.factors.size(); ++f) {
            const Factor& fac = desc_.factors[f];
            if (fac.group != Factor::Group::Z2 || fac.pi_degree != 2) continue;
            ClassElt fund = fundamental(fac.gen_name);
            const ClassElt lower = fund.squared();
            const ClassElt upper = sq_act(2, sq_act(1, fund)) + fund * sq_act(1, fund);
            for (const Monomial& m : torus_products(degree - 4)) {
                ClassElt t;
                t.xor_insert(m);
                Survivor s;
                s.cls = t * lower;
                s.kind = 1;
                s.upper_name = class_name(t * upper);
                out.push_back(std::move(s));
            }
            for (const Monomial& m : torus_products(degree - 5)) {
                ClassElt t;
                t.xor_insert(m);
                Survivor s;
                s.cls = t * upper;
                s.kind = 2;
                out.push_back(std::move(s));
            }
        }
        return out;
    }

    CxGroup compute_cx_group(int n) const {
        CxGroup out;
        out.degree = n;
        const std::size_t dim_n = static_cast<std::size_t>(dim(n));
        const F2Matrix& sq1_n = sq1_matrix(n);

        Echelon kernel_span(dim_n);
        for (const Bitvec& v : sq1_n.kernel_basis()) kernel_span.insert(v);
        Echelon accounted(dim_n);
        if (n >= 1)
            for (const Bitvec& v : sq1_matrix(n - 1).image_basis()) accounted.insert(v);

        // Order-2 part: one summand per pivot of Sq^1 out of degree n.
        {
            F2Matrix copy = sq1_n;
            for (std::size_t c : copy.rref()) out.z2_pivots.push_back(basis(n)[c]);
        }

        // Canonical survivors must extend the boundaries to a basis of the
        // cocycles; anything else means the window assumptions broke.
        for (const Survivor& s : canonical_survivors(n)) {
            const Bitvec v = to_vector(s.cls, n);
            if (!kernel_span.contains(v))
                throw std::runtime_error(
                    "circle coefficients: canonical representative in degree " +
                    std::to_string(n) + " is not a cocycle (unvalidated window)");
            if (!accounted.insert(v))
                throw std::runtime_error(
                    "circle coefficients: dependent canonical representative in degree " +
                    std::to_string(n) + " (unvalidated window)");
            if (s.kind == 0) {
                out.circle_products.push_back(*s.cls.terms.begin());
            } else if (s.kind == 1) {
                PairSummand ps;
                ps.lower = *s.cls.terms.begin();
                ps.lower_name = monomial_name(ps.lower);
                ps.upper_name = s.upper_name;
                out.z4.push_back(std::move(ps));
            }
        }
        if (accounted.dim() != kernel_span.dim())
            throw std::runtime_error(
                "circle coefficients: canonical representatives do not exhaust degree " +
                std::to_string(n) + " (unvalidated window)");

        // Reduction kernel: boundaries plus the upper-type survivors at n.
        if (n >= 1)
            for (const Bitvec& v : sq1_matrix(n - 1).image_basis()) out.kernel.push_back(v);
        for (const Survivor& s : canonical_survivors(n))
            if (s.kind == 2) out.kernel.push_back(to_vector(s.cls, n));
        return out;
    }
};

// ------------------------------------------------------------------
// Class-expression parsing
// ------------------------------------------------------------------

namespace detail {

struct Lexer {
    std::string text;
    std::size_t i = 0;

    void skip_ws() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= text.size();
    }
    char peek() {
        skip_ws();
        return i < text.size() ? text[i] : '\0';
    }
    bool at_sq() {
        skip_ws();
        return i + 2 < text.size() && text[i] == 'S' && text[i + 1] == 'q' &&
               std::isdigit(static_cast<unsigned char>(text[i + 2]));
    }
    int read_sq() {
        i += 2;
        int k = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            k = k * 10 + (text[i++] - '0');
        return k;
    }
    int read_int() {
        skip_ws();
        int k = 0;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("class expression: expected integer at position " +
                                        std::to_string(i));
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            k = k * 10 + (text[i++] - '0');
        return k;
    }
};

}  // namespace detail

inline ClassElt Space::parse_class(const std::string& text) const {
    detail::Lexer lex{text};

    // Known fundamental names, longest first for greedy matching.
    std::vector<std::string> names;
    for (const Factor& f : desc_.factors) names.push_back(f.gen_name);
    std::sort(names.begin(), names.end(),
              [](const std::string& a, const std::string& b) { return a.size() > b.size(); });

    std::function<ClassElt()> parse_expr;

    std::function<ClassElt()> parse_atom = [&]() -> ClassElt {
        lex.skip_ws();
        if (lex.at_sq()) {
            const int k = lex.read_sq();
            return sq_act(k, parse_atom());
        }
        const char c = lex.peek();
        if (c == '(') {
            ++lex.i;
            ClassElt e = parse_expr();
            lex.skip_ws();
            if (lex.peek() != ')')
                throw std::invalid_argument("class expression: missing ')'");
            ++lex.i;
            return e;
        }
        if (c == '1') {
            ++lex.i;
            return ClassElt::one();
        }
        if (c == '0') {
            ++lex.i;
            return ClassElt::zero();
        }
        for (const std::string& nm : names) {
            if (lex.text.compare(lex.i, nm.size(), nm) == 0) {
                lex.i += nm.size();
                return fundamental(nm);
            }
        }
        throw std::invalid_argument("class expression: unknown token at position " +
                                    std::to_string(lex.i) + " in '" + text + "'");
    };

    auto starts_factor = [&]() {
        const char c = lex.peek();
        if (c == '(' || c == '1' || c == '0') return true;
        if (lex.at_sq()) return true;
        for (const std::string& nm : names)
            if (lex.text.compare(lex.i, nm.size(), nm) == 0) return true;
        return false;
    };

    auto parse_term = [&]() -> ClassElt {
        ClassElt acc = ClassElt::one();
        bool any = false;
        for (;;) {
            lex.skip_ws();
            if (lex.peek() == '*') {
                ++lex.i;
                lex.skip_ws();
            } else if (any && !starts_factor()) {
                break;
            }
            if (!starts_factor())
                throw std::invalid_argument("class expression: expected a factor in '" + text +
                                            "'");
            ClassElt f = parse_atom();
            lex.skip_ws();
            if (lex.peek() == '^') {
                ++lex.i;
                const int e = lex.read_int();
                ClassElt p = ClassElt::one();
                for (int k = 0; k < e; ++k) p = p * f;
                f = p;
            }
            acc = acc * f;
            any = true;
            lex.skip_ws();
            if (lex.done() || lex.peek() == '+' || lex.peek() == ')') break;
        }
        return acc;
    };

    parse_expr = [&]() -> ClassElt {
        ClassElt acc = parse_term();
        for (;;) {
            lex.skip_ws();
            if (lex.peek() != '+') break;
            ++lex.i;
            acc = acc + parse_term();
        }
        return acc;
    };

    ClassElt result = parse_expr();
    if (!lex.done())
        throw std::invalid_argument("class expression: trailing input in '" + text + "'");
    degree_of(result);  // homogeneity check
    return result;
}

}  // namespace forge::emspaces
