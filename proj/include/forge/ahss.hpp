#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forge/abelian.hpp"
#include "forge/emspaces.hpp"
#include "forge/f2linalg.hpp"
#include "forge/snf.hpp"

namespace forge::ahss {

// ------------------------------------------------------------------
// Spectrum descriptions
// ------------------------------------------------------------------
//
// A spectrum here is a short list of point-value rows for a coconnective
// cohomology theory, together with the shape of the differential leaving
// each row on the second page. Row 0 is always the circle C^x; the rows
// above it are either F2 vector spaces (with a Steenrod-type d2), zero,
// or an opaque named group carried symbolically.

enum class RowKind { Circle, ModTwo, Zero, Symbol };

// Form of the d2 leaving a row. SqPlusTwist is X -> Sq^2 X + twist*X,
// sign-exponentiated when it lands in the circle row; TwistOnly drops the
// Steenrod part (a zero k-invariant, twisting only by the cup product).
enum class D2Form { None, SqPlusTwist, TwistOnly };

struct SpectrumRow {
    RowKind kind = RowKind::Zero;
    D2Form d2 = D2Form::None;
    std::string symbol;
};

struct SpectrumSpec {
    std::string name;
    std::vector<SpectrumRow> rows;  // index = j
    int max_window = 6;             // validated total-degree range

    const SpectrumRow& row(int j) const {
        static const SpectrumRow zero_row{};
        if (j < 0 || j >= static_cast<int>(rows.size())) return zero_row;
        return rows[static_cast<std::size_t>(j)];
    }

    int top_row() const { return static_cast<int>(rows.size()) - 1; }

    // Built-in spectra:
    //   SH    — invertible super 2-vector spaces: rows C^x, Z2, Z2.
    //   W2ROW — C^x x Z2[-1]: rows C^x, Z2 with a twist-only d2.
    //   SW    — super Witt theory truncated at degree 5: the SH rows, a zero
    //           row, the symbolic super Witt group, and a zero row above it.
    //   W     — bosonic Witt theory truncated at degree 4: circle, three
    //           zero rows, and the symbolic Witt group.
    static SpectrumSpec named(const std::string& token) {
        SpectrumSpec s;
        s.name = token;
        const SpectrumRow circle{RowKind::Circle, D2Form::None, ""};
        const SpectrumRow sq_row{RowKind::ModTwo, D2Form::SqPlusTwist, ""};
        const SpectrumRow zero{RowKind::Zero, D2Form::None, ""};
        if (token == "SH") {
            s.rows = {circle, sq_row, sq_row};
            s.max_window = 6;
        } else if (token == "W2ROW") {
            s.rows = {circle, SpectrumRow{RowKind::ModTwo, D2Form::TwistOnly, ""}};
            s.max_window = 6;
        } else if (token == "SW") {
            s.rows = {circle, sq_row, sq_row, zero,
                      SpectrumRow{RowKind::Symbol, D2Form::None, "SW"}, zero};
            s.max_window = 5;
        } else if (token == "W") {
            s.rows = {circle, zero, zero, zero,
                      SpectrumRow{RowKind::Symbol, D2Form::None, "W"}};
            s.max_window = 4;
        } else {
            throw std::invalid_argument("ahss: unknown spectrum '" + token + "'");
        }
        return s;
    }
};

// An assertion, backed by a citation, that the differential d_<page> leaving
// bidegree (i, j) vanishes. Differentials past d2 are never derived by the
// engine; they enter only through annotations like this (or the SW d5 case
// switch), and anything left open taints the affected total degrees.
struct Annotation {
    int page = 3;
    int i = 0;
    int j = 0;
    std::string citation;
};

struct RunParams {
    std::string spectrum = "SH";
    std::string base = "K(Z2,2;M)";
    std::string twist;     // generator name; empty or "none" for untwisted
    int window = 5;        // trusted total degree range (abutments 0..window)
    std::string d5_case;   // "", "d5-vanishes", "d5-nonzero" (SW only)
    std::vector<Annotation> annotations;  // extra vanishing assertions
};

// A nonzero differential, recorded for page emission.
struct Arrow {
    int page = 2;
    int from_i = 0, from_j = 0;
    int to_i = 0, to_j = 0;
    std::string description;
};

// ------------------------------------------------------------------
// Cells
// ------------------------------------------------------------------

enum class CellState { Zero, ModTwo, Circle, Symbol, Unknown };

struct Cell {
    CellState state = CellState::Zero;
    int i = 0, j = 0;

    // ModTwo: current-page representatives (independent modulo `dead`,
    // spanning the page), as vectors over the degree-i monomial basis.
    std::vector<Bitvec> reps;
    Echelon dead;

    // Circle: the E2 description plus accumulated relations. Relations are
    // stored twice: as F2 vectors over all summand coordinates (for span
    // tests) and as integer rows over the finite coordinates (for the
    // presentation). The divisible summands are never shrunk by relations
    // of finite order, so the circle rank is carried through unchanged.
    emspaces::CxGroup cx;
    Echelon rel_span;
    std::vector<std::vector<long long>> rels;

    // Symbol / Unknown
    std::string symbol;

    bool is_zero_value() const {
        switch (state) {
            case CellState::Zero: return true;
            case CellState::ModTwo: return reps.empty();
            case CellState::Circle: return group_value().is_trivial();
            default: return false;
        }
    }

    AbelianGroup group_value() const {
        switch (state) {
            case CellState::Zero:
                return AbelianGroup::trivial();
            case CellState::ModTwo:
                return AbelianGroup::elementary_two_group(static_cast<int>(reps.size()));
            case CellState::Symbol:
                return AbelianGroup::symbol(symbol);
            case CellState::Unknown:
                throw std::logic_error("ahss: value of an unknown cell consulted");
            case CellState::Circle:
                break;
        }
        // Finite part: generators are the Z2 pivots then the Z4 pairs;
        // defining relations 2e_i, 4e_j, plus everything the differentials
        // brought in. The divisible part passes through the quotient.
        const std::size_t p = cx.z2_pivots.size(), q = cx.z4.size();
        Mat<long long> pres(p + q, p + q + rels.size());
        for (std::size_t c = 0; c < p; ++c) pres.at(c, c) = 2;
        for (std::size_t c = 0; c < q; ++c) pres.at(p + c, p + c) = 4;
        for (std::size_t r = 0; r < rels.size(); ++r)
            for (std::size_t g = 0; g < p + q; ++g) pres.at(g, p + q + r) = rels[r][g];
        auto [factors, free_rank] = cokernel_presentation(pres);
        AbelianGroup g = AbelianGroup::from_orders(
            std::vector<std::int64_t>(factors.begin(), factors.end()));
        g.free_rank += free_rank;  // always 0 here: 2e_i and 4e_j bound everything
        g.circle_rank = static_cast<int>(cx.circle_products.size());
        return g;
    }

    std::string entry() const {
        switch (state) {
            case CellState::Zero: return "0";
            case CellState::ModTwo: {
                const std::size_t k = reps.size();
                if (k == 0) return "0";
                if (k == 1) return "Z2";
                return "Z2^" + std::to_string(k);
            }
            case CellState::Circle: return group_value().to_string();
            case CellState::Symbol: return symbol;
            case CellState::Unknown: return "?";
        }
        return "?";
    }
};

// ------------------------------------------------------------------
// Abutment ledger
// ------------------------------------------------------------------

struct Piece {
    int i = 0, j = 0;
    AbelianGroup group;
    std::string entry;
};

struct Abutment {
    enum class Status { Resolved, Anchored, Unresolved };

    int degree = 0;
    Status status = Status::Resolved;
    AbelianGroup group;     // meaningful when Resolved or Anchored
    std::string citation;   // Anchored only
    std::vector<Piece> pieces;
    std::vector<std::string> notes;

    std::string status_string() const {
        switch (status) {
            case Status::Resolved: return "resolved";
            case Status::Anchored: return "anchored";
            case Status::Unresolved: return "unresolved";
        }
        return "unresolved";
    }
};

// ------------------------------------------------------------------
// The spectral sequence driver
// ------------------------------------------------------------------

namespace detail {

// Structural name of the base, with generator labels erased, used to key
// anchors and built-in annotations: "K(Z2,2)", "K(Z,2)xK(Z2,2)", "pt".
inline std::string structural_base(const emspaces::SpaceDesc& desc) {
    if (desc.factors.empty()) return "pt";
    std::ostringstream out;
    for (std::size_t k = 0; k < desc.factors.size(); ++k) {
        if (k) out << "x";
        const auto& f = desc.factors[k];
        out << "K(" << (f.group == emspaces::Factor::Group::Z ? "Z" : "Z2") << ","
            << f.pi_degree << ")";
    }
    return out.str();
}

}  // namespace detail

class Run {
  public:
    explicit Run(RunParams params)
        : params_(std::move(params)),
          spectrum_(SpectrumSpec::named(params_.spectrum)),
          base_(emspaces::SpaceDesc::parse(params_.base)) {
        if (params_.window < 0)
            throw std::invalid_argument("ahss: window must be nonnegative");
        if (params_.window > spectrum_.max_window)
            throw std::invalid_argument(
                "ahss: window " + std::to_string(params_.window) +
                " exceeds the validated range for spectrum " + spectrum_.name + " (max " +
                std::to_string(spectrum_.max_window) + ")");
        if (!params_.d5_case.empty() && params_.d5_case != "d5-vanishes" &&
            params_.d5_case != "d5-nonzero")
            throw std::invalid_argument("ahss: unknown case label '" + params_.d5_case + "'");
        if (!params_.d5_case.empty() && spectrum_.name != "SW")
            throw std::invalid_argument(
                "ahss: the d5 case switch applies to the SW spectrum only");

        if (!params_.twist.empty() && params_.twist != "none") {
            twist_ = base_.fundamental(params_.twist);
            if (base_.degree_of(*twist_) != 2)
                throw std::invalid_argument("ahss: twist class " + params_.twist +
                                            " is not of degree 2");
        }

        build_e2();
        apply_d2();
        settle_higher_pages();
    }

    const RunParams& run_params() const { return params_; }
    const emspaces::Space& base() const { return base_; }
    const SpectrumSpec& spectrum() const { return spectrum_; }
    bool twisted() const { return twist_.has_value(); }
    int window() const { return params_.window; }

    bool built(int i, int j) const { return page2_.count({i, j}) > 0; }

    // Pages 2 and 3 are stored snapshots; any other page number means the
    // final page (E_infinity under the recorded annotations and case switch).
    const Cell& cell(int page, int i, int j) const {
        const auto& grid = page == 2 ? page2_ : (page == 3 ? page3_ : final_);
        auto it = grid.find({i, j});
        if (it == grid.end())
            throw std::out_of_range("ahss: cell (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is outside the built window");
        return it->second;
    }

    std::string entry(int page, int i, int j) const { return cell(page, i, j).entry(); }

    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<std::string>& notes() const { return notes_; }
    const std::map<int, std::vector<std::string>>& taints() const { return taints_; }

    Abutment abutment(int n) const {
        if (n < 0 || n > params_.window)
            throw std::invalid_argument("ahss: total degree " + std::to_string(n) +
                                        " is beyond the window " +
                                        std::to_string(params_.window));
        Abutment ab;
        ab.degree = n;

        bool has_unknown = false;
        for (int j = 0; j <= spectrum_.top_row() && j <= n; ++j) {
            const int i = n - j;
            auto it = final_.find({i, j});
            if (it == final_.end()) continue;
            const Cell& c = it->second;
            if (c.state == CellState::Unknown) {
                has_unknown = true;
                ab.pieces.push_back({i, j, AbelianGroup::trivial(), c.entry()});
                continue;
            }
            if (c.is_zero_value()) continue;
            ab.pieces.push_back({i, j, c.group_value(), c.entry()});
        }

        auto taint_it = taints_.find(n);
        if (taint_it != taints_.end() || has_unknown) {
            ab.status = Abutment::Status::Unresolved;
            if (taint_it != taints_.end()) ab.notes = taint_it->second;
            if (has_unknown)
                ab.notes.push_back("a symbolic row contributes an unknown group in this degree");
            return ab;
        }

        if (ab.pieces.empty()) {
            ab.status = Abutment::Status::Resolved;
            ab.group = AbelianGroup::trivial();
            return ab;
        }
        if (ab.pieces.size() == 1) {
            ab.status = Abutment::Status::Resolved;
            ab.group = ab.pieces.front().group;
            return ab;
        }

        // Several filtration pieces: the group extension is not determined by
        // the spectral sequence. Resolve only through the anchor table, with
        // the order bookkeeping |abutment| = product of piece orders checked.
        if (auto anchor = lookup_anchor(n)) {
            bool all_finite = true;
            std::int64_t order = 1;
            for (const Piece& p : ab.pieces) {
                if (!p.group.is_finite()) all_finite = false;
                else order *= p.group.order();
            }
            if (!all_finite || order != anchor->first.order())
                throw std::runtime_error(
                    "ahss: anchored abutment order mismatch in degree " + std::to_string(n));
            ab.status = Abutment::Status::Anchored;
            ab.group = anchor->first;
            ab.citation = anchor->second;
            ab.notes.push_back("order bookkeeping: product of graded pieces = " +
                               std::to_string(order));
            return ab;
        }

        ab.status = Abutment::Status::Unresolved;
        ab.notes.push_back(
            "extension of the graded pieces is not determined by the spectral sequence; "
            "no anchor recorded for this (spectrum, base, degree)");
        return ab;
    }

    // Aligned text rendering of a page, mirroring the usual chart layout:
    // highest row on top, circle row at the bottom, arrows listed below.
    std::string page_text(int page) const {
        std::ostringstream out;
        const std::string label = page == 2 ? "E2" : (page == 3 ? "E3" : "Einf");
        out << label << " page: " << spectrum_.name << " over " << base_.desc().to_string()
            << (twisted() ? ", twist " + params_.twist : ", untwisted") << ", window "
            << params_.window << "\n";
        const int max_i = max_built_i();
        std::size_t width = 4;
        for (const auto& [key, c] : (page == 2 ? page2_ : (page == 3 ? page3_ : final_)))
            width = std::max(width, c.entry().size() + 2);
        for (int j = spectrum_.top_row(); j >= 0; --j) {
            out << "  j=" << j << " |";
            for (int i = 0; i <= max_i; ++i) {
                std::string e = built(i, j) ? entry(page, i, j) : "";
                out << " " << e << std::string(width - e.size(), ' ');
            }
            out << "\n";
        }
        out << "      +" << std::string((width + 1) * static_cast<std::size_t>(max_i + 1), '-')
            << "\n       ";
        for (int i = 0; i <= max_i; ++i) {
            std::string e = "i=" + std::to_string(i);
            out << " " << e << std::string(width - e.size(), ' ');
        }
        out << "\n";
        if (page == 2 && !arrows_.empty()) {
            out << "d2 arrows:\n";
            for (const Arrow& a : arrows_)
                if (a.page == 2)
                    out << "  (" << a.from_i << "," << a.from_j << ") -> (" << a.to_i << ","
                        << a.to_j << "): " << a.description << "\n";
        }
        if (page != 2 && page != 3) {
            for (const std::string& n : notes_) out << "note: " << n << "\n";
            for (const auto& [deg, reasons] : taints_)
                for (const std::string& r : reasons)
                    out << "unresolved at total degree " << deg << ": " << r << "\n";
        }
        return out.str();
    }

    int max_built_i() const {
        int m = 0;
        for (const auto& [key, c] : page2_) m = std::max(m, key.first);
        return m;
    }

  private:
    using Key = std::pair<int, int>;

    RunParams params_;
    SpectrumSpec spectrum_;
    emspaces::Space base_;
    std::optional<emspaces::ClassElt> twist_;

    std::map<Key, Cell> page2_, page3_, final_;
    std::vector<Arrow> arrows_;
    std::vector<std::string> notes_;
    std::map<int, std::vector<std::string>> taints_;

    // ----- E2 -----
    //
    // Cells are built through total degree window+2 (capping the circle row
    // at the validated circle window) so that every differential whose source
    // lies in the trusted range has both endpoints materialised, and the
    // charts extend as far as the figures they are compared against.

    int row_limit(int j) const {
        if (j == 0) return std::min(params_.window + 2, emspaces::kCircleWindow);
        return params_.window + 2 - j;
    }

    void build_e2() {
        for (int j = 0; j <= spectrum_.top_row(); ++j) {
            const SpectrumRow& row = spectrum_.row(j);
            for (int i = 0; i <= row_limit(j); ++i) {
                Cell c;
                c.i = i;
                c.j = j;
                switch (row.kind) {
                    case RowKind::Circle: {
                        c.state = CellState::Circle;
                        c.cx = base_.cx_group(i);
                        const std::size_t bits = c.cx.z2_pivots.size() + c.cx.z4.size() +
                                                 c.cx.circle_products.size();
                        c.rel_span = Echelon(bits);
                        break;
                    }
                    case RowKind::ModTwo: {
                        c.state = CellState::ModTwo;
                        const int d = base_.dim(i);
                        c.dead = Echelon(static_cast<std::size_t>(d));
                        for (int k = 0; k < d; ++k) {
                            Bitvec v(static_cast<std::size_t>(d));
                            v.set(static_cast<std::size_t>(k));
                            c.reps.push_back(std::move(v));
                        }
                        break;
                    }
                    case RowKind::Zero:
                        c.state = CellState::Zero;
                        break;
                    case RowKind::Symbol:
                        if (i == 0) {
                            c.state = CellState::Symbol;
                            c.symbol = row.symbol;
                        } else if (i == 1 && base_.desc().simply_connected()) {
                            c.state = CellState::Zero;
                        } else {
                            c.state = CellState::Unknown;
                        }
                        break;
                }
                page2_.emplace(Key{i, j}, std::move(c));
            }
        }
    }

    // ----- d2 -----

    Bitvec cx_bits(const emspaces::CxValue& v) const {
        Bitvec b(v.z2.size() + v.z4.size() + v.circle.size());
        std::size_t k = 0;
        for (int x : v.z2) b.set(k++, x != 0);
        for (int x : v.z4) b.set(k++, x != 0);
        for (int x : v.circle) b.set(k++, x != 0);
        return b;
    }

    std::vector<long long> cx_finite_row(const emspaces::CxValue& v) const {
        std::vector<long long> row;
        for (int x : v.z2) row.push_back(x);
        for (int x : v.z4) row.push_back(x);
        return row;
    }

    void apply_d2() {
        struct CellMap {
            Key from, to;
            bool into_circle = false;
            std::vector<Bitvec> images;                // ModTwo target
            std::vector<emspaces::CxValue> cx_images;  // Circle target
            std::vector<Bitvec> kernel_reps;
            bool nonzero = false;
            std::string description;
        };
        std::vector<CellMap> maps;

        for (auto& [key, src] : page2_) {
            const auto [i, j] = key;
            if (j == 0) continue;
            const Key tkey{i + 2, j - 1};
            auto tit = page2_.find(tkey);
            if (tit == page2_.end()) continue;  // target beyond the built window
            const Cell& tgt = tit->second;

            if (src.state == CellState::Zero) continue;
            if (src.state == CellState::Symbol || src.state == CellState::Unknown) {
                // Differentials out of a symbolic row are not computable; the
                // built-in spectra place a zero row beneath every symbol row.
                if (!tgt.is_zero_value() && tgt.state != CellState::Unknown)
                    throw std::runtime_error(
                        "ahss: a differential out of the symbolic row at (" +
                        std::to_string(i) + "," + std::to_string(j) + ") would be required");
                continue;
            }
            const D2Form form = spectrum_.row(j).d2;
            if (form == D2Form::None) continue;
            if (src.reps.empty()) continue;

            CellMap m;
            m.from = key;
            m.to = tkey;
            m.into_circle = tgt.state == CellState::Circle;
            std::ostringstream desc;

            const std::size_t nreps = src.reps.size();
            for (std::size_t k = 0; k < nreps; ++k) {
                const emspaces::ClassElt x = base_.from_vector(src.reps[k], i);
                emspaces::ClassElt img;
                if (form == D2Form::SqPlusTwist) {
                    img = base_.sq_act(2, x);
                    if (twist_) img = img + (*twist_) * x;
                } else {
                    if (twist_) img = (*twist_) * x;
                }
                if (m.into_circle) {
                    emspaces::CxValue v = base_.reduce_class(img, i + 2);
                    if (!v.is_zero()) {
                        m.nonzero = true;
                        if (!desc.str().empty()) desc << "; ";
                        desc << base_.class_name(x) << " -> (-1)^{" << base_.class_name(img)
                             << "} != 0";
                    }
                    m.cx_images.push_back(std::move(v));
                } else {
                    Bitvec v = base_.to_vector(img, i + 2);
                    if (!v.is_zero()) {
                        m.nonzero = true;
                        if (!desc.str().empty()) desc << "; ";
                        desc << base_.class_name(x) << " -> " << base_.class_name(img);
                    }
                    m.images.push_back(std::move(v));
                }
            }
            m.description = desc.str();

            // Kernel of the map in source-representative coordinates.
            std::size_t trows = m.into_circle
                                    ? (tgt.cx.z2_pivots.size() + tgt.cx.z4.size() +
                                       tgt.cx.circle_products.size())
                                    : static_cast<std::size_t>(base_.dim(i + 2));
            F2Matrix mat(trows, nreps);
            for (std::size_t k = 0; k < nreps; ++k)
                mat.set_column(k, m.into_circle ? cx_bits(m.cx_images[k]) : m.images[k]);
            for (const Bitvec& comb : mat.kernel_basis()) {
                Bitvec rep(src.reps.front().size());
                for (std::size_t k = 0; k < nreps; ++k)
                    if (comb.get(k)) rep ^= src.reps[k];
                m.kernel_reps.push_back(std::move(rep));
            }

            if (m.nonzero)
                arrows_.push_back({2, i, j, i + 2, j - 1, m.description});
            maps.push_back(std::move(m));
        }

        page3_ = page2_;

        // Restrict every source to the kernel of its outgoing differential,
        // then quotient every target by the incoming image. A cell that is
        // both source and target picks up both adjustments.
        for (const CellMap& m : maps) page3_[m.from].reps = m.kernel_reps;
        for (const CellMap& m : maps) {
            Cell& tgt = page3_[m.to];
            if (m.into_circle) {
                for (std::size_t k = 0; k < m.cx_images.size(); ++k) {
                    const emspaces::CxValue& v = m.cx_images[k];
                    if (v.is_zero()) continue;
                    if (tgt.rel_span.insert(cx_bits(v))) tgt.rels.push_back(cx_finite_row(v));
                }
            } else {
                for (const Bitvec& v : m.images)
                    if (!v.is_zero()) tgt.dead.insert(v);
                Echelon probe = tgt.dead;
                std::vector<Bitvec> kept;
                for (const Bitvec& r : tgt.reps)
                    if (probe.insert(r)) kept.push_back(r);
                tgt.reps = std::move(kept);
            }
        }
    }

    // ----- pages 3 and beyond -----
    //
    // Higher differentials are never derived. Every potential d_r (r >= 3)
    // between nonzero cells in the trusted range must either vanish for
    // positional reasons, carry a citation-backed annotation, or be the SW
    // d5 whose two cases are explicit inputs; anything else taints the
    // source and target total degrees and their abutments report unresolved.

    std::vector<Annotation> active_annotations() const {
        std::vector<Annotation> all = params_.annotations;
        const std::string sbase = detail::structural_base(base_.desc());
        if ((spectrum_.name == "SH" || spectrum_.name == "SW") && twisted() &&
            sbase == "K(Z2,2)") {
            all.push_back({3, 2, 2,
                           "d3 vanishes on (2,2): every class of total degree 4 survives, the "
                           "limit there being the order-16 kernel of the bosonic-to-super Witt "
                           "map [MR3022755, 5.13-5.14]"});
        }
        return all;
    }

    void settle_higher_pages() {
        final_ = page3_;
        const std::vector<Annotation> anns = active_annotations();

        for (const auto& [key, src] : page3_) {
            const auto [i, j] = key;
            if (j < 1 || i + j > params_.window) continue;
            if (src.state == CellState::Unknown) continue;  // handled from the target side
            if (src.is_zero_value()) continue;
            for (int r = 3; r <= j + 1; ++r) {
                const Key tkey{i + r, j - r + 1};
                auto tit = page3_.find(tkey);
                if (tit == page3_.end()) continue;
                const Cell& tgt = tit->second;
                if (tgt.state == CellState::Unknown)
                    throw std::runtime_error(
                        "ahss: potential d" + std::to_string(r) +
                        " into an unknown symbolic entry at (" + std::to_string(tkey.first) +
                        "," + std::to_string(tkey.second) + ")");
                if (tgt.is_zero_value()) continue;

                const auto ann = std::find_if(anns.begin(), anns.end(), [&](const Annotation& a) {
                    return a.page == r && a.i == i && a.j == j;
                });
                if (ann != anns.end()) {
                    notes_.push_back("d" + std::to_string(r) + " (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") -> (" + std::to_string(tkey.first) +
                                     "," + std::to_string(tkey.second) +
                                     ") annotated zero: " + ann->citation);
                    continue;
                }

                if (spectrum_.name == "SW" && r == 5 && i == 0 && j == 4) {
                    if (params_.d5_case == "d5-vanishes") {
                        notes_.push_back(
                            "d5 (0,4) -> (5,0) taken to vanish (case input d5-vanishes)");
                        continue;
                    }
                    if (params_.d5_case == "d5-nonzero") {
                        Cell& victim = final_[tkey];
                        const std::string ventry = victim.entry();
                        arrows_.push_back({5, 0, 4, tkey.first, tkey.second,
                                           src.entry() + " -> " + ventry +
                                               " surjective (case input d5-nonzero)"});
                        victim.state = CellState::Zero;
                        victim.reps.clear();
                        final_[key].symbol =
                            "ker(d5: " + src.entry() + " -> " + ventry + ")";
                        notes_.push_back(
                            "d5 (0,4) -> (5,0) taken surjective (case input d5-nonzero); the "
                            "(5,0) entry dies and the symbolic entry is cut to the kernel");
                        continue;
                    }
                    taint(i + j, "d5 (0,4) -> (5,0) is a two-case input; rerun with an "
                                 "explicit case switch");
                    taint(i + j + 1, "d5 (0,4) -> (5,0) is a two-case input; rerun with an "
                                     "explicit case switch");
                    continue;
                }

                const std::string reason =
                    "potential d" + std::to_string(r) + " (" + std::to_string(i) + "," +
                    std::to_string(j) + ") -> (" + std::to_string(tkey.first) + "," +
                    std::to_string(tkey.second) + ") has no annotation";
                taint(i + j, reason);
                taint(i + j + 1, reason);
            }
        }
    }

    void taint(int degree, const std::string& reason) {
        auto& v = taints_[degree];
        if (std::find(v.begin(), v.end(), reason) == v.end()) v.push_back(reason);
    }

    // Anchor table for extension problems the pages cannot settle: keyed on
    // the spectrum, the structural base, twistedness, and the total degree.
    std::optional<std::pair<AbelianGroup, std::string>> lookup_anchor(int n) const {
        if (spectrum_.name == "SH" && twisted() &&
            detail::structural_base(base_.desc()) == "K(Z2,2)" && n == 4) {
            return std::make_pair(
                AbelianGroup::cyclic(16),
                "Z16 anchored, never computed: the graded pieces only bound the order; the "
                "group is the kernel of the bosonic-to-super Witt map [MR3022755, 5.3] (the "
                "16-fold way; the literature sometimes indexes it by the degree-1 base, the "
                "computation here runs over the degree-2 base and follows the computation)");
        }
        return std::nullopt;
    }
};

}  // namespace forge::ahss
