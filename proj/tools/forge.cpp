// Command-line front end: every engine layer behind one binary.
//
//   steenrod reduce <word>      canonical admissible form of a squares word
//   cohomology                  monomial bases / circle-coefficient groups
//   groupcoh                    finite-group cohomology by bar resolution
//   ahss run                    Atiyah-Hirzebruch charts and abutments
//   classify                    extension classes for a chosen particle
//   discriminate                the S/T separation of a braiding class
//   galois                      descent options and their orbit labels
//   witt-les                    the degree-4 relative group by exactness
//   scan-detectability          undetectable strings of an explicit model
//   fusion algebras             algebra objects in a pointed braided category
//   reproduce                   re-run the frozen results in a manifest
//
// Output is deterministic: identical invocations print identical bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forge/abelian.hpp"
#include "forge/ahss.hpp"
#include "forge/emspaces.hpp"
#include "forge/fusionalg.hpp"
#include "forge/groupcoh.hpp"
#include "forge/qz.hpp"
#include "forge/steenrod.hpp"
#include "forge/twogroups.hpp"

using nlohmann::json;

namespace {

json group_json(const forge::AbelianGroup& g) {
    json j;
    j["pretty"] = g.to_string();
    j["invariant_factors"] = g.factors;
    j["free_rank"] = g.free_rank;
    j["circle_rank"] = g.circle_rank;
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ------------------------------------------------------------------
// steenrod reduce
// ------------------------------------------------------------------

int cmd_steenrod_reduce(const std::vector<std::string>& tokens) {
    std::string text;
    for (const auto& t : tokens) {
        if (!text.empty()) text += " ";
        text += t;
    }
    const forge::steenrod::Word w = forge::steenrod::parse_word(text);
    std::cout << forge::steenrod::adem_reduce(w).to_string() << "\n";
    return 0;
}

// ------------------------------------------------------------------
// cohomology
// ------------------------------------------------------------------

int cmd_cohomology(const std::string& space_expr, const std::string& coeff, int deg, int window) {
    const forge::emspaces::Space sp = forge::emspaces::Space::parse(space_expr, window);
    json j;
    j["space"] = sp.desc().to_string();
    j["degree"] = deg;
    j["coefficients"] = coeff;
    if (coeff == "z2") {
        j["dimension"] = sp.dim(deg);
        j["basis"] = sp.basis_names(deg);
    } else if (coeff == "cx") {
        const forge::emspaces::CxGroup cx = sp.cx_group(deg);
        j["group"] = group_json(cx.group());
        std::vector<std::string> z2names;
        for (const auto& m : cx.z2_pivots) z2names.push_back(sp.monomial_name(m));
        j["order2_generators"] = z2names;
        json z4 = json::array();
        for (const auto& p : cx.z4) z4.push_back({{"lower", p.lower_name}, {"upper", p.upper_name}});
        j["order4_pairs"] = z4;
        std::vector<std::string> circ;
        for (const auto& m : cx.circle_products) circ.push_back(sp.monomial_name(m));
        j["divisible_generators"] = circ;
        std::vector<std::string> kernel;
        for (const auto& v : cx.kernel) kernel.push_back(sp.class_name(sp.from_vector(v, deg)));
        j["reduction_kernel"] = kernel;
    } else {
        std::cerr << "cohomology: --coeff must be z2 or cx\n";
        return 2;
    }
    emit(j);
    return 0;
}

// ------------------------------------------------------------------
// groupcoh
// ------------------------------------------------------------------

int cmd_groupcoh(const std::string& group, const std::string& coeff, int deg, long long cap) {
    const auto g = forge::groupcoh::FiniteAbelianGroup::parse(group);
    const auto c = forge::groupcoh::Coefficient::parse(coeff);
    const forge::AbelianGroup h = forge::groupcoh::cohomology(g, c, deg, cap);
    json j;
    j["group"] = g.to_string();
    j["coefficients"] = coeff;
    j["degree"] = deg;
    j["cohomology"] = group_json(h);
    emit(j);
    return 0;
}

// ------------------------------------------------------------------
// ahss run
// ------------------------------------------------------------------

json abutment_json(const forge::ahss::Abutment& ab) {
    json j;
    j["degree"] = ab.degree;
    j["status"] = ab.status_string();
    if (ab.status != forge::ahss::Abutment::Status::Unresolved) j["group"] = ab.group.to_string();
    if (!ab.citation.empty()) j["citation"] = ab.citation;
    json pieces = json::array();
    for (const auto& p : ab.pieces) pieces.push_back({{"i", p.i}, {"j", p.j}, {"entry", p.entry}});
    j["pieces"] = pieces;
    if (!ab.notes.empty()) j["notes"] = ab.notes;
    return j;
}

int cmd_ahss_run(const std::string& spectrum, const std::string& base, const std::string& twist,
                 int window, const std::string& d5_case, const std::string& page_token,
                 bool as_json) {
    forge::ahss::RunParams p;
    p.spectrum = spectrum;
    p.base = base;
    p.twist = (twist == "none") ? "" : twist;
    p.window = window;
    p.d5_case = d5_case;
    const forge::ahss::Run run(p);

    int page = 0;
    if (page_token == "2") page = 2;
    else if (page_token == "3") page = 3;
    else if (page_token == "inf") page = 0;
    else {
        std::cerr << "ahss run: --emit-page must be 2, 3 or inf\n";
        return 2;
    }

    if (!as_json) {
        std::cout << run.page_text(page);
        std::cout << "abutments:\n";
        for (int n = 0; n <= run.window(); ++n) {
            const auto ab = run.abutment(n);
            std::cout << "  total degree " << n << ": ";
            if (ab.status == forge::ahss::Abutment::Status::Unresolved)
                std::cout << "unresolved";
            else
                std::cout << ab.group.to_string() << " (" << ab.status_string() << ")";
            if (!ab.citation.empty()) std::cout << " " << ab.citation;
            std::cout << "\n";
        }
        return 0;
    }

    json j;
    j["spectrum"] = run.spectrum().name;
    j["base"] = run.base().desc().to_string();
    j["twist"] = run.twisted() ? run.run_params().twist : "none";
    j["window"] = run.window();
    j["page"] = page_token;
    json cells = json::array();
    for (int jj = run.spectrum().top_row(); jj >= 0; --jj)
        for (int i = 0; i <= run.max_built_i(); ++i)
            if (run.built(i, jj))
                cells.push_back({{"i", i}, {"j", jj}, {"entry", run.entry(page, i, jj)}});
    j["cells"] = cells;
    json arrows = json::array();
    for (const auto& a : run.arrows())
        if (page == 0 || a.page == page)
            arrows.push_back({{"page", a.page},
                              {"from", {a.from_i, a.from_j}},
                              {"to", {a.to_i, a.to_j}},
                              {"description", a.description}});
    j["arrows"] = arrows;
    json abuts = json::array();
    for (int n = 0; n <= run.window(); ++n) abuts.push_back(abutment_json(run.abutment(n)));
    j["abutments"] = abuts;
    j["notes"] = run.notes();
    json taints = json::object();
    for (const auto& [degree, reasons] : run.taints()) taints[std::to_string(degree)] = reasons;
    j["unresolved"] = taints;
    emit(j);
    return 0;
}

// ------------------------------------------------------------------
// classify / discriminate
// ------------------------------------------------------------------

int cmd_classify(const std::string& particles) {
    using forge::twogroups::Particle;
    using forge::twogroups::SplittingJustification;
    Particle particle;
    SplittingJustification just;
    if (particles == "boson") {
        particle = Particle::Boson;
        just = SplittingJustification::AnchoredBosonicClaim;
    } else if (particles == "fermion") {
        particle = Particle::Fermion;
        just = SplittingJustification::ComputedMagneticSelfBraiding;
    } else {
        std::cerr << "classify: --particles must be boson or fermion\n";
        return 2;
    }
    const forge::twogroups::Classifier cl;
    const auto exts = cl.enumerate_extensions(particle, just);
    std::cout << "particles: " << particles << "\n";
    if (!exts.empty()) std::cout << "splitting: " << exts[0].splitting_note << "\n";
    std::cout << "classes: " << exts.size() << "\n";
    std::vector<forge::emspaces::ClassElt> alphas;
    for (const auto& e : exts) {
        const auto c = cl.coordinates(e.alpha);
        std::cout << "  (" << c[0] << "," << c[1] << "," << c[2] << ")  " << cl.class_name(e.alpha)
                  << "\n";
        alphas.push_back(e.alpha);
    }
    const auto orbs = cl.orbits(alphas);
    std::cout << "reparameterization orbits: " << orbs.size();
    bool all_fixed = true;
    for (const auto& o : orbs)
        if (o.size() != 1) all_fixed = false;
    if (!orbs.empty()) std::cout << (all_fixed ? " (every class fixed)" : "");
    std::cout << "\n";
    return 0;
}

int cmd_discriminate(const std::string& alpha_expr) {
    const forge::twogroups::Classifier cl;
    forge::twogroups::BraidedTwoGroup g;
    g.particle = forge::twogroups::Particle::Fermion;
    g.alpha = cl.space().parse_class(alpha_expr);
    std::cout << cl.discriminate(g) << "\n";
    return 0;
}

// ------------------------------------------------------------------
// galois / witt-les
// ------------------------------------------------------------------

int cmd_galois(bool exchange, unsigned seed) {
    const auto res = forge::twogroups::galois_options(exchange, seed);
    std::cout << "raw options: " << res.raw_count << "\n";
    std::cout << "orbits: " << res.orbits.size() << "\n";
    for (const auto& o : res.orbits) {
        std::cout << "  " << o.label << ": " << o.options.size()
                  << (o.options.size() == 1 ? " option" : " options");
        for (const auto& opt : o.options)
            std::cout << " (image " << opt.image << ", "
                      << (opt.nontrivial_trivialization ? "twisted" : "plain") << ")";
        if (o.anomalous) std::cout << " anomalous, witness: " << o.witness;
        std::cout << "\n";
    }
    for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
    return 0;
}

int print_witt(const std::string& d5_case) {
    const auto res = forge::twogroups::witt_les(d5_case);
    std::cout << "case " << res.d5_case << ":\n";
    for (const auto& s : res.steps) std::cout << "  " << s << "\n";
    std::cout << "  relative degree-4 group: " << res.want.to_string() << "\n";
    return 0;
}

int cmd_witt(const std::string& d5_case) {
    if (!d5_case.empty()) return print_witt(d5_case);
    print_witt("d5-vanishes");
    print_witt("d5-nonzero");
    const auto a = forge::twogroups::witt_les("d5-vanishes");
    const auto b = forge::twogroups::witt_les("d5-nonzero");
    std::cout << (a.want == b.want ? "the relative group is independent of the case"
                                   : "warning: the two cases disagree")
              << "\n";
    return 0;
}

// ------------------------------------------------------------------
// scan-detectability
// ------------------------------------------------------------------

int cmd_scan(const std::string& model_arg) {
    json spec;
    if (!model_arg.empty() && model_arg.front() == '{') {
        spec = json::parse(model_arg);
    } else {
        std::ifstream in(model_arg);
        if (!in) {
            std::cerr << "scan-detectability: cannot open model file '" << model_arg << "'\n";
            return 2;
        }
        spec = json::parse(in);
    }
    forge::twogroups::InvertibleStringModel m;
    m.strings = forge::groupcoh::FiniteAbelianGroup::from_orders(
        spec.at("orders").get<std::vector<long long>>());
    m.link = spec.at("link").get<std::vector<int>>();
    m.self_braid = spec.at("self_braid").get<std::vector<int>>();
    if (spec.contains("cheshire")) m.cheshire = spec.at("cheshire").get<long long>();
    if (spec.contains("labels")) m.labels = spec.at("labels").get<std::vector<std::string>>();
    const auto flagged = forge::twogroups::detectability_scan(m);
    std::cout << "strings: " << m.strings.to_string() << " (" << m.order() << " elements)\n";
    if (flagged.empty()) {
        std::cout << "undetectable: (none)\n";
    } else {
        std::cout << "undetectable:";
        for (const auto& f : flagged) std::cout << " " << f;
        std::cout << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------
// fusion algebras
// ------------------------------------------------------------------

std::vector<std::string> element_names(const forge::groupcoh::FiniteAbelianGroup& g) {
    std::vector<std::string> names;
    const bool svec_labels = g.factors == std::vector<long long>{2, 2};
    for (long long x = 0; x < g.order(); ++x) {
        if (svec_labels) {
            static const std::array<const char*, 4> tbl = {"1", "f", "e", "fe"};
            names.push_back(tbl[static_cast<std::size_t>(x)]);
            continue;
        }
        if (x == 0) {
            names.push_back("1");
            continue;
        }
        std::ostringstream out;
        const auto t = g.tuple_of(x);
        bool first = true;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] == 0) continue;
            if (!first) out << "*";
            first = false;
            out << "g" << (i + 1);
            if (t[i] > 1) out << "^" << t[i];
        }
        names.push_back(out.str());
    }
    return names;
}

int cmd_fusion_algebras(const std::string& group, const std::string& q_spec, bool as_json) {
    forge::fusionalg::PointedBraided cat;
    cat.group = forge::groupcoh::FiniteAbelianGroup::parse(group);
    cat.q.assign(static_cast<std::size_t>(cat.group.order()), forge::QZ::zero());
    const std::vector<std::string> names = element_names(cat.group);

    if (!q_spec.empty()) {
        std::map<std::string, long long> index;
        for (long long x = 0; x < cat.group.order(); ++x) index[names[static_cast<std::size_t>(x)]] = x;
        std::stringstream ss(q_spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                std::cerr << "fusion algebras: --q entries look like name:+1 or name:-1\n";
                return 2;
            }
            const std::string name = tok.substr(0, colon);
            const auto it = index.find(name);
            if (it == index.end()) {
                std::cerr << "fusion algebras: unknown element '" << name << "'\n";
                return 2;
            }
            cat.q[static_cast<std::size_t>(it->second)] =
                forge::QZ::from_sign_token(tok.substr(colon + 1));
        }
    }
    cat.validate();

    const auto objs = forge::fusionalg::algebra_objects(cat);
    int invertible = 0;
    json rows = json::array();
    for (const auto& obj : objs) {
        const bool inv = forge::fusionalg::is_invertible(obj, cat);
        if (inv) ++invertible;
        std::vector<std::string> support;
        for (long long e : obj.embed) support.push_back(names[static_cast<std::size_t>(e)]);
        rows.push_back({{"support", support},
                        {"cocycle", obj.alpha.is_trivial() ? "trivial" : "nontrivial"},
                        {"invertible", inv}});
    }

    if (as_json) {
        json j;
        j["category"] = cat.group.to_string();
        json qmap = json::object();
        for (long long x = 1; x < cat.group.order(); ++x)
            qmap[names[static_cast<std::size_t>(x)]] =
                cat.q[static_cast<std::size_t>(x)].to_sign_token();
        j["self_braiding"] = qmap;
        j["objects"] = rows;
        j["invertible_count"] = invertible;
        emit(j);
        return 0;
    }

    std::cout << "category: " << cat.group.to_string();
    for (long long x = 1; x < cat.group.order(); ++x)
        std::cout << (x == 1 ? " with " : ", ") << "q(" << names[static_cast<std::size_t>(x)]
                  << ") = " << cat.q[static_cast<std::size_t>(x)].to_sign_token();
    std::cout << "\n";
    std::cout << "objects: " << objs.size() << " (" << invertible << " invertible)\n";
    for (const auto& row : rows) {
        std::string support = "{";
        for (const auto& s : row["support"]) {
            if (support.size() > 1) support += ", ";
            support += s.get<std::string>();
        }
        support += "}";
        std::cout << "  K = " << support << std::string(support.size() < 20 ? 20 - support.size() : 1, ' ')
                  << "cocycle " << row["cocycle"].get<std::string>()
                  << (row["cocycle"].get<std::string>() == "trivial" ? "   " : "")
                  << "  " << (row["invertible"].get<bool>() ? "invertible" : "not invertible")
                  << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------
// reproduce: the frozen-result manifest
// ------------------------------------------------------------------

json compute_degree5_class_group() {
    const forge::twogroups::Classifier cl;
    json j;
    j["group"] = cl.class_group().to_string();
    j["generators"] = {cl.class_name(cl.gen_sq2E()), cl.class_name(cl.gen_EM()),
                       cl.class_name(cl.gen_sq2sq1M())};
    return j;
}

json compute_reparameterization_action() {
    using forge::twogroups::Particle;
    using forge::twogroups::SplittingJustification;
    const forge::twogroups::Classifier cl;
    json j;
    const auto pb = cl.coordinates(cl.pullback(cl.gen_EM()));
    j["pullback_of_EM"] = {pb[0], pb[1], pb[2]};

    const auto boson = cl.enumerate_extensions(Particle::Boson,
                                               SplittingJustification::AnchoredBosonicClaim);
    std::vector<forge::emspaces::ClassElt> balpha;
    for (const auto& e : boson) balpha.push_back(e.alpha);
    j["boson_orbit_count"] = cl.orbits(balpha).size();

    const auto fermion = cl.enumerate_extensions(
        Particle::Fermion, SplittingJustification::ComputedMagneticSelfBraiding);
    std::vector<forge::emspaces::ClassElt> falpha;
    bool fixed = true;
    for (const auto& e : fermion) {
        falpha.push_back(e.alpha);
        if (!cl.same_class(cl.pullback(e.alpha), e.alpha)) fixed = false;
    }
    j["fermion_orbit_count"] = cl.orbits(falpha).size();
    j["fermion_classes_fixed"] = fixed;
    return j;
}

forge::ahss::Run frozen_run(const std::string& spectrum, const std::string& base,
                            const std::string& twist, int window) {
    forge::ahss::RunParams p;
    p.spectrum = spectrum;
    p.base = base;
    p.twist = twist;
    p.window = window;
    return forge::ahss::Run(p);
}

json compute_two_row_window() {
    const auto run = frozen_run("W2ROW", "K(Z2,2;M)", "M", 5);
    json j;
    j["degree4"] = run.abutment(4).group.to_string();
    j["degree4_status"] = run.abutment(4).status_string();
    j["degree5"] = run.abutment(5).group.to_string();
    j["degree5_status"] = run.abutment(5).status_string();
    return j;
}

json compute_super_window() {
    const auto run = frozen_run("SH", "K(Z2,2;M)", "M", 5);
    const auto deg4 = run.abutment(4);
    json j;
    j["degree4_status"] = deg4.status_string();
    j["degree4_group"] = deg4.group.to_string();
    j["degree4_citation"] = deg4.citation;
    std::vector<std::string> pieces;
    for (const auto& p : deg4.pieces) pieces.push_back(p.entry);
    j["degree4_pieces"] = pieces;
    j["degree5_group"] = run.abutment(5).group.to_string();
    j["degree5_status"] = run.abutment(5).status_string();
    j["page2"] = run.page_text(2);
    return j;
}

json compute_magnetic_boson_window() {
    const auto run = frozen_run("SH", "K(Z,2;t)", "t", 5);
    json j;
    bool transgression = false;
    std::string witness;
    for (const auto& a : run.arrows())
        if (a.page == 2 && a.from_i == 4 && a.from_j == 1) {
            transgression = true;
            witness = a.description;
        }
    j["transgression_at_4_1"] = transgression;
    j["transgression_witness"] = witness;
    j["degree5_group"] = run.abutment(5).group.to_string();
    return j;
}

json compute_untwisted_circle_window() {
    const auto run = frozen_run("SH", "K(Z2,1;x)", "", 4);
    json j;
    j["degree4_group"] = run.abutment(4).group.to_string();
    j["degree4_status"] = run.abutment(4).status_string();
    j["page2"] = run.page_text(2);
    return j;
}

json compute_cyclic_group_oracles() {
    using forge::groupcoh::Coefficient;
    const auto z2 = forge::groupcoh::FiniteAbelianGroup::parse("Z2");
    json j;
    j["H3"] = forge::groupcoh::cohomology(z2, Coefficient::circle(), 3).to_string();
    j["H4"] = forge::groupcoh::cohomology(z2, Coefficient::circle(), 4).to_string();
    const auto space = forge::emspaces::Space::parse("K(Z2,1;x)", 8);
    std::vector<int> bar, poly;
    bool agree = true;
    for (int n = 0; n <= 8; ++n) {
        const auto h = forge::groupcoh::cohomology(z2, Coefficient::zmod(2), n);
        bar.push_back(static_cast<int>(h.factors.size()));
        poly.push_back(space.dim(n));
        if (bar.back() != poly.back()) agree = false;
    }
    j["mod2_betti"] = bar;
    j["betti_agree_through_degree_8"] = agree;
    return j;
}

json compute_algebra_object_census() {
    const auto cat = forge::fusionalg::PointedBraided::svec_square();
    const auto objs = forge::fusionalg::algebra_objects(cat);
    const auto names = element_names(cat.group);
    json rows = json::array();
    int invertible = 0;
    for (const auto& obj : objs) {
        const bool inv = forge::fusionalg::is_invertible(obj, cat);
        if (inv) ++invertible;
        std::vector<std::string> support;
        for (long long e : obj.embed) support.push_back(names[static_cast<std::size_t>(e)]);
        rows.push_back({{"support", support},
                        {"cocycle", obj.alpha.is_trivial() ? "trivial" : "nontrivial"},
                        {"invertible", inv}});
    }
    json j;
    j["count"] = objs.size();
    j["invertible_count"] = invertible;
    j["objects"] = rows;
    j["cheshire_square_bosonic"] =
        forge::fusionalg::cheshire_square(forge::fusionalg::Sector::Bosonic).summands;
    j["cheshire_square_fermionic"] =
        forge::fusionalg::cheshire_square(forge::fusionalg::Sector::Fermionic).summands;
    const auto msq = forge::fusionalg::m_square_constraint("1");
    j["m_square"] = msq.conclusion;
    j["m_square_derivable"] = msq.derivable;
    return j;
}

json compute_descent_and_detectability() {
    json j;
    const auto gal = forge::twogroups::galois_options();
    j["galois_raw_count"] = gal.raw_count;
    std::vector<std::string> labels, anomalous;
    for (const auto& o : gal.orbits) {
        labels.push_back(o.label);
        if (o.anomalous) anomalous.push_back(o.label);
    }
    j["galois_orbits"] = labels;
    j["galois_anomalous"] = anomalous;

    j["witt_d5_vanishes"] = forge::twogroups::witt_les("d5-vanishes").want.to_string();
    j["witt_d5_nonzero"] = forge::twogroups::witt_les("d5-nonzero").want.to_string();

    const forge::twogroups::Classifier cl;
    const auto fermion = cl.enumerate_extensions(
        forge::twogroups::Particle::Fermion,
        forge::twogroups::SplittingJustification::ComputedMagneticSelfBraiding);
    std::vector<std::string> verdicts;
    bool reparam_stable = true;
    for (const auto& e : fermion) {
        verdicts.push_back(cl.discriminate(e));
        forge::twogroups::BraidedTwoGroup moved = e;
        moved.alpha = cl.pullback(moved.alpha);
        if (cl.discriminate(moved) != verdicts.back()) reparam_stable = false;
    }
    j["discriminate"] = verdicts;
    j["discriminate_separates"] =
        verdicts.size() == 2 && verdicts[0] != verdicts[1];
    j["discriminate_reparameterization_stable"] = reparam_stable;

    const auto sweep = forge::twogroups::detectability_sweep(16);
    j["sweep_groups"] = sweep.groups;
    j["sweep_magnetic_models"] = sweep.magnetic_models;
    j["sweep_flags_exactly_neutral_bosons"] = sweep.holds();
    return j;
}

const std::map<std::string, json (*)()>& computations() {
    static const std::map<std::string, json (*)()> table = {
        {"c02-degree5-class-group", &compute_degree5_class_group},
        {"c03-reparameterization-action", &compute_reparameterization_action},
        {"c04-two-row-window", &compute_two_row_window},
        {"c05-super-window", &compute_super_window},
        {"c06-magnetic-boson-window", &compute_magnetic_boson_window},
        {"c07-untwisted-circle-window", &compute_untwisted_circle_window},
        {"c08-cyclic-group-oracles", &compute_cyclic_group_oracles},
        {"c09-algebra-object-census", &compute_algebra_object_census},
        {"c10-descent-and-detectability", &compute_descent_and_detectability},
    };
    return table;
}

int cmd_reproduce(const std::string& manifest_path, const std::string& only_csv) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "reproduce: cannot open manifest '" << manifest_path << "'\n";
        return 2;
    }
    json mf;
    try {
        mf = json::parse(in);
    } catch (const json::parse_error& e) {
        std::cerr << "reproduce: manifest is not valid JSON: " << e.what() << "\n";
        return 2;
    }
    if (!mf.contains("version") || !mf.contains("entries")) {
        std::cerr << "reproduce: manifest needs 'version' and 'entries'\n";
        return 2;
    }

    std::map<std::string, json> by_id;
    for (const auto& entry : mf["entries"]) {
        const std::string id = entry.at("id").get<std::string>();
        if (computations().find(id) == computations().end()) {
            std::cerr << "reproduce: unknown computation-id '" << id << "'\n";
            return 2;
        }
        if (!by_id.emplace(id, entry).second) {
            std::cerr << "reproduce: duplicate computation-id '" << id << "'\n";
            return 2;
        }
    }

    std::vector<std::string> selected;
    if (only_csv.empty()) {
        for (const auto& [id, entry] : by_id) selected.push_back(id);
    } else {
        std::stringstream ss(only_csv);
        std::string id;
        while (std::getline(ss, id, ',')) {
            if (by_id.find(id) == by_id.end()) {
                std::cerr << "reproduce: unknown computation-id '" << id << "'\n";
                return 2;
            }
            selected.push_back(id);
        }
        std::sort(selected.begin(), selected.end());
        selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    }

    std::cout << "manifest version " << mf["version"] << ": " << by_id.size() << " entries, running "
              << selected.size() << "\n";
    int passed = 0, failed = 0;
    for (const std::string& id : selected) {
        const json& entry = by_id.at(id);
        const json expected = entry.value("expect", json());
        const json computed = computations().at(id)();
        if (computed == expected) {
            ++passed;
            const std::string dump = computed.dump();
            std::cout << "[PASS] " << id;
            if (dump.size() <= 100)
                std::cout << "  " << dump;
            else
                std::cout << "  (value matches expected, " << dump.size() << " bytes)";
            std::cout << "\n";
        } else {
            ++failed;
            std::cout << "[FAIL] " << id << "\n";
            std::cout << "       expected: " << expected.dump() << "\n";
            std::cout << "       computed: " << computed.dump() << "\n";
        }
    }
    std::cout << "reproduce: " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge: cohomological bookkeeping for braided 2-group classification"};
    app.require_subcommand(1);

    // steenrod reduce
    auto* steenrod = app.add_subcommand("steenrod", "Steenrod algebra operations");
    steenrod->require_subcommand(1);
    auto* reduce = steenrod->add_subcommand("reduce", "rewrite a squares word in admissible form");
    std::vector<std::string> word_tokens;
    reduce->add_option("word", word_tokens, "comma- or space-separated superscripts, e.g. 2,2")
        ->required();

    // cohomology
    auto* cohomology = app.add_subcommand("cohomology", "cohomology of a product of the model spaces");
    std::string space_expr;
    std::string coeff = "cx";
    int deg = 0;
    int window = -1;
    cohomology->add_option("--space", space_expr, "e.g. \"K(Z2,3;E)xK(Z2,2;M)\"")->required();
    cohomology->add_option("--coeff", coeff, "z2 or cx (default cx)");
    cohomology->add_option("--deg", deg, "cohomological degree")->required();
    cohomology->add_option("--window", window, "validated degree window (default: FORGE_WINDOW or 12)");

    // groupcoh
    auto* groupcoh = app.add_subcommand("groupcoh", "finite abelian group cohomology");
    std::string gc_group, gc_coeff = "cx";
    int gc_deg = 0;
    long long gc_cap = forge::groupcoh::kDefaultCap;
    groupcoh->add_option("--group", gc_group, "e.g. \"Z2\" or \"Z2xZ4\"")->required();
    groupcoh->add_option("--coeff", gc_coeff, "z, zN or cx (default cx)");
    groupcoh->add_option("--deg", gc_deg, "cohomological degree")->required();
    groupcoh->add_option("--cap", gc_cap, "bar-resolution size cap");

    // ahss run
    auto* ahss = app.add_subcommand("ahss", "Atiyah-Hirzebruch spectral sequences");
    ahss->require_subcommand(1);
    auto* ahss_run = ahss->add_subcommand("run", "build a chart and its abutments");
    std::string spectrum = "SH", base = "K(Z2,2;M)", twist = "none", d5_case, page_token = "2";
    int ahss_window = forge::emspaces::env_window(5);
    bool ahss_json = false;
    ahss_run->add_option("--spectrum", spectrum, "SH, W2ROW, SW or W");
    ahss_run->add_option("--base", base, "base space expression or pt");
    ahss_run->add_option("--twist", twist, "twisting two-form generator name, or none");
    ahss_run->add_option("--window", ahss_window, "total-degree window (default: FORGE_WINDOW or 5)");
    ahss_run->add_option("--case", d5_case, "d5-vanishes or d5-nonzero (SW only)");
    ahss_run->add_option("--emit-page", page_token, "2, 3 or inf (default 2)");
    ahss_run->add_flag("--json", ahss_json, "emit the JSON twin instead of the text table");

    // classify
    auto* classify = app.add_subcommand("classify", "extension classes for a particle type");
    std::string particles;
    classify->add_option("--particles", particles, "boson or fermion")->required();

    // discriminate
    auto* discriminate = app.add_subcommand("discriminate", "S/T verdict for a braiding class");
    std::string alpha_expr;
    discriminate->add_option("--alpha", alpha_expr, "class expression, e.g. \"Sq2 E + E M\"")
        ->required();

    // galois
    auto* galois = app.add_subcommand("galois", "descent options and orbit labels");
    bool no_exchange = false;
    unsigned seed = 0;
    galois->add_flag("--no-exchange", no_exchange, "diagnostic: disable magnetic-string exchange");
    galois->add_option("--seed", seed, "permutation seed for enumeration order");

    // witt-les
    auto* witt = app.add_subcommand("witt-les", "degree-4 relative group from the comparison sequence");
    std::string witt_case;
    witt->add_option("--case", witt_case, "d5-vanishes or d5-nonzero (default: both)");

    // scan-detectability
    auto* scan = app.add_subcommand("scan-detectability", "undetectable strings of a model");
    std::string model_arg;
    scan->add_option("--model", model_arg, "JSON file path or inline JSON object")->required();

    // fusion algebras
    auto* fusion = app.add_subcommand("fusion", "algebra objects in pointed braided categories");
    fusion->require_subcommand(1);
    auto* algebras = fusion->add_subcommand("algebras", "enumerate algebra objects and verdicts");
    std::string fu_group, fu_q;
    bool fu_json = false;
    algebras->add_option("--group", fu_group, "label group, e.g. \"Z2xZ2\"")->required();
    algebras->add_option("--q", fu_q, "self-braidings per element, e.g. \"f:-1,e:-1,fe:+1\"");
    algebras->add_flag("--json", fu_json, "emit JSON instead of the text table");

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "re-run the frozen results in a manifest");
    std::string manifest_path = "data/manifest.json";
    std::string only_csv;
    reproduce->add_option("--manifest", manifest_path, "manifest path (default data/manifest.json)");
    reproduce->add_option("--only", only_csv, "comma-separated computation ids");

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce->parsed()) return cmd_steenrod_reduce(word_tokens);
        if (cohomology->parsed()) return cmd_cohomology(space_expr, coeff, deg, window);
        if (groupcoh->parsed()) return cmd_groupcoh(gc_group, gc_coeff, gc_deg, gc_cap);
        if (ahss_run->parsed())
            return cmd_ahss_run(spectrum, base, twist, ahss_window, d5_case, page_token, ahss_json);
        if (classify->parsed()) return cmd_classify(particles);
        if (discriminate->parsed()) return cmd_discriminate(alpha_expr);
        if (galois->parsed()) return cmd_galois(!no_exchange, seed);
        if (witt->parsed()) return cmd_witt(witt_case);
        if (scan->parsed()) return cmd_scan(model_arg);
        if (algebras->parsed()) return cmd_fusion_algebras(fu_group, fu_q, fu_json);
        if (reproduce->parsed()) return cmd_reproduce(manifest_path, only_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
