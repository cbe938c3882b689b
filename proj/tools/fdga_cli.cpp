// Command-line driver: weight-spectral-sequence pages, cohomology, minimal
// models, homotopy and splitting checks, decalage tables, homotopy lifting
// and the blow-up Hopf scenario, over .fdga definition files.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fdga/dsl.hpp"
#include "fdga/hopf.hpp"
#include "fdga/lift.hpp"
#include "fdga/minimal_model.hpp"
#include "fdga/spectral.hpp"
#include "fdga/splitting.hpp"

using namespace fdga;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};
struct ParseFailure : std::runtime_error {
    std::vector<dsl::Diagnostic> diagnostics;
    explicit ParseFailure(std::vector<dsl::Diagnostic> d)
        : std::runtime_error("parse failed"), diagnostics(std::move(d)) {}
};
struct CheckFailure : std::runtime_error {
    explicit CheckFailure(const std::string& m) : std::runtime_error(m) {}
};

dsl::DefinitionFile load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw UsageError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    auto res = dsl::parse(os.str());
    if (!res.ok()) throw ParseFailure(std::move(res.diagnostics));
    return *res.file;
}

PresentationPtr pick_algebra(const dsl::DefinitionFile& f, const std::string& name) {
    if (!name.empty()) {
        auto a = f.algebra(name);
        if (!a) throw UsageError("no algebra named '" + name + "' in the input");
        return *a;
    }
    if (f.algebra_order.size() != 1)
        throw UsageError("the input declares " + std::to_string(f.algebra_order.size()) +
                         " algebras; pick one with --algebra");
    return f.algebras.at(f.algebra_order[0]);
}

// FILE or FILE:NAME references for the lift subcommand
std::pair<std::string, std::string> split_ref(const std::string& ref) {
    auto pos = ref.rfind(':');
    if (pos == std::string::npos || ref.find('/', pos) != std::string::npos) return {ref, ""};
    return {ref.substr(0, pos), ref.substr(pos + 1)};
}

json matrix_json(const RatMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

struct Window {
    int pmin, pmax, qmin, qmax;
};

Window parse_window(const std::string& s) {
    Window w;
    if (std::sscanf(s.c_str(), "%d:%d,%d:%d", &w.pmin, &w.pmax, &w.qmin, &w.qmax) != 4)
        throw UsageError("window must be PMIN:PMAX,QMIN:QMAX");
    if (w.pmin > w.pmax || w.qmin > w.qmax) throw UsageError("window bounds are inverted");
    return w;
}

int cmd_pages(const std::string& input, const std::string& algebra, int r, const std::string& window,
              bool as_json) {
    auto f = load_file(input);
    auto a = pick_algebra(f, algebra);
    Window w = parse_window(window);
    int n_lo = std::max(0, w.pmin + w.qmin);
    int n_hi = std::min(a->truncation() - 1, w.pmax + w.qmax);
    if (n_lo > n_hi) throw UsageError("window is empty after clamping to the truncation");
    SpectralPage pg = page(a, r, n_lo, n_hi);

    json cells = json::array();
    std::ostringstream os;
    os << "page r=" << r << " window p=" << w.pmin << ".." << w.pmax << " q=" << w.qmin << ".."
       << w.qmax << "\n";
    for (const auto& [key, cell] : pg.cells) {
        int c = -key.second, q = key.first + key.second;
        if (c < w.pmin || c > w.pmax || q < w.qmin || q > w.qmax) continue;
        os << "E^{" << c << "," << q << "} dim=" << cell.dim;
        json jc{{"p", c}, {"q", q}, {"n", key.first}, {"dim", cell.dim}};
        json reps = json::array();
        for (const auto& rep : cell.reps) reps.push_back(a->element_str(a->from_coords(rep, key.first)));
        jc["representatives"] = reps;
        if (cell.dr.rows() > 0) {
            os << " d_r->E^{" << c + r << "," << q + 1 - r << "} [";
            for (std::size_t i = 0; i < cell.dr.rows(); ++i) {
                os << (i ? ";" : "");
                for (std::size_t j = 0; j < cell.dr.cols(); ++j)
                    os << (j ? "," : "") << rat_str(cell.dr(i, j));
            }
            os << "]";
            jc["d_r"] = {{"target", {c + r, q + 1 - r}}, {"matrix", matrix_json(cell.dr)}};
        }
        os << "\n";
        cells.push_back(jc);
    }
    if (as_json)
        std::cout << json{{"command", "pages"}, {"r", r}, {"cells", cells}}.dump(2) << "\n";
    else
        std::cout << os.str();
    return 0;
}

int cmd_cohomology(const std::string& input, const std::string& algebra, int max_degree, bool as_json) {
    auto f = load_file(input);
    auto a = pick_algebra(f, algebra);
    if (max_degree + 1 > a->truncation())
        throw UsageError("max degree exceeds truncation-1 of the input");
    json degrees = json::array();
    for (int n = 0; n <= max_degree; ++n) {
        auto [dim, reps] = a->cohomology(n);
        if (!as_json) {
            std::cout << "H^" << n << " dim=" << dim;
            if (dim > 0) {
                std::cout << " representatives:";
                for (const auto& rep : reps) std::cout << " [" << a->element_str(rep) << "]";
            }
            std::cout << "\n";
        } else {
            json jreps = json::array();
            for (const auto& rep : reps) jreps.push_back(a->element_str(rep));
            degrees.push_back({{"n", n}, {"dim", dim}, {"representatives", jreps}});
        }
    }
    if (as_json) std::cout << json{{"command", "cohomology"}, {"degrees", degrees}}.dump(2) << "\n";
    return 0;
}

int cmd_minimal_model(const std::string& input, const std::string& algebra, int max_degree,
                      bool as_json) {
    auto f = load_file(input);
    auto a = pick_algebra(f, algebra);
    MinimalModelResult res = minimal_model(a, max_degree);
    json steps = json::array();
    std::ostringstream os;
    for (const auto& step : res.log) {
        os << "degree " << step.degree << ": cone H^" << step.degree << " dim=" << step.cone_dim;
        json jgens = json::array();
        if (!step.gens.empty()) {
            os << " attached:";
            for (auto [wgt, cnt] : step.gens) {
                os << " " << cnt << " gen(s) at weight " << wgt;
                jgens.push_back({{"weight", wgt}, {"count", cnt}});
            }
        }
        os << "\n";
        steps.push_back({{"degree", step.degree}, {"cone_dim", step.cone_dim}, {"attached", jgens}});
    }
    os << "model generators:\n";
    json jmodel = json::array();
    const auto& m = *res.model;
    for (std::size_t i = 0; i < m.n_gens(); ++i) {
        const auto& g = m.generators()[i];
        os << "  " << g.name << " degree " << g.degree << " weight " << g.weight
           << "  d = " << m.element_str(m.gen_differential(i))
           << "  rho = " << res.rho.target->element_str(res.rho.images[i]) << "\n";
        jmodel.push_back({{"name", g.name},
                          {"degree", g.degree},
                          {"weight", g.weight},
                          {"d", m.element_str(m.gen_differential(i))},
                          {"rho", res.rho.target->element_str(res.rho.images[i])}});
    }
    if (as_json)
        std::cout << json{{"command", "minimal-model"}, {"steps", steps}, {"generators", jmodel}}.dump(2)
                  << "\n";
    else
        std::cout << os.str();
    return 0;
}

int cmd_check_homotopy(const std::string& input, const std::string& name, int r, bool as_json) {
    auto f = load_file(input);
    const auto* h = f.homotopy(name);
    if (!h) throw UsageError("no homotopy named '" + name + "' in the input");
    if (r >= 0 && r != h->r)
        throw UsageError("homotopy block declares r=" + std::to_string(h->r) +
                         ", which differs from --r");
    const auto* from = f.morphism(h->from);
    const auto* to = f.morphism(h->to);
    auto viol = check_r_homotopy(h->homotopy, from->morphism, to->morphism);
    if (as_json)
        std::cout << json{{"command", "check-homotopy"},
                          {"homotopy", name},
                          {"r", h->r},
                          {"pass", !viol.has_value()},
                          {"violation", viol ? viol->what : ""}}
                         .dump(2)
                  << "\n";
    else if (viol)
        std::cout << "homotopy " << name << ": FAIL: " << viol->what << "\n";
    else
        std::cout << "homotopy " << name << ": verified (r=" << h->r << ", " << h->from << " ~ "
                  << h->to << ")\n";
    return viol ? 1 : 0;
}

int cmd_check_splitting(const std::string& input, const std::string& name, int r, bool as_json) {
    auto f = load_file(input);
    const auto* b = f.bigrading(name);
    if (!b) throw UsageError("no bigrading named '" + name + "' in the input");
    int effective_r = r >= 0 ? r : b->r;
    auto a = f.algebras.at(b->algebra);
    int top = a->truncation() - 1;
    auto viol = verify_r_splitting(a, b->bigrading, effective_r, top);
    if (as_json)
        std::cout << json{{"command", "check-splitting"},
                          {"bigrading", name},
                          {"r", effective_r},
                          {"pass", !viol.has_value()},
                          {"violation", viol ? viol->what : ""}}
                         .dump(2)
                  << "\n";
    else if (viol)
        std::cout << "bigrading " << name << ": FAIL: " << viol->what << "\n";
    else
        std::cout << "bigrading " << name << ": verified " << effective_r << "-splitting of "
                  << b->algebra << "\n";
    return viol ? 1 : 0;
}

int cmd_decalage(const std::string& input, const std::string& algebra, int max_degree, bool as_json) {
    auto f = load_file(input);
    auto a = pick_algebra(f, algebra);
    int top = max_degree >= 0 ? max_degree : a->truncation();
    if (top > a->truncation()) throw UsageError("max degree exceeds the truncation");
    FilteredComplex fc = complex_of(a, top);
    FilteredComplex dec = decalage(fc);
    json degrees = json::array();
    std::ostringstream os;
    os << "decalage of degrees 0.." << dec.hi() << " (top degree " << top << " dropped)\n";
    for (int n = 0; n <= dec.hi(); ++n) {
        os << "degree " << n << ":";
        json jumps = json::array();
        int prev = -1;
        bool any = false;
        if (dec.dim(n) > 0) {
            for (int p : dec.jump_levels(n)) {
                int d = static_cast<int>(dec.slice(n, p).dim());
                if (d == prev) continue;
                os << " W_" << p << " dim=" << d;
                jumps.push_back({{"p", p}, {"dim", d}});
                prev = d;
                any = true;
            }
        }
        if (!any) os << " 0";
        os << "\n";
        degrees.push_back({{"n", n}, {"jumps", jumps}});
    }
    if (as_json)
        std::cout << json{{"command", "decalage"}, {"degrees", degrees}}.dump(2) << "\n";
    else
        std::cout << os.str();
    return 0;
}

int cmd_lift(const std::string& cof_ref, const std::string& quis_ref, const std::string& map_ref, int r,
             bool as_json) {
    std::map<std::string, dsl::DefinitionFile> cache;
    auto get = [&](const std::string& path) -> dsl::DefinitionFile& {
        auto it = cache.find(path);
        if (it == cache.end()) it = cache.emplace(path, load_file(path)).first;
        return it->second;
    };
    auto [cof_file, cof_name] = split_ref(cof_ref);
    auto [quis_file, quis_name] = split_ref(quis_ref);
    auto [map_file, map_name] = split_ref(map_ref);

    PresentationPtr m = pick_algebra(get(cof_file), cof_name);
    auto pick_morphism = [&](const std::string& path, const std::string& name) -> const dsl::MorphismDef& {
        const auto& file = get(path);
        if (!name.empty()) {
            const auto* md = file.morphism(name);
            if (!md) throw UsageError("no morphism named '" + name + "' in " + path);
            return *md;
        }
        if (file.morphisms.size() != 1)
            throw UsageError(path + " declares " + std::to_string(file.morphisms.size()) +
                             " morphisms; pick one with FILE:NAME");
        return file.morphisms.front();
    };
    const auto& wdef = pick_morphism(quis_file, quis_name);
    const auto& fdef = pick_morphism(map_file, map_name);

    // cross-file algebra identity is by name equality of printed form; the
    // usual layout keeps everything in one file, where identity is by object
    DgaMorphism w = wdef.morphism;
    DgaMorphism fmap = fdef.morphism;
    if (fmap.source != m) {
        // allow the cofibrant algebra to be the same presentation from the
        // same file under a different handle
        if (dsl::print(get(cof_file)) == dsl::print(get(map_file)) &&
            fdef.source == (cof_name.empty() ? fdef.source : cof_name))
            fmap.source = m;
        else
            throw UsageError("--map must start at the --cofibrant algebra");
    }
    if (w.target != fmap.target) throw UsageError("--quis and --map must share the target");

    LiftResult res = lift(m, w, fmap, r);
    json jg = json::array(), jh = json::array();
    std::ostringstream os;
    os << "lift verified: w o g ~ f (r=" << r << ")\n";
    for (std::size_t i = 0; i < m->n_gens(); ++i) {
        os << "g(" << m->generators()[i].name
           << ") = " << w.source->element_str(res.g.images[i]) << "\n";
        jg.push_back({{"generator", m->generators()[i].name},
                      {"image", w.source->element_str(res.g.images[i])}});
    }
    for (std::size_t i = 0; i < m->n_gens(); ++i) {
        os << "h(" << m->generators()[i].name
           << ") = " << dsl::print_path_element(*fmap.target, res.h.images[i]) << "\n";
        jh.push_back({{"generator", m->generators()[i].name},
                      {"image", dsl::print_path_element(*fmap.target, res.h.images[i])}});
    }
    if (as_json)
        std::cout << json{{"command", "lift"}, {"r", r}, {"verified", true}, {"g", jg}, {"h", jh}}.dump(2)
                  << "\n";
    else
        std::cout << os.str();
    return 0;
}

int cmd_hopf(long q, bool have_q, long epsilon, bool have_eps, const std::string& sign, bool as_json) {
    if (have_q == have_eps) throw UsageError("pass exactly one of --q or --epsilon");
    if (have_q && q < 1) throw UsageError("--q expects a positive integer");
    bool minus = sign != "+";
    long eps = have_q ? q : epsilon;
    HopfResult res = epsilon_to_hopf({eps, minus});
    if (as_json) {
        std::cout << json{{"command", "hopf"},
                          {"epsilon", eps},
                          {"sign", minus ? "-" : "+"},
                          {"hopf_invariant", rat_str(res.lambda)},
                          {"witness", "verified 1-homotopy"}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "epsilon = " << eps << "\n";
        std::cout << "H(f) = " << rat_str(res.lambda) << "\n";
        std::cout << "witness: verified 1-homotopy (rho' o ftilde ~ E1(g) o rho, alpha -> "
                  << eps << "(a " << (minus ? "-" : "+") << " b))\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic engine for filtered graded-commutative dgas"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit a machine-readable mirror of the report");

    std::string input, algebra, window, homotopy_name, bigrading_name;
    std::string cof_ref, quis_ref, map_ref, sign = "-";
    int r = -1, max_degree = 4;
    long q = 0, epsilon = 0;

    auto* pages = app.add_subcommand("pages", "spectral page table of a filtered presentation");
    pages->add_option("--input", input)->required();
    pages->add_option("--algebra", algebra);
    pages->add_option("--r", r)->required();
    pages->add_option("--window", window, "PMIN:PMAX,QMIN:QMAX")->required();

    auto* coh = app.add_subcommand("cohomology", "degreewise cohomology with representatives");
    coh->add_option("--input", input)->required();
    coh->add_option("--algebra", algebra);
    coh->add_option("--max-degree", max_degree)->required();

    auto* mm = app.add_subcommand("minimal-model", "degreewise minimal model construction");
    mm->add_option("--input", input)->required();
    mm->add_option("--algebra", algebra);
    mm->add_option("--max-degree", max_degree)->required();

    auto* ch = app.add_subcommand("check-homotopy", "verify an r-homotopy block");
    ch->add_option("--input", input)->required();
    ch->add_option("--homotopy", homotopy_name)->required();
    ch->add_option("--r", r);

    auto* cs = app.add_subcommand("check-splitting", "verify an r-splitting block");
    cs->add_option("--input", input)->required();
    cs->add_option("--bigrading", bigrading_name)->required();
    cs->add_option("--r", r);

    auto* dec = app.add_subcommand("decalage", "decalage jump table of the weight filtration");
    dec->add_option("--input", input)->required();
    dec->add_option("--algebra", algebra);
    int dec_top = -1;
    dec->add_option("--max-degree", dec_top);

    auto* lf = app.add_subcommand("lift", "homotopy lifting against an E_r-quasi-isomorphism");
    lf->add_option("--cofibrant", cof_ref, "FILE or FILE:ALGEBRA")->required();
    lf->add_option("--quis", quis_ref, "FILE or FILE:MORPHISM")->required();
    lf->add_option("--map", map_ref, "FILE or FILE:MORPHISM")->required();
    lf->add_option("--r", r)->required();

    auto* hp = app.add_subcommand("hopf", "Hopf invariant of the blow-up power maps");
    auto* qopt = hp->add_option("--q", q, "power-map exponent");
    auto* eopt = hp->add_option("--epsilon", epsilon, "page-map coefficient");
    hp->add_option("--sign", sign, "+ or - (default -)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pages->parsed()) return cmd_pages(input, algebra, r, window, as_json);
        if (coh->parsed()) return cmd_cohomology(input, algebra, max_degree, as_json);
        if (mm->parsed()) return cmd_minimal_model(input, algebra, max_degree, as_json);
        if (ch->parsed()) return cmd_check_homotopy(input, homotopy_name, r, as_json);
        if (cs->parsed()) return cmd_check_splitting(input, bigrading_name, r, as_json);
        if (dec->parsed()) return cmd_decalage(input, algebra, dec_top, as_json);
        if (lf->parsed()) return cmd_lift(cof_ref, quis_ref, map_ref, r, as_json);
        if (hp->parsed()) return cmd_hopf(q, qopt->count() > 0, epsilon, eopt->count() > 0, sign, as_json);
    } catch (const ParseFailure& e) {
        for (const auto& d : e.diagnostics) std::cerr << d.str() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FdgaError& e) {
        // verification and computation failures (lift errors, invalid
        // scenarios) land here
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
