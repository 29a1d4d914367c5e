#pragma once
#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dgtot/obstruction.hpp"
#include "dgtot/parse.hpp"
#include "dgtot/serialize.hpp"

namespace dgtot::cli {

using Json = nlohmann::ordered_json;

struct Result {
    int exit_code = 0;
    Json json;
    std::string text;
};

/// A window too small to certify the requested computation: exit code 2.
struct WindowError : error {
    int suggested_hi;
    WindowError(const std::string& msg, int hint) : error(msg), suggested_hi(hint) {}
};

struct Options {
    std::string command;
    std::string input, input2, output;
    bool eliminate = false;
    std::optional<Window> window;
    SignConvention conv = SignConvention::even;
    std::optional<FieldSpec> field_override;
    std::string format = "text";
    std::uint64_t seed = 0;
};

namespace detail_cli {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Window parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw error("window must be LO..HI");
    try {
        int lo = std::stoi(s.substr(0, dots));
        int hi = std::stoi(s.substr(dots + 2));
        if (hi < lo) throw error("window must satisfy LO <= HI");
        return Window{lo, hi};
    } catch (const std::invalid_argument&) {
        throw error("window must be LO..HI");
    }
}

template <class K>
std::vector<std::string> element_strings(const std::vector<Poly<K>>& elem,
                                         const std::vector<std::string>& labels,
                                         const std::vector<std::string>& vars) {
    std::vector<std::string> parts;
    for (size_t g = 0; g < elem.size(); ++g) {
        if (elem[g].is_zero()) continue;
        parts.push_back("(" + poly_to_string(elem[g], vars) + ")*" + labels[g]);
    }
    if (parts.empty()) parts.push_back("0");
    return parts;
}

template <class K>
std::string element_string(const std::vector<Poly<K>>& elem,
                           const std::vector<std::string>& labels,
                           const std::vector<std::string>& vars) {
    auto parts = element_strings(elem, labels, vars);
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) s += " + ";
        s += parts[i];
    }
    return s;
}

template <class K>
Json matrix_json(const GradedMatrix<K>& m, const std::vector<std::string>& vars) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(poly_to_string(m.at(r, c), vars));
        rows.push_back(row);
    }
    return Json{{"source_twists", m.source.twists},
                {"target_twists", m.target.twists},
                {"entries", rows}};
}

template <class K>
Result run_typed(const Options& opt, const doc::Document& document) {
    Result res;
    Json& j = res.json;
    std::ostringstream text;
    const PolyRing ring = document.ring();
    j["command"] = opt.command;
    j["input"] = opt.input;
    j["ring"] = ring_decl(ring);
    j["sign_convention"] = to_string(opt.conv);

    auto need_dgmodule = [&]() -> SemifreeDG<K> {
        if (!std::holds_alternative<doc::DgModuleDoc>(document.body))
            throw error(opt.command + " needs a dgmodule input");
        return build_dgmodule<K>(document, opt.conv);
    };
    auto need_complex = [&]() -> GradedComplex<K> {
        if (!std::holds_alternative<doc::ComplexDoc>(document.body))
            throw error(opt.command + " needs a complex input");
        return build_complex<K>(document);
    };
    auto window_for_module = [&](const SemifreeDG<K>& m) {
        return opt.window ? *opt.window : m.default_window();
    };
    auto put_window = [&](Window w) {
        j["window"] = {w.lo, w.hi};
        text << "window: [" << w.lo << ", " << w.hi << "]\n";
    };

    if (opt.command == "validate") {
        if (std::holds_alternative<doc::DgModuleDoc>(document.body)) {
            auto m = need_dgmodule();
            auto val = validate_dg(m);
            j["kind"] = "dgmodule";
            j["ok"] = val.ok;
            Json v = Json::array();
            for (auto& viol : val.violations) v.push_back(viol.what);
            j["violations"] = v;
            Json order = Json::array();
            for (int i : val.well_order) order.push_back(m.labels[i]);
            j["well_order"] = order;
            text << "dgmodule: " << (val.ok ? "valid" : "INVALID") << "\n";
            for (auto& viol : val.violations) text << "  " << viol.what << "\n";
        } else if (std::holds_alternative<doc::ComplexDoc>(document.body)) {
            auto x = need_complex();
            auto val = validate_complex(x);
            j["kind"] = "complex";
            j["ok"] = val.ok;
            Json v = Json::array();
            for (auto& viol : val.violations)
                v.push_back("position " + std::to_string(viol.position) + ": " + viol.what);
            j["violations"] = v;
            text << "complex: " << (val.ok ? "valid" : "INVALID") << "\n";
            for (auto& viol : val.violations)
                text << "  position " << viol.position << ": " << viol.what << "\n";
        } else {
            j["kind"] = "morphism";
            j["ok"] = true;
            j["note"] = "syntax checked; endpoints are external to this document";
            text << "morphism: syntax ok\n";
        }
    } else if (opt.command == "homology") {
        if (std::holds_alternative<doc::DgModuleDoc>(document.body)) {
            auto m = need_dgmodule();
            Window w = window_for_module(m);
            put_window(w);
            auto h = dg_homology(m, w);
            j["certified"] = h.certified;
            Json dims = Json::object();
            for (auto& [d, v] : h.h_dims)
                if (v != 0) dims[std::to_string(d)] = v;
            j["h_dims"] = dims;
            Json gens = Json::array();
            for (size_t i = 0; i < h.gen_degrees.size(); ++i)
                gens.push_back({{"degree", h.gen_degrees[i]},
                                {"cycle", element_string(h.cycles[i], m.labels, ring.vars)}});
            j["generators"] = gens;
            j["relations"] = matrix_json(h.relations, ring.vars);
            text << "homology generators:\n";
            for (size_t i = 0; i < h.gen_degrees.size(); ++i)
                text << "  degree " << h.gen_degrees[i] << ": "
                     << element_string(h.cycles[i], m.labels, ring.vars) << "\n";
            text << "relation degrees:";
            for (int t : h.relations.source.twists) text << " " << t;
            text << "\ncertified: " << (h.certified ? "yes" : "NO") << "\n";
            if (!h.certified) {
                j["suggested_hi"] = h.suggested_hi;
                throw WindowError("homology window uncertified", h.suggested_hi);
            }
        } else {
            auto x = need_complex();
            Window w = opt.window ? *opt.window : x.default_window();
            put_window(w);
            auto h = homology_truncated(x, w);
            Json table = Json::array();
            for (auto& [ij, v] : h)
                table.push_back({{"position", ij.first}, {"degree", ij.second}, {"dim", v}});
            j["homology"] = table;
            text << "nonzero H_i(X)_j:\n";
            for (auto& [ij, v] : h)
                text << "  H_" << ij.first << " degree " << ij.second << ": dim " << v << "\n";
        }
    } else if (opt.command == "crossing") {
        auto m = need_dgmodule();
        auto val = validate_dg(m);
        if (!val.ok) throw error("input module is invalid; run validate");
        auto part = partition(m);
        Json levels = Json::object();
        for (int i = 0; i < m.rank(); ++i)
            levels[m.labels[i]] =
                part.level[i] < 0 ? Json("unassigned") : Json(part.level[i]);
        j["partition"] = levels;
        j["has_crossing"] = !part.covers_all();
        text << "partition:\n";
        for (int i = 0; i < m.rank(); ++i) {
            text << "  " << m.labels[i] << ": ";
            if (part.level[i] < 0) text << "unassigned";
            else text << "E_" << part.level[i];
            text << "\n";
        }
        text << "has_crossing: " << (part.covers_all() ? "false" : "true") << "\n";
        if (opt.eliminate) {
            auto el = eliminate_crossing(m);
            j["eliminate"] = Json::object();
            j["eliminate"]["success"] = el.success;
            if (el.success) {
                if (!conjugation_identity_holds(m, el.module, el.change))
                    throw error("conjugation identity failed (internal)");
                Json subs = Json::array();
                for (int jj = 0; jj < m.rank(); ++jj)
                    for (int i = 0; i < m.rank(); ++i) {
                        if (i == jj || el.change.u[i][jj].is_zero()) continue;
                        subs.push_back(m.labels[jj] + "' = " + m.labels[jj] + " + (" +
                                       poly_to_string(el.change.u[i][jj], ring.vars) + ")*" +
                                       m.labels[i]);
                    }
                j["eliminate"]["substitutions"] = subs;
                Json nd = Json::object();
                for (int jj = 0; jj < m.rank(); ++jj) {
                    std::vector<Poly<K>> col(m.rank(), Poly<K>(ring.nvars()));
                    bool nz = false;
                    for (int i = 0; i < m.rank(); ++i) {
                        col[i] = el.module.d[i][jj];
                        nz = nz || !col[i].is_zero();
                    }
                    if (nz) nd[m.labels[jj]] = element_string(col, m.labels, ring.vars);
                }
                j["eliminate"]["new_differential"] = nd;
                Json lv = Json::object();
                for (int i = 0; i < m.rank(); ++i)
                    lv[m.labels[i]] = el.final_partition.level[i];
                j["eliminate"]["partition"] = lv;
                text << "elimination: success\n";
                for (auto& s : j["eliminate"]["substitutions"])
                    text << "  " << s.template get<std::string>() << "\n";
                for (auto& [lab, dtext] : nd.items())
                    text << "  d " << lab << " = " << dtext.template get<std::string>() << "\n";
            } else {
                j["eliminate"]["unsolved_degrees"] = el.unsolved_degrees;
                text << "elimination: FAILURE (inconclusive; unsolved degrees:";
                for (int d : el.unsolved_degrees) text << " " << d;
                text << ")\n";
            }
        }
    } else if (opt.command == "detot") {
        auto m = need_dgmodule();
        if (has_crossing(m)) throw error("detot: the basis has crossing");
        auto x = detot(m);
        std::string name = std::get<doc::DgModuleDoc>(document.body).name + "_detot";
        std::string out_text = serialize_complex(x, name);
        if (!opt.output.empty()) {
            std::ofstream out(opt.output);
            if (!out) throw error("cannot write " + opt.output);
            out << out_text;
            j["output"] = opt.output;
        }
        j["positions"] = Json::object();
        for (auto& [pos, mod] : x.modules) j["positions"][std::to_string(pos)] = mod.twists;
        j["document"] = out_text;
        text << out_text;
    } else if (opt.command == "tot") {
        auto x = need_complex();
        auto t = tot(x, opt.conv);
        std::string name = std::get<doc::ComplexDoc>(document.body).name + "_tot";
        std::string out_text = serialize_dgmodule(t.module, name);
        if (!opt.output.empty()) {
            std::ofstream out(opt.output);
            if (!out) throw error("cannot write " + opt.output);
            out << out_text;
            j["output"] = opt.output;
        }
        j["degrees"] = t.module.degrees;
        j["document"] = out_text;
        text << out_text;
    } else if (opt.command == "resolve") {
        auto m = need_dgmodule();
        if (ring.nvars() != 1) throw error("resolve needs a univariate ring");
        Window w = opt.window ? *opt.window : embed_default_window(m);
        put_window(w);
        UnivariateDecomposition<K> dec;
        try {
            dec = homology_decompose(m, w);
        } catch (const error& e) {
            throw WindowError(e.what(), 2 * w.hi - w.lo);
        }
        Json tors = Json::array();
        for (size_t i = 0; i < dec.torsion.size(); ++i)
            tors.push_back(
                {{"r", dec.torsion[i].first},
                 {"c", dec.torsion[i].second},
                 {"cycle", element_string(dec.torsion_cycles[i], m.labels, ring.vars)}});
        j["torsion"] = tors;
        Json fr = Json::array();
        for (size_t i = 0; i < dec.free_twists.size(); ++i)
            fr.push_back({{"r", dec.free_twists[i]},
                          {"cycle", element_string(dec.free_cycles[i], m.labels, ring.vars)}});
        j["free"] = fr;
        text << "torsion summands (r, c):";
        for (auto& [r, c] : dec.torsion) text << " (" << r << "," << c << ")";
        text << "\nfree twists:";
        for (int r : dec.free_twists) text << " " << r;
        text << "\ncycle representatives:\n";
        for (size_t i = 0; i < dec.torsion.size(); ++i)
            text << "  z" << i + 1 << " = "
                 << element_string(dec.torsion_cycles[i], m.labels, ring.vars) << "\n";
        for (size_t i = 0; i < dec.free_twists.size(); ++i)
            text << "  z" << dec.torsion.size() + i + 1 << " = "
                 << element_string(dec.free_cycles[i], m.labels, ring.vars) << "\n";
    } else if (opt.command == "embed") {
        auto m = need_dgmodule();
        if (ring.nvars() != 1) throw error("embed needs a univariate ring");
        Window w = opt.window ? *opt.window : embed_default_window(m);
        put_window(w);
        EmbedWitness<K> wit;
        try {
            wit = embed(m, w);
        } catch (const error& e) {
            throw WindowError(e.what(), 2 * w.hi - w.lo);
        }
        j["chain_map"] = wit.certificate.chain_map;
        j["quasi_isomorphism"] = wit.certificate.quasi_iso.is_quasi_iso;
        Json images = Json::object();
        for (int a = 0; a < wit.tot_f.module.rank(); ++a)
            images[wit.tot_f.module.labels[a] + ":" +
                   std::to_string(wit.tot_f.module.degrees[a])] =
                element_string(wit.mu.images[a], m.labels, ring.vars);
        j["mu"] = images;
        j["resolution"] = Json::object();
        Json tors = Json::array();
        for (auto& [r, c] : wit.decomposition.torsion) tors.push_back({r, c});
        j["resolution"]["torsion"] = tors;
        j["resolution"]["free"] = wit.decomposition.free_twists;
        text << "Tot F -> M on basis elements:\n";
        for (int a = 0; a < wit.tot_f.module.rank(); ++a)
            text << "  " << wit.tot_f.module.labels[a] << " (degree "
                 << wit.tot_f.module.degrees[a]
                 << ") -> " << element_string(wit.mu.images[a], m.labels, ring.vars) << "\n";
        text << "chain map: " << (wit.certificate.chain_map ? "yes" : "NO") << "\n";
        text << "quasi-isomorphism: "
             << (wit.certificate.quasi_iso.is_quasi_iso ? "certified" : "REFUTED") << "\n";
        if (!wit.certificate.chain_map || !wit.certificate.quasi_iso.is_quasi_iso)
            throw error("embed certificate failed (internal)");
    } else if (opt.command == "obstruct") {
        auto m = need_dgmodule();
        Window w = window_for_module(m);
        put_window(w);
        auto rep = tot_image_obstruction(m, w);
        j["rank"] = rep.rank;
        Json betti = Json::object();
        for (auto& [ij, b] : rep.resolution.betti) {
            auto key = std::to_string(ij.first);
            if (!betti.contains(key)) betti[key] = Json::object();
            betti[key][std::to_string(ij.second)] = b;
        }
        j["betti"] = betti;
        j["betti_sum"] = rep.betti_sum;
        j["minimal"] = rep.minimal;
        j["indecomposable"] = to_string(rep.indecomposable);
        j["verdict"] = to_string(rep.verdict);
        if (!rep.detail.empty()) j["detail"] = rep.detail;
        text << "rank: " << rep.rank << "\n";
        text << "betti:";
        for (auto& [ij, b] : rep.resolution.betti)
            text << " b(" << ij.first << "," << ij.second << ")=" << b;
        text << "\nbetti_sum: " << rep.betti_sum << "\n";
        text << "minimal: " << (rep.minimal ? "yes" : "no") << "\n";
        text << "indecomposable: " << to_string(rep.indecomposable) << "\n";
        text << "verdict: " << to_string(rep.verdict) << "\n";
        if (!rep.detail.empty()) text << "detail: " << rep.detail << "\n";
        if (!rep.homology.certified)
            throw WindowError("homology window uncertified", rep.homology.suggested_hi);
        if (!rep.resolution.certified)
            throw WindowError("resolution window uncertified", rep.resolution.suggested_hi);
    } else if (opt.command == "tensorcheck" || opt.command == "torcheck") {
        auto x = need_complex();
        auto d2 = parse_document(read_file(opt.input2));
        if (opt.field_override) d2.field = *opt.field_override;
        if (!(d2.field == document.field) || d2.vars != document.vars)
            throw error("the two inputs must share a ring");
        if (!std::holds_alternative<doc::ComplexDoc>(d2.body))
            throw error(opt.command + " needs two complex inputs");
        auto y = build_complex<K>(d2);
        j["input2"] = opt.input2;
        Window w;
        if (opt.window) {
            w = *opt.window;
        } else {
            w.lo = x.min_twist() + y.min_twist() + x.lo_position() + y.lo_position() - 1;
            w.hi = x.max_twist() + y.max_twist() + x.hi_position() + y.hi_position() + 4;
        }
        put_window(w);
        if (opt.command == "tensorcheck") {
            auto rep = tensor_compat_check(x, y, opt.conv, w);
            j["ok"] = rep.ok;
            if (!rep.ok) j["failure"] = rep.failure;
            text << "tensor compatibility: " << (rep.ok ? "certified" : "FAILED") << "\n";
            if (!rep.ok) text << "  " << rep.failure << "\n";
        } else {
            auto rep = tor_decomposition_check(x, y, opt.conv, w);
            j["agree"] = rep.agree;
            Json dg = Json::object(), ch = Json::object();
            for (auto& [jj, v] : rep.dg_side) dg[std::to_string(jj)] = v;
            for (auto& [jj, v] : rep.chain_side) ch[std::to_string(jj)] = v;
            j["dg_side"] = dg;
            j["chain_side"] = ch;
            text << "tor tables " << (rep.agree ? "agree" : "DISAGREE") << "\n";
            for (auto& [jj, v] : rep.dg_side)
                text << "  j=" << jj << ": dg " << v << " vs chain " << rep.chain_side.at(jj)
                     << "\n";
        }
    } else {
        throw error("unknown command " + opt.command);
    }

    res.text = text.str();
    return res;
}

}  // namespace detail_cli

inline Result run(const Options& opt) {
    Result res;
    try {
        auto document = parse_document(detail_cli::read_file(opt.input));
        if (opt.field_override) document.field = *opt.field_override;
        if (document.field.is_rational())
            res = detail_cli::run_typed<Rat>(opt, document);
        else
            res = detail_cli::run_typed<Fp>(opt, document);
    } catch (const WindowError& e) {
        res.exit_code = 2;
        res.json["error"] = e.what();
        res.json["suggested_hi"] = e.suggested_hi;
        res.text += std::string("certification failure: ") + e.what() + "\n";
    } catch (const error& e) {
        res.exit_code = 1;
        res.json["error"] = e.what();
        res.text = std::string("error: ") + e.what() + "\n";
    }
    return res;
}

/// Full command line entry: parses argv-style arguments and runs.
inline Result run_args(const std::vector<std::string>& args) {
    CLI::App app{"exact computations around the totaling functor"};
    app.require_subcommand(1);

    Options opt;
    std::string window_s, conv_s = "even", field_s, format_s = "text";

    app.add_option("--window", window_s, "certification window LO..HI");
    app.add_option("--sign-convention", conv_s, "even|koszul")
        ->check(CLI::IsMember({"even", "koszul"}));
    app.add_option("--field", field_s, "override the ring field (Q or F<p>)");
    app.add_option("--format", format_s, "json|text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", opt.seed, "seed for randomized suites (reserved)");

    struct Sub {
        CLI::App* app;
        bool two_inputs = false, has_output = false;
    };
    std::map<std::string, Sub> subs;
    auto add = [&](const std::string& name, const char* desc, bool two = false,
                   bool outf = false) {
        auto* s = app.add_subcommand(name, desc);
        s->fallthrough();  // global flags may follow the subcommand
        s->add_option("input", opt.input, "input document")->required();
        if (two) s->add_option("input2", opt.input2, "second input document")->required();
        if (outf) s->add_option("-o,--output", opt.output, "output file");
        subs[name] = {s, two, outf};
        return s;
    };
    add("validate", "check a document's invariants");
    add("homology", "degreewise homology with a minimal presentation");
    auto* crossing = add("crossing", "level partition and crossing detection");
    crossing->add_flag("--eliminate", opt.eliminate, "search for a crossing-free rebase");
    add("detot", "complex whose totaling is the given crossing-free module", false, true);
    add("tot", "totaling of a complex", false, true);
    add("resolve", "univariate homology decomposition");
    add("embed", "explicit quasi-isomorphism from a totaling (univariate)");
    add("obstruct", "rank-versus-Betti membership obstruction");
    add("tensorcheck", "Tot(X⊗Y) ≅ Tot X ⊗ Tot Y certificate", true);
    add("torcheck", "Tor decomposition dimension tables", true);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        Result res;
        res.exit_code = e.get_exit_code() == 0 ? 0 : 1;
        std::ostringstream os;
        res.exit_code == 0 ? void(os << app.help()) : void(os << e.what() << "\n");
        res.text = os.str();
        res.json["error"] = e.what();
        return res;
    }

    for (auto& [name, sub] : subs)
        if (sub.app->parsed()) opt.command = name;
    if (!window_s.empty()) opt.window = detail_cli::parse_window(window_s);
    opt.conv = conv_s == "koszul" ? SignConvention::koszul : SignConvention::even;
    if (!field_s.empty()) {
        if (field_s == "Q") {
            opt.field_override = FieldSpec{0};
        } else if (field_s.size() > 1 && field_s[0] == 'F') {
            long long p = std::stoll(field_s.substr(1));
            if (!is_prime(p) || p >= (1LL << 31))
                throw error("--field characteristic must be a prime < 2^31");
            opt.field_override = FieldSpec{static_cast<std::uint32_t>(p)};
        } else {
            Result res;
            res.exit_code = 1;
            res.text = "error: --field must be Q or F<p>\n";
            res.json["error"] = "--field must be Q or F<p>";
            return res;
        }
    }
    opt.format = format_s;
    return run(opt);
}

}  // namespace dgtot::cli
