#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pypl/decomposition.hpp"
#include "pypl/equilibria.hpp"
#include "pypl/error.hpp"
#include "pypl/kinetic_indices.hpp"
#include "pypl/kinetics.hpp"
#include "pypl/network.hpp"
#include "pypl/robustness.hpp"
#include "pypl/stability.hpp"
#include "pypl/star_msc.hpp"

namespace pypl {

using json = nlohmann::ordered_json;

struct ModelOptions {
    std::uint64_t seed = 0;
    std::size_t starts = 32;
    double tol_residual = 1e-9;
    double tol_dedup = 1e-6;
    LexOrder lex = LexOrder::descending;
};

struct ModelDocument {
    Network net;
    PolyPLKinetics kin;
    std::map<std::string, DecompositionSpec> decompositions;
    ModelOptions options;
};

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok |= key == a;
        if (!ok) throw input_error("SchemaError", where + ": unknown field \"" + key + "\"");
    }
}

inline Rational parse_rational(const json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            return rational_from_string(v.get<std::string>());
        } catch (const std::exception&) {
            throw input_error("SchemaError", where + ": cannot parse \"" +
                                                 v.get<std::string>() + "\" as a rational");
        }
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw input_error("SchemaError", where + ": expected a number or rational string");
}

inline Int parse_stoichiometry(const json& v, const std::string& where) {
    Rational q = parse_rational(v, where);
    if (!is_integer(q) || q < 0)
        throw input_error("NonIntegerStoichiometry",
                          where + ": stoichiometric coefficients must be nonnegative integers");
    return numerator(q);
}

// "X + 2Y -> Z" desugared to (reactant map, product map)
inline std::pair<std::map<std::string, Int>, std::map<std::string, Int>> parse_reaction_string(
    const std::string& text, const std::string& where) {
    auto arrow = text.find("->");
    if (arrow == std::string::npos)
        throw input_error("SchemaError", where + ": reaction string needs \"->\"");
    auto parse_side = [&](std::string side) {
        std::map<std::string, Int> out;
        std::stringstream ss(side);
        std::string term;
        bool any = false;
        while (std::getline(ss, term, '+')) {
            std::size_t a = term.find_first_not_of(" \t");
            std::size_t b = term.find_last_not_of(" \t");
            if (a == std::string::npos)
                throw input_error("SchemaError", where + ": empty term in reaction string");
            term = term.substr(a, b - a + 1);
            any = true;
            if (term == "0") continue;
            std::size_t i = 0;
            while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
            Int coef = i == 0 ? Int(1) : Int(term.substr(0, i));
            while (i < term.size() && std::isspace(static_cast<unsigned char>(term[i]))) ++i;
            std::string name = term.substr(i);
            if (name.empty())
                throw input_error("SchemaError", where + ": species name missing in \"" + term + "\"");
            out[name] += coef;
        }
        if (!any) throw input_error("SchemaError", where + ": empty reaction side");
        return out;
    };
    return {parse_side(text.substr(0, arrow)), parse_side(text.substr(arrow + 2))};
}

}  // namespace detail

inline ModelDocument parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error("SchemaError", e.what());
    }
    if (!doc.is_object()) throw input_error("SchemaError", "top level must be an object");
    detail::reject_unknown(doc, {"species", "reactions", "decompositions", "options"}, "model");
    if (!doc.contains("species") || !doc.contains("reactions"))
        throw input_error("SchemaError", "model needs \"species\" and \"reactions\"");

    ModelDocument out;
    std::map<std::string, std::size_t> species_index;
    for (const auto& s : doc["species"]) {
        if (!s.is_string()) throw input_error("SchemaError", "species names must be strings");
        std::string name = s.get<std::string>();
        if (!species_index.emplace(name, out.net.species.size()).second)
            throw input_error("SchemaError", "duplicate species \"" + name + "\"");
        out.net.species.push_back(name);
    }
    const std::size_t m = out.net.species.size();

    auto complex_index = [&](const std::map<std::string, Int>& stoich,
                             const std::string& where) {
        std::vector<Int> cx(m, Int(0));
        for (const auto& [name, coef] : stoich) {
            auto it = species_index.find(name);
            if (it == species_index.end())
                throw input_error("SchemaError", where + ": unknown species \"" + name + "\"");
            cx[it->second] = coef;
        }
        for (std::size_t c = 0; c < out.net.complexes.size(); ++c)
            if (out.net.complexes[c] == cx) return c;
        out.net.complexes.push_back(cx);
        return out.net.complexes.size() - 1;
    };
    auto parse_complex_map = [&](const json& obj, const std::string& where) {
        if (!obj.is_object()) throw input_error("SchemaError", where + ": expected a map");
        std::map<std::string, Int> stoich;
        for (const auto& [name, coef] : obj.items())
            stoich[name] = detail::parse_stoichiometry(coef, where);
        return stoich;
    };

    std::size_t idx = 0;
    for (const auto& r : doc["reactions"]) {
        std::string where = "reaction " + std::to_string(idx);
        if (!r.is_object()) throw input_error("SchemaError", where + ": expected an object");
        detail::reject_unknown(r, {"reaction", "reactant", "product", "k", "terms"}, where);
        std::map<std::string, Int> reactant, product;
        if (r.contains("reaction")) {
            if (r.contains("reactant") || r.contains("product"))
                throw input_error("SchemaError",
                                  where + ": give \"reaction\" or reactant/product, not both");
            auto [lhs, rhs] = detail::parse_reaction_string(r["reaction"].get<std::string>(), where);
            reactant = lhs;
            product = rhs;
        } else {
            if (!r.contains("reactant") || !r.contains("product"))
                throw input_error("SchemaError", where + ": needs reactant and product");
            reactant = parse_complex_map(r["reactant"], where);
            product = parse_complex_map(r["product"], where);
        }
        out.net.reactions.emplace_back(complex_index(reactant, where),
                                       complex_index(product, where));

        if (!r.contains("k")) throw input_error("SchemaError", where + ": missing \"k\"");
        ReactionKinetics rk;
        rk.k = detail::parse_rational(r["k"], where);
        if (!r.contains("terms")) throw input_error("SchemaError", where + ": missing \"terms\"");
        for (const auto& t : r["terms"]) {
            detail::reject_unknown(t, {"a", "F"}, where);
            if (!t.contains("a") || !t.contains("F"))
                throw input_error("SchemaError", where + ": each term needs \"a\" and \"F\"");
            PolyTerm term;
            term.a = detail::parse_rational(t["a"], where);
            term.F.assign(m, Rational(0));
            for (const auto& [name, e] : t["F"].items()) {
                auto it = species_index.find(name);
                if (it == species_index.end())
                    throw input_error("SchemaError", where + ": unknown species \"" + name + "\"");
                term.F[it->second] = detail::parse_rational(e, where);
            }
            rk.terms.push_back(std::move(term));
        }
        out.kin.reactions.push_back(std::move(rk));
        ++idx;
    }

    // validated() reorders complexes; reaction and kinetics order are preserved
    out.net = validated(out.net);
    validate_kinetics(out.kin, out.net);

    if (doc.contains("decompositions")) {
        for (const auto& [name, blocks] : doc["decompositions"].items()) {
            DecompositionSpec spec;
            for (const auto& block : blocks) {
                std::vector<std::size_t> b;
                for (const auto& j : block) {
                    if (!j.is_number_unsigned())
                        throw input_error("SchemaError",
                                          "decomposition \"" + name + "\": indices must be "
                                          "nonnegative integers");
                    b.push_back(j.get<std::size_t>());
                }
                spec.blocks.push_back(std::move(b));
            }
            validate_partition(out.net, spec);
            out.decompositions.emplace(name, std::move(spec));
        }
    }
    if (doc.contains("options")) {
        const json& o = doc["options"];
        detail::reject_unknown(o, {"seed", "starts", "tol_residual", "tol_dedup", "lex"},
                               "options");
        if (o.contains("seed")) out.options.seed = o["seed"].get<std::uint64_t>();
        if (o.contains("starts")) out.options.starts = o["starts"].get<std::size_t>();
        if (o.contains("tol_residual")) out.options.tol_residual = o["tol_residual"].get<double>();
        if (o.contains("tol_dedup")) out.options.tol_dedup = o["tol_dedup"].get<double>();
        if (o.contains("lex")) {
            std::string lex = o["lex"].get<std::string>();
            if (lex == "ascending")
                out.options.lex = LexOrder::ascending;
            else if (lex == "descending")
                out.options.lex = LexOrder::descending;
            else
                throw input_error("SchemaError", "options.lex must be ascending or descending");
        }
    }
    return out;
}

inline ModelDocument parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("FileNotFound", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

namespace detail {

inline json rational_json(const Rational& q) {
    if (is_integer(q)) {
        // long long covers every value these models produce
        return json(static_cast<long long>(numerator(q)));
    }
    return json(numerator(q).str() + "/" + denominator(q).str());
}

inline json complex_map_json(const Network& net, std::size_t c) {
    json out = json::object();
    for (std::size_t s = 0; s < net.num_species(); ++s)
        if (net.complexes[c][s] != 0)
            out[net.species[s]] = static_cast<long long>(net.complexes[c][s]);
    return out;
}

inline json order_map_json(const Network& net, const RatVec& F) {
    json out = json::object();
    for (std::size_t s = 0; s < net.num_species(); ++s)
        if (F[s] != 0) out[net.species[s]] = rational_json(F[s]);
    return out;
}

}  // namespace detail

/// Canonical serialization of a model; parse/emit round-trips are stable.
inline std::string emit_model(const ModelDocument& doc) {
    json out;
    out["species"] = doc.net.species;
    out["reactions"] = json::array();
    for (std::size_t i = 0; i < doc.net.num_reactions(); ++i) {
        json r;
        r["reactant"] = detail::complex_map_json(doc.net, doc.net.reactions[i].first);
        r["product"] = detail::complex_map_json(doc.net, doc.net.reactions[i].second);
        r["k"] = detail::rational_json(doc.kin.reactions[i].k);
        r["terms"] = json::array();
        for (const auto& t : doc.kin.reactions[i].terms) {
            json term;
            term["a"] = detail::rational_json(t.a);
            term["F"] = detail::order_map_json(doc.net, t.F);
            r["terms"].push_back(std::move(term));
        }
        out["reactions"].push_back(std::move(r));
    }
    if (!doc.decompositions.empty()) {
        out["decompositions"] = json::object();
        for (const auto& [name, spec] : doc.decompositions)
            out["decompositions"][name] = spec.blocks;
    }
    out["options"] = {{"seed", doc.options.seed},
                      {"starts", doc.options.starts},
                      {"tol_residual", doc.options.tol_residual},
                      {"tol_dedup", doc.options.tol_dedup},
                      {"lex", doc.options.lex == LexOrder::ascending ? "ascending" : "descending"}};
    return out.dump(2) + "\n";
}

// ---- report builders -------------------------------------------------------

inline json analyze_report(const Network& net) {
    auto rep = structural_report(net);
    json out;
    out["species"] = net.num_species();
    out["complexes"] = rep.n;
    out["reactions"] = net.num_reactions();
    out["linkage_classes"] = rep.linkage_classes;
    out["strong_linkage_classes"] = rep.strong_linkage_classes;
    out["terminal_classes"] = rep.terminal_classes;
    out["rank"] = rep.rank;
    out["deficiency"] = rep.deficiency;
    out["reactant_complexes"] = rep.n_reactant;
    out["weakly_reversible"] = rep.weakly_reversible;
    out["t_minimal"] = rep.t_minimal;
    out["cycle_terminal"] = rep.cycle_terminal;
    json terminal = json::array();
    for (std::size_t c : rep.terminal_complexes) terminal.push_back(complex_name(net, c));
    out["terminal_complexes"] = std::move(terminal);
    out["provenance"] = "exact";
    return out;
}

inline json canonical_report(const Network& net, const CanonicalRep& rep) {
    auto cls = classify(net, rep);
    json out;
    out["h"] = rep.h;
    out["lex"] = rep.order == LexOrder::ascending ? "ascending" : "descending";
    out["reactions"] = json::array();
    for (std::size_t i = 0; i < rep.num_reactions(); ++i) {
        json r;
        r["k"] = detail::rational_json(rep.reactions[i].k);
        r["terms"] = json::array();
        for (const auto& t : rep.reactions[i].terms) {
            json term;
            term["a"] = detail::rational_json(t.a);
            term["F"] = detail::order_map_json(net, t.F);
            r["terms"].push_back(std::move(term));
        }
        out["reactions"].push_back(std::move(r));
    }
    out["layer_rdk"] = cls.layer_rdk;
    out["py_rdk"] = cls.py_rdk;
    out["py_ndk"] = !cls.py_rdk;
    out["is_mass_action"] = cls.is_mass_action;
    json branching = json::array();
    for (std::size_t c : cls.branching_reactants) branching.push_back(complex_name(net, c));
    out["branching_reactants"] = std::move(branching);
    out["provenance"] = "exact";
    return out;
}

inline json star_msc_report(const Network& net, const CanonicalRep& rep) {
    auto t = star_msc_transform(net, rep);
    auto rd = replica_decomposition(t);
    json out;
    out["M"] = static_cast<long long>(t.M);
    out["h"] = t.h;
    out["transformed_complexes"] = t.transformed.num_complexes();
    out["transformed_reactions"] = t.transformed.num_reactions();
    out["stoichiometric_subspace_preserved"] =
        same_span(t.transformed.reaction_vectors(), net.reaction_vectors());
    out["replica_c_decomposition"] = rd.c_decomposition;
    json replicas = json::array();
    for (const auto& block : rd.blocks) {
        Network sub = restrict_network(t.transformed, block);
        auto srep = structural_report(sub);
        replicas.push_back({{"reactions", block.size()},
                            {"weakly_reversible", srep.weakly_reversible},
                            {"deficiency", srep.deficiency}});
    }
    out["replicas"] = std::move(replicas);
    out["provenance"] = "exact";
    return out;
}

inline json indices_report(const Network& net, const CanonicalRep& rep) {
    auto cls = classify(net, rep);
    json out;
    json caveats = json::array();
    try {
        auto kd = kinetic_order_subspaces(net, rep, cls);
        json layers = json::array();
        for (const auto& layer : kd.layers) {
            json l;
            l["s_tilde"] = layer.s;
            l["delta_tilde"] = layer.deficiency;
            json basis = json::array();
            for (const RatVec& v : layer.subspace_basis) {
                json row = json::array();
                for (const Rational& x : v) row.push_back(detail::rational_json(x));
                basis.push_back(std::move(row));
            }
            l["subspace_basis"] = std::move(basis);
            layers.push_back(std::move(l));
        }
        out["layers"] = std::move(layers);
        out["s_tilde_total"] = kd.s_total;
        out["delta_tilde"] = kd.deficiency_total;
        caveats.push_back(
            "delta_tilde values are computed from the definition applied to the canonical "
            "layer ordering in use (--lex); orderings that split terms differently can yield "
            "different values");
        auto t = star_msc_transform(net, rep);
        auto bounds = kinetic_deficiency_bounds_check(net, t, kd);
        out["bounds"] = {{"delta_tilde_star", bounds.delta_tilde_star},
                         {"delta_star", bounds.delta_star},
                         {"upper_bound", bounds.upper_bound},
                         {"upper_bound_holds", bounds.upper_bound_holds},
                         {"h_at_least_m", bounds.h_at_least_m},
                         {"lower_vs_delta_tilde_holds", bounds.lower_vs_delta_tilde_holds},
                         {"network_open", bounds.network_open},
                         {"lower_vs_delta_star_holds", bounds.lower_vs_delta_star_holds}};
    } catch (const Error& e) {
        caveats.push_back(std::string("kinetic order subspaces unavailable: ") + e.what());
    }
    try {
        auto rdd = t_matrices(net, rep);
        auto tik = is_py_tik(rdd, cls);
        out["reactant_complexes"] = rdd.reactant_complexes.size();
        out["qhat_per_layer"] = rdd.qhat_layer;
        out["delta_hat_per_layer"] = rdd.deficiency_layer;
        out["delta_hat"] = rdd.deficiency;
        out["py_tik"] = tik.py_tik;
        out["layer_pl_tik"] = tik.layer_pl_tik;
    } catch (const Error& e) {
        caveats.push_back(std::string("T-matrices unavailable: ") + e.what());
    }
    out["py_rdk"] = cls.py_rdk;
    out["py_ndk"] = !cls.py_rdk;
    out["caveats"] = std::move(caveats);
    out["provenance"] = "exact";
    return out;
}

inline json decompose_report(const ModelDocument& doc) {
    json out = json::object();
    std::map<std::string, DecompositionSpec> specs = doc.decompositions;
    specs.emplace("linkage_classes", linkage_class_decomposition(doc.net));
    for (const auto& [name, spec] : specs) {
        json d;
        auto indep = check_independent(doc.net, spec);
        auto inc = check_incidence_independent(doc.net, spec);
        d["blocks"] = spec.blocks;
        d["independent"] = indep.independent;
        d["s"] = indep.s;
        d["s_sum"] = indep.s_sum;
        d["incidence_independent"] = inc.incidence_independent;
        d["n_minus_l"] = inc.n_minus_l;
        d["n_minus_l_sum"] = inc.n_minus_l_sum;
        d["c_decomposition"] = inc.c_decomposition;
        d["deficiency"] = indep.deficiency;
        d["deficiency_sum"] = indep.deficiency_sum;
        json blocks = json::array();
        for (const auto& b : indep.blocks)
            blocks.push_back({{"complexes", b.n},
                              {"linkage_classes", b.linkage_classes},
                              {"rank", b.rank},
                              {"deficiency", b.deficiency},
                              {"weakly_reversible", b.weakly_reversible}});
        d["block_numbers"] = std::move(blocks);
        SolveOptions opts;
        opts.seed = doc.options.seed;
        opts.starts = doc.options.starts;
        opts.tol_residual = doc.options.tol_residual;
        opts.tol_dedup = doc.options.tol_dedup;
        auto rel = equilibria_set_relations(doc.net, doc.kin, spec, opts);
        d["equilibria_relations"] = {
            {"intersection_witnesses", rel.intersection_witnesses},
            {"intersection_contained", rel.intersection_contained},
            {"global_witnesses", rel.global_witnesses},
            {"equality_holds", rel.equality_holds},
            {"complex_balance_equality_holds", rel.complex_balance_equality_holds},
            {"max_global_f_residual", rel.max_global_f_residual},
            {"max_blockwise_f_residual", rel.max_blockwise_f_residual},
            {"solver_failures", rel.solver_failures}};
        out[name] = std::move(d);
    }
    return {{"decompositions", std::move(out)}, {"provenance", "mixed"}};
}

inline json equilibrium_record_json(const Network& net, const EquilibriumRecord& rec) {
    json c = json::object();
    for (std::size_t s = 0; s < net.num_species(); ++s) c[net.species[s]] = rec.c[s];
    return {{"c", std::move(c)},
            {"f_residual", rec.f_residual},
            {"g_residual", rec.g_residual},
            {"layer_g_residuals", rec.layer_g_residuals},
            {"positive", rec.positive},
            {"complex_balanced", rec.complex_balanced},
            {"pl_complex_balanced", rec.pl_complex_balanced}};
}

inline json equilibria_report(const ModelDocument& doc) {
    SolveOptions opts;
    opts.seed = doc.options.seed;
    opts.starts = doc.options.starts;
    opts.tol_residual = doc.options.tol_residual;
    opts.tol_dedup = doc.options.tol_dedup;
    json out;
    json caveats = json::array();
    for (auto [mode, name] : {std::pair{SolveMode::positive, "positive"},
                              {SolveMode::complex_balanced, "complex_balanced"},
                              {SolveMode::pl_complex_balanced, "pl_complex_balanced"}}) {
        auto sols = solve_equilibrium(doc.net, doc.kin, mode, opts);
        json list = json::array();
        for (const auto& rec : sols) list.push_back(equilibrium_record_json(doc.net, rec));
        out[name] = std::move(list);
    }
    auto rep = canonicalize(doc.kin, doc.options.lex);
    auto cls = classify(doc.net, rep);
    try {
        auto kd = kinetic_order_subspaces(doc.net, rep, cls);
        auto sign = monostationarity_sign_check(doc.net, kd);
        out["sign_criterion"] = {{"holds", sign.holds}};
        if (sign.witness) out["sign_criterion"]["witness"] = sign.witness->coords;
    } catch (const Error& e) {
        caveats.push_back(std::string("sign criterion unavailable: ") + e.what());
    }
    try {
        auto srep = structural_report(doc.net);
        if (srep.weakly_reversible) {
            std::vector<double> ones(doc.net.num_species(), 1.0);
            auto ccb = ccb_construct(doc.net, doc.kin, ones);
            json b = json::array();
            for (const Rational& x : ccb.b) b.push_back(detail::rational_json(x));
            out["ccb_at_ones"] = {{"k", ccb.k}, {"b", std::move(b)}};
        } else {
            caveats.push_back("network not weakly reversible; no complex balancing rates exist");
        }
    } catch (const Error& e) {
        caveats.push_back(std::string("ccb construction failed: ") + e.what());
    }
    out["caveats"] = std::move(caveats);
    out["provenance"] = "float";
    return out;
}

inline json stability_report(const ModelDocument& doc) {
    SolveOptions opts;
    opts.seed = doc.options.seed;
    opts.starts = doc.options.starts;
    opts.tol_residual = doc.options.tol_residual;
    opts.tol_dedup = doc.options.tol_dedup;
    auto sols = solve_equilibrium(doc.net, doc.kin, SolveMode::pl_complex_balanced, opts);
    json out;
    json verdicts = json::array();
    json caveats = json::array();
    auto S = doc.net.reaction_vectors();
    for (const auto& rec : sols) {
        json v = equilibrium_record_json(doc.net, rec);
        try {
            Eigen::MatrixXd J = jacobian(doc.net, doc.kin, rec.c);
            auto verdict = restrict_and_classify(J, S);
            json eig = json::array();
            for (const auto& z : verdict.eigenvalues)
                eig.push_back({{"re", z.real()}, {"im", z.imag()}});
            v["eigenvalues"] = std::move(eig);
            v["classification"] = verdict.classification == StabilityClass::linearly_stable
                                      ? "linearly_stable"
                                  : verdict.classification == StabilityClass::unstable
                                      ? "unstable"
                                      : "marginal";
            auto uniq = uniqueness_from_stability(doc.net, doc.kin, verdict, rec, opts);
            v["uniqueness"] = {{"precondition_met", uniq.precondition_met},
                               {"unique", uniq.unique},
                               {"solutions_found", uniq.solutions_found},
                               {"max_separation", uniq.max_separation}};
            std::mt19937_64 rng(doc.options.seed);
            auto d = d_stability_falsifier(J, S, 100, rng);
            v["d_stability"] = d ? json{{"counterexample", *d}}
                                 : json{{"counterexample", nullptr},
                                        {"note", "no counterexample in 100 trials; "
                                                 "falsification only, not a proof"}};
        } catch (const Error& e) {
            caveats.push_back(std::string("stability analysis failed: ") + e.what());
        }
        verdicts.push_back(std::move(v));
    }
    out["equilibria"] = std::move(verdicts);
    out["caveats"] = std::move(caveats);
    out["provenance"] = "float";
    return out;
}

inline json robustness_json_report(const ModelDocument& doc) {
    auto rep = canonicalize(doc.kin, doc.options.lex);
    json out;
    json caveats = json::array();
    auto pairs = find_sf_pairs(doc.net, rep);
    json sf = json::array();
    for (const auto& p : pairs)
        sf.push_back({{"reactions", {p.reaction_a, p.reaction_b}},
                      {"species", doc.net.species[p.species]},
                      {"witnessing_layers", p.witnessing_layers},
                      {"linked", p.linked},
                      {"nonterminal", p.nonterminal}});
    out["sf_pairs"] = std::move(sf);

    SolveOptions opts;
    opts.seed = doc.options.seed;
    opts.starts = doc.options.starts;
    opts.tol_residual = doc.options.tol_residual;
    opts.tol_dedup = doc.options.tol_dedup;
    auto sols = solve_equilibrium(doc.net, doc.kin, SolveMode::positive, opts);
    out["equilibria_sampled"] = sols.size();

    DecompositionSpec spec = linkage_class_decomposition(doc.net);
    auto it = doc.decompositions.find("acr");
    if (it != doc.decompositions.end()) spec = it->second;
    try {
        auto acr = acr_audit(doc.net, doc.kin, spec, sols);
        json certs = json::array();
        for (const auto& c : acr.certificates)
            certs.push_back({{"species", doc.net.species[c.species]},
                             {"block", c.block},
                             {"pair", {c.pair.reaction_a, c.pair.reaction_b}},
                             {"theorem", c.theorem}});
        json names = json::array();
        for (std::size_t s : acr.acr_species) names.push_back(doc.net.species[s]);
        out["acr"] = {{"certificates", std::move(certs)},
                      {"species", std::move(names)},
                      {"empirical_ok", acr.empirical_ok},
                      {"caveats", acr.caveats}};
    } catch (const Error& e) {
        caveats.push_back(std::string("ACR audit unavailable: ") + e.what());
    }
    try {
        auto cls = classify(doc.net, rep);
        auto kd = kinetic_order_subspaces(doc.net, rep, cls);
        auto bcr = bcr_audit(doc.net, kd, sols);
        json names = json::array();
        for (std::size_t s : bcr.bcr_species) names.push_back(doc.net.species[s]);
        json basis = json::array();
        for (const RatVec& v : bcr.pz_basis) {
            json row = json::array();
            for (const Rational& x : v) row.push_back(detail::rational_json(x));
            basis.push_back(std::move(row));
        }
        out["bcr"] = {{"species", std::move(names)},
                      {"pz_basis", std::move(basis)},
                      {"all_species", bcr.all_species},
                      {"empirical_ok", bcr.empirical_ok},
                      {"caveats", bcr.caveats}};
    } catch (const Error& e) {
        caveats.push_back(std::string("BCR audit unavailable: ") + e.what());
    }
    out["caveats"] = std::move(caveats);
    out["provenance"] = "mixed";
    return out;
}

/// Dispatches one subcommand on a parsed model.
inline json run(const std::string& command, const ModelDocument& doc) {
    auto rep = canonicalize(doc.kin, doc.options.lex);
    if (command == "analyze") return analyze_report(doc.net);
    if (command == "canonical") return canonical_report(doc.net, rep);
    if (command == "star-msc") return star_msc_report(doc.net, rep);
    if (command == "indices") return indices_report(doc.net, rep);
    if (command == "decompose") return decompose_report(doc);
    if (command == "equilibria") return equilibria_report(doc);
    if (command == "stability") return stability_report(doc);
    if (command == "robustness") return robustness_json_report(doc);
    if (command == "all") {
        json out;
        out["analyze"] = analyze_report(doc.net);
        out["canonical"] = canonical_report(doc.net, rep);
        out["star_msc"] = star_msc_report(doc.net, rep);
        out["indices"] = indices_report(doc.net, rep);
        out["decompose"] = decompose_report(doc);
        out["equilibria"] = equilibria_report(doc);
        out["stability"] = stability_report(doc);
        out["robustness"] = robustness_json_report(doc);
        return out;
    }
    throw input_error("UnknownCommand", "no such subcommand: " + command);
}

/// Compact human-readable rendering of a report.
inline void render_text(const json& j, std::ostream& os, const std::string& indent = "") {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || (value.is_array() && !value.empty() &&
                                      (value[0].is_object() || value[0].is_array()))) {
                os << indent << key << ":\n";
                render_text(value, os, indent + "  ");
            } else {
                os << indent << key << ": " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& item : j) {
            os << indent << "-\n";
            render_text(item, os, indent + "  ");
        }
    } else {
        os << indent << j.dump() << "\n";
    }
}

}  // namespace pypl
