#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "pypl/error.hpp"
#include "pypl/network.hpp"
#include "pypl/rational.hpp"

namespace pypl {

/// One power-law monomial a * x^F of a poly-PL rate.
struct PolyTerm {
    Rational a;  // nonnegative coefficient
    RatVec F;    // kinetic-order vector, length m
};

struct ReactionKinetics {
    Rational k;  // positive rate constant
    std::vector<PolyTerm> terms;
};

/// Poly-PL kinetics: K_i(x) = k_i * sum_j a_{i,j} x^{F_{i,j}}.
struct PolyPLKinetics {
    std::vector<ReactionKinetics> reactions;

    std::size_t num_reactions() const { return reactions.size(); }
    std::size_t max_terms() const {
        std::size_t h = 0;
        for (const auto& rk : reactions) h = std::max(h, rk.terms.size());
        return h;
    }
};

inline void validate_kinetics(const PolyPLKinetics& kin, const Network& net) {
    if (kin.num_reactions() != net.num_reactions())
        throw input_error("SchemaError", "kinetics must assign a rate to every reaction");
    for (std::size_t i = 0; i < kin.num_reactions(); ++i) {
        const auto& rk = kin.reactions[i];
        if (rk.k <= 0)
            throw input_error("SchemaError",
                              "reaction " + std::to_string(i) + ": rate constant must be positive");
        bool has_positive = false;
        for (const auto& t : rk.terms) {
            if (t.a < 0)
                throw input_error("SchemaError",
                                  "reaction " + std::to_string(i) + ": negative term coefficient");
            if (t.a > 0) has_positive = true;
            if (t.F.size() != net.num_species())
                throw input_error("SchemaError", "reaction " + std::to_string(i) +
                                                     ": kinetic-order vector has wrong length");
        }
        if (!has_positive)
            throw input_error("SchemaError",
                              "reaction " + std::to_string(i) + ": needs a term with a > 0");
        for (std::size_t a = 0; a < rk.terms.size(); ++a)
            for (std::size_t b = a + 1; b < rk.terms.size(); ++b)
                if (rk.terms[a].F == rk.terms[b].F)
                    throw input_error("SchemaError", "reaction " + std::to_string(i) +
                                                         ": repeated kinetic-order vector");
    }
}

inline double pow_term(const std::vector<double>& x, const RatVec& F) {
    double v = 1.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        double e = to_double(F[s]);
        if (e != 0.0) v *= std::pow(x[s], e);
    }
    return v;
}

/// Rate vector K(x); x must be strictly positive.
inline std::vector<double> evaluate(const PolyPLKinetics& kin, const std::vector<double>& x) {
    for (double xi : x)
        if (!(xi > 0.0))
            throw precondition_error("NonPositiveConcentration", "evaluate needs x > 0");
    std::vector<double> rates(kin.num_reactions(), 0.0);
    for (std::size_t i = 0; i < kin.num_reactions(); ++i) {
        double sum = 0.0;
        for (const auto& t : kin.reactions[i].terms) sum += to_double(t.a) * pow_term(x, t.F);
        rates[i] = to_double(kin.reactions[i].k) * sum;
    }
    return rates;
}

enum class LexOrder { descending, ascending };

/// Canonical PL-representation: every reaction padded to h = max h_i terms by
/// splitting its lexicographically last term into equal parts.
struct CanonicalRep {
    std::size_t h = 0;
    LexOrder order = LexOrder::descending;
    std::vector<ReactionKinetics> reactions;  // each has exactly h terms

    std::size_t num_reactions() const { return reactions.size(); }

    /// Layer j (0-based) kinetic-order row of reaction i.
    const RatVec& layer_order(std::size_t j, std::size_t i) const {
        return reactions[i].terms[j].F;
    }
    /// Layer j power-law coefficient of reaction i (rate constant absorbed).
    Rational layer_coef(std::size_t j, std::size_t i) const {
        return reactions[i].k * reactions[i].terms[j].a;
    }

    std::vector<double> layer_rates(std::size_t j, const std::vector<double>& x) const {
        std::vector<double> rates(reactions.size());
        for (std::size_t i = 0; i < reactions.size(); ++i)
            rates[i] = to_double(layer_coef(j, i)) * pow_term(x, reactions[i].terms[j].F);
        return rates;
    }
};

inline CanonicalRep canonicalize(const PolyPLKinetics& kin,
                                 LexOrder order = LexOrder::descending) {
    CanonicalRep rep;
    rep.h = kin.max_terms();
    rep.order = order;
    rep.reactions.reserve(kin.num_reactions());
    for (const auto& rk : kin.reactions) {
        ReactionKinetics out;
        out.k = rk.k;
        out.terms = rk.terms;
        std::sort(out.terms.begin(), out.terms.end(), [&](const PolyTerm& a, const PolyTerm& b) {
            return order == LexOrder::descending ? b.F < a.F : a.F < b.F;
        });
        const std::size_t hi = out.terms.size();
        if (hi < rep.h) {
            PolyTerm last = out.terms.back();
            last.a /= Rational(rep.h - hi + 1);
            out.terms.back() = last;
            out.terms.insert(out.terms.end(), rep.h - hi, last);
        }
        rep.reactions.push_back(std::move(out));
    }
    return rep;
}

/// Collapses a canonical representation back to a minimal poly-PL kinetics
/// (merges repeated kinetic-order vectors, drops zero coefficients).
inline PolyPLKinetics flatten(const CanonicalRep& rep) {
    PolyPLKinetics kin;
    for (const auto& rk : rep.reactions) {
        ReactionKinetics out;
        out.k = rk.k;
        std::map<RatVec, Rational> merged;
        for (const auto& t : rk.terms) merged[t.F] += t.a;
        for (auto& [F, a] : merged)
            if (a != 0) out.terms.push_back({a, F});
        kin.reactions.push_back(std::move(out));
    }
    return kin;
}

struct KineticClassification {
    std::vector<bool> layer_rdk;  // per layer: PL-RDK flag
    // Per layer, a reactant complex where two reactions disagree (if any).
    std::vector<std::optional<std::size_t>> layer_offending_reactant;
    bool branching_coefficients_match = true;
    bool py_rdk = false;  // complex factorizable
    bool is_mass_action = false;
    std::vector<std::size_t> branching_reactants;  // reactant complexes with >= 2 reactions
};

inline KineticClassification classify(const Network& net, const CanonicalRep& rep) {
    KineticClassification cls;
    std::map<std::size_t, std::vector<std::size_t>> by_reactant;
    for (std::size_t i = 0; i < net.num_reactions(); ++i)
        by_reactant[net.reactions[i].first].push_back(i);
    for (const auto& [c, rxns] : by_reactant)
        if (rxns.size() >= 2) cls.branching_reactants.push_back(c);

    cls.layer_rdk.assign(rep.h, true);
    cls.layer_offending_reactant.assign(rep.h, std::nullopt);
    for (std::size_t j = 0; j < rep.h; ++j) {
        for (const auto& [c, rxns] : by_reactant) {
            for (std::size_t k = 1; k < rxns.size(); ++k) {
                if (rep.layer_order(j, rxns[k]) != rep.layer_order(j, rxns[0])) {
                    cls.layer_rdk[j] = false;
                    if (!cls.layer_offending_reactant[j]) cls.layer_offending_reactant[j] = c;
                }
            }
        }
    }
    for (std::size_t j = 0; j < rep.h && cls.branching_coefficients_match; ++j)
        for (std::size_t c : cls.branching_reactants) {
            const auto& rxns = by_reactant[c];
            for (std::size_t k = 1; k < rxns.size(); ++k)
                if (rep.reactions[rxns[k]].terms[j].a != rep.reactions[rxns[0]].terms[j].a)
                    cls.branching_coefficients_match = false;
        }
    cls.py_rdk = cls.branching_coefficients_match &&
                 std::all_of(cls.layer_rdk.begin(), cls.layer_rdk.end(), [](bool b) { return b; });

    if (rep.h == 1) {
        cls.is_mass_action = true;
        for (std::size_t i = 0; i < rep.num_reactions(); ++i) {
            const auto& t = rep.reactions[i].terms[0];
            const auto& reactant = net.complexes[net.reactions[i].first];
            if (t.a != 1) cls.is_mass_action = false;
            for (std::size_t s = 0; s < net.num_species(); ++s)
                if (t.F[s] != Rational(reactant[s])) cls.is_mass_action = false;
        }
    }
    return cls;
}

}  // namespace pypl
