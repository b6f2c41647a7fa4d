#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "pypl/kinetics.hpp"
#include "pypl/network.hpp"

namespace pypl {

/// S-invariant termwise addition of reactions via maximal stoichiometric
/// coefficients: replica j carries layer j+1 of the canonical representation,
/// with every complex translated by j*M in each species.
struct StarMscTransform {
    Int M;              // 1 + maximal stoichiometric coefficient
    std::size_t h = 1;  // replica count driver
    Network transformed;
    PolyPLKinetics transformed_kinetics;  // single-term power-law kinetics on N*
    // replica_reaction[j][i] = index in transformed.reactions of the replica-j
    // copy of original reaction i (replica 0 is the original network).
    std::vector<std::vector<std::size_t>> replica_reaction;
};

inline StarMscTransform star_msc_transform(const Network& net, const CanonicalRep& rep) {
    if (rep.num_reactions() != net.num_reactions())
        throw input_error("SchemaError", "canonical representation does not match network");
    StarMscTransform out;
    out.h = rep.h;
    Int max_coef = 0;
    for (const auto& cx : net.complexes)
        for (const Int& c : cx) max_coef = std::max(max_coef, c);
    out.M = max_coef + 1;

    const std::size_t n = net.num_complexes(), r = net.num_reactions();
    Network star;
    star.species = net.species;
    for (std::size_t j = 0; j < rep.h; ++j) {
        Int shift = out.M * Int(j);
        for (const auto& cx : net.complexes) {
            std::vector<Int> translated = cx;
            for (Int& c : translated) c += shift;
            star.complexes.push_back(std::move(translated));
        }
        for (const auto& [from, to] : net.reactions)
            star.reactions.emplace_back(j * n + from, j * n + to);
    }
    out.transformed = validated(std::move(star));

    out.replica_reaction.assign(rep.h, std::vector<std::size_t>(r));
    for (std::size_t j = 0; j < rep.h; ++j)
        for (std::size_t i = 0; i < r; ++i) {
            out.replica_reaction[j][i] = j * r + i;  // validated() keeps reaction order
            ReactionKinetics rk;
            rk.k = rep.layer_coef(j, i);
            if (rk.k <= 0)
                throw internal_error("ZeroLayerCoefficient",
                                     "canonical layer coefficient must be positive");
            rk.terms.push_back({Rational(1), rep.reactions[i].terms[j].F});
            out.transformed_kinetics.reactions.push_back(std::move(rk));
        }
    validate_kinetics(out.transformed_kinetics, out.transformed);
    return out;
}

/// The partition of N* reactions into the h replica subnetworks. The blocks
/// have pairwise disjoint complex sets, so they form a C-decomposition; that
/// is re-checked here and certified in the result.
struct ReplicaDecomposition {
    std::vector<std::vector<std::size_t>> blocks;  // reaction indices per replica
    bool c_decomposition = false;
};

inline ReplicaDecomposition replica_decomposition(const StarMscTransform& t) {
    ReplicaDecomposition out;
    out.blocks = t.replica_reaction;
    std::set<std::size_t> seen;
    out.c_decomposition = true;
    for (const auto& block : out.blocks) {
        std::set<std::size_t> complexes_here;
        for (std::size_t j : block) {
            complexes_here.insert(t.transformed.reactions[j].first);
            complexes_here.insert(t.transformed.reactions[j].second);
        }
        for (std::size_t c : complexes_here)
            if (!seen.insert(c).second) out.c_decomposition = false;
    }
    if (!out.c_decomposition)
        throw internal_error("ReplicaOverlap", "replica complex sets must be disjoint");
    return out;
}

}  // namespace pypl
