#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pypl/equilibria.hpp"
#include "pypl/error.hpp"
#include "pypl/network.hpp"

namespace pypl {

/// A decomposition: partition of the reaction indices into nonempty blocks.
struct DecompositionSpec {
    std::vector<std::vector<std::size_t>> blocks;
};

inline void validate_partition(const Network& net, const DecompositionSpec& spec) {
    std::vector<bool> seen(net.num_reactions(), false);
    std::size_t covered = 0;
    for (const auto& block : spec.blocks) {
        if (block.empty()) throw input_error("InvalidPartition", "empty block");
        for (std::size_t j : block) {
            if (j >= net.num_reactions())
                throw input_error("InvalidPartition",
                                  "reaction index " + std::to_string(j) + " out of range");
            if (seen[j])
                throw input_error("InvalidPartition",
                                  "reaction " + std::to_string(j) + " appears in two blocks");
            seen[j] = true;
            ++covered;
        }
    }
    if (covered != net.num_reactions())
        throw input_error("InvalidPartition", "blocks do not cover every reaction");
}

/// The built-in decomposition by linkage classes of the reactant complexes.
inline DecompositionSpec linkage_class_decomposition(const Network& net) {
    auto rep = structural_report(net);
    DecompositionSpec spec;
    spec.blocks.assign(rep.linkage_classes, {});
    for (std::size_t j = 0; j < net.num_reactions(); ++j)
        spec.blocks[rep.linkage_class_of[net.reactions[j].first]].push_back(j);
    spec.blocks.erase(std::remove_if(spec.blocks.begin(), spec.blocks.end(),
                                     [](const auto& b) { return b.empty(); }),
                      spec.blocks.end());
    return spec;
}

/// Structural numbers of the subnetwork induced by one block of reactions.
struct SubnetworkNumbers {
    std::size_t n = 0;               // complexes occurring in the block
    std::size_t linkage_classes = 0;
    std::size_t rank = 0;            // s_i
    std::size_t deficiency = 0;      // delta_i = n_i - l_i - s_i
    bool weakly_reversible = false;
    std::set<std::size_t> complexes;
};

inline SubnetworkNumbers subnetwork_numbers(const Network& net,
                                            const std::vector<std::size_t>& block) {
    Network sub;
    sub.species = net.species;
    std::map<std::size_t, std::size_t> remap;
    SubnetworkNumbers out;
    for (std::size_t j : block) {
        const auto& [from, to] = net.reactions[j];
        out.complexes.insert(from);
        out.complexes.insert(to);
    }
    for (std::size_t c : out.complexes) {
        remap[c] = sub.complexes.size();
        sub.complexes.push_back(net.complexes[c]);
    }
    for (std::size_t j : block)
        sub.reactions.emplace_back(remap[net.reactions[j].first], remap[net.reactions[j].second]);
    auto rep = structural_report(sub);
    out.n = rep.n;
    out.linkage_classes = rep.linkage_classes;
    out.rank = rep.rank;
    out.deficiency = rep.deficiency;
    out.weakly_reversible = rep.weakly_reversible;
    return out;
}

struct IndependenceVerdict {
    bool independent = false;  // s = sum s_i
    std::size_t s = 0;
    std::size_t s_sum = 0;
    std::size_t deficiency = 0;
    std::size_t deficiency_sum = 0;
    std::vector<SubnetworkNumbers> blocks;
};

/// Independence: the stoichiometric subspace is the direct sum of the blocks'
/// (checked by the rank identity s = sum s_i). When independent, delta <= sum
/// delta_i must hold; a violation is an internal invariant error.
inline IndependenceVerdict check_independent(const Network& net, const DecompositionSpec& spec) {
    validate_partition(net, spec);
    auto rep = structural_report(net);
    IndependenceVerdict out;
    out.s = rep.rank;
    out.deficiency = rep.deficiency;
    for (const auto& block : spec.blocks) {
        out.blocks.push_back(subnetwork_numbers(net, block));
        out.s_sum += out.blocks.back().rank;
        out.deficiency_sum += out.blocks.back().deficiency;
    }
    out.independent = out.s == out.s_sum;
    if (out.independent && out.deficiency > out.deficiency_sum)
        throw internal_error("DeficiencyInequalityViolated",
                             "independent decomposition with delta > sum delta_i");
    return out;
}

struct IncidenceIndependenceVerdict {
    bool incidence_independent = false;  // n - l = sum (n_i - l_i)
    std::size_t n_minus_l = 0;
    std::size_t n_minus_l_sum = 0;
    std::size_t deficiency = 0;
    std::size_t deficiency_sum = 0;
    bool c_decomposition = false;  // complex sets pairwise disjoint
    std::vector<SubnetworkNumbers> blocks;
};

/// Incidence independence: the image of the incidence map is the direct sum of
/// the blocks' (rank identity n - l = sum (n_i - l_i)). When it holds, delta >=
/// sum delta_i must hold; a violation is an internal invariant error.
inline IncidenceIndependenceVerdict check_incidence_independent(const Network& net,
                                                                const DecompositionSpec& spec) {
    validate_partition(net, spec);
    auto rep = structural_report(net);
    IncidenceIndependenceVerdict out;
    out.n_minus_l = rep.n - rep.linkage_classes;
    out.deficiency = rep.deficiency;
    std::set<std::size_t> seen;
    out.c_decomposition = true;
    for (const auto& block : spec.blocks) {
        out.blocks.push_back(subnetwork_numbers(net, block));
        const auto& b = out.blocks.back();
        out.n_minus_l_sum += b.n - b.linkage_classes;
        out.deficiency_sum += b.deficiency;
        for (std::size_t c : b.complexes) out.c_decomposition &= seen.insert(c).second;
    }
    out.incidence_independent = out.n_minus_l == out.n_minus_l_sum;
    if (out.c_decomposition && !out.incidence_independent)
        throw internal_error("CDecompositionNotIncidenceIndependent",
                             "disjoint complex sets must give an incidence independent "
                             "decomposition");
    if (out.incidence_independent && out.deficiency < out.deficiency_sum)
        throw internal_error("DeficiencyInequalityViolated",
                             "incidence independent decomposition with delta < sum delta_i");
    return out;
}

/// Restriction of a kinetics to one reaction block (indices keep block order).
inline PolyPLKinetics restrict_kinetics(const PolyPLKinetics& kin,
                                        const std::vector<std::size_t>& block) {
    PolyPLKinetics out;
    for (std::size_t j : block) out.reactions.push_back(kin.reactions[j]);
    return out;
}

inline Network restrict_network(const Network& net, const std::vector<std::size_t>& block) {
    Network sub;
    sub.species = net.species;
    std::map<std::size_t, std::size_t> remap;
    std::set<std::size_t> used;
    for (std::size_t j : block) {
        used.insert(net.reactions[j].first);
        used.insert(net.reactions[j].second);
    }
    for (std::size_t c : used) {
        remap[c] = sub.complexes.size();
        sub.complexes.push_back(net.complexes[c]);
    }
    for (std::size_t j : block)
        sub.reactions.emplace_back(remap[net.reactions[j].first], remap[net.reactions[j].second]);
    return sub;
}

/// Pointwise numerical checks of the equilibria-set relations between a system
/// and its decomposition blocks. Everything is verified at solved witnesses,
/// never by symbolic set manipulation.
struct EquilibriaRelationsReport {
    bool independent = false;
    bool incidence_independent = false;
    // (a) every point balancing all blocks is a global equilibrium
    std::size_t intersection_witnesses = 0;
    double max_global_f_residual = 0.0;
    bool intersection_contained = true;
    // (b) under independence, global equilibria balance every block
    std::size_t global_witnesses = 0;
    double max_blockwise_f_residual = 0.0;
    bool equality_holds = true;
    // (c) under incidence independence, same for complex balancing
    double max_blockwise_g_residual = 0.0;
    bool complex_balance_equality_holds = true;
    std::vector<std::string> solver_failures;
};

inline EquilibriaRelationsReport equilibria_set_relations(const Network& net,
                                                          const PolyPLKinetics& kin,
                                                          const DecompositionSpec& spec,
                                                          const SolveOptions& opts = {}) {
    auto indep = check_independent(net, spec);
    auto inc = check_incidence_independent(net, spec);
    EquilibriaRelationsReport out;
    out.independent = indep.independent;
    out.incidence_independent = inc.incidence_independent;
    const double tol = 1e-9;

    auto blockwise_residuals = [&](const std::vector<double>& x, double& f_res, double& g_res) {
        f_res = g_res = 0.0;
        for (const auto& block : spec.blocks) {
            Network sub = restrict_network(net, block);
            PolyPLKinetics sk = restrict_kinetics(kin, block);
            f_res = std::max(f_res, detail::inf_norm(species_formation_rate(sub, sk, x)));
            g_res = std::max(g_res, detail::inf_norm(complex_formation_rate(sub, sk, x)));
        }
    };

    // (a) solve each block, keep points that balance every block simultaneously
    SolveOptions block_opts = opts;
    std::vector<EquilibriumRecord> candidates;
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        Network sub = restrict_network(net, spec.blocks[b]);
        PolyPLKinetics sk = restrict_kinetics(kin, spec.blocks[b]);
        block_opts.seed = opts.seed + b + 1;
        auto sols = solve_equilibrium(sub, sk, SolveMode::positive, block_opts);
        if (sols.empty())
            out.solver_failures.push_back("block " + std::to_string(b) + ": no equilibrium found");
        for (auto& rec : sols) candidates.push_back(std::move(rec));
    }
    for (const auto& rec : candidates) {
        double f_res, g_res;
        blockwise_residuals(rec.c, f_res, g_res);
        double scale = detail::residual_scale(kin, rec.c);
        if (f_res > tol * scale) continue;  // not in the intersection
        ++out.intersection_witnesses;
        double global = detail::inf_norm(species_formation_rate(net, kin, rec.c));
        out.max_global_f_residual = std::max(out.max_global_f_residual, global);
        // blockwise residuals add up in the global rate
        out.intersection_contained &= global <= spec.blocks.size() * tol * scale;
    }

    // (b)/(c) solve globally and test blockwise balance at the witnesses
    auto global_sols = solve_equilibrium(net, kin, SolveMode::positive, opts);
    if (global_sols.empty()) out.solver_failures.push_back("global: no equilibrium found");
    for (const auto& rec : global_sols) {
        ++out.global_witnesses;
        double f_res, g_res;
        blockwise_residuals(rec.c, f_res, g_res);
        double scale = detail::residual_scale(kin, rec.c);
        out.max_blockwise_f_residual = std::max(out.max_blockwise_f_residual, f_res);
        if (out.independent) out.equality_holds &= f_res <= tol * scale;
        if (out.incidence_independent && rec.complex_balanced) {
            out.max_blockwise_g_residual = std::max(out.max_blockwise_g_residual, g_res);
            out.complex_balance_equality_holds &= g_res <= tol * scale;
        }
    }
    return out;
}

}  // namespace pypl
