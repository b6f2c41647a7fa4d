#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pypl/error.hpp"
#include "pypl/kinetics.hpp"
#include "pypl/network.hpp"
#include "pypl/star_msc.hpp"

namespace pypl {

/// Per-layer kinetic order data of a canonical representation whose layers are
/// all PL-RDK: the kinetic complex map ytilde and the span of its differences
/// along reactions.
struct LayerKineticOrders {
    std::vector<std::optional<RatVec>> ytilde;  // per complex; set at reactant complexes
    std::vector<RatVec> subspace_basis;         // basis of S~_j
    std::size_t s = 0;                          // s~_j = dim S~_j
    std::size_t deficiency = 0;                 // delta~_j = n - l - s~_j
};

struct KineticOrderData {
    std::vector<LayerKineticOrders> layers;
    std::size_t s_total = 0;           // sum of s~_j
    std::size_t deficiency_total = 0;  // delta~ = sum of delta~_j
};

/// Kinetic order subspaces S~_j = span{ ytilde_j(y') - ytilde_j(y) : y -> y' }
/// and the kinetic deficiency delta~ = sum_j (n - l - s~_j).
inline KineticOrderData kinetic_order_subspaces(const Network& net, const CanonicalRep& rep,
                                                const KineticClassification& cls) {
    auto srep = structural_report(net);
    if (!srep.cycle_terminal) {
        std::size_t bad = 0;
        for (std::size_t c = 0; c < net.num_complexes(); ++c)
            if (!srep.complex_is_reactant[c]) bad = c;
        throw precondition_error("NotCycleTerminal",
                                 "kinetic complex undefined at non-reactant complex " +
                                     complex_name(net, bad));
    }
    for (std::size_t j = 0; j < rep.h; ++j)
        if (!cls.layer_rdk[j])
            throw precondition_error(
                "LayerNotRDK", "layer " + std::to_string(j + 1) +
                                   " has differing kinetic-order rows at reactant complex " +
                                   complex_name(net, *cls.layer_offending_reactant[j]));

    KineticOrderData out;
    for (std::size_t j = 0; j < rep.h; ++j) {
        LayerKineticOrders layer;
        layer.ytilde.assign(net.num_complexes(), std::nullopt);
        for (std::size_t i = 0; i < net.num_reactions(); ++i)
            layer.ytilde[net.reactions[i].first] = rep.layer_order(j, i);
        std::vector<RatVec> diffs;
        for (const auto& [from, to] : net.reactions) {
            const RatVec& a = *layer.ytilde[from];
            const RatVec& b = *layer.ytilde[to];
            RatVec d(a.size());
            for (std::size_t s = 0; s < a.size(); ++s) d[s] = b[s] - a[s];
            diffs.push_back(std::move(d));
        }
        layer.subspace_basis = span_basis(diffs);
        layer.s = layer.subspace_basis.size();
        if (srep.n < srep.linkage_classes + layer.s)
            throw internal_error("NegativeDeficiency", "n - l - s~ went negative");
        layer.deficiency = srep.n - srep.linkage_classes - layer.s;
        out.s_total += layer.s;
        out.deficiency_total += layer.deficiency;
        out.layers.push_back(std::move(layer));
    }
    return out;
}

/// Poly T-matrices and the kinetic reactant deficiency delta^ = h*n_r - rank(T^).
struct ReactantDeficiencyData {
    std::vector<std::size_t> reactant_complexes;  // canonical order
    std::vector<RatMatrix> T;                     // per layer, m x n_r
    std::vector<RatMatrix> That;                  // per layer, (m + l) x n_r
    std::vector<std::size_t> qhat_layer;          // rank(That_j)
    std::vector<std::size_t> deficiency_layer;    // delta^_j = n_r - qhat_j
    std::size_t qhat = 0;                         // rank of the block-diagonal T^
    std::size_t deficiency = 0;                   // delta^ = h*n_r - qhat
};

inline ReactantDeficiencyData t_matrices(const Network& net, const CanonicalRep& rep) {
    auto srep = structural_report(net);
    const std::size_t m = net.num_species();
    ReactantDeficiencyData out;
    for (std::size_t c = 0; c < net.num_complexes(); ++c)
        if (srep.complex_is_reactant[c]) out.reactant_complexes.push_back(c);
    const std::size_t nr = out.reactant_complexes.size();

    for (std::size_t j = 0; j < rep.h; ++j) {
        RatMatrix T(m, nr);
        std::vector<bool> set(nr, false);
        std::vector<std::size_t> col_of(net.num_complexes(), SIZE_MAX);
        for (std::size_t q = 0; q < nr; ++q) col_of[out.reactant_complexes[q]] = q;
        for (std::size_t i = 0; i < net.num_reactions(); ++i) {
            std::size_t q = col_of[net.reactions[i].first];
            const RatVec& row = rep.layer_order(j, i);
            if (set[q]) {
                for (std::size_t s = 0; s < m; ++s)
                    if (T(s, q) != row[s])
                        throw precondition_error(
                            "LayerNotRDK",
                            "layer " + std::to_string(j + 1) +
                                " column ill-defined at branching reactant " +
                                complex_name(net, out.reactant_complexes[q]));
            } else {
                for (std::size_t s = 0; s < m; ++s) T(s, q) = row[s];
                set[q] = true;
            }
        }
        // L^T rows: characteristic vectors of the linkage classes
        RatMatrix Lt(srep.linkage_classes, nr);
        for (std::size_t q = 0; q < nr; ++q)
            Lt(srep.linkage_class_of[out.reactant_complexes[q]], q) = 1;
        RatMatrix That = RatMatrix::vstack(T, Lt);
        std::size_t qj = rank(That);
        out.qhat_layer.push_back(qj);
        out.deficiency_layer.push_back(nr - qj);
        out.qhat += qj;
        out.T.push_back(std::move(T));
        out.That.push_back(std::move(That));
    }
    out.deficiency = rep.h * nr - out.qhat;
    std::size_t sum = 0;
    for (std::size_t d : out.deficiency_layer) sum += d;
    if (sum != out.deficiency)
        throw internal_error("DeficiencySumMismatch", "delta^ != sum of per-layer delta^_j");
    return out;
}

struct TikFlags {
    bool py_tik = false;
    std::vector<bool> layer_pl_tik;  // per layer: delta^_j = 0
};

/// PY-TIK <=> complex factorizable (PY-RDK) and delta^ = 0; equivalently every
/// layer system is PL-TIK.
inline TikFlags is_py_tik(const ReactantDeficiencyData& rdd, const KineticClassification& cls) {
    TikFlags out;
    for (std::size_t d : rdd.deficiency_layer) out.layer_pl_tik.push_back(d == 0);
    out.py_tik = cls.py_rdk && rdd.deficiency == 0;
    return out;
}

/// Bounds relating the kinetic deficiency delta~* of the transformed
/// single-term system to the original system's indices.
struct KineticDeficiencyBounds {
    std::size_t delta_tilde = 0;       // original delta~
    std::size_t delta_tilde_star = 0;  // transformed delta~*
    std::size_t delta_star = 0;        // transformed (structural) delta*
    std::size_t upper_bound = 0;       // h(n - l) - 1
    bool upper_bound_holds = false;    // clause (i)
    bool h_at_least_m = false;
    bool lower_vs_delta_tilde_holds = true;  // clause (ii), when applicable
    bool network_open = false;               // s = m
    bool lower_vs_delta_star_holds = true;   // clause (iii), when applicable
};

inline KineticDeficiencyBounds kinetic_deficiency_bounds_check(const Network& net,
                                                               const StarMscTransform& t,
                                                               const KineticOrderData& kd) {
    auto srep = structural_report(net);
    KineticDeficiencyBounds out;
    out.delta_tilde = kd.deficiency_total;
    auto rep_star = canonicalize(t.transformed_kinetics);
    auto cls_star = classify(t.transformed, rep_star);
    auto kd_star = kinetic_order_subspaces(t.transformed, rep_star, cls_star);
    out.delta_tilde_star = kd_star.deficiency_total;
    out.delta_star = structural_report(t.transformed).deficiency;

    out.upper_bound = t.h * (srep.n - srep.linkage_classes) - 1;
    out.upper_bound_holds = out.delta_tilde_star <= out.upper_bound;
    out.h_at_least_m = t.h >= net.num_species();
    if (out.h_at_least_m) out.lower_vs_delta_tilde_holds = out.delta_tilde_star >= out.delta_tilde;
    out.network_open = srep.rank == net.num_species();
    if (out.network_open) out.lower_vs_delta_star_holds = out.delta_tilde_star >= out.delta_star;
    return out;
}

}  // namespace pypl
