#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pypl/error.hpp"
#include "pypl/matrix.hpp"

namespace pypl {

/// A CRN: species names, complexes as nonnegative integer species vectors,
/// reactions as (reactant complex index, product complex index) arcs.
struct Network {
    std::vector<std::string> species;                          // size m
    std::vector<std::vector<Int>> complexes;                   // size n, each length m
    std::vector<std::pair<std::size_t, std::size_t>> reactions;  // size r

    std::size_t num_species() const { return species.size(); }
    std::size_t num_complexes() const { return complexes.size(); }
    std::size_t num_reactions() const { return reactions.size(); }

    RatVec reaction_vector(std::size_t j) const {
        const auto& [from, to] = reactions[j];
        RatVec v(num_species());
        for (std::size_t s = 0; s < num_species(); ++s)
            v[s] = Rational(complexes[to][s] - complexes[from][s]);
        return v;
    }

    std::vector<RatVec> reaction_vectors() const {
        std::vector<RatVec> vs;
        vs.reserve(num_reactions());
        for (std::size_t j = 0; j < num_reactions(); ++j) vs.push_back(reaction_vector(j));
        return vs;
    }
};

inline std::string complex_name(const Network& net, std::size_t c) {
    std::string s;
    for (std::size_t i = 0; i < net.num_species(); ++i) {
        const Int& coef = net.complexes[c][i];
        if (coef == 0) continue;
        if (!s.empty()) s += " + ";
        if (coef != 1) s += coef.str();
        s += net.species[i];
    }
    return s.empty() ? "0" : s;
}

inline std::vector<std::string> validate_errors(const Network& net) {
    std::vector<std::string> errs;
    const std::size_t m = net.num_species(), n = net.num_complexes();
    for (std::size_t c = 0; c < n; ++c) {
        if (net.complexes[c].size() != m) {
            errs.push_back("SchemaError: complex " + std::to_string(c) + " has wrong length");
            return errs;
        }
        for (const Int& coef : net.complexes[c])
            if (coef < 0)
                errs.push_back("NegativeStoichiometry: complex " + complex_name(net, c));
    }
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
            if (net.complexes[c] == net.complexes[d])
                errs.push_back("DuplicateComplex: " + complex_name(net, c));
    std::vector<bool> complex_used(n, false), species_used(m, false);
    for (const auto& [from, to] : net.reactions) {
        if (from >= n || to >= n) {
            errs.push_back("SchemaError: reaction references unknown complex");
            continue;
        }
        if (from == to)
            errs.push_back("SelfLoopReaction: " + complex_name(net, from) + " -> itself");
        complex_used[from] = complex_used[to] = true;
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& rxn : net.reactions)
        if (!seen.insert(rxn).second)
            errs.push_back("DuplicateReaction: " + complex_name(net, rxn.first) + " -> " +
                           complex_name(net, rxn.second));
    for (std::size_t c = 0; c < n; ++c) {
        if (!complex_used[c]) errs.push_back("OrphanComplex: " + complex_name(net, c));
        for (std::size_t s = 0; s < m; ++s)
            if (net.complexes[c][s] > 0) species_used[s] = true;
    }
    for (std::size_t s = 0; s < m; ++s)
        if (!species_used[s]) errs.push_back("OrphanSpecies: " + net.species[s]);
    return errs;
}

/// Enforces all Network invariants and fixes the canonical complex order
/// (ascending lexicographic on stoichiometric vectors). Reaction order is
/// kept as declared.
inline Network validated(Network net) {
    auto errs = validate_errors(net);
    if (!errs.empty()) {
        std::string all;
        for (const auto& e : errs) all += (all.empty() ? "" : "; ") + e;
        throw input_error("InvalidNetwork", all);
    }
    const std::size_t n = net.num_complexes();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return net.complexes[a] < net.complexes[b];
    });
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<std::vector<Int>> sorted;
    sorted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sorted.push_back(net.complexes[order[i]]);
    net.complexes = std::move(sorted);
    for (auto& [from, to] : net.reactions) {
        from = pos[from];
        to = pos[to];
    }
    return net;
}

struct NetworkMatrices {
    RatMatrix Y;   // m x n, columns are complex vectors
    RatMatrix Ia;  // n x r, incidence
    RatMatrix N;   // m x r, stoichiometric (= Y * Ia)
};

inline NetworkMatrices matrices(const Network& net) {
    const std::size_t m = net.num_species(), n = net.num_complexes(), r = net.num_reactions();
    NetworkMatrices out{RatMatrix(m, n), RatMatrix(n, r), RatMatrix(m, r)};
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t s = 0; s < m; ++s) out.Y(s, c) = Rational(net.complexes[c][s]);
    for (std::size_t j = 0; j < r; ++j) {
        const auto& [from, to] = net.reactions[j];
        out.Ia(to, j) += 1;
        out.Ia(from, j) -= 1;
    }
    out.N = out.Y * out.Ia;
    return out;
}

struct StructuralReport {
    std::size_t n = 0;              // complexes
    std::size_t linkage_classes = 0;        // l
    std::size_t strong_linkage_classes = 0; // sl
    std::size_t terminal_classes = 0;       // t
    std::size_t rank = 0;                   // s = dim S
    std::size_t deficiency = 0;             // delta = n - l - s
    std::size_t n_reactant = 0;             // n_r
    bool weakly_reversible = false;
    bool t_minimal = false;
    bool cycle_terminal = false;
    std::vector<std::size_t> linkage_class_of;  // per complex
    std::vector<std::size_t> scc_of;            // per complex
    std::vector<bool> complex_terminal;         // per complex
    std::vector<bool> complex_is_reactant;      // per complex
    std::vector<std::size_t> terminal_complexes;
    std::vector<std::size_t> nonterminal_complexes;
};

namespace detail {

// Tarjan SCC over the complex digraph; returns scc id per complex, ids in
// reverse topological order of discovery (not relied upon).
inline std::size_t scc_ids(const Network& net, std::vector<std::size_t>& comp) {
    const std::size_t n = net.num_complexes();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [from, to] : net.reactions) adj[from].push_back(to);
    comp.assign(n, SIZE_MAX);
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::size_t next_index = 0, next_comp = 0;

    struct Frame {
        std::size_t v, child;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != SIZE_MAX) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child < adj[v].size()) {
                std::size_t w = adj[v][child++];
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if (w == v) break;
                    }
                    ++next_comp;
                }
                std::size_t done = v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[done]);
            }
        }
    }
    return next_comp;
}

}  // namespace detail

inline StructuralReport structural_report(const Network& net) {
    StructuralReport rep;
    const std::size_t n = net.num_complexes();
    rep.n = n;

    // Linkage classes: union-find over undirected arcs.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [from, to] : net.reactions) parent[find(from)] = find(to);
    std::vector<std::size_t> lc_id(n, SIZE_MAX);
    std::size_t num_lc = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t root = find(c);
        if (lc_id[root] == SIZE_MAX) lc_id[root] = num_lc++;
        lc_id[c] = lc_id[root];
    }
    rep.linkage_classes = num_lc;
    rep.linkage_class_of = lc_id;

    std::vector<std::size_t> scc;
    std::size_t num_scc = detail::scc_ids(net, scc);
    rep.strong_linkage_classes = num_scc;
    rep.scc_of = scc;

    std::vector<bool> scc_has_exit(num_scc, false);
    for (const auto& [from, to] : net.reactions)
        if (scc[from] != scc[to]) scc_has_exit[scc[from]] = true;
    rep.terminal_classes = 0;
    for (std::size_t k = 0; k < num_scc; ++k)
        if (!scc_has_exit[k]) ++rep.terminal_classes;
    rep.complex_terminal.assign(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        rep.complex_terminal[c] = !scc_has_exit[scc[c]];
        (rep.complex_terminal[c] ? rep.terminal_complexes : rep.nonterminal_complexes).push_back(c);
    }

    rep.complex_is_reactant.assign(n, false);
    for (const auto& [from, to] : net.reactions) rep.complex_is_reactant[from] = true;
    rep.n_reactant = std::count(rep.complex_is_reactant.begin(), rep.complex_is_reactant.end(), true);

    rep.rank = span_dim(net.reaction_vectors());
    if (n < rep.linkage_classes + rep.rank)
        throw internal_error("NegativeDeficiency", "n - l - s went negative");
    rep.deficiency = n - rep.linkage_classes - rep.rank;
    rep.weakly_reversible = (rep.strong_linkage_classes == rep.linkage_classes);
    rep.t_minimal = (rep.terminal_classes == rep.linkage_classes);
    rep.cycle_terminal = (rep.n_reactant == n);
    return rep;
}

/// Exact test: c - c0 in S.
inline bool stoichiometric_class_membership(const Network& net, const RatVec& c,
                                            const RatVec& c0) {
    if (c.size() != net.num_species() || c0.size() != net.num_species())
        throw input_error("DimensionMismatch", "concentration length != number of species");
    RatVec diff(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) diff[i] = c[i] - c0[i];
    return in_span(net.reaction_vectors(), diff);
}

/// Float version: projects c - c0 onto S-perp and compares against tol.
inline bool stoichiometric_class_membership(const Network& net, const std::vector<double>& c,
                                            const std::vector<double>& c0, double tol = 1e-9) {
    if (c.size() != net.num_species() || c0.size() != net.num_species())
        throw input_error("DimensionMismatch", "concentration length != number of species");
    auto perp = orthogonal_complement(net.reaction_vectors(), net.num_species());
    double scale = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        scale = std::max({scale, std::abs(c[i]), std::abs(c0[i])});
    for (const RatVec& w : perp) {
        double dot = 0.0, wnorm = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            double wi = to_double(w[i]);
            dot += wi * (c[i] - c0[i]);
            wnorm += wi * wi;
        }
        if (std::abs(dot) > tol * scale * std::sqrt(wnorm)) return false;
    }
    return true;
}

}  // namespace pypl
