#pragma once

// Shared model fixtures and random-system generators for the test suites.

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pypl/kinetics.hpp"
#include "pypl/network.hpp"

namespace fixtures {

using namespace pypl;

struct Model {
    Network net;
    PolyPLKinetics kin;
};

inline RatVec rv(std::initializer_list<int> xs) {
    RatVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

// X <-> 2X+Y, Y <-> X+2Y with the poly-PL kinetics
//   k1 x(1+x)(1+y), k2 y(1+x)(1+y), k3 x(1+y), k4 y(1+x).
inline Model example1(Rational k1 = 1, Rational k2 = 1, Rational k3 = 1, Rational k4 = 1) {
    Network net;
    net.species = {"X", "Y"};
    net.complexes = {{1, 0}, {2, 1}, {0, 1}, {1, 2}};  // X, 2X+Y, Y, X+2Y
    net.reactions = {{0, 1}, {1, 0}, {2, 3}, {3, 2}};
    Model m;
    m.net = validated(net);
    auto terms = [](std::initializer_list<std::pair<int, RatVec>> ts) {
        std::vector<PolyTerm> out;
        for (auto& [a, F] : ts) out.push_back({Rational(a), F});
        return out;
    };
    m.kin.reactions = {
        {k1, terms({{1, rv({1, 0})}, {1, rv({2, 0})}, {1, rv({1, 1})}, {1, rv({2, 1})}})},
        {k2, terms({{1, rv({0, 1})}, {1, rv({1, 1})}, {1, rv({0, 2})}, {1, rv({1, 2})}})},
        {k3, terms({{1, rv({1, 1})}, {1, rv({1, 0})}})},
        {k4, terms({{1, rv({1, 1})}, {1, rv({0, 1})}})},
    };
    validate_kinetics(m.kin, m.net);
    return m;
}

// S1+S2 <-> S4 <-> S1+S3 with the poly-PL kinetics derived from the
// Michaelis-Menten rational rates; c3 is the numeric stand-in for the inner
// constant appearing in the polynomial coefficients.
inline Model example2(Rational k1 = 1, Rational k2 = 1, Rational c3 = 1) {
    Network net;
    net.species = {"S1", "S2", "S3", "S4"};
    net.complexes = {{1, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 1, 0}};  // S1+S2, S4, S1+S3
    net.reactions = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
    Model m;
    m.net = validated(net);
    m.kin.reactions = {
        {k1,
         {{Rational(1), rv({1, 1, 0, 0})}, {c3, rv({1, 2, 0, 0})}, {Rational(1), rv({1, 1, 0, 1})}}},
        {k2,
         {{Rational(1), rv({0, 0, 1, 0})}, {c3, rv({0, 1, 1, 0})}, {Rational(1), rv({0, 0, 1, 1})}}},
        {k1, {{Rational(1), rv({0, 1, 0, 0})}}},
        {k2, {{Rational(1), rv({0, 0, 0, 1})}}},
    };
    validate_kinetics(m.kin, m.net);
    return m;
}

// Reversible pair A <-> B with power-law orders fA at A and fB at B (h = 1).
inline Model two_cycle(RatVec fA, RatVec fB, Rational k1 = 1, Rational k2 = 1) {
    Network net;
    net.species = {"A", "B"};
    net.complexes = {{1, 0}, {0, 1}};
    net.reactions = {{0, 1}, {1, 0}};
    Model m;
    m.net = validated(net);
    m.kin.reactions = {
        {k1, {{Rational(1), std::move(fA)}}},
        {k2, {{Rational(1), std::move(fB)}}},
    };
    validate_kinetics(m.kin, m.net);
    return m;
}

inline Model mass_action_two_cycle(Rational k1 = 1, Rational k2 = 1) {
    return two_cycle(rv({1, 0}), rv({0, 1}), k1, k2);
}

// A -> B mass action (not weakly reversible).
inline Model irreversible_ab(Rational k = 1) {
    Network net;
    net.species = {"A", "B"};
    net.complexes = {{1, 0}, {0, 1}};
    net.reactions = {{0, 1}};
    Model m;
    m.net = validated(net);
    m.kin.reactions = {{k, {{Rational(1), rv({1, 0})}}}};
    validate_kinetics(m.kin, m.net);
    return m;
}

// ---- random generators (all deterministic under the given engine) ----

inline std::vector<Int> random_complex(std::mt19937_64& rng, std::size_t m, int max_coef) {
    std::uniform_int_distribution<int> coef(0, max_coef);
    std::vector<Int> v(m);
    bool nonzero = false;
    for (auto& c : v) {
        int x = coef(rng);
        c = x;
        nonzero |= (x != 0);
    }
    if (!nonzero) v[rng() % m] = 1;
    return v;
}

// Random valid network: each linkage class is a directed cycle over distinct
// complexes, so the result is weakly reversible by construction.
inline Network random_weakly_reversible_network(std::mt19937_64& rng, std::size_t max_species = 4,
                                                std::size_t max_complexes = 6) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::size_t m = 2 + rng() % (max_species - 1);
        std::size_t n = 2 + rng() % (max_complexes - 1);
        std::set<std::vector<Int>> pool;
        while (pool.size() < n) pool.insert(random_complex(rng, m, 3));
        Network net;
        net.species.clear();
        for (std::size_t s = 0; s < m; ++s) net.species.push_back("X" + std::to_string(s + 1));
        net.complexes.assign(pool.begin(), pool.end());
        // split complexes into cycles of size >= 2
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::size_t at = 0;
        while (at < n) {
            std::size_t remaining = n - at;
            std::size_t len = remaining < 4 ? remaining : 2 + rng() % (remaining - 1);
            if (remaining - len == 1) len = remaining;
            if (len < 2) len = remaining;
            for (std::size_t k = 0; k < len; ++k)
                net.reactions.emplace_back(idx[at + k], idx[at + (k + 1) % len]);
            at += len;
        }
        if (!validate_errors(net).empty()) continue;
        return validated(net);
    }
    throw std::runtime_error("random network generation failed");
}

// Random network that need not be weakly reversible: random arcs over the
// complex pool, patched so every complex is used.
inline Network random_network(std::mt19937_64& rng, std::size_t max_species = 4,
                              std::size_t max_complexes = 6) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::size_t m = 2 + rng() % (max_species - 1);
        std::size_t n = 2 + rng() % (max_complexes - 1);
        std::set<std::vector<Int>> pool;
        while (pool.size() < n) pool.insert(random_complex(rng, m, 3));
        Network net;
        for (std::size_t s = 0; s < m; ++s) net.species.push_back("X" + std::to_string(s + 1));
        net.complexes.assign(pool.begin(), pool.end());
        std::set<std::pair<std::size_t, std::size_t>> arcs;
        std::size_t want = std::min(n + rng() % (n + 1), n * (n - 1));
        while (arcs.size() < want) {
            std::size_t a = rng() % n, b = rng() % n;
            if (a != b) arcs.insert({a, b});
        }
        std::vector<bool> used(n, false);
        for (auto& [a, b] : arcs) used[a] = used[b] = true;
        for (std::size_t c = 0; c < n; ++c)
            if (!used[c]) arcs.insert({c, (c + 1) % n});
        net.reactions.assign(arcs.begin(), arcs.end());
        if (!validate_errors(net).empty()) continue;
        return validated(net);
    }
    throw std::runtime_error("random network generation failed");
}

inline Rational random_small_rational(std::mt19937_64& rng, int lo = -2, int hi = 2) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, 2);
    return Rational(num(rng), den(rng));
}

// Random poly-PL kinetics on the network with at most h_max terms/reaction.
inline PolyPLKinetics random_kinetics(std::mt19937_64& rng, const Network& net,
                                      std::size_t h_max = 3) {
    PolyPLKinetics kin;
    std::uniform_int_distribution<int> hdist(1, static_cast<int>(h_max));
    std::uniform_int_distribution<int> kdist(1, 4);
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        ReactionKinetics rk;
        rk.k = Rational(kdist(rng), kdist(rng));
        std::size_t hi = hdist(rng);
        std::set<RatVec> orders;
        while (orders.size() < hi) {
            RatVec F(net.num_species());
            for (auto& f : F) f = random_small_rational(rng);
            orders.insert(F);
        }
        for (const auto& F : orders) rk.terms.push_back({Rational(kdist(rng)), F});
        kin.reactions.push_back(std::move(rk));
    }
    validate_kinetics(kin, net);
    return kin;
}

// Random PL-RDK kinetics (h = 1, one shared kinetic-order row per reactant).
inline PolyPLKinetics random_rdk_kinetics(std::mt19937_64& rng, const Network& net) {
    std::vector<RatVec> order_of_complex(net.num_complexes());
    for (auto& F : order_of_complex) {
        F.resize(net.num_species());
        for (auto& f : F) f = random_small_rational(rng);
    }
    std::uniform_int_distribution<int> kdist(1, 4);
    PolyPLKinetics kin;
    for (const auto& [from, to] : net.reactions) {
        ReactionKinetics rk;
        rk.k = Rational(kdist(rng), kdist(rng));
        rk.terms.push_back({Rational(1), order_of_complex[from]});
        kin.reactions.push_back(std::move(rk));
    }
    validate_kinetics(kin, net);
    return kin;
}

// Random PY-RDK kinetics with h layers: every reactant complex carries h
// distinct shared rows, all term coefficients 1.
inline PolyPLKinetics random_rdk_kinetics_multilayer(std::mt19937_64& rng, const Network& net,
                                                     std::size_t h) {
    std::vector<std::vector<RatVec>> rows(net.num_complexes());
    for (auto& per : rows) {
        RatVec base(net.num_species());
        for (auto& f : base) f = random_small_rational(rng);
        for (std::size_t j = 0; j < h; ++j) {
            RatVec r = base;
            r[0] += Rational(j);
            per.push_back(std::move(r));
        }
    }
    std::uniform_int_distribution<int> kdist(1, 4);
    PolyPLKinetics kin;
    for (const auto& [from, to] : net.reactions) {
        ReactionKinetics rk;
        rk.k = Rational(kdist(rng), kdist(rng));
        for (const auto& r : rows[from]) rk.terms.push_back({Rational(1), r});
        kin.reactions.push_back(std::move(rk));
    }
    validate_kinetics(kin, net);
    return kin;
}

// Applies a species permutation to a model: species s goes to slot perm[s].
inline Model permute_species(const Model& m, const std::vector<std::size_t>& perm) {
    Model out;
    Network net;
    net.species.resize(m.net.num_species());
    for (std::size_t s = 0; s < perm.size(); ++s) net.species[perm[s]] = m.net.species[s];
    for (const auto& cx : m.net.complexes) {
        std::vector<Int> p(cx.size());
        for (std::size_t s = 0; s < perm.size(); ++s) p[perm[s]] = cx[s];
        net.complexes.push_back(std::move(p));
    }
    net.reactions = m.net.reactions;
    out.net = validated(net);
    out.kin = m.kin;
    for (auto& rk : out.kin.reactions)
        for (auto& t : rk.terms) {
            RatVec p(t.F.size());
            for (std::size_t s = 0; s < perm.size(); ++s) p[perm[s]] = t.F[s];
            t.F = std::move(p);
        }
    validate_kinetics(out.kin, out.net);
    return out;
}

inline PolyPLKinetics mass_action_kinetics(const Network& net, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kdist(1, 4);
    PolyPLKinetics kin;
    for (const auto& [from, to] : net.reactions) {
        ReactionKinetics rk;
        rk.k = Rational(kdist(rng), kdist(rng));
        RatVec F(net.num_species());
        for (std::size_t s = 0; s < net.num_species(); ++s)
            F[s] = Rational(net.complexes[from][s]);
        rk.terms.push_back({Rational(1), F});
        kin.reactions.push_back(std::move(rk));
    }
    validate_kinetics(kin, net);
    return kin;
}

inline std::vector<double> random_positive_point(std::mt19937_64& rng, std::size_t m,
                                                 double lo = 0.2, double hi = 3.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> x(m);
    for (auto& xi : x) xi = dist(rng);
    return x;
}

}  // namespace fixtures
