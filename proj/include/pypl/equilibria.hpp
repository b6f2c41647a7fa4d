#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pypl/error.hpp"
#include "pypl/kinetic_indices.hpp"
#include "pypl/kinetics.hpp"
#include "pypl/linprog.hpp"
#include "pypl/network.hpp"

namespace pypl {

/// f(x) = N K(x), the right-hand side of the species ODE.
inline std::vector<double> species_formation_rate(const Network& net, const PolyPLKinetics& kin,
                                                  const std::vector<double>& x) {
    auto rates = evaluate(kin, x);
    std::vector<double> f(net.num_species(), 0.0);
    for (std::size_t j = 0; j < net.num_reactions(); ++j) {
        const auto& [from, to] = net.reactions[j];
        for (std::size_t s = 0; s < f.size(); ++s)
            f[s] += rates[j] * to_double(Rational(net.complexes[to][s] - net.complexes[from][s]));
    }
    return f;
}

/// g(x) = I_a K(x); the identity Y g = f is re-checked on every call.
inline std::vector<double> complex_formation_rate(const Network& net, const PolyPLKinetics& kin,
                                                  const std::vector<double>& x) {
    auto rates = evaluate(kin, x);
    std::vector<double> g(net.num_complexes(), 0.0);
    for (std::size_t j = 0; j < net.num_reactions(); ++j) {
        const auto& [from, to] = net.reactions[j];
        g[to] += rates[j];
        g[from] -= rates[j];
    }
    auto f = species_formation_rate(net, kin, x);
    double scale = 1.0;
    for (double r : rates) scale = std::max(scale, std::abs(r));
    for (std::size_t s = 0; s < net.num_species(); ++s) {
        double yg = 0.0;
        for (std::size_t c = 0; c < net.num_complexes(); ++c)
            yg += to_double(Rational(net.complexes[c][s])) * g[c];
        if (std::abs(yg - f[s]) > 1e-9 * scale)
            throw internal_error("FormationRateMismatch", "Y*g(x) != f(x)");
    }
    return g;
}

/// dK/dc: r x m matrix of analytic partial derivatives of the rate vector.
inline Eigen::MatrixXd rate_jacobian(const PolyPLKinetics& kin, const std::vector<double>& x) {
    for (double xi : x)
        if (!(xi > 0.0))
            throw precondition_error("NonPositiveConcentration", "rate_jacobian needs x > 0");
    const std::size_t r = kin.num_reactions(), m = x.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r, m);
    for (std::size_t i = 0; i < r; ++i) {
        double k = to_double(kin.reactions[i].k);
        for (const auto& t : kin.reactions[i].terms) {
            double mono = to_double(t.a) * pow_term(x, t.F);
            for (std::size_t s = 0; s < m; ++s) {
                double e = to_double(t.F[s]);
                if (e != 0.0) d(i, s) += k * mono * e / x[s];
            }
        }
    }
    return d;
}

/// Replaces the rate constants of a kinetics (exact conversion of doubles).
inline PolyPLKinetics with_rates(PolyPLKinetics kin, const std::vector<double>& k) {
    if (k.size() != kin.num_reactions())
        throw input_error("DimensionMismatch", "rate vector length != number of reactions");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0))
            throw input_error("SchemaError", "rate constants must be positive");
        kin.reactions[i].k = rational_from_double(k[i]);
    }
    return kin;
}

enum class SolveMode { positive, complex_balanced, pl_complex_balanced };

struct SolveOptions {
    std::size_t starts = 32;
    std::uint64_t seed = 0;
    double tol_residual = 1e-9;  // relative to 1 + ||K(x)||_inf
    double tol_dedup = 1e-6;     // relative dedup distance
    int max_iterations = 200;
    int max_halvings = 60;
    // Converged points with a coordinate below this are escapes to the
    // boundary of the positive orthant, not positive equilibria.
    double positivity_floor = 1e-6;
    // When set, solutions are constrained to the stoichiometric class of this
    // point (equations w.(x - anchor) = 0 for a basis w of S-perp).
    std::optional<std::vector<double>> class_anchor;
};

struct EquilibriumRecord {
    std::vector<double> c;
    double f_residual = 0.0;
    double g_residual = 0.0;
    std::vector<double> layer_g_residuals;
    bool positive = false;
    bool complex_balanced = false;
    bool pl_complex_balanced = false;
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

// Residual scale ||K(x)||_inf for relative tolerances. Keeping the scale
// proportional to the rates (no additive constant) stops boundary escapes,
// where all rates are tiny, from passing an effectively absolute test.
inline double residual_scale(const PolyPLKinetics& kin, const std::vector<double>& x) {
    double n = inf_norm(evaluate(kin, x));
    return n > 0.0 ? n : 1.0;
}

}  // namespace detail

/// Classifies a positive point by evaluating every residual kind.
inline EquilibriumRecord classify_point(const Network& net, const PolyPLKinetics& kin,
                                        const CanonicalRep& rep, const std::vector<double>& x,
                                        double tol_residual = 1e-9) {
    EquilibriumRecord rec;
    rec.c = x;
    rec.f_residual = detail::inf_norm(species_formation_rate(net, kin, x));
    rec.g_residual = detail::inf_norm(complex_formation_rate(net, kin, x));
    for (std::size_t j = 0; j < rep.h; ++j) {
        auto lr = rep.layer_rates(j, x);
        std::vector<double> g(net.num_complexes(), 0.0);
        for (std::size_t i = 0; i < net.num_reactions(); ++i) {
            const auto& [from, to] = net.reactions[i];
            g[to] += lr[i];
            g[from] -= lr[i];
        }
        rec.layer_g_residuals.push_back(detail::inf_norm(g));
    }
    double tol = tol_residual * detail::residual_scale(kin, x);
    rec.positive = rec.f_residual <= tol;
    rec.complex_balanced = rec.g_residual <= tol;
    rec.pl_complex_balanced = true;
    for (double g : rec.layer_g_residuals) rec.pl_complex_balanced &= g <= tol;
    return rec;
}

/// Damped multi-start Newton in log-concentration coordinates on the residual
/// selected by mode. Returns deduplicated converged records; an empty list is
/// a valid outcome (no equilibrium found), distinct from solver breakdown.
inline std::vector<EquilibriumRecord> solve_equilibrium(const Network& net,
                                                        const PolyPLKinetics& kin, SolveMode mode,
                                                        const SolveOptions& opts = {}) {
    const std::size_t m = net.num_species(), n = net.num_complexes(), r = net.num_reactions();
    auto rep = canonicalize(kin);
    std::vector<RatVec> sperp_exact;
    if (opts.class_anchor) {
        if (opts.class_anchor->size() != m)
            throw input_error("DimensionMismatch", "class anchor length != number of species");
        sperp_exact = orthogonal_complement(net.reaction_vectors(), m);
    }

    auto residual = [&](const std::vector<double>& x) {
        std::vector<double> out;
        if (mode == SolveMode::positive) {
            out = species_formation_rate(net, kin, x);
        } else if (mode == SolveMode::complex_balanced) {
            out = complex_formation_rate(net, kin, x);
        } else {
            for (std::size_t j = 0; j < rep.h; ++j) {
                auto lr = rep.layer_rates(j, x);
                std::vector<double> g(n, 0.0);
                for (std::size_t i = 0; i < r; ++i) {
                    const auto& [from, to] = net.reactions[i];
                    g[to] += lr[i];
                    g[from] -= lr[i];
                }
                out.insert(out.end(), g.begin(), g.end());
            }
        }
        for (const RatVec& w : sperp_exact) {
            double dot = 0.0;
            for (std::size_t s = 0; s < m; ++s)
                dot += to_double(w[s]) * (x[s] - (*opts.class_anchor)[s]);
            out.push_back(dot);
        }
        return out;
    };

    // d residual / d u with u = log x: A * dK/dc * diag(x), plus constraint rows.
    auto jacobian_u = [&](const std::vector<double>& x) {
        std::size_t rows = (mode == SolveMode::positive           ? m
                            : mode == SolveMode::complex_balanced ? n
                                                                  : rep.h * n) +
                           sperp_exact.size();
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, m);
        if (mode == SolveMode::positive) {
            Eigen::MatrixXd dK = rate_jacobian(kin, x);
            for (std::size_t i = 0; i < r; ++i) {
                const auto& [from, to] = net.reactions[i];
                for (std::size_t s = 0; s < m; ++s) {
                    double v = to_double(Rational(net.complexes[to][s] - net.complexes[from][s]));
                    if (v == 0.0) continue;
                    for (std::size_t q = 0; q < m; ++q) J(s, q) += v * dK(i, q) * x[q];
                }
            }
        } else {
            std::size_t layers = mode == SolveMode::complex_balanced ? 1 : rep.h;
            for (std::size_t j = 0; j < layers; ++j) {
                PolyPLKinetics layer_kin;
                if (mode == SolveMode::complex_balanced) {
                    layer_kin = kin;
                } else {
                    for (std::size_t i = 0; i < r; ++i) {
                        ReactionKinetics rk;
                        rk.k = rep.layer_coef(j, i);
                        rk.terms.push_back({Rational(1), rep.reactions[i].terms[j].F});
                        layer_kin.reactions.push_back(std::move(rk));
                    }
                }
                Eigen::MatrixXd dK = rate_jacobian(layer_kin, x);
                for (std::size_t i = 0; i < r; ++i) {
                    const auto& [from, to] = net.reactions[i];
                    for (std::size_t q = 0; q < m; ++q) {
                        double d = dK(i, q) * x[q];
                        J(j * n + to, q) += d;
                        J(j * n + from, q) -= d;
                    }
                }
            }
        }
        std::size_t base = rows - sperp_exact.size();
        for (std::size_t w = 0; w < sperp_exact.size(); ++w)
            for (std::size_t s = 0; s < m; ++s)
                J(base + w, s) = to_double(sperp_exact[w][s]) * x[s];
        return J;
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u0(-2.0, 2.0);
    std::vector<EquilibriumRecord> found;
    for (std::size_t start = 0; start < opts.starts; ++start) {
        std::vector<double> u(m);
        if (opts.class_anchor && start == 0) {
            for (std::size_t s = 0; s < m; ++s) u[s] = std::log((*opts.class_anchor)[s]);
        } else {
            for (auto& ui : u) ui = u0(rng);
        }
        bool converged = false;
        std::vector<double> x(m);
        for (int it = 0; it < opts.max_iterations; ++it) {
            for (std::size_t s = 0; s < m; ++s) x[s] = std::exp(u[s]);
            auto res = residual(x);
            double rnorm = detail::inf_norm(res);
            double tol = opts.tol_residual * detail::residual_scale(kin, x);
            if (rnorm <= tol) {
                converged = true;
                break;
            }
            Eigen::MatrixXd J = jacobian_u(x);
            Eigen::VectorXd b(res.size());
            for (std::size_t i = 0; i < res.size(); ++i) b(i) = res[i];
            Eigen::VectorXd du = J.colPivHouseholderQr().solve(-b);
            if (!du.allFinite()) break;
            double step = 1.0;
            bool improved = false;
            for (int halv = 0; halv < opts.max_halvings; ++halv) {
                std::vector<double> xt(m);
                bool finite = true;
                for (std::size_t s = 0; s < m; ++s) {
                    double ut = u[s] + step * du(s);
                    finite &= std::isfinite(ut) && std::abs(ut) < 50.0;
                    xt[s] = std::exp(ut);
                }
                if (finite && detail::inf_norm(residual(xt)) < rnorm) {
                    for (std::size_t s = 0; s < m; ++s) u[s] += step * du(s);
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (!converged) continue;
        for (std::size_t s = 0; s < m; ++s) x[s] = std::exp(u[s]);
        if (*std::min_element(x.begin(), x.end()) < opts.positivity_floor) continue;
        bool duplicate = false;
        for (const auto& rec : found) {
            double dist = 0.0, scale = 1.0;
            for (std::size_t s = 0; s < m; ++s) {
                dist = std::max(dist, std::abs(rec.c[s] - x[s]));
                scale = std::max({scale, std::abs(rec.c[s]), std::abs(x[s])});
            }
            duplicate |= dist <= opts.tol_dedup * scale;
        }
        if (!duplicate) found.push_back(classify_point(net, kin, rep, x, opts.tol_residual));
    }
    std::sort(found.begin(), found.end(),
              [](const EquilibriumRecord& a, const EquilibriumRecord& b) { return a.c < b.c; });
    return found;
}

/// Rate constants making x_star complex balanced: k_q = b_q / I_q(x_star) with
/// b a positive kernel vector of the incidence matrix and I the interaction
/// (the kinetics with unit rate constants).
struct CcbConstruction {
    std::vector<double> k;
    RatVec b;                          // exact positive kernel vector of I_a
    std::vector<double> interactions;  // I_q(x_star)
};

inline CcbConstruction ccb_construct(const Network& net, const PolyPLKinetics& kin,
                                     const std::vector<double>& x_star) {
    auto srep = structural_report(net);
    if (!srep.weakly_reversible)
        throw precondition_error("NotWeaklyReversible",
                                 "complex balancing rates exist only for weakly reversible "
                                 "networks");
    auto b = positive_kernel_vector(matrices(net).Ia);
    if (!b)
        throw internal_error("LPInfeasible",
                             "Ker I_a of a weakly reversible network must contain a positive "
                             "vector");
    CcbConstruction out;
    out.b = *b;
    PolyPLKinetics unit = kin;
    for (auto& rk : unit.reactions) rk.k = 1;
    out.interactions = evaluate(unit, x_star);
    for (std::size_t q = 0; q < net.num_reactions(); ++q)
        out.k.push_back(to_double(out.b[q]) / out.interactions[q]);

    auto balanced = with_rates(kin, out.k);
    auto g = complex_formation_rate(net, balanced, x_star);
    double scale = 1.0;
    for (const Rational& bq : out.b) scale = std::max(scale, std::abs(to_double(bq)));
    if (detail::inf_norm(g) > 1e-12 * scale)
        throw internal_error("UnbalancedConstruction", "g(x*) != 0 under constructed rates");
    return out;
}

/// Log-manifold parametrization of the PL-complex balanced set: c is balanced
/// iff ln c - ln c* lies in the orthogonal complement of S~ = sum of the S~_j.
struct ParametrizationReport {
    std::size_t perp_dimension = 0;
    double on_manifold_max_residual = 0.0;   // over `trials` random in-manifold moves
    double off_manifold_min_residual = 0.0;  // over unit off-manifold perturbations
    bool on_manifold_ok = false;             // residuals <= 1e-8 scale
    bool off_manifold_ok = false;            // residuals >= 1e-4 (reported, may be marginal)
    std::size_t off_manifold_count = 0;
};

inline ParametrizationReport parametrization_check(const Network& net, const CanonicalRep& rep,
                                                   const KineticOrderData& kd,
                                                   const PolyPLKinetics& kin,
                                                   const std::vector<double>& c_star,
                                                   std::size_t trials, std::mt19937_64& rng) {
    const std::size_t m = net.num_species();
    std::vector<RatVec> stacked;
    for (const auto& layer : kd.layers)
        stacked.insert(stacked.end(), layer.subspace_basis.begin(), layer.subspace_basis.end());
    auto perp = orthogonal_complement(stacked, m);
    ParametrizationReport out;
    out.perp_dimension = perp.size();

    auto layer_residual = [&](const std::vector<double>& c) {
        double worst = 0.0;
        for (std::size_t j = 0; j < rep.h; ++j) {
            auto lr = rep.layer_rates(j, c);
            std::vector<double> g(net.num_complexes(), 0.0);
            for (std::size_t i = 0; i < net.num_reactions(); ++i) {
                const auto& [from, to] = net.reactions[i];
                g[to] += lr[i];
                g[from] -= lr[i];
            }
            worst = std::max(worst, detail::inf_norm(g));
        }
        return worst / detail::residual_scale(kin, c);
    };

    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> v(m, 0.0);
        for (const RatVec& w : perp) {
            double a = coef(rng);
            for (std::size_t s = 0; s < m; ++s) v[s] += a * to_double(w[s]);
        }
        std::vector<double> c(m);
        for (std::size_t s = 0; s < m; ++s) c[s] = std::exp(std::log(c_star[s]) + v[s]);
        out.on_manifold_max_residual = std::max(out.on_manifold_max_residual, layer_residual(c));
    }
    out.on_manifold_ok = out.on_manifold_max_residual <= 1e-8;

    out.off_manifold_min_residual = std::numeric_limits<double>::infinity();
    for (const RatVec& w : span_basis(stacked)) {
        double norm = 0.0;
        for (const Rational& x : w) norm += to_double(x) * to_double(x);
        norm = std::sqrt(norm);
        std::vector<double> c(m);
        for (std::size_t s = 0; s < m; ++s)
            c[s] = std::exp(std::log(c_star[s]) + to_double(w[s]) / norm);
        out.off_manifold_min_residual = std::min(out.off_manifold_min_residual, layer_residual(c));
        ++out.off_manifold_count;
    }
    if (out.off_manifold_count == 0) out.off_manifold_min_residual = 0.0;
    out.off_manifold_ok = out.off_manifold_count == 0 || out.off_manifold_min_residual >= 1e-4;
    return out;
}

/// Sign-vector criterion for at most one complex balanced PL-equilibrium per
/// stoichiometric class: no nonzero sign pattern is realizable both in S and
/// in every (S~_j)-perp. Componentwise enumeration over {-1,0,+1}^m.
struct SignCheckResult {
    bool holds = false;
    std::optional<SignPattern> witness;  // common pattern when the criterion fails
};

inline SignCheckResult monostationarity_sign_check(const Network& net, const KineticOrderData& kd) {
    const std::size_t m = net.num_species();
    if (m > 12)
        throw precondition_error("DimensionCapExceeded",
                                 "sign-pattern enumeration capped at 12 species");
    auto S_basis = span_basis(net.reaction_vectors());
    std::vector<std::vector<RatVec>> perps;
    for (const auto& layer : kd.layers)
        perps.push_back(orthogonal_complement(layer.subspace_basis, m));

    std::size_t total = 1;
    for (std::size_t s = 0; s < m; ++s) total *= 3;
    SignCheckResult out;
    for (std::size_t code = 0; code < total; ++code) {
        SignPattern sigma;
        std::size_t rem = code;
        bool nonzero = false;
        for (std::size_t s = 0; s < m; ++s) {
            sigma.coords.push_back(static_cast<int>(rem % 3) - 1);
            nonzero |= sigma.coords.back() != 0;
            rem /= 3;
        }
        if (!nonzero) continue;
        if (!feasible_signed(S_basis, sigma)) continue;
        bool in_all = true;
        for (const auto& perp : perps)
            if (!feasible_signed(perp, sigma)) {
                in_all = false;
                break;
            }
        if (in_all) {
            out.witness = sigma;
            return out;
        }
    }
    out.holds = true;
    return out;
}

}  // namespace pypl
