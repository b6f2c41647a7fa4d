#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "pypl/equilibria.hpp"
#include "pypl/error.hpp"
#include "pypl/kinetics.hpp"
#include "pypl/network.hpp"

namespace pypl {

/// J(c) = N * dK/dc, the Jacobian of the species formation rate.
inline Eigen::MatrixXd jacobian(const Network& net, const PolyPLKinetics& kin,
                                const std::vector<double>& c) {
    const std::size_t m = net.num_species(), r = net.num_reactions();
    Eigen::MatrixXd dK = rate_jacobian(kin, c);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t j = 0; j < r; ++j) {
        const auto& [from, to] = net.reactions[j];
        for (std::size_t s = 0; s < m; ++s) {
            double v = to_double(Rational(net.complexes[to][s] - net.complexes[from][s]));
            if (v == 0.0) continue;
            for (std::size_t q = 0; q < m; ++q) J(s, q) += v * dK(j, q);
        }
    }
    return J;
}

enum class StabilityClass { linearly_stable, marginal, unstable };

struct StabilityVerdict {
    std::vector<std::complex<double>> eigenvalues;  // of the restriction to S
    StabilityClass classification = StabilityClass::marginal;
    Eigen::MatrixXd restricted;   // s x s matrix B^T J B
    Eigen::MatrixXd basis;        // orthonormal columns spanning S
};

namespace detail {

inline Eigen::MatrixXd orthonormal_columns(const std::vector<RatVec>& vecs, std::size_t ambient) {
    Eigen::MatrixXd raw(ambient, vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j)
        for (std::size_t i = 0; i < ambient; ++i) raw(i, j) = to_double(vecs[j][i]);
    if (vecs.empty()) return Eigen::MatrixXd(ambient, 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ();
    return q.leftCols(std::min<std::size_t>(vecs.size(), ambient));
}

}  // namespace detail

/// Restriction of J to the subspace spanned by S_basis, classified by the sign
/// of the spectral abscissa with margin tol_margin.
inline StabilityVerdict restrict_and_classify(const Eigen::MatrixXd& J,
                                              const std::vector<RatVec>& S_basis,
                                              double tol_margin = 1e-8) {
    const std::size_t m = J.rows();
    auto basis_vectors = span_basis(S_basis);
    Eigen::MatrixXd B = detail::orthonormal_columns(basis_vectors, m);
    // Im J must lie in S for the restriction to be the linearization on a class
    Eigen::MatrixXd offspace = J - B * (B.transpose() * J);
    double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    if (offspace.cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw precondition_error("ImageNotInS",
                                 "Jacobian image leaves the stoichiometric subspace");
    StabilityVerdict out;
    out.basis = B;
    out.restricted = B.transpose() * J * B;
    if (out.restricted.rows() == 0) {
        out.classification = StabilityClass::marginal;
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(out.restricted);
    double max_re = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.eigenvalues.push_back(es.eigenvalues()(i));
        max_re = std::max(max_re, es.eigenvalues()(i).real());
    }
    out.classification = max_re < -tol_margin  ? StabilityClass::linearly_stable
                         : max_re > tol_margin ? StabilityClass::unstable
                                               : StabilityClass::marginal;
    return out;
}

/// Empirical corroboration of uniqueness in the stoichiometric class: when the
/// solved PL-complex balanced point is linearly stable, class-restricted
/// multi-start solving must find no second equilibrium.
struct UniquenessReport {
    bool precondition_met = false;  // linearly stable + PL-complex balanced
    bool unique = true;
    std::size_t solutions_found = 0;
    double max_separation = 0.0;
};

inline UniquenessReport uniqueness_from_stability(const Network& net, const PolyPLKinetics& kin,
                                                  const StabilityVerdict& verdict,
                                                  const EquilibriumRecord& c_star,
                                                  SolveOptions opts = {}) {
    UniquenessReport out;
    out.precondition_met = verdict.classification == StabilityClass::linearly_stable &&
                           c_star.pl_complex_balanced;
    if (!out.precondition_met) return out;
    opts.class_anchor = c_star.c;
    auto sols = solve_equilibrium(net, kin, SolveMode::positive, opts);
    out.solutions_found = sols.size();
    for (const auto& rec : sols) {
        double dist = 0.0, scale = 1.0;
        for (std::size_t s = 0; s < net.num_species(); ++s) {
            dist = std::max(dist, std::abs(rec.c[s] - c_star.c[s]));
            scale = std::max({scale, std::abs(rec.c[s]), std::abs(c_star.c[s])});
        }
        out.max_separation = std::max(out.max_separation, dist / scale);
        out.unique &= dist <= 1e-6 * scale;
    }
    if (!out.unique)
        throw internal_error("UniquenessViolated",
                             "second equilibrium in the class of a linearly stable PL-complex "
                             "balanced point");
    return out;
}

/// Randomized falsification of D-stability on S: looks for a positive diagonal
/// D with an eigenvalue of (A D)|_S in the right half plane. Finding none is
/// not a proof of D-stability.
inline std::optional<std::vector<double>> d_stability_falsifier(const Eigen::MatrixXd& A,
                                                                const std::vector<RatVec>& S_basis,
                                                                std::size_t trials,
                                                                std::mt19937_64& rng) {
    const std::size_t m = A.rows();
    std::uniform_real_distribution<double> logd(std::log(1e-2), std::log(1e2));
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> d(m);
        Eigen::MatrixXd AD = A;
        for (std::size_t s = 0; s < m; ++s) {
            d[s] = t == 0 ? 1.0 : std::exp(logd(rng));  // try D = I first
            AD.col(s) *= d[s];
        }
        Eigen::MatrixXd B = detail::orthonormal_columns(span_basis(S_basis), m);
        if (B.cols() == 0) return std::nullopt;
        Eigen::MatrixXd M = B.transpose() * AD * B;
        Eigen::EigenSolver<Eigen::MatrixXd> es(M);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i).real() > 1e-8) return d;
    }
    return std::nullopt;
}

}  // namespace pypl
