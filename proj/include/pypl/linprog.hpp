#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pypl/matrix.hpp"
#include "pypl/rational.hpp"

namespace pypl {

/// Coordinatewise sign vector over {-1, 0, +1}.
struct SignPattern {
    std::vector<int> coords;

    std::size_t size() const { return coords.size(); }

    static SignPattern of(const RatVec& v) {
        SignPattern p;
        p.coords.reserve(v.size());
        for (const Rational& x : v) p.coords.push_back(x > 0 ? 1 : (x < 0 ? -1 : 0));
        return p;
    }

    bool operator==(const SignPattern& o) const { return coords == o.coords; }
};

namespace detail {

// One linear inequality sum_k coef[k] * t_k >= rhs.
struct Ineq {
    RatVec coef;
    Rational rhs;
};

inline void normalize(Ineq& c) {
    Rational scale(0);
    for (const Rational& x : c.coef) scale += abs(x);
    if (scale == 0) return;
    for (Rational& x : c.coef) x /= scale;
    c.rhs /= scale;
}

inline std::vector<Ineq> dedup(std::vector<Ineq> cons) {
    std::map<std::pair<RatVec, Rational>, bool> seen;
    std::vector<Ineq> out;
    for (Ineq& c : cons) {
        normalize(c);
        auto key = std::make_pair(c.coef, c.rhs);
        if (seen.emplace(key, true).second) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

/// Exact Fourier-Motzkin feasibility over the rationals.
/// Returns a witness t with coef·t >= rhs for every constraint, or nullopt.
inline std::optional<RatVec> fm_feasible(std::vector<detail::Ineq> cons, std::size_t dim) {
    using detail::Ineq;
    // Eliminate variables dim-1 .. 0, remembering the bounds on each so the
    // witness can be rebuilt front to back.
    struct Level {
        std::vector<Ineq> lowers;  // coef[var] > 0
        std::vector<Ineq> uppers;  // coef[var] < 0
    };
    std::vector<Level> levels(dim);
    cons = detail::dedup(std::move(cons));
    for (std::size_t v = dim; v-- > 0;) {
        Level& lv = levels[v];
        std::vector<Ineq> rest;
        for (Ineq& c : cons) {
            if (c.coef[v] > 0)
                lv.lowers.push_back(std::move(c));
            else if (c.coef[v] < 0)
                lv.uppers.push_back(std::move(c));
            else
                rest.push_back(std::move(c));
        }
        for (const Ineq& lo : lv.lowers)
            for (const Ineq& up : lv.uppers) {
                // (rhs_lo - rest_lo)/a_lo <= t_v <= (rhs_up - rest_up)/a_up with a_up < 0
                Ineq combined;
                combined.coef.assign(dim, Rational(0));
                Rational alo = lo.coef[v], aup = -up.coef[v];
                for (std::size_t k = 0; k < v; ++k)
                    combined.coef[k] = lo.coef[k] * aup + up.coef[k] * alo;
                combined.rhs = lo.rhs * aup + up.rhs * alo;
                rest.push_back(std::move(combined));
            }
        cons = detail::dedup(std::move(rest));
    }
    for (const Ineq& c : cons)
        if (c.rhs > 0) return std::nullopt;  // 0 >= rhs violated
    RatVec t(dim, Rational(0));
    for (std::size_t v = 0; v < dim; ++v) {
        const Level& lv = levels[v];
        auto bound_value = [&](const Ineq& c) -> Rational {
            Rational rest(0);
            for (std::size_t k = 0; k < dim; ++k)
                if (k != v) rest += c.coef[k] * t[k];
            return Rational((c.rhs - rest) / c.coef[v]);
        };
        std::optional<Rational> lo, up;
        for (const Ineq& c : lv.lowers) {
            Rational b = bound_value(c);
            if (!lo || b > *lo) lo = b;
        }
        for (const Ineq& c : lv.uppers) {
            Rational b = bound_value(c);  // coef[v] < 0 flips to an upper bound
            if (!up || b < *up) up = b;
        }
        t[v] = lo ? *lo : (up ? *up : Rational(0));
    }
    return t;
}

/// Decides whether span(basis) contains a vector with the given sign pattern,
/// testing v_i >= 1 for '+', v_i <= -1 for '-', v_i = 0 for '0' (lossless by
/// homogeneity). Returns a witness vector in the ambient space when feasible.
inline std::optional<RatVec> feasible_signed(const std::vector<RatVec>& basis,
                                             const SignPattern& pattern) {
    const std::size_t dim = basis.size();
    const std::size_t ambient = pattern.size();
    for (const RatVec& b : basis)
        if (b.size() != ambient)
            throw std::invalid_argument("feasible_signed: pattern dimension mismatch");
    std::vector<detail::Ineq> cons;
    for (std::size_t i = 0; i < ambient; ++i) {
        RatVec row(dim);
        for (std::size_t k = 0; k < dim; ++k) row[k] = basis[k][i];
        if (pattern.coords[i] > 0) {
            cons.push_back({row, Rational(1)});
        } else if (pattern.coords[i] < 0) {
            RatVec neg = row;
            for (Rational& x : neg) x = -x;
            cons.push_back({neg, Rational(1)});
        } else {
            RatVec neg = row;
            for (Rational& x : neg) x = -x;
            cons.push_back({row, Rational(0)});
            cons.push_back({neg, Rational(0)});
        }
    }
    auto t = fm_feasible(std::move(cons), dim);
    if (!t) return std::nullopt;
    RatVec v(ambient, Rational(0));
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < ambient; ++i) v[i] += basis[k][i] * (*t)[k];
    return v;
}

/// Strictly positive vector in Ker M (entries >= 1), if one exists.
inline std::optional<RatVec> positive_kernel_vector(const RatMatrix& m) {
    SignPattern all_plus;
    all_plus.coords.assign(m.cols(), 1);
    return feasible_signed(nullspace(m), all_plus);
}

}  // namespace pypl
