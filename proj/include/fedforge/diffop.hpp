#pragma once

#include <functional>

#include "fedforge/series.hpp"

namespace fedforge {

/** x-only monomial keys of total degree <= max_deg, ascending in the
 *  canonical term order (so every key is preceded by its divisors). */
inline std::vector<MonomialKey> x_monomials_up_to(int n, int max_deg) {
    std::vector<MonomialKey> out;
    MonomialKey k;
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == n) {
            out.push_back(k);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            k.x[j] = static_cast<std::uint8_t>(e);
            self(self, j + 1, left - e);
        }
        k.x[j] = 0;
    };
    rec(rec, 0, max_deg);
    std::sort(out.begin(), out.end(), MonomialLess{});
    return out;
}

inline BigRational multi_factorial(const MonomialKey& k) {
    BigRational f = 1;
    for (int j = 0; j < kMaxDim; ++j) f *= big_factorial(k.x[j]);
    return f;
}

/** beta! / (beta - gamma)! for gamma <= beta componentwise, else 0. */
inline BigRational falling_product(const MonomialKey& beta, const MonomialKey& gamma) {
    BigRational f = 1;
    for (int j = 0; j < kMaxDim; ++j) {
        if (gamma.x[j] > beta.x[j]) return BigRational(0);
        for (int e = beta.x[j]; e > beta.x[j] - gamma.x[j]; --e) f *= e;
    }
    return f;
}

/** A scalar differential operator sum_gamma a_gamma(x) d_x^gamma presented by
 *  its coefficient table; keys are x-only monomial keys for gamma. */
struct ScalarOperatorTable {
    VariableProfile p;
    std::map<MonomialKey, GradedSeries, MonomialLess> coeff;

    int max_order() const {
        int m = -1;
        for (const auto& [g, a] : coeff) m = std::max(m, g.x_degree());
        return m;  // -1 for the zero operator
    }

    GradedSeries apply(const GradedSeries& f) const {
        GradedSeries out = GradedSeries::zero(p);
        for (const auto& [g, a] : coeff) {
            GradedSeries d = f;
            for (int j = 0; j < p.n && !d.is_zero(); ++j)
                for (int e = 0; e < g.x[j] && !d.is_zero(); ++e)
                    d = d.partial_deriv(x_var(j + 1));
            if (!d.is_zero()) out += a * d;
        }
        return out;
    }
};

/** Recovers the coefficient table of a scalar differential operator from its
 *  values on the monomials x^beta, |beta| <= budget, by triangular solve:
 *  a_beta = (Op(x^beta) - sum_{gamma < beta} a_gamma beta!/(beta-gamma)!
 *  x^(beta-gamma)) / beta!. Faithful whenever the operator's order is at most
 *  the budget; callers cross-check on held-out inputs. */
inline ScalarOperatorTable solve_operator_table(
    const VariableProfile& p,
    const std::map<MonomialKey, GradedSeries, MonomialLess>& values, int budget) {
    ScalarOperatorTable t{p, {}};
    for (const MonomialKey& beta : x_monomials_up_to(p.n, budget)) {
        auto vit = values.find(beta);
        if (vit == values.end()) throw InternalError("operator probe value missing");
        GradedSeries rhs = vit->second;
        for (const auto& [gamma, a] : t.coeff) {
            BigRational c = falling_product(beta, gamma);
            if (c == 0) continue;
            MonomialKey diff;
            for (int j = 0; j < kMaxDim; ++j)
                diff.x[j] = static_cast<std::uint8_t>(beta.x[j] - gamma.x[j]);
            rhs -= GaussianRational(c) * (a * GradedSeries::monomial(p, diff, 1));
        }
        if (!rhs.is_zero())
            t.coeff.emplace(beta,
                            GaussianRational(BigRational(1) / multi_factorial(beta)) * rhs);
    }
    return t;
}

inline ScalarOperatorTable reconstruct_scalar_operator(
    const std::function<GradedSeries(const GradedSeries&)>& op, const VariableProfile& p,
    int budget) {
    std::map<MonomialKey, GradedSeries, MonomialLess> values;
    for (const MonomialKey& beta : x_monomials_up_to(p.n, budget))
        values.emplace(beta, op(GradedSeries::monomial(p, beta, 1)));
    return solve_operator_table(p, values, budget);
}

/** nu-graded operator A = sum_r (i nu)^r A_r with scalar slots A_r. */
struct NaturalOperatorTable {
    VariableProfile p;
    std::vector<ScalarOperatorTable> slots;

    int r_max() const { return static_cast<int>(slots.size()) - 1; }

    /** A_r f = (-i)^r [nu^r] (A f); inputs with nu powers pass through. */
    GradedSeries apply(const GradedSeries& f) const {
        GradedSeries out = GradedSeries::zero(p);
        int top = f.terms().empty() ? -1 : 0;
        for (const auto& [k, c] : f.terms()) top = std::max(top, static_cast<int>(k.nu));
        for (int m = 0; m <= top; ++m) {
            GradedSeries fm = f.component(Grading::Nu, m);
            if (fm.is_zero()) continue;
            fm = fm.shift_nu(-m, 1);
            for (int r = 0; r <= r_max(); ++r) {
                GradedSeries v = slots[r].apply(fm);
                if (!v.is_zero())
                    out += v.shift_nu(r + m, GaussianRational::i().pow(static_cast<unsigned>(r)));
            }
        }
        return out;
    }

    /** Each nu-slot's differential order stays within its nu power. */
    bool is_natural() const {
        for (int r = 0; r <= r_max(); ++r)
            if (slots[r].max_order() > r) return false;
        return true;
    }

    /** Full symbol: the order-r part of slot r with d_x^gamma replaced by
     *  xi^gamma. Defined only for natural tables. */
    GradedSeries symbol(const VariableProfile& fiber_profile) const {
        if (!is_natural())
            throw ContractError("symbol is defined only for natural operator tables");
        GradedSeries out = GradedSeries::zero(fiber_profile);
        for (int r = 0; r <= r_max(); ++r)
            for (const auto& [gamma, a] : slots[r].coeff) {
                if (gamma.x_degree() != r) continue;
                MonomialKey fib;
                for (int j = 0; j < kMaxDim; ++j) fib.fib[j] = gamma.x[j];
                out += a.with_profile(fiber_profile) *
                       GradedSeries::monomial(fiber_profile, fib, 1);
            }
        return out;
    }
};

/** Reconstructs a nu-graded operator from probe evaluations: each nu-slot of
 *  the probe images is extracted and solved independently. */
inline NaturalOperatorTable reconstruct_operator(
    const std::function<GradedSeries(const GradedSeries&)>& op, const VariableProfile& p,
    int r_max, int budget) {
    std::vector<std::map<MonomialKey, GradedSeries, MonomialLess>> values(
        static_cast<std::size_t>(r_max) + 1);
    const GaussianRational minus_i(BigRational(0), BigRational(-1));
    for (const MonomialKey& beta : x_monomials_up_to(p.n, budget)) {
        GradedSeries img = op(GradedSeries::monomial(p, beta, 1));
        for (int r = 0; r <= r_max; ++r)
            values[r].emplace(beta, img.component(Grading::Nu, r)
                                        .shift_nu(-r, minus_i.pow(static_cast<unsigned>(r))));
    }
    NaturalOperatorTable t{p, {}};
    for (int r = 0; r <= r_max; ++r) t.slots.push_back(solve_operator_table(p, values[r], budget));
    return t;
}

inline bool tables_equal(const NaturalOperatorTable& a, const NaturalOperatorTable& b) {
    if (a.p != b.p) return false;
    int top = std::max(a.r_max(), b.r_max());
    for (int r = 0; r <= top; ++r) {
        const static std::map<MonomialKey, GradedSeries, MonomialLess> empty;
        const auto& ca = r <= a.r_max() ? a.slots[r].coeff : empty;
        const auto& cb = r <= b.r_max() ? b.slots[r].coeff : empty;
        for (const auto& [g, v] : ca) {
            auto it = cb.find(g);
            if (it == cb.end() ? !v.is_zero() : !equal_to_order(v, it->second)) return false;
        }
        for (const auto& [g, v] : cb)
            if (!ca.count(g) && !v.is_zero()) return false;
    }
    return true;
}

}  // namespace fedforge
