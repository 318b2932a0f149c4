#pragma once

#include "fedforge/diffop.hpp"
#include "fedforge/quantizer.hpp"

namespace fedforge {

/** Extracts the x-dependence multiplying one fiber monomial at one nu power
 *  (form-free terms only), as a nu-free x-series. */
inline GradedSeries fiber_coefficient(const GradedSeries& a, const MonomialKey& fib_key,
                                      int nu_power) {
    GradedSeries out(a.profile(), a.valid_x_order());
    for (const auto& [k, c] : a.terms()) {
        if (k.odd != 0 || k.nu != nu_power) continue;
        bool match = true;
        for (int j = 0; j < kMaxDim; ++j)
            if (k.fib[j] != fib_key.fib[j]) {
                match = false;
                break;
            }
        if (!match) continue;
        MonomialKey xk;
        xk.x = k.x;
        out += GradedSeries::monomial(a.profile(), xk, c);
    }
    return out;
}

/** Z_p f = i nu (d tau(f) / d y^p) at the fiber origin. */
inline GradedSeries apply_Z(const ChartGeometry& G, TauCache& tc, int p,
                            const GradedSeries& f) {
    return tc.tau(f)
        .partial_deriv(fiber_var(p))
        .component(Grading::Fiber, 0)
        .shift_nu(1, GaussianRational::i());
}

/** Left pairing against a form-free section w: f -> (w o tau f) at y = 0. */
inline GradedSeries apply_left(const ChartGeometry& G, TauCache& tc, const GradedSeries& w,
                               const GradedSeries& f) {
    return weyl_pairing(G, w, tc.tau(f));
}

/** Right pairing: f -> (tau f o w) at y = 0. */
inline GradedSeries apply_right(const ChartGeometry& G, TauCache& tc, const GradedSeries& w,
                                const GradedSeries& f) {
    return weyl_pairing(G, tc.tau(f), w);
}

inline NaturalOperatorTable reconstruct_Z(const ChartGeometry& G, TauCache& tc, int p,
                                          int r_max, int budget) {
    return reconstruct_operator(
        [&](const GradedSeries& f) { return apply_Z(G, tc, p, f); }, G.wp, r_max, budget);
}

/** Symbols of the Z_p, the fiber coordinates of the dequantized picture. */
inline std::vector<GradedSeries> zeta_symbols(const ChartGeometry& G, TauCache& tc,
                                              const VariableProfile& fiber_profile) {
    std::vector<GradedSeries> out;
    int r_max = G.cfg.K / 2;
    for (int p = 1; p <= G.wp.n; ++p) {
        NaturalOperatorTable t = reconstruct_Z(G, tc, p, r_max, G.cfg.K);
        if (!t.is_natural())
            throw InternalError("Z operator lost naturality during reconstruction");
        out.push_back(t.symbol(fiber_profile));
    }
    return out;
}

/** Canonical bracket on functions of (x, xi):
 *  {F, H} = d_{xi_p} F d_{x^p} H - d_{xi_p} H d_{x^p} F. */
inline GradedSeries cotangent_poisson(const GradedSeries& F, const GradedSeries& H) {
    const VariableProfile& p = F.profile();
    GradedSeries out = GradedSeries::zero(p);
    for (int j = 1; j <= p.n; ++j)
        out += F.partial_deriv(fiber_var(j)) * H.partial_deriv(x_var(j)) -
               H.partial_deriv(fiber_var(j)) * F.partial_deriv(x_var(j));
    return out;
}

/** Checks Z_q = omega_{qp} (L[y^p] - R[y^p]) as reconstructed tables. */
inline bool check_Z_pairing_identity(const ChartGeometry& G, TauCache& tc, int q, int r_max,
                                     int budget) {
    NaturalOperatorTable zq = reconstruct_Z(G, tc, q, r_max, budget);
    auto rhs_op = [&](const GradedSeries& f) {
        GradedSeries acc = GradedSeries::zero(G.wp);
        for (int p = 1; p <= G.wp.n; ++p) {
            const GradedSeries& w = G.om(q, p);
            if (w.is_zero()) continue;
            GradedSeries yp = GradedSeries::variable(G.wp, fiber_var(p));
            acc += w * (apply_left(G, tc, yp, f) - apply_right(G, tc, yp, f));
        }
        return acc;
    };
    NaturalOperatorTable rhs = reconstruct_operator(rhs_op, G.wp, r_max, budget);
    return tables_equal(zq, rhs);
}

/** Checks the exchange identity -Z_p + i nu d_p + L[r_p] - R[r_p] = 0 on a
 *  probe input, where r_p is the dx^p component of the correction. */
inline bool check_Z_exchange_identity(const ChartGeometry& G, TauCache& tc,
                                      const FlatCorrection& r, int p,
                                      const GradedSeries& f) {
    GradedSeries rp = r.total.interior_product(p);
    GradedSeries lhs =
        -apply_Z(G, tc, p, f) +
        f.partial_deriv(x_var(p)).shift_nu(1, GaussianRational::i());
    if (!rp.is_zero())
        lhs += apply_left(G, tc, rp, f) - apply_right(G, tc, rp, f);
    // All three pieces are exact through nu power K/2 at this truncation depth.
    return lhs.truncate(Grading::Nu, G.cfg.K / 2).is_zero();
}

/** Scaled commutator of two tabulated operators evaluated by nesting their
 *  actions; reconstructed as a table without composing tables symbolically. */
inline NaturalOperatorTable commutator_table(const NaturalOperatorTable& A,
                                             const NaturalOperatorTable& B,
                                             const VariableProfile& p, int r_max,
                                             int budget) {
    auto op = [&](const GradedSeries& f) {
        GradedSeries d = A.apply(B.apply(f)) - B.apply(A.apply(f));
        if (d.is_zero()) return d;
        return GaussianRational(BigRational(0), BigRational(-1)) * d.exact_div_nu();
    };
    return reconstruct_operator(op, p, r_max, budget);
}

/** The symbol of the scaled commutator must be the cotangent bracket of the
 *  symbols. */
inline bool check_commutator_symbol_law(const NaturalOperatorTable& A,
                                        const NaturalOperatorTable& B,
                                        const VariableProfile& p, int r_max, int budget,
                                        const VariableProfile& fiber_profile) {
    NaturalOperatorTable C = commutator_table(A, B, p, r_max, budget);
    if (!C.is_natural()) return false;
    return equal_to_order(C.symbol(fiber_profile),
                          cotangent_poisson(A.symbol(fiber_profile), B.symbol(fiber_profile)));
}

/** Coefficient-extraction maps of tau at one bidegree: f -> the x-dependence
 *  of y^alpha nu^l inside the degree-k part of tau(f). Each is a differential
 *  operator; the claim checked is that its order is at most k - l. */
inline bool verify_natural_orders(const ChartGeometry& G, TauCache& tc, int k, int l,
                                  std::string* why = nullptr) {
    if (k - 2 * l < 1 || k > G.cfg.K) return true;  // nothing substantive at this bidegree
    std::vector<MonomialKey> alphas;
    MonomialKey scratch;
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == G.wp.n) {
            if (left == 0) alphas.push_back(scratch);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            scratch.fib[j] = static_cast<std::uint8_t>(e);
            self(self, j + 1, left - e);
        }
        scratch.fib[j] = 0;
    };
    rec(rec, 0, k - 2 * l);
    for (const MonomialKey& alpha : alphas) {
        auto op = [&](const GradedSeries& f) {
            return fiber_coefficient(tc.tau(f).component(Grading::Big, k), alpha, l);
        };
        ScalarOperatorTable t = reconstruct_scalar_operator(op, G.wp, k + 1);
        if (t.max_order() > k - l) {
            if (why)
                *why = "order " + std::to_string(t.max_order()) + " exceeds bound " +
                       std::to_string(k - l) + " at bidegree (" + std::to_string(k) + "," +
                       std::to_string(l) + ")";
            return false;
        }
        // Held-out cross-check on a dense polynomial outside the probe basis.
        GradedSeries h = GradedSeries::zero(G.wp);
        int c = 1;
        for (const MonomialKey& m : x_monomials_up_to(G.wp.n, 2))
            h += GradedSeries::monomial(G.wp, m, GaussianRational(BigRational(c++, 3)));
        if (!equal_to_order(t.apply(h), op(h))) {
            if (why)
                *why = "held-out mismatch at bidegree (" + std::to_string(k) + "," +
                       std::to_string(l) + ")";
            return false;
        }
    }
    return true;
}

}  // namespace fedforge
