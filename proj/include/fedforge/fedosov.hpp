#pragma once

#include "fedforge/weyl.hpp"

namespace fedforge {

/** Correction 1-form r of the flat fiber connection, graded by total degree
 *  (2 deg_nu + deg_fiber). by_deg[d] is the degree-d part; parts below 2 are
 *  zero and the recursion fills degrees 2..K. */
struct FlatCorrection {
    std::vector<GradedSeries> by_deg;
    GradedSeries total;
};

/** nu-free counterpart graded by fiber degree alone. */
struct ClassicalCorrection {
    std::vector<GradedSeries> by_deg;
    GradedSeries total;
};

/** (1/(i nu)) (r1 o r2) summed over ordered degree pairs (a, b) with
 *  a + b = d + 2; the nu-free parts cancel pairwise so the division is exact. */
inline GradedSeries scaled_self_product(const ChartGeometry& G,
                                        const std::vector<GradedSeries>& by_deg, int d) {
    GradedSeries rr = GradedSeries::zero(G.wp);
    for (int a = 2; a <= d; ++a) {
        int b = d + 2 - a;
        if (b < 2 || b >= static_cast<int>(by_deg.size())) continue;
        if (by_deg[a].is_zero() || by_deg[b].is_zero()) continue;
        rr += fiber_product(G, by_deg[a], by_deg[b]);
    }
    if (rr.is_zero()) return rr;
    return GaussianRational(BigRational(0), BigRational(-1)) * rr.exact_div_nu();
}

/** Right-hand side of the correction equation at the full element:
 *  T + R + Omega + nabla(r) + (1/(i nu)) r o r. */
inline GradedSeries correction_rhs(const ChartGeometry& G, const GradedSeries& r_total) {
    GradedSeries rhs = G.element_T + G.element_R + G.omega2 + nabla(G, r_total);
    GradedSeries rr = fiber_product(G, r_total, r_total);
    if (!rr.is_zero())
        rhs += GaussianRational(BigRational(0), BigRational(-1)) * rr.exact_div_nu();
    return rhs;
}

/** Solves delta(r) = T + R + Omega + nabla(r) + (1/(i nu)) r o r degree by
 *  degree under the normalization delta_inv(r) = 0, through total degree K. */
inline FlatCorrection compute_r(const ChartGeometry& G) {
    const int K = G.cfg.K;
    FlatCorrection r;
    r.by_deg.assign(K + 1, GradedSeries::zero(G.wp));
    r.total = GradedSeries::zero(G.wp);
    GradedSeries base = G.element_T + G.element_R + G.omega2;
    for (int k = 1; k + 1 <= K; ++k) {
        GradedSeries B = base.component(Grading::Big, k);
        if (!r.by_deg[k].is_zero()) B += nabla(G, r.by_deg[k]);
        B += scaled_self_product(G, r.by_deg, k);
        r.by_deg[k + 1] = delta_inv(B);
        r.total += r.by_deg[k + 1];
    }
    return r;
}

/** The correction equation re-checked after the fact: every component of
 *  delta(r) - RHS with total degree <= K - 1 must vanish identically. */
inline GradedSeries correction_residual(const ChartGeometry& G, const FlatCorrection& r) {
    return (delta(r.total) - correction_rhs(G, r.total)).truncate(Grading::Big, G.cfg.K - 1);
}

/** Flat fiber connection D w = -delta(w) + nabla(w) + (1/(i nu))[r, w]. */
inline GradedSeries apply_D(const ChartGeometry& G, const GradedSeries& r_total,
                            const GradedSeries& w) {
    GradedSeries out = -delta(w) + nabla(G, w);
    if (!r_total.is_zero() && !w.is_zero()) out += scaled_commutator(G, r_total, w);
    return out;
}

/** Classical analogue: the bracket is the fiberwise Poisson bracket and the
 *  grading is fiber degree. Central terms drop (they vanish at nu = 0). */
inline ClassicalCorrection compute_r_classical(const ChartGeometry& G) {
    const int K = G.cfg.K;
    ClassicalCorrection r;
    r.by_deg.assign(K + 1, GradedSeries::zero(G.wp));
    r.total = GradedSeries::zero(G.wp);
    GradedSeries base = G.element_T + G.element_R;
    const GaussianRational half(BigRational(1, 2));
    for (int k = 1; k + 1 <= K; ++k) {
        GradedSeries B = base.component(Grading::Fiber, k);
        if (!r.by_deg[k].is_zero()) B += nabla(G, r.by_deg[k]);
        for (int a = 2; a <= k; ++a) {
            int b = k + 2 - a;
            if (b < 2 || r.by_deg[a].is_zero() || r.by_deg[b].is_zero()) continue;
            B += half * fiber_poisson(G, r.by_deg[a], r.by_deg[b]);
        }
        r.by_deg[k + 1] = delta_inv(B);
        r.total += r.by_deg[k + 1];
    }
    return r;
}

inline GradedSeries correction_rhs_classical(const ChartGeometry& G,
                                             const GradedSeries& rv_total) {
    return G.element_T + G.element_R + nabla(G, rv_total) +
           GaussianRational(BigRational(1, 2)) * fiber_poisson(G, rv_total, rv_total);
}

inline GradedSeries correction_residual_classical(const ChartGeometry& G,
                                                  const ClassicalCorrection& r) {
    return (delta(r.total) - correction_rhs_classical(G, r.total))
        .truncate(Grading::Fiber, G.cfg.K - 1);
}

/** Classical flat connection D w = -delta(w) + nabla(w) + {r, w}. */
inline GradedSeries apply_D_classical(const ChartGeometry& G, const GradedSeries& rv_total,
                                      const GradedSeries& w) {
    return -delta(w) + nabla(G, w) + fiber_poisson(G, rv_total, w);
}

}  // namespace fedforge
