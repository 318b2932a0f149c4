#pragma once

#include <string>
#include <vector>

#include "fedforge/fedosov.hpp"
#include "fedforge/quantizer.hpp"
#include "fedforge/reversion.hpp"
#include "fedforge/symbol.hpp"

namespace fedforge {

/** The cotangent-side picture extracted from the classical correction: the
 *  fiber change xi(zeta) and its inverse, plus the source and target maps in
 *  both fiber coordinate systems. */
struct Dequantization {
    VariableProfile zp;  // zeta-side profile
    VariableProfile xp;  // xi-side profile
    std::vector<GradedSeries> kappa;       // flat lifts of the coordinates (Weyl side)
    std::vector<GradedSeries> xi_of_zeta;  // zeta-side series
    std::vector<GradedSeries> zeta_of_xi;  // xi-side series
    std::vector<GradedSeries> s_of_zeta, t_of_zeta;  // source/target, zeta coordinates
    std::vector<GradedSeries> s_of_xi, t_of_xi;      // composed with zeta(xi)
};

struct DeqCheck {
    bool ok = true;
    std::string detail;
};

/** Images y^k -> (1/2) Lambda^{kj} zeta_j (first slot) or
 *  y^k -> (1/2) Lambda^{jk} zeta_j (second slot). */
inline std::map<VarId, GradedSeries> half_lambda_images(const ChartGeometry& G,
                                                        const VariableProfile& zp,
                                                        bool first_slot) {
    std::map<VarId, GradedSeries> images;
    GaussianRational half(BigRational(1, 2));
    for (int k = 1; k <= G.wp.n; ++k) {
        GradedSeries v = GradedSeries::zero(zp);
        for (int j = 1; j <= G.wp.n; ++j) {
            const GradedSeries& l = first_slot ? G.lam(k, j) : G.lam(j, k);
            if (l.is_zero()) continue;
            v += half * (l.with_profile(zp) * GradedSeries::variable(zp, fiber_var(j)));
        }
        images[fiber_var(k)] = v;
    }
    return images;
}

/** Composes zeta-side components with the inverted fiber change zeta(xi). */
inline std::vector<GradedSeries> compose_with_zeta(const std::vector<GradedSeries>& comps,
                                                   const std::vector<GradedSeries>& zeta_of_xi) {
    std::map<VarId, GradedSeries> images;
    for (int j = 1; j <= static_cast<int>(zeta_of_xi.size()); ++j)
        images[fiber_var(j)] = zeta_of_xi[j - 1];
    std::vector<GradedSeries> out;
    out.reserve(comps.size());
    for (const GradedSeries& c : comps) out.push_back(substitute(c, images));
    return out;
}

inline Dequantization dequantize(const ChartGeometry& G, const ClassicalCorrection& rv) {
    Dequantization D;
    D.zp = G.wp;
    D.zp.fiber_cap = G.cfg.N_f;
    D.zp.nu_cap = 1;
    D.zp.tag = FiberTag::Zeta;
    D.xp = D.zp;
    D.xp.tag = FiberTag::Xi;

    ClassicalTauCache ctc(G, rv);
    D.kappa = compute_kappa(G, ctc);

    auto first = half_lambda_images(G, D.zp, true);
    auto second = half_lambda_images(G, D.zp, false);

    for (int p = 1; p <= G.wp.n; ++p) {
        GradedSeries rp = rv.total.interior_product(p);
        GradedSeries xi = GradedSeries::variable(D.zp, fiber_var(p));
        if (!rp.is_zero()) xi += -substitute(rp, first) + substitute(rp, second);
        D.xi_of_zeta.push_back(std::move(xi));
    }
    D.zeta_of_xi = reverse_fiber_system(D.xi_of_zeta, FiberTag::Xi);

    for (int k = 1; k <= G.wp.n; ++k) {
        D.s_of_zeta.push_back(substitute(D.kappa[k - 1], first));
        D.t_of_zeta.push_back(substitute(D.kappa[k - 1], second));
    }
    D.s_of_xi = compose_with_zeta(D.s_of_zeta, D.zeta_of_xi);
    D.t_of_xi = compose_with_zeta(D.t_of_zeta, D.zeta_of_xi);
    return D;
}

/** Rebuilds every xi-side field from a replacement fiber change. Used by the
 *  corrupted-coefficient controls, which must propagate through the inversion
 *  exactly as the honest series does. */
inline Dequantization with_fiber_change(const ChartGeometry& G, const Dequantization& base,
                                        std::vector<GradedSeries> new_xi) {
    Dequantization D = base;
    D.xi_of_zeta = std::move(new_xi);
    D.zeta_of_xi = reverse_fiber_system(D.xi_of_zeta, FiberTag::Xi);
    D.s_of_xi = compose_with_zeta(D.s_of_zeta, D.zeta_of_xi);
    D.t_of_xi = compose_with_zeta(D.t_of_zeta, D.zeta_of_xi);
    return D;
}

/** Evaluates a base-chart series at the image of a map (x^j -> images[j]). */
inline GradedSeries pull_back(const GradedSeries& base_series,
                              const std::vector<GradedSeries>& image) {
    std::map<VarId, GradedSeries> images;
    for (int j = 1; j <= static_cast<int>(image.size()); ++j) images[x_var(j)] = image[j - 1];
    return substitute(base_series, images);
}

/** {s^k, s^l} = Lambda^{kl}(s), {t^k, t^l} = -Lambda^{kl}(t), {s^k, t^l} = 0,
 *  canonical bracket on the xi side. Comparisons are exact through fiber
 *  order N_f - 1, which is all the truncated data determines. */
inline DeqCheck verify_bracket_morphisms(const ChartGeometry& G, const Dequantization& D) {
    const int n = G.wp.n;
    const int cap = D.xp.fiber_cap - 1;
    auto fail = [](std::string what) { return DeqCheck{false, std::move(what)}; };
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            GradedSeries ss = cotangent_poisson(D.s_of_xi[k - 1], D.s_of_xi[l - 1]) -
                              pull_back(G.lam(k, l), D.s_of_xi);
            if (!ss.truncate(Grading::Fiber, cap).is_zero())
                return fail("source bracket (" + std::to_string(k) + "," + std::to_string(l) +
                            ") is not Lambda at the source image");
            GradedSeries tt = cotangent_poisson(D.t_of_xi[k - 1], D.t_of_xi[l - 1]) +
                              pull_back(G.lam(k, l), D.t_of_xi);
            if (!tt.truncate(Grading::Fiber, cap).is_zero())
                return fail("target bracket (" + std::to_string(k) + "," + std::to_string(l) +
                            ") is not minus Lambda at the target image");
            GradedSeries st = cotangent_poisson(D.s_of_xi[k - 1], D.t_of_xi[l - 1]);
            if (!st.truncate(Grading::Fiber, cap).is_zero())
                return fail("source and target components (" + std::to_string(k) + "," +
                            std::to_string(l) + ") fail to commute");
        }
    return {};
}

/** Total differential on the xi side: d = dx^p d_{x^p} + dxi_p d_{xi_p}. */
inline GradedSeries cotangent_differential(const GradedSeries& F) {
    const VariableProfile& p = F.profile();
    GradedSeries out = GradedSeries::zero(p);
    for (int j = 1; j <= p.n; ++j)
        out += GradedSeries::dx(p, j) * F.partial_deriv(x_var(j)) +
               GradedSeries::d_fiber(p, j) * F.partial_deriv(fiber_var(j));
    return out;
}

/** omega_{jk}(s) ds^j ds^k - omega_{jk}(t) dt^j dt^k = 2 dx^p dxi_p. */
inline DeqCheck verify_symplectic_balance(const ChartGeometry& G, const Dequantization& D) {
    const int n = G.wp.n;
    std::vector<GradedSeries> ds, dt;
    for (int j = 1; j <= n; ++j) {
        ds.push_back(cotangent_differential(D.s_of_xi[j - 1]));
        dt.push_back(cotangent_differential(D.t_of_xi[j - 1]));
    }
    GradedSeries balance = GradedSeries::zero(D.xp);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            if (G.om(j, k).is_zero()) continue;
            balance += pull_back(G.om(j, k), D.s_of_xi) * (ds[j - 1] * ds[k - 1]) -
                       pull_back(G.om(j, k), D.t_of_xi) * (dt[j - 1] * dt[k - 1]);
        }
    for (int p = 1; p <= n; ++p)
        balance -= GaussianRational(BigRational(2)) *
                   (GradedSeries::dx(D.xp, p) * GradedSeries::d_fiber(D.xp, p));
    if (!balance.truncate(Grading::Fiber, D.xp.fiber_cap - 1).is_zero())
        return {false, "symplectic forms of source and target do not differ by 2 dx^p dxi_p"};
    return {};
}

/** t^k - s^k = -Lambda^{kl} xi_l with no fiber corrections below order three. */
inline DeqCheck verify_source_target_offset(const ChartGeometry& G, const Dequantization& D) {
    for (int k = 1; k <= G.wp.n; ++k) {
        GradedSeries d = D.t_of_xi[k - 1] - D.s_of_xi[k - 1];
        for (int l = 1; l <= G.wp.n; ++l) {
            if (G.lam(k, l).is_zero()) continue;
            d += G.lam(k, l).with_profile(D.xp) * GradedSeries::variable(D.xp, fiber_var(l));
        }
        if (!d.truncate(Grading::Fiber, 2).is_zero())
            return {false, "t - s differs from -Lambda xi below fiber order three in slot " +
                               std::to_string(k)};
    }
    return {};
}

/** The joint map (s, t) must be invertible at the origin: the constant part of
 *  its Jacobian in (x, xi) is a 2n x 2n matrix that must be nonsingular. */
inline DeqCheck verify_joint_invertibility(const ChartGeometry& G, const Dequantization& D) {
    const int n = G.wp.n;
    std::vector<std::vector<GaussianRational>> J(2 * n, std::vector<GaussianRational>(2 * n, 0));
    for (int row = 0; row < 2 * n; ++row) {
        const GradedSeries& comp = row < n ? D.s_of_xi[row] : D.t_of_xi[row - n];
        for (int col = 0; col < 2 * n; ++col) {
            VarId v = col < n ? x_var(col + 1) : fiber_var(col - n + 1);
            J[row][col] = comp.partial_deriv(v).constant_term();
        }
    }
    try {
        invert_constant_matrix(J);
    } catch (const ValidationError&) {
        return {false, "joint source-target Jacobian is singular at the origin"};
    }
    return {};
}

/** The flat lift preserves the symplectic pairing:
 *  (d kappa^p / d y^k) omega_{pq}(kappa) (d kappa^q / d y^l) = omega_{kl}(x). */
inline DeqCheck verify_kappa_symplectic(const ChartGeometry& G, const Dequantization& D) {
    const int n = G.wp.n;
    std::vector<std::vector<GradedSeries>> dk(n, std::vector<GradedSeries>());
    for (int p = 1; p <= n; ++p)
        for (int k = 1; k <= n; ++k)
            dk[p - 1].push_back(D.kappa[p - 1].partial_deriv(fiber_var(k)));
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            GradedSeries acc = GradedSeries::zero(G.wp);
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q) {
                    if (G.om(p, q).is_zero()) continue;
                    acc += dk[p - 1][k - 1] * pull_back(G.om(p, q), D.kappa) * dk[q - 1][l - 1];
                }
            acc -= G.om(k, l);
            if (!acc.truncate(Grading::Fiber, G.wp.fiber_cap - 1).is_zero())
                return {false, "flat lift breaks the symplectic pairing at (" +
                                   std::to_string(k) + "," + std::to_string(l) + ")"};
        }
    return {};
}

/** The fiber coordinates recovered from operator symbols must agree with the
 *  inverted fiber change computed from the classical correction. */
inline DeqCheck verify_two_route_zeta(const ChartGeometry& G, TauCache& tc,
                                      const Dequantization& D) {
    std::vector<GradedSeries> sym = zeta_symbols(G, tc, D.xp);
    // The symbol route certifies fiber orders up to K/2 (one per nu slot); the
    // substitution route is truncated at the profile cap. Compare on the
    // overlap, which at the default orders is the full fiber cap.
    const int cap = std::min(D.xp.fiber_cap, G.cfg.K / 2);
    for (int p = 1; p <= G.wp.n; ++p)
        if (!equal_to_order(sym[p - 1].truncate(Grading::Fiber, cap),
                            D.zeta_of_xi[p - 1].truncate(Grading::Fiber, cap)))
            return {false, "operator-symbol route and substitution route disagree on zeta_" +
                               std::to_string(p)};
    return {};
}

}  // namespace fedforge
