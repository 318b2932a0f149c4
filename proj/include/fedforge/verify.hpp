#pragma once

#include <random>
#include <string>
#include <vector>

#include "fedforge/dequantize.hpp"
#include "fedforge/fedosov.hpp"
#include "fedforge/quantizer.hpp"
#include "fedforge/symbol.hpp"

namespace fedforge {

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& c : results)
        if (!c.ok) return false;
    return true;
}

/** Deterministic polynomial sampler shared by the identity battery. */
class SeriesSampler {
  public:
    SeriesSampler(const VariableProfile& p, unsigned seed) : p_(p), rng_(seed) {}

    GaussianRational coefficient() {
        int num = static_cast<int>(rng_() % 7) - 3;
        int den = static_cast<int>(rng_() % 3) + 1;
        if (num == 0) num = 1;
        return GaussianRational(BigRational(num, den));
    }

    /** Random base polynomial, default degree <= 3 with four terms. */
    GradedSeries base_polynomial(int max_deg = 3, int terms = 4) {
        GradedSeries out = GradedSeries::zero(p_);
        for (int t = 0; t < terms; ++t) {
            MonomialKey k;
            int budget = static_cast<int>(rng_() % (max_deg + 1));
            for (int j = 0; j < p_.n && budget > 0; ++j) {
                int e = static_cast<int>(rng_() % (budget + 1));
                k.x[j] = static_cast<std::uint8_t>(e);
                budget -= e;
            }
            out += GradedSeries::monomial(p_, k, coefficient());
        }
        return out;
    }

    /** Random Weyl section: x-degree <= 2, fiber degree <= fib_deg, and an
     *  optional single odd factor when with_form is set. */
    GradedSeries section(int fib_deg, bool with_form) {
        GradedSeries out = GradedSeries::zero(p_);
        for (int t = 0; t < 3; ++t) {
            MonomialKey k;
            k.x[rng_() % p_.n] = static_cast<std::uint8_t>(rng_() % 3);
            int budget = fib_deg;
            for (int j = 0; j < p_.n && budget > 0; ++j) {
                int e = static_cast<int>(rng_() % (budget + 1));
                k.fib[j] = static_cast<std::uint8_t>(e);
                budget -= e;
            }
            if (with_form && (rng_() % 2))
                k.odd = static_cast<std::uint16_t>(1u << (rng_() % p_.n));
            out += GradedSeries::monomial(p_, k, coefficient());
        }
        return out;
    }

  private:
    VariableProfile p_;
    std::minstd_rand rng_;
};

/** Full identity battery for one chart. Every comparison is exact rational
 *  equality at a truncation depth the computed data determines completely. */
inline std::vector<CheckResult> run_verification(const ChartGeometry& G) {
    std::vector<CheckResult> out;
    auto push = [&](std::string name, bool ok, std::string detail = "") {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    const int n = G.wp.n;
    const int K = G.cfg.K;

    // --- chart-level structure ---
    {
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j)
            for (int l = 1; l <= n && ok; ++l) {
                GradedSeries acc = GradedSeries::zero(G.wp);
                for (int k = 1; k <= n; ++k) acc += G.om(j, k) * G.lam(k, l);
                if (j == l) acc -= GradedSeries::one(G.wp);
                ok = acc.is_zero();
            }
        push("omega-inverse-of-lambda", ok);
    }
    {
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j)
            for (int k = 1; k <= n && ok; ++k)
                for (int l = 1; l <= n && ok; ++l) {
                    if (j == k || k == l || j == l) continue;
                    GradedSeries c = G.om(k, l).partial_deriv(x_var(j)) +
                                     G.om(l, j).partial_deriv(x_var(k)) +
                                     G.om(j, k).partial_deriv(x_var(l));
                    ok = c.is_zero();
                }
        push("omega-closed", ok);
    }
    {
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j)
            for (int k = 1; k <= n && ok; ++k)
                for (int l = 1; l <= n && ok; ++l) {
                    GradedSeries c = G.om(k, l).partial_deriv(x_var(j));
                    for (int m = 1; m <= n; ++m)
                        c -= G.Gam(m, j, k) * G.om(m, l) + G.Gam(m, j, l) * G.om(k, m);
                    ok = c.is_zero();
                }
        push("omega-parallel", ok);
    }

    // --- fiberwise operators ---
    {
        SeriesSampler smp(G.wp, 101);
        bool sq = true, inv_sq = true, homotopy = true;
        for (int t = 0; t < 6; ++t) {
            MonomialKey k;
            k.fib[t % n] = static_cast<std::uint8_t>(1 + t % 2);
            if (t % 3 != 2) k.odd = static_cast<std::uint16_t>(1u << ((t / 2) % n));
            GradedSeries a = GradedSeries::monomial(G.wp, k, smp.coefficient());
            GradedSeries b = smp.section(2, true);
            sq = sq && delta(delta(b)).is_zero();
            inv_sq = inv_sq && delta_inv(delta_inv(a)).is_zero();
            homotopy = homotopy && (delta(delta_inv(a)) + delta_inv(delta(a))) == a;
        }
        push("koszul-squared", sq);
        push("koszul-homotopy-squared", inv_sq);
        push("koszul-homotopy-identity", homotopy);
    }
    {
        SeriesSampler smp(G.wp, 202);
        bool ok = true;
        for (int t = 0; t < 4 && ok; ++t) {
            GradedSeries a = smp.section(2, true);
            GradedSeries b = smp.section(1, true);
            GradedSeries c = smp.section(1, false);
            ok = fiber_product(G, fiber_product(G, a, b), c) ==
                 fiber_product(G, a, fiber_product(G, b, c));
        }
        push("fiber-product-associative", ok);
    }
    {
        SeriesSampler smp(G.wp, 303);
        bool ok = true;
        for (int t = 0; t < 4 && ok; ++t) {
            GradedSeries a = smp.section(2, false);
            GradedSeries b = smp.section(2, false);
            ok = scaled_commutator(G, a, b).component(Grading::Nu, 0) ==
                 fiber_poisson(G, a, b).component(Grading::Nu, 0);
        }
        push("commutator-classical-limit", ok);
    }

    // --- connection elements and the correction ---
    push("torsion-element-closed", delta(G.element_T).is_zero());
    push("curvature-element-bianchi", (delta(G.element_R) - nabla(G, G.element_T)).is_zero());

    FlatCorrection r = compute_r(G);
    ClassicalCorrection rc = compute_r_classical(G);
    push("correction-residual", correction_residual(G, r).is_zero());
    push("correction-residual-classical", correction_residual_classical(G, rc).is_zero());
    push("correction-classical-limit", r.total.component(Grading::Nu, 0) == rc.total);
    {
        bool ok = true, cok = true;
        for (int fd = 0; fd <= 2 && ok; ++fd)
            for (int bit = 0; bit < n; ++bit) {
                MonomialKey k;
                k.fib[bit] = static_cast<std::uint8_t>(fd);
                k.odd = static_cast<std::uint16_t>(bit % 2 ? 1u : 0u);
                GradedSeries w = GradedSeries::monomial(G.wp, k, GaussianRational(BigRational(1)));
                ok = ok && apply_D(G, r.total, apply_D(G, r.total, w))
                               .truncate(Grading::Big, K - 2)
                               .is_zero();
                cok = cok && apply_D_classical(G, rc.total, apply_D_classical(G, rc.total, w))
                                 .truncate(Grading::Fiber, K - 2)
                                 .is_zero();
            }
        push("connection-squares-to-zero", ok);
        push("connection-squares-to-zero-classical", cok);
    }

    // --- quantization map and star product ---
    TauCache tc(G, r);
    {
        SeriesSampler smp(G.wp, 404);
        bool flat = true, section = true;
        for (int t = 0; t < 3; ++t) {
            GradedSeries f = smp.base_polynomial();
            GradedSeries tf = tc.tau(f);
            flat = flat &&
                   apply_D(G, r.total, tf).truncate(Grading::Big, K - 1).is_zero();
            section = section && tf.component(Grading::Fiber, 0).form_free() &&
                      tf.component(Grading::Fiber, 0) == f;
        }
        push("quantization-flat", flat);
        push("quantization-section", section);
    }
    {
        bool ok = true;
        try {
            ClassicalTauCache ctc(G, rc);
            compute_kappa(G, ctc);
        } catch (const InternalError&) {
            ok = false;
        }
        push("flat-lift-identity-part", ok);
    }
    {
        SeriesSampler smp(G.wp, 505);
        bool unit = true, first = true;
        for (int t = 0; t < 3; ++t) {
            GradedSeries f = smp.base_polynomial();
            GradedSeries g = smp.base_polynomial();
            StarSeries fg = star(G, tc, f, g);
            unit = unit && fg.c_slot(0) == f * g;
            GradedSeries c1 = GradedSeries::zero(G.wp);
            for (auto [j, k] : G.lambda_support)
                c1 += GaussianRational(BigRational(1, 2)) *
                      (G.lam(j, k) * (f.partial_deriv(x_var(j)) * g.partial_deriv(x_var(k))));
            first = first && fg.c_slot(1) == c1;
        }
        push("star-unit", unit);
        push("star-first-order", first);
    }
    {
        SeriesSampler smp(G.wp, 606);
        GradedSeries f = smp.base_polynomial(2);
        GradedSeries g = smp.base_polynomial(2);
        GradedSeries h = smp.base_polynomial(2);
        GradedSeries lhs = star(G, tc, star(G, tc, f, g).value, h).value;
        GradedSeries rhs = star(G, tc, f, star(G, tc, g, h).value).value;
        push("star-associative", (lhs - rhs).truncate(Grading::Nu, K / 2).is_zero());
    }

    // --- operator symbols ---
    {
        bool ok = true;
        std::string detail;
        for (int p = 1; p <= n && ok; ++p)
            ok = check_Z_pairing_identity(G, tc, p, K / 2, K / 2 + 2);
        push("momentum-pairing-identity", ok);
        SeriesSampler smp(G.wp, 707);
        bool ex = true;
        for (int p = 1; p <= n && ex; ++p)
            ex = check_Z_exchange_identity(G, tc, r, p, smp.base_polynomial());
        push("momentum-exchange-identity", ex);
    }
    VariableProfile xip = G.wp;
    xip.fiber_cap = G.cfg.N_f;
    xip.nu_cap = 1;
    xip.tag = FiberTag::Xi;
    {
        NaturalOperatorTable Z1 = reconstruct_Z(G, tc, 1, K / 2, K / 2 + 2);
        NaturalOperatorTable Z2 = reconstruct_Z(G, tc, 2, K / 2, K / 2 + 2);
        push("momentum-natural", Z1.is_natural() && Z2.is_natural());
        push("commutator-symbol-law",
             check_commutator_symbol_law(Z1, Z2, G.wp, K / 2, K / 2 + 2, xip));
    }
    {
        bool ok = true;
        std::string why;
        for (auto [k, l] : {std::pair<int, int>{2, 0}, {3, 1}, {4, 1}})
            ok = ok && verify_natural_orders(G, tc, k, l, &why);
        push("coefficient-operator-orders", ok, why);
    }

    // --- dequantization ---
    {
        Dequantization D = dequantize(G, rc);
        auto add = [&](const char* name, DeqCheck c) {
            push(name, c.ok, std::move(c.detail));
        };
        add("source-target-brackets", verify_bracket_morphisms(G, D));
        add("source-target-symplectic", verify_symplectic_balance(G, D));
        add("source-target-offset", verify_source_target_offset(G, D));
        add("source-target-invertible", verify_joint_invertibility(G, D));
        add("flat-lift-symplectic", verify_kappa_symplectic(G, D));
        add("fiber-change-two-routes", verify_two_route_zeta(G, tc, D));
    }
    return out;
}

}  // namespace fedforge
