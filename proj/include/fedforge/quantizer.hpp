#pragma once

#include "fedforge/fedosov.hpp"

namespace fedforge {

/** Flat sections through tau, memoized per x-monomial; tau is linear over
 *  the nu-coefficients, so arbitrary (x, nu)-polynomial inputs reduce to the
 *  monomial table. */
class TauCache {
  public:
    TauCache(const ChartGeometry& G, const FlatCorrection& r) : G_(&G), r_(&r) {}

    /** tau of the unit-coefficient monomial x^key (key must be x-only). */
    const GradedSeries& monomial_tau(const MonomialKey& xkey) {
        auto it = memo_.find(xkey);
        if (it != memo_.end()) return it->second;
        return memo_.emplace(xkey, compute(xkey)).first->second;
    }

    /** tau of a fiber-free, form-free series (nu powers pass through). */
    GradedSeries tau(const GradedSeries& f) {
        GradedSeries out(G_->wp, f.valid_x_order());
        for (const auto& [key, c] : f.terms()) {
            if (key.fiber_degree() != 0 || key.odd != 0)
                throw ContractError("tau input must be free of fiber and form factors");
            MonomialKey xkey = key;
            xkey.nu = 0;
            out += monomial_tau(xkey).shift_nu(key.nu, c);
        }
        return out;
    }

  private:
    GradedSeries compute(const MonomialKey& xkey) const {
        const ChartGeometry& G = *G_;
        const int K = G.cfg.K;
        std::vector<GradedSeries> t(K + 1, GradedSeries::zero(G.wp));
        t[0] = GradedSeries::monomial(G.wp, xkey, 1);
        GradedSeries total = t[0];
        for (int m = 0; m + 1 <= K; ++m) {
            GradedSeries X = t[m].is_zero() ? GradedSeries::zero(G.wp) : nabla(G, t[m]);
            for (int l = 2; l <= m + 2 && l <= K; ++l) {
                const GradedSeries& rl = r_->by_deg[l];
                if (rl.is_zero() || t[m + 2 - l].is_zero()) continue;
                X += scaled_commutator(G, rl, t[m + 2 - l]);
            }
            t[m + 1] = delta_inv(X);
            total += t[m + 1];
        }
        return total;
    }

    const ChartGeometry* G_;
    const FlatCorrection* r_;
    std::map<MonomialKey, GradedSeries, MonomialLess> memo_;
};

/** Classical analogue with the fiberwise Poisson bracket, graded by fiber
 *  degree; produces nu-free sections. */
class ClassicalTauCache {
  public:
    ClassicalTauCache(const ChartGeometry& G, const ClassicalCorrection& r)
        : G_(&G), r_(&r) {}

    const GradedSeries& monomial_tau(const MonomialKey& xkey) {
        auto it = memo_.find(xkey);
        if (it != memo_.end()) return it->second;
        return memo_.emplace(xkey, compute(xkey)).first->second;
    }

    GradedSeries tau(const GradedSeries& f) {
        GradedSeries out(G_->wp, f.valid_x_order());
        for (const auto& [key, c] : f.terms()) {
            if (key.fiber_degree() != 0 || key.odd != 0 || key.nu != 0)
                throw ContractError("classical tau input must be an x-polynomial");
            out += GaussianRational(c) * monomial_tau(key);
        }
        return out;
    }

  private:
    GradedSeries compute(const MonomialKey& xkey) const {
        const ChartGeometry& G = *G_;
        const int K = G.cfg.K;
        std::vector<GradedSeries> t(K + 1, GradedSeries::zero(G.wp));
        t[0] = GradedSeries::monomial(G.wp, xkey, 1);
        GradedSeries total = t[0];
        for (int m = 0; m + 1 <= K; ++m) {
            GradedSeries X = t[m].is_zero() ? GradedSeries::zero(G.wp) : nabla(G, t[m]);
            for (int l = 2; l <= m + 2 && l <= K; ++l) {
                const GradedSeries& rl = r_->by_deg[l];
                if (rl.is_zero() || t[m + 2 - l].is_zero()) continue;
                X += fiber_poisson(G, rl, t[m + 2 - l]);
            }
            t[m + 1] = delta_inv(X);
            total += t[m + 1];
        }
        return total;
    }

    const ChartGeometry* G_;
    const ClassicalCorrection* r_;
    std::map<MonomialKey, GradedSeries, MonomialLess> memo_;
};

/** kappa^k = classical tau of x^k; its fiber-free part is x^k and its
 *  fiber-linear part is exactly y^k, which is asserted here. */
inline std::vector<GradedSeries> compute_kappa(const ChartGeometry& G, ClassicalTauCache& tc) {
    std::vector<GradedSeries> kappa;
    for (int k = 1; k <= G.wp.n; ++k) {
        GradedSeries kk = tc.tau(GradedSeries::variable(G.wp, x_var(k)));
        if (kk.component(Grading::Fiber, 0) != GradedSeries::variable(G.wp, x_var(k)) ||
            kk.component(Grading::Fiber, 1) != GradedSeries::variable(G.wp, fiber_var(k)))
            throw InternalError("kappa lost its identity linear part");
        kappa.push_back(std::move(kk));
    }
    return kappa;
}

/** Star product as a truncated (x, nu)-series. Coefficients are certified
 *  through nu^(K/2): the degree-K cutoff of the section recursion cannot
 *  disturb lower nu-slots of the pairing. */
struct StarSeries {
    GradedSeries value;
    int certified_order = 0;

    /** C_s with value = sum_s (i nu)^s C_s(f, g). */
    GradedSeries c_slot(int s) const {
        return value.component(Grading::Nu, s)
            .shift_nu(-s, GaussianRational(BigRational(0), BigRational(-1)).pow(
                              static_cast<unsigned>(s)));
    }
};

inline StarSeries star(const ChartGeometry& G, TauCache& tc, const GradedSeries& f,
                       const GradedSeries& g) {
    StarSeries s;
    s.value = weyl_pairing(G, tc.tau(f), tc.tau(g));
    s.certified_order = G.cfg.K / 2;
    return s;
}

}  // namespace fedforge
