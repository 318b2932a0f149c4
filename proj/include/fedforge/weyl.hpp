#pragma once

#include <array>
#include <bit>

#include "fedforge/chart.hpp"

namespace fedforge {

/** Form parity shared by every term; throws on mixed parity. */
inline int form_parity(const GradedSeries& a) {
    int parity = -1;
    for (const auto& [k, c] : a.terms()) {
        int p = std::popcount(k.odd) % 2;
        if (parity < 0) parity = p;
        if (parity != p) throw ContractError("element mixes even and odd form degree");
    }
    return parity < 0 ? 0 : parity;
}

/** Iterated fiber derivatives of a fixed element, memoized by multi-index. */
class FiberDerivatives {
  public:
    explicit FiberDerivatives(const GradedSeries& base) { memo_[{}] = base; }

    const GradedSeries& get(const std::array<std::uint8_t, kMaxDim>& alpha) {
        auto it = memo_.find(alpha);
        if (it != memo_.end()) return it->second;
        std::array<std::uint8_t, kMaxDim> prev = alpha;
        int j = 0;
        while (prev[j] == 0) ++j;
        --prev[j];
        GradedSeries d = get(prev).partial_deriv(fiber_var(j + 1));
        return memo_.emplace(alpha, std::move(d)).first->second;
    }

  private:
    std::map<std::array<std::uint8_t, kMaxDim>, GradedSeries> memo_;
};

/** Fiberwise product: sum over k of (1/k!) (i nu / 2)^k
 *  Lambda^{j1 k1} ... Lambda^{jk kk} (d^k_y a)(d^k_y b), forms multiplying by
 *  exterior product and fiber derivatives acting evenly.
 *
 *  Contraction tuples are grouped by the multiset of Lambda entries used;
 *  each multiset with multiplicities (m_e) carries weight prod_e 1/m_e!. */
inline GradedSeries fiber_product(const ChartGeometry& G, const GradedSeries& a,
                                  const GradedSeries& b) {
    if (a.profile() != G.wp || b.profile() != G.wp)
        throw ContractError("fiber_product arguments must live in the chart's Weyl class");
    GradedSeries result = a * b;
    if (a.is_zero() || b.is_zero()) return result;

    const int kmax = std::min({a.max_fiber_degree(), b.max_fiber_degree(), G.wp.nu_cap});
    if (kmax == 0 || G.lambda_support.empty()) return result;

    FiberDerivatives da(a), db(b);
    const auto& support = G.lambda_support;
    const GaussianRational half_i(BigRational(0), BigRational(1, 2));
    std::array<std::uint8_t, kMaxDim> alpha{}, beta{};

    auto enumerate = [&](auto&& self, std::size_t idx, int used, const GradedSeries& lpow,
                         const GaussianRational& invfact) -> void {
        if (idx == support.size()) {
            if (used == 0) return;  // bare product already accumulated
            result += (da.get(alpha) * db.get(beta) * lpow)
                          .shift_nu(used, invfact * half_i.pow(static_cast<unsigned>(used)));
            return;
        }
        auto [j, k] = support[idx];
        self(self, idx + 1, used, lpow, invfact);
        GradedSeries lp = lpow;
        GaussianRational f = invfact;
        int added = 0;
        for (int m = 1; used + m <= kmax; ++m) {
            ++alpha[j - 1];
            ++beta[k - 1];
            ++added;
            if (da.get(alpha).is_zero() || db.get(beta).is_zero()) break;
            lp = lp * G.lam(j, k);
            f = f / GaussianRational(m);
            self(self, idx + 1, used + m, lp, f);
        }
        alpha[j - 1] = static_cast<std::uint8_t>(alpha[j - 1] - added);
        beta[k - 1] = static_cast<std::uint8_t>(beta[k - 1] - added);
    };
    enumerate(enumerate, 0, 0, GradedSeries::one(G.wp), GaussianRational(1));
    return result;
}

/** (1/(i nu)) [a, b] with the graded commutator; both arguments must be
 *  parity homogeneous. The nu-free parts cancel identically, so the division
 *  is exact (and throws if a convention error ever breaks that). */
inline GradedSeries scaled_commutator(const ChartGeometry& G, const GradedSeries& a,
                                      const GradedSeries& b) {
    int pa = form_parity(a), pb = form_parity(b);
    GradedSeries ab = fiber_product(G, a, b);
    GradedSeries ba = fiber_product(G, b, a);
    GradedSeries comm = (pa * pb) % 2 ? ab + ba : ab - ba;
    return GaussianRational(BigRational(0), BigRational(-1)) * comm.exact_div_nu();
}

/** Fiberwise Poisson bracket Lambda^{jk} (d_{y^j} a)(d_{y^k} b); equals the
 *  scaled commutator at nu = 0. */
inline GradedSeries fiber_poisson(const ChartGeometry& G, const GradedSeries& a,
                                  const GradedSeries& b) {
    GradedSeries r = GradedSeries::zero(G.wp);
    for (auto [j, k] : G.lambda_support)
        r += G.lam(j, k) * a.partial_deriv(fiber_var(j)) * b.partial_deriv(fiber_var(k));
    return r;
}

/** Fiberwise product evaluated at the fiber origin; defined for form-free
 *  arguments (the sections that represent observables). */
inline GradedSeries weyl_pairing(const ChartGeometry& G, const GradedSeries& a,
                                 const GradedSeries& b) {
    if (!a.form_free() || !b.form_free())
        throw ContractError("pairing requires form-free arguments");
    return fiber_product(G, a, b).component(Grading::Fiber, 0);
}

/** delta(a) = dx^j (d a / d y^j), the form index multiplying from the left. */
inline GradedSeries delta(const GradedSeries& a) {
    const VariableProfile& p = a.profile();
    GradedSeries r = GradedSeries::zero(p);
    for (int j = 1; j <= p.n; ++j)
        r += GradedSeries::dx(p, j) * a.partial_deriv(fiber_var(j));
    return r;
}

/** delta_inv: on a term of fiber degree p and form degree q with p + q > 0,
 *  (1/(p+q)) y^j i(d/dx^j); zero on the p = q = 0 part. */
inline GradedSeries delta_inv(const GradedSeries& a) {
    const VariableProfile& pr = a.profile();
    std::vector<std::pair<MonomialKey, GaussianRational>> out;
    for (const auto& [key, c] : a.terms()) {
        if (key.odd >= (1u << pr.n))
            throw ContractError("delta_inv: unexpected odd factors beyond the dx block");
        int p = key.fiber_degree();
        int q = std::popcount(key.odd);
        if (p + q == 0) continue;
        GaussianRational base = c / GaussianRational(p + q);
        for (int j = 0; j < pr.n; ++j) {
            std::uint16_t bit = static_cast<std::uint16_t>(1u << j);
            if (!(key.odd & bit)) continue;
            MonomialKey k2 = key;
            k2.odd = static_cast<std::uint16_t>(key.odd & ~bit);
            if (k2.fib[j] + 1 > 255 || k2.fiber_degree() + 1 > pr.fiber_cap)
                throw ContractError("delta_inv: fiber order exhausted");
            k2.fib[j] = static_cast<std::uint8_t>(k2.fib[j] + 1);
            int below = std::popcount(static_cast<std::uint16_t>(key.odd & (bit - 1)));
            out.emplace_back(k2, (below % 2) ? -base : base);
        }
    }
    if (a.x_exact()) return GradedSeries::from_terms(pr, out);
    return GradedSeries::jet(pr, out, a.valid_x_order());
}

/** Covariant derivative: dx^j (d_x^j a - Gamma^l_{jk} y^k d_{y^l} a). */
inline GradedSeries nabla(const ChartGeometry& G, const GradedSeries& a) {
    if (a.profile() != G.wp)
        throw ContractError("nabla argument must live in the chart's Weyl class");
    GradedSeries r = GradedSeries::zero(G.wp);
    std::vector<GradedSeries> dfib;
    dfib.reserve(G.wp.n);
    for (int l = 1; l <= G.wp.n; ++l) dfib.push_back(a.partial_deriv(fiber_var(l)));
    for (int j = 1; j <= G.wp.n; ++j) {
        GradedSeries t = a.partial_deriv(x_var(j));
        for (int l = 1; l <= G.wp.n; ++l) {
            if (dfib[l - 1].is_zero()) continue;
            for (int k = 1; k <= G.wp.n; ++k) {
                const GradedSeries& gam = G.Gam(l, j, k);
                if (gam.is_zero()) continue;
                t -= gam * G.y(k) * dfib[l - 1];
            }
        }
        r += G.dx(j) * t;
    }
    return r;
}

}  // namespace fedforge
