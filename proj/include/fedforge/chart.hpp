#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fedforge/polyparse.hpp"
#include "fedforge/series.hpp"

namespace fedforge {

/** Truncation orders for one run. K bounds the total grading of the recursion
 *  (2*nu-degree + fiber-degree); N_f is the fiber order kept in dequantized
 *  presentations; N_x is the x-jet order used for derived non-polynomial data;
 *  N_nu bounds nu powers. Negative N_x / N_nu select the defaults. */
struct RunConfig {
    int K = 8;
    int N_f = 4;
    int N_x = -1;
    int N_nu = -1;

    RunConfig normalized() const {
        RunConfig c = *this;
        if (c.N_x < 0) c.N_x = c.K + 2;
        if (c.N_nu < 0) c.N_nu = c.K / 2 + 1;
        if (c.K < 2) throw ValidationError("K must be at least 2");
        if (c.N_f < 1) throw ValidationError("N_f must be at least 1");
        if (c.N_f > c.K) throw ValidationError("N_f cannot exceed K");
        if (c.N_x < 1) throw ValidationError("N_x must be at least 1");
        if (c.N_nu < 1) throw ValidationError("N_nu must be at least 1");
        return c;
    }
};

/** One additive piece of the central 2-form: poly(x) * nu^nu_power * dx_j^dx_k. */
struct Omega2Term {
    int nu_power = 1;
    int j = 1;
    int k = 2;
    std::string poly = "1";
};

/** Textual chart description; the canonical interchange form for presets,
 *  files and tests. All polynomial entries use the parser grammar. */
struct ChartInput {
    std::string name = "custom";
    int n = 2;
    std::vector<std::vector<std::string>> lambda;              // Lambda^{jk}, [j][k]
    std::vector<std::vector<std::vector<std::string>>> gamma;  // Gamma^l_{jk}, [l][j][k]
    std::vector<Omega2Term> omega2;
    RunConfig config;
};

inline std::vector<std::vector<GaussianRational>> invert_constant_matrix(
    std::vector<std::vector<GaussianRational>> m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<GaussianRational>> inv(n, std::vector<GaussianRational>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (!m[row][col].is_zero()) {
                pivot = row;
                break;
            }
        if (pivot < 0) throw ValidationError("matrix is singular");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        GaussianRational d = m[col][col];
        for (int c = 0; c < n; ++c) {
            m[col][c] = m[col][c] / d;
            inv[col][c] = inv[col][c] / d;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            GaussianRational f = m[row][col];
            for (int c = 0; c < n; ++c) {
                m[row][c] -= f * m[col][c];
                inv[row][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

/** A validated coordinate chart: Poisson tensor Lambda^{jk}, compatible
 *  connection Gamma^l_{jk}, optional central 2-form, and everything derived
 *  from them. All member series share the fiber-side profile wp (tag y). */
class ChartGeometry {
  public:
    std::string name;
    RunConfig cfg;
    VariableProfile wp;

    std::vector<std::vector<GradedSeries>> lambda_up;  // Lambda^{jk}
    std::vector<std::vector<GradedSeries>> omega_low;  // omega_{jk}, inverse of Lambda
    std::vector<std::vector<std::vector<GradedSeries>>> gamma;      // Gamma^l_{jk} = [l][j][k]
    std::vector<std::vector<std::vector<GradedSeries>>> torsion;    // T^j_{kl} = [j][k][l]
    std::vector<std::vector<std::vector<std::vector<GradedSeries>>>> curvature;  // R^s_{tkl}
    GradedSeries omega2;     // central 2-form, each term carries nu^(>=1)
    GradedSeries element_T;  // 1/2 omega_{sa} T^a_{kl} y^s dx^k dx^l
    GradedSeries element_R;  // 1/4 omega_{sa} R^a_{tkl} y^s y^t dx^k dx^l
    std::vector<std::pair<int, int>> lambda_support;  // 1-based (j,k), Lambda^{jk} != 0
    bool curvature_flat = true;
    bool torsion_free = true;

    const GradedSeries& lam(int j, int k) const { return lambda_up[j - 1][k - 1]; }
    const GradedSeries& om(int j, int k) const { return omega_low[j - 1][k - 1]; }
    const GradedSeries& Gam(int l, int j, int k) const { return gamma[l - 1][j - 1][k - 1]; }
    const GradedSeries& tors(int j, int k, int l) const { return torsion[j - 1][k - 1][l - 1]; }
    const GradedSeries& curv(int s, int t, int k, int l) const {
        return curvature[s - 1][t - 1][k - 1][l - 1];
    }

    GradedSeries y(int j) const { return GradedSeries::variable(wp, fiber_var(j)); }
    GradedSeries dx(int j) const { return GradedSeries::dx(wp, j); }

    static ChartGeometry build(const ChartInput& in);
};

inline ChartGeometry ChartGeometry::build(const ChartInput& in) {
    ChartGeometry g;
    g.name = in.name;
    g.cfg = in.config.normalized();
    g.wp = VariableProfile{in.n, g.cfg.N_x, g.cfg.K, g.cfg.N_nu, FiberTag::Y};
    g.wp.check();
    const int n = in.n;
    const VariableProfile& wp = g.wp;

    if (static_cast<int>(in.lambda.size()) != n)
        throw ValidationError("lambda must be an n-by-n matrix");
    g.lambda_up.assign(n, {});
    for (int j = 0; j < n; ++j) {
        if (static_cast<int>(in.lambda[j].size()) != n)
            throw ValidationError("lambda must be an n-by-n matrix");
        for (int k = 0; k < n; ++k)
            g.lambda_up[j].push_back(parse_polynomial(in.lambda[j][k], wp));
    }

    if (in.gamma.empty()) {
        g.gamma.assign(
            n, std::vector<std::vector<GradedSeries>>(
                   n, std::vector<GradedSeries>(n, GradedSeries::zero(wp))));
    } else {
        if (static_cast<int>(in.gamma.size()) != n)
            throw ValidationError("gamma must be an n-by-n-by-n array");
        g.gamma.assign(n, {});
        for (int l = 0; l < n; ++l) {
            if (static_cast<int>(in.gamma[l].size()) != n)
                throw ValidationError("gamma must be an n-by-n-by-n array");
            g.gamma[l].assign(n, {});
            for (int j = 0; j < n; ++j) {
                if (static_cast<int>(in.gamma[l][j].size()) != n)
                    throw ValidationError("gamma must be an n-by-n-by-n array");
                for (int k = 0; k < n; ++k)
                    g.gamma[l][j].push_back(parse_polynomial(in.gamma[l][j][k], wp));
            }
        }
    }

    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
            if (!(g.lam(j, k) + g.lam(k, j)).is_zero())
                throw ValidationError("lambda must be antisymmetric");

    // Covariant constancy of Lambda:
    //   d_l Lambda^{jk} + Gamma^j_{lm} Lambda^{mk} + Gamma^k_{lm} Lambda^{jm} = 0.
    for (int l = 1; l <= n; ++l)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                GradedSeries s = g.lam(j, k).partial_deriv(x_var(l));
                for (int m = 1; m <= n; ++m)
                    s += g.Gam(j, l, m) * g.lam(m, k) + g.Gam(k, l, m) * g.lam(j, m);
                if (!s.is_zero())
                    throw ValidationError(
                        "connection is not compatible with lambda at component (" +
                        std::to_string(j) + "," + std::to_string(k) + ";" + std::to_string(l) +
                        ")");
            }

    // omega = Lambda^{-1}: exact for constant Lambda, otherwise a geometric
    // series around the constant part, trusted through x-order N_x.
    bool lambda_constant = true;
    std::vector<std::vector<GaussianRational>> l0(n, std::vector<GaussianRational>(n, 0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            l0[j][k] = g.lambda_up[j][k].constant_term();
            if (g.lambda_up[j][k] != GradedSeries::constant(wp, l0[j][k])) lambda_constant = false;
        }
    std::vector<std::vector<GaussianRational>> b;
    try {
        b = invert_constant_matrix(l0);
    } catch (const ValidationError&) {
        throw ValidationError("lambda is degenerate at the chart origin");
    }
    auto const_matrix = [&](const std::vector<std::vector<GaussianRational>>& m) {
        std::vector<std::vector<GradedSeries>> r(
            n, std::vector<GradedSeries>(n, GradedSeries::zero(wp)));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) r[j][k] = GradedSeries::constant(wp, m[j][k]);
        return r;
    };
    auto mat_mul = [&](const std::vector<std::vector<GradedSeries>>& a,
                       const std::vector<std::vector<GradedSeries>>& c) {
        std::vector<std::vector<GradedSeries>> r(
            n, std::vector<GradedSeries>(n, GradedSeries::zero(wp)));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) r[j][k] += a[j][m] * c[m][k];
        return r;
    };
    if (lambda_constant) {
        g.omega_low = const_matrix(b);
    } else {
        // Lambda = L0 (I + B*tail) with B = L0^{-1}, so
        // omega = (sum_m (-B*tail)^m) * B; tail starts at x-degree 1, so
        // orders beyond N_x cannot reach back and the jet is trusted there.
        auto B = const_matrix(b);
        std::vector<std::vector<GradedSeries>> tail(
            n, std::vector<GradedSeries>(n, GradedSeries::zero(wp)));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                tail[j][k] = g.lambda_up[j][k] - GradedSeries::constant(wp, l0[j][k]);
        auto step = mat_mul(B, tail);
        for (auto& row : step)
            for (auto& e : row) e = -e;
        auto acc = const_matrix(b);  // running (-B*tail)^m * B, m = 0 first
        g.omega_low = acc;
        for (int m = 1; m <= g.cfg.N_x; ++m) {
            acc = mat_mul(step, acc);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) g.omega_low[j][k] += acc[j][k];
        }
        for (auto& row : g.omega_low)
            for (auto& e : row) e = e.truncate_x(g.cfg.N_x);
    }

    // Postcondition: omega * Lambda = identity through the declared order.
    {
        auto chk = mat_mul(g.omega_low, g.lambda_up);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                GradedSeries want = (j == k) ? GradedSeries::one(wp) : GradedSeries::zero(wp);
                if (!equal_to_order(chk[j][k], want))
                    throw InternalError("symplectic inverse failed its product check");
            }
    }

    // Closedness of omega: cyclic sum of x-derivatives over index triples.
    for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k)
            for (int l = k + 1; l <= n; ++l) {
                GradedSeries s = g.om(k, l).partial_deriv(x_var(j)) +
                                 g.om(l, j).partial_deriv(x_var(k)) +
                                 g.om(j, k).partial_deriv(x_var(l));
                if (!equal_to_order(s, GradedSeries::zero(wp)))
                    throw ValidationError("omega is not closed: chart is not symplectic");
            }

    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
            if (!g.lam(j, k).is_zero()) g.lambda_support.emplace_back(j, k);

    // Central 2-form.
    g.omega2 = GradedSeries::zero(wp);
    for (const Omega2Term& t : in.omega2) {
        if (t.nu_power < 1)
            throw ValidationError("central 2-form terms must vanish at nu = 0");
        if (t.j < 1 || t.j > n || t.k < 1 || t.k > n || t.j == t.k)
            throw ValidationError("central 2-form term has bad form indices");
        GradedSeries c = parse_polynomial(t.poly, wp);
        g.omega2 += GradedSeries::nu(wp, t.nu_power) * c * g.dx(t.j) * g.dx(t.k);
    }
    {
        GradedSeries d_omega2 = GradedSeries::zero(wp);
        for (int l = 1; l <= n; ++l)
            d_omega2 += g.dx(l) * g.omega2.partial_deriv(x_var(l));
        if (!equal_to_order(d_omega2, GradedSeries::zero(wp)))
            throw ValidationError("central 2-form is not closed");
    }

    // Torsion and curvature of the connection.
    g.torsion.assign(n, std::vector<std::vector<GradedSeries>>(
                            n, std::vector<GradedSeries>(n, GradedSeries::zero(wp))));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                g.torsion[j][k][l] = g.gamma[j][k][l] - g.gamma[j][l][k];
                if (!g.torsion[j][k][l].is_zero()) g.torsion_free = false;
            }
    g.curvature.assign(
        n, std::vector<std::vector<std::vector<GradedSeries>>>(
               n, std::vector<std::vector<GradedSeries>>(
                      n, std::vector<GradedSeries>(n, GradedSeries::zero(wp)))));
    for (int s = 1; s <= n; ++s)
        for (int t = 1; t <= n; ++t)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    GradedSeries r = g.Gam(s, l, t).partial_deriv(x_var(k)) -
                                     g.Gam(s, k, t).partial_deriv(x_var(l));
                    for (int a = 1; a <= n; ++a)
                        r += g.Gam(s, k, a) * g.Gam(a, l, t) - g.Gam(s, l, a) * g.Gam(a, k, t);
                    g.curvature[s - 1][t - 1][k - 1][l - 1] = r;
                    if (!r.is_zero()) g.curvature_flat = false;
                }

    g.element_T = GradedSeries::zero(wp);
    g.element_R = GradedSeries::zero(wp);
    for (int s = 1; s <= n; ++s)
        for (int a = 1; a <= n; ++a) {
            if (g.om(s, a).is_zero()) continue;
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    if (!g.tors(a, k, l).is_zero())
                        g.element_T += GaussianRational(BigRational(1, 2)) * g.om(s, a) *
                                       g.tors(a, k, l) * g.y(s) * g.dx(k) * g.dx(l);
                    for (int t = 1; t <= n; ++t)
                        if (!g.curv(a, t, k, l).is_zero())
                            g.element_R += GaussianRational(BigRational(1, 4)) * g.om(s, a) *
                                           g.curv(a, t, k, l) * g.y(s) * g.y(t) * g.dx(k) *
                                           g.dx(l);
                }
        }

    return g;
}

/** Bundled presets used by the command line and the test suite. */
inline std::vector<std::string> preset_names() {
    return {"moyal2", "wick2", "torsion2", "moyal2_omega", "wick2_torsion"};
}

inline ChartInput preset_chart(const std::string& name) {
    ChartInput in;
    in.name = name;
    in.n = 2;
    if (name == "moyal2") {
        in.lambda = {{"0", "1"}, {"-1", "0"}};
    } else if (name == "wick2") {
        in.lambda = {{"0", "2"}, {"-2", "0"}};
    } else if (name == "torsion2") {
        in.lambda = {{"0", "1"}, {"-1", "0"}};
        in.gamma = {{{"0", "1"}, {"0", "0"}}, {{"0", "0"}, {"0", "0"}}};
    } else if (name == "moyal2_omega") {
        in.lambda = {{"0", "1"}, {"-1", "0"}};
        in.omega2 = {Omega2Term{1, 1, 2, "1"}, Omega2Term{2, 1, 2, "-1/4"}};
    } else if (name == "wick2_torsion") {
        in.lambda = {{"0", "2"}, {"-2", "0"}};
        in.gamma = {{{"1", "0"}, {"0", "0"}}, {{"0", "-1"}, {"0", "0"}}};
    } else {
        throw ValidationError("unknown chart preset: " + name);
    }
    return in;
}

/** Builds a chart with constant Lambda and connection Gamma^j_{lm} =
 *  S^{jk}_l omega_{km}; compatibility holds for any S symmetric in (j,k),
 *  which is how the suite gets charts with curvature and torsion. */
inline ChartInput make_recipe_chart(const std::string& name, int n,
                                    const std::vector<std::vector<std::string>>& lambda,
                                    const std::vector<std::vector<std::vector<std::string>>>& S,
                                    RunConfig cfg = {}) {
    ChartInput in;
    in.name = name;
    in.n = n;
    in.lambda = lambda;
    in.config = cfg;
    RunConfig nc = cfg.normalized();
    VariableProfile p{n, nc.N_x, nc.K, nc.N_nu, FiberTag::Y};
    std::vector<std::vector<GaussianRational>> l0(n, std::vector<GaussianRational>(n, 0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) l0[j][k] = parse_polynomial(lambda[j][k], p).constant_term();
    auto om = invert_constant_matrix(l0);
    in.gamma.assign(n, std::vector<std::vector<std::string>>(n, std::vector<std::string>(n)));
    for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
            for (int m = 1; m <= n; ++m) {
                GradedSeries s = GradedSeries::zero(p);
                for (int k = 1; k <= n; ++k)
                    s += GradedSeries::constant(p, om[k - 1][m - 1]) *
                         parse_polynomial(S[j - 1][k - 1][l - 1], p);
                in.gamma[j - 1][l - 1][m - 1] = s.str();
            }
    return in;
}

}  // namespace fedforge
