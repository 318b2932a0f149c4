#include <catch2/catch_amalgamated.hpp>

#include "fedforge/quantizer.hpp"

using namespace fedforge;

namespace {

ChartGeometry preset(const std::string& name, int K = 8) {
    ChartInput in = preset_chart(name);
    in.config.K = K;
    return ChartGeometry::build(in);
}

GradedSeries xv(const ChartGeometry& g, int j) {
    return GradedSeries::variable(g.wp, x_var(j));
}

}  // namespace

TEST_CASE("flat sections on the translation invariant chart") {
    ChartGeometry g = preset("moyal2");
    FlatCorrection r = compute_r(g);
    TauCache tc(g, r);

    // with no correction the section is f evaluated at x + y
    std::map<VarId, GradedSeries> shift = {{x_var(1), xv(g, 1) + g.y(1)},
                                           {x_var(2), xv(g, 2) + g.y(2)}};
    for (const GradedSeries& f :
         {xv(g, 1), xv(g, 1) * xv(g, 2), xv(g, 1) * xv(g, 1) * xv(g, 2),
          xv(g, 2) * xv(g, 2) * xv(g, 2)}) {
        CHECK(tc.tau(f) == substitute(f, shift));
    }

    CHECK(tc.tau(GradedSeries::one(g.wp)) == GradedSeries::one(g.wp));
    CHECK_THROWS_AS(tc.tau(g.y(1)), ContractError);
}

TEST_CASE("sections are flat and reproduce their input") {
    for (const char* name : {"torsion2", "moyal2_omega", "wick2_torsion"}) {
        ChartGeometry g = preset(name);
        FlatCorrection r = compute_r(g);
        TauCache tc(g, r);
        GradedSeries f = xv(g, 1) * xv(g, 1) + GaussianRational(3) * (xv(g, 1) * xv(g, 2));
        GradedSeries tf = tc.tau(f);
        CHECK(apply_D(g, r.total, tf).truncate(Grading::Big, g.cfg.K - 1).is_zero());
        CHECK(tf.component(Grading::Fiber, 0) == f);
    }
}

TEST_CASE("section map is linear over nu coefficients") {
    ChartGeometry g = preset("torsion2");
    FlatCorrection r = compute_r(g);
    TauCache tc(g, r);
    GradedSeries nu = GradedSeries::nu(g.wp);
    GradedSeries f = xv(g, 1) * xv(g, 2);
    CHECK(tc.tau(nu * f) == nu * tc.tau(f));
    CHECK(tc.tau(f + nu * f) == tc.tau(f) + nu * tc.tau(f));
}

TEST_CASE("star product on the translation invariant chart") {
    ChartGeometry g = preset("moyal2");
    FlatCorrection r = compute_r(g);
    TauCache tc(g, r);
    GradedSeries x1 = xv(g, 1), x2 = xv(g, 2);
    GradedSeries nu = GradedSeries::nu(g.wp);
    GaussianRational half_i(BigRational(0), BigRational(1, 2));

    StarSeries s = star(g, tc, x1, x2);
    CHECK(s.value == x1 * x2 + half_i * nu);
    CHECK(s.value.str() == "x1*x2 + 1/2*i*nu");
    CHECK(s.certified_order == 4);

    CHECK(star(g, tc, x2, x1).value == x1 * x2 - half_i * nu);
    CHECK(star(g, tc, x1 * x1, x2 * x2).value ==
          x1 * x1 * x2 * x2 +
              GaussianRational(BigRational(0), BigRational(2)) * (nu * x1 * x2) -
              GaussianRational(BigRational(1, 2)) * (nu * nu));

    // C_0 = pointwise product, C_1 = half the Poisson bracket
    CHECK(s.c_slot(0) == x1 * x2);
    CHECK(s.c_slot(1) == GradedSeries::constant(g.wp, GaussianRational(BigRational(1, 2))));
    CHECK(s.c_slot(2).is_zero());

    // unit
    CHECK(star(g, tc, GradedSeries::one(g.wp), x1 * x2).value == x1 * x2);
    CHECK(star(g, tc, x1 * x2, GradedSeries::one(g.wp)).value == x1 * x2);
}

TEST_CASE("star product with rescaled tensor") {
    ChartGeometry g = preset("wick2");
    FlatCorrection r = compute_r(g);
    TauCache tc(g, r);
    GradedSeries x1 = xv(g, 1), x2 = xv(g, 2);
    CHECK(star(g, tc, x1, x2).value ==
          x1 * x2 + GaussianRational::i() * GradedSeries::nu(g.wp));
}

TEST_CASE("star product respects the first order bracket on every preset") {
    for (const std::string& name : preset_names()) {
        ChartGeometry g = preset(name, 6);
        FlatCorrection r = compute_r(g);
        TauCache tc(g, r);
        GradedSeries f = xv(g, 1) * xv(g, 1), h = xv(g, 1) * xv(g, 2);

        StarSeries fh = star(g, tc, f, h);
        CHECK(fh.c_slot(0) == f * h);
        GradedSeries bracket = GradedSeries::zero(g.wp);
        for (auto [j, k] : g.lambda_support)
            bracket += g.lam(j, k) * f.partial_deriv(x_var(j)) * h.partial_deriv(x_var(k));
        CHECK(fh.c_slot(1) == GaussianRational(BigRational(1, 2)) * bracket);

        // antisymmetry of the first-order term
        StarSeries hf = star(g, tc, h, f);
        CHECK(fh.c_slot(1) - hf.c_slot(1) == bracket);
    }
}

TEST_CASE("classical sections and flat lift") {
    ChartGeometry g = preset("torsion2");
    ClassicalCorrection rc = compute_r_classical(g);
    ClassicalTauCache ctc(g, rc);

    GradedSeries f = xv(g, 1) * xv(g, 2);
    GradedSeries tf = ctc.tau(f);
    CHECK(apply_D_classical(g, rc.total, tf).truncate(Grading::Fiber, g.cfg.K - 1).is_zero());
    CHECK(tf.component(Grading::Fiber, 0) == f);
    CHECK_THROWS_AS(ctc.tau(GradedSeries::nu(g.wp)), ContractError);

    std::vector<GradedSeries> kappa = compute_kappa(g, ctc);
    REQUIRE(kappa.size() == 2);
    for (int k = 1; k <= 2; ++k) {
        CHECK(kappa[k - 1].component(Grading::Fiber, 0) == xv(g, k));
        CHECK(kappa[k - 1].component(Grading::Fiber, 1) == g.y(k));
    }
}
