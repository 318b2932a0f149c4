#include <catch2/catch_amalgamated.hpp>

#include "fedforge/reversion.hpp"
#include "fedforge/series.hpp"

using namespace fedforge;

namespace {

const VariableProfile P{2, 10, 8, 5, FiberTag::Y};

GradedSeries X(int j) { return GradedSeries::variable(P, x_var(j)); }
GradedSeries Y(int j) { return GradedSeries::variable(P, fiber_var(j)); }
GradedSeries DX(int j) { return GradedSeries::dx(P, j); }

}  // namespace

TEST_CASE("ring arithmetic and term bookkeeping") {
    GradedSeries s = (X(1) + Y(1)) * (X(1) + Y(1));
    CHECK(s == X(1) * X(1) + GaussianRational(2) * (X(1) * Y(1)) + Y(1) * Y(1));
    CHECK(s.term_count() == 3);

    CHECK((s - s).is_zero());
    CHECK((X(1) + (-X(1))).term_count() == 0);

    GradedSeries nu = GradedSeries::nu(P);
    CHECK(nu * nu == GradedSeries::nu(P, 2));
    CHECK(GradedSeries::nu(P, 5) * nu == GradedSeries::zero(P));  // nu_cap = 5

    CHECK_THROWS_AS(X(1) + GradedSeries::one(VariableProfile{4, 10, 8, 5, FiberTag::Y}),
                    ContractError);
    CHECK_THROWS_AS(GradedSeries::variable(P, x_var(3)), ContractError);
}

TEST_CASE("odd factors carry Koszul signs") {
    CHECK(DX(1) * DX(2) == -(DX(2) * DX(1)));
    CHECK((DX(1) * DX(1)).is_zero());
    CHECK((DX(1) * DX(2) * DX(1)).is_zero());

    GradedSeries dz1 = GradedSeries::d_fiber(P, 1);
    CHECK(DX(2) * dz1 == -(dz1 * DX(2)));

    CHECK(odd_product_sign(0b01, 0b10) == 1);
    CHECK(odd_product_sign(0b10, 0b01) == -1);
    CHECK(odd_product_sign(0b01, 0b01) == 0);
}

TEST_CASE("interior product is a signed odd derivation") {
    GradedSeries w = DX(1) * DX(2);
    CHECK(w.interior_product(1) == DX(2));
    CHECK(w.interior_product(2) == -DX(1));
    CHECK(DX(2).interior_product(1).is_zero());
    CHECK(w.interior_product(1).interior_product(2) == GradedSeries::one(P));
}

TEST_CASE("gradings and truncation") {
    MonomialKey k;
    k.x[0] = 1;
    k.fib[1] = 2;
    k.nu = 1;
    k.odd = 0b11;
    GradedSeries s = GradedSeries::monomial(P, k, 1);

    CHECK(grading_of(k, Grading::Nu) == 1);
    CHECK(grading_of(k, Grading::Fiber) == 2);
    CHECK(grading_of(k, Grading::Form) == 2);
    CHECK(grading_of(k, Grading::Big) == 4);

    CHECK(s.component(Grading::Big, 4) == s);
    CHECK(s.component(Grading::Big, 3).is_zero());
    CHECK(s.truncate(Grading::Big, 3).is_zero());
    CHECK(s.truncate(Grading::Nu, 1) == s);
    CHECK(s.max_fiber_degree() == 2);
    CHECK_FALSE(s.form_free());
    CHECK_FALSE(s.fiber_free());
}

TEST_CASE("derivatives") {
    GradedSeries s = X(1) * X(1) * Y(2);
    CHECK(s.partial_deriv(x_var(1)) == GaussianRational(2) * (X(1) * Y(2)));
    CHECK(s.partial_deriv(fiber_var(2)) == X(1) * X(1));
    CHECK(s.partial_deriv(fiber_var(1)).is_zero());
}

TEST_CASE("finite jets track their trusted order") {
    MonomialKey k2;
    k2.x[0] = 2;
    GradedSeries j = GradedSeries::jet(P, {{k2, GaussianRational(1)}}, 2);
    CHECK(j.valid_x_order() == 2);
    CHECK_FALSE(j.x_exact());

    GradedSeries d1 = j.partial_deriv(x_var(1));
    CHECK(d1.valid_x_order() == 1);
    GradedSeries d2 = d1.partial_deriv(x_var(1));
    CHECK(d2.valid_x_order() == 0);
    CHECK(d2.constant_term() == GaussianRational(2));
    CHECK_THROWS_AS(d2.partial_deriv(x_var(1)), ContractError);

    // fiber derivatives never consume x-order
    CHECK((j * Y(1)).partial_deriv(fiber_var(1)).valid_x_order() == 2);

    // a product inherits the weaker order and truncates to it
    GradedSeries p = j * X(1);
    CHECK(p.valid_x_order() == 2);
    CHECK(p.is_zero());

    // declaring a term beyond the declared order is a contract violation
    MonomialKey k3;
    k3.x[0] = 3;
    CHECK_THROWS_AS(GradedSeries::jet(P, {{k3, GaussianRational(1)}}, 2), ContractError);

    CHECK(equal_to_order(j, j + X(1) * X(1) * X(1)));
    // data beyond the trusted order is discarded on entry, not stored
    CHECK(j == j + X(1) * X(1) * X(1));
    CHECK(j.truncate_x(1).is_zero());
    CHECK(j.truncate_x(1).valid_x_order() == 1);
}

TEST_CASE("nu division and shifting") {
    GradedSeries nu = GradedSeries::nu(P);
    CHECK((nu * X(1)).exact_div_nu() == X(1));
    CHECK_THROWS_AS((X(1) + nu * X(2)).exact_div_nu(), ContractError);

    CHECK((nu * X(1)).shift_nu(-1, GaussianRational(1)) == X(1));
    CHECK_THROWS_AS(X(1).shift_nu(-1, GaussianRational(1)), ContractError);
    CHECK(X(1).shift_nu(1, GaussianRational::i()) == GaussianRational::i() * (nu * X(1)));
    CHECK(X(1).shift_nu(6, GaussianRational(1)).is_zero());  // beyond nu_cap
}

TEST_CASE("substitution enforces its contract") {
    std::map<VarId, GradedSeries> imgs;

    imgs = {{x_var(1), X(1) + GradedSeries::one(P)}};
    CHECK_THROWS_AS(substitute(X(1), imgs), ContractError);

    imgs = {{fiber_var(1), Y(1) + X(1)}};  // x1 term has fiber degree 0
    CHECK_THROWS_AS(substitute(Y(1), imgs), ContractError);

    imgs = {{x_var(1), DX(1)}};
    CHECK_THROWS_AS(substitute(X(1), imgs), ContractError);

    // retagging the fiber requires assigning every fiber variable
    VariableProfile pz = P;
    pz.tag = FiberTag::Zeta;
    imgs = {{fiber_var(1), GradedSeries::variable(pz, fiber_var(1))}};
    CHECK_THROWS_AS(substitute(Y(1), imgs), ContractError);
    imgs[fiber_var(2)] = GradedSeries::variable(pz, fiber_var(2));
    CHECK(substitute(Y(1), imgs) == GradedSeries::variable(pz, fiber_var(1)));

    // a fiber-truncated series cannot move to a class with a larger fiber cap
    VariableProfile small = P;
    small.fiber_cap = 3;
    GradedSeries trunc = GradedSeries::variable(small, fiber_var(1));
    imgs = {{fiber_var(1), Y(1)}};
    CHECK_THROWS_AS(substitute(trunc, imgs), ContractError);
}

TEST_CASE("substitution composes and accounts for jet orders") {
    std::map<VarId, GradedSeries> imgs = {{fiber_var(1), Y(1) + Y(1) * Y(1)}};
    CHECK(substitute(Y(1) * Y(2), imgs) == Y(1) * Y(2) + Y(1) * Y(1) * Y(2));

    // substituting x -> x + (fiber part) spends x-orders on the fiber cap
    VariableProfile small = P;
    small.fiber_cap = 3;
    auto sx = [&](int j) { return GradedSeries::variable(small, x_var(j)); };
    auto sy = [&](int j) { return GradedSeries::variable(small, fiber_var(j)); };
    MonomialKey k2;
    k2.x[0] = 2;
    GradedSeries a = GradedSeries::jet(small, {{k2, GaussianRational(1)}}, 4);
    imgs = {{x_var(1), sx(1) + sy(1)}};
    GradedSeries out = substitute(a, imgs);
    CHECK(out.valid_x_order() == 1);  // 4 minus the fiber cap
    CHECK(out == GradedSeries(small, 1) + GaussianRational(2) * (sx(1) * sy(1)) +
                     sy(1) * sy(1));
}

TEST_CASE("fiber system reversion") {
    VariableProfile pz = P;
    pz.tag = FiberTag::Zeta;
    pz.fiber_cap = 7;
    auto z = [&](int j) { return GradedSeries::variable(pz, fiber_var(j)); };
    GaussianRational c(BigRational(1, 9));

    // the forward system of one of the curved fixtures
    std::vector<GradedSeries> F = {z(1) + c * (z(1) * z(2) * z(2)),
                                   z(2) + c * (z(2) * z(2) * z(2))};
    std::vector<GradedSeries> Z = reverse_fiber_system(F, FiberTag::Xi);

    VariableProfile px = pz;
    px.tag = FiberTag::Xi;
    auto xi = [&](int j) { return GradedSeries::variable(px, fiber_var(j)); };

    // leading correction flips sign
    CHECK(Z[0].truncate(Grading::Fiber, 3) ==
          xi(1) - c * (xi(1) * xi(2) * xi(2)));
    CHECK(Z[1].truncate(Grading::Fiber, 3) == xi(2) - c * (xi(2) * xi(2) * xi(2)));

    // composing the other way round is also the identity through the fiber cap
    std::map<VarId, GradedSeries> back;
    back[fiber_var(1)] = substitute(F[0], {{fiber_var(1), xi(1)}, {fiber_var(2), xi(2)}});
    back[fiber_var(2)] = substitute(F[1], {{fiber_var(1), xi(1)}, {fiber_var(2), xi(2)}});
    for (int p = 0; p < 2; ++p) CHECK(substitute(Z[p], back) == xi(p + 1));

    // fiber-linear part must be exactly the identity
    std::vector<GradedSeries> bad = {z(1) + z(2), z(2)};
    CHECK_THROWS_AS(reverse_fiber_system(bad, FiberTag::Xi), ContractError);
}

TEST_CASE("profile moves and retagging") {
    VariableProfile pz = P;
    pz.tag = FiberTag::Zeta;
    CHECK(Y(1).retag(FiberTag::Zeta) == GradedSeries::variable(pz, fiber_var(1)));
    CHECK_THROWS_AS(Y(1).with_profile(pz), ContractError);
    CHECK(X(1).with_profile(pz) == GradedSeries::variable(pz, x_var(1)));

    VariableProfile smaller = P;
    smaller.fiber_cap = 1;
    CHECK((Y(1) * Y(1)).with_profile(smaller).is_zero());
}

TEST_CASE("rendering") {
    MonomialKey k;
    k.x[0] = 2;
    k.fib[1] = 1;
    k.nu = 1;
    k.odd = 0b11;
    GradedSeries s = GradedSeries::monomial(P, k, GaussianRational(BigRational(-3, 4)));
    CHECK(s.str() == "-3/4*x1^2*y2*nu*dx1^dx2");

    GradedSeries t = GaussianRational(BigRational(1, 2), BigRational(1)) * X(1);
    CHECK(t.str() == "(1/2+i)*x1");

    CHECK((X(1) + X(2)).str() == "x1 + x2");
    CHECK((X(1) - X(2)).str() == "x1 - x2");
    CHECK(GradedSeries::zero(P).str() == "0");
    CHECK(GradedSeries::d_fiber(P, 1).str() == "dy1");
    GradedSeries z = GradedSeries::variable(VariableProfile{2, 10, 8, 5, FiberTag::Zeta},
                                            fiber_var(2));
    CHECK(z.str() == "zeta2");
}
