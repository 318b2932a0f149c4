#include <catch2/catch_amalgamated.hpp>

#include "fedforge/rational.hpp"

using namespace fedforge;

TEST_CASE("gaussian rational field operations") {
    GaussianRational a(BigRational(1, 2), BigRational(1, 3));
    GaussianRational b(BigRational(-2), BigRational(5));

    CHECK((a + b) == GaussianRational(BigRational(-3, 2), BigRational(16, 3)));
    CHECK((a - b) == GaussianRational(BigRational(5, 2), BigRational(-14, 3)));
    CHECK((a * b) == GaussianRational(BigRational(-8, 3), BigRational(11, 6)));
    CHECK((a * b) / b == a);
    CHECK((-a) + a == GaussianRational(0));

    GaussianRational i = GaussianRational::i();
    CHECK(i * i == GaussianRational(-1));
    CHECK(i.pow(4).is_one());
    CHECK(i.pow(0).is_one());
    CHECK(a.pow(3) == a * a * a);

    CHECK(a.conj() == GaussianRational(BigRational(1, 2), BigRational(-1, 3)));
    CHECK((a * a.conj()).is_real());

    CHECK_THROWS_AS(a / GaussianRational(0), ContractError);
}

TEST_CASE("gaussian rational text form") {
    CHECK(GaussianRational(0).str() == "0");
    CHECK(GaussianRational(7).str() == "7");
    CHECK(GaussianRational(BigRational(-3, 4)).str() == "-3/4");
    CHECK(GaussianRational::i().str() == "i");
    CHECK((-GaussianRational::i()).str() == "-i");
    CHECK(GaussianRational(BigRational(0), BigRational(2, 3)).str() == "2/3*i");
    CHECK(GaussianRational(BigRational(1, 2), BigRational(1, 3)).str() == "1/2+1/3*i");
    CHECK(GaussianRational(BigRational(1, 2), BigRational(-1, 3)).str() == "1/2-1/3*i");
    CHECK(GaussianRational(BigRational(5), BigRational(-1)).str() == "5-i");
}

TEST_CASE("coefficient parsing") {
    CHECK(parse_gaussian_rational("3") == GaussianRational(3));
    CHECK(parse_gaussian_rational("-3/4") == GaussianRational(BigRational(-3, 4)));
    CHECK(parse_gaussian_rational("i") == GaussianRational::i());
    CHECK(parse_gaussian_rational("-i") == -GaussianRational::i());
    CHECK(parse_gaussian_rational("3i") == GaussianRational(BigRational(0), BigRational(3)));
    CHECK(parse_gaussian_rational("2/3*i") ==
          GaussianRational(BigRational(0), BigRational(2, 3)));
    CHECK(parse_gaussian_rational("1/2+1/3*i") ==
          GaussianRational(BigRational(1, 2), BigRational(1, 3)));
    CHECK(parse_gaussian_rational("1/2 - 1/3 i") ==
          GaussianRational(BigRational(1, 2), BigRational(-1, 3)));
    CHECK(parse_gaussian_rational("-1/2-i") ==
          GaussianRational(BigRational(-1, 2), BigRational(-1)));

    // round trip: str() output parses back to the same value
    for (const GaussianRational& v :
         {GaussianRational(BigRational(22, 7), BigRational(-5, 9)),
          GaussianRational(BigRational(0), BigRational(-4)), GaussianRational(-12)}) {
        CHECK(parse_gaussian_rational(v.str()) == v);
    }

    CHECK_THROWS_AS(parse_gaussian_rational(""), ParseError);
    CHECK_THROWS_AS(parse_gaussian_rational("x"), ParseError);
    CHECK_THROWS_AS(parse_gaussian_rational("i+i"), ParseError);
    CHECK_THROWS_AS(parse_gaussian_rational("1/0"), ParseError);
}

TEST_CASE("factorials") {
    CHECK(big_factorial(0) == 1);
    CHECK(big_factorial(1) == 1);
    CHECK(big_factorial(5) == 120);
    CHECK(big_factorial(20) == BigRational(BigInt("2432902008176640000")));
}
