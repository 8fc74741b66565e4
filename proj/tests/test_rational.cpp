#include <catch2/catch_amalgamated.hpp>

#include <lwmi/rational.hpp>

using namespace lwmi;

TEST_CASE("rational parsing is exact") {
    CHECK(rat_parse("0.1") == Rat(1, 10));
    CHECK(rat_parse("2.5e-1") == Rat(1, 4));
    CHECK(rat_parse("-0.125") == Rat(-1, 8));
    CHECK(rat_parse("3/4") == Rat(3, 4));
    CHECK(rat_parse("-7/2") == Rat(-7, 2));
    CHECK(rat_parse("42") == Rat(42));
    CHECK(rat_parse("1e3") == Rat(1000));
    CHECK(rat_parse("1.25e2") == Rat(125));
}

TEST_CASE("rational parsing rejects junk") {
    CHECK_THROWS_AS(rat_parse(""), input_error);
    CHECK_THROWS_AS(rat_parse("abc"), input_error);
    CHECK_THROWS_AS(rat_parse("1/0"), input_error);
    CHECK_THROWS_AS(rat_parse("1.2.3"), input_error);
    CHECK_THROWS_AS(rat_parse("1e9999999"), input_error);
}

TEST_CASE("rational serialization") {
    CHECK(rat_to_string(Rat(1, 2)) == "1/2");
    CHECK(rat_to_string(Rat(5)) == "5");
    CHECK(rat_to_string(Rat(-3, 4)) == "-3/4");
    CHECK(rat_to_string(Rat(0)) == "0");
    CHECK(rat_to_string(rat_parse("0.72")) == "18/25");
}

TEST_CASE("parse and serialize round-trip") {
    for (int num = -20; num <= 20; ++num)
        for (int den = 1; den <= 7; ++den) {
            Rat r(num, den);
            CHECK(rat_parse(rat_to_string(r)) == r);
        }
}
