#include <random>

#include "doctest.h"
#include "hexwalk/cyclo.hpp"
#include "hexwalk/errors.hpp"

using namespace hexwalk;

namespace {

CycNum z(long e) { return CycNum::zeta_pow(e); }

CycNum random_element(std::mt19937_64& rng) {
    CycNum a;
    for (int j = 0; j < CycNum::kDegree; ++j) {
        const long num = static_cast<long>(rng() % 21) - 10;
        const long den = 1 + static_cast<long>(rng() % 7);
        a += CycNum(mpq_class(num, den)) * z(j);
    }
    return a;
}

} // namespace

TEST_CASE("roots of unity reduce modulo Phi_48") {
    CHECK(z(24) == CycNum(-1));
    CHECK(z(48) == CycNum(1));
    CHECK(z(16) - z(8) + CycNum(1) == CycNum());
    CHECK(z(-1) * z(1) == CycNum(1));
    CHECK(z(12) * z(12) == CycNum(-1));
    CHECK(constant(Constant::ImagUnit) == z(12));
}

TEST_CASE("named constants satisfy their defining relations") {
    const CycNum half_sum = (z(6) + z(-6)) / CycNum(2);
    CHECK(half_sum * half_sum == CycNum(mpq_class(1, 2)));
    CHECK(half_sum == constant(Constant::CosPi4));
    CHECK(constant(Constant::Xc) * constant(Constant::Mu) == CycNum(1));
    const CycNum two_plus_sqrt2 = CycNum(2) + constant(Constant::Sqrt2);
    CHECK(constant(Constant::Mu).pow(2) == two_plus_sqrt2);
    CHECK((z(3) + z(-3)).pow(2) == two_plus_sqrt2);
    CHECK(constant(Constant::Sqrt3).pow(2) == CycNum(3));
    CHECK(constant(Constant::Sqrt2).pow(2) == CycNum(2));
    CHECK(constant(Constant::CosPi8).pow(2) == two_plus_sqrt2 / CycNum(4));
    const CycNum c38 = constant(Constant::Cos3Pi8);
    CHECK(c38.pow(2) == (CycNum(2) - constant(Constant::Sqrt2)) / CycNum(4));
    CHECK(constant("x_c") == constant(Constant::Xc));
    CHECK(constant("cos_3pi_8") == c38);
    CHECK_THROWS_AS(constant("pi"), ContractError);
    // cos(pi/8) * 2 x_c = 1: the Tria_1 instance of the triangle identity.
    CHECK(constant(Constant::CosPi8) * CycNum(2) * constant(Constant::Xc) == CycNum(1));
}

TEST_CASE("field axioms on random elements") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const CycNum a = random_element(rng);
        if (a.is_zero()) continue;
        CHECK(a * a.inverse() == CycNum(1));
        const CycNum b = random_element(rng), c = random_element(rng);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK(a.times_zeta_pow(5) == a * z(5));
        CHECK(is_real(real_part(a)));
        CHECK(real_part(a) + imag_part_times_i(a) == a);
    }
    CHECK_THROWS_AS(CycNum().inverse(), std::domain_error);
}

TEST_CASE("winding phases") {
    CHECK(winding_phase(0) == CycNum(1));
    CHECK(winding_phase(48) == CycNum(1));
    for (long w = -30; w <= 30; ++w) {
        CHECK(winding_phase(w) * winding_phase(-w) == CycNum(1));
        CHECK(winding_phase(w) == z(-5 * w));
        CHECK(winding_phase(w, 8) == z(-8 * w));
    }
}

TEST_CASE("approximation and signs") {
    CHECK(approximate(constant(Constant::Xc), 6).first == "0.541196");
    CHECK(approximate(constant(Constant::Xc), 6).second == "0.000000");
    CHECK(approximate(constant(Constant::ImagUnit), 3) == std::pair<std::string, std::string>{"0.000", "1.000"});
    CHECK(approximate(constant(Constant::Cos3Pi8), 6).first == "0.382683");
    CHECK(real_sign(constant(Constant::Sqrt2) - CycNum(mpq_class(141421, 100000))) == 1);
    CHECK(real_sign(constant(Constant::Sqrt2) - CycNum(mpq_class(141422, 100000))) == -1);
    CHECK(real_sign(CycNum()) == 0);
    // A difference far below double resolution.
    const CycNum tiny = constant(Constant::Sqrt2) - CycNum(mpq_class("665857/470832"));
    CHECK(real_sign(tiny) == -1);
    CHECK(compare_real(constant(Constant::CosPi8), constant(Constant::Cos3Pi8)) == 1);
    CHECK(to_double_real(constant(Constant::Mu)) == doctest::Approx(1.847759065));
}

TEST_CASE("parsing and serialization") {
    CHECK(parse_rational("1/2") == CycNum(mpq_class(1, 2)));
    CHECK(parse_rational("-6/4") == CycNum(mpq_class(-3, 2)));
    CHECK(parse_rational("7") == CycNum(7));
    CHECK_THROWS_AS(parse_rational("1/0"), ContractError);
    CHECK_THROWS_AS(parse_rational("x"), ContractError);
    const CycNum a = constant(Constant::Xc) + z(7) / CycNum(3);
    nlohmann::json j = a;
    CHECK(j.get<CycNum>() == a);
    CHECK_THROWS_AS(nlohmann::json::array().get<CycNum>(), ParseError);
}
