#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "partq/certified.hpp"
#include "partq/errors.hpp"
#include "partq/rational.hpp"
#include "partq/weights.hpp"

using namespace partq;

namespace {

BigRational rat(long num, long den) { return make_rational(BigInt(num), BigInt(den)); }

double eval_scale(const Scale& s) {
    return certify_double([&](mpfr_prec_t prec) { return s.eval(prec); });
}

double eval_weight(const WeightFunction& f, long n) {
    return certify_double([&](mpfr_prec_t prec) { return f.eval(BigInt(n), prec); });
}

} // namespace

TEST_CASE("symbolic constants evaluate to their decimal expansions") {
    CHECK(eval_scale(Scale::one()) == 1.0);
    CHECK(eval_scale(Scale::one(rat(3, 4))) == 0.75);
    CHECK(eval_scale(Scale::log_of(BigRational(2))) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-14));
    CHECK(eval_scale(Scale::pi2_over_6()) ==
          doctest::Approx(1.6449340668482264).epsilon(1e-14));
    CHECK(eval_scale(Scale::cf_entropy()) ==
          doctest::Approx(2.3731382208312510).epsilon(1e-14));
    CHECK(eval_scale(Scale::levy()) ==
          doctest::Approx(1.1865691104156255).epsilon(1e-14));
    // The rational prefactor multiplies through.
    CHECK(eval_scale(Scale::levy(BigRational(2))) ==
          doctest::Approx(2.3731382208312510).epsilon(1e-14));
}

TEST_CASE("only the pure rational scale admits an exact value") {
    CHECK(Scale::one(rat(5, 3)).exact() == rat(5, 3));
    CHECK(!Scale::log_of(BigRational(2)).exact().has_value());
    CHECK(!Scale::pi2_over_6().exact().has_value());
    CHECK(!Scale::cf_entropy().exact().has_value());
    CHECK(!Scale::levy().exact().has_value());
}

TEST_CASE("scale spec strings follow the documented grammar") {
    CHECK(Scale::one().spec_string() == "1");
    CHECK(Scale::one(rat(5, 3)).spec_string() == "5/3");
    CHECK(Scale::log_of(BigRational(2)).spec_string() == "log(2)");
    CHECK(Scale::log_of(rat(5, 2), BigRational(3)).spec_string() == "3*log(5/2)");
    CHECK(Scale::pi2_over_6().spec_string() == "pi2/6");
    CHECK(Scale::cf_entropy().spec_string() == "pi2/(6log2)");
    CHECK(Scale::levy().spec_string() == "pi2/(12log2)");
    CHECK(Scale::levy(rat(1, 2)).spec_string() == "1/2*pi2/(12log2)");
}

TEST_CASE("log scales reject arguments at or below one") {
    CHECK_THROWS_AS(Scale::log_of(BigRational(1)), DomainError);
    CHECK_THROWS_AS(Scale::log_of(rat(1, 2)), DomainError);
}

TEST_CASE("weight functions evaluate their defining formulas") {
    CHECK(eval_weight(WeightFunction::linear(Scale::one(BigRational(3))), 5) == 15.0);
    CHECK(eval_weight(WeightFunction::two_log(), 7) ==
          doctest::Approx(2 * std::log(7.0)).epsilon(1e-14));
    CHECK(eval_weight(WeightFunction::one_log(), 7) ==
          doctest::Approx(std::log(7.0)).epsilon(1e-14));
    CHECK(eval_weight(WeightFunction::n_over_log_n(Scale::one()), 2) == 2.0);
    CHECK(eval_weight(WeightFunction::n_over_log_n(Scale::one()), 10) ==
          doctest::Approx(10 / std::log(10.0)).epsilon(1e-14));
    CHECK(eval_weight(WeightFunction::power_law(rat(1, 2), Scale::one()), 9) == 3.0);
    CHECK(eval_weight(WeightFunction::power_law(rat(1, 2), Scale::one()), 10) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    // f(0) = 0 across the board.
    CHECK(eval_weight(WeightFunction::two_log(), 0) == 0.0);
    CHECK(eval_weight(WeightFunction::linear(Scale::log_of(BigRational(2))), 0) == 0.0);
}

TEST_CASE("weight factories validate their scales") {
    CHECK_THROWS_AS(WeightFunction::linear(Scale::one(BigRational(0))), DomainError);
    CHECK_THROWS_AS(WeightFunction::linear(Scale::one(BigRational(-2))), DomainError);
    CHECK_THROWS_AS(WeightFunction::power_law(BigRational(0), Scale::one()), DomainError);
    CHECK_THROWS_AS(WeightFunction::power_law(BigRational(-1), Scale::one()), DomainError);
}

TEST_CASE("exact values exist exactly where the symbols cancel") {
    WeightFunction lin3 = WeightFunction::linear(Scale::one(BigRational(3)));
    CHECK(lin3.exact_value(BigInt(5)) == BigRational(15));
    CHECK(!WeightFunction::linear(Scale::log_of(BigRational(2))).exact_value(BigInt(5)).has_value());
    CHECK(WeightFunction::two_log().exact_value(BigInt(1)) == BigRational(0));
    CHECK(!WeightFunction::two_log().exact_value(BigInt(2)).has_value());
    CHECK(WeightFunction::n_over_log_n(Scale::one()).exact_value(BigInt(2)) == BigRational(2));
    CHECK(!WeightFunction::n_over_log_n(Scale::one()).exact_value(BigInt(3)).has_value());
    CHECK(WeightFunction::power_law(rat(1, 2), Scale::one()).exact_value(BigInt(4)) ==
          BigRational(2));
    CHECK(!WeightFunction::power_law(rat(1, 2), Scale::one()).exact_value(BigInt(5)).has_value());
    CHECK(lin3.exact_value(BigInt(0)) == BigRational(0));
}

TEST_CASE("exact exponentials exist exactly where logs cancel") {
    WeightFunction log2n = WeightFunction::linear(Scale::log_of(BigRational(2)));
    CHECK(log2n.exact_exp(BigInt(6)) == BigRational(64));
    CHECK(WeightFunction::two_log().exact_exp(BigInt(7)) == BigRational(49));
    CHECK(WeightFunction::one_log().exact_exp(BigInt(7)) == BigRational(7));
    CHECK(!WeightFunction::linear(Scale::one(BigRational(3))).exact_exp(BigInt(2)).has_value());
    // Half-integer multiples of log 2 exponentiate to sqrt(2) powers: exact
    // only when the power is even.
    WeightFunction half = WeightFunction::linear(Scale::log_of(BigRational(2), rat(1, 2)));
    CHECK(half.exact_exp(BigInt(4)) == BigRational(4));
    CHECK(!half.exact_exp(BigInt(3)).has_value());
    CHECK(!WeightFunction::n_over_log_n(Scale::one()).exact_exp(BigInt(3)).has_value());
}

TEST_CASE("certified comparisons agree with exact arithmetic on both paths") {
    WeightFunction lin2 = WeightFunction::linear(Scale::one(BigRational(2)));
    CHECK(lin2.compare(BigInt(3), BigRational(7)) < 0);
    CHECK(lin2.compare(BigInt(4), BigRational(8)) == 0);
    CHECK(lin2.compare(BigInt(4), BigRational(7)) > 0);

    WeightFunction tl = WeightFunction::two_log();
    CHECK(tl.compare(BigInt(148), BigRational(10)) < 0);  // 2 log 148 = 9.994
    CHECK(tl.compare(BigInt(149), BigRational(10)) > 0);  // 2 log 149 = 10.008
}

TEST_CASE("inverse weights return the first depth at or above the target") {
    CHECK(inverse_weight(WeightFunction::linear(Scale::one(BigRational(2))), BigRational(7)) == 4);
    CHECK(inverse_weight(WeightFunction::two_log(), BigRational(10)) == 149);
    CHECK(inverse_weight(WeightFunction::one_log(), BigRational(5)) == 149);
    CHECK(inverse_weight(WeightFunction::n_over_log_n(Scale::one()), BigRational(3)) == 5);
    CHECK(inverse_weight(WeightFunction::power_law(BigRational(2), Scale::one()), BigRational(10)) ==
          4);
    CHECK(inverse_weight(WeightFunction::two_log(), BigRational(0)) == 0);
    CHECK(inverse_weight(WeightFunction::two_log(), BigRational(-3)) == 0);
}

TEST_CASE("inverse weights are sharp on both sides across kinds and targets") {
    std::vector<WeightFunction> fs = {
        WeightFunction::linear(Scale::log_of(BigRational(2))),
        WeightFunction::linear(Scale::cf_entropy()),
        WeightFunction::two_log(),
        WeightFunction::one_log(),
        WeightFunction::n_over_log_n(Scale::pi2_over_6()),
        WeightFunction::power_law(rat(1, 2), Scale::one()),
    };
    for (const WeightFunction& f : fs) {
        for (long y10 = 5; y10 <= 120; y10 += 7) {
            BigRational y = rat(y10, 10);
            BigInt n = inverse_weight(f, y);
            CHECK(f.compare(n, y) >= 0);
            if (n > 1) CHECK(f.compare(n - 1, y) < 0);
        }
    }
}

TEST_CASE("the inverse overshoot shrinks like the derivative bound") {
    // With f(n) = 2 log n, f(inverse(y))/y lands in [1, 1 + 2 log((n+1)/n)]
    // and the overshoot decreases in y.
    WeightFunction f = WeightFunction::two_log();
    double prev_ratio = 2.0;
    for (long y = 10; y <= 200; y += 10) {
        BigInt n = inverse_weight(f, BigRational(y));
        double fn = certify_double([&](mpfr_prec_t prec) { return f.eval(n, prec); });
        double ratio = fn / static_cast<double>(y);
        BigInt next = n + 1;
        double slack = certify_double([&](mpfr_prec_t prec) {
            IReal num = IReal::from(next, prec) / IReal::from(n, prec);
            return num.log() * IReal::from_long(2, prec);
        });
        CHECK(ratio >= 1.0);
        CHECK(ratio <= 1.0 + slack);
        CHECK(ratio <= prev_ratio + 1e-12);
        prev_ratio = ratio;
    }
}

TEST_CASE("exact rational powers come back exactly or not at all") {
    CHECK(rational_power_exact(rat(8, 27), rat(2, 3)) == rat(4, 9));
    CHECK(rational_power_exact(BigRational(4), rat(1, 2)) == BigRational(2));
    CHECK(rational_power_exact(BigRational(4), rat(-1, 2)) == rat(1, 2));
    CHECK(rational_power_exact(rat(9, 4), rat(3, 2)) == rat(27, 8));
    CHECK(rational_power_exact(BigRational(7), BigRational(0)) == BigRational(1));
    CHECK(rational_power_exact(BigRational(7), BigRational(2)) == BigRational(49));
    CHECK(!rational_power_exact(BigRational(2), rat(1, 2)).has_value());
    CHECK(!rational_power_exact(rat(8, 27), rat(1, 2)).has_value());
    CHECK_THROWS_AS(rational_power_exact(BigRational(-2), rat(1, 2)), DomainError);
}

TEST_CASE("comparisons against rational powers clear denominators correctly") {
    CHECK(compare_with_rational_power(BigRational(3), BigRational(2), rat(3, 2)) > 0);
    CHECK(compare_with_rational_power(rat(14, 5), BigRational(2), rat(3, 2)) < 0);
    CHECK(compare_with_rational_power(rat(4, 9), rat(8, 27), rat(2, 3)) == 0);
    CHECK(compare_with_rational_power(rat(1, 2), BigRational(4), rat(-1, 2)) == 0);
    CHECK(compare_with_rational_power(rat(5, 8), BigRational(2), BigRational(-1)) > 0);
    CHECK_THROWS_AS(compare_with_rational_power(BigRational(0), BigRational(2), rat(1, 2)),
                    DomainError);
}

TEST_CASE("weight spec strings follow the documented grammar") {
    CHECK(WeightFunction::linear(Scale::log_of(BigRational(10))).spec_string() ==
          "linear:log(10)");
    CHECK(WeightFunction::two_log().spec_string() == "twolog");
    CHECK(WeightFunction::one_log().spec_string() == "onelog");
    CHECK(WeightFunction::n_over_log_n(Scale::pi2_over_6()).spec_string() ==
          "noverlog:pi2/6");
    CHECK(WeightFunction::power_law(rat(1, 2), Scale::one()).spec_string() == "power:1/2:1");
}

TEST_CASE("interval arithmetic pins signs and comparisons only when certain") {
    IReal two = IReal::from_long(2, 64);
    IReal three = IReal::from_long(3, 64);
    CHECK((two + three).compare(BigRational(5)) == std::nullopt); // exactly 5: undecidable
    CHECK((two + three).compare(rat(49, 10)) == 1);
    CHECK((two + three).compare(rat(51, 10)) == -1);
    CHECK((two * three - three).strictly_positive());
    CHECK((two - three).strictly_negative());
    CHECK(!(two - two).strictly_positive());
    CHECK(!(two - two).strictly_negative());
    CHECK(two.log().exp().compare(rat(199, 100)) == 1);
    auto fl = (three / two).floor();
    REQUIRE(fl.has_value());
    CHECK(*fl == 1);
    CHECK_THROWS_AS((two - two).log(), PrecisionError);
    CHECK_THROWS_AS(three / (two - two), PrecisionError);
}

TEST_CASE("certified doubles converge and certified floors resolve") {
    double v = certify_double([](mpfr_prec_t prec) {
        return IReal::from_long(2, prec).log();
    });
    CHECK(v == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    BigInt fl = certify_floor([](mpfr_prec_t prec) {
        return IReal::from_long(2, prec).log() * IReal::from_long(1000, prec);
    });
    CHECK(fl == 693);
    CHECK(certify_compare([](mpfr_prec_t prec) { return IReal::pi(prec); },
                          rat(314159, 100000)) > 0);
    CHECK(certify_compare([](mpfr_prec_t prec) { return IReal::pi(prec); },
                          rat(314160, 100000)) < 0);
}
