#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "partq/errors.hpp"
#include "partq/point.hpp"
#include "partq/sturmian.hpp"

using namespace partq;

namespace {

BigRational rat(long num, long den) { return make_rational(BigInt(num), BigInt(den)); }

/// Exact stand-in for the golden rotation number: a continued-fraction
/// convergent so deep that every computation here sees the same cells.
UnitPoint golden_proxy() {
    return explicit_point(make_rational(BigInt("2880067194370816120"),
                                        BigInt("4660046610375530309")));
}

/// Farey points of order n+1 in increasing order, by sieving denominators.
std::vector<BigRational> farey_points_brute(long depth) {
    std::set<BigRational> pts;
    for (long den = 1; den <= depth + 1; ++den)
        for (long num = 0; num <= den; ++num) pts.insert(rat(num, den));
    return {pts.begin(), pts.end()};
}

} // namespace

TEST_CASE("rotation codings of landmark numbers come out letter for letter") {
    CHECK(rotation_code(golden_proxy(), 0) == "");
    CHECK(rotation_code(golden_proxy(), 5) == "10110");
    CHECK(rotation_code(golden_proxy(), 12) == "101101011011");
    CHECK(rotation_code(explicit_point(rat(11, 20)), 4) == "1010");
    CHECK(rotation_code(explicit_point(rat(19, 50)), 5) == "01001");
    // Just above 1/4 the third orbit point clears the cut.
    CHECK(rotation_code(explicit_point(rat((1L << 18) + 1, 1L << 20)), 3) == "001");
    CHECK(rotation_code(explicit_point(rat(1000007, 7000000)), 3) == "000");
    CHECK_THROWS_AS(rotation_code(golden_proxy(), -1), DomainError);
}

TEST_CASE("orbit points of exact rationals eventually strike the coding boundary") {
    // For alpha = 5/8 the seventh orbit point is the cut 3/8 itself.
    UnitPoint x = explicit_point(rat(5, 8));
    CHECK(rotation_code(x, 6) == "101101");
    CHECK_THROWS_AS(rotation_code(x, 7), EndpointHit);
    // alpha = 1/2 hits at once, alpha = 1/3 at the second letter.
    CHECK_THROWS_AS(rotation_code(explicit_point(rat(1, 2)), 1), EndpointHit);
    CHECK(rotation_code(explicit_point(rat(1, 3)), 1) == "0");
    CHECK_THROWS_AS(rotation_code(explicit_point(rat(1, 3)), 2), EndpointHit);
}

TEST_CASE("a coarse resolution window refuses letters it cannot certify") {
    // A golden convergent carried with radius 2^-10: margins grow with the
    // orbit index, so early letters certify and later ones must not.
    UnitPoint x{rat(987, 1597), 10, rat(1, 1024)};
    CHECK(rotation_code(x, 10) == "1011010110");
    CHECK_THROWS_AS(rotation_code(x, 60), PrecisionError);
}

TEST_CASE("the labeled walk down the mediant tree reproduces the rotation coding") {
    CHECK(farey_prefix(golden_proxy(), 12) == "101101011011");
    CHECK(farey_prefix(explicit_point(rat(11, 20)), 4) == "1010");
    CHECK(farey_prefix(explicit_point(rat(19, 50)), 5) == "01001");
    CHECK(farey_prefix(golden_proxy(), 0) == "");

    // A rational alpha stops being codable at the same length on both
    // routes: its denominator enters the partition exactly when an orbit
    // point lands on the cut.
    UnitPoint five_eighths = explicit_point(rat(5, 8));
    CHECK(farey_prefix(five_eighths, 6) == "101101");
    CHECK_THROWS_AS(farey_prefix(five_eighths, 7), EndpointHit);
}

TEST_CASE("both codings agree over a spread of high-resolution samples") {
    for (std::uint64_t index = 0; index < 30; ++index) {
        UnitPoint x = sample_dyadic(20260815, index, 512);
        CAPTURE(index);
        std::string rot = rotation_code(x, 200);
        CHECK(rot == farey_prefix(x, 200));
        CHECK(rot.size() == 200);
    }
}

TEST_CASE("palindromic prefixes appear exactly at the classical depths") {
    std::vector<long> golden = palindrome_depths(golden_proxy(), 30);
    CHECK(golden == std::vector<long>{0, 1, 3, 6, 11, 19});
    CHECK(palindrome_depths(explicit_point(rat(11, 20)), 4) ==
          std::vector<long>{0, 1, 3});
    CHECK(palindrome_depths(explicit_point(rat(19, 50)), 5) ==
          std::vector<long>{0, 1, 3});
    CHECK_THROWS_AS(palindrome_depths(golden_proxy(), -2), DomainError);
}

TEST_CASE("the labeled tree reproduces the frozen levels three and four") {
    LabeledFareyTree tree = LabeledFareyTree::build(4);
    CHECK(tree.depth() == 4);

    const FareyLevel& l1 = tree.level(1);
    REQUIRE(l1.size() == 2);
    CHECK(l1[0].cell == Interval(rat(0, 1), rat(1, 2)));
    CHECK(l1[0].word == "0");
    CHECK(l1[1].word == "1");

    const FareyLevel& l3 = tree.level(3);
    REQUIRE(l3.size() == 6);
    std::vector<std::string> words3;
    for (const LabeledCell& c : l3) words3.push_back(c.word);
    CHECK(words3 == std::vector<std::string>{"000", "001", "010", "101", "110", "111"});
    CHECK(l3[1].cell == Interval(rat(1, 4), rat(1, 3)));
    CHECK(l3[3].cell == Interval(rat(1, 2), rat(2, 3)));

    const FareyLevel& l4 = tree.level(4);
    REQUIRE(l4.size() == 10);
    std::vector<std::string> words4;
    for (const LabeledCell& c : l4) words4.push_back(c.word);
    CHECK(words4 == std::vector<std::string>{"0000", "0001", "0010", "0100", "0101",
                                             "1010", "1011", "1101", "1110", "1111"});

    CHECK_THROWS_AS(tree.level(5), DomainError);
    CHECK_THROWS_AS(tree.level(-1), DomainError);
    CHECK_THROWS_AS(LabeledFareyTree::build(5, 4), ResourceError);
}

TEST_CASE("every tree label is arbitrated by the rotation coding of a cell midpoint") {
    const long depth = 12;
    LabeledFareyTree tree = LabeledFareyTree::build(depth);
    for (long n = 0; n <= depth; ++n) {
        const FareyLevel& level = tree.level(n);
        std::vector<BigRational> pts = farey_points_brute(n);
        REQUIRE(level.size() + 1 == pts.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            CAPTURE(n);
            CAPTURE(i);
            CHECK(level[i].cell.lo == pts[i]);
            CHECK(level[i].cell.hi == pts[i + 1]);
            BigRational mid = (level[i].cell.lo + level[i].cell.hi) / 2;
            CHECK(rotation_code(explicit_point(mid), n) == level[i].word);
        }
    }
}

TEST_CASE("tree words refine: each child extends its parent by one letter") {
    const long depth = 9;
    LabeledFareyTree tree = LabeledFareyTree::build(depth);
    for (long n = 1; n <= depth; ++n) {
        const FareyLevel& parents = tree.level(n - 1);
        const FareyLevel& children = tree.level(n);
        std::size_t j = 0;
        for (const LabeledCell& p : parents) {
            std::vector<const LabeledCell*> kids;
            while (j < children.size() && p.cell.contains(children[j].cell))
                kids.push_back(&children[j++]);
            REQUIRE((kids.size() == 1 || kids.size() == 2));
            for (const LabeledCell* k : kids)
                CHECK(k->word.substr(0, static_cast<std::size_t>(n) - 1) == p.word);
            if (kids.size() == 2) {
                CHECK(kids[0]->word.back() == '0');
                CHECK(kids[1]->word.back() == '1');
                CHECK(kids[0]->cell.hi == kids[1]->cell.lo);
            } else {
                CHECK(kids[0]->cell == p.cell);
            }
        }
        CHECK(j == children.size());
    }
}
