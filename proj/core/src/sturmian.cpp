#include "partq/sturmian.hpp"

#include <set>
#include <string>
#include <utility>

#include "partq/errors.hpp"

namespace partq {

namespace {

long min_denominator(const Interval& cell) {
    BigInt dlo = cell.lo.get_den();
    BigInt dhi = cell.hi.get_den();
    const BigInt& m = dlo < dhi ? dlo : dhi;
    return m.get_si();
}

bool is_palindrome(const std::string& w, std::size_t len) {
    for (std::size_t i = 0, j = len; i + 1 < j; ++i, --j) {
        if (w[i] != w[j - 1]) return false;
    }
    return true;
}

} // namespace

std::string rotation_code(const UnitPoint& alpha, long n) {
    if (n < 0) throw DomainError("rotation_code: length must be nonnegative");
    const BigRational& a = alpha.value;
    BigRational cut = 1 - a;
    std::string w;
    w.reserve(static_cast<std::size_t>(n));
    BigRational orbit = 0;
    for (long k = 1; k <= n; ++k) {
        orbit += a;
        if (orbit >= 1) orbit -= 1;
        if (orbit == 0 || orbit == cut) {
            if (alpha.radius == 0)
                throw EndpointHit("rotation_code: orbit point " + std::to_string(k) +
                                  " lies on a coding boundary");
            throw PrecisionError("rotation_code: proxy orbit point " + std::to_string(k) +
                                 " lies on a coding boundary");
        }
        if (alpha.radius != 0) {
            // The real number behind the proxy shifts the k-th orbit point
            // by at most k*radius and the cut itself by radius, so classify
            // only when every boundary is farther than (k+1)*radius away.
            BigRational margin = (k + 1) * alpha.radius;
            BigRational d = orbit < cut ? cut - orbit : orbit - cut;
            if (orbit <= margin || 1 - orbit <= margin || d <= margin)
                throw PrecisionError("rotation_code: resolution too coarse to classify letter " +
                                     std::to_string(k));
        }
        w.push_back(orbit > cut ? '1' : '0');
    }
    return w;
}

std::string farey_prefix(const UnitPoint& alpha, long n) {
    if (n < 0) throw DomainError("farey_prefix: length must be nonnegative");
    if (n == 0) return "";

    // One guarded query at the target depth certifies the whole walk: the
    // family is self-refining, so the window sits inside every shallower
    // cell as well, and all shallower cells can be read off the expansion.
    PointCache cache;
    (void)cell_of(PartitionFamily::farey(), alpha, BigInt(n), cache);
    const CFExpansion& cf = *cache.cf;

    std::string w;
    w.reserve(static_cast<std::size_t>(n));
    Interval cur; // depth 0: (0,1)
    for (long d = 1; d <= n; ++d) {
        Interval nxt = cell_farey(cf, BigInt(d)).interval;
        if (nxt == cur) {
            // Unsplit cell: the word extends with period min(q1, q2).
            long qmin = min_denominator(cur);
            w.push_back(w.at(static_cast<std::size_t>(d - qmin - 1)));
        } else {
            BigRational med = mediant(cur.lo, cur.hi);
            if (nxt.hi == med && nxt.lo == cur.lo) w.push_back('0');
            else if (nxt.lo == med && nxt.hi == cur.hi) w.push_back('1');
            else
                throw InvariantViolation("farey_prefix: depth-" + std::to_string(d) +
                                         " cell is not a mediant child of its parent");
            cur = std::move(nxt);
        }
    }
    return w;
}

std::vector<long> palindrome_depths(const UnitPoint& alpha, long n_max) {
    if (n_max < 0) throw DomainError("palindrome_depths: depth must be nonnegative");
    std::string w = rotation_code(alpha, n_max);

    PointCache cache;
    (void)cell_of(PartitionFamily::farey(), alpha, BigInt(n_max), cache);
    const CFExpansion& cf = *cache.cf;

    std::vector<long> out;
    for (long d = 0; d <= n_max; ++d) {
        Interval cell = cell_farey(cf, BigInt(d)).interval;
        bool by_denominators = cell.lo.get_den() + cell.hi.get_den() == d + 2;
        bool by_string = is_palindrome(w, static_cast<std::size_t>(d));
        if (by_denominators != by_string)
            throw InvariantViolation(
                "palindrome_depths: denominator criterion disagrees with the literal "
                "check at depth " + std::to_string(d));
        if (by_denominators) out.push_back(d);
    }
    return out;
}

const FareyLevel& LabeledFareyTree::level(long n) const {
    if (n < 0 || n >= static_cast<long>(levels_.size()))
        throw DomainError("LabeledFareyTree: level out of range");
    return levels_[static_cast<std::size_t>(n)];
}

LabeledFareyTree LabeledFareyTree::build(long depth, std::size_t max_cells) {
    if (depth < 0) throw DomainError("LabeledFareyTree: depth must be nonnegative");
    LabeledFareyTree tree;
    tree.levels_.reserve(static_cast<std::size_t>(depth) + 1);
    tree.levels_.push_back(FareyLevel{LabeledCell{Interval{}, ""}});
    for (long d = 1; d <= depth; ++d) {
        const FareyLevel& cur = tree.levels_.back();
        FareyLevel nxt;
        nxt.reserve(cur.size() + 2);
        for (const LabeledCell& c : cur) {
            BigInt sum = c.cell.lo.get_den() + c.cell.hi.get_den();
            if (sum == d + 1) {
                // The mediant has denominator d+1, so it enters the depth-d
                // partition (order d+1) and the cell splits.
                BigRational med = mediant(c.cell.lo, c.cell.hi);
                nxt.push_back(LabeledCell{Interval(c.cell.lo, med), c.word + '0'});
                nxt.push_back(LabeledCell{Interval(med, c.cell.hi), c.word + '1'});
            } else {
                long qmin = min_denominator(c.cell);
                char letter = c.word.at(static_cast<std::size_t>(d - qmin - 1));
                nxt.push_back(LabeledCell{c.cell, c.word + letter});
            }
            if (nxt.size() > max_cells)
                throw ResourceError("LabeledFareyTree: cell budget exceeded at depth " +
                                    std::to_string(d));
        }
        // The level must tile (0,1) in order and carry pairwise distinct
        // words of length d.
        std::set<std::string> words;
        for (std::size_t i = 0; i < nxt.size(); ++i) {
            if (i > 0 && !(nxt[i - 1].cell.hi == nxt[i].cell.lo))
                throw InvariantViolation("LabeledFareyTree: cells do not tile at depth " +
                                         std::to_string(d));
            if (nxt[i].word.size() != static_cast<std::size_t>(d) ||
                !words.insert(nxt[i].word).second)
                throw InvariantViolation("LabeledFareyTree: duplicate or ill-sized word at depth " +
                                         std::to_string(d));
        }
        tree.levels_.push_back(std::move(nxt));
    }
    return tree;
}

} // namespace partq
