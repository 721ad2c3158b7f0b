#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "partq/partitions.hpp"
#include "partq/point.hpp"

namespace partq {

/// Binary coding of the rotation orbit of alpha: the k-th letter is 1 iff
/// {k*alpha} lands in (1-alpha, 1) and 0 iff it lands in (0, 1-alpha), for
/// k = 1..n. Throws EndpointHit when an orbit point of an exact alpha hits
/// a coding boundary, and PrecisionError when the resolution window of a
/// proxy alpha cannot certify a letter.
std::string rotation_code(const UnitPoint& alpha, long n);

/// The same length-n word obtained by walking alpha down the labeled Farey
/// tree: at a splitting step the child left of the mediant appends 0 and
/// the right child appends 1; at a non-splitting step the word extends by
/// its palindromic completion, i.e. the letter at distance min(q1, q2)
/// back, where q1, q2 are the cell's endpoint denominators.
std::string farey_prefix(const UnitPoint& alpha, long n);

/// All depths d <= n_max at which the length-d coding prefix of alpha is a
/// palindrome, computed two independent ways that must agree: a literal
/// string check, and the endpoint-denominator criterion q1 + q2 = d + 2 on
/// the depth-d Farey cell of alpha. Disagreement raises InvariantViolation.
std::vector<long> palindrome_depths(const UnitPoint& alpha, long n_max);

/// One cell of a labeled Farey level together with its binary word.
struct LabeledCell {
    Interval cell;
    std::string word;
};

using FareyLevel = std::vector<LabeledCell>;

/// The Farey partition levels with each cell labeled by the common coding
/// prefix of the numbers inside it. Level n lists the depth-n cells in
/// increasing order, each carrying its length-n word; words at one level
/// are pairwise distinct, and the two children of a split carry distinct
/// letters in lexicographic order.
class LabeledFareyTree {
  public:
    static LabeledFareyTree build(long depth, std::size_t max_cells = (std::size_t{1} << 20));

    long depth() const { return static_cast<long>(levels_.size()) - 1; }
    const FareyLevel& level(long n) const;

  private:
    std::vector<FareyLevel> levels_;
};

} // namespace partq
