#include "partq/partitions.hpp"

#include <algorithm>
#include <utility>

namespace partq {

namespace {

BigInt pow_bigint(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

BigRational pow_rational(const BigRational& base, unsigned long e) {
    return make_rational(pow_bigint(base.get_num(), e),
                         pow_bigint(base.get_den(), e));
}

bool is_integral(const BigRational& x) { return x.get_den() == 1; }

long require_long_depth(const BigInt& n, const char* what) {
    if (n < 0) throw DomainError(std::string(what) + ": negative depth");
    if (!n.fits_slong_p())
        throw ResourceError(std::string(what) + ": depth too large");
    return n.get_si();
}

} // namespace

// ---------------------------------------------------------------------------
// PartitionFamily
// ---------------------------------------------------------------------------

PartitionFamily PartitionFamily::bary(BigInt base) {
    if (base < 2) throw DomainError("bary family: base must be >= 2");
    return {FamilyBary{std::move(base)}};
}

PartitionFamily PartitionFamily::beta(BigRational b) {
    if (!(b > 1)) throw DomainError("beta family: beta must be > 1");
    return {FamilyBeta{std::move(b)}};
}

PartitionFamily PartitionFamily::cf() { return {FamilyCF{}}; }
PartitionFamily PartitionFamily::farey() { return {FamilyFarey{}}; }
PartitionFamily PartitionFamily::stern_brocot() { return {FamilySternBrocot{}}; }

PartitionFamily PartitionFamily::three_distance(UnitPoint alpha) {
    return {FamilyThreeDist{std::move(alpha)}};
}

PartitionFamily PartitionFamily::synthetic(WeightFunction f) {
    return {FamilySynthetic{std::move(f)}};
}

bool PartitionFamily::self_refining() const {
    return !std::holds_alternative<FamilyThreeDist>(v);
}

std::string PartitionFamily::spec_string() const {
    struct Visitor {
        std::string operator()(const FamilyBary& f) const {
            return "bary:" + f.base.get_str();
        }
        std::string operator()(const FamilyBeta& f) const {
            return "beta:" + f.beta.get_str();
        }
        std::string operator()(const FamilyCF&) const { return "cf"; }
        std::string operator()(const FamilyFarey&) const { return "farey"; }
        std::string operator()(const FamilySternBrocot&) const { return "sb"; }
        std::string operator()(const FamilyThreeDist&) const { return "3d"; }
        std::string operator()(const FamilySynthetic& f) const {
            return "synthetic:" + f.f.spec_string();
        }
    };
    return std::visit(Visitor{}, v);
}

// ---------------------------------------------------------------------------
// Digit-family cells
// ---------------------------------------------------------------------------

Interval cell_bary(const UnitPoint& x, long n, const BigInt& base) {
    if (base < 2) throw DomainError("cell_bary: base must be >= 2");
    if (n < 0) throw DomainError("cell_bary: negative depth");
    if (n == 0) return Interval(BigRational(0), BigRational(1));
    BigInt bn = pow_bigint(base, static_cast<unsigned long>(n));
    BigRational scaled = x.value * BigRational(bn);
    if (is_integral(scaled))
        throw EndpointHit("cell_bary: x is a digit-grid point at this depth");
    BigInt j = floor_rational(scaled);
    if (j < 0 || j >= bn)
        throw InvariantViolation("cell_bary: digit index out of range");
    return Interval(make_rational(j, bn), make_rational(j + 1, bn));
}

Interval cell_cf(const CFExpansion& xcf, long n) {
    if (n < 0) throw DomainError("cell_cf: negative depth");
    if (xcf.complete() && static_cast<std::size_t>(n) >= xcf.size() && n > 0)
        throw EndpointHit("cell_cf: rational point is a cylinder endpoint at this depth");
    if (static_cast<std::size_t>(n) > xcf.size())
        throw InsufficientDepth("cell_cf: expansion too short");
    return xcf.cylinder(n);
}

namespace {

/// Shared endpoint construction for the Farey / Stern-Brocot cell shape:
/// p_m/q_m and ((r+1)p_m + p_{m-1})/((r+1)q_m + q_{m-1}), ordered by the
/// parity of m, with the exact length check 1/(((r+1)q_m + q_{m-1}) q_m).
FareyCell assemble_mediant_cell(const CFExpansion& xcf, long m, const BigInt& r,
                                const char* what) {
    if (r < 0) throw InvariantViolation(std::string(what) + ": negative residual");
    BigInt dext = (r + 1) * xcf.q(m) + xcf.q(m - 1);
    BigInt pext = (r + 1) * xcf.p(m) + xcf.p(m - 1);
    BigRational conv = make_rational(xcf.p(m), xcf.q(m));
    BigRational ext = make_rational(pext, dext);
    Interval cell = (m % 2 == 0) ? Interval(conv, ext) : Interval(ext, conv);
    if (cell.length() * dext * xcf.q(m) != 1)
        throw InvariantViolation(std::string(what) + ": cell length formula violated");
    return {cell, DepthDecomposition{m, r}};
}

} // namespace

FareyCell cell_farey(const CFExpansion& xcf, const BigInt& n) {
    if (n < 0) throw DomainError("cell_farey: negative depth");
    BigInt bound = n + 1;
    if (xcf.complete() && xcf.q(static_cast<long>(xcf.size())) <= bound)
        throw EndpointHit("cell_farey: rational point has denominator <= n+1");
    auto mi = xcf.last_index_with_continuant_sum_at_most(bound);
    long m = mi ? static_cast<long>(*mi) : 0;
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), BigInt(bound - xcf.q(m - 1)).get_mpz_t(),
               xcf.q(m).get_mpz_t());
    r -= 1;
    FareyCell cell = assemble_mediant_cell(xcf, m, r, "cell_farey");
    // Defining inequality: (r+1) q_m + q_{m-1} <= n+1 < (r+2) q_m + q_{m-1}.
    BigInt dext = (r + 1) * xcf.q(m) + xcf.q(m - 1);
    if (!(dext <= bound && bound < dext + xcf.q(m)))
        throw InvariantViolation("cell_farey: depth decomposition inconsistent");
    if (static_cast<std::size_t>(m) < xcf.size() && r >= xcf.a(m + 1))
        throw InvariantViolation("cell_farey: residual exceeds next quotient");
    return cell;
}

FareyCell cell_stern_brocot(const CFExpansion& xcf, const BigInt& n) {
    if (n < 0) throw DomainError("cell_stern_brocot: negative depth");
    if (xcf.complete() && xcf.prefix_sum(xcf.size()) - 1 <= n)
        throw EndpointHit(
            "cell_stern_brocot: rational point is a tree vertex at this depth");
    if (xcf.size() == 0 || xcf.prefix_sum(xcf.size()) <= n)
        throw InsufficientDepth("cell_stern_brocot: expansion too short");
    // Smallest index with prefix sum > n (exists: checked above).
    std::size_t lo = 1, hi = xcf.size();
    while (hi - lo > 0) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (xcf.prefix_sum(mid) > n)
            hi = mid;
        else
            lo = mid + 1;
    }
    long m = static_cast<long>(lo) - 1;
    BigInt r = n - xcf.prefix_sum(static_cast<std::size_t>(m));
    if (r >= xcf.a(static_cast<std::size_t>(m) + 1))
        throw InvariantViolation("cell_stern_brocot: residual exceeds next quotient");
    return assemble_mediant_cell(xcf, m, r, "cell_stern_brocot");
}

// ---------------------------------------------------------------------------
// Beta cylinders
// ---------------------------------------------------------------------------

namespace {

struct BetaState {
    BigRational lo{0}, hi{1};  // cylinder in x-space
    BigRational A{0}, B{1};    // forward image [A, B) of the cylinder
    BigRational orbit;         // current orbit point of x
    BigRational pow{1};        // beta^depth
};

/// One greedy digit step: split off x's digit window and pull it back.
void beta_step(BetaState& s, const BigRational& beta) {
    BigRational scaled = s.orbit * beta;
    if (is_integral(scaled))
        throw EndpointHit("cell_beta: orbit lands on a digit boundary");
    BigInt d = floor_rational(scaled);
    if (d < 0) throw InvariantViolation("cell_beta: negative digit");
    BigRational dlo = BigRational(d) / beta;
    BigRational dhi = BigRational(d + 1) / beta;
    BigRational wlo = std::max(s.A, dlo);
    BigRational whi = std::min(s.B, dhi);
    if (!(wlo < whi)) throw InvariantViolation("cell_beta: empty digit window");
    BigRational lo_old = s.lo;
    s.lo = lo_old + (wlo - s.A) / s.pow;
    s.hi = lo_old + (whi - s.A) / s.pow;
    s.A = beta * wlo - d;
    s.B = beta * whi - d;
    s.orbit = scaled - d;
    s.pow *= beta;
}

} // namespace

Interval cell_beta(const UnitPoint& x, long n, const BigRational& beta) {
    if (!(beta > 1)) throw DomainError("cell_beta: beta must be > 1");
    if (n < 0) throw DomainError("cell_beta: negative depth");
    if (n == 0) return Interval(BigRational(0), BigRational(1));
    BetaState s;
    s.orbit = x.value;
    for (long i = 0; i < n; ++i) beta_step(s, beta);
    Interval cell(s.lo, s.hi);
    if (!cell.contains(x.value))
        throw InvariantViolation("cell_beta: point escaped its cylinder");
    return cell;
}

// ---------------------------------------------------------------------------
// Log-balanced refinement of the dyadic partition
// ---------------------------------------------------------------------------

namespace {

/// floor(exp(f(n))), exact where the exponential is rational and certified
/// interval arithmetic otherwise.
BigInt synthetic_count(const WeightFunction& f, const BigInt& n) {
    BigInt t;
    if (auto exact = f.exact_exp(n)) {
        t = floor_rational(*exact);
    } else {
        t = certify_floor(
            [&](mpfr_prec_t prec) { return f.eval(n, prec).exp(); });
    }
    if (t < 1)
        throw InvariantViolation("synthetic family: cell count below 1");
    return t;
}

} // namespace

Interval cell_synthetic(const UnitPoint& x, long n, const WeightFunction& f) {
    if (n < 0) throw DomainError("cell_synthetic: negative depth");
    BigInt t = synthetic_count(f, BigInt(n));
    long k = bit_length(t) - 1;
    BigInt slots = pow_bigint(2, static_cast<unsigned long>(k));
    BigInt extra = t - slots;
    BigRational coarse = x.value * BigRational(slots);
    if (is_integral(coarse))
        throw EndpointHit("cell_synthetic: x on the dyadic grid");
    BigInt j = floor_rational(coarse);
    if (j < extra) {
        BigRational fine = coarse * 2;
        if (is_integral(fine))
            throw EndpointHit("cell_synthetic: x on a split midpoint");
        BigInt h = floor_rational(fine);
        BigInt den = slots * 2;
        return Interval(make_rational(h, den), make_rational(h + 1, den));
    }
    return Interval(make_rational(j, slots), make_rational(j + 1, slots));
}

// ---------------------------------------------------------------------------
// Rotation-orbit partitions
// ---------------------------------------------------------------------------

namespace detail {

BigInt floor_sum(const BigInt& n, const BigInt& m, const BigInt& a,
                 const BigInt& b) {
    if (n < 0 || m < 1 || a < 0 || b < 0)
        throw DomainError("floor_sum: arguments out of range");
    BigInt ans = 0;
    int sign = 1;
    BigInt N = n, M = m, A = a, B = b;
    while (N > 0) {
        if (A >= M) {
            BigInt whole = A / M;
            ans += sign * (((N - 1) * N / 2) * whole);
            A -= whole * M;
        }
        if (B >= M) {
            BigInt whole = B / M;
            ans += sign * (N * whole);
            B -= whole * M;
        }
        BigInt top = A * (N - 1) + B;
        if (top < M) break;
        BigInt J = top / M;
        ans += sign * (J * N);
        BigInt newB = A + M - B - 1;
        std::swap(A, M);
        N = J;
        B = newB;
        sign = -sign;
    }
    return ans;
}

BigInt count_residues_at_most(const BigInt& nmax, const BigInt& p,
                              const BigInt& q, const BigInt& c) {
    if (q < 1) throw DomainError("count_residues_at_most: modulus must be >= 1");
    if (nmax < 0 || c < 0) return 0;
    if (c >= q - 1) return nmax + 1;
    BigInt N = nmax + 1;
    BigInt pr = p % q;
    if (pr < 0) pr += q;
    // [v mod q <= c] = floor(v/q) - floor((v - c - 1)/q), summed over v = i*p.
    return floor_sum(N, q, pr, 0) - floor_sum(N, q, pr, q - c - 1) + N;
}

std::optional<BigInt> max_residue_at_most(const BigInt& nmax, const BigInt& p,
                                          const BigInt& q, const BigInt& c) {
    if (c < 0 || nmax < 0) return std::nullopt;
    BigInt cap = std::min(c, BigInt(q - 1));
    BigInt total = count_residues_at_most(nmax, p, q, cap);
    if (total == 0) return std::nullopt;  // unreachable: residue 0 always counts
    // Smallest t with count(t) == total is the largest attained residue <= cap.
    BigInt lo = 0, hi = cap;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (count_residues_at_most(nmax, p, q, mid) == total)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::optional<BigInt> min_residue_at_least(const BigInt& nmax, const BigInt& p,
                                           const BigInt& q, const BigInt& c) {
    if (nmax < 0) return std::nullopt;
    if (c > q - 1) return std::nullopt;
    BigInt floor_c = std::max(BigInt(0), c);
    BigInt below = (floor_c == 0) ? BigInt(0)
                                  : count_residues_at_most(nmax, p, q, floor_c - 1);
    if (count_residues_at_most(nmax, p, q, q - 1) == below) return std::nullopt;
    // Smallest t >= floor_c with count(t) > below is the first attained residue.
    BigInt lo = floor_c, hi = q - 1;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (count_residues_at_most(nmax, p, q, mid) > below)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

} // namespace detail

namespace {

/// Scan threshold between direct neighbor tracking and the counting search.
const long kThreeDistScanLimit = 10000;

struct RationalAlpha {
    BigInt P, Q;
};

RationalAlpha checked_alpha(const UnitPoint& alpha, const BigInt& n,
                            const char* what) {
    RationalAlpha a{alpha.value.get_num(), alpha.value.get_den()};
    if (a.Q <= n)
        throw DegenerateAlpha(std::string(what) +
                              ": alpha denominator <= depth, orbit collides");
    return a;
}

} // namespace

ThreeDistDecomposition three_distance_decomposition(const UnitPoint& alpha,
                                                    const BigInt& n) {
    if (n < 1)
        throw DomainError("three_distance_decomposition: depth must be >= 1");
    RationalAlpha a = checked_alpha(alpha, n, "three_distance_decomposition");
    CFExpansion cf = cf_expand(alpha.value);
    auto ki = cf.last_index_with_continuant_sum_at_most(n);
    long k = ki ? static_cast<long>(*ki) : 0;
    if (static_cast<std::size_t>(k) >= cf.size())
        throw InvariantViolation(
            "three_distance_decomposition: nondegenerate alpha exhausted its expansion");
    BigInt rest = n - cf.q(k - 1);
    BigInt m, r;
    mpz_fdiv_qr(m.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(),
                cf.q(k).get_mpz_t());
    if (m < 1 || m > cf.a(static_cast<std::size_t>(k) + 1))
        throw InvariantViolation("three_distance_decomposition: m out of range");
    auto eta = [&](long j) {
        BigInt num = abs(cf.q(j) * a.P - cf.p(j) * a.Q);
        return make_rational(num, a.Q);
    };
    return {k, m, r, eta(k), eta(k - 1)};
}

std::vector<GapClass> three_distance_profile(const UnitPoint& alpha,
                                             const BigInt& n) {
    if (n < 0) throw DomainError("three_distance_profile: negative depth");
    checked_alpha(alpha, n, "three_distance_profile");
    if (n == 0) return {GapClass{BigRational(1), BigInt(1)}};
    ThreeDistDecomposition d =
        three_distance_decomposition(alpha, n);
    CFExpansion cf = cf_expand(alpha.value);
    std::vector<GapClass> raw;
    raw.push_back({d.eta_k, n + 1 - cf.q(d.k)});
    raw.push_back({d.eta_k_minus - d.m * d.eta_k, d.r + 1});
    raw.push_back({d.eta_k_minus - (d.m - 1) * d.eta_k, cf.q(d.k) - d.r - 1});
    std::vector<GapClass> out;
    for (auto& g : raw) {
        if (g.count == 0) continue;
        if (!(g.length > 0))
            throw InvariantViolation("three_distance_profile: nonpositive gap");
        bool merged = false;
        for (auto& o : out) {
            if (o.length == g.length) {
                o.count += g.count;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(),
              [](const GapClass& l, const GapClass& r) { return l.length < r.length; });
    BigInt total_count = 0;
    BigRational total_len = 0;
    for (const auto& g : out) {
        total_count += g.count;
        total_len += g.length * BigRational(g.count);
    }
    if (total_count != n + 1 || total_len != 1)
        throw InvariantViolation("three_distance_profile: gaps do not tile (0,1)");
    return out;
}

Interval cell_three_distance(const UnitPoint& alpha, const BigInt& n,
                             const UnitPoint& x) {
    if (n < 0) throw DomainError("cell_three_distance: negative depth");
    RationalAlpha a = checked_alpha(alpha, n, "cell_three_distance");
    if (n == 0) return Interval(BigRational(0), BigRational(1));
    const BigInt& u = x.value.get_num();
    const BigInt& v = x.value.get_den();
    BigInt uQ = u * a.Q;
    // Exact coincidence with an orbit point: x = R/Q and R = i*P mod Q for
    // some 1 <= i <= n.
    if (mpz_divisible_p(a.Q.get_mpz_t(), v.get_mpz_t())) {
        BigInt R = u * (a.Q / v);
        BigInt pinv;
        if (mpz_invert(pinv.get_mpz_t(), a.P.get_mpz_t(), a.Q.get_mpz_t()) == 0)
            throw InvariantViolation("cell_three_distance: alpha not reduced");
        BigInt i0 = (R * pinv) % a.Q;
        if (i0 >= 1 && i0 <= n)
            throw EndpointHit("cell_three_distance: x lies on the orbit");
    }
    BigRational left(0), right(1);
    bool have_right = false;
    if (n <= kThreeDistScanLimit) {
        long nl = n.get_si();
        BigInt r = 0, best_lo = 0, best_hi = 0;
        for (long i = 1; i <= nl; ++i) {
            r += a.P;
            if (r >= a.Q) r -= a.Q;
            BigInt lhs = r * v;
            if (lhs == uQ)
                throw InvariantViolation("cell_three_distance: missed orbit hit");
            if (lhs < uQ) {
                if (r > best_lo) best_lo = r;
            } else {
                if (!have_right || r < best_hi) {
                    best_hi = r;
                    have_right = true;
                }
            }
        }
        left = make_rational(best_lo, a.Q);
        if (have_right) right = make_rational(best_hi, a.Q);
    } else {
        BigInt cminus, cplus;
        mpz_fdiv_q(cminus.get_mpz_t(), BigInt(uQ - 1).get_mpz_t(), v.get_mpz_t());
        mpz_fdiv_q(cplus.get_mpz_t(), uQ.get_mpz_t(), v.get_mpz_t());
        cplus += 1;
        auto pr = detail::max_residue_at_most(n, a.P, a.Q, cminus);
        if (!pr)
            throw InvariantViolation("cell_three_distance: predecessor missing");
        left = make_rational(*pr, a.Q);
        auto sr = detail::min_residue_at_least(n, a.P, a.Q, cplus);
        if (sr) {
            right = make_rational(*sr, a.Q);
            have_right = true;
        }
    }
    Interval cell(left, right);
    if (!cell.contains(x.value))
        throw InvariantViolation("cell_three_distance: x outside its gap");
    // The gap found must be one of the (at most three) admissible lengths.
    std::vector<GapClass> prof = three_distance_profile(alpha, n);
    BigRational len = cell.length();
    bool admissible = false;
    for (const auto& g : prof) admissible = admissible || g.length == len;
    if (!admissible)
        throw InvariantViolation(
            "cell_three_distance: gap length not in the three-length profile");
    return cell;
}

// ---------------------------------------------------------------------------
// Farey adjacency
// ---------------------------------------------------------------------------

bool farey_adjacency_check(const BigRational& l, const BigRational& r,
                           const BigInt& n) {
    if (!(l < r)) throw DomainError("farey_adjacency_check: need l < r");
    if (l < 0 || r > 1) throw DomainError("farey_adjacency_check: outside [0,1]");
    const BigInt& p = l.get_num();
    const BigInt& q = l.get_den();
    const BigInt& pp = r.get_num();
    const BigInt& qq = r.get_den();
    BigInt bound = n + 1;
    if (q > bound || qq > bound) return false;
    if (abs(pp * q - p * qq) != 1) return false;
    return q + qq > bound;
}

// ---------------------------------------------------------------------------
// Join oracle for fibred maps
// ---------------------------------------------------------------------------

namespace {

void require_base(const std::vector<Interval>& base,
                  const std::vector<Interval>& expected, const char* what) {
    if (base.size() != expected.size())
        throw DomainError(std::string(what) + ": base is not the branch partition");
    for (std::size_t i = 0; i < base.size(); ++i)
        if (!(base[i] == expected[i]))
            throw DomainError(std::string(what) + ": base is not the branch partition");
}

} // namespace

std::vector<Interval> fibred_join_oracle(const MapSpec& map,
                                         const std::vector<Interval>& base,
                                         long n, std::size_t max_cells) {
    if (n < 0) throw DomainError("fibred_join_oracle: negative depth");
    if (n == 0) return {Interval(BigRational(0), BigRational(1))};

    struct Visitor {
        const std::vector<Interval>& base;
        long n;
        std::size_t max_cells;

        void grow_check(std::size_t next, const char* what) const {
            if (next > max_cells)
                throw ResourceError(std::string(what) + ": join cell blowup");
        }

        std::vector<Interval> operator()(const MapBary& m) const {
            if (m.base < 2 || !m.base.fits_ulong_p() ||
                m.base.get_ui() > max_cells)
                throw DomainError("fibred_join_oracle: bad b-adic base");
            unsigned long b = m.base.get_ui();
            std::vector<Interval> branch;
            branch.reserve(b);
            for (unsigned long d = 0; d < b; ++d)
                branch.emplace_back(make_rational(d, m.base),
                                    make_rational(d + 1, m.base));
            require_base(base, branch, "fibred_join_oracle(bary)");
            std::vector<Interval> cur = branch;
            BigRational bb(m.base);
            for (long step = 2; step <= n; ++step) {
                grow_check(cur.size() * b, "fibred_join_oracle(bary)");
                std::vector<Interval> next;
                next.reserve(cur.size() * b);
                for (unsigned long d = 0; d < b; ++d)
                    for (const auto& c : cur)
                        next.emplace_back((c.lo + d) / bb, (c.hi + d) / bb);
                cur = std::move(next);
            }
            return cur;
        }

        std::vector<Interval> operator()(const MapFarey&) const {
            BigRational half(1, 2);
            std::vector<Interval> branch = {Interval(BigRational(0), half),
                                            Interval(half, BigRational(1))};
            require_base(base, branch, "fibred_join_oracle(farey)");
            std::vector<Interval> cur = branch;
            for (long step = 2; step <= n; ++step) {
                grow_check(cur.size() * 2, "fibred_join_oracle(farey)");
                std::vector<Interval> next;
                next.reserve(cur.size() * 2);
                // Left inverse branch y -> y/(1+y) is increasing into (0,1/2).
                for (const auto& c : cur)
                    next.emplace_back(c.lo / (1 + c.lo), c.hi / (1 + c.hi));
                // Right inverse branch y -> 1/(1+y) is decreasing into (1/2,1).
                for (auto it = cur.rbegin(); it != cur.rend(); ++it)
                    next.emplace_back(1 / (1 + it->hi), 1 / (1 + it->lo));
                cur = std::move(next);
            }
            return cur;
        }

        std::vector<Interval> operator()(const MapGauss& m) const {
            if (m.a_max < 1)
                throw DomainError("fibred_join_oracle: a_max must be >= 1");
            std::vector<Interval> branch;
            for (long a = m.a_max; a >= 1; --a)
                branch.emplace_back(make_rational(1, a + 1), make_rational(1, a));
            require_base(base, branch, "fibred_join_oracle(gauss)");
            std::vector<Interval> cur = branch;
            std::size_t nb = static_cast<std::size_t>(m.a_max);
            for (long step = 2; step <= n; ++step) {
                grow_check(cur.size() * nb, "fibred_join_oracle(gauss)");
                std::vector<Interval> next;
                next.reserve(cur.size() * nb);
                // Branch y -> 1/(y+a) is decreasing; deepest branch first.
                for (long a = m.a_max; a >= 1; --a)
                    for (auto it = cur.rbegin(); it != cur.rend(); ++it)
                        next.emplace_back(1 / (it->hi + a), 1 / (it->lo + a));
                cur = std::move(next);
            }
            return cur;
        }
    };

    std::vector<Interval> cells = std::visit(Visitor{base, n, max_cells}, map);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i)
        if (!(cells[i].hi <= cells[i + 1].lo))
            throw InvariantViolation("fibred_join_oracle: cells out of order");
    bool truncated = std::holds_alternative<MapGauss>(map);
    if (!truncated) {
        if (cells.front().lo != 0 || cells.back().hi != 1)
            throw InvariantViolation("fibred_join_oracle: join does not span (0,1)");
        for (std::size_t i = 0; i + 1 < cells.size(); ++i)
            if (cells[i].hi != cells[i + 1].lo)
                throw InvariantViolation("fibred_join_oracle: gap between join cells");
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Enumeration and norms
// ---------------------------------------------------------------------------

namespace {

std::vector<Interval> enumerate_bary(const BigInt& base, long n,
                                     std::size_t max_cells) {
    BigInt count = pow_bigint(base, static_cast<unsigned long>(n));
    if (count > static_cast<unsigned long>(max_cells))
        throw ResourceError("enumerate_cells: b-adic cell blowup");
    std::vector<Interval> out;
    unsigned long c = count.get_ui();
    out.reserve(c);
    for (unsigned long j = 0; j < c; ++j)
        out.emplace_back(make_rational(j, count), make_rational(j + 1, count));
    return out;
}

std::vector<Interval> enumerate_beta(const BigRational& beta, long n,
                                     std::size_t max_cells) {
    struct Node {
        BigRational lo, hi, A, B;
    };
    std::vector<Node> cur = {{BigRational(0), BigRational(1), BigRational(0),
                              BigRational(1)}};
    BigRational pow(1);
    for (long depth = 0; depth < n; ++depth) {
        std::vector<Node> next;
        for (const auto& node : cur) {
            BigInt d = floor_rational(node.A * beta);
            if (d < 0) d = 0;
            for (;; ++d) {
                BigRational dlo = BigRational(d) / beta;
                if (!(dlo < node.B)) break;
                BigRational dhi = BigRational(d + 1) / beta;
                BigRational wlo = std::max(node.A, dlo);
                BigRational whi = std::min(node.B, dhi);
                if (!(wlo < whi)) continue;
                Node child;
                child.lo = node.lo + (wlo - node.A) / pow;
                child.hi = node.lo + (whi - node.A) / pow;
                child.A = beta * wlo - d;
                child.B = beta * whi - d;
                next.push_back(std::move(child));
                if (next.size() > max_cells)
                    throw ResourceError("enumerate_cells: beta cell blowup");
            }
        }
        cur = std::move(next);
        pow *= beta;
    }
    std::vector<Interval> out;
    out.reserve(cur.size());
    for (const auto& node : cur) out.emplace_back(node.lo, node.hi);
    return out;
}

std::vector<Interval> enumerate_farey(long n, std::size_t max_cells) {
    BigInt N = BigInt(n) + 1;
    // Walk consecutive reduced fractions of denominator <= N by the
    // next-term recurrence.
    std::vector<BigRational> pts;
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = N;
    pts.push_back(make_rational(p0, q0));
    while (!(p1 == 1 && q1 == 1)) {
        pts.push_back(make_rational(p1, q1));
        if (pts.size() > max_cells)
            throw ResourceError("enumerate_cells: Farey cell blowup");
        BigInt k = (N + q0) / q1;
        BigInt p2 = k * p1 - p0;
        BigInt q2 = k * q1 - q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    pts.push_back(BigRational(1));
    std::vector<Interval> out;
    out.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        out.emplace_back(pts[i], pts[i + 1]);
    return out;
}

std::vector<Interval> enumerate_stern_brocot(long n, std::size_t max_cells) {
    if (n >= 40 || (1ull << n) > max_cells)
        throw ResourceError("enumerate_cells: Stern-Brocot cell blowup");
    std::vector<BigRational> pts = {BigRational(0), BigRational(1)};
    for (long level = 0; level < n; ++level) {
        std::vector<BigRational> next;
        next.reserve(pts.size() * 2 - 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            next.push_back(pts[i]);
            next.push_back(mediant(pts[i], pts[i + 1]));
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    std::vector<Interval> out;
    out.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        out.emplace_back(pts[i], pts[i + 1]);
    return out;
}

std::vector<Interval> enumerate_three_distance(const UnitPoint& alpha, long n,
                                               std::size_t max_cells) {
    RationalAlpha a = checked_alpha(alpha, BigInt(n), "enumerate_cells");
    if (static_cast<unsigned long>(n) + 1 > max_cells)
        throw ResourceError("enumerate_cells: rotation cell blowup");
    std::vector<BigInt> residues;
    residues.reserve(static_cast<std::size_t>(n) + 2);
    residues.emplace_back(0);
    BigInt r = 0;
    for (long i = 1; i <= n; ++i) {
        r += a.P;
        if (r >= a.Q) r -= a.Q;
        residues.push_back(r);
    }
    std::sort(residues.begin(), residues.end());
    std::vector<Interval> out;
    out.reserve(residues.size());
    for (std::size_t i = 0; i + 1 < residues.size(); ++i) {
        if (residues[i] == residues[i + 1])
            throw InvariantViolation("enumerate_cells: colliding orbit points");
        out.emplace_back(make_rational(residues[i], a.Q),
                         make_rational(residues[i + 1], a.Q));
    }
    out.emplace_back(make_rational(residues.back(), a.Q), BigRational(1));
    return out;
}

std::vector<Interval> enumerate_synthetic(const WeightFunction& f, long n,
                                          std::size_t max_cells) {
    BigInt t = synthetic_count(f, BigInt(n));
    if (t > static_cast<unsigned long>(max_cells))
        throw ResourceError("enumerate_cells: log-balanced cell blowup");
    long k = bit_length(t) - 1;
    BigInt slots = pow_bigint(2, static_cast<unsigned long>(k));
    BigInt extra = t - slots;
    BigInt den = slots * 2;
    std::vector<Interval> out;
    for (BigInt j = 0; j < slots; ++j) {
        if (j < extra) {
            out.emplace_back(make_rational(2 * j, den), make_rational(2 * j + 1, den));
            out.emplace_back(make_rational(2 * j + 1, den),
                             make_rational(2 * j + 2, den));
        } else {
            out.emplace_back(make_rational(j, slots), make_rational(j + 1, slots));
        }
    }
    return out;
}

} // namespace

std::vector<Interval> enumerate_cells(const PartitionFamily& fam, long n,
                                      std::size_t max_cells) {
    if (n < 0) throw DomainError("enumerate_cells: negative depth");
    if (n == 0) return {Interval(BigRational(0), BigRational(1))};
    struct Visitor {
        long n;
        std::size_t max_cells;
        std::vector<Interval> operator()(const FamilyBary& f) const {
            return enumerate_bary(f.base, n, max_cells);
        }
        std::vector<Interval> operator()(const FamilyBeta& f) const {
            return enumerate_beta(f.beta, n, max_cells);
        }
        std::vector<Interval> operator()(const FamilyCF&) const {
            throw DomainError(
                "enumerate_cells: continued-fraction depths have countably many cells");
        }
        std::vector<Interval> operator()(const FamilyFarey&) const {
            return enumerate_farey(n, max_cells);
        }
        std::vector<Interval> operator()(const FamilySternBrocot&) const {
            return enumerate_stern_brocot(n, max_cells);
        }
        std::vector<Interval> operator()(const FamilyThreeDist& f) const {
            return enumerate_three_distance(f.alpha, n, max_cells);
        }
        std::vector<Interval> operator()(const FamilySynthetic& f) const {
            return enumerate_synthetic(f.f, n, max_cells);
        }
    };
    return std::visit(Visitor{n, max_cells}, fam.v);
}

BigRational partition_norm(const PartitionFamily& fam, const BigInt& n,
                           MeasureKind measure) {
    if (measure == MeasureKind::Gauss)
        throw DomainError(
            "partition_norm: the extremal Gauss-measure of a cell is not rational; "
            "only the Lebesgue norm is exposed exactly");
    if (n < 0) throw DomainError("partition_norm: negative depth");
    if (n == 0) return BigRational(1);
    struct Visitor {
        const BigInt& n;
        BigRational operator()(const FamilyBary& f) const {
            long nl = require_long_depth(n, "partition_norm(bary)");
            return make_rational(1, pow_bigint(f.base, static_cast<unsigned long>(nl)));
        }
        BigRational operator()(const FamilyBeta& f) const {
            long nl = require_long_depth(n, "partition_norm(beta)");
            auto cells = enumerate_beta(f.beta, nl, 1u << 21);
            BigRational best(0);
            for (const auto& c : cells) best = std::max(best, c.length());
            return best;
        }
        BigRational operator()(const FamilyCF&) const {
            // The widest depth-n cylinder is the all-ones one: 1/(q_n (q_n+q_{n-1}))
            // with Fibonacci continuants.
            long nl = require_long_depth(n, "partition_norm(cf)");
            CFExpansion golden =
                cf_generate(CFRule{CFRule::Golden{}}, static_cast<std::size_t>(nl));
            return make_rational(1, golden.q(nl) * (golden.q(nl) + golden.q(nl - 1)));
        }
        BigRational operator()(const FamilyFarey&) const {
            return make_rational(1, n + 1);
        }
        BigRational operator()(const FamilySternBrocot&) const {
            return make_rational(1, n + 1);
        }
        BigRational operator()(const FamilyThreeDist& f) const {
            return three_distance_profile(f.alpha, n).back().length;
        }
        BigRational operator()(const FamilySynthetic& f) const {
            BigInt t = synthetic_count(f.f, n);
            long k = bit_length(t) - 1;
            return dyadic_ulp(k);
        }
    };
    return std::visit(Visitor{n}, fam.v);
}

// ---------------------------------------------------------------------------
// Unified dispatch with the resolution guard
// ---------------------------------------------------------------------------

const CFExpansion& PointCache::ensure_cf(const UnitPoint& x, long bit_bound) {
    if (!cf) {
        long need = std::max(bit_bound, 2 * x.resolution_bits + 64);
        cf = cf_expand(x.value, need);
    }
    return *cf;
}

namespace {

Interval cell_beta_cached(const UnitPoint& x, long n, const BigRational& beta,
                          PointCache& cache) {
    if (n == 0) return Interval(BigRational(0), BigRational(1));
    auto& slot = cache.beta;
    if (!slot || slot->beta != beta) {
        slot.emplace();
        slot->beta = beta;
        slot->image_lo = 0;
        slot->image_hi = 1;
        slot->orbit = x.value;
        slot->pow = 1;
    }
    while (slot->cells.size() < static_cast<std::size_t>(n)) {
        BetaState s;
        s.lo = slot->cells.empty() ? BigRational(0) : slot->cells.back().lo;
        s.hi = slot->cells.empty() ? BigRational(1) : slot->cells.back().hi;
        s.A = slot->image_lo;
        s.B = slot->image_hi;
        s.orbit = slot->orbit;
        s.pow = slot->pow;
        beta_step(s, beta);
        slot->cells.emplace_back(s.lo, s.hi);
        slot->image_lo = s.A;
        slot->image_hi = s.B;
        slot->orbit = s.orbit;
        slot->pow = s.pow;
    }
    return slot->cells[static_cast<std::size_t>(n) - 1];
}

} // namespace

Interval cell_of(const PartitionFamily& fam, const UnitPoint& x, const BigInt& n,
                 PointCache& cache) {
    if (n < 0) throw DomainError("cell_of: negative depth");
    Interval cell(BigRational(0), BigRational(1));
    try {
        struct Visitor {
            const UnitPoint& x;
            const BigInt& n;
            PointCache& cache;
            Interval operator()(const FamilyBary& f) const {
                return cell_bary(x, require_long_depth(n, "cell_of(bary)"), f.base);
            }
            Interval operator()(const FamilyBeta& f) const {
                return cell_beta_cached(x, require_long_depth(n, "cell_of(beta)"),
                                        f.beta, cache);
            }
            Interval operator()(const FamilyCF&) const {
                return cell_cf(cache.ensure_cf(x),
                               require_long_depth(n, "cell_of(cf)"));
            }
            Interval operator()(const FamilyFarey&) const {
                return cell_farey(cache.ensure_cf(x), n).interval;
            }
            Interval operator()(const FamilySternBrocot&) const {
                return cell_stern_brocot(cache.ensure_cf(x), n).interval;
            }
            Interval operator()(const FamilyThreeDist& f) const {
                return cell_three_distance(f.alpha, n, x);
            }
            Interval operator()(const FamilySynthetic& f) const {
                return cell_synthetic(x, require_long_depth(n, "cell_of(synthetic)"),
                                      f.f);
            }
        };
        cell = std::visit(Visitor{x, n, cache}, fam.v);
    } catch (const EndpointHit& e) {
        if (x.radius > 0)
            throw PrecisionError(std::string("cell_of: proxy point hit an endpoint (") +
                                 e.what() + ")");
        throw;
    }
    if (x.radius == 0) {
        if (!cell.contains(x.value))
            throw InvariantViolation("cell_of: cell does not contain the point");
    } else {
        require_guard(x, cell, "cell_of");
    }
    return cell;
}

Interval cell_of(const PartitionFamily& fam, const UnitPoint& x, const BigInt& n) {
    PointCache cache;
    return cell_of(fam, x, n, cache);
}

} // namespace partq
