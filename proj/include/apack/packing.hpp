#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "apack/inversive.hpp"
#include "apack/parallel.hpp"

namespace apack {

/// Coordinates of elements of R(Q)^+ relative to the cover's plus basis
/// (su basis rows first, then tau).
struct PlusFrame {
    const CoveringData* cover;
    std::vector<int> cols;  // structural columns making the basis square
    RatMat inv;             // inverse of that square block

    explicit PlusFrame(const CoveringData& cd) : cover(&cd) {
        std::size_t r = cd.plus_basis.size();
        // pick r independent structural columns
        for (int trial = 0; trial < (1 << 4) && cols.empty(); ++trial) {
            std::vector<int> pick;
            for (int c = 0; c < 4; ++c)
                if (trial & (1 << c)) pick.push_back(c);
            if (pick.size() != r) continue;
            RatMat m(r, RatVec(r));
            for (std::size_t row = 0; row < r; ++row)
                for (std::size_t c = 0; c < r; ++c) m[row][c] = cd.plus_basis[row].c[pick[c]];
            auto mi = rat_inverse(m);
            if (!mi) continue;
            cols = pick;
            // coords solve x = coords * basis, so coords = x_cols * m^{-1}
            inv.assign(r, RatVec(r));
            for (std::size_t row = 0; row < r; ++row)
                for (std::size_t c = 0; c < r; ++c) inv[row][c] = (*mi)[c][row];
        }
        if (cols.empty()) throw structural_error("plus basis has no square block");
    }

    RatVec coords(const QuatElem& x) const {
        std::size_t r = cover->plus_basis.size();
        // x must lie in the plus span: check the untouched structural coords
        QuatElem residue = x;
        RatVec rhs(r);
        for (std::size_t c = 0; c < r; ++c) rhs[c] = x.c[cols[c]];
        RatVec out(r, 0);
        for (std::size_t row = 0; row < r; ++row)
            for (std::size_t c = 0; c < r; ++c) out[row] += inv[row][c] * rhs[c];
        for (std::size_t k = 0; k < r; ++k) residue = residue - out[k] * cover->plus_basis[k];
        if (!residue.is_zero()) throw structural_error("element outside the plus part");
        return out;
    }

    QuatElem from_coords(const RatVec& c) const {
        QuatElem x = QuatElem::zero(cover->order.sig);
        for (std::size_t k = 0; k < c.size(); ++k) x = x + c[k] * cover->plus_basis[k];
        return x;
    }

    GramLattice plus_gram() const { return dot_gram(cover->plus_basis); }

    GramLattice su_gram() const { return dot_gram(cover->su_basis); }
};

enum class PackingKind { superpacking, apollonian };

struct CensusKey {
    Rational bend;
    Rational cobend;
    std::vector<Rational> xi;  // plus-frame coordinates of the reduced center

    auto tie() const { return std::tie(bend, cobend, xi); }
    bool operator<(const CensusKey& o) const { return tie() < o.tie(); }
    bool operator==(const CensusKey& o) const { return tie() == o.tie(); }
};

/// One BFS letter: a Cohn generator W(alpha), a unit-sphere reflection at z,
/// or the canonicalizing translation applied right after a step.
struct WordLetter {
    enum Kind { cohn, reflect, translate } kind;
    QuatElem payload;
};

struct CensusEntry {
    InvCoord rep;            // canonical representative (normalized coords)
    std::int64_t parent;     // index into the entry pool, -1 for seeds
    WordLetter letter;       // step from parent
    QuatElem shift;          // translation applied when canonicalizing
    QuatElem pre_shift;      // translation applied before the step
    int depth = 0;
    bool seed_plane = false;
};

/// Deduplicated set of spheres modulo lattice translations: the full
/// plus-part lattice for the superpacking orbit, S_u cap R(Z)^+ for the
/// Apollonian packing.
struct PackingCensus {
    CoveringData cover;
    PackingKind kind;
    Int bend_bound;
    Rational gen_norm_bound;            // superpacking generator truncation
    int overshoot = 2;                  // internal search bound multiplier
    std::map<CensusKey, std::size_t> spheres;
    std::vector<CensusEntry> pool;
    std::map<Int, std::int64_t> bend_counts;
    int depth_reached = 0;
    bool frontier_exhausted = false;    // BFS reached a fixpoint
    std::int64_t slack_discoveries = 0; // entries found through over-bound parents

    std::size_t size() const { return spheres.size(); }

    /// Reconstructs the witnessing word for an entry, outermost letter first.
    std::vector<WordLetter> word_of(std::size_t idx) const {
        std::vector<WordLetter> out;
        for (std::int64_t k = std::int64_t(idx); k >= 0; k = pool[k].parent) {
            if (pool[k].parent < 0) break;
            if (!pool[k].shift.is_zero())
                out.push_back({WordLetter::translate, pool[k].shift});
            out.push_back(pool[k].letter);
            if (!pool[k].pre_shift.is_zero())
                out.push_back({WordLetter::translate, pool[k].pre_shift});
        }
        return out;
    }
};

struct EnumerateOptions {
    Int bend_bound = 30;
    Rational gen_norm_bound = 9;  // superpacking: nrm(alpha) cutoff
    int max_depth = 256;
    int overshoot = 2;
    unsigned threads = 1;
};

namespace detail {

struct Canonicalizer {
    const PlusFrame* frame;
    PackingKind kind;

    Canonicalizer(const PlusFrame& f, PackingKind k) : frame(&f), kind(k) {}

    std::size_t reducible() const {
        std::size_t r = frame->cover->plus_basis.size();
        return kind == PackingKind::superpacking ? r : r - 1;
    }

    /// Lattice vector w in the dedup sublattice with 2*dot(w, xi) equal to
    /// the positive generator of {2*dot(v, xi)}; zero when xi is orthogonal.
    std::pair<Rational, QuatElem> cobend_quantum(const QuatElem& xi) const {
        const auto& cd = *frame->cover;
        Rational g = 0;
        QuatElem w = QuatElem::zero(cd.order.sig);
        for (std::size_t i = 0; i < reducible(); ++i) {
            Rational v = 2 * dot(cd.plus_basis[i], xi);
            if (v == 0) continue;
            if (g == 0) {
                g = abs(v);
                w = (v > 0 ? Rational(1) : Rational(-1)) * cd.plus_basis[i];
                continue;
            }
            // combine with extended gcd over a common denominator
            Int den = lcm(denom(g), denom(v));
            Int a = numer(g) * (den / denom(g));
            Int b = numer(v) * (den / denom(v));
            Int x, y;
            Int gi = ext_gcd(a, b, x, y);
            w = Rational(x) * w + Rational(y) * cd.plus_basis[i];
            g = Rational(gi, den);
        }
        return {g, w};
    }

    /// Reduces the sphere modulo the dedup lattice; returns the canonical
    /// coordinates and the translation that was applied.
    std::pair<InvCoord, QuatElem> reduce(const InvCoord& s) const {
        const auto& cd = *frame->cover;
        if (s.is_plane()) {
            auto [step, unit] = cobend_quantum(s.xi);
            QuatElem w = QuatElem::zero(cd.order.sig);
            if (step != 0) {
                Int t = rfloor(s.cobend / step);
                if (t != 0) w = Rational(-t) * unit;
            }
            if (w.is_zero()) return {s, w};
            return {translate_step(w, s), w};
        }
        RatVec c = frame->coords(s.xi);
        Rational abs_bend = abs(s.bend);
        QuatElem w = QuatElem::zero(cd.order.sig);
        for (std::size_t i = 0; i < reducible(); ++i) {
            Int t = rfloor(c[i] / abs_bend);
            if (t == 0) continue;
            Rational move = -Rational(t) * (s.bend > 0 ? 1 : -1);
            w = w + move * cd.plus_basis[i];
        }
        if (w.is_zero()) return {s, w};
        return {translate_step(w, s), w};
    }
};

inline CensusKey key_of(const InvCoord& s, const PlusFrame& frame) {
    return CensusKey{s.bend, s.cobend, frame.coords(s.xi)};
}

}  // namespace detail

/// Orbit of the base plane S_u under the Cohn-matrix group, breadth first;
/// generators W(alpha) range over plus-part elements with nrm(alpha) up to
/// the configured cutoff, spheres are pruned above overshoot * bend_bound
/// and reported up to bend_bound.
inline PackingCensus enumerate_superpacking(const CoveringData& cd, const EnumerateOptions& opt) {
    if (opt.bend_bound < 0) throw std::domain_error("bend bound must be nonnegative");
    PlusFrame frame(cd);
    detail::Canonicalizer canon(frame, PackingKind::superpacking);

    std::vector<QuatElem> gens;
    gens.push_back(QuatElem::zero(cd.order.sig));
    for (const auto& v : short_vectors(frame.plus_gram(), opt.gen_norm_bound)) {
        RatVec c(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) c[k] = Rational(v[k]);
        QuatElem g = frame.from_coords(c);
        gens.push_back(g);
        gens.push_back(-g);
    }

    PackingCensus census;
    census.cover = cd;
    census.kind = PackingKind::superpacking;
    census.bend_bound = opt.bend_bound;
    census.gen_norm_bound = opt.gen_norm_bound;
    census.overshoot = opt.overshoot;
    Rational search_bound = Rational(opt.bend_bound) * opt.overshoot;

    auto [seed, seed_w] = canon.reduce(base_plane(cd.u));
    census.pool.push_back({seed, -1, {WordLetter::cohn, QuatElem::zero(cd.order.sig)},
                           QuatElem::zero(cd.order.sig), QuatElem::zero(cd.order.sig), 0, true});
    census.spheres[detail::key_of(seed, frame)] = 0;

    GramLattice plus_gram = frame.plus_gram();

    // translates T_w(s) whose image under some W(alpha) can stay under the
    // search bound: the next bend is the translated cobend
    auto expansion_translates = [&](const InvCoord& s) {
        std::vector<QuatElem> ws;
        if (s.is_plane()) {
            auto [step, unit] = canon.cobend_quantum(s.xi);
            if (step == 0) {
                ws.push_back(QuatElem::zero(cd.order.sig));
                return ws;
            }
            for (Int t = rfloor((-search_bound - s.cobend) / step);
                 s.cobend + Rational(t) * step <= search_bound; ++t)
                ws.push_back(Rational(t) * unit);
            return ws;
        }
        // cobend(T_w s) = kappa * nrm(w + c) - nrm_u / kappa
        RatVec center = frame.coords(s.xi);
        for (auto& v : center) v = -v / s.bend;
        Rational reach = (search_bound + Rational(cd.nrm_u) / abs(s.bend)) / abs(s.bend);
        for (const auto& wv : short_vectors_near(plus_gram, center, reach)) {
            RatVec wc(wv.size());
            for (std::size_t k = 0; k < wv.size(); ++k) wc[k] = Rational(wv[k]);
            ws.push_back(frame.from_coords(wc));
        }
        return ws;
    };

    std::vector<std::size_t> frontier{0};
    for (int depth = 1; depth <= opt.max_depth && !frontier.empty(); ++depth) {
        using Staged = std::vector<std::pair<CensusKey, CensusEntry>>;
        std::vector<Staged> staged(opt.threads ? opt.threads : 1);
        parallel_chunks(frontier.size(), opt.threads, [&](unsigned chunk, std::size_t lo,
                                                          std::size_t hi) {
            for (std::size_t fi = lo; fi < hi; ++fi) {
                const InvCoord& s = census.pool[frontier[fi]].rep;
                for (const auto& w : expansion_translates(s)) {
                    InvCoord shifted = w.is_zero() ? s : translate_step(w, s);
                    if (abs(shifted.cobend) > search_bound) continue;  // next bend
                    for (const auto& alpha : gens) {
                        InvCoord next = cohn_step(alpha, shifted);
                        if (abs(next.bend) > search_bound) continue;
                        auto [red, shift] = canon.reduce(next);
                        staged[chunk].push_back(
                            {detail::key_of(red, frame),
                             {red, std::int64_t(frontier[fi]), {WordLetter::cohn, alpha}, shift,
                              w, depth, false}});
                    }
                }
            }
        });
        std::vector<std::size_t> next_frontier;
        for (auto& chunk : staged)
            for (auto& [key, entry] : chunk) {
                auto [it, fresh] = census.spheres.emplace(key, census.pool.size());
                if (!fresh) continue;
                bool parent_over = abs(census.pool[entry.parent].rep.bend) > census.bend_bound;
                if (parent_over && abs(entry.rep.bend) <= census.bend_bound)
                    ++census.slack_discoveries;
                census.pool.push_back(entry);
                next_frontier.push_back(census.pool.size() - 1);
            }
        census.depth_reached = depth;
        frontier = std::move(next_frontier);
    }
    census.frontier_exhausted = frontier.empty();

    // drop over-bound working entries from the reported census
    for (auto it = census.spheres.begin(); it != census.spheres.end();) {
        if (abs(it->first.bend) > census.bend_bound) it = census.spheres.erase(it);
        else ++it;
    }
    for (const auto& [key, idx] : census.spheres) {
        if (key.bend == 0) continue;
        if (!is_integer(key.bend)) throw consistency_error("non-integral normalized bend");
        ++census.bend_counts[numer(key.bend)];
    }
    return census;
}

/// Orbit of the two bounding planes under translations and unit-sphere
/// reflections centered on the two lattice hyperplanes. The planes are
/// oriented away from the slab between them, so every other orbit sphere
/// must come out with positive bend.
inline PackingCensus enumerate_apollonian(const CoveringData& cd, const EnumerateOptions& opt) {
    if (opt.bend_bound < 0) throw std::domain_error("bend bound must be nonnegative");
    PlusFrame frame(cd);
    detail::Canonicalizer canon(frame, PackingKind::apollonian);

    PackingCensus census;
    census.cover = cd;
    census.kind = PackingKind::apollonian;
    census.bend_bound = opt.bend_bound;
    census.gen_norm_bound = 0;
    census.overshoot = opt.overshoot;
    Rational search_bound = Rational(opt.bend_bound) * opt.overshoot;

    GramLattice plus_gram = frame.plus_gram();
    GramLattice su_gram = frame.su_gram();
    std::size_t sub_rank = cd.su_basis.size();

    // lower plane oriented downward, upper plane oriented upward
    InvCoord lower{0, 0, -cd.u, true};
    InvCoord upper{0, 2 * cd.tau_dot_u, cd.u, true};
    for (const InvCoord& p : {lower, upper}) {
        auto [red, w] = canon.reduce(p);
        CensusEntry e{red, -1, {WordLetter::reflect, QuatElem::zero(cd.order.sig)}, w,
                      QuatElem::zero(cd.order.sig), 0, true};
        auto [it, fresh] = census.spheres.emplace(detail::key_of(red, frame), census.pool.size());
        if (fresh) census.pool.push_back(e);
    }

    // reflection centers z = w + t*tau with nrm(z - target) small enough
    auto reflection_centers = [&](const InvCoord& s) {
        std::vector<QuatElem> zs;
        for (int t = 0; t < 2; ++t) {
            RatVec tau_part(cd.plus_basis.size(), 0);
            tau_part.back() = t;
            if (s.is_plane()) {
                // one representative per translation class
                zs.push_back(frame.from_coords(tau_part));
                continue;
            }
            // |z - c|^2 <= search_bound / kappa + r^2, c = xi / kappa
            RatVec target = frame.coords(s.xi);
            for (auto& v : target) v /= s.bend;
            target.back() -= Rational(t);
            Rational reach = search_bound / s.bend + Rational(cd.nrm_u) / (s.bend * s.bend);
            // complete the square over the su sublattice inside the plus Gram
            RatVec mixed(sub_rank, 0);
            for (std::size_t r = 0; r < sub_rank; ++r)
                for (std::size_t c = 0; c < cd.plus_basis.size(); ++c)
                    mixed[r] += plus_gram.g[r][c] * target[c];
            RatMat gsub = su_gram.g;
            auto p = rat_solve(gsub, mixed);
            if (!p) throw structural_error("degenerate su lattice");
            Rational full = 0;
            for (std::size_t r = 0; r < cd.plus_basis.size(); ++r)
                for (std::size_t c = 0; c < cd.plus_basis.size(); ++c)
                    full += target[r] * plus_gram.g[r][c] * target[c];
            Rational offset = full;
            for (std::size_t r = 0; r < sub_rank; ++r) offset -= (*p)[r] * mixed[r];
            for (const auto& wv : short_vectors_near(su_gram, *p, reach - offset)) {
                RatVec zc(cd.plus_basis.size(), 0);
                for (std::size_t k = 0; k < sub_rank; ++k) zc[k] = Rational(wv[k]);
                zc.back() = t;
                zs.push_back(frame.from_coords(zc));
            }
        }
        return zs;
    };

    std::vector<std::size_t> frontier;
    for (std::size_t k = 0; k < census.pool.size(); ++k) frontier.push_back(k);
    for (int depth = 1; depth <= opt.max_depth && !frontier.empty(); ++depth) {
        using Staged = std::vector<std::pair<CensusKey, CensusEntry>>;
        std::vector<Staged> staged(opt.threads ? opt.threads : 1);
        parallel_chunks(frontier.size(), opt.threads, [&](unsigned chunk, std::size_t lo,
                                                          std::size_t hi) {
            for (std::size_t fi = lo; fi < hi; ++fi) {
                const InvCoord& s = census.pool[frontier[fi]].rep;
                for (const auto& z : reflection_centers(s)) {
                    InvCoord next = reflect_unit_sphere(z, s);
                    if (next.bend < 0)
                        throw consistency_error("negative bend in the plane orbit");
                    if (next.bend > search_bound) continue;
                    auto [red, w] = canon.reduce(next);
                    staged[chunk].push_back(
                        {detail::key_of(red, frame),
                         {red, std::int64_t(frontier[fi]), {WordLetter::reflect, z}, w,
                          QuatElem::zero(cd.order.sig), depth, false}});
                }
            }
        });
        std::vector<std::size_t> next_frontier;
        for (auto& chunk : staged)
            for (auto& [key, entry] : chunk) {
                auto [it, fresh] = census.spheres.emplace(key, census.pool.size());
                if (!fresh) continue;
                bool parent_over = abs(census.pool[entry.parent].rep.bend) > census.bend_bound;
                if (parent_over && abs(entry.rep.bend) <= census.bend_bound)
                    ++census.slack_discoveries;
                census.pool.push_back(entry);
                next_frontier.push_back(census.pool.size() - 1);
            }
        census.depth_reached = depth;
        frontier = std::move(next_frontier);
    }
    census.frontier_exhausted = frontier.empty();

    for (auto it = census.spheres.begin(); it != census.spheres.end();) {
        if (it->first.bend > census.bend_bound) it = census.spheres.erase(it);
        else ++it;
    }
    for (const auto& [key, idx] : census.spheres) {
        if (key.bend == 0) continue;
        if (!is_integer(key.bend)) throw consistency_error("non-integral normalized bend");
        ++census.bend_counts[numer(key.bend)];
    }
    return census;
}

// ---------------------------------------------------------------------------
// geometric checks over a census
// ---------------------------------------------------------------------------

struct TangencyIncidence {
    CensusKey a, b;
    QuatElem point;
};

struct TangencyReport {
    std::int64_t pairs_checked = 0;
    std::int64_t tangencies = 0;
    std::int64_t interior_violations = 0;
    std::int64_t immediate_violations = 0;
    bool planes_tangent_at_infinity = false;
    bool all_points_rational = true;  // tangency points land in R(Q)
    std::vector<TangencyIncidence> violations;
};

/// Exhaustive pairwise check on an Apollonian census: interiors must be
/// disjoint (tangency allowed), every tangency must be immediate, and
/// tangency points must be rational. Representatives are compared against
/// all relevant lattice translates of each other.
inline TangencyReport immediate_tangency_check(const PackingCensus& census) {
    if (census.kind != PackingKind::apollonian)
        throw structural_error("tangency check expects an Apollonian census");
    const CoveringData& cd = census.cover;
    PlusFrame frame(cd);
    GramLattice su_gram = dot_gram(cd.su_basis);
    GramLattice plus_gram = dot_gram(cd.plus_basis);
    std::size_t sub_rank = cd.su_basis.size();
    Rational nrm(cd.nrm_u);

    std::vector<InvCoord> spheres;   // non-planes
    for (const auto& [key, idx] : census.spheres)
        if (key.bend != 0) spheres.push_back(census.pool[idx].rep);

    TangencyReport report;
    report.planes_tangent_at_infinity = true;  // the two seed planes, by construction

    // every tangency deposits both participants at the reduced point; an
    // immediate tangency leaves exactly two objects per point
    const std::size_t kLowerPlane = spheres.size(), kUpperPlane = spheres.size() + 1;
    std::map<std::vector<Rational>, std::vector<std::size_t>> tangency_points;
    auto record_point = [&](const QuatElem& rho, std::size_t obj_a, std::size_t obj_b) {
        if (!in_plus_part(rho)) report.all_points_rational = false;
        RatVec c = frame.coords(rho);
        for (std::size_t k = 0; k < sub_rank; ++k) c[k] -= Rational(rfloor(c[k]));
        auto& bucket = tangency_points[c];
        bucket.push_back(obj_a);
        bucket.push_back(obj_b);
    };

    for (std::size_t i = 0; i < spheres.size(); ++i) {
        const InvCoord& s = spheres[i];
        Rational lower_gap = dot(s.xi, cd.u) - nrm;                          // >= 0
        Rational upper_gap = s.bend * cd.tau_dot_u - dot(s.xi, cd.u) - nrm;  // >= 0
        if (lower_gap < 0 || upper_gap < 0) ++report.interior_violations;
        if (lower_gap == 0) {
            ++report.tangencies;
            record_point(Rational(1) / s.bend * (s.xi - cd.u), i, kLowerPlane);
        }
        if (upper_gap == 0) {
            ++report.tangencies;
            record_point(Rational(1) / s.bend * (s.xi + cd.u), i, kUpperPlane);
        }
    }

    // sphere-sphere over nearby translates
    for (std::size_t i = 0; i < spheres.size(); ++i) {
        for (std::size_t j = i; j < spheres.size(); ++j) {
            const InvCoord &s1 = spheres[i], &s2 = spheres[j];
            // translates w with |c1 - c2 - w| <= r1 + r2
            RatVec target = frame.coords(s1.xi);
            RatVec c2 = frame.coords(s2.xi);
            for (std::size_t k = 0; k < target.size(); ++k)
                target[k] = target[k] / s1.bend - c2[k] / s2.bend;
            Rational radius_sum_sq = nrm * (s1.bend + s2.bend) * (s1.bend + s2.bend) /
                                     (s1.bend * s1.bend * s2.bend * s2.bend);
            RatVec mixed(sub_rank, 0);
            for (std::size_t r = 0; r < sub_rank; ++r)
                for (std::size_t c = 0; c < cd.plus_basis.size(); ++c)
                    mixed[r] += plus_gram.g[r][c] * target[c];
            auto p = rat_solve(su_gram.g, mixed);
            Rational full = 0;
            for (std::size_t r = 0; r < cd.plus_basis.size(); ++r)
                for (std::size_t c = 0; c < cd.plus_basis.size(); ++c)
                    full += target[r] * plus_gram.g[r][c] * target[c];
            Rational offset = full;
            for (std::size_t r = 0; r < sub_rank; ++r) offset -= (*p)[r] * mixed[r];
            for (const auto& wv : short_vectors_near(su_gram, *p, radius_sum_sq - offset)) {
                bool zero = true, negative = false;
                for (std::size_t k = 0; k < sub_rank && zero; ++k) {
                    if (wv[k] == 0) continue;
                    zero = false;
                    negative = wv[k] < 0;
                }
                if (i == j && (zero || negative)) continue;  // itself / mirror duplicate
                RatVec wc(cd.plus_basis.size(), 0);
                for (std::size_t k = 0; k < sub_rank; ++k) wc[k] = Rational(wv[k]);
                QuatElem w = frame.from_coords(wc);
                QuatElem xi2 = s2.xi + s2.bend * w;
                ++report.pairs_checked;
                // |c1 - c2'|^2 vs (r1 + r2)^2, cleared of denominators
                QuatElem diff = s2.bend * s1.xi - s1.bend * xi2;
                Rational lhs = norm(diff);
                Rational rhs = nrm * (s1.bend + s2.bend) * (s1.bend + s2.bend);
                if (lhs < rhs) {
                    ++report.interior_violations;
                    report.violations.push_back(
                        {detail::key_of(s1, frame), detail::key_of(s2, frame), w});
                } else if (lhs == rhs) {
                    ++report.tangencies;
                    QuatElem rho = Rational(1) / (s1.bend + s2.bend) * (s1.xi + xi2);
                    record_point(rho, i, j);
                }
            }
        }
    }

    for (const auto& [pt, incident] : tangency_points)
        if (incident.size() > 2) ++report.immediate_violations;
    return report;
}

/// Every sphere of an Apollonian census, reduced modulo the full plus
/// lattice, must appear in the super-packing census (either orientation).
inline std::size_t apollonian_not_in_superpacking(const PackingCensus& apollonian,
                                                  const PackingCensus& super) {
    PlusFrame frame(apollonian.cover);
    detail::Canonicalizer canon(frame, PackingKind::superpacking);
    std::size_t missing = 0;
    for (const auto& [key, idx] : apollonian.spheres) {
        const InvCoord& rep = apollonian.pool[idx].rep;
        bool found = false;
        for (int sign = 0; sign < 2 && !found; ++sign) {
            InvCoord s = rep;
            if (sign) {
                s.bend = -s.bend;
                s.cobend = -s.cobend;
                s.xi = -s.xi;
            }
            auto [red, w] = canon.reduce(s);
            found = super.spheres.count(detail::key_of(red, frame)) > 0;
        }
        if (!found) ++missing;
    }
    return missing;
}

}  // namespace apack
