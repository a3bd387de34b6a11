#include "ck/convexity.hpp"

#include "ck/errors.hpp"

#include <algorithm>
#include <random>

namespace ck {

namespace {

std::vector<std::string> mask_names(const FiniteSpace& sp, Mask m) {
    std::vector<std::string> out;
    mask_for_each(m, [&](int i) { out.push_back(sp.name(i)); });
    return out;
}

}  // namespace

ConvexityStructure::ConvexityStructure(FiniteSpace space, std::vector<Mask> table)
    : space_(std::move(space)), table_(std::move(table)) {
    if (table_.size() != static_cast<size_t>(space_.size()) * space_.size())
        throw InvalidTable("interval table is not total");
}

ConvexityStructure::ConvexityStructure(
    FiniteSpace space,
    const std::map<std::pair<std::string, std::string>, std::vector<std::string>>& table) {
    const int n = space.size();
    std::vector<Mask> t(static_cast<size_t>(n) * n, 0);
    std::vector<bool> set(t.size(), false);
    for (const auto& [key, pts] : table) {
        int x = space.index(key.first), y = space.index(key.second);
        Mask m = 0;
        for (const auto& p : pts) m |= mask_bit(space.index(p));
        t[x * n + y] = m;
        set[x * n + y] = true;
        if (!set[y * n + x]) {
            t[y * n + x] = m;
            set[y * n + x] = true;
        }
    }
    for (int x = 0; x < n; ++x)
        if (!set[x * n + x]) {
            t[x * n + x] = mask_bit(x);
            set[x * n + x] = true;
        }
    for (size_t i = 0; i < t.size(); ++i)
        if (!set[i]) throw InvalidTable("interval table is not total");
    *this = ConvexityStructure(std::move(space), std::move(t));
}

bool ConvexityStructure::is_convex(Mask s) const {
    bool ok = true;
    mask_for_each(s, [&](int u) {
        mask_for_each(s, [&](int v) {
            if (interval(u, v) & ~s) ok = false;
        });
    });
    return ok;
}

std::vector<Mask> minimal_connected_supersets(const FiniteSpace& space, int x, int y) {
    if (x == y) return {mask_bit(x)};
    // Induced x-y paths of the covering graph, collected as vertex masks.
    std::vector<Mask> out;
    std::vector<int> path{x};
    Mask on_path = mask_bit(x);

    auto extend = [&](auto&& self, int last) -> void {
        if (last == y) {
            out.push_back(on_path);
            return;
        }
        mask_for_each(space.adjacency(last) & ~on_path, [&](int next) {
            // Induced condition: next may touch only the path tip.
            Mask touching = space.adjacency(next) & on_path;
            if (touching != mask_bit(last)) return;
            path.push_back(next);
            on_path |= mask_bit(next);
            self(self, next);
            on_path &= ~mask_bit(static_cast<int>(next));
            path.pop_back();
        });
    };
    extend(extend, x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<std::vector<Mask>> forced_interval_table(const FiniteSpace& space) {
    const int n = space.size();
    std::vector<Mask> t(static_cast<size_t>(n) * n, 0);
    for (int x = 0; x < n; ++x) {
        t[x * n + x] = mask_bit(x);
        for (int y = x + 1; y < n; ++y) {
            auto mins = minimal_connected_supersets(space, x, y);
            if (mins.size() != 1) return std::nullopt;
            t[x * n + y] = t[y * n + x] = mins[0];
        }
    }
    return t;
}

ConvexityStructure make_forced_structure(const FiniteSpace& space) {
    auto t = forced_interval_table(space);
    if (!t) throw InvalidTable("carrier admits no minimality-satisfying interval table");
    return ConvexityStructure(space, std::move(*t));
}

namespace {

void add_violation(AxiomReport& rep, bool& flag, const std::string& axiom,
                   std::vector<std::string> points,
                   std::vector<std::vector<std::string>> sets, std::string detail) {
    // Record only the first violation per axiom, in scan order.
    if (!flag) return;
    flag = false;
    rep.witnesses.push_back({axiom, std::move(points), std::move(sets), std::move(detail)});
}

}  // namespace

AxiomReport check_axioms(ConvexityStructure& cs, const ConvexityConfig& cfg, bool report) {
    const FiniteSpace& sp = cs.space();
    const int n = sp.size();
    AxiomReport rep;
    rep.c1 = rep.c2 = rep.c3 = rep.continuity = rep.symmetry = rep.singleton = true;

    for (int x = 0; x < n; ++x) {
        if (cs.interval(x, x) != mask_bit(x)) {
            if (!report) throw InvalidTable("singleton law fails at " + sp.name(x));
            add_violation(rep, rep.singleton, "singleton", {sp.name(x)},
                          {mask_names(sp, cs.interval(x, x))}, "interval(x,x) differs from {x}");
        }
        for (int y = x + 1; y < n; ++y)
            if (cs.interval(x, y) != cs.interval(y, x)) {
                if (!report) throw InvalidTable("symmetry fails at " + sp.name(x) + "," + sp.name(y));
                add_violation(rep, rep.symmetry, "symmetry", {sp.name(x), sp.name(y)},
                              {mask_names(sp, cs.interval(x, y)), mask_names(sp, cs.interval(y, x))},
                              "interval(x,y) differs from interval(y,x)");
            }
    }

    // c1: intervals are convex.
    for (int x = 0; x < n && rep.c1; ++x)
        for (int y = x; y < n && rep.c1; ++y) {
            Mask c = cs.interval(x, y);
            mask_for_each(c, [&](int u) {
                mask_for_each(c, [&](int v) {
                    if ((cs.interval(u, v) & ~c) && rep.c1)
                        add_violation(rep, rep.c1, "c1",
                                      {sp.name(x), sp.name(y), sp.name(u), sp.name(v)},
                                      {mask_names(sp, c), mask_names(sp, cs.interval(u, v))},
                                      "interval of inner pair escapes the interval");
                });
            });
        }

    // c2: each interval is the unique minimal connected superset of its
    // endpoints. Exhaustive on small carriers; sampled pairs beyond.
    {
        std::vector<std::pair<int, int>> pairs;
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
        if (n > cfg.exhaustive_limit) {
            std::mt19937_64 rng(cfg.seed);
            std::shuffle(pairs.begin(), pairs.end(), rng);
            if (static_cast<int>(pairs.size()) > cfg.sample_count)
                pairs.resize(cfg.sample_count);
            std::sort(pairs.begin(), pairs.end());
        }
        for (auto [x, y] : pairs) {
            if (!rep.c2) break;
            auto mins = minimal_connected_supersets(sp, x, y);
            const Mask c = cs.interval(x, y);
            bool is_min = std::find(mins.begin(), mins.end(), c) != mins.end();
            if (mins.size() == 1 && is_min) continue;
            std::vector<std::vector<std::string>> sets;
            for (size_t i = 0; i < mins.size() && i < 4; ++i)
                sets.push_back(mask_names(sp, mins[i]));
            std::string detail = mins.empty() ? "no connected superset of the endpoints"
                                : mins.size() > 1 ? "several incomparable minimal connected supersets"
                                                  : "interval is not the minimal connected superset";
            add_violation(rep, rep.c2, "c2", {sp.name(x), sp.name(y)}, std::move(sets), detail);
        }
    }

    // c3: minimal open neighbourhoods are convex.
    for (int x = 0; x < n && rep.c3; ++x)
        if (!cs.is_convex(sp.up(x)))
            add_violation(rep, rep.c3, "c3", {sp.name(x)}, {mask_names(sp, sp.up(x))},
                          "minimal open neighbourhood is not convex");

    // Continuity: quantified over all opens U containing C(x,y), reduced to
    // the smallest one, the up-closure of the interval.
    for (int x = 0; x < n && rep.continuity; ++x)
        for (int y = 0; y < n && rep.continuity; ++y) {
            Mask u0 = sp.up_closure(cs.interval(x, y));
            mask_for_each(sp.up(x), [&](int xp) {
                mask_for_each(sp.up(y), [&](int yp) {
                    if ((cs.interval(xp, yp) & ~u0) && rep.continuity)
                        add_violation(rep, rep.continuity, "continuity",
                                      {sp.name(x), sp.name(y), sp.name(xp), sp.name(yp)},
                                      {mask_names(sp, cs.interval(x, y)),
                                       mask_names(sp, cs.interval(xp, yp))},
                                      "nearby interval escapes the open hull");
                });
            });
        }

    cs.mark_verified(rep.all());
    return rep;
}

Mask convex_hull(const ConvexityStructure& cs, Mask a) {
    Mask h = a;
    for (;;) {
        Mask next = h;
        mask_for_each(h, [&](int u) {
            mask_for_each(h, [&](int v) { next |= cs.interval(u, v); });
        });
        if (next == h) return h;
        h = next;
    }
}

std::vector<int> interval_order(const ConvexityStructure& cs, int x, int y) {
    if (!cs.verified()) throw AxiomsNotVerified("interval_order requires a validated structure");
    const Mask c = cs.interval(x, y);
    std::vector<int> pts = mask_to_indices(c);

    auto before = [&](int z, int t) { return mask_test(cs.interval(x, t), z); };

    // Verify linearity before sorting with it.
    for (int z : pts)
        for (int t : pts) {
            bool zt = before(z, t), tz = before(t, z);
            if (z == t) continue;
            if (zt && tz) throw Error("interval order is not antisymmetric");
            if (!zt && !tz) throw Error("interval order is not total");
        }
    for (int z : pts)
        for (int t : pts)
            for (int w : pts)
                if (before(z, t) && before(t, w) && !before(z, w))
                    throw Error("interval order is not transitive");

    std::sort(pts.begin(), pts.end(), [&](int a, int b) { return a != b && before(a, b); });
    if (pts.front() != x || pts.back() != y) throw Error("interval order endpoints misplaced");
    for (int z : pts)
        if ((cs.interval(x, z) | cs.interval(z, y)) != c)
            throw Error("interval does not decompose at an inner point");
    return pts;
}

bool punctured_interval_connected(const ConvexityStructure& cs, int x, int y) {
    if (x == y) return true;  // degenerate case, by convention
    Mask c = cs.interval(x, y) & ~mask_bit(y);
    return cs.space().step_connected(c);
}

ClosureReport closure_preserves_convexity(const ConvexityStructure& cs,
                                          const ConvexityConfig& cfg) {
    const FiniteSpace& sp = cs.space();
    ClosureReport out;

    auto check_one = [&](Mask s) -> bool {
        if (!cs.is_convex(s)) return true;
        Mask cl = sp.down_closure(s);
        if (cs.is_convex(cl)) return true;
        out.holds = false;
        out.witness = s;
        out.witness_closure = cl;
        return false;
    };

    if (sp.size() <= cfg.exhaustive_limit) {
        const Mask full = sp.all();
        for (Mask s = 0;; ++s) {
            if (!check_one(s)) break;
            if (s == full) break;
        }
    } else {
        std::mt19937_64 rng(cfg.seed);
        for (int i = 0; i < cfg.sample_count; ++i) {
            Mask s = rng() & sp.all();
            if (!check_one(convex_hull(cs, s))) break;
        }
    }
    return out;
}

Mask Star::carrier() const {
    Mask m = mask_bit(center);
    for (const auto& [e, ray] : rays) m |= ray;
    return m;
}

StarReport enumerate_stars(const ConvexityStructure& cs, int center) {
    const FiniteSpace& sp = cs.space();
    const int n = sp.size();
    StarReport out;

    std::vector<int> cand;
    for (int z = 0; z < n; ++z)
        if (z != center) cand.push_back(z);

    auto compatible = [&](int a, int b) {
        return (cs.interval(center, a) & cs.interval(center, b)) == mask_bit(center);
    };

    // Maximal cliques of the compatibility graph; carriers are tiny.
    std::vector<Mask> cliques;
    auto bron = [&](auto&& self, Mask r, Mask p, Mask x) -> void {
        if (p == 0 && x == 0) {
            cliques.push_back(r);
            return;
        }
        Mask iter = p;
        mask_for_each(iter, [&](int v) {
            if (!mask_test(p, v)) return;
            Mask nb = 0;
            for (int u : cand)
                if (u != v && compatible(u, v)) nb |= mask_bit(u);
            self(self, r | mask_bit(v), p & nb, x & nb);
            p &= ~mask_bit(v);
            x |= mask_bit(v);
        });
    };
    Mask all_cand = 0;
    for (int z : cand) all_cand |= mask_bit(z);
    if (all_cand) bron(bron, 0, all_cand, 0);

    // Keep cliques whose covered subspace is maximal.
    std::vector<std::pair<Mask, Mask>> stars;  // (ends, carrier)
    for (Mask e : cliques) {
        if (e == 0) continue;
        Mask carrier = mask_bit(center);
        mask_for_each(e, [&](int z) { carrier |= cs.interval(center, z); });
        stars.emplace_back(e, carrier);
    }
    std::sort(stars.begin(), stars.end());
    stars.erase(std::unique(stars.begin(), stars.end()), stars.end());

    for (const auto& [ends, carrier] : stars) {
        bool maximal = true;
        for (const auto& [e2, c2] : stars)
            if (c2 != carrier && (carrier & ~c2) == 0) {
                maximal = false;
                break;
            }
        if (!maximal) continue;
        Star s;
        s.center = center;
        s.ends = ends;
        mask_for_each(ends, [&](int z) { s.rays[z] = cs.interval(center, z); });
        out.stars.push_back(std::move(s));
    }
    out.star_finite = true;
    return out;
}

}  // namespace ck
