#include "ck/topology.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace ck {

SpaceMap::SpaceMap(FiniteSpace source, FiniteSpace target, std::vector<int> assignment)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(assignment)) {
    if (static_cast<int>(map_.size()) != source_.size())
        throw Error("assignment is not total");
    for (int v : map_)
        if (v < 0 || v >= target_.size()) throw UnknownPoint("assignment leaves the target");
}

SpaceMap::SpaceMap(FiniteSpace source, FiniteSpace target,
                   const std::vector<std::pair<std::string, std::string>>& assignment) {
    std::vector<int> map(source.size(), -1);
    for (const auto& [a, b] : assignment) map[source.index(a)] = target.index(b);
    for (int v : map)
        if (v < 0) throw Error("assignment is not total");
    *this = SpaceMap(std::move(source), std::move(target), std::move(map));
}

Mask SpaceMap::image(Mask s) const {
    Mask out = 0;
    mask_for_each(s, [&](int i) { out |= mask_bit(map_[i]); });
    return out;
}

Mask SpaceMap::preimage(Mask t) const {
    Mask out = 0;
    for (int i = 0; i < source_.size(); ++i)
        if (mask_test(t, map_[i])) out |= mask_bit(i);
    return out;
}

Mask SpaceMap::fiber(int y) const { return preimage(mask_bit(y)); }

bool SpaceMap::continuous() const {
    for (int i = 0; i < source_.size(); ++i) {
        bool ok = true;
        mask_for_each(source_.up(i), [&](int j) {
            if (!target_.leq(map_[i], map_[j])) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

bool SpaceMap::injective() const {
    Mask seen = 0;
    for (int v : map_) {
        if (mask_test(seen, v)) return false;
        seen |= mask_bit(v);
    }
    return true;
}

namespace {

// T relatively open in S (both subsets of the target): T up-closed within S.
bool relatively_open(const FiniteSpace& y, Mask t, Mask s) {
    return (y.up_closure(t) & s) == t;
}

bool locally_open_onto_image_at(const SpaceMap& f, int x) {
    // The property passes to smaller open neighbourhoods, so the minimal
    // open neighbourhood decides it. Images commute with unions, hence it
    // suffices that images of minimal opens inside up(x) are relatively
    // open in f(up(x)).
    const Mask fu = f.image(f.source().up(x));
    bool ok = true;
    mask_for_each(f.source().up(x), [&](int v) {
        if (!relatively_open(f.target(), f.image(f.source().up(v)), fu)) ok = false;
    });
    return ok;
}

}  // namespace

MapReport classify_map(const SpaceMap& f) {
    MapReport r;
    r.continuous = f.continuous();

    r.open = true;
    r.closed = true;
    r.locally_open_onto_image = true;
    for (int i = 0; i < f.source().size(); ++i) {
        if (!f.target().is_open(f.image(f.source().up(i)))) r.open = false;
        if (!f.target().is_closed(f.image(f.source().down(i)))) r.closed = false;
        if (!locally_open_onto_image_at(f, i)) r.locally_open_onto_image = false;
    }

    r.filtered = r.continuous && r.locally_open_onto_image;
    if (r.filtered) {
        for (int i = 0; i < f.source().size() && r.filtered; ++i)
            for (int j = i + 1; j < f.source().size(); ++j)
                if (f.apply(i) == f.apply(j) &&
                    f.image(f.source().up(i)) == f.image(f.source().up(j))) {
                    r.filtered = false;
                    break;
                }
    }
    return r;
}

FilterRep pushforward_filter_at(const SpaceMap& f, int x) {
    return FilterRep{&f.target(), f.image(f.source().up(x))};
}

FilterRep pushforward_filter(const SpaceMap& f, const std::string& x) {
    return pushforward_filter_at(f, f.source().index(x));
}

Factorization factorize(const SpaceMap& f) {
    MapReport flags = classify_map(f);
    if (!flags.continuous || !flags.locally_open_onto_image)
        throw NotLocallyOpen("factorization requires a continuous map locally open onto its image");

    const FiniteSpace& X = f.source();
    const FiniteSpace& Y = f.target();

    // Classes of x -> (f(x), image of the minimal open neighbourhood).
    std::map<std::pair<int, Mask>, Mask> classes;
    for (int i = 0; i < X.size(); ++i)
        classes[{f.apply(i), f.image(X.up(i))}] |= mask_bit(i);

    // Canonical class order: by least-member identifier, which is the
    // least member index since point identifiers are sorted.
    std::vector<Mask> members;
    for (const auto& [key, m] : classes) members.push_back(m);
    std::sort(members.begin(), members.end(),
              [](Mask a, Mask b) { return mask_lowest(a) < mask_lowest(b); });
    const int k = static_cast<int>(members.size());

    std::vector<int> class_of(X.size(), -1);
    for (int c = 0; c < k; ++c)
        mask_for_each(members[c], [&](int i) { class_of[i] = c; });

    // Quotient topology: a class set is open iff its union of members is an
    // up-set. The minimal open containing class c is read off the smallest
    // saturated up-set containing its members.
    std::vector<Mask> up_q(k, 0);
    for (int c = 0; c < k; ++c) {
        Mask s = members[c];
        for (;;) {
            Mask grown = X.up_closure(s);
            for (int j = 0; j < k; ++j)
                if (grown & members[j]) grown |= members[j];
            if (grown == s) break;
            s = grown;
        }
        for (int j = 0; j < k; ++j)
            if ((members[j] & ~s) == 0) up_q[c] |= mask_bit(j);
    }

    std::vector<std::string> names;
    names.reserve(k);
    for (int c = 0; c < k; ++c) names.push_back(X.name(mask_lowest(members[c])));

    FiniteSpace midspace = FiniteSpace::from_upsets(names, up_q);

    std::vector<int> q_assign = class_of;
    std::vector<int> p_assign(k);
    for (int c = 0; c < k; ++c) p_assign[c] = f.apply(mask_lowest(members[c]));

    Factorization out;
    out.qf = SpaceMap(X, midspace, std::move(q_assign));
    out.midspace = midspace;
    out.fsharp = SpaceMap(midspace, Y, std::move(p_assign));

    // The construction guarantees these; verify rather than trust.
    MapReport qr = classify_map(out.qf);
    MapReport pr = classify_map(out.fsharp);
    if (!qr.continuous || !qr.open || !out.qf.surjective())
        throw Error("internal: quotient leg is not an open surjection");
    if (!pr.filtered) throw Error("internal: induced leg is not filtered");
    for (int i = 0; i < X.size(); ++i)
        if (out.fsharp.apply(out.qf.apply(i)) != f.apply(i))
            throw Error("internal: factorization does not compose to the map");
    return out;
}

std::vector<int> chain_cover(const FiniteSpace& space, const std::string& x,
                             const std::string& y, const std::vector<Mask>& cover) {
    const int xi = space.index(x);
    const int yi = space.index(y);
    const int m = static_cast<int>(cover.size());

    Mask covered = 0;
    for (Mask u : cover) covered |= u;
    if (covered != space.all())
        throw NotConnected("cover does not cover the space");

    std::vector<int> starts, targets;
    for (int i = 0; i < m; ++i) {
        if (mask_test(cover[i], xi)) starts.push_back(i);
        if (mask_test(cover[i], yi)) targets.push_back(i);
    }
    if (starts.empty() || targets.empty())
        throw NotConnected("endpoint not covered by any member");

    if (xi == yi) {
        for (int i = 0; i < m; ++i)
            if (mask_test(cover[i], xi)) return {i};
    }

    // Distance to the target set over the nerve (members joined when they
    // intersect), then a greedy smallest-index walk along shortest chains.
    std::vector<int> dist(m, -1);
    std::queue<int> bfs;
    for (int t : targets) {
        dist[t] = 0;
        bfs.push(t);
    }
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int v = 0; v < m; ++v)
            if (dist[v] < 0 && v != u && (cover[u] & cover[v])) {
                dist[v] = dist[u] + 1;
                bfs.push(v);
            }
    }

    int best = -1;
    for (int s : starts)
        if (dist[s] >= 0 && (best < 0 || dist[s] < dist[best] ||
                             (dist[s] == dist[best] && s < best)))
            best = s;
    if (best < 0) throw NotConnected("no chain of cover members joins the endpoints");

    std::vector<int> chain{best};
    int cur = best;
    while (dist[cur] > 0) {
        int next = -1;
        for (int v = 0; v < m; ++v)
            if (v != cur && dist[v] == dist[cur] - 1 && (cover[cur] & cover[v])) {
                next = v;
                break;
            }
        chain.push_back(next);
        cur = next;
    }
    return chain;
}

}  // namespace ck
