#include "polyagg/category.hpp"

#include <algorithm>
#include <functional>

namespace polyagg {

int FinCategory::compose(int f, int g) const {
    int h = compose_table.at(f).at(g);
    if (h < 0)
        throw WrongShape("morphisms not composable",
                         morphisms[f].name + " ; " + morphisms[g].name);
    return h;
}

int FinCategory::morphism_index(const std::string& name) const {
    for (int i = 0; i < n_morphisms(); ++i)
        if (morphisms[i].name == name) return i;
    throw ParseError("unknown morphism", name);
}

std::vector<int> FinCategory::outfacing(int a) const {
    std::vector<int> out;
    for (int f = 0; f < n_morphisms(); ++f)
        if (morphisms[f].dom == a) out.push_back(f);
    return out;
}

std::vector<int> FinCategory::infacing(int a) const {
    std::vector<int> out;
    for (int f = 0; f < n_morphisms(); ++f)
        if (morphisms[f].cod == a) out.push_back(f);
    return out;
}

void FinCategory::validate() const {
    FinLabelSet names;
    for (const auto& m : morphisms) {
        names.add(m.name); // throws on duplicates
        if (m.dom < 0 || m.dom >= n_objects() || m.cod < 0 || m.cod >= n_objects())
            throw LawViolation("morphism endpoint out of range", m.name);
    }
    if ((int)identity.size() != n_objects())
        throw LawViolation("identity assignment has wrong size");
    for (int a = 0; a < n_objects(); ++a) {
        int e = identity[a];
        if (e < 0 || e >= n_morphisms() || morphisms[e].dom != a || morphisms[e].cod != a)
            throw LawViolation("identity is not an endomorphism", objects.label(a));
    }
    if ((int)compose_table.size() != n_morphisms())
        throw LawViolation("composition table has wrong size");
    for (int f = 0; f < n_morphisms(); ++f) {
        if ((int)compose_table[f].size() != n_morphisms())
            throw LawViolation("composition table row has wrong size", morphisms[f].name);
        for (int g = 0; g < n_morphisms(); ++g) {
            int h = compose_table[f][g];
            bool composable = morphisms[f].cod == morphisms[g].dom;
            if (!composable) {
                if (h != -1)
                    throw LawViolation("composite defined for non-composable pair",
                                       morphisms[f].name + ";" + morphisms[g].name);
                continue;
            }
            if (h < 0 || h >= n_morphisms())
                throw LawViolation("composite missing or out of range",
                                   morphisms[f].name + ";" + morphisms[g].name);
            if (morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod)
                throw LawViolation("composite has wrong endpoints",
                                   morphisms[f].name + ";" + morphisms[g].name + " = " +
                                       morphisms[h].name);
        }
    }
    for (int f = 0; f < n_morphisms(); ++f) {
        if (compose_table[identity[morphisms[f].dom]][f] != f)
            throw LawViolation("left unit law fails", morphisms[f].name);
        if (compose_table[f][identity[morphisms[f].cod]] != f)
            throw LawViolation("right unit law fails", morphisms[f].name);
    }
    for (int f = 0; f < n_morphisms(); ++f)
        for (int g = 0; g < n_morphisms(); ++g) {
            if (morphisms[f].cod != morphisms[g].dom) continue;
            int fg = compose_table[f][g];
            for (int h = 0; h < n_morphisms(); ++h) {
                if (morphisms[g].cod != morphisms[h].dom) continue;
                if (compose_table[fg][h] != compose_table[f][compose_table[g][h]])
                    throw LawViolation("associativity fails", morphisms[f].name + ";" +
                                                                  morphisms[g].name + ";" +
                                                                  morphisms[h].name);
            }
        }
}

namespace {

FinCategory with_table(FinLabelSet objects, std::vector<Morphism> morphisms,
                       std::vector<int> identity,
                       const std::function<int(int, int)>& comp) {
    FinCategory c{std::move(objects), std::move(morphisms), std::move(identity), {}};
    int n = c.n_morphisms();
    c.compose_table.assign(n, std::vector<int>(n, -1));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
            if (c.morphisms[f].cod == c.morphisms[g].dom) c.compose_table[f][g] = comp(f, g);
    return c;
}

} // namespace

FinCategory discrete_category(const FinLabelSet& objects) {
    std::vector<Morphism> ms;
    std::vector<int> ids;
    for (int a = 0; a < objects.size(); ++a) {
        ms.push_back({"id_" + objects.label(a), a, a});
        ids.push_back(a);
    }
    return with_table(objects, std::move(ms), std::move(ids), [](int f, int) { return f; });
}

FinCategory terminal_category() { return discrete_category(FinLabelSet({"*"})); }

FinCategory chain_category(int n) {
    FinLabelSet obs = numbered_set("a", n);
    std::vector<Morphism> ms;
    std::vector<int> ids;
    std::vector<std::vector<int>> at(n, std::vector<int>(n, -1)); // at[i][j]: i -> j
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            at[i][j] = (int)ms.size();
            ms.push_back({i == j ? "id_a" + std::to_string(i + 1)
                                 : "a" + std::to_string(i + 1) + "->a" + std::to_string(j + 1),
                          i, j});
        }
    for (int i = 0; i < n; ++i) ids.push_back(at[i][i]);
    FinCategory c{obs, std::move(ms), std::move(ids), {}};
    int m = c.n_morphisms();
    c.compose_table.assign(m, std::vector<int>(m, -1));
    for (int f = 0; f < m; ++f)
        for (int g = 0; g < m; ++g)
            if (c.morphisms[f].cod == c.morphisms[g].dom)
                c.compose_table[f][g] = at[c.morphisms[f].dom][c.morphisms[g].cod];
    return c;
}

FinCategory monoid_category(const FinLabelSet& elements, const std::vector<std::vector<int>>& op,
                            int unit) {
    std::vector<Morphism> ms;
    for (int i = 0; i < elements.size(); ++i) ms.push_back({elements.label(i), 0, 0});
    FinCategory c{FinLabelSet({"*"}), std::move(ms), {unit}, op};
    c.validate();
    return c;
}

FinCategory codiscrete_category(const FinLabelSet& objects) {
    std::vector<Morphism> ms;
    std::vector<int> ids;
    int n = objects.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            ms.push_back({"(" + objects.label(a) + "~" + objects.label(b) + ")", a, b});
    for (int a = 0; a < n; ++a) ids.push_back(a * n + a);
    FinCategory c{objects, std::move(ms), std::move(ids), {}};
    int m = c.n_morphisms();
    c.compose_table.assign(m, std::vector<int>(m, -1));
    for (int f = 0; f < m; ++f)
        for (int g = 0; g < m; ++g)
            if (c.morphisms[f].cod == c.morphisms[g].dom)
                c.compose_table[f][g] = c.morphisms[f].dom * n + c.morphisms[g].cod;
    return c;
}

FinCategory product_category_direct(const FinCategory& c, const FinCategory& d) {
    FinLabelSet obs;
    for (const auto& a : c.objects.labels())
        for (const auto& b : d.objects.labels()) obs.add("(" + a + "," + b + ")");
    std::vector<Morphism> ms;
    int nd = d.n_morphisms();
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < nd; ++g)
            ms.push_back({"(" + c.morphisms[f].name + "," + d.morphisms[g].name + ")",
                          c.morphisms[f].dom * d.n_objects() + d.morphisms[g].dom,
                          c.morphisms[f].cod * d.n_objects() + d.morphisms[g].cod});
    std::vector<int> ids;
    for (int a = 0; a < c.n_objects(); ++a)
        for (int b = 0; b < d.n_objects(); ++b) ids.push_back(c.identity[a] * nd + d.identity[b]);
    FinCategory r{std::move(obs), std::move(ms), std::move(ids), {}};
    int m = r.n_morphisms();
    r.compose_table.assign(m, std::vector<int>(m, -1));
    for (int fg = 0; fg < m; ++fg)
        for (int fg2 = 0; fg2 < m; ++fg2) {
            if (r.morphisms[fg].cod != r.morphisms[fg2].dom) continue;
            int f = fg / nd, g = fg % nd, f2 = fg2 / nd, g2 = fg2 % nd;
            r.compose_table[fg][fg2] = c.compose_table[f][f2] * nd + d.compose_table[g][g2];
        }
    return r;
}

FinCategory opposite_direct(const FinCategory& c) {
    FinCategory r{c.objects, c.morphisms, c.identity, {}};
    for (auto& m : r.morphisms) std::swap(m.dom, m.cod);
    int n = c.n_morphisms();
    r.compose_table.assign(n, std::vector<int>(n, -1));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
            if (r.morphisms[f].cod == r.morphisms[g].dom)
                r.compose_table[f][g] = c.compose_table[g][f];
    return r;
}

bool categories_equal(const FinCategory& c, const FinCategory& d) {
    if (c.objects != d.objects || c.identity != d.identity ||
        c.compose_table != d.compose_table)
        return false;
    if (c.morphisms.size() != d.morphisms.size()) return false;
    for (size_t i = 0; i < c.morphisms.size(); ++i)
        if (c.morphisms[i].name != d.morphisms[i].name || c.morphisms[i].dom != d.morphisms[i].dom ||
            c.morphisms[i].cod != d.morphisms[i].cod)
            return false;
    return true;
}

void CatFunctor::validate() const {
    if ((int)on_objects.size() != src->n_objects() ||
        (int)on_morphisms.size() != src->n_morphisms())
        throw WrongShape("functor assignment has wrong size", "functor");
    for (int a = 0; a < src->n_objects(); ++a)
        if (on_objects[a] < 0 || on_objects[a] >= dst->n_objects())
            throw WrongShape("object image out of range", src->objects.label(a));
    for (int f = 0; f < src->n_morphisms(); ++f) {
        int g = on_morphisms[f];
        if (g < 0 || g >= dst->n_morphisms())
            throw WrongShape("morphism image out of range", src->morphisms[f].name);
        if (dst->morphisms[g].dom != on_objects[src->morphisms[f].dom] ||
            dst->morphisms[g].cod != on_objects[src->morphisms[f].cod])
            throw LawViolation("functor breaks dom/cod", src->morphisms[f].name);
    }
    for (int a = 0; a < src->n_objects(); ++a)
        if (on_morphisms[src->identity[a]] != dst->identity[on_objects[a]])
            throw LawViolation("functor breaks identities", src->objects.label(a));
    for (int f = 0; f < src->n_morphisms(); ++f)
        for (int g = 0; g < src->n_morphisms(); ++g) {
            if (src->morphisms[f].cod != src->morphisms[g].dom) continue;
            if (on_morphisms[src->compose_table[f][g]] !=
                dst->compose_table[on_morphisms[f]][on_morphisms[g]])
                throw LawViolation("functor breaks composition",
                                   src->morphisms[f].name + ";" + src->morphisms[g].name);
        }
}

CatFunctor identity_functor(const CatPtr& c) {
    CatFunctor f{c, c, {}, {}};
    for (int a = 0; a < c->n_objects(); ++a) f.on_objects.push_back(a);
    for (int m = 0; m < c->n_morphisms(); ++m) f.on_morphisms.push_back(m);
    return f;
}

CatFunctor compose_functors(const CatFunctor& f, const CatFunctor& g) {
    if (f.dst.get() != g.src.get() && !categories_equal(*f.dst, *g.src))
        throw WrongShape("functors not composable", "compose_functors");
    CatFunctor h{f.src, g.dst, {}, {}};
    for (int a : f.on_objects) h.on_objects.push_back(g.on_objects[a]);
    for (int m : f.on_morphisms) h.on_morphisms.push_back(g.on_morphisms[m]);
    return h;
}

bool is_etale(const CatFunctor& f, std::string* witness) {
    for (int a = 0; a < f.src->n_objects(); ++a) {
        auto out_src = f.src->outfacing(a);
        auto out_dst = f.dst->outfacing(f.on_objects[a]);
        if (out_src.size() != out_dst.size()) {
            if (witness)
                *witness = "outfacing counts differ at " + f.src->objects.label(a) + ": " +
                           std::to_string(out_src.size()) + " vs " + std::to_string(out_dst.size());
            return false;
        }
        std::vector<bool> hit(f.dst->n_morphisms(), false);
        for (int m : out_src) {
            int im = f.on_morphisms[m];
            if (hit[im]) {
                if (witness)
                    *witness = "two outfacing morphisms of " + f.src->objects.label(a) +
                               " map to " + f.dst->morphisms[im].name;
                return false;
            }
            hit[im] = true;
        }
    }
    return true;
}

std::vector<CatFunctor> enumerate_functors(const CatPtr& c, const CatPtr& d, std::uint64_t cap) {
    std::vector<CatFunctor> out;
    int no = c->n_objects(), nm = c->n_morphisms();

    std::vector<int> on_obj(no, -1), on_mor(nm, -1);
    // Morphism assignment order: non-identity morphisms first come first.
    std::vector<int> order;
    for (int m = 0; m < nm; ++m) order.push_back(m);

    std::function<void(int)> go_mor = [&](int k) {
        if ((std::uint64_t)out.size() > cap)
            throw SizeBlowup("functor enumeration exceeds cap", std::to_string(cap));
        if (k == nm) {
            CatFunctor f{c, d, on_obj, on_mor};
            try {
                f.validate();
            } catch (const Error&) {
                return;
            }
            out.push_back(std::move(f));
            return;
        }
        int m = order[k];
        int dom = on_obj[c->morphisms[m].dom], cod = on_obj[c->morphisms[m].cod];
        for (int im = 0; im < d->n_morphisms(); ++im) {
            if (d->morphisms[im].dom != dom || d->morphisms[im].cod != cod) continue;
            // Early pruning: identities and already-decidable composites.
            bool ok = true;
            for (int a = 0; a < no && ok; ++a)
                if (c->identity[a] == m && im != d->identity[on_obj[a]]) ok = false;
            on_mor[m] = im;
            for (int f = 0; f < nm && ok; ++f) {
                if (on_mor[f] < 0) continue;
                for (int g = 0; g < nm && ok; ++g) {
                    if (on_mor[g] < 0 || c->morphisms[f].cod != c->morphisms[g].dom) continue;
                    int fg = c->compose_table[f][g];
                    if (on_mor[fg] >= 0 &&
                        on_mor[fg] != d->compose_table[on_mor[f]][on_mor[g]])
                        ok = false;
                }
            }
            if (ok) go_mor(k + 1);
            on_mor[m] = -1;
        }
    };

    std::function<void(int)> go_obj = [&](int a) {
        if (a == no) {
            go_mor(0);
            return;
        }
        for (int b = 0; b < d->n_objects(); ++b) {
            on_obj[a] = b;
            go_obj(a + 1);
        }
        on_obj[a] = -1;
    };
    go_obj(0);
    return out;
}

} // namespace polyagg
