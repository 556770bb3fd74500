#include "polyagg/copresheaf.hpp"

#include <algorithm>
#include <functional>

namespace polyagg {

int Copresheaf::total_rows() const {
    int n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
}

void Copresheaf::validate() const {
    const FinCategory& c = *base;
    if ((int)rows.size() != c.n_objects() || (int)action.size() != c.n_morphisms())
        throw WrongShape("copresheaf tables have wrong size", "copresheaf");
    for (int f = 0; f < c.n_morphisms(); ++f)
        check_fin_function(action[f], rows[c.morphisms[f].dom].size(),
                           rows[c.morphisms[f].cod].size(), c.morphisms[f].name);
    for (int a = 0; a < c.n_objects(); ++a)
        for (int x = 0; x < rows[a].size(); ++x)
            if (action[c.identity[a]][x] != x)
                throw LawViolation("identity does not act as identity",
                                   rows[a].label(x) + " at " + c.objects.label(a));
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g) {
            if (c.morphisms[f].cod != c.morphisms[g].dom) continue;
            int fg = c.compose_table[f][g];
            for (int x = 0; x < rows[c.morphisms[f].dom].size(); ++x)
                if (action[fg][x] != action[g][action[f][x]])
                    throw LawViolation("action is not functorial",
                                       c.morphisms[f].name + ";" + c.morphisms[g].name + " on " +
                                           rows[c.morphisms[f].dom].label(x));
        }
}

Copresheaf Copresheaf::empty(const CatPtr& c) {
    Copresheaf p{c, std::vector<FinLabelSet>(c->n_objects()),
                 std::vector<std::vector<int>>(c->n_morphisms())};
    return p;
}

Copresheaf Copresheaf::constant(const CatPtr& c, const FinLabelSet& s) {
    Copresheaf p = empty(c);
    for (int a = 0; a < c->n_objects(); ++a) p.rows[a] = s;
    for (int f = 0; f < c->n_morphisms(); ++f) {
        if (c->morphisms[f].dom != c->morphisms[f].cod)
            throw WrongShape("constant copresheaf needs a discrete base", c->morphisms[f].name);
        p.action[f].resize(s.size());
        for (int x = 0; x < s.size(); ++x) p.action[f][x] = x;
    }
    return p;
}

Copresheaf Copresheaf::representable(const CatPtr& c, int a) {
    Copresheaf p = empty(c);
    // rows at b: morphisms a -> b, indexed by global morphism order
    std::vector<std::vector<int>> homs(c->n_objects());
    for (int m = 0; m < c->n_morphisms(); ++m)
        if (c->morphisms[m].dom == a) homs[c->morphisms[m].cod].push_back(m);
    std::vector<int> local(c->n_morphisms(), -1);
    for (int b = 0; b < c->n_objects(); ++b)
        for (size_t k = 0; k < homs[b].size(); ++k) {
            p.rows[b].add(c->morphisms[homs[b][k]].name);
            local[homs[b][k]] = (int)k;
        }
    for (int f = 0; f < c->n_morphisms(); ++f) {
        int b = c->morphisms[f].dom;
        for (int m : homs[b]) p.action[f].push_back(local[c->compose_table[m][f]]);
    }
    return p;
}

void check_copresheaf_hom(const Copresheaf& p, const Copresheaf& x, const CopresheafHom& h) {
    const FinCategory& c = *p.base;
    if ((int)h.at.size() != c.n_objects())
        throw WrongShape("transformation has wrong number of components", "hom");
    for (int a = 0; a < c.n_objects(); ++a)
        check_fin_function(h.at[a], p.rows[a].size(), x.rows[a].size(),
                           "component at " + c.objects.label(a));
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom, b = c.morphisms[f].cod;
        for (int r = 0; r < p.rows[a].size(); ++r)
            if (h.at[b][p.action[f][r]] != x.action[f][h.at[a][r]])
                throw LawViolation("naturality fails",
                                   c.morphisms[f].name + " on " + p.rows[a].label(r));
    }
}

CopresheafHom identity_hom(const Copresheaf& p) {
    CopresheafHom h;
    for (const auto& r : p.rows) {
        std::vector<int> id(r.size());
        for (int i = 0; i < r.size(); ++i) id[i] = i;
        h.at.push_back(std::move(id));
    }
    return h;
}

CopresheafHom compose_homs(const Copresheaf& p, const CopresheafHom& f, const CopresheafHom& g) {
    CopresheafHom h;
    for (size_t a = 0; a < f.at.size(); ++a) {
        std::vector<int> row(p.rows[a].size());
        for (int r = 0; r < (int)row.size(); ++r) row[r] = g.at[a][f.at[a][r]];
        h.at.push_back(std::move(row));
    }
    return h;
}

namespace {

// Flattened element index for backtracking.
struct Element {
    int obj, row;
};

} // namespace

std::vector<CopresheafHom> copresheaf_homs(const Copresheaf& p, const Copresheaf& x,
                                           std::uint64_t cap) {
    const FinCategory& c = *p.base;
    std::vector<Element> elems;
    std::vector<std::vector<int>> eid(c.n_objects());
    for (int a = 0; a < c.n_objects(); ++a)
        for (int r = 0; r < p.rows[a].size(); ++r) {
            eid[a].push_back((int)elems.size());
            elems.push_back({a, r});
        }
    int n = (int)elems.size();

    // Constraints: for every non-identity morphism f: a -> b and row r at a,
    // the assignment of r forces (or restricts) the assignment of f.r.
    struct Edge {
        int from, to, mor;
    };
    std::vector<std::vector<Edge>> edges(n); // indexed by either endpoint
    std::vector<int> degree(n, 0);
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom;
        if (f == c.identity[a]) continue;
        for (int r = 0; r < p.rows[a].size(); ++r) {
            Edge e{eid[a][r], eid[c.morphisms[f].cod][p.action[f][r]], f};
            edges[e.from].push_back(e);
            edges[e.to].push_back(e);
            degree[e.from]++;
            degree[e.to]++;
        }
    }

    // Variable order: most-constrained first (max degree, ties by index).
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return degree[i] > degree[j]; });

    std::vector<int> assign(n, -1);
    std::vector<CopresheafHom> out;

    std::function<void(int)> go = [&](int k) {
        if (k == n) {
            CopresheafHom h;
            h.at.resize(c.n_objects());
            for (int a = 0; a < c.n_objects(); ++a) h.at[a].resize(p.rows[a].size());
            for (int i = 0; i < n; ++i) h.at[elems[i].obj][elems[i].row] = assign[i];
            if ((std::uint64_t)out.size() >= cap)
                throw SizeBlowup("copresheaf hom enumeration exceeds cap", std::to_string(cap));
            out.push_back(std::move(h));
            return;
        }
        int v = order[k];
        int a = elems[v].obj;
        for (int val = 0; val < x.rows[a].size(); ++val) {
            bool ok = true;
            for (const Edge& e : edges[v]) {
                int from_val = (e.from == v) ? val : assign[e.from];
                int to_val = (e.to == v) ? val : assign[e.to];
                if (e.from == v && e.to == v) {
                    from_val = to_val = val;
                }
                if (from_val < 0 || to_val < 0) continue;
                if (x.action[e.mor][from_val] != to_val) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            assign[v] = val;
            go(k + 1);
            assign[v] = -1;
        }
    };
    go(0);

    // Canonical order: lexicographic on the flattened assignment.
    std::sort(out.begin(), out.end(),
              [](const CopresheafHom& l, const CopresheafHom& r) { return l.at < r.at; });
    return out;
}

bool copresheaves_isomorphic(const Copresheaf& p, const Copresheaf& q, std::uint64_t cap,
                             std::string* witness) {
    const FinCategory& c = *p.base;
    for (int a = 0; a < c.n_objects(); ++a)
        if (p.rows[a].size() != q.rows[a].size()) {
            if (witness)
                *witness = "row counts differ at " + c.objects.label(a) + ": " +
                           std::to_string(p.rows[a].size()) + " vs " +
                           std::to_string(q.rows[a].size());
            return false;
        }
    auto homs = copresheaf_homs(p, q, cap);
    for (const auto& h : homs) {
        bool bij = true;
        for (int a = 0; a < c.n_objects() && bij; ++a) {
            std::vector<bool> hit(q.rows[a].size(), false);
            for (int v : h.at[a]) {
                if (hit[v]) bij = false;
                hit[v] = true;
            }
        }
        if (bij) return true;
    }
    if (witness) *witness = "no natural transformation is objectwise bijective";
    return false;
}

bool copresheaves_equal(const Copresheaf& p, const Copresheaf& q) {
    return p.rows == q.rows && p.action == q.action && categories_equal(*p.base, *q.base);
}

Copresheaf product_copresheaf(const Copresheaf& p, const Copresheaf& q) {
    Copresheaf r = Copresheaf::empty(p.base);
    const FinCategory& c = *p.base;
    for (int a = 0; a < c.n_objects(); ++a)
        for (const auto& x : p.rows[a].labels())
            for (const auto& y : q.rows[a].labels()) r.rows[a].add("(" + x + "," + y + ")");
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom;
        int nq = q.rows[a].size();
        int nq2 = q.rows[c.morphisms[f].cod].size();
        for (int x = 0; x < p.rows[a].size(); ++x)
            for (int y = 0; y < nq; ++y)
                r.action[f].push_back(p.action[f][x] * nq2 + q.action[f][y]);
    }
    return r;
}

Copresheaf coproduct_copresheaf(const Copresheaf& p, const Copresheaf& q) {
    Copresheaf r = Copresheaf::empty(p.base);
    const FinCategory& c = *p.base;
    for (int a = 0; a < c.n_objects(); ++a) {
        for (const auto& x : p.rows[a].labels()) r.rows[a].add("l(" + x + ")");
        for (const auto& y : q.rows[a].labels()) r.rows[a].add("r(" + y + ")");
    }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int b = c.morphisms[f].cod;
        for (int v : p.action[f]) r.action[f].push_back(v);
        for (int v : q.action[f]) r.action[f].push_back(p.rows[b].size() + v);
    }
    return r;
}

} // namespace polyagg
