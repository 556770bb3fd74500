#include "polyagg/span.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace polyagg {

namespace {

bool is_discrete(const FinCategory& c) { return c.n_morphisms() == c.n_objects(); }

void require_discrete_sides(const Bicomodule& m, const std::string& where) {
    if (!is_discrete(*m.left) || !is_discrete(*m.right))
        throw WrongShape("needs discrete categories on both sides", where);
}

FinFunction iota_fn(int n) {
    FinFunction v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Copresheaf over a discrete category: just a table of rows.
Copresheaf discrete_copresheaf(const CatPtr& base, std::vector<FinLabelSet> rows) {
    Copresheaf x = Copresheaf::empty(base);
    x.rows = std::move(rows);
    for (int f = 0; f < base->n_morphisms(); ++f)
        x.action[f] = iota_fn(x.rows[base->morphisms[f].dom].size());
    return x;
}

// Bicomodule between discrete categories: positions and patterns only, all
// structure maps are identities.
Bicomodule discrete_bicomodule(const CatPtr& left, const CatPtr& right,
                               std::vector<FinLabelSet> positions,
                               std::vector<std::vector<Copresheaf>> patterns) {
    Bicomodule m{left, right, std::move(positions), std::move(patterns), {}, {}};
    for (int f = 0; f < left->n_morphisms(); ++f) {
        int a = left->morphisms[f].dom;
        m.pos_map.push_back(iota_fn(m.positions[a].size()));
        std::vector<CopresheafHom> hs;
        for (int j = 0; j < m.positions[a].size(); ++j)
            hs.push_back(identity_hom(m.patterns[a][j]));
        m.pattern_map.push_back(std::move(hs));
    }
    return m;
}

// The single object a one-row-in-total pattern lives over.
int single_row_object(const Copresheaf& pat) {
    for (int d = 0; d < (int)pat.rows.size(); ++d)
        if (pat.rows[d].size() == 1) return d;
    throw WrongShape("pattern is not a single row", "linear bicomodule");
}

} // namespace

void Span::validate() const {
    check_fin_function(to_left, apex.size(), left_set.size(), "span left leg");
    check_fin_function(to_right, apex.size(), right_set.size(), "span right leg");
}

void BridgeDiagram::validate() const {
    check_fin_function(f, E.size(), D.size(), "bridge f");
    check_fin_function(g, E.size(), B.size(), "bridge g");
    check_fin_function(h, B.size(), C.size(), "bridge h");
}

Bicomodule bridge_to_bicomodule(const BridgeDiagram& br) {
    br.validate();
    auto left = std::make_shared<FinCategory>(discrete_category(br.C));
    auto right = std::make_shared<FinCategory>(discrete_category(br.D));
    std::vector<FinLabelSet> positions(br.C.size());
    std::vector<std::vector<Copresheaf>> patterns(br.C.size());
    for (int b = 0; b < br.B.size(); ++b) {
        int a = br.h[b];
        positions[a].add(br.B.label(b));
        std::vector<FinLabelSet> rows(br.D.size());
        for (int e = 0; e < br.E.size(); ++e)
            if (br.g[e] == b) rows[br.f[e]].add(br.E.label(e));
        patterns[a].push_back(discrete_copresheaf(right, std::move(rows)));
    }
    return discrete_bicomodule(left, right, std::move(positions), std::move(patterns));
}

BridgeDiagram bicomodule_to_bridge(const Bicomodule& m) {
    require_discrete_sides(m, "bridge");
    BridgeDiagram br;
    br.C = m.left->objects;
    br.D = m.right->objects;
    for (int a = 0; a < m.left->n_objects(); ++a)
        for (int j = 0; j < m.positions[a].size(); ++j) {
            int b = br.B.size();
            br.B.add(m.positions[a].label(j));
            br.h.push_back(a);
            const Copresheaf& pat = m.patterns[a][j];
            for (int d = 0; d < m.right->n_objects(); ++d)
                for (int e = 0; e < pat.rows[d].size(); ++e) {
                    br.E.add(pat.rows[d].label(e));
                    br.f.push_back(d);
                    br.g.push_back(b);
                }
        }
    return br;
}

bool is_linear(const Bicomodule& m) {
    for (const auto& pats : m.patterns)
        for (const auto& p : pats)
            if (p.total_rows() != 1) return false;
    return true;
}

Bicomodule span_to_bicomodule(const Span& s) {
    s.validate();
    BridgeDiagram br{s.right_set, s.apex, s.apex, s.left_set,
                     s.to_right, iota_fn(s.apex.size()), s.to_left};
    return bridge_to_bicomodule(br);
}

Span bicomodule_to_span(const Bicomodule& m) {
    require_discrete_sides(m, "span");
    if (!is_linear(m)) throw WrongShape("only linear bicomodules are spans");
    Span s;
    s.left_set = m.left->objects;
    s.right_set = m.right->objects;
    for (int a = 0; a < m.left->n_objects(); ++a)
        for (int j = 0; j < m.positions[a].size(); ++j) {
            s.apex.add(m.positions[a].label(j));
            s.to_left.push_back(a);
            s.to_right.push_back(single_row_object(m.patterns[a][j]));
        }
    return s;
}

Span span_swap(const Span& s) { return Span{s.right_set, s.apex, s.left_set, s.to_right, s.to_left}; }

bool spans_equal_canonical(const Span& a, const Span& b) {
    if (a.left_set != b.left_set || a.right_set != b.right_set) return false;
    auto la = a.apex.labels(), lb = b.apex.labels();
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    if (la != lb) return false;
    for (const auto& x : la) {
        int ia = a.apex.index(x), ib = b.apex.index(x);
        if (a.to_left[ia] != b.to_left[ib] || a.to_right[ia] != b.to_right[ib]) return false;
    }
    return true;
}

Poly dualizing_object(const FinLabelSet& c, const FinLabelSet& d) {
    FinLabelSet pairs;
    for (const auto& x : c.labels())
        for (const auto& y : d.labels()) pairs.add("(" + x + "," + y + ")");
    return Poly::linear(pairs);
}

Bicomodule dual(const Bicomodule& m) {
    require_discrete_sides(m, "dual");
    int nl = m.left->n_objects(), nr = m.right->n_objects();
    std::vector<FinLabelSet> positions(nl);
    std::vector<std::vector<Copresheaf>> patterns(nl);
    // when both readings apply (one position per object, one row each), the
    // conjunctive one keeps row labels in place and makes the overlap
    // self-dual, so the involution stays exact
    if (is_linear(m) && !is_conjunctive(m)) {
        // one position per object; its pattern collects the old positions,
        // each sitting where its single pattern row sat
        for (int a = 0; a < nl; ++a) {
            positions[a].add(m.left->objects.label(a));
            std::vector<FinLabelSet> rows(nr);
            for (int d = 0; d < nr; ++d)
                for (int j = 0; j < m.positions[a].size(); ++j)
                    if (single_row_object(m.patterns[a][j]) == d)
                        rows[d].add(m.positions[a].label(j));
            patterns[a].push_back(discrete_copresheaf(m.right, std::move(rows)));
        }
    } else if (is_conjunctive(m)) {
        // one position per old pattern row, each with a one-row pattern
        for (int a = 0; a < nl; ++a) {
            const Copresheaf& pat = m.patterns[a][0];
            for (int d = 0; d < nr; ++d)
                for (int e = 0; e < pat.rows[d].size(); ++e) {
                    positions[a].add(pat.rows[d].label(e));
                    std::vector<FinLabelSet> rows(nr);
                    rows[d].add(pat.rows[d].label(e));
                    patterns[a].push_back(discrete_copresheaf(m.right, std::move(rows)));
                }
        }
    } else {
        throw NotDualizable("bicomodule is neither linear nor conjunctive");
    }
    return discrete_bicomodule(m.left, m.right, std::move(positions), std::move(patterns));
}

Bicomodule right_adjoint(const Span& s) {
    s.validate();
    auto left = std::make_shared<FinCategory>(discrete_category(s.right_set));
    auto right = std::make_shared<FinCategory>(discrete_category(s.left_set));
    std::vector<FinLabelSet> positions(s.right_set.size());
    std::vector<std::vector<Copresheaf>> patterns(s.right_set.size());
    for (int d = 0; d < s.right_set.size(); ++d) {
        positions[d].add(s.right_set.label(d));
        std::vector<FinLabelSet> rows(s.left_set.size());
        for (int x = 0; x < s.apex.size(); ++x)
            if (s.to_right[x] == d) rows[s.to_left[x]].add(s.apex.label(x));
        patterns[d].push_back(discrete_copresheaf(right, std::move(rows)));
    }
    return discrete_bicomodule(left, right, std::move(positions), std::move(patterns));
}

Span left_adjoint(const Bicomodule& n) {
    require_discrete_sides(n, "left adjoint");
    if (!is_conjunctive(n)) throw WrongShape("left adjoint needs a conjunctive bicomodule");
    Span l;
    l.left_set = n.right->objects;
    l.right_set = n.left->objects;
    for (int d = 0; d < n.right->n_objects(); ++d)
        for (int a = 0; a < n.left->n_objects(); ++a) {
            const Copresheaf& pat = n.patterns[a][0];
            for (int e = 0; e < pat.rows[d].size(); ++e) {
                l.apex.add(pat.rows[d].label(e));
                l.to_left.push_back(d);
                l.to_right.push_back(a);
            }
        }
    return l;
}

Span transpose_dual_of_right_adjoint(const Span& s) {
    return bicomodule_to_span(dual(right_adjoint(s)));
}

Span transpose_left_adjoint_of_dual(const Span& s) {
    return left_adjoint(dual(span_to_bicomodule(s)));
}

Span compose_spans(const Span& s, const Span& t) {
    if (s.right_set != t.left_set)
        throw TypeMismatch("span ends do not match", "compose_spans");
    Span r;
    r.left_set = s.left_set;
    r.right_set = t.right_set;
    for (int u = 0; u < s.apex.size(); ++u)
        for (int x = 0; x < t.apex.size(); ++x) {
            if (s.to_right[u] != t.to_left[x]) continue;
            r.apex.add("(" + s.apex.label(u) + "," + t.apex.label(x) + ")");
            r.to_left.push_back(s.to_left[u]);
            r.to_right.push_back(t.to_right[x]);
        }
    return r;
}

std::vector<FinFunction> span_maps(const Span& s, const Span& t, std::uint64_t cap) {
    if (s.left_set != t.left_set || s.right_set != t.right_set)
        throw TypeMismatch("spans are not parallel", "span_maps");
    int n = s.apex.size();
    std::vector<std::vector<int>> cand(n);
    std::uint64_t total = 1;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < t.apex.size(); ++v)
            if (t.to_left[v] == s.to_left[u] && t.to_right[v] == s.to_right[u])
                cand[u].push_back(v);
        if (__builtin_mul_overflow(total, (std::uint64_t)cand[u].size(), &total) || total > cap)
            throw SizeBlowup("too many span maps", std::to_string(cap));
    }
    std::vector<FinFunction> out;
    if (total == 0) return out;
    std::vector<int> pick(n, 0);
    while (true) {
        FinFunction f(n);
        for (int u = 0; u < n; ++u) f[u] = cand[u][pick[u]];
        out.push_back(std::move(f));
        int i = n - 1;
        while (i >= 0 && pick[i] + 1 == (int)cand[i].size()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    return out;
}

void CatSpanMonad::validate() const {
    span.validate();
    if (span.left_set != span.right_set)
        throw WrongShape("monoid span must have equal ends", "span monad");
    int n = span.apex.size(), no = span.left_set.size();
    check_fin_function(unit, no, n, "span monad unit");
    if ((int)mult.size() != n) throw WrongShape("multiplication table has wrong size");
    for (const auto& row : mult)
        if ((int)row.size() != n) throw WrongShape("multiplication table has wrong size");
    for (int o = 0; o < no; ++o)
        if (span.to_left[unit[o]] != o || span.to_right[unit[o]] != o)
            throw LawViolation("unit is not an endo-element", span.left_set.label(o));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            bool composable = span.to_right[x] == span.to_left[y];
            if ((mult[x][y] != -1) != composable)
                throw LawViolation("multiplication defined off the pullback",
                                   span.apex.label(x) + "," + span.apex.label(y));
            if (!composable) continue;
            int z = mult[x][y];
            if (span.to_left[z] != span.to_left[x] || span.to_right[z] != span.to_right[y])
                throw LawViolation("multiplication does not respect the legs",
                                   span.apex.label(x) + "," + span.apex.label(y));
        }
    for (int x = 0; x < n; ++x) {
        if (mult[x][unit[span.to_right[x]]] != x || mult[unit[span.to_left[x]]][x] != x)
            throw LawViolation("unit laws fail", span.apex.label(x));
        for (int y = 0; y < n; ++y) {
            if (span.to_right[x] != span.to_left[y]) continue;
            for (int z = 0; z < n; ++z) {
                if (span.to_right[y] != span.to_left[z]) continue;
                if (mult[mult[x][y]][z] != mult[x][mult[y][z]])
                    throw LawViolation("multiplication is not associative",
                                       span.apex.label(x) + "," + span.apex.label(y) + "," +
                                           span.apex.label(z));
            }
        }
    }
}

CatSpanMonad category_as_span_monad(const FinCategory& c) {
    CatSpanMonad m;
    m.span.left_set = c.objects;
    m.span.right_set = c.objects;
    for (const auto& f : c.morphisms) {
        m.span.apex.add(f.name);
        m.span.to_left.push_back(f.cod);
        m.span.to_right.push_back(f.dom);
    }
    m.unit = c.identity;
    int n = c.n_morphisms();
    m.mult.assign(n, std::vector<int>(n, -1));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (c.morphisms[x].dom == c.morphisms[y].cod) m.mult[x][y] = c.compose_table[y][x];
    return m;
}

FinCategory opposite_via_dual(const FinCategory& c) {
    CatSpanMonad m = category_as_span_monad(c);
    m.validate();
    // swapping the legs of the monoid span dualizes the category; the same
    // multiplication read against the swapped legs is the opposite composition
    Span d = span_swap(m.span);
    FinCategory r;
    r.objects = c.objects;
    for (int x = 0; x < d.apex.size(); ++x)
        r.morphisms.push_back({d.apex.label(x), d.to_right[x], d.to_left[x]});
    r.identity = m.unit;
    int n = d.apex.size();
    r.compose_table.assign(n, std::vector<int>(n, -1));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
            if (r.morphisms[f].cod == r.morphisms[g].dom) r.compose_table[f][g] = m.mult[f][g];
    r.validate();
    return r;
}

FinSkeleton skeleton_fin(int K, std::uint64_t cap) {
    Poly u;
    for (int n = 0; n <= K; ++n)
        u.positions.push_back({std::to_string(n), numbered_set("d", n)});
    FinSkeleton sk;
    sk.cat = opposite_via_dual(full_internal_subcategory(u, cap));
    // recover the graph of each morphism by replaying the enumeration order
    for (int i = 0; i <= K; ++i)
        for (int i2 = 0; i2 <= K; ++i2) {
            int dom = i2, cod = i;
            if (cod == 0 && dom > 0) continue;
            std::uint64_t nf = function_count(dom, cod);
            for (std::uint64_t code = 0; code < nf; ++code)
                sk.graph.push_back(decode_function(code, dom, cod));
        }
    if ((int)sk.graph.size() != sk.cat.n_morphisms())
        throw LawViolation("skeleton graph table out of step");
    for (int m = 0; m < sk.cat.n_morphisms(); ++m)
        if ((int)sk.graph[m].size() != sk.cat.morphisms[m].dom)
            throw LawViolation("skeleton graph has wrong arity", sk.cat.morphisms[m].name);
    return sk;
}

Copresheaf skeleton_generic_copresheaf(const CatPtr& skeleton_cat,
                                       const std::vector<std::vector<int>>& graph) {
    Copresheaf x = Copresheaf::empty(skeleton_cat);
    for (int a = 0; a < skeleton_cat->n_objects(); ++a) x.rows[a] = numbered_set("d", a);
    x.action = graph;
    x.validate();
    return x;
}

FinClassification classify_finitary(const Copresheaf& x, const CatPtr& skeleton_cat,
                                    const std::vector<std::vector<int>>& graph) {
    x.validate();
    int K = skeleton_cat->n_objects() - 1;
    FinClassification cls;
    cls.functor.src = x.base;
    cls.functor.dst = skeleton_cat;
    for (int a = 0; a < x.base->n_objects(); ++a) {
        int size = x.rows[a].size();
        if (size > K)
            throw RowTooLarge("row count exceeds the skeleton bound",
                              x.base->objects.label(a) + " has " + std::to_string(size));
        cls.sizes.push_back(size);
        cls.functor.on_objects.push_back(skeleton_cat->objects.index(std::to_string(size)));
    }
    for (int f = 0; f < x.base->n_morphisms(); ++f) {
        int da = cls.functor.on_objects[x.base->morphisms[f].dom];
        int ca = cls.functor.on_objects[x.base->morphisms[f].cod];
        int found = -1;
        for (int m = 0; m < skeleton_cat->n_morphisms(); ++m)
            if (skeleton_cat->morphisms[m].dom == da && skeleton_cat->morphisms[m].cod == ca &&
                graph[m] == x.action[f]) {
                found = m;
                break;
            }
        if (found < 0)
            throw LawViolation("no skeleton arrow matches an action",
                               x.base->morphisms[f].name);
        cls.functor.on_morphisms.push_back(found);
    }
    cls.functor.validate();
    return cls;
}

namespace {

// Rows of a conjunctive pattern flattened in object-major order.
struct FlatRows {
    std::vector<int> at_object;
    FinLabelSet labels;
};

FlatRows flatten(const Copresheaf& pat) {
    FlatRows fr;
    for (int c = 0; c < (int)pat.rows.size(); ++c)
        for (int r = 0; r < pat.rows[c].size(); ++r) {
            fr.at_object.push_back(c);
            fr.labels.add(pat.rows[c].label(r));
        }
    return fr;
}

// All object-fibrewise maps from the rows of q into the rows of p, in
// odometer order, each reported as a choice of p-flat-index per q-flat-index.
void fibrewise_maps(const FlatRows& p, const FlatRows& q, std::uint64_t cap,
                    const std::function<void(const std::vector<int>&)>& emit) {
    int n = (int)q.at_object.size();
    std::vector<std::vector<int>> cand(n);
    std::uint64_t total = 1;
    for (int e = 0; e < n; ++e) {
        for (int i = 0; i < (int)p.at_object.size(); ++i)
            if (p.at_object[i] == q.at_object[e]) cand[e].push_back(i);
        if (__builtin_mul_overflow(total, (std::uint64_t)cand[e].size(), &total) || total > cap)
            throw SizeBlowup("too many fibrewise maps", std::to_string(cap));
    }
    if (total == 0) return;
    std::vector<int> pick(n, 0), choice(n);
    while (true) {
        for (int e = 0; e < n; ++e) choice[e] = cand[e][pick[e]];
        emit(choice);
        int i = n - 1;
        while (i >= 0 && pick[i] + 1 == (int)cand[i].size()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
}

std::string hom_row_label(const std::string& a, const std::string& b, const FlatRows& pa,
                          const std::vector<int>& choice) {
    std::string s = "(" + a + "|" + b + "|";
    for (size_t e = 0; e < choice.size(); ++e) {
        if (e) s += ",";
        s += pa.labels.label(choice[e]);
    }
    return s + ")";
}

} // namespace

Bicomodule coclosure_conjunctive(const Bicomodule& p, const Bicomodule& q, std::uint64_t cap) {
    require_discrete_sides(p, "coclosure");
    require_discrete_sides(q, "coclosure");
    if (!is_conjunctive(p) || !is_conjunctive(q))
        throw WrongShape("coclosure needs conjunctive bicomodules");
    if (p.right->objects != q.right->objects)
        throw TypeMismatch("coclosure needs a common base of patterns");
    int na = p.left->n_objects(), nb = q.left->n_objects();
    std::vector<FinLabelSet> positions(na);
    std::vector<std::vector<Copresheaf>> patterns(na);
    for (int a = 0; a < na; ++a) {
        positions[a].add(p.positions[a].label(0));
        FlatRows pa = flatten(p.patterns[a][0]);
        std::vector<FinLabelSet> rows(nb);
        for (int b = 0; b < nb; ++b) {
            FlatRows qb = flatten(q.patterns[b][0]);
            fibrewise_maps(pa, qb, cap, [&](const std::vector<int>& choice) {
                rows[b].add(hom_row_label(p.left->objects.label(a), q.left->objects.label(b), pa,
                                          choice));
            });
        }
        patterns[a].push_back(discrete_copresheaf(q.left, std::move(rows)));
    }
    return discrete_bicomodule(p.left, q.left, std::move(positions), std::move(patterns));
}

SpanClosure span_left_closure(const Span& x, const Span& y) {
    x.validate();
    y.validate();
    if (x.right_set != y.right_set)
        throw TypeMismatch("spans must share their right end", "span_left_closure");
    Bicomodule p = dual(span_to_bicomodule(y)); // conjunctive over (A, C)
    Bicomodule q = dual(span_to_bicomodule(x)); // conjunctive over (B, C)
    SpanClosure out;
    out.hom = bicomodule_to_span(dual(coclosure_conjunctive(p, q)));

    // rebuild the assignment behind each apex element, in the same canonical
    // order, and cross-check against the labels obtained through the duals
    int t = 0;
    for (int a = 0; a < y.left_set.size(); ++a) {
        FlatRows pa = flatten(p.patterns[a][0]);
        for (int b = 0; b < x.left_set.size(); ++b) {
            FlatRows qb = flatten(q.patterns[b][0]);
            fibrewise_maps(pa, qb, 100000, [&](const std::vector<int>& choice) {
                if (out.hom.apex.label(t) !=
                    hom_row_label(y.left_set.label(a), x.left_set.label(b), pa, choice))
                    throw LawViolation("closure routes disagree", out.hom.apex.label(t));
                out.at_left.push_back(a);
                out.at_right.push_back(b);
                FinFunction asg(x.apex.size(), -1);
                for (size_t e = 0; e < choice.size(); ++e)
                    asg[x.apex.index(qb.labels.label((int)e))] =
                        y.apex.index(pa.labels.label(choice[e]));
                out.assignment.push_back(std::move(asg));
                ++t;
            });
        }
    }
    if (t != out.hom.apex.size()) throw LawViolation("closure routes disagree on size");

    // evaluation on the composite (hom . x), in compose_spans pair order
    for (int u = 0; u < out.hom.apex.size(); ++u)
        for (int xi = 0; xi < x.apex.size(); ++xi) {
            if (out.hom.to_right[u] != x.to_left[xi]) continue;
            out.eval.push_back(out.assignment[u][xi]);
        }
    return out;
}

} // namespace polyagg
