#include "polyagg/laws.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "polyagg/generators.hpp"

namespace polyagg {

namespace {

// ----------------------------------------------------------------------
// independent oracles

// Counts maps p -> q by materializing and validating every single one,
// independently of the closed-form product in hom_count.
std::uint64_t brute_hom_count(const Poly& p, const Poly& q, std::uint64_t cap) {
    std::uint64_t count = 0;
    std::vector<int> on_pos(p.size(), 0);
    std::vector<std::vector<int>> on_dirs(p.size());
    std::function<void(int)> rec = [&](int i) {
        if (i == p.size()) {
            PolyMap f{p, q, on_pos, on_dirs};
            f.validate();
            if (++count > cap) throw SizeBlowup("brute-force map count exceeded cap");
            return;
        }
        for (int j = 0; j < q.size(); ++j) {
            int sd = p.dir_count(i), td = q.dir_count(j);
            if (td > 0 && sd == 0) continue;
            on_pos[i] = j;
            std::vector<int> g(td, 0);
            while (true) {
                on_dirs[i] = g;
                rec(i + 1);
                int k = td - 1;
                while (k >= 0 && g[k] == sd - 1) g[k--] = 0;
                if (k < 0) break;
                ++g[k];
            }
        }
    };
    rec(0);
    return count;
}

// Predicted |p(X)| without materializing the element set.
std::uint64_t eval_size(const Poly& p, std::uint64_t n_x) {
    std::uint64_t total = 0;
    for (int i = 0; i < p.size(); ++i) total += checked_pow(n_x, p.dir_count(i));
    return total;
}

// ----------------------------------------------------------------------
// reporting plumbing

struct CaseContext {
    LawSuiteReport* report;
    int index;
    std::uint64_t seed;

    void fail(std::string witness) {
        report->failures.push_back({index, seed, std::move(witness)});
    }
    void check(bool ok, const std::string& witness) {
        if (!ok) fail(witness);
    }
    void merge(const LawReport& r, const std::string& where) {
        for (const auto& v : r.violations) fail(where + ": " + v);
    }
};

using CaseFn = std::function<void(Rng&, CaseContext&, std::uint64_t cap)>;

// ----------------------------------------------------------------------
// shared fixtures

// 3-chain payroll example: employees -> departments -> colleges with an
// integer salary per employee.
Schema payroll_schema() {
    Schema s;
    s.category = std::make_shared<FinCategory>(chain_category(3));
    s.monoids = {int_sum_monoid(), trivial_monoid(), trivial_monoid()};
    s.validate();
    return s;
}

Instance payroll_instance(const Schema& s) {
    Instance inst;
    inst.data = Copresheaf::empty(s.category);
    inst.data.rows[0] = FinLabelSet({"e1", "e2", "e3", "e4"});
    inst.data.rows[1] = FinLabelSet({"d1", "d2", "d3"});
    inst.data.rows[2] = FinLabelSet({"c1", "c2"});
    auto& c = *s.category;
    for (int f = 0; f < c.n_morphisms(); ++f) {
        auto& m = c.morphisms[f];
        if (m.dom == m.cod) {
            inst.data.action[f].resize(inst.data.rows[m.dom].size());
            std::iota(inst.data.action[f].begin(), inst.data.action[f].end(), 0);
        }
    }
    inst.data.action[c.morphism_index("a1->a2")] = {0, 0, 1, 1};
    inst.data.action[c.morphism_index("a2->a3")] = {0, 0, 1};
    inst.data.action[c.morphism_index("a1->a3")] = {0, 0, 0, 0};
    inst.data.validate();
    inst.attributes = {{10LL, 20LL, 5LL, 7LL},
                       std::vector<MonoidValue>(3, std::monostate{}),
                       std::vector<MonoidValue>(2, std::monostate{})};
    validate_instance(s, inst);
    return inst;
}

// The cospan category city -> state <- county.
CatPtr cities_category() {
    FinCategory d;
    d.objects = FinLabelSet({"city", "state", "county"});
    d.morphisms = {{"id_city", 0, 0},
                   {"id_state", 1, 1},
                   {"id_county", 2, 2},
                   {"city_state", 0, 1},
                   {"county_state", 2, 1}};
    d.identity = {0, 1, 2};
    d.compose_table.assign(5, std::vector<int>(5, -1));
    auto set = [&](const char* f, const char* g, const char* h) {
        d.compose_table[d.morphism_index(f)][d.morphism_index(g)] = d.morphism_index(h);
    };
    set("id_city", "id_city", "id_city");
    set("id_state", "id_state", "id_state");
    set("id_county", "id_county", "id_county");
    set("id_city", "city_state", "city_state");
    set("city_state", "id_state", "city_state");
    set("id_county", "county_state", "county_state");
    set("county_state", "id_state", "county_state");
    d.validate();
    return std::make_shared<FinCategory>(std::move(d));
}

// Duc-query over the cities cospan: pairs of cities in a common state,
// plus every city, plus every state.
DucQuery cities_query(const CatPtr& d) {
    auto pattern = [&](std::vector<std::string> city, std::vector<std::string> state,
                       std::vector<std::string> county, FinFunction cs) {
        Copresheaf p = Copresheaf::empty(d);
        p.rows[0] = FinLabelSet(std::move(city));
        p.rows[1] = FinLabelSet(std::move(state));
        p.rows[2] = FinLabelSet(std::move(county));
        for (int f = 0; f < d->n_morphisms(); ++f) {
            auto& m = d->morphisms[f];
            if (m.dom == m.cod) {
                p.action[f].resize(p.rows[m.dom].size());
                std::iota(p.action[f].begin(), p.action[f].end(), 0);
            }
        }
        p.action[d->morphism_index("city_state")] = std::move(cs);
        p.action[d->morphism_index("county_state")] = {};
        p.validate();
        return p;
    };
    DucQuery q;
    q.patterns.push_back(pattern({"city1", "city2"}, {"state"}, {}, {0, 0}));
    q.patterns.push_back(pattern({"city"}, {"state"}, {}, {0}));
    q.patterns.push_back(pattern({}, {"state"}, {}, {}));
    q.names = FinLabelSet({"city_pairs", "cities", "states"});
    return q;
}

Copresheaf random_cities_instance(Rng& rng, const CatPtr& d) {
    Copresheaf x = Copresheaf::empty(d);
    int n_state = pick(rng, 1, 6);
    x.rows[0] = numbered_set("c", pick(rng, 0, 6));
    x.rows[1] = numbered_set("s", n_state);
    x.rows[2] = numbered_set("k", pick(rng, 0, 6));
    for (int f = 0; f < d->n_morphisms(); ++f) {
        auto& m = d->morphisms[f];
        if (m.dom == m.cod) {
            x.action[f].resize(x.rows[m.dom].size());
            std::iota(x.action[f].begin(), x.action[f].end(), 0);
        }
    }
    for (int r = 0; r < x.rows[0].size(); ++r)
        x.action[d->morphism_index("city_state")].push_back(pick(rng, 0, n_state - 1));
    for (int r = 0; r < x.rows[2].size(); ++r)
        x.action[d->morphism_index("county_state")].push_back(pick(rng, 0, n_state - 1));
    x.validate();
    return x;
}

// fingerprints shared by the duality suite (complete invariants for
// bicomodules between discrete categories)
std::vector<std::pair<std::string, std::string>> span_fingerprint(const Span& s) {
    std::vector<std::pair<std::string, std::string>> fp;
    for (int x = 0; x < s.apex.size(); ++x)
        fp.emplace_back(s.left_set.label(s.to_left[x]), s.right_set.label(s.to_right[x]));
    std::sort(fp.begin(), fp.end());
    return fp;
}

std::vector<std::vector<int>> conj_fingerprint(const Bicomodule& m) {
    std::vector<std::vector<int>> fp;
    for (int a = 0; a < m.left->n_objects(); ++a) {
        std::vector<int> row;
        for (const auto& r : m.patterns[a][0].rows) row.push_back(r.size());
        fp.push_back(std::move(row));
    }
    return fp;
}

// retry budget for size-capped random generation
constexpr int kAttempts = 60;

// ----------------------------------------------------------------------
// the suites

void suite_poly_monoidal(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    Poly p, q;
    for (int a = 0;; ++a) {
        p = random_poly(rng, 4, 4);
        q = random_poly(rng, 4, 4);
        try {
            bool feasible = hom_count(p, q) <= 20000;
            for (std::uint64_t n = 0; feasible && n <= 3; ++n)
                feasible = eval_size(q, n) <= 400 && eval_size(p, eval_size(q, n)) <= 50000;
            if (feasible) break;
        } catch (const SizeBlowup&) {
        }
        if (a >= kAttempts) {
            cx.fail("could not draw a pair within the enumeration caps");
            return;
        }
    }
    std::string pair = poly_to_string(p) + " , " + poly_to_string(q);
    cx.check(hom_count(p, q) == brute_hom_count(p, q, 30000),
             "hom_count disagrees with map-by-map enumeration at " + pair);
    Poly pq = substitute(p, q);
    for (int n = 0; n <= 3; ++n) {
        FinLabelSet x = numbered_set("s", n);
        std::uint64_t lhs = evaluate(pq, x).size();
        std::uint64_t rhs = evaluate(p, evaluate(q, x)).size();
        cx.check(lhs == rhs, "substitution evaluation mismatch at " + pair + " with |X|=" +
                                 std::to_string(n) + ": " + std::to_string(lhs) +
                                 " != " + std::to_string(rhs));
    }
    // substitution unit isomorphisms
    subst_left_unit(p).validate();
    subst_right_unit(p).validate();
    cx.check(poly_iso(substitute(p, Poly::y()), p), "p . y is not isomorphic to p at " + pair);
    cx.check(poly_iso(substitute(Poly::y(), p), p), "y . p is not isomorphic to p at " + pair);
}

void suite_poly_adjunctions(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    Poly p, q, r, p2;
    std::uint64_t lhs = 0, rhs = 0;
    for (int a = 0;; ++a) {
        p = random_poly(rng, 3, 3);
        q = random_poly(rng, 3, 3);
        r = random_poly(rng, 3, 3);
        p2 = random_poly(rng, 3, 3);
        try {
            if (hom_count(q, r) <= 3000) {
                lhs = hom_count(dirichlet(p, q), r);
                rhs = hom_count(p, internal_hom(q, r, cap));
                break;
            }
        } catch (const SizeBlowup&) {
        }
        if (a >= kAttempts) {
            cx.fail("could not draw a triple within the enumeration caps");
            return;
        }
    }
    std::string triple =
        poly_to_string(p) + " , " + poly_to_string(q) + " , " + poly_to_string(r);
    cx.check(lhs == rhs, "tensor-hom adjunction count mismatch at " + triple + ": " +
                             std::to_string(lhs) + " != " + std::to_string(rhs));
    try {
        std::uint64_t cl = hom_count(p, substitute(p2, q));
        std::uint64_t cr = hom_count(coclosure(p, q), p2);
        cx.check(cl == cr, "coclosure adjunction count mismatch at " + poly_to_string(p) + " , " +
                               poly_to_string(q) + " , " + poly_to_string(p2) + ": " +
                               std::to_string(cl) + " != " + std::to_string(cr));
    } catch (const SizeBlowup&) {
        // counts past uint64 carry no information either way; skip quietly
    }
}

bool mutation_caught(const FinCategory& mutant) {
    try {
        return !check_comonoid_laws(category_to_comonoid(mutant)).ok;
    } catch (const Error&) {
        return true; // already unbuildable as a comonoid
    }
}

void suite_category_roundtrip(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    CatPtr c = random_category(rng, 6, 40);
    Comonoid m = category_to_comonoid(*c);
    cx.merge(check_comonoid_laws(m), "lawful category flagged");
    std::string witness;
    cx.check(categories_isomorphic_by_names(*c, comonoid_to_category(m), &witness),
             "category -> comonoid -> category loses structure: " + witness);
    if (c->n_morphisms() >= 2)
        cx.check(mutation_caught(mutate_one_composite(rng, *c)),
                 "law-breaking composition mutation went undetected");
}

void suite_compositionality(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    for (int a = 0;; ++a) {
        try {
            CatPtr c = random_category(rng, 4, 16);
            CatPtr e = random_category(rng, 3, 12);
            CatPtr d = random_category(rng, 3, 12);
            Bicomodule m = random_bicomodule(rng, c, e, 1);
            Bicomodule n = random_bicomodule(rng, e, d, 1);
            Copresheaf x = random_copresheaf(rng, d, 2);
            Copresheaf lhs = apply(compose_bicomodules(m, n, cap), x, cap);
            Copresheaf rhs = apply(m, apply(n, x, cap), cap);
            std::string witness;
            cx.check(copresheaves_isomorphic(lhs, rhs, cap, &witness),
                     "apply(compose(m,n)) differs from apply(m, apply(n)): " + witness);
            return;
        } catch (const SizeBlowup&) {
            if (a >= kAttempts) {
                cx.fail("could not draw a composable triple within the enumeration caps");
                return;
            }
        }
    }
}

void suite_query_oracle(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    CatPtr d = cities_category();
    DucQuery q = cities_query(d);
    Copresheaf x = random_cities_instance(rng, d);
    const FinFunction& cs = x.action[d->morphism_index("city_state")];

    std::vector<std::vector<std::string>> oracle;
    for (int a = 0; a < x.rows[0].size(); ++a)
        for (int b = 0; b < x.rows[0].size(); ++b)
            if (cs[a] == cs[b])
                oracle.push_back({"city_pairs", x.rows[0].label(a), x.rows[0].label(b),
                                  x.rows[1].label(cs[a])});
    for (int a = 0; a < x.rows[0].size(); ++a)
        oracle.push_back({"cities", x.rows[0].label(a), x.rows[1].label(cs[a])});
    for (int s = 0; s < x.rows[1].size(); ++s) oracle.push_back({"states", x.rows[1].label(s)});

    std::vector<std::vector<std::string>> engine;
    for (size_t k = 0; k < q.patterns.size(); ++k)
        for (const CopresheafHom& h : copresheaf_homs(q.patterns[k], x, cap)) {
            std::vector<std::string> row{q.names.label((int)k)};
            for (int obj : {0, 1}) // cities first, then the state, as the oracle lists them
                for (int r = 0; r < q.patterns[k].rows[obj].size(); ++r)
                    row.push_back(x.rows[obj].label(h.at[obj][r]));
            engine.push_back(std::move(row));
        }

    std::sort(oracle.begin(), oracle.end());
    std::sort(engine.begin(), engine.end());
    cx.check(oracle == engine,
             "duc-query result differs from nested-loop evaluation (engine " +
                 std::to_string(engine.size()) + " rows, oracle " +
                 std::to_string(oracle.size()) + " rows)");
}

void suite_migration_adjunctions(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    for (int a = 0;; ++a) {
        try {
            CatPtr c = random_category(rng, 4, 16);
            CatPtr d = random_category(rng, 4, 16);
            CatFunctor f = random_functor(rng, c, d);
            Copresheaf x = random_copresheaf(rng, d, 2);
            Copresheaf y = random_copresheaf(rng, c, 2);
            std::uint64_t lhs = copresheaf_homs(migrate_delta(f, x), y, cap).size();
            std::uint64_t rhs = copresheaf_homs(x, migrate_pi(f, y), cap).size();
            cx.check(lhs == rhs, "delta -| pi hom counts differ: " + std::to_string(lhs) +
                                     " != " + std::to_string(rhs));
            break;
        } catch (const SizeBlowup&) {
            if (a >= kAttempts) {
                cx.fail("could not draw a delta/pi case within the enumeration caps");
                return;
            }
        }
    }
    for (int a = 0;; ++a) {
        try {
            CatPtr base = random_category(rng, 3, 12);
            Copresheaf x0 = random_copresheaf(rng, base, 2);
            if (x0.total_rows() == 0) continue;
            CatPtr el = std::make_shared<FinCategory>(category_of_elements(x0));
            CatFunctor proj = elements_projection(x0, el);
            std::string why;
            if (!is_etale(proj, &why)) {
                cx.fail("element projection is not etale: " + why);
                return;
            }
            Copresheaf y = random_copresheaf(rng, el, 2);
            Copresheaf x = random_copresheaf(rng, base, 2);
            std::uint64_t lhs = copresheaf_homs(migrate_sigma(proj, y), x, cap).size();
            std::uint64_t rhs = copresheaf_homs(y, migrate_delta(proj, x), cap).size();
            cx.check(lhs == rhs, "sigma -| delta hom counts differ: " + std::to_string(lhs) +
                                     " != " + std::to_string(rhs));
            return;
        } catch (const SizeBlowup&) {
            if (a >= kAttempts) {
                cx.fail("could not draw a sigma/delta case within the enumeration caps");
                return;
            }
        }
    }
}

bool spans_equal_strict(const Span& a, const Span& b) {
    return a.left_set == b.left_set && a.right_set == b.right_set && a.apex == b.apex &&
           a.to_left == b.to_left && a.to_right == b.to_right;
}

// reorder the apex into the canonical fibrewise order on which duality is
// involutive on the nose
Span sort_apex(const Span& s) {
    std::vector<int> order(s.apex.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return std::pair(s.to_left[x], s.to_right[x]) < std::pair(s.to_left[y], s.to_right[y]);
    });
    Span out;
    out.left_set = s.left_set;
    out.right_set = s.right_set;
    for (int x : order) {
        out.apex.add(s.apex.label(x));
        out.to_left.push_back(s.to_left[x]);
        out.to_right.push_back(s.to_right[x]);
    }
    return out;
}

void suite_span_duality(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    Span raw = random_span(rng);
    Span s = sort_apex(raw);
    Bicomodule lin = span_to_bicomodule(s);
    cx.check(bicomodules_equal(dual(dual(lin)), lin), "dual is not involutive on a span");
    // with an arbitrary apex order the involution holds up to apex bijection
    cx.check(spans_equal_canonical(bicomodule_to_span(dual(dual(span_to_bicomodule(raw)))), raw),
             "dual involution changed a span's fibres");
    Bicomodule conj = random_conjunctive(rng);
    if (is_linear(conj)) // degenerate overlap: duality uses the span reading
        cx.check(conj_fingerprint(dual(dual(conj))) == conj_fingerprint(conj),
                 "dual is not involutive on a one-row-per-object bicomodule");
    else
        cx.check(bicomodules_equal(dual(dual(conj)), conj),
                 "dual is not involutive on a conjunctive bicomodule");

    Span swapped = span_swap(s);
    Span t1 = transpose_dual_of_right_adjoint(s);
    Span t2 = transpose_left_adjoint_of_dual(s);
    cx.check(spans_equal_strict(t1, t2), "the two transpose routes disagree");
    cx.check(spans_equal_canonical(t1, swapped),
             "transpose via dual-of-right-adjoint is not the leg swap");
    cx.check(spans_equal_canonical(t2, swapped),
             "transpose via left-adjoint-of-dual is not the leg swap");
    cx.check(spans_equal_canonical(transpose_dual_of_right_adjoint(t1), s),
             "transposing twice does not come back");

    // composite span against both bicomodule composition orders of the duals
    Span t;
    t.left_set = s.right_set;
    t.right_set = numbered_set("e", pick(rng, 1, 4));
    t.apex = numbered_set("z", pick(rng, 0, 6));
    for (int z = 0; z < t.apex.size(); ++z) {
        t.to_left.push_back(pick(rng, 0, t.left_set.size() - 1));
        t.to_right.push_back(pick(rng, 0, t.right_set.size() - 1));
    }
    Span st = compose_spans(s, t);
    Bicomodule composed = compose_bicomodules(span_to_bicomodule(s), span_to_bicomodule(t));
    cx.check(span_fingerprint(bicomodule_to_span(composed)) == span_fingerprint(st),
             "bicomodule composition disagrees with the span pullback");
    Bicomodule dd = compose_bicomodules(dual(span_to_bicomodule(s)), dual(span_to_bicomodule(t)));
    cx.check(conj_fingerprint(dd) == conj_fingerprint(dual(span_to_bicomodule(st))),
             "dual of the composite differs from the composite of the duals");
}

void suite_fin_skeleton(Rng&, CaseContext& cx, std::uint64_t cap) {
    FinSkeleton sk = skeleton_fin(4, cap * 10);
    sk.cat.validate(); // associativity and units, exhaustively
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            std::uint64_t want = checked_pow(n, m);
            std::uint64_t got = 0;
            for (const auto& mor : sk.cat.morphisms)
                if (sk.cat.objects.label(mor.dom) == std::to_string(m) &&
                    sk.cat.objects.label(mor.cod) == std::to_string(n))
                    ++got;
            cx.check(got == want, "|hom(" + std::to_string(m) + "," + std::to_string(n) +
                                      ")| = " + std::to_string(got) + ", expected " +
                                      std::to_string(want));
        }
    for (int f = 0; f < sk.cat.n_morphisms(); ++f) {
        const auto& g = sk.graph[f];
        cx.check((int)g.size() == std::stoi(sk.cat.objects.label(sk.cat.morphisms[f].dom)),
                 "graph arity mismatch at " + sk.cat.morphisms[f].name);
        for (int v : g)
            cx.check(v >= 0 && v < std::stoi(sk.cat.objects.label(sk.cat.morphisms[f].cod)),
                     "graph value out of range at " + sk.cat.morphisms[f].name);
    }
    for (int n = 0; n <= 4; ++n) {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        cx.check(sk.graph[sk.cat.identity[sk.cat.objects.index(std::to_string(n))]] == id,
                 "identity of " + std::to_string(n) + " is not the identity function");
    }
    Poly u;
    for (int n = 0; n <= 4; ++n) u.positions.push_back({std::to_string(n), numbered_set("d", n)});
    cx.check(categories_equal(sk.cat, opposite_direct(full_internal_subcategory(u, cap * 10))),
             "skeleton differs from the opposite of the full internal subcategory");
}

void suite_finitary_classification(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    static const FinSkeleton sk = skeleton_fin(4);
    static const CatPtr sk_cat = std::make_shared<FinCategory>(sk.cat);
    for (int a = 0;; ++a) {
        CatPtr c = random_category(rng, 4, 16);
        Copresheaf x = random_copresheaf(rng, c, 2);
        bool small = true;
        for (const auto& r : x.rows) small = small && r.size() <= 4;
        if (!small) {
            if (a >= kAttempts) {
                cx.fail("could not draw an instance with rows within the truncation");
                return;
            }
            continue;
        }
        FinClassification cls = classify_finitary(x, sk_cat, sk.graph);
        cls.functor.validate();
        for (int o = 0; o < c->n_objects(); ++o)
            cx.check(cls.sizes[o] == x.rows[o].size(),
                     "classified size differs from the row count at object " +
                         c->objects.label(o));
        Copresheaf generic = skeleton_generic_copresheaf(sk_cat, sk.graph);
        std::string witness;
        cx.check(copresheaves_isomorphic(migrate_delta(cls.functor, generic), x, cap, &witness),
                 "pullback of the generic rows does not recover the instance: " + witness);
        return;
    }
}

void suite_aggregation_coherence(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    if (cx.index == 0) {
        // the worked two-step example: per-department sums refold to
        // per-college sums
        Schema s = payroll_schema();
        Instance inst = payroll_instance(s);
        const FinCategory& c = *s.category;
        int w = c.morphism_index("a1->a2"), p = c.morphism_index("a2->a3"),
            wp = c.morphism_index("a1->a3");
        std::vector<MonoidValue> per_dept = aggregate_along(s, inst, w);
        cx.check(per_dept == std::vector<MonoidValue>{30LL, 12LL, 0LL},
                 "per-department totals are wrong");
        std::vector<MonoidValue> direct = aggregate_along(s, inst, wp);
        std::vector<MonoidValue> refold =
            module_action(s.monoids[0], inst.data.action[p], inst.data.rows[2].size(), per_dept);
        cx.check(direct == std::vector<MonoidValue>{42LL, 0LL}, "per-college totals are wrong");
        cx.check(direct == refold, "two-step aggregation differs from the one-step composite");
    }
    CatPtr c = random_category(rng, 4, 20);
    Schema s = random_schema(rng, c);
    Instance inst = random_instance(rng, s);
    cx.merge(pi_comonad_check(s, inst), "aggregate family laws");
}

void suite_monoid_module(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    if (cx.index == 0) {
        cx.merge(monoid_as_fin_module(int_sum_monoid(), 3), "int-sum module");
        return;
    }
    // a random commutative 4-element table monoid: a known table with its
    // elements shuffled
    std::vector<std::vector<int>> tables[] = {
        {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}, // Klein four-group
        {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}}, // Z/4
        {{0, 1, 2, 3}, {1, 1, 2, 3}, {2, 2, 2, 3}, {3, 3, 3, 3}}, // max on a 4-chain
    };
    const auto& base = tables[pick(rng, 0, 2)];
    std::vector<int> phi = {0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(phi[i], phi[pick(rng, 0, i)]);
    std::vector<int> inv(4);
    for (int i = 0; i < 4; ++i) inv[phi[i]] = i;
    std::vector<std::vector<int>> op(4, std::vector<int>(4));
    int unit = -1;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) op[i][j] = inv[base[phi[i]][phi[j]]];
    for (int i = 0; i < 4; ++i)
        if (phi[i] == 0) unit = i;
    CommMonoid m = table_monoid(numbered_set("m", 4), op, unit);
    m.validate();
    cx.merge(monoid_as_fin_module(m, 3), "table-monoid module");
}

void suite_mutation_sanity(Rng& rng, CaseContext& cx, std::uint64_t cap) {
    (void)cap;
    if (cx.index == 0) {
        // a planted violation must come back as a failure with a witness
        FinCategory broken = chain_category(3);
        broken.compose_table[broken.morphism_index("a1->a2")]
                            [broken.morphism_index("a2->a3")] =
            broken.morphism_index("a1->a2");
        bool flagged = false;
        try {
            LawReport r = check_comonoid_laws(category_to_comonoid(broken));
            flagged = !r.ok && !r.violations.empty() && !r.violations.front().empty();
        } catch (const Error& e) {
            flagged = !std::string(e.what()).empty();
        }
        cx.check(flagged, "a planted broken composite produced no witnessed failure");
    }
    CatPtr c;
    for (int a = 0; a < kAttempts; ++a) {
        c = random_category(rng, 6, 40);
        if (c->n_morphisms() >= 2) break;
    }
    if (c->n_morphisms() < 2) {
        cx.fail("could not draw a mutable category");
        return;
    }
    cx.check(mutation_caught(mutate_one_composite(rng, *c)),
             "a law-breaking composition mutation went undetected");
}

struct SuiteEntry {
    const char* name;
    CaseFn fn;
    bool single_case; // deterministic suites run exactly once
};

const std::vector<SuiteEntry>& suites() {
    static const std::vector<SuiteEntry> table = {
        {"poly-monoidal", suite_poly_monoidal, false},
        {"poly-adjunctions", suite_poly_adjunctions, false},
        {"category-roundtrip", suite_category_roundtrip, false},
        {"compositionality", suite_compositionality, false},
        {"query-oracle", suite_query_oracle, false},
        {"migration-adjunctions", suite_migration_adjunctions, false},
        {"span-duality", suite_span_duality, false},
        {"fin-skeleton", suite_fin_skeleton, true},
        {"finitary-classification", suite_finitary_classification, false},
        {"aggregation-coherence", suite_aggregation_coherence, false},
        {"monoid-module", suite_monoid_module, false},
        {"mutation-sanity", suite_mutation_sanity, false},
    };
    return table;
}

} // namespace

std::vector<std::string> law_suite_names() {
    std::vector<std::string> names;
    for (const auto& s : suites()) names.push_back(s.name);
    return names;
}

LawSuiteReport run_suite(const std::string& name, std::uint64_t seed, int n_cases,
                         std::uint64_t cap) {
    const SuiteEntry* entry = nullptr;
    for (const auto& s : suites())
        if (name == s.name) entry = &s;
    if (!entry) throw UnknownSuite("no law suite named", name);

    LawSuiteReport report;
    report.suite = name;
    auto start = std::chrono::steady_clock::now();
    int total = entry->single_case ? 1 : n_cases;
    for (int i = 0; i < total; ++i) {
        std::uint64_t case_seed = seed + 0x9e3779b97f4a7c15ULL * (std::uint64_t)(i + 1);
        Rng rng(case_seed);
        CaseContext cx{&report, i, case_seed};
        try {
            entry->fn(rng, cx, cap);
        } catch (const Error& e) {
            cx.fail(std::string("unexpected error: ") + e.what());
        }
        ++report.cases_run;
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string report_to_text(const LawSuiteReport& r) {
    std::ostringstream out;
    out << "suite " << r.suite << ": " << (r.ok() ? "pass" : "FAIL") << " (" << r.cases_run
        << " cases, " << r.failures.size() << " failures, " << r.elapsed_seconds << "s)\n";
    for (const auto& f : r.failures)
        out << "  case " << f.case_index << " seed " << f.seed << ": " << f.witness << "\n";
    return out.str();
}

std::string report_to_json(const LawSuiteReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["cases"] = r.cases_run;
    j["elapsed_seconds"] = r.elapsed_seconds;
    j["ok"] = r.ok();
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : r.failures)
        j["failures"].push_back(
            {{"case", f.case_index}, {"seed", f.seed}, {"witness", f.witness}});
    return j.dump(2);
}

} // namespace polyagg
