#include <cstdint>
#include <numeric>

#include "doctest.h"
#include "polyagg/span.hpp"

using namespace polyagg;

namespace {

Copresheaf discrete_cop(const CatPtr& base, std::vector<FinLabelSet> rows) {
    Copresheaf x = Copresheaf::empty(base);
    x.rows = std::move(rows);
    for (int f = 0; f < base->n_morphisms(); ++f) {
        x.action[f].resize(x.rows[base->morphisms[f].dom].size());
        std::iota(x.action[f].begin(), x.action[f].end(), 0);
    }
    x.validate();
    return x;
}

// C = {u,v} <- {x1..x4} -> D = {p,q,r}
Span sample_span() {
    Span s;
    s.left_set = FinLabelSet({"u", "v"});
    s.right_set = FinLabelSet({"p", "q", "r"});
    s.apex = FinLabelSet({"x1", "x2", "x3", "x4"});
    s.to_left = {0, 0, 1, 1};
    s.to_right = {0, 1, 1, 1};
    return s;
}

// Complete invariant of a span up to apex bijection: the multiset of
// (left, right) label pairs.
std::vector<std::pair<std::string, std::string>> span_fingerprint(const Span& s) {
    std::vector<std::pair<std::string, std::string>> fp;
    for (int x = 0; x < s.apex.size(); ++x)
        fp.emplace_back(s.left_set.label(s.to_left[x]), s.right_set.label(s.to_right[x]));
    std::sort(fp.begin(), fp.end());
    return fp;
}

// Row-count matrix of a conjunctive bicomodule between discrete categories.
std::vector<std::vector<int>> conj_fingerprint(const Bicomodule& m) {
    std::vector<std::vector<int>> fp;
    for (int a = 0; a < m.left->n_objects(); ++a) {
        std::vector<int> row;
        for (const auto& r : m.patterns[a][0].rows) row.push_back(r.size());
        fp.push_back(std::move(row));
    }
    return fp;
}

bool spans_equal_strict(const Span& a, const Span& b) {
    return a.left_set == b.left_set && a.right_set == b.right_set &&
           a.apex.labels() == b.apex.labels() && a.to_left == b.to_left &&
           a.to_right == b.to_right;
}

std::uint64_t upow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

} // namespace

TEST_CASE("spans, bridges and bicomodules translate back and forth") {
    Span s = sample_span();
    Bicomodule m = span_to_bicomodule(s);
    m.validate();
    CHECK(is_linear(m));
    CHECK(m.positions[0].labels() == std::vector<std::string>{"x1", "x2"});
    CHECK(spans_equal_strict(bicomodule_to_span(m), s));

    BridgeDiagram br = bicomodule_to_bridge(m);
    br.validate();
    Bicomodule m2 = bridge_to_bicomodule(br);
    CHECK(bicomodules_equal(m, m2));
}

TEST_CASE("duality is an exact involution and toggles linear and conjunctive") {
    Span s = sample_span();
    Bicomodule m = span_to_bicomodule(s);
    Bicomodule d = dual(m);
    d.validate();
    CHECK(is_conjunctive(d));
    CHECK(!is_linear(d));
    // the conjunctive pattern at u holds x1 over p and x2 over q
    CHECK(d.patterns[0][0].rows[0].labels() == std::vector<std::string>{"x1"});
    CHECK(d.patterns[0][0].rows[1].labels() == std::vector<std::string>{"x2"});

    CHECK(bicomodules_equal(dual(d), m));          // apex already sorted fibrewise
    CHECK(bicomodules_equal(dual(dual(d)), d));    // and on the conjunctive side
    CHECK(spans_equal_canonical(bicomodule_to_span(dual(d)), s));

    CHECK(poly_to_string(dualizing_object(s.left_set, s.right_set)) == "6y");
}

TEST_CASE("carriers connect bicomodules back to the polynomial layer") {
    auto chain = std::make_shared<FinCategory>(chain_category(3));
    // the unit bicomodule's carrier is the outfacing polynomial: y^3 + y^2 + y
    CHECK(poly_iso(bicomodule_carrier(identity_bicomodule(chain)),
                   Poly::from_exponents({3, 2, 1})));
    Span s = sample_span();
    // a span's carrier is linear with one position per apex element
    CHECK(poly_iso(bicomodule_carrier(span_to_bicomodule(s)), Poly::from_exponents({1, 1, 1, 1})));
    // dualizing swaps coefficients and exponents: 2y^a shapes become y^... sums
    CHECK(poly_iso(bicomodule_carrier(dual(span_to_bicomodule(s))),
                   Poly::from_exponents({2, 2})));
}

TEST_CASE("a function-shaped span is self-dual") {
    Span s; // apex = left set, identity left leg
    s.left_set = FinLabelSet({"a1", "a2", "a3"});
    s.apex = s.left_set;
    s.right_set = FinLabelSet({"b1", "b2"});
    s.to_left = {0, 1, 2};
    s.to_right = {0, 0, 1};
    Bicomodule m = span_to_bicomodule(s);
    Bicomodule d = dual(m);
    CHECK(is_linear(d));
    CHECK(is_conjunctive(d));
    CHECK(spans_equal_canonical(bicomodule_to_span(d), s));
}

TEST_CASE("the dual of a span is its local hom into the dualizing object") {
    Span s = sample_span();
    Span bottom; // terminal span C x D
    bottom.left_set = s.left_set;
    bottom.right_set = s.right_set;
    for (int a = 0; a < s.left_set.size(); ++a)
        for (int d = 0; d < s.right_set.size(); ++d) {
            bottom.apex.add("(" + s.left_set.label(a) + "," + s.right_set.label(d) + ")");
            bottom.to_left.push_back(a);
            bottom.to_right.push_back(d);
        }
    Bicomodule hom = local_hom_discrete(span_to_bicomodule(s), span_to_bicomodule(bottom));
    hom.validate();
    CHECK(is_conjunctive(hom));
    CHECK(conj_fingerprint(hom) == conj_fingerprint(dual(span_to_bicomodule(s))));
    CHECK((int)bottom.apex.size() == dualizing_object(s.left_set, s.right_set).size());
}

TEST_CASE("a mixed bicomodule is not dualizable") {
    BridgeDiagram br;
    br.C = FinLabelSet({"c"});
    br.D = FinLabelSet({"d"});
    br.B = FinLabelSet({"b1", "b2"});
    br.E = FinLabelSet({"e1", "e2", "e3"});
    br.f = {0, 0, 0};
    br.g = {0, 0, 1};
    br.h = {0, 0};
    Bicomodule m = bridge_to_bicomodule(br);
    m.validate();
    CHECK(!is_linear(m));
    CHECK(!is_conjunctive(m));
    CHECK_THROWS_AS(dual(m), NotDualizable);
}

TEST_CASE("a span and its dual run sums and products of the same fibres") {
    Span s = sample_span();
    Bicomodule m = span_to_bicomodule(s);
    Bicomodule d = dual(m);
    auto x = discrete_cop(m.right, {numbered_set("p", 2), numbered_set("q", 1),
                                    numbered_set("r", 3)});
    Copresheaf sum = apply(m, x);
    Copresheaf prod = apply(d, x);
    for (int a = 0; a < 2; ++a) {
        std::uint64_t sm = 0, pr = 1;
        for (int i = 0; i < s.apex.size(); ++i) {
            if (s.to_left[i] != a) continue;
            sm += x.rows[s.to_right[i]].size();
            pr *= x.rows[s.to_right[i]].size();
        }
        CHECK((std::uint64_t)sum.rows[a].size() == sm);
        CHECK((std::uint64_t)prod.rows[a].size() == pr);
    }
    CHECK(sum.rows[0].size() == 3);
    CHECK(prod.rows[1].size() == 1);
}

TEST_CASE("the right adjoint of a span is adjoint to it") {
    Span s = sample_span();
    Bicomodule m = span_to_bicomodule(s); // copresheaves over D -> over C
    Bicomodule n = right_adjoint(s);      // copresheaves over C -> over D
    n.validate();
    CHECK(is_conjunctive(n));
    auto x = discrete_cop(m.right, {numbered_set("p", 2), numbered_set("q", 1),
                                    numbered_set("r", 3)});
    auto y = discrete_cop(m.left, {numbered_set("u", 2), numbered_set("v", 3)});
    std::uint64_t lhs = copresheaf_homs(apply(m, x), y, 100000).size();
    std::uint64_t rhs = copresheaf_homs(x, apply(n, y), 100000).size();
    CHECK(lhs == 72);
    CHECK(rhs == 72);
}

TEST_CASE("a general bridge runs sum-of-products of fibres") {
    BridgeDiagram br; // two positions over one object, patterns of sizes 2 and 1
    br.C = FinLabelSet({"c"});
    br.D = FinLabelSet({"d1", "d2"});
    br.B = FinLabelSet({"b1", "b2"});
    br.E = FinLabelSet({"e1", "e2", "e3"});
    br.f = {0, 1, 1};
    br.g = {0, 0, 1};
    br.h = {0, 0};
    Bicomodule m = bridge_to_bicomodule(br);
    m.validate();
    auto x = discrete_cop(m.right, {numbered_set("u", 3), numbered_set("v", 2)});
    // sum over b of the product over e in g^-1(b) of |X_{f(e)}|
    std::uint64_t expected = 0;
    for (int b = 0; b < br.B.size(); ++b) {
        std::uint64_t prod = 1;
        for (int e = 0; e < br.E.size(); ++e)
            if (br.g[e] == b) prod *= x.rows[br.f[e]].size();
        expected += prod;
    }
    CHECK(expected == 3 * 2 + 2);
    CHECK((std::uint64_t)apply(m, x).rows[0].size() == expected);
}

TEST_CASE("left adjoint of the right adjoint returns the span") {
    Span s = sample_span();
    CHECK(spans_equal_canonical(left_adjoint(right_adjoint(s)), s));
}

TEST_CASE("the left adjoint of a conjunctive bicomodule is adjoint to it") {
    Span s = sample_span();
    Bicomodule n = dual(span_to_bicomodule(s)); // conjunctive over (C, D)
    Span l = left_adjoint(n);                   // D <- apex -> C
    l.validate();
    CHECK(l.left_set == s.right_set);
    Bicomodule lm = span_to_bicomodule(l); // copresheaves over C -> over D
    auto x = discrete_cop(n.right, {numbered_set("p", 2), numbered_set("q", 1),
                                    numbered_set("r", 3)});
    auto y = discrete_cop(n.left, {numbered_set("u", 2), numbered_set("v", 3)});
    std::uint64_t lhs = copresheaf_homs(apply(lm, y), x, 100000).size();
    std::uint64_t rhs = copresheaf_homs(y, apply(n, x), 100000).size();
    CHECK(lhs == 4);
    CHECK(rhs == 4);
}

TEST_CASE("both transpose routes agree and equal the leg swap") {
    Span s = sample_span();
    Span t1 = transpose_dual_of_right_adjoint(s);
    Span t2 = transpose_left_adjoint_of_dual(s);
    CHECK(spans_equal_strict(t1, t2));
    CHECK(spans_equal_canonical(t1, span_swap(s)));
    CHECK(spans_equal_canonical(t2, span_swap(s)));
    // and transposing twice comes back
    CHECK(spans_equal_canonical(transpose_dual_of_right_adjoint(t1), s));
}

TEST_CASE("span composition matches bicomodule composition") {
    Span s = sample_span(); // (C, D)
    Span t;                 // (D, E)
    t.left_set = FinLabelSet({"p", "q", "r"});
    t.right_set = FinLabelSet({"e1", "e2"});
    t.apex = FinLabelSet({"z1", "z2", "z3"});
    t.to_left = {0, 1, 1};
    t.to_right = {0, 0, 1};

    Span st = compose_spans(s, t);
    CHECK(st.apex.size() == 7); // x1 meets z1; x2..x4 meet z2 and z3
    Bicomodule composed = compose_bicomodules(span_to_bicomodule(s), span_to_bicomodule(t));
    composed.validate();
    CHECK(is_linear(composed));
    CHECK(span_fingerprint(bicomodule_to_span(composed)) == span_fingerprint(st));

    // duality exchanges the order-preserving composite of the duals
    Bicomodule dd = compose_bicomodules(dual(span_to_bicomodule(s)), dual(span_to_bicomodule(t)));
    dd.validate();
    CHECK(is_conjunctive(dd));
    CHECK(conj_fingerprint(dd) == conj_fingerprint(dual(span_to_bicomodule(st))));
}

TEST_CASE("a category is a monoid in spans") {
    FinCategory c = chain_category(3);
    CatSpanMonad m = category_as_span_monad(c);
    m.validate();
    CHECK(m.span.apex.size() == c.n_morphisms());

    CatSpanMonad broken = m;
    int f = c.morphism_index("a1->a2"), g = c.morphism_index("a2->a3");
    broken.mult[g][f] = c.morphism_index("id_a1"); // reroute f;g (read against cod/dom legs)
    CHECK_THROWS_AS(broken.validate(), LawViolation);
}

TEST_CASE("the opposite category via the dual span equals the direct opposite") {
    FinLabelSet z3 = numbered_set("g", 3);
    std::vector<std::vector<int>> add(3, std::vector<int>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) add[i][j] = (i + j) % 3;
    std::vector<FinCategory> cases = {chain_category(4), monoid_category(z3, add, 0),
                                      codiscrete_category(numbered_set("o", 3))};
    for (const auto& c : cases) {
        FinCategory op = opposite_via_dual(c);
        CHECK(categories_equal(op, opposite_direct(c)));
        CHECK(categories_equal(opposite_via_dual(op), c));
    }
}

TEST_CASE("the truncated skeleton of finite sets has N^M many maps M -> N") {
    FinSkeleton sk = skeleton_fin(4);
    CHECK(sk.cat.n_objects() == 5);
    CHECK(sk.cat.n_morphisms() == 499);
    std::vector<std::vector<int>> counts(5, std::vector<int>(5, 0));
    for (const auto& mor : sk.cat.morphisms) ++counts[mor.dom][mor.cod];
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n)
            CHECK((std::uint64_t)counts[m][n] == (m == 0 ? 1 : upow(n, m)));

    // identity graphs are identities; the generic copresheaf is functorial
    for (int a = 0; a < 5; ++a) {
        FinFunction id(a);
        std::iota(id.begin(), id.end(), 0);
        CHECK(sk.graph[sk.cat.identity[a]] == id);
    }
    auto cat = std::make_shared<FinCategory>(sk.cat);
    Copresheaf generic = skeleton_generic_copresheaf(cat, sk.graph);
    CHECK(generic.rows[3].size() == 3);

    // and it really is the opposite of the full internal subcategory of
    // 1 + y + y^2 + y^3 + y^4
    Poly u;
    for (int n = 0; n <= 4; ++n) u.positions.push_back({std::to_string(n), numbered_set("d", n)});
    CHECK(categories_equal(sk.cat, opposite_direct(full_internal_subcategory(u))));
}

TEST_CASE("small copresheaves classify into the skeleton and reconstruct") {
    FinSkeleton sk = skeleton_fin(4);
    auto skcat = std::make_shared<FinCategory>(sk.cat);
    auto chain = std::make_shared<FinCategory>(chain_category(3));
    Copresheaf x = Copresheaf::empty(chain);
    x.rows = {numbered_set("r", 2), numbered_set("s", 1), numbered_set("t", 2)};
    x.action = {{0, 1}, {0, 0}, {1, 1}, {0}, {1}, {0, 1}};
    x.validate();

    FinClassification cls = classify_finitary(x, skcat, sk.graph);
    CHECK(cls.sizes == std::vector<int>{2, 1, 2});
    Copresheaf generic = skeleton_generic_copresheaf(skcat, sk.graph);
    CHECK(copresheaves_isomorphic(migrate_delta(cls.functor, generic), x, 100000));

    auto point = std::make_shared<FinCategory>(discrete_category(FinLabelSet({"o"})));
    Copresheaf big = discrete_cop(point, {numbered_set("w", 5)});
    CHECK_THROWS_AS(classify_finitary(big, skcat, sk.graph), RowTooLarge);
}

namespace {

// x over (B, C), y over (A, C) with frozen fibre sizes
Span closure_x() {
    Span x;
    x.left_set = FinLabelSet({"b"});
    x.right_set = FinLabelSet({"c1", "c2"});
    x.apex = FinLabelSet({"x1", "x2", "x3"});
    x.to_left = {0, 0, 0};
    x.to_right = {0, 0, 1};
    return x;
}

Span closure_y() {
    Span y;
    y.left_set = FinLabelSet({"a"});
    y.right_set = FinLabelSet({"c1", "c2"});
    y.apex = FinLabelSet({"y1", "y2", "y3", "y4", "y5"});
    y.to_left = {0, 0, 0, 0, 0};
    y.to_right = {0, 0, 0, 1, 1};
    return y;
}

} // namespace

TEST_CASE("the span closure collects fibrewise maps and evaluates") {
    Span x = closure_x(), y = closure_y();
    SpanClosure cl = span_left_closure(x, y);
    cl.hom.validate();
    CHECK(cl.hom.apex.size() == 18); // 3^2 * 2^1
    CHECK(cl.hom.left_set == y.left_set);
    CHECK(cl.hom.right_set == x.left_set);

    // the evaluation is a genuine span map (hom . x) -> y
    Span hx = compose_spans(cl.hom, x);
    CHECK((int)cl.eval.size() == hx.apex.size());
    for (int i = 0; i < hx.apex.size(); ++i) {
        CHECK(y.to_left[cl.eval[i]] == hx.to_left[i]);
        CHECK(y.to_right[cl.eval[i]] == hx.to_right[i]);
    }

    // assignments preserve the C-grading
    for (int t = 0; t < cl.hom.apex.size(); ++t)
        for (int xi = 0; xi < x.apex.size(); ++xi)
            if (cl.assignment[t][xi] >= 0)
                CHECK(y.to_right[cl.assignment[t][xi]] == x.to_right[xi]);
}

TEST_CASE("the span closure is terminal among spans mapping into y through x") {
    Span x = closure_x(), y = closure_y();
    SpanClosure cl = span_left_closure(x, y);
    for (int k = 0; k <= 2; ++k) {
        Span w;
        w.left_set = y.left_set;
        w.right_set = x.left_set;
        w.apex = numbered_set("w", k);
        w.to_left.assign(k, 0);
        w.to_right.assign(k, 0);
        Span wx = compose_spans(w, x);
        auto cells = span_maps(wx, y, 1000000);
        auto factors = span_maps(w, cl.hom, 1000000);
        CHECK(cells.size() == factors.size()); // currying count: 18^k both ways
        for (const auto& phi : cells) {
            int found = 0;
            for (const auto& psi : factors) {
                bool match = true;
                for (int u = 0; u < k && match; ++u)
                    for (int xi = 0; xi < x.apex.size() && match; ++xi) {
                        if (w.to_right[u] != x.to_left[xi]) continue;
                        int pair = wx.apex.index("(" + w.apex.label(u) + "," +
                                                 x.apex.label(xi) + ")");
                        if (cl.assignment[psi[u]][xi] != phi[pair]) match = false;
                    }
                if (match) ++found;
            }
            CHECK(found == 1); // unique factorization through the evaluation
        }
    }
}

TEST_CASE("the span closure counts fibrewise maps over several end objects") {
    Span x, y;
    x.left_set = FinLabelSet({"b1", "b2"});
    x.right_set = FinLabelSet({"c1", "c2"});
    x.apex = FinLabelSet({"x1", "x2", "x3"});
    x.to_left = {0, 0, 1};
    x.to_right = {0, 1, 1};
    y.left_set = FinLabelSet({"a1", "a2"});
    y.right_set = x.right_set;
    y.apex = FinLabelSet({"y1", "y2", "y3", "y4"});
    y.to_left = {0, 0, 0, 1};
    y.to_right = {0, 0, 1, 1};

    std::uint64_t expected = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            std::uint64_t prod = 1;
            for (int c = 0; c < 2; ++c) {
                std::uint64_t yf = 0, xf = 0;
                for (int i = 0; i < y.apex.size(); ++i)
                    if (y.to_left[i] == a && y.to_right[i] == c) ++yf;
                for (int i = 0; i < x.apex.size(); ++i)
                    if (x.to_left[i] == b && x.to_right[i] == c) ++xf;
                prod *= upow(yf, xf);
            }
            expected += prod;
        }
    SpanClosure cl = span_left_closure(x, y);
    CHECK((std::uint64_t)cl.hom.apex.size() == expected);
    CHECK(expected == 4); // (a1,b1): 2*1, (a1,b2): 1*1, (a2,b1): 0, (a2,b2): 1*1
}
