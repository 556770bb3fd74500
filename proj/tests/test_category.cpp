#include <doctest.h>

#include "polyagg/comonoid.hpp"

using namespace polyagg;

namespace {

// Commutative square poset: a -> b, a -> c, b -> d, c -> d with equal
// composites.
FinCategory square_category() {
    FinCategory c;
    c.objects = FinLabelSet({"a", "b", "c", "d"});
    c.morphisms = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"id_c", 2, 2}, {"id_d", 3, 3},
                   {"ab", 0, 1},   {"ac", 0, 2},   {"bd", 1, 3},   {"cd", 2, 3},
                   {"ad", 0, 3}};
    c.identity = {0, 1, 2, 3};
    int n = c.n_morphisms();
    c.compose_table.assign(n, std::vector<int>(n, -1));
    auto set = [&](const char* f, const char* g, const char* h) {
        c.compose_table[c.morphism_index(f)][c.morphism_index(g)] = c.morphism_index(h);
    };
    for (int f = 0; f < n; ++f) {
        c.compose_table[c.identity[c.morphisms[f].dom]][f] = f;
        c.compose_table[f][c.identity[c.morphisms[f].cod]] = f;
    }
    set("ab", "bd", "ad");
    set("ac", "cd", "ad");
    return c;
}

} // namespace

TEST_CASE("category validation catches broken tables") {
    FinCategory c = square_category();
    CHECK_NOTHROW(c.validate());

    FinCategory bad = c;
    bad.compose_table[bad.morphism_index("ab")][bad.morphism_index("bd")] =
        bad.morphism_index("ab"); // wrong endpoints
    CHECK_THROWS_AS(bad.validate(), const LawViolation&);

    bad = c;
    bad.identity[0] = bad.morphism_index("ab");
    CHECK_THROWS_AS(bad.validate(), const LawViolation&);

    bad = c;
    bad.compose_table[bad.morphism_index("ab")][bad.morphism_index("bd")] = -1;
    CHECK_THROWS_AS(bad.validate(), const LawViolation&);
}

TEST_CASE("standard constructions validate") {
    CHECK_NOTHROW(discrete_category(numbered_set("a", 4)).validate());
    CHECK_NOTHROW(terminal_category().validate());
    CHECK_NOTHROW(chain_category(4).validate());
    CHECK_NOTHROW(codiscrete_category(numbered_set("a", 3)).validate());
    // cyclic group of order 3 as a one-object category
    FinLabelSet z3 = numbered_set("g", 3);
    std::vector<std::vector<int>> op(3, std::vector<int>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) op[i][j] = (i + j) % 3;
    CHECK_NOTHROW(monoid_category(z3, op, 0).validate());
}

TEST_CASE("comonoid round trip") {
    for (const FinCategory& c : {square_category(), chain_category(3),
                                 codiscrete_category(numbered_set("a", 3))}) {
        Comonoid m = category_to_comonoid(c);
        auto report = check_comonoid_laws(m);
        CHECK(report.ok);
        FinCategory back = comonoid_to_category(m);
        CHECK_NOTHROW(back.validate());
        std::string w;
        CHECK_MESSAGE(categories_isomorphic_by_names(c, back, &w), w);
    }
}

TEST_CASE("law checker catches mutations with witnesses") {
    Comonoid m = category_to_comonoid(square_category());

    Comonoid bad = m;
    // reroute a composite: ab;bd mapped to ab instead of ad
    int a = 0;
    int f_ab = m.carrier.at(a).directions.index("ab");
    int b = m.codomain[a][f_ab];
    int g_bd = m.carrier.at(b).directions.index("bd");
    bad.comp[a][f_ab][g_bd] = f_ab;
    auto r = check_comonoid_laws(bad);
    CHECK(!r.ok);
    CHECK(!r.violations.empty());

    bad = m;
    bad.counit[0] = f_ab; // identity pick points at a non-endomorphism
    r = check_comonoid_laws(bad);
    CHECK(!r.ok);

    bad = m;
    bad.codomain[a][f_ab] = 3; // wrong codomain; composition row no longer fits
    r = check_comonoid_laws(bad);
    CHECK(!r.ok);

    // A mutation can land on a different but still lawful structure (the
    // square has a b/c symmetry); the raw decode plus category validation is
    // the independent referee for that.
    bad = m;
    bad.codomain[a][f_ab] = 2;
    r = check_comonoid_laws(bad);
    bool lawful_category = true;
    try {
        comonoid_to_category_raw(bad).validate();
    } catch (const Error&) {
        lawful_category = false;
    }
    CHECK(r.ok == lawful_category);
}

TEST_CASE("structured comultiplication agrees with the polynomial map route") {
    // On a small category, materialize the substitution square and check the
    // two counit triangles as honest map equations.
    FinCategory c = chain_category(2);
    Comonoid m = category_to_comonoid(c);
    PolyMap eps = counit_as_polymap(m);
    PolyMap delta = comult_as_polymap(m);
    CHECK_NOTHROW(eps.validate());
    CHECK_NOTHROW(delta.validate());

    auto left = compose(delta, substitute_map(eps, identity_map(m.carrier)));
    CHECK(polymap_equal(left, subst_left_unit(m.carrier)));
    auto right = compose(delta, substitute_map(identity_map(m.carrier), eps));
    CHECK(polymap_equal(right, subst_right_unit(m.carrier)));
}

TEST_CASE("functors, etale detection, cofunctors") {
    auto chain = std::make_shared<FinCategory>(chain_category(3));
    auto term = std::make_shared<FinCategory>(terminal_category());
    auto to_term = enumerate_functors(chain, term, 100);
    REQUIRE(to_term.size() == 1);
    CHECK(!is_etale(to_term[0])); // a1 has three outfacing arrows, * has one

    // identity is etale; its cofunctor is the identity cofunctor
    auto idf = identity_functor(chain);
    CHECK(is_etale(idf));
    auto cof = cofunctor_from_etale(idf);
    CHECK_NOTHROW(cof.validate());

    // the two-object discrete category includes etale-ly into the discrete
    // three-object one
    auto d2 = std::make_shared<FinCategory>(discrete_category(numbered_set("a", 2)));
    auto d3 = std::make_shared<FinCategory>(discrete_category(numbered_set("a", 3)));
    auto incls = enumerate_functors(d2, d3, 100);
    CHECK(incls.size() == 9);
    for (const auto& f : incls) CHECK(is_etale(f));

    // cofunctor composition stays lawful
    CHECK_NOTHROW(compose_cofunctors(cof, cof).validate());
}

TEST_CASE("full internal subcategory of a polynomial") {
    // sum of y^0 .. y^2: hom(i, i') has |dirs(i)| ^ |dirs(i')| morphisms
    Poly u = Poly::from_exponents({0, 1, 2});
    FinCategory f = full_internal_subcategory(u);
    CHECK_NOTHROW(f.validate());
    auto homs = [&](int i, int j) {
        int n = 0;
        for (const auto& m : f.morphisms)
            if (m.dom == i && m.cod == j) ++n;
        return n;
    };
    CHECK(homs(0, 0) == 1); // 0^0
    CHECK(homs(0, 1) == 0);
    CHECK(homs(1, 0) == 1);
    CHECK(homs(2, 1) == 2);
    CHECK(homs(2, 2) == 4);
    CHECK_THROWS_AS((void)full_internal_subcategory(Poly::from_exponents({9, 9, 9}), 100),
                    const SizeBlowup&);
}

TEST_CASE("products and opposites") {
    FinCategory c = chain_category(2), d = square_category();
    FinCategory direct = product_category_direct(c, d);
    CHECK_NOTHROW(direct.validate());
    FinCategory via_comonoid = product_category(c, d);
    std::string w;
    CHECK_MESSAGE(categories_isomorphic_by_names(direct, via_comonoid, &w), w);

    FinCategory op = opposite_direct(d);
    CHECK_NOTHROW(op.validate());
    CHECK(categories_equal(opposite_direct(op), d));
}
