#include <cstdio>

#include "doctest.h"
#include "json.hpp"
#include "polyagg/io.hpp"

using namespace polyagg;
using Json = nlohmann::ordered_json;

namespace {

CatPtr chain3() { return std::make_shared<FinCategory>(chain_category(3)); }

// Payroll-style fixture on the 3-chain 0 -> 1 -> 2.
Schema sample_schema() {
    Schema s;
    s.category = chain3();
    s.monoids = {int_sum_monoid(), trivial_monoid(), trivial_monoid()};
    s.validate();
    return s;
}

Instance sample_instance(const Schema& s) {
    Instance inst;
    inst.data = Copresheaf::empty(s.category);
    inst.data.rows[0] = FinLabelSet({"e1", "e2", "e3"});
    inst.data.rows[1] = FinLabelSet({"d1", "d2"});
    inst.data.rows[2] = FinLabelSet({"c1"});
    for (int f = 0; f < s.category->n_morphisms(); ++f) {
        const auto& m = s.category->morphisms[f];
        if (m.dom == m.cod)
            for (int r = 0; r < inst.data.rows[m.dom].size(); ++r)
                inst.data.action[f].push_back(r);
    }
    auto set = [&](const char* name, FinFunction v) {
        for (int f = 0; f < s.category->n_morphisms(); ++f)
            if (s.category->morphisms[f].name == name) inst.data.action[f] = std::move(v);
    };
    set("a1->a2", {0, 0, 1});
    set("a2->a3", {0, 0});
    set("a1->a3", {0, 0, 0});
    inst.data.validate();
    inst.attributes = {{10LL, 20LL, 5LL},
                       {std::monostate{}, std::monostate{}},
                       {std::monostate{}}};
    validate_instance(s, inst);
    return inst;
}

} // namespace

TEST_CASE("polynomial sum syntax round-trips through its printer") {
    Poly p = parse_poly("y^3 + 2y + 1");
    CHECK(p.positions.size() == 4);
    CHECK(poly_to_string(p) == "y^3 + 2y + 1");
    CHECK(poly_to_string(parse_poly("0")) == "0");
    CHECK(poly_to_string(parse_poly("  4  ")) == "4");
    CHECK(poly_to_string(parse_poly("3y^2")) == "3y^2");
    // parse of a printed poly is iso to the original
    Poly q = parse_poly(poly_to_string(p));
    CHECK(poly_iso(p, q));
}

TEST_CASE("polynomial labeled syntax round-trips exactly") {
    Poly p = parse_poly("{i1: [d1, d2], i2: [], pos: [x]}");
    CHECK(p.positions.size() == 3);
    CHECK(p.positions[0].directions.size() == 2);
    CHECK(p.positions[2].directions.label(0) == "x");
    std::string printed = poly_to_labeled_string(p);
    Poly q = parse_poly(printed);
    CHECK(poly_to_labeled_string(q) == printed);
}

TEST_CASE("malformed polynomials are rejected") {
    CHECK_THROWS_AS(parse_poly(""), ParseError);
    CHECK_THROWS_AS(parse_poly("y^"), ParseError);
    CHECK_THROWS_AS(parse_poly("2x"), ParseError);
    CHECK_THROWS_AS(parse_poly("y +"), ParseError);
    CHECK_THROWS_AS(parse_poly("{i1 [d]}"), ParseError);
    CHECK_THROWS_AS(parse_poly("{i1: [d], i1: [d]}"), ParseError); // duplicate position
}

TEST_CASE("categories round-trip through json") {
    FinCategory c = chain_category(3);
    FinCategory back = category_from_json(category_to_json(c));
    CHECK(categories_equal(c, back));

    FinCategory z3 = monoid_category(FinLabelSet({"e", "g", "gg"}),
                                     {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0);
    CHECK(categories_equal(z3, category_from_json(category_to_json(z3))));
}

TEST_CASE("a missing composite in a category file is a law violation naming the pair") {
    Json j = Json::parse(category_to_json(chain_category(3)));
    j["composition"].erase("a1->a2;a2->a3");
    try {
        category_from_json(j.dump());
        FAIL("expected a law violation");
    } catch (const LawViolation& e) {
        std::string msg = e.what();
        CHECK(msg.find("a1->a2") != std::string::npos);
        CHECK(msg.find("a2->a3") != std::string::npos);
    }
}

TEST_CASE("composition entries for non-composable pairs are parse errors") {
    Json j = Json::parse(category_to_json(chain_category(3)));
    j["composition"]["a2->a3;a1->a2"] = "a1->a3";
    CHECK_THROWS_AS(category_from_json(j.dump()), ParseError);
}

TEST_CASE("copresheaves round-trip and loaders validate them") {
    Schema s = sample_schema();
    Instance inst = sample_instance(s);
    Copresheaf back = copresheaf_from_json(s.category, copresheaf_to_json(inst.data));
    CHECK(back.rows == inst.data.rows);
    CHECK(back.action == inst.data.action);

    Json j = Json::parse(copresheaf_to_json(inst.data));
    SUBCASE("a row without an image is rejected") {
        j["maps"]["a1->a2"].erase("e2");
        CHECK_THROWS_AS(copresheaf_from_json(s.category, j.dump()), ParseError);
    }
    SUBCASE("an image outside the target table is rejected") {
        j["maps"]["a1->a2"]["e2"] = "nowhere";
        CHECK_THROWS_AS(copresheaf_from_json(s.category, j.dump()), ParseError);
    }
    SUBCASE("non-functorial maps are a law violation") {
        j["maps"]["a1->a3"]["e1"] = "c1"; // fine
        j["maps"]["a2->a3"]["d1"] = "c1";
        // break: route e3 through d2 but send it elsewhere on the long arrow
        // (only one row at the end object here, so instead break an identity)
        j["maps"]["id_a1"]["e1"] = "e2";
        CHECK_THROWS_AS(copresheaf_from_json(s.category, j.dump()), LawViolation);
    }
}

TEST_CASE("schemas and instances round-trip through json") {
    Schema s = sample_schema();
    Schema s2 = schema_from_json(schema_to_json(s));
    CHECK(categories_equal(*s.category, *s2.category));
    REQUIRE(s2.monoids.size() == 3);
    CHECK(s2.monoids[0].kind == MonoidKind::IntSum);
    CHECK(s2.monoids[1].kind == MonoidKind::Trivial);

    Instance inst = sample_instance(s);
    Instance back = instance_from_json(s2, instance_to_json(inst));
    CHECK(back.attributes == inst.attributes);
    CHECK(aggregate_along(s2, back, 1) == aggregate_along(s, inst, 1));
}

TEST_CASE("table and multiset monoids survive the schema format") {
    Schema s;
    s.category = std::make_shared<FinCategory>(chain_category(2));
    s.monoids = {table_monoid(FinLabelSet({"e", "a"}), {{0, 1}, {1, 0}}, 0),
                 multiset_monoid(FinLabelSet({"e1", "e2"}))};
    s.validate();
    Schema s2 = schema_from_json(schema_to_json(s));
    CHECK(s2.monoids[0].kind == MonoidKind::Table);
    CHECK(s2.monoids[0].elements.labels() == std::vector<std::string>{"e", "a"});
    CHECK(monoid_value_to_string(s2.monoids[0].combine(std::string("a"), std::string("a"))) ==
          monoid_value_to_string(MonoidValue(std::string("e"))));
    CHECK(s2.monoids[1].kind == MonoidKind::Multiset);
    CHECK(s2.monoids[1].universe.size() == 2);
}

TEST_CASE("instance attributes outside the declared carrier are a type mismatch") {
    Schema s = sample_schema();
    Instance inst = sample_instance(s);
    Json j = Json::parse(instance_to_json(inst));
    j["attributes"]["a1"]["e1"] = "not-a-number";
    CHECK_THROWS_AS(instance_from_json(s, j.dump()), TypeMismatch);
}

TEST_CASE("attributes may be omitted only where the monoid is trivial") {
    Schema s = sample_schema();
    Instance inst = sample_instance(s);
    Json j = Json::parse(instance_to_json(inst));
    j["attributes"].erase("a2"); // trivial monoid there: fine
    Instance ok = instance_from_json(s, j.dump());
    CHECK(ok.attributes[1] == std::vector<MonoidValue>(2, MonoidValue{}));
    j["attributes"].erase("a1"); // int-sum: not fine
    CHECK_THROWS_AS(instance_from_json(s, j.dump()), ParseError);
}

TEST_CASE("queries round-trip through json") {
    CatPtr c = chain3();
    DucQuery q;
    Copresheaf pat = Copresheaf::empty(c);
    pat.rows[0] = FinLabelSet({"x"});
    pat.rows[1] = FinLabelSet({"y"});
    pat.rows[2] = FinLabelSet({"z"});
    for (int f = 0; f < c->n_morphisms(); ++f) pat.action[f] = {0};
    pat.validate();
    q.patterns = {pat};
    q.names.add("edge");
    DucQuery back = query_from_json(c, query_to_json(c, q));
    CHECK(back.names.label(0) == "edge");
    CHECK(back.patterns[0].rows == pat.rows);
    CHECK(back.patterns[0].action == pat.action);
}

TEST_CASE("spans round-trip through json and keep their duality") {
    Span s;
    s.left_set = FinLabelSet({"u", "v"});
    s.right_set = FinLabelSet({"p", "q"});
    s.apex = FinLabelSet({"x1", "x2", "x3"});
    s.to_left = {0, 0, 1};
    s.to_right = {0, 1, 1};
    s.validate();
    Span back = span_from_json(span_to_json(s));
    CHECK(back.apex == s.apex);
    CHECK(back.to_left == s.to_left);
    CHECK(back.to_right == s.to_right);
    Bicomodule lin = span_to_bicomodule(back);
    CHECK(bicomodules_equal(dual(dual(lin)), lin));
}

TEST_CASE("files can be written and read back") {
    std::string path = "/tmp/polyagg_io_test.json";
    std::string body = span_to_json(span_swap(span_from_json(span_to_json([] {
        Span s;
        s.left_set = FinLabelSet({"a"});
        s.right_set = FinLabelSet({"b"});
        s.apex = FinLabelSet({"x"});
        s.to_left = {0};
        s.to_right = {0};
        return s;
    }()))));
    write_file(path, body);
    CHECK(read_file(path) == body);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("/tmp/polyagg_io_missing_file.json"), ParseError);
}
