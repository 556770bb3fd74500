#include "polyagg/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polyagg {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int parse_nat(const std::string& s, const std::string& where) {
    if (s.empty()) throw ParseError("expected a number", where);
    for (char c : s)
        if (!std::isdigit((unsigned char)c)) throw ParseError("expected a number", where);
    return std::stoi(s);
}

Poly parse_labeled_poly(const std::string& text) {
    std::string body = trim(text);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw ParseError("labeled polynomial must be braced", text);
    body = body.substr(1, body.size() - 2);
    Poly p;
    // split on commas at depth zero (direction lists are bracketed)
    int depth = 0;
    std::vector<std::string> entries;
    std::string cur;
    for (char c : body) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            entries.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    entries.push_back(cur);
    FinLabelSet seen; // rejects duplicate position labels
    for (const auto& raw : entries) {
        std::string e = trim(raw);
        if (e.empty()) continue;
        size_t colon = e.find(':');
        if (colon == std::string::npos) throw ParseError("expected 'label: [dirs]'", e);
        std::string label = trim(e.substr(0, colon));
        seen.add(label);
        std::string dirs = trim(e.substr(colon + 1));
        if (dirs.size() < 2 || dirs.front() != '[' || dirs.back() != ']')
            throw ParseError("direction list must be bracketed", e);
        FinLabelSet ds;
        for (const auto& d : split(dirs.substr(1, dirs.size() - 2), ',')) {
            std::string dl = trim(d);
            if (!dl.empty()) ds.add(dl);
        }
        p.positions.push_back({std::move(label), std::move(ds)});
    }
    return p;
}

} // namespace

Poly parse_poly(const std::string& text) {
    std::string body = trim(text);
    if (body.empty()) throw ParseError("empty polynomial");
    if (body.front() == '{') return parse_labeled_poly(body);
    if (body == "0") return Poly::zero();
    Poly p;
    int next = 1;
    for (const auto& raw : split(body, '+')) {
        std::string term = trim(raw);
        if (term.empty()) throw ParseError("empty term in polynomial", text);
        long long coeff = 1;
        int exp = 0;
        size_t ypos = term.find('y');
        if (ypos == std::string::npos) {
            coeff = parse_nat(term, text);
        } else {
            std::string pre = trim(term.substr(0, ypos));
            if (!pre.empty()) coeff = parse_nat(pre, text);
            std::string post = trim(term.substr(ypos + 1));
            if (post.empty()) {
                exp = 1;
            } else {
                if (post.front() != '^') throw ParseError("expected '^' after y", term);
                exp = parse_nat(trim(post.substr(1)), text);
            }
        }
        for (long long k = 0; k < coeff; ++k)
            p.positions.push_back({"i" + std::to_string(next++), numbered_set("d", exp)});
    }
    return p;
}

namespace {

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError("malformed json", e.what());
    }
}

const Json& field(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError("missing field", key);
    return j.at(key);
}

FinLabelSet label_set(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("expected an array of labels", where);
    FinLabelSet s;
    for (const auto& e : j) {
        if (!e.is_string()) throw ParseError("labels must be strings", where);
        s.add(e.get<std::string>());
    }
    return s;
}

} // namespace

std::string category_to_json(const FinCategory& c) {
    Json j;
    j["objects"] = c.objects.labels();
    Json ms = Json::array();
    for (const auto& m : c.morphisms)
        ms.push_back({{"name", m.name},
                      {"dom", c.objects.label(m.dom)},
                      {"cod", c.objects.label(m.cod)}});
    j["morphisms"] = std::move(ms);
    Json ids = Json::object();
    for (int a = 0; a < c.n_objects(); ++a)
        ids[c.objects.label(a)] = c.morphisms[c.identity[a]].name;
    j["identities"] = std::move(ids);
    Json comp = Json::object();
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g)
            if (c.compose_table[f][g] >= 0)
                comp[c.morphisms[f].name + ";" + c.morphisms[g].name] =
                    c.morphisms[c.compose_table[f][g]].name;
    j["composition"] = std::move(comp);
    return j.dump(2);
}

FinCategory category_from_json(const std::string& text) {
    Json j = parse_json(text);
    FinCategory c;
    c.objects = label_set(field(j, "objects"), "objects");
    FinLabelSet names;
    for (const auto& m : field(j, "morphisms")) {
        std::string name = field(m, "name").get<std::string>();
        names.add(name); // rejects duplicates
        c.morphisms.push_back({name, c.objects.index(field(m, "dom").get<std::string>()),
                               c.objects.index(field(m, "cod").get<std::string>())});
    }
    c.identity.assign(c.n_objects(), -1);
    for (const auto& [obj, mor] : field(j, "identities").items())
        c.identity.at(c.objects.index(obj)) = names.index(mor.get<std::string>());
    for (int a = 0; a < c.n_objects(); ++a)
        if (c.identity[a] < 0) throw ParseError("missing identity", c.objects.label(a));
    c.compose_table.assign(c.n_morphisms(), std::vector<int>(c.n_morphisms(), -1));
    for (const auto& [pair, result] : field(j, "composition").items()) {
        auto parts = split(pair, ';');
        if (parts.size() != 2) throw ParseError("composition key must be 'f;g'", pair);
        int f = names.index(parts[0]), g = names.index(parts[1]);
        if (c.morphisms[f].cod != c.morphisms[g].dom)
            throw ParseError("composition entry for a non-composable pair", pair);
        c.compose_table[f][g] = names.index(result.get<std::string>());
    }
    c.validate(); // LawViolation on missing composites, bad units, non-associativity
    return c;
}

namespace {

Json copresheaf_json(const Copresheaf& x) {
    const FinCategory& c = *x.base;
    Json tables = Json::object();
    for (int a = 0; a < c.n_objects(); ++a) tables[c.objects.label(a)] = x.rows[a].labels();
    Json maps = Json::object();
    for (int f = 0; f < c.n_morphisms(); ++f) {
        Json m = Json::object();
        for (int r = 0; r < x.rows[c.morphisms[f].dom].size(); ++r)
            m[x.rows[c.morphisms[f].dom].label(r)] =
                x.rows[c.morphisms[f].cod].label(x.action[f][r]);
        maps[c.morphisms[f].name] = std::move(m);
    }
    return Json{{"tables", std::move(tables)}, {"maps", std::move(maps)}};
}

Copresheaf copresheaf_from(const CatPtr& c, const Json& j) {
    Copresheaf x = Copresheaf::empty(c);
    for (const auto& [obj, rows] : field(j, "tables").items())
        x.rows.at(c->objects.index(obj)) = label_set(rows, obj);
    const Json& maps = field(j, "maps");
    for (int f = 0; f < c->n_morphisms(); ++f) {
        const auto& mor = c->morphisms[f];
        const FinLabelSet& dom = x.rows[mor.dom];
        x.action[f].assign(dom.size(), -1);
        if (maps.contains(mor.name))
            for (const auto& [row, to] : maps.at(mor.name).items())
                x.action[f][dom.index(row)] = x.rows[mor.cod].index(to.get<std::string>());
        for (int r = 0; r < dom.size(); ++r)
            if (x.action[f][r] < 0)
                throw ParseError("row has no image", mor.name + " at " + dom.label(r));
    }
    x.validate();
    return x;
}

} // namespace

std::string copresheaf_to_json(const Copresheaf& x) { return copresheaf_json(x).dump(2); }

Copresheaf copresheaf_from_json(const CatPtr& c, const std::string& text) {
    return copresheaf_from(c, parse_json(text));
}

namespace {

Json monoid_json(const CommMonoid& m) {
    switch (m.kind) {
        case MonoidKind::IntSum: return Json{{"kind", "int-sum"}};
        case MonoidKind::IntProduct: return Json{{"kind", "int-product"}};
        case MonoidKind::MaxBottom: return Json{{"kind", "max-with-bottom"}};
        case MonoidKind::MinTop: return Json{{"kind", "min-with-top"}};
        case MonoidKind::Trivial: return Json{{"kind", "trivial"}};
        case MonoidKind::Multiset:
            return Json{{"kind", "multiset"}, {"universe", m.universe.labels()}};
        case MonoidKind::Table: {
            Json op = Json::array();
            for (int a = 0; a < m.elements.size(); ++a) {
                Json row = Json::array();
                for (int b = 0; b < m.elements.size(); ++b)
                    row.push_back(m.elements.label(m.op[a][b]));
                op.push_back(std::move(row));
            }
            return Json{{"kind", "table"},
                        {"elements", m.elements.labels()},
                        {"unit", m.elements.label(m.unit)},
                        {"op", std::move(op)}};
        }
    }
    throw WrongShape("unknown monoid kind");
}

CommMonoid monoid_from(const Json& j) {
    std::string kind = field(j, "kind").get<std::string>();
    if (kind == "int-sum") return int_sum_monoid();
    if (kind == "int-product") return int_product_monoid();
    if (kind == "max-with-bottom") return max_monoid();
    if (kind == "min-with-top") return min_monoid();
    if (kind == "trivial") return trivial_monoid();
    if (kind == "multiset") return multiset_monoid(label_set(field(j, "universe"), "universe"));
    if (kind == "table") {
        FinLabelSet elems = label_set(field(j, "elements"), "elements");
        std::vector<std::vector<int>> op;
        for (const auto& row : field(j, "op")) {
            std::vector<int> r;
            for (const auto& v : row) r.push_back(elems.index(v.get<std::string>()));
            op.push_back(std::move(r));
        }
        return table_monoid(elems, std::move(op), elems.index(field(j, "unit").get<std::string>()));
    }
    throw ParseError("unknown monoid kind", kind);
}

Json value_json(const MonoidValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return nullptr;
    if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    Json arr = Json::array();
    for (const auto& [l, c] : std::get<Multiset>(v))
        for (int i = 0; i < c; ++i) arr.push_back(l);
    return arr;
}

MonoidValue value_from(const Json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::vector<std::string> ls;
        for (const auto& e : j) ls.push_back(e.get<std::string>());
        return multiset_of(std::move(ls));
    }
    throw ParseError("unreadable monoid value", j.dump());
}

} // namespace

std::string schema_to_json(const Schema& s) {
    Json j;
    j["category"] = Json::parse(category_to_json(*s.category));
    Json ms = Json::object();
    for (int a = 0; a < s.category->n_objects(); ++a)
        ms[s.category->objects.label(a)] = monoid_json(s.monoids[a]);
    j["monoids"] = std::move(ms);
    return j.dump(2);
}

Schema schema_from_json(const std::string& text) {
    Json j = parse_json(text);
    Schema s;
    s.category = std::make_shared<FinCategory>(category_from_json(field(j, "category").dump()));
    s.monoids.assign(s.category->n_objects(), trivial_monoid());
    if (j.contains("monoids"))
        for (const auto& [obj, mj] : j.at("monoids").items())
            s.monoids.at(s.category->objects.index(obj)) = monoid_from(mj);
    s.validate();
    return s;
}

std::string instance_to_json(const Instance& inst) {
    Json j = copresheaf_json(inst.data);
    Json attrs = Json::object();
    for (int a = 0; a < inst.data.base->n_objects(); ++a) {
        Json col = Json::object();
        for (int r = 0; r < inst.data.rows[a].size(); ++r)
            col[inst.data.rows[a].label(r)] = value_json(inst.attributes[a][r]);
        attrs[inst.data.base->objects.label(a)] = std::move(col);
    }
    j["attributes"] = std::move(attrs);
    return j.dump(2);
}

Instance instance_from_json(const Schema& s, const std::string& text) {
    Json j = parse_json(text);
    Instance inst;
    inst.data = copresheaf_from(s.category, j);
    Json attrs = j.contains("attributes") ? j.at("attributes") : Json::object();
    for (int a = 0; a < s.category->n_objects(); ++a) {
        const std::string& obj = s.category->objects.label(a);
        std::vector<MonoidValue> col(inst.data.rows[a].size(), std::monostate{});
        if (attrs.contains(obj)) {
            for (const auto& [row, v] : attrs.at(obj).items())
                col.at(inst.data.rows[a].index(row)) = value_from(v);
        } else if (s.monoids[a].kind != MonoidKind::Trivial && !col.empty()) {
            throw ParseError("attributes missing for a non-trivial monoid", obj);
        }
        inst.attributes.push_back(std::move(col));
    }
    validate_instance(s, inst); // TypeMismatch on carrier violations
    return inst;
}

std::string query_to_json(const CatPtr& c, const DucQuery& q) {
    Json pats = Json::array();
    for (size_t k = 0; k < q.patterns.size(); ++k) {
        Json p = copresheaf_json(q.patterns[k]);
        p["name"] = q.names.label((int)k);
        pats.push_back(std::move(p));
    }
    (void)c;
    return Json{{"patterns", std::move(pats)}}.dump(2);
}

DucQuery query_from_json(const CatPtr& c, const std::string& text) {
    Json j = parse_json(text);
    DucQuery q;
    int k = 1;
    for (const auto& p : field(j, "patterns")) {
        q.patterns.push_back(copresheaf_from(c, p));
        q.names.add(p.contains("name") ? p.at("name").get<std::string>()
                                       : "q" + std::to_string(k));
        ++k;
    }
    return q;
}

std::string span_to_json(const Span& s) {
    Json apex = Json::array();
    for (int x = 0; x < s.apex.size(); ++x)
        apex.push_back({{"name", s.apex.label(x)},
                        {"left", s.left_set.label(s.to_left[x])},
                        {"right", s.right_set.label(s.to_right[x])}});
    return Json{{"left", s.left_set.labels()},
                {"right", s.right_set.labels()},
                {"apex", std::move(apex)}}
        .dump(2);
}

Span span_from_json(const std::string& text) {
    Json j = parse_json(text);
    Span s;
    s.left_set = label_set(field(j, "left"), "left");
    s.right_set = label_set(field(j, "right"), "right");
    for (const auto& e : field(j, "apex")) {
        s.apex.add(field(e, "name").get<std::string>());
        s.to_left.push_back(s.left_set.index(field(e, "left").get<std::string>()));
        s.to_right.push_back(s.right_set.index(field(e, "right").get<std::string>()));
    }
    s.validate();
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing", path);
    out << content;
}

} // namespace polyagg
