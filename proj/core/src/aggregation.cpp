#include "polyagg/aggregation.hpp"

#include <algorithm>

namespace polyagg {

std::string monoid_value_to_string(const MonoidValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return "()";
    if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    const Multiset& m = std::get<Multiset>(v);
    std::string s = "{";
    bool first = true;
    for (const auto& [l, c] : m)
        for (int i = 0; i < c; ++i) {
            if (!first) s += ",";
            first = false;
            s += l;
        }
    return s + "}";
}

Multiset multiset_of(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    Multiset m;
    for (const auto& l : labels) {
        if (!m.empty() && m.back().first == l)
            ++m.back().second;
        else
            m.emplace_back(l, 1);
    }
    return m;
}

void CommMonoid::validate() const {
    if (kind != MonoidKind::Table) return;
    int n = elements.size();
    if ((int)op.size() != n) throw WrongShape("monoid table has wrong size");
    for (const auto& row : op) check_fin_function(row, n, n, "monoid table row");
    if (unit < 0 || unit >= n) throw WrongShape("monoid unit out of range");
    for (int a = 0; a < n; ++a) {
        if (op[unit][a] != a || op[a][unit] != a)
            throw LawViolation("monoid unit law fails", elements.label(a));
        for (int b = 0; b < n; ++b) {
            if (op[a][b] != op[b][a])
                throw LawViolation("monoid is not commutative",
                                   elements.label(a) + "*" + elements.label(b));
            for (int c = 0; c < n; ++c)
                if (op[op[a][b]][c] != op[a][op[b][c]])
                    throw LawViolation("monoid is not associative",
                                       elements.label(a) + "*" + elements.label(b) + "*" +
                                           elements.label(c));
        }
    }
}

MonoidValue CommMonoid::unit_value() const {
    switch (kind) {
        case MonoidKind::IntSum: return (long long)0;
        case MonoidKind::IntProduct: return (long long)1;
        case MonoidKind::MaxBottom:
        case MonoidKind::MinTop:
        case MonoidKind::Trivial: return std::monostate{};
        case MonoidKind::Multiset: return Multiset{};
        case MonoidKind::Table: return elements.label(unit);
    }
    throw WrongShape("unknown monoid kind");
}

bool CommMonoid::contains(const MonoidValue& v) const {
    switch (kind) {
        case MonoidKind::IntSum:
        case MonoidKind::IntProduct: return std::holds_alternative<long long>(v);
        case MonoidKind::MaxBottom:
        case MonoidKind::MinTop:
            return std::holds_alternative<long long>(v) ||
                   std::holds_alternative<std::monostate>(v);
        case MonoidKind::Trivial: return std::holds_alternative<std::monostate>(v);
        case MonoidKind::Multiset: {
            if (!std::holds_alternative<Multiset>(v)) return false;
            for (const auto& [l, c] : std::get<Multiset>(v))
                if (c <= 0 || !universe.contains(l)) return false;
            return true;
        }
        case MonoidKind::Table:
            return std::holds_alternative<std::string>(v) &&
                   elements.contains(std::get<std::string>(v));
    }
    return false;
}

MonoidValue CommMonoid::combine(const MonoidValue& a, const MonoidValue& b) const {
    if (!contains(a) || !contains(b))
        throw TypeMismatch("value outside the monoid carrier",
                           monoid_value_to_string(a) + ", " + monoid_value_to_string(b));
    switch (kind) {
        case MonoidKind::IntSum: return std::get<long long>(a) + std::get<long long>(b);
        case MonoidKind::IntProduct: return std::get<long long>(a) * std::get<long long>(b);
        case MonoidKind::MaxBottom:
        case MonoidKind::MinTop: {
            if (std::holds_alternative<std::monostate>(a)) return b;
            if (std::holds_alternative<std::monostate>(b)) return a;
            long long x = std::get<long long>(a), y = std::get<long long>(b);
            return kind == MonoidKind::MaxBottom ? std::max(x, y) : std::min(x, y);
        }
        case MonoidKind::Trivial: return std::monostate{};
        case MonoidKind::Multiset: {
            Multiset out;
            const Multiset &x = std::get<Multiset>(a), &y = std::get<Multiset>(b);
            size_t i = 0, j = 0;
            while (i < x.size() || j < y.size()) {
                if (j == y.size() || (i < x.size() && x[i].first < y[j].first))
                    out.push_back(x[i++]);
                else if (i == x.size() || y[j].first < x[i].first)
                    out.push_back(y[j++]);
                else {
                    out.emplace_back(x[i].first, x[i].second + y[j].second);
                    ++i, ++j;
                }
            }
            return out;
        }
        case MonoidKind::Table:
            return elements.label(
                op[elements.index(std::get<std::string>(a))][elements.index(
                    std::get<std::string>(b))]);
    }
    throw WrongShape("unknown monoid kind");
}

MonoidValue CommMonoid::fold(std::vector<MonoidValue> xs) const {
    if (kind == MonoidKind::Table) {
        std::vector<std::string> labels;
        for (const auto& v : xs) {
            if (!contains(v))
                throw TypeMismatch("value outside the monoid carrier", monoid_value_to_string(v));
            labels.push_back(std::get<std::string>(v));
        }
        std::sort(labels.begin(), labels.end());
        xs.clear();
        for (auto& l : labels) xs.emplace_back(std::move(l));
    }
    MonoidValue acc = unit_value();
    for (const auto& v : xs) acc = combine(acc, v);
    return acc;
}

CommMonoid int_sum_monoid() { return CommMonoid{MonoidKind::IntSum, {}, {}, -1, {}}; }
CommMonoid int_product_monoid() { return CommMonoid{MonoidKind::IntProduct, {}, {}, -1, {}}; }
CommMonoid max_monoid() { return CommMonoid{MonoidKind::MaxBottom, {}, {}, -1, {}}; }
CommMonoid min_monoid() { return CommMonoid{MonoidKind::MinTop, {}, {}, -1, {}}; }
CommMonoid multiset_monoid(const FinLabelSet& universe) {
    return CommMonoid{MonoidKind::Multiset, {}, {}, -1, universe};
}
CommMonoid trivial_monoid() { return CommMonoid{MonoidKind::Trivial, {}, {}, -1, {}}; }
CommMonoid table_monoid(const FinLabelSet& elements, std::vector<std::vector<int>> op, int unit) {
    CommMonoid m{MonoidKind::Table, elements, std::move(op), unit, {}};
    m.validate();
    return m;
}

void Schema::validate() const {
    category->validate();
    if ((int)monoids.size() != category->n_objects())
        throw WrongShape("schema needs one monoid per object");
    for (const auto& m : monoids) m.validate();
}

void validate_instance(const Schema& s, const Instance& inst) {
    inst.data.validate();
    if (inst.data.base->objects != s.category->objects)
        throw TypeMismatch("instance lives over a different category");
    if ((int)inst.attributes.size() != s.category->n_objects())
        throw WrongShape("instance needs an attribute column per object");
    for (int a = 0; a < s.category->n_objects(); ++a) {
        if ((int)inst.attributes[a].size() != inst.data.rows[a].size())
            throw WrongShape("attribute column has wrong length", s.category->objects.label(a));
        for (const auto& v : inst.attributes[a])
            if (!s.monoids[a].contains(v))
                throw TypeMismatch("attribute value outside the monoid carrier",
                                   s.category->objects.label(a) + ": " +
                                       monoid_value_to_string(v));
    }
}

std::vector<MonoidValue> aggregate_along(const Schema& s, const Instance& inst, int f) {
    const FinCategory& c = *s.category;
    int a = c.morphisms.at(f).dom, a2 = c.morphisms.at(f).cod;
    std::vector<std::vector<MonoidValue>> fibres(inst.data.rows[a2].size());
    for (int e = 0; e < inst.data.rows[a].size(); ++e)
        fibres[inst.data.action[f][e]].push_back(inst.attributes[a][e]);
    std::vector<MonoidValue> out;
    for (auto& fibre : fibres) out.push_back(s.monoids[a].fold(std::move(fibre)));
    return out;
}

std::vector<std::vector<PiComonadValue>> aggregate_all(const Schema& s, const Instance& inst) {
    const FinCategory& c = *s.category;
    std::vector<std::vector<PiComonadValue>> out(c.n_objects());
    for (int j = 0; j < c.n_objects(); ++j) {
        std::vector<int> in = c.infacing(j);
        std::vector<PiComonadValue> per_row(inst.data.rows[j].size(), PiComonadValue{in, {}});
        for (int f : in) {
            auto agg = aggregate_along(s, inst, f);
            for (int x = 0; x < (int)per_row.size(); ++x)
                per_row[x].components.push_back(agg[x]);
        }
        out[j] = std::move(per_row);
    }
    return out;
}

std::vector<Multiset> group_by(const Copresheaf& x, int f) {
    // aggregation into the free commutative monoid with singleton attributes
    int a = x.base->morphisms.at(f).dom;
    Schema s{x.base, std::vector<CommMonoid>(x.base->n_objects(), trivial_monoid())};
    s.monoids[a] = multiset_monoid(x.rows[a]);
    Instance inst{x, {}};
    for (int b = 0; b < x.base->n_objects(); ++b) {
        std::vector<MonoidValue> col;
        for (int r = 0; r < x.rows[b].size(); ++r) {
            if (b == a)
                col.push_back(multiset_of({x.rows[b].label(r)}));
            else
                col.push_back(std::monostate{});
        }
        inst.attributes.push_back(std::move(col));
    }
    std::vector<Multiset> out;
    for (auto& v : aggregate_along(s, inst, f)) out.push_back(std::get<Multiset>(v));
    return out;
}

LawReport pi_comonad_check(const Schema& s, const Instance& inst) {
    validate_instance(s, inst);
    const FinCategory& c = *s.category;
    LawReport r;
    // counit: the identity component is the attribute itself
    for (int a = 0; a < c.n_objects(); ++a) {
        auto agg = aggregate_along(s, inst, c.identity[a]);
        for (int x = 0; x < inst.data.rows[a].size(); ++x)
            if (!(agg[x] == inst.attributes[a][x]))
                r.fail("identity aggregate differs from the attribute at " +
                       inst.data.rows[a].label(x));
    }
    // comultiplication: the composite component is the fold of the
    // first-leg components along the second leg
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g) {
            if (c.morphisms[f].cod != c.morphisms[g].dom) continue;
            int a = c.morphisms[f].dom, a2 = c.morphisms[f].cod, a3 = c.morphisms[g].cod;
            auto direct = aggregate_along(s, inst, c.compose_table[f][g]);
            auto first = aggregate_along(s, inst, f);
            for (int d = 0; d < inst.data.rows[a3].size(); ++d) {
                std::vector<MonoidValue> fibre;
                for (int e = 0; e < inst.data.rows[a2].size(); ++e)
                    if (inst.data.action[g][e] == d) fibre.push_back(first[e]);
                if (!(direct[d] == s.monoids[a].fold(std::move(fibre))))
                    r.fail("aggregate along " + c.morphisms[f].name + ";" + c.morphisms[g].name +
                           " does not refold at " + inst.data.rows[a3].label(d));
            }
        }
    return r;
}

std::vector<MonoidValue> module_action(const CommMonoid& m, const FinFunction& f, int cod,
                                       const std::vector<MonoidValue>& tuple) {
    if (f.size() != tuple.size()) throw WrongShape("tuple length does not match the function");
    std::vector<std::vector<MonoidValue>> fibres(cod);
    for (size_t i = 0; i < f.size(); ++i) fibres.at(f[i]).push_back(tuple[i]);
    std::vector<MonoidValue> out;
    for (auto& fibre : fibres) out.push_back(m.fold(std::move(fibre)));
    return out;
}

namespace {

// Deterministic test tuples of a given arity: every tuple over a table
// carrier, or a small grid of integers for the builtin monoids.
std::vector<std::vector<MonoidValue>> test_tuples(const CommMonoid& m, int arity) {
    std::vector<MonoidValue> values;
    switch (m.kind) {
        case MonoidKind::Table:
            for (const auto& l : m.elements.labels()) values.emplace_back(l);
            break;
        case MonoidKind::Trivial: values.emplace_back(std::monostate{}); break;
        case MonoidKind::Multiset:
            values.push_back(Multiset{});
            for (const auto& l : m.universe.labels()) values.push_back(multiset_of({l}));
            break;
        default:
            for (long long v : {0, 1, 2, 5}) values.emplace_back(v);
            if (m.kind == MonoidKind::MaxBottom || m.kind == MonoidKind::MinTop)
                values.emplace_back(std::monostate{});
    }
    std::vector<std::vector<MonoidValue>> out;
    std::vector<int> pick(arity, 0);
    while (true) {
        std::vector<MonoidValue> t;
        for (int i = 0; i < arity; ++i) t.push_back(values[pick[i]]);
        out.push_back(std::move(t));
        int i = arity - 1;
        while (i >= 0 && pick[i] + 1 == (int)values.size()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    return out;
}

} // namespace

LawReport monoid_as_fin_module(const CommMonoid& m, int K) {
    if (K > 8) throw RowTooLarge("skeleton truncation too large", std::to_string(K));
    m.validate();
    FinSkeleton sk = skeleton_fin(K);
    const FinCategory& c = sk.cat;
    LawReport r;
    for (int a = 0; a < c.n_objects(); ++a)
        for (const auto& t : test_tuples(m, a))
            if (module_action(m, sk.graph[c.identity[a]], a, t) != t)
                r.fail("identity action moves a tuple at arity " + std::to_string(a));
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g) {
            if (c.morphisms[f].cod != c.morphisms[g].dom) continue;
            int mid = c.morphisms[f].cod, out = c.morphisms[g].cod;
            int fg = c.compose_table[f][g];
            for (const auto& t : test_tuples(m, c.morphisms[f].dom)) {
                auto two_step = module_action(m, sk.graph[g], out,
                                              module_action(m, sk.graph[f], mid, t));
                if (module_action(m, sk.graph[fg], out, t) != two_step)
                    r.fail("module action not functorial on " + c.morphisms[f].name + ";" +
                           c.morphisms[g].name);
            }
        }
    return r;
}

void GeneralizedSchema::validate() const {
    category->validate();
    tags.validate();
    if (tags.left_set != category->objects)
        throw TypeMismatch("tag span must start at the schema objects");
    if ((int)monoids.size() != tags.right_set.size())
        throw WrongShape("one monoid per tag required");
    for (const auto& m : monoids) m.validate();
}

std::vector<std::vector<MonoidValue>> aggregate_generalized(const GeneralizedSchema& s,
                                                            const GeneralizedInstance& inst,
                                                            int f) {
    s.validate();
    inst.data.validate();
    const FinCategory& c = *s.category;
    int a = c.morphisms.at(f).dom, a2 = c.morphisms.at(f).cod;
    if ((int)inst.attributes.size() != s.tags.apex.size())
        throw WrongShape("one attribute column per tag occurrence required");
    std::vector<std::vector<MonoidValue>> out;
    for (int p = 0; p < s.tags.apex.size(); ++p) {
        if (s.tags.to_left[p] != a) continue;
        const CommMonoid& monoid = s.monoids[s.tags.to_right[p]];
        if ((int)inst.attributes[p].size() != inst.data.rows[a].size())
            throw WrongShape("attribute column has wrong length", s.tags.apex.label(p));
        std::vector<std::vector<MonoidValue>> fibres(inst.data.rows[a2].size());
        for (int e = 0; e < inst.data.rows[a].size(); ++e)
            fibres[inst.data.action[f][e]].push_back(inst.attributes[p][e]);
        std::vector<MonoidValue> col;
        for (auto& fibre : fibres) col.push_back(monoid.fold(std::move(fibre)));
        out.push_back(std::move(col));
    }
    return out;
}

} // namespace polyagg
