#pragma once

#include <variant>

#include "polyagg/span.hpp"

namespace polyagg {

// A multiset in canonical form: (label, count) pairs sorted by label.
using Multiset = std::vector<std::pair<std::string, int>>;

// One value of a commutative monoid.  monostate is the adjoined unit of the
// max/min monoids and the only inhabitant of the trivial monoid; integers
// serve the numeric monoids, strings the finite table monoids.
using MonoidValue = std::variant<std::monostate, long long, std::string, Multiset>;

std::string monoid_value_to_string(const MonoidValue& v);
Multiset multiset_of(std::vector<std::string> labels);

enum class MonoidKind { IntSum, IntProduct, MaxBottom, MinTop, Multiset, Trivial, Table };

// Commutative monoid with an unbiased fold over finite multisets of values.
struct CommMonoid {
    MonoidKind kind = MonoidKind::IntSum;
    FinLabelSet elements;              // table kind: carrier
    std::vector<std::vector<int>> op;  // table kind: binary operation
    int unit = -1;                     // table kind: unit element
    FinLabelSet universe;              // multiset kind: label universe

    // Exhaustively checks unit, commutativity and associativity of a table
    // monoid; builtins are structural.
    void validate() const;

    MonoidValue unit_value() const;
    bool contains(const MonoidValue& v) const;
    MonoidValue combine(const MonoidValue& a, const MonoidValue& b) const;
    // Unbiased fold; empty input gives the unit.  Table values are folded
    // left over their sorted order, which commutativity makes canonical.
    MonoidValue fold(std::vector<MonoidValue> xs) const;
};

CommMonoid int_sum_monoid();
CommMonoid int_product_monoid();
CommMonoid max_monoid();
CommMonoid min_monoid();
CommMonoid multiset_monoid(const FinLabelSet& universe);
CommMonoid trivial_monoid();
CommMonoid table_monoid(const FinLabelSet& elements, std::vector<std::vector<int>> op, int unit);

// Database schema: a category with a commutative monoid per object.
struct Schema {
    CatPtr category;
    std::vector<CommMonoid> monoids; // per object

    void validate() const;
};

// Instance: a finitary copresheaf plus an attribute value per row.
struct Instance {
    Copresheaf data;
    std::vector<std::vector<MonoidValue>> attributes; // per object, per row
};

// Checks shape and that every attribute inhabits its object's monoid.
void validate_instance(const Schema& s, const Instance& inst);

// Aggregate the attribute of a along the fibres of X_f, f: a -> a': for
// d in X_{a'} the fold of { alpha_a(e) : X_f(e) = d }; empty fibre = unit.
std::vector<MonoidValue> aggregate_along(const Schema& s, const Instance& inst, int f);

// Family of aggregates at one row: one component per infacing morphism.
struct PiComonadValue {
    std::vector<int> morphisms; // infacing morphisms of the row's object
    std::vector<MonoidValue> components;
};

// All aggregates of all rows: per object, per row, the full family.
std::vector<std::vector<PiComonadValue>> aggregate_all(const Schema& s, const Instance& inst);

// Fibres of X_f as canonical multisets of row labels.
std::vector<Multiset> group_by(const Copresheaf& x, int f);

// Pointwise counit/comultiplication laws of the aggregate family: the
// identity component returns the attribute, and the component at f;g equals
// folding the f-components along g.
LawReport pi_comonad_check(const Schema& s, const Instance& inst);

// Action of a function on tuples of monoid values: entry j of the result is
// the fold of the entries its fibre points at.
std::vector<MonoidValue> module_action(const CommMonoid& m, const FinFunction& f, int cod,
                                       const std::vector<MonoidValue>& tuple);

// Functoriality of module_action over the truncated skeleton of finite
// sets: identities act as identities and composites compose, checked on
// every tuple over a table carrier or on a deterministic value grid.
LawReport monoid_as_fin_module(const CommMonoid& m, int K);

// Schema whose aggregations are tagged: a span from objects to monoid tags;
// every tag occurrence carries its own attribute column.
struct GeneralizedSchema {
    CatPtr category;
    Span tags;                       // objects <- occurrences -> tags
    std::vector<CommMonoid> monoids; // per tag

    void validate() const;
};

struct GeneralizedInstance {
    Copresheaf data;
    std::vector<std::vector<MonoidValue>> attributes; // per occurrence, per row of its object
};

// Aggregate along f once per tag occurrence at dom(f); result indexed by
// occurrence, then by row of X_{cod f}.
std::vector<std::vector<MonoidValue>> aggregate_generalized(const GeneralizedSchema& s,
                                                            const GeneralizedInstance& inst,
                                                            int f);

} // namespace polyagg
