#pragma once

#include "polyagg/bicomodule.hpp"

namespace polyagg {

// Span of finite sets with named legs.
struct Span {
    FinLabelSet left_set, apex, right_set;
    FinFunction to_left, to_right;

    void validate() const;
};

// Bridge presentation D <- E -> B -> C of a bicomodule between discrete
// categories: B carries the positions (graded over C by h), E carries the
// pattern elements (graded over B by g and over D by f).
struct BridgeDiagram {
    FinLabelSet D, E, B, C;
    FinFunction f; // E -> D
    FinFunction g; // E -> B
    FinFunction h; // B -> C

    void validate() const;
};

Bicomodule bridge_to_bicomodule(const BridgeDiagram& br);
BridgeDiagram bicomodule_to_bridge(const Bicomodule& m); // needs discrete sides

// Linear bicomodules are spans: one pattern element per position.
bool is_linear(const Bicomodule& m);
Bicomodule span_to_bicomodule(const Span& s); // left graded by to_left
Span bicomodule_to_span(const Bicomodule& m); // needs linear, discrete sides
Span span_swap(const Span& s);

bool spans_equal_canonical(const Span& a, const Span& b); // up to apex reordering

// The dualizing object for the (C, D) duality: the linear polynomial on
// C x D.
Poly dualizing_object(const FinLabelSet& c, const FinLabelSet& d);

// Swap coefficients and exponents: linear bicomodules become conjunctive and
// back; anything else is NotDualizable.  Involutive on the nose.
Bicomodule dual(const Bicomodule& m);

// A linear bicomodule (a span) has a right adjoint, which is conjunctive;
// a conjunctive one has a left adjoint, which is linear.
Bicomodule right_adjoint(const Span& s);
Span left_adjoint(const Bicomodule& n); // needs conjunctive, discrete sides

// The two routes to the transpose; both must equal the leg swap.
Span transpose_dual_of_right_adjoint(const Span& s);
Span transpose_left_adjoint_of_dual(const Span& s);

// Composite span by pullback over the middle set.
Span compose_spans(const Span& s, const Span& t);
// Leg-preserving apex functions between parallel spans.
std::vector<FinFunction> span_maps(const Span& s, const Span& t, std::uint64_t cap);

// A category as a monoid in spans: apex = morphisms, legs cod/dom; the unit
// picks identities and the multiplication composes.
struct CatSpanMonad {
    Span span;                           // C <- morphisms -> C
    FinFunction unit;                    // objects -> apex
    std::vector<std::vector<int>> mult;  // mult[x][y] = y;x when dom x == cod y, else -1

    void validate() const; // monoid laws over the span composition
};

CatSpanMonad category_as_span_monad(const FinCategory& c);
// Opposite category obtained by dualizing the span monoid; table-equal to
// the direct transposition.
FinCategory opposite_via_dual(const FinCategory& c);

// Skeleton of finite sets truncated at K, with morphism graphs exposed.
struct FinSkeleton {
    FinCategory cat;                      // objects "0".."K"
    std::vector<std::vector<int>> graph;  // per morphism M->N: function ord M -> ord N
};

FinSkeleton skeleton_fin(int K, std::uint64_t cap = 1000000);
// The generic row copresheaf on the skeleton: N rows at object N.
Copresheaf skeleton_generic_copresheaf(const CatPtr& skeleton_cat,
                                       const std::vector<std::vector<int>>& graph);

// Classification of a copresheaf with rows of size at most K: the row-count
// functor into the skeleton.  Throws RowTooLarge beyond K.
struct FinClassification {
    std::vector<int> sizes;
    CatFunctor functor; // into skeleton_fin(K).cat
};

FinClassification classify_finitary(const Copresheaf& x, const CatPtr& skeleton_cat,
                                    const std::vector<std::vector<int>>& graph);

// Coclosure of conjunctive bicomodules between discrete categories:
// positions at a are kept, the pattern at a collects pairs (b, fibrewise map
// from the b-pattern of q into the a-pattern of p).
Bicomodule coclosure_conjunctive(const Bicomodule& p, const Bicomodule& q,
                                 std::uint64_t cap = 100000);

// Left closure of the span composition: the universal span hom(x, y) with
// its evaluation map hom(x,y) . x -> y.
struct SpanClosure {
    Span hom;                                  // over (A, B)
    std::vector<int> at_left, at_right;        // per hom-apex element: a, b
    std::vector<FinFunction> assignment;       // per element: x-apex -> y-apex (-1 off fibre)
    FinFunction eval;                          // on compose_spans(hom, x).apex -> y.apex
};

SpanClosure span_left_closure(const Span& x, const Span& y); // x: (B,C), y: (A,C)

} // namespace polyagg
