#pragma once

#include "polyagg/comonoid.hpp"
#include "polyagg/copresheaf.hpp"

namespace polyagg {

// Two-sided comodule between categories, stored in "functor to queries"
// form: every left object gets a list of positions, each position a pattern
// copresheaf over the right category; every left morphism pushes positions
// forward and pulls patterns back.
struct Bicomodule {
    CatPtr left, right;
    std::vector<FinLabelSet> positions;                    // per left object
    std::vector<std::vector<Copresheaf>> patterns;         // per left object, per position
    std::vector<std::vector<int>> pos_map;                 // per left morphism
    // pattern_map[f][j]: patterns[cod f][pos_map[f][j]] -> patterns[dom f][j]
    std::vector<std::vector<CopresheafHom>> pattern_map;

    void validate() const;
    int total_positions() const;
};

bool bicomodules_equal(const Bicomodule& m, const Bicomodule& n);

// The underlying polynomial: one position per stored position, whose
// directions are all the rows of its pattern.  Cross-check hook against the
// polynomial layer (e.g. the identity bicomodule's carrier is the outfacing
// polynomial of its category).
Poly bicomodule_carrier(const Bicomodule& m);

// A query over d is a bicomodule from the terminal category: a coproduct of
// pattern copresheaves.  It is conjunctive when it has exactly one position.
struct DucQuery {
    std::vector<Copresheaf> patterns;
    FinLabelSet names;
};

Bicomodule query_to_bicomodule(const CatPtr& d, const DucQuery& q);
bool is_conjunctive(const Bicomodule& m);

// Number of query morphisms m_a -> n_a at one left object: forward on
// positions, backward on patterns.
std::uint64_t count_query_morphisms(const Bicomodule& m, const Bicomodule& n, int a,
                                    std::uint64_t cap);

// The unit bicomodule on c: one position per object with representable
// pattern; applying it returns the input copresheaf unchanged.
Bicomodule identity_bicomodule(const CatPtr& c);

// Copresheaves are bicomodules whose right side is the empty category.
Bicomodule copresheaf_to_bicomodule(const Copresheaf& x);
Copresheaf bicomodule_to_copresheaf(const Bicomodule& m);

// Run a bicomodule on a copresheaf over its right category: rows at a left
// object are pairs (position, matching of its pattern into x).
Copresheaf apply(const Bicomodule& m, const Copresheaf& x, std::uint64_t cap = 100000);

// Composite bicomodule: positions at a are pairs (i, assignment of the
// elements of the pattern of i to positions of n, naturally); the pattern at
// such a pair glues the chosen n-patterns along the d-action (objectwise
// disjoint union, then a union-find quotient).
Bicomodule compose_bicomodules(const Bicomodule& m, const Bicomodule& n,
                               std::uint64_t cap = 100000);

// Data migration along a functor.
Copresheaf migrate_delta(const CatFunctor& f, const Copresheaf& x); // x over dst
Copresheaf migrate_pi(const CatFunctor& f, const Copresheaf& x);    // x over src
Copresheaf migrate_sigma(const CatFunctor& f, const Copresheaf& x); // x over src; f etale

// Extension of scalars on both sides along cofunctors: the positions and
// patterns are kept, only their indexing objects are re-routed.
Bicomodule extend(const Bicomodule& m, const Cofunctor& alpha, const Cofunctor& beta);

// Local (objectwise) monoidal structure on bicomodules c -> d.
Bicomodule local_tensor(const Bicomodule& p, const Bicomodule& q);
Bicomodule local_unit(const CatPtr& c, const CatPtr& d);
// Internal hom for a discrete left category: positions at a are the query
// morphisms q_a -> r_a, the pattern at one is the disjoint union of the
// r-patterns it hits.  Throws WrongShape when the left category is not
// discrete.
Bicomodule local_hom_discrete(const Bicomodule& q, const Bicomodule& r,
                              std::uint64_t cap = 100000);

} // namespace polyagg
