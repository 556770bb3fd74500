#pragma once

#include <random>

#include "polyagg/aggregation.hpp"
#include "polyagg/io.hpp"
#include "polyagg/span.hpp"

namespace polyagg {

// All generators are deterministic functions of the engine state, so a
// run is reproducible from its seed alone.
using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi); // uniform in [lo, hi]

Poly random_poly(Rng& rng, int max_positions = 4, int max_dirs = 4);

// Category of elements of a copresheaf: objects are rows, morphisms are
// (base morphism, row) pairs.  Its projection down to the base category is
// etale by construction.
FinCategory category_of_elements(const Copresheaf& x);
CatFunctor elements_projection(const Copresheaf& x, const CatPtr& elements);

// Draws from families that are finite by construction: discrete, chains,
// codiscrete, small monoids, products of those, and categories of elements
// of random copresheaves.
CatPtr random_category(Rng& rng, int max_objects = 6, int max_morphisms = 40);

// A random colimit of representables: a few representable summands glued
// along random element identifications, closed under the action.  Always
// functorial; validated before returning.
Copresheaf random_copresheaf(Rng& rng, const CatPtr& c, int max_summands = 3);

// A uniformly random functor among all functors src -> dst.
CatFunctor random_functor(Rng& rng, const CatPtr& src, const CatPtr& dst,
                          std::uint64_t cap = 20000);

Span random_span(Rng& rng, int max_side = 4, int max_apex = 6);
// Conjunctive bicomodule between discrete categories, in the canonical
// fiber form produced by right_adjoint.
Bicomodule random_conjunctive(Rng& rng, int max_side = 4, int max_apex = 6);

// Random bicomodule c -> d: positions form a random copresheaf on c, with
// one pattern per orbit of positions; composed with further random factors
// for depth, which produces non-identity pattern maps.
Bicomodule random_bicomodule(Rng& rng, const CatPtr& c, const CatPtr& d, int depth = 1);

CommMonoid random_monoid(Rng& rng);
MonoidValue random_value(Rng& rng, const CommMonoid& m);
Schema random_schema(Rng& rng, const CatPtr& c);
Instance random_instance(Rng& rng, const Schema& s);

// Rewrites one entry of the composition table to a different morphism and
// returns only mutants that genuinely break the category laws (checked by
// the independent table validator, not by the comonoid law checker under
// test).  Requires at least two morphisms.
FinCategory mutate_one_composite(Rng& rng, const FinCategory& c);

} // namespace polyagg
