#pragma once

#include "polyagg/category.hpp"
#include "polyagg/poly.hpp"

namespace polyagg {

// Comonoid on an outfacing polynomial: positions are objects, the directions
// at an object are its outfacing morphisms.  The counit picks out
// identities; the comultiplication is stored in structured form (codomain
// assignment plus composition tables), which is exactly the data of a map
// into the substitution square without materializing that square.
struct Comonoid {
    Poly carrier;
    std::vector<int> counit;                     // per position: direction index
    std::vector<std::vector<int>> codomain;      // per position: per direction: position index
    // comp[a][f][g]: f a direction at a, g a direction at codomain[a][f];
    // the value is a direction at a (the composite f;g).
    std::vector<std::vector<std::vector<int>>> comp;

    void check_shape() const;
};

struct LawReport {
    bool ok = true;
    std::vector<std::string> violations;

    void fail(std::string w) {
        ok = false;
        violations.push_back(std::move(w));
    }
};

// Checks the two counit laws and coassociativity, pointwise along every leg
// of the comonoid diagrams; each violation carries a witness.
LawReport check_comonoid_laws(const Comonoid& m);

Comonoid category_to_comonoid(const FinCategory& c);
// Reads a category back off; throws LawViolation when the comonoid laws fail.
FinCategory comonoid_to_category(const Comonoid& m);
// Pure table transcription with no law checking; lets FinCategory::validate
// serve as an independent cross-check of the law checker.
FinCategory comonoid_to_category_raw(const Comonoid& m);

// Same objects, same morphism names, matching structure under name lookup
// (stored order may differ).
bool categories_isomorphic_by_names(const FinCategory& c, const FinCategory& d,
                                    std::string* witness = nullptr);

// The counit and comultiplication as genuine polynomial maps; the target of
// the comultiplication is the materialized substitution square, so this is
// only usable for small carriers.
PolyMap counit_as_polymap(const Comonoid& m);
PolyMap comult_as_polymap(const Comonoid& m);
// Canonical unit isomorphisms p -> y<p and p -> p<y of substitution.
PolyMap subst_left_unit(const Poly& p);
PolyMap subst_right_unit(const Poly& p);

// Dirichlet product of comonoids; decodes to the product category.
Comonoid comonoid_product(const Comonoid& m, const Comonoid& n);
FinCategory product_category(const FinCategory& c, const FinCategory& d);

// Cofunctor: forward on objects, backward on outfacing morphisms.
// back[a][k] answers: the k-th outfacing morphism of F(a) pulls back to
// which outfacing morphism of a (index into the outfacing list of a).
struct Cofunctor {
    CatPtr src, dst;
    std::vector<int> on_objects;
    std::vector<std::vector<int>> back;

    void validate() const; // identities, codomains, composites
};

Cofunctor identity_cofunctor(const CatPtr& c);
Cofunctor compose_cofunctors(const Cofunctor& f, const Cofunctor& g);
// Every etale functor determines a cofunctor by inverting the outfacing
// bijections; throws NotEtale otherwise.
Cofunctor cofunctor_from_etale(const CatFunctor& f);

// Full internal subcategory of a polynomial: objects are the positions,
// morphisms i -> i' are functions from the directions of i' to those of i.
FinCategory full_internal_subcategory(const Poly& p, std::uint64_t cap = 100000);

} // namespace polyagg
