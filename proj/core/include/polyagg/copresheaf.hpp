#pragma once

#include "polyagg/category.hpp"

namespace polyagg {

// Set-valued functor on a finite category: a table of rows per object and a
// reindexing function per morphism.
struct Copresheaf {
    CatPtr base;
    std::vector<FinLabelSet> rows;          // per object
    std::vector<std::vector<int>> action;   // per morphism: rows(dom) -> rows(cod)

    int total_rows() const;
    void validate() const; // functoriality with witnesses

    static Copresheaf empty(const CatPtr& c);
    static Copresheaf constant(const CatPtr& c, const FinLabelSet& s); // only for discrete bases
    static Copresheaf representable(const CatPtr& c, int a); // rows at b = hom(a, b)
};

// Natural transformation: per object, a function on rows.
struct CopresheafHom {
    std::vector<std::vector<int>> at; // per object: source rows -> target row index

    bool operator==(const CopresheafHom& o) const { return at == o.at; }
};

void check_copresheaf_hom(const Copresheaf& p, const Copresheaf& x, const CopresheafHom& h);
CopresheafHom identity_hom(const Copresheaf& p);
CopresheafHom compose_homs(const Copresheaf& p, const CopresheafHom& f, const CopresheafHom& g);

// All natural transformations p -> x, found by backtracking with a
// most-constrained-first variable order; the result list is canonically
// sorted.  Throws SizeBlowup when more than cap are found.
std::vector<CopresheafHom> copresheaf_homs(const Copresheaf& p, const Copresheaf& x,
                                           std::uint64_t cap);

// Natural isomorphism search (bijective on every object).
bool copresheaves_isomorphic(const Copresheaf& p, const Copresheaf& q, std::uint64_t cap,
                             std::string* witness = nullptr);

bool copresheaves_equal(const Copresheaf& p, const Copresheaf& q); // labels and tables

// Objectwise product with componentwise action; pairs labeled "(x,y)".
Copresheaf product_copresheaf(const Copresheaf& p, const Copresheaf& q);
// Objectwise disjoint union, labels tagged l(x)/r(x).
Copresheaf coproduct_copresheaf(const Copresheaf& p, const Copresheaf& q);

} // namespace polyagg
