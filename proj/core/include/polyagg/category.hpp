#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polyagg/labels.hpp"

namespace polyagg {

struct Morphism {
    std::string name;
    int dom, cod;
};

// Finite category with a total composition table over composable pairs.
struct FinCategory {
    FinLabelSet objects;
    std::vector<Morphism> morphisms; // names are distinct
    std::vector<int> identity;       // per object: morphism index
    // compose_table[f][g] = index of f;g when cod(f) == dom(g), else -1.
    std::vector<std::vector<int>> compose_table;

    int n_objects() const { return objects.size(); }
    int n_morphisms() const { return (int)morphisms.size(); }
    int compose(int f, int g) const; // f then g; throws if not composable
    int morphism_index(const std::string& name) const;

    // Morphisms with dom == a, in morphism-index order.  This is the
    // canonical enumeration of the outfacing set of a.
    std::vector<int> outfacing(int a) const;
    std::vector<int> infacing(int a) const; // cod == a

    // Throws LawViolation with a witness if identities, the composition
    // table, unitality or associativity fail.
    void validate() const;
};

using CatPtr = std::shared_ptr<const FinCategory>;

FinCategory discrete_category(const FinLabelSet& objects);
FinCategory terminal_category(); // one object, one morphism
// Free category on a chain a1 -> a2 -> ... -> an with all composites.
FinCategory chain_category(int n);
// One object, morphisms from a commutative-or-not monoid given by a table.
FinCategory monoid_category(const FinLabelSet& elements, const std::vector<std::vector<int>>& op,
                            int unit);
FinCategory codiscrete_category(const FinLabelSet& objects); // exactly one morphism between any two

// Product category: objects and morphisms are pairs, labels "(a,b)"/"(f,g)".
FinCategory product_category_direct(const FinCategory& c, const FinCategory& d);
// Opposite by table transposition; object and morphism names preserved.
FinCategory opposite_direct(const FinCategory& c);

bool categories_equal(const FinCategory& c, const FinCategory& d); // names and tables

// Functor: object and morphism assignments preserving all structure.
struct CatFunctor {
    CatPtr src, dst;
    std::vector<int> on_objects;
    std::vector<int> on_morphisms;

    void validate() const;
};

CatFunctor identity_functor(const CatPtr& c);
CatFunctor compose_functors(const CatFunctor& f, const CatFunctor& g);

// A functor is etale (a discrete opfibration) when for every source object a
// it maps the outfacing morphisms of a bijectively onto those of F(a).
bool is_etale(const CatFunctor& f, std::string* witness = nullptr);

// Enumerate all functors c -> d by backtracking over object and morphism
// assignments; deterministic order, capped.
std::vector<CatFunctor> enumerate_functors(const CatPtr& c, const CatPtr& d, std::uint64_t cap);

} // namespace polyagg
