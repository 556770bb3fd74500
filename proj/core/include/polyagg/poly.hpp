#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyagg/labels.hpp"

namespace polyagg {

// Polynomial in one variable: a finite list of positions, each carrying a
// finite set of directions.  y^3 + 2y + 1 is four positions with direction
// counts 3, 1, 1, 0.
struct Position {
    std::string label;
    FinLabelSet directions;
};

struct Poly {
    std::vector<Position> positions;

    int size() const { return (int)positions.size(); }
    const Position& at(int i) const { return positions.at(i); }
    int dir_count(int i) const { return positions.at(i).directions.size(); }
    int position_index(const std::string& label) const;

    // Canonical builders.
    static Poly zero();                       // no positions
    static Poly one();                        // a single position with no directions
    static Poly y();                          // a single position with one direction
    static Poly constant(const FinLabelSet& s);                 // |s| many y^0 positions
    static Poly linear(const FinLabelSet& s);                   // s . y
    static Poly monomial(const std::string& pos, const FinLabelSet& dirs);
    static Poly pure_power(int n);            // y^n
    static Poly from_exponents(const std::vector<int>& exps);   // sum of y^e
};

// Multiset of direction counts, sorted descending; polynomials are isomorphic
// iff these agree.
std::vector<int> poly_normal_form(const Poly& p);
bool poly_iso(const Poly& p, const Poly& q);
bool poly_equal(const Poly& p, const Poly& q); // structural, labels included

// Normal-form text like "y^3 + 2y + 1"; see also io.hpp for the parser.
std::string poly_to_string(const Poly& p);
std::string poly_to_labeled_string(const Poly& p);

// Map of polynomials: forward on positions, backward on directions.
struct PolyMap {
    Poly source, target;
    std::vector<int> on_positions;                // source position -> target position
    std::vector<std::vector<int>> on_directions;  // per source position: target dir -> source dir

    void validate() const;
};

PolyMap identity_map(const Poly& p);
PolyMap compose(const PolyMap& f, const PolyMap& g); // f then g
bool polymap_equal(const PolyMap& f, const PolyMap& g);

// --- arithmetic and monoidal structure ---------------------------------

Poly add(const Poly& p, const Poly& q);       // coproduct
Poly mul(const Poly& p, const Poly& q);       // categorical product
Poly substitute(const Poly& p, const Poly& q); // composition product: p after q
Poly dirichlet(const Poly& p, const Poly& q); // positions multiply, directions multiply

// Number of maps p -> q: product over positions i of sum over j of
// |p[i]| ^ |q[j]|.  Throws SizeBlowup on uint64 overflow.
std::uint64_t hom_count(const Poly& p, const Poly& q);

// All maps p -> q in a fixed deterministic order; throws SizeBlowup if the
// count exceeds cap.
std::vector<PolyMap> enumerate_maps(const Poly& p, const Poly& q, std::uint64_t cap);

// Internal hom [p, q]: positions are the maps p -> q, the direction set at a
// map phi is the disjoint union over positions i of q[phi(i)].
Poly internal_hom(const Poly& p, const Poly& q, std::uint64_t cap);

// Composition coclosure [p / q]: same positions as p, direction set at i is
// the set of positions of q applied to the set p[i].
Poly coclosure(const Poly& p, const Poly& q);

// p applied to a finite set: elements are pairs (position, function from its
// directions into x).
FinLabelSet evaluate(const Poly& p, const FinLabelSet& x);

// The interchange map (p<q) dirichlet (p'<q') -> (p dirichlet p') < (q dirichlet q'),
// where < is substitution.
PolyMap duoidal_map(const Poly& p, const Poly& q, const Poly& p2, const Poly& q2);

// Dirichlet transform: sum over positions i of p[i] . y, i.e. coefficients
// and exponents trade places one position at a time.
Poly dirichlet_transform(const Poly& p);

// Functorial action of the two monoidal products on maps.
PolyMap substitute_map(const PolyMap& f, const PolyMap& g);
PolyMap dirichlet_map(const PolyMap& f, const PolyMap& g);

// --- deterministic layout helpers --------------------------------------
// Functions dom -> [0, base) are coded in [0, base^dom) with the first
// argument as the most significant digit.  Shared by substitute, evaluate
// and enumerate_maps so that indices can be computed arithmetically.

std::uint64_t checked_pow(std::uint64_t b, std::uint64_t e);
std::uint64_t function_count(int dom, int cod); // cod^dom with overflow check
std::vector<int> decode_function(std::uint64_t code, int dom, int cod);
std::uint64_t encode_function(const std::vector<int>& f, int cod);

} // namespace polyagg
