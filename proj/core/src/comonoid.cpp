#include "polyagg/comonoid.hpp"

#include <algorithm>

namespace polyagg {

void Comonoid::check_shape() const {
    int n = carrier.size();
    if ((int)counit.size() != n || (int)codomain.size() != n || (int)comp.size() != n)
        throw WrongShape("comonoid tables have wrong size", "comonoid");
    for (int a = 0; a < n; ++a) {
        int nd = carrier.dir_count(a);
        if (counit[a] < 0 || counit[a] >= nd)
            throw WrongShape("counit out of range", carrier.at(a).label);
        if ((int)codomain[a].size() != nd || (int)comp[a].size() != nd)
            throw WrongShape("codomain/composition row has wrong size", carrier.at(a).label);
        for (int f = 0; f < nd; ++f) {
            int b = codomain[a][f];
            if (b < 0 || b >= n)
                throw WrongShape("codomain out of range", carrier.at(a).directions.label(f));
            if ((int)comp[a][f].size() != carrier.dir_count(b))
                throw WrongShape("composition row has wrong size",
                                 carrier.at(a).directions.label(f));
            for (int v : comp[a][f])
                if (v < 0 || v >= nd)
                    throw WrongShape("composite out of range", carrier.at(a).directions.label(f));
        }
    }
}

LawReport check_comonoid_laws(const Comonoid& m) {
    LawReport r;
    try {
        m.check_shape();
    } catch (const Error& e) {
        r.fail(e.what());
        return r;
    }
    const Poly& c = m.carrier;
    auto pos = [&](int a) { return c.at(a).label; };
    auto dir = [&](int a, int f) { return pos(a) + "." + c.at(a).directions.label(f); };

    for (int a = 0; a < c.size(); ++a) {
        int e = m.counit[a];
        // Erasing the left factor of the comultiplication must be the
        // identity: the counit's pick must be an endo-direction and
        // composing it on the left must do nothing.
        if (m.codomain[a][e] != a)
            r.fail("counit pick at " + pos(a) + " has codomain " + pos(m.codomain[a][e]));
        else
            for (int g = 0; g < c.dir_count(a); ++g)
                if (m.comp[a][e][g] != g)
                    r.fail("left unit fails: " + dir(a, e) + " ; " + dir(a, g) + " = " +
                           dir(a, m.comp[a][e][g]));
        // Erasing the right factor: composing with the counit pick at the
        // codomain must do nothing.
        for (int f = 0; f < c.dir_count(a); ++f) {
            int b = m.codomain[a][f];
            if (m.comp[a][f][m.counit[b]] != f)
                r.fail("right unit fails: " + dir(a, f) + " ; " + dir(b, m.counit[b]) + " = " +
                       dir(a, m.comp[a][f][m.counit[b]]));
        }
    }

    // Coassociativity, flattened to triples: both legs agree on where
    // composites point and on triple composition.
    for (int a = 0; a < c.size(); ++a)
        for (int f = 0; f < c.dir_count(a); ++f) {
            int b = m.codomain[a][f];
            for (int g = 0; g < c.dir_count(b); ++g) {
                int fg = m.comp[a][f][g];
                if (m.codomain[a][fg] != m.codomain[b][g]) {
                    r.fail("codomain of composite disagrees: " + dir(a, f) + " ; " + dir(b, g));
                    continue;
                }
                int d = m.codomain[b][g];
                for (int h = 0; h < c.dir_count(d); ++h)
                    if (m.comp[a][fg][h] != m.comp[a][f][m.comp[b][g][h]])
                        r.fail("coassociativity fails at " + dir(a, f) + " ; " + dir(b, g) +
                               " ; " + dir(d, h));
            }
        }
    return r;
}

Comonoid category_to_comonoid(const FinCategory& c) {
    Comonoid m;
    std::vector<std::vector<int>> outs(c.n_objects());
    std::vector<std::vector<int>> pos_in_out(c.n_objects(),
                                             std::vector<int>(c.n_morphisms(), -1));
    for (int a = 0; a < c.n_objects(); ++a) {
        outs[a] = c.outfacing(a);
        FinLabelSet dirs;
        for (size_t k = 0; k < outs[a].size(); ++k) {
            dirs.add(c.morphisms[outs[a][k]].name);
            pos_in_out[a][outs[a][k]] = (int)k;
        }
        m.carrier.positions.push_back({c.objects.label(a), std::move(dirs)});
    }
    for (int a = 0; a < c.n_objects(); ++a) {
        m.counit.push_back(pos_in_out[a][c.identity[a]]);
        std::vector<int> cods;
        std::vector<std::vector<int>> comps;
        for (int f : outs[a]) {
            int b = c.morphisms[f].cod;
            cods.push_back(b);
            std::vector<int> row;
            for (int g : outs[b]) row.push_back(pos_in_out[a][c.compose_table[f][g]]);
            comps.push_back(std::move(row));
        }
        m.codomain.push_back(std::move(cods));
        m.comp.push_back(std::move(comps));
    }
    return m;
}

FinCategory comonoid_to_category_raw(const Comonoid& m) {
    m.check_shape();
    const Poly& c = m.carrier;
    // Morphism names: direction labels, prefixed by the position when a
    // label repeats across positions.
    bool unique = true;
    {
        FinLabelSet all;
        for (const auto& p : c.positions)
            for (const auto& d : p.directions.labels())
                if (all.find(d) >= 0) unique = false;
                else all.add(d);
    }
    FinCategory cat;
    cat.objects = FinLabelSet{};
    for (const auto& p : c.positions) cat.objects.add(p.label);
    std::vector<std::vector<int>> mor_idx(c.size());
    for (int a = 0; a < c.size(); ++a)
        for (int f = 0; f < c.dir_count(a); ++f) {
            mor_idx[a].push_back((int)cat.morphisms.size());
            std::string name = c.at(a).directions.label(f);
            if (!unique) name = c.at(a).label + "." + name;
            cat.morphisms.push_back({std::move(name), a, m.codomain[a][f]});
        }
    for (int a = 0; a < c.size(); ++a) cat.identity.push_back(mor_idx[a][m.counit[a]]);
    int n = cat.n_morphisms();
    cat.compose_table.assign(n, std::vector<int>(n, -1));
    for (int a = 0; a < c.size(); ++a)
        for (int f = 0; f < c.dir_count(a); ++f) {
            int b = m.codomain[a][f];
            for (int g = 0; g < c.dir_count(b); ++g)
                cat.compose_table[mor_idx[a][f]][mor_idx[b][g]] = mor_idx[a][m.comp[a][f][g]];
        }
    return cat;
}

FinCategory comonoid_to_category(const Comonoid& m) {
    auto laws = check_comonoid_laws(m);
    if (!laws.ok) throw LawViolation("comonoid laws fail", laws.violations.front());
    FinCategory cat = comonoid_to_category_raw(m);
    cat.validate();
    return cat;
}

bool categories_isomorphic_by_names(const FinCategory& c, const FinCategory& d,
                                    std::string* witness) {
    auto bail = [&](const std::string& w) {
        if (witness) *witness = w;
        return false;
    };
    if (c.n_objects() != d.n_objects() || c.n_morphisms() != d.n_morphisms())
        return bail("sizes differ");
    std::vector<int> ob(c.n_objects()), mo(c.n_morphisms());
    for (int a = 0; a < c.n_objects(); ++a) {
        int b = d.objects.find(c.objects.label(a));
        if (b < 0) return bail("missing object " + c.objects.label(a));
        ob[a] = b;
    }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int g = -1;
        for (int k = 0; k < d.n_morphisms(); ++k)
            if (d.morphisms[k].name == c.morphisms[f].name) g = k;
        if (g < 0) return bail("missing morphism " + c.morphisms[f].name);
        if (d.morphisms[g].dom != ob[c.morphisms[f].dom] ||
            d.morphisms[g].cod != ob[c.morphisms[f].cod])
            return bail("endpoints differ for " + c.morphisms[f].name);
        mo[f] = g;
    }
    for (int a = 0; a < c.n_objects(); ++a)
        if (mo[c.identity[a]] != d.identity[ob[a]])
            return bail("identities differ at " + c.objects.label(a));
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g) {
            if (c.morphisms[f].cod != c.morphisms[g].dom) continue;
            if (mo[c.compose_table[f][g]] != d.compose_table[mo[f]][mo[g]])
                return bail("composites differ at " + c.morphisms[f].name + ";" +
                            c.morphisms[g].name);
        }
    return true;
}

PolyMap counit_as_polymap(const Comonoid& m) {
    PolyMap e{m.carrier, Poly::y(), {}, {}};
    for (int a = 0; a < m.carrier.size(); ++a) {
        e.on_positions.push_back(0);
        e.on_directions.push_back({m.counit[a]});
    }
    return e;
}

PolyMap comult_as_polymap(const Comonoid& m) {
    const Poly& c = m.carrier;
    Poly cc = substitute(c, c);
    // Offsets into the substitution layout: positions grouped by the outer
    // position, then by function code.
    std::vector<std::uint64_t> offsets;
    std::uint64_t off = 0;
    for (int i = 0; i < c.size(); ++i) {
        offsets.push_back(off);
        off += function_count(c.dir_count(i), c.size());
    }
    PolyMap d{c, cc, {}, {}};
    for (int a = 0; a < c.size(); ++a) {
        const auto& j = m.codomain[a];
        d.on_positions.push_back((int)(offsets[a] + encode_function(j, c.size())));
        std::vector<int> back;
        for (int f = 0; f < c.dir_count(a); ++f)
            for (int g = 0; g < c.dir_count(j[f]); ++g) back.push_back(m.comp[a][f][g]);
        d.on_directions.push_back(std::move(back));
    }
    return d;
}

PolyMap subst_left_unit(const Poly& p) {
    Poly yp = substitute(Poly::y(), p);
    PolyMap m{p, yp, {}, {}};
    for (int a = 0; a < p.size(); ++a) {
        m.on_positions.push_back(a); // the function y[*] -> p(1) picking a
        std::vector<int> back(p.dir_count(a));
        for (int e = 0; e < (int)back.size(); ++e) back[e] = e;
        m.on_directions.push_back(std::move(back));
    }
    return m;
}

PolyMap subst_right_unit(const Poly& p) {
    Poly py = substitute(p, Poly::y());
    PolyMap m{p, py, {}, {}};
    for (int a = 0; a < p.size(); ++a) {
        m.on_positions.push_back(a); // one function per position: all to y
        std::vector<int> back(p.dir_count(a));
        for (int e = 0; e < (int)back.size(); ++e) back[e] = e;
        m.on_directions.push_back(std::move(back));
    }
    return m;
}

Comonoid comonoid_product(const Comonoid& m, const Comonoid& n) {
    Comonoid r;
    r.carrier = dirichlet(m.carrier, n.carrier);
    int nb = n.carrier.size();
    for (int a = 0; a < m.carrier.size(); ++a)
        for (int b = 0; b < nb; ++b) {
            int nda = m.carrier.dir_count(a), ndb = n.carrier.dir_count(b);
            r.counit.push_back(m.counit[a] * ndb + n.counit[b]);
            std::vector<int> cods(nda * ndb);
            std::vector<std::vector<int>> comps(nda * ndb);
            for (int f = 0; f < nda; ++f)
                for (int g = 0; g < ndb; ++g) {
                    int ca = m.codomain[a][f], cb = n.codomain[b][g];
                    cods[f * ndb + g] = ca * nb + cb;
                    int nca = m.carrier.dir_count(ca), ncb = n.carrier.dir_count(cb);
                    std::vector<int> row(nca * ncb);
                    for (int f2 = 0; f2 < nca; ++f2)
                        for (int g2 = 0; g2 < ncb; ++g2)
                            row[f2 * ncb + g2] = m.comp[a][f][f2] * ndb + n.comp[b][g][g2];
                    comps[f * ndb + g] = std::move(row);
                }
            r.codomain.push_back(std::move(cods));
            r.comp.push_back(std::move(comps));
        }
    return r;
}

FinCategory product_category(const FinCategory& c, const FinCategory& d) {
    return comonoid_to_category(
        comonoid_product(category_to_comonoid(c), category_to_comonoid(d)));
}

void Cofunctor::validate() const {
    if ((int)on_objects.size() != src->n_objects() || (int)back.size() != src->n_objects())
        throw WrongShape("cofunctor tables have wrong size", "cofunctor");
    for (int a = 0; a < src->n_objects(); ++a) {
        int fa = on_objects[a];
        if (fa < 0 || fa >= dst->n_objects())
            throw WrongShape("object image out of range", src->objects.label(a));
        auto out_a = src->outfacing(a);
        auto out_fa = dst->outfacing(fa);
        if (back[a].size() != out_fa.size())
            throw WrongShape("backward map has wrong size", src->objects.label(a));
        for (size_t k = 0; k < out_fa.size(); ++k) {
            int v = back[a][k];
            if (v < 0 || v >= (int)out_a.size())
                throw WrongShape("backward value out of range", dst->morphisms[out_fa[k]].name);
            // Codomain coherence.
            if (on_objects[src->morphisms[out_a[v]].cod] != dst->morphisms[out_fa[k]].cod)
                throw LawViolation("cofunctor breaks codomains",
                                   dst->morphisms[out_fa[k]].name + " over " +
                                       src->objects.label(a));
        }
        // Identity law.
        int idk = -1;
        for (size_t k = 0; k < out_fa.size(); ++k)
            if (out_fa[k] == dst->identity[fa]) idk = (int)k;
        if (out_a[back[a][idk]] != src->identity[a])
            throw LawViolation("cofunctor breaks identities", src->objects.label(a));
    }
    // Composition law.
    for (int a = 0; a < src->n_objects(); ++a) {
        int fa = on_objects[a];
        auto out_a = src->outfacing(a);
        auto out_fa = dst->outfacing(fa);
        for (size_t k = 0; k < out_fa.size(); ++k) {
            int g1 = out_fa[k];
            int f1 = out_a[back[a][k]];
            int a2 = src->morphisms[f1].cod;
            auto out_a2 = src->outfacing(a2);
            auto out_fa2 = dst->outfacing(on_objects[a2]);
            for (size_t l = 0; l < out_fa2.size(); ++l) {
                int g2 = out_fa2[l];
                int f2 = out_a2[back[a2][l]];
                int g12 = dst->compose_table[g1][g2];
                int k12 = -1;
                for (size_t t = 0; t < out_fa.size(); ++t)
                    if (out_fa[t] == g12) k12 = (int)t;
                if (out_a[back[a][k12]] != src->compose_table[f1][f2])
                    throw LawViolation("cofunctor breaks composites",
                                       dst->morphisms[g1].name + ";" + dst->morphisms[g2].name +
                                           " over " + src->objects.label(a));
            }
        }
    }
}

Cofunctor identity_cofunctor(const CatPtr& c) {
    Cofunctor f{c, c, {}, {}};
    for (int a = 0; a < c->n_objects(); ++a) {
        f.on_objects.push_back(a);
        std::vector<int> b(c->outfacing(a).size());
        for (int k = 0; k < (int)b.size(); ++k) b[k] = k;
        f.back.push_back(std::move(b));
    }
    return f;
}

Cofunctor compose_cofunctors(const Cofunctor& f, const Cofunctor& g) {
    if (f.dst.get() != g.src.get() && !categories_equal(*f.dst, *g.src))
        throw WrongShape("cofunctors not composable", "compose_cofunctors");
    Cofunctor h{f.src, g.dst, {}, {}};
    for (int a = 0; a < f.src->n_objects(); ++a) {
        int fa = f.on_objects[a];
        h.on_objects.push_back(g.on_objects[fa]);
        const auto& gb = g.back[fa];
        std::vector<int> row(gb.size());
        for (size_t k = 0; k < gb.size(); ++k) row[k] = f.back[a][gb[k]];
        h.back.push_back(std::move(row));
    }
    return h;
}

Cofunctor cofunctor_from_etale(const CatFunctor& f) {
    std::string w;
    if (!is_etale(f, &w)) throw NotEtale("functor is not etale", w);
    Cofunctor c{f.src, f.dst, f.on_objects, {}};
    for (int a = 0; a < f.src->n_objects(); ++a) {
        auto out_a = f.src->outfacing(a);
        auto out_fa = f.dst->outfacing(f.on_objects[a]);
        std::vector<int> row(out_fa.size(), -1);
        for (size_t v = 0; v < out_a.size(); ++v) {
            int img = f.on_morphisms[out_a[v]];
            for (size_t k = 0; k < out_fa.size(); ++k)
                if (out_fa[k] == img) row[k] = (int)v;
        }
        c.back.push_back(std::move(row));
    }
    return c;
}

FinCategory full_internal_subcategory(const Poly& p, std::uint64_t cap) {
    std::uint64_t total = 0;
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < p.size(); ++j) {
            std::uint64_t h = checked_pow((std::uint64_t)p.dir_count(i),
                                          (std::uint64_t)p.dir_count(j));
            if (__builtin_add_overflow(total, h, &total) || total > cap)
                throw SizeBlowup("full internal subcategory exceeds cap", std::to_string(cap));
        }

    FinCategory cat;
    for (const auto& pos : p.positions) cat.objects.add(pos.label);
    // hom(i, i') = functions dirs(i') -> dirs(i); enumerate i-major then
    // i'-major then function code.
    std::vector<std::vector<std::vector<int>>> idx(p.size(),
                                                   std::vector<std::vector<int>>(p.size()));
    std::vector<std::vector<int>> fun; // stored graph per morphism
    for (int i = 0; i < p.size(); ++i)
        for (int i2 = 0; i2 < p.size(); ++i2) {
            int dom = p.dir_count(i2), cod = p.dir_count(i);
            if (cod == 0 && dom > 0) continue;
            std::uint64_t nf = function_count(dom, cod);
            for (std::uint64_t c = 0; c < nf; ++c) {
                auto f = decode_function(c, dom, cod);
                std::string name = "(" + p.at(i).label + "->" + p.at(i2).label + "|";
                for (int a = 0; a < dom; ++a) {
                    if (a) name += ",";
                    name += p.at(i).directions.label(f[a]);
                }
                name += ")";
                idx[i][i2].push_back((int)cat.morphisms.size());
                cat.morphisms.push_back({std::move(name), i, i2});
                fun.push_back(std::move(f));
            }
        }
    for (int i = 0; i < p.size(); ++i) {
        std::vector<int> id(p.dir_count(i));
        for (int d = 0; d < (int)id.size(); ++d) id[d] = d;
        cat.identity.push_back(idx[i][i][encode_function(id, p.dir_count(i))]);
    }
    int n = cat.n_morphisms();
    cat.compose_table.assign(n, std::vector<int>(n, -1));
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
            if (cat.morphisms[m1].cod != cat.morphisms[m2].dom) continue;
            int i = cat.morphisms[m1].dom, i3 = cat.morphisms[m2].cod;
            // m1: dirs(i') -> dirs(i), m2: dirs(i'') -> dirs(i'); composite
            // applies m2 first, then m1.
            std::vector<int> comp(fun[m2].size());
            for (size_t a = 0; a < comp.size(); ++a) comp[a] = fun[m1][fun[m2][a]];
            cat.compose_table[m1][m2] = idx[i][i3][encode_function(comp, p.dir_count(i))];
        }
    cat.validate();
    return cat;
}

} // namespace polyagg
