#include "polyagg/bicomodule.hpp"

#include <algorithm>
#include <map>

#include "polyagg/union_find.hpp"

namespace polyagg {

void Bicomodule::validate() const {
    const FinCategory& c = *left;
    if ((int)positions.size() != c.n_objects() || (int)patterns.size() != c.n_objects() ||
        (int)pos_map.size() != c.n_morphisms() || (int)pattern_map.size() != c.n_morphisms())
        throw WrongShape("bicomodule tables have wrong size", "bicomodule");
    for (int a = 0; a < c.n_objects(); ++a) {
        if ((int)patterns[a].size() != positions[a].size())
            throw WrongShape("pattern count mismatch", c.objects.label(a));
        for (const auto& p : patterns[a]) p.validate();
    }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom, a2 = c.morphisms[f].cod;
        check_fin_function(pos_map[f], positions[a].size(), positions[a2].size(),
                           c.morphisms[f].name);
        if ((int)pattern_map[f].size() != positions[a].size())
            throw WrongShape("pattern map count mismatch", c.morphisms[f].name);
        for (int j = 0; j < positions[a].size(); ++j)
            check_copresheaf_hom(patterns[a2][pos_map[f][j]], patterns[a][j],
                                 pattern_map[f][j]);
    }
    // Functoriality: identities act trivially, composites factor.
    for (int a = 0; a < c.n_objects(); ++a) {
        int e = c.identity[a];
        for (int j = 0; j < positions[a].size(); ++j) {
            if (pos_map[e][j] != j)
                throw LawViolation("identity moves a position", positions[a].label(j));
            if (!(pattern_map[e][j] == identity_hom(patterns[a][j])))
                throw LawViolation("identity disturbs a pattern", positions[a].label(j));
        }
    }
    for (int f = 0; f < c.n_morphisms(); ++f)
        for (int g = 0; g < c.n_morphisms(); ++g) {
            if (c.morphisms[f].cod != c.morphisms[g].dom) continue;
            int fg = c.compose_table[f][g];
            int a = c.morphisms[f].dom, a3 = c.morphisms[g].cod;
            for (int j = 0; j < positions[a].size(); ++j) {
                int j2 = pos_map[f][j];
                if (pos_map[fg][j] != pos_map[g][j2])
                    throw LawViolation("position maps are not functorial",
                                       c.morphisms[f].name + ";" + c.morphisms[g].name);
                auto via = compose_homs(patterns[a3][pos_map[g][j2]], pattern_map[g][j2],
                                        pattern_map[f][j]);
                if (!(pattern_map[fg][j] == via))
                    throw LawViolation("pattern maps are not functorial",
                                       c.morphisms[f].name + ";" + c.morphisms[g].name +
                                           " at " + positions[a].label(j));
            }
        }
}

int Bicomodule::total_positions() const {
    int n = 0;
    for (const auto& p : positions) n += p.size();
    return n;
}

bool bicomodules_equal(const Bicomodule& m, const Bicomodule& n) {
    if (!categories_equal(*m.left, *n.left) || !categories_equal(*m.right, *n.right))
        return false;
    if (m.positions != n.positions || m.pos_map != n.pos_map) return false;
    for (size_t a = 0; a < m.patterns.size(); ++a) {
        if (m.patterns[a].size() != n.patterns[a].size()) return false;
        for (size_t j = 0; j < m.patterns[a].size(); ++j)
            if (!copresheaves_equal(m.patterns[a][j], n.patterns[a][j])) return false;
    }
    for (size_t f = 0; f < m.pattern_map.size(); ++f)
        if (!(m.pattern_map[f] == n.pattern_map[f])) return false;
    return true;
}

Poly bicomodule_carrier(const Bicomodule& m) {
    Poly p;
    for (int a = 0; a < m.left->n_objects(); ++a)
        for (int j = 0; j < m.positions[a].size(); ++j) {
            FinLabelSet dirs;
            const Copresheaf& pat = m.patterns[a][j];
            for (int b = 0; b < (int)pat.rows.size(); ++b)
                for (int r = 0; r < pat.rows[b].size(); ++r)
                    dirs.add(m.right->objects.label(b) + ":" + pat.rows[b].label(r));
            p.positions.push_back(
                {m.left->objects.label(a) + ":" + m.positions[a].label(j), std::move(dirs)});
        }
    return p;
}

Bicomodule query_to_bicomodule(const CatPtr& d, const DucQuery& q) {
    auto term = std::make_shared<FinCategory>(terminal_category());
    Bicomodule m{term, d, {q.names}, {q.patterns}, {{}}, {{}}};
    for (int j = 0; j < q.names.size(); ++j) {
        m.pos_map[0].push_back(j);
        m.pattern_map[0].push_back(identity_hom(q.patterns[j]));
    }
    return m;
}

bool is_conjunctive(const Bicomodule& m) {
    for (const auto& p : m.positions)
        if (p.size() != 1) return false;
    return true;
}

std::uint64_t count_query_morphisms(const Bicomodule& m, const Bicomodule& n, int a,
                                    std::uint64_t cap) {
    std::uint64_t total = 1;
    for (int j = 0; j < m.positions[a].size(); ++j) {
        std::uint64_t per = 0;
        for (int k = 0; k < n.positions[a].size(); ++k)
            per += (std::uint64_t)copresheaf_homs(n.patterns[a][k], m.patterns[a][j], cap).size();
        if (__builtin_mul_overflow(total, per, &total))
            throw SizeBlowup("query morphism count overflows");
    }
    return total;
}

Bicomodule identity_bicomodule(const CatPtr& c) {
    Bicomodule m{c, c, {}, {}, {}, {}};
    for (int a = 0; a < c->n_objects(); ++a) {
        m.positions.push_back(FinLabelSet({c->objects.label(a)}));
        m.patterns.push_back({Copresheaf::representable(c, a)});
    }
    for (int f = 0; f < c->n_morphisms(); ++f) {
        int a = c->morphisms[f].dom, a2 = c->morphisms[f].cod;
        m.pos_map.push_back({0});
        // precomposition by f: hom(a2, b) -> hom(a, b)
        CopresheafHom h;
        const Copresheaf& ra = m.patterns[a][0];
        const Copresheaf& ra2 = m.patterns[a2][0];
        for (int b = 0; b < c->n_objects(); ++b) {
            std::vector<int> comp(ra2.rows[b].size());
            for (int k = 0; k < (int)comp.size(); ++k) {
                int g = c->morphism_index(ra2.rows[b].label(k));
                comp[k] = ra.rows[b].index(c->morphisms[c->compose_table[f][g]].name);
            }
            h.at.push_back(std::move(comp));
        }
        m.pattern_map.push_back({std::move(h)});
    }
    return m;
}

Bicomodule copresheaf_to_bicomodule(const Copresheaf& x) {
    auto none = std::make_shared<FinCategory>(discrete_category(FinLabelSet{}));
    Bicomodule m{x.base, none, {}, {}, {}, {}};
    Copresheaf empty_pat = Copresheaf::empty(none);
    for (int a = 0; a < x.base->n_objects(); ++a) {
        m.positions.push_back(x.rows[a]);
        m.patterns.push_back(std::vector<Copresheaf>(x.rows[a].size(), empty_pat));
    }
    for (int f = 0; f < x.base->n_morphisms(); ++f) {
        m.pos_map.push_back(x.action[f]);
        m.pattern_map.push_back(std::vector<CopresheafHom>(x.rows[x.base->morphisms[f].dom].size(),
                                                           CopresheafHom{}));
    }
    return m;
}

Copresheaf bicomodule_to_copresheaf(const Bicomodule& m) {
    if (m.right->n_objects() != 0)
        throw WrongShape("only bicomodules into the empty category are copresheaves");
    Copresheaf x = Copresheaf::empty(m.left);
    x.rows = m.positions;
    x.action = m.pos_map;
    return x;
}

namespace {

std::string hom_key(const CopresheafHom& h) {
    std::string s;
    for (const auto& comp : h.at) {
        for (int v : comp) s += std::to_string(v) + ",";
        s += ";";
    }
    return s;
}

// n's positions organised as a copresheaf over n.left.
Copresheaf positions_copresheaf(const Bicomodule& n) {
    Copresheaf p = Copresheaf::empty(n.left);
    p.rows = n.positions;
    p.action = n.pos_map;
    return p;
}

} // namespace

Copresheaf apply(const Bicomodule& m, const Copresheaf& x, std::uint64_t cap) {
    const FinCategory& c = *m.left;
    Copresheaf out = Copresheaf::empty(m.left);
    // Matchings per (object, position), canonically ordered, with lookup.
    std::vector<std::vector<std::vector<CopresheafHom>>> matches(c.n_objects());
    std::vector<std::vector<std::map<std::string, int>>> lookup(c.n_objects());
    std::vector<std::vector<int>> offset(c.n_objects());
    for (int a = 0; a < c.n_objects(); ++a) {
        for (int j = 0; j < m.positions[a].size(); ++j) {
            offset[a].push_back(out.rows[a].size());
            auto homs = copresheaf_homs(m.patterns[a][j], x, cap);
            std::map<std::string, int> lk;
            for (size_t k = 0; k < homs.size(); ++k) {
                lk[hom_key(homs[k])] = (int)k;
                out.rows[a].add("(" + m.positions[a].label(j) + "|" + std::to_string(k) + ")");
            }
            matches[a].push_back(std::move(homs));
            lookup[a].push_back(std::move(lk));
        }
    }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom, a2 = c.morphisms[f].cod;
        for (int j = 0; j < m.positions[a].size(); ++j) {
            int j2 = m.pos_map[f][j];
            for (const auto& h : matches[a][j]) {
                auto h2 = compose_homs(m.patterns[a2][j2], m.pattern_map[f][j], h);
                auto it = lookup[a2][j2].find(hom_key(h2));
                if (it == lookup[a2][j2].end())
                    throw LawViolation("pushed matching is not a matching", c.morphisms[f].name);
                out.action[f].push_back(offset[a2][j2] + it->second);
            }
        }
    }
    out.validate();
    return out;
}

namespace {

// Pattern of a composite position: copies of n-patterns indexed by the
// elements of an m-pattern, glued along the middle category's action.
struct GluedPattern {
    Copresheaf cp;
    // copy index -> right object -> original row -> quotient row
    std::vector<std::vector<std::vector<int>>> class_of;
    std::vector<std::pair<int, int>> copies; // (middle object b, row x)
    std::vector<std::vector<int>> copy_at;   // per b: row x -> copy index
};

GluedPattern glue_patterns(const Bicomodule& n, const Copresheaf& mi, const CopresheafHom& phi) {
    const FinCategory& d = *n.left;
    const FinCategory& e = *n.right;
    GluedPattern g;
    g.copy_at.resize(d.n_objects());
    for (int b = 0; b < d.n_objects(); ++b)
        for (int x = 0; x < mi.rows[b].size(); ++x) {
            g.copy_at[b].push_back((int)g.copies.size());
            g.copies.emplace_back(b, x);
        }
    auto npat = [&](int copy) -> const Copresheaf& {
        auto [b, x] = g.copies[copy];
        return n.patterns[b][phi.at[b][x]];
    };

    // Global element ids per right object.
    int nc = (int)g.copies.size();
    std::vector<std::vector<int>> elem_offset(nc, std::vector<int>(e.n_objects(), 0));
    std::vector<int> totals(e.n_objects(), 0);
    for (int w = 0; w < e.n_objects(); ++w) {
        int off = 0;
        for (int copy = 0; copy < nc; ++copy) {
            elem_offset[copy][w] = off;
            off += npat(copy).rows[w].size();
        }
        totals[w] = off;
    }

    std::vector<UnionFind> uf;
    uf.reserve(e.n_objects());
    for (int w = 0; w < e.n_objects(); ++w) uf.emplace_back(totals[w]);

    for (int gm = 0; gm < d.n_morphisms(); ++gm) {
        int b = d.morphisms[gm].dom, b2 = d.morphisms[gm].cod;
        if (gm == d.identity[b]) continue;
        for (int x = 0; x < mi.rows[b].size(); ++x) {
            int x2 = mi.action[gm][x];
            int p = phi.at[b][x];
            const CopresheafHom& pm = n.pattern_map[gm][p]; // n[p'] -> n[p]
            int copy_src = g.copy_at[b2][x2];               // carries n[p']
            int copy_dst = g.copy_at[b][x];                 // carries n[p]
            for (int w = 0; w < e.n_objects(); ++w)
                for (int z = 0; z < npat(copy_src).rows[w].size(); ++z)
                    uf[w].unite(elem_offset[copy_src][w] + z,
                                elem_offset[copy_dst][w] + pm.at[w][z]);
        }
    }

    // Quotient rows, canonically labeled by their least member.
    g.cp = Copresheaf::empty(n.right);
    g.class_of.assign(nc, {});
    for (int copy = 0; copy < nc; ++copy) g.class_of[copy].resize(e.n_objects());
    for (int w = 0; w < e.n_objects(); ++w) {
        std::vector<std::string> least(totals[w]);
        std::vector<std::vector<std::pair<int, int>>> members(totals[w]); // (copy, row)
        for (int copy = 0; copy < nc; ++copy) {
            auto [b, x] = g.copies[copy];
            for (int z = 0; z < npat(copy).rows[w].size(); ++z) {
                int root = uf[w].find(elem_offset[copy][w] + z);
                std::string lbl = "(" + d.objects.label(b) + "." + mi.rows[b].label(x) + ":" +
                                  npat(copy).rows[w].label(z) + ")";
                if (least[root].empty() || lbl < least[root]) least[root] = lbl;
                members[root].emplace_back(copy, z);
            }
        }
        std::vector<int> roots;
        for (int r = 0; r < totals[w]; ++r)
            if (!members[r].empty()) roots.push_back(r);
        std::sort(roots.begin(), roots.end(),
                  [&](int l, int r) { return least[l] < least[r]; });
        std::vector<int> quot(totals[w], -1);
        for (size_t k = 0; k < roots.size(); ++k) {
            g.cp.rows[w].add(least[roots[k]]);
            quot[roots[k]] = (int)k;
        }
        for (int copy = 0; copy < nc; ++copy) {
            auto n_rows = npat(copy).rows[w].size();
            g.class_of[copy][w].resize(n_rows);
            for (int z = 0; z < n_rows; ++z)
                g.class_of[copy][w][z] = quot[uf[w].find(elem_offset[copy][w] + z)];
        }
    }

    // Induced action: act inside any member; verify independence of choice.
    for (int u = 0; u < e.n_morphisms(); ++u) {
        int w = e.morphisms[u].dom, w2 = e.morphisms[u].cod;
        std::vector<int> act(g.cp.rows[w].size(), -1);
        for (int copy = 0; copy < nc; ++copy)
            for (int z = 0; z < npat(copy).rows[w].size(); ++z) {
                int src = g.class_of[copy][w][z];
                int dst = g.class_of[copy][w2][npat(copy).action[u][z]];
                if (act[src] >= 0 && act[src] != dst)
                    throw LawViolation("glued action is ill-defined", e.morphisms[u].name);
                act[src] = dst;
            }
        g.cp.action[u] = std::move(act);
    }
    g.cp.validate();
    return g;
}

} // namespace

Bicomodule compose_bicomodules(const Bicomodule& m, const Bicomodule& n, std::uint64_t cap) {
    if (!categories_equal(*m.right, *n.left))
        throw WrongShape("middle categories disagree", "compose_bicomodules");
    const FinCategory& c = *m.left;
    Copresheaf npos = positions_copresheaf(n);

    Bicomodule r{m.left, n.right, {}, {}, {}, {}};
    // Per object: list of (i, phi) with glued pattern; lookup by (i, key(phi)).
    std::vector<std::vector<std::pair<int, CopresheafHom>>> pos(c.n_objects());
    std::vector<std::vector<GluedPattern>> glued(c.n_objects());
    std::vector<std::map<std::pair<int, std::string>, int>> lookup(c.n_objects());
    r.positions.resize(c.n_objects());
    r.patterns.resize(c.n_objects());
    for (int a = 0; a < c.n_objects(); ++a)
        for (int i = 0; i < m.positions[a].size(); ++i) {
            auto phis = copresheaf_homs(m.patterns[a][i], npos, cap);
            for (size_t k = 0; k < phis.size(); ++k) {
                lookup[a][{i, hom_key(phis[k])}] = (int)pos[a].size();
                r.positions[a].add("(" + m.positions[a].label(i) + "|" + std::to_string(k) + ")");
                glued[a].push_back(glue_patterns(n, m.patterns[a][i], phis[k]));
                r.patterns[a].push_back(glued[a].back().cp);
                pos[a].emplace_back(i, phis[k]);
            }
        }

    const FinCategory& e = *n.right;
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom, a2 = c.morphisms[f].cod;
        std::vector<int> pmap;
        std::vector<CopresheafHom> patmaps;
        for (size_t jj = 0; jj < pos[a].size(); ++jj) {
            auto [i, phi] = pos[a][jj];
            int i2 = m.pos_map[f][i];
            auto phi2 = compose_homs(m.patterns[a2][i2], m.pattern_map[f][i], phi);
            auto it = lookup[a2].find({i2, hom_key(phi2)});
            if (it == lookup[a2].end())
                throw LawViolation("pushed assignment not found", c.morphisms[f].name);
            int jj2 = it->second;
            pmap.push_back(jj2);

            // Glued-pattern comparison map: copies over a2 land in copies
            // over a via the backward pattern map of m.
            const GluedPattern& src = glued[a2][jj2];
            const GluedPattern& dst = glued[a][jj];
            CopresheafHom h;
            h.at.resize(e.n_objects());
            for (int w = 0; w < e.n_objects(); ++w)
                h.at[w].assign(src.cp.rows[w].size(), -1);
            for (size_t copy = 0; copy < src.copies.size(); ++copy) {
                auto [b, x2] = src.copies[copy];
                int x = m.pattern_map[f][i].at[b][x2];
                int copy_dst = dst.copy_at[b][x];
                for (int w = 0; w < e.n_objects(); ++w)
                    for (size_t z = 0; z < src.class_of[copy][w].size(); ++z) {
                        int from = src.class_of[copy][w][z];
                        int to = dst.class_of[copy_dst][w][z];
                        if (h.at[w][from] >= 0 && h.at[w][from] != to)
                            throw LawViolation("glued comparison ill-defined",
                                               c.morphisms[f].name);
                        h.at[w][from] = to;
                    }
            }
            patmaps.push_back(std::move(h));
        }
        r.pos_map.push_back(std::move(pmap));
        r.pattern_map.push_back(std::move(patmaps));
    }
    r.validate();
    return r;
}

Copresheaf migrate_delta(const CatFunctor& f, const Copresheaf& x) {
    Copresheaf out = Copresheaf::empty(f.src);
    for (int a = 0; a < f.src->n_objects(); ++a) out.rows[a] = x.rows[f.on_objects[a]];
    for (int m = 0; m < f.src->n_morphisms(); ++m) out.action[m] = x.action[f.on_morphisms[m]];
    out.validate();
    return out;
}

namespace {

std::string family_key(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += std::to_string(x) + ",";
    return s;
}

} // namespace

Copresheaf migrate_pi(const CatFunctor& f, const Copresheaf& x) {
    const FinCategory& c = *f.src;
    const FinCategory& d = *f.dst;
    Copresheaf out = Copresheaf::empty(f.dst);

    // Index set at b: pairs (a in c, u: b -> F a in d), in (a, u) order.
    std::vector<std::vector<std::pair<int, int>>> index(d.n_objects());
    for (int b = 0; b < d.n_objects(); ++b)
        for (int a = 0; a < c.n_objects(); ++a)
            for (int u = 0; u < d.n_morphisms(); ++u)
                if (d.morphisms[u].dom == b && d.morphisms[u].cod == f.on_objects[a])
                    index[b].emplace_back(a, u);

    // Families: per (a,u) a row of x at a, natural in a.
    std::vector<std::vector<std::vector<int>>> families(d.n_objects());
    std::vector<std::map<std::string, int>> lookup(d.n_objects());
    for (int b = 0; b < d.n_objects(); ++b) {
        const auto& idx = index[b];
        int n = (int)idx.size();
        std::map<std::pair<int, int>, int> slot;
        for (int k = 0; k < n; ++k) slot[idx[k]] = k;

        std::vector<int> assign(n, -1);
        std::function<void(int)> go = [&](int k) {
            if (k == n) {
                families[b].push_back(assign);
                return;
            }
            auto [a, u] = idx[k];
            for (int v = 0; v < x.rows[a].size(); ++v) {
                assign[k] = v;
                bool ok = true;
                // check every naturality constraint touching decided slots
                for (int m = 0; m < c.n_morphisms() && ok; ++m) {
                    int ma = c.morphisms[m].dom, ma2 = c.morphisms[m].cod;
                    for (int t = 0; t <= k && ok; ++t) {
                        auto [ta, tu] = idx[t];
                        if (ta != ma) continue;
                        int u2 = d.compose_table[tu][f.on_morphisms[m]];
                        int t2 = slot[{ma2, u2}];
                        if (t2 > k || assign[t2] < 0) continue;
                        if (assign[t2] != x.action[m][assign[t]]) ok = false;
                    }
                }
                if (ok) go(k + 1);
            }
            assign[k] = -1;
        };
        go(0);
        std::sort(families[b].begin(), families[b].end());
        for (size_t k = 0; k < families[b].size(); ++k) {
            lookup[b][family_key(families[b][k])] = (int)k;
            std::string lbl = "<";
            for (int t = 0; t < n; ++t) {
                if (t) lbl += ",";
                lbl += x.rows[index[b][t].first].label(families[b][k][t]);
            }
            out.rows[b].add(lbl + ">");
        }
    }

    for (int g = 0; g < d.n_morphisms(); ++g) {
        int b = d.morphisms[g].dom, b2 = d.morphisms[g].cod;
        std::map<std::pair<int, int>, int> slot_b;
        for (size_t k = 0; k < index[b].size(); ++k) slot_b[index[b][k]] = (int)k;
        for (const auto& fam : families[b]) {
            std::vector<int> out_fam(index[b2].size());
            for (size_t t = 0; t < index[b2].size(); ++t) {
                auto [a, u2] = index[b2][t];
                int u = d.compose_table[g][u2];
                out_fam[t] = fam[slot_b[{a, u}]];
            }
            auto it = lookup[b2].find(family_key(out_fam));
            if (it == lookup[b2].end())
                throw LawViolation("reindexed family is not natural", d.morphisms[g].name);
            out.action[g].push_back(it->second);
        }
    }
    out.validate();
    return out;
}

Copresheaf migrate_sigma(const CatFunctor& f, const Copresheaf& x) {
    std::string w;
    if (!is_etale(f, &w)) throw NotEtale("direct image needs an etale functor", w);
    const FinCategory& c = *f.src;
    const FinCategory& d = *f.dst;
    Copresheaf out = Copresheaf::empty(f.dst);
    std::vector<std::vector<std::pair<int, int>>> fibre(d.n_objects()); // (a, row)
    for (int a = 0; a < c.n_objects(); ++a)
        for (int r = 0; r < x.rows[a].size(); ++r) {
            int b = f.on_objects[a];
            fibre[b].emplace_back(a, r);
            out.rows[b].add("(" + c.objects.label(a) + ":" + x.rows[a].label(r) + ")");
        }
    for (int g = 0; g < d.n_morphisms(); ++g) {
        int b = d.morphisms[g].dom;
        for (auto [a, r] : fibre[b]) {
            // unique lift of g through a
            int lift = -1;
            for (int m : c.outfacing(a))
                if (f.on_morphisms[m] == g) lift = m;
            if (lift < 0) throw NotEtale("missing lift", d.morphisms[g].name);
            int a2 = c.morphisms[lift].cod;
            int r2 = x.action[lift][r];
            // locate (a2, r2) in the fibre over cod g
            int b2 = d.morphisms[g].cod;
            int pos = -1;
            for (size_t k = 0; k < fibre[b2].size(); ++k)
                if (fibre[b2][k] == std::make_pair(a2, r2)) pos = (int)k;
            out.action[g].push_back(pos);
        }
    }
    out.validate();
    return out;
}

Bicomodule extend(const Bicomodule& m, const Cofunctor& alpha, const Cofunctor& beta) {
    if (!categories_equal(*alpha.src, *m.left) || !categories_equal(*beta.src, *m.right))
        throw WrongShape("cofunctor endpoints disagree with the bicomodule", "extend");
    const FinCategory& c = *m.left;
    const FinCategory& d = *m.right;
    const FinCategory& c2 = *alpha.dst;
    const FinCategory& d2 = *beta.dst;

    // Row regrouping of a pattern over d into one over d'.
    std::vector<std::vector<int>> dfib(d2.n_objects()); // d-objects over each d'-object
    for (int b = 0; b < d.n_objects(); ++b) dfib[beta.on_objects[b]].push_back(b);
    auto reroute = [&](const Copresheaf& p) {
        Copresheaf q = Copresheaf::empty(beta.dst);
        std::vector<std::vector<int>> offset(d.n_objects());
        for (int b2 = 0; b2 < d2.n_objects(); ++b2)
            for (int b : dfib[b2]) {
                offset[b].assign(1, q.rows[b2].size());
                for (const auto& z : p.rows[b].labels())
                    q.rows[b2].add("(" + d.objects.label(b) + "." + z + ")");
            }
        for (int g2 = 0; g2 < d2.n_morphisms(); ++g2) {
            int b2 = d2.morphisms[g2].dom;
            for (int b : dfib[b2]) {
                auto out_b2 = d2.outfacing(beta.on_objects[b]);
                int k = -1;
                for (size_t t = 0; t < out_b2.size(); ++t)
                    if (out_b2[t] == g2) k = (int)t;
                int g = d.outfacing(b)[beta.back[b][k]];
                int bc = d.morphisms[g].cod;
                for (int z = 0; z < p.rows[b].size(); ++z)
                    q.action[g2].push_back(offset[bc][0] + p.action[g][z]);
            }
        }
        return q;
    };
    std::vector<std::vector<int>> cfib(c2.n_objects());
    for (int a = 0; a < c.n_objects(); ++a) cfib[alpha.on_objects[a]].push_back(a);

    Bicomodule r{alpha.dst, beta.dst, {}, {}, {}, {}};
    r.positions.resize(c2.n_objects());
    r.patterns.resize(c2.n_objects());
    std::vector<std::vector<int>> offset(c.n_objects());
    for (int a2 = 0; a2 < c2.n_objects(); ++a2)
        for (int a : cfib[a2]) {
            offset[a].assign(1, r.positions[a2].size());
            for (int j = 0; j < m.positions[a].size(); ++j) {
                r.positions[a2].add("(" + c.objects.label(a) + "." + m.positions[a].label(j) + ")");
                r.patterns[a2].push_back(reroute(m.patterns[a][j]));
            }
        }

    // Rerouted pattern maps: the regrouping is per d-object, so a hom's
    // components concatenate in the same order as the rows do.
    auto regroup_hom = [&](const Copresheaf& src_d, const Copresheaf& dst_d,
                           const CopresheafHom& h) {
        CopresheafHom h2;
        h2.at.resize(d2.n_objects());
        for (int b2 = 0; b2 < d2.n_objects(); ++b2) {
            std::vector<int> dst_offset(d.n_objects(), 0);
            int off = 0;
            for (int b : dfib[b2]) {
                dst_offset[b] = off;
                off += dst_d.rows[b].size();
            }
            for (int b : dfib[b2])
                for (int z = 0; z < src_d.rows[b].size(); ++z)
                    h2.at[b2].push_back(dst_offset[b] + h.at[b][z]);
        }
        return h2;
    };

    for (int f2 = 0; f2 < c2.n_morphisms(); ++f2) {
        int a2 = c2.morphisms[f2].dom;
        std::vector<int> pmap;
        std::vector<CopresheafHom> patmaps;
        for (int a : cfib[a2]) {
            auto out_a2 = c2.outfacing(alpha.on_objects[a]);
            int k = -1;
            for (size_t t = 0; t < out_a2.size(); ++t)
                if (out_a2[t] == f2) k = (int)t;
            int f = c.outfacing(a)[alpha.back[a][k]];
            int ac = c.morphisms[f].cod;
            for (int j = 0; j < m.positions[a].size(); ++j) {
                pmap.push_back(offset[ac][0] + m.pos_map[f][j]);
                patmaps.push_back(regroup_hom(m.patterns[ac][m.pos_map[f][j]],
                                              m.patterns[a][j], m.pattern_map[f][j]));
            }
        }
        r.pos_map.push_back(std::move(pmap));
        r.pattern_map.push_back(std::move(patmaps));
    }
    r.validate();
    return r;
}

Bicomodule local_tensor(const Bicomodule& p, const Bicomodule& q) {
    if (!categories_equal(*p.left, *q.left) || !categories_equal(*p.right, *q.right))
        throw WrongShape("local tensor needs parallel bicomodules", "local_tensor");
    const FinCategory& c = *p.left;
    const FinCategory& d = *p.right;
    Bicomodule r{p.left, p.right, {}, {}, {}, {}};
    r.positions.resize(c.n_objects());
    r.patterns.resize(c.n_objects());
    for (int a = 0; a < c.n_objects(); ++a)
        for (int i = 0; i < p.positions[a].size(); ++i)
            for (int j = 0; j < q.positions[a].size(); ++j) {
                r.positions[a].add("(" + p.positions[a].label(i) + "," +
                                   q.positions[a].label(j) + ")");
                r.patterns[a].push_back(product_copresheaf(p.patterns[a][i], q.patterns[a][j]));
            }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom, a2 = c.morphisms[f].cod;
        int nq = q.positions[a].size(), nq2 = q.positions[a2].size();
        std::vector<int> pmap;
        std::vector<CopresheafHom> patmaps;
        for (int i = 0; i < p.positions[a].size(); ++i)
            for (int j = 0; j < nq; ++j) {
                int i2 = p.pos_map[f][i], j2 = q.pos_map[f][j];
                pmap.push_back(i2 * nq2 + j2);
                const auto& hp = p.pattern_map[f][i];
                const auto& hq = q.pattern_map[f][j];
                CopresheafHom h;
                for (int b = 0; b < d.n_objects(); ++b) {
                    int n2 = q.patterns[a2][j2].rows[b].size();
                    int n1t = q.patterns[a][j].rows[b].size();
                    std::vector<int> comp;
                    comp.reserve(p.patterns[a2][i2].rows[b].size() * n2);
                    for (int x = 0; x < p.patterns[a2][i2].rows[b].size(); ++x)
                        for (int y = 0; y < n2; ++y)
                            comp.push_back(hp.at[b][x] * n1t + hq.at[b][y]);
                    h.at.push_back(std::move(comp));
                }
                patmaps.push_back(std::move(h));
            }
        r.pos_map.push_back(std::move(pmap));
        r.pattern_map.push_back(std::move(patmaps));
    }
    r.validate();
    return r;
}

Bicomodule local_unit(const CatPtr& c, const CatPtr& d) {
    // Terminal pattern at every object: the unit for the objectwise product.
    Copresheaf term = Copresheaf::empty(d);
    for (int b = 0; b < d->n_objects(); ++b) term.rows[b].add("*");
    for (int g = 0; g < d->n_morphisms(); ++g) term.action[g].push_back(0);
    Bicomodule r{c, d, {}, {}, {}, {}};
    for (int a = 0; a < c->n_objects(); ++a) {
        r.positions.push_back(FinLabelSet({"*"}));
        r.patterns.push_back({term});
    }
    for (int f = 0; f < c->n_morphisms(); ++f) {
        r.pos_map.push_back({0});
        r.pattern_map.push_back({identity_hom(term)});
    }
    return r;
}

Bicomodule local_hom_discrete(const Bicomodule& q, const Bicomodule& r, std::uint64_t cap) {
    const FinCategory& c = *q.left;
    for (int f = 0; f < c.n_morphisms(); ++f)
        if (c.morphisms[f].dom != c.morphisms[f].cod || c.identity[c.morphisms[f].dom] != f)
            throw WrongShape("internal hom needs a discrete left category", c.morphisms[f].name);
    if (!categories_equal(*q.left, *r.left) || !categories_equal(*q.right, *r.right))
        throw WrongShape("internal hom needs parallel bicomodules", "local_hom_discrete");
    const FinCategory& d = *q.right;

    Bicomodule out{q.left, q.right, {}, {}, {}, {}};
    out.positions.resize(c.n_objects());
    out.patterns.resize(c.n_objects());
    for (int a = 0; a < c.n_objects(); ++a) {
        // choices per q-position: (r-position, backward pattern hom)
        std::vector<std::vector<std::pair<int, CopresheafHom>>> choices(q.positions[a].size());
        for (int j = 0; j < q.positions[a].size(); ++j)
            for (int k = 0; k < r.positions[a].size(); ++k)
                for (auto& h : copresheaf_homs(r.patterns[a][k], q.patterns[a][j], cap))
                    choices[j].emplace_back(k, std::move(h));
        bool any_empty = false;
        for (const auto& ch : choices) any_empty |= ch.empty();
        if (!choices.empty() && any_empty) continue;

        std::vector<size_t> odo(choices.size(), 0);
        int idx = 0;
        while (true) {
            // pattern: disjoint union of the chosen r-patterns over j
            Copresheaf pat = Copresheaf::empty(q.right);
            for (size_t j = 0; j < choices.size(); ++j) {
                const Copresheaf& rp = r.patterns[a][choices[j][odo[j]].first];
                std::vector<int> offset(d.n_objects());
                for (int b = 0; b < d.n_objects(); ++b) {
                    offset[b] = pat.rows[b].size();
                    for (const auto& z : rp.rows[b].labels())
                        pat.rows[b].add("(" + q.positions[a].label((int)j) + ":" + z + ")");
                }
                for (int g = 0; g < d.n_morphisms(); ++g)
                    for (int z = 0; z < rp.rows[d.morphisms[g].dom].size(); ++z)
                        pat.action[g].push_back(offset[d.morphisms[g].cod] + rp.action[g][z]);
            }
            out.positions[a].add("m" + std::to_string(idx++));
            out.patterns[a].push_back(std::move(pat));
            if ((std::uint64_t)idx > cap)
                throw SizeBlowup("internal hom exceeds cap", std::to_string(cap));

            int j = (int)choices.size() - 1;
            for (; j >= 0; --j) {
                if (++odo[j] < choices[j].size()) break;
                odo[j] = 0;
            }
            if (j < 0) break;
        }
    }
    for (int f = 0; f < c.n_morphisms(); ++f) {
        int a = c.morphisms[f].dom;
        std::vector<int> pmap;
        std::vector<CopresheafHom> patmaps;
        for (int j = 0; j < out.positions[a].size(); ++j) {
            pmap.push_back(j);
            patmaps.push_back(identity_hom(out.patterns[a][j]));
        }
        out.pos_map.push_back(std::move(pmap));
        out.pattern_map.push_back(std::move(patmaps));
    }
    out.validate();
    return out;
}

} // namespace polyagg
