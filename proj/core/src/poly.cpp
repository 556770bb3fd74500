#include "polyagg/poly.hpp"

#include <algorithm>
#include <map>

namespace polyagg {

int Poly::position_index(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (positions[i].label == label) return i;
    throw ParseError("unknown position label", label);
}

Poly Poly::zero() { return Poly{}; }

Poly Poly::one() {
    Poly p;
    p.positions.push_back({"1", FinLabelSet{}});
    return p;
}

Poly Poly::y() {
    Poly p;
    p.positions.push_back({"1", FinLabelSet({"*"})});
    return p;
}

Poly Poly::constant(const FinLabelSet& s) {
    Poly p;
    for (const auto& l : s.labels()) p.positions.push_back({l, FinLabelSet{}});
    return p;
}

Poly Poly::linear(const FinLabelSet& s) {
    Poly p;
    for (const auto& l : s.labels()) p.positions.push_back({l, FinLabelSet({"*"})});
    return p;
}

Poly Poly::monomial(const std::string& pos, const FinLabelSet& dirs) {
    Poly p;
    p.positions.push_back({pos, dirs});
    return p;
}

Poly Poly::pure_power(int n) {
    Poly p;
    p.positions.push_back({"1", numbered_set("d", n)});
    return p;
}

Poly Poly::from_exponents(const std::vector<int>& exps) {
    Poly p;
    for (int i = 0; i < (int)exps.size(); ++i)
        p.positions.push_back({"i" + std::to_string(i + 1), numbered_set("d", exps[i])});
    return p;
}

std::vector<int> poly_normal_form(const Poly& p) {
    std::vector<int> nf;
    nf.reserve(p.size());
    for (const auto& pos : p.positions) nf.push_back(pos.directions.size());
    std::sort(nf.begin(), nf.end(), std::greater<int>());
    return nf;
}

bool poly_iso(const Poly& p, const Poly& q) { return poly_normal_form(p) == poly_normal_form(q); }

bool poly_equal(const Poly& p, const Poly& q) {
    if (p.size() != q.size()) return false;
    for (int i = 0; i < p.size(); ++i)
        if (p.at(i).label != q.at(i).label || p.at(i).directions != q.at(i).directions) return false;
    return true;
}

std::string poly_to_string(const Poly& p) {
    if (p.size() == 0) return "0";
    std::map<int, int, std::greater<int>> by_exp;
    for (const auto& pos : p.positions) by_exp[pos.directions.size()]++;
    std::string out;
    for (auto [e, c] : by_exp) {
        if (!out.empty()) out += " + ";
        if (e == 0) {
            out += std::to_string(c);
        } else {
            if (c != 1) out += std::to_string(c);
            out += "y";
            if (e != 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

std::string poly_to_labeled_string(const Poly& p) {
    std::string out = "{";
    for (int i = 0; i < p.size(); ++i) {
        if (i) out += ", ";
        out += p.at(i).label + ": [";
        const auto& ds = p.at(i).directions.labels();
        for (size_t k = 0; k < ds.size(); ++k) {
            if (k) out += ", ";
            out += ds[k];
        }
        out += "]";
    }
    return out + "}";
}

void PolyMap::validate() const {
    if ((int)on_positions.size() != source.size())
        throw WrongShape("position map has wrong size", "polymap");
    if ((int)on_directions.size() != source.size())
        throw WrongShape("direction maps have wrong count", "polymap");
    for (int i = 0; i < source.size(); ++i) {
        int j = on_positions[i];
        if (j < 0 || j >= target.size())
            throw WrongShape("position image out of range", source.at(i).label);
        check_fin_function(on_directions[i], target.dir_count(j), source.dir_count(i),
                           "backward map at " + source.at(i).label);
    }
}

PolyMap identity_map(const Poly& p) {
    PolyMap m{p, p, {}, {}};
    for (int i = 0; i < p.size(); ++i) {
        m.on_positions.push_back(i);
        std::vector<int> id(p.dir_count(i));
        for (int d = 0; d < (int)id.size(); ++d) id[d] = d;
        m.on_directions.push_back(std::move(id));
    }
    return m;
}

PolyMap compose(const PolyMap& f, const PolyMap& g) {
    if (!poly_equal(f.target, g.source))
        throw WrongShape("composition mismatch: target of first is not source of second", "compose");
    PolyMap m{f.source, g.target, {}, {}};
    for (int i = 0; i < f.source.size(); ++i) {
        int j = f.on_positions[i];
        int k = g.on_positions[j];
        m.on_positions.push_back(k);
        std::vector<int> back(g.target.dir_count(k));
        for (int e = 0; e < (int)back.size(); ++e) back[e] = f.on_directions[i][g.on_directions[j][e]];
        m.on_directions.push_back(std::move(back));
    }
    return m;
}

bool polymap_equal(const PolyMap& f, const PolyMap& g) {
    return poly_equal(f.source, g.source) && poly_equal(f.target, g.target) &&
           f.on_positions == g.on_positions && f.on_directions == g.on_directions;
}

// --- arithmetic ---------------------------------------------------------

Poly add(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& pos : p.positions) r.positions.push_back({"l(" + pos.label + ")", pos.directions});
    for (const auto& pos : q.positions) r.positions.push_back({"r(" + pos.label + ")", pos.directions});
    return r;
}

Poly mul(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& pi : p.positions)
        for (const auto& qj : q.positions) {
            FinLabelSet dirs;
            for (const auto& d : pi.directions.labels()) dirs.add("l(" + d + ")");
            for (const auto& e : qj.directions.labels()) dirs.add("r(" + e + ")");
            r.positions.push_back({"(" + pi.label + "," + qj.label + ")", std::move(dirs)});
        }
    return r;
}

Poly dirichlet(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& pi : p.positions)
        for (const auto& qj : q.positions) {
            FinLabelSet dirs;
            for (const auto& d : pi.directions.labels())
                for (const auto& e : qj.directions.labels()) dirs.add("(" + d + "," + e + ")");
            r.positions.push_back({"(" + pi.label + "," + qj.label + ")", std::move(dirs)});
        }
    return r;
}

std::uint64_t checked_pow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < e; ++k)
        if (__builtin_mul_overflow(r, b, &r)) throw SizeBlowup("power overflows 64 bits");
    return r;
}

std::uint64_t function_count(int dom, int cod) {
    return checked_pow((std::uint64_t)cod, (std::uint64_t)dom);
}

std::vector<int> decode_function(std::uint64_t code, int dom, int cod) {
    std::vector<int> f(dom);
    for (int a = dom - 1; a >= 0; --a) {
        f[a] = (int)(code % cod);
        code /= cod;
    }
    return f;
}

std::uint64_t encode_function(const std::vector<int>& f, int cod) {
    std::uint64_t code = 0;
    for (int v : f) {
        code *= cod;
        code += (std::uint64_t)v;
    }
    return code;
}

Poly substitute(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& pi : p.positions) {
        int nd = pi.directions.size();
        std::uint64_t nfun = function_count(nd, q.size());
        if (q.size() == 0 && nd > 0) nfun = 0;
        for (std::uint64_t code = 0; code < nfun; ++code) {
            auto j = decode_function(code, nd, q.size());
            std::string label = pi.label + "<[";
            FinLabelSet dirs;
            for (int d = 0; d < nd; ++d) {
                if (d) label += ",";
                label += q.at(j[d]).label;
                for (const auto& e : q.at(j[d]).directions.labels())
                    dirs.add("(" + pi.directions.label(d) + ";" + e + ")");
            }
            label += "]";
            r.positions.push_back({std::move(label), std::move(dirs)});
        }
    }
    return r;
}

namespace {

// Deterministic layout of substitute(p, q): positions grouped by p-position,
// function codes within a group; directions grouped by p-direction.
struct SubstLayout {
    const Poly& p;
    const Poly& q;
    std::vector<std::uint64_t> offsets;

    SubstLayout(const Poly& p_, const Poly& q_) : p(p_), q(q_) {
        std::uint64_t off = 0;
        for (int i = 0; i < p.size(); ++i) {
            offsets.push_back(off);
            int nd = p.dir_count(i);
            std::uint64_t nf = (q.size() == 0 && nd > 0) ? 0 : function_count(nd, q.size());
            off += nf;
        }
    }

    std::uint64_t pos_index(int i, const std::vector<int>& j) const {
        return offsets[i] + encode_function(j, q.size());
    }

    int dir_index(const std::vector<int>& j, int d, int e) const {
        int idx = 0;
        for (int d2 = 0; d2 < d; ++d2) idx += q.dir_count(j[d2]);
        return idx + e;
    }

    std::pair<int, int> decode_dir(const std::vector<int>& j, int idx) const {
        for (int d = 0; d < (int)j.size(); ++d) {
            int c = q.dir_count(j[d]);
            if (idx < c) return {d, idx};
            idx -= c;
        }
        throw WrongShape("direction index out of range", "substitute layout");
    }
};

} // namespace

std::uint64_t hom_count(const Poly& p, const Poly& q) {
    std::uint64_t total = 1;
    for (int i = 0; i < p.size(); ++i) {
        std::uint64_t per_pos = 0;
        for (int j = 0; j < q.size(); ++j) {
            std::uint64_t ways = checked_pow((std::uint64_t)p.dir_count(i), (std::uint64_t)q.dir_count(j));
            if (__builtin_add_overflow(per_pos, ways, &per_pos))
                throw SizeBlowup("hom count overflows 64 bits");
        }
        if (__builtin_mul_overflow(total, per_pos, &total))
            throw SizeBlowup("hom count overflows 64 bits");
    }
    return total;
}

std::vector<PolyMap> enumerate_maps(const Poly& p, const Poly& q, std::uint64_t cap) {
    std::uint64_t total = hom_count(p, q);
    if (total > cap)
        throw SizeBlowup("map enumeration exceeds cap",
                         std::to_string(total) + " > " + std::to_string(cap));

    // Per-position choice lists: (target position, backward function).
    std::vector<std::vector<std::pair<int, std::vector<int>>>> choices(p.size());
    for (int i = 0; i < p.size(); ++i) {
        for (int j = 0; j < q.size(); ++j) {
            int dom = q.dir_count(j), cod = p.dir_count(i);
            if (cod == 0 && dom > 0) continue;
            std::uint64_t nf = function_count(dom, cod);
            for (std::uint64_t c = 0; c < nf; ++c)
                choices[i].emplace_back(j, decode_function(c, dom, cod));
        }
        if (choices[i].empty()) return {}; // no map exists
    }

    std::vector<PolyMap> out;
    out.reserve((size_t)total);
    std::vector<size_t> odo(p.size(), 0);
    while (true) {
        PolyMap m{p, q, {}, {}};
        for (int i = 0; i < p.size(); ++i) {
            m.on_positions.push_back(choices[i][odo[i]].first);
            m.on_directions.push_back(choices[i][odo[i]].second);
        }
        out.push_back(std::move(m));
        int i = p.size() - 1;
        for (; i >= 0; --i) {
            if (++odo[i] < choices[i].size()) break;
            odo[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

Poly internal_hom(const Poly& p, const Poly& q, std::uint64_t cap) {
    auto maps = enumerate_maps(p, q, cap);
    Poly r;
    for (size_t k = 0; k < maps.size(); ++k) {
        FinLabelSet dirs;
        for (int i = 0; i < p.size(); ++i) {
            int j = maps[k].on_positions[i];
            for (const auto& e : q.at(j).directions.labels())
                dirs.add("(" + p.at(i).label + "," + e + ")");
        }
        r.positions.push_back({"f" + std::to_string(k), std::move(dirs)});
    }
    return r;
}

Poly coclosure(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& pi : p.positions) {
        FinLabelSet dirs;
        int n = pi.directions.size();
        for (const auto& qj : q.positions) {
            int dom = qj.directions.size();
            if (n == 0 && dom > 0) continue;
            std::uint64_t nf = function_count(dom, n);
            for (std::uint64_t c = 0; c < nf; ++c) {
                auto f = decode_function(c, dom, n);
                std::string lbl = "(" + qj.label + "|";
                for (int a = 0; a < dom; ++a) {
                    if (a) lbl += ",";
                    lbl += pi.directions.label(f[a]);
                }
                dirs.add(lbl + ")");
            }
        }
        r.positions.push_back({pi.label, std::move(dirs)});
    }
    return r;
}

FinLabelSet evaluate(const Poly& p, const FinLabelSet& x) {
    FinLabelSet out;
    for (const auto& pi : p.positions) {
        int n = pi.directions.size();
        if (x.size() == 0 && n > 0) continue;
        std::uint64_t nf = function_count(n, x.size());
        for (std::uint64_t c = 0; c < nf; ++c) {
            auto f = decode_function(c, n, x.size());
            std::string lbl = "(" + pi.label + "|";
            for (int a = 0; a < n; ++a) {
                if (a) lbl += ",";
                lbl += x.label(f[a]);
            }
            out.add(lbl + ")");
        }
    }
    return out;
}

PolyMap substitute_map(const PolyMap& f, const PolyMap& g) {
    const Poly& p = f.source;
    const Poly& q = g.source;
    const Poly& p2 = f.target;
    const Poly& q2 = g.target;
    PolyMap m{substitute(p, q), substitute(p2, q2), {}, {}};
    SubstLayout src(p, q), dst(p2, q2);

    for (int i = 0; i < p.size(); ++i) {
        int nd = p.dir_count(i);
        std::uint64_t nf = (q.size() == 0 && nd > 0) ? 0 : function_count(nd, q.size());
        for (std::uint64_t code = 0; code < nf; ++code) {
            auto j = decode_function(code, nd, q.size());
            int i2 = f.on_positions[i];
            std::vector<int> j2(p2.dir_count(i2));
            for (int d2 = 0; d2 < (int)j2.size(); ++d2)
                j2[d2] = g.on_positions[j[f.on_directions[i][d2]]];
            m.on_positions.push_back((int)dst.pos_index(i2, j2));

            int tdirs = 0;
            for (int v : j2) tdirs += q2.dir_count(v);
            std::vector<int> back(tdirs);
            for (int idx = 0; idx < tdirs; ++idx) {
                auto [d2, e2] = dst.decode_dir(j2, idx);
                int d = f.on_directions[i][d2];
                int e = g.on_directions[j[d]][e2];
                back[idx] = src.dir_index(j, d, e);
            }
            m.on_directions.push_back(std::move(back));
        }
    }
    return m;
}

PolyMap dirichlet_map(const PolyMap& f, const PolyMap& g) {
    const Poly& p = f.source;
    const Poly& q = g.source;
    const Poly& p2 = f.target;
    const Poly& q2 = g.target;
    PolyMap m{dirichlet(p, q), dirichlet(p2, q2), {}, {}};
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < q.size(); ++j) {
            int i2 = f.on_positions[i], j2 = g.on_positions[j];
            m.on_positions.push_back(i2 * q2.size() + j2);
            int nd2 = p2.dir_count(i2), ne2 = q2.dir_count(j2);
            std::vector<int> back(nd2 * ne2);
            for (int d2 = 0; d2 < nd2; ++d2)
                for (int e2 = 0; e2 < ne2; ++e2)
                    back[d2 * ne2 + e2] =
                        f.on_directions[i][d2] * q.dir_count(j) + g.on_directions[j][e2];
            m.on_directions.push_back(std::move(back));
        }
    return m;
}

PolyMap duoidal_map(const Poly& p, const Poly& q, const Poly& p2, const Poly& q2) {
    Poly pq = substitute(p, q), p2q2 = substitute(p2, q2);
    Poly pp2 = dirichlet(p, p2), qq2 = dirichlet(q, q2);
    PolyMap m{dirichlet(pq, p2q2), substitute(pp2, qq2), {}, {}};
    SubstLayout lay_pq(p, q), lay_p2q2(p2, q2), lay_dst(pp2, qq2);

    // Source positions: ((i, j), (i2, j2)) in dirichlet order over the two
    // substitution layouts.
    for (int i = 0; i < p.size(); ++i) {
        int nd = p.dir_count(i);
        std::uint64_t nf = (q.size() == 0 && nd > 0) ? 0 : function_count(nd, q.size());
        for (std::uint64_t code = 0; code < nf; ++code) {
            auto j = decode_function(code, nd, q.size());
            for (int i2 = 0; i2 < p2.size(); ++i2) {
                int nd2 = p2.dir_count(i2);
                std::uint64_t nf2 = (q2.size() == 0 && nd2 > 0) ? 0 : function_count(nd2, q2.size());
                for (std::uint64_t code2 = 0; code2 < nf2; ++code2) {
                    auto j2 = decode_function(code2, nd2, q2.size());

                    // Forward: position (i,i2) of p dirichlet p2 with the
                    // pairwise function J(d,d2) = (j d, j2 d2).
                    int C = i * p2.size() + i2;
                    std::vector<int> J(nd * nd2);
                    for (int d = 0; d < nd; ++d)
                        for (int d2 = 0; d2 < nd2; ++d2)
                            J[d * nd2 + d2] = j[d] * q2.size() + j2[d2];
                    m.on_positions.push_back((int)lay_dst.pos_index(C, J));

                    // Backward on the target's directions ((d,d2),(e,e2)).
                    int tdirs = 0;
                    for (int v : J) tdirs += qq2.dir_count(v);
                    std::vector<int> back(tdirs);
                    int src_right_total = 0; // directions of (p2<q2) at (i2,j2)
                    for (int v : j2) src_right_total += q2.dir_count(v);
                    for (int idx = 0; idx < tdirs; ++idx) {
                        auto [D, E] = lay_dst.decode_dir(J, idx);
                        int d = D / nd2, d2 = D % nd2;
                        int ne2 = q2.dir_count(j2[d2]);
                        int e = E / ne2, e2 = E % ne2;
                        int u = lay_pq.dir_index(j, d, e);
                        int u2 = lay_p2q2.dir_index(j2, d2, e2);
                        back[idx] = u * src_right_total + u2;
                    }
                    m.on_directions.push_back(std::move(back));
                }
            }
        }
    }
    return m;
}

Poly dirichlet_transform(const Poly& p) {
    Poly r;
    for (const auto& pi : p.positions)
        for (const auto& d : pi.directions.labels())
            r.positions.push_back({"(" + pi.label + "," + d + ")", FinLabelSet({"*"})});
    return r;
}

} // namespace polyagg
