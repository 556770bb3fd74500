#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyagg/generators.hpp"
#include "polyagg/io.hpp"
#include "polyagg/laws.hpp"

using namespace polyagg;
using Json = nlohmann::ordered_json;

namespace {

struct WorkspaceConfig {
    std::uint64_t cap = 100000;
    int k = 8;
    std::uint64_t seed = 1;
    std::string output = "table"; // table | json
};

// {"on_objects": {a: Fa}, "on_morphisms": {f: Ff}}
CatFunctor functor_from_json(const CatPtr& src, const CatPtr& dst, const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError("malformed json", e.what());
    }
    CatFunctor f;
    f.src = src;
    f.dst = dst;
    f.on_objects.assign(src->n_objects(), -1);
    f.on_morphisms.assign(src->n_morphisms(), -1);
    if (!j.is_object() || !j.contains("on_objects") || !j.contains("on_morphisms"))
        throw ParseError("functor file needs on_objects and on_morphisms");
    for (const auto& [a, fa] : j.at("on_objects").items())
        f.on_objects.at(src->objects.index(a)) = dst->objects.index(fa.get<std::string>());
    for (const auto& [m, fm] : j.at("on_morphisms").items())
        f.on_morphisms.at(src->morphism_index(m)) = dst->morphism_index(fm.get<std::string>());
    for (int a = 0; a < src->n_objects(); ++a)
        if (f.on_objects[a] < 0) throw ParseError("object has no image", src->objects.label(a));
    for (int m = 0; m < src->n_morphisms(); ++m)
        if (f.on_morphisms[m] < 0)
            throw ParseError("morphism has no image", src->morphisms[m].name);
    f.validate();
    return f;
}

Json value_json(const MonoidValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return nullptr;
    if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    Json arr = Json::array();
    for (const auto& [l, c] : std::get<Multiset>(v))
        for (int i = 0; i < c; ++i) arr.push_back(l);
    return arr;
}

void emit(const WorkspaceConfig& cfg, const Json& j, const std::string& table_text) {
    if (cfg.output == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << table_text;
}

int run(int argc, char** argv) {
    WorkspaceConfig cfg;
    CLI::App app{"polynomial-functor database toolkit"};
    app.require_subcommand(1);
    app.add_option("--cap", cfg.cap, "enumeration cap")->check(CLI::PositiveNumber);
    app.add_option("--k", cfg.k, "finite-set skeleton truncation")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--output", cfg.output, "output format")
        ->check(CLI::IsMember({"table", "json"}));

    // validate -------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "load a file and check all its laws");
    std::string v_kind, v_file, v_schema, v_category;
    validate->add_option("kind", v_kind, "category | schema | instance | query | span")
        ->required()
        ->check(CLI::IsMember({"category", "schema", "instance", "query", "span"}));
    validate->add_option("file", v_file)->required();
    validate->add_option("--schema", v_schema, "schema file (for instances)");
    validate->add_option("--category", v_category, "category file (for queries)");

    // query ----------------------------------------------------------
    auto* query = app.add_subcommand("query", "evaluate a duc-query against an instance");
    std::string q_category, q_query, q_instance;
    query->add_option("--category", q_category)->required();
    query->add_option("--query", q_query)->required();
    query->add_option("--instance", q_instance)->required();

    // migrate ----------------------------------------------------------
    auto* migrate = app.add_subcommand("migrate", "move an instance along a functor");
    std::string m_from, m_to, m_functor, m_instance, m_direction = "delta";
    migrate->add_option("--from", m_from, "source category of the functor")->required();
    migrate->add_option("--to", m_to, "target category of the functor")->required();
    migrate->add_option("--functor", m_functor)->required();
    migrate->add_option("--instance", m_instance)->required();
    migrate->add_option("--direction", m_direction)
        ->check(CLI::IsMember({"delta", "pi", "sigma"}));

    // aggregate ------------------------------------------------------
    auto* aggregate = app.add_subcommand("aggregate", "fold attributes along a morphism");
    std::string a_schema, a_instance, a_along;
    aggregate->add_option("--schema", a_schema)->required();
    aggregate->add_option("--instance", a_instance)->required();
    aggregate->add_option("--along", a_along, "morphism name; all infacing families if absent");

    // groupby --------------------------------------------------------
    auto* groupby = app.add_subcommand("groupby", "fibres of an instance map as multisets");
    std::string g_category, g_instance, g_along;
    groupby->add_option("--category", g_category)->required();
    groupby->add_option("--instance", g_instance)->required();
    groupby->add_option("--along", g_along)->required();

    // dual -----------------------------------------------------------
    auto* dual_cmd = app.add_subcommand("dual", "dualize a span (sums <-> products)");
    std::string d_span;
    dual_cmd->add_option("span", d_span, "span file")->required();

    // transpose ------------------------------------------------------
    auto* transpose = app.add_subcommand("transpose", "transpose a span via both dual routes");
    std::string t_span;
    transpose->add_option("span", t_span, "span file")->required();

    // finskeleton ----------------------------------------------------
    auto* finsk = app.add_subcommand("finskeleton", "truncated skeleton of finite sets");
    int fs_k = -1;
    finsk->add_option("--k", fs_k, "truncation (defaults to the workspace K)");

    // calc -----------------------------------------------------------
    auto* calc = app.add_subcommand("calc", "polynomial calculator");
    std::string c_op;
    std::vector<std::string> c_args;
    calc->add_option("op", c_op)->required()->check(
        CLI::IsMember({"homcount", "compose", "tensor", "coclosure"}));
    calc->add_option("args", c_args, "two polynomials")->expected(2);

    // laws -----------------------------------------------------------
    auto* laws = app.add_subcommand("laws", "run law suites");
    std::vector<std::string> l_suites;
    int l_cases = 100;
    bool l_list = false;
    laws->add_option("--suite", l_suites, "suite names (default: all)");
    laws->add_option("--cases", l_cases, "cases per suite")->check(CLI::PositiveNumber);
    laws->add_flag("--list", l_list, "list suite names and exit");

    for (CLI::App* sc : {validate, query, migrate, aggregate, groupby, dual_cmd, transpose,
                         finsk, calc, laws})
        sc->fallthrough(); // accept the global options after the subcommand too

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("POLYAGG_SEED")) cfg.seed = std::stoull(env);

    auto load_cat = [](const std::string& path) {
        std::string text = read_file(path);
        // schema files carry their category; accept them wherever a plain
        // category is expected
        Json j = Json::parse(text, nullptr, false);
        if (j.is_object() && j.contains("category")) text = j.at("category").dump();
        return std::make_shared<FinCategory>(category_from_json(text));
    };

    if (*validate) {
        Json info;
        if (v_kind == "category") {
            CatPtr c = load_cat(v_file);
            info = {{"objects", c->n_objects()}, {"morphisms", c->n_morphisms()}};
        } else if (v_kind == "schema") {
            Schema s = schema_from_json(read_file(v_file));
            info = {{"objects", s.category->n_objects()},
                    {"morphisms", s.category->n_morphisms()}};
        } else if (v_kind == "instance") {
            if (v_schema.empty()) throw CLI::ValidationError("instance needs --schema");
            Schema s = schema_from_json(read_file(v_schema));
            Instance inst = instance_from_json(s, read_file(v_file));
            info = {{"rows", inst.data.total_rows()}};
        } else if (v_kind == "query") {
            if (v_category.empty()) throw CLI::ValidationError("query needs --category");
            DucQuery q = query_from_json(load_cat(v_category), read_file(v_file));
            info = {{"patterns", q.patterns.size()}};
        } else {
            Span s = span_from_json(read_file(v_file));
            info = {{"apex", s.apex.size()}};
        }
        info["ok"] = true;
        emit(cfg, info, v_kind + " ok\n");
        return 0;
    }

    if (*query) {
        CatPtr c = load_cat(q_category);
        DucQuery q = query_from_json(c, read_file(q_query));
        Copresheaf x = copresheaf_from_json(c, read_file(q_instance));
        Json out = Json::array();
        std::string text;
        for (size_t k = 0; k < q.patterns.size(); ++k) {
            Json matches = Json::array();
            for (const CopresheafHom& h : copresheaf_homs(q.patterns[k], x, cfg.cap)) {
                Json row = Json::object();
                std::string line = q.names.label((int)k) + ":";
                for (int a = 0; a < c->n_objects(); ++a)
                    for (int r = 0; r < q.patterns[k].rows[a].size(); ++r) {
                        row[q.patterns[k].rows[a].label(r)] = x.rows[a].label(h.at[a][r]);
                        line += " " + q.patterns[k].rows[a].label(r) + "=" +
                                x.rows[a].label(h.at[a][r]);
                    }
                matches.push_back(std::move(row));
                text += line + "\n";
            }
            out.push_back({{"pattern", q.names.label((int)k)}, {"matches", std::move(matches)}});
        }
        emit(cfg, out, text);
        return 0;
    }

    if (*migrate) {
        CatPtr from = load_cat(m_from), to = load_cat(m_to);
        CatFunctor f = functor_from_json(from, to, read_file(m_functor));
        Copresheaf moved = m_direction == "delta"
                               ? migrate_delta(f, copresheaf_from_json(to, read_file(m_instance)))
                           : m_direction == "pi"
                               ? migrate_pi(f, copresheaf_from_json(from, read_file(m_instance)))
                               : migrate_sigma(f, copresheaf_from_json(from, read_file(m_instance)));
        std::string printed = copresheaf_to_json(moved);
        emit(cfg, Json::parse(printed), printed + "\n");
        return 0;
    }

    if (*aggregate) {
        Schema s = schema_from_json(read_file(a_schema));
        Instance inst = instance_from_json(s, read_file(a_instance));
        if (!a_along.empty()) {
            int f = s.category->morphism_index(a_along);
            std::vector<MonoidValue> vals = aggregate_along(s, inst, f);
            const FinLabelSet& rows = inst.data.rows[s.category->morphisms[f].cod];
            Json out = Json::object();
            std::string text;
            for (int r = 0; r < rows.size(); ++r) {
                out[rows.label(r)] = value_json(vals[r]);
                text += rows.label(r) + "\t" + monoid_value_to_string(vals[r]) + "\n";
            }
            emit(cfg, out, text);
            return 0;
        }
        auto all = aggregate_all(s, inst);
        Json out = Json::object();
        std::string text;
        for (int a = 0; a < s.category->n_objects(); ++a) {
            Json col = Json::object();
            for (int r = 0; r < inst.data.rows[a].size(); ++r) {
                Json fam = Json::object();
                for (size_t k = 0; k < all[a][r].morphisms.size(); ++k) {
                    const std::string& name =
                        s.category->morphisms[all[a][r].morphisms[k]].name;
                    fam[name] = value_json(all[a][r].components[k]);
                    text += s.category->objects.label(a) + "." + inst.data.rows[a].label(r) +
                            "\t" + name + "\t" +
                            monoid_value_to_string(all[a][r].components[k]) + "\n";
                }
                col[inst.data.rows[a].label(r)] = std::move(fam);
            }
            out[s.category->objects.label(a)] = std::move(col);
        }
        emit(cfg, out, text);
        return 0;
    }

    if (*groupby) {
        CatPtr c = load_cat(g_category);
        Copresheaf x = copresheaf_from_json(c, read_file(g_instance));
        int f = c->morphism_index(g_along);
        std::vector<Multiset> fibres = group_by(x, f);
        const FinLabelSet& rows = x.rows[c->morphisms[f].cod];
        Json out = Json::object();
        std::string text;
        for (int r = 0; r < rows.size(); ++r) {
            out[rows.label(r)] = value_json(fibres[r]);
            text += rows.label(r) + "\t" + monoid_value_to_string(fibres[r]) + "\n";
        }
        emit(cfg, out, text);
        return 0;
    }

    if (*dual_cmd) {
        Span s = span_from_json(read_file(d_span));
        Bicomodule d = dual(span_to_bicomodule(s));
        Json out;
        out["carrier"] = poly_to_string(bicomodule_carrier(d));
        Json pats = Json::object();
        std::string text = "carrier: " + poly_to_string(bicomodule_carrier(d)) + "\n";
        for (int a = 0; a < d.left->n_objects(); ++a) {
            Json rows = Json::object();
            for (int b = 0; b < d.right->n_objects(); ++b) {
                rows[d.right->objects.label(b)] = d.patterns[a][0].rows[b].labels();
                text += d.left->objects.label(a) + " x " + d.right->objects.label(b) + ":";
                for (const auto& l : d.patterns[a][0].rows[b].labels()) text += " " + l;
                text += "\n";
            }
            pats[d.left->objects.label(a)] = std::move(rows);
        }
        out["patterns"] = std::move(pats);
        emit(cfg, out, text);
        return 0;
    }

    if (*transpose) {
        Span s = span_from_json(read_file(t_span));
        Span t1 = transpose_dual_of_right_adjoint(s);
        Span t2 = transpose_left_adjoint_of_dual(s);
        std::string printed = span_to_json(t1);
        if (span_to_json(t2) != printed) {
            std::cerr << "transpose routes disagree\n";
            return 1;
        }
        emit(cfg, Json::parse(printed), printed + "\n");
        return 0;
    }

    if (*finsk) {
        int k = fs_k >= 0 ? fs_k : cfg.k;
        FinSkeleton sk = skeleton_fin(k, cfg.cap * 10);
        Json out = {{"k", k},
                    {"objects", sk.cat.n_objects()},
                    {"morphisms", sk.cat.n_morphisms()}};
        std::string text = "objects 0.." + std::to_string(k) + ", " +
                           std::to_string(sk.cat.n_morphisms()) + " morphisms\n";
        emit(cfg, out, text);
        return 0;
    }

    if (*calc) {
        Poly p = parse_poly(c_args[0]), q = parse_poly(c_args[1]);
        std::string result;
        if (c_op == "homcount")
            result = std::to_string(hom_count(p, q));
        else if (c_op == "compose")
            result = poly_to_string(substitute(p, q));
        else if (c_op == "tensor")
            result = poly_to_string(dirichlet(p, q));
        else
            result = poly_to_string(coclosure(p, q));
        emit(cfg, Json(result), result + "\n");
        return 0;
    }

    if (*laws) {
        if (l_list) {
            for (const auto& n : law_suite_names()) std::cout << n << "\n";
            return 0;
        }
        std::vector<std::string> names = l_suites.empty() ? law_suite_names() : l_suites;
        bool all_ok = true;
        Json out = Json::array();
        for (const auto& n : names) {
            LawSuiteReport r = run_suite(n, cfg.seed, l_cases, cfg.cap);
            all_ok = all_ok && r.ok();
            if (cfg.output == "json")
                out.push_back(Json::parse(report_to_json(r)));
            else
                std::cout << report_to_text(r);
        }
        if (cfg.output == "json") std::cout << out.dump(2) << "\n";
        return all_ok ? 0 : 1;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const UnknownSuite& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
