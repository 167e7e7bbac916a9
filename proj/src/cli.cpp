#include "bdiv/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdiv/canonical.hpp"
#include "bdiv/elliptic.hpp"
#include "bdiv/errors.hpp"
#include "bdiv/json_io.hpp"
#include "bdiv/resistance.hpp"

namespace bdiv {

namespace {

class Digest {
public:
    void feed(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
    }
    std::string hex() const {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << state_;
        return os.str();
    }

private:
    unsigned long long state_ = 0xcbf29ce484222325ULL;
};

struct Report {
    std::string command;
    std::string digest;
    std::vector<std::pair<std::string, std::string>> results;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> tables;

    void add(const std::string& name, const Rat& value) { results.emplace_back(name, value.str()); }
    void add(const std::string& name, const std::string& value) { results.emplace_back(name, value); }
};

void emit(const Report& r, bool as_json, std::ostream& out) {
    if (as_json) {
        nlohmann::json j;
        j["command"] = r.command;
        j["digest"] = r.digest;
        nlohmann::json results = nlohmann::json::object();
        for (const auto& [k, v] : r.results) results[k] = v;
        j["results"] = results;
        if (!r.tables.empty()) {
            nlohmann::json tables = nlohmann::json::object();
            for (const auto& [name, rows] : r.tables) {
                nlohmann::json t = nlohmann::json::array();
                for (const auto& [k, v] : rows) t.push_back({{"name", k}, {"value", v}});
                tables[name] = t;
            }
            j["tables"] = tables;
        }
        out << j.dump(2) << "\n";
        return;
    }
    out << "command: " << r.command << "\n";
    out << "digest: " << r.digest << "\n";
    for (const auto& [k, v] : r.results) out << k << " = " << v << "\n";
    for (const auto& [name, rows] : r.tables) {
        out << "[" << name << "]\n";
        for (const auto& [k, v] : rows) out << k << " = " << v << "\n";
    }
}

nlohmann::json load_and_digest(const std::string& path, Digest& digest) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    digest.feed(buf.str());
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

GraphPoint point_by_name(const MetrizedGraph& g, const std::string& name) {
    if (auto v = g.vertex_by_name(name)) return GraphPoint::vertex(*v);
    throw InputError("unknown vertex '" + name + "'");
}

std::string point_label(const MetrizedGraph& g, const GraphPoint& p) {
    if (p.is_vertex()) return g.vertex_name(p.index);
    return "e" + std::to_string(p.index) + "@" + p.offset.str();
}

Rat rat_json(const nlohmann::json& j, const char* what) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw InputError(std::string("expected a rational for ") + what);
}

// -------- pairing request --------

struct PairRequest {
    ModelGraph model;
    GeometricTable table;
    Rat h;
    GraphDivisor K;
    std::vector<CompactifiedBDivisor> b;  // b1, b2
};

GraphDivisor named_divisor(const nlohmann::json& arr, const MetrizedGraph& skel) {
    GraphDivisor d;
    for (const auto& entry : arr)
        d.add(point_by_name(skel, entry.at("at").get<std::string>()),
              rat_json(entry.at("c"), "divisor coefficient"));
    return d;
}

CompactifiedBDivisor bdiv_from_json(const nlohmann::json& spec, const std::string& label,
                                    const ModelGraph& model, const AdmissibleFamily& family) {
    const GraphPtr& skel = model.base_skeleton();
    if (!spec.contains("cartier")) throw InputError(label + " requires a 'cartier' object");
    const auto& cj = spec.at("cartier");
    const std::string id = cj.contains("id") ? cj.at("id").get<std::string>() : label;
    const Rat deg = rat_json(cj.at("deg"), "relative degree");

    GraphDivisor restriction;
    if (cj.contains("spec")) {
        for (const auto& [cusp, pt] : cj.at("spec").items()) {
            const GraphPoint p = point_by_name(*skel, pt.get<std::string>());
            if (skel->cusp_of_component(skel->component_of_point(p)) != cusp)
                throw InputError("specialization point '" + pt.get<std::string>() +
                                 "' does not lie over cusp '" + cusp + "'");
            restriction.add(p, deg);
        }
    } else if (cj.contains("restriction")) {
        restriction = named_divisor(cj.at("restriction"), *skel);
    }
    CartierData cartier = CartierData::primitive(id, deg, std::move(restriction));
    cartier.validate(*skel);

    const nlohmann::json metric = spec.contains("metric") ? spec.at("metric") : nlohmann::json("zero");
    if (metric.is_string()) {
        const std::string m = metric.get<std::string>();
        if (m == "zero")
            return CompactifiedBDivisor{std::move(cartier), PwQuad::constant(skel, Rat(0))};
        if (m == "green" || m.rfind("green:", 0) == 0)
            return admissible_bundle(family, std::move(cartier));
        if (m == "neg-diagonal") return admissible_omega(family, std::move(cartier));
        throw InputError("unknown metric '" + m + "' (use zero, green, neg-diagonal, or {\"pa\":...})");
    }
    if (metric.is_object() && metric.contains("pa")) {
        VertexFunction values(static_cast<size_t>(model.vertex_count()), Rat(0));
        for (const auto& [name, val] : metric.at("pa").items()) {
            bool found = false;
            for (int v = 0; v < model.vertex_count(); ++v)
                if (model.vertex(v).name == name) {
                    values[static_cast<size_t>(v)] = rat_json(val, "pa value");
                    found = true;
                }
            if (!found) throw InputError("pa metric names unknown model vertex '" + name + "'");
        }
        return CompactifiedBDivisor{std::move(cartier), interpolate_on_skeleton(model, values)};
    }
    throw InputError("malformed metric for " + label);
}

// model_override / table_override, when nonempty, replace the request's own
// entries with the given files.
PairRequest parse_pair_request(nlohmann::json doc, Digest& digest,
                               const std::string& model_override,
                               const std::string& table_override) {
    if (!model_override.empty()) doc["model"] = model_override;
    if (!table_override.empty()) doc["table"] = load_and_digest(table_override, digest);
    if (!doc.contains("model")) throw InputError("pairing request requires a 'model'");
    nlohmann::json model_doc =
        doc.at("model").is_string() ? load_and_digest(doc.at("model").get<std::string>(), digest)
                                    : doc.at("model");
    ModelGraph model = model_from_json(model_doc);
    const GraphPtr& skel = model.base_skeleton();

    Rat h = doc.contains("h") ? rat_json(doc.at("h"), "h") : Rat(1);
    GraphDivisor K;
    if (doc.contains("K")) {
        const auto& kj = doc.at("K");
        if (kj.is_string()) {
            const std::string ks = kj.get<std::string>();
            if (ks == "canonical")
                K = canonical_divisor(*skel);
            else if (ks != "zero")
                throw InputError("K must be \"zero\", \"canonical\", or a divisor array");
        } else {
            K = named_divisor(kj, *skel);
        }
    }
    AdmissibleFamily family(skel, K, h);

    PairRequest req{std::move(model), GeometricTable{}, std::move(h), std::move(K), {}};
    if (doc.contains("table"))
        for (const auto& [key, val] : doc.at("table").items()) {
            if (key.size() < 5 || key.front() != '(' || key.back() != ')')
                throw InputError("table keys look like \"(A,B)\"; got '" + key + "'");
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw InputError("table key without comma: '" + key + "'");
            req.table.set(key.substr(1, comma - 1), key.substr(comma + 1, key.size() - comma - 2),
                          rat_json(val, "table entry"));
        }
    req.b.push_back(bdiv_from_json(doc.at("b1"), "b1", req.model, family));
    req.b.push_back(doc.contains("b2") ? bdiv_from_json(doc.at("b2"), "b2", req.model, family)
                                       : req.b.front());
    return req;
}

std::vector<ModelGraph> uniform_tower(const ModelGraph& base, int depth) {
    std::vector<ModelGraph> tower{base};
    for (int k = 0; k < depth; ++k) {
        ModelGraph stage = tower.back();
        const int boundary_points = stage.edge_count();
        for (int e = 0; e < boundary_points; ++e) stage = stage.blow_up_edge(0).model;
        tower.push_back(std::move(stage));
    }
    return tower;
}

// -------- subcommand runners --------

int run_resistance(const std::string& graph_path, const std::string& xs, const std::string& ys,
                   bool as_json, std::ostream& out) {
    Digest digest;
    BuiltGraph built = graph_from_json(load_and_digest(graph_path, digest));
    digest.feed(xs);
    digest.feed(ys);
    const GraphPoint x = point_from_string(xs, built);
    const GraphPoint y = point_from_string(ys, built);
    const ResistanceValue r = effective_resistance(built.graph, x, y);

    Report rep;
    rep.command = "resistance";
    rep.digest = digest.hex();
    rep.add("resistance", r.infinite ? std::string("inf") : r.value.str());
    emit(rep, as_json, out);
    return 0;
}

int run_canonical_measure(const std::string& graph_path, bool as_json, std::ostream& out) {
    Digest digest;
    BuiltGraph built = graph_from_json(load_and_digest(graph_path, digest));
    const GraphMeasure mu = canonical_measure(built.graph);

    Report rep;
    rep.command = "canonical-measure";
    rep.digest = digest.hex();
    rep.add("mass", mu.total_mass());
    std::vector<std::pair<std::string, std::string>> dirac, density;
    for (const auto& [p, c] : mu.dirac().terms())
        dirac.emplace_back(point_label(*built.graph, p), c.str());
    for (int e = 0; e < built.graph->edge_count(); ++e) {
        const auto& ed = built.graph->edge(e);
        const std::string label = "e" + std::to_string(e) + "(" + built.graph->vertex_name(ed.a) +
                                  "-" + built.graph->vertex_name(ed.b) + ")";
        for (const auto& seg : mu.density(e))
            density.emplace_back(label + "[" + seg.lo.str() + "," + seg.hi.str() + "]",
                                 seg.density.str());
    }
    rep.tables.emplace_back("dirac", std::move(dirac));
    rep.tables.emplace_back("density", std::move(density));
    emit(rep, as_json, out);
    return 0;
}

int run_green(const std::string& graph_path, const std::string& k_spec, const std::string& h_text,
              const std::string& at_text, const std::string& eval_text, bool as_json,
              std::ostream& out) {
    Digest digest;
    BuiltGraph built = graph_from_json(load_and_digest(graph_path, digest));
    digest.feed(k_spec);
    digest.feed(h_text);
    digest.feed(at_text);
    digest.feed(eval_text);

    GraphDivisor K;
    if (k_spec == "canonical")
        K = canonical_divisor(*built.graph);
    else if (k_spec != "zero")
        K = divisor_from_json(load_and_digest(k_spec, digest), built);
    const Rat h = Rat::parse(h_text);
    const GraphPoint at = point_from_string(at_text, built);

    // Solve on the component of the source point.
    const int comp = built.graph->component_of_point(at);
    std::vector<ComponentView> comps = split_components(built.graph);
    const ComponentView& cv = comps.at(static_cast<size_t>(comp));
    AdmissibleData data =
        admissible_measure(cv.graph, cv.divisor_to_local(K, *built.graph, comp), h);
    const PwQuad g = green(data, cv.to_local(at));

    Report rep;
    rep.command = "green";
    rep.digest = digest.hex();
    if (!eval_text.empty()) {
        const GraphPoint ev = point_from_string(eval_text, built);
        if (built.graph->component_of_point(ev) != comp)
            throw InputError("evaluation point lies on a different component than the source");
        rep.add("value", g(cv.to_local(ev)));
    } else {
        std::vector<std::pair<std::string, std::string>> rows;
        for (int v = 0; v < cv.graph->vertex_count(); ++v)
            rows.emplace_back(cv.graph->vertex_name(v), g.at_vertex(v).str());
        rep.tables.emplace_back("values", std::move(rows));
    }
    emit(rep, as_json, out);
    return 0;
}

int run_pair(const std::string& request_path, const std::string& model_override,
             const std::string& table_override, bool as_json, std::ostream& out) {
    Digest digest;
    PairRequest req = parse_pair_request(load_and_digest(request_path, digest), digest,
                                         model_override, table_override);
    const Rat value = pair_bdiv(req.b[0], req.b[1], req.table);
    const DeligneDecomposition dec = deligne_decomposition(req.b[0], req.b[1], req.table);

    Report rep;
    rep.command = "pair";
    rep.digest = digest.hex();
    rep.add("pair", value);
    rep.add("global", dec.global);
    std::vector<std::pair<std::string, std::string>> locals;
    for (const auto& [cusp, v] : dec.local_by_cusp) locals.emplace_back(cusp, v.str());
    rep.tables.emplace_back("local", std::move(locals));
    emit(rep, as_json, out);
    return 0;
}

int run_incarnate(const std::string& request_path, const std::string& model_override,
                  const std::string& table_override, const std::string& which, int depth,
                  bool as_json, std::ostream& out) {
    Digest digest;
    PairRequest req = parse_pair_request(load_and_digest(request_path, digest), digest,
                                         model_override, table_override);
    digest.feed(which);
    digest.feed(std::to_string(depth));
    if (which != "b1" && which != "b2") throw InputError("--b must be b1 or b2");
    const CompactifiedBDivisor& b = req.b[which == "b1" ? 0 : 1];
    const ModelGraph model = uniform_tower(req.model, depth).back();
    const Incarnation inc = incarnation(b, model);

    Report rep;
    rep.command = "incarnate";
    rep.digest = digest.hex();
    rep.add("cartier", b.cartier.id);
    rep.add("model_vertices", std::to_string(model.vertex_count()));
    std::vector<std::pair<std::string, std::string>> rows;
    for (int v = 0; v < model.vertex_count(); ++v)
        rows.emplace_back(model.vertex(v).name, inc.vertical[static_cast<size_t>(v)].str());
    rep.tables.emplace_back("coefficients", std::move(rows));
    emit(rep, as_json, out);
    return 0;
}

int run_tower(const std::string& request_path, const std::string& model_override,
              const std::string& table_override, int depth, bool as_json, std::ostream& out) {
    Digest digest;
    PairRequest req = parse_pair_request(load_and_digest(request_path, digest), digest,
                                         model_override, table_override);
    digest.feed(std::to_string(depth));
    const std::vector<ModelGraph> tower = uniform_tower(req.model, depth);
    const ConvergenceReport conv = convergence_experiment(req.b[0], req.b[1], tower, req.table);

    Report rep;
    rep.command = "tower";
    rep.digest = digest.hex();
    rep.add("limit", conv.limit);
    std::vector<std::pair<std::string, std::string>> stages, diffs;
    for (size_t k = 0; k < conv.stage_values.size(); ++k) {
        stages.emplace_back("stage" + std::to_string(k), conv.stage_values[k].str());
        diffs.emplace_back("stage" + std::to_string(k), conv.differences[k].str());
    }
    rep.tables.emplace_back("stages", std::move(stages));
    rep.tables.emplace_back("jump", std::move(diffs));
    emit(rep, as_json, out);
    return 0;
}

int run_elliptic(long n, long p, const std::string& widths, const std::string& family_path,
                 const std::string& what, int depth, bool as_json, std::ostream& out) {
    Digest digest;
    EllipticFamily fam;
    if (!family_path.empty()) {
        const nlohmann::json doc = load_and_digest(family_path, digest);
        if (doc.contains("cusp_widths")) {
            for (const auto& w : doc.at("cusp_widths")) fam.cusp_widths.push_back(w.get<long>());
        } else if (doc.contains("family")) {
            if (doc.at("family").get<std::string>() != "gamma_n")
                throw InputError("unknown family kind (use gamma_n or cusp_widths)");
            fam = EllipticFamily::gamma_n(doc.at("N").get<long>(), doc.at("p").get<long>());
        } else {
            throw InputError("family document requires 'family' or 'cusp_widths'");
        }
    } else if (!widths.empty()) {
        std::istringstream is(widths);
        std::string tok;
        while (std::getline(is, tok, ',')) fam.cusp_widths.push_back(std::stol(tok));
    } else if (n > 0 && p > 0) {
        fam = EllipticFamily::gamma_n(n, p);
    } else {
        throw InputError("specify the family via --N/--p, --widths, or --family");
    }
    for (long w : fam.cusp_widths) digest.feed(std::to_string(w) + ",");
    digest.feed(what);

    EllipticSurface surface(fam);
    Report rep;
    rep.command = "elliptic";
    rep.digest = digest.hex();
    rep.add("d", fam.d());

    if (what == "blimit") {
        rep.add("oa_self_intersection", surface.zero_section_self_intersection());
        rep.add("value", surface.b_self_intersection());
    } else if (what == "oao") {
        rep.add("value", surface.zero_section_self_intersection());
    } else if (what == "minimal") {
        const long power = fam.uniform() ? fam.uniform_width() : 1;
        rep.add("power", std::to_string(power));
        rep.add("value", surface.minimal_model_self_intersection(power));
    } else if (what == "report") {
        digest.feed(std::to_string(depth));
        const auto hj = surface.height_jump(depth);
        rep.add("power", std::to_string(hj.power));
        rep.add("stage_limit", hj.stage_limit);
        rep.add("b_limit", hj.b_limit);
        std::vector<std::pair<std::string, std::string>> stages, diffs;
        for (size_t k = 0; k < hj.stage_values.size(); ++k) {
            stages.emplace_back("stage" + std::to_string(k), hj.stage_values[k].str());
            diffs.emplace_back("stage" + std::to_string(k), hj.differences[k].str());
        }
        rep.tables.emplace_back("stages", std::move(stages));
        rep.tables.emplace_back("jump", std::move(diffs));
    } else {
        throw InputError("unknown --what '" + what + "' (use blimit, oao, minimal, or report)");
    }
    emit(rep, as_json, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact intersection pairings of b-divisors on metrized graphs"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h; green uses --h
    bool as_json = false;
    app.add_flag("--json", as_json, "emit the report as JSON");
    app.option_defaults()->ignore_case(false);

    std::string graph_path, x_text, y_text;
    auto* resistance = app.add_subcommand("resistance", "effective resistance between two points");
    resistance->fallthrough();
    resistance->add_option("--graph", graph_path)->required();
    resistance->add_option("--x", x_text)->required();
    resistance->add_option("--y", y_text)->required();

    std::string cm_graph;
    auto* canonical = app.add_subcommand("canonical-measure", "canonical measure of a graph");
    canonical->fallthrough();
    canonical->add_option("--graph", cm_graph)->required();

    std::string g_graph, g_k = "zero", g_h, g_at, g_eval;
    auto* green_cmd = app.add_subcommand("green", "Green's function of admissible data");
    green_cmd->fallthrough();
    green_cmd->set_help_flag("--help", "print help");
    green_cmd->add_option("--graph", g_graph)->required();
    green_cmd->add_option("--K", g_k, "zero, canonical, or a divisor JSON file");
    green_cmd->add_option("--h", g_h)->required();
    green_cmd->add_option("--at", g_at)->required();
    green_cmd->add_option("--eval", g_eval);

    std::string pair_request, pair_model, pair_table;
    auto* pair_cmd = app.add_subcommand("pair", "intersection number of two b-divisors");
    pair_cmd->fallthrough();
    pair_cmd->add_option("--request", pair_request)->required();
    pair_cmd->add_option("--model", pair_model, "model file overriding the request's");
    pair_cmd->add_option("--table", pair_table, "table file overriding the request's");

    std::string inc_request, inc_model, inc_table, inc_which = "b1";
    int inc_depth = 0;
    auto* inc_cmd = app.add_subcommand("incarnate", "trace of a b-divisor on a model");
    inc_cmd->fallthrough();
    inc_cmd->add_option("--request", inc_request)->required();
    inc_cmd->add_option("--model", inc_model, "model file overriding the request's");
    inc_cmd->add_option("--table", inc_table, "table file overriding the request's");
    inc_cmd->add_option("--b", inc_which, "b1 or b2");
    inc_cmd->add_option("--depth", inc_depth, "blow-up rounds applied to the model");

    std::string tower_request, tower_model, tower_table;
    int tower_depth = 3;
    auto* tower_cmd = app.add_subcommand("tower", "finite-level values along a blow-up tower");
    tower_cmd->fallthrough();
    tower_cmd->add_option("--request", tower_request)->required();
    tower_cmd->add_option("--model", tower_model, "model file overriding the request's");
    tower_cmd->add_option("--table", tower_table, "table file overriding the request's");
    tower_cmd->add_option("--depth", tower_depth);

    long e_n = 0, e_p = 0;
    std::string e_widths, e_family, e_what = "report";
    int e_depth = 3;
    auto* elliptic_cmd = app.add_subcommand("elliptic", "modular elliptic surface numbers");
    elliptic_cmd->fallthrough();
    elliptic_cmd->add_option("--N", e_n);
    elliptic_cmd->add_option("--p", e_p);
    elliptic_cmd->add_option("--widths", e_widths, "comma-separated cusp widths");
    elliptic_cmd->add_option("--family", e_family, "family JSON file");
    elliptic_cmd->add_option("--what", e_what, "blimit, oao, minimal, or report");
    elliptic_cmd->add_option("--depth", e_depth);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (resistance->parsed()) return run_resistance(graph_path, x_text, y_text, as_json, out);
        if (canonical->parsed()) return run_canonical_measure(cm_graph, as_json, out);
        if (green_cmd->parsed())
            return run_green(g_graph, g_k, g_h, g_at, g_eval, as_json, out);
        if (pair_cmd->parsed()) return run_pair(pair_request, pair_model, pair_table, as_json, out);
        if (inc_cmd->parsed())
            return run_incarnate(inc_request, inc_model, inc_table, inc_which, inc_depth, as_json,
                                 out);
        if (tower_cmd->parsed())
            return run_tower(tower_request, tower_model, tower_table, tower_depth, as_json, out);
        if (elliptic_cmd->parsed())
            return run_elliptic(e_n, e_p, e_widths, e_family, e_what, e_depth, as_json, out);
        err << "error: no subcommand\n";
        return 1;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const ConsistencyError& e) {
        err << "internal consistency error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace bdiv
