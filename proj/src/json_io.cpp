#include "bdiv/json_io.hpp"

#include <fstream>

#include "bdiv/errors.hpp"

namespace bdiv {

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

namespace {

Rat rat_field(const nlohmann::json& j, const char* what) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw InputError(std::string("expected a rational string for ") + what);
}

}  // namespace

BuiltGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw InputError("graph document requires 'vertices' and 'edges'");
    GraphSpec spec;
    std::map<std::string, int> index;
    bool any_cusp = false;
    for (const auto& v : doc.at("vertices")) {
        const std::string id = v.at("id").get<std::string>();
        if (!index.emplace(id, static_cast<int>(spec.names.size())).second)
            throw InputError("duplicate vertex id '" + id + "'");
        spec.names.push_back(id);
        if (v.contains("cusp")) {
            any_cusp = true;
            spec.cusps.push_back(v.at("cusp").get<std::string>());
        } else {
            spec.cusps.push_back("");
        }
    }
    if (!any_cusp) spec.cusps.clear();
    for (const auto& c : spec.cusps)
        if (c.empty()) throw InputError("either label every vertex with a cusp or none");
    for (const auto& e : doc.at("edges")) {
        const std::string a = e.at("a").get<std::string>(), b = e.at("b").get<std::string>();
        if (!index.count(a)) throw InputError("edge endpoint '" + a + "' is not a vertex");
        if (!index.count(b)) throw InputError("edge endpoint '" + b + "' is not a vertex");
        spec.edges.emplace_back(index[a], index[b], rat_field(e.at("len"), "edge length"));
    }
    return build_graph(spec);
}

ModelGraph model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw InputError("model document requires 'vertices' and 'edges'");
    std::vector<ModelGraph::Vertex> verts;
    std::map<std::string, int> index;
    for (const auto& v : doc.at("vertices")) {
        ModelGraph::Vertex mv;
        mv.name = v.at("id").get<std::string>();
        if (!v.contains("v")) throw InputError("model vertex requires a multiplicity field 'v'");
        if (!v.at("v").is_number_integer() || v.at("v").get<long>() <= 0)
            throw InputError("multiplicity of '" + mv.name + "' must be a positive integer");
        mv.mult = v.at("v").get<long>();
        if (v.contains("cusp")) mv.cusp = v.at("cusp").get<std::string>();
        if (!index.emplace(mv.name, static_cast<int>(verts.size())).second)
            throw InputError("duplicate model vertex id '" + mv.name + "'");
        verts.push_back(std::move(mv));
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("model edges are two-element arrays of vertex ids");
        const std::string a = e.at(0).get<std::string>(), b = e.at(1).get<std::string>();
        if (!index.count(a)) throw InputError("edge endpoint '" + a + "' is not a vertex");
        if (!index.count(b)) throw InputError("edge endpoint '" + b + "' is not a vertex");
        edges.emplace_back(index[a], index[b]);
    }
    return ModelGraph::base(std::move(verts), std::move(edges));
}

GraphPoint point_from_string(const std::string& text, const BuiltGraph& built) {
    if (auto v = built.graph->vertex_by_name(text)) return GraphPoint::vertex(*v);
    if (!text.empty() && text.front() == 'e') {
        const auto at = text.find('@');
        if (at != std::string::npos) {
            try {
                const int e = std::stoi(text.substr(1, at - 1));
                return built.locate(e, Rat::parse(text.substr(at + 1)));
            } catch (const std::logic_error&) {
                throw InputError("malformed point '" + text + "'");
            }
        }
    }
    throw InputError("unknown point '" + text + "' (use a vertex id or e<k>@<offset>)");
}

GraphDivisor divisor_from_json(const nlohmann::json& arr, const BuiltGraph& built) {
    if (!arr.is_array()) throw InputError("divisor must be an array of {at, c} entries");
    GraphDivisor d;
    for (const auto& entry : arr)
        d.add(point_from_string(entry.at("at").get<std::string>(), built),
              rat_field(entry.at("c"), "divisor coefficient"));
    return d;
}

}  // namespace bdiv
