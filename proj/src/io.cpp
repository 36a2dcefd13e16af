#include "donaldson/io.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace donaldson::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed ") + what + ": " + e.what());
    }
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

}  // namespace

std::string tree_to_json(const plumbing::WeightedTree& t, int indent) {
    json j;
    j["vertices"] = json::array();
    for (const auto& [v, w] : t.weights()) j["vertices"].push_back({{"id", v.value}, {"weight", w}});
    j["edges"] = json::array();
    for (const auto& [a, b] : t.edges()) j["edges"].push_back({a.value, b.value});
    return dump(j, indent);
}

plumbing::WeightedTree tree_from_json(const std::string& text) {
    const json j = parse(text);
    return guarded("tree", [&] {
        std::map<plumbing::VertexId, plumbing::Weight> weights;
        for (const auto& v : j.at("vertices")) {
            const plumbing::VertexId id{v.at("id").get<int>()};
            if (!weights.emplace(id, v.at("weight").get<plumbing::Weight>()).second)
                throw FormatError("duplicate vertex id " + std::to_string(id.value));
        }
        std::vector<std::pair<plumbing::VertexId, plumbing::VertexId>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair of ids");
            edges.emplace_back(plumbing::VertexId{e[0].get<int>()}, plumbing::VertexId{e[1].get<int>()});
        }
        try {
            return plumbing::WeightedTree(std::move(weights), edges);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    });
}

std::string spec_to_json(const cabling::SurgerySpec& s, int indent) {
    json j;
    j["pairs"] = json::array();
    for (const auto& p : s.knot.pairs()) j["pairs"].push_back({p.p, p.alpha});
    j["n"] = s.n;
    return dump(j, indent);
}

cabling::SurgerySpec spec_from_json(const std::string& text) {
    const json j = parse(text);
    return guarded("spec", [&] {
        std::vector<cabling::CablePair> pairs;
        for (const auto& p : j.at("pairs")) {
            if (!p.is_array() || p.size() != 2) throw FormatError("pair must be [p, alpha]");
            pairs.push_back({p[0].get<std::int64_t>(), p[1].get<std::int64_t>()});
        }
        try {
            return cabling::make_spec(cabling::CableTower(std::move(pairs)), j.at("n").get<std::int64_t>());
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    });
}

std::string witness_to_json(const lattice::EmbeddingMatrix& m, int indent) {
    json j;
    j["rank"] = m.rank;
    j["vectors"] = m.vectors;
    return dump(j, indent);
}

lattice::EmbeddingMatrix witness_from_json(const std::string& text) {
    const json j = parse(text);
    return guarded("witness", [&] {
        lattice::EmbeddingMatrix m;
        m.rank = j.at("rank").get<int>();
        m.vectors = j.at("vectors").get<std::vector<std::vector<std::int64_t>>>();
        for (const auto& v : m.vectors)
            if (static_cast<int>(v.size()) != m.rank) throw FormatError("vector length differs from rank");
        return m;
    });
}

std::string to_dot(const plumbing::WeightedTree& t, const std::map<plumbing::VertexId, cabling::Role>& roles) {
    std::ostringstream out;
    out << "graph plumbing {\n  node [shape=circle];\n";
    for (const auto& [v, w] : t.weights()) {
        out << "  v" << v.value << " [label=\"" << w << "\"";
        if (const auto it = roles.find(v); it != roles.end()) out << ", role=\"" << cabling::to_string(it->second) << "\"";
        out << "];\n";
    }
    for (const auto& [a, b] : t.edges()) out << "  v" << a.value << " -- v" << b.value << ";\n";
    out << "}\n";
    return out.str();
}

std::string csv_header() { return "p1,a1,p2,a2,n,N,rank,verdict,witness_file,nodes,ms"; }

std::string csv_row(const classify::SweepRow& row, const std::string& witness_file, bool timing) {
    const auto& k = row.spec.knot;
    std::ostringstream out;
    out << k[0].p << ',' << k[0].alpha << ',' << k[1].p << ',' << k[1].alpha << ',' << row.spec.n << ',' << row.N
        << ',';
    if (row.result.rank) out << *row.result.rank;
    out << ',' << classify::verdict_name(row.result.verdict) << ',' << witness_file << ',' << row.result.nodes << ',';
    if (timing) out << std::fixed << std::setprecision(3) << row.ms;
    return out.str();
}

std::string audit_to_json(const classify::AuditReport& r, int indent) {
    auto entries = [](const std::vector<classify::AuditEntry>& es) {
        json a = json::array();
        for (const auto& e : es)
            a.push_back({{"spec", e.spec.to_string()}, {"verdict", e.verdict}, {"predicted_pass", e.predicted_pass}});
        return a;
    };
    json j;
    j["family_form"] = classify::to_string(r.form);
    j["rows"] = r.rows;
    j["agreements"] = r.agreements;
    j["skipped"] = r.skipped;
    j["disagreements"] = entries(r.disagreements);
    j["indeterminate"] = entries(r.indeterminate);
    j["uncovered_family_members"] = json::array();
    for (const auto& [spec, why] : r.uncovered_family_members)
        j["uncovered_family_members"].push_back({{"spec", spec}, {"reason", why}});
    j["perfect"] = r.perfect();
    return dump(j, indent);
}

std::string witness_stem(const cabling::SurgerySpec& s) {
    std::string out = "witness";
    for (const auto& p : s.knot.pairs()) out += "_" + std::to_string(p.p) + "_" + std::to_string(p.alpha);
    return out + "_" + std::to_string(s.n);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace donaldson::io
