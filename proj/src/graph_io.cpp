// Copyright 2026 The casegraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casegraph/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "casegraph/error.hpp"

namespace casegraph {

using nlohmann::json;

json to_json(const CausalGraph& graph) {
  json nodes = json::array();
  for (const auto& n : graph.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"category", std::string(to_string(n.category))},
                     {"provenance", n.provenance}});
  }
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"source", e.source}, {"target", e.target}, {"provenance", e.provenance}});
  }
  json doc;
  doc["session_id"] = graph.session_id();
  doc["origin"] = std::string(to_string(graph.origin()));
  doc["annotator_id"] = graph.annotator_id() ? json(*graph.annotator_id()) : json(nullptr);
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc;
}

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) schema_error(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<int> optional_provenance(const json& obj, const std::string& where) {
  auto it = obj.find("provenance");
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) schema_error(where, "provenance must be an array");
  std::vector<int> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      schema_error(where, "provenance entries must be non-negative integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

CausalGraph graph_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("document", "top level must be an object");
  std::string session_id = require_string(doc, "session_id", "document");
  std::string origin_name = require_string(doc, "origin", "document");
  auto origin = parse_origin(origin_name);
  if (!origin) schema_error("document", "unknown origin '" + origin_name + "'");

  std::optional<std::string> annotator;
  if (auto it = doc.find("annotator_id"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) schema_error("document", "annotator_id must be a string or null");
    annotator = it->get<std::string>();
  }

  const json& jnodes = require(doc, "nodes", "document");
  if (!jnodes.is_array()) schema_error("document", "nodes must be an array");
  std::vector<FactorNode> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& jn = jnodes[i];
    if (!jn.is_object()) schema_error(where, "must be an object");
    FactorNode n;
    n.id = require_string(jn, "id", where);
    n.label = require_string(jn, "label", where);
    std::string cat = require_string(jn, "category", where);
    auto parsed = parse_category(cat);
    if (!parsed) schema_error(where, "unknown category '" + cat + "'");
    n.category = *parsed;
    n.provenance = optional_provenance(jn, where);
    nodes.push_back(std::move(n));
  }

  const json& jedges = require(doc, "edges", "document");
  if (!jedges.is_array()) schema_error("document", "edges must be an array");
  std::vector<CausalEdge> edges;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& je = jedges[i];
    if (!je.is_object()) schema_error(where, "must be an object");
    CausalEdge e;
    e.source = require_string(je, "source", where);
    e.target = require_string(je, "target", where);
    e.provenance = optional_provenance(je, where);
    edges.push_back(std::move(e));
  }
  return build_graph(std::move(session_id), std::move(nodes), std::move(edges), *origin,
                     std::move(annotator));
}

std::string serialize(const CausalGraph& graph) { return to_json(graph).dump(2) + "\n"; }

CausalGraph deserialize(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument,
                "at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return graph_from_json(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path.string() + "'");
}

CausalGraph load_graph(const std::filesystem::path& path) {
  try {
    return deserialize(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_graph(const CausalGraph& graph, const std::filesystem::path& path) {
  write_file(path, serialize(graph));
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string to_dot(const CausalGraph& graph) {
  std::ostringstream os;
  os << "digraph " << dot_quote(graph.session_id()) << " {\n";
  for (const auto& n : graph.nodes()) {
    os << "  " << dot_quote(n.id) << " [label=" << dot_quote(n.label)
       << ", category=" << dot_quote(to_string(n.category)) << "];\n";
  }
  for (const auto& e : graph.edges()) {
    os << "  " << dot_quote(e.source) << " -> " << dot_quote(e.target) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_graphml(const CausalGraph& graph) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
     << "  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n"
     << "  <graph id=\"" << xml_escape(graph.session_id()) << "\" edgedefault=\"directed\">\n";
  for (const auto& n : graph.nodes()) {
    os << "    <node id=\"" << xml_escape(n.id) << "\">\n"
       << "      <data key=\"label\">" << xml_escape(n.label) << "</data>\n"
       << "      <data key=\"category\">" << to_string(n.category) << "</data>\n"
       << "    </node>\n";
  }
  std::size_t i = 0;
  for (const auto& e : graph.edges()) {
    os << "    <edge id=\"e" << i++ << "\" source=\"" << xml_escape(e.source) << "\" target=\""
       << xml_escape(e.target) << "\"/>\n";
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

}  // namespace

std::string export_graph(const CausalGraph& graph, ExportFormat format) {
  return format == ExportFormat::kDot ? to_dot(graph) : to_graphml(graph);
}

}  // namespace casegraph
