#include "cfrk/io.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

namespace cfrk {

using nlohmann::json;

namespace {

json rational_json(const Rational& r) { return r.str(); }

Rational parse_rational(const json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    auto r = Rational::parse(v.get<std::string>());
    if (r) return *r;
  }
  throw IoError(what + ": expected integer or \"p/q\" string");
}

std::string kind_of(bool client, bool facility) {
  if (client && facility) return "both";
  return client ? "client" : "facility";
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  const MetricSpace& m = *inst.metric;
  json doc;
  doc["k"] = inst.k;
  doc["objective"] = objective_name(inst.objective);

  std::set<int> clients(inst.clients.begin(), inst.clients.end());
  std::set<int> facilities(inst.facilities.begin(), inst.facilities.end());
  json points = json::array();
  for (int p = 0; p < m.size(); ++p) {
    bool c = clients.count(p), f = facilities.count(p);
    if (!c && !f) continue;  // auxiliary metric node
    json pt;
    pt["id"] = m.name(p);
    pt["kind"] = kind_of(c, f);
    if (auto it = inst.client_weight.find(p); it != inst.client_weight.end())
      pt["weight"] = rational_json(it->second);
    if (auto it = inst.capacity.find(p); it != inst.capacity.end())
      pt["capacity"] = it->second;
    points.push_back(std::move(pt));
  }
  doc["points"] = std::move(points);

  json groups = json::array();
  for (size_t g = 0; g < inst.groups.size(); ++g) {
    json grp;
    json members = json::array();
    for (int f : inst.groups[g]) members.push_back(m.name(f));
    grp["members"] = std::move(members);
    grp["lower"] = inst.lower[g];
    grp["upper"] = inst.upper[g];
    groups.push_back(std::move(grp));
  }
  doc["groups"] = std::move(groups);

  json metric;
  json nodes = json::array();
  for (int p = 0; p < m.size(); ++p) nodes.push_back(m.name(p));
  metric["nodes"] = std::move(nodes);
  switch (m.kind()) {
    case MetricKind::dense: {
      metric["type"] = "matrix";
      json rows = json::array();
      for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(rational_json(m.dist(i, j)));
        rows.push_back(std::move(row));
      }
      metric["data"] = std::move(rows);
      break;
    }
    case MetricKind::graph: {
      metric["type"] = "graph";
      json edges = json::array();
      for (const auto& e : m.graph_edges())
        edges.push_back(json::array(
            {m.name(e.u), m.name(e.v), rational_json(e.weight)}));
      metric["edges"] = std::move(edges);
      break;
    }
    case MetricKind::tree: {
      metric["type"] = "tree";
      metric["root"] = m.name(m.tree_root());
      json edges = json::array();
      for (const auto& e : m.tree_edges())
        edges.push_back(json::array(
            {m.name(e.parent), m.name(e.child), rational_json(e.weight)}));
      metric["edges"] = std::move(edges);
      break;
    }
  }
  doc["metric"] = std::move(metric);
  return doc.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("instance: invalid JSON: ") + e.what());
  }
  try {
    Instance inst;
    inst.k = doc.at("k").get<int>();
    if (doc.contains("objective")) {
      auto obj = objective_from_name(doc.at("objective").get<std::string>());
      if (!obj) throw IoError("instance: unknown objective");
      inst.objective = *obj;
    }

    const json& metric = doc.at("metric");
    std::vector<std::string> names;
    for (const auto& v : metric.at("nodes")) names.push_back(v.get<std::string>());
    std::map<std::string, int> index;
    for (size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
    auto node_of = [&](const std::string& id) {
      auto it = index.find(id);
      if (it == index.end()) throw IoError("instance: unknown node id '" + id + "'");
      return it->second;
    };

    const std::string type = metric.at("type").get<std::string>();
    std::shared_ptr<const MetricSpace> ms;
    if (type == "matrix") {
      std::vector<std::vector<Rational>> rows;
      for (const auto& r : metric.at("data")) {
        rows.emplace_back();
        for (const auto& v : r) rows.back().push_back(parse_rational(v, "metric.data"));
      }
      ms = std::make_shared<MetricSpace>(MetricSpace::from_matrix(names, std::move(rows)));
    } else if (type == "graph") {
      std::vector<WeightedEdge> edges;
      for (const auto& e : metric.at("edges"))
        edges.push_back({node_of(e.at(0).get<std::string>()),
                         node_of(e.at(1).get<std::string>()),
                         parse_rational(e.at(2), "metric.edges")});
      ms = std::make_shared<MetricSpace>(MetricSpace::from_graph(names, std::move(edges)));
    } else if (type == "tree") {
      std::vector<TreeEdge> edges;
      for (const auto& e : metric.at("edges"))
        edges.push_back({node_of(e.at(0).get<std::string>()),
                         node_of(e.at(1).get<std::string>()),
                         parse_rational(e.at(2), "metric.edges")});
      int root = node_of(metric.at("root").get<std::string>());
      ms = std::make_shared<MetricSpace>(MetricSpace::from_tree(names, root, std::move(edges)));
    } else {
      throw IoError("instance: unknown metric type '" + type + "'");
    }
    inst.metric = ms;

    for (const auto& pt : doc.at("points")) {
      int p = node_of(pt.at("id").get<std::string>());
      const std::string kind = pt.at("kind").get<std::string>();
      if (kind != "client" && kind != "facility" && kind != "both")
        throw IoError("instance: unknown point kind '" + kind + "'");
      bool client = kind == "client" || kind == "both";
      bool facility = kind == "facility" || kind == "both";
      if (client) inst.clients.push_back(p);
      if (facility) inst.facilities.push_back(p);
      if (pt.contains("weight"))
        inst.client_weight[p] = parse_rational(pt.at("weight"), "points.weight");
      if (pt.contains("capacity")) inst.capacity[p] = pt.at("capacity").get<long long>();
    }

    if (doc.contains("groups")) {
      for (const auto& grp : doc.at("groups")) {
        std::vector<int> members;
        for (const auto& v : grp.at("members"))
          members.push_back(node_of(v.get<std::string>()));
        inst.groups.push_back(std::move(members));
        inst.lower.push_back(grp.at("lower").get<long long>());
        inst.upper.push_back(grp.at("upper").get<long long>());
      }
    }
    return inst;
  } catch (const json::exception& e) {
    throw IoError(std::string("instance: ") + e.what());
  }
}

std::string serialize_solution(const Instance& inst, const Solution& sol) {
  const MetricSpace& m = *inst.metric;
  json doc;
  json centers = json::array();
  for (int c : sol.centers) centers.push_back(m.name(c));
  doc["centers"] = std::move(centers);
  json rows = json::array();
  for (const auto& a : sol.assignment) {
    json row;
    row["client"] = m.name(a.client);
    row["center"] = m.name(a.center);
    row["amount"] = rational_json(a.amount);
    rows.push_back(std::move(row));
  }
  doc["assignment"] = std::move(rows);
  doc["cost"] = rational_json(sol.cost);
  doc["objective"] = objective_name(inst.objective);
  doc["weight_scale"] = sol.weight_scale;
  doc["weights_rounded"] = sol.weights_rounded;
  return doc.dump(2) + "\n";
}

Solution parse_solution(const Instance& inst, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("solution: invalid JSON: ") + e.what());
  }
  try {
    const MetricSpace& m = *inst.metric;
    auto node_of = [&](const std::string& id) {
      auto idx = m.index_of(id);
      if (!idx) throw IoError("solution: unknown node id '" + id + "'");
      return *idx;
    };
    Solution sol;
    for (const auto& v : doc.at("centers")) sol.centers.push_back(node_of(v.get<std::string>()));
    std::sort(sol.centers.begin(), sol.centers.end());
    for (const auto& row : doc.at("assignment"))
      sol.assignment.push_back({node_of(row.at("client").get<std::string>()),
                                node_of(row.at("center").get<std::string>()),
                                parse_rational(row.at("amount"), "assignment.amount")});
    sol.cost = parse_rational(doc.at("cost"), "cost");
    if (doc.contains("weight_scale")) sol.weight_scale = doc.at("weight_scale").get<long long>();
    if (doc.contains("weights_rounded")) sol.weights_rounded = doc.at("weights_rounded").get<bool>();
    return sol;
  } catch (const json::exception& e) {
    throw IoError(std::string("solution: ") + e.what());
  }
}

std::string serialize_provenance(const ReductionArtifact& art) {
  const MetricSpace& m = *art.instance.metric;
  json doc;
  doc["mode"] = art.mode == ReductionMode::per_clause ? "per-clause" : "super-clause";
  doc["bounds"] = art.bounds == BoundsMode::range ? "range" : "lower-only";
  doc["capacities"] = art.capacities == ReductionCapacities::unit ? "unit" : "unbounded";
  doc["d"] = art.d_param;
  if (art.kappa > 0) doc["kappa"] = art.kappa;
  doc["dummy"] = m.name(art.dummy_node);
  doc["padded_clauses"] = art.padded_clauses;
  json fac = json::object();
  for (const auto& [node, prov] : art.provenance) {
    json entry;
    entry["gadget"] = prov.gadget;
    json partial = json::object();
    for (const auto& [var, val] : prov.partial)
      partial["x" + std::to_string(var)] = val;
    entry["assigns"] = std::move(partial);
    fac[m.name(node)] = std::move(entry);
  }
  doc["facilities"] = std::move(fac);
  return doc.dump(2) + "\n";
}

std::uint64_t instance_digest(const Instance& inst) {
  std::string canon = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
}

}  // namespace cfrk
