#ifndef WTAP_IO_HPP
#define WTAP_IO_HPP

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wtap/decomposition.hpp"
#include "wtap/instance.hpp"
#include "wtap/rounding.hpp"

namespace wtap {

using Json = nlohmann::json;

// Text format:
//   wtap <n> <num_links>
//   edge u v          (n-1 lines)
//   link u v <cost>   (num_links lines, cost as p/q or integer)
//   root r            (optional)
// Node ids are 0-based. Blank lines and '#' comments are ignored.
inline WtapInstance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  long expected_links = -1;
  std::vector<TreeEdge> edges;
  std::vector<Link> links;
  std::optional<NodeId> root;
  auto bad = [&lineno](const std::string& why) {
    return InvalidArgument("line " + std::to_string(lineno) + ": " + why);
  };
  auto node = [&](std::istringstream& ls) {
    long v;
    if (!(ls >> v)) throw bad("expected a node id");
    if (v < 0 || v >= n) throw bad("node " + std::to_string(v) + " out of range");
    return static_cast<NodeId>(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (n < 0 && kw != "wtap") throw bad("expected header 'wtap <n> <num_links>'");
    if (kw == "wtap") {
      if (n >= 0) throw bad("duplicate header");
      if (!(ls >> n >> expected_links) || n < 1 || expected_links < 0) throw bad("malformed header");
    } else if (kw == "edge") {
      NodeId u = node(ls);
      NodeId v = node(ls);
      edges.push_back({u, v});
    } else if (kw == "link") {
      NodeId u = node(ls);
      NodeId v = node(ls);
      std::string cost;
      if (!(ls >> cost)) throw bad("missing link cost");
      try {
        links.push_back(Link{u, v, parse_rational(cost), {}});
      } catch (const std::invalid_argument& ex) {
        throw bad(ex.what());
      }
    } else if (kw == "root") {
      if (root) throw bad("duplicate root");
      root = node(ls);
    } else {
      throw bad("unknown keyword '" + kw + "'");
    }
    std::string extra;
    if (ls >> extra) throw bad("trailing token '" + extra + "'");
  }
  if (n < 0) throw InvalidArgument("empty instance");
  if (static_cast<long>(links.size()) != expected_links) {
    throw InvalidArgument("header announces " + std::to_string(expected_links) + " links, found " +
                          std::to_string(links.size()));
  }
  return WtapInstance::create(n, std::move(edges), std::move(links), root);
}

inline std::string write_instance_text(const WtapInstance& inst) {
  std::ostringstream os;
  os << "wtap " << inst.node_count() << " " << inst.link_count() << "\n";
  for (const auto& e : inst.edges()) os << "edge " << e.u << " " << e.v << "\n";
  for (const auto& l : inst.links()) os << "link " << l.u << " " << l.v << " " << to_string(l.cost) << "\n";
  if (inst.root()) os << "root " << *inst.root() << "\n";
  return os.str();
}

// {"nodes": n, "edges": [[u,v],...], "links": [{"u":..,"v":..,"cost":"p/q"}], "root": r}
inline WtapInstance instance_from_json(const Json& j) {
  try {
    const int n = j.at("nodes").get<int>();
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    std::vector<Link> links;
    for (const auto& l : j.value("links", Json::array())) {
      const Json& c = l.at("cost");
      Rational cost = c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>());
      links.push_back(Link{l.at("u").get<int>(), l.at("v").get<int>(), cost, {}});
    }
    std::optional<NodeId> root;
    if (j.contains("root") && !j.at("root").is_null()) root = j.at("root").get<int>();
    return WtapInstance::create(n, std::move(edges), std::move(links), root);
  } catch (const Json::exception& ex) {
    throw InvalidArgument(std::string("malformed instance JSON: ") + ex.what());
  }
}

inline Json instance_to_json(const WtapInstance& inst) {
  Json j;
  j["nodes"] = inst.node_count();
  j["edges"] = Json::array();
  for (const auto& e : inst.edges()) j["edges"].push_back({e.u, e.v});
  j["links"] = Json::array();
  for (const auto& l : inst.links()) j["links"].push_back({{"u", l.u}, {"v", l.v}, {"cost", to_string(l.cost)}});
  if (inst.root()) j["root"] = *inst.root();
  return j;
}

// JSON if the first non-blank character is '{', else the text format.
inline WtapInstance parse_instance(const std::string& content) {
  auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    Json j;
    try {
      j = Json::parse(content);
    } catch (const Json::exception& ex) {
      throw InvalidArgument(std::string("instance JSON does not parse: ") + ex.what());
    }
    return instance_from_json(j);
  }
  return parse_instance_text(content);
}

inline WtapInstance read_instance_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_instance(content);
}

inline Json solution_to_json(const WtapInstance& inst, std::span<const LinkId> links) {
  Json j;
  j["links"] = Json::array();
  for (LinkId l : links) {
    j["links"].push_back({{"id", l}, {"u", inst.link(l).u}, {"v", inst.link(l).v}, {"cost", to_string(inst.link(l).cost)}});
  }
  j["cost"] = to_string(cost_of(inst, links));
  j["feasible"] = is_feasible(inst, links);
  return j;
}

inline Json solution_to_json(const FractionalSolution& x) {
  Json j = Json::object();
  for (LinkId l = 0; l < x.size(); ++l) {
    if (x[l] != 0) j[std::to_string(l)] = to_string(x[l]);
  }
  return j;
}

inline Json decomposition_to_json(const DecompositionResult& d) {
  Json j;
  j["pairs"] = Json::array();
  for (const auto& p : d.pairs) {
    Json pj;
    pj["nodes"] = p.subtree.node_count();
    pj["edges"] = Json::array();
    for (EdgeId e = 0; e < p.subtree.edge_count(); ++e) pj["edges"].push_back(p.subtree.lineage().edge_source[e]);
    Json x = Json::object();
    for (LinkId l = 0; l < p.subtree.link_count(); ++l) {
      if (p.local_x[l] != 0) x[std::to_string(p.subtree.lineage().link_source[l])] = to_string(p.local_x[l]);
    }
    pj["x"] = x;
    if (p.beta_center) pj["beta_center"] = *p.beta_center;
    pj["contracted_nodes"] = contracted_node_count(p.subtree);
    j["pairs"].push_back(pj);
  }
  j["heavy_edges"] = d.heavy_edges;
  j["heavy_cover"] = d.heavy_cover;
  j["split_edges"] = d.split_edges;
  j["split_cover"] = d.split_cover;
  j["contracted_nodes"] = d.contracted_nodes;
  j["ledger"] = {{"cost_x", to_string(d.cost_x)},
                 {"cost_pairs", to_string(d.cost_pairs)},
                 {"cost_heavy", to_string(d.cost_heavy)},
                 {"cost_split", to_string(d.cost_split)}};
  return j;
}

inline Json property_to_json(const PropertyCheck& p) {
  Json j{{"ok", p.ok}};
  if (!p.ok) j["witness"] = p.witness;
  return j;
}

inline Json decomposition_report_to_json(const DecompositionReport& r) {
  return Json{{"odd_cut_feasible", property_to_json(r.odd_cut_feasible)},
              {"disjoint", property_to_json(r.disjoint)},
              {"simple", property_to_json(r.simple)},
              {"cost_increase", property_to_json(r.cost_increase)},
              {"cheap_covers", property_to_json(r.cheap_covers)},
              {"pairs_bound_loose", to_string(r.pairs_bound_loose)},
              {"pairs_bound_explicit", to_string(r.pairs_bound_explicit)},
              {"heavy_bound", to_string(r.heavy_bound)},
              {"split_bound", to_string(r.split_bound)}};
}

inline Json report_to_json(const RunReport& r) {
  Json j;
  j["digest"] = r.digest;
  j["lp_value"] = to_string(r.lp_value);
  j["opt_if_known"] = r.opt_if_known ? Json(to_string(*r.opt_if_known)) : Json(nullptr);
  j["output_cost"] = to_string(r.output_cost);
  j["ratio"] = r.ratio ? Json(to_string(*r.ratio)) : Json(nullptr);
  j["feasible"] = r.feasible;
  j["per_pair"] = Json::array();
  for (const auto& p : r.per_pair) {
    j["per_pair"].push_back({{"method", to_string(p.method)},
                             {"cost", to_string(p.cost)},
                             {"certificate", to_string(p.certificate)},
                             {"cross_heavy", {{"cost", to_string(p.cross_heavy_cost)},
                                              {"certificate", to_string(p.cross_heavy_certificate)}}},
                             {"bundle", {{"cost", to_string(p.bundle_cost)},
                                         {"certificate", to_string(p.bundle_certificate)},
                                         {"rows_hold", p.rows_hold}}},
                             {"nodes", p.nodes},
                             {"center", p.center}});
  }
  j["cuts_added"] = r.cuts_added;
  j["bundles_added"] = r.bundles_added;
  j["restarts"] = r.restarts;
  j["restart_limit_hit"] = r.restart_limit_hit;
  j["lp_certificate_ok"] = r.lp_certificate_ok;
  if (!r.lp_certificate_ok) j["lp_certificate_failure"] = r.lp_certificate_failure;
  j["ledger"] = {{"scale", to_string(r.scale)},
                 {"cost_x", to_string(r.cost_x)},
                 {"cost_pairs", to_string(r.cost_pairs)},
                 {"cost_heavy", to_string(r.cost_heavy)},
                 {"cost_split", to_string(r.cost_split)},
                 {"heavy_edges", r.heavy_edges},
                 {"split_edges", r.split_edges},
                 {"contracted_nodes", r.contracted_nodes},
                 {"aggregate_ok", r.aggregate_ok}};
  j["timings_ms"] = r.timings_ms;
  return j;
}

// Inverse of report_to_json for the fields it writes.
inline RunReport report_from_json(const Json& j) {
  RunReport r;
  auto q = [](const Json& v) { return parse_rational(v.get<std::string>()); };
  r.digest = j.at("digest").get<std::uint64_t>();
  r.lp_value = q(j.at("lp_value"));
  if (!j.at("opt_if_known").is_null()) r.opt_if_known = q(j.at("opt_if_known"));
  r.output_cost = q(j.at("output_cost"));
  if (!j.at("ratio").is_null()) r.ratio = q(j.at("ratio"));
  r.feasible = j.at("feasible").get<bool>();
  for (const auto& p : j.at("per_pair")) {
    PairReport pr;
    const std::string m = p.at("method").get<std::string>();
    pr.method = m == "bundle" ? RoundingMethod::BundleBased
                              : m == "combined" ? RoundingMethod::Combined : RoundingMethod::CrossHeavy;
    pr.cost = q(p.at("cost"));
    pr.certificate = q(p.at("certificate"));
    pr.cross_heavy_cost = q(p.at("cross_heavy").at("cost"));
    pr.cross_heavy_certificate = q(p.at("cross_heavy").at("certificate"));
    pr.bundle_cost = q(p.at("bundle").at("cost"));
    pr.bundle_certificate = q(p.at("bundle").at("certificate"));
    pr.rows_hold = p.at("bundle").at("rows_hold").get<bool>();
    pr.nodes = p.at("nodes").get<int>();
    pr.center = p.at("center").get<int>();
    r.per_pair.push_back(pr);
  }
  r.cuts_added = j.at("cuts_added").get<int>();
  r.bundles_added = j.at("bundles_added").get<int>();
  r.restarts = j.at("restarts").get<int>();
  r.restart_limit_hit = j.at("restart_limit_hit").get<bool>();
  r.lp_certificate_ok = j.at("lp_certificate_ok").get<bool>();
  if (j.contains("lp_certificate_failure")) r.lp_certificate_failure = j.at("lp_certificate_failure");
  const Json& l = j.at("ledger");
  r.scale = q(l.at("scale"));
  r.cost_x = q(l.at("cost_x"));
  r.cost_pairs = q(l.at("cost_pairs"));
  r.cost_heavy = q(l.at("cost_heavy"));
  r.cost_split = q(l.at("cost_split"));
  r.heavy_edges = l.at("heavy_edges").get<int>();
  r.split_edges = l.at("split_edges").get<int>();
  r.contracted_nodes = l.at("contracted_nodes").get<int>();
  r.aggregate_ok = l.at("aggregate_ok").get<bool>();
  r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
  return r;
}

}  // namespace wtap

#endif  // WTAP_IO_HPP
