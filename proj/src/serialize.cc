#include "ness/serialize.h"

#include <set>
#include <sstream>

namespace ness {

using nlohmann::json;

json to_json(const Context& ctx, const Trace& trace) {
  json events = json::array();
  for (int t = 0; t <= trace.last_event_time(); ++t) {
    const EventSet& es = trace.events_at(t);
    events.push_back({{"t", t}, {"events", std::vector<std::string>(es.begin(), es.end())}});
  }
  json states = json::array();
  for (int t = 0; t < static_cast<int>(trace.states().size()); ++t) {
    states.push_back({{"t", t}, {"literals", trace.states()[t].strings()}});
  }
  return {{"domain", ctx.name()},
          {"horizon", ctx.horizon()},
          {"events", events},
          {"states", states}};
}

json to_json(const Occurrence& o) { return {{"event", o.event}, {"t", o.time}}; }

json to_json(const OccurrenceSet& occurrences) {
  json out = json::array();
  for (const auto& o : occurrences) out.push_back(to_json(o));
  return out;
}

json to_json(const DirectRelation& r) {
  json cells = json::array();
  for (const auto& c : r.partition) {
    cells.push_back({{"t", c.time}, {"literals", c.literals.strings()}});
  }
  return {{"causes", to_json(r.causes)},
          {"backing", r.backing.strings()},
          {"partition", cells},
          {"target", r.target.to_string()},
          {"t", r.target_time}};
}

json to_json(const CausalReport& report) {
  json direct = json::array();
  for (const auto& r : report.direct) direct.push_back(to_json(r));
  json rejected = json::array();
  for (const auto& r : report.rejected) {
    rejected.push_back({{"backing", r.backing.strings()}, {"reason", r.reason}});
  }
  json expansions = json::array();
  for (const auto& e : report.expansions) {
    json rels = json::array();
    for (const auto& r : e.relations) rels.push_back(to_json(r));
    expansions.push_back(
        {{"parent", to_json(e.parent)}, {"condition", e.condition.to_string()}, {"relations", rels}});
  }
  json sets = json::array();
  for (const auto& c : report.cause_sets) {
    sets.push_back(
        {{"causes", to_json(c.causes)}, {"decisional", c.decisional}, {"terminal", c.terminal}});
  }
  return {{"target", report.target.to_string()},
          {"t", report.time},
          {"direct", direct},
          {"rejected", rejected},
          {"expansions", expansions},
          {"cause_sets", sets},
          {"answer", to_json(report.direct_union)},
          {"expanded", to_json(report.expanded_union)},
          {"decisional", to_json(report.decisional)}};
}

namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class DotWriter {
 public:
  void Node(const std::string& id, const std::string& label, const std::string& shape) {
    if (!seen_.insert(id).second) return;
    nodes_ << "  " << Quote(id) << " [label=" << Quote(label) << ", shape=" << shape << "];\n";
  }
  void Edge(const std::string& from, const std::string& to, const std::string& attrs = "") {
    std::string line = "  " + Quote(from) + " -> " + Quote(to);
    if (!attrs.empty()) line += " [" + attrs + "]";
    line += ";\n";
    if (edges_seen_.insert(line).second) edges_ << line;
  }
  std::string str() const { return "digraph causes {\n" + nodes_.str() + edges_.str() + "}\n"; }

 private:
  std::set<std::string> seen_;
  std::set<std::string> edges_seen_;
  std::ostringstream nodes_;
  std::ostringstream edges_;
};

std::string OccurrenceNode(DotWriter& dot, const Occurrence& o) {
  std::string id = "e:" + o.to_string();
  dot.Node(id, o.to_string(), "box");
  return id;
}

std::string FormulaNode(DotWriter& dot, const Formula& f, int t) {
  std::string label = f.to_string() + "@" + std::to_string(t);
  std::string id = "f:" + label;
  dot.Node(id, label, "diamond");
  return id;
}

void Relation(DotWriter& dot, const DirectRelation& r, const std::string& target) {
  for (const auto& cell : r.partition) {
    for (const auto& l : cell.literals) {
      std::string label = l.to_string() + "@" + std::to_string(cell.time + 1);
      std::string lit = "l:" + label;
      dot.Node(lit, label, "ellipse");
      dot.Edge(lit, target, "label=" + Quote(r.backing.to_string()));
      for (const auto& o : r.causes_at(cell.time)) dot.Edge(OccurrenceNode(dot, o), lit);
    }
  }
}

}  // namespace

std::string to_dot(const CausalReport& report) {
  DotWriter dot;
  std::string target = FormulaNode(dot, report.target, report.time);
  for (const auto& r : report.direct) Relation(dot, r, target);
  for (const auto& e : report.expansions) {
    std::string cond = FormulaNode(dot, e.condition, e.parent.time);
    dot.Edge(cond, OccurrenceNode(dot, e.parent));
    for (const auto& r : e.relations) Relation(dot, r, cond);
  }
  for (const auto& o : report.decisional) {
    dot.Edge(OccurrenceNode(dot, o), target, "style=dashed, label=\"decisional\"");
  }
  return dot.str();
}

}  // namespace ness
