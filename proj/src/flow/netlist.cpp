#include "dispel/flow/netlist.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dispel/common/error.hpp"
#include "dispel/common/hash.hpp"
#include "dispel/common/kv.hpp"

namespace dispel::flow {

int Netlist::add_net(const std::string& name) {
  nets.push_back({name, -1, {}});
  return static_cast<int>(nets.size()) - 1;
}

int Netlist::add_node(Node n) {
  const int id = static_cast<int>(nodes.size());
  for (size_t p = 0; p < n.ins.size(); ++p) nets.at(n.ins[p]).sinks.push_back({id, static_cast<int>(p)});
  if (n.out >= 0) {
    Net& net = nets.at(n.out);
    if (net.driver >= 0) throw ConfigError("net " + net.name + " has several drivers");
    net.driver = id;
  }
  nodes.push_back(std::move(n));
  return id;
}

int Netlist::net_index(const std::string& name) const {
  for (size_t i = 0; i < nets.size(); ++i)
    if (nets[i].name == name) return static_cast<int>(i);
  return -1;
}

void Netlist::rebuild() {
  for (auto& n : nets) {
    n.driver = -1;
    n.sinks.clear();
  }
  for (size_t id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    for (size_t p = 0; p < n.ins.size(); ++p) nets.at(n.ins[p]).sinks.push_back({static_cast<int>(id), static_cast<int>(p)});
    if (n.out >= 0) {
      if (nets.at(n.out).driver >= 0) throw ConfigError("net " + nets[n.out].name + " has several drivers");
      nets[n.out].driver = static_cast<int>(id);
    }
  }
}

void Netlist::validate() const {
  std::vector<int> drivers(nets.size(), 0);
  for (const auto& n : nodes) {
    if (n.out >= 0) ++drivers.at(n.out);
    for (int in : n.ins)
      if (in < 0 || in >= static_cast<int>(nets.size())) throw ConfigError("node " + n.name + " has a dangling pin");
    if ((n.kind == NodeKind::gate || n.kind == NodeKind::reg || n.kind == NodeKind::pin_in) && n.out < 0)
      throw ConfigError("node " + n.name + " drives nothing");
  }
  for (size_t i = 0; i < nets.size(); ++i) {
    if (drivers[i] != 1)
      throw ConfigError("net " + nets[i].name + " has " + std::to_string(drivers[i]) + " drivers");
  }
  (void)topo_gates();
}

std::vector<int> Netlist::topo_gates() const {
  // Kahn over gate-to-gate edges; registers and pins break paths.
  std::vector<int> indeg(nodes.size(), 0);
  for (size_t id = 0; id < nodes.size(); ++id) {
    if (nodes[id].kind != NodeKind::gate) continue;
    for (int in : nodes[id].ins) {
      const int d = nets[in].driver;
      if (d >= 0 && nodes[d].kind == NodeKind::gate) ++indeg[id];
    }
  }
  std::vector<int> order, ready;
  for (size_t id = 0; id < nodes.size(); ++id)
    if (nodes[id].kind == NodeKind::gate && indeg[id] == 0) ready.push_back(static_cast<int>(id));
  std::reverse(ready.begin(), ready.end());
  while (!ready.empty()) {
    const int id = ready.back();
    ready.pop_back();
    order.push_back(id);
    for (const Sink& s : nets[nodes[id].out].sinks) {
      if (nodes[s.node].kind == NodeKind::gate && --indeg[s.node] == 0) ready.push_back(s.node);
    }
  }
  if (order.size() != gate_count()) throw ConfigError("netlist has a combinational cycle");
  return order;
}

int Netlist::logic_depth() const {
  std::vector<int> level(nodes.size(), 0);
  int best = 0;
  for (int id : topo_gates()) {
    int l = 0;
    for (int in : nodes[id].ins) {
      const int d = nets[in].driver;
      if (nodes[d].kind == NodeKind::gate) l = std::max(l, level[d]);
    }
    level[id] = l + 1;
    best = std::max(best, level[id]);
  }
  return best;
}

size_t Netlist::gate_count() const {
  return std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.kind == NodeKind::gate; });
}

size_t Netlist::reg_count() const {
  return std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.kind == NodeKind::reg; });
}

double Netlist::mean_fanout() const {
  size_t driven = 0, sinks = 0;
  for (const auto& n : nets) {
    if (n.driver < 0) continue;
    ++driven;
    sinks += n.sinks.size();
  }
  return driven ? static_cast<double>(sinks) / driven : 0.0;
}

std::string Netlist::to_text() const {
  std::ostringstream o;
  if (depth > 0) o << "# depth " << depth << "\n";
  for (const auto& n : nodes) {
    switch (n.kind) {
      case NodeKind::gate: {
        o << "gate " << n.name << " " << n.cell << " in=";
        for (size_t i = 0; i < n.ins.size(); ++i) o << (i ? "," : "") << nets[n.ins[i]].name;
        o << " out=" << nets[n.out].name << "\n";
        break;
      }
      case NodeKind::reg:
        o << "reg " << n.name << " d=" << nets[n.ins.at(0)].name << " q=" << nets[n.out].name << "\n";
        break;
      case NodeKind::pin_in: o << "pin " << n.name << " dir=in net=" << nets[n.out].name << "\n"; break;
      case NodeKind::pin_out: o << "pin " << n.name << " dir=out net=" << nets[n.ins.at(0)].name << "\n"; break;
    }
  }
  return o.str();
}

std::uint64_t Netlist::hash() const { return fnv1a(to_text()); }

Netlist Netlist::parse(const std::string& text, const std::string& origin) {
  Netlist nl;
  std::map<std::string, int> net_ids;
  std::map<std::string, int> names;
  auto net = [&](const std::string& name) {
    const auto it = net_ids.find(name);
    if (it != net_ids.end()) return it->second;
    const int id = nl.add_net(name);
    net_ids[name] = id;
    return id;
  };
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.rfind("# depth ", 0) == 0) {
      nl.depth = static_cast<int>(parse_double(line.substr(8), where));
      continue;
    }
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    std::istringstream in(line);
    std::string kind, name;
    if (!(in >> kind)) continue;
    if (!(in >> name)) throw ConfigError(where + ": record needs a name");
    if (!names.emplace(name, lineno).second) throw ConfigError(where + ": duplicate instance '" + name + "'");
    std::map<std::string, std::string> f;
    std::string cell, tok;
    if (kind == "gate" && !(in >> cell)) throw ConfigError(where + ": gate needs a cell");
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, got '" + tok + "'");
      f[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const std::string& k, std::initializer_list<const char*> allowed) {
      for (const auto& [key, v] : f) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
      }
      const auto it = f.find(k);
      if (it == f.end() || it->second.empty()) throw ConfigError(where + ": missing key '" + k + "'");
      return it->second;
    };
    Node n;
    n.name = name;
    if (kind == "gate") {
      n.kind = NodeKind::gate;
      n.cell = cell;
      for (const auto& s : split(need("in", {"in", "out"}), ',')) n.ins.push_back(net(trim(s)));
      n.out = net(need("out", {"in", "out"}));
    } else if (kind == "reg") {
      n.kind = NodeKind::reg;
      n.cell = "DFF_X1";
      n.ins = {net(need("d", {"d", "q"}))};
      n.out = net(need("q", {"d", "q"}));
    } else if (kind == "pin") {
      const std::string dir = need("dir", {"dir", "net"});
      if (dir == "in") {
        n.kind = NodeKind::pin_in;
        n.out = net(need("net", {"dir", "net"}));
      } else if (dir == "out") {
        n.kind = NodeKind::pin_out;
        n.ins = {net(need("net", {"dir", "net"}))};
      } else {
        throw ConfigError(where + ": dir must be in or out");
      }
    } else {
      throw ConfigError(where + ": unknown record '" + kind + "'");
    }
    try {
      nl.add_node(std::move(n));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  nl.validate();
  return nl;
}

Netlist Netlist::load(const std::string& path) { return parse(read_file(path), path); }

}  // namespace dispel::flow
