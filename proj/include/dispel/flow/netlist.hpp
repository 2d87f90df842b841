#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dispel::flow {

enum class NodeKind { gate, reg, pin_in, pin_out };

struct Node {
  NodeKind kind = NodeKind::gate;
  std::string name;
  std::string cell;      // library cell for gates and registers
  std::vector<int> ins;  // net per input pin (register: D)
  int out = -1;          // driven net (register: Q)
  bool buffer = false;   // inserted by the optimizer
};

struct Sink {
  int node = -1;
  int pin = 0;
};

struct Net {
  std::string name;
  int driver = -1;
  std::vector<Sink> sinks;
};

class Netlist {
 public:
  std::vector<Node> nodes;
  std::vector<Net> nets;
  int depth = 0;  // declared combinational depth (0 when unknown)

  int add_net(const std::string& name);
  int add_node(Node n);  // wires the node's pins into the nets
  int net_index(const std::string& name) const;  // -1 when absent

  // Recomputes drivers and sink lists from the node pins.
  void rebuild();
  // Throws ConfigError: nets with zero or several drivers, dangling pins,
  // combinational cycles.
  void validate() const;
  // Gates in topological order (registers and pins excluded).
  std::vector<int> topo_gates() const;
  int logic_depth() const;

  size_t gate_count() const;
  size_t reg_count() const;
  // Sinks per driven net, over every net that has a driver.
  double mean_fanout() const;

  std::string to_text() const;
  std::uint64_t hash() const;

  static Netlist parse(const std::string& text, const std::string& origin = "<netlist>");
  static Netlist load(const std::string& path);
};

struct NetlistSpec {
  int n_gates = 5000;
  int depth = 24;
  double fanout_mean = 2.5;  // mean sinks per net
  double rent = 0.6;         // locality exponent of the connection window
  std::uint64_t seed = 42;
  double io_fraction = 0.25;  // I/O pins per register
};

// Levelized random logic closed by one register bank (Q feeds level 0, D takes the deepest outputs).
// Deterministic for a seed.
Netlist generate_netlist(const NetlistSpec& spec);

}  // namespace dispel::flow
