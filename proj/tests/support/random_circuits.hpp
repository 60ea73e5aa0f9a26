#pragma once

// Seeded generators for small random bench netlists and constraint files.

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace safefault::testkit {

struct CircuitShape {
  int max_inputs = 10;  // primary plus pseudo-primary
  int max_gates = 40;
  double dff_chance = 0.3;
};

struct RandomCircuit {
  std::string bench;
  std::vector<std::string> nets;  // every net name, sources first
};

inline RandomCircuit random_circuit(std::mt19937_64& rng, const CircuitShape& shape = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  const int total_inputs = pick(1, shape.max_inputs);
  int dffs = 0;
  if (total_inputs > 1 && chance(shape.dff_chance)) dffs = pick(1, std::min(3, total_inputs - 1));
  const int pis = total_inputs - dffs;
  const int gates = pick(1, shape.max_gates - dffs);

  RandomCircuit out;
  std::vector<std::string> sources;
  for (int i = 0; i < pis; ++i) sources.push_back("i" + std::to_string(i));
  for (int i = 0; i < dffs; ++i) sources.push_back("q" + std::to_string(i));
  out.nets = sources;

  static const char* kinds[] = {"AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUF"};
  std::vector<int> readers(sources.size(), 0);
  std::ostringstream body;
  for (int g = 0; g < gates; ++g) {
    const std::string kind = kinds[pick(0, 7)];
    const bool single = kind == "NOT" || kind == "BUF";
    const int fanin = single ? 1 : pick(2, 3);
    const std::string name = "n" + std::to_string(g);
    body << name << " = " << kind << "(";
    for (int k = 0; k < fanin; ++k) {
      const int n = static_cast<int>(out.nets.size());
      // Lean towards recent nets so that circuits get some depth.
      int idx = chance(0.6) ? pick(std::max(0, n - 6), n - 1) : pick(0, n - 1);
      ++readers[idx];
      body << (k ? ", " : "") << out.nets[idx];
    }
    body << ")\n";
    out.nets.push_back(name);
    readers.push_back(0);
  }

  std::ostringstream text;
  for (int i = 0; i < pis; ++i) text << "INPUT(" << sources[i] << ")\n";
  std::vector<std::string> outputs;
  for (std::size_t i = sources.size(); i < out.nets.size(); ++i) {
    if (readers[i] == 0 || chance(0.1)) outputs.push_back(out.nets[i]);
  }
  for (const auto& o : outputs) text << "OUTPUT(" << o << ")\n";
  for (int i = 0; i < dffs; ++i) {
    const int d = pick(0, static_cast<int>(out.nets.size()) - 1);
    text << sources[pis + i] << " = DFF(" << out.nets[d] << ")\n";
  }
  text << body.str();
  out.bench = text.str();
  return out;
}

struct ConstraintShape {
  int max_fix = 3;
  int max_forbid = 2;
  int max_cube_nets = 4;
  int max_cubes = 2;
};

// Constraint file text over `nets`, with the constraints spread over 1..3
// sets. Returns an empty string when no constraint was drawn.
inline std::string random_constraints(std::mt19937_64& rng, const std::vector<std::string>& nets,
                                      const ConstraintShape& shape = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<std::string> items;

  std::vector<std::string> pool = nets;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int fixes = std::min<int>(pick(0, shape.max_fix), static_cast<int>(pool.size()));
  for (int i = 0; i < fixes; ++i) items.push_back("fix " + pool[i] + " = " + std::to_string(pick(0, 1)));

  const int forbids = pick(0, shape.max_forbid);
  for (int f = 0; f < forbids; ++f) {
    std::vector<std::string> chosen = nets;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(std::min<std::size_t>(chosen.size(), pick(1, shape.max_cube_nets)));
    std::string item = "forbid (";
    for (std::size_t i = 0; i < chosen.size(); ++i) item += (i ? ", " : "") + chosen[i];
    item += ") in {";
    const int cubes = pick(1, shape.max_cubes);
    for (int c = 0; c < cubes; ++c) {
      std::string cube;
      for (std::size_t i = 0; i < chosen.size(); ++i) cube += "01X"[pick(0, 2)];
      if (cube.find_first_not_of('X') == std::string::npos) cube[pick(0, static_cast<int>(cube.size()) - 1)] = "01"[pick(0, 1)];
      item += (c ? ", " : "") + cube;
    }
    items.push_back(item + "}");
  }
  if (items.empty()) return {};

  static const char* categories[] = {"reset_logic", "spr_addressing", "memory_access",
                                     "pc_update_logic", "decoding_logic", "unused_instructions",
                                     "user:extra"};
  std::shuffle(items.begin(), items.end(), rng);
  const int sets = std::min<int>(pick(1, 3), static_cast<int>(items.size()));
  std::ostringstream text;
  std::size_t next = 0;
  for (int s = 0; s < sets; ++s) {
    const std::size_t end = s + 1 == sets ? items.size() : next + 1 + pick(0, static_cast<int>(items.size() - next) - (sets - s));
    text << "set " << categories[pick(0, 6)] << " {\n";
    for (; next < end; ++next) text << "  " << items[next] << "\n";
    text << "}\n";
  }
  return text.str();
}

}  // namespace safefault::testkit
