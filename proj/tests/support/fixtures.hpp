#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bhg/bhg.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(BHG_DATA_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
  std::ifstream in(path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bhg::Dah dah(const std::string& name) { return bhg::parse_dah(read(name)); }
inline bhg::ChainGraph cg(const std::string& name) { return bhg::parse_chain_graph(read(name)); }

inline const std::vector<std::string>& dah_files() {
  static const std::vector<std::string> names = {
      "four_comp.dah",   "simple.dah",  "dense_coarse.dah",       "dense_fine.dah",
      "three_cliques.dah", "surgery.dah", "surgery_redirected.dah", "edge_free.dah",
      "obesity.dah"};
  return names;
}

inline const std::vector<std::string>& cg_files() {
  static const std::vector<std::string> names = {"four_comp_shadow.cg", "simple.cg", "dense.cg",
                                                 "three_cliques.cg", "collider.cg"};
  return names;
}

inline std::vector<std::string> shape_files() {
  std::vector<std::string> out;
  for (int i = 1; i <= 12; ++i) {
    out.push_back("shapes/shape" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".dah");
  }
  return out;
}

/// Sample hypergraphs, plus the canonical one of the collider chain graph.
inline std::vector<std::pair<std::string, bhg::Dah>> sample_dahs() {
  std::vector<std::pair<std::string, bhg::Dah>> out;
  for (const auto& n : dah_files()) {
    if (n != "edge_free.dah" && n != "obesity.dah") out.emplace_back(n, dah(n));
  }
  out.emplace_back("collider.cg (canonical)", bhg::hypermoralize(cg("collider.cg")));
  return out;
}

inline std::vector<std::pair<std::string, bhg::ChainGraph>> sample_cgs() {
  std::vector<std::pair<std::string, bhg::ChainGraph>> out;
  for (const auto& n : cg_files()) out.emplace_back(n, cg(n));
  return out;
}

}  // namespace fixtures
