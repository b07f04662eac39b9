#include "fup/io.hpp"

#include <fstream>
#include <sstream>

namespace fup {

json schottky_to_json(const SchottkyData& data) {
  json j;
  j["r"] = data.r;
  j["intervals"] = json::array();
  for (const Interval& I : data.intervals) j["intervals"].push_back({I.a, I.b});
  j["generators"] = json::array();
  for (const Mat2& g : data.generators)
    j["generators"].push_back({{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}});
  return j;
}

SchottkyData schottky_from_json(const json& j) {
  try {
    SchottkyData data;
    data.r = j.at("r").get<int>();
    for (const auto& iv : j.at("intervals")) {
      if (iv.size() != 2) throw InputError("interval entries must be [a, b]");
      data.intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    for (const auto& g : j.at("generators")) {
      if (g.size() != 2 || g[0].size() != 2 || g[1].size() != 2)
        throw InputError("generator entries must be 2x2 matrices");
      Mat2 m;
      m << g[0][0].get<double>(), g[0][1].get<double>(), g[1][0].get<double>(), g[1][1].get<double>();
      data.generators.push_back(m);
    }
    return data;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed Schottky JSON: ") + e.what());
  }
}

json cover_to_json(const IntervalCover& cover, const std::vector<double>* weights) {
  json j;
  j["intervals"] = json::array();
  for (const Interval& I : cover.intervals) j["intervals"].push_back({I.a, I.b});
  if (weights) j["weights"] = *weights;
  return j;
}

IntervalCover cover_from_json(const json& j, std::vector<double>* weights) {
  try {
    std::vector<std::pair<Interval, double>> items;
    const auto& ivs = j.at("intervals");
    const bool has_w = j.contains("weights");
    if (has_w && j["weights"].size() != ivs.size()) throw InputError("weight count does not match interval count");
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      if (ivs[i].size() != 2) throw InputError("interval entries must be [a, b]");
      items.push_back({{ivs[i][0].get<double>(), ivs[i][1].get<double>()}, has_w ? j["weights"][i].get<double>() : 0.0});
    }
    std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first.a < y.first.a; });
    std::vector<Interval> out;
    if (weights) weights->clear();
    for (const auto& [iv, w] : items) {
      out.push_back(iv);
      if (weights && has_w) weights->push_back(w);
    }
    return IntervalCover(std::move(out));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed cover JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace fup
