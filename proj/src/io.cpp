#include "qmap/io.hpp"

#include <json.hpp>
#include <sstream>

namespace qmap {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* type) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadInput, "expected a JSON object");
  if (type != nullptr && j.value("type", std::string()) != type)
    throw Error(ErrorCode::BadInput, std::string("expected an object of type ") + type);
  return j;
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("field '") + key + "': " + e.what());
  }
}

json map_fields(const CombinatorialMap& m) {
  const auto nx = m.next_permutation();
  return json{{"half_edges", m.half_edge_count()}, {"next", std::vector<int>(nx.begin(), nx.end())}, {"root", m.root()}};
}

CombinatorialMap map_of(const json& j) {
  const auto next = field<std::vector<int>>(j, "next");
  if (field<int>(j, "half_edges") != static_cast<int>(next.size()))
    throw Error(ErrorCode::BadInput, "half_edges does not match the length of next");
  return CombinatorialMap(next, field<int>(j, "root"));
}

}  // namespace

std::string json_type(const std::string& text) { return parse(text, nullptr).value("type", std::string()); }

std::string to_json(const CombinatorialMap& map) {
  json j = map_fields(map);
  j["type"] = "map";
  return j.dump();
}

CombinatorialMap map_from_json(const std::string& text) { return map_of(parse(text, "map")); }

std::string to_json(const PointedQuadrangulation& q) {
  json j = map_fields(q.map);
  j["type"] = "pointed_quadrangulation";
  j["base"] = q.base;
  j["epsilon"] = q.epsilon;
  return j.dump();
}

PointedQuadrangulation pointed_from_json(const std::string& text) {
  const json j = parse(text, "pointed_quadrangulation");
  PointedQuadrangulation q{map_of(j), field<int>(j, "base"), field<int>(j, "epsilon")};
  if (q.base < 0 || q.base >= q.map.vertex_count()) throw Error(ErrorCode::BadInput, "base vertex out of range");
  if (q.epsilon != 1 && q.epsilon != -1) throw Error(ErrorCode::BadInput, "epsilon must be -1 or 1");
  return q;
}

std::string to_json(const WellLabeledGTree& t) {
  return json{{"type", "wl_gtree"}, {"word", t.tree.gluing_word_text()}, {"labels", t.labels}}.dump();
}

WellLabeledGTree wl_gtree_from_json(const std::string& text) {
  const json j = parse(text, "wl_gtree");
  WellLabeledGTree t{GTree::from_gluing_word(field<std::string>(j, "word")), field<std::vector<int>>(j, "labels")};
  if (auto err = validate_labels(t)) throw *err;
  return t;
}

std::string to_json(const Decomposition& d) {
  json j{{"type", "decomposition"}, {"scheme", d.scheme.tree.gluing_word_text()}, {"u", d.u}};
  std::vector<int> sigma, m;
  json motzkin = json::array(), forests = json::array();
  for (std::size_t p = 0; p < d.forests.size(); ++p) {
    sigma.push_back(d.sigma(static_cast<int>(p)));
    m.push_back(d.m(static_cast<int>(p)));
    motzkin.push_back(d.motzkin[p].values);
    forests.push_back(json{{"C", d.forests[p].C}, {"L", d.forests[p].L}});
  }
  j["sigma"] = sigma;
  j["m"] = m;
  j["node_labels"] = d.node_labels;
  j["motzkin"] = motzkin;
  j["forests"] = forests;
  return j.dump();
}

Decomposition decomposition_from_json(const std::string& text) {
  const json j = parse(text, "decomposition");
  Decomposition d;
  d.scheme = make_scheme(GTree::from_gluing_word(field<std::string>(j, "scheme")));
  d.u = field<int>(j, "u");
  d.node_labels = field<std::vector<int>>(j, "node_labels");
  for (const auto& v : field<std::vector<std::vector<int>>>(j, "motzkin")) d.motzkin.push_back(MotzkinPath{v});
  for (const auto& f : field<json>(j, "forests"))
    d.forests.push_back(ContourPair{field<std::vector<int>>(f, "C"), field<std::vector<int>>(f, "L")});
  if (auto err = validate(d)) throw Error(ErrorCode::BadInput, err->what());
  if (j.contains("sigma") || j.contains("m")) {
    const auto sigma = field<std::vector<int>>(j, "sigma");
    const auto m = field<std::vector<int>>(j, "m");
    for (std::size_t p = 0; p < d.forests.size(); ++p)
      if (sigma.at(p) != d.sigma(static_cast<int>(p)) || m.at(p) != d.m(static_cast<int>(p)))
        throw Error(ErrorCode::BadInput, "sigma/m disagree with the forests");
  }
  return d;
}

std::string to_json(const TreeWithTriples& w) {
  json triples = json::array();
  for (const auto& t : w.triples) triples.push_back(std::vector<int>(t.begin(), t.end()));
  return json{{"type", "tree_with_triples"}, {"word", w.tree.gluing_word_text()}, {"triples", triples}, {"labels", w.labels}}
      .dump();
}

TreeWithTriples triples_from_json(const std::string& text) {
  const json j = parse(text, "tree_with_triples");
  TreeWithTriples w;
  w.tree = GTree::from_gluing_word(field<std::string>(j, "word"));
  for (const auto& t : field<std::vector<std::vector<int>>>(j, "triples")) {
    if (t.size() != 3) throw Error(ErrorCode::BadInput, "a triple has three vertices");
    w.triples.push_back({t[0], t[1], t[2]});
  }
  w.labels = j.value("labels", std::vector<int>{});
  if (auto err = validate(w)) throw Error(ErrorCode::BadInput, err->what());
  return w;
}

std::string to_csv(const ContourPair& cp) {
  std::ostringstream os;
  os << "t,C,L\n";
  for (std::size_t i = 0; i < cp.C.size(); ++i) os << i << ',' << cp.C[i] << ',' << (i < cp.L.size() ? cp.L[i] : 0) << '\n';
  return os.str();
}

}  // namespace qmap
