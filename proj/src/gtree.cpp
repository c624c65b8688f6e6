#include "qmap/gtree.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

namespace qmap {

GTree::GTree(CombinatorialMap map) : map_(std::move(map)) {
  const int n = map_.half_edge_count();
  order_.reserve(n);
  int h = map_.root();
  do {
    order_.push_back(h);
    h = map_.face_next(h);
  } while (h != map_.root());
  if (static_cast<int>(order_.size()) != n)
    throw Error(ErrorCode::NotOneFace, "root face has " + std::to_string(order_.size()) + " of " +
                                           std::to_string(n) + " half-edges");
  position_.assign(n, -1);
  for (int p = 0; p < n; ++p) position_[order_[p]] = p;

  facial_id_.assign(map_.vertex_count(), -1);
  corner_vertex_.resize(n);
  for (int i = 0; i < n; ++i) {
    // tr(i) is the origin of e_{i+1}, which sits at position i.
    const int v = map_.origin(order_[i]);
    if (facial_id_[v] < 0) {
      facial_id_[v] = static_cast<int>(map_vertex_.size());
      map_vertex_.push_back(v);
    }
    corner_vertex_[i] = facial_id_[v];
  }
}

GTree GTree::from_pairing(const std::vector<int>& partner) {
  const int n = static_cast<int>(partner.size());
  if (n == 0 || n % 2) throw Error(ErrorCode::BadWord, "odd or empty polygon");
  std::vector<int> he(n, -1);
  int next_id = 0;
  for (int p = 0; p < n; ++p) {
    const int q = partner[p];
    if (q < 0 || q >= n || q == p || partner[q] != p) throw Error(ErrorCode::BadWord, "pairing is not an involution");
    if (he[p] < 0) {
      he[p] = next_id++;
      he[q] = next_id++;
    }
  }
  // face_next(h_p) = h_{p+1} and face_next = next o opposite, hence
  // next(h_q) = h_{partner(q)+1}.
  std::vector<int> opp(n), next(n);
  for (int p = 0; p < n; ++p) {
    opp[he[p]] = he[partner[p]];
    next[he[p]] = he[(partner[p] + 1) % n];
  }
  return GTree(CombinatorialMap::from_permutations(opp, next, he[0]));
}

GTree GTree::from_gluing_word(const std::vector<std::string>& word) {
  std::map<std::string, std::vector<int>> where;
  for (int p = 0; p < static_cast<int>(word.size()); ++p) where[word[p]].push_back(p);
  std::vector<int> partner(word.size(), -1);
  for (const auto& [sym, pos] : where) {
    if (pos.size() != 2) throw Error(ErrorCode::BadWord, "symbol '" + sym + "' appears " + std::to_string(pos.size()) + " times");
    partner[pos[0]] = pos[1];
    partner[pos[1]] = pos[0];
  }
  return from_pairing(partner);
}

GTree GTree::from_gluing_word(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> word;
  for (std::string s; in >> s;) word.push_back(s);
  return from_gluing_word(word);
}

std::vector<int> GTree::facial_sequence() const {
  std::vector<int> seq(corner_vertex_);
  seq.push_back(corner_vertex_.front());
  return seq;
}

std::vector<int> GTree::pairing() const {
  const int n = static_cast<int>(order_.size());
  std::vector<int> partner(n);
  for (int p = 0; p < n; ++p) partner[p] = position_[order_[p] ^ 1];
  return partner;
}

namespace {
std::string symbol_name(int k) {
  if (k < 26) return std::string(1, static_cast<char>('a' + k));
  return "x" + std::to_string(k);
}
}  // namespace

std::vector<std::string> GTree::gluing_word() const {
  const std::vector<int> partner = pairing();
  std::vector<std::string> word(partner.size());
  int k = 0;
  for (std::size_t p = 0; p < partner.size(); ++p) {
    if (word[p].empty()) {
      word[p] = symbol_name(k++);
      word[partner[p]] = word[p];
    }
  }
  return word;
}

std::string GTree::gluing_word_text() const {
  std::string out;
  for (const auto& s : gluing_word()) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

Violation validate_labels(const WellLabeledGTree& t) {
  if (static_cast<int>(t.labels.size()) != t.tree.vertex_count())
    return Error(ErrorCode::BadInput, "label count does not match vertex count");
  if (t.labels[0] != 0) return Error(ErrorCode::RootLabelNonzero, "root label is " + std::to_string(t.labels[0]));
  const auto& m = t.tree.map();
  for (int h = 0; h < m.half_edge_count(); h += 2) {
    const int a = t.labels[t.tree.facial_vertex(h)];
    const int b = t.labels[t.tree.facial_vertex(h ^ 1)];
    if (std::abs(a - b) > 1)
      return Error(ErrorCode::EdgeJumpTooLarge, "edge " + std::to_string(h / 2) + " has labels " + std::to_string(a) +
                                                    "," + std::to_string(b));
  }
  return std::nullopt;
}

std::string to_text(const WellLabeledGTree& t) {
  std::string out = t.tree.gluing_word_text() + "\n";
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(t.labels[i]);
  }
  return out + "\n";
}

WellLabeledGTree wl_gtree_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string word_line, label_line;
  if (!std::getline(in, word_line)) throw Error(ErrorCode::BadInput, "missing gluing word line");
  std::getline(in, label_line);
  WellLabeledGTree t{GTree::from_gluing_word(word_line), {}};
  std::istringstream ls(label_line);
  for (int x; ls >> x;) t.labels.push_back(x);
  if (t.labels.empty()) t.labels.assign(t.tree.vertex_count(), 0);
  if (auto err = validate_labels(t)) throw *err;
  return t;
}

}  // namespace qmap
