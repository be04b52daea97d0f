#include <fstream>
#include <iostream>

#include "agr/fq.hpp"
#include "agr/lattice.hpp"
#include "json.hpp"

namespace agr {

namespace {

const char* kind_name(RingKind k) { return k == RingKind::mixed ? "mixed" : "equal"; }

Coweight shifted(const Coweight& mu, int c) {
  Coweight out = mu;
  for (auto& x : out) x += c;
  return out;
}

std::map<Coweight, std::int64_t> shifted_keys(const std::map<Coweight, std::int64_t>& m, int c) {
  std::map<Coweight, std::int64_t> out;
  for (const auto& [k, v] : m) out.emplace(shifted(k, c), v);
  return out;
}

MVTable shift_table(const MVTable& t, int c) {
  if (c == 0) return t;
  return {shifted_keys(t.cells, c), shifted_keys(t.mv, c), shifted_keys(t.mv_leq, c)};
}

nlohmann::json map_to_json(const std::map<Coweight, std::int64_t>& m) {
  auto arr = nlohmann::json::array();
  for (const auto& [k, v] : m) arr.push_back({{"w", k}, {"count", v}});
  return arr;
}

std::map<Coweight, std::int64_t> map_from_json(const nlohmann::json& j) {
  std::map<Coweight, std::int64_t> m;
  for (const auto& e : j) m.emplace(e.at("w").get<Coweight>(), e.at("count").get<std::int64_t>());
  return m;
}

}  // namespace

CountCache& CountCache::global() {
  static CountCache cache;
  return cache;
}

std::string CountCache::fingerprint() {
  return "hermite-window-v1|fq-moduli-v" + std::to_string(Fq::kModulusTableVersion);
}

MVTable CountCache::mv_table(const Coweight& mu, std::uint64_t q, RingKind kind) {
  if (mu.empty()) throw std::invalid_argument("mv_table: empty coweight");
  const int c = mu.back();
  const Coweight base = shifted(mu, -c);
  const std::string key = std::string(kind_name(kind)) + "|" + std::to_string(q) + "|" + to_string(base);
  {
    std::lock_guard lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return shift_table(it->second, c);
  }
  MVTable t = compute_mv_table(base, q, kind);
  {
    std::lock_guard lock(mu_);
    table_.emplace(key, t);
  }
  return shift_table(t, c);
}

void CountCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  try {
    auto j = nlohmann::json::parse(in);
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("fingerprint").get<std::string>() != fingerprint()) {
      std::cerr << "warning: ignoring " << path << " (schema or fingerprint mismatch)\n";
      return;
    }
    std::map<std::string, MVTable> loaded;
    for (auto& [k, v] : j.at("entries").items())
      loaded.emplace(k, MVTable{map_from_json(v.at("cells")), map_from_json(v.at("mv")), map_from_json(v.at("mv_leq"))});
    std::lock_guard lock(mu_);
    for (auto& [k, v] : loaded) table_.emplace(k, std::move(v));
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring corrupt cache " << path << ": " << e.what() << "\n";
  }
}

void CountCache::save(const std::string& path) const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["fingerprint"] = fingerprint();
  j["entries"] = nlohmann::json::object();
  {
    std::lock_guard lock(mu_);
    for (const auto& [k, t] : table_)
      j["entries"][k] = {{"cells", map_to_json(t.cells)}, {"mv", map_to_json(t.mv)}, {"mv_leq", map_to_json(t.mv_leq)}};
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("cannot write cache " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace cache " + path);
}

std::size_t CountCache::size() const {
  std::lock_guard lock(mu_);
  return table_.size();
}

void CountCache::clear() {
  std::lock_guard lock(mu_);
  table_.clear();
}

}  // namespace agr
