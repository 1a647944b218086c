#include "compgame/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cg {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok)
      throw SpecError("unknown field '" + key + "' in " + where);
  }
}

double require_number(const json& obj, const std::string& where,
                      const char* field) {
  if (!obj.contains(field))
    throw SpecError(where + " is missing field '" + field + "'");
  if (!obj[field].is_number())
    throw SpecError(where + " field '" + field + "' must be a number");
  return obj[field].get<double>();
}

std::string require_string(const json& obj, const std::string& where,
                           const char* field) {
  if (!obj.contains(field) || !obj[field].is_string())
    throw SpecError(where + " needs string field '" + field + "'");
  return obj[field].get<std::string>();
}

ArcCost parse_cost(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where + " cost must be an object");
  const std::string kind = require_string(obj, where, "kind");
  if (kind == "affine") {
    reject_unknown(obj, where, {"kind", "b", "d"});
    return AffineCost{require_number(obj, where, "b"),
                      require_number(obj, where, "d")};
  }
  if (kind == "polynomial") {
    reject_unknown(obj, where, {"kind", "coeffs"});
    PolynomialCost poly;
    for (const auto& c : obj.at("coeffs")) poly.coeffs.push_back(c.get<double>());
    return poly;
  }
  throw SpecError(where + " has unknown cost kind '" + kind + "'");
}

Network parse_network(const json& obj) {
  reject_unknown(obj, "network", {"nodes", "arcs"});
  Network net;
  for (const auto& n : obj.at("nodes")) net.nodes.push_back(n.get<std::string>());
  for (const auto& a : obj.at("arcs")) {
    reject_unknown(a, "arc", {"tail", "head", "cost"});
    Arc arc;
    arc.tail = require_string(a, "arc", "tail");
    arc.head = require_string(a, "arc", "head");
    arc.cost = parse_cost(a.at("cost"), "arc");
    net.arcs.push_back(std::move(arc));
  }
  net.validate();
  return net;
}

std::vector<RoutingDemand> parse_demands(const json& arr, const Network& net) {
  std::vector<RoutingDemand> demands;
  for (const auto& d : arr) {
    RoutingDemand dem;
    dem.id = require_string(d, "demand", "id");
    const std::string where = "demand '" + dem.id + "'";
    reject_unknown(d, where,
                   {"id", "origin", "destination", "weight", "category",
                    "paths"});
    dem.origin = require_string(d, where, "origin");
    dem.destination = require_string(d, where, "destination");
    dem.weight = require_number(d, where, "weight");
    dem.category = category_from_string(require_string(d, where, "category"));
    if (d.contains("paths")) {
      for (const auto& path : d["paths"]) {
        Path p;
        for (const auto& a : path) {
          const auto idx = a.get<std::size_t>();
          if (idx >= net.arcs.size())
            throw SpecError(where + " path references arc " +
                            std::to_string(idx));
          p.push_back(idx);
        }
        dem.paths.push_back(std::move(p));
      }
    }
    demands.push_back(std::move(dem));
  }
  return demands;
}

std::vector<Participant> parse_participants(const json& arr) {
  std::vector<Participant> out;
  for (const auto& p : arr) {
    Participant part;
    part.id = require_string(p, "participant", "id");
    const std::string where = "participant '" + part.id + "'";
    reject_unknown(p, where, {"id", "category", "choices", "weight"});
    part.category = category_from_string(require_string(p, where, "category"));
    if (!p.contains("choices"))
      throw SpecError(where + " needs a choice list");
    for (const auto& c : p["choices"]) part.choices.push_back(c.get<std::string>());
    part.weight = require_number(p, where, "weight");
    part.validate();
    out.push_back(std::move(part));
  }
  return out;
}

GameSpec build_table_game(std::vector<Participant> participants,
                          const json& tables) {
  GameSpec game;
  game.participants = std::move(participants);
  std::size_t total = 1;
  for (const auto& p : game.participants) total *= p.choices.size();
  for (const auto& p : game.participants) {
    if (!tables.contains(p.id))
      throw SpecError("payoff table missing for participant '" + p.id + "'");
    VectorPayoffTable table;
    for (const auto& v : tables[p.id]) table.values.push_back(v.get<double>());
    if (table.values.size() != total)
      throw SpecError("payoff table for participant '" + p.id + "' has " +
                      std::to_string(table.values.size()) +
                      " entries, needs " + std::to_string(total));
    game.evaluators.push_back(std::move(table));
  }
  return game;
}

GameSpec build_linear_game(std::vector<Participant> participants,
                           const json& eval) {
  GameSpec game;
  game.participants = std::move(participants);
  Eigen::Index dim = 0;
  std::vector<Eigen::Index> offsets;
  for (const auto& p : game.participants) {
    offsets.push_back(dim);
    dim += static_cast<Eigen::Index>(p.choices.size());
  }
  Mat A = Mat::Zero(dim, dim);
  Vec b = Vec::Zero(dim);
  const auto& rows = eval.at("matrix");
  if (static_cast<Eigen::Index>(rows.size()) != dim)
    throw SpecError("linear evaluation matrix must be " + std::to_string(dim) +
                    " x " + std::to_string(dim));
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != dim)
      throw SpecError("linear evaluation matrix row has wrong length");
    for (Eigen::Index c = 0; c < dim; ++c)
      A(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  if (eval.contains("offset")) {
    const auto& off = eval["offset"];
    if (static_cast<Eigen::Index>(off.size()) != dim)
      throw SpecError("linear evaluation offset has wrong length");
    for (Eigen::Index r = 0; r < dim; ++r)
      b[r] = off[static_cast<std::size_t>(r)].get<double>();
  }
  for (std::size_t i = 0; i < game.participants.size(); ++i) {
    const Eigen::Index at = offsets[i];
    const auto n =
        static_cast<Eigen::Index>(game.participants[i].choices.size());
    game.evaluators.push_back(PopulationPayoffs{
        [A, b, at, n, dim](const AmbientProfile& x) {
          Vec flat(dim);
          Eigen::Index pos = 0;
          for (const auto& blk : x) {
            flat.segment(pos, blk.size()) = blk;
            pos += blk.size();
          }
          const Vec phi = A * flat + b;
          return Vec(phi.segment(at, n));
        }});
  }
  return game;
}

}  // namespace

LoadedSpec load_spec_json(const json& doc, const std::string& source) {
  if (!doc.is_object()) throw SpecError("spec document must be an object");
  reject_unknown(doc, "spec",
                 {"schema", "name", "description", "evaluation", "network",
                  "demands", "participants"});
  const std::string schema = require_string(doc, "spec", "schema");
  if (schema != kSpecSchema)
    throw SpecError("unsupported schema '" + schema + "', expected '" +
                    std::string(kSpecSchema) + "'");

  LoadedSpec out;
  out.source = source;
  out.hash = fnv1a_hex(doc.dump());

  const json& eval = doc.at("evaluation");
  const std::string kind = require_string(eval, "evaluation", "kind");
  if (kind == "congestion") {
    reject_unknown(eval, "evaluation", {"kind"});
    if (!doc.contains("network") || !doc.contains("demands"))
      throw SpecError("congestion spec needs network and demands blocks");
    out.network = parse_network(doc["network"]);
    out.demands = parse_demands(doc["demands"], *out.network);
    out.game = build_composite_congestion_game(*out.network, out.demands);
    // keep the enumerated paths visible to callers
    for (std::size_t i = 0; i < out.demands.size(); ++i)
      if (out.demands[i].paths.empty())
        out.demands[i].paths = enumerate_paths(
            *out.network, out.demands[i].origin, out.demands[i].destination);
  } else if (kind == "payoff_table") {
    reject_unknown(eval, "evaluation", {"kind", "tables"});
    out.game = build_table_game(parse_participants(doc.at("participants")),
                                eval.at("tables"));
  } else if (kind == "linear") {
    reject_unknown(eval, "evaluation", {"kind", "matrix", "offset"});
    out.game =
        build_linear_game(parse_participants(doc.at("participants")), eval);
  } else {
    throw SpecError("unknown evaluation kind '" + kind + "'");
  }

  if (doc.contains("name")) out.game.name = doc["name"].get<std::string>();
  if (doc.contains("description"))
    out.game.description = doc["description"].get<std::string>();
  out.game.validate();
  return out;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SpecError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  return load_spec_json(doc, path);
}

LoadedSpec load_spec(const std::string& path_or_builtin) {
  constexpr const char* prefix = "builtin:";
  if (path_or_builtin.rfind(prefix, 0) == 0)
    return load_builtin(path_or_builtin.substr(std::string(prefix).size()));
  return load_spec_file(path_or_builtin);
}

namespace {

json two_arc_network() {
  return json{
      {"nodes", {"o", "d"}},
      {"arcs",
       {{{"tail", "o"},
         {"head", "d"},
         {"cost", {{"kind", "affine"}, {"b", 1.0}, {"d", 0.0}}}},
        {{"tail", "o"},
         {"head", "d"},
         {"cost", {{"kind", "affine"}, {"b", 0.0}, {"d", 1.0}}}}}}};
}

json two_arc_spec(const std::string& category, const std::string& name) {
  json doc;
  doc["schema"] = kSpecSchema;
  doc["name"] = name;
  doc["description"] =
      "Two parallel arcs o->d with unit-slope and constant unit costs; two " +
      category + " participants of weight 1/2.";
  doc["evaluation"] = {{"kind", "congestion"}};
  doc["network"] = two_arc_network();
  doc["demands"] = json::array();
  for (int i = 1; i <= 2; ++i)
    doc["demands"].push_back({{"id", "u" + std::to_string(i)},
                              {"origin", "o"},
                              {"destination", "d"},
                              {"weight", 0.5},
                              {"category", category}});
  return doc;
}

json three_category_spec() {
  json doc;
  doc["schema"] = kSpecSchema;
  doc["name"] = "three-category";
  doc["description"] =
      "Two parallel arcs shared by a population, an atomic splittable player "
      "and an atomic non-splittable player.";
  doc["evaluation"] = {{"kind", "congestion"}};
  doc["network"] = two_arc_network();
  doc["demands"] = {{{"id", "pop"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 0.4},
                     {"category", "population"}},
                    {{"id", "split"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 0.35},
                     {"category", "splittable"}},
                    {{"id", "atom"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 0.25},
                     {"category", "nonsplittable"}}};
  return doc;
}

json affine_parallel_spec() {
  json doc;
  doc["schema"] = kSpecSchema;
  doc["name"] = "affine-parallel";
  doc["description"] =
      "Three affine parallel arcs with all three participant categories; "
      "carries the quadratic potential.";
  doc["evaluation"] = {{"kind", "congestion"}};
  doc["network"] = {
      {"nodes", {"o", "d"}},
      {"arcs",
       {{{"tail", "o"},
         {"head", "d"},
         {"cost", {{"kind", "affine"}, {"b", 1.0}, {"d", 0.0}}}},
        {{"tail", "o"},
         {"head", "d"},
         {"cost", {{"kind", "affine"}, {"b", 0.5}, {"d", 0.5}}}},
        {{"tail", "o"},
         {"head", "d"},
         {"cost", {{"kind", "affine"}, {"b", 2.0}, {"d", 0.25}}}}}}};
  doc["demands"] = {{{"id", "pop"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 1.0},
                     {"category", "population"}},
                    {{"id", "split"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 0.5},
                     {"category", "splittable"}},
                    {{"id", "atom"},
                     {"origin", "o"},
                     {"destination", "d"},
                     {"weight", 0.5},
                     {"category", "nonsplittable"}}};
  return doc;
}

}  // namespace

std::vector<std::string> builtin_spec_names() {
  return {"two-arc-population", "two-arc-splittable", "two-arc-nonsplittable",
          "three-category", "affine-parallel"};
}

json builtin_spec_json(const std::string& name) {
  if (name == "two-arc-population")
    return two_arc_spec("population", name);
  if (name == "two-arc-splittable")
    return two_arc_spec("splittable", name);
  if (name == "two-arc-nonsplittable")
    return two_arc_spec("nonsplittable", name);
  if (name == "three-category") return three_category_spec();
  if (name == "affine-parallel") return affine_parallel_spec();
  throw SpecError("unknown builtin spec '" + name + "'");
}

LoadedSpec load_builtin(const std::string& name) {
  return load_spec_json(builtin_spec_json(name), "builtin:" + name);
}

}  // namespace cg
