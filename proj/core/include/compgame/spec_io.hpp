#ifndef COMPGAME_SPEC_IO_HPP
#define COMPGAME_SPEC_IO_HPP

#include <nlohmann/json_fwd.hpp>

#include "compgame/congestion.hpp"

namespace cg {

inline constexpr const char* kSpecSchema = "cg-spec v1";
inline constexpr const char* kEngineVersion = "0.1.0";

struct LoadedSpec {
  GameSpec game;
  std::optional<Network> network;
  std::vector<RoutingDemand> demands;
  std::string source;       // file path or builtin:<name>
  std::string hash;         // FNV-1a 64 of the canonical spec text
};

// Parses a cg-spec v1 document. Unknown fields are rejected.
LoadedSpec load_spec_json(const nlohmann::json& doc, const std::string& source);
LoadedSpec load_spec_file(const std::string& path);
LoadedSpec load_spec(const std::string& path_or_builtin);

std::vector<std::string> builtin_spec_names();
// The shipped instances: the two-arc game in each framework, the
// three-category example, and an affine parallel-link potential instance.
nlohmann::json builtin_spec_json(const std::string& name);
LoadedSpec load_builtin(const std::string& name);

std::string fnv1a_hex(const std::string& data);

}  // namespace cg

#endif
