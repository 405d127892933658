// Run configuration: a strict JSON schema with documented defaults. Every leaf
// is addressable as a dotted path ("slab.width_nm") and as a CLI flag
// ("--slab.width-nm").
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace slabrad {

using json = nlohmann::json;

enum class FieldType { Number, Integer, String, NumberList, IntegerList };

struct FieldSpec {
  std::string path;  // dotted
  FieldType type;
  json default_value;
  std::string help;
  std::vector<std::string> choices;  // strings only
};

/// The schema, in documentation order.
const std::vector<FieldSpec>& config_schema();

/// Raised for schema violations; message carries the key path (and line when
/// the source text is known).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Defaults for every field.
json default_config();

/// Merges a user document into the defaults. Accepts either a plain config or a
/// result sidecar ({"subcommand", "config", "meta"}). `text` is the original
/// source and is only used to locate keys in error messages.
json resolve_config(const json& user, const std::string& text = {});

/// Reads and resolves a config file.
json load_config(const std::string& path);

/// Sets one dotted leaf from its textual CLI value (lists are comma separated).
void set_field(json& config, const std::string& path, const std::string& value);

/// Range and consistency checks on a resolved config.
void validate_config(const json& config);

const json& at_path(const json& config, const std::string& path);

}  // namespace slabrad
