#pragma once

#include <string>

#include "json.hpp"

namespace g2k {

// Minimal TOML reader covering the configuration subset: comments, bare
// and quoted keys, dotted keys, [tables], [[arrays of tables]], strings,
// integers, floats, booleans, arrays and inline tables. Returns the
// document as JSON.
nlohmann::json parse_toml(const std::string& text);

// Dispatch on content: JSON documents start with '{'; otherwise TOML.
nlohmann::json parse_config_text(const std::string& text);

}  // namespace g2k
