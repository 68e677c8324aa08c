#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainlab/stochastic.hpp"

namespace chainlab {

/// On-disk chain description (JSON). Keys: name?, states, transitions,
/// initial?, weights?, terminal_weights?, metadata?.
struct ModelDocument {
  std::optional<std::string> name;
  std::vector<std::string> states;
  std::vector<std::vector<double>> transitions;
  std::optional<std::vector<double>> initial;
  std::optional<std::map<std::string, double>> weights;
  std::optional<std::map<std::string, double>> terminal_weights;
  std::optional<std::map<std::string, std::string>> metadata;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

/// Throws ChainError(ParseError) naming the offending location or key path.
ModelDocument parse_model_document(std::string_view json_text);
ModelDocument read_model_document(std::istream& in);
ModelDocument read_model_document(const std::filesystem::path& path);

/// Stable-keyed JSON; doubles are written in shortest round-trip form.
std::string serialize_model_document(const ModelDocument& doc, int indent = 2);

RawChain to_raw_chain(const ModelDocument& doc);
ChainModel to_chain_model(const ModelDocument& doc, const ValidationOptions& options = {});

ChainModel load_model(std::istream& in, const ValidationOptions& options = {});
ChainModel load_model(const std::filesystem::path& path, const ValidationOptions& options = {});

}  // namespace chainlab
