#include "chainlab/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chainlab/error.hpp"

namespace chainlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ChainError(ErrorCode::ParseError, what, path);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, found " + std::string(j.type_name()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

std::vector<double> numbers_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::map<std::string, double> number_map_at(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object mapping state labels to numbers");
  std::map<std::string, double> out;
  for (const auto& [key, value] : j.items()) out[key] = number_at(value, path + "." + key);
  return out;
}

}  // namespace

ModelDocument parse_model_document(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    fail("byte " + std::to_string(e.byte), e.what());
  }
  if (!root.is_object()) fail("$", "model document must be a JSON object");

  static const char* const kKnown[] = {"name",    "states",           "transitions", "initial",
                                       "weights", "terminal_weights", "metadata"};
  for (const auto& [key, value] : root.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      fail(key, "unknown key");
    }
  }

  ModelDocument doc;
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("name", "expected a string");
    doc.name = root["name"].get<std::string>();
  }

  if (!root.contains("states")) fail("states", "missing required key");
  const auto& states = root["states"];
  if (!states.is_array()) fail("states", "expected an array of strings");
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].is_string()) fail("states[" + std::to_string(i) + "]", "expected a string");
    doc.states.push_back(states[i].get<std::string>());
  }

  if (!root.contains("transitions")) fail("transitions", "missing required key");
  const auto& rows = root["transitions"];
  if (!rows.is_array()) fail("transitions", "expected an array of rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    doc.transitions.push_back(numbers_at(rows[r], "transitions[" + std::to_string(r) + "]"));
  }

  if (root.contains("initial")) doc.initial = numbers_at(root["initial"], "initial");
  if (root.contains("weights")) doc.weights = number_map_at(root["weights"], "weights");
  if (root.contains("terminal_weights")) {
    doc.terminal_weights = number_map_at(root["terminal_weights"], "terminal_weights");
  }
  if (root.contains("metadata")) {
    const auto& meta = root["metadata"];
    if (!meta.is_object()) fail("metadata", "expected an object of strings");
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) fail("metadata." + key, "expected a string");
      out[key] = value.get<std::string>();
    }
    doc.metadata = std::move(out);
  }
  return doc;
}

ModelDocument read_model_document(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_document(buf.str());
}

ModelDocument read_model_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path.string(), "cannot open model file");
  return read_model_document(in);
}

std::string serialize_model_document(const ModelDocument& doc, int indent) {
  json root = json::object();
  if (doc.name) root["name"] = *doc.name;
  root["states"] = doc.states;
  root["transitions"] = doc.transitions;
  if (doc.initial) root["initial"] = *doc.initial;
  if (doc.weights) root["weights"] = *doc.weights;
  if (doc.terminal_weights) root["terminal_weights"] = *doc.terminal_weights;
  if (doc.metadata) root["metadata"] = *doc.metadata;
  return root.dump(indent) + "\n";
}

RawChain to_raw_chain(const ModelDocument& doc) {
  return RawChain{doc.states, doc.transitions, doc.initial, doc.weights, doc.terminal_weights};
}

ChainModel to_chain_model(const ModelDocument& doc, const ValidationOptions& options) {
  return validate_model(to_raw_chain(doc), options);
}

ChainModel load_model(std::istream& in, const ValidationOptions& options) {
  return to_chain_model(read_model_document(in), options);
}

ChainModel load_model(const std::filesystem::path& path, const ValidationOptions& options) {
  return to_chain_model(read_model_document(path), options);
}

}  // namespace chainlab
