#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xmas/model.hpp"
#include "xmas/state.hpp"

namespace xmas {

/// Schema or syntax problem in an input document. Semantic wiring problems
/// are not raised here; they parse into a network that validate_network then
/// reports on.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NetworkDocument {
  XmasNetwork network;
  std::optional<NetworkState> state;

  /// Embedded state, or the default initial one.
  NetworkState state_or_initial() const;
};

NetworkDocument parse_document(std::string_view json_text);
NetworkDocument load_document(const std::filesystem::path&);

/// A bare state object (same schema as the document's "state" member),
/// checked against the network: known ids, matching component types, tags
/// from the alphabet, queue contents within capacity.
NetworkState parse_state(const XmasNetwork&, std::string_view json_text);
NetworkState load_state(const XmasNetwork&, const std::filesystem::path&);

/// Canonical serialization: fixed key order, two-space indent, trailing
/// newline. Byte-identical for equal inputs.
std::string serialize_document(const XmasNetwork&, const NetworkState* state = nullptr);

/// Writes through a temporary file in the same directory and renames, so a
/// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path&, std::string_view content);

}  // namespace xmas
