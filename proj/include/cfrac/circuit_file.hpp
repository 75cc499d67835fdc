#pragma once

// Line-oriented circuit description:
//
//   PORT_SHUNT RC G=<g> C=<c>
//   REPEAT <k>
//     SERIES STATIC KIND=TANH_PLUS_ID
//     SHUNT RC G=<g> C=<c>
//   END
//
// SERIES STATIC takes KIND=TANH_PLUS_ID | LINEAR R=<r> | PWL FILE=<path> |
// SATURATION LIMIT=<l>, optionally followed by MU=<m> LAMBDA=<l>; the
// sector is stated for the series (current -> voltage) orientation. Two
// SERIES lines in a row get an open shunt between them, two shunts a short
// series element. `SERIES SHORT` and `SHUNT OPEN` spell the fillers out,
// which the printer needs for chains ending in an open shunt.

#include "cfrac/elements.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace cfrac {

/// PWL FILE= paths are resolved against `base_dir`.
[[nodiscard]] CircuitChain parse_circuit(std::istream& is, const std::filesystem::path& base_dir = {});
[[nodiscard]] CircuitChain parse_circuit_text(const std::string& text, const std::filesystem::path& base_dir = {});
[[nodiscard]] CircuitChain read_circuit_file(const std::filesystem::path& path);

/// Chooses the FILE= reference for the index-th PWL element.
using PwlNamer = std::function<std::string(const StaticNL& element, int index)>;

/// Compresses runs of identical units into REPEAT blocks. Without a namer,
/// PWL elements are referenced through their `source`.
void print_circuit(std::ostream& os, const CircuitChain& chain, const PwlNamer& namer = {});

/// Writes the circuit and one `<stem>_pwl<k>.txt` table per PWL element
/// next to it.
void write_circuit_file(const std::filesystem::path& path, const CircuitChain& chain);

}  // namespace cfrac
