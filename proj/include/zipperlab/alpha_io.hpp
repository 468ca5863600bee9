#ifndef ZIPPERLAB_ALPHA_IO_HPP
#define ZIPPERLAB_ALPHA_IO_HPP

#include <string>

#include <json.hpp>

#include "zipperlab/haar.hpp"

namespace zipperlab {

/// Parses a Verblunsky coefficient from its JSON form:
///   {"L": n, "re": [[..]], "im": [[..]]}   full matrix, or
///   {"L": n, "scalar": a}                  meaning a * identity.
Matrix alpha_from_json(const nlohmann::json& j);

/// Reads the JSON form from a file path.
Matrix load_alpha_file(const std::string& path);

/// Serializes alpha back to the full-matrix JSON form.
nlohmann::json alpha_to_json(const Matrix& alpha);

/// Short stable fingerprint of the matrix entries (FNV-1a over a 17-digit
/// rendering), used in certification reports and manifests.
std::string alpha_fingerprint(const Matrix& alpha);

}  // namespace zipperlab

#endif
