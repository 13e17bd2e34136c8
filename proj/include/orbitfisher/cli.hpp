#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbitfisher/oracles.hpp"

namespace orbitfisher::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitContract = 3;
inline constexpr int kExitUsage = 64;

using Json = nlohmann::json;

/// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// MatrixFile: {"n": n, "re": [[...]], "im": [[...]]}
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const char* what);
Json real_matrix_to_json(const RealMatrix& m);
Json vector_to_json(const RealVector& v);
RealVector vector_from_json(const Json& j, const char* what);

CurveSpec curve_from_json(const Json& j);
Json curve_to_json(const CurveSpec& c);

std::string sha256_hex(const std::string& bytes);

/// 17 significant digits.
std::string csv_number(double x);

/// Writes through a temporary file in the target directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace orbitfisher::cli
