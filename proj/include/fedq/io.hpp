#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "fedq/fedosov.hpp"
#include "fedq/report.hpp"
#include "json.hpp"

namespace fedq {

using Json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kGeometrySchema = "fedq.geometry/1";
inline constexpr const char* kSectionSchema = "fedq.weyl_section/1";
inline constexpr const char* kFedosovSchema = "fedq.fedosov/1";
inline constexpr const char* kReportSchema = "fedq.report/1";

// Rationals are decimal strings "p/q"; a non-real scalar is the pair [re, im].
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);
// Sparse list of {"exp": [8 exponents], "c": scalar}.
Json to_json(const Poly& p);
Poly poly_from_json(const Json& j);
Json to_json(const RationalFn& f);
RationalFn rational_from_json(const Json& j);
// Object "hpow" -> rational function.
Json to_json(const HPoly& f);
HPoly hpoly_from_json(const Json& j);
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const ChartGeometry& g);
// Preset names are rebuilt and must match the stored metric.
GeometryPtr geometry_from_json(const Json& j);
Json to_json(const AlphaForm& a);
AlphaForm alpha_from_json(const ChartGeometry& g, const Json& j);
Json to_json(const WeylSection& s);
WeylSection section_from_json(const Json& j);
Json to_json(const FedosovData& fd);
// Rebuilds the connection and re-verifies the residual; throws IoError if it fails.
FedosovData fedosov_from_json(const Json& j);
// Timings are left out unless asked for, so equal runs give identical JSON.
Json to_json(const CheckReport& r, bool timings = false);

// Solved connections on disk keyed by geometry, alpha and maxY.
class ConnectionCache {
 public:
  explicit ConnectionCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::filesystem::path file_for(const ChartGeometry& g, const AlphaForm& a, int maxY) const;
  // Loads a verified cached connection or solves and stores a new one.
  FedosovData load_or_solve(GeometryPtr g, const AlphaForm& a, int maxY, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace fedq
