#ifndef WSTAR_DOCUMENT_HPP
#define WSTAR_DOCUMENT_HPP

#include "wstar/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace wstar {

using Json = nlohmann::json;

// Input document: generators as nested arrays of [re, im] pairs, row-major.
struct AlgebraDocument {
    Eigen::Index ambient_dim = 0;
    std::vector<Matrix> generators;
    std::optional<std::vector<Matrix>> central_subalgebra;
    std::map<std::string, Vector> vectors;
    std::uint64_t seed = 0;
    Tolerance tolerance;
};

AlgebraDocument parse_document(const Json& j);
AlgebraDocument parse_document_text(const std::string& text);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);
Json document_to_json(const AlgebraDocument& doc);

} // namespace wstar

#endif
