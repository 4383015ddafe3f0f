#include "wstar/document.hpp"

namespace wstar {

namespace {

Complex complex_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(field + ": complex entries must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

} // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a non-empty matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ParseError(field + ": expected nested arrays");
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw ParseError(field + ": ragged rows at row " + std::to_string(r));
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[r][c],
                                        field + "[" + std::to_string(r) + "][" +
                                            std::to_string(c) + "]");
    }
    if (!m.allFinite()) throw ParseError(field + ": non-finite entries");
    return m;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a non-empty vector");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

AlgebraDocument parse_document(const Json& j) {
    if (!j.is_object()) throw ParseError("document: expected a JSON object");
    AlgebraDocument doc;
    if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer())
        throw ParseError("ambient_dim: required integer field");
    doc.ambient_dim = j["ambient_dim"].get<Eigen::Index>();
    if (doc.ambient_dim <= 0) throw ParseError("ambient_dim: must be positive");

    auto read_matrices = [&](const char* key) {
        std::vector<Matrix> out;
        const Json& arr = j.at(key);
        if (!arr.is_array()) throw ParseError(std::string(key) + ": expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Matrix m = matrix_from_json(arr[i], std::string(key) + "[" + std::to_string(i) + "]");
            if (m.rows() != doc.ambient_dim || m.cols() != doc.ambient_dim)
                throw ParseError(std::string(key) + "[" + std::to_string(i) +
                                 "]: size differs from ambient_dim");
            out.push_back(std::move(m));
        }
        return out;
    };

    if (j.contains("generators")) doc.generators = read_matrices("generators");
    if (j.contains("central_subalgebra"))
        doc.central_subalgebra = read_matrices("central_subalgebra");
    if (j.contains("vectors")) {
        const Json& vs = j["vectors"];
        if (!vs.is_object()) throw ParseError("vectors: expected an object");
        for (auto it = vs.begin(); it != vs.end(); ++it) {
            Vector v = vector_from_json(it.value(), "vectors." + it.key());
            if (v.size() != doc.ambient_dim)
                throw ParseError("vectors." + it.key() + ": size differs from ambient_dim");
            doc.vectors[it.key()] = std::move(v);
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
            throw ParseError("seed: expected an integer");
        doc.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tolerance")) {
        const Json& t = j["tolerance"];
        if (!t.is_object()) throw ParseError("tolerance: expected an object");
        if (t.contains("rel_eps")) doc.tolerance.rel_eps = t["rel_eps"].get<double>();
        if (t.contains("abs_eps")) doc.tolerance.abs_eps = t["abs_eps"].get<double>();
        if (doc.tolerance.rel_eps <= 0 || doc.tolerance.abs_eps <= 0)
            throw ParseError("tolerance: rel_eps and abs_eps must be positive");
    }
    return doc;
}

AlgebraDocument parse_document_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_document(j);
}

Json document_to_json(const AlgebraDocument& doc) {
    Json j;
    j["ambient_dim"] = doc.ambient_dim;
    Json gens = Json::array();
    for (const auto& g : doc.generators) gens.push_back(matrix_to_json(g));
    j["generators"] = std::move(gens);
    if (doc.central_subalgebra) {
        j["central_subalgebra"] = Json::array();
        for (const auto& g : *doc.central_subalgebra)
            j["central_subalgebra"].push_back(matrix_to_json(g));
    }
    if (!doc.vectors.empty()) {
        Json vs = Json::object();
        for (const auto& [k, v] : doc.vectors) vs[k] = vector_to_json(v);
        j["vectors"] = std::move(vs);
    }
    j["seed"] = doc.seed;
    j["tolerance"] = Json{{"rel_eps", doc.tolerance.rel_eps}, {"abs_eps", doc.tolerance.abs_eps}};
    return j;
}

} // namespace wstar
