#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include <json.hpp>

#include "metricop/errors.hpp"

namespace metricop {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline bool all_finite(const ComplexVector& v) {
    return v.allFinite();
}

inline void require_square(const ComplexMatrix& m, const std::string& who) {
    if (m.rows() != m.cols())
        throw DimensionMismatch(who + ": matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected square");
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                               const std::string& who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(who + ": shapes " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()) + " differ");
}

// Hermiticity test in the Frobenius norm, relative to max(1, |m|_F).
inline double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

// JSON matrix schema: {"rows": r, "cols": c, "re": [...], "im": [...]},
// both arrays flat in row-major order, length r*c. Round-trips doubles
// exactly; non-finite entries are rejected on both directions.
inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    if (!all_finite(m)) throw ParseError("matrix_to_json: non-finite entry");
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    auto re = nlohmann::json::array();
    auto im = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re") ||
        !j.contains("im"))
        throw ParseError("matrix_from_json: need object with rows, cols, re, im");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw ParseError("matrix_from_json: rows/cols must be integers");
    const auto rows = j["rows"].get<Eigen::Index>();
    const auto cols = j["cols"].get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw ParseError("matrix_from_json: negative dimension");
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (!re.is_array() || !im.is_array())
        throw ParseError("matrix_from_json: re/im must be arrays");
    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (re.size() != n || im.size() != n)
        throw ParseError("matrix_from_json: re/im length " + std::to_string(re.size()) + "/" +
                         std::to_string(im.size()) + ", expected " + std::to_string(n));
    ComplexMatrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c, ++k) {
            if (!re[k].is_number() || !im[k].is_number())
                throw ParseError("matrix_from_json: non-numeric entry at index " +
                                 std::to_string(k));
            m(r, c) = Complex(re[k].get<double>(), im[k].get<double>());
        }
    }
    if (!all_finite(m)) throw ParseError("matrix_from_json: non-finite entry");
    return m;
}

inline nlohmann::json vector_to_json(const ComplexVector& v) {
    ComplexMatrix m(v.size(), 1);
    m.col(0) = v;
    return matrix_to_json(m);
}

inline ComplexVector vector_from_json(const nlohmann::json& j) {
    ComplexMatrix m = matrix_from_json(j);
    if (m.cols() != 1) throw ParseError("vector_from_json: expected a single column");
    return m.col(0);
}

} // namespace metricop
