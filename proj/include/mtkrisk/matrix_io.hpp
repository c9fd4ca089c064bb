#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "mtkrisk/errors.hpp"

namespace mtk {

// Matrix CSV: header line "# rows=m cols=r pstar=<v>", then rows of
// 17-significant-digit decimal values (lossless double round-trip).
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M,
                      std::optional<double> p_star = std::nullopt);

struct MatrixFile {
    Eigen::MatrixXd entries;
    std::optional<double> p_star;
};

MatrixFile read_matrix_csv(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace mtk
