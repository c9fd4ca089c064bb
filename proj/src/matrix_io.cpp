#include "mtkrisk/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mtk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M,
                      std::optional<double> p_star) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "# rows=" << M.rows() << " cols=" << M.cols() << " pstar="
        << (p_star ? format_double(*p_star) : "nan") << "\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ",";
            out << format_double(M(i, j));
        }
        out << "\n";
    }
    if (!out) throw ConfigError("write failed: " + path);
}

MatrixFile read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);

    MatrixFile mf;
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("pstar=");
            if (pos != std::string::npos) {
                const std::string v = line.substr(pos + 6);
                try {
                    const double ps = std::stod(v);
                    if (ps == ps) mf.p_star = ps;  // skip nan
                } catch (const std::exception&) {
                }
            }
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("bad numeric cell in " + path + ": '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError("ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix file: " + path);

    mf.entries.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            mf.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return mf;
}

}  // namespace mtk
