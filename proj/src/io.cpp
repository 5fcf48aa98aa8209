#include "frbe/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace frbe {

Eigen::VectorXd linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace requires at least one step");
    Eigen::VectorXd v(steps);
    if (steps == 1) {
        v[0] = lo;
        return v;
    }
    const double d = (hi - lo) / static_cast<double>(steps - 1);
    for (int i = 0; i < steps; ++i) v[i] = lo + d * i;
    v[steps - 1] = hi;
    return v;
}

std::string format_double(double v) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

}  // namespace

void write_field_csv(const std::string& path, const FieldSample& sample) {
    std::ofstream out = open_out(path);
    out << "t,x,value\n";
    for (Eigen::Index i = 0; i < sample.t_grid.size(); ++i)
        for (Eigen::Index k = 0; k < sample.x_grid.size(); ++k)
            out << format_double(sample.t_grid[i]) << ',' << format_double(sample.x_grid[k])
                << ',' << format_double(sample.values(i, k)) << '\n';
}

void write_slices_csv(const std::string& path, const std::vector<SliceSeries>& series) {
    std::ofstream out = open_out(path);
    out << "arg,value,series_label\n";
    for (const SliceSeries& s : series) {
        if (s.arg.size() != s.value.size())
            throw std::invalid_argument("slice series arg/value lengths differ");
        for (std::size_t i = 0; i < s.arg.size(); ++i)
            out << format_double(s.arg[i]) << ',' << format_double(s.value[i]) << ','
                << s.label << '\n';
    }
}

void write_surface_csv(const std::string& path, const Eigen::VectorXd& t2,
                       const Eigen::VectorXd& x2, const Eigen::MatrixXd& values) {
    if (values.rows() != t2.size() || values.cols() != x2.size())
        throw std::invalid_argument("surface matrix does not match its axes");
    std::ofstream out = open_out(path);
    out << "t2,x2,value\n";
    for (Eigen::Index i = 0; i < t2.size(); ++i)
        for (Eigen::Index k = 0; k < x2.size(); ++k)
            out << format_double(t2[i]) << ',' << format_double(x2[k]) << ','
                << format_double(values(i, k)) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("table row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? ',' : '\n');
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
}

}
