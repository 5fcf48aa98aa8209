#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "frbe/simulate.hpp"

namespace frbe {

Eigen::VectorXd linspace(double lo, double hi, int steps);

/// Shortest decimal form that round-trips a double.
std::string format_double(double v);

/// Long-format field file: header "t,x,value", rows in t-major order.
void write_field_csv(const std::string& path, const FieldSample& sample);

struct SliceSeries {
    std::string label;
    std::vector<double> arg;
    std::vector<double> value;
};

/// Covariance slice file: header "arg,value,series_label".
void write_slices_csv(const std::string& path, const std::vector<SliceSeries>& series);

/// Covariance surface file: header "t2,x2,value".
void write_surface_csv(const std::string& path, const Eigen::VectorXd& t2,
                       const Eigen::VectorXd& x2, const Eigen::MatrixXd& values);

/// Generic numeric table with the given header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);

}
