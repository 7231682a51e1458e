#pragma once

// Serialization of scan rows and single-point results. CSV column order is
// fixed: epsilon,T,R,flux_imbalance,im_a_r1,status with the header always
// present; numbers are written with 17 significant digits, '.' decimal point,
// lowercase exponents. JSON carries the same values.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "coulomb/flux.hpp"
#include "coulomb/scatter.hpp"

namespace coulomb::io {

std::string fmt17(double v);

std::string csv_header();
std::string csv_row(const scatter::ScanRow& row);

void write_scan_csv(std::ostream& os, const std::vector<scatter::ScanRow>& rows);
void write_scan_json(std::ostream& os, double u0, const std::vector<scatter::ScanRow>& rows);

void write_point_csv(std::ostream& os, const scatter::TunnelResult& r,
                     const std::optional<flux::CurrentTable>& table);
void write_point_json(std::ostream& os, const scatter::TunnelResult& r,
                      const std::optional<flux::CurrentTable>& table);

// Minimal line chart of T(eps) (and R dashed), data-only consumers come first.
void write_scan_svg(std::ostream& os, const std::vector<scatter::ScanRow>& rows, bool log_x);

}  // namespace coulomb::io
