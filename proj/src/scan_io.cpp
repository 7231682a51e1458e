#include "coulomb/scan_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace coulomb::io {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_header() { return "epsilon,T,R,flux_imbalance,im_a_r1,status"; }

std::string csv_row(const scatter::ScanRow& row) {
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    return fmt17(row.epsilon) + "," + fmt17(row.T) + "," + fmt17(row.R) + "," +
           fmt17(row.flux_imbalance) + "," + fmt17(row.im_a_r1) + "," + status;
}

void write_scan_csv(std::ostream& os, const std::vector<scatter::ScanRow>& rows) {
    os << csv_header() << "\n";
    for (const auto& r : rows) os << csv_row(r) << "\n";
}

namespace {

json row_json(const scatter::ScanRow& r) {
    return json{{"epsilon", r.epsilon},
                {"T", r.T},
                {"R", r.R},
                {"flux_imbalance", r.flux_imbalance},
                {"im_a_r1", r.im_a_r1},
                {"status", r.status}};
}

json complex_json(cx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

json point_json(const scatter::TunnelResult& r,
                const std::optional<flux::CurrentTable>& table) {
    json j{{"epsilon", r.epsilon},
           {"u0", r.u0},
           {"T", r.T},
           {"R", r.R},
           {"c_inc", complex_json(r.c_inc)},
           {"c_tr", complex_json(r.c_tr)},
           {"c_refl", complex_json(r.c_refl)},
           {"amplitudes",
            {{"a_l1", complex_json(r.amps.a_l1)},
             {"a_l2", complex_json(r.amps.a_l2)},
             {"a_r1", complex_json(r.amps.a_r1)},
             {"a_r2", complex_json(r.amps.a_r2)}}},
           {"diagnostics",
            {{"flux_imbalance", r.diag.flux_imbalance},
             {"im_a_r1", r.diag.im_a_r1},
             {"r_unitarity_discrepancy", r.diag.r_unitarity_discrepancy},
             {"continuity_residual", r.diag.continuity_residual},
             {"table_cross_dev", r.diag.table_cross_dev},
             {"log_route", r.diag.log_route},
             {"amplitude_underflow", r.diag.amplitude_underflow}}}};
    if (table.has_value()) {
        json t{{"z_ref", table->z_ref}, {"cross_check_dev", table->cross_check_dev}};
        const char* names[2][2] = {{"11", "12"}, {"21", "22"}};
        for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
                t[std::string("jl") + names[m][n]] = complex_json(table->jl[m][n]);
                t[std::string("jr") + names[m][n]] = complex_json(table->jr[m][n]);
            }
        j["currents"] = t;
    }
    return j;
}

void json_to_kv_csv(std::ostream& os, const json& j, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            json_to_kv_csv(os, *it, key);
        } else if (it->is_number_float()) {
            os << key << "," << fmt17(it->get<double>()) << "\n";
        } else if (it->is_boolean()) {
            os << key << "," << (it->get<bool>() ? "true" : "false") << "\n";
        } else {
            os << key << "," << it->dump() << "\n";
        }
    }
}

}  // namespace

void write_scan_json(std::ostream& os, double u0, const std::vector<scatter::ScanRow>& rows) {
    json j{{"u0", u0}, {"rows", json::array()}};
    for (const auto& r : rows) j["rows"].push_back(row_json(r));
    os << j.dump(2) << "\n";
}

void write_point_csv(std::ostream& os, const scatter::TunnelResult& r,
                     const std::optional<flux::CurrentTable>& table) {
    os << "key,value\n";
    json_to_kv_csv(os, point_json(r, table), "");
}

void write_point_json(std::ostream& os, const scatter::TunnelResult& r,
                      const std::optional<flux::CurrentTable>& table) {
    os << point_json(r, table).dump(2) << "\n";
}

void write_scan_svg(std::ostream& os, const std::vector<scatter::ScanRow>& rows, bool log_x) {
    const int width = 960, height = 540;
    const int ml = 70, mr = 20, mt = 20, mb = 50;
    double xlo = 0.0, xhi = 1.0;
    bool first = true;
    for (const auto& r : rows) {
        if (!r.ok()) continue;
        double x = log_x ? std::log10(r.epsilon) : r.epsilon;
        if (first) {
            xlo = xhi = x;
            first = false;
        }
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
    }
    if (first || xhi == xlo) {
        os << "<svg xmlns='http://www.w3.org/2000/svg' width='1' height='1'/>\n";
        return;
    }
    auto px = [&](double e) {
        double x = log_x ? std::log10(e) : e;
        return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr);
    };
    auto py = [&](double t) { return mt + (1.05 - t) / 1.05 * (height - mt - mb); };

    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "' viewBox='0 0 " << width << " " << height << "'>\n"
       << "<rect width='100%' height='100%' fill='white'/>\n";
    for (double g : {0.0, 0.25, 0.5, 0.75, 1.0})
        os << "<line x1='" << ml << "' y1='" << py(g) << "' x2='" << width - mr << "' y2='"
           << py(g) << "' stroke='#ddd'/>\n"
           << "<text x='" << ml - 8 << "' y='" << py(g) + 4
           << "' text-anchor='end' font-size='12' fill='#555'>" << g << "</text>\n";
    auto polyline = [&](const char* color, bool use_T, const char* dash) {
        os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2'";
        if (dash[0]) os << " stroke-dasharray='" << dash << "'";
        os << " points='";
        for (const auto& r : rows) {
            if (!r.ok()) continue;
            os << px(r.epsilon) << "," << py(use_T ? r.T : r.R) << " ";
        }
        os << "'/>\n";
    };
    polyline("#1f6fb2", true, "");
    polyline("#c24b3a", false, "4 3");
    os << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
       << "' text-anchor='middle' font-size='13' fill='#333'>"
       << (log_x ? "epsilon (log scale)" : "epsilon") << "</text>\n"
       << "<text x='" << width - mr - 10 << "' y='" << mt + 16
       << "' text-anchor='end' font-size='13'><tspan fill='#1f6fb2'>T</tspan> "
       << "<tspan fill='#c24b3a'>R</tspan></text>\n</svg>\n";
}

}  // namespace coulomb::io
