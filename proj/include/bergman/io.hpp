#pragma once

#include "bergman/conditional.hpp"
#include "bergman/coupling.hpp"
#include "bergman/discretize.hpp"
#include "bergman/dpp.hpp"
#include "bergman/gaf.hpp"

#include <json.hpp>

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bergman::io {

using Json = nlohmann::json;

// RFC 4180: quote fields containing comma, quote, CR or LF; double quotes.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);
// Shortest round-trip decimal form.
std::string fmt(double v);

// Write to <path>.tmp, then rename over <path>.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string grid_csv(const Grid& grid);
// One row per (sample, site): sample,index[,x1,y1,x2,y2...]. Without a grid
// only the indices are written.
std::string points_csv(const std::vector<Configuration>& configs, const Grid* grid);

// SVG 1.1 scatter of points in [-extent, extent]^2 with axes and the unit
// circle.
std::string scatter_svg(const std::vector<std::complex<double>>& points, double extent, std::string_view title);

Json to_json(const RngSeed& s);
Json to_json(const Configuration& c);
Json to_json(const std::vector<Configuration>& cs);
Json to_json(const ProbeReport& r);
Json to_json(const CouplingTable& t);
Json to_json(const DominationReport& r);
Json to_json(const TraceBoundReport& r);
Json to_json(const gaf::IntensityReport& r);

std::string intensity_csv(const gaf::IntensityReport& r);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace bergman::io
