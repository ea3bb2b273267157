#include "bergman/io.hpp"

#include "bergman/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bergman::io {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::vector<std::string> coordinate_header(std::size_t d) {
    std::vector<std::string> h;
    if (d == 1) return {"x", "y"};
    for (std::size_t j = 1; j <= d; ++j) {
        h.push_back("x" + std::to_string(j));
        h.push_back("y" + std::to_string(j));
    }
    return h;
}

} // namespace

std::string grid_csv(const Grid& grid) {
    const std::size_t d = dimension(grid.spec);
    std::vector<std::string> header = coordinate_header(d);
    header.push_back("quad_weight");
    header.push_back("weight_value");
    std::string out = csv_row(header);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row;
        for (const auto& c : grid.points[i].coords) {
            row.push_back(fmt(c.real()));
            row.push_back(fmt(c.imag()));
        }
        row.push_back(fmt(grid.quad_weights[i]));
        row.push_back(fmt(grid.weight_values[i]));
        out += csv_row(row);
    }
    return out;
}

std::string points_csv(const std::vector<Configuration>& configs, const Grid* grid) {
    std::vector<std::string> header{"sample", "index"};
    if (grid)
        for (auto& h : coordinate_header(dimension(grid->spec))) header.push_back(h);
    std::string out = csv_row(header);
    for (std::size_t s = 0; s < configs.size(); ++s) {
        for (std::size_t i : configs[s].indices) {
            std::vector<std::string> row{std::to_string(s), std::to_string(i)};
            if (grid && i < grid->size())
                for (const auto& c : grid->points[i].coords) {
                    row.push_back(fmt(c.real()));
                    row.push_back(fmt(c.imag()));
                }
            out += csv_row(row);
        }
    }
    return out;
}

std::string scatter_svg(const std::vector<std::complex<double>>& points, double extent, std::string_view title) {
    constexpr double size = 480.0;
    const double half = size / 2.0;
    const double scale = half / extent;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "<title>";
    for (char ch : title) {
        if (ch == '<') os << "&lt;";
        else if (ch == '&') os << "&amp;";
        else os << ch;
    }
    os << "</title>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"0\" y1=\"" << half << "\" x2=\"" << size << "\" y2=\"" << half << "\" stroke=\"#999\"/>\n";
    os << "<line x1=\"" << half << "\" y1=\"0\" x2=\"" << half << "\" y2=\"" << size << "\" stroke=\"#999\"/>\n";
    os << "<circle cx=\"" << half << "\" cy=\"" << half << "\" r=\"" << fmt(scale) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (const auto& p : points) {
        if (std::abs(p.real()) > extent || std::abs(p.imag()) > extent) continue;
        os << "<circle cx=\"" << fmt(half + scale * p.real()) << "\" cy=\"" << fmt(half - scale * p.imag())
           << "\" r=\"2.5\" fill=\"#c03\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Json to_json(const RngSeed& s) { return Json{{"seed", s.seed}, {"stream", s.stream}}; }

Json to_json(const Configuration& c) { return Json(c.indices); }

Json to_json(const std::vector<Configuration>& cs) {
    Json arr = Json::array();
    for (const auto& c : cs) arr.push_back(to_json(c));
    return arr;
}

Json to_json(const ProbeReport& r) {
    return Json{{"probe", r.probe},
                {"samples", r.samples},
                {"min_gap", r.min_gap},
                {"max_lambda", r.max_lambda},
                {"min_insertion", r.min_insertion},
                {"trace_stats", {{"min", r.trace_stats.min}, {"max", r.trace_stats.max}, {"mean", r.trace_stats.mean}}},
                {"degenerate_events", r.degenerate_events},
                {"pass", r.pass},
                {"seed", to_json(r.seed)}};
}

Json to_json(const CouplingTable& t) {
    Json arr = Json::array();
    for (const auto& e : t.entries)
        arr.push_back(Json{{"upper", from_mask(e.upper, t.ground).indices},
                           {"lower", from_mask(e.lower, t.ground).indices},
                           {"mass", e.mass}});
    return arr;
}

Json to_json(const DominationReport& r) {
    return Json{{"samples", r.samples},
                {"exact", r.exact},
                {"set_sizes", r.set_sizes},
                {"upper_mean", r.upper_mean},
                {"lower_mean", r.lower_mean},
                {"mc_sigma", r.mc_sigma},
                {"trace_upper", r.trace_upper},
                {"trace_lower", r.trace_lower},
                {"worst_event_excess", r.worst_event_excess},
                {"events_checked", r.events_checked},
                {"pass", r.pass},
                {"seed", to_json(r.seed)}};
}

Json to_json(const TraceBoundReport& r) {
    return Json{{"expected_difference", r.expected_difference},
                {"trace_difference", r.trace_difference},
                {"identity_error", r.identity_error},
                {"bound_holds", r.bound_holds},
                {"identity_holds", r.identity_holds},
                {"pass", r.pass}};
}

namespace {
Json bin_json(const gaf::BinStat& b) {
    return Json{{"bin_lo", b.lo}, {"bin_hi", b.hi}, {"expected", b.expected}, {"observed_mean", b.observed_mean}, {"z_score", b.z_score}};
}
} // namespace

Json to_json(const gaf::IntensityReport& r) {
    Json bins = Json::array();
    for (const auto& b : r.bins) bins.push_back(bin_json(b));
    return Json{{"terms", r.degree_terms},
                {"radius", r.radius},
                {"trials", r.trials},
                {"excluded", r.excluded},
                {"bins", bins},
                {"half_disk", bin_json(r.half_disk)},
                {"pass", r.pass},
                {"seed", to_json(r.seed)}};
}

std::string intensity_csv(const gaf::IntensityReport& r) {
    std::string out = csv_row({"bin_lo", "bin_hi", "expected", "observed_mean", "z_score"});
    for (const auto& b : r.bins) out += csv_row({fmt(b.lo), fmt(b.hi), fmt(b.expected), fmt(b.observed_mean), fmt(b.z_score)});
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace bergman::io
