#include "saudit/svgplot.hpp"

#include "saudit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace saudit::plot {

namespace {

const char* color_of(sampling::SamplerKind kind) {
    switch (kind) {
        case sampling::SamplerKind::basic: return "#4269d0";
        case sampling::SamplerKind::top_k: return "#efb118";
        case sampling::SamplerKind::top_p: return "#ff725c";
        case sampling::SamplerKind::min_p: return "#3ca951";
    }
    return "#555555";
}

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%g", v);
    return buffer;
}

// Linear map from data space to pixel space.
struct Scale {
    double dmin = 0.0, dmax = 1.0, pmin = 0.0, pmax = 1.0;
    double operator()(double v) const {
        return pmin + (v - dmin) / (dmax - dmin) * (pmax - pmin);
    }
};

// Round-number tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    const double range = hi - lo;
    const double raw = range / std::max(1, target - 1);
    const double power = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / power;
    const double step = power * (frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0);
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        ticks.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

void pad_range(double& lo, double& hi) {
    if (hi <= lo) {
        const double bump = std::fabs(lo) > 1.0 ? std::fabs(lo) * 0.1 : 1.0;
        lo -= bump;
        hi += bump;
        return;
    }
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
}

// yflip maps data to pixels with the larger data value higher on screen
// (pmin = bottom pixel, pmax = top pixel).
void draw_axes(std::ostringstream& svg, const Scale& x, const Scale& yflip,
               const std::string& xlabel, const std::string& ylabel) {
    const double bottom = yflip.pmin;
    const double top = yflip.pmax;
    svg << "<line x1='" << x.pmin << "' y1='" << bottom << "' x2='" << x.pmax << "' y2='"
        << bottom << "' stroke='#333' stroke-width='1'/>\n";
    svg << "<line x1='" << x.pmin << "' y1='" << top << "' x2='" << x.pmin << "' y2='" << bottom
        << "' stroke='#333' stroke-width='1'/>\n";
    for (double t : nice_ticks(x.dmin, x.dmax)) {
        const double px = x(t);
        svg << "<line x1='" << px << "' y1='" << bottom << "' x2='" << px << "' y2='"
            << bottom + 5 << "' stroke='#333'/>\n";
        svg << "<text x='" << px << "' y='" << bottom + 18
            << "' text-anchor='middle' font-size='11'>" << num(t) << "</text>\n";
    }
    for (double t : nice_ticks(yflip.dmin, yflip.dmax)) {
        const double py = yflip(t);
        svg << "<line x1='" << x.pmin - 5 << "' y1='" << py << "' x2='" << x.pmin << "' y2='"
            << py << "' stroke='#333'/>\n";
        svg << "<line x1='" << x.pmin << "' y1='" << py << "' x2='" << x.pmax << "' y2='" << py
            << "' stroke='#ddd' stroke-width='0.5'/>\n";
        svg << "<text x='" << x.pmin - 8 << "' y='" << py + 4
            << "' text-anchor='end' font-size='11'>" << num(t) << "</text>\n";
    }
    svg << "<text x='" << (x.pmin + x.pmax) / 2 << "' y='" << bottom + 36
        << "' text-anchor='middle' font-size='12'>" << escape_xml(xlabel) << "</text>\n";
    svg << "<text x='" << x.pmin - 48 << "' y='" << (top + bottom) / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 " << x.pmin - 48 << " "
        << (top + bottom) / 2 << ")'>" << escape_xml(ylabel) << "</text>\n";
}

struct Series {
    std::string label;
    std::string color;
    std::vector<double> xs, ys, errs;
};

std::string line_panel(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       bool zero_line) {
    const double width = 860, height = 500;
    const double left = 80, right = 30, top = 48, bottom = 56;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i] - s.errs[i]);
            ymax = std::max(ymax, s.ys[i] + s.errs[i]);
        }
    }
    if (zero_line) {
        ymin = std::min(ymin, 0.0);
        ymax = std::max(ymax, 0.0);
    }
    if (xmax <= xmin) {
        xmin -= 1;
        xmax += 1;
    }
    pad_range(ymin, ymax);

    const Scale x{xmin, xmax, left, width - right};
    const Scale yflip{ymin, ymax, height - bottom, top};

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "' font-family='sans-serif'>\n";
    svg << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    svg << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>"
        << escape_xml(title) << "</text>\n";
    draw_axes(svg, x, yflip, xlabel, ylabel);

    if (zero_line && ymin < 0.0 && ymax > 0.0) {
        svg << "<line x1='" << x.pmin << "' y1='" << yflip(0.0) << "' x2='" << x.pmax << "' y2='"
            << yflip(0.0) << "' stroke='#888' stroke-dasharray='5,4'/>\n";
    }

    for (const Series& s : series) {
        // +/- 1 SE band: upper edge forward, lower edge back.
        std::ostringstream band;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            band << (i == 0 ? "M" : "L") << x(s.xs[i]) << ' ' << yflip(s.ys[i] + s.errs[i]);
        }
        for (std::size_t i = s.xs.size(); i-- > 0;) {
            band << 'L' << x(s.xs[i]) << ' ' << yflip(s.ys[i] - s.errs[i]);
        }
        band << 'Z';
        svg << "<path d='" << band.str() << "' fill='" << s.color
            << "' fill-opacity='0.15' stroke='none'/>\n";

        std::ostringstream line;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            line << (i == 0 ? "" : " ") << x(s.xs[i]) << ',' << yflip(s.ys[i]);
        }
        svg << "<polyline points='" << line.str() << "' fill='none' stroke='" << s.color
            << "' stroke-width='1.8'/>\n";
    }

    double ly = top + 6;
    for (const Series& s : series) {
        svg << "<line x1='" << width - right - 150 << "' y1='" << ly << "' x2='"
            << width - right - 126 << "' y2='" << ly << "' stroke='" << s.color
            << "' stroke-width='3'/>\n";
        svg << "<text x='" << width - right - 120 << "' y='" << ly + 4 << "' font-size='12'>"
            << escape_xml(s.label) << "</text>\n";
        ly += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string curves_svg(const std::vector<bestofn::BestOfNCurve>& curves,
                       const std::string& title) {
    if (curves.empty()) throw DataError("no curves to plot");
    std::vector<Series> series;
    for (const bestofn::BestOfNCurve& curve : curves) {
        if (curve.points.empty()) throw DataError("curve has no points");
        Series s;
        s.label = sampling::to_string(curve.sampler);
        s.color = color_of(curve.sampler);
        for (const bestofn::CurvePoint& p : curve.points) {
            s.xs.push_back(p.n);
            s.ys.push_back(p.expected_max);
            s.errs.push_back(p.std_error);
        }
        series.push_back(std::move(s));
    }
    return line_panel(series, title, "N (configs subsampled)", "expected max score", false);
}

std::string curves_tsv(const std::vector<bestofn::BestOfNCurve>& curves) {
    if (curves.empty()) throw DataError("no curves to plot");
    std::ostringstream out;
    out << "# sampler\tn\texpected_max\tstd_error\trepeats\n";
    bool first = true;
    for (const bestofn::BestOfNCurve& curve : curves) {
        if (curve.points.empty()) throw DataError("curve has no points");
        if (!first) out << "\n\n";
        first = false;
        for (const bestofn::CurvePoint& p : curve.points) {
            out << sampling::to_string(curve.sampler) << '\t' << p.n << '\t'
                << csvio::format_double(p.expected_max) << '\t'
                << csvio::format_double(p.std_error) << '\t' << p.repeats << '\n';
        }
    }
    return out.str();
}

std::string diff_svg(const bestofn::DiffCurve& curve, const std::string& title) {
    if (curve.points.empty()) throw DataError("no curve points to plot");
    Series s;
    s.label = std::string(sampling::to_string(curve.target)) + " - best other";
    s.color = color_of(curve.target);
    for (const bestofn::DiffPoint& p : curve.points) {
        s.xs.push_back(p.n);
        s.ys.push_back(p.expected_diff);
        s.errs.push_back(p.std_error);
    }
    return line_panel({s}, title, "N (configs subsampled)", "expected score difference", true);
}

std::string diff_tsv(const bestofn::DiffCurve& curve) {
    if (curve.points.empty()) throw DataError("no curve points to plot");
    std::ostringstream out;
    out << "# n\texpected_diff\tstd_error\trepeats\n";
    for (const bestofn::DiffPoint& p : curve.points) {
        out << p.n << '\t' << csvio::format_double(p.expected_diff) << '\t'
            << csvio::format_double(p.std_error) << '\t' << p.repeats << '\n';
    }
    return out.str();
}

namespace {

struct Bar {
    sampling::SamplerKind sampler;
    double mean, lo, hi;
};

// metric -> temperature -> bars
using BarPanels = std::map<std::string, std::map<double, std::vector<Bar>>>;

BarPanels collect_group_means(const nlohmann::json& results) {
    if (!results.contains("group_means") || !results["group_means"].is_array() ||
        results["group_means"].empty()) {
        throw DataError("input has no group_means to plot");
    }
    BarPanels panels;
    for (const nlohmann::json& g : results["group_means"]) {
        if (!g.contains("metric") || !g.contains("temperature") || !g.contains("sampler") ||
            !g.contains("mean") || !g.contains("ci_lower") || !g.contains("ci_upper")) {
            throw DataError("malformed group_means entry");
        }
        Bar bar{sampling::sampler_kind_from_string(g["sampler"].get<std::string>()),
                g["mean"].get<double>(), g["ci_lower"].get<double>(),
                g["ci_upper"].get<double>()};
        panels[g["metric"].get<std::string>()][g["temperature"].get<double>()].push_back(bar);
    }
    for (auto& [metric, by_tau] : panels) {
        for (auto& [tau, bars] : by_tau) {
            std::sort(bars.begin(), bars.end(),
                      [](const Bar& a, const Bar& b) { return a.sampler < b.sampler; });
        }
    }
    return panels;
}

} // namespace

std::string battery_svg(const nlohmann::json& results, const std::string& title) {
    const BarPanels panels = collect_group_means(results);

    const double width = 860;
    const double panel_h = 230, panel_gap = 44, top0 = 52, left = 80, right = 30;
    const double height = top0 + panels.size() * (panel_h + panel_gap);

    std::set<int> sampler_set;
    for (const auto& [metric, by_tau] : panels) {
        for (const auto& [tau, bars] : by_tau) {
            for (const Bar& bar : bars) sampler_set.insert(static_cast<int>(bar.sampler));
        }
    }

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "' font-family='sans-serif'>\n";
    svg << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    svg << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>"
        << escape_xml(title) << "</text>\n";

    double lx = left;
    for (int sampler_int : sampler_set) {
        const auto kind = static_cast<sampling::SamplerKind>(sampler_int);
        svg << "<rect x='" << lx << "' y='32' width='12' height='12' fill='" << color_of(kind)
            << "'/>\n";
        svg << "<text x='" << lx + 16 << "' y='42' font-size='12'>" << sampling::to_string(kind)
            << "</text>\n";
        lx += 110;
    }

    double panel_top = top0;
    for (const auto& [metric, by_tau] : panels) {
        double ymin = 0.0, ymax = 0.0;
        for (const auto& [tau, bars] : by_tau) {
            for (const Bar& bar : bars) {
                ymin = std::min({ymin, bar.lo, bar.mean});
                ymax = std::max({ymax, bar.hi, bar.mean});
            }
        }
        pad_range(ymin, ymax);

        const double panel_bottom = panel_top + panel_h;
        const Scale yflip{ymin, ymax, panel_bottom, panel_top};
        const double plot_w = width - left - right;
        const std::size_t groups = by_tau.size();
        const double group_w = plot_w / static_cast<double>(groups);

        svg << "<text x='" << left << "' y='" << panel_top - 6 << "' font-size='13'>"
            << escape_xml(metric) << "</text>\n";
        svg << "<line x1='" << left << "' y1='" << panel_top << "' x2='" << left << "' y2='"
            << panel_bottom << "' stroke='#333'/>\n";
        svg << "<line x1='" << left << "' y1='" << panel_bottom << "' x2='" << width - right
            << "' y2='" << panel_bottom << "' stroke='#333'/>\n";
        for (double t : nice_ticks(ymin, ymax, 5)) {
            const double py = yflip(t);
            svg << "<line x1='" << left - 5 << "' y1='" << py << "' x2='" << left << "' y2='"
                << py << "' stroke='#333'/>\n";
            svg << "<line x1='" << left << "' y1='" << py << "' x2='" << width - right
                << "' y2='" << py << "' stroke='#ddd' stroke-width='0.5'/>\n";
            svg << "<text x='" << left - 8 << "' y='" << py + 4
                << "' text-anchor='end' font-size='11'>" << num(t) << "</text>\n";
        }
        if (ymin < 0.0 && ymax > 0.0) {
            svg << "<line x1='" << left << "' y1='" << yflip(0.0) << "' x2='" << width - right
                << "' y2='" << yflip(0.0) << "' stroke='#888' stroke-dasharray='5,4'/>\n";
        }

        std::size_t group_index = 0;
        for (const auto& [tau, bars] : by_tau) {
            const double gx = left + group_w * static_cast<double>(group_index);
            const double slot = group_w * 0.8 / static_cast<double>(bars.size());
            const double inset = group_w * 0.1;
            for (std::size_t b = 0; b < bars.size(); ++b) {
                const Bar& bar = bars[b];
                const double bx = gx + inset + slot * static_cast<double>(b);
                const double bw = slot * 0.85;
                const double base = yflip(0.0);  // ymin <= 0 <= ymax by construction
                const double tip = yflip(bar.mean);
                const double rect_y = std::min(base, tip);
                const double rect_h = std::max(1.0, std::fabs(base - tip));
                svg << "<rect x='" << bx << "' y='" << rect_y << "' width='" << bw
                    << "' height='" << rect_h << "' fill='" << color_of(bar.sampler)
                    << "' fill-opacity='0.85'/>\n";
                const double cx = bx + bw / 2;
                svg << "<line x1='" << cx << "' y1='" << yflip(bar.lo) << "' x2='" << cx
                    << "' y2='" << yflip(bar.hi) << "' stroke='#222' stroke-width='1.2'/>\n";
                svg << "<line x1='" << cx - 4 << "' y1='" << yflip(bar.lo) << "' x2='" << cx + 4
                    << "' y2='" << yflip(bar.lo) << "' stroke='#222' stroke-width='1.2'/>\n";
                svg << "<line x1='" << cx - 4 << "' y1='" << yflip(bar.hi) << "' x2='" << cx + 4
                    << "' y2='" << yflip(bar.hi) << "' stroke='#222' stroke-width='1.2'/>\n";
            }
            svg << "<text x='" << gx + group_w / 2 << "' y='" << panel_bottom + 18
                << "' text-anchor='middle' font-size='11'>tau=" << num(tau) << "</text>\n";
            ++group_index;
        }
        panel_top = panel_bottom + panel_gap;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string battery_tsv(const nlohmann::json& results) {
    const BarPanels panels = collect_group_means(results);
    std::ostringstream out;
    out << "# metric\ttemperature\tsampler\tmean\tci_lower\tci_upper\n";
    for (const auto& [metric, by_tau] : panels) {
        for (const auto& [tau, bars] : by_tau) {
            for (const Bar& bar : bars) {
                out << metric << '\t' << csvio::format_double(tau) << '\t'
                    << sampling::to_string(bar.sampler) << '\t' << csvio::format_double(bar.mean)
                    << '\t' << csvio::format_double(bar.lo) << '\t'
                    << csvio::format_double(bar.hi) << '\n';
            }
        }
    }
    return out.str();
}

} // namespace saudit::plot
