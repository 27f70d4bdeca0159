#include "ntklens/report.hpp"

#include "ntklens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntklens {

namespace {

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};
constexpr int kPaletteSize = 10;

constexpr double kMarginLeft = 66.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 52.0;

std::string xml_escape(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
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

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_px(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

// pad the raw extent a little and guard degenerate spans
AxisRange padded(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double span = hi - lo;
    if (span <= 0.0) span = std::max(1.0, std::abs(lo)) * 0.2;
    return {lo - 0.05 * span, hi + 0.05 * span};
}

std::vector<double> linear_ticks(const AxisRange &r, int target) {
    const double span = r.hi - r.lo;
    const double raw = span / std::max(1, target - 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double ratio = raw / mag;
    double step = 10.0 * mag;
    if (ratio <= 1.0) step = mag;
    else if (ratio <= 2.0) step = 2.0 * mag;
    else if (ratio <= 5.0) step = 5.0 * mag;
    std::vector<double> ticks;
    for (double t = std::ceil(r.lo / step - 1e-9) * step; t <= r.hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return ticks;
}

// tick positions in log10 space; decades, falling back to 2/5 mantissas when
// the range covers less than a couple of them
std::vector<double> decade_ticks(const AxisRange &r) {
    std::vector<double> ticks;
    const int first = static_cast<int>(std::ceil(r.lo - 1e-9));
    const int last = static_cast<int>(std::floor(r.hi + 1e-9));
    for (int e = first; e <= last; ++e) ticks.push_back(static_cast<double>(e));
    if (ticks.size() < 3) {
        for (int e = first - 1; e <= last; ++e)
            for (double m : {std::log10(2.0), std::log10(5.0)}) {
                const double t = e + m;
                if (t >= r.lo - 1e-9 && t <= r.hi + 1e-9) ticks.push_back(t);
            }
        std::sort(ticks.begin(), ticks.end());
    }
    return ticks;
}

class Frame {
public:
    Frame(const ChartSpec &spec, AxisRange x, AxisRange y)
        : spec_(spec), x_(x), y_(y),
          plot_w_(spec.width - kMarginLeft - kMarginRight),
          plot_h_(spec.height - kMarginTop - kMarginBottom) {}

    double px(double v) const { return kMarginLeft + (v - x_.lo) / (x_.hi - x_.lo) * plot_w_; }
    double py(double v) const {
        return kMarginTop + plot_h_ - (v - y_.lo) / (y_.hi - y_.lo) * plot_h_;
    }
    bool y_in_range(double v) const { return v >= y_.lo && v <= y_.hi; }

    void open(std::ostringstream &out) const {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec_.width
            << "\" height=\"" << spec_.height << "\" viewBox=\"0 0 " << spec_.width << ' '
            << spec_.height << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << "<text x=\"" << spec_.width / 2 << "\" y=\"18\" text-anchor=\"middle\" "
            << "font-family=\"monospace\" font-size=\"13\">" << xml_escape(spec_.title)
            << "</text>\n";
    }

    void axes(std::ostringstream &out) const {
        const double x0 = kMarginLeft, x1 = kMarginLeft + plot_w_;
        const double y0 = kMarginTop, y1 = kMarginTop + plot_h_;
        const std::vector<double> xt =
            spec_.log_x ? decade_ticks(x_) : linear_ticks(x_, 6);
        const std::vector<double> yt =
            spec_.log_y ? decade_ticks(y_) : linear_ticks(y_, 6);
        out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
        for (double t : xt)
            out << "<line x1=\"" << fmt_px(px(t)) << "\" y1=\"" << fmt_px(y0) << "\" x2=\""
                << fmt_px(px(t)) << "\" y2=\"" << fmt_px(y1) << "\"/>\n";
        for (double t : yt)
            out << "<line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(py(t)) << "\" x2=\""
                << fmt_px(x1) << "\" y2=\"" << fmt_px(py(t)) << "\"/>\n";
        out << "</g>\n";
        out << "<rect x=\"" << fmt_px(x0) << "\" y=\"" << fmt_px(y0) << "\" width=\""
            << fmt_px(plot_w_) << "\" height=\"" << fmt_px(plot_h_)
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<g font-family=\"monospace\" font-size=\"10\">\n";
        for (double t : xt)
            out << "<text x=\"" << fmt_px(px(t)) << "\" y=\"" << fmt_px(y1 + 14.0)
                << "\" text-anchor=\"middle\">"
                << fmt_num(spec_.log_x ? std::pow(10.0, t) : t) << "</text>\n";
        for (double t : yt)
            out << "<text x=\"" << fmt_px(x0 - 6.0) << "\" y=\"" << fmt_px(py(t) + 3.0)
                << "\" text-anchor=\"end\">" << fmt_num(spec_.log_y ? std::pow(10.0, t) : t)
                << "</text>\n";
        out << "</g>\n";
        out << "<text x=\"" << fmt_px(x0 + plot_w_ / 2.0) << "\" y=\""
            << fmt_px(y1 + 34.0) << "\" text-anchor=\"middle\" font-family=\"monospace\" "
            << "font-size=\"11\">" << xml_escape(spec_.x_label) << "</text>\n";
        out << "<text x=\"14\" y=\"" << fmt_px(y0 + plot_h_ / 2.0)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" "
            << "transform=\"rotate(-90 14 " << fmt_px(y0 + plot_h_ / 2.0) << ")\">"
            << xml_escape(spec_.y_label) << "</text>\n";
    }

    void legend(std::ostringstream &out, const std::vector<std::string> &names) const {
        if (names.empty()) return;
        out << "<g font-family=\"monospace\" font-size=\"10\">\n";
        double y = kMarginTop + 12.0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const double x = kMarginLeft + plot_w_ - 150.0;
            out << "<line x1=\"" << fmt_px(x) << "\" y1=\"" << fmt_px(y - 3.0) << "\" x2=\""
                << fmt_px(x + 16.0) << "\" y2=\"" << fmt_px(y - 3.0) << "\" stroke=\""
                << kPalette[i % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << fmt_px(x + 20.0) << "\" y=\"" << fmt_px(y) << "\">"
                << xml_escape(names[i]) << "</text>\n";
            y += 13.0;
        }
        out << "</g>\n";
    }

private:
    const ChartSpec &spec_;
    AxisRange x_, y_;
    double plot_w_, plot_h_;
};

void embed_data(std::ostringstream &out, const std::string &csv) {
    std::string safe = csv;
    std::size_t at = 0;
    while ((at = safe.find("]]>", at)) != std::string::npos) safe.replace(at, 3, "]] >");
    out << "<metadata id=\"chart-data\"><![CDATA[\n" << safe << "]]></metadata>\n";
}

double to_axis(double v, bool log_scale, const char *axis) {
    if (!log_scale) return v;
    if (v <= 0.0)
        throw std::invalid_argument(std::string("log ") + axis + " axis needs positive values");
    return std::log10(v);
}

} // namespace

std::string line_chart_svg(const ChartSpec &spec, const std::vector<Series> &series) {
    bool any = false;
    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    for (const Series &s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series length mismatch: " + s.name);
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = to_axis(s.x[i], spec.log_x, "x");
            const double y = to_axis(s.y[i], spec.log_y, "y");
            if (!any) {
                xlo = xhi = x;
                ylo = yhi = y;
                any = true;
            } else {
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                ylo = std::min(ylo, y);
                yhi = std::max(yhi, y);
            }
        }
    }
    if (!any) {
        xlo = ylo = 0.0;
        xhi = yhi = 1.0;
    }
    Frame frame(spec, padded(xlo, xhi), padded(ylo, yhi));

    std::ostringstream out;
    out.precision(17);
    frame.open(out);
    frame.axes(out);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series &s = series[i];
        names.push_back(s.name);
        if (s.x.empty()) continue;
        const char *color = kPalette[i % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (j) out << ' ';
            out << fmt_px(frame.px(to_axis(s.x[j], spec.log_x, "x"))) << ','
                << fmt_px(frame.py(to_axis(s.y[j], spec.log_y, "y")));
        }
        out << "\"/>\n";
        if (s.x.size() <= 40)
            for (std::size_t j = 0; j < s.x.size(); ++j)
                out << "<circle cx=\"" << fmt_px(frame.px(to_axis(s.x[j], spec.log_x, "x")))
                    << "\" cy=\"" << fmt_px(frame.py(to_axis(s.y[j], spec.log_y, "y")))
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    frame.legend(out, names);

    std::ostringstream csv;
    csv.precision(17);
    csv << "series,x,y\n";
    for (const Series &s : series)
        for (std::size_t j = 0; j < s.x.size(); ++j)
            csv << csv_escape(s.name) << ',' << s.x[j] << ',' << s.y[j] << '\n';
    embed_data(out, csv.str());
    out << "</svg>\n";
    return out.str();
}

std::string bar_chart_svg(const ChartSpec &spec, const std::vector<std::string> &bar_names,
                          const std::vector<BarGroup> &groups) {
    if (spec.log_x || spec.log_y)
        throw std::invalid_argument("bar charts are linear only");
    double lo = 0.0, hi = 0.0; // always spans zero so bars have a baseline
    for (const BarGroup &g : groups) {
        if (g.values.size() != bar_names.size())
            throw std::invalid_argument("bar group size mismatch: " + g.label);
        for (double v : g.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const AxisRange yr = padded(lo, hi);
    Frame frame(spec, AxisRange{0.0, 1.0}, yr);

    std::ostringstream out;
    frame.open(out);
    const double plot_w = spec.width - kMarginLeft - kMarginRight;
    const double plot_h = spec.height - kMarginTop - kMarginBottom;
    const double x0 = kMarginLeft, x1 = kMarginLeft + plot_w;
    const double y1 = kMarginTop + plot_h;

    const std::vector<double> yt = linear_ticks(yr, 6);
    out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double t : yt)
        out << "<line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(frame.py(t)) << "\" x2=\""
            << fmt_px(x1) << "\" y2=\"" << fmt_px(frame.py(t)) << "\"/>\n";
    out << "</g>\n";
    out << "<rect x=\"" << fmt_px(x0) << "\" y=\"" << fmt_px(kMarginTop) << "\" width=\""
        << fmt_px(plot_w) << "\" height=\"" << fmt_px(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<g font-family=\"monospace\" font-size=\"10\">\n";
    for (double t : yt)
        out << "<text x=\"" << fmt_px(x0 - 6.0) << "\" y=\"" << fmt_px(frame.py(t) + 3.0)
            << "\" text-anchor=\"end\">" << fmt_num(t) << "</text>\n";
    out << "</g>\n";
    out << "<text x=\"14\" y=\"" << fmt_px(kMarginTop + plot_h / 2.0)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" "
        << "transform=\"rotate(-90 14 " << fmt_px(kMarginTop + plot_h / 2.0) << ")\">"
        << xml_escape(spec.y_label) << "</text>\n";

    const std::size_t ng = groups.size();
    const std::size_t nb = bar_names.size();
    if (ng > 0 && nb > 0) {
        const double group_w = 1.0 / static_cast<double>(ng);
        const double bar_w = group_w * 0.8 / static_cast<double>(nb);
        for (std::size_t g = 0; g < ng; ++g) {
            for (std::size_t b = 0; b < nb; ++b) {
                const double left = static_cast<double>(g) * group_w + 0.1 * group_w +
                                    static_cast<double>(b) * bar_w;
                const double v = groups[g].values[b];
                const double top = frame.py(std::max(0.0, v));
                const double height = std::abs(frame.py(v) - frame.py(0.0));
                out << "<rect x=\"" << fmt_px(frame.px(left)) << "\" y=\"" << fmt_px(top)
                    << "\" width=\"" << fmt_px(bar_w * plot_w) << "\" height=\""
                    << fmt_px(height) << "\" fill=\"" << kPalette[b % kPaletteSize]
                    << "\"/>\n";
            }
            out << "<text x=\"" << fmt_px(frame.px((g + 0.5) * group_w)) << "\" y=\""
                << fmt_px(y1 + 14.0)
                << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">"
                << xml_escape(groups[g].label) << "</text>\n";
        }
        out << "<line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(frame.py(0.0)) << "\" x2=\""
            << fmt_px(x1) << "\" y2=\"" << fmt_px(frame.py(0.0))
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    out << "<text x=\"" << fmt_px(x0 + plot_w / 2.0) << "\" y=\"" << fmt_px(y1 + 34.0)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << xml_escape(spec.x_label) << "</text>\n";
    frame.legend(out, bar_names);

    std::ostringstream csv;
    csv.precision(17);
    csv << "group,name,value\n";
    for (const BarGroup &g : groups)
        for (std::size_t b = 0; b < nb; ++b)
            csv << csv_escape(g.label) << ',' << csv_escape(bar_names[b]) << ','
                << g.values[b] << '\n';
    embed_data(out, csv.str());
    out << "</svg>\n";
    return out.str();
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_text_file(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open for write: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string csv_escape(const std::string &field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

} // namespace ntklens
