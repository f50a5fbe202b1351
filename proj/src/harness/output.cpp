#include "smoothlab/harness/output.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace smoothlab::harness {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double v) {
  rows_.back().push_back(format_number(v));
  return *this;
}

CsvTable& CsvTable::add(std::int64_t v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable& CsvTable::add(std::uint64_t v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable& CsvTable::add(bool v) {
  rows_.back().push_back(v ? "1" : "0");
  return *this;
}

CsvTable& CsvTable::add(std::string_view v) {
  std::string cell(v);
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    cell = quoted + "\"";
  }
  rows_.back().push_back(std::move(cell));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string render_svg(const std::vector<SvgPanel>& panels, std::string_view x_label, std::string_view y_label) {
  const double pw = 320.0, ph = 260.0, ml = 60.0, mr = 15.0, mt = 30.0, mb = 45.0;
  const double legend_h = 20.0;
  const double width = std::max<std::size_t>(1, panels.size()) * pw;
  std::ostringstream os;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::size_t nseries = 0;
  for (const auto& p : panels) {
    nseries = std::max(nseries, p.series.size());
    for (const auto& s : p.series) {
      for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
      for (double v : s.y) {
        if (std::isfinite(v)) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
      }
    }
  }
  if (!(xmin < xmax)) xmin = 0.0, xmax = 1.0;
  if (!(ymin < ymax)) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double height = ph + legend_h * static_cast<double>((nseries + 3) / 4);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
     << format_number(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const double x0 = static_cast<double>(k) * pw + ml;
    const double y0 = mt;
    const double w = pw - ml - mr;
    const double h = ph - mt - mb;
    auto sx = [&](double v) { return x0 + (v - xmin) / (xmax - xmin) * w; };
    auto sy = [&](double v) { return y0 + (ymax - v) / (ymax - ymin) * h; };

    os << "<g>\n<text x=\"" << format_number(x0 + w / 2) << "\" y=\"18\" text-anchor=\"middle\">"
       << escape_xml(p.title) << "</text>\n";
    os << "<rect x=\"" << format_number(x0) << "\" y=\"" << format_number(y0) << "\" width=\"" << format_number(w)
       << "\" height=\"" << format_number(h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (ymin < 0.0 && ymax > 0.0) {
      os << "<line x1=\"" << format_number(x0) << "\" x2=\"" << format_number(x0 + w) << "\" y1=\""
         << format_number(sy(0.0)) << "\" y2=\"" << format_number(sy(0.0)) << "\" stroke=\"#bbbbbb\"/>\n";
    }
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + (xmax - xmin) * t / 4.0;
      const double yv = ymin + (ymax - ymin) * t / 4.0;
      os << "<text x=\"" << format_number(sx(xv)) << "\" y=\"" << format_number(y0 + h + 14)
         << "\" text-anchor=\"middle\">" << format_number(std::round(xv * 1000) / 1000) << "</text>\n";
      os << "<text x=\"" << format_number(x0 - 4) << "\" y=\"" << format_number(sy(yv) + 4)
         << "\" text-anchor=\"end\">" << format_number(std::round(yv * 10000) / 10000) << "</text>\n";
    }
    os << "<text x=\"" << format_number(x0 + w / 2) << "\" y=\"" << format_number(y0 + h + 32)
       << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
    if (k == 0) {
      os << "<text transform=\"translate(14," << format_number(y0 + h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
         << escape_xml(y_label) << "</text>\n";
    }
    for (std::size_t s = 0; s < p.series.size(); ++s) {
      const auto& ser = p.series[s];
      os << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 10] << "\" stroke-width=\"1.5\"";
      if (ser.dashed) os << " stroke-dasharray=\"5,3\"";
      os << " points=\"";
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (!std::isfinite(ser.y[i])) continue;
        os << format_number(sx(ser.x[i])) << ',' << format_number(sy(ser.y[i])) << ' ';
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }

  if (!panels.empty()) {
    for (std::size_t s = 0; s < panels.front().series.size(); ++s) {
      const double lx = 10.0 + static_cast<double>(s % 4) * 120.0;
      const double ly = ph + 5.0 + legend_h * static_cast<double>(s / 4);
      os << "<line x1=\"" << format_number(lx) << "\" x2=\"" << format_number(lx + 20) << "\" y1=\""
         << format_number(ly) << "\" y2=\"" << format_number(ly) << "\" stroke=\"" << kPalette[s % 10]
         << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << format_number(lx + 25) << "\" y=\"" << format_number(ly + 4) << "\">"
         << escape_xml(panels.front().series[s].label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n));
  if (jobs == 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return errors;
}

}  // namespace smoothlab::harness
