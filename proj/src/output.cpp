#include "eqobs/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "eqobs/serialization.hpp"

namespace eqobs {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;
constexpr std::size_t kMaxPolylinePoints = 3000;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void pad() {
    if (!(x1 > x0)) { x0 -= 1.0; x1 += 1.0; }
    if (!(y1 > y0)) { y0 -= 1.0; y1 += 1.0; }
    const double px = 0.05 * (x1 - x0);
    const double py = 0.05 * (y1 - y0);
    x0 -= px; x1 += px; y0 -= py; y1 += py;
  }
};

struct Frame {
  Bounds b;
  double sx(double x) const { return kMargin + (x - b.x0) / (b.x1 - b.x0) * (kWidth - 2 * kMargin); }
  double sy(double y) const {
    return kHeight - kMargin - (y - b.y0) / (b.y1 - b.y0) * (kHeight - 2 * kMargin);
  }
};

using Path = std::vector<std::pair<double, double>>;

std::string polyline(const Frame& f, const Path& path, const char* color) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  const std::size_t stride = std::max<std::size_t>(1, path.size() / kMaxPolylinePoints);
  for (std::size_t i = 0; i < path.size(); i += stride) {
    os << fmt3(f.sx(path[i].first)) << ',' << fmt3(f.sy(path[i].second)) << ' ';
  }
  os << fmt3(f.sx(path.back().first)) << ',' << fmt3(f.sy(path.back().second));
  os << "\"/>\n";
  return os.str();
}

std::string star(double cx, double cy, double r, const char* color) {
  std::ostringstream os;
  os << "<polygon fill=\"" << color << "\" points=\"";
  for (int k = 0; k < 10; ++k) {
    const double rad = (k % 2 == 0) ? r : 0.4 * r;
    const double ang = -M_PI / 2 + k * M_PI / 5;
    os << fmt3(cx + rad * std::cos(ang)) << ',' << fmt3(cy + rad * std::sin(ang)) << ' ';
  }
  os << "\"/>\n";
  return os.str();
}

std::string circle(double cx, double cy, double r, const char* color) {
  return "<circle cx=\"" + fmt3(cx) + "\" cy=\"" + fmt3(cy) + "\" r=\"" + fmt3(r) +
         "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream os;
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
     << "\" height=\"" << kHeight - 2 * kMargin
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.b.x0 + i * (f.b.x1 - f.b.x0) / 4;
    const double yv = f.b.y0 + i * (f.b.y1 - f.b.y0) / 4;
    os << "<text x=\"" << fmt3(f.sx(xv)) << "\" y=\"" << kHeight - kMargin + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt3(xv) << "</text>\n";
    os << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt3(f.sy(yv) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt3(yv) << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"15\" y=\"" << kHeight / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 15 " << kHeight / 2 << ")\">" << ylabel << "</text>\n";
  return os.str();
}

std::string svg_open() {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

void require_records(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw Error("no records to write");
}

}  // namespace

std::vector<std::string> csv_header(int n, int d) {
  std::vector<std::string> h{"t"};
  for (const char* prefix : {"true", "est"}) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        h.push_back(std::string(prefix) + "_P_" + std::to_string(r) + std::to_string(c));
      }
    }
    for (int i = 0; i < d; ++i) h.push_back(std::string(prefix) + "_V_" + std::to_string(i));
  }
  for (const char* name :
       {"lyapunov", "lyapunov_rate", "err_A_norm", "err_a_norm", "residual_true",
        "residual_observer", "residual_lifted", "lift_deviation", "A_norm", "A_inv_norm"}) {
    h.emplace_back(name);
  }
  return h;
}

void write_csv(const std::vector<TrajectoryRecord>& records, const fs::path& path) {
  require_records(records);
  const int n = static_cast<int>(records.front().true_P.rows());
  const int d = static_cast<int>(records.front().true_V.size());
  std::ofstream out = open_for_write(path);
  const auto header = csv_header(n, d);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : records) {
    std::string line = fmt17(r.t);
    auto put = [&line](double v) {
      line += ',';
      line += fmt17(v);
    };
    for (int i = 0; i < n; ++i) for (int j = 0; j < n; ++j) put(r.true_P(i, j));
    for (int i = 0; i < d; ++i) put(r.true_V[i]);
    for (int i = 0; i < n; ++i) for (int j = 0; j < n; ++j) put(r.est_P(i, j));
    for (int i = 0; i < d; ++i) put(r.est_V[i]);
    for (double v : {r.lyapunov, r.lyapunov_rate, r.err_A_norm, r.err_a_norm, r.residual_true,
                     r.residual_observer, r.residual_lifted, r.lift_deviation, r.A_norm,
                     r.A_inv_norm}) {
      put(v);
    }
    out << line << '\n';
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty csv '" + path.string() + "'");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != table.header.size()) throw Error("ragged csv row in '" + path.string() + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_trajectory_svg(const std::vector<TrajectoryRecord>& records, const fs::path& path) {
  require_records(records);
  const auto n = records.front().true_P.rows();
  Path truth, est;
  Frame f;
  for (const auto& r : records) {
    truth.emplace_back(r.true_P(0, n - 1), r.true_P(1, n - 1));
    est.emplace_back(r.est_P(0, n - 1), r.est_P(1, n - 1));
    f.b.add(truth.back().first, truth.back().second);
    f.b.add(est.back().first, est.back().second);
  }
  f.b.pad();
  // Equal aspect ratio.
  const double sx = (f.b.x1 - f.b.x0) / (kWidth - 2 * kMargin);
  const double sy = (f.b.y1 - f.b.y0) / (kHeight - 2 * kMargin);
  if (sx > sy) {
    const double extra = (sx * (kHeight - 2 * kMargin) - (f.b.y1 - f.b.y0)) / 2;
    f.b.y0 -= extra;
    f.b.y1 += extra;
  } else {
    const double extra = (sy * (kWidth - 2 * kMargin) - (f.b.x1 - f.b.x0)) / 2;
    f.b.x0 -= extra;
    f.b.x1 += extra;
  }

  std::ofstream out = open_for_write(path);
  out << svg_open() << axes(f, "x", "y");
  out << polyline(f, truth, "blue") << polyline(f, est, "red");
  for (const auto* p : {&truth, &est}) {
    const char* color = p == &truth ? "blue" : "red";
    out << star(f.sx(p->front().first), f.sy(p->front().second), 9.0, color);
    out << circle(f.sx(p->back().first), f.sy(p->back().second), 6.0, color);
  }
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin - 20
      << "\" font-size=\"12\" text-anchor=\"end\"><tspan fill=\"blue\">true</tspan> / "
         "<tspan fill=\"red\">estimate</tspan></text>\n";
  out << "</svg>\n";
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_lyapunov_svg(const std::vector<TrajectoryRecord>& records, const fs::path& path) {
  require_records(records);
  Path curve;
  Frame f;
  for (const auto& r : records) {
    if (!(r.lyapunov > 0.0)) continue;
    curve.emplace_back(r.t, std::log10(r.lyapunov));
    f.b.add(curve.back().first, curve.back().second);
  }
  if (curve.empty()) {
    curve.emplace_back(records.front().t, 0.0);
    f.b.add(records.front().t, 0.0);
  }
  f.b.pad();
  std::ofstream out = open_for_write(path);
  out << svg_open() << axes(f, "t [s]", "log10 L");
  out << polyline(f, curve, "black");
  out << "</svg>\n";
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_summary_json(const ScenarioSummary& s, const fs::path& path,
                        const std::string& config_hash) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j{{"records", s.records},
         {"initial_lyapunov", s.initial_lyapunov},
         {"final_lyapunov", s.final_lyapunov},
         {"final_err_A_norm", s.final_err_A_norm},
         {"final_err_a_norm", s.final_err_a_norm},
         {"max_lyapunov_rate", finite_or_null(s.max_lyapunov_rate)},
         {"max_constraint_residual", s.max_constraint_residual},
         {"max_lift_deviation", s.max_lift_deviation},
         {"log_lyapunov_slope", finite_or_null(s.log_lyapunov_slope)}};
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<fs::path> emit_outputs(const std::vector<TrajectoryRecord>& records,
                                   const fs::path& out_dir, const std::string& config_hash) {
  require_records(records);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<fs::path> written{out_dir / "trajectory.csv", out_dir / "trajectory.svg",
                                out_dir / "lyapunov.svg", out_dir / "summary.json"};
  write_csv(records, written[0]);
  write_trajectory_svg(records, written[1]);
  write_lyapunov_svg(records, written[2]);
  write_summary_json(summarize(records), written[3], config_hash);
  return written;
}

}  // namespace eqobs
