#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"
#include "cbt/graph.hpp"

namespace cbt {

// Minimal SVG 1.1 document builder for debug overlays. Coordinates are
// pixels with the image convention (origin top-left, y down), which is also
// SVG's.
class SvgDocument {
 public:
  SvgDocument(int width, int height) : width_(width), height_(height) {}

  void begin_group(const std::string& id) { body_ << "<g id=\"" << id << "\">\n"; }
  void end_group() { body_ << "</g>\n"; }

  void line(Point2 a, Point2 b, const std::string& stroke, double width, const std::string& extra = "") {
    body_ << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y << "\" stroke=\""
          << stroke << "\" stroke-width=\"" << width << "\"" << (extra.empty() ? "" : " " + extra) << "/>\n";
  }

  void polygon(const Polygon& p, const std::string& stroke, double width, const std::string& extra = "") {
    body_ << "<polygon points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) body_ << (i ? " " : "") << p[i].x << ',' << p[i].y;
    body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\""
          << (extra.empty() ? "" : " " + extra) << "/>\n";
  }

  void circle(Point2 c, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << c.x << "\" cy=\"" << c.y << "\" r=\"" << r << "\" fill=\"" << fill << "\"/>\n";
  }

  /// Detected edges red, generated edges blue.
  void graph(const BoundaryGraph& g) {
    begin_group("graph");
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      const LineSegment s = g.segment(id);
      if (s.kind == SegmentKind::Detected) {
        line(s.a, s.b, "red", 2.0);
      } else {
        line(s.a, s.b, "blue", 1.0);
      }
    }
    for (const Point2& v : g.vertices()) circle(v, 1.5, "black");
    end_group();
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_ << "\" height=\"" << height_
        << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << str();
  }

 private:
  int width_;
  int height_;
  std::ostringstream body_;
};

}  // namespace cbt
