#include "ramulus/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ramulus {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

struct Frame {
  double x0, y0, scale, offset_x, offset_y;
  double px(const Point& p) const { return offset_x + (p[0] - x0) * scale; }
  double py(const Point& p) const { return offset_y - ((p.size() > 1 ? p[1] : 0.0) - y0) * scale; }
};

// Draws one chain into the square [ox, ox + size] x [0, size].
std::string panel(const PolyChain& chain, double ox, const SvgOptions& opt, bool& projected) {
  if (chain.vertex_count() == 0) return {};
  if (chain.dim() != 2) projected = true;
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
  for (const auto& v : chain.vertices()) {
    const double y = v.size() > 1 ? v[1] : 0.0;
    lo_x = std::min(lo_x, v[0]);
    hi_x = std::max(hi_x, v[0]);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double margin = 0.08 * opt.size;
  const double scale = (opt.size - 2 * margin) / span;
  const Frame f{lo_x, lo_y, scale, ox + margin + 0.5 * (span - (hi_x - lo_x)) * scale,
                opt.size - margin - 0.5 * (span - (hi_y - lo_y)) * scale};

  double wmax = 0.0;
  for (const auto& e : chain.edges()) wmax = std::max(wmax, std::pow(std::abs(e.multiplicity), opt.alpha));
  std::string out;
  const PolyChain oriented = chain.oriented();
  for (const auto& e : oriented.edges()) {
    const Point& a = chain.vertex(e.tail);
    const Point& b = chain.vertex(e.head);
    const double w = 1.0 + 5.0 * std::pow(e.multiplicity, opt.alpha) / std::max(wmax, 1e-300);
    out += "<line x1=\"" + fmt(f.px(a)) + "\" y1=\"" + fmt(f.py(a)) + "\" x2=\"" + fmt(f.px(b)) + "\" y2=\"" +
           fmt(f.py(b)) + "\" stroke=\"#1f4e79\" stroke-width=\"" + fmt(w) + "\" marker-end=\"url(#arrow)\"/>\n";
  }
  const AtomicMeasure bd = boundary(chain);
  for (const auto& atom : bd.atoms()) {
    const bool sink = atom.weight > 0;
    out += "<circle cx=\"" + fmt(f.px(atom.position)) + "\" cy=\"" + fmt(f.py(atom.position)) +
           "\" r=\"5\" stroke=\"#b03a2e\" stroke-width=\"1.5\" fill=\"" + (sink ? "#b03a2e" : "white") + "\"/>\n";
  }
  return out;
}

const char* kHeader =
    "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"4\" markerHeight=\"4\" "
    "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#1f4e79\"/></marker></defs>\n";

std::string open_svg(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n" + kHeader;
}

}  // namespace

SvgImage chain_svg(const PolyChain& chain, const SvgOptions& options) {
  SvgImage img;
  img.text = open_svg(options.size, options.size) + panel(chain, 0.0, options, img.projected) + "</svg>\n";
  return img;
}

SvgImage contact_sheet(const std::vector<std::pair<std::string, PolyChain>>& panels, const SvgOptions& options) {
  SvgImage img;
  const double w = options.size * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  img.text = open_svg(w, options.size + 24);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double ox = options.size * static_cast<double>(i);
    img.text += "<text x=\"" + fmt(ox + 8) + "\" y=\"" + fmt(options.size + 18) +
                "\" font-family=\"monospace\" font-size=\"14\">" + escape(panels[i].first) + "</text>\n";
    img.text += panel(panels[i].second, ox, options, img.projected);
  }
  img.text += "</svg>\n";
  return img;
}

}  // namespace ramulus
