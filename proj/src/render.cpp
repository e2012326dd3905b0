#include "ngon/render.hpp"

#include "ngon/election.hpp"
#include "ngon/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

namespace ngon {

namespace {

struct Viewport {
  double min_x = 0, min_y = 0, scale = 1;
  double size = 640;
  double margin = 40;

  double x(double wx) const { return margin + (wx - min_x) * scale; }
  double y(double wy) const { return size - margin - (wy - min_y) * scale; }
  double len(double w) const { return w * scale; }
};

Viewport fit_viewport(const Trace& trace) {
  double lo_x = trace.initial[0].x(), hi_x = lo_x;
  double lo_y = trace.initial[0].y(), hi_y = lo_y;
  const auto extend = [&](const PointSeqd& pts) {
    for (const Vec2d& p : pts) {
      lo_x = std::min(lo_x, p.x());
      hi_x = std::max(hi_x, p.x());
      lo_y = std::min(lo_y, p.y());
      hi_y = std::max(hi_y, p.y());
    }
  };
  extend(trace.initial);
  for (const RoundRecord& rec : trace.rounds) extend(rec.after);
  // Leave room for enclosing circles that bulge past the point cloud.
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
  const double pad = 0.35 * span;
  lo_x -= pad;
  lo_y -= pad;
  const double full = span + 2 * pad;

  Viewport v;
  v.min_x = lo_x;
  v.min_y = lo_y;
  v.scale = (v.size - 2 * v.margin) / full;
  return v;
}

void draw_circle_outline(std::ostringstream& svg, const Viewport& v, const Circled& c,
                         const char* cls) {
  svg << "  <circle class=\"" << cls << "\" cx=\"" << v.x(c.center.x()) << "\" cy=\""
      << v.y(c.center.y()) << "\" r=\"" << v.len(c.radius) << "\" fill=\"none\"/>\n";
}

void draw_frame(std::ostringstream& svg, const Trace& trace, const PointSeqd& pts, int round,
                Phase phase) {
  const Toleranced& tol = trace.params.tol;
  const int n = trace.params.n;
  const Viewport v = fit_viewport(trace);

  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << v.size << "\" height=\""
      << v.size << "\" viewBox=\"0 0 " << v.size << " " << v.size << "\">\n";
  svg << "  <!-- round " << round << " phase " << to_string(phase) << " -->\n";
  svg << "  <style>\n"
         "    .sec { stroke: #9aa7b1; stroke-dasharray: 6 4; stroke-width: 1; }\n"
         "    .boundary { stroke: #5b7c99; stroke-width: 1.5; }\n"
         "    .final-position { stroke: #c98f2d; stroke-width: 1.5; }\n"
         "    .robot { fill: #20445f; }\n"
         "    .robot.interior { fill: #b33a3a; }\n"
         "    .robot.leader { fill: #2d7d46; }\n"
         "    text { font: 12px sans-serif; fill: #444; }\n"
         "  </style>\n";
  svg << "  <text x=\"" << v.margin << "\" y=\"" << v.margin - 16 << "\">round " << round
      << " \xc2\xb7 " << to_string(phase) << "</text>\n";

  std::optional<Circled> shown_circle;
  std::optional<PointSeqd> slots;
  std::optional<size_t> interior;
  std::optional<size_t> leader;

  try {
    switch (phase) {
      case Phase::Arbitrary: {
        shown_circle = smallest_enclosing_circle(pts);
        draw_circle_outline(svg, v, *shown_circle, "sec");
        break;
      }
      case Phase::OnCircle: {
        const auto fit = fit_common_circle(pts, tol);
        if (fit) {
          shown_circle = *fit;
          draw_circle_outline(svg, v, *fit, "boundary");
        }
        if (n >= 5) {
          const auto cc = make_circle_configuration(pts, tol, true);
          const Vec2d led = elect_on_circle(cc, tol);
          for (size_t i = 0; i < pts.size(); ++i) {
            if (points_equal(pts[i], led)) leader = i;
          }
        } else if (n == 3) {
          const auto t = analyze_triangle(pts, tol);
          if (t.kind != TriangleKind::Equilateral) leader = static_cast<size_t>(t.leader);
        }
        break;
      }
      case Phase::Oriented: {
        const OrientedViewd view = make_oriented_view(pts, tol);
        shown_circle = view.circle;
        draw_circle_outline(svg, v, view.circle, "boundary");
        slots = view.final_positions;
        interior = static_cast<size_t>(view.interior_index);
        break;
      }
      case Phase::NGon: {
        if (n >= 3) {
          const auto fit = fit_common_circle(pts, tol);
          if (fit) {
            shown_circle = *fit;
            draw_circle_outline(svg, v, *fit, "boundary");
          }
        }
        break;
      }
    }
  } catch (const Error&) {
    // Annotation is best effort; the frame still shows the plain robots.
  }

  if (slots) {
    for (const Vec2d& s : *slots) {
      svg << "  <circle class=\"final-position\" cx=\"" << v.x(s.x()) << "\" cy=\""
          << v.y(s.y()) << "\" r=\"7\" fill=\"none\"/>\n";
    }
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    const char* cls = "robot";
    if (interior && *interior == i) cls = "robot interior";
    if (leader && *leader == i) cls = "robot leader";
    svg << "  <circle class=\"" << cls << "\" cx=\"" << v.x(pts[i].x()) << "\" cy=\""
        << v.y(pts[i].y()) << "\" r=\"4\"/>\n";
  }
  svg << "</svg>\n";
}

}  // namespace

int render_trace(const Trace& trace, const std::filesystem::path& out_dir, int every) {
  if (every < 1) throw PreconditionError("render_trace: every must be at least 1");
  std::filesystem::create_directories(out_dir);

  struct FrameJob {
    const PointSeqd* pts;
    int round;
    Phase phase;
  };
  std::vector<FrameJob> jobs;
  if (trace.rounds.empty()) {
    const Phase phase = classify(trace.initial, trace.params.n, trace.params.tol);
    jobs.push_back({&trace.initial, 0, phase});
  } else {
    for (size_t i = 0; i < trace.rounds.size(); ++i) {
      const bool keep = (i % static_cast<size_t>(every) == 0) || (i + 1 == trace.rounds.size());
      if (!keep) continue;
      const RoundRecord& rec = trace.rounds[i];
      jobs.push_back({&rec.after, rec.round, rec.phase});
    }
  }

  int written = 0;
  for (const FrameJob& job : jobs) {
    std::ostringstream svg;
    draw_frame(svg, trace, *job.pts, job.round, job.phase);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06d.svg", job.round);
    write_text_atomic(out_dir / name, svg.str());
    ++written;
  }
  return written;
}

}  // namespace ngon
