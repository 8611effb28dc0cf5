#include "filippov/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "filippov/errors.hpp"
#include "filippov/report.hpp"

namespace filippov {

namespace {

// ---------------------------------------------------------------------------
// parsing helpers

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // locate the failing byte; nlohmann reports a 1-based offset
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto k = what.find(": "); k != std::string::npos) what = what.substr(k + 2);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) what = "empty document";
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw SchemaError("field '" + path + "': " + msg);
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema(path, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) schema(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

const Json& need(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) schema(path.empty() ? key : path + "." + key, "missing");
  return j.at(key);
}

std::string sub(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
std::string idx(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "not finite");
  return v;
}

std::string string_of(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

std::uint64_t unsigned_of(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    schema(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

Vec2 point_of(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema(path, "expected [x, y]");
  return {number(j[0], idx(path, 0)), number(j[1], idx(path, 1))};
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], idx(path, k)));
  return out;
}

Poly2 poly_of(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected a list of [i, j, coeff] triples");
  std::vector<Monomial<double>> terms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& t = j[k];
    const std::string p = idx(path, k);
    if (!t.is_array() || t.size() != 3) schema(p, "expected [i, j, coeff]");
    for (int e = 0; e < 2; ++e)
      if (!t[e].is_number_integer() || t[e].get<std::int64_t>() < 0 || t[e].get<std::int64_t>() > 64)
        schema(idx(p, e), "exponent must be an integer in [0, 64]");
    terms.push_back({t[0].get<int>(), t[1].get<int>(), number(t[2], idx(p, 2))});
  }
  return Poly2(terms);
}

PolyField field_of(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema(path, "expected [poly, poly]");
  return {poly_of(j[0], idx(path, 0)), poly_of(j[1], idx(path, 1))};
}

Box box_of(const Json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 4) schema(path, "expected [xmin, xmax, ymin, ymax]");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) schema(path, "empty box");
  return {v[0], v[1], v[2], v[3]};
}

SigmaChart chart_of(const Json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected a chart object");
  const std::string kind = string_of(need(j, path, "kind"), sub(path, "kind"));
  SigmaChart c;
  if (kind == "vertical-line") {
    only_keys(j, path, {"kind", "x0", "alpha", "beta"});
    c.kind = ChartKind::VerticalLine;
    c.x0 = number(need(j, path, "x0"), sub(path, "x0"));
  } else if (kind == "circle") {
    only_keys(j, path, {"kind", "center", "radius", "alpha", "beta"});
    c.kind = ChartKind::Circle;
    c.center = point_of(need(j, path, "center"), sub(path, "center"));
    c.radius = number(need(j, path, "radius"), sub(path, "radius"));
    if (!(c.radius > 0)) schema(sub(path, "radius"), "must be positive");
  } else if (kind == "explicit-parametric") {
    only_keys(j, path, {"kind", "px", "py", "alpha", "beta"});
    c.kind = ChartKind::ExplicitParametric;
    c.px = numbers(need(j, path, "px"), sub(path, "px"));
    c.py = numbers(need(j, path, "py"), sub(path, "py"));
    if (c.px.empty() || c.py.empty()) schema(path, "empty parametrization");
  } else {
    schema(sub(path, "kind"), "unknown chart kind '" + kind + "'");
  }
  c.alpha = number(need(j, path, "alpha"), sub(path, "alpha"));
  c.beta = number(need(j, path, "beta"), sub(path, "beta"));
  if (!(c.alpha < c.beta)) schema(path, "alpha must be below beta");
  return c;
}

PiecewiseSystem system_of(const Json& j) {
  only_keys(j, "", {"name", "description", "f", "X", "Y", "K", "sigma", "scenario"});
  const Poly2 f = poly_of(need(j, "", "f"), "f");
  if (f.is_zero()) schema("f", "switching function is identically zero");
  const PolyField X = field_of(need(j, "", "X"), "X");
  const PolyField Y = field_of(need(j, "", "Y"), "Y");
  const Box K = box_of(need(j, "", "K"), "K");
  const Json& s = need(j, "", "sigma");
  std::vector<SigmaChart> charts;
  if (s.is_array()) {
    if (s.empty()) schema("sigma", "no charts");
    for (std::size_t k = 0; k < s.size(); ++k) charts.push_back(chart_of(s[k], idx("sigma", k)));
  } else {
    charts.push_back(chart_of(s, "sigma"));
  }
  PiecewiseSystem sys(SwitchingCurve(f, charts), X, Y, K);
  if (j.contains("name")) sys.name = string_of(j["name"], "name");
  return sys;
}

// ---------------------------------------------------------------------------
// emission helpers

Json poly_json(const Poly2& p) {
  Json a = Json::array();
  for (const auto& t : p.terms()) a.push_back(Json::array({t.i, t.j, t.c}));
  return a;
}

Json chart_json(const SigmaChart& c) {
  Json o = Json::object();
  o["kind"] = to_string(c.kind);
  switch (c.kind) {
    case ChartKind::VerticalLine: o["x0"] = c.x0; break;
    case ChartKind::Circle:
      o["center"] = Json::array({c.center.x, c.center.y});
      o["radius"] = c.radius;
      break;
    case ChartKind::ExplicitParametric:
      o["px"] = c.px;
      o["py"] = c.py;
      break;
  }
  o["alpha"] = c.alpha;
  o["beta"] = c.beta;
  return o;
}

Json system_json(const PiecewiseSystem& sys, const std::string& description) {
  Json o = Json::object();
  if (!sys.name.empty()) o["name"] = sys.name;
  if (!description.empty()) o["description"] = description;
  o["f"] = poly_json(sys.curve().f());
  o["X"] = Json::array({poly_json(sys.X().u), poly_json(sys.X().v)});
  o["Y"] = Json::array({poly_json(sys.Y().u), poly_json(sys.Y().v)});
  const Box& K = sys.K();
  o["K"] = Json::array({K.xmin, K.xmax, K.ymin, K.ymax});
  if (sys.curve().chart_count() == 1) {
    o["sigma"] = chart_json(sys.curve().chart(0));
  } else {
    Json a = Json::array();
    for (const auto& c : sys.curve().charts()) a.push_back(chart_json(c));
    o["sigma"] = a;
  }
  return o;
}

bool flat(const Json& j) {
  if (j.is_object()) return false;
  if (j.is_array())
    for (const auto& e : j)
      if (!flat(e)) return false;
  return true;
}

// Indented like dump(2), but short arrays of scalars stay on one line.
void pretty(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  if (j.is_array() && !j.empty() && !(flat(j) && j.dump().size() <= 72)) {
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += pad + "  ";
      pretty(j[k], indent + 2, out);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
  } else if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++k) {
      out += pad + "  " + Json(it.key()).dump() + ": ";
      pretty(it.value(), indent + 2, out);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "}";
  } else {
    std::string s = j.dump();
    // keep the one-line form readable: "[1.0,2.0]" -> "[1.0, 2.0]"
    if (j.is_array()) {
      std::string t;
      bool in_str = false;
      for (char c : s) {
        if (c == '"') in_str = !in_str;
        t += c;
        if (c == ',' && !in_str) t += ' ';
      }
      s = t;
    }
    out += s;
  }
}

}  // namespace

std::string render_json(const Json& j) {
  std::string out;
  pretty(j, 0, out);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// files

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

PiecewiseSystem parse_system(const std::string& text, const std::string& origin) {
  return system_of(parse_json(text, origin));
}

PiecewiseSystem load_system(const std::string& path) { return parse_system(read_text(path), path); }

std::string dump_system(const PiecewiseSystem& sys) { return render_json(system_json(sys, "")); }

void save_system(const PiecewiseSystem& sys, const std::string& path) {
  write_text(path, dump_system(sys));
}

// ---------------------------------------------------------------------------
// scenarios

ScenarioSpec parse_scenario(const std::string& text, const std::string& origin) {
  const Json j = parse_json(text, origin);
  ScenarioSpec spec;
  spec.system = system_of(j);
  spec.name = spec.system.name;
  if (j.contains("description")) spec.description = string_of(j["description"], "description");
  if (!j.contains("scenario")) return spec;
  const Json& sc = j["scenario"];
  only_keys(sc, "scenario", {"runs", "minimality"});
  if (sc.contains("runs")) {
    const Json& runs = sc["runs"];
    if (!runs.is_array()) schema("scenario.runs", "expected a list");
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const Json& r = runs[k];
      const std::string p = idx("scenario.runs", k);
      only_keys(r, p, {"label", "p0", "t_budget", "policy", "seed", "expect", "expect_point"});
      RunSpec run;
      run.label = string_of(need(r, p, "label"), sub(p, "label"));
      run.p0 = point_of(need(r, p, "p0"), sub(p, "p0"));
      run.t_budget = number(need(r, p, "t_budget"), sub(p, "t_budget"));
      if (!(run.t_budget > 0)) schema(sub(p, "t_budget"), "must be positive");
      run.policy = string_of(need(r, p, "policy"), sub(p, "policy"));
      if (r.contains("seed")) run.seed = unsigned_of(r["seed"], sub(p, "seed"));
      if (r.contains("expect")) run.expect = string_of(r["expect"], sub(p, "expect"));
      if (r.contains("expect_point")) run.expect_point = point_of(r["expect_point"], sub(p, "expect_point"));
      spec.runs.push_back(run);
    }
  }
  if (sc.contains("minimality")) {
    const Json& m = sc["minimality"];
    const std::string p = "scenario.minimality";
    only_keys(m, p, {"hub", "region", "outer", "hole", "samples", "seed"});
    MinimalitySpec ms;
    ms.hub = point_of(need(m, p, "hub"), sub(p, "hub"));
    ms.region = string_of(need(m, p, "region"), sub(p, "region"));
    if (ms.region != "lambda" && ms.region != "circuit")
      schema(sub(p, "region"), "expected \"lambda\" or \"circuit\"");
    if (m.contains("outer")) ms.outer = string_of(m["outer"], sub(p, "outer"));
    if (m.contains("hole")) ms.hole = string_of(m["hole"], sub(p, "hole"));
    if (ms.region == "circuit" && ms.outer.empty()) schema(sub(p, "outer"), "circuit needs a script");
    if (m.contains("samples")) ms.samples = unsigned_of(m["samples"], sub(p, "samples"));
    if (m.contains("seed")) ms.seed = unsigned_of(m["seed"], sub(p, "seed"));
    spec.minimality = ms;
  }
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) { return parse_scenario(read_text(path), path); }

std::string dump_scenario(const ScenarioSpec& spec) {
  PiecewiseSystem sys = spec.system;
  sys.name = spec.name;
  Json o = system_json(sys, spec.description);
  Json sc = Json::object();
  if (!spec.runs.empty()) {
    Json runs = Json::array();
    for (const auto& r : spec.runs) {
      Json jr = Json::object();
      jr["label"] = r.label;
      jr["p0"] = Json::array({r.p0.x, r.p0.y});
      jr["t_budget"] = r.t_budget;
      jr["policy"] = r.policy;
      jr["seed"] = r.seed;
      if (!r.expect.empty()) jr["expect"] = r.expect;
      if (r.expect_point) jr["expect_point"] = Json::array({r.expect_point->x, r.expect_point->y});
      runs.push_back(jr);
    }
    sc["runs"] = runs;
  }
  if (spec.minimality) {
    const auto& m = *spec.minimality;
    Json jm = Json::object();
    jm["hub"] = Json::array({m.hub.x, m.hub.y});
    jm["region"] = m.region;
    if (!m.outer.empty()) jm["outer"] = m.outer;
    if (!m.hole.empty()) jm["hole"] = m.hole;
    jm["samples"] = m.samples;
    jm["seed"] = m.seed;
    sc["minimality"] = jm;
  }
  if (!sc.empty()) o["scenario"] = sc;
  return render_json(o);
}

// ---------------------------------------------------------------------------
// run configuration

Tolerances RunConfig::apply(Tolerances base) const {
  for (const auto& [name, v] : tolerances) base.set(name, v);
  return base;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  const Json j = parse_json(text, origin);
  try {
    only_keys(j, "", {"system", "p0", "t_budget", "policy", "seed", "tolerances", "csv", "svg", "report"});
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  RunConfig c;
  try {
    c.system = string_of(need(j, "", "system"), "system");
    if (j.contains("p0")) c.p0 = point_of(j["p0"], "p0");
    if (j.contains("t_budget")) c.t_budget = number(j["t_budget"], "t_budget");
    if (j.contains("policy")) c.policy = string_of(j["policy"], "policy");
    if (j.contains("seed")) c.seed = unsigned_of(j["seed"], "seed");
    for (const char* k : {"csv", "svg", "report"})
      if (j.contains(k)) {
        const std::string v = string_of(j[k], k);
        (std::string(k) == "csv" ? c.csv : std::string(k) == "svg" ? c.svg : c.report) = v;
      }
    if (j.contains("tolerances")) {
      const Json& t = j["tolerances"];
      if (!t.is_object()) schema("tolerances", "expected an object");
      for (auto it = t.begin(); it != t.end(); ++it)
        c.tolerances[it.key()] = number(it.value(), "tolerances." + it.key());
    }
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  // range and name checks
  (void)c.apply(Tolerances{});
  // relative system path resolves against the config's directory
  if (!c.system.empty() && c.system.front() != '/' && origin.find('/') != std::string::npos)
    c.system = origin.substr(0, origin.rfind('/') + 1) + c.system;
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text(path), path); }

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x,y,mode,arc_index,event_flag\n";
  for (std::size_t a = 0; a < traj.arcs.size(); ++a) {
    const Arc& arc = traj.arcs[a];
    for (std::size_t k = 0; k < arc.samples.size(); ++k) {
      const Sample& s = arc.samples[k];
      std::string flag;
      if (k == 0) flag = to_string(arc.entry.kind);
      if (k + 1 == arc.samples.size()) flag = to_string(arc.exit.kind);
      out += num(s.t) + "," + num(s.p.x) + "," + num(s.p.y) + "," + to_string(arc.mode) + "," +
             std::to_string(a) + "," + flag + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 0.05 * kSize;

struct Frame {
  Box K;
  double x(double v) const { return kMargin + (v - K.xmin) / K.width() * (kSize - 2 * kMargin); }
  double y(double v) const {
    return kSize - kMargin - (v - K.ymin) / K.height() * (kSize - 2 * kMargin);
  }
};

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string xml_escape(const std::string& s) {
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

const char* region_color(RegionKind k) {
  switch (k) {
    case RegionKind::Sewing: return "#7f7f7f";
    case RegionKind::Sliding: return "#1f77b4";
    case RegionKind::Escaping: return "#d62728";
    default: return "#000000";
  }
}

const char* mode_color(Mode m) {
  switch (m) {
    case Mode::FlowX: return "#2ca02c";
    case Mode::FlowY: return "#ff7f0e";
    case Mode::Slide: return "#9467bd";
  }
  return "#000000";
}

std::string points_attr(const Frame& fr, const std::vector<Vec2>& pts) {
  std::string s;
  for (const auto& p : pts) {
    if (!s.empty()) s += ' ';
    s += f3(fr.x(p.x)) + "," + f3(fr.y(p.y));
  }
  return s;
}

std::string path_ring(const Frame& fr, const Polygon& poly) {
  std::string d;
  for (std::size_t k = 0; k < poly.pts.size(); ++k)
    d += (k ? " L" : "M") + f3(fr.x(poly.pts[k].x)) + "," + f3(fr.y(poly.pts[k].y));
  return d + " Z";
}

std::string marker(const Frame& fr, Vec2 p, const char* color, const std::string& label) {
  const std::string cx = f3(fr.x(p.x)), cy = f3(fr.y(p.y));
  return "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"5\" fill=\"" + color +
         "\" stroke=\"black\"/>\n<text x=\"" + f3(fr.x(p.x) + 8) + "\" y=\"" + f3(fr.y(p.y) - 8) +
         "\" font-size=\"12\" font-family=\"monospace\">" + xml_escape(label) + "</text>\n";
}

std::string coord(Vec2 p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.4g,%.4g)", p.x == 0 ? 0.0 : p.x, p.y == 0 ? 0.0 : p.y);
  return buf;
}

}  // namespace

std::string render_svg(const HybridModel& model, const SvgLayers& layers) {
  const PiecewiseSystem& sys = model.system();
  const Frame fr{sys.K()};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  // K frame and axes
  out += "<rect x=\"" + f3(fr.x(sys.K().xmin)) + "\" y=\"" + f3(fr.y(sys.K().ymax)) + "\" width=\"" +
         f3(fr.x(sys.K().xmax) - fr.x(sys.K().xmin)) + "\" height=\"" +
         f3(fr.y(sys.K().ymin) - fr.y(sys.K().ymax)) + "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  if (sys.K().xmin < 0 && sys.K().xmax > 0)
    out += "<line x1=\"" + f3(fr.x(0)) + "\" y1=\"" + f3(fr.y(sys.K().ymin)) + "\" x2=\"" + f3(fr.x(0)) +
           "\" y2=\"" + f3(fr.y(sys.K().ymax)) + "\" stroke=\"#dddddd\"/>\n";
  if (sys.K().ymin < 0 && sys.K().ymax > 0)
    out += "<line x1=\"" + f3(fr.x(sys.K().xmin)) + "\" y1=\"" + f3(fr.y(0)) + "\" x2=\"" +
           f3(fr.x(sys.K().xmax)) + "\" y2=\"" + f3(fr.y(0)) + "\" stroke=\"#dddddd\"/>\n";

  // Λ below everything else but the frame
  if (layers.lambda) {
    const LambdaRegion& L = *layers.lambda;
    if (L.curve_only) {
      out += "<polygon points=\"" + points_attr(fr, L.outer.pts) +
             "\" fill=\"none\" stroke=\"#bcbd22\" stroke-width=\"6\" stroke-opacity=\"0.5\"/>\n";
    } else {
      std::string d = path_ring(fr, L.outer);
      for (const auto& h : L.holes) d += " " + path_ring(fr, h);
      out += "<path d=\"" + d +
             "\" fill=\"#bcbd22\" fill-opacity=\"0.3\" fill-rule=\"evenodd\" stroke=\"#bcbd22\"/>\n";
    }
  }

  // Σ colored by region kind
  for (const auto& iv : model.partition().intervals) {
    const SigmaChart& c = sys.curve().chart(iv.chart);
    const int n = 64;
    std::vector<Vec2> pts;
    for (int k = 0; k <= n; ++k) pts.push_back(c.point(iv.lo + (iv.hi - iv.lo) * k / n));
    out += "<polyline points=\"" + points_attr(fr, pts) + "\" fill=\"none\" stroke=\"" +
           region_color(iv.kind) + "\" stroke-width=\"5\"><title>" + to_string(iv.kind) +
           "</title></polyline>\n";
  }

  // trajectory
  if (layers.trajectory) {
    for (const Arc& arc : layers.trajectory->arcs) {
      std::vector<Vec2> pts;
      for (const auto& s : arc.samples) pts.push_back(s.p);
      if (pts.size() < 2) continue;
      out += "<polyline points=\"" + points_attr(fr, pts) + "\" fill=\"none\" stroke=\"" +
             mode_color(arc.mode) + "\" stroke-width=\"1.5\"/>\n";
    }
  }

  // markers last so they stay visible
  if (layers.partition) {
    for (const auto& b : model.partition().breakpoints) {
      if (b.endpoint || !(b.tanX || b.tanY)) continue;
      const Vec2 p = sys.curve().point({b.chart, b.s});
      std::string label = b.tanX && b.tanY ? "T2 " : b.tanX ? "TX " : "TY ";
      out += marker(fr, p, "#ffffff", label + coord(p));
    }
    for (const auto& pe : model.pseudo_eqs())
      out += marker(fr, pe.point, "#000000", "PE " + coord(pe.point));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace filippov
