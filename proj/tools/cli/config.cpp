#include "config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>

namespace crowdflow::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

Mode parse_mode(std::string_view name) {
  if (name == "solve1d") return Mode::Solve1D;
  if (name == "solve2d") return Mode::Solve2D;
  if (name == "phase") return Mode::Phase;
  if (name == "analytic") return Mode::Analytic;
  if (name == "mesh") return Mode::MeshGen;
  throw ConfigError("mode", "unknown mode '" + std::string(name) +
                                "' (expected solve1d, solve2d, phase, analytic or mesh)");
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Solve1D: return "solve1d";
    case Mode::Solve2D: return "solve2d";
    case Mode::Phase: return "phase";
    case Mode::Analytic: return "analytic";
    case Mode::MeshGen: return "mesh";
  }
  return "?";
}

std::vector<BoundarySegment> interval_segments(double alpha, double beta) {
  return {BoundarySegment::inflow(std::string(kInflowTag), alpha),
          BoundarySegment::outflow(std::string(kOutflowTag), beta)};
}

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

// Wraps one JSON object, recording which keys were read so leftovers can be
// reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(join(path_, key), "required key missing");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double rate(double v, const std::string& path) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(path, "rate must lie in [0, 1]");
  return v;
}

double positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

Eigen::Vector2d vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(path, "expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

struct Door {
  DoorSpec spec;
  BoundarySegment segment;
};

Door parse_door(const json& j, const std::string& path) {
  Reader r(j, path);
  Door d;
  const std::string side = r.string("side");
  if (side == "left")
    d.spec.side = Side::Left;
  else if (side == "right")
    d.spec.side = Side::Right;
  else
    throw ConfigError(r.path("side"), "expected 'left' or 'right'");
  const Eigen::Vector2d y = vec2(r.at("y"), r.path("y"));
  d.spec.y_lo = y[0];
  d.spec.y_hi = y[1];
  d.spec.tag = r.string("tag");
  if (d.spec.tag.empty() || d.spec.tag == kWallTag)
    throw ConfigError(r.path("tag"), "door tag must be nonempty and not 'wall'");
  const std::string kind = r.string("kind", d.spec.side == Side::Left ? "inflow" : "outflow");
  const double v = rate(r.number("rate"), r.path("rate"));
  if (kind == "inflow")
    d.segment = BoundarySegment::inflow(d.spec.tag, v);
  else if (kind == "outflow")
    d.segment = BoundarySegment::outflow(d.spec.tag, v);
  else
    throw ConfigError(r.path("kind"), "expected 'inflow' or 'outflow'");
  r.finish();
  return d;
}

void parse_geometry(const json& j, RunConfig& cfg) {
  Reader r(j, "geometry");
  const std::string type = r.string("type");
  if (type == "interval") {
    IntervalSpec s;
    s.cells = r.integer("cells", cfg.mode == Mode::Solve1D ? 200 : s.cells);
    if (s.cells < 1) throw ConfigError(r.path("cells"), "must be at least 1");
    cfg.geometry = s;
    r.finish();
    return;
  }
  if (type != "corridor" && type != "obstacle")
    throw ConfigError(r.path("type"), "expected 'interval', 'corridor' or 'obstacle'");
  CorridorSpec c;
  c.nx = r.integer("nx", c.nx);
  c.ny = r.integer("ny", c.ny);
  if (c.nx < 2) throw ConfigError(r.path("nx"), "must be at least 2");
  if (c.ny < 1) throw ConfigError(r.path("ny"), "must be at least 1");
  c.length = positive(r.number("length", c.length), r.path("length"));
  c.height = positive(r.number("height", c.height), r.path("height"));
  std::vector<BoundarySegment> segments;
  if (r.has("doors")) {
    const json& doors = r.at("doors");
    if (!doors.is_array()) throw ConfigError(r.path("doors"), "expected an array");
    for (std::size_t i = 0; i < doors.size(); ++i) {
      Door d = parse_door(doors[i], index(r.path("doors"), i));
      c.doors.push_back(d.spec);
      segments.push_back(d.segment);
    }
  } else if (cfg.mode == Mode::MeshGen) {
    c.doors = standard_corridor_doors();
  }
  segments.push_back(BoundarySegment::wall(std::string(kWallTag)));
  cfg.model.segments = segments;
  if (type == "obstacle") {
    ObstacleSpec o;
    if (r.has("obstacle")) {
      Reader ro(r.at("obstacle"), r.path("obstacle"));
      if (ro.has("center")) o.center = vec2(ro.at("center"), ro.path("center"));
      o.radius = positive(ro.number("radius", o.radius), ro.path("radius"));
      ro.finish();
    }
    cfg.geometry = CorridorWithObstacleSpec{c, o};
  } else {
    cfg.geometry = c;
  }
  r.finish();
}

void parse_velocity(const json& j, RunConfig& cfg) {
  Reader r(j, "velocity");
  const std::string type = r.string("type");
  Eigen::Vector2d dir{1.0, 0.0};
  if (r.has("direction")) dir = vec2(r.at("direction"), r.path("direction"));
  if (type == "constant") {
    cfg.model.velocity = ConstantVelocity{dir};
  } else if (type == "linear") {
    cfg.model.velocity = LinearPotentialVelocity{dir};
  } else if (type == "harmonic") {
    if (j.contains("direction"))
      throw ConfigError(r.path("direction"), "not used by the harmonic field");
    cfg.model.velocity = HarmonicPotentialVelocity{};
  } else {
    throw ConfigError(r.path("type"), "expected 'constant', 'linear' or 'harmonic'");
  }
  if (type != "harmonic" && dir.isZero(0.0))
    throw ConfigError(r.path("direction"), "must be nonzero");
  r.finish();
}

void parse_output(const json& j, RunConfig& cfg) {
  Reader r(j, "output");
  cfg.output.path = r.string("path", cfg.output.path);
  if (r.has("formats")) {
    const json& f = r.at("formats");
    if (!f.is_array()) throw ConfigError(r.path("formats"), "expected an array");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f[i].is_string()) throw ConfigError(index(r.path("formats"), i), "expected a string");
      const auto s = f[i].get<std::string>();
      if (s != "csv" && s != "vtk" && s != "json")
        throw ConfigError(index(r.path("formats"), i), "expected 'csv', 'vtk' or 'json'");
      cfg.output.formats.push_back(s);
    }
  }
  r.finish();
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r(doc, "");
  RunConfig cfg;
  cfg.mode = parse_mode(r.string("mode"));

  const bool needs_epsilon = cfg.mode != Mode::MeshGen;
  if (needs_epsilon || r.has("epsilon"))
    cfg.model.epsilon = positive(r.number("epsilon"), "epsilon");
  cfg.model.tau = positive(r.number("tau", cfg.model.tau), "tau");
  cfg.model.initial_density = r.number("initial_density", cfg.model.initial_density);
  if (!(cfg.model.initial_density >= 0.0 && cfg.model.initial_density <= 1.0))
    throw ConfigError("initial_density", "must lie in [0, 1]");
  cfg.solver.tol = positive(r.number("tol", cfg.solver.tol), "tol");
  cfg.solver.penalty.eta = positive(r.number("eta", cfg.solver.penalty.eta), "eta");
  cfg.solver.max_iter = r.integer("max_iter", cfg.solver.max_iter);
  if (cfg.solver.max_iter < 1) throw ConfigError("max_iter", "must be at least 1");
  if (r.has("alpha")) cfg.alpha = rate(r.number("alpha"), "alpha");
  if (r.has("beta")) cfg.beta = rate(r.number("beta"), "beta");
  cfg.step = r.number("step", cfg.step);
  if (!(cfg.step > 0.0 && cfg.step <= 0.5)) throw ConfigError("step", "must lie in (0, 0.5]");
  cfg.jobs = r.integer("jobs", cfg.jobs);
  if (cfg.jobs < 0) throw ConfigError("jobs", "must be nonnegative");

  int cells = 200;
  if (r.has("cells")) {
    cells = r.integer("cells", cells);
    if (cells < 1) throw ConfigError("cells", "must be at least 1");
  }
  cfg.geometry = IntervalSpec{cells};
  if (r.has("geometry")) parse_geometry(r.at("geometry"), cfg);
  if (r.has("velocity")) {
    parse_velocity(r.at("velocity"), cfg);
  } else if (std::holds_alternative<IntervalSpec>(cfg.geometry)) {
    cfg.model.velocity = ConstantVelocity{{1.0, 0.0}};
  } else {
    cfg.model.velocity = HarmonicPotentialVelocity{};
  }
  if (r.has("output")) parse_output(r.at("output"), cfg);
  r.finish();

  switch (cfg.mode) {
    case Mode::Solve1D:
      if (!cfg.alpha) throw ConfigError("alpha", "required key missing");
      if (!cfg.beta) throw ConfigError("beta", "required key missing");
      if (!std::holds_alternative<IntervalSpec>(cfg.geometry))
        throw ConfigError("geometry.type", "solve1d needs an interval geometry");
      cfg.model.segments = interval_segments(*cfg.alpha, *cfg.beta);
      break;
    case Mode::Solve2D: {
      if (std::holds_alternative<IntervalSpec>(cfg.geometry))
        throw ConfigError("geometry", "solve2d needs a corridor or obstacle geometry");
      bool any_door = false;
      for (const auto& s : cfg.model.segments) any_door |= s.kind != SegmentKind::Wall;
      if (!any_door) throw ConfigError("geometry.doors", "at least one door is required");
      if (cfg.alpha || cfg.beta)
        throw ConfigError(cfg.alpha ? "alpha" : "beta", "2D rates belong to geometry.doors");
      break;
    }
    case Mode::Phase:
    case Mode::Analytic:
      if (cfg.mode == Mode::Analytic && cfg.alpha.has_value() != cfg.beta.has_value())
        throw ConfigError(cfg.alpha ? "beta" : "alpha", "alpha and beta go together");
      break;
    case Mode::MeshGen:
      if (std::holds_alternative<IntervalSpec>(cfg.geometry) && !doc.contains("geometry") &&
          !doc.contains("cells"))
        throw ConfigError("geometry", "required key missing");
      break;
  }
  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

}  // namespace crowdflow::cli
