#include "adtrans/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "adtrans/errors.hpp"
#include "adtrans/regimes.hpp"

namespace adtrans {

namespace {

struct Ctx {
  std::string source;
};

// A node together with its key path for error messages.
struct At {
  const Ctx* ctx;
  YAML::Node node;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream m;
    m << ctx->source;
    if (node.IsDefined() && node.Mark().line >= 0) m << ":" << node.Mark().line + 1;
    m << ": " << (path.empty() ? "<root>" : path) << ": " << what;
    throw ConfigError(m.str());
  }

  At key(const std::string& k) const { return {ctx, node[k], path.empty() ? k : path + "." + k}; }
  At item(std::size_t i) const { return {ctx, node[i], path + "[" + std::to_string(i) + "]"}; }
  bool has(const std::string& k) const { return node.IsMap() && node[k].IsDefined() && !node[k].IsNull(); }

  void expect_map(std::initializer_list<const char*> allowed) const {
    if (!node.IsMap()) fail("expected a mapping");
    for (const auto& kv : node) {
      const auto k = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        At{ctx, kv.first, path.empty() ? k : path + "." + k}.fail("unknown key");
      }
    }
  }

  std::size_t seq_size() const {
    if (!node.IsSequence()) fail("expected a sequence");
    return node.size();
  }

  double num() const {
    if (!node.IsScalar()) fail("expected a number");
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail("expected a number, got '" + node.Scalar() + "'");
    }
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }

  long integer() const {
    const double v = num();
    if (v != std::floor(v)) fail("expected an integer");
    return static_cast<long>(v);
  }

  std::string str() const {
    if (!node.IsScalar()) fail("expected a string");
    return node.Scalar();
  }

  double num_or(const std::string& k, double fallback) const { return has(k) ? key(k).num() : fallback; }
};

template <class Fn>
auto guarded(const At& at, Fn&& fn) {
  try {
    return fn();
  } catch (const ContractViolation& e) {
    at.fail(e.what());
  } catch (const RegimeMismatch& e) {
    at.fail(e.what());
  }
}

LevelScheme parse_scheme(const At& root) {
  if (!root.has("scheme")) root.fail("missing key 'scheme'");
  const At s = root.key("scheme");
  LevelScheme base = LevelScheme::m_system();
  if (s.node.IsScalar()) {
    base = guarded(s, [&] { return LevelScheme::named(s.str()); });
    if (root.has("levels") && base.levels() != root.key("levels").integer()) {
      root.key("levels").fail("scheme '" + s.str() + "' has " + std::to_string(base.levels()) +
                              " levels");
    }
  } else {
    const std::size_t n = s.seq_size();
    std::vector<Orientation> o;
    for (std::size_t i = 0; i < n; ++i) {
      const At it = s.item(i);
      o.push_back(guarded(it, [&] { return orientation_from_string(it.str()); }));
    }
    const int levels = root.has("levels") ? static_cast<int>(root.key("levels").integer())
                                          : static_cast<int>(n) + 1;
    base = guarded(s, [&] { return LevelScheme(levels, o); });
  }
  if (!root.has("degeneracy")) return base;
  const At d = root.key("degeneracy");
  std::vector<std::vector<int>> groups;
  for (std::size_t g = 0; g < d.seq_size(); ++g) {
    const At grp = d.item(g);
    std::vector<int> members;
    for (std::size_t m = 0; m < grp.seq_size(); ++m) {
      const long t = grp.item(m).integer();
      if (t < 1 || t > base.transitions()) grp.item(m).fail("transition out of range");
      members.push_back(static_cast<int>(t - 1));
    }
    groups.push_back(std::move(members));
  }
  return guarded(d, [&] { return base.with_degeneracy(groups); });
}

PulseEnvelope parse_envelope(const At& t) {
  t.expect_map({"shape", "peak", "center", "width", "delta", "on", "points"});
  PulseEnvelope e;
  if (t.has("shape")) e.shape = guarded(t.key("shape"), [&] { return shape_from_string(t.key("shape").str()); });
  if (!t.has("peak")) t.fail("missing key 'peak'");
  e.peak_rabi = t.key("peak").num();
  if (e.peak_rabi < 0.0) t.key("peak").fail("peak Rabi frequency must be >= 0");
  e.center = t.num_or("center", 0.0);
  e.width = t.num_or("width", 1.0);
  if (t.has("on")) {
    const At on = t.key("on");
    if (on.seq_size() != 2) on.fail("expected [start, stop]");
    e.on_interval = std::pair{on.item(0).num(), on.item(1).num()};
  }
  if (t.has("points")) {
    const At p = t.key("points");
    for (std::size_t i = 0; i < p.seq_size(); ++i) {
      const At k = p.item(i);
      if (k.seq_size() != 2) k.fail("expected [t, value]");
      e.points.emplace_back(k.item(0).num(), k.item(1).num());
    }
  }
  guarded(t, [&] {
    e.validate();
    return 0;
  });
  return e;
}

MixingEntrance parse_mixing(const At& m) {
  m.expect_map({"profile", "amplitude", "center", "ramp", "peak", "width"});
  MixingEntrance e;
  if (m.has("profile")) {
    e.profile = m.key("profile").str();
    if (e.profile != "tanh" && e.profile != "erf" && e.profile != "sin2") {
      m.key("profile").fail("profile must be tanh, erf or sin2");
    }
  }
  e.amplitude = m.num_or("amplitude", e.amplitude);
  e.center = m.num_or("center", e.center);
  e.ramp = m.num_or("ramp", e.ramp);
  e.peak = m.num_or("peak", e.peak);
  e.width = m.num_or("width", e.width);
  if (!(e.ramp > 0.0)) m.key("ramp").fail("must be > 0");
  if (!(e.width > 0.0)) m.key("width").fail("must be > 0");
  if (e.peak < 0.0) m.key("peak").fail("peak Rabi frequency must be >= 0");
  if (e.amplitude < 0.0 || e.amplitude > std::numbers::pi / 2) {
    m.key("amplitude").fail("must lie in [0, pi/2]");
  }
  return e;
}

PropagationConfig parse_propagation(const At& p, const Scenario& s) {
  p.expect_map({"model", "closure", "q", "alpha0", "linewidth", "length", "dx", "tau",
                "store_every", "invariant_pairs", "mixing"});
  const int nt = s.scheme.transitions();
  PropagationConfig c;
  if (p.has("model")) {
    c.model = p.key("model").str();
    if (c.model != "reduced" && c.model != "transport") p.key("model").fail("must be reduced or transport");
  }
  c.closure = p.has("closure") ? p.key("closure").str() : s.regime.value_or("");
  if (!c.closure.empty()) guarded(p, [&] { return &regime(c.closure); });

  if (p.has("q")) {
    const At q = p.key("q");
    if (q.node.IsSequence()) {
      if (q.seq_size() != static_cast<std::size_t>(nt)) q.fail("need one q per transition");
      for (std::size_t i = 0; i < q.seq_size(); ++i) c.medium.q.push_back(q.item(i).num());
    } else {
      c.medium.q.assign(nt, q.num());
    }
  } else {
    c.medium.q.assign(nt, 1.0);
  }
  if (p.has("alpha0")) c.medium.alpha0 = p.key("alpha0").num();
  if (p.has("linewidth")) c.medium.linewidth = p.key("linewidth").num();
  guarded(p, [&] {
    c.medium.validate(nt);
    return 0;
  });

  c.grid.length = p.num_or("length", c.grid.length);
  c.grid.dx = p.num_or("dx", c.grid.dx);
  if (p.has("tau")) {
    const At t = p.key("tau");
    t.expect_map({"start", "stop", "step"});
    c.grid.tau_start = t.num_or("start", c.grid.tau_start);
    c.grid.tau_stop = t.num_or("stop", c.grid.tau_stop);
    c.grid.dtau = t.num_or("step", c.grid.dtau);
  }
  if (p.has("store_every")) c.grid.store_every = static_cast<int>(p.key("store_every").integer());
  guarded(p, [&] {
    c.grid.validate();
    return 0;
  });

  if (p.has("invariant_pairs")) {
    const At ip = p.key("invariant_pairs");
    for (std::size_t i = 0; i < ip.seq_size(); ++i) {
      const At pr = ip.item(i);
      if (pr.seq_size() != 2) pr.fail("expected [a, b]");
      const long a = pr.item(0).integer(), b = pr.item(1).integer();
      if (a < 1 || a > nt || b < 1 || b > nt || a == b) pr.fail("transitions out of range");
      c.invariant_pairs.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
    }
  }
  if (p.has("mixing")) {
    if (system_kind(s.scheme) != "M") p.key("mixing").fail("mixing entrance needs an M scheme");
    c.mixing = parse_mixing(p.key("mixing"));
  }
  if (c.model == "transport" && system_kind(s.scheme).empty()) {
    p.key("model").fail("transport needs an M or W scheme");
  }
  if (c.model == "reduced" && c.closure.empty()) p.fail("reduced model needs a closure regime");
  return c;
}

RunConfig parse_root(const At& root, const std::string& fallback_name) {
  root.expect_map({"name", "scheme", "levels", "degeneracy", "initial", "regime", "transitions",
                   "time", "monitor", "propagation"});
  RunConfig cfg;
  Scenario& s = cfg.scenario;
  s.name = root.has("name") ? root.key("name").str() : fallback_name;
  s.scheme = parse_scheme(root);
  const int nt = s.scheme.transitions();

  if (!root.has("transitions")) root.fail("missing key 'transitions'");
  const At tr = root.key("transitions");
  if (tr.seq_size() != static_cast<std::size_t>(nt)) {
    tr.fail("need " + std::to_string(nt) + " transitions, got " + std::to_string(tr.seq_size()));
  }
  std::vector<double> one_photon;
  for (std::size_t i = 0; i < tr.seq_size(); ++i) {
    s.train.envelopes.push_back(parse_envelope(tr.item(i)));
    one_photon.push_back(tr.item(i).num_or("delta", 0.0));
  }
  s.detunings = DetuningLadder(s.scheme, one_photon);

  s.initial_level = 0;
  if (root.has("initial")) {
    const long k = root.key("initial").integer();
    if (k < 1 || k > s.scheme.levels()) root.key("initial").fail("level out of range");
    s.initial_level = static_cast<int>(k - 1);
  }
  if (root.has("regime")) {
    s.regime = root.key("regime").str();
    guarded(root.key("regime"), [&] { return &regime(*s.regime); });
  }

  if (root.has("time")) {
    const At t = root.key("time");
    t.expect_map({"start", "stop", "step", "stride"});
    s.grid.start = t.num_or("start", s.grid.start);
    s.grid.stop = t.num_or("stop", s.grid.stop);
    s.grid.step = t.has("step") ? t.key("step").num() : resolving_step(s.train, s.detunings);
    s.grid.stride = t.has("stride") ? static_cast<std::size_t>(t.key("stride").integer()) : 1;
    if (!(s.grid.stop > s.grid.start)) t.fail("need stop > start");
    if (!(s.grid.step > 0.0)) t.key("step").fail("must be > 0");
    if (s.grid.stride < 1) t.key("stride").fail("must be >= 1");
  } else {
    s.grid.step = resolving_step(s.train, s.detunings);
  }

  if (root.has("monitor")) {
    const At m = root.key("monitor");
    m.expect_map({"threshold", "coupling_floor", "gap_resolution"});
    s.monitor.threshold = m.num_or("threshold", s.monitor.threshold);
    s.monitor.coupling_floor = m.num_or("coupling_floor", s.monitor.coupling_floor);
    s.monitor.gap_resolution = m.num_or("gap_resolution", s.monitor.gap_resolution);
  }
  if (root.has("propagation")) cfg.propagation = parse_propagation(root.key("propagation"), s);
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  const Ctx ctx{source};
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream m;
    m << source << ":" << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(m.str());
  }
  std::string stem = std::filesystem::path(source).stem().string();
  return parse_root(At{&ctx, doc, ""}, stem);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string system_kind(const LevelScheme& scheme) {
  if (scheme.orientation() == LevelScheme::m_system().orientation()) return "M";
  if (scheme.orientation() == LevelScheme::w_system().orientation()) return "W";
  return "";
}

Profile MixingEntrance::theta0() const {
  const MixingEntrance e = *this;
  if (e.profile == "erf") {
    return [e](double t) { return 0.5 * e.amplitude * (1.0 + std::erf((t - e.center) / e.ramp)); };
  }
  if (e.profile == "sin2") {
    return [e](double t) {
      const double u = (t - e.center) / e.ramp;
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return e.amplitude;
      const double s = std::sin(0.25 * std::numbers::pi * (u + 1.0));
      return e.amplitude * s * s;
    };
  }
  return [e](double t) { return 0.5 * e.amplitude * (1.0 + std::tanh((t - e.center) / e.ramp)); };
}

Profile MixingEntrance::omega0_sq() const {
  const double p2 = peak * peak, w = width;
  return [p2, w](double t) { return p2 * std::exp(-(t / w) * (t / w)); };
}

EntranceFields entrance_fields(const RunConfig& config) {
  const Scenario& s = config.scenario;
  const int nt = s.scheme.transitions();
  EntranceFields e;
  const auto& prop = config.propagation;
  if (prop && prop->mixing) {
    const Profile th = prop->mixing->theta0();
    const Profile o2 = prop->mixing->omega0_sq();
    for (int i = 0; i < nt; ++i) {
      if (i % 2 == 0) {
        e.omega_sq.push_back([th, o2](double t) { const double v = std::sin(th(t)); return o2(t) * v * v; });
      } else {
        e.omega_sq.push_back([th, o2](double t) { const double v = std::cos(th(t)); return o2(t) * v * v; });
      }
    }
  } else {
    for (int i = 0; i < nt; ++i) {
      const PulseEnvelope env = s.train.envelopes[s.scheme.group_leader(i)];
      e.omega_sq.push_back([env](double t) { const double v = env(t); return v * v; });
    }
  }
  for (int i = 0; i < nt; ++i) {
    const double d = s.detunings.one_photon()[i];
    e.delta.push_back([d](double) { return d; });
  }
  return e;
}

std::filesystem::path scenario_dir() {
  if (const char* env = std::getenv("ADTRANS_SCENARIO_DIR")) return env;
  return ADTRANS_SCENARIO_DIR;
}

}  // namespace adtrans
