#include "bergdyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace bergdyn::cli {

namespace {

struct Lexer {
  std::string text;
  std::size_t pos = 0;

  explicit Lexer(std::string t) : text(std::move(t)) {}

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(
                                    text[pos])))
      ++pos;
  }

  bool done() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c)
      throw ConfigError(std::string("expected '") + c + "' in \"" + text +
                        "\" at offset " + std::to_string(pos));
    ++pos;
  }

  bool accept(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_space();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    if (start == pos)
      throw ConfigError("expected identifier in \"" + text + "\" at offset " +
                        std::to_string(start));
    return text.substr(start, pos - start);
  }

  double number() {
    skip_space();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin)
      throw ConfigError("expected number in \"" + text + "\" at offset " +
                        std::to_string(pos));
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }

  long integer() {
    const double v = number();
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
      throw ConfigError("expected integer in \"" + text + "\"");
    return n;
  }
};

geom::Domain parse_domain_expr(Lexer& lex) {
  const std::string name = lex.ident();
  if (name == "disc") {
    lex.expect('(');
    std::vector<double> args;
    args.push_back(lex.number());
    while (lex.accept(',')) args.push_back(lex.number());
    lex.expect(')');
    if (args.size() == 2)
      return geom::Domain::disc(Complex(args[0], 0.0), args[1]);
    if (args.size() == 3)
      return geom::Domain::disc(Complex(args[0], args[1]), args[2]);
    throw ConfigError("disc takes (center_re, radius) or "
                      "(center_re, center_im, radius)");
  }
  if (name == "halfplane") {
    lex.expect('(');
    const double nx = lex.number();
    lex.expect(',');
    const double ny = lex.number();
    lex.expect(',');
    const double off = lex.number();
    lex.expect(')');
    return geom::Domain::half_plane(Complex(nx, ny), off);
  }
  if (name == "sphere") {
    if (lex.accept('(')) lex.expect(')');
    return geom::Domain::full_sphere();
  }
  if (name == "arc") {
    lex.expect('(');
    const double t1 = lex.number();
    lex.expect(',');
    const double t2 = lex.number();
    lex.expect(')');
    return geom::Domain::closed_arc(t1, t2);
  }
  if (name == "complement") {
    lex.expect('(');
    geom::Domain d = parse_domain_expr(lex);
    lex.expect(')');
    return geom::Domain::complement(std::move(d));
  }
  if (name == "intersect" || name == "union") {
    lex.expect('(');
    geom::Domain acc = parse_domain_expr(lex);
    int count = 1;
    while (lex.accept(',')) {
      geom::Domain next = parse_domain_expr(lex);
      acc = (name == "intersect")
                ? geom::Domain::intersection(std::move(acc), std::move(next))
                : geom::Domain::union_of(std::move(acc), std::move(next));
      ++count;
    }
    lex.expect(')');
    if (count < 2)
      throw ConfigError(name + " needs at least two operands");
    return acc;
  }
  throw ConfigError("unknown domain primitive '" + name + "'");
}

std::vector<measures::ArcPiece> parse_arc_list(Lexer& lex) {
  std::vector<measures::ArcPiece> arcs;
  lex.expect('[');
  while (!lex.accept(']')) {
    lex.expect('(');
    measures::ArcPiece p;
    p.theta1 = lex.number();
    lex.expect(',');
    p.theta2 = lex.number();
    lex.expect(',');
    p.power = lex.integer();
    lex.expect(',');
    const double wre = lex.number();
    double wim = 0.0;
    if (lex.accept(',')) wim = lex.number();
    p.weight = Complex(wre, wim);
    lex.expect(')');
    arcs.push_back(p);
    lex.accept(',');
  }
  return arcs;
}

}  // namespace

geom::Domain parse_domain(const std::string& text) {
  Lexer lex(text);
  geom::Domain d = parse_domain_expr(lex);
  if (!lex.done())
    throw ConfigError("trailing input after domain expression: \"" + text +
                      "\"");
  return d;
}

measures::CircleMeasure parse_measure(const std::string& text) {
  Lexer lex(text);
  std::vector<measures::Atom> atoms;
  std::vector<measures::ArcPiece> arcs;
  bool saw_section = false;
  while (!lex.done()) {
    const std::string section = lex.ident();
    saw_section = true;
    if (section == "arcs") {
      const auto more = parse_arc_list(lex);
      arcs.insert(arcs.end(), more.begin(), more.end());
    } else if (section == "atoms") {
      lex.expect('[');
      while (!lex.accept(']')) {
        lex.expect('(');
        const double theta = lex.number();
        lex.expect(',');
        const double wre = lex.number();
        double wim = 0.0;
        if (lex.accept(',')) wim = lex.number();
        lex.expect(')');
        atoms.push_back(
            measures::Atom{unit_point(theta), Complex(wre, wim), 0});
        lex.accept(',');
      }
    } else {
      throw ConfigError("unknown measure section '" + section +
                        "' (expected arcs/atoms)");
    }
  }
  if (!saw_section)
    throw ConfigError("empty measure expression");
  return measures::CircleMeasure(std::move(atoms), std::move(arcs));
}

fn::AnalyticFn parse_function(const std::string& text) {
  Lexer lex(text);
  fn::AnalyticFn f;
  bool saw_section = false;
  while (!lex.done()) {
    const std::string section = lex.ident();
    saw_section = true;
    if (section == "poly") {
      lex.expect('[');
      while (!lex.accept(']')) {
        f.poly.push_back(Complex(lex.number(), 0.0));
        lex.accept(',');
      }
    } else if (section == "atoms") {
      lex.expect('[');
      while (!lex.accept(']')) {
        lex.expect('(');
        const double are = lex.number();
        lex.expect(',');
        const double aim = lex.number();
        lex.expect(',');
        const double wre = lex.number();
        double wim = 0.0;
        if (lex.accept(',')) wim = lex.number();
        lex.expect(')');
        f.atoms.push_back(
            measures::Atom{Complex(are, aim), Complex(wre, wim), 0});
        lex.accept(',');
      }
    } else if (section == "arcs") {
      const auto more = parse_arc_list(lex);
      f.arcs.insert(f.arcs.end(), more.begin(), more.end());
    } else {
      throw ConfigError("unknown function section '" + section +
                        "' (expected poly/atoms/arcs)");
    }
  }
  if (!saw_section)
    throw ConfigError("empty function expression");
  return f;
}

std::vector<dyn::NodeSet> parse_nodes(const std::string& text) {
  Lexer lex(text);
  std::vector<dyn::NodeSet> sets;
  while (!lex.done()) {
    const std::string group = lex.ident();
    if (group == "roots") {
      lex.expect('[');
      const long k = lex.integer();
      lex.expect(']');
      if (k < 1) throw ConfigError("roots[k] needs k >= 1");
      dyn::GammaNodeSet set;
      for (long j = 0; j < k; ++j)
        set.nodes.push_back(unit_point(kTwoPi * j / static_cast<double>(k)));
      sets.push_back(std::move(set));
    } else if (group == "angles") {
      lex.expect('[');
      dyn::GammaNodeSet set;
      while (!lex.accept(']')) {
        set.nodes.push_back(unit_point(lex.number()));
        lex.accept(',');
      }
      sets.push_back(std::move(set));
    } else if (group == "arcsets") {
      lex.expect('[');
      dyn::ArcFamilySet set;
      while (!lex.accept(']')) {
        lex.expect('(');
        const double t1 = lex.number();
        lex.expect(',');
        const double t2 = lex.number();
        lex.expect(')');
        set.arcs.emplace_back(t1, t2);
        lex.accept(',');
      }
      sets.push_back(std::move(set));
    } else {
      throw ConfigError("unknown node group '" + group +
                        "' (expected roots/angles/arcsets)");
    }
  }
  if (sets.empty()) throw ConfigError("empty node list");
  return sets;
}

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Norm: return "norm";
    case ExperimentKind::Orbit: return "orbit";
    case ExperimentKind::SnDecay: return "sndecay";
    case ExperimentKind::Kitai: return "kitai";
    case ExperimentKind::Witness: return "witness";
    case ExperimentKind::Span: return "span";
    case ExperimentKind::Raster: return "raster";
    case ExperimentKind::Rajchman: return "rajchman";
    case ExperimentKind::LogGrowth: return "loggrowth";
  }
  return "?";
}

namespace {

ExperimentKind kind_from_name(const std::string& name, int line) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"norm", ExperimentKind::Norm},       {"orbit", ExperimentKind::Orbit},
      {"sndecay", ExperimentKind::SnDecay}, {"kitai", ExperimentKind::Kitai},
      {"witness", ExperimentKind::Witness}, {"span", ExperimentKind::Span},
      {"raster", ExperimentKind::Raster},
      {"rajchman", ExperimentKind::Rajchman},
      {"loggrowth", ExperimentKind::LogGrowth}};
  auto it = kinds.find(name);
  if (it == kinds.end())
    throw ConfigError("line " + std::to_string(line) +
                      ": unknown experiment '" + name + "'");
  return it->second;
}

std::set<std::string> allowed_keys(ExperimentKind k) {
  std::set<std::string> keys = {"experiment",     "prefix",
                                "quad.split_radius", "quad.max_depth",
                                "quad.order",     "quad.rel_tol"};
  auto add = [&keys](std::initializer_list<const char*> more) {
    for (const char* m : more) keys.insert(m);
  };
  switch (k) {
    case ExperimentKind::Norm:
      add({"domain", "p", "function"});
      break;
    case ExperimentKind::Orbit:
    case ExperimentKind::SnDecay:
      add({"domain", "p", "measure", "N"});
      break;
    case ExperimentKind::Kitai:
      add({"domain", "measure", "n_max", "samples", "seed"});
      break;
    case ExperimentKind::Witness:
      add({"domain", "p", "measure_f", "measure_g", "N"});
      break;
    case ExperimentKind::Span:
      add({"domain", "target", "nodes"});
      break;
    case ExperimentKind::Raster:
      add({"domain", "p", "function", "grid_step", "samples", "probes",
           "seed", "raster.re_min", "raster.re_max", "raster.im_min",
           "raster.im_max"});
      break;
    case ExperimentKind::Rajchman:
      add({"measure", "K"});
      break;
    case ExperimentKind::LogGrowth:
      add({"radii"});
      break;
  }
  return keys;
}

std::set<std::string> required_keys(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Norm:
      return {"domain", "p", "function"};
    case ExperimentKind::Orbit:
    case ExperimentKind::SnDecay:
      return {"domain", "p", "measure"};
    case ExperimentKind::Kitai:
      return {"domain", "measure", "seed"};
    case ExperimentKind::Witness:
      return {"domain", "p", "measure_f", "measure_g"};
    case ExperimentKind::Span:
      return {"domain", "target", "nodes"};
    case ExperimentKind::Raster:
      return {"domain", "function", "seed"};
    case ExperimentKind::Rajchman:
      return {"measure"};
    case ExperimentKind::LogGrowth:
      return {};
  }
  return {};
}

std::vector<double> parse_radii(const std::string& text) {
  Lexer lex(text);
  std::vector<double> radii;
  lex.expect('[');
  while (!lex.accept(']')) {
    radii.push_back(lex.number());
    lex.accept(',');
  }
  if (!lex.done()) throw ConfigError("trailing input after radii list");
  if (radii.empty()) throw ConfigError("empty radii list");
  return radii;
}

int parse_int_value(const std::string& text, const char* key) {
  Lexer lex(text);
  const long v = lex.integer();
  if (!lex.done())
    throw ConfigError(std::string("trailing input after ") + key);
  return static_cast<int>(v);
}

double parse_double_value(const std::string& text, const char* key) {
  Lexer lex(text);
  const double v = lex.number();
  if (!lex.done())
    throw ConfigError(std::string("trailing input after ") + key);
  return v;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<int, std::string>> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = strip(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = strip(stripped.substr(0, eq));
    const std::string value = strip(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty value for key '" + key + "'");
    if (raw.count(key))
      throw ConfigError("line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    raw[key] = {lineno, value};
  }

  auto it = raw.find("experiment");
  if (it == raw.end())
    throw ConfigError("missing required key 'experiment'");

  ExperimentConfig cfg;
  cfg.kind = kind_from_name(it->second.second, it->second.first);

  const std::set<std::string> allowed = allowed_keys(cfg.kind);
  for (const auto& [key, lv] : raw)
    if (!allowed.count(key))
      throw ConfigError("line " + std::to_string(lv.first) + ": key '" + key +
                        "' is not accepted by experiment '" +
                        kind_name(cfg.kind) + "'");
  for (const std::string& key : required_keys(cfg.kind))
    if (!raw.count(key))
      throw ConfigError("missing required key '" + key + "' for experiment '" +
                        std::string(kind_name(cfg.kind)) + "'");

  auto value_of = [&raw](const char* key) -> const std::string* {
    auto i = raw.find(key);
    return i == raw.end() ? nullptr : &i->second.second;
  };

  try {
    if (const auto* v = value_of("domain")) {
      cfg.domain = parse_domain(*v);
      cfg.domain_text = *v;
      const geom::Diagnostics diag = geom::validate(*cfg.domain);
      if (!diag.pass()) {
        std::string msg = "domain validation failed:";
        for (const auto& c : diag.checks)
          if (!c.pass) msg += " [" + c.name + "] " + c.detail;
        throw ConfigError(msg);
      }
    }
    if (const auto* v = value_of("p")) {
      cfg.p = parse_double_value(*v, "p");
      if (!(cfg.p >= 1.0)) throw ConfigError("p must be >= 1");
    }
    if (const auto* v = value_of("measure")) cfg.measure = parse_measure(*v);
    if (const auto* v = value_of("measure_f"))
      cfg.measure_f = parse_measure(*v);
    if (const auto* v = value_of("measure_g"))
      cfg.measure_g = parse_measure(*v);
    if (const auto* v = value_of("function")) cfg.function = parse_function(*v);
    if (const auto* v = value_of("target")) cfg.target = parse_function(*v);
    if (const auto* v = value_of("nodes")) cfg.node_sets = parse_nodes(*v);
    if (const auto* v = value_of("N")) {
      cfg.n_big = parse_int_value(*v, "N");
      if (cfg.n_big < 0) throw ConfigError("N must be >= 0");
    }
    if (const auto* v = value_of("K")) {
      cfg.k_limit = parse_int_value(*v, "K");
      if (cfg.k_limit < 1) throw ConfigError("K must be >= 1");
    }
    if (const auto* v = value_of("n_max")) {
      cfg.n_max = parse_int_value(*v, "n_max");
      if (cfg.n_max < 0) throw ConfigError("n_max must be >= 0");
    }
    if (const auto* v = value_of("samples")) {
      cfg.samples = parse_int_value(*v, "samples");
      if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    }
    if (const auto* v = value_of("probes")) {
      cfg.probes = parse_int_value(*v, "probes");
      if (cfg.probes < 1) throw ConfigError("probes must be >= 1");
    }
    if (const auto* v = value_of("grid_step")) {
      cfg.grid_step = parse_double_value(*v, "grid_step");
      if (!(cfg.grid_step > 0)) throw ConfigError("grid_step must be > 0");
    }
    if (const auto* v = value_of("raster.re_min"))
      cfg.re_min = parse_double_value(*v, "raster.re_min");
    if (const auto* v = value_of("raster.re_max"))
      cfg.re_max = parse_double_value(*v, "raster.re_max");
    if (const auto* v = value_of("raster.im_min"))
      cfg.im_min = parse_double_value(*v, "raster.im_min");
    if (const auto* v = value_of("raster.im_max"))
      cfg.im_max = parse_double_value(*v, "raster.im_max");
    if (const auto* v = value_of("radii")) cfg.radii = parse_radii(*v);
    if (const auto* v = value_of("seed")) {
      Lexer lex(*v);
      const long s = lex.integer();
      if (!lex.done() || s < 0) throw ConfigError("seed must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (const auto* v = value_of("prefix")) cfg.prefix = *v;
    if (const auto* v = value_of("quad.split_radius"))
      cfg.quadrature.split_radius =
          parse_double_value(*v, "quad.split_radius");
    if (const auto* v = value_of("quad.max_depth"))
      cfg.quadrature.max_depth = parse_int_value(*v, "quad.max_depth");
    if (const auto* v = value_of("quad.order"))
      cfg.quadrature.base_order = parse_int_value(*v, "quad.order");
    if (const auto* v = value_of("quad.rel_tol"))
      cfg.quadrature.rel_tol = parse_double_value(*v, "quad.rel_tol");
    cfg.quadrature.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  if (cfg.radii.empty())
    cfg.radii = {1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4, 1.0 - 1e-5, 1.0 - 1e-6};

  return cfg;
}

}  // namespace bergdyn::cli
