// gleamlab command-line front end.
//
// Exit codes: 0 ok, 1 check failed, 2 parse error, 3 evaluation error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gleamlab/gleamlab.hpp"

namespace {

using namespace gleamlab;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitEval = 3;

struct GlobalOptions {
  std::string format = "text";
  bool no_timestamp = false;
  unsigned jobs = 0;
  std::size_t crossing_limit = kDefaultCrossingLimit;
  std::string cache_path;
  bool no_cache = false;
  bool verify_cache = false;
  std::size_t verify_stride = 1;
};

class Session {
 public:
  explicit Session(const GlobalOptions& g) : g_(g) {
    std::string path = g.cache_path;
    if (path.empty()) {
      if (const char* env = std::getenv("GLEAMLAB_CACHE")) path = env;
    }
    if (!g.no_cache && !path.empty()) cache_ = std::make_unique<InvariantCache>(path);
    evaluator_ = Evaluator(BracketOptions{g.crossing_limit}, cache_.get());
  }

  const Evaluator& evaluator() const { return evaluator_; }
  unsigned jobs() const { return g_.jobs == 0 ? default_jobs() : g_.jobs; }
  bool json() const { return g_.format == "json"; }

  // Adds the timestamp unless suppressed.
  void stamp(nlohmann::json& j) const {
    if (!g_.no_timestamp) j["generated_at"] = now();
  }
  void stamp(std::ostream& os) const {
    if (!g_.no_timestamp) os << "generated: " << now() << '\n';
  }

  // Runs cache verification if requested; returns the adjusted exit code.
  int finish(int code) const {
    if (!g_.verify_cache || !cache_) return code;
    auto r = cache_->verify(g_.verify_stride, evaluator_.options());
    std::cerr << "cache verify: " << r.checked << " records checked, " << r.mismatches.size() << " mismatches\n";
    for (const auto& m : r.mismatches) std::cerr << "  " << m << '\n';
    return r.mismatches.empty() ? code : kExitCheckFailed;
  }

 private:
  static std::string now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
  }

  GlobalOptions g_;
  std::unique_ptr<InvariantCache> cache_;
  Evaluator evaluator_;
};

// "lo..hi"
Interval parse_interval(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw ParseError("range '" + s + "' must look like lo..hi");
  Interval iv{detail::parse_long(s.substr(0, dots), "range"), detail::parse_long(s.substr(dots + 2), "range")};
  if (iv.hi < iv.lo) throw ParseError("range '" + s + "' is empty");
  return iv;
}

// One range for every twist axis, or a comma-separated range per axis.
Box parse_box(const std::string& arg, const std::string& fiber, std::size_t twist_axes) {
  std::vector<Interval> ranges;
  std::istringstream in(arg);
  std::string item;
  while (std::getline(in, item, ',')) ranges.push_back(parse_interval(detail::trim(item)));
  Box box;
  if (twist_axes > 0) {
    if (ranges.size() == 1) {
      box.axes.assign(twist_axes, ranges.front());
    } else if (ranges.size() == twist_axes) {
      box.axes = ranges;
    } else {
      throw ParseError("--box gives " + std::to_string(ranges.size()) + " ranges for " + std::to_string(twist_axes) +
                       " twist axes");
    }
  }
  box.axes.push_back(parse_interval(fiber));
  return box;
}

// "7,9,-3" when there is one twist axis; otherwise "7:1;9:2" style points.
std::vector<LatticePoint> parse_holdout(const std::string& arg, std::size_t twist_axes, long fiber) {
  std::vector<LatticePoint> out;
  if (arg.empty()) return out;
  const bool multi = arg.find(':') != std::string::npos || arg.find(';') != std::string::npos;
  if (!multi) {
    if (twist_axes != 1) throw ParseError("--holdout needs 'a:b;c:d' points for templates with several sites");
    for (long v : detail::parse_int_list(arg, "--holdout")) out.push_back({v, fiber});
    return out;
  }
  std::istringstream in(arg);
  std::string item;
  while (std::getline(in, item, ';')) {
    std::string coords = item;
    for (char& c : coords) {
      if (c == ':') c = ',';
    }
    auto v = detail::parse_int_list(coords, "--holdout");
    if (v.size() != twist_axes) throw ParseError("holdout point '" + item + "' has the wrong number of coordinates");
    v.push_back(fiber);
    out.push_back(v);
  }
  return out;
}

nlohmann::json point_json(const LatticePoint& p) { return nlohmann::json(p); }

std::string fiber_axis_note(FiberMode m) {
  switch (m) {
    case FiberMode::none: return "fiber axis fixed at 0";
    case FiberMode::torus_fiber: return "fiber axis: K(xf) = T(xf,xf+1), unknot for xf in {-2,-1,0,1}";
    case FiberMode::braid_full_twist:
      return "fiber axis: full twists appended to the base braid (analog axis defined by this tool; "
             "degree findings on it are empirical observations)";
  }
  return "";
}

// ---------------------------------------------------------------------------

struct InvariantArgs {
  std::string name;
  std::string file;
  unsigned order = 4;
  std::string point;
};

KnotSample load_sample(const std::string& file, const std::string& point_arg) {
  const std::string text = read_file(file);
  const std::string trimmed = detail::trim(text);
  if (!trimmed.empty() && trimmed[0] == '{') {
    auto j = parse_json(trimmed);
    if (j.contains("base") || j.value("fiber_mode", std::string()) == "torus_fiber") {
      if (point_arg.empty()) throw ParseError(file + " is a template; pass --point x1,...,xe,xf");
      ShadowTemplate tmpl = template_from_json(j);
      auto coords = detail::parse_int_list(point_arg, "--point");
      if (coords.size() != tmpl.dimension()) {
        throw ParseError("--point needs " + std::to_string(tmpl.dimension()) + " coordinates (x1..xe, xf)");
      }
      return tmpl.realize(GleamPoint::from_lattice(coords));
    }
    return {diagram_from_json(j).diagram, std::nullopt};
  }
  if (!point_arg.empty()) throw ParseError("--point only applies to template inputs");
  return {parse_diagram(text).diagram, std::nullopt};
}

int cmd_invariant(const Session& s, const InvariantArgs& a) {
  KnotSample k = load_sample(a.file, a.point);
  std::string value;
  if (a.name == "vassiliev") {
    auto u = vassiliev_from_jones(s.evaluator().jones_of(k), a.order);
    std::ostringstream os;
    for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : "") << to_string(u[i]);
    value = os.str();
  } else if (a.name == "bracket") {
    value = kauffman_bracket(k.diagram, s.evaluator().options()).to_string();
  } else {
    value = s.evaluator().evaluate(InvariantId::parse(a.name), k).to_string();
  }
  if (s.json()) {
    nlohmann::json j;
    j["invariant"] = a.name == "vassiliev" ? "u0..u" + std::to_string(a.order) : a.name;
    j["input"] = a.file;
    j["crossings"] = k.diagram.crossing_count();
    j["value"] = value;
    s.stamp(j);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << value << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FamilyArgs {
  std::string action;
  std::string file;
  std::string invariant = "u2";
  int degree = 4;
  std::string box = "0..6";
  std::string fiber = "0..0";
  std::string holdout;
};

void print_table(std::ostream& os, const ValueTable& t, const std::vector<std::string>& names) {
  std::size_t width = 5;
  for (const auto& [p, v] : t.values) width = std::max(width, point_to_string(p).size());
  os << std::left << std::setw(static_cast<int>(width)) << "point" << "  " << t.invariant << "  ("
     << [&] {
          std::string n;
          for (std::size_t i = 0; i < names.size(); ++i) n += (i ? "," : "") + names[i];
          return n;
        }()
     << ")\n";
  for (const auto& [p, v] : t.values) {
    os << std::left << std::setw(static_cast<int>(width)) << point_to_string(p) << "  " << v.to_string() << '\n';
  }
  for (const auto& e : t.errors) os << point_to_string(e.point) << "  ERROR " << e.message << '\n';
}

nlohmann::json table_json(const ValueTable& t) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [p, v] : t.values) records.push_back({{"point", point_json(p)}, {"value", v.to_string()}});
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : t.errors) errors.push_back({{"point", point_json(e.point)}, {"error", e.message}});
  return {{"records", records}, {"errors", errors}, {"partial", t.partial()}};
}

int cmd_family(const Session& s, const FamilyArgs& a) {
  ShadowTemplate tmpl = parse_template(read_file(a.file));
  const InvariantId inv = InvariantId::parse(a.invariant);
  const Box box = parse_box(a.box, a.fiber, tmpl.twist_axes());
  const auto names = tmpl.axis_names();
  ValueTable table = family_eval(tmpl, inv, box, s.evaluator(), s.jobs());

  nlohmann::json j;
  j["command"] = "family " + a.action;
  j["template"] = a.file;
  j["invariant"] = inv.name();
  j["coordinates"] = "twist coordinates";
  j["axes"] = names;
  j["fiber_mode"] = to_string(tmpl.mode());
  j["fiber_note"] = fiber_axis_note(tmpl.mode());
  j["box"] = box.to_string();
  std::ostringstream text;
  s.stamp(text);
  text << "template: " << a.file << " (" << tmpl.twist_axes() << (tmpl.twist_axes() == 1 ? " twist site" : " twist sites") << ", twist coordinates, fiber mode " << to_string(tmpl.mode()) << ")\n";
  text << fiber_axis_note(tmpl.mode()) << '\n';
  text << "invariant: " << inv.name() << "  box: " << box.to_string() << '\n';

  int code = kExitOk;
  if (a.action == "eval") {
    j["table"] = table_json(table);
    print_table(text, table, names);
    if (table.partial()) code = kExitEval;
  } else {
    if (table.partial()) {
      print_table(text, table, names);
      j["table"] = table_json(table);
      std::cout << (s.json() ? j.dump(2) + "\n" : text.str());
      const auto& e = table.errors.front();
      throw EvalError("evaluation failed at " + point_to_string(e.point) + ": " + e.message);
    }
    DifferenceReport rep = certify_degree(table, a.degree);
    auto minimal = minimal_certified_degree(table, a.degree);
    j["degree_bound"] = a.degree;
    j["status"] = rep.certified() ? "certified_on_box" : "counterexample";
    j["differences_checked"] = rep.differences_checked;
    j["minimal_certified_degree"] = minimal ? nlohmann::json(*minimal) : nlohmann::json(nullptr);
    text << "degree bound " << a.degree << ": " << (rep.certified() ? "certified_on_box" : "counterexample") << " ("
         << rep.differences_checked << " differences of order " << a.degree + 1 << " checked)\n";
    text << "minimal certified degree on box: " << (minimal ? std::to_string(*minimal) : "none <= bound") << '\n';
    if (rep.counterexample) {
      const auto& w = *rep.counterexample;
      j["counterexample"] = {{"alpha", w.alpha}, {"base", point_json(w.base)}, {"value", w.value.to_string()}};
      text << "counterexample: D^" << multi_index_to_string(w.alpha) << " f" << point_to_string(w.base) << " = "
           << w.value.to_string() << '\n';
    }
    if (a.action == "certify") {
      code = rep.certified() ? kExitOk : kExitCheckFailed;
    } else if (a.action == "interpolate") {
      if (!rep.certified()) {
        text << "interpolation skipped: degree bound not certified\n";
        code = kExitCheckFailed;
      } else {
        Interpolant P = newton_interpolate(table, a.degree);
        const std::string lhs = inv.name() + " o K = ";
        j["newton_form"] = P.newton_text(names);
        j["polynomial"] = P.expanded.to_string(names);
        text << lhs << P.newton_text(names) << '\n';
        text << "expanded: " << P.expanded.to_string(names) << '\n';
        auto holdout = parse_holdout(a.holdout, tmpl.twist_axes(), box.axes.back().lo);
        nlohmann::json hj = nlohmann::json::array();
        bool all_match = true;
        for (const auto& p : holdout) {
          Value direct = s.evaluator().evaluate(inv, tmpl.realize(GleamPoint::from_lattice(p)));
          Rational predicted = P.evaluate(p);
          const bool match = direct == Value(predicted);
          all_match = all_match && match;
          hj.push_back({{"point", point_json(p)},
                        {"direct", direct.to_string()},
                        {"interpolated", to_string(predicted)},
                        {"match", match}});
          text << "holdout " << point_to_string(p) << ": direct " << direct.to_string() << ", polynomial "
               << to_string(predicted) << (match ? "" : "  MISMATCH") << '\n';
        }
        if (!holdout.empty()) {
          j["holdout"] = hj;
          j["holdout_match"] = all_match;
          text << "holdout: " << (all_match ? "exact match" : "mismatch") << '\n';
        }
        code = all_match ? kExitOk : kExitCheckFailed;
      }
    } else {
      throw ParseError("unknown family action '" + a.action + "' (expected eval, certify, interpolate)");
    }
  }
  if (s.json()) {
    s.stamp(j);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return code;
}

// ---------------------------------------------------------------------------

struct FiberScanArgs {
  long max = 7;
  std::string invariants = "genus,signature,span";
  int budget = 6;
};

int cmd_fiber_scan(const Session& s, const FiberScanArgs& a) {
  if (a.max < 3) throw EvalError("--max must be >= 3");
  std::vector<InvariantId> invs;
  {
    std::istringstream in(a.invariants);
    std::string item;
    while (std::getline(in, item, ',')) {
      InvariantId id = InvariantId::parse(detail::trim(item));
      if (id.kind != InvariantKind::genus && id.kind != InvariantKind::signature && id.kind != InvariantKind::span) {
        throw ParseError("fiber-scan supports genus, signature, span; got " + id.name());
      }
      invs.push_back(id);
    }
  }
  const std::size_t samples = static_cast<std::size_t>(a.max + 3);
  if (samples < static_cast<std::size_t>(a.budget) + 2) {
    throw EvalError("insufficient samples for budget: x_f in {-2.." + std::to_string(a.max) + "} gives " +
                    std::to_string(samples) + " samples, budget " + std::to_string(a.budget) + " needs " +
                    std::to_string(a.budget + 2));
  }
  ShadowTemplate tmpl = ShadowTemplate::torus_fiber();
  nlohmann::json j;
  j["command"] = "fiber-scan";
  j["family"] = fiber_axis_note(FiberMode::torus_fiber);
  j["budget"] = a.budget;
  std::ostringstream text;
  s.stamp(text);
  text << fiber_axis_note(FiberMode::torus_fiber) << '\n';

  bool ok = true;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& inv : invs) {
    Box box{{Interval{-2, a.max}}};
    ValueTable t = family_eval(tmpl, inv, box, s.evaluator(), s.jobs());
    if (t.partial()) throw EvalError("evaluation failed at " + point_to_string(t.errors.front().point) + ": " + t.errors.front().message);
    std::vector<Sample> samples_v;
    for (const auto& [p, v] : t.values) samples_v.push_back({p.back(), v.rational()});
    NonPolyReport r = nonpoly_evidence(samples_v, a.budget);
    const bool trivial_ok = r.trivial_region_constant.value_or(false);
    ok = ok && r.no_polynomial_fits && trivial_ok;

    nlohmann::json ij;
    ij["invariant"] = inv.name();
    nlohmann::json values = nlohmann::json::array();
    text << '\n' << inv.name() << " on K(xf):\n";
    for (const auto& smp : samples_v) {
      values.push_back({{"xf", smp.x}, {"value", to_string(smp.value)}});
      text << "  xf=" << std::setw(3) << smp.x << "  " << to_string(smp.value) << '\n';
    }
    ij["values"] = values;
    ij["trivial_region_constant"] = trivial_ok;
    text << "  trivial region {-2,-1,0,1}: " << (trivial_ok ? "constant" : "NOT constant") << '\n';
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
      if (c.witness) {
        checks.push_back({{"degree", c.degree},
                          {"witness_xf", c.witness->x},
                          {"value", to_string(c.witness->value)},
                          {"interpolant", to_string(*c.predicted)}});
        text << "  degree " << c.degree << ": witness at xf=" << c.witness->x << " (value " << to_string(c.witness->value)
             << ", interpolant " << to_string(*c.predicted) << ")\n";
      } else {
        checks.push_back({{"degree", c.degree}, {"consistent", true}});
        text << "  degree " << c.degree << ": consistent at degree " << c.degree << '\n';
      }
    }
    ij["checks"] = checks;
    const std::string verdict = r.no_polynomial_fits
                                    ? "no polynomial of degree <= " + std::to_string(a.budget) + " fits"
                                    : "a polynomial of degree <= " + std::to_string(a.budget) + " fits the samples";
    ij["verdict"] = verdict;
    text << "  verdict: " << verdict << '\n';
    per.push_back(ij);
  }
  j["invariants"] = per;
  if (s.json()) {
    s.stamp(j);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct SingularArgs {
  std::string file;
  std::string invariant = "u2";
  std::string check_identity;
};

int cmd_singular(const Session& s, const SingularArgs& a) {
  SingularDiagram sd = parse_singular(read_file(a.file));
  const InvariantId inv = InvariantId::parse(a.invariant);
  nlohmann::json j;
  j["command"] = "singular";
  j["input"] = a.file;
  j["invariant"] = inv.name();
  j["singular_crossings"] = sd.singular();
  std::ostringstream text;
  int code = kExitOk;
  if (a.check_identity.empty()) {
    Value v = alternating_sum(sd, inv, s.evaluator(), s.jobs());
    j["value"] = v.to_string();
    text << v.to_string() << '\n';
  } else {
    ShadowTemplate tmpl = parse_template(read_file(a.check_identity));
    IdentityCheck c = check_diff_identity(tmpl, sd, inv, s.evaluator(), s.jobs());
    j["lhs"] = c.lhs.to_string();
    j["rhs"] = c.rhs.to_string();
    j["equal"] = c.equal;
    j["beta"] = c.beta;
    j["alpha"] = c.alpha;
    j["base_point"] = point_json(c.base);
    s.stamp(text);
    text << "lhs (alternating sum): " << c.lhs.to_string() << '\n';
    text << "rhs (D^" << multi_index_to_string(c.alpha) << " at " << point_to_string(c.base)
         << "): " << c.rhs.to_string() << '\n';
    std::string beta;
    for (int b : c.beta) beta += std::to_string(b);
    text << "beta: [" << beta << "]\n";
    text << "equal: " << (c.equal ? "yes" : "no") << '\n';
    code = c.equal ? kExitOk : kExitCheckFailed;
  }
  if (s.json()) {
    s.stamp(j);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gleamlab: Jones-derived Vassiliev invariants of knot families on twist lattices"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the generated_at field");
  app.add_option("--jobs", g.jobs, "Worker threads (default: available cores)");
  app.add_option("--crossing-limit", g.crossing_limit, "Largest diagram the bracket engine accepts");
  app.add_option("--cache", g.cache_path, "Cache file (default: $GLEAMLAB_CACHE)");
  app.add_flag("--no-cache", g.no_cache, "Disable the invariant cache");
  app.add_flag("--verify-cache", g.verify_cache, "Recompute sampled cache records after the run");
  app.add_option("--verify-stride", g.verify_stride, "Check every n-th cache record when verifying");

  std::vector<InvariantArgs> inv_args;
  inv_args.reserve(16);
  std::vector<std::pair<CLI::App*, InvariantArgs*>> inv_cmds;
  for (const char* name : {"jones", "bracket", "span", "writhe", "genus", "signature", "vassiliev"}) {
    inv_args.push_back(InvariantArgs{name, "", 4, ""});
    auto* sub = app.add_subcommand(name, std::string("Compute ") + name + " of a diagram");
    sub->add_option("file", inv_args.back().file, "PD, braid or JSON file (or a template with --point)")->required();
    sub->add_option("--point", inv_args.back().point, "Lattice point x1,...,xe,xf for template inputs");
    if (std::string(name) == "vassiliev") sub->add_option("--order", inv_args.back().order, "Highest order n");
    inv_cmds.emplace_back(sub, &inv_args.back());
  }
  inv_args.push_back(InvariantArgs{});
  auto* generic = app.add_subcommand("invariant", "Compute any invariant by name (jones, u<n>, span, writhe, ...)");
  generic->add_option("name", inv_args.back().name)->required();
  generic->add_option("file", inv_args.back().file)->required();
  generic->add_option("--point", inv_args.back().point);
  inv_cmds.emplace_back(generic, &inv_args.back());

  FamilyArgs fam;
  auto* family = app.add_subcommand("family", "Evaluate, certify or interpolate an invariant over a template box");
  family->add_option("action", fam.action, "eval | certify | interpolate")->required()->check(
      CLI::IsMember({"eval", "certify", "interpolate"}));
  family->add_option("template", fam.file, "Template JSON")->required();
  family->add_option("--invariant", fam.invariant);
  family->add_option("--degree", fam.degree, "Degree bound m");
  family->add_option("--box", fam.box, "Twist-axis ranges, lo..hi (one for all axes, or comma-separated)");
  family->add_option("--fiber", fam.fiber, "Fiber-axis range lo..hi");
  family->add_option("--holdout", fam.holdout, "Held-out points: 7,9,-3 or 7:1;9:2");

  FiberScanArgs fs;
  auto* fiber = app.add_subcommand("fiber-scan", "Non-polynomiality evidence along K(xf)");
  fiber->add_option("--max", fs.max, "Largest xf");
  fiber->add_option("--invariants", fs.invariants, "Comma list from genus, signature, span");
  fiber->add_option("--budget", fs.budget, "Degree budget D");

  SingularArgs sg;
  auto* singular = app.add_subcommand("singular", "Alternating sum over resolutions of a singular diagram");
  singular->add_option("file", sg.file, "Singular diagram JSON")->required();
  singular->add_option("--invariant", sg.invariant);
  singular->add_option("--check-identity", sg.check_identity, "Template JSON for the difference identity");

  auto* cache_cmd = app.add_subcommand("cache-verify", "Recompute cached records and report mismatches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    Session session(g);
    int code = kExitOk;
    if (family->parsed()) {
      code = cmd_family(session, fam);
    } else if (fiber->parsed()) {
      code = cmd_fiber_scan(session, fs);
    } else if (singular->parsed()) {
      code = cmd_singular(session, sg);
    } else if (cache_cmd->parsed()) {
      g.verify_cache = true;
      Session verifying(g);
      return verifying.finish(kExitOk);
    } else {
      for (auto& [sub, args] : inv_cmds) {
        if (sub->parsed()) code = cmd_invariant(session, *args);
      }
    }
    return session.finish(code);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEval;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEval;
  }
}
