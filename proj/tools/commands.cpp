#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "tlg/cells.hpp"
#include "tlg/dubins.hpp"
#include "tlg/field.hpp"
#include "tlg/graph_io.hpp"
#include "tlg/harness.hpp"
#include "tlg/honeycomb.hpp"
#include "tlg/sampler.hpp"
#include "tlg/tower.hpp"

namespace tlg::cli {

namespace {

double parse_number(const std::string& s) {
  std::size_t slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      double v = std::stod(s, &used);
      if (used != s.size()) throw UsageError("bad number '" + s + "'");
      return v;
    }
    double p = std::stod(s.substr(0, slash), &used);
    if (used != slash) throw UsageError("bad number '" + s + "'");
    std::string qs = s.substr(slash + 1);
    double q = std::stod(qs, &used);
    if (used != qs.size() || q == 0.0) throw UsageError("bad number '" + s + "'");
    return p / q;
  } catch (const std::logic_error&) {
    throw UsageError("bad number '" + s + "'");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// closest p/q with q <= 1000, when it matches to 1e-12
std::string as_fraction(double x) {
  for (long q = 1; q <= 1000; ++q) {
    double p = std::round(x * static_cast<double>(q));
    if (std::abs(p / static_cast<double>(q) - x) < 1e-12) {
      std::ostringstream os;
      os << static_cast<long>(p) << '/' << q;
      return os.str();
    }
  }
  return "";
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

gauss::Law make_law(const std::string& kind, std::optional<double> origin, double drift) {
  if (kind == "wiener") return gauss::Law::wiener(origin, drift);
  if (kind == "two-sided") {
    if (origin) throw UsageError("--origin applies to the wiener law only");
    return gauss::Law::two_sided(drift);
  }
  throw UsageError("unknown law '" + kind + "'");
}

std::size_t place(gauss::SampleGrid& grid, const PointRef& p) {
  if (p.vertex) return grid.vertex_node(*p.vertex);
  grid = grid.with_times(p.edge, {p.time});
  return grid.node(*grid.find(p.edge, p.time));
}

// point strictly inside one branch of the cell
bool inside_branch(const TimePath& path, const PointRef& p) {
  if (p.vertex) {
    for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i)
      if (path.vertices[i] == *p.vertex) return true;
    return false;
  }
  for (std::size_t e : path.edges)
    if (e == p.edge) return true;
  return false;
}

double point_time(const Graph& g, const PointRef& p) { return p.vertex ? g.time(*p.vertex) : p.time; }

struct Context {
  std::ostream& out;
  std::ostream& err;
  Manifest& manifest;
};

int cmd_check(Context& c, const std::string& file, const std::string& mode_name, const std::string& method,
              const std::string& tower_out) {
  c.manifest.inputs[file] = content_hash(file);
  Graph g = load_graph(file);
  Mode mode = g.mode();
  if (mode_name == "strict") mode = Mode::strict;
  if (mode_name == "relaxed") mode = Mode::relaxed;
  ValidationReport report = validate_tlg(g, mode);
  if (!report.ok()) {
    c.out << "invalid\n" << report.summary() << "\n";
    return kInvalid;
  }
  NccOptions opts;
  if (method == "flow") opts.method = NccMethod::flow;
  if (method == "enumeration") opts.method = NccMethod::enumeration;
  NccVerdict v = is_ncc(with_mode(g, mode), opts);
  if (!v.ncc) {
    c.out << "valid, not NCC\n";
    if (v.witness)
      c.out << "witness (" << v.direction << "): " << describe_cell(g, v.witness->first) << " and "
            << describe_cell(g, v.witness->second) << "\n";
    return kNotNcc;
  }
  Tower t = build_tower(with_mode(g, mode));
  TowerReport tr = verify_tower(g, t);
  c.out << "valid, NCC\n";
  c.out << "tower steps " << t.steps.size() << ", hash " << std::hex << tower_hash(g, t) << std::dec
        << (tr.ok() ? ", verified" : ", NOT verified: " + tr.summary()) << "\n";
  if (!tower_out.empty()) {
    write_json_file(tower_to_json(g, t), tower_out);
    c.manifest.outputs.push_back(tower_out);
  }
  return tr.ok() ? kOk : kInvalid;
}

int cmd_cov(Context& c, const std::string& file, const std::string& a_text, const std::string& b_text, bool exact,
            std::optional<std::size_t> mc, std::optional<unsigned long long> seed, const std::string& law_name,
            std::optional<double> origin, double drift, double mesh) {
  if (mc && !seed) throw UsageError("--mc needs --seed");
  if (mc && *mc < 2 * sampling::kBatches) throw UsageError("--mc needs at least 40 samples");
  if (!exact && !mc) exact = true;
  c.manifest.inputs[file] = content_hash(file);
  c.manifest.seed = seed;
  if (mesh > 0.0) c.manifest.mesh = mesh;
  Graph g = load_graph(file);
  ValidationReport report = validate_tlg(g);
  if (!report.ok()) {
    c.out << "invalid\n" << report.summary() << "\n";
    return kInvalid;
  }
  const PointRef a = parse_point(g, a_text), b = parse_point(g, b_text);
  const gauss::Law law = make_law(law_name, origin, drift);

  NccVerdict verdict = is_ncc(g);
  if (!verdict.ncc) {
    if (mc) {
      c.out << "not NCC: no natural process to sample\n";
      return kNotNcc;
    }
    if (law.kind != gauss::LawKind::wiener || law.drift != 0.0)
      throw UsageError("cell-formula mode needs the driftless wiener law");
    const double o = law.origin.value_or(g.time(g.initial()));
    std::vector<double> values;
    c.out << "not NCC: cell-formula values\n";
    for (const Cell& cell : find_cells(g)) {
      if (!cell.flags.simple) continue;
      const bool ab = inside_branch(cell.a, a) && inside_branch(cell.b, b);
      const bool ba = inside_branch(cell.b, a) && inside_branch(cell.a, b);
      if (!ab && !ba) continue;
      const double v = gauss::cell_covariance_formula(g.time(cell.start) - o, point_time(g, a) - o,
                                                      point_time(g, b) - o, g.time(cell.end) - o);
      std::string frac = as_fraction(v);
      c.out << describe_cell(g, cell) << " " << fmt(v) << (frac.empty() ? "" : " (" + frac + ")") << "\n";
      bool fresh = true;
      for (double w : values)
        if (std::abs(w - v) <= 1e-12) fresh = false;
      if (fresh) values.push_back(v);
    }
    c.out << "distinct " << values.size() << (values.size() > 1 ? ", inconsistent" : ", consistent") << "\n";
    return kNotNcc;
  }

  Tower tower = build_tower(g);
  gauss::SampleGrid grid = mesh > 0.0 ? gauss::SampleGrid::uniform(g, mesh) : gauss::SampleGrid::vertices_only(g);
  const std::size_t na = place(grid, a);
  const std::size_t nb = place(grid, b);
  if (exact) {
    gauss::GaussianField field = gauss::build_field(g, tower, grid, law);
    const double v = field.covariance_nodes(na, nb);
    std::string frac = as_fraction(v);
    c.out << "exact " << fmt(v) << (frac.empty() ? "" : " (" + frac + ")") << "\n";
  }
  if (mc) {
    sampling::NaturalSampler sampler(g, tower, grid, law);
    sampling::McEstimate est = sampling::mc_covariance(sampler, na, nb, *mc, *seed);
    c.out << "mc " << fmt(est.estimate) << " stderr " << fmt(est.std_error) << " n " << est.n << "\n";
  }
  return kOk;
}

int cmd_harness(Context& c, const std::string& file, const std::string& sigma_text, const std::string& slots_text,
                const std::string& tstar_text, std::optional<std::size_t> level, bool floating,
                const std::string& levels_out) {
  c.manifest.inputs[file] = content_hash(file);
  Graph g = load_graph(file);
  ValidationReport report = validate_tlg(g);
  if (!report.ok()) {
    c.out << "invalid\n" << report.summary() << "\n";
    return kInvalid;
  }
  std::vector<VertexId> ids;
  for (const std::string& s : split_list(sigma_text)) ids.push_back(static_cast<VertexId>(parse_number(s)));
  std::vector<int> slots;
  for (const std::string& s : split_list(slots_text)) slots.push_back(static_cast<int>(parse_number(s)));
  TimePath sigma;
  try {
    sigma = path_from_ids(g, ids, slots);
  } catch (const Error& e) {
    throw UsageError(std::string("bad sigma: ") + e.what());
  }
  if (!is_full(g, sigma)) throw UsageError("sigma is not a full time path");
  const PointRef t = parse_point(g, tstar_text);
  if (t.vertex) throw UsageError("t* must be an interior edge point");
  harness::EdgePoint tp{t.edge, t.time};
  harness::SupportDecomposition sd;
  try {
    sd = harness::support_check(g, sigma, tp);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!sd.is_tree) {
    c.out << "sigma is not a support for t*: component has " << sd.vertex_count << " vertices and " << sd.edge_count
          << " edges\n";
    return kNotNcc;
  }
  harness::FiltrationLevels L = harness::filtration_levels(g, sigma, tp.edge);
  const std::size_t m = level.value_or(L.depth());
  if (m < 1 || m > L.depth()) throw UsageError("level must lie in 1.." + std::to_string(L.depth()));
  harness::AbsorptionDistribution d = harness::walk_distribution(
      g, L, tp, m, floating ? harness::Arithmetic::floating : harness::Arithmetic::exact);
  c.out << harness::weights_csv(g, d);
  if (!levels_out.empty()) {
    write_json_file(harness::levels_json(g, L), levels_out);
    c.manifest.outputs.push_back(levels_out);
  }
  return kOk;
}

int cmd_dubins(Context& c, const std::string& file, std::size_t depth, const std::string& embed_out,
               std::optional<double> verify_u, const std::string& tree_out) {
  c.manifest.inputs[file] = content_hash(file);
  dubins::Measure mu;
  try {
    mu = dubins::measure_from_json(read_json_file(file));
  } catch (const dubins::InvalidMeasure& e) {
    throw ParseError(e.what());
  }
  dubins::DubinsTree tree = dubins::dubins_tree(mu, depth);
  for (std::size_t n = 0; n <= depth; ++n) {
    c.out << "H" << n << ":";
    for (double h : tree.h(n)) c.out << " " << fmt(h);
    c.out << "\n";
  }
  c.out << "w1 " << fmt(dubins::w1_distance(dubins::embedded_measure(tree, depth), mu)) << "\n";
  if (!tree_out.empty()) {
    write_json_file(dubins::tree_to_json(tree), tree_out);
    c.manifest.outputs.push_back(tree_out);
  }
  if (verify_u) {
    dubins::SecondMoment s = dubins::verify_second_moment(mu, depth, *verify_u);
    c.out << "verify-427 u " << fmt(*verify_u) << " lhs " << fmt(s.lhs) << " rhs " << fmt(s.rhs) << " diff "
          << fmt(s.diff) << " via " << s.method << "\n";
  }
  if (!embed_out.empty()) {
    dubins::Embedding emb;
    try {
      emb = dubins::build_embedding_tlg(tree);
    } catch (const Error& e) {
      c.out << "cannot embed: " << e.what() << "\n";
      return kInvalid;
    }
    save_graph(emb.graph, embed_out);
    c.manifest.outputs.push_back(embed_out);
    c.out << "embedding " << emb.graph.vertex_count() << " vertices, sigma";
    for (VertexId id : path_ids(emb.graph, emb.sigma)) c.out << " " << id;
    const Graph& g = emb.graph;
    c.out << ", t* e:" << g.id(g.tail(emb.t_star.edge)) << "-" << g.id(g.head(emb.t_star.edge)) << "@"
          << fmt(emb.t_star.time) << "\n";
  }
  return kOk;
}

int cmd_honeycomb(Context& c, std::optional<double> u, std::optional<double> v, std::optional<double> x,
                  const std::string& rhos_text, const std::string& scaling_name, bool chain, double chain_rho) {
  if (chain) {
    c.out << "stationary";
    for (const std::string& s : honeycomb::chain_stationary_exact()) c.out << " " << s;
    c.out << "\n";
    c.out << "step_variance rho " << fmt(chain_rho) << " " << fmt(honeycomb::step_variance(chain_rho)) << "\n";
    c.out << "stationary_mean " << fmt(honeycomb::stationary_mean(chain_rho)) << "\n";
    return kOk;
  }
  if (!u || !v || !x) throw UsageError("--u, --v and --x are required");
  honeycomb::HeightScaling scaling;
  if (scaling_name == "statement")
    scaling = honeycomb::HeightScaling::statement;
  else if (scaling_name == "proof")
    scaling = honeycomb::HeightScaling::proof;
  else
    throw UsageError("unknown scaling '" + scaling_name + "'");
  std::vector<double> rhos;
  for (const std::string& s : split_list(rhos_text)) rhos.push_back(parse_number(s));
  if (rhos.empty()) throw UsageError("--rhos is empty");
  honeycomb::ConvergenceTable t;
  try {
    t = honeycomb::convergence_study(*u, *v, *x, rhos, scaling);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  c.out << honeycomb::convergence_csv(t);
  if (t.fitted_factor) c.err << "fitted factor " << fmt(*t.fitted_factor) << "\n";
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Manifest& manifest,
             std::string& manifest_path, std::string& replay_path);

int cmd_replay(const std::string& file, std::ostream& out, std::ostream& err) {
  Manifest m = manifest_from_json(read_json_file(file));
  if (m.version != tool_version()) err << "note: manifest written by version " << m.version << "\n";
  for (const auto& [path, hash] : m.inputs) {
    if (content_hash(path) != hash) {
      out << "input changed: " << path << "\n";
      return kParse;
    }
  }
  std::ostringstream buf, ebuf;
  Manifest fresh;
  std::string mpath, rpath;
  const int code = dispatch(m.args, buf, ebuf, fresh, mpath, rpath);
  if (code == m.exit_code && buf.str() == m.stdout_text) {
    out << "replay ok: " << m.command << "\n";
    return kOk;
  }
  out << "replay mismatch: " << m.command << " (exit " << code << " vs " << m.exit_code << ")\n";
  return kMismatch;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Manifest& manifest,
             std::string& manifest_path, std::string& replay_path) {
  CLI::App app{"Markov processes on time-like graphs", "tlg"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // --manifest may follow the subcommand
  bool version = false;
  app.add_flag("--version", version, "print the tool hash");
  app.add_option("--manifest", manifest_path, "write an experiment manifest");

  auto* check = app.add_subcommand("check", "validate a graph and decide NCC");
  std::string check_file, check_mode = "file", check_method = "auto", tower_out;
  check->add_option("graph", check_file)->required();
  check->add_option("--mode", check_mode)->check(CLI::IsMember({"file", "strict", "relaxed"}));
  check->add_option("--method", check_method)->check(CLI::IsMember({"auto", "flow", "enumeration"}));
  check->add_option("--tower-out", tower_out);

  auto* cov = app.add_subcommand("cov", "covariance of two points");
  std::string cov_file, pa, pb, law = "wiener";
  bool exact = false;
  std::optional<std::size_t> mc;
  std::optional<unsigned long long> seed;
  std::optional<double> origin;
  double drift = 0.0, mesh = 0.0;
  cov->add_option("graph", cov_file)->required();
  cov->add_option("a", pa)->required();
  cov->add_option("b", pb)->required();
  cov->add_flag("--exact", exact);
  cov->add_option("--mc", mc);
  cov->add_option("--seed", seed);
  cov->add_option("--law", law);
  cov->add_option("--origin", origin);
  cov->add_option("--drift", drift);
  cov->add_option("--mesh", mesh);

  auto* har = app.add_subcommand("harness", "walk weights of the conditional expectation");
  std::string har_file, sigma, slots, tstar, levels_out;
  std::optional<std::size_t> level;
  bool floating = false;
  har->add_option("graph", har_file)->required();
  har->add_option("--sigma", sigma)->required();
  har->add_option("--slots", slots);
  har->add_option("--tstar", tstar)->required();
  har->add_option("--level", level);
  har->add_flag("--float", floating);
  har->add_option("--levels-json", levels_out);

  auto* dub = app.add_subcommand("dubins", "Dubins tree, embedded measures and the embedding graph");
  std::string dub_file, embed_out, tree_out;
  std::size_t depth = 0;
  std::optional<double> verify_u;
  dub->add_option("measure", dub_file)->required();
  dub->add_option("--depth,-N", depth)->required();
  dub->add_option("--embed-tlg", embed_out);
  dub->add_option("--verify-427", verify_u);
  dub->add_option("--tree-json", tree_out);

  auto* hc = app.add_subcommand("honeycomb", "honeycomb covariance against the scaling limit");
  std::optional<double> hu, hv, hx;
  std::string rhos = "0.4,0.2,0.1", scaling = "statement";
  bool chain = false;
  double chain_rho = 1.0;
  hc->add_option("--u", hu);
  hc->add_option("--v", hv);
  hc->add_option("--x", hx);
  hc->add_option("--rhos", rhos);
  hc->add_option("--scaling", scaling);
  hc->add_flag("--chain", chain);
  hc->add_option("--rho", chain_rho);

  auto* rep = app.add_subcommand("replay", "re-run a manifest and compare");
  rep->add_option("manifest", replay_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  if (version) {
    out << "tlg " << tool_version() << "\n";
    return kOk;
  }

  Context c{out, err, manifest};
  manifest.version = tool_version();
  try {
    if (*check) {
      manifest.command = "check";
      return cmd_check(c, check_file, check_mode, check_method, tower_out);
    }
    if (*cov) {
      manifest.command = "cov";
      return cmd_cov(c, cov_file, pa, pb, exact, mc, seed, law, origin, drift, mesh);
    }
    if (*har) {
      manifest.command = "harness";
      return cmd_harness(c, har_file, sigma, slots, tstar, level, floating, levels_out);
    }
    if (*dub) {
      manifest.command = "dubins";
      return cmd_dubins(c, dub_file, depth, embed_out, verify_u, tree_out);
    }
    if (*hc) {
      manifest.command = "honeycomb";
      return cmd_honeycomb(c, hu, hv, hx, rhos, scaling, chain, chain_rho);
    }
    if (*rep) {
      manifest.command = "replay";
      return cmd_replay(replay_path, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidGraph& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const NotNcc& e) {
    err << "error: " << e.what() << "\n";
    return kNotNcc;
  } catch (const harness::NotSupported& e) {
    err << "error: " << e.what() << "\n";
    return kNotNcc;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  out << app.help();
  return kUsage;
}

}  // namespace

PointRef parse_point(const Graph& g, const std::string& text) {
  static const std::regex vertex_re(R"(v:(-?\d+))");
  static const std::regex edge_re(R"(e:(-?\d+)-(-?\d+)(?::(\d+))?@(.+))");
  std::smatch m;
  PointRef p;
  if (std::regex_match(text, m, vertex_re)) {
    auto v = g.find(std::stol(m[1].str()));
    if (!v) throw UsageError("no vertex " + m[1].str());
    p.vertex = *v;
    p.time = g.time(*v);
    return p;
  }
  if (std::regex_match(text, m, edge_re)) {
    auto from = g.find(std::stol(m[1].str())), to = g.find(std::stol(m[2].str()));
    if (!from || !to) throw UsageError("unknown endpoint in '" + text + "'");
    std::optional<std::size_t> e;
    if (m[3].matched) {
      e = g.find_edge(*from, *to, std::stoi(m[3].str()));
    } else {
      auto es = g.edges_between(*from, *to);
      if (!es.empty()) e = es.front();
    }
    if (!e) throw UsageError("no edge for '" + text + "'");
    const double t = parse_number(m[4].str());
    if (!(t > g.time(*from) && t < g.time(*to)))
      throw UsageError("time " + m[4].str() + " is off the edge in '" + text + "'");
    p.edge = *e;
    p.time = t;
    return p;
  }
  throw UsageError("cannot parse point '" + text + "' (use v:<id> or e:<from>-<to>[:slot]@<time>)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest manifest;
  std::string manifest_path, replay_path;
  std::ostringstream buf;
  int code;
  try {
    code = dispatch(args, buf, err, manifest, manifest_path, replay_path);
  } catch (const std::exception& e) {
    // file system and similar failures outside the library's own errors
    err << "error: " << e.what() << "\n";
    code = kParse;
  }
  out << buf.str();
  if (!manifest_path.empty() && manifest.command != "replay") {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--manifest") {
        ++i;
        continue;
      }
      if (args[i].rfind("--manifest=", 0) == 0) continue;
      manifest.args.push_back(args[i]);
    }
    manifest.stdout_text = buf.str();
    manifest.exit_code = code;
    try {
      write_json_file(manifest_to_json(manifest), manifest_path);
    } catch (const std::exception& e) {
      err << "error: cannot write manifest: " << e.what() << "\n";
      return kParse;
    }
  }
  return code;
}

}  // namespace tlg::cli
