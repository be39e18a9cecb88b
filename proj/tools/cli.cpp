#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbis/enumeration.hpp"
#include "orbis/error.hpp"
#include "orbis/io.hpp"
#include "orbis/orbisurface.hpp"
#include "orbis/psi.hpp"
#include "orbis/test_functions.hpp"
#include "orbis/trace_formula.hpp"
#include "orbis/wave_trace.hpp"

namespace orbis::cli {

namespace {

using nlohmann::json;

constexpr const char* kSynopsis =
    "usage: orbis [global flags] <command> [args]\n"
    "commands:\n"
    "  signature -g G -m m1,m2,...        Euler characteristic, area, hyperbolicity\n"
    "  triangle P Q R                     triangle group generator matrices\n"
    "  lengths (--preset P,Q,R | --generators FILE) [--format jsonl|csv]\n"
    "                                     primitive length spectrum as JSON lines\n"
    "  trace-eval (--preset P,Q,R | --generators FILE) [--family gaussian|bspline|sech]\n"
    "                                     geometric side of the trace formula\n"
    "  wave synth (--preset P,Q,R | --generators FILE) --output FILE.csv\n"
    "                                     mollified wave trace, CSV plus FILE.csv.json sidecar\n"
    "  wave invert --input FILE.csv [--sidecar FILE.json] [--max-order M]\n"
    "                                     recover lengths, cone orders and genus\n"
    "  cones decompose --input FILE.csv [--max-order M] [--mode exact|noisy]\n"
    "                                     cone orders of a sampled sum of psi_m\n"
    "global flags:\n"
    "  --max-length L  --depth D  --sigma S  --grid-step H  --grid-max T\n"
    "  --t T  --tol E  --threads N  --output FILE\n";

struct Globals {
  double max_length = 4.0;
  int depth = 12;
  std::optional<double> sigma;
  std::optional<double> grid_step;
  double grid_max = 40.0;
  double heat_t = 0.5;
  double tol = 1e-11;
  unsigned threads = 0;
  std::string output;
};

struct GroupSource {
  std::vector<int> preset;
  std::string generators;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string dump_line(const json& j) { return rounded(j).dump() + "\n"; }

HyperbolicStructure load_structure(const GroupSource& src) {
  if (!src.preset.empty() && !src.generators.empty()) {
    throw UsageError("--preset and --generators are mutually exclusive");
  }
  if (!src.generators.empty()) {
    std::ifstream in(src.generators);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + src.generators);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, src.generators + ": " + e.what());
    }
    return structure_from_json(j);
  }
  if (src.preset.size() != 3) throw UsageError("--preset needs three orders P,Q,R");
  return make_structure(OrbifoldSignature(0, src.preset));
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive");
}

TestFunctionPair pair_for(const std::string& family, double param) {
  if (family == "gaussian") return gaussian_heat_pair(param);
  if (family == "bspline") return bspline_pair(param);
  if (family == "sech") return sech_pair(param);
  throw UsageError("unknown --family " + family);
}

// Smallest gap between distinct singular positions up to l_max.
double minimum_gap(const WaveTraceModel& model, double l_max) {
  double gap = std::numeric_limits<double>::infinity();
  double last = -1.0;
  for (const auto& term : model.singular_part) {
    if (term.position > l_max) break;
    if (last >= 0.0 && term.position - last > 1e-9) gap = std::min(gap, term.position - last);
    last = term.position;
  }
  return gap;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry, trace formula and wave trace inversion for hyperbolic orbisurfaces",
               "orbis"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--max-length", g.max_length, "largest geodesic length considered");
  app.add_option("--depth", g.depth, "word length of the certified enumeration")->check(CLI::Range(1, 64));
  app.add_option("--sigma", g.sigma, "mollifier width");
  app.add_option("--grid-step", g.grid_step, "time grid step");
  app.add_option("--grid-max", g.grid_max, "time grid end");
  app.add_option("--t", g.heat_t, "heat time (or family parameter)");
  app.add_option("--tol", g.tol, "quadrature tolerance");
  app.add_option("--threads", g.threads, "worker thread cap")->check(CLI::Range(0u, 1024u));
  app.add_option("--output", g.output, "output file");

  int sig_genus = 0;
  std::vector<int> sig_orders;
  auto* signature = app.add_subcommand("signature", "Euler characteristic and area of a signature");
  signature->add_option("-g,--genus", sig_genus, "genus")->check(CLI::NonNegativeNumber);
  signature->add_option("-m,--cone-orders", sig_orders, "cone orders")->delimiter(',');

  std::vector<int> tri;
  auto* triangle = app.add_subcommand("triangle", "triangle group generators");
  triangle->add_option("orders", tri, "P Q R")->expected(3)->required();

  GroupSource src;
  auto add_source = [&src](CLI::App* sub) {
    sub->add_option("--preset", src.preset, "triangle signature P,Q,R")->delimiter(',');
    sub->add_option("--generators,--structure", src.generators, "structure JSON with generators");
  };
  std::string format = "jsonl";
  auto* lengths = app.add_subcommand("lengths", "primitive length spectrum");
  add_source(lengths);
  lengths->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));

  std::string family = "gaussian";
  int k_max = 40;
  auto* trace_eval = app.add_subcommand("trace-eval", "geometric side of the trace formula");
  add_source(trace_eval);
  trace_eval->add_option("--family", family, "gaussian, bspline or sech");
  trace_eval->add_option("--k-max", k_max, "largest iterate")->check(CLI::Range(1, 100000));

  auto* wave = app.add_subcommand("wave", "mollified wave trace");
  wave->require_subcommand(1);
  auto* synth = wave->add_subcommand("synth", "synthesize from geometric data");
  add_source(synth);
  std::string input, sidecar;
  int max_order = 12;
  auto* invert = wave->add_subcommand("invert", "recover the geometric data");
  invert->add_option("--input", input, "trace CSV")->required();
  invert->add_option("--sidecar", sidecar, "sidecar JSON (default: input + .json)");
  invert->add_option("--max-order", max_order, "largest cone order")->check(CLI::Range(2, 64));

  std::string mode = "exact";
  auto* cones = app.add_subcommand("cones", "cone-order fitting");
  cones->require_subcommand(1);
  auto* decompose = cones->add_subcommand("decompose", "fit a sampled sum of psi_m");
  decompose->add_option("--input", input, "r-side CSV")->required();
  decompose->add_option("--max-order", max_order, "largest cone order")->check(CLI::Range(2, 64));
  decompose->add_option("--mode", mode, "exact or noisy")->check(CLI::IsMember({"exact", "noisy"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "orbis: " << e.what() << "\n" << kSynopsis;
    return 2;
  }

  try {
    if (*signature) {
      const OrbifoldSignature sig(sig_genus, sig_orders);
      const Rational chi = sig.euler_characteristic();
      json j{{"genus", sig.genus}, {"cone_orders", sig.cone_orders}, {"chi", chi.str()},
             {"hyperbolic", sig.is_hyperbolic()}};
      j["area"] = sig.is_hyperbolic() ? json(area_gauss_bonnet(sig)) : json(nullptr);
      Output o(g.output, out);
      o.stream() << dump_line(j);
      return 0;
    }

    if (*triangle) {
      const auto gens = triangle_group_generators(tri[0], tri[1], tri[2]);
      const auto s = make_structure(OrbifoldSignature(0, tri),
                                    std::vector<Moebius>(gens.begin(), gens.end()));
      Output o(g.output, out);
      o.stream() << dump_line(to_json(s));
      return 0;
    }

    check_positive(g.max_length, "--max-length");

    if (*lengths) {
      const auto s = load_structure(src);
      if (!s.generators) throw Error(ErrorCode::InvalidInput, "structure has no generators");
      const auto pres = GroupPresentation::from_generators(*s.generators);
      const auto spec = length_spectrum(pres, g.max_length, g.depth);
      Output o(g.output, out);
      if (format == "csv") {
        write_spectrum_csv(o.stream(), spec);
      } else {
        for (const auto& e : spec.entries) o.stream() << dump_line(spectrum_entry_json(e));
      }
      err << dump_line({{"completeness_bound", spec.completeness_bound},
                        {"entries", spec.entries.size()},
                        {"notes", spec.notes}});
      return 0;
    }

    if (*trace_eval) {
      check_positive(g.heat_t, "--t");
      check_positive(g.tol, "--tol");
      const auto s = load_structure(src);
      const auto pair = pair_for(family, g.heat_t);
      QuadratureOptions quad;
      quad.tol = g.tol;
      const auto data = geometric_data(s, g.max_length, g.depth);
      const auto side = geometric_side(data, pair, k_max, quad);
      json j{{"family", family},
             {"parameter", g.heat_t},
             {"identity", side.identity},
             {"hyperbolic", side.hyperbolic},
             {"elliptic", side.elliptic},
             {"total", side.total},
             {"error_budget", side.error_budget},
             {"completeness_bound", data.spectrum.completeness_bound},
             {"convention", "h(r)=∫g(u)e^{iru}du"}};
      Output o(g.output, out);
      o.stream() << dump_line(j);
      return 0;
    }

    if (*synth) {
      if (g.output.empty()) throw UsageError("wave synth needs --output FILE.csv");
      check_positive(g.grid_max, "--grid-max");
      const auto s = load_structure(src);
      const auto data = geometric_data(s, g.max_length, g.depth);
      if (data.spectrum.completeness_bound < g.max_length) {
        err << dump_line({{"warning", "spectrum certified only below completeness_bound"},
                          {"completeness_bound", data.spectrum.completeness_bound}});
      }
      const auto model =
          WaveTraceModel::from_spectrum(s.area, data.spectrum, data.cone_orders, g.grid_max + 1.0);
      double sigma = 0.0;
      if (g.sigma) {
        sigma = *g.sigma;
      } else {
        const double gap = minimum_gap(model, g.max_length);
        sigma = std::isfinite(gap) ? std::min(gap / 6.0, 0.05) : 0.05;
      }
      check_positive(sigma, "--sigma");
      const double step = g.grid_step ? *g.grid_step : sigma / 4.0;
      check_positive(step, "--grid-step");
      SynthesisOptions so;
      so.threads = g.threads;
      const auto trace = synthesize_mollified(model, sigma, TimeGrid::half(g.grid_max, step), so);
      {
        Output o(g.output, out);
        write_csv(o.stream(), trace.samples);
      }
      Output side(g.output + ".json", out);
      side.stream() << dump_line(trace_sidecar(trace, s.area));
      return 0;
    }

    if (*invert) {
      std::ifstream in(input);
      if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + input);
      const std::string side_path = sidecar.empty() ? input + ".json" : sidecar;
      std::ifstream side_in(side_path);
      if (!side_in) throw Error(ErrorCode::InvalidInput, "cannot open " + side_path);
      json side;
      try {
        side_in >> side;
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, side_path + ": " + e.what());
      }
      double area = 0.0;
      const auto trace = trace_from(read_csv(in), side, &area);
      const auto res = full_inverse(trace, area, max_order);
      json ls = json::array();
      for (const auto& e : res.spectrum.entries) ls.push_back(spectrum_entry_json(e));
      json j{{"lengths", ls}, {"cone_orders", res.cone_orders}, {"genus", res.genus}};
      Output o(g.output, out);
      o.stream() << dump_line(j);
      return 0;
    }

    if (*decompose) {
      std::ifstream in(input);
      if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + input);
      const auto samples = read_csv(in);
      const auto fit =
          fit_cone_sum(samples, max_order, mode == "exact" ? FitMode::Exact : FitMode::Noisy);
      json j{{"orders", fit.orders}, {"residual", fit.residual}, {"runner_up", fit.runner_up}};
      Output o(g.output, out);
      o.stream() << dump_line(j);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "orbis: " << e.what() << "\n" << kSynopsis;
    return 2;
  } catch (const Error& e) {
    err << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  err << kSynopsis;
  return 2;
}

}  // namespace orbis::cli
