// gtr: compute, potential, verify, dual.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "gtr/ceo.hpp"
#include "gtr/potential.hpp"
#include "gtr/verify.hpp"
#include "gtr/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gtr;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kInternal = 3 };

struct Config {
  std::string curve;
  int chi = 3;
  int nmax = 0;  // 0: no limit
  std::string format = "text";
  std::string out = ".";
  int jobs = 1;
  std::uint64_t seed = 20240917;
  int kmax = -1;
  bool all = false, loop = false, dual = false, symmetry = false, det = false, ceo = false;
};

bool text(const Config& cfg) { return cfg.format == "text"; }

// A file path, a golden-table label such as "(z^2/2, z)", or inline curve text.
SpectralCurve load_curve(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curve(ss.str());
  }
  if (arg.find('=') == std::string::npos) {
    auto rows = load_golden();
    auto it = rows.find(arg);
    if (it == rows.end()) fail(ErrorKind::ParseError, "no curve file or golden row named '" + arg + "'");
    SpectralCurve c = parse_curve(it->second.curve);
    c.label = arg;
    return c;
  }
  return parse_curve(arg);
}

EngineOptions engine_options(const Config& cfg) {
  EngineOptions o;
  o.jobs = cfg.jobs;
  return o;
}

json provenance(const SpectralCurve& c) {
  return json{{"curve", curve_text(c)}, {"curve_hash", curve_hash(c)}, {"engine_version", kEngineVersion}};
}

void write_cells(const Cells& cells, const SpectralCurve& c, const Config& cfg, const std::string& prefix) {
  fs::create_directories(cfg.out);
  json written = json::array();
  for (const auto& [gn, w] : cells) {
    if (cfg.nmax > 0 && gn.second > cfg.nmax) continue;
    json j = provenance(c);
    j.update(to_json(w));
    std::string name = prefix + "_g" + std::to_string(gn.first) + "_n" + std::to_string(gn.second) + ".json";
    std::ofstream(fs::path(cfg.out) / name) << j.dump(2) << "\n";
    if (text(cfg)) std::cout << name << ": " << w.sorted_terms().size() << " terms\n";
    written.push_back(name);
  }
  if (!text(cfg)) std::cout << json{{"curve_hash", curve_hash(c)}, {"files", written}}.dump() << "\n";
}

int cmd_compute(const Config& cfg) {
  SpectralCurve c = load_curve(cfg.curve);
  write_cells(generalized_tr(c, cfg.chi, engine_options(cfg)), c, cfg, "omega");
  return kOk;
}

std::optional<GoldenRow> golden_row_for(const SpectralCurve& c) {
  std::string h = curve_hash(c);
  for (const auto& [label, row] : load_golden())
    if (curve_hash(parse_curve(row.curve)) == h) return row;
  return std::nullopt;
}

int cmd_potential(const Config& cfg) {
  SpectralCurve c = load_curve(cfg.curve);
  Cells cells = generalized_tr(c, cfg.chi, engine_options(cfg));
  Potential p = extract_potential(cells, cfg.chi, c.label);
  std::string F = render_F(p, cfg.chi);
  VerificationReport rep;
  rep.check = "golden";
  rep.curve = c.label.empty() ? curve_text(c) : c.label;
  std::optional<GoldenRow> row = golden_row_for(c);
  if (row) rep = golden_compare(p, *row, cfg.chi);
  else rep.verdict = Verdict::Skipped;
  if (text(cfg)) {
    std::cout << "F = " << F << "\n";
    std::cout << "golden: " << verdict_name(rep.verdict);
    if (row) std::cout << " (" << row->label << ")";
    std::cout << "\n";
    for (const auto& w : rep.witnesses) std::cout << "  " << w.dump() << "\n";
  } else {
    json j = provenance(c);
    j["F"] = F;
    j["golden"] = to_json(rep);
    std::cout << j.dump() << "\n";
  }
  return rep.verdict == Verdict::Fail ? kCheckFailed : kOk;
}

void emit(const VerificationReport& r, const Config& cfg) {
  if (!text(cfg)) {
    std::cout << to_json(r).dump() << "\n";
    return;
  }
  std::cout << verdict_name(r.verdict) << "  " << r.check;
  if (r.params.contains("reason")) std::cout << "  (" << r.params["reason"].get<std::string>() << ")";
  std::cout << "\n";
  if (r.check == "loop" && r.params.contains("points")) {
    // Levels k < r are the loop equations proper; k >= r are their corollaries.
    for (const auto& p : r.params["points"]) {
      std::string q = p["point"];
      int rr = p["r"], K = p["kmax"];
      bool low = true, high = true;
      for (const auto& w : r.witnesses)
        if (w["point"] == q) (w["k"].get<int>() < rr ? low : high) = false;
      std::cout << "  at " << q << ": k = 0.." << std::min(K, rr - 1) << " " << (low ? "PASS" : "FAIL");
      if (K >= rr) std::cout << ", k = " << rr << ".." << K << " " << (high ? "PASS" : "FAIL") << " (corollary)";
      std::cout << "\n";
    }
  }
  for (const auto& w : r.witnesses) std::cout << "  " << w.dump() << "\n";
}

int cmd_verify(Config cfg) {
  if (cfg.all || !(cfg.loop || cfg.dual || cfg.symmetry || cfg.det || cfg.ceo))
    cfg.loop = cfg.dual = cfg.symmetry = cfg.det = cfg.ceo = true;
  SpectralCurve c = load_curve(cfg.curve);
  GeneralizedTR e(c, engine_options(cfg));
  Cells cells = e.all(cfg.chi);
  std::vector<VerificationReport> reports;
  if (cfg.symmetry) reports.push_back(symmetry_check(c, cells));
  if (cfg.loop) {
    VerificationReport r = loop_suite(e, cfg.chi, cfg.kmax);
    r.params["seed"] = cfg.seed;
    reports.push_back(r);
    // Negative control on one loop point and one stable cell picked by the seed.
    std::vector<Point> pts;
    for (const Point& q : c.keys)
      if (loop_applicable(c, q)) pts.push_back(q);
    if (!pts.empty() && cfg.chi >= 1) {
      std::mt19937_64 rng(cfg.seed);
      const Point& q = pts[rng() % pts.size()];
      std::vector<std::pair<int, int>> gn;
      for (int chi = 1; chi <= cfg.chi; ++chi)
        for (int g = 0; 2 * g - 1 <= chi; ++g) gn.emplace_back(g, chi + 1 - 2 * g);
      auto [g, n] = gn[rng() % gn.size()];
      VerificationReport nc = loop_negative_control(e, q, g, n);
      nc.params["seed"] = cfg.seed;
      reports.push_back(nc);
    }
  }
  if (cfg.ceo) reports.push_back(compare_engines(c, cfg.chi, engine_options(cfg)));
  if (cfg.det) reports.push_back(determinantal_check(c, cells, cfg.nmax > 0 ? cfg.nmax : 3, cfg.chi));
  if (cfg.dual)
    for (auto& r : dual_checks(c, cells, cfg.chi)) reports.push_back(std::move(r));
  bool ok = true;
  for (const auto& r : reports) {
    emit(r, cfg);
    if (r.verdict == Verdict::Fail) ok = false;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_dual(const Config& cfg) {
  SpectralCurve c = load_curve(cfg.curve);
  Cells omega = generalized_tr(c, cfg.chi, engine_options(cfg));
  Cells vee = xy_dual(c, omega, cfg.chi);
  SpectralCurve d = dual_curve(c);
  if (text(cfg)) std::cout << "dual curve: " << curve_text(d) << "\n";
  write_cells(vee, d, cfg, "omega_vee");
  return kOk;
}

void error_out(const std::string& kind, std::string message) {
  if (message.rfind(kind + ": ", 0) == 0) message = message.substr(kind.size() + 2);
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized topological recursion on rational spectral curves"};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&](CLI::App* s) {
    s->add_option("--curve", cfg.curve, "curve file, golden label, or inline 'dx = ...; dy = ...; keys = [...]'")
        ->required();
    s->add_option("--chi", cfg.chi, "largest 2g - 2 + n")->check(CLI::PositiveNumber);
    s->add_option("--nmax", cfg.nmax, "largest n to write or check")->check(CLI::PositiveNumber);
    s->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
    s->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* compute = app.add_subcommand("compute", "write every omega^{(g)}_n as JSON");
  common(compute);
  compute->add_option("--out", cfg.out, "output directory");
  CLI::App* potential = app.add_subcommand("potential", "print F and compare with the golden table");
  common(potential);
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  common(verify);
  verify->add_option("--seed", cfg.seed, "seed for the negative control");
  verify->add_option("--kmax", cfg.kmax, "highest loop equation (default r)");
  verify->add_flag("--all", cfg.all);
  verify->add_flag("--loop", cfg.loop);
  verify->add_flag("--dual", cfg.dual);
  verify->add_flag("--symmetry", cfg.symmetry);
  verify->add_flag("--det", cfg.det);
  verify->add_flag("--ceo", cfg.ceo);
  CLI::App* dual = app.add_subcommand("dual", "write the x-y dual differentials");
  common(dual);
  dual->add_option("--out", cfg.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  try {
    if (*compute) return cmd_compute(cfg);
    if (*potential) return cmd_potential(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*dual) return cmd_dual(cfg);
  } catch (const Error& e) {
    error_out(error_name(e.kind()), e.what());
    if (e.internal()) return kInternal;
    return e.kind() == ErrorKind::NonHolomorphicDual ? kCheckFailed : kInputError;
  } catch (const std::exception& e) {
    error_out("Internal", e.what());
    return kInternal;
  }
  return kOk;
}
