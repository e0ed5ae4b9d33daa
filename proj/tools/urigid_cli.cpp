#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "urigid/affine.hpp"
#include "urigid/certify.hpp"
#include "urigid/gale.hpp"
#include "urigid/generators.hpp"
#include "urigid/io.hpp"
#include "urigid/stress.hpp"

using namespace urigid;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNegative = 2;
constexpr int kExitInconclusive = 3;

struct RunConfig {
  std::string input;
  std::string second_input;
  std::string output;
  std::string stress_path;
  std::string spec;
  std::string dims;
  Tolerances tol;
  std::uint64_t seed = 0;
  int restarts = -1;
  int iterations = 10000;
  int jobs = 1;
  int verbosity = 0;
};

// Results go to --out (atomically) or stdout, always in one piece.
void emit(const RunConfig& rc, const std::string& text) {
  if (rc.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file_atomic(rc.output, text);
  }
}

void note(const RunConfig& rc, const std::string& msg) {
  if (rc.verbosity > 0) std::cerr << msg << "\n";
}

Framework load_framework(const std::string& path) { return parse_framework(read_file(path)); }

StressSearchOptions search_options(const RunConfig& rc) {
  StressSearchOptions s;
  if (rc.restarts >= 0) s.restarts = rc.restarts;
  s.iterations = rc.iterations;
  s.seed = rc.seed;
  s.jobs = rc.jobs;
  return s;
}

int verdict_exit(const Certificate& cert) {
  if (cert.verdict == Verdict::UniversallyRigid) return 0;
  if (cert.verdict == Verdict::AffineFlexExists || cert.not_universally_rigid) return kExitNegative;
  return kExitInconclusive;
}

int run_certify(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  CertifyOptions opts;
  opts.search = search_options(rc);
  if (!rc.stress_path.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(rc.stress_path));
    } catch (const Json::parse_error& e) {
      throw Error(std::string("stress: invalid JSON: ") + e.what());
    }
    opts.user_stress = stress_from_json(j, fw);
  }
  const Certificate cert = certify(fw, rc.tol, opts);
  emit(rc, serialize_certificate(cert));
  note(rc, std::string("verdict: ") + to_string(cert.verdict) + " (" + to_string(cert.route) + ")");
  return verdict_exit(cert);
}

int run_flex(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  if (!check_spanning(fw.config(), rc.tol)) throw Error("configuration does not affinely span R^r");
  const auto w = detect_quadric_at_infinity(fw, rc.tol);
  if (!w) {
    emit(rc, "none\n");
    return 0;
  }
  const AffineFlex f = flex_motion_from_quadric(fw, *w, rc.tol);
  const FlexWitness fw_out{w->phi, f.t, f.motion.A, f.flexed.points()};
  const Framework flexed(fw.graph(), f.flexed);
  Json j = flex_to_json(fw_out);
  j["congruence_gap"] = congruence_gap(fw.config(), f.flexed);
  j["equivalent"] = equivalent(fw, flexed, rc.tol);
  emit(rc, j.dump(2) + "\n");
  return 0;
}

int run_stress(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  if (!check_spanning(fw.config(), rc.tol)) throw Error("configuration does not affinely span R^r");
  Json basis = Json::array();
  for (const auto& w : stress_space_basis(fw, rc.tol)) basis.push_back(stress_to_json(fw, w)["omega"]);
  Json search = nullptr;
  if (fw.gale_dimension() >= 1) {
    search = Json{{"found", false}};
    if (const auto res = find_max_rank_psd_stress(fw, rc.tol, search_options(rc))) {
      const StressReport rep = validate_stress(fw, res->matrix.S, rc.tol);
      search = Json{{"found", true},
                    {"objective", res->objective},
                    {"restart", res->restart},
                    {"omega", stress_to_json(fw, res->stress)["omega"]},
                    {"rank", rep.rank},
                    {"target_rank", rep.target_rank},
                    {"psd", rep.psd},
                    {"spectrum", matrix_to_json(rep.eigenvalues.transpose())[0]}};
    }
  }
  const Json out{{"stress_space_dim", basis.size()}, {"basis", std::move(basis)}, {"search", std::move(search)}};
  emit(rc, out.dump(2) + "\n");
  return 0;
}

int run_gale(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  const GaleMatrix g = gale_basis(fw.config(), rc.tol);
  Json out{{"Z", matrix_to_json(g.Z)},
           {"general_position", gale_general_position_check(g.Z, rc.tol)},
           {"Z_hat", nullptr}};
  if (const auto res = find_max_rank_psd_stress(fw, rc.tol, search_options(rc)))
    out["Z_hat"] = matrix_to_json(canonical_gale(fw, res->matrix, rc.tol).Z);
  emit(rc, out.dump(2) + "\n");
  return 0;
}

int run_gen(const RunConfig& rc) {
  emit(rc, serialize_framework(generate(parse_generator_spec(rc.spec))));
  return 0;
}

std::vector<int> parse_dims(const std::string& text, int r) {
  if (text.empty()) return {r, r + 1, r + 2};
  const auto dots = text.find("..");
  int lo = 0;
  int hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::logic_error&) {
    throw Error("--dims: expected a..b, got '" + text + "'");
  }
  if (lo < 1 || hi < lo) throw Error("--dims: need 1 <= a <= b, got '" + text + "'");
  std::vector<int> dims;
  for (int d = lo; d <= hi; ++d) dims.push_back(d);
  return dims;
}

int run_refute(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  const auto dims = parse_dims(rc.dims, fw.dimension());
  RefuteOptions opts;
  opts.jobs = rc.jobs;
  const int restarts = rc.restarts >= 0 ? rc.restarts : 20;
  const auto res = refute_by_search(fw, dims, restarts, rc.seed, opts);
  Json out{{"found", res.has_value()}};
  if (res) {
    out["dimension"] = res->dimension;
    out["restart"] = res->restart;
    out["residual"] = res->residual;
    out["congruence_gap"] = res->gap;
    out["points"] = matrix_to_json(res->q.points().transpose());
  }
  emit(rc, out.dump(2) + "\n");
  return res ? kExitNegative : 0;
}

int run_verify(const RunConfig& rc) {
  const Framework fw = load_framework(rc.input);
  const Certificate cert = parse_certificate(read_file(rc.second_input));
  const auto failures = certificate_failures(fw, cert, rc.tol);
  std::string text;
  if (failures.empty()) {
    text = "valid\n";
  } else {
    text = "rejected\n";
    for (const auto& f : failures) text += "  " + f + "\n";
  }
  emit(rc, text);
  return failures.empty() ? 0 : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal rigidity certificates for bar frameworks"};
  app.require_subcommand(1);
  RunConfig rc;

  auto positive = CLI::PositiveNumber;
  app.add_option("--rank-rtol", rc.tol.rank_rtol, "relative rank tolerance")->check(positive);
  app.add_option("--psd-atol", rc.tol.psd_atol, "PSD tolerance")->check(positive);
  app.add_option("--residual-atol", rc.tol.residual_atol, "residual tolerance")->check(positive);
  app.add_option("--seed", rc.seed, "seed for every randomized step");
  app.add_option("--jobs", rc.jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_flag("-v,--verbose", rc.verbosity, "diagnostics on stderr");
  app.add_option("-o,--out", rc.output, "output file (default stdout)");

  auto* certify_cmd = app.add_subcommand("certify", "certify a framework");
  certify_cmd->add_option("framework", rc.input)->required();
  certify_cmd->add_option("--stress", rc.stress_path, "use this stress instead of searching");
  certify_cmd->add_option("--restarts", rc.restarts)->check(CLI::NonNegativeNumber);
  certify_cmd->add_option("--iterations", rc.iterations)->check(CLI::PositiveNumber);

  auto* flex_cmd = app.add_subcommand("flex", "affine flex witness or none");
  flex_cmd->add_option("framework", rc.input)->required();

  auto* stress_cmd = app.add_subcommand("stress", "stress space and PSD stress search");
  stress_cmd->add_option("framework", rc.input)->required();
  stress_cmd->add_option("--restarts", rc.restarts)->check(CLI::NonNegativeNumber);
  stress_cmd->add_option("--iterations", rc.iterations)->check(CLI::PositiveNumber);

  auto* gale_cmd = app.add_subcommand("gale", "Gale matrix and canonical Gale matrix");
  gale_cmd->add_option("framework", rc.input)->required();

  auto* gen_cmd = app.add_subcommand("gen", "generate a framework");
  gen_cmd->add_option("spec", rc.spec, "e.g. lateration:n=8,r=2,seed=3 or named:square-c4")->required();

  auto* refute_cmd = app.add_subcommand("refute", "search for an equivalent non-congruent framework");
  refute_cmd->add_option("framework", rc.input)->required();
  refute_cmd->add_option("--dims", rc.dims, "target dimensions a..b (default r..r+2)");
  refute_cmd->add_option("--restarts", rc.restarts)->check(CLI::NonNegativeNumber);

  auto* verify_cmd = app.add_subcommand("verify", "check a certificate against a framework");
  verify_cmd->add_option("framework", rc.input)->required();
  verify_cmd->add_option("certificate", rc.second_input)->required();

  // All options are global or per-subcommand flags; accept them anywhere.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    rc.tol.validate();
    if (certify_cmd->parsed()) return run_certify(rc);
    if (flex_cmd->parsed()) return run_flex(rc);
    if (stress_cmd->parsed()) return run_stress(rc);
    if (gale_cmd->parsed()) return run_gale(rc);
    if (gen_cmd->parsed()) return run_gen(rc);
    if (refute_cmd->parsed()) return run_refute(rc);
    if (verify_cmd->parsed()) return run_verify(rc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
