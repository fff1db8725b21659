#include "lindyn/driver.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <random>

#include "lindyn/errors.hpp"
#include "lindyn/serialize.hpp"
#include "lindyn/verify.hpp"

namespace lindyn {

std::vector<Rational> RunConfig::default_grid_coords() {
  return {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
}

void RunConfig::validate() const {
  if (m == 0 || m > 8) throw InvalidInput("config: m must be in 1..8");
  if (target_count == 0 || target_count > 10000) {
    throw InvalidInput("config: targets must be in 1..10000");
  }
  if (lambda.abs() < Rational(2)) throw InvalidInput("config: |lambda| must be at least 2");
  if (grid_dim == 0 || grid_dim > 8) throw InvalidInput("config: grid dimension must be in 1..8");
  grid().validate();
  if (epsilon_base.sign() <= 0 || !(epsilon_base < Rational(1)) || !epsilon_base.is_dyadic()) {
    throw InvalidInput("config: epsilon base must be dyadic in (0, 1)");
  }
}

RunConfig apply_config_file(RunConfig base, const std::string& path) {
  json j;
  try {
    j = parse_json_file(path);
  } catch (const IoError& e) {
    // A config file the user named but we cannot parse is a config error.
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  try {
    if (j.contains("m")) base.m = j["m"].get<std::size_t>();
    if (j.contains("lambda")) base.lambda = Rational::from_string(j["lambda"].get<std::string>());
    if (j.contains("targets")) base.target_count = j["targets"].get<std::size_t>();
    if (j.contains("grid_dim")) base.grid_dim = j["grid_dim"].get<std::size_t>();
    if (j.contains("grid_coords")) {
      base.grid_coords.clear();
      for (const auto& c : j["grid_coords"]) {
        base.grid_coords.push_back(Rational::from_string(c.get<std::string>()));
      }
      std::sort(base.grid_coords.begin(), base.grid_coords.end());
    }
    if (j.contains("epsilon_base")) {
      base.epsilon_base = Rational::from_string(j["epsilon_base"].get<std::string>());
    }
    if (j.contains("horizon")) base.horizon_override = j["horizon"].get<std::size_t>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) base.output_path = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return base;
}

std::vector<SparseFunctional> seeded_functionals(std::uint64_t seed, std::size_t m,
                                                 std::size_t coord_range) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> coord(0, coord_range);
  std::uniform_int_distribution<int> numer(-4, 4);
  std::uniform_int_distribution<int> denom_pow(0, 2);
  std::uniform_int_distribution<std::size_t> terms(1, 3);
  std::vector<SparseFunctional> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    SparseFunctional f;
    while (f.is_zero()) {
      std::vector<std::pair<std::size_t, Rational>> items;
      const std::size_t n = terms(rng);
      for (std::size_t t = 0; t < n; ++t) {
        const long num = numer(rng);
        const long den = 1L << denom_pow(rng);
        items.emplace_back(coord(rng), Rational(num, den));
      }
      f = SparseFunctional::from_entries(items);
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

int mapped(const std::function<int()>& body, std::ostream& log) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const IoError& e) {
    log << "io error: " << e.what() << "\n";
    return exit_io_error;
  } catch (const NotInvertible& e) {
    log << "verification error: " << e.what() << "\n";
    return exit_verification_failed;
  } catch (const json::exception& e) {
    log << "io error: " << e.what() << "\n";
    return exit_io_error;
  }
}

std::string default_out(const std::string& configured, const char* fallback) {
  return configured.empty() ? fallback : configured;
}

void print_orbit_summary(const OrbitReport& report, std::ostream& log) {
  log << "target  best_n  first_pass  at_expected  pass\n";
  for (const auto& r : report.records) {
    log << "  " << r.target_index << "\t" << r.best_time << "\t"
        << (r.first_pass_time ? std::to_string(*r.first_pass_time) : std::string("-")) << "\t"
        << (r.expected_time ? (r.pass_at_expected ? "yes" : "no") : "-") << "\t"
        << (r.pass ? "yes" : "no") << "\n";
  }
}

}  // namespace

int run_synthesize(const RunConfig& config, std::ostream& log) {
  return mapped(
      [&]() {
        config.validate();
        const TargetSchedule schedule =
            enumerate_targets(config.grid(), config.target_count, config.m, config.epsilon_base);
        const SynthesisCertificate cert = synthesize(config.lambda, schedule);
        const CertificateCheck check = verify_certificate(cert, schedule);
        const std::string path = default_out(config.output_path, "certificate.json");
        write_text_file(path, dump_canonical(certificate_file_to_json(schedule, cert, check.pass)));
        log << "certificate: " << path << "\n";
        log << "targets: " << schedule.targets.size() << ", horizon: " << cert.horizon
            << ", component visits: " << check.visits.size() << "\n";
        log << "post-hoc verification: " << (check.pass ? "PASS" : "FAIL") << "\n";
        return check.pass ? exit_ok : exit_verification_failed;
      },
      log);
}

int run_construct(const RunConfig& config, bool dual, std::ostream& log) {
  return mapped(
      [&]() {
        config.validate();
        const TargetSchedule schedule =
            enumerate_targets(config.grid(), config.target_count, config.m, config.epsilon_base);
        DisjointTupleArtifact artifact = [&]() {
          if (!dual) return construct_disjoint_tuple(config.m, schedule, config.lambda);
          // Dual pipeline: sources come from a synthesis certificate, the
          // functionals from the seeded generator, repaired for genericity.
          SynthesisCertificate cert = synthesize(config.lambda, schedule);
          const SparseVector x = SparseVector::unit(0);
          const SparseFunctional f = SparseFunctional::unit(0);
          std::vector<SparseFunctional> fs =
              seeded_functionals(config.seed, config.m, config.grid_dim + 2);
          RepairResult rep =
              repair_genericity(x, f, cert.vectors, std::move(fs), &cert, &schedule);
          return construct_dual_tuple(scaled_backward_shift(config.lambda), x, f, rep.ys,
                                      rep.fs, &*rep.certificate, &schedule);
        }();
        const std::string path = default_out(config.output_path, "artifact.json");
        write_text_file(path, dump_canonical(artifact_to_json(artifact)));
        log << "artifact: " << path << "\n";
        log << "m: " << artifact.m() << (artifact.dual ? " (with dual data)" : "") << "\n";
        return exit_ok;
      },
      log);
}

int run_verify(const std::string& artifact_path, const RunConfig& config, std::ostream& log) {
  return mapped(
      [&]() {
        const json j = parse_json_file(artifact_path);
        const std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : "";
        const std::string path =
            default_out(config.output_path, (artifact_path + ".report.json").c_str());

        if (kind == "synthesis_certificate") {
          const TargetSchedule schedule = schedule_from_json(j.at("schedule"));
          const SynthesisCertificate cert = certificate_from_json(j.at("certificate"));
          const CertificateCheck check = verify_certificate(cert, schedule);
          json out{{"kind", "verification_report"}, {"certificate_check", check.pass}};
          write_text_file(path, dump_canonical(out));
          log << "certificate check: " << (check.pass ? "PASS" : "FAIL") << "\n";
          log << "report: " << path << "\n";
          return check.pass ? exit_ok : exit_verification_failed;
        }
        if (kind != "disjoint_tuple") throw IoError("unrecognized report kind \"" + kind + "\"");

        const DisjointTupleArtifact artifact = artifact_from_json(j);
        std::size_t horizon = 50;
        if (artifact.certificate) horizon = artifact.certificate->horizon;
        if (config.horizon_override) horizon = *config.horizon_override;

        bool ok = similarity_audit(artifact, horizon);
        log << "similarity audit (horizon " << horizon << "): " << (ok ? "PASS" : "FAIL") << "\n";
        json out{{"kind", "verification_report"}, {"similarity_audit", ok}};

        if (artifact.dual) {
          const std::size_t dual_horizon = config.horizon_override.value_or(50);
          const bool dual_ok = dual_similarity_audit(artifact, dual_horizon);
          log << "dual similarity audit (horizon " << dual_horizon
              << "): " << (dual_ok ? "PASS" : "FAIL") << "\n";
          out["dual_similarity_audit"] = dual_ok;
          ok = ok && dual_ok;
        } else {
          out["dual_similarity_audit"] = json(nullptr);
        }

        if (artifact.conjugated_schedule) {
          std::vector<std::size_t> expected;
          const std::vector<std::size_t>* expected_ptr = nullptr;
          if (artifact.certificate) {
            for (const auto& v : artifact.certificate->visits) expected.push_back(v.time);
            expected_ptr = &expected;
          }
          const OrbitReport report =
              orbit_report(artifact.tuple(), artifact.common_vector, *artifact.conjugated_schedule,
                           horizon, expected_ptr, ExecMode::parallel, "conjugated tuple orbit");
          print_orbit_summary(report, log);
          out["orbit_report"] = orbit_report_to_json(report);
          ok = ok && report.all_pass;
        } else {
          out["orbit_report"] = json(nullptr);
        }

        write_text_file(path, dump_canonical(out));
        log << "report: " << path << "\n";
        log << "verdict: " << (ok ? "PASS" : "FAIL") << "\n";
        return ok ? exit_ok : exit_verification_failed;
      },
      log);
}

}  // namespace lindyn
