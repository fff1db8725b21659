#include "lindyn/serialize.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <variant>

#include "lindyn/errors.hpp"

namespace lindyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename Tag>
json sparse_to_json(const SparseMap<Tag>& v) {
  json out = json::array();
  for (const auto& [i, c] : v.entries()) out.push_back(json::array({i, c.str()}));
  return out;
}

template <typename Tag>
SparseMap<Tag> sparse_from_json(const json& j) {
  if (!j.is_array()) throw IoError("sparse element must be an array of [index, rational]");
  std::vector<std::pair<std::size_t, Rational>> items;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw IoError("sparse entry must be [index, rational]");
    items.emplace_back(e[0].get<std::size_t>(), rational_from_json(e[1]));
  }
  return SparseMap<Tag>::from_entries(items);
}

}  // namespace

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw IoError("rational must be a \"num/den\" string");
  return Rational::from_string(j.get<std::string>());
}

json vector_to_json(const SparseVector& v) { return sparse_to_json(v); }
SparseVector vector_from_json(const json& j) { return sparse_from_json<VectorTag>(j); }
json functional_to_json(const SparseFunctional& f) { return sparse_to_json(f); }
SparseFunctional functional_from_json(const json& j) { return sparse_from_json<FunctionalTag>(j); }

json operator_to_json(const OperatorExpr& op) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return json{{"op", "identity"}}; },
          [&](const ScalarMultipleNode& n) {
            return json{{"op", "scale"}, {"factor", n.factor.str()}};
          },
          [&](const BackwardShiftNode&) { return json{{"op", "backward_shift"}}; },
          [&](const ForwardShiftNode&) { return json{{"op", "forward_shift"}}; },
          [&](const FiniteRankUpdateNode& n) {
            json pairs = json::array();
            for (const auto& p : n.pairs) {
              pairs.push_back(json{{"vector", vector_to_json(p.vec)},
                                   {"functional", functional_to_json(p.fun)}});
            }
            return json{{"op", "finite_rank_update"}, {"pairs", std::move(pairs)}};
          },
          [&](const ComposeNode& n) {
            json factors = json::array();
            for (const auto& f : n.factors) factors.push_back(operator_to_json(f));
            return json{{"op", "compose"}, {"factors", std::move(factors)}};
          },
          [&](const InverseOfUpdateNode& n) {
            json pairs = json::array();
            for (const auto& p : n.base.pairs) {
              pairs.push_back(json{{"vector", vector_to_json(p.vec)},
                                   {"functional", functional_to_json(p.fun)}});
            }
            return json{{"op", "inverse_of_update"},
                        {"base", json{{"op", "finite_rank_update"}, {"pairs", std::move(pairs)}}}};
          },
      },
      op.node().v);
}

OperatorExpr operator_from_json(const json& j) {
  const std::string kind = field(j, "op").get<std::string>();
  if (kind == "identity") return OperatorExpr::identity();
  if (kind == "scale") return OperatorExpr::scalar_multiple(rational_from_json(field(j, "factor")));
  if (kind == "backward_shift") return OperatorExpr::backward_shift();
  if (kind == "forward_shift") return OperatorExpr::forward_shift();
  if (kind == "finite_rank_update") {
    std::vector<UpdatePair> pairs;
    for (const auto& p : field(j, "pairs")) {
      pairs.push_back(UpdatePair{vector_from_json(field(p, "vector")),
                                 functional_from_json(field(p, "functional"))});
    }
    return OperatorExpr::finite_rank_update(std::move(pairs));
  }
  if (kind == "compose") {
    std::vector<OperatorExpr> factors;
    for (const auto& f : field(j, "factors")) factors.push_back(operator_from_json(f));
    return OperatorExpr::compose(std::move(factors));
  }
  if (kind == "inverse_of_update") {
    return invert_update(operator_from_json(field(j, "base")));
  }
  throw IoError("unknown operator tag \"" + kind + "\"");
}

json grid_to_json(const GridSpec& g) {
  json coords = json::array();
  for (const auto& c : g.coordinates) coords.push_back(c.str());
  return json{{"dimension", g.dimension}, {"coordinates", std::move(coords)}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.dimension = field(j, "dimension").get<std::size_t>();
  for (const auto& c : field(j, "coordinates")) g.coordinates.push_back(rational_from_json(c));
  return g;
}

json schedule_to_json(const TargetSchedule& s) {
  json targets = json::array();
  for (const auto& tuple : s.targets) {
    json t = json::array();
    for (const auto& v : tuple) t.push_back(vector_to_json(v));
    targets.push_back(std::move(t));
  }
  json tol = json::array();
  for (const auto& r : s.tolerance_sq) tol.push_back(r.str());
  json out{{"m", s.m}, {"targets", std::move(targets)}, {"tolerance_sq", std::move(tol)}};
  out["grid"] = s.grid ? grid_to_json(*s.grid) : json(nullptr);
  return out;
}

TargetSchedule schedule_from_json(const json& j) {
  TargetSchedule s;
  s.m = field(j, "m").get<std::size_t>();
  for (const auto& tuple : field(j, "targets")) {
    std::vector<SparseVector> t;
    for (const auto& v : tuple) t.push_back(vector_from_json(v));
    s.targets.push_back(std::move(t));
  }
  for (const auto& r : field(j, "tolerance_sq")) s.tolerance_sq.push_back(rational_from_json(r));
  const json& g = field(j, "grid");
  if (!g.is_null()) s.grid = grid_from_json(g);
  return s;
}

json certificate_to_json(const SynthesisCertificate& c) {
  json vectors = json::array();
  for (const auto& v : c.vectors) vectors.push_back(vector_to_json(v));
  json visits = json::array();
  for (const auto& v : c.visits) {
    visits.push_back(json{{"target", v.target_index},
                          {"time", v.time},
                          {"error_sq_bound", v.error_sq_bound.str()}});
  }
  return json{{"lambda", c.lambda.str()},
              {"vectors", std::move(vectors)},
              {"visits", std::move(visits)},
              {"horizon", c.horizon}};
}

SynthesisCertificate certificate_from_json(const json& j) {
  SynthesisCertificate c;
  c.lambda = rational_from_json(field(j, "lambda"));
  for (const auto& v : field(j, "vectors")) c.vectors.push_back(vector_from_json(v));
  for (const auto& v : field(j, "visits")) {
    c.visits.push_back(Visit{field(v, "target").get<std::size_t>(),
                             field(v, "time").get<std::size_t>(),
                             rational_from_json(field(v, "error_sq_bound"))});
  }
  c.horizon = field(j, "horizon").get<std::size_t>();
  return c;
}

json certificate_file_to_json(const TargetSchedule& schedule, const SynthesisCertificate& cert,
                              bool verified) {
  return json{{"kind", "synthesis_certificate"},
              {"schedule", schedule_to_json(schedule)},
              {"certificate", certificate_to_json(cert)},
              {"verified", verified}};
}

json artifact_to_json(const DisjointTupleArtifact& artifact) {
  json similarities = json::array();
  for (const auto& s : artifact.similarities) similarities.push_back(operator_to_json(s));
  json sources = json::array();
  for (const auto& v : artifact.sources) sources.push_back(vector_to_json(v));
  json conjugates = json::array();
  for (const auto& r : artifact.conjugates) conjugates.push_back(operator_to_json(r));

  json out{{"kind", "disjoint_tuple"},
           {"m", artifact.m()},
           {"base", operator_to_json(artifact.base)},
           {"common_vector", vector_to_json(artifact.common_vector)},
           {"similarities", std::move(similarities)},
           {"sources", std::move(sources)},
           {"conjugates", std::move(conjugates)}};
  out["schedule"] = artifact.schedule ? schedule_to_json(*artifact.schedule) : json(nullptr);
  out["certificate"] =
      artifact.certificate ? certificate_to_json(*artifact.certificate) : json(nullptr);
  out["conjugated_schedule"] =
      artifact.conjugated_schedule ? schedule_to_json(*artifact.conjugated_schedule) : json(nullptr);
  if (artifact.dual) {
    json duals = json::array();
    for (const auto& f : artifact.dual->dual_sources) duals.push_back(functional_to_json(f));
    json rescale = json::array();
    for (const auto& c : artifact.dual->rescale) rescale.push_back(c.str());
    out["dual"] = json{{"common_functional", functional_to_json(artifact.dual->common_functional)},
                       {"dual_sources", std::move(duals)},
                       {"rescale", std::move(rescale)}};
  } else {
    out["dual"] = json(nullptr);
  }
  return out;
}

DisjointTupleArtifact artifact_from_json(const json& j) {
  if (field(j, "kind").get<std::string>() != "disjoint_tuple") {
    throw IoError("expected a \"disjoint_tuple\" artifact");
  }
  std::vector<OperatorExpr> similarities;
  for (const auto& s : field(j, "similarities")) similarities.push_back(operator_from_json(s));
  std::vector<SparseVector> sources;
  for (const auto& v : field(j, "sources")) sources.push_back(vector_from_json(v));
  std::vector<OperatorExpr> conjugates;
  for (const auto& r : field(j, "conjugates")) conjugates.push_back(operator_from_json(r));

  DisjointTupleArtifact art{operator_from_json(field(j, "base")),
                            vector_from_json(field(j, "common_vector")),
                            std::move(similarities),
                            std::move(sources),
                            std::move(conjugates),
                            std::nullopt,
                            std::nullopt,
                            std::nullopt,
                            std::nullopt};
  const std::size_t m = field(j, "m").get<std::size_t>();
  if (art.m() != m || art.similarities.size() != m || art.sources.size() != m) {
    throw IoError("artifact arity fields disagree");
  }
  const json& sched = field(j, "schedule");
  if (!sched.is_null()) art.schedule = schedule_from_json(sched);
  const json& cert = field(j, "certificate");
  if (!cert.is_null()) art.certificate = certificate_from_json(cert);
  const json& conj = field(j, "conjugated_schedule");
  if (!conj.is_null()) art.conjugated_schedule = schedule_from_json(conj);
  const json& dual = field(j, "dual");
  if (!dual.is_null()) {
    DualData d{functional_from_json(field(dual, "common_functional")), {}, {}};
    for (const auto& f : field(dual, "dual_sources")) d.dual_sources.push_back(functional_from_json(f));
    for (const auto& c : field(dual, "rescale")) d.rescale.push_back(rational_from_json(c));
    if (d.dual_sources.size() != m || d.rescale.size() != m) {
      throw IoError("dual data arity disagrees with artifact");
    }
    art.dual = std::move(d);
  }
  return art;
}

json orbit_report_to_json(const OrbitReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    json rec{{"target", r.target_index},
             {"best_time", r.best_time},
             {"best_sq_dist", r.best_sq_dist.str()}};
    rec["first_pass_time"] = r.first_pass_time ? json(*r.first_pass_time) : json(nullptr);
    rec["expected_time"] = r.expected_time ? json(*r.expected_time) : json(nullptr);
    rec["pass_at_expected"] = r.pass_at_expected;
    rec["pass"] = r.pass;
    records.push_back(std::move(rec));
  }
  return json{{"tuple", report.tuple_description},
              {"horizon", report.horizon},
              {"records", std::move(records)},
              {"all_pass", report.all_pass}};
}

OrbitReport orbit_report_from_json(const json& j) {
  OrbitReport report;
  report.tuple_description = field(j, "tuple").get<std::string>();
  report.horizon = field(j, "horizon").get<std::size_t>();
  for (const auto& r : field(j, "records")) {
    TargetRecord rec;
    rec.target_index = field(r, "target").get<std::size_t>();
    rec.best_time = field(r, "best_time").get<std::size_t>();
    rec.best_sq_dist = rational_from_json(field(r, "best_sq_dist"));
    const json& fp = field(r, "first_pass_time");
    if (!fp.is_null()) rec.first_pass_time = fp.get<std::size_t>();
    const json& et = field(r, "expected_time");
    if (!et.is_null()) rec.expected_time = et.get<std::size_t>();
    rec.pass_at_expected = field(r, "pass_at_expected").get<bool>();
    rec.pass = field(r, "pass").get<bool>();
    report.records.push_back(std::move(rec));
  }
  report.all_pass = field(j, "all_pass").get<bool>();
  return report;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading \"" + path + "\"");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing \"" + path + "\"");
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON in \"" + path + "\"");
  return j;
}

}  // namespace lindyn
