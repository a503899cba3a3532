#include "bethe_vqe/cli/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace bethe_vqe::cli {

using nlohmann::json;

ChainModel TableSpec::model(int length) const {
  return boundary == Boundary::Closed ? ChainModel::closed(length, delta)
                                      : ChainModel::open(length, delta, h, h_prime);
}

const TableSpec& Manifest::table(int number) const {
  for (const auto& t : tables)
    if (t.table == number) return t;
  throw std::invalid_argument("no table " + std::to_string(number) + " in manifest");
}

std::string default_manifest_path() {
#ifdef BETHE_VQE_DATA_DIR
  return std::string(BETHE_VQE_DATA_DIR) + "/tables.json";
#else
  return "data/tables.json";
#endif
}

namespace {

RunMode parse_mode(const std::string& s) {
  if (s == "ground") return RunMode::Ground;
  if (s == "excited") return RunMode::Excited;
  throw std::invalid_argument("objective must be ground or excited");
}

TableRow parse_row(const json& j) {
  TableRow r;
  r.length = j.at("L").get<int>();
  r.down_spins = j.at("M").get<int>();
  r.energy = j.at("energy").get<std::string>();
  r.true_roots = j.at("true_roots").get<std::vector<std::string>>();
  r.statevector_roots = j.at("statevector_roots").get<std::vector<std::string>>();
  r.template_spec = j.at("template").get<std::string>();
  r.theta0 = j.at("theta0").get<std::vector<double>>();
  r.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("simplex_scale")) r.simplex_scale = j["simplex_scale"].get<double>();
  if (j.contains("tolerance")) r.tolerance = j["tolerance"].get<double>();
  if (static_cast<int>(r.true_roots.size()) != r.down_spins)
    throw std::invalid_argument("manifest row L=" + std::to_string(r.length) + " has the wrong root count");
  return r;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  const json doc = json::parse(in);

  Manifest m;
  for (const auto& t : doc.at("tables")) {
    TableSpec spec;
    spec.table = t.at("table").get<int>();
    spec.title = t.value("title", "");
    spec.boundary = parse_boundary(t.at("boundary").get<std::string>());
    spec.delta = t.at("delta").get<double>();
    spec.h = t.value("h", 0.0);
    spec.h_prime = t.value("h_prime", 0.0);
    spec.mode = parse_mode(t.at("objective").get<std::string>());
    spec.tolerance = t.at("tolerance").get<double>();
    spec.shots_tolerance = t.at("shots_tolerance").get<double>();
    for (const auto& r : t.at("rows")) spec.rows.push_back(parse_row(r));
    m.tables.push_back(std::move(spec));
  }

  const auto& s = doc.at("error_sweep");
  m.sweep.shots = s.at("shots").get<std::vector<long long>>();
  m.sweep.repeats = s.at("repeats").get<int>();
  m.sweep.seed = s.at("seed").get<std::uint64_t>();
  for (const auto& j : s.at("models")) {
    SweepModel sm;
    const auto boundary = parse_boundary(j.at("boundary").get<std::string>());
    const int length = j.at("L").get<int>();
    const double delta = j.at("delta").get<double>();
    sm.model = boundary == Boundary::Closed
                   ? ChainModel::closed(length, delta)
                   : ChainModel::open(length, delta, j.value("h", 0.0), j.value("h_prime", 0.0));
    sm.down_spins = j.at("M").get<int>();
    sm.template_spec = j.at("template").get<std::string>();
    sm.newton_guess = j.at("newton_guess").get<std::vector<std::string>>();
    sm.theta0 = j.at("theta0").get<std::vector<double>>();
    m.sweep.models.push_back(std::move(sm));
  }
  return m;
}

}  // namespace bethe_vqe::cli
