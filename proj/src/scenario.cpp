#include "eigenforce/scenario.hpp"

#include "eigenforce/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

namespace eigenforce {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stream index reserved for the seeded disorder draw of ring models, away
// from the perturbation sample indices that start at 0.
constexpr std::uint64_t kDisorderStream = 0xD15011DE5ULL;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(join(path, item.key()), "unknown key");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

Complex complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return {number(v, path), 0.0};
  if (v.is_string()) {
    try {
      return parse_complex(v.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (v.is_array() && v.size() == 2) {
    return {number(v[0], path + ".0"), number(v[1], path + ".1")};
  }
  throw ConfigError(path, "expected a complex number: number, \"a+bi\" string, or [re, im]");
}

std::vector<double> real_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "." + std::to_string(i)));
  return out;
}

Eigen::VectorXd real_vector(const json& v, const std::string& path) {
  const auto xs = real_list(v, path);
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Index>(xs.size()));
}

// A matrix is a file path, a list of row strings, or a list of rows of
// complex values.
CMatrix matrix_value(const json& v, const std::string& path, const fs::path& base) {
  try {
    if (v.is_string()) return read_matrix_file(base / v.get<std::string>()).matrix();
    if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& r) { return r.is_string(); })) {
      std::string text;
      for (const auto& row : v) text += row.get<std::string>() + "\n";
      return parse_matrix(text).matrix();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a matrix (file path or rows)");
  const auto n = static_cast<Index>(v.size());
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    const std::string rp = path + "." + std::to_string(r);
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw ConfigError(rp, "row has " + std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                                std::to_string(n));
    }
    for (Index c = 0; c < n; ++c) m(r, c) = complex_value(row[static_cast<std::size_t>(c)], rp + "." + std::to_string(c));
  }
  return m;
}

Eigen::MatrixXd real_matrix_value(const json& v, const std::string& path, const fs::path& base) {
  const CMatrix m = matrix_value(v, path, base);
  if (!m.imag().isZero(0.0)) throw ConfigError(path, "expected a real matrix");
  return m.real();
}

void require_dim(const CMatrix& m, Index n, const std::string& path) {
  if (m.rows() != n) {
    throw ConfigError(path, "is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                std::to_string(n) + "x" + std::to_string(n));
  }
}

void read_explicit(const json& m, const fs::path& base, ModelConfig& cfg) {
  check_keys(m, "model", {"type", "A", "B", "C", "coefficients"});
  if (m.contains("coefficients")) {
    if (m.contains("A") || m.contains("B") || m.contains("C")) {
      throw ConfigError("model.coefficients", "give either coefficients or A/B/C, not both");
    }
    const json& list = m.at("coefficients");
    if (!list.is_array() || list.empty()) throw ConfigError("model.coefficients", "expected a non-empty list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      cfg.coefficients.push_back(matrix_value(list[k], "model.coefficients." + std::to_string(k), base));
    }
  } else {
    if (!m.contains("A")) throw ConfigError("model.A", "explicit model needs the constant term A");
    cfg.coefficients.push_back(matrix_value(m.at("A"), "model.A", base));
    for (const char* key : {"B", "C"}) {
      if (m.contains(key)) {
        cfg.coefficients.push_back(matrix_value(m.at(key), std::string("model.") + key, base));
      } else if (std::string(key) == "B" && m.contains("C")) {
        cfg.coefficients.push_back(CMatrix::Zero(cfg.coefficients[0].rows(), cfg.coefficients[0].rows()));
      }
    }
  }
  const Index n = cfg.coefficients[0].rows();
  for (std::size_t k = 1; k < cfg.coefficients.size(); ++k) {
    require_dim(cfg.coefficients[k], n, "model.coefficients." + std::to_string(k));
  }
}

void read_ring(const json& m, std::uint64_t seed, ModelConfig& cfg) {
  check_keys(m, "model", {"type", "variant", "N", "D", "a", "b", "h", "U", "U_rate", "h_rate", "disorder_sigma"});
  const std::string variant = m.value("variant", std::string("omega_le"));
  if (variant != "omega" && variant != "omega_le") {
    throw ConfigError("model.variant", "expected \"omega\" or \"omega_le\", got \"" + variant + "\"");
  }
  cfg.convective = variant == "omega_le";
  if (!m.contains("N")) throw ConfigError("model.N", "ring needs the site count N");
  BiophysicalRing& ring = cfg.ring;
  ring.N = integer(m.at("N"), "model.N");
  if (ring.N < 3) throw ConfigError("model.N", "ring needs N >= 3");
  ring.D = number_or(m, "model", "D", 1.0);
  if (!(ring.D > 0.0)) throw ConfigError("model.D", "diffusion constant must be positive");
  ring.a = number_or(m, "model", "a", 0.0);
  ring.b = number_or(m, "model", "b", 0.0);
  ring.h = number_or(m, "model", "h", 0.0);
  cfg.h_rate = number_or(m, "model", "h_rate", 0.0);
  if (m.contains("U")) ring.U = real_vector(m.at("U"), "model.U");
  if (m.contains("U_rate")) cfg.U_rate = real_vector(m.at("U_rate"), "model.U_rate");
  for (const auto& [key, vec] : {std::pair{"U", &ring.U}, std::pair{"U_rate", &cfg.U_rate}}) {
    if (vec->size() != 0 && vec->size() != ring.N) {
      throw ConfigError(std::string("model.") + key,
                        "has " + std::to_string(vec->size()) + " entries for N = " + std::to_string(ring.N));
    }
  }
  const double sigma = number_or(m, "model", "disorder_sigma", 0.0);
  if (sigma < 0.0) throw ConfigError("model.disorder_sigma", "must be non-negative");
  if (!cfg.convective) {
    for (const char* key : {"h", "h_rate", "U", "disorder_sigma"}) {
      if (m.contains(key)) throw ConfigError(std::string("model.") + key, "not allowed for variant \"omega\"");
    }
  }
  if (sigma > 0.0) {
    if (ring.U.size() == 0) ring.U = Eigen::VectorXd::Zero(ring.N);
    std::mt19937_64 rng(substream_seed(seed, kDisorderStream));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index i = 0; i < ring.N; ++i) ring.U(i) += sigma * normal(rng);
  }
}

void read_transfer(const json& m, ModelConfig& cfg) {
  check_keys(m, "model", {"type", "delta_array", "table", "branch", "unimodular_tol", "difference_step"});
  const bool has_delta = m.contains("delta_array"), has_table = m.contains("table");
  if (has_delta == has_table) throw ConfigError("model", "transfer model needs exactly one of delta_array, table");
  TransferMatrixModel model;
  try {
    if (has_delta) {
      const json& d = m.at("delta_array");
      check_keys(d, "model.delta_array", {"positions", "strengths"});
      if (!d.contains("positions") || !d.contains("strengths")) {
        throw ConfigError("model.delta_array", "needs positions and strengths");
      }
      const auto positions = real_list(d.at("positions"), "model.delta_array.positions");
      const json& s = d.at("strengths");
      if (!s.is_array() || s.size() != positions.size()) {
        throw ConfigError("model.delta_array.strengths", "needs one strength per position");
      }
      std::vector<Complex> strengths;
      for (std::size_t i = 0; i < s.size(); ++i) {
        strengths.push_back(complex_value(s[i], "model.delta_array.strengths." + std::to_string(i)));
      }
      model = TransferMatrixModel::delta_array(positions, strengths);
    } else {
      const json& t = m.at("table");
      check_keys(t, "model.table", {"k", "entries"});
      if (!t.contains("k") || !t.contains("entries")) throw ConfigError("model.table", "needs k and entries");
      const auto k = real_list(t.at("k"), "model.table.k");
      const json& e = t.at("entries");
      if (!e.is_array() || e.size() != k.size()) {
        throw ConfigError("model.table.entries", "needs one [M11, M12, M21, M22] row per k");
      }
      std::vector<Eigen::Matrix2cd> values;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string p = "model.table.entries." + std::to_string(i);
        if (!e[i].is_array() || e[i].size() != 4) throw ConfigError(p, "expected [M11, M12, M21, M22]");
        Eigen::Matrix2cd mm;
        for (int q = 0; q < 4; ++q) mm(q / 2, q % 2) = complex_value(e[i][q], p + "." + std::to_string(q));
        values.push_back(mm);
      }
      model = TransferMatrixModel::table(k, values);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError(has_delta ? "model.delta_array" : "model.table", err.what());
  }
  if (m.contains("branch")) {
    const auto branch = integer(m.at("branch"), "model.branch");
    if (branch != 1 && branch != -1) throw ConfigError("model.branch", "expected +1 or -1");
    model.branch = static_cast<int>(branch);
  }
  model.unimodular_tol = number_or(m, "model", "unimodular_tol", model.unimodular_tol);
  if (!(model.unimodular_tol > 0.0)) throw ConfigError("model.unimodular_tol", "must be positive");
  if (m.contains("difference_step")) {
    cfg.difference_step = number(m.at("difference_step"), "model.difference_step");
    if (!(*cfg.difference_step > 0.0)) throw ConfigError("model.difference_step", "must be positive");
  }
  cfg.transfer = std::move(model);
}

void read_hamiltonian(const json& m, const fs::path& base, ModelConfig& cfg) {
  check_keys(m, "model", {"type", "H", "H_rate", "lindblad"});
  if (!m.contains("H")) throw ConfigError("model.H", "effective Hamiltonian model needs H");
  EffectiveHamiltonianSpec& spec = cfg.hamiltonian;
  spec.H = matrix_value(m.at("H"), "model.H", base);
  const Index n = spec.H.rows();
  cfg.H_rate = m.contains("H_rate") ? matrix_value(m.at("H_rate"), "model.H_rate", base) : CMatrix::Zero(n, n);
  require_dim(cfg.H_rate, n, "model.H_rate");
  if (m.contains("lindblad")) {
    const json& list = m.at("lindblad");
    if (!list.is_array()) throw ConfigError("model.lindblad", "expected a list of {L, l} objects");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = "model.lindblad." + std::to_string(k);
      check_keys(list[k], p, {"L", "L_rate", "l"});
      if (!list[k].contains("L")) throw ConfigError(p + ".L", "missing Lindblad operator");
      spec.L.push_back(matrix_value(list[k].at("L"), p + ".L", base));
      require_dim(spec.L.back(), n, p + ".L");
      spec.l.push_back(list[k].contains("l") ? complex_value(list[k].at("l"), p + ".l") : Complex{});
      cfg.L_rates.push_back(list[k].contains("L_rate") ? matrix_value(list[k].at("L_rate"), p + ".L_rate", base)
                                                       : CMatrix::Zero(n, n));
      require_dim(cfg.L_rates.back(), n, p + ".L_rate");
    }
  }
}

PerturbationProcess read_perturbation(const json& p, Index n, double time_step, std::uint64_t seed,
                                      const fs::path& base) {
  check_keys(p, "perturbation", {"kind", "sigma", "sigma2", "variances", "dt"});
  PerturbationProcess proc;
  const std::string kind = p.value("kind", std::string("diagonal"));
  if (kind == "diagonal") {
    proc.kind = PerturbationKind::Diagonal;
  } else if (kind == "full") {
    proc.kind = PerturbationKind::Full;
  } else {
    throw ConfigError("perturbation.kind", "expected \"diagonal\" or \"full\", got \"" + kind + "\"");
  }
  if (p.contains("sigma") && p.contains("sigma2")) throw ConfigError("perturbation", "give sigma or sigma2, not both");
  if (p.contains("sigma")) {
    const double s = number(p.at("sigma"), "perturbation.sigma");
    if (s < 0.0) throw ConfigError("perturbation.sigma", "must be non-negative");
    proc.sigma2 = s * s;
  }
  proc.sigma2 = number_or(p, "perturbation", "sigma2", proc.sigma2);
  if (proc.sigma2 < 0.0) throw ConfigError("perturbation.sigma2", "must be non-negative");
  if (p.contains("variances")) proc.variances = real_matrix_value(p.at("variances"), "perturbation.variances", base);
  proc.dt = number_or(p, "perturbation", "dt", time_step);
  proc.seed = seed;
  try {
    proc.validate(n);
  } catch (const Error& e) {
    throw ConfigError("perturbation", e.what());
  }
  return proc;
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Explicit: return "explicit";
    case ModelKind::Ring: return "ring";
    case ModelKind::Transfer: return "transfer";
    case ModelKind::EffectiveHamiltonian: return "effective_hamiltonian";
  }
  return "unknown";
}

Index ScenarioConfig::dim() const {
  switch (model.kind) {
    case ModelKind::Explicit: return model.coefficients.empty() ? 0 : model.coefficients[0].rows();
    case ModelKind::Ring: return model.ring.N;
    case ModelKind::Transfer: return 2;
    case ModelKind::EffectiveHamiltonian: return model.hamiltonian.H.rows();
  }
  return 0;
}

MatrixTrajectory ScenarioConfig::trajectory() const {
  switch (model.kind) {
    case ModelKind::Explicit:
      return MatrixTrajectory::polynomial(model.coefficients);
    case ModelKind::Ring:
      return ring_trajectory(model.ring, model.U_rate, model.h_rate);
    case ModelKind::Transfer:
      return s_matrix_trajectory(*model.transfer, model.difference_step);
    case ModelKind::EffectiveHamiltonian:
      return effective_hamiltonian_trajectory(model.hamiltonian, model.H_rate, model.L_rates);
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown model kind");
}

std::vector<Index> ScenarioConfig::tracked_indices() const {
  if (tracked) return *tracked;
  std::vector<Index> all(static_cast<std::size_t>(dim()));
  for (Index j = 0; j < dim(); ++j) all[static_cast<std::size_t>(j)] = j;
  return all;
}

ScenarioDocument parse_scenario_document(std::string text, fs::path base_dir, std::string source) {
  ScenarioDocument doc;
  try {
    doc.json = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError("", "line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.json.is_object()) throw ConfigError("", "line 1: scenario must be a JSON object");
  doc.text = std::move(text);
  doc.base_dir = std::move(base_dir);
  doc.source = std::move(source);
  return doc;
}

ScenarioDocument load_scenario_document(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_document(buffer.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path(),
                                 path.string());
}

void apply_override(ScenarioDocument& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set", "expected key=value, got \"" + std::string(assignment) + "\"");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc.json;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set", "empty component in key \"" + key + "\"");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ConfigError(key, "array index expected at \"" + part + "\"");
      }
      if (idx >= node->size()) throw ConfigError(key, "array index " + part + " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = json::object();
      node = &(*node)[part];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

ScenarioConfig build_config(const ScenarioDocument& doc) {
  const json& root = doc.json;
  check_keys(root, "", {"name", "description", "model", "time", "perturbation", "tracked", "collision_threshold",
                        "tolerance", "seed", "output"});
  ScenarioConfig cfg;
  cfg.name = root.value("name", fs::path(doc.source).stem().string());

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  if (!root.contains("time")) throw ConfigError("time", "missing time {t0, t1, steps}");
  const json& time = root.at("time");
  check_keys(time, "time", {"t0", "t1", "steps"});
  cfg.time.t0 = number_or(time, "time", "t0", 0.0);
  if (!time.contains("t1")) throw ConfigError("time.t1", "missing end time");
  cfg.time.t1 = number(time.at("t1"), "time.t1");
  if (!(cfg.time.t1 > cfg.time.t0)) throw ConfigError("time.t1", "must be greater than t0");
  if (!time.contains("steps")) throw ConfigError("time.steps", "missing step count");
  cfg.time.steps = integer(time.at("steps"), "time.steps");
  if (cfg.time.steps < 1) throw ConfigError("time.steps", "must be at least 1");

  if (!root.contains("model")) throw ConfigError("model", "missing model");
  const json& model = root.at("model");
  if (!model.is_object() || !model.contains("type") || !model.at("type").is_string()) {
    throw ConfigError("model.type", "expected one of explicit, ring, transfer, effective_hamiltonian");
  }
  const std::string type = model.at("type").get<std::string>();
  if (type == "explicit") {
    cfg.model.kind = ModelKind::Explicit;
    read_explicit(model, doc.base_dir, cfg.model);
  } else if (type == "ring") {
    cfg.model.kind = ModelKind::Ring;
    read_ring(model, cfg.seed, cfg.model);
  } else if (type == "transfer") {
    cfg.model.kind = ModelKind::Transfer;
    read_transfer(model, cfg.model);
  } else if (type == "effective_hamiltonian") {
    cfg.model.kind = ModelKind::EffectiveHamiltonian;
    read_hamiltonian(model, doc.base_dir, cfg.model);
    if (!ComplexSquareMatrix(cfg.model.hamiltonian.H).is_hermitian(1e-10)) {
      cfg.warnings.push_back("NonHermitianH: model.H is not Hermitian");
    }
  } else {
    throw ConfigError("model.type", "unknown model type \"" + type + "\"");
  }
  const Index n = cfg.dim();

  // The model must build across the whole interval ends.
  try {
    const MatrixTrajectory traj = cfg.trajectory();
    for (double t : {cfg.time.t0, cfg.time.t1}) {
      (void)traj.value(t);
      (void)traj.first_derivative(t);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("model", e.what());
  }

  if (root.contains("perturbation") && !root.at("perturbation").is_null()) {
    cfg.perturbation = read_perturbation(root.at("perturbation"), n, cfg.time.step(), cfg.seed, doc.base_dir);
  }

  if (root.contains("tracked")) {
    const json& t = root.at("tracked");
    if (t.is_string() && t.get<std::string>() == "all") {
      cfg.tracked.reset();
    } else if (t.is_array()) {
      std::vector<Index> list;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string p = "tracked." + std::to_string(i);
        const auto j = integer(t[i], p);
        if (j < 0 || j >= n) throw ConfigError(p, "index " + std::to_string(j) + " outside 0.." + std::to_string(n - 1));
        if (std::find(list.begin(), list.end(), j) != list.end()) throw ConfigError(p, "duplicate index");
        list.push_back(j);
      }
      cfg.tracked = std::move(list);
    } else {
      throw ConfigError("tracked", "expected \"all\" or a list of indices");
    }
  }

  cfg.collision_threshold = number_or(root, "", "collision_threshold", cfg.collision_threshold);
  if (!(cfg.collision_threshold > 0.0)) throw ConfigError("collision_threshold", "must be positive");
  cfg.tolerance = number_or(root, "", "tolerance", cfg.tolerance);
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");

  if (root.contains("output")) {
    const json& out = root.at("output");
    check_keys(out, "output", {"dir", "formats"});
    if (out.contains("dir")) {
      if (!out.at("dir").is_string()) throw ConfigError("output.dir", "expected a path string");
      cfg.output.dir = out.at("dir").get<std::string>();
    }
    if (out.contains("formats")) {
      const json& f = out.at("formats");
      if (!f.is_array()) throw ConfigError("output.formats", "expected a list such as [\"csv\", \"json\"]");
      cfg.output.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string p = "output.formats." + std::to_string(i);
        if (!f[i].is_string()) throw ConfigError(p, "expected \"csv\" or \"json\"");
        const std::string fmt = f[i].get<std::string>();
        if (fmt != "csv" && fmt != "json") throw ConfigError(p, "unsupported format \"" + fmt + "\"");
        cfg.output.formats.push_back(fmt);
      }
    }
  }

  std::uint64_t hash = fnv1a64(root.dump());
  for (const CMatrix& m : cfg.model.coefficients) {
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) hash = fnv1a64(format_complex(m(r, c)), hash);
  }
  cfg.hash = hash;
  return cfg;
}

std::size_t locate_key(std::string_view text, std::string_view key_path) {
  std::size_t pos = 0, found = std::string_view::npos;
  std::size_t start = 0;
  while (start <= key_path.size()) {
    const auto dot = key_path.find('.', start);
    const std::string_view part = key_path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    start = dot == std::string_view::npos ? key_path.size() + 1 : dot + 1;
    if (part.empty() || std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    const std::string needle = "\"" + std::string(part) + "\"";
    std::size_t hit = text.find(needle, pos);
    // Require a following colon so string values equal to the key are skipped.
    while (hit != std::string_view::npos) {
      auto after = text.find_first_not_of(" \t\r\n", hit + needle.size());
      if (after != std::string_view::npos && text[after] == ':') break;
      hit = text.find(needle, hit + 1);
    }
    if (hit == std::string_view::npos) break;
    found = hit;
    pos = hit + needle.size();
  }
  if (found == std::string_view::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(found), '\n'));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

}  // namespace eigenforce
