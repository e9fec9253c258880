#include "srgkit/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "srgkit/error.hpp"

#ifndef SRGKIT_VERSION
#define SRGKIT_VERSION "0.1.0"
#endif

namespace srg::io {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InputError("expected a number, got " + j.dump());
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

bool flag(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw InputError(std::string("'") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::vector<Disk> disks_from(const Json& j) {
  if (!j.is_array()) throw InputError("disk list must be an array of [center, radius]");
  std::vector<Disk> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InputError("disk must be [center, radius]");
    out.push_back({number_from(e[0]), number_from(e[1])});
  }
  return out;
}

std::vector<int> ints_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw InputError(std::string(what) + " must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> doubles_from(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number_from(e));
  return out;
}

Json disks_json(const std::vector<Disk>& v) {
  Json a = Json::array();
  for (const auto& d : v) a.push_back({number(d.center), number(d.radius)});
  return a;
}

}  // namespace

Json to_json(const DiskAlgebraRegion& r) {
  Json j;
  j["kind"] = "disk_algebra";
  j["upper"] = disks_json(r.upper());
  j["lower"] = disks_json(r.lower());
  j["infinity"] = r.contains_infinity();
  return j;
}

Json to_json(const CoverRegion& r) {
  Json j;
  j["kind"] = "cover";
  Json pts = Json::array();
  bool uniform = true;
  const double eps = r.epsilon();
  for (const auto& b : r.balls()) {
    pts.push_back({b.center.real(), b.center.imag()});
    if (b.radius != eps) uniform = false;
  }
  j["points"] = std::move(pts);
  j["epsilon"] = eps;
  if (!uniform) {
    Json radii = Json::array();
    for (const auto& b : r.balls()) radii.push_back(b.radius);
    j["radii"] = std::move(radii);
  }
  j["infinity"] = r.contains_infinity();
  if (r.has_exterior()) j["exterior_radius"] = r.exterior_radius();
  if (r.grid_step() > 0.0) j["grid_step"] = r.grid_step();
  return j;
}

Json to_json(const Region& r) {
  return std::visit([](const auto& x) { return to_json(x); }, r);
}

Region region_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "disk_algebra") {
    return DiskAlgebraRegion(disks_from(field(j, "upper")),
                             j.contains("lower") ? disks_from(j.at("lower")) : std::vector<Disk>{},
                             flag(j, "infinity", false));
  }
  if (kind == "cover") {
    const auto& pts = field(j, "points");
    if (!pts.is_array()) throw InputError("cover points must be an array");
    const double eps = j.contains("epsilon") ? number_from(j.at("epsilon")) : 0.0;
    if (!(eps >= 0.0)) throw InputError("cover epsilon must be non-negative");
    std::vector<double> radii;
    if (j.contains("radii")) {
      radii = doubles_from(j.at("radii"));
      if (radii.size() != pts.size()) throw InputError("cover radii and points differ in length");
    }
    std::vector<Ball> balls;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      if (!p.is_array() || p.size() != 2) throw InputError("cover point must be [re, im]");
      balls.push_back({Complex(number_from(p[0]), number_from(p[1])), radii.empty() ? eps : radii[i]});
    }
    const double ext = j.contains("exterior_radius") ? number_from(j.at("exterior_radius")) : kInf;
    const double step = j.contains("grid_step") ? number_from(j.at("grid_step")) : 0.0;
    return CoverRegion(std::move(balls), flag(j, "infinity", false), ext, step).symmetrized();
  }
  throw InputError("unknown region kind '" + kind + "'");
}

Json to_json(const Matrix& M) {
  Json a = Json::array();
  for (int i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < M.cols(); ++k) row.push_back(number(M(i, k)));
    a.push_back(std::move(row));
  }
  return a;
}

Matrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const int r = static_cast<int>(j.size());
  if (r == 0) return Matrix(rows < 0 ? 0 : rows, cols < 0 ? 0 : cols);
  const int c = j[0].is_array() ? static_cast<int>(j[0].size()) : -1;
  if (c < 0) throw InputError("matrix rows must be arrays");
  Matrix M(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c)
      throw InputError("matrix rows differ in length");
    for (int k = 0; k < c; ++k) M(i, k) = number_from(j[i][k]);
  }
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols))
    throw InputError("matrix has the wrong shape");
  return M;
}

Json to_json(const StateSpace& ss) {
  Json j;
  j["A"] = to_json(ss.A());
  j["B"] = to_json(ss.B());
  j["C"] = to_json(ss.C());
  j["D"] = to_json(ss.D());
  return j;
}

StateSpace state_space_from_json(const Json& j) {
  const Matrix D = matrix_from_json(field(j, "D"));
  const int q = static_cast<int>(D.rows()), p = static_cast<int>(D.cols());
  const Matrix A = j.contains("A") ? matrix_from_json(j.at("A")) : Matrix(0, 0);
  const int n = static_cast<int>(A.rows());
  const Matrix B = j.contains("B") ? matrix_from_json(j.at("B"), n, n ? -1 : p) : Matrix(0, p);
  const Matrix C = j.contains("C") ? matrix_from_json(j.at("C"), n ? -1 : q, n) : Matrix(q, 0);
  return {A, n ? B : Matrix(0, p), n ? C : Matrix(q, 0), D};
}

Json to_json(const SectorBound& s) {
  Json j;
  j["incremental"] = s.incremental;
  Json ch = Json::array();
  for (const auto& [mu, la] : s.channels) ch.push_back({mu, la});
  j["channels"] = std::move(ch);
  return j;
}

SectorBound sector_from_json(const Json& j) {
  SectorBound s;
  s.incremental = flag(j, "incremental", true);
  for (const auto& e : field(j, "channels")) {
    if (!e.is_array() || e.size() != 2) throw InputError("sector channel must be [mu, lambda]");
    s.channels.emplace_back(number_from(e[0]), number_from(e[1]));
  }
  s.validate();
  return s;
}

Json to_json(const NamedNonlinearity& n) {
  Json j;
  j["kind"] = n.kind_name();
  j["params"] = n.params();
  if (n.kind() == NamedNonlinearity::Kind::custom_pointwise) {
    Json t = Json::array();
    for (const auto& [x, y] : n.table()) t.push_back({x, y});
    j["table"] = std::move(t);
  }
  const auto [mu, la] = n.sector();
  j["sector"] = {mu, la};
  j["scale"] = n.scale();
  j["shift"] = n.shift();
  return j;
}

NamedNonlinearity nonlinearity_from_json(const Json& j) {
  const auto kind = NamedNonlinearity::kind_from_name(field(j, "kind").get<std::string>());
  const std::vector<double> p = j.contains("params") ? doubles_from(j.at("params")) : std::vector<double>{};
  auto param = [&p](std::size_t i, double fallback) { return i < p.size() ? p[i] : fallback; };
  NamedNonlinearity n;
  switch (kind) {
    case NamedNonlinearity::Kind::saturation:
      n = NamedNonlinearity::saturation(param(0, 1.0), param(1, 1.0), param(2, 0.0));
      break;
    case NamedNonlinearity::Kind::tanh:
      n = NamedNonlinearity::tanh(param(0, 1.0), param(1, 0.0));
      break;
    case NamedNonlinearity::Kind::negated_tanh:
      n = NamedNonlinearity::negated_tanh();
      break;
    case NamedNonlinearity::Kind::custom_pointwise: {
      std::vector<std::pair<double, double>> table;
      for (const auto& e : field(j, "table")) {
        if (!e.is_array() || e.size() != 2) throw InputError("table entries must be [x, y]");
        table.emplace_back(number_from(e[0]), number_from(e[1]));
      }
      const auto& s = field(j, "declared_sector");
      if (!s.is_array() || s.size() != 2) throw InputError("declared_sector must be [mu, lambda]");
      n = NamedNonlinearity::custom(std::move(table), {number_from(s[0]), number_from(s[1])});
      break;
    }
  }
  const double scale = j.contains("scale") ? number_from(j.at("scale")) : 1.0;
  const double shift = j.contains("shift") ? number_from(j.at("shift")) : 0.0;
  if (scale != 1.0 || shift != 0.0) n = n.transformed(scale, shift);
  return n;
}

Json to_json(const LfrModel& m, const std::vector<NamedNonlinearity>& nl) {
  Json j = to_json(m.G);
  j["name"] = m.name;
  j["partition"] = {{"z_rows", m.partition.z_rows},
                    {"y_rows", m.partition.y_rows},
                    {"w_cols", m.partition.w_cols},
                    {"u_cols", m.partition.u_cols}};
  Json phi;
  if (m.phi.is_sector())
    phi["sector"] = to_json(std::get<SectorBound>(m.phi.source));
  else
    phi["region"] = to_json(std::get<Region>(m.phi.source));
  phi["incremental"] = m.phi.incremental;
  j["phi"] = std::move(phi);
  if (!nl.empty()) {
    Json a = Json::array();
    for (const auto& n : nl) a.push_back(to_json(n));
    j["nonlinearities"] = std::move(a);
  }
  return j;
}

LfrModel lfr_from_json(const Json& j) {
  LfrModel m;
  m.G = state_space_from_json(j);
  m.name = j.contains("name") ? j.at("name").get<std::string>() : "model";
  const auto& p = field(j, "partition");
  m.partition.z_rows = ints_from(field(p, "z_rows"), "z_rows");
  m.partition.y_rows = ints_from(field(p, "y_rows"), "y_rows");
  m.partition.w_cols = ints_from(field(p, "w_cols"), "w_cols");
  m.partition.u_cols = ints_from(field(p, "u_cols"), "u_cols");
  const auto& phi = field(j, "phi");
  if (phi.contains("sector")) {
    const SectorBound s = sector_from_json(phi.at("sector"));
    m.phi.source = s;
    m.phi.incremental = flag(phi, "incremental", s.incremental);
  } else if (phi.contains("region")) {
    m.phi.source = region_from_json(phi.at("region"));
    m.phi.incremental = flag(phi, "incremental", true);
  } else {
    throw InputError("phi needs a 'sector' or a 'region'");
  }
  m.validate();
  return m;
}

std::vector<NamedNonlinearity> nonlinearities_from_json(const Json& model) {
  std::vector<NamedNonlinearity> out;
  if (!model.contains("nonlinearities")) return out;
  for (const auto& e : model.at("nonlinearities")) out.push_back(nonlinearity_from_json(e));
  return out;
}

Json to_json(const AnalysisSettings& s) {
  Json j;
  j["tau_points"] = s.tau_points;
  j["refine_tau"] = s.refine_tau;
  j["resolution"] = s.resolution;
  j["improved_completions"] = s.improved;
  j["assume_wellposed"] = s.assume_wellposed;
  j["base_points"] = s.base_points;
  j["freq_points"] = s.freq_points;
  j["upper_inflation"] = s.bound.upper_inflation;
  j["lower_deflation"] = s.bound.lower_deflation;
  return j;
}

Json to_json(const AnalysisReport& r, bool with_regions) {
  Json j;
  j["verdict"] = r.certified ? "certified" : "not_certified";
  j["separation_r"] = number(r.separation_r);
  j["tau_at_min"] = r.tau_at_min;
  j["gain_bound"] = number(r.gain_bound);
  j["incremental"] = r.incremental;
  j["wellposed_claim"] = r.wellposed_claim;
  j["causal_claim"] = r.causal_claim;
  Json radii;
  for (const auto& [k, v] : r.regions) radii[k] = number(rmin(v));
  j["region_radii"] = std::move(radii);
  Json tau = Json::array();
  for (const auto& [t, d] : r.tau_table) tau.push_back({t, number(d)});
  j["tau_table"] = std::move(tau);
  j["notes"] = r.notes;
  j["settings"] = to_json(r.settings);
  if (with_regions) {
    Json regs;
    for (const auto& [k, v] : r.regions) regs[k] = to_json(v);
    j["regions"] = std::move(regs);
  }
  return j;
}

Json to_json(const SeparationResult& r) {
  Json j;
  j["r"] = number(r.r);
  j["tau_min"] = r.tau_min;
  Json tau = Json::array();
  for (const auto& [t, d] : r.table) tau.push_back({t, number(d)});
  j["table"] = std::move(tau);
  return j;
}

Json to_json(const SweepResult& r) {
  Json j;
  j["verdict"] = r.certified ? "certified" : "not_certified";
  j["best_kappa"] = r.best_kappa;
  j["best_gain"] = number(r.best_gain);
  Json rows = Json::array();
  for (const auto& row : r.table)
    rows.push_back({{"kappa", row.kappa},
                    {"stable", row.stable},
                    {"certified", row.certified},
                    {"gain", number(row.gain)},
                    {"separation", number(row.separation)}});
  j["table"] = std::move(rows);
  return j;
}

Json to_json(const GainEstimate& g) {
  return {{"value", g.value}, {"num_pairs", g.num_pairs}, {"best_pair_seed", g.best_pair_seed}};
}

Json to_json(const SigmaProfile& p) {
  return {{"sup_estimate", p.sup_estimate},
          {"sup_frequency", number(p.sup_frequency)},
          {"inf_estimate", p.inf_estimate},
          {"inf_frequency", number(p.inf_frequency)},
          {"note", "sampled estimate"}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string region_csv(const Region& r) {
  std::ostringstream os;
  if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) {
    os << "re,im\n";
    for (const Complex& z : boundary_samples(*d)) os << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
  } else {
    os << "re,im,radius\n";
    for (const auto& b : std::get<CoverRegion>(r).balls())
      os << fmt(b.center.real()) << ',' << fmt(b.center.imag()) << ',' << fmt(b.radius) << '\n';
  }
  return os.str();
}

std::string sigma_csv(const SigmaProfile& p) {
  std::ostringstream os;
  os << "omega,sigma_max,sigma_min\n";
  for (std::size_t k = 0; k < p.frequencies.size(); ++k)
    os << fmt(p.frequencies[k]) << ',' << fmt(p.sigma_max[k]) << ',' << fmt(p.sigma_min[k]) << '\n';
  return os.str();
}

std::string signal_csv(const Signal& s) {
  std::ostringstream os;
  os << 't';
  for (int c = 0; c < s.channels(); ++c) os << ",ch" << c;
  os << '\n';
  for (int k = 0; k < s.samples(); ++k) {
    os << fmt(s.time(k));
    for (int c = 0; c < s.channels(); ++c) os << ',' << fmt(s.values(k, c));
    os << '\n';
  }
  return os.str();
}

Signal signal_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \r", used) != std::string::npos)
          numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw InputError("non-numeric signal row: " + line);
    }
    if (!rows.empty() && vals.size() != rows[0].size()) throw InputError("signal rows differ in length");
    rows.push_back(std::move(vals));
  }
  if (rows.size() < 2 || rows[0].size() < 2) throw InputError("signal needs >= 2 rows of t,value...");
  Signal s;
  s.dt = rows[1][0] - rows[0][0];
  if (!(s.dt > 0.0)) throw InputError("signal time must increase");
  s.values = Matrix(rows.size(), rows[0].size() - 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::abs(rows[k][0] - rows[0][0] - k * s.dt) > 1e-6 * s.dt * (k + 1))
      throw InputError("signal must be uniformly sampled");
    for (std::size_t c = 1; c < rows[k].size(); ++c) s.values(k, c - 1) = rows[k][c];
  }
  return s;
}

Json to_json(const Manifest& m) {
  Json j;
  j["tool"] = "srgkit";
  j["version"] = SRGKIT_VERSION;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["settings"] = m.settings;
  j["outputs"] = m.outputs;
  return j;
}

}  // namespace srg::io
