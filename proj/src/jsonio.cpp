#include "roaforge/jsonio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace roaforge::jsonio {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::runtime_error("config: unknown key \"" + key + "\" in " + where);
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::runtime_error("config: missing key \"" + key + "\" in " + where);
  return *it;
}

Eigen::VectorXd to_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw std::runtime_error("config: " + where + " must be an array");
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

Eigen::MatrixXd to_matrix(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty())
    throw std::runtime_error("config: " + where + " must be a non-empty array of rows");
  const size_t rows = arr.size(), cols = arr[0].size();
  Eigen::MatrixXd M(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (arr[i].size() != cols)
      throw std::runtime_error("config: ragged matrix in " + where);
    for (size_t j = 0; j < cols; ++j) M(i, j) = arr[i][j].get<double>();
  }
  return M;
}

json from_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json from_matrix(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(row);
  }
  return out;
}

polyalg::Poly parse_poly(const json& arr, int dim, const std::string& where) {
  if (!arr.is_array()) throw std::runtime_error("config: " + where + " must be a monomial list");
  std::vector<polyalg::Monomial> terms;
  for (const auto& t : arr) {
    reject_unknown_keys(t, {"coeff", "powers"}, where);
    polyalg::Monomial m;
    m.coeff = require(t, "coeff", where).get<double>();
    for (const auto& p : require(t, "powers", where)) m.powers.push_back(p.get<int>());
    if (static_cast<int>(m.powers.size()) != dim)
      throw std::runtime_error("config: powers length mismatch in " + where);
    terms.push_back(std::move(m));
  }
  return polyalg::Poly(dim, std::move(terms));
}

json poly_to_json(const polyalg::Poly& p) {
  json out = json::array();
  for (const auto& m : p.terms()) out.push_back({{"coeff", m.coeff}, {"powers", m.powers}});
  return out;
}

polyalg::BoxDomain parse_box(const json& obj, const std::string& where) {
  reject_unknown_keys(obj, {"lower", "upper"}, where);
  return {to_vector(require(obj, "lower", where), where + ".lower"),
          to_vector(require(obj, "upper", where), where + ".upper")};
}

json box_to_json(const polyalg::BoxDomain& box) {
  return {{"lower", from_vector(box.lower)}, {"upper", from_vector(box.upper)}};
}

tsmodel::Factorization parse_factorization(const json& arr, int dim, int p,
                                           const std::string& where) {
  tsmodel::Factorization fact;
  fact.dim = dim;
  if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
    throw std::runtime_error("config: " + where + " must have one row per state");
  for (const auto& row : arr) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw std::runtime_error("config: ragged factorization in " + where);
    std::vector<tsmodel::AffineExpr> entries;
    for (const auto& e : row) {
      reject_unknown_keys(e, {"const", "coeffs"}, where);
      tsmodel::AffineExpr ae;
      ae.c0 = require(e, "const", where).get<double>();
      ae.coeffs = to_vector(require(e, "coeffs", where), where + ".coeffs");
      if (ae.coeffs.size() != p)
        throw std::runtime_error("config: factorization coeffs length != premise count in " +
                                 where);
      entries.push_back(std::move(ae));
    }
    fact.entries.push_back(std::move(entries));
  }
  return fact;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
  }
  reject_unknown_keys(root, {"system", "cases", "solver", "validation", "outputs"}, "root");

  RunConfig cfg;
  const json& sys = require(root, "system", "root");
  reject_unknown_keys(sys, {"dim", "equations", "box"}, "system");
  const int dim = require(sys, "dim", "system").get<int>();
  if (dim < 1) throw std::runtime_error("config: system.dim must be positive");
  std::vector<polyalg::Poly> comps;
  const json& eqs = require(sys, "equations", "system");
  if (static_cast<int>(eqs.size()) != dim)
    throw std::runtime_error("config: system.equations must have dim entries");
  for (size_t i = 0; i < eqs.size(); ++i)
    comps.push_back(parse_poly(eqs[i], dim, "system.equations[" + std::to_string(i) + "]"));
  cfg.spec.system = polyalg::PolyMap(dim, std::move(comps));
  cfg.spec.original_box = parse_box(require(sys, "box", "system"), "system.box");

  const json& cases = require(root, "cases", "root");
  if (!cases.is_array() || cases.empty())
    throw std::runtime_error("config: cases must be a non-empty array");
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const std::string where = "cases[" + std::to_string(ci) + "]";
    const json& c = cases[ci];
    reject_unknown_keys(c, {"transform", "box", "premises", "factorization"}, where);
    Eigen::MatrixXd T = to_matrix(require(c, "transform", where), where + ".transform");
    if (T.rows() != T.cols() || T.rows() != dim)
      throw std::runtime_error("config: " + where + ".transform must be a square " +
                               std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    std::vector<polyalg::Poly> premises;
    for (const auto& pz : require(c, "premises", where)) {
      reject_unknown_keys(pz, {"poly"}, where + ".premises");
      premises.push_back(parse_poly(require(pz, "poly", where), dim, where + ".premises.poly"));
    }
    tsmodel::Factorization fact =
        parse_factorization(require(c, "factorization", where), dim,
                            static_cast<int>(premises.size()), where + ".factorization");
    cfg.spec.cases.push_back(pipeline::CaseSpec{
        polyalg::Transform(T), parse_box(require(c, "box", where), where + ".box"),
        std::move(premises), std::move(fact)});
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    reject_unknown_keys(s, {"lambda_grid", "margin_tol"}, "solver");
    if (s.contains("lambda_grid"))
      cfg.spec.solver.lambda_grid = s["lambda_grid"].get<std::vector<double>>();
    if (s.contains("margin_tol")) cfg.spec.solver.margin_tol = s["margin_tol"].get<double>();
  }
  if (root.contains("validation")) {
    const json& v = root["validation"];
    reject_unknown_keys(v, {"samples", "seed", "dt", "horizon", "area_samples"}, "validation");
    if (v.contains("samples")) cfg.validation.samples = v["samples"].get<int>();
    if (v.contains("seed")) cfg.validation.seed = v["seed"].get<std::uint64_t>();
    if (v.contains("dt")) cfg.validation.dt = v["dt"].get<double>();
    if (v.contains("horizon")) cfg.validation.horizon = v["horizon"].get<double>();
    if (v.contains("area_samples")) cfg.validation.area_samples = v["area_samples"].get<long>();
  }
  if (root.contains("outputs")) {
    const json& o = root["outputs"];
    reject_unknown_keys(o, {"results", "svg", "csv"}, "outputs");
    if (o.contains("results")) cfg.outputs.results = o["results"].get<std::string>();
    if (o.contains("svg")) cfg.outputs.svg = o["svg"].get<std::string>();
    if (o.contains("csv")) cfg.outputs.csv = o["csv"].get<std::string>();
  }
  return cfg;
}

namespace {

json area_to_json(const pipeline::AreaEstimate& a) {
  return {{"area", a.area},
          {"half_width", a.half_width},
          {"seed", a.seed},
          {"samples", a.samples}};
}

pipeline::AreaEstimate area_from_json(const json& j) {
  pipeline::AreaEstimate a;
  a.area = j.at("area").get<double>();
  a.half_width = j.at("half_width").get<double>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.samples = j.at("samples").get<long>();
  return a;
}

}  // namespace

std::string results_to_json(const ResultsFile& results) {
  json root;
  root["seed"] = results.seed;
  if (results.original_box) root["original_box"] = box_to_json(*results.original_box);
  json cases = json::array();
  for (size_t i = 0; i < results.cases.size(); ++i) {
    const auto& cr = results.cases[i];
    json c;
    c["index"] = i;
    c["ok"] = cr.ok;
    if (!cr.ok) {
      c["failed_stage"] = cr.failed_stage;
      c["message"] = cr.message;
    }
    if (cr.model) {
      json verts = json::array();
      for (const auto& A : cr.model->vertices) verts.push_back(from_matrix(A));
      c["vertices"] = verts;
    }
    if (cr.certificate) {
      json ps = json::array();
      for (const auto& P : cr.certificate->P_list) ps.push_back(from_matrix(P));
      c["P_list"] = ps;
      c["lambda1"] = cr.certificate->lambda1;
      c["lambda2"] = cr.certificate->lambda2;
      c["margin"] = cr.certificate->margin;
    }
    if (cr.estimate) {
      c["k"] = cr.estimate->k;
      c["approximate"] = cr.estimate->approximate;
      c["transform"] = from_matrix(cr.estimate->transform.matrix());
      c["box"] = box_to_json(cr.estimate->box);
    }
    cases.push_back(std::move(c));
  }
  root["cases"] = std::move(cases);
  if (!results.member_areas.empty()) {
    json ms = json::array();
    for (const auto& a : results.member_areas) ms.push_back(area_to_json(a));
    root["areas"]["members"] = std::move(ms);
  }
  if (results.union_area) root["areas"]["union"] = area_to_json(*results.union_area);
  return root.dump(2) + "\n";
}

ResultsFile results_from_json(const std::string& text) {
  json root = json::parse(text);
  ResultsFile out;
  out.seed = root.at("seed").get<std::uint64_t>();
  if (root.contains("original_box"))
    out.original_box = parse_box(root["original_box"], "results original_box");
  for (const auto& c : root.at("cases")) {
    pipeline::CaseResult cr;
    cr.ok = c.at("ok").get<bool>();
    if (!cr.ok) {
      cr.failed_stage = c.value("failed_stage", "");
      cr.message = c.value("message", "");
    }
    if (c.contains("vertices")) {
      tsmodel::TSModel model{};
      for (const auto& A : c["vertices"])
        model.vertices.push_back(to_matrix(A, "results vertices"));
      cr.model = std::move(model);
    }
    if (c.contains("P_list")) {
      lmikit::PwqCertificate cert;
      for (const auto& P : c["P_list"]) cert.P_list.push_back(to_matrix(P, "results P"));
      cert.lambda1 = c.at("lambda1").get<double>();
      cert.lambda2 = c.at("lambda2").get<double>();
      cert.margin = c.at("margin").get<double>();
      cr.certificate = std::move(cert);
    }
    if (c.contains("k")) {
      levelset::RoaEstimate est{cr.certificate->P_list, c.at("k").get<double>(),
                                polyalg::Transform(to_matrix(c.at("transform"), "results T")),
                                parse_box(c.at("box"), "results box"),
                                c.value("approximate", false)};
      cr.estimate = std::move(est);
    }
    out.cases.push_back(std::move(cr));
  }
  if (root.contains("areas")) {
    const json& a = root["areas"];
    if (a.contains("members"))
      for (const auto& m : a["members"]) out.member_areas.push_back(area_from_json(m));
    if (a.contains("union")) out.union_area = area_from_json(a["union"]);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RenderOutput render_region(const pipeline::UnionRegion& region,
                           const polyalg::BoxDomain& original_box, int rays) {
  if (region.members.empty())
    throw std::runtime_error("render: empty member list");
  if (original_box.dim() != 2)
    throw std::runtime_error("render: only n=2 supported");

  // Fixed 800x800 viewport, axis-equal over the original box padded 10%.
  const double pad_x = 0.1 * (original_box.upper[0] - original_box.lower[0]);
  const double pad_y = 0.1 * (original_box.upper[1] - original_box.lower[1]);
  const double wx = original_box.upper[0] - original_box.lower[0] + 2 * pad_x;
  const double wy = original_box.upper[1] - original_box.lower[1] + 2 * pad_y;
  const double scale = 800.0 / std::max(wx, wy);
  const double cx = 0.5 * (original_box.lower[0] + original_box.upper[0]);
  const double cy = 0.5 * (original_box.lower[1] + original_box.upper[1]);
  auto px = [&](double x) { return 400.0 + (x - cx) * scale; };
  auto py = [&](double y) { return 400.0 - (y - cy) * scale; };

  static const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};

  std::ostringstream svg, csv;
  csv.precision(17);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  svg << "  <rect x=\"" << px(original_box.lower[0]) << "\" y=\"" << py(original_box.upper[1])
      << "\" width=\"" << (original_box.upper[0] - original_box.lower[0]) * scale
      << "\" height=\"" << (original_box.upper[1] - original_box.lower[1]) * scale
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

  csv << "case_index,point_index,x1,x2\n";
  for (size_t m = 0; m < region.members.size(); ++m) {
    auto pts = levelset::boundary_polyline(region.members[m], rays);
    svg << "  <polygon points=\"";
    for (const auto& p : pts) svg << px(p[0]) << "," << py(p[1]) << " ";
    svg << "\" fill=\"none\" stroke=\"" << kColors[m % 6] << "\" stroke-width=\"2\""
        << (m % 2 == 0 ? "" : " stroke-dasharray=\"6,4\"") << "/>\n";
    for (size_t i = 0; i < pts.size(); ++i)
      csv << m << "," << i << "," << pts[i][0] << "," << pts[i][1] << "\n";
  }
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

}  // namespace roaforge::jsonio
