#include "monopro/json_io.hpp"

#include <fstream>

namespace monopro {

namespace {

Json dense_to_json(const Mat& m) {
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return Json{{"re", re}, {"im", im}};
}

Mat dense_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw ConfigError("dense tensor size mismatch");
  Mat m(rows, cols);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj, ++t)
      m(i, jj) = Complex(re[t].get<double>(), im[t].get<double>());
  return m;
}

}  // namespace

Json mat_to_json(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  std::vector<std::vector<double>> re(d, std::vector<double>(d));
  std::vector<std::vector<double>> im(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      re[i][j] = m(i, j).real();
      im[i][j] = m(i, j).imag();
    }
  return Json{{"d", d}, {"re", re}, {"im", im}};
}

Mat mat_from_json(const Json& j) {
  const int d = j.at("d").get<int>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
    throw ConfigError("Mat row count mismatch");
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(re[i].size()) != d || static_cast<int>(im[i].size()) != d)
      throw ConfigError("Mat column count mismatch");
    for (int jj = 0; jj < d; ++jj)
      m(i, jj) = Complex(re[i][jj].get<double>(), im[i][jj].get<double>());
  }
  return m;
}

Json cpmap_to_json(const CPMap& eta) {
  Json kraus = Json::array();
  for (const Mat& k : eta.kraus()) kraus.push_back(mat_to_json(k));
  return Json{{"kraus", kraus}};
}

CPMap cpmap_from_json(const Json& j) {
  if (j.contains("matrix")) {
    // raw superoperator form; validated (Choi PSD) on construction
    return CPMap::from_superop(mat_from_json(j.at("matrix")));
  }
  std::vector<Mat> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(mat_from_json(k));
  return CPMap::from_kraus(std::move(kraus));
}

Json series_to_json(const Series& s) {
  Json terms = Json::array();
  terms.push_back(mat_to_json(s.constant_term()));
  for (int n = 1; n <= s.order(); ++n) terms.push_back(dense_to_json(s.term(n)));
  return Json{{"d", s.dim()}, {"order", s.order()}, {"terms", terms}};
}

Series series_from_json(const Json& j) {
  const int d = j.at("d").get<int>();
  const int order = j.at("order").get<int>();
  const auto& terms = j.at("terms");
  if (static_cast<int>(terms.size()) != order + 1)
    throw ConfigError("series term count mismatch");
  Series s(d, order);
  s.term(0) = vec(mat_from_json(terms[0]));
  Eigen::Index cols = 1;
  for (int n = 1; n <= order; ++n) {
    cols *= static_cast<Eigen::Index>(d) * d;
    s.term(n) = dense_from_json(terms[n], static_cast<Eigen::Index>(d) * d, cols);
  }
  return s;
}

Json module_spec_to_json(const ModuleSpec& spec) {
  Json etas = Json::array();
  for (const CPMap& eta : spec.etas) etas.push_back(cpmap_to_json(eta));
  return Json{{"d", spec.d},
              {"K", spec.K},
              {"L", spec.L},
              {"mode", spec.mode == FockMode::kMonotone ? "monotone"
                                                        : "weakly_monotone"},
              {"etas", etas}};
}

ModuleSpec module_spec_from_json(const Json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "monotone" && mode != "weakly_monotone")
    throw ConfigError("mode must be monotone or weakly_monotone");
  std::vector<CPMap> etas;
  for (const auto& e : j.at("etas")) etas.push_back(cpmap_from_json(e));
  return ModuleSpec(j.at("d").get<int>(), j.at("K").get<int>(),
                    j.at("L").get<int>(),
                    mode == "monotone" ? FockMode::kMonotone
                                       : FockMode::kWeaklyMonotone,
                    std::move(etas));
}

Json moment_spec_to_json(const MomentSpec& spec) {
  Json moments = Json::array();
  for (int n = 1; n <= spec.max_order(); ++n)
    moments.push_back(dense_to_json(spec.moment_matrix(n)));
  return Json{{"d", spec.dim()},
              {"max_order", spec.max_order()},
              {"moments", moments}};
}

MomentSpec moment_spec_from_json(const Json& j) {
  const int d = j.at("d").get<int>();
  const int max_order = j.at("max_order").get<int>();
  MomentSpec spec(d, max_order);
  const auto& moments = j.at("moments");
  if (static_cast<int>(moments.size()) != max_order)
    throw ConfigError("moment count mismatch");
  Eigen::Index cols = 1;
  for (int n = 1; n <= max_order; ++n) {
    spec.moment_matrix(n) =
        dense_from_json(moments[n - 1], static_cast<Eigen::Index>(d) * d, cols);
    cols *= static_cast<Eigen::Index>(d) * d;
  }
  return spec;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace monopro
