#include "zipperlab/alpha_io.hpp"

#include <cstdio>
#include <fstream>

#include "zipperlab/errors.hpp"

namespace zipperlab {

namespace {

Eigen::MatrixXd parse_real_part(const nlohmann::json& rows, int L, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != L)
    throw InvalidArgumentError(std::string("alpha_from_json: '") + what + "' must be an LxL array");
  Eigen::MatrixXd m(L, L);
  for (int i = 0; i < L; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != L)
      throw InvalidArgumentError(std::string("alpha_from_json: '") + what + "' row has wrong length");
    for (int j = 0; j < L; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

Matrix alpha_from_json(const nlohmann::json& j) {
  if (!j.contains("L")) throw InvalidArgumentError("alpha_from_json: missing 'L'");
  const int L = j.at("L").get<int>();
  if (L < 1) throw InvalidArgumentError("alpha_from_json: L must be >= 1");

  if (j.contains("scalar")) {
    const double a = j.at("scalar").get<double>();
    return a * Matrix::Identity(L, L);
  }
  if (!j.contains("re"))
    throw InvalidArgumentError("alpha_from_json: need either 'scalar' or 're'/'im'");

  Eigen::MatrixXd re = parse_real_part(j.at("re"), L, "re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(L, L);
  if (j.contains("im")) im = parse_real_part(j.at("im"), L, "im");
  return re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
}

Matrix load_alpha_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot read alpha file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("alpha file is not valid JSON: " + std::string(e.what()));
  }
  return alpha_from_json(j);
}

nlohmann::json alpha_to_json(const Matrix& alpha) {
  const int L = static_cast<int>(alpha.rows());
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int i = 0; i < L; ++i) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json irow = nlohmann::json::array();
    for (int j = 0; j < L; ++j) {
      rrow.push_back(alpha(i, j).real());
      irow.push_back(alpha(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return nlohmann::json{{"L", L}, {"re", re}, {"im", im}};
}

std::string alpha_fingerprint(const Matrix& alpha) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](const char* s) {
    for (; *s; ++s) {
      h ^= static_cast<unsigned char>(*s);
      h *= 0x100000001b3ULL;
    }
  };
  char buf[64];
  std::snprintf(buf, sizeof buf, "%dx%d;", static_cast<int>(alpha.rows()),
                static_cast<int>(alpha.cols()));
  eat(buf);
  for (int i = 0; i < alpha.rows(); ++i)
    for (int j = 0; j < alpha.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g;", alpha(i, j).real(), alpha(i, j).imag());
      eat(buf);
    }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace zipperlab
