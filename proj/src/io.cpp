#include "qcsvd/io.hpp"

#include "qcsvd/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qcsvd::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(std::string_view field, const std::filesystem::path& path) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError(path.string() + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

int get_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw FormatError(std::string("state file missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

double get_double(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw FormatError(std::string("state file missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw FormatError("number formatting failed");
  return std::string(buf, ptr);
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_double(std::string_view(line).substr(start, comma - start), path));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw FormatError(path.string() + ": empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw FormatError(path.string() + ": matrix is not square (row " + std::to_string(i + 1) +
                        " has " + std::to_string(rows[i].size()) + " fields, expected " +
                        std::to_string(n) + ")");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_spectrum_csv(const std::filesystem::path& path, const SvdSpectrum& spec) {
  auto out = open_out(path);
  out << "n,sqrt_lambda,lambda\n";
  for (int n = 1; n <= spec.size(); ++n) {
    out << n << ',' << format_double(spec.values[n - 1]) << ',' << format_double(spec.squared[n - 1])
        << '\n';
  }
}

void write_heatmap_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  const double big = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double level = big > 0.0 ? std::abs(m(i, j)) / big : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * level))));
    }
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

nlohmann::json ed_state_to_json(const EdState& s) {
  nlohmann::json j;
  j["format"] = "qcsvd-ed-state";
  j["version"] = 1;
  j["n_sites"] = s.n_sites;
  j["sz_total"] = s.wf.basis->sz_total();
  j["J"] = s.coupling;
  j["energy"] = s.energy;
  j["amplitudes"] = std::vector<double>(s.wf.amps.begin(), s.wf.amps.end());
  return j;
}

EdState ed_state_from_json(const nlohmann::json& j) {
  EdState s;
  s.n_sites = get_int(j, "n_sites");
  s.coupling = get_double(j, "J");
  s.energy = get_double(j, "energy");
  auto basis = enumerate_sector(s.n_sites, get_double(j, "sz_total"));
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw FormatError("state file missing amplitudes");
  }
  const auto amps = j["amplitudes"].get<std::vector<double>>();
  if (amps.size() != basis->size()) throw FormatError("amplitude count does not match sector");
  s.wf = Wavefunction(basis, Eigen::Map<const Eigen::VectorXd>(amps.data(),
                                                                static_cast<Eigen::Index>(amps.size())));
  return s;
}

nlohmann::json mps_to_json(const MpsState& s, double coupling) {
  nlohmann::json j;
  j["format"] = "qcsvd-mps-state";
  j["version"] = 1;
  j["n_sites"] = s.n_sites();
  j["chi"] = s.chi();
  j["seed"] = s.seed;
  j["sweep_count"] = s.sweep_count;
  j["J"] = coupling;
  nlohmann::json tensors = nlohmann::json::array();
  for (int i = 0; i < s.n_sites(); ++i) {
    nlohmann::json site = nlohmann::json::array();
    for (int spin = 0; spin < 2; ++spin) {
      const Eigen::MatrixXd& m = s.tensor(i, spin);
      std::vector<double> flat;
      flat.reserve(static_cast<std::size_t>(m.size()));
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
      }
      site.push_back(flat);
    }
    tensors.push_back(site);
  }
  j["tensors"] = tensors;
  return j;
}

MpsState mps_from_json(const nlohmann::json& j) {
  const int n = get_int(j, "n_sites");
  const int chi = get_int(j, "chi");
  MpsState s(n, chi);
  s.seed = j.value("seed", std::uint64_t{0});
  s.sweep_count = j.value("sweep_count", 0);
  if (!j.contains("tensors") || !j["tensors"].is_array() || j["tensors"].size() != static_cast<std::size_t>(n)) {
    throw FormatError("state file has wrong tensor count");
  }
  for (int i = 0; i < n; ++i) {
    const auto& site = j["tensors"][static_cast<std::size_t>(i)];
    if (!site.is_array() || site.size() != 2) throw FormatError("each site needs two tensors");
    for (int spin = 0; spin < 2; ++spin) {
      const auto flat = site[static_cast<std::size_t>(spin)].get<std::vector<double>>();
      if (flat.size() != static_cast<std::size_t>(chi) * static_cast<std::size_t>(chi)) {
        throw FormatError("tensor has wrong size");
      }
      Eigen::MatrixXd& m = s.tensor(i, spin);
      for (int r = 0; r < chi; ++r) {
        for (int c = 0; c < chi; ++c) m(r, c) = flat[static_cast<std::size_t>(r * chi + c)];
      }
    }
  }
  return s;
}

StateFile read_state(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  const std::string format = j.value("format", "");
  try {
    if (format == "qcsvd-ed-state") return ed_state_from_json(j);
    if (format == "qcsvd-mps-state") return mps_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  throw FormatError(path.string() + ": unrecognized state format '" + format + "'");
}

}  // namespace qcsvd::io
