#include "mvpure/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mvpure/errors.hpp"

namespace mvpure::io {
namespace {

constexpr std::array<char, 5> kMagic{'M', 'V', 'P', 'M', '1'};
constexpr std::uint32_t kMaxRank = 8;

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }
}

template <typename T>
void put(std::ostream& os, T value) {
  value = to_little(value);
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& path) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) fail(ErrorCode::kFormatError, path.string() + ": truncated MVPM1 file");
  return to_little(value);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) fail(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kIoError, path.string() + ": no such file");
  std::ifstream is(path, mode);
  if (!is) fail(ErrorCode::kIoError, "cannot open " + path.string() + " for reading");
  return is;
}

Tensor to_tensor(const Matrix& m) {
  Tensor t;
  t.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  t.values.resize(static_cast<std::size_t>(m.size()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.values[k++] = m(i, j);
  return t;
}

Matrix to_matrix(const Tensor& t, const std::filesystem::path& path) {
  if (t.dims.size() != 2) {
    fail(ErrorCode::kFormatError,
         path.string() + ": expected a rank-2 tensor, found rank " + std::to_string(t.dims.size()));
  }
  const auto rows = static_cast<Eigen::Index>(t.dims[0]);
  const auto cols = static_cast<Eigen::Index>(t.dims[1]);
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = t.values[k++];
  return m;
}

}  // namespace

std::uint64_t Tensor::element_count() const {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  if (tensor.element_count() != tensor.values.size()) {
    fail(ErrorCode::kDimensionMismatch, "tensor payload does not match its dimensions");
  }
  auto os = open_out(path, std::ios::binary);
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put<std::uint64_t>(os, d);
  for (double v : tensor.values) put<double>(os, v);
  if (!os) fail(ErrorCode::kIoError, "failed writing " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::binary);
  std::array<char, 5> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) fail(ErrorCode::kFormatError, path.string() + ": missing MVPM1 magic");
  const auto rank = get<std::uint32_t>(is, path);
  if (rank > kMaxRank) {
    fail(ErrorCode::kFormatError, path.string() + ": implausible rank " + std::to_string(rank));
  }
  Tensor t;
  for (std::uint32_t i = 0; i < rank; ++i) t.dims.push_back(get<std::uint64_t>(is, path));

  const auto here = is.tellg();
  is.seekg(0, std::ios::end);
  const auto remaining = static_cast<std::uint64_t>(is.tellg() - here);
  is.seekg(here);
  const std::uint64_t count = t.element_count();
  if (count > remaining / sizeof(double) || remaining != count * sizeof(double)) {
    fail(ErrorCode::kFormatError, path.string() + ": payload size does not match dimensions");
  }
  t.values.resize(static_cast<std::size_t>(count));
  for (auto& v : t.values) v = get<double>(is, path);
  return t;
}

void write_matrix(const std::filesystem::path& path, const Matrix& matrix) {
  write_tensor(path, to_tensor(matrix));
}

Matrix read_matrix(const std::filesystem::path& path) { return to_matrix(read_tensor(path), path); }

void write_csv(const std::filesystem::path& path, const Matrix& matrix) {
  auto os = open_out(path, std::ios::out);
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) os << ',';
      os << matrix(i, j);
    }
    os << '\n';
  }
  if (!os) fail(ErrorCode::kIoError, "failed writing " + path.string());
}

Matrix read_csv(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::in);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::kFormatError,
             path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::kFormatError, path.string() + ": empty CSV");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix load_matrix_any(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_csv(path) : read_matrix(path);
}

void write_epochs(const std::filesystem::path& path, const Epochs& epochs) {
  Tensor t;
  t.dims = {epochs.data.size(), static_cast<std::uint64_t>(epochs.num_channels()),
            static_cast<std::uint64_t>(epochs.num_times())};
  t.values.reserve(static_cast<std::size_t>(t.element_count()));
  for (const auto& e : epochs.data)
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      for (Eigen::Index j = 0; j < e.cols(); ++j) t.values.push_back(e(i, j));
  write_tensor(path, t);
  nlohmann::json meta{{"sfreq", epochs.sfreq}, {"t0", epochs.t0}};
  auto os = open_out(path.string() + ".json", std::ios::out);
  os << meta.dump(2) << '\n';
}

Epochs read_epochs(const std::filesystem::path& path, double sfreq, double t0) {
  const Tensor t = read_tensor(path);
  std::vector<Matrix> data;
  if (t.dims.size() == 2) {
    data.push_back(to_matrix(t, path));
  } else if (t.dims.size() == 3) {
    const auto m = static_cast<Eigen::Index>(t.dims[1]);
    const auto n = static_cast<Eigen::Index>(t.dims[2]);
    std::size_t k = 0;
    for (std::uint64_t e = 0; e < t.dims[0]; ++e) {
      Matrix epoch(m, n);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) epoch(i, j) = t.values[k++];
      data.push_back(std::move(epoch));
    }
  } else {
    fail(ErrorCode::kFormatError, path.string() + ": epochs must be a rank-2 or rank-3 tensor");
  }
  return Epochs::make(std::move(data), sfreq, t0);
}

Epochs read_epochs(const std::filesystem::path& path) {
  const std::filesystem::path sidecar = path.string() + ".json";
  auto is = open_in(sidecar, std::ios::in);
  nlohmann::json meta;
  try {
    is >> meta;
    return read_epochs(path, meta.at("sfreq").get<double>(), meta.at("t0").get<double>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormatError, sidecar.string() + ": " + e.what());
  }
}

void write_scenario(const std::filesystem::path& dir, const Scenario& sc) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  write_matrix(dir / "leadfield.mvpm", sc.leadfield.gains);
  write_matrix(dir / "Q0.mvpm", sc.Q0);
  write_matrix(dir / "N.mvpm", sc.N.matrix);
  write_matrix(dir / "R.mvpm", sc.R.matrix);
  nlohmann::json manifest{{"leadfield", "leadfield.mvpm"},
                          {"true_sources", sc.true_sources.indices()},
                          {"Q0", "Q0.mvpm"},
                          {"N", "N.mvpm"},
                          {"R", "R.mvpm"},
                          {"seed", sc.seed}};
  auto os = open_out(dir / "manifest.json", std::ios::out);
  os << manifest.dump(2) << '\n';
}

Scenario read_scenario(const std::filesystem::path& dir) {
  auto is = open_in(dir / "manifest.json", std::ios::in);
  nlohmann::json manifest;
  try {
    is >> manifest;
    Scenario sc;
    sc.leadfield = LeadField::from_gains(read_matrix(dir / manifest.at("leadfield").get<std::string>()));
    sc.true_sources = SourceSet(manifest.at("true_sources").get<std::vector<int>>());
    sc.true_sources.validate(sc.leadfield.num_sources(), sc.leadfield.num_channels());
    sc.Q0 = read_matrix(dir / manifest.at("Q0").get<std::string>());
    sc.N = Covariance::make(read_matrix(dir / manifest.at("N").get<std::string>()), CovarianceKind::kNoise);
    sc.R = Covariance::make(read_matrix(dir / manifest.at("R").get<std::string>()), CovarianceKind::kData);
    sc.seed = manifest.at("seed").get<std::uint64_t>();
    return sc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormatError, (dir / "manifest.json").string() + ": " + e.what());
  }
}

}  // namespace mvpure::io
