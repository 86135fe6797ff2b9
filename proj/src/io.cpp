#include "besov/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "besov/errors.hpp"

namespace besov {

nlohmann::json grid_to_json(const GridSpec& grid) {
  return {{"d", grid.dim()}, {"N", grid.n()}, {"L", grid.period()}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  return GridSpec(j.at("d").get<int>(), j.at("N").get<int>(), j.value("L", 1.0));
}

nlohmann::json grid_function_to_json(const GridFunction& f) {
  nlohmann::json j = grid_to_json(f.grid());
  j["value_dim"] = f.value_dim();
  j["domain_tag"] = to_string(f.domain());
  std::vector<double> data;
  data.reserve(2 * f.samples().size());
  for (auto z : f.samples()) {
    data.push_back(z.real());
    data.push_back(z.imag());
  }
  j["data"] = std::move(data);
  return j;
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  GridSpec grid = grid_from_json(j);
  int dim = j.at("value_dim").get<int>();
  Domain domain = domain_from_string(j.value("domain_tag", std::string("physical")));
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != 2 * grid.nodes() * std::size_t(dim))
    throw InvalidArgument("grid function data length does not match header");
  std::vector<cplx> samples(grid.nodes() * std::size_t(dim));
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = cplx(data[2 * i].get<double>(), data[2 * i + 1].get<double>());
  return GridFunction(grid, dim, std::move(samples), domain);
}

std::string grid_function_to_csv(const GridFunction& f) {
  if (f.grid().dim() != 1 || f.value_dim() != 1) throw InvalidArgument("CSV export needs a 1-d scalar function");
  std::ostringstream out;
  out << std::setprecision(17);
  out << (f.domain() == Domain::physical ? "x" : "xi") << ",re,im\n";
  for (std::size_t node = 0; node < f.nodes(); ++node) {
    double coord = f.domain() == Domain::physical ? f.grid().position(node, 0) : f.grid().frequency(node, 0);
    out << coord << ',' << f(node, 0).real() << ',' << f(node, 0).imag() << '\n';
  }
  return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace besov
