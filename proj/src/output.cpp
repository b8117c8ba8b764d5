#include "pdcheb/experiments.hpp"

#include <Eigen/Core>
#include <fftw3.h>
#include <gsl/gsl_version.h>
#include <unistd.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace pdcheb {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string error_table_csv(const ErrorTable& table) {
  std::ostringstream out;
  out << "n,error,rate\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << format_double(row.error) << ',';
    if (row.rate) out << format_double(*row.rate);
    out << '\n';
  }
  return out.str();
}

std::string timing_table_csv(const TimingTable& table) {
  std::ostringstream out;
  out << "n,method,wall_seconds\n";
  for (const auto& row : table.rows) out << row.n << ',' << row.method << ',' << format_double(row.wall_seconds) << '\n';
  return out.str();
}

std::string profiles_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "n,x,spacetime,newmark\n";
  for (const auto& row : rows) {
    out << row.n << ',' << format_double(row.x) << ',' << format_double(row.spacetime) << ','
        << format_double(row.newmark) << '\n';
  }
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw std::runtime_error("cannot write '" + path.string() + "': directory does not exist");

  fs::path temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "': failed to open temporary file");
    out << contents;
    out.flush();
    if (!out) {
      fs::remove(temp, ec);
      throw std::runtime_error("cannot write '" + path.string() + "': write failed");
    }
  }
  fs::rename(temp, path, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw std::runtime_error("cannot write '" + path.string() + "': rename failed");
  }
}

std::map<std::string, std::string> library_versions() {
  return {
      {"pdcheb", "0.1.0"},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"fftw", fftw_version},
      {"gsl", GSL_VERSION},
  };
}

std::string file_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

}  // namespace pdcheb
