#include "mfvar/store.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mfvar {

namespace {

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      double v = m(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

Eigen::MatrixXd read_matrix(std::ifstream& in, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(double));
      m(r, c) = v;
    }
  if (!in) throw std::runtime_error("store: truncated binary file");
  return m;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("store: cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("store: cannot open " + p.string());
  return in;
}

std::string chain_file(int c, const char* part) {
  return "chain_" + std::to_string(c) + "_" + part + ".bin";
}

}  // namespace

void save_store(const std::filesystem::path& dir, const StoreMeta& meta,
                const std::vector<std::vector<PosteriorDraw>>& chains) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["format_version"] = 1;
  j["M"] = meta.M;
  j["M_L"] = meta.M_L;
  j["P"] = meta.P;
  j["T"] = meta.T;
  j["include_intercept"] = meta.include_intercept;
  j["seeds"] = meta.seeds;
  j["config_hash"] = meta.config_hash;
  j["names"] = meta.names;
  std::vector<std::vector<int>> stamps;
  for (const auto& s : meta.stamps) stamps.push_back({s.year, s.week});
  j["stamps"] = stamps;
  std::vector<int> counts;
  for (const auto& c : chains) counts.push_back(static_cast<int>(c.size()));
  j["draws_per_chain"] = counts;
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("store: cannot write manifest");
    out << j.dump(2) << "\n";
  }

  for (size_t c = 0; c < chains.size(); ++c) {
    int ci = static_cast<int>(c);
    auto fa = open_out(dir / chain_file(ci, "A"));
    auto fs = open_out(dir / chain_file(ci, "sigma"));
    auto fh = open_out(dir / chain_file(ci, "h"));
    auto fv = open_out(dir / chain_file(ci, "sv"));
    auto fw = open_out(dir / chain_file(ci, "weekly"));
    std::ofstream fi;
    if (meta.include_intercept) fi = open_out(dir / chain_file(ci, "intercept"));
    for (const auto& d : chains[c]) {
      write_matrix(fa, d.A);
      write_matrix(fs, d.Sigma);
      write_matrix(fh, d.h);
      Eigen::Vector3d sv(d.mu_h, d.rho_h, d.sigma_h);
      write_matrix(fv, sv);
      write_matrix(fw, d.weekly);
      if (meta.include_intercept) write_matrix(fi, d.intercept);
    }
  }
}

LoadedStore load_store(const std::filesystem::path& dir) {
  LoadedStore store;
  nlohmann::json j;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("store: missing manifest in " + dir.string());
    in >> j;
  }
  store.meta.M = j.at("M").get<int>();
  store.meta.M_L = j.at("M_L").get<int>();
  store.meta.P = j.at("P").get<int>();
  store.meta.T = j.at("T").get<int>();
  store.meta.include_intercept = j.at("include_intercept").get<bool>();
  store.meta.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  store.meta.config_hash = j.at("config_hash").get<std::string>();
  store.meta.names = j.at("names").get<std::vector<std::string>>();
  for (const auto& s : j.at("stamps"))
    store.meta.stamps.push_back(WeekStamp{s.at(0).get<int>(), s.at(1).get<int>()});
  store.meta.draws_per_chain = j.at("draws_per_chain").get<std::vector<int>>();

  const int M = store.meta.M, P = store.meta.P, T = store.meta.T;
  for (size_t c = 0; c < store.meta.draws_per_chain.size(); ++c) {
    int ci = static_cast<int>(c);
    int n = store.meta.draws_per_chain[c];
    auto fa = open_in(dir / chain_file(ci, "A"));
    auto fs = open_in(dir / chain_file(ci, "sigma"));
    auto fh = open_in(dir / chain_file(ci, "h"));
    auto fv = open_in(dir / chain_file(ci, "sv"));
    auto fw = open_in(dir / chain_file(ci, "weekly"));
    std::ifstream fi;
    if (store.meta.include_intercept)
      fi = open_in(dir / chain_file(ci, "intercept"));
    std::vector<PosteriorDraw> chain;
    chain.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      PosteriorDraw d;
      d.A = read_matrix(fa, M, M * P);
      d.Sigma = read_matrix(fs, M, M);
      d.h = read_matrix(fh, T, 1);
      Eigen::MatrixXd sv = read_matrix(fv, 3, 1);
      d.mu_h = sv(0, 0);
      d.rho_h = sv(1, 0);
      d.sigma_h = sv(2, 0);
      d.weekly = read_matrix(fw, T, M);
      d.intercept = store.meta.include_intercept
                        ? Eigen::VectorXd(read_matrix(fi, M, 1))
                        : Eigen::VectorXd::Zero(M);
      chain.push_back(std::move(d));
    }
    store.chains.push_back(std::move(chain));
  }
  return store;
}

std::vector<PosteriorDraw> LoadedStore::merged() const {
  std::vector<PosteriorDraw> all;
  for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
  return all;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace mfvar
