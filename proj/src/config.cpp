#include "ymh/config.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ymh/errors.hpp"

namespace ymh {

GroupSpec RunConfig::group_spec() const {
  if (group == "SO") return GroupSpec(GroupFamily::SO, N);
  if (group == "U") return GroupSpec(GroupFamily::U, N);
  if (group == "SU") return GroupSpec(GroupFamily::SU, N);
  throw ParameterError("unknown group '" + group + "' (expected SO, U or SU)");
}

HiggsSpec RunConfig::higgs_spec() const {
  if (target == "sphere") return HiggsSpec(HiggsTarget::Sphere, group_spec());
  if (target == "flat") return HiggsSpec(HiggsTarget::Flat, group_spec(), vcoeff);
  throw ParameterError("unknown target '" + target + "' (expected sphere or flat)");
}

ModelParams RunConfig::model_params() const {
  return ModelParams(group_spec(), higgs_spec(), LatticeGeometry(d, L), beta, kappa);
}

std::string RunConfig::render() const {
  std::ostringstream os;
  os << "group = " << group << "\n";
  os << "N = " << N << "\n";
  os << "target = " << target << "\n";
  os << "beta = " << beta << "\n";
  os << "kappa = " << kappa << "\n";
  os << "V =";
  for (double v : vcoeff) os << " " << v;
  os << "\n";
  os << "d = " << d << "\n";
  os << "L = " << L << "\n";
  os << "burnin = " << plan.burnin_sweeps << "\n";
  os << "thinning = " << plan.thinning << "\n";
  os << "chains = " << plan.chains << "\n";
  os << "samples = " << plan.total_samples << "\n";
  os << "sigma_edge = " << plan.sigma_edge << "\n";
  os << "sigma_site = " << plan.sigma_site << "\n";
  os << "adapt = " << (plan.adapt ? 1 : 0) << "\n";
  os << "reproject_every = " << plan.reproject_every << "\n";
  os << "seed = " << seed << "\n";
  os << "threads = " << threads << "\n";
  os << "z_threshold = " << z_threshold << "\n";
  os << "iid_samples = " << iid_samples << "\n";
  os << "magic_tol = " << magic_tol << "\n";
  os << "grad_tol = " << grad_tol << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a over the canonical rendering
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : render()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream iss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError("expected 'key = value'", lineno);
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) throw ParseError("empty key or value", lineno);
    try {
      if (key == "group") cfg.group = val;
      else if (key == "N") cfg.N = std::stoi(val);
      else if (key == "target") cfg.target = val;
      else if (key == "beta") cfg.beta = std::stod(val);
      else if (key == "kappa") cfg.kappa = std::stod(val);
      else if (key == "V") {
        cfg.vcoeff.clear();
        std::istringstream vs(val);
        double x;
        while (vs >> x) cfg.vcoeff.push_back(x);
        if (cfg.vcoeff.empty()) throw ParseError("V needs coefficients", lineno);
      } else if (key == "d") cfg.d = std::stoi(val);
      else if (key == "L") cfg.L = std::stoi(val);
      else if (key == "burnin") cfg.plan.burnin_sweeps = std::stoi(val);
      else if (key == "thinning") cfg.plan.thinning = std::stoi(val);
      else if (key == "chains") cfg.plan.chains = std::stoi(val);
      else if (key == "samples") cfg.plan.total_samples = std::stoll(val);
      else if (key == "sigma_edge") cfg.plan.sigma_edge = std::stod(val);
      else if (key == "sigma_site") cfg.plan.sigma_site = std::stod(val);
      else if (key == "adapt") cfg.plan.adapt = std::stoi(val) != 0;
      else if (key == "reproject_every") cfg.plan.reproject_every = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "threads") cfg.threads = std::stoi(val);
      else if (key == "z_threshold") cfg.z_threshold = std::stod(val);
      else if (key == "iid_samples") cfg.iid_samples = std::stoll(val);
      else if (key == "magic_tol") cfg.magic_tol = std::stod(val);
      else if (key == "grad_tol") cfg.grad_tol = std::stod(val);
      else throw ParseError("unknown key '" + key + "'", lineno);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("bad value for key '" + key + "'", lineno);
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write file: " + path);
  out << content;
}

std::string RunManifest::render_json() const {
  auto escape = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      if (c == '\n') { o += "\\n"; continue; }
      o += c;
    }
    return o;
  };
  std::ostringstream os;
  os << "{\n";
  os << "  \"command\": \"" << escape(command) << "\",\n";
  os << "  \"version\": \"" << escape(version) << "\",\n";
  os << "  \"timestamp\": \"" << escape(timestamp) << "\",\n";
  os << "  \"config_hash\": \"" << std::hex << config.hash() << std::dec << "\",\n";
  os << "  \"config\": \"" << escape(config.render()) << "\",\n";
  os << "  \"outputs\": [";
  for (std::size_t i = 0; i < outputs.size(); ++i)
    os << (i ? ", " : "") << "\"" << escape(outputs[i]) << "\"";
  os << "]\n}\n";
  return os.str();
}

// --- snapshots ----------------------------------------------------------------

namespace {
constexpr char kMagic[8] = {'Y', 'M', 'H', 'S', 'N', 'A', 'P', '1'};

struct SnapshotHeader {
  char magic[8];
  std::uint64_t config_hash;
  std::int32_t d, L, N, scalar_complex;
  std::int64_t count;
};
}  // namespace

struct SnapshotWriter::Impl {
  std::FILE* f = nullptr;
  SnapshotHeader hdr{};
  std::string path;
};

SnapshotWriter::SnapshotWriter(const std::string& path, const RunConfig& cfg) : impl_(new Impl) {
  impl_->path = path;
  impl_->f = std::fopen(path.c_str(), "wb");
  if (!impl_->f) {
    delete impl_;
    throw ParameterError("cannot write snapshot: " + path);
  }
  std::memcpy(impl_->hdr.magic, kMagic, 8);
  impl_->hdr.config_hash = cfg.hash();
  impl_->hdr.d = cfg.d;
  impl_->hdr.L = cfg.L;
  impl_->hdr.N = cfg.N;
  impl_->hdr.scalar_complex = cfg.group == "SO" ? 0 : 1;
  impl_->hdr.count = 0;
  std::fwrite(&impl_->hdr, sizeof impl_->hdr, 1, impl_->f);
}

void SnapshotWriter::append(const FieldConfig& c) {
  for (std::int64_t l = 0; l < c.num_links(); ++l) {
    const Matrix& m = c.link(l);
    std::fwrite(m.data(), sizeof(Complex), static_cast<std::size_t>(m.size()), impl_->f);
  }
  for (std::int32_t x = 0; x < c.num_sites(); ++x) {
    const Vector& v = c.phi(x);
    std::fwrite(v.data(), sizeof(Complex), static_cast<std::size_t>(v.size()), impl_->f);
  }
  ++count_;
}

void SnapshotWriter::close() {
  if (!impl_ || !impl_->f) return;
  impl_->hdr.count = count_;
  std::fseek(impl_->f, 0, SEEK_SET);
  std::fwrite(&impl_->hdr, sizeof impl_->hdr, 1, impl_->f);
  std::fclose(impl_->f);
  impl_->f = nullptr;
}

SnapshotWriter::~SnapshotWriter() {
  close();
  delete impl_;
}

std::vector<FieldConfig> load_snapshot(const std::string& path, const RunConfig& cfg) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw ParameterError("cannot open snapshot: " + path);
  SnapshotHeader hdr;
  if (std::fread(&hdr, sizeof hdr, 1, f) != 1 || std::memcmp(hdr.magic, kMagic, 8) != 0) {
    std::fclose(f);
    throw ParameterError("not a snapshot file: " + path);
  }
  if (hdr.config_hash != cfg.hash()) {
    std::fclose(f);
    throw ParameterError("snapshot was produced under a different configuration");
  }
  LatticeGeometry g(hdr.d, hdr.L);
  std::vector<FieldConfig> out;
  out.reserve(static_cast<std::size_t>(hdr.count));
  for (std::int64_t i = 0; i < hdr.count; ++i) {
    FieldConfig c(g, hdr.N);
    bool ok = true;
    for (std::int64_t l = 0; l < c.num_links() && ok; ++l) {
      Matrix& m = c.link(l);
      ok = std::fread(m.data(), sizeof(Complex), static_cast<std::size_t>(m.size()), f) ==
           static_cast<std::size_t>(m.size());
    }
    for (std::int32_t x = 0; x < c.num_sites() && ok; ++x) {
      Vector& v = c.phi(x);
      ok = std::fread(v.data(), sizeof(Complex), static_cast<std::size_t>(v.size()), f) ==
           static_cast<std::size_t>(v.size());
    }
    if (!ok) {
      std::fclose(f);
      throw ParameterError("snapshot truncated: " + path);
    }
    out.push_back(std::move(c));
  }
  std::fclose(f);
  return out;
}

}  // namespace ymh
