#include "ancient/report.hpp"

#include <cmath>
#include <fstream>

namespace ancient {

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << text;
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json config_json(const RunConfig& c) {
  auto num = [](double v) -> Json { return std::isnan(v) ? Json(nullptr) : Json(v); };
  Json j;
  j["surface"] = c.surface;
  j["n"] = c.n;
  j["S"] = c.S;
  j["Ns"] = c.Ns;
  j["K"] = c.K;
  j["beta"] = num(c.beta);
  j["alpha"] = c.alpha;
  j["delta0"] = num(c.delta0);
  j["T"] = num(c.T);
  j["M"] = c.M;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["epsilon0"] = c.epsilon0;
  j["a"] = c.a;
  j["agrid"] = c.agrid;
  j["seed"] = c.seed;
  return j;
}

Report::Report(std::string command, const RunConfig& config)
    : command_(std::move(command)), config_(config_json(config)) {}

bool Report::check(const std::string& name, double value, const std::string& relation,
                   double tolerance) {
  bool ok = false;
  if (relation == "<") ok = value < tolerance;
  else if (relation == "<=") ok = value <= tolerance;
  else if (relation == ">") ok = value > tolerance;
  else if (relation == "finite") ok = std::isfinite(value);
  else throw Error("unknown relation " + relation);
  Json c;
  c["name"] = name;
  c["value"] = std::isfinite(value) ? Json(value) : Json(nullptr);
  c["relation"] = relation;
  c["tolerance"] = tolerance;
  c["pass"] = ok;
  checks_.push_back(c);
  pass_ = pass_ && ok;
  return ok;
}

bool Report::check(const std::string& name, bool pass, const std::string& detail) {
  Json c;
  c["name"] = name;
  c["detail"] = detail;
  c["pass"] = pass;
  checks_.push_back(c);
  pass_ = pass_ && pass;
  return pass;
}

void Report::timing(const std::string& name, double seconds) { timings_[name] = seconds; }

bool Report::all_pass() const { return pass_; }

Json Report::json() const {
  Json j;
  j["command"] = command_;
  j["config"] = config_;
  j["results"] = results_;
  j["checks"] = checks_;
  j["pass"] = pass_;
  return j;
}

void Report::write(const std::filesystem::path& dir) const {
  write_atomic(dir / "report.json", json().dump(2) + "\n");
  write_atomic(dir / "timings.json", timings_.dump(2) + "\n");
}

}  // namespace ancient
