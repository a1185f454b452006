#include "postaic/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "postaic/error.hpp"

namespace postaic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "key '" + key + "': not a number: '" + v + "'");
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "key '" + key + "': not an integer: '" + v + "'");
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long d = std::stoull(v, &used);
    if (used == v.size() && v.find('-') == std::string::npos) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "key '" + key + "': not an unsigned integer: '" + v + "'");
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw Error(ErrorCode::ParseError, "key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

void SimulationConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
  if (p < 1) fail("p must be >= 1");
  if (n <= p + 1) fail("n must exceed p + 1");
  if (static_cast<int>(beta.size()) != p) fail("beta needs exactly p entries");
  if (!(rho > -1.0 && rho < 1.0)) fail("rho must lie in (-1, 1)");
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (reps < 1) fail("reps must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (num_points < 0) fail("num_points must be >= 0");
  if (num_points == 0 && !coefficient_targets) fail("no inference targets configured");
  if (workers < 1) fail("workers must be >= 1");
  if (p > 20) fail("exhaustive simulation limited to p <= 20");
}

SimulationConfig parse_config(std::istream& in) {
  SimulationConfig c;
  std::vector<std::string> strategies;
  bool strategies_given = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") c.n = static_cast<int>(to_integer(key, value));
    else if (key == "p") c.p = static_cast<int>(to_integer(key, value));
    else if (key == "beta") {
      c.beta.clear();
      for (const auto& v : split_list(value)) c.beta.push_back(to_double(key, v));
    } else if (key == "rho") c.rho = to_double(key, value);
    else if (key == "sigma") c.sigma = to_double(key, value);
    else if (key == "reps") c.reps = static_cast<int>(to_integer(key, value));
    else if (key == "alpha") c.alpha = to_double(key, value);
    else if (key == "criterion") c.criterion = parse_criterion(value);
    else if (key == "sigma_strategies") {
      strategies = split_list(value);
      strategies_given = true;
    } else if (key == "num_points") c.num_points = static_cast<int>(to_integer(key, value));
    else if (key == "targets") {
      c.num_points = 0;
      c.coefficient_targets = false;
      for (const auto& t : split_list(value)) {
        if (t.rfind("points", 0) == 0) {
          const auto colon = t.find(':');
          c.num_points = colon == std::string::npos ? 10 : static_cast<int>(to_integer(key, t.substr(colon + 1)));
        } else if (t == "coefficients") {
          c.coefficient_targets = true;
        } else {
          throw Error(ErrorCode::ParseError, "key 'targets': unknown target kind '" + t + "'");
        }
      }
    } else if (key == "master_seed" || key == "seed") c.master_seed = to_unsigned(key, value);
    else if (key == "fixed_design") c.fixed_design = to_bool(key, value);
    else if (key == "skip_supersets") c.skip_supersets = to_bool(key, value);
    else if (key == "select") c.select = to_bool(key, value);
    else if (key == "intercept") c.intercept = to_bool(key, value);
    else if (key == "max_size") c.max_size = static_cast<std::size_t>(to_integer(key, value));
    else if (key == "workers") c.workers = static_cast<int>(to_integer(key, value));
    else
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (strategies_given) {
    c.sigma_strategies.clear();
    for (const auto& s : strategies)
      c.sigma_strategies.push_back(s == "known" ? SigmaSpec::known(c.sigma) : SigmaSpec::parse(s));
  } else {
    for (auto& s : c.sigma_strategies)
      if (s.strategy == SigmaSpec::Strategy::Known) s.value = c.sigma;
  }
  c.validate();
  return c;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  return parse_config(in);
}

std::string to_text(const SimulationConfig& c) {
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const auto& xs, auto&& f) {
    for (std::size_t k = 0; k < xs.size(); ++k) os << (k ? "," : "") << f(xs[k]);
  };
  os << "n = " << c.n << "\np = " << c.p << "\nbeta = ";
  list(c.beta, [](double b) { return b; });
  os << "\nrho = " << c.rho << "\nsigma = " << c.sigma << "\nreps = " << c.reps << "\nalpha = " << c.alpha
     << "\ncriterion = " << to_string(c.criterion) << "\nsigma_strategies = ";
  list(c.sigma_strategies, [](const SigmaSpec& s) { return s.label(); });
  os << "\nnum_points = " << c.num_points << "\ntargets = ";
  if (c.num_points > 0) os << "points:" << c.num_points << (c.coefficient_targets ? "," : "");
  if (c.coefficient_targets) os << "coefficients";
  os << "\nmaster_seed = " << c.master_seed << "\nfixed_design = " << (c.fixed_design ? "true" : "false")
     << "\nskip_supersets = " << (c.skip_supersets ? "true" : "false")
     << "\nselect = " << (c.select ? "true" : "false") << "\nintercept = " << (c.intercept ? "true" : "false");
  if (c.max_size) os << "\nmax_size = " << *c.max_size;
  os << "\nworkers = " << c.workers << '\n';
  return os.str();
}

}  // namespace postaic
