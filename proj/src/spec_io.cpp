#include "lvattract/spec_io.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lvattract/error.hpp"
#include "lvattract/serialize.hpp"

namespace lv {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const toml::node* at, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (at) os << ':' << at->source().begin.line << ':' << at->source().begin.column;
    os << ": " << msg;
    throw Error(Errc::Parse, os.str());
  }

  const toml::table& table(const toml::node* node, const std::string& what) const {
    const auto* t = node ? node->as_table() : nullptr;
    if (!t) fail(node, what + " must be a table");
    return *t;
  }

  double number(const toml::node* node, const std::string& what) const {
    if (!node) fail(nullptr, "missing " + what);
    if (auto v = node->value<double>()) return *v;
    fail(node, what + " must be a number");
  }

  std::int64_t integer(const toml::node* node, const std::string& what) const {
    if (!node) fail(nullptr, "missing " + what);
    if (const auto* i = node->as_integer()) return i->get();
    fail(node, what + " must be an integer");
  }

  std::vector<double> numbers(const toml::node* node, const std::string& what) const {
    const auto* arr = node ? node->as_array() : nullptr;
    if (!arr) fail(node, what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& el : *arr) out.push_back(number(&el, what));
    return out;
  }

  void allow_keys(const toml::table& t, std::set<std::string> keys, const std::string& where) const {
    for (const auto& [k, v] : t)
      if (!keys.count(std::string(k.str()))) fail(&v, "unknown key '" + std::string(k.str()) + "' in " + where);
  }

  std::size_t species_index(const toml::key& k, const toml::node& v, std::size_t n) const {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(std::string(k.str()), &used);
      if (used != k.str().size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail(&v, "species key '" + std::string(k.str()) + "' must be an integer 1..n");
    }
    if (idx < 1 || idx > n) fail(&v, "species index " + std::to_string(idx) + " outside 1.." + std::to_string(n));
    return idx - 1;
  }

  Kernel kernel(const toml::node* node, const std::string& what) const {
    const toml::table& t = table(node, what);
    const auto type = t["type"].value<std::string>();
    if (!type) fail(node, what + " needs a string 'type'");
    try {
      if (*type == "point") {
        allow_keys(t, {"type", "delays", "weights"}, what);
        const auto delays = numbers(t.get("delays"), what + ".delays");
        std::vector<double> weights;
        if (t.contains("weights")) {
          weights = numbers(t.get("weights"), what + ".weights");
          if (weights.size() != delays.size()) fail(t.get("weights"), "weights and delays differ in length");
        } else {
          weights.assign(delays.size(), delays.empty() ? 0.0 : 1.0 / static_cast<double>(delays.size()));
        }
        std::vector<Atom> atoms;
        for (std::size_t q = 0; q < delays.size(); ++q) atoms.push_back({delays[q], weights[q]});
        return point_mixture(std::move(atoms));
      }
      if (*type == "exponential") {
        allow_keys(t, {"type", "rate"}, what);
        return exponential(number(t.get("rate"), what + ".rate"));
      }
      if (*type == "erlang") {
        allow_keys(t, {"type", "rate", "order"}, what);
        return erlang(number(t.get("rate"), what + ".rate"),
                      static_cast<int>(integer(t.get("order"), what + ".order")));
      }
      if (*type == "table") {
        allow_keys(t, {"type", "step", "densities", "normalize"}, what);
        const double step = number(t.get("step"), what + ".step");
        auto dens = numbers(t.get("densities"), what + ".densities");
        const bool norm = t["normalize"].value_or(false);
        return norm ? lv::normalized_table(step, std::move(dens)) : lv::table(step, std::move(dens));
      }
    } catch (const Error& e) {
      if (e.code() == Errc::Parse) throw;
      fail(node, what + ": " + e.what());
    }
    fail(t.get("type"), "unknown kernel type '" + *type + "'");
  }

 private:
  std::string source_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";  // keep TOML floats floats
  if (s == "inf") return "inf";
  return s;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t q = 0; q < v.size(); ++q) s += (q ? ", " : "") + num(v[q]);
  return s + "]";
}

std::string kernel_toml(const Kernel& k) {
  std::ostringstream os;
  if (const auto* p = std::get_if<PointMass>(&k)) {
    std::vector<double> d, w;
    for (const auto& a : p->atoms) {
      d.push_back(a.delay);
      w.push_back(a.weight);
    }
    os << "{ type = \"point\", delays = " << list(d) << ", weights = " << list(w) << " }";
  } else if (const auto* e = std::get_if<Exponential>(&k)) {
    os << "{ type = \"exponential\", rate = " << num(e->rate) << " }";
  } else if (const auto* g = std::get_if<Erlang>(&k)) {
    os << "{ type = \"erlang\", rate = " << num(g->rate) << ", order = " << g->order << " }";
  } else {
    const auto& t = std::get<Table>(k);
    os << "{ type = \"table\", step = " << num(t.step) << ", densities = " << list(t.densities) << " }";
  }
  return os.str();
}

}  // namespace

SystemSpec parse_spec(std::string_view text, std::string_view source) {
  const Reader rd{std::string(source)};
  toml::table doc;
  try {
    doc = toml::parse(text, source);
  } catch (const toml::parse_error& err) {
    std::ostringstream os;
    os << source << ':' << err.source().begin.line << ':' << err.source().begin.column << ": "
       << err.description();
    throw Error(Errc::Parse, os.str());
  }
  rd.allow_keys(doc, {"system", "species", "interaction", "controls", "kernels", "perturbations"}, "document");

  const toml::table& sys = rd.table(doc.get("system"), "[system]");
  rd.allow_keys(sys, {"n", "controlled"}, "[system]");
  const std::int64_t n_raw = rd.integer(sys.get("n"), "system.n");
  if (n_raw < 1 || n_raw > 64) rd.fail(sys.get("n"), "system.n must be in 1..64");
  const auto n = static_cast<std::size_t>(n_raw);
  SystemSpec s = make_spec(n);
  if (const auto* c = sys.get("controlled")) {
    const auto* b = c->as_boolean();
    if (!b) rd.fail(c, "system.controlled must be a boolean");
    s.controlled = b->get();
  }

  std::vector<bool> seen(n, false);
  const toml::table& species = rd.table(doc.get("species"), "[species]");
  for (const auto& [k, v] : species) {
    const std::size_t i = rd.species_index(k, v, n);
    const toml::table& t = rd.table(&v, "[species." + std::string(k.str()) + "]");
    rd.allow_keys(t, {"b", "mu"}, "[species." + std::string(k.str()) + "]");
    s.b(static_cast<Eigen::Index>(i)) = rd.number(t.get("b"), "species." + std::string(k.str()) + ".b");
    s.mu(static_cast<Eigen::Index>(i)) = rd.number(t.get("mu"), "species." + std::string(k.str()) + ".mu");
    seen[i] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) rd.fail(doc.get("species"), "missing [species." + std::to_string(i + 1) + "]");

  const toml::table& inter = rd.table(doc.get("interaction"), "[interaction]");
  rd.allow_keys(inter, {"a"}, "[interaction]");
  const auto* rows = inter.get("a") ? inter.get("a")->as_array() : nullptr;
  if (!rows || rows->size() != n) rd.fail(inter.get("a") ? inter.get("a") : &inter, "interaction.a must be an n x n array");
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = rd.numbers(rows->get(r), "interaction.a row");
    if (row.size() != n) rd.fail(rows->get(r), "interaction.a row " + std::to_string(r + 1) + " needs n entries");
    for (std::size_t c = 0; c < n; ++c) s.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }

  std::vector<bool> has_control(n, false);
  if (const auto* node = doc.get("controls")) {
    for (const auto& [k, v] : rd.table(node, "[controls]")) {
      const std::size_t i = rd.species_index(k, v, n);
      const std::string where = "controls." + std::string(k.str());
      const toml::table& t = rd.table(&v, "[" + where + "]");
      rd.allow_keys(t, {"c", "d", "e", "kernel"}, "[" + where + "]");
      const auto ii = static_cast<Eigen::Index>(i);
      s.c(ii) = rd.number(t.get("c"), where + ".c");
      if (t.contains("d")) s.d(ii) = rd.number(t.get("d"), where + ".d");
      if (t.contains("e")) s.e(ii) = rd.number(t.get("e"), where + ".e");
      if (t.contains("kernel")) s.G[i] = rd.kernel(t.get("kernel"), where + ".kernel");
      has_control[i] = true;
    }
  }
  if (s.controlled)
    for (std::size_t i = 0; i < n; ++i)
      if (!has_control[i]) rd.fail(&sys, "controlled system needs [controls." + std::to_string(i + 1) + "]");

  if (const auto* node = doc.get("kernels")) {
    const toml::table& kt = rd.table(node, "[kernels]");
    if (const auto* def = kt.get("default")) {
      const Kernel k = rd.kernel(def, "kernels.default");
      for (auto& slot : s.K) slot = k;
    }
    for (const auto& [k, v] : kt) {
      if (k.str() == "default") continue;
      const std::size_t i = rd.species_index(k, v, n);
      for (const auto& [k2, v2] : rd.table(&v, "[kernels." + std::string(k.str()) + "]")) {
        const std::size_t j = rd.species_index(k2, v2, n);
        s.kernel(i, j) = rd.kernel(&v2, "kernels." + std::string(k.str()) + "." + std::string(k2.str()));
      }
    }
  }

  if (const auto* node = doc.get("perturbations")) {
    s.h.assign(n, Perturbation{});
    for (const auto& [k, v] : rd.table(node, "[perturbations]")) {
      const std::size_t i = rd.species_index(k, v, n);
      const std::string where = "perturbations." + std::string(k.str());
      const toml::table& t = rd.table(&v, "[" + where + "]");
      rd.allow_keys(t, {"step", "values"}, "[" + where + "]");
      s.h[i].step = rd.number(t.get("step"), where + ".step");
      s.h[i].values = rd.numbers(t.get("values"), where + ".values");
    }
  }

  const ValidationReport rep = validate_spec(s);
  if (!rep.ok()) {
    std::string msg = std::string(source) + ": invalid system:";
    for (const auto& v : rep.violations) msg += "\n  " + v.field + ": " + v.message;
    throw Error(Errc::InvalidArgument, msg);
  }
  return s;
}

SystemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.string());
}

std::string to_toml(const SystemSpec& s) {
  std::ostringstream os;
  os << "[system]\nn = " << s.n << "\ncontrolled = " << (s.controlled ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < s.n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    os << "\n[species." << i + 1 << "]\nb = " << num(s.b(ii)) << "\nmu = " << num(s.mu(ii)) << "\n";
  }
  os << "\n[interaction]\na = [\n";
  for (std::size_t r = 0; r < s.n; ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < s.n; ++c) row.push_back(s.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    os << "  " << list(row) << ",\n";
  }
  os << "]\n";
  for (std::size_t i = 0; i < s.n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    os << "\n[controls." << i + 1 << "]\nc = " << num(s.c(ii)) << "\nd = " << num(s.d(ii))
       << "\ne = " << num(s.e(ii)) << "\nkernel = " << kernel_toml(s.G[i]) << "\n";
  }
  for (std::size_t i = 0; i < s.n; ++i) {
    os << "\n[kernels." << i + 1 << "]\n";
    for (std::size_t j = 0; j < s.n; ++j) os << j + 1 << " = " << kernel_toml(s.kernel(i, j)) << "\n";
  }
  for (std::size_t i = 0; i < s.h.size(); ++i) {
    if (s.h[i].empty()) continue;
    os << "\n[perturbations." << i + 1 << "]\nstep = " << num(s.h[i].step) << "\nvalues = " << list(s.h[i].values)
       << "\n";
  }
  return os.str();
}

std::string canonical_form(const SystemSpec& spec) { return to_json_value(spec).dump(); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string spec_hash(const SystemSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_form(spec))));
  return buf;
}

}  // namespace lv
