#include "mixodyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mixodyn/error.hpp"

namespace mixodyn {

namespace {

using nlohmann::json;

double* chemostat_field(ChemostatParams& p, std::string_view key) {
  if (key == "C") return &p.C;
  if (key == "D") return &p.D;
  if (key == "A1") return &p.A1;
  if (key == "A2") return &p.A2;
  if (key == "A3") return &p.A3;
  if (key == "A4") return &p.A4;
  if (key == "B1") return &p.B1;
  if (key == "B2") return &p.B2;
  if (key == "B3") return &p.B3;
  if (key == "B4") return &p.B4;
  return nullptr;
}

// Raw scaled inputs before `m` is derived.
struct ScaledInput {
  std::optional<double> c, k, x_star, a1, a2, b1, b2;
  double gamma1 = 0, kappa1 = 0, gamma2 = 0, kappa2 = 0;
  std::optional<double> m;  // accepted so `scale` output loads back; must agree
};

std::optional<double>* scaled_required(ScaledInput& s, std::string_view key) {
  if (key == "c") return &s.c;
  if (key == "k") return &s.k;
  if (key == "x_star") return &s.x_star;
  if (key == "a1") return &s.a1;
  if (key == "a2") return &s.a2;
  if (key == "b1") return &s.b1;
  if (key == "b2") return &s.b2;
  return nullptr;
}

double* scaled_optional(ScaledInput& s, std::string_view key) {
  if (key == "gamma1") return &s.gamma1;
  if (key == "kappa1") return &s.kappa1;
  if (key == "gamma2") return &s.gamma2;
  if (key == "kappa2") return &s.kappa2;
  return nullptr;
}

bool is_derived_key(std::string_view key) { return key == "m"; }

bool is_chemostat_key(std::string_view key) {
  ChemostatParams dummy;
  return chemostat_field(dummy, key) != nullptr;
}

bool is_scaled_key(std::string_view key) {
  ScaledInput dummy;
  return scaled_required(dummy, key) != nullptr || scaled_optional(dummy, key) != nullptr ||
         is_derived_key(key);
}

void assign_scaled(ScaledInput& s, std::string_view key, double v) {
  if (auto* r = scaled_required(s, key)) {
    *r = v;
  } else if (auto* o = scaled_optional(s, key)) {
    *o = v;
  } else if (is_derived_key(key)) {
    s.m = v;
  } else {
    throw Error(ErrorKind::Usage, "unknown scaled parameter '" + std::string(key) + "'");
  }
}

double json_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw Error(ErrorKind::Usage, "parameter '" + key + "' must be a number");
  return v.get<double>();
}

ScaledParams build_scaled(const ScaledInput& in);

ScaledParams finish_scaled(const ScaledInput& in) {
  std::string missing;
  const std::pair<const char*, const std::optional<double>*> required[] = {
      {"c", &in.c},   {"k", &in.k},   {"x_star", &in.x_star}, {"a1", &in.a1},
      {"a2", &in.a2}, {"b1", &in.b1}, {"b2", &in.b2}};
  for (const auto& [key, value] : required) {
    if (!value->has_value()) missing += missing.empty() ? key : std::string(", ") + key;
  }
  if (!missing.empty()) throw Error(ErrorKind::Usage, "missing scaled parameters: " + missing);
  const ScaledParams sp = build_scaled(in);
  if (in.m && std::abs(*in.m - sp.m) > 1e-12 * std::max(1.0, std::abs(sp.m))) {
    throw Error(ErrorKind::Usage, "m disagrees with a1 / (1 + b1 x_star)");
  }
  return sp;
}

ScaledParams build_scaled(const ScaledInput& in) {
  if (in.gamma1 == 0 && in.kappa1 == 0 && in.gamma2 == 0 && in.kappa2 == 0) {
    return make_saturated(*in.c, *in.k, *in.x_star, *in.a1, *in.a2, *in.b1, *in.b2);
  }
  ScaledParams sp;
  sp.c = *in.c;
  sp.k = *in.k;
  sp.x_star = *in.x_star;
  sp.a1 = *in.a1;
  sp.a2 = *in.a2;
  sp.b1 = *in.b1;
  sp.b2 = *in.b2;
  sp.gamma1 = in.gamma1;
  sp.kappa1 = in.kappa1;
  sp.gamma2 = in.gamma2;
  sp.kappa2 = in.kappa2;
  sp.m = sp.a1 / (1.0 + sp.b1 * sp.x_star);
  check_invariants(sp);
  return sp;
}

}  // namespace

double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || text.empty()) {
    throw Error(ErrorKind::Usage,
                "cannot parse '" + std::string(text) + "' as a number for " + std::string(what));
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text, std::size_t n, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_real(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != n) {
    throw Error(ErrorKind::Usage, std::string(what) + " expects " + std::to_string(n) +
                                      " comma-separated numbers");
  }
  return out;
}

ParamSource load_params(const std::optional<std::string>& config_path,
                        const std::vector<std::string>& overrides) {
  ChemostatParams chem;
  ScaledInput scaled;
  bool use_chem = false, use_scaled = false;

  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + *config_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Usage, "config '" + *config_path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Usage, "config must be a JSON object");
    for (const auto& [section, body] : doc.items()) {
      if (section != "chemostat" && section != "scaled") continue;
      if (!body.is_object()) {
        throw Error(ErrorKind::Usage, "config section '" + section + "' must be an object");
      }
      for (const auto& [key, value] : body.items()) {
        const double v = json_number(value, key);
        if (section == "chemostat") {
          double* f = chemostat_field(chem, key);
          if (!f) throw Error(ErrorKind::Usage, "unknown chemostat parameter '" + key + "'");
          *f = v;
          use_chem = true;
        } else {
          assign_scaled(scaled, key, v);
          use_scaled = true;
        }
      }
    }
  }

  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::Usage, "--set expects key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const double v = parse_real(std::string_view(item).substr(eq + 1), key);
    if (is_chemostat_key(key)) {
      *chemostat_field(chem, key) = v;
      use_chem = true;
    } else if (is_scaled_key(key)) {
      assign_scaled(scaled, key, v);
      use_scaled = true;
    } else {
      throw Error(ErrorKind::Usage, "unknown parameter '" + key + "'");
    }
  }

  if (use_chem && use_scaled) {
    throw Error(ErrorKind::Usage, "give either chemostat or scaled parameters, not both");
  }
  if (!use_chem && !use_scaled) {
    throw Error(ErrorKind::Usage, "no parameters given (use --config or --set)");
  }
  ParamSource src;
  if (use_chem) {
    src.chemostat = chem;
  } else {
    src.scaled = finish_scaled(scaled);
  }
  return src;
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace mixodyn
