#include "mgpd/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mgpd {

namespace {

using nlohmann::json;

const char* variant_name(StdfVariant v) {
  switch (v) {
    case StdfVariant::Independence:
      return "independence";
    case StdfVariant::CompleteDependence:
      return "complete_dependence";
    case StdfVariant::Logistic:
      return "logistic";
    case StdfVariant::DNormMonteCarlo:
      return "dnorm_monte_carlo";
  }
  return "?";
}

StdfModel base_from_name(const std::string& name, std::size_t dim, const json& params) {
  if (name == "independence") return StdfModel::independence(dim);
  if (name == "complete_dependence") return StdfModel::complete_dependence(dim);
  if (name == "logistic") return StdfModel::logistic(dim, params.at("theta").get<double>());
  throw std::invalid_argument("stdf_from_json: unknown variant '" + name + "'");
}

json stdf_to_json_obj(const StdfModel& m) {
  json j;
  j["dim"] = m.dim();
  j["params"] = json::object();
  switch (m.variant()) {
    case StdfVariant::Independence:
    case StdfVariant::CompleteDependence:
      j["variant"] = variant_name(m.variant());
      break;
    case StdfVariant::Logistic:
      j["variant"] = variant_name(m.variant());
      j["params"]["theta"] = m.theta();
      break;
    case StdfVariant::DNormMonteCarlo: {
      const auto* p = m.provenance();
      if (p == nullptr) {
        throw std::invalid_argument(
            "to_json: Monte Carlo stdf without named-generator provenance is not serializable");
      }
      j["variant"] = variant_name(m.variant());
      j["params"]["base"] = variant_name(p->base);
      if (p->base == StdfVariant::Logistic) j["params"]["theta"] = p->theta;
      j["seed"] = p->seed;
      j["n_mc"] = p->n_mc;
      break;
    }
  }
  return j;
}

StdfModel stdf_from_json_obj(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  const auto dim = j.at("dim").get<std::size_t>();
  const json params = j.value("params", json::object());
  if (variant == "dnorm_monte_carlo") {
    const StdfModel base = base_from_name(params.at("base").get<std::string>(), dim, params);
    return StdfModel::dnorm_of(base, j.at("n_mc").get<std::size_t>(),
                               j.at("seed").get<std::uint64_t>());
  }
  return base_from_name(variant, dim, params);
}

Vec vec_from(const json& j) { return j.get<Vec>(); }

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument(std::string(what) + ": malformed JSON");
  }
  return j;
}

}  // namespace

std::string to_json(const StdfModel& m) { return stdf_to_json_obj(m).dump(); }

StdfModel stdf_from_json(const std::string& text) {
  return stdf_from_json_obj(parse(text, "stdf_from_json"));
}

std::string to_json(const GpParams& h) {
  json j;
  j["type"] = "gp";
  j["sigma"] = h.sigma();
  j["gamma"] = h.gamma();
  j["tau"] = h.tau();
  j["pi"] = h.pi();
  j["stdf"] = stdf_to_json_obj(h.ell());
  return j.dump();
}

GpParams gp_from_json(const std::string& text) {
  const json j = parse(text, "gp_from_json");
  if (j.value("type", "gp") != "gp") {
    throw std::invalid_argument("gp_from_json: type field is not 'gp'");
  }
  Vec tau;
  if (j.contains("tau")) {
    tau = vec_from(j.at("tau"));
  } else if (j.contains("pi")) {
    tau = vec_from(j.at("pi"));
  } else {
    throw std::invalid_argument("gp_from_json: missing field 'tau' (or 'pi')");
  }
  return GpParams(vec_from(j.at("sigma")), vec_from(j.at("gamma")), std::move(tau),
                  stdf_from_json_obj(j.at("stdf")));
}

std::string to_json(const GevParams& g) {
  json j;
  j["type"] = "gev";
  j["mu"] = g.mu;
  j["gamma"] = g.gamma;
  j["alpha"] = g.alpha;
  j["stdf"] = stdf_to_json_obj(g.ell);
  return j.dump();
}

GevParams gev_from_json(const std::string& text) {
  const json j = parse(text, "gev_from_json");
  if (j.value("type", "gev") != "gev") {
    throw std::invalid_argument("gev_from_json: type field is not 'gev'");
  }
  return GevParams(vec_from(j.at("mu")), vec_from(j.at("gamma")), vec_from(j.at("alpha")),
                   stdf_from_json_obj(j.at("stdf")));
}

bool json_is_gev(const std::string& text) {
  const json j = parse(text, "json_is_gev");
  return j.value("type", "") == "gev";
}

void write_batch_csv(const SampleBatch& batch, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_batch_csv: cannot open '" + path + "'");
  const std::size_t d = batch.dim();
  for (std::size_t j = 0; j < d; ++j) os << (j ? "," : "") << 'x' << (j + 1);
  os << '\n';
  char buf[40];
  for (std::size_t i = 0; i < batch.n(); ++i) {
    auto row = batch.data.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (j) os << ',';
      if (is_neg_inf(row[j])) {
        os << "-inf";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", row[j]);
        os << buf;
      }
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write_batch_csv: write failed for '" + path + "'");
}

std::string batch_sidecar_json(const SampleBatch& batch) {
  json j;
  j["seed"] = batch.seed;
  j["stream"] = batch.stream_id;
  j["n"] = batch.n();
  j["d"] = batch.dim();
  j["representation"] = batch.representation;
  if (!batch.model_json.empty()) {
    j["params"] = json::parse(batch.model_json);
  }
  return j.dump(2);
}

SampleBatch read_batch_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_batch_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("read_batch_csv: missing header in '" + path + "'");
  }
  std::size_t d = 1;
  for (char c : line) {
    if (c == ',') ++d;
  }
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (std::size_t j = 0; j < d; ++j) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw std::runtime_error("read_batch_csv: malformed value at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(j + 1));
      }
      values.push_back(v);
      p = end;
      if (j + 1 < d) {
        while (*p != '\0' && std::isspace(static_cast<unsigned char>(*p))) ++p;
        if (*p != ',') {
          throw std::runtime_error("read_batch_csv: expected ',' at line " +
                                   std::to_string(line_no));
        }
        ++p;
      }
    }
    ++rows;
  }
  SampleBatch batch;
  batch.data = Matrix(rows, d);
  batch.data.data() = std::move(values);
  batch.representation = "file";
  return batch;
}

}  // namespace mgpd
