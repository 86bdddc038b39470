#include "proxjobs/model_json.hpp"

#include <fstream>

#include "proxjobs/errors.hpp"

namespace proxjobs {

nlohmann::json model_set_to_json(const ModelSet& modelset) {
  nlohmann::json doc;
  doc["year"] = modelset.year;
  doc["tau"] = modelset.tau;
  doc["boundaries"] = modelset.spec.boundaries;
  doc["fits"] = nlohmann::json::array();
  for (const auto& [stratum, fit] : modelset.fits) {
    nlohmann::json f;
    f["stratum"] = stratum;
    f["label"] = modelset.spec.label(stratum);
    f["intercept"] = fit.intercept;
    f["slope"] = fit.slope;
    f["n"] = fit.n;
    f["loss"] = fit.loss;
    f["n_neg"] = fit.n_neg;
    f["n_pos"] = fit.n_pos;
    f["n_zero"] = fit.n_zero;
    f["small_sample"] = fit.small_sample;
    doc["fits"].push_back(f);
  }
  doc["skipped"] = nlohmann::json::array();
  for (const auto& [stratum, reason] : modelset.skipped) {
    doc["skipped"].push_back({{"stratum", stratum}, {"reason", reason}});
  }
  return doc;
}

ModelSet model_set_from_json(const nlohmann::json& doc) {
  ModelSet out;
  try {
    out.year = doc.at("year").get<std::string>();
    out.tau = doc.at("tau").get<double>();
    if (doc.contains("boundaries")) {
      out.spec.boundaries = doc["boundaries"].get<std::vector<double>>();
    }
    out.spec.validate();
    for (const auto& f : doc.at("fits")) {
      QuantileFit fit;
      fit.tau = out.tau;
      fit.intercept = f.at("intercept").get<double>();
      fit.slope = f.at("slope").get<double>();
      fit.n = f.value("n", std::size_t{0});
      fit.loss = f.value("loss", 0.0);
      fit.n_neg = f.value("n_neg", std::size_t{0});
      fit.n_pos = f.value("n_pos", std::size_t{0});
      fit.n_zero = f.value("n_zero", std::size_t{0});
      fit.small_sample = f.value("small_sample", false);
      const std::size_t stratum = f.at("stratum").get<std::size_t>();
      if (stratum >= out.spec.stratum_count()) {
        throw DataError("model set: stratum index " + std::to_string(stratum) +
                        " out of range");
      }
      out.fits[stratum] = fit;
    }
    if (doc.contains("skipped")) {
      for (const auto& s : doc["skipped"]) {
        out.skipped[s.at("stratum").get<std::size_t>()] =
            s.at("reason").get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model set JSON: ") + e.what());
  }
  return out;
}

void save_model_set(const ModelSet& modelset,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << model_set_to_json(modelset).dump(2) << "\n";
  if (!out) {
    throw DataError("failed while writing " + path.string());
  }
}

ModelSet load_model_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
  return model_set_from_json(doc);
}

}  // namespace proxjobs
