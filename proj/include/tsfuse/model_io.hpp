/*
 * Copyright 2026 The tsfuse authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TSFUSE_MODEL_IO_HPP
#define TSFUSE_MODEL_IO_HPP

#include <Eigen/Core>
#include <filesystem>
#include <set>
#include <string>
#include <variant>

#include "tsfuse/gp.hpp"
#include "tsfuse/keyvalue.hpp"
#include "tsfuse/mogp.hpp"

namespace tsfuse {

/// Trained model persistence. Versioned, line-oriented `key = value` text
/// with bracketed vectors: diffable and trivially parsed from any language.
/// Doubles are written in shortest round-trip form, so save -> load -> save
/// is byte-identical and a loaded model predicts bit-equal to the one in
/// memory.
using AnyModel = std::variant<GpModel, SlfmModel>;

inline constexpr long long model_format_version = 1;

namespace detail {

inline void add_fit_info(KeyValueDocument &doc, const FitInfo &fit) {
  doc.add("jitter", format_double(fit.jitter));
  doc.add("optimizer_iterations", std::to_string(fit.iterations));
  doc.add("optimizer_restart", std::to_string(fit.restart_index));
  doc.add("optimizer_log_likelihood", format_double(fit.log_likelihood));
  doc.add("optimizer_converged", fit.converged ? "1" : "0");
}

inline FitInfo read_fit_info(const KeyValueDocument &doc) {
  FitInfo fit;
  fit.jitter = doc.get_double("jitter");
  fit.iterations = static_cast<int>(doc.get_int("optimizer_iterations"));
  fit.restart_index = static_cast<int>(doc.get_int("optimizer_restart"));
  fit.log_likelihood = doc.get_double("optimizer_log_likelihood");
  fit.converged = doc.get_int("optimizer_converged") != 0;
  return fit;
}

inline void check_known_keys(const KeyValueDocument &doc,
                             const std::set<std::string> &known) {
  for (const auto &[key, value] : doc.entries()) {
    if (!known.contains(key)) {
      throw FormatError("model file has unknown key '" + key + "'");
    }
  }
}

} // namespace detail

inline std::string serialize_model(const AnyModel &model) {
  KeyValueDocument doc;
  doc.add("tsfuse_model_version", std::to_string(model_format_version));
  if (std::holds_alternative<GpModel>(model)) {
    const GpModel &gp = std::get<GpModel>(model);
    doc.add("kind", "gp");
    doc.add("kernel", to_string(gp.parameters().kernel.kind));
    doc.add("lengthscale", format_double(gp.parameters().kernel.lengthscale));
    doc.add("noise_variance", format_double(gp.parameters().noise_variance));
    doc.add("norm_mean", format_double(gp.normalization().mean));
    doc.add("norm_std", format_double(gp.normalization().std));
    detail::add_fit_info(doc, gp.fit_info());
    doc.add("label", gp.label());
    doc.add("train_times", format_vector(gp.train_times()));
    doc.add("train_values", format_vector(gp.train_values()));
  } else {
    const SlfmModel &slfm = std::get<SlfmModel>(model);
    const SlfmParameters &p = slfm.parameters();
    doc.add("kind", "slfm");
    doc.add("kernel", to_string(p.kernels[0].kind));
    Eigen::VectorXd ells(2);
    ells << p.kernels[0].lengthscale, p.kernels[1].lengthscale;
    doc.add("lengthscales", format_vector(ells));
    doc.add("coreg_1", format_vector(p.coregs[0].a));
    doc.add("coreg_2", format_vector(p.coregs[1].a));
    doc.add("noise_variances", format_vector(p.noise.sigma2));
    Eigen::VectorXd means(2), stds(2);
    means << slfm.normalization()[0].mean, slfm.normalization()[1].mean;
    stds << slfm.normalization()[0].std, slfm.normalization()[1].std;
    doc.add("norm_mean", format_vector(means));
    doc.add("norm_std", format_vector(stds));
    detail::add_fit_info(doc, slfm.fit_info());
    doc.add("label_1", slfm.labels()[0]);
    doc.add("label_2", slfm.labels()[1]);
    doc.add("train_times_1", format_vector(slfm.inputs().times[0]));
    doc.add("train_values_1", format_vector(slfm.values()[0]));
    doc.add("train_times_2", format_vector(slfm.inputs().times[1]));
    doc.add("train_values_2", format_vector(slfm.values()[1]));
  }
  return doc.serialize();
}

inline AnyModel parse_model(const std::string &text) {
  const KeyValueDocument doc = KeyValueDocument::parse(text);
  if (!doc.has("tsfuse_model_version")) {
    throw FormatError("not a tsfuse model file (missing tsfuse_model_version)");
  }
  if (doc.get_int("tsfuse_model_version") != model_format_version) {
    throw FormatError("unsupported model file version " +
                      doc.get("tsfuse_model_version") + " (expected " +
                      std::to_string(model_format_version) + ")");
  }
  const std::string &kind = doc.get("kind");
  const std::set<std::string> common = {
      "tsfuse_model_version", "kind",     "kernel",
      "jitter",               "optimizer_iterations", "optimizer_restart",
      "optimizer_log_likelihood", "optimizer_converged"};
  if (kind == "gp") {
    std::set<std::string> known = common;
    known.insert({"lengthscale", "noise_variance", "norm_mean", "norm_std",
                  "label", "train_times", "train_values"});
    detail::check_known_keys(doc, known);
    GpParameters params;
    params.kernel.kind = kernel_kind_from_string(doc.get("kernel"));
    params.kernel.lengthscale = doc.get_double("lengthscale");
    params.noise_variance = doc.get_double("noise_variance");
    const Normalization norm{doc.get_double("norm_mean"), doc.get_double("norm_std")};
    return GpModel::from_parameters(params, norm, doc.get_vector("train_times"),
                                    doc.get_vector("train_values"),
                                    doc.get("label"), detail::read_fit_info(doc));
  }
  if (kind == "slfm") {
    std::set<std::string> known = common;
    known.insert({"lengthscales", "coreg_1", "coreg_2", "noise_variances",
                  "norm_mean", "norm_std", "label_1", "label_2", "train_times_1",
                  "train_values_1", "train_times_2", "train_values_2"});
    detail::check_known_keys(doc, known);
    const KernelKind kernel = kernel_kind_from_string(doc.get("kernel"));
    const Eigen::VectorXd ells = doc.get_vector("lengthscales");
    const Eigen::VectorXd a1 = doc.get_vector("coreg_1");
    const Eigen::VectorXd a2 = doc.get_vector("coreg_2");
    const Eigen::VectorXd sigma2 = doc.get_vector("noise_variances");
    const Eigen::VectorXd means = doc.get_vector("norm_mean");
    const Eigen::VectorXd stds = doc.get_vector("norm_std");
    if (ells.size() != 2 || a1.size() != 2 || a2.size() != 2 || sigma2.size() != 2 ||
        means.size() != 2 || stds.size() != 2) {
      throw FormatError("slfm model vectors must all have 2 entries");
    }
    SlfmParameters params;
    params.kernels = {KernelParams{kernel, ells[0]}, KernelParams{kernel, ells[1]}};
    params.coregs[0].a = a1;
    params.coregs[1].a = a2;
    params.noise.sigma2 = sigma2;
    MultiInput inputs{{doc.get_vector("train_times_1"), doc.get_vector("train_times_2")}};
    return SlfmModel::from_parameters(
        params, {Normalization{means[0], stds[0]}, Normalization{means[1], stds[1]}},
        std::move(inputs),
        {doc.get_vector("train_values_1"), doc.get_vector("train_values_2")},
        {doc.get("label_1"), doc.get("label_2")}, detail::read_fit_info(doc));
  }
  throw FormatError("unknown model kind '" + kind + "'");
}

inline void save_model(const std::filesystem::path &path, const AnyModel &model) {
  write_text_file_atomic(path, serialize_model(model));
}

inline AnyModel load_model(const std::filesystem::path &path) {
  return parse_model(read_text_file(path));
}

} // namespace tsfuse

#endif // TSFUSE_MODEL_IO_HPP
