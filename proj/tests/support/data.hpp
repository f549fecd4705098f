#pragma once

#include <contlogic/contlogic.hpp>

#include "printers.hpp"

#include <filesystem>
#include <string>

namespace contlogic::testkit {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CONTLOGIC_DATA_DIR) / name;
}

inline ModelFamily load_data_family(const std::string& name) { return load_family(data_path(name + ".cfam")); }

/// Loads `<stem>.cfam` with `<stem>_{tv,tw,phi,psi}.csnt`.
inline InterpolationProblem load_problem(const std::string& stem) {
  ModelFamily f = load_data_family(stem);
  const Vocabulary& v = f.vocabulary();
  auto optional_theory = [&](const std::string& suffix) {
    auto path = data_path(stem + suffix);
    return std::filesystem::exists(path) ? load_theory(path, &v) : Theory{};
  };
  Theory tv = optional_theory("_tv.csnt");
  Theory tw = optional_theory("_tw.csnt");
  Sentence phi = load_sentence(data_path(stem + "_phi.csnt"), &v);
  Sentence psi = load_sentence(data_path(stem + "_psi.csnt"), &v);
  return InterpolationProblem::infer(std::move(f), std::move(tv), std::move(tw), std::move(phi), std::move(psi));
}

inline Sentence parse_in(const ModelFamily& f, const std::string& text) { return parse_sentence(text, &f.vocabulary()); }

}  // namespace contlogic::testkit
