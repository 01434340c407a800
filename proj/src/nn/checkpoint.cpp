// Copyright 2026 The swarmhrl Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "swarmhrl/nn/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace swarmhrl::nn {
namespace {

void write_real(std::ostream& os, double v) { os << ' ' << std::hexfloat << v << std::defaultfloat; }

double read_real(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw std::runtime_error("checkpoint: unexpected end of data");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw std::runtime_error("checkpoint: bad real '" + token + "'");
  return v;
}

void expect(std::istream& is, const std::string& word) {
  std::string token;
  if (!(is >> token) || token != word)
    throw std::runtime_error("checkpoint: expected '" + word + "', got '" + token + "'");
}

template <typename T>
T read_int(std::istream& is) {
  T v{};
  if (!(is >> v)) throw std::runtime_error("checkpoint: expected integer");
  return v;
}

void write_layers(std::ostream& os, const std::vector<Layer>& layers) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weight;
    os << "layer " << l << ' ' << w.rows() << ' ' << w.cols();
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) write_real(os, w(r, c));
    for (Eigen::Index r = 0; r < layers[l].bias.size(); ++r) write_real(os, layers[l].bias(r));
    os << '\n';
  }
}

void read_layers(std::istream& is, std::vector<Layer>& layers) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    expect(is, "layer");
    if (read_int<std::size_t>(is) != l) throw std::runtime_error("checkpoint: layer index mismatch");
    const auto rows = read_int<Eigen::Index>(is);
    const auto cols = read_int<Eigen::Index>(is);
    auto& w = layers[l].weight;
    if (rows != w.rows() || cols != w.cols()) throw std::runtime_error("checkpoint: layer shape mismatch");
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = read_real(is);
    for (Eigen::Index r = 0; r < rows; ++r) layers[l].bias(r) = read_real(is);
  }
}

}  // namespace

void save_mlp(std::ostream& os, const Mlp& mlp, const AdamState* adam) {
  os << "swarmhrl-mlp " << kCheckpointVersion << '\n';
  os << "dims " << mlp.dims().size();
  for (int d : mlp.dims()) os << ' ' << d;
  os << '\n';
  if (mlp.head().kind == HeadKind::Linear) {
    os << "head linear\n";
  } else {
    os << "head bounded";
    for (std::size_t k = 0; k < mlp.head().lo.size(); ++k) {
      write_real(os, mlp.head().lo[k]);
      write_real(os, mlp.head().hi[k]);
    }
    os << '\n';
  }
  write_layers(os, mlp.layers());
  if (adam) {
    os << "adam " << adam->step;
    write_real(os, adam->config.lr);
    write_real(os, adam->config.beta1);
    write_real(os, adam->config.beta2);
    write_real(os, adam->config.epsilon);
    os << '\n';
    write_layers(os, adam->m.layers);
    write_layers(os, adam->v.layers);
  } else {
    os << "noadam\n";
  }
}

MlpRecord load_mlp(std::istream& is) {
  expect(is, "swarmhrl-mlp");
  const int version = read_int<int>(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  expect(is, "dims");
  const auto n = read_int<std::size_t>(is);
  if (n < 2 || n > 64) throw std::runtime_error("checkpoint: implausible layer count");
  std::vector<int> dims(n);
  for (auto& d : dims) d = read_int<int>(is);

  expect(is, "head");
  std::string kind;
  is >> kind;
  OutputHead head;
  if (kind == "bounded") {
    std::vector<double> lo, hi;
    for (int k = 0; k < dims.back(); ++k) {
      lo.push_back(read_real(is));
      hi.push_back(read_real(is));
    }
    head = OutputHead::bounded(std::move(lo), std::move(hi));
  } else if (kind != "linear") {
    throw std::runtime_error("checkpoint: unknown head '" + kind + "'");
  }

  MlpRecord rec{Mlp(dims, head), std::nullopt};
  read_layers(is, rec.mlp.layers());

  std::string tag;
  is >> tag;
  if (tag == "adam") {
    AdamState st = AdamState::for_model(rec.mlp);
    st.step = read_int<std::int64_t>(is);
    st.config.lr = read_real(is);
    st.config.beta1 = read_real(is);
    st.config.beta2 = read_real(is);
    st.config.epsilon = read_real(is);
    read_layers(is, st.m.layers);
    read_layers(is, st.v.layers);
    rec.adam = std::move(st);
  } else if (tag != "noadam") {
    throw std::runtime_error("checkpoint: expected optimizer section");
  }
  return rec;
}

void save_mlp_file(const std::filesystem::path& path, const Mlp& mlp, const AdamState* adam) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  save_mlp(os, mlp, adam);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

MlpRecord load_mlp_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return load_mlp(is);
}

}  // namespace swarmhrl::nn
