// Copyright 2026 The cvxfit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvxfit/config.h"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

std::string Trim(const std::string& s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(const std::string& text, int line) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "bad number '" + text + "'");
  }
  return value;
}

bool ParseBool(const std::string& text, int line) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError(line, "bad boolean '" + text + "'");
}

}  // namespace

FitOptions FitConfig::Resolved() const {
  FitOptions out = options;
  const Schedule base = options.schedule;
  out.schedule = Schedule::Make(total_steps, num_events, event_span);
  out.schedule.purge_every = base.purge_every;
  out.schedule.volume_threshold = base.volume_threshold;
  out.schedule.sigma_start = base.sigma_start;
  out.schedule.sigma_end = base.sigma_end;
  return out;
}

void ApplyConfig(const std::string& text, FitConfig& config) {
  using Setter = std::function<void(const std::string&, int)>;
  FitOptions& o = config.options;
  auto real = [](double& field) -> Setter {
    return [&field](const std::string& v, int line) {
      field = ParseNumber<double>(v, line);
    };
  };
  auto integer = [](int& field) -> Setter {
    return [&field](const std::string& v, int line) {
      field = ParseNumber<int>(v, line);
    };
  };
  const std::map<std::string, Setter> setters = {
      {"total_steps", integer(config.total_steps)},
      {"num_events", integer(config.num_events)},
      {"event_span", real(config.event_span)},
      {"purge_every", integer(o.schedule.purge_every)},
      {"volume_threshold", real(o.schedule.volume_threshold)},
      {"sigma_start", real(o.schedule.sigma_start)},
      {"sigma_end", real(o.schedule.sigma_end)},
      {"lr_translation", real(o.adam.lr_translation)},
      {"lr_plane", real(o.adam.lr_plane)},
      {"beta1", real(o.adam.beta1)},
      {"beta2", real(o.adam.beta2)},
      {"adam_epsilon", real(o.adam.epsilon)},
      {"min_offset", real(o.adam.min_offset)},
      {"densify",
       [&o](const std::string& v, int line) { o.densify = ParseBool(v, line); }},
      {"convexes", integer(config.convexes)},
      {"planes", integer(config.planes)},
      {"initial_size", real(config.initial_size)},
      {"seed",
       [&config](const std::string& v, int line) {
         config.seed = ParseNumber<uint64_t>(v, line);
       }},
      {"views_per_step", integer(o.views_per_step)},
      {"max_planes", integer(o.max_planes)},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = Trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line, "expected key = value");
    }
    const std::string key = Trim(body.substr(0, eq));
    const std::string value = Trim(body.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorCode::kInvalidConfig, "unknown key '" + key + "'");
    }
    it->second(value, line);
  }

  if (config.total_steps < 0 || config.num_events < 0 ||
      !(config.event_span > 0 && config.event_span <= 1) ||
      config.convexes < 1 || config.planes < 4 ||
      !(config.initial_size > 0) || o.views_per_step < 0 ||
      o.max_planes < 0) {
    throw Error(ErrorCode::kInvalidConfig, "config value out of range");
  }
  if (!(o.adam.beta1 >= 0 && o.adam.beta1 < 1 && o.adam.beta2 >= 0 &&
        o.adam.beta2 < 1 && o.adam.epsilon > 0 && o.adam.min_offset > 0 &&
        o.adam.lr_plane >= 0 && o.adam.lr_translation >= 0)) {
    throw Error(ErrorCode::kInvalidConfig, "optimizer value out of range");
  }
  config.Resolved().schedule.Validate();
}

FitConfig ParseConfig(const std::string& text) {
  FitConfig config;
  ApplyConfig(text, config);
  return config;
}

}  // namespace cvxfit
