// Copyright 2026 The kbio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KBIO_CORE_EVAL_REPORT_IO_HPP_
#define KBIO_CORE_EVAL_REPORT_IO_HPP_

#include <string>

#include "core/analysis/text_dependency.hpp"
#include "core/eval/auth.hpp"
#include "core/eval/ident.hpp"
#include "core/learn/trainer.hpp"

namespace kbio {

// Comma-separated tables and key=value summaries. Output is byte-stable:
// fixed column order, "%.12g" floats, no timestamps.

void write_auth_eer_csv(const AuthReport& report, const std::string& path);
void write_auth_roc_csv(const AuthReport& report, const std::string& path);
void write_auth_roc_svg(const AuthReport& report, const std::string& path);
void write_auth_summary(const AuthReport& report, const std::string& path);

void write_ident_csv(const IdentReport& report, const std::string& path);
void write_ident_summary(const IdentReport& report, const std::string& path);

void write_text_csv(const CorrelationReport& report, const std::string& path);
void write_text_scatter_svg(const CorrelationReport& report, const std::string& path);
void write_text_summary(const CorrelationReport& report, const std::string& path);

void write_history_csv(const TrainHistory& history, const std::string& path);

std::string format_double(double value);

}  // namespace kbio

#endif  // KBIO_CORE_EVAL_REPORT_IO_HPP_
