/**
 * Copyright 2026 The Matte Forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class Errc {
  dimension_mismatch,
  empty_entity,
  unknown_category,
  invalid_metadata,
  table_conflict,
  placement_infeasible,
  size_mismatch,
  index_out_of_range,
  no_true_relation,
  ungroundable_expression,
  unparsable_expression,
  ambiguous_parse,
  unit_too_small,
  imbalanced_pool,
  range_violation,
  empty_input,
  manifest_mismatch,
  io_error,
  usage_error,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_entity: return "EmptyEntity";
    case Errc::unknown_category: return "UnknownCategory";
    case Errc::invalid_metadata: return "InvalidMetadata";
    case Errc::table_conflict: return "TableConflict";
    case Errc::placement_infeasible: return "PlacementInfeasible";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::no_true_relation: return "NoTrueRelation";
    case Errc::ungroundable_expression: return "UngroundableExpression";
    case Errc::unparsable_expression: return "UnparsableExpression";
    case Errc::ambiguous_parse: return "AmbiguousParse";
    case Errc::unit_too_small: return "UnitTooSmall";
    case Errc::imbalanced_pool: return "ImbalancedPool";
    case Errc::range_violation: return "RangeViolation";
    case Errc::empty_input: return "EmptyInput";
    case Errc::manifest_mismatch: return "ManifestMismatch";
    case Errc::io_error: return "IoError";
    case Errc::usage_error: return "UsageError";
  }
  return "Unknown";
}

/// Errors that stem from bad arguments or configuration rather than from the
/// content of data files. The CLI maps these to exit code 1, the rest to 2.
constexpr bool is_validation_error(Errc code) {
  switch (code) {
    case Errc::usage_error:
    case Errc::unknown_category:
    case Errc::invalid_metadata:
    case Errc::table_conflict:
    case Errc::unparsable_expression:
    case Errc::ambiguous_parse:
    case Errc::unit_too_small:
    case Errc::imbalanced_pool:
    case Errc::index_out_of_range:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace forge
