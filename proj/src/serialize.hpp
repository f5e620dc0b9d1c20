#pragma once

#include <string>
#include <vector>

#include "basesize.hpp"
#include "json.hpp"

namespace hallbase {

using ordered_json = nlohmann::ordered_json;

// Canonical text form for stored documents: two-space indent, insertion key
// order, trailing newline. Replay compares these byte for byte.
std::string canonical_dump(const ordered_json& doc);

// Reads a nonnegative integer whether the value was parsed (unsigned) or
// constructed from a signed literal.
uint64_t json_u64(const ordered_json& v, const char* what);

// Field elements are written as coefficient lists over the prime field,
// constant term first, so documents never depend on the internal code order.
ordered_json field_to_json(const FieldPtr& k);
ordered_json element_to_json(const FieldPtr& k, uint32_t code);
uint32_t element_from_json(const FieldPtr& k, const ordered_json& j);
ordered_json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const FieldPtr& k, const ordered_json& j);

// Compact family code: GL, SL, GU, SU, GSp, Sp, and GO+/GO-/GOo (resp. SO)
// with the orthogonal type folded into the suffix.
std::string spec_code(const GroupSpec& spec);
GroupSpec spec_from_code(const std::string& code, uint32_t n, uint64_t q);
ordered_json spec_to_json(const GroupSpec& spec);
GroupSpec spec_from_json(const ordered_json& j);

const char* hall_existence_name(HallExistence e);

ordered_json verdict_to_json(const EpiVerdict& v);
ordered_json base_to_json(const BaseResult& b);
ordered_json reg_to_json(const RegResult& r);
ordered_json certificate_to_json(const WitnessCertificate& cert,
                                 const std::vector<Matrix>& hall_generators);
ordered_json report_to_json(const TheoremReport& rep);

}  // namespace hallbase
