#pragma once

// JSON form of a VerificationReport. Exact quantities are JSON integers
// (strings only when they do not fit in 64 bits).

#include "json.hpp"
#include "ssmod/errors.hpp"
#include "ssmod/watkins.hpp"

namespace ssmod::report {

nlohmann::ordered_json to_json(const watkins::VerificationReport& r);

// {"label": ..., "line": ..., "error": {"code": ..., "message": ...}}
nlohmann::ordered_json error_row(const std::string& label, std::size_t line, const Error& e);

nlohmann::ordered_json integer(const boost::multiprecision::cpp_int& v);

}  // namespace ssmod::report
