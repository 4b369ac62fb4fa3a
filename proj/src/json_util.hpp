#pragma once

#include <string>

#include "cegbma/error.hpp"
#include "json.hpp"

namespace cegbma::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, what + ": " + e.what());
    }
}

}  // namespace cegbma::detail
