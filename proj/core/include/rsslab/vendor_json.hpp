#pragma once

// Single include point for the vendored nlohmann/json header so installed
// consumers resolve it the same way the build tree does.
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#elif __has_include("json.hpp")
#include "json.hpp"
#else
#error "nlohmann/json header not found"
#endif
