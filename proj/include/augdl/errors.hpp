#pragma once

#include <stdexcept>
#include <string>

namespace augdl {

/// Problems with input data: missing files, absent target column,
/// unparseable cells, empty datasets.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problems with an experiment plan file: malformed JSON, unknown keys,
/// invalid parameter values.
class plan_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace augdl
