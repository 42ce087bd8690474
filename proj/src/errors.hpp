#ifndef DMNKIT_ERRORS_HPP
#define DMNKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dmnkit {

// Unary-test / literal syntax error. `offset` is the byte position of the
// first unrecognized character within the original input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Compact-document schema violation. `path` names the offending field,
// e.g. "nodes[3].table.hit_policy".
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& msg)
        : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// DMN / article XML problem. `element_path` locates the construct.
class XmlError : public std::runtime_error {
public:
    XmlError(std::string element_path, const std::string& msg)
        : std::runtime_error(element_path + ": " + msg),
          element_path_(std::move(element_path)) {}
    const std::string& element_path() const { return element_path_; }

private:
    std::string element_path_;
};

// Strict-mode execution failure: an input id had no assigned value.
class MissingAssignmentError : public std::runtime_error {
public:
    explicit MissingAssignmentError(std::string input_id)
        : std::runtime_error("missing assignment for input '" + input_id + "'"),
          input_id_(std::move(input_id)) {}
    const std::string& input_id() const { return input_id_; }

private:
    std::string input_id_;
};

class GraphCycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TemplateError : public std::runtime_error {
public:
    TemplateError(std::string variable, const std::string& msg)
        : std::runtime_error(msg), variable_(std::move(variable)) {}
    const std::string& variable() const { return variable_; }

private:
    std::string variable_;
};

// Generation request gave up. `status` is the last HTTP status seen;
// 0 means the failure happened below HTTP (DNS, connect, timeout).
class ProviderError : public std::runtime_error {
public:
    ProviderError(int status, const std::string& msg, int attempts = 1)
        : std::runtime_error(msg), status_(status), attempts_(attempts) {}
    int status() const { return status_; }
    int attempts() const { return attempts_; }

private:
    int status_;
    int attempts_;
};

}  // namespace dmnkit

#endif
