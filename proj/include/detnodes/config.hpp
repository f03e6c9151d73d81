#pragma once

// Flat key=value run configuration: one pair per line, '#' starts a comment,
// lists are comma separated and mode sums are written "amp:j:k, amp:j:k".

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "detnodes/experiments.hpp"

namespace detnodes {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ConfigKey {
    std::string name;
    /// Empty means "no default"; such keys are optional unless a subcommand requires them.
    std::string default_value;
    std::string description;
};

class RunConfig {
public:
    static const std::vector<ConfigKey>& keys();

    bool has(const std::string& name) const;
    std::string get(const std::string& name) const;
    double number(const std::string& name) const;
    int integer(const std::string& name) const;
    bool flag(const std::string& name) const;
    std::vector<double> list(const std::string& name) const;
    std::vector<Mode> modes(const std::string& name) const;

    /// Overrides a value (command-line flags); validated like a config line.
    void set(const std::string& name, const std::string& value);

    /// Throws ConfigError naming the first missing key.
    void require(const std::vector<std::string>& names) const;

    /// Every known key with its effective value, sorted by name.
    std::vector<std::pair<std::string, std::string>> echo() const;

    Grid grid() const;
    SolverConfig solver() const;

private:
    friend RunConfig parse_config(const std::string& text);
    void assign(const std::string& name, const std::string& value, int line);

    struct Value {
        std::string text;
        int line;
    };
    std::map<std::string, Value> values_;
};

RunConfig parse_config(const std::string& text);

}  // namespace detnodes
