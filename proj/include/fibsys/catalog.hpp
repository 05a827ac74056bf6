#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fibsys/perfection.hpp"

namespace fibsys {

class UnknownSystemError : public Error {
public:
    using Error::Error;
};

struct Fixture {
    std::int64_t value = 0;
    std::string rep;  // machine form, "" for the empty string
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::string source;                         // rule definition as text
    std::optional<std::size_t> expected_states;  // published trimmed state count of the rule automaton
    std::optional<bool> expected_complete;  // empty: no published or derived claim
    std::optional<bool> expected_unambiguous;
    std::vector<Fixture> fixtures;
    std::string variant_of;  // empty for the published systems
    std::function<SystemSpec()> build;

    bool expected_perfect() const { return expected_complete.value_or(false) && expected_unambiguous.value_or(false); }
};

/// Stable order: the published systems first, variants after.
const std::vector<CatalogEntry>& list_systems();

const CatalogEntry& catalog_entry(const std::string& name);

/// Built on first use and shared afterwards. Thread-safe.
const SystemSpec& get_system(const std::string& name);

}  // namespace fibsys
