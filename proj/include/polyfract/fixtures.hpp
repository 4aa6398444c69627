#pragma once

#include <string>
#include <vector>

namespace polyfract {

/// Names of the builtin example systems, in stable listing order. The first
/// four validate; the last two are deliberately broken diagnostics fixtures.
const std::vector<std::string>& fixture_names();

/// The system description text of a builtin fixture. Throws NoneFound for an
/// unknown name.
const std::string& fixture_text(const std::string& name);

}  // namespace polyfract
