#include "polyfract/fixtures.hpp"

#include "polyfract/errors.hpp"

namespace polyfract {

namespace {

const char* const k_carpet =
    "format = \"polyfract/v1\"\n"
    "J = 4\n"
    "r = \"1/3\"\n"
    "\n"
    "[group]\n"
    "kind = \"dihedral\"\n"
    "k = 4\n"
    "\n"
    "[[cells]]\n"
    "id = \"sw\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * p3\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"s\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"se\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * p0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"e\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q1\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"ne\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * p1\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"n\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q2\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"nw\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * p2\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"w\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q3\"\n";

const char* const k_folded_square =
    "format = \"polyfract/v1\"\n"
    "J = 4\n"
    "r = \"1/2\"\n"
    "\n"
    "[group]\n"
    "kind = \"trivial\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"sw\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p3\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"se\"\n"
    "phi = { half_turns = 4, conj = true }\n"
    "center = \"r * p0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"nw\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"r * p2\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"ne\"\n"
    "phi = { half_turns = 4, conj = false }\n"
    "center = \"r * p1\"\n";

const char* const k_folded_triangle =
    "format = \"polyfract/v1\"\n"
    "J = 3\n"
    "r = \"1/2\"\n"
    "\n"
    "[group]\n"
    "kind = \"trivial\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"a\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"b\"\n"
    "phi = { half_turns = 4, conj = false }\n"
    "center = \"r * p1\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"c\"\n"
    "phi = { half_turns = 2, conj = false }\n"
    "center = \"r * p2\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"m\"\n"
    "phi = { half_turns = 2, conj = true }\n"
    "center = \"0\"\n";

const char* const k_hexa_d3 =
    "format = \"polyfract/v1\"\n"
    "J = 6\n"
    "r = \"1/7\"\n"
    "\n"
    "[group]\n"
    "kind = \"explicit\"\n"
    "elements = [ { half_turns = 4, conj = false }, { half_turns = 2, conj = true } ]\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm4p2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-4 * q1 + 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm3p0\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-3 * q1 + 0 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm3p2\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (-3 * q1 + 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm3p3\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-3 * q1 + 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm2m2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-2 * q1 - 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm2p0\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (-2 * q1 + 0 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm2p1\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-2 * q1 + 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm2p3\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (-2 * q1 + 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm2p4\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-2 * q1 + 4 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm1m2\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (-1 * q1 - 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm1m1\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-1 * q1 - 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm1p1\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (-1 * q1 + 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hm1p2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (-1 * q1 + 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp0m3\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (0 * q1 - 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp0m1\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (0 * q1 - 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp0p0\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (0 * q1 + 0 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp0p2\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (0 * q1 + 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp0p3\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (0 * q1 + 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp1m3\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (1 * q1 - 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp1m2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (1 * q1 - 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp1p0\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (1 * q1 + 0 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp1p1\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (1 * q1 + 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp2m4\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (2 * q1 - 4 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp2m2\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (2 * q1 - 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp2m1\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (2 * q1 - 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp2p1\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (2 * q1 + 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp2p2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (2 * q1 + 2 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp3m3\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (3 * q1 - 3 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp3m1\"\n"
    "phi = { half_turns = 0, conj = true }\n"
    "center = \"2 * r * (3 * q1 - 1 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp3p0\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (3 * q1 + 0 * q2)\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"hp4m2\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * (4 * q1 - 2 * q2)\"\n";

const char* const k_unfolded_square =
    "format = \"polyfract/v1\"\n"
    "J = 4\n"
    "r = \"1/2\"\n"
    "\n"
    "[group]\n"
    "kind = \"trivial\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"sw\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p3\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"se\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"nw\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p2\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"ne\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"r * p1\"\n";

const char* const k_opposite_pair =
    "format = \"polyfract/v1\"\n"
    "J = 4\n"
    "r = \"1/3\"\n"
    "\n"
    "[group]\n"
    "kind = \"trivial\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"s\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q0\"\n"
    "\n"
    "[[cells]]\n"
    "id = \"n\"\n"
    "phi = { half_turns = 0, conj = false }\n"
    "center = \"2 * r * q2\"\n";

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "carpet", "folded-square", "folded-triangle", "hexa-d3", "unfolded-square", "opposite-pair"};
    return names;
}

const std::string& fixture_text(const std::string& name) {
    static const std::vector<std::pair<std::string, std::string>> texts = {
        {"carpet", k_carpet}, {"folded-square", k_folded_square}, {"folded-triangle", k_folded_triangle}, {"hexa-d3", k_hexa_d3}, {"unfolded-square", k_unfolded_square}, {"opposite-pair", k_opposite_pair}};
    for (const auto& [key, text] : texts) {
        if (key == name) return text;
    }
    throw NoneFound("no builtin example named \"" + name + "\"");
}

}  // namespace polyfract
