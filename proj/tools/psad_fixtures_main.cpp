// Writes the problem fixture files: the reference Jacobian pattern at a
// pinned size per problem, plus rho_max and the standard start, in the same
// JSON schema the pattern serializer uses.

#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "psad/problems.hpp"

namespace {

int fixture_size(const std::string& name) {
    if (name == "arrowhead") return 10;
    if (name == "quartic-chain") return 12;
    if (name == "diag") return 8;
    if (name == "channel-like") return 24;
    if (name == "cavity-like") return 24;
    if (name == "swirl-like") return 24;
    if (name == "rod-like") return 24;
    return 16; // grid problems: q = 4
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: psad-fixtures <output directory>\n";
        return 2;
    }
    const std::string dir = argv[1];
    for (const psad::ProblemSpec& spec : psad::catalog()) {
        const int n = fixture_size(spec.name);
        const psad::SparsityPattern pattern = spec.reference_pattern(n);
        const psad::StandardStart start = spec.standard_start(n);

        nlohmann::json doc = nlohmann::json::parse(pattern.to_json());
        doc["rho_max"] = spec.declared_rho_max;
        doc["x0"] = start.x0;

        const std::string path = dir + "/" + spec.name + ".json";
        std::ofstream file(path);
        if (!file) {
            std::cerr << "cannot write " << path << "\n";
            return 3;
        }
        file << doc.dump(2) << "\n";
        std::cout << path << "\n";
    }
    return 0;
}
