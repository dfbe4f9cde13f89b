// Reference implementation of the external-SUT line protocol, used by the
// tests and as a template for wiring real classifiers in other processes.
//
//   request:  "P <case-id> <784 ints 0-255>"
//   response: "R <case-id> <label 0-9> <10 scores>"
//
// Modes: --label N answers a constant; --answers FILE answers the expected
// label recorded in a manifest/cases CSV (columns case_id and expected),
// shifted by --offset.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

std::map<std::string, int> load_answers(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "stub_sut: cannot open " << path << '\n';
        std::exit(1);
    }
    std::string header;
    std::getline(in, header);
    int id_col = -1;
    int expected_col = -1;
    {
        std::istringstream hs(header);
        std::string field;
        int col = 0;
        while (std::getline(hs, field, ',')) {
            if (field == "case_id") id_col = col;
            if (field == "expected") expected_col = col;
            ++col;
        }
    }
    if (id_col < 0 || expected_col < 0) {
        std::cerr << "stub_sut: " << path << " lacks case_id/expected columns\n";
        std::exit(1);
    }
    std::map<std::string, int> answers;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string field, id;
        int col = 0;
        int label = -1;
        while (std::getline(ls, field, ',')) {
            if (col == id_col) id = field;
            if (col == expected_col) label = std::stoi(field);
            ++col;
        }
        if (!id.empty() && label >= 0) answers[id] = label;
    }
    return answers;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"line-protocol stub classifier"};
    int constant_label = 7;
    std::string answers_path;
    int offset = 0;
    bool malformed = false;
    bool out_of_range = false;
    app.add_option("--label", constant_label, "answer this label for every request");
    app.add_option("--answers", answers_path, "CSV with case_id/expected columns to answer from");
    app.add_option("--offset", offset, "added to the answered label, mod 10");
    app.add_flag("--malformed", malformed, "reply with a line that violates the protocol");
    app.add_flag("--out-of-range", out_of_range, "reply with label 12");
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, int> answers;
    if (!answers_path.empty()) answers = load_answers(answers_path);

    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream ls(line);
        std::string tag, id;
        if (!(ls >> tag >> id) || tag != "P") continue;
        if (malformed) {
            std::cout << "banana\n" << std::flush;
            continue;
        }
        if (out_of_range) {
            std::cout << "R " << id << " 12 0 0 0 0 0 0 0 0 0 0\n" << std::flush;
            continue;
        }
        int label = constant_label;
        if (!answers.empty()) {
            const auto it = answers.find(id);
            if (it != answers.end()) label = it->second;
        }
        label = ((label + offset) % 10 + 10) % 10;
        std::cout << "R " << id << ' ' << label;
        for (int i = 0; i < 10; ++i) std::cout << ' ' << (i == label ? 1 : 0);
        std::cout << '\n' << std::flush;
    }
    return 0;
}
