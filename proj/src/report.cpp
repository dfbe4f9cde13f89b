#include "morphtest/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "morphtest/pgm.hpp"

namespace morphtest {

namespace {

std::string render_scaled(double value, int decimals) {
    double scale = 1.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    const long long n = std::llround(value * scale);  // llround = half away from zero
    const long long whole = std::abs(n) / static_cast<long long>(scale);
    long long frac = std::abs(n) % static_cast<long long>(scale);
    std::string out = n < 0 ? "-" : "";
    out += std::to_string(whole);
    if (decimals > 0) {
        std::string f = std::to_string(frac);
        while (static_cast<int>(f.size()) < decimals) f.insert(f.begin(), '0');
        out += "." + f;
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

SuiteKind parse_suite_kind(const std::string& name) {
    if (name == "image") return SuiteKind::Image;
    if (name == "object") return SuiteKind::Object;
    if (name == "composite") return SuiteKind::Composite;
    fail(Errc::IoFailure, "unknown suite kind '" + name + "'");
}

std::string seconds_cell(double seconds, bool known) { return known ? render_fixed(seconds, 2) : "-"; }

void summary_row(std::ostream& out, const SuiteReport& r, const std::string& increase, bool times_known) {
    out << suite_kind_name(r.kind) << '\t' << r.sut_name << '\t' << r.produced << '\t' << r.misrecognized << '\t'
        << render_percent(r.rate()) << '\t' << increase << '\t' << seconds_cell(r.generation_seconds, times_known)
        << '\t' << seconds_cell(r.evaluation_seconds, times_known) << '\t'
        << (times_known && r.produced > 0 ? render_fixed(r.generation_seconds / r.produced, 4) : "-") << '\t'
        << (times_known && r.misrecognized > 0 ? render_fixed(r.generation_seconds / r.misrecognized, 2) : "-")
        << '\n';
}

}  // namespace

std::string render_percent(double fraction, bool with_sign) {
    const std::string body = render_scaled(fraction * 100.0, 2) + "%";
    if (with_sign && body[0] != '-') return "+" + body;
    return body;
}

std::string render_fixed(double value, int decimals) { return render_scaled(value, decimals); }

void write_suite_manifest(const GeneratedSuite& suite, std::uint64_t suite_seed,
                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "images");

    std::ofstream meta(out_dir / "generation.tsv", std::ios::trunc);
    if (!meta) fail(Errc::IoFailure, "cannot write " + (out_dir / "generation.tsv").string());
    meta << "kind\t" << suite_kind_name(suite.kind) << '\n';
    meta << "cases\t" << suite.cases.size() << '\n';
    meta << "generation_seconds\t" << render_fixed(suite.generation_seconds, 6) << '\n';
    meta << "suite_seed\t" << suite_seed << '\n';

    std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
    if (!manifest) fail(Errc::IoFailure, "cannot write " + (out_dir / "manifest.csv").string());
    manifest << "case_id,seed_id,suite,provenance,identity,expected,image\n";
    for (const TestCase& tc : suite.cases) {
        const std::string rel = "images/" + tc.case_id + ".pgm";
        manifest << tc.case_id << ',' << tc.seed_id << ',' << suite_kind_name(tc.suite) << ',' << tc.provenance
                 << ',' << (tc.identity_plan ? 1 : 0) << ',' << tc.expected_label << ',' << rel << '\n';
        write_pgm(tc.image, out_dir / rel);
    }
}

GeneratedSuite read_suite_manifest(const std::filesystem::path& dir) {
    GeneratedSuite suite;
    {
        std::ifstream meta(dir / "generation.tsv");
        if (!meta) fail(Errc::IoFailure, "no generation.tsv in " + dir.string() + " (not a generated suite?)");
        std::string line;
        while (std::getline(meta, line)) {
            const auto fields = split(line, '\t');
            if (fields.size() != 2) continue;
            if (fields[0] == "kind") suite.kind = parse_suite_kind(fields[1]);
            if (fields[0] == "generation_seconds") suite.generation_seconds = std::stod(fields[1]);
        }
    }
    std::ifstream manifest(dir / "manifest.csv");
    if (!manifest) fail(Errc::IoFailure, "no manifest.csv in " + dir.string());
    std::string line;
    if (!std::getline(manifest, line)) fail(Errc::IoFailure, "empty manifest in " + dir.string());
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7) fail(Errc::IoFailure, "bad manifest row: '" + line + "'");
        TestCase tc;
        tc.case_id = fields[0];
        tc.seed_id = fields[1];
        tc.suite = parse_suite_kind(fields[2]);
        tc.provenance = fields[3];
        tc.identity_plan = fields[4] == "1";
        tc.expected_label = std::stoi(fields[5]);
        tc.image = read_pgm(dir / fields[6]);
        suite.cases.push_back(std::move(tc));
    }
    return suite;
}

std::string render_summary(const RunResult& run) {
    std::ostringstream out;
    out << "suite\tsut\tproduced\tmisrecognized\trate\tincrease_vs_image\tgeneration_seconds\t"
           "evaluation_seconds\tseconds_per_image\tseconds_per_misrecognition\n";
    if (run.image_part && run.object_part) {
        summary_row(out, *run.image_part, "-", false);
        summary_row(out, *run.object_part, "-", false);
        const double increase = run.image_part->misrecognized > 0
                                    ? static_cast<double>(run.object_part->misrecognized) /
                                          static_cast<double>(run.image_part->misrecognized)
                                    : 0.0;
        summary_row(out, run.report, render_percent(increase, true), true);
    } else {
        summary_row(out, run.report, "-", true);
    }
    return out.str();
}

void export_report(const GeneratedSuite& suite, const RunResult& run, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "misrecognized");

    std::ofstream cases(out_dir / "cases.csv", std::ios::trunc);
    if (!cases) fail(Errc::IoFailure, "cannot write " + (out_dir / "cases.csv").string());
    cases << "case_id,seed_id,suite,provenance,expected,predicted,misrecognized\n";
    for (const Verdict& v : run.verdicts) {
        cases << v.case_id << ',' << v.seed_id << ',' << suite_kind_name(v.suite) << ',' << v.provenance << ','
              << v.expected << ',' << v.predicted << ',' << (v.misrecognized ? 1 : 0) << '\n';
    }

    std::ofstream summary(out_dir / "summary.tsv", std::ios::trunc);
    if (!summary) fail(Errc::IoFailure, "cannot write " + (out_dir / "summary.tsv").string());
    summary << render_summary(run);

    for (std::size_t i = 0; i < run.verdicts.size(); ++i) {
        if (!run.verdicts[i].misrecognized) continue;
        write_pgm(suite.cases[i].image, out_dir / "misrecognized" / (run.verdicts[i].case_id + ".pgm"));
    }
}

std::vector<Verdict> read_cases_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
    std::vector<Verdict> out;
    std::string line;
    if (!std::getline(in, line)) fail(Errc::IoFailure, "empty cases file " + path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7) fail(Errc::IoFailure, "bad cases row: '" + line + "'");
        Verdict v;
        v.case_id = fields[0];
        v.seed_id = fields[1];
        v.suite = parse_suite_kind(fields[2]);
        v.provenance = fields[3];
        v.expected = std::stoi(fields[4]);
        v.predicted = std::stoi(fields[5]);
        v.misrecognized = fields[6] == "1";
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SuiteReport> read_summary_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
    std::vector<SuiteReport> out;
    std::string line;
    if (!std::getline(in, line)) fail(Errc::IoFailure, "empty summary " + path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 10) fail(Errc::IoFailure, "bad summary row: '" + line + "'");
        SuiteReport r;
        r.kind = parse_suite_kind(fields[0]);
        r.sut_name = fields[1];
        r.produced = std::stoll(fields[2]);
        r.misrecognized = std::stoll(fields[3]);
        r.generation_seconds = fields[6] == "-" ? 0.0 : std::stod(fields[6]);
        r.evaluation_seconds = fields[7] == "-" ? 0.0 : std::stod(fields[7]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace morphtest
