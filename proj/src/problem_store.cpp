#include "blockgrader/problem_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "blockgrader/formats.hpp"
#include "blockgrader/parser.hpp"

namespace fs = std::filesystem;

namespace blockgrader {

std::vector<ProblemFile> list_problem_files(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());

    std::vector<fs::path> paths;
    for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (!it->is_regular_file()) continue;
        auto name = it->path().filename().string();
        if (name.empty() || name.front() == '.') continue;
        paths.push_back(it->path());
    }
    if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string() + ": " + ec.message());
    std::sort(paths.begin(), paths.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    std::vector<ProblemFile> out;
    for (auto& p : paths) out.push_back({p.stem().string(), std::move(p)});
    return out;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "error while reading " + path.string());
    return buffer.str();
}

std::string extract_title(std::string_view text, const std::string& fallback) {
    constexpr std::string_view kMarker = "<!--";
    for (std::size_t at = text.find(kMarker); at != std::string_view::npos; at = text.find(kMarker, at + 1)) {
        std::size_t end = text.find("-->", at);
        if (end == std::string_view::npos) break;
        std::string_view body = text.substr(at + kMarker.size(), end - at - kMarker.size());
        auto first = body.find_first_not_of(" \t\r\n");
        if (first == std::string_view::npos) continue;
        body.remove_prefix(first);
        if (body.substr(0, 6) != "title:") continue;
        body.remove_prefix(6);
        auto b = body.find_first_not_of(" \t\r\n");
        auto e = body.find_last_not_of(" \t\r\n");
        if (b == std::string_view::npos) continue;
        return std::string(body.substr(b, e - b + 1));
    }
    return fallback;
}

ProblemCheck check_problem_text(std::string_view text) {
    ProblemCheck check;
    auto record = [&](const Error& e) {
        if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
            check.diagnostics.insert(check.diagnostics.end(), v->diagnostics().begin(), v->diagnostics().end());
        } else {
            check.diagnostics.push_back({Severity::Error, e.code(), e.detail(), e.pos()});
        }
    };

    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            check.graph = from_canonical(text);
        } catch (const Error& e) {
            record(e);
        }
        return check;
    }

    std::vector<BlockSpec> specs;
    try {
        auto doc = parse_problem(text);
        check.diagnostics = doc.warnings;
        specs = to_block_specs(doc.elements);
    } catch (const Error& e) {
        record(e);
        return check;
    }
    auto found = validate(specs);
    check.diagnostics.insert(check.diagnostics.end(), found.begin(), found.end());
    if (check.ok()) check.graph = build_multigraph(specs);
    return check;
}

bool ProblemCheck::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

LoadedProblem load_problem_file(const ProblemFile& file) {
    std::string text = read_text_file(file.path);
    std::string title = extract_title(text, file.id);
    return {file.id, std::move(title), load_problem_text(text)};
}

}  // namespace blockgrader
