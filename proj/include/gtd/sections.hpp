#pragma once
// Sectioned key-value text: "[section]" headers, "key = value" lines, '#' comments.

#include <gtd/errors.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gtd {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class SectionedText {
public:
    using Entries = std::vector<std::pair<std::string, std::string>>;

    static SectionedText parse(std::string_view text) {
        SectionedText doc;
        std::string current;
        std::size_t line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']' || t.size() < 3)
                    throw InvalidArgument("line " + std::to_string(line_no) + ": malformed section header");
                current = trim(std::string_view(t).substr(1, t.size() - 2));
                if (doc.sections_.count(current))
                    throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate section [" + current + "]");
                doc.sections_[current];
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key = value'");
            if (current.empty())
                throw InvalidArgument("line " + std::to_string(line_no) + ": entry outside of a section");
            std::string key = trim(std::string_view(t).substr(0, eq));
            if (key.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": empty key");
            auto& entries = doc.sections_[current];
            for (const auto& [k, v] : entries)
                if (k == key)
                    throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            entries.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
        }
        return doc;
    }

    static SectionedText load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw InvalidArgument("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& section) const { return sections_.count(section) != 0; }

    const Entries& entries(const std::string& section) const {
        static const Entries empty;
        auto it = sections_.find(section);
        return it == sections_.end() ? empty : it->second;
    }

    const std::string* find(const std::string& section, const std::string& key) const {
        for (const auto& [k, v] : entries(section))
            if (k == key) return &v;
        return nullptr;
    }

    const std::string& require(const std::string& section, const std::string& key) const {
        if (const auto* v = find(section, key)) return *v;
        throw InvalidArgument("missing '" + key + "' in [" + section + "]");
    }

private:
    std::map<std::string, Entries> sections_;
};

}  // namespace gtd
