#include "fusion/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace fusion {

namespace detail {
extern const char* corpus_manifest;
const std::vector<std::pair<std::string, std::string>>& corpus_files();
}  // namespace detail

namespace {

struct Token {
    std::string s;
    int line, col;
};

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    throw Error(Error::Code::Parse, fmt::format("line {}, column {}: {}", line, col, msg));
}

// Splits into per-line token lists, dropping comments and blank lines.
std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::istringstream in(text);
    std::string raw;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::vector<Token> toks;
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i >= raw.size()) break;
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            toks.push_back({raw.substr(i, j - i), ln, static_cast<int>(i) + 1});
            i = j;
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

long parse_int(const Token& t) {
    char* end = nullptr;
    long v = std::strtol(t.s.c_str(), &end, 10);
    if (t.s.empty() || *end) parse_fail(t.line, t.col, "expected integer, got '" + t.s + "'");
    return v;
}

double parse_num(const Token& t, bool& is_float) {
    char* end = nullptr;
    double v = std::strtod(t.s.c_str(), &end);
    if (t.s.empty() || *end) parse_fail(t.line, t.col, "expected number, got '" + t.s + "'");
    if (t.s.find_first_of(".eE") != std::string::npos) is_float = true;
    return v;
}

}  // namespace

FusionData parse_fusion_ring(const std::string& text) {
    auto lines = tokenize(text);
    std::size_t li = 0;
    int last_line = 0;
    auto next = [&](const char* what) -> const std::vector<Token>& {
        if (li >= lines.size()) parse_fail(last_line + 1, 1, fmt::format("unexpected end of input, expected {}", what));
        last_line = lines[li][0].line;
        return lines[li++];
    };
    auto keyword = [&](const std::vector<Token>& l, const char* kw, std::size_t n) {
        if (l[0].s != kw) parse_fail(l[0].line, l[0].col, fmt::format("expected '{}'", kw));
        if (l.size() != n) parse_fail(l[0].line, l[0].col, fmt::format("'{}' line needs {} fields", kw, n));
    };
    auto& h = next("header");
    keyword(h, "frt", 2);
    if (parse_int(h[1]) != 1) parse_fail(h[1].line, h[1].col, "unsupported format version");
    auto& r = next("rank");
    keyword(r, "rank", 2);
    long m = parse_int(r[1]);
    if (m < 1 || m > 64) parse_fail(r[1].line, r[1].col, "rank out of range");
    auto& d = next("dual");
    keyword(d, "dual", static_cast<std::size_t>(m) + 1);
    std::vector<int> dual(m);
    for (long i = 0; i < m; ++i) {
        long v = parse_int(d[i + 1]);
        if (v < 1 || v > m) parse_fail(d[i + 1].line, d[i + 1].col, "dual index out of range");
        dual[i] = static_cast<int>(v - 1);
    }
    bool is_float = false;
    std::vector<Matrix> mats(m, Matrix(m, std::vector<double>(m)));
    for (long i = 0; i < m; ++i) {
        auto& hdr = next("matrix header");
        keyword(hdr, "matrix", 2);
        if (parse_int(hdr[1]) != i + 1) parse_fail(hdr[1].line, hdr[1].col, fmt::format("expected matrix {}", i + 1));
        for (long k = 0; k < m; ++k) {
            auto& row = next("matrix row");
            if (static_cast<long>(row.size()) != m)
                parse_fail(row[0].line, row[0].col, fmt::format("row has {} entries, expected {}", row.size(), m));
            for (long s = 0; s < m; ++s) mats[i][k][s] = parse_num(row[s], is_float);
        }
    }
    if (li != lines.size()) parse_fail(lines[li][0].line, lines[li][0].col, "trailing content");
    FusionData fd;
    try {
        fd = new_fusion_data(mats, is_float ? Mode::Float : Mode::Exact);
    } catch (const Error& e) {
        throw Error(Error::Code::Validation, fmt::format("{}: {}", code_name(e.code), e.what()));
    }
    if (fd.dual() != dual) throw Error(Error::Code::Validation, "declared dual does not match the matrices");
    return fd;
}

std::string serialize_fusion_ring(const FusionData& fd) {
    const int m = fd.rank();
    std::string s = fmt::format("frt 1\nrank {}\ndual", m);
    for (int j = 0; j < m; ++j) s += fmt::format(" {}", fd.dual(j) + 1);
    s += "\n";
    for (int j = 0; j < m; ++j) {
        s += fmt::format("matrix {}\n", j + 1);
        for (int k = 0; k < m; ++k) {
            for (int t = 0; t < m; ++t) {
                if (t) s += ' ';
                if (fd.exact()) {
                    s += fmt::format("{}", fd.NI(j, k, t));
                } else {
                    // shortest round-trip form, kept recognizably decimal
                    std::string v = fmt::format("{}", fd.N(j, k, t));
                    if (v.find_first_of(".e") == std::string::npos) v += ".0";
                    s += v;
                }
            }
            s += '\n';
        }
    }
    return s;
}

nlohmann::json to_json(const FusionData& fd) {
    const int m = fd.rank();
    nlohmann::json j;
    j["rank"] = m;
    std::vector<int> dual;
    for (int i = 0; i < m; ++i) dual.push_back(fd.dual(i) + 1);
    j["dual"] = dual;
    nlohmann::json t = nlohmann::json::array();
    for (int a = 0; a < m; ++a) {
        nlohmann::json mat = nlohmann::json::array();
        for (int b = 0; b < m; ++b) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < m; ++c) {
                if (fd.exact())
                    row.push_back(fd.NI(a, b, c));
                else
                    row.push_back(fd.N(a, b, c));
            }
            mat.push_back(row);
        }
        t.push_back(mat);
    }
    j["tensor"] = t;
    j["label"] = fd.label();
    return j;
}

FusionData from_json(const nlohmann::json& j) {
    try {
        int m = j.at("rank").get<int>();
        const auto& t = j.at("tensor");
        bool is_float = false;
        std::vector<Matrix> mats(m, Matrix(m, std::vector<double>(m)));
        if (static_cast<int>(t.size()) != m) throw Error(Error::Code::Parse, "tensor size does not match rank");
        for (int a = 0; a < m; ++a) {
            if (static_cast<int>(t[a].size()) != m) throw Error(Error::Code::Parse, "tensor size does not match rank");
            for (int b = 0; b < m; ++b) {
                if (static_cast<int>(t[a][b].size()) != m) throw Error(Error::Code::Parse, "tensor size does not match rank");
                for (int c = 0; c < m; ++c) {
                    if (t[a][b][c].is_number_float()) is_float = true;
                    mats[a][b][c] = t[a][b][c].get<double>();
                }
            }
        }
        FusionData fd = new_fusion_data(mats, is_float ? Mode::Float : Mode::Exact);
        if (j.contains("dual")) {
            auto d = j["dual"].get<std::vector<int>>();
            for (int i = 0; i < m; ++i)
                if (static_cast<int>(d.size()) != m || d[i] != fd.dual(i) + 1)
                    throw Error(Error::Code::Validation, "declared dual does not match the tensor");
        }
        if (j.contains("label")) fd.set_label(j["label"].get<std::string>());
        return fd;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Code::Parse, e.what());
    }
}

FusionData cyclic_group_ring(int n) {
    std::vector<double> t(static_cast<std::size_t>(n) * n * n, 0.0);
    std::vector<int> dual(n);
    for (int j = 0; j < n; ++j) {
        dual[j] = (n - j) % n;
        for (int k = 0; k < n; ++k) t[(static_cast<std::size_t>(j) * n + k) * n + (j + k) % n] = 1.0;
    }
    FusionData fd = FusionData::from_tensor(n, std::move(t), std::move(dual), Mode::Exact);
    fd.set_label(fmt::format("z{}", n));
    return fd;
}

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        auto manifest = nlohmann::json::parse(detail::corpus_manifest);
        const auto& files = detail::corpus_files();
        auto opt = [](const nlohmann::json& v) -> std::optional<bool> {
            if (v.is_null()) return std::nullopt;
            return v.get<bool>();
        };
        for (const auto& e : manifest) {
            CorpusEntry c;
            c.id = e.at("id").get<std::string>();
            auto it = std::find_if(files.begin(), files.end(), [&](auto& f) { return f.first == c.id; });
            if (it == files.end()) throw Error(Error::Code::Validation, "corpus file missing for " + c.id);
            c.text = it->second;
            c.fd = parse_fusion_ring(c.text);
            c.fd.set_label(c.id);
            c.note = e.value("note", "");
            if (!e["type"].is_null()) c.type = e["type"].get<std::string>();
            c.simple = opt(e["simple"]);
            c.frobenius_type = opt(e["frobenius_type"]);
            c.schur = opt(e["schur"]);
            if (!e["group"].is_null()) c.group = e["group"].get<std::string>();
            c.simple_frobenius_list = e.value("simple_frobenius_list", false);
            out.push_back(std::move(c));
        }
        for (int n = 1; n <= 12; ++n) {
            CorpusEntry c;
            c.fd = cyclic_group_ring(n);
            c.id = c.fd.label();
            c.note = fmt::format("group ring of Z/{}", n);
            c.type = fmt::format("[[1,{}]]", n);
            c.simple = n > 1 && [n] {
                for (int p = 2; p * p <= n; ++p)
                    if (n % p == 0) return false;
                return true;
            }();
            c.frobenius_type = true;
            c.schur = true;
            c.group = fmt::format("Z/{}", n);
            c.text = serialize_fusion_ring(c.fd);
            out.push_back(std::move(c));
        }
        return out;
    }();
    return entries;
}

const CorpusEntry* find_entry(const std::string& id) {
    for (const auto& e : corpus())
        if (e.id == id) return &e;
    return nullptr;
}

namespace {

FusionData load_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(Error::Code::Usage, "cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    FusionData fd;
    if (p.extension() == ".json") {
        try {
            fd = from_json(nlohmann::json::parse(ss.str()));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Error::Code::Parse, e.what());
        }
    } else {
        fd = parse_fusion_ring(ss.str());
    }
    if (fd.label().empty()) fd.set_label(p.stem().string());
    return fd;
}

}  // namespace

FusionData load_ring(const std::string& spec) {
    namespace fs = std::filesystem;
    if (fs::is_regular_file(spec)) return load_file(spec);
    if (const char* dir = std::getenv("FUSIONFORGE_CORPUS_DIR")) {
        fs::path p = fs::path(dir) / (spec + ".frt");
        if (fs::is_regular_file(p)) return load_file(p);
        p = fs::path(dir) / (spec + ".json");
        if (fs::is_regular_file(p)) return load_file(p);
    }
    if (auto* e = find_entry(spec)) return e->fd;
    throw Error(Error::Code::Usage, "no such file or corpus id: " + spec);
}

}  // namespace fusion
