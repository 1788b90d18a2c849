#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ifde::cli {
namespace {

struct Item {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<Item> items;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Splits on sep outside parentheses, so "ml(0.5, t), 2" has two parts.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string current;
    for (char c : s) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        }
        if (c == sep && depth == 0) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

bool mentions_variable(const rhsdsl::Node& n) {
    if (n.kind == rhsdsl::NodeKind::Variable) {
        return true;
    }
    for (const auto& c : n.children) {
        if (mentions_variable(*c)) {
            return true;
        }
    }
    return false;
}

bool mentions_state(const rhsdsl::Node& n) {
    if (n.kind == rhsdsl::NodeKind::Variable && n.symbol != 't') {
        return true;
    }
    for (const auto& c : n.children) {
        if (mentions_state(*c)) {
            return true;
        }
    }
    return false;
}

class Reader {
public:
    Reader(const Section& section, std::string source, std::set<std::string> single,
           std::set<std::string> repeated)
        : section_(section),
          source_(std::move(source)),
          single_(std::move(single)),
          repeated_(std::move(repeated)) {
        std::set<std::string> seen;
        for (const Item& it : section_.items) {
            if (!single_.count(it.key) && !repeated_.count(it.key)) {
                fail(it.line, "unknown key '" + it.key + "' in [" + section_.name + "]");
            }
            if (single_.count(it.key) && !seen.insert(it.key).second) {
                fail(it.line, "duplicate key '" + it.key + "'");
            }
        }
    }

    [[noreturn]] void fail(std::size_t line, const std::string& message) const {
        throw ConfigError(source_, line, message);
    }

    [[nodiscard]] const Item* find(const std::string& key) const {
        for (const Item& it : section_.items) {
            if (it.key == key) {
                return &it;
            }
        }
        return nullptr;
    }

    [[nodiscard]] const Item& require(const std::string& key) const {
        const Item* it = find(key);
        if (!it) {
            fail(section_.line, "missing key '" + key + "' in [" + section_.name + "]");
        }
        return *it;
    }

    [[nodiscard]] std::vector<const Item*> all(const std::string& key) const {
        std::vector<const Item*> out;
        for (const Item& it : section_.items) {
            if (it.key == key) {
                out.push_back(&it);
            }
        }
        return out;
    }

    [[nodiscard]] double constant(const Item& it, const std::string& text) const {
        try {
            const rhsdsl::Expr e = rhsdsl::parse(text);
            if (mentions_variable(e.root())) {
                fail(it.line, "'" + it.key + "' must be a constant, got '" + text + "'");
            }
            return rhsdsl::eval(e, 0.0, 0.0, 0.0);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(it.line, "bad value for '" + it.key + "': " + e.what());
        }
    }

    [[nodiscard]] double number(const Item& it) const { return constant(it, it.value); }

    [[nodiscard]] Vector vector(const Item& it, const std::string& text) const {
        Vector out;
        for (const std::string& part : split_top_level(text, ',')) {
            if (part.empty()) {
                fail(it.line, "empty entry in '" + it.key + "'");
            }
            out.push_back(constant(it, part));
        }
        return out;
    }

    [[nodiscard]] std::size_t count(const Item& it) const {
        std::size_t v = 0;
        const char* end = it.value.data() + it.value.size();
        const auto [ptr, ec] = std::from_chars(it.value.data(), end, v);
        if (ec != std::errc() || ptr != end) {
            fail(it.line, "'" + it.key + "' must be a non-negative integer, got '" + it.value + "'");
        }
        return v;
    }

    [[nodiscard]] bool flag(const Item& it) const {
        if (it.value == "true" || it.value == "yes" || it.value == "1") {
            return true;
        }
        if (it.value == "false" || it.value == "no" || it.value == "0") {
            return false;
        }
        fail(it.line, "'" + it.key + "' must be true or false, got '" + it.value + "'");
    }

    [[nodiscard]] rhsdsl::Expr formula(const Item& it) const {
        try {
            return rhsdsl::parse(it.value);
        } catch (const rhsdsl::ParseError& e) {
            fail(it.line, it.key + ": " + e.what());
        }
    }

    void check(bool ok, const Item& it, const std::string& message) const {
        if (!ok) {
            fail(it.line, message);
        }
    }

    [[nodiscard]] const Section& section() const noexcept { return section_; }

private:
    const Section& section_;
    std::string source_;
    std::set<std::string> single_;
    std::set<std::string> repeated_;
};

std::vector<Section> split_sections(std::string_view text, const std::string& source) {
    static const std::set<std::string> known{"problem", "solver", "compare", "family"};
    std::vector<Section> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(source, line_no, "unterminated section header");
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!known.count(name)) {
                throw ConfigError(source, line_no, "unknown section [" + name + "]");
            }
            for (const Section& s : sections) {
                if (s.name == name) {
                    throw ConfigError(source, line_no, "duplicate section [" + name + "]");
                }
            }
            sections.push_back(Section{name, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "expected 'key = value'");
        }
        if (sections.empty()) {
            throw ConfigError(source, line_no, "key outside of any section");
        }
        Item item{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (item.key.empty()) {
            throw ConfigError(source, line_no, "missing key before '='");
        }
        if (item.value.empty()) {
            throw ConfigError(source, line_no, "missing value for '" + item.key + "'");
        }
        sections.back().items.push_back(std::move(item));
    }
    return sections;
}

const Section* find_section(const std::vector<Section>& sections, const std::string& name) {
    for (const Section& s : sections) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

// Reads rhs / exact / x0 / M1..M3; alpha and T come from `base` when given.
ProblemSection read_problem(const Reader& r, const ProblemSection* base) {
    ProblemSection p;
    ProblemSpec& spec = p.spec;
    if (base) {
        spec.alpha = base->spec.alpha;
        spec.T = base->spec.T;
    } else {
        const Item& alpha = r.require("alpha");
        spec.alpha = r.number(alpha);
        r.check(spec.alpha > 0.0 && spec.alpha < 1.0, alpha, "alpha must lie in (0,1)");
        const Item& T = r.require("T");
        spec.T = r.number(T);
        r.check(spec.T > 0.0 && std::isfinite(spec.T), T, "T must be positive");
    }

    const Item& x0 = r.require("x0");
    spec.x0 = r.vector(x0, x0.value);

    const auto rhs_items = r.all("rhs");
    if (rhs_items.empty()) {
        r.fail(r.section().line, "missing key 'rhs' in [" + r.section().name + "]");
    }
    if (rhs_items.size() != spec.x0.size()) {
        r.fail(rhs_items.back()->line, "expected one rhs line per x0 component (" +
                                           std::to_string(spec.x0.size()) + "), got " +
                                           std::to_string(rhs_items.size()));
    }
    for (const Item* it : rhs_items) {
        p.rhs.push_back(r.formula(*it));
    }
    const auto exact_items = r.all("exact");
    if (!exact_items.empty() && exact_items.size() != spec.x0.size()) {
        r.fail(exact_items.back()->line, "expected one exact line per x0 component");
    }
    for (const Item* it : exact_items) {
        p.exact.push_back(r.formula(*it));
        r.check(!mentions_state(p.exact.back().root()), *it, "exact may only depend on t");
    }

    auto constant = [&](const std::string& key, double fallback_value, bool has_fallback) {
        if (const Item* it = r.find(key)) {
            return std::pair{r.number(*it), it};
        }
        if (!has_fallback) {
            (void)r.require(key);
        }
        return std::pair<double, const Item*>{fallback_value, nullptr};
    };
    const auto [m1, m1_item] = constant("M1", base ? base->spec.M1 : 0.0, base != nullptr);
    const auto [m2, m2_item] = constant("M2", base ? base->spec.M2 : 0.0, base != nullptr);
    const auto [m3, m3_item] = constant("M3", base ? base->spec.M3 : 0.0, base != nullptr);
    spec.M1 = m1;
    spec.M2 = m2;
    spec.M3 = m3;
    if (m1_item) {
        r.check(spec.M1 >= 0.0, *m1_item, "M1 must be non-negative");
    }
    if (m2_item) {
        r.check(spec.M2 > 0.0, *m2_item, "M2 must be positive");
    }
    if (m3_item) {
        r.check(spec.M3 > 0.0 && spec.M3 < 1.0, *m3_item, "M3 must lie in (0,1)");
    }
    spec.rhs = rhsdsl::make_rhs(p.rhs);
    spec.validate();
    return p;
}

SolverConfig read_solver(const Reader& r) {
    SolverConfig c;
    if (const Item* it = r.find("n")) {
        c.n = r.count(*it);
        r.check(c.n >= 2, *it, "n must be at least 2");
    }
    if (const Item* it = r.find("tol")) {
        c.tol = r.number(*it);
        r.check(c.tol > 0.0, *it, "tol must be positive");
    }
    if (const Item* it = r.find("max_iter")) {
        const std::size_t m = r.count(*it);
        r.check(m >= 1 && m <= 1000000, *it, "max_iter must lie in [1, 1000000]");
        c.max_iter = static_cast<int>(m);
    }
    if (const Item* it = r.find("theta")) {
        c.theta_override = r.number(*it);
        r.check(*c.theta_override > 0.0, *it, "theta must be positive");
    }
    if (const Item* it = r.find("force")) {
        c.force = r.flag(*it);
    }
    return c;
}

std::vector<Vector> read_anchors(const Reader& r, std::size_t dim) {
    const Item& it = r.require("anchors");
    std::vector<Vector> anchors;
    const bool semicolons = it.value.find(';') != std::string::npos;
    if (dim == 1 && !semicolons) {
        for (double a : r.vector(it, it.value)) {
            anchors.push_back({a});
        }
        return anchors;
    }
    for (const std::string& part : split_top_level(it.value, ';')) {
        Vector a = r.vector(it, part);
        if (a.size() != dim) {
            r.fail(it.line, "anchor '" + part + "' has " + std::to_string(a.size()) +
                                " components, expected " + std::to_string(dim));
        }
        anchors.push_back(std::move(a));
    }
    return anchors;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

RunConfig parse_run_config(std::string_view text, const std::string& source) {
    const std::vector<Section> sections = split_sections(text, source);
    RunConfig cfg;

    const Section* problem = find_section(sections, "problem");
    if (!problem) {
        throw ConfigError(source, 0, "missing [problem] section");
    }
    cfg.problem = read_problem(
        Reader(*problem, source, {"alpha", "T", "x0", "M1", "M2", "M3"}, {"rhs", "exact"}),
        nullptr);

    if (const Section* s = find_section(sections, "solver")) {
        cfg.solver = read_solver(Reader(*s, source, {"n", "tol", "max_iter", "theta", "force"}, {}));
    }
    if (const Section* s = find_section(sections, "compare")) {
        const Reader r(*s, source, {"x0", "M1", "M2", "M3", "K_eta", "K_ml"}, {"rhs", "exact"});
        CompareSection c;
        c.problem = read_problem(r, &cfg.problem);
        if (c.problem.spec.dim() != cfg.problem.spec.dim()) {
            r.fail(r.require("x0").line, "[compare] must have the same dimension as [problem]");
        }
        for (const char* key : {"K_eta", "K_ml"}) {
            if (const Item* it = r.find(key)) {
                const double v = r.number(*it);
                r.check(v >= 0.0, *it, std::string(key) + " must be non-negative");
                (std::string(key) == "K_eta" ? c.K_eta : c.K_ml) = v;
            }
        }
        cfg.compare = std::move(c);
    }
    if (const Section* s = find_section(sections, "family")) {
        cfg.anchors = read_anchors(Reader(*s, source, {"anchors"}, {}), cfg.problem.spec.dim());
        cfg.has_family = true;
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path, 0, "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path);
}

Vector eval_exact(const ProblemSection& p, double t) {
    Vector out;
    out.reserve(p.exact.size());
    for (const auto& e : p.exact) {
        out.push_back(rhsdsl::eval(e, t, 0.0, 0.0));
    }
    return out;
}

}  // namespace ifde::cli
