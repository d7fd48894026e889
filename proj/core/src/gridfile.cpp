#include "ebglm/gridfile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ebglm/errors.hpp"

namespace ebglm {

namespace {

struct Value {
    enum class Kind { number, string, boolean } kind;
    double num = 0.0;
    std::string str;
    bool b = false;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

Value parse_scalar(std::string_view tok, const std::string& where) {
    tok = trim(tok);
    if (tok.empty()) throw ConfigError(where + ": empty value");
    Value v{};
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError(where + ": unterminated string");
        v.kind = Value::Kind::string;
        v.str = std::string(tok.substr(1, tok.size() - 2));
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::boolean;
        v.b = tok == "true";
        return v;
    }
    double num = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), num);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(num))
        throw ConfigError(where + ": cannot parse value '" + std::string(tok) + "'");
    v.kind = Value::Kind::number;
    v.num = num;
    return v;
}

std::vector<Value> parse_value(std::string_view tok, const std::string& where) {
    tok = trim(tok);
    if (tok.empty()) throw ConfigError(where + ": missing value");
    if (tok.front() != '[') return {parse_scalar(tok, where)};
    if (tok.back() != ']') throw ConfigError(where + ": unterminated array");
    tok = trim(tok.substr(1, tok.size() - 2));
    std::vector<Value> out;
    if (tok.empty()) throw ConfigError(where + ": empty array");
    size_t start = 0;
    bool in_str = false;
    for (size_t i = 0; i <= tok.size(); ++i) {
        if (i < tok.size() && tok[i] == '"') in_str = !in_str;
        if (i == tok.size() || (tok[i] == ',' && !in_str)) {
            out.push_back(parse_scalar(tok.substr(start, i - start), where));
            start = i + 1;
        }
    }
    return out;
}

int as_int(const Value& v, const std::string& where) {
    if (v.kind != Value::Kind::number || v.num != std::floor(v.num))
        throw ConfigError(where + ": expected an integer");
    return static_cast<int>(v.num);
}

double as_num(const Value& v, const std::string& where) {
    if (v.kind != Value::Kind::number) throw ConfigError(where + ": expected a number");
    return v.num;
}

std::string as_str(const Value& v, const std::string& where) {
    if (v.kind != Value::Kind::string) throw ConfigError(where + ": expected a string");
    return v.str;
}

}  // namespace

GridFile parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    GridFile g;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        std::string_view s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[')
            throw ConfigError(where + ": TOML tables are not used in grid files");
        const size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key{trim(s.substr(0, eq))};
        const auto vals = parse_value(s.substr(eq + 1), where);
        const auto ints = [&] {
            std::vector<int> out;
            for (const auto& v : vals) out.push_back(as_int(v, where));
            return out;
        };
        const auto nums = [&] {
            std::vector<double> out;
            for (const auto& v : vals) out.push_back(as_num(v, where));
            return out;
        };
        const auto strs = [&] {
            std::vector<std::string> out;
            for (const auto& v : vals) out.push_back(as_str(v, where));
            return out;
        };
        const auto single = [&]() -> const Value& {
            if (vals.size() != 1) throw ConfigError(where + ": '" + key + "' takes one value");
            return vals[0];
        };
        if (key == "n") g.n = ints();
        else if (key == "p") g.p = ints();
        else if (key == "s") g.s = ints();
        else if (key == "rho") g.rho = nums();
        else if (key == "beta_dist") g.beta_dist = strs();
        else if (key == "family") g.family = as_str(single(), where);
        else if (key == "prior") g.prior = as_str(single(), where);
        else if (key == "corr_model") g.corr_model = as_str(single(), where);
        else if (key == "dispersion") g.dispersion = as_num(single(), where);
        else if (key == "n_test") g.n_test = as_int(single(), where);
        else if (key == "ash_K") g.ash_K = as_int(single(), where);
        else throw ConfigError(where + ": unknown grid key '" + key + "'");
    }
    if (g.n_cells() == 0) throw ConfigError(path + ": grid has no cells");
    return g;
}

}  // namespace ebglm
