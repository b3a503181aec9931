#include "tsnoether/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "tsnoether/errors.hpp"

namespace tsn {

namespace {

constexpr const char* kKnownKeys[] = {
    "scale.kind", "scale.a",        "scale.b",        "scale.h",      "scale.points",
    "lagrangian", "dimension",      "group.g0",       "group.g1",     "generator.zeta",
    "generator.xi", "init.x0",      "init.v0",        "solver.variant", "solver.tol",
    "symmetry.s_samples", "output.dir"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct RawValue {
    std::string text;
    std::size_t line = 0;
};

using RawMap = std::map<std::string, RawValue, std::less<>>;

double parse_double(const RawValue& v, const std::string& key) {
    double out = 0.0;
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    auto [p, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || p != last) {
        throw ConfigTypeError(key + " needs a number, got '" + v.text + "'", v.line);
    }
    return out;
}

long parse_int(const RawValue& v, const std::string& key) {
    long out = 0;
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    auto [p, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || p != last) {
        throw ConfigTypeError(key + " needs an integer, got '" + v.text + "'", v.line);
    }
    return out;
}

std::vector<double> parse_list(const RawValue& v, const std::string& key) {
    std::vector<double> out;
    std::size_t start = 0;
    const std::string& s = v.text;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const std::string_view piece = trim(std::string_view(s).substr(start, comma - start));
        if (piece.empty()) {
            throw ConfigTypeError(key + " has an empty list entry", v.line);
        }
        double d = 0.0;
        auto [p, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), d);
        if (ec != std::errc{} || p != piece.data() + piece.size()) {
            throw ConfigTypeError(key + " needs numbers, got '" + std::string(piece) + "'",
                                  v.line);
        }
        out.push_back(d);
        if (comma == s.size()) break;
        start = comma + 1;
    }
    return out;
}

const RawValue& require(const RawMap& raw, const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) {
        throw MissingKey("missing required key '" + key + "'");
    }
    return it->second;
}

void forbid(const RawMap& raw, const std::string& key, const std::string& why) {
    auto it = raw.find(key);
    if (it != raw.end()) {
        throw ConfigTypeError("key '" + key + "' does not apply when " + why, it->second.line);
    }
}

} // namespace

const char* variant_choice_name(VariantChoice v) {
    switch (v) {
    case VariantChoice::NonShifted: return "nonshifted";
    case VariantChoice::Shifted: return "shifted";
    default: return "both";
    }
}

ExperimentSpec parse_config_text(std::string_view text) {
    RawMap raw;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (nl == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigTypeError("expected 'key = value'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                         [&key](const char* k) { return key == k; }) == std::end(kKnownKeys)) {
            throw UnknownKey("unknown key '" + key + "' (line " + std::to_string(line_no) + ")");
        }
        if (value.empty()) {
            throw ConfigTypeError("key '" + key + "' has an empty value", line_no);
        }
        if (!raw.emplace(key, RawValue{value, line_no}).second) {
            throw ConfigTypeError("duplicate key '" + key + "'", line_no);
        }
        if (nl == text.size()) break;
    }

    ExperimentSpec spec;

    const RawValue& kind = require(raw, "scale.kind");
    if (kind.text == "uniform") {
        spec.scale_kind = ScaleKind::Uniform;
        spec.a = parse_double(require(raw, "scale.a"), "scale.a");
        spec.b = parse_double(require(raw, "scale.b"), "scale.b");
        spec.h = parse_double(require(raw, "scale.h"), "scale.h");
        forbid(raw, "scale.points", "scale.kind = uniform");
    } else if (kind.text == "points") {
        spec.scale_kind = ScaleKind::Points;
        spec.points = parse_list(require(raw, "scale.points"), "scale.points");
        forbid(raw, "scale.a", "scale.kind = points");
        forbid(raw, "scale.b", "scale.kind = points");
        forbid(raw, "scale.h", "scale.kind = points");
    } else if (kind.text == "dyadic") {
        spec.scale_kind = ScaleKind::Dyadic;
        spec.n_min = static_cast<int>(parse_int(require(raw, "scale.a"), "scale.a"));
        spec.n_max = static_cast<int>(parse_int(require(raw, "scale.b"), "scale.b"));
        forbid(raw, "scale.h", "scale.kind = dyadic");
        forbid(raw, "scale.points", "scale.kind = dyadic");
    } else {
        throw ConfigTypeError("scale.kind must be uniform, points or dyadic, got '" + kind.text +
                                  "'",
                              kind.line);
    }

    spec.lagrangian = require(raw, "lagrangian").text;

    if (auto it = raw.find("dimension"); it != raw.end()) {
        const long d = parse_int(it->second, "dimension");
        if (d < 1) {
            throw ConfigTypeError("dimension must be at least 1", it->second.line);
        }
        spec.dimension = static_cast<std::size_t>(d);
    }

    if (auto it = raw.find("group.g0"); it != raw.end()) {
        spec.g0 = it->second.text;
        spec.g1 = require(raw, "group.g1").text;
    } else {
        forbid(raw, "group.g1", "group.g0 is absent");
    }
    if (auto it = raw.find("generator.zeta"); it != raw.end()) {
        spec.zeta = it->second.text;
        spec.xi = require(raw, "generator.xi").text;
    } else {
        forbid(raw, "generator.xi", "generator.zeta is absent");
    }
    if (!spec.has_group() && !spec.has_generator()) {
        throw MissingKey("a run needs group.g0/group.g1 or generator.zeta/generator.xi");
    }

    {
        const RawValue& v = require(raw, "init.x0");
        spec.x0 = parse_list(v, "init.x0");
        if (spec.x0.size() != spec.dimension) {
            throw ConfigTypeError("init.x0 needs " + std::to_string(spec.dimension) +
                                      " components",
                                  v.line);
        }
    }
    {
        const RawValue& v = require(raw, "init.v0");
        spec.v0 = parse_list(v, "init.v0");
        if (spec.v0.size() != spec.dimension) {
            throw ConfigTypeError("init.v0 needs " + std::to_string(spec.dimension) +
                                      " components",
                                  v.line);
        }
    }

    if (auto it = raw.find("solver.variant"); it != raw.end()) {
        const std::string& v = it->second.text;
        if (v == "nonshifted") {
            spec.variant = VariantChoice::NonShifted;
        } else if (v == "shifted") {
            spec.variant = VariantChoice::Shifted;
        } else if (v == "both") {
            spec.variant = VariantChoice::Both;
        } else {
            throw ConfigTypeError("solver.variant must be nonshifted, shifted or both", it->second.line);
        }
    }
    if (auto it = raw.find("solver.tol"); it != raw.end()) {
        spec.tol = parse_double(it->second, "solver.tol");
        if (!(spec.tol > 0.0)) {
            throw ConfigTypeError("solver.tol must be positive", it->second.line);
        }
    }
    if (auto it = raw.find("symmetry.s_samples"); it != raw.end()) {
        spec.s_samples = parse_list(it->second, "symmetry.s_samples");
    }
    if (auto it = raw.find("output.dir"); it != raw.end()) {
        spec.output_dir = it->second.text;
    }
    return spec;
}

ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ScalePtr build_scale(const ExperimentSpec& spec) {
    switch (spec.scale_kind) {
    case ScaleKind::Uniform: return uniform_scale(spec.a, spec.b, spec.h);
    case ScaleKind::Points: return make_timescale(spec.points);
    default: return dyadic_scale(spec.n_min, spec.n_max);
    }
}

} // namespace tsn
