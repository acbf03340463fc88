#include "resinv/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace resinv {

namespace {

using nlohmann::json;

// JSON has no literal for non-finite doubles; ours travel as quoted strings.
void append_double(std::string& out, double x) {
    if (std::isnan(x)) {
        out += "\"nan\"";
        return;
    }
    if (std::isinf(x)) {
        out += x > 0 ? "\"inf\"" : "\"-inf\"";
        return;
    }
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void append_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        append_double(out, v[i]);
    }
    out += ']';
}

double get_double(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw std::invalid_argument("json: bad numeric string for " + std::string(key));
    }
    return v.get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
    std::vector<double> out;
    for (const json& v : j.at(key)) out.push_back(v.get<double>());
    return out;
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_json(const Potential& q) {
    std::string out = "{\"a\":";
    append_double(out, q.a);
    out += ",\"n_grid\":" + std::to_string(q.n_grid) + ",\"values\":";
    append_array(out, q.values);
    out += '}';
    return out;
}

std::string to_json(const KernelGrid& k) {
    std::string out = "{\"a\":";
    append_double(out, k.a);
    out += ",\"n_grid\":" + std::to_string(k.n_grid) + ",\"triangle_values\":";
    append_array(out, k.values);
    out += '}';
    return out;
}

std::string to_json(const ResonanceSet& s) {
    std::string out = "{\"R\":";
    append_double(out, s.R);
    out += ",\"n_origin\":" + std::to_string(s.n_origin) + ",\"zeros\":[";
    for (std::size_t i = 0; i < s.zeros.size(); ++i) {
        if (i) out += ',';
        out += "{\"re\":";
        append_double(out, s.zeros[i].z.real());
        out += ",\"im\":";
        append_double(out, s.zeros[i].z.imag());
        out += ",\"mult\":" + std::to_string(s.zeros[i].multiplicity) + '}';
    }
    out += "]}";
    return out;
}

std::string to_json(const BoundBreakdown& b) {
    std::string out = "{\"in_force\":";
    out += b.in_force ? "true" : "false";
    out += ",\"note\":" + json(b.note).dump() + ",\"entries\":[";
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
        if (i) out += ',';
        out += "{\"name\":" + json(b.entries[i].first).dump() + ",\"value\":";
        append_double(out, b.entries[i].second);
        out += '}';
    }
    out += "]}";
    return out;
}

std::string to_json(const GridFunction& f) {
    std::string out = "{\"a\":";
    append_double(out, f.a);
    out += ",\"n_grid\":" + std::to_string(f.n_grid) + ",\"values\":";
    append_array(out, f.values);
    out += '}';
    return out;
}

std::string to_json(const ReconstructionResult& r) {
    const StageResiduals& d = r.diagnostics;
    std::string out = "{\"primitive_estimate\":" + to_json(r.primitive_estimate);
    out += ",\"pointwise_estimate\":";
    out += r.pointwise_estimate ? to_json(*r.pointwise_estimate) : std::string("null");
    out += ",\"diagnostics\":{\"pairing_epsilon\":";
    append_double(out, d.pairing_epsilon);
    out += ",\"unpaired_1\":" + std::to_string(d.unpaired_1);
    out += ",\"unpaired_2\":" + std::to_string(d.unpaired_2);
    out += ",\"model_drift\":";
    append_double(out, d.model_drift);
    out += ",\"fourier_imag_max\":";
    append_double(out, d.fourier_imag_max);
    out += ",\"primitive_raw_at_a\":";
    append_double(out, d.primitive_raw_at_a);
    out += ",\"primitive_at_zero\":";
    append_double(out, d.primitive_at_zero);
    out += ",\"outer_residuals\":";
    append_array(out, d.outer_residuals);
    out += ",\"outer_iterations\":" + std::to_string(d.outer_iterations);
    out += ",\"outer_converged\":";
    out += d.outer_converged ? "true" : "false";
    out += ",\"goursat\":{\"iterations\":" + std::to_string(d.goursat.iterations);
    out += ",\"last_increment\":";
    append_double(out, d.goursat.last_increment);
    out += ",\"tol_used\":";
    append_double(out, d.goursat.tol_used);
    out += ",\"converged\":";
    out += d.goursat.converged ? "true" : "false";
    out += "}},\"bound\":" + to_json(r.bound) + '}';
    return out;
}

Potential potential_from_json(const std::string& text) {
    const json j = json::parse(text);
    Potential q;
    q.a = get_double(j, "a");
    q.n_grid = j.at("n_grid").get<int>();
    q.values = get_array(j, "values");
    q.validate();
    return q;
}

KernelGrid kernel_from_json(const std::string& text) {
    const json j = json::parse(text);
    KernelGrid k;
    k.a = get_double(j, "a");
    k.n_grid = j.at("n_grid").get<int>();
    k.values = get_array(j, "triangle_values");
    k.validate();
    return k;
}

ResonanceSet resonances_from_json(const std::string& text) {
    const json j = json::parse(text);
    ResonanceSet s;
    s.R = get_double(j, "R");
    s.n_origin = j.at("n_origin").get<int>();
    for (const json& z : j.at("zeros")) {
        ResonanceZero r;
        r.z = {get_double(z, "re"), get_double(z, "im")};
        r.multiplicity = z.at("mult").get<int>();
        s.zeros.push_back(r);
    }
    s.validate();
    return s;
}

GridFunction grid_function_from_json(const std::string& text) {
    const json j = json::parse(text);
    GridFunction f;
    f.a = get_double(j, "a");
    f.n_grid = j.at("n_grid").get<int>();
    f.values = get_array(j, "values");
    f.validate();
    return f;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace resinv
