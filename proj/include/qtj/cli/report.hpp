#pragma once

// Report envelopes: payload schemas, canonical serialization, CSV projection,
// digests and run manifests.

#include <fstream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "json.hpp"
#include <openssl/evp.h>

#include "qtj/numerics.hpp"

namespace qtj::cli
{

using json = nlohmann::json; // std::map backed, so object keys serialize sorted

inline constexpr int kSchemaVersion = 1;
inline constexpr const char *kToolVersion = "1.0.0";

inline std::string sha256_hex(const std::string &bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::IoFailure, "sha256 failed");
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k)
    {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

/// Decimal text of a float at the decimal width of precision p.
inline std::string num_text(const BigFloat &x, Precision p) { return x.rounded(p).to_string(BigFloat::decimal_digits(p)); }

enum class Kind
{
    Text,    // free string
    Number,  // decimal or exact numeric text
    Integer, // JSON integer
    Bool,
    IntList, // array of JSON integers
    Rows,    // array of objects with a row schema
};

struct FieldSpec
{
    std::string name;
    Kind kind;
    bool required = true;
    std::vector<FieldSpec> row = {}; // for Kind::Rows
};

using Schema = std::vector<FieldSpec>;

inline bool is_number_text(const std::string &s)
{
    static const std::regex sci(R"(-?\d(\.\d+)?e[+-]\d{2,}|-?0|-?inf|nan)");
    static const std::regex rational(R"(-?\d+(/\d+)?)");
    static const std::regex quad(R"(\(-?\d+[+-]\d+\*sqrt\(\d+\)\)(/\d+)?)");
    return std::regex_match(s, sci) || std::regex_match(s, rational) || std::regex_match(s, quad);
}

inline void validate(const json &obj, const Schema &schema, const std::string &where)
{
    auto fail = [&](const std::string &msg) { throw Error(Errc::SchemaViolation, where + ": " + msg); };
    if (!obj.is_object())
        fail("not an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
    {
        bool known = false;
        for (const auto &f : schema)
            known = known || f.name == it.key();
        if (!known)
            fail("unexpected field '" + it.key() + "'");
    }
    for (const auto &f : schema)
    {
        auto it = obj.find(f.name);
        if (it == obj.end())
        {
            if (f.required)
                fail("missing field '" + f.name + "'");
            continue;
        }
        const json &v = *it;
        bool ok = false;
        switch (f.kind)
        {
        case Kind::Text:
            ok = v.is_string();
            break;
        case Kind::Number:
            ok = v.is_string() && is_number_text(v.get<std::string>());
            break;
        case Kind::Integer:
            ok = v.is_number_integer();
            break;
        case Kind::Bool:
            ok = v.is_boolean();
            break;
        case Kind::IntList:
            ok = v.is_array();
            for (const auto &e : v)
                ok = ok && e.is_number_integer();
            break;
        case Kind::Rows:
            ok = v.is_array();
            if (ok)
                for (std::size_t k = 0; k < v.size(); ++k)
                    validate(v[k], f.row, where + "." + f.name + "[" + std::to_string(k) + "]");
            break;
        }
        if (!ok)
            fail("field '" + f.name + "' has the wrong type");
    }
}

/// Published payload schemas, one per subcommand.
inline const std::map<std::string, Schema> &payload_schemas()
{
    static const std::map<std::string, Schema> schemas = [] {
        std::map<std::string, Schema> m;
        m["eisenstein"] = {{"mu", Kind::Text},           {"k", Kind::Integer},
                           {"set", Kind::Text},          {"value_re", Kind::Number},
                           {"value_im", Kind::Number},   {"term_count", Kind::Integer},
                           {"mode", Kind::Text},         {"precision", Kind::Integer},
                           {"error_bound", Kind::Number, false}, {"extrapolation_order", Kind::Integer, false},
                           {"shape_dependent", Kind::Bool, false}};
        m["jclass"] = {{"mu", Kind::Text},         {"box_max", Kind::Integer},  {"order", Kind::Integer},
                       {"j_re", Kind::Number},     {"j_im", Kind::Number},      {"error_bound", Kind::Number},
                       {"g2_re", Kind::Number},    {"g2_im", Kind::Number},     {"g3_re", Kind::Number},
                       {"g3_im", Kind::Number},    {"precision", Kind::Integer}};
        m["jquant"] = {{"theta", Kind::Text},
                       {"mu", Kind::Text},
                       {"window", Kind::Integer},
                       {"precision", Kind::Integer},
                       {"period_length", Kind::Integer},
                       {"stages",
                        Kind::Rows,
                        true,
                        {{"stage", Kind::Integer},
                         {"re", Kind::Number},
                         {"im", Kind::Number},
                         {"im_fraction", Kind::Number},
                         {"class", Kind::Integer},
                         {"degenerate", Kind::Bool},
                         {"min_abs_n", Kind::Integer}}},
                       {"classes",
                        Kind::Rows,
                        true,
                        {{"class", Kind::Integer},
                         {"count", Kind::Integer},
                         {"median_re", Kind::Number},
                         {"median_im", Kind::Number},
                         {"diameter", Kind::Number}}}};
        m["weier-residual"] = {{"mu", Kind::Text},
                               {"z", Kind::Text},
                               {"scheme", Kind::Text},
                               {"precision", Kind::Integer},
                               {"decay_exponent", Kind::Number, false},
                               {"rows",
                                Kind::Rows,
                                true,
                                {{"stage", Kind::Integer},
                                 {"set", Kind::Text},
                                 {"residual_abs", Kind::Number},
                                 {"wp_abs", Kind::Number},
                                 {"g2_abs", Kind::Number},
                                 {"normalized", Kind::Number, false}}}};
        m["automorphy"] = {{"matrix", Kind::Text},      {"mu", Kind::Text},          {"k", Kind::Integer},
                           {"set", Kind::Text},         {"residual_re", Kind::Number}, {"residual_im", Kind::Number},
                           {"residual_abs", Kind::Number}, {"det", Kind::Integer},   {"mode", Kind::Text},
                           {"precision", Kind::Integer}};
        m["orbit"] = {{"mu", Kind::Text},
                      {"theta", Kind::Text},
                      {"matrix", Kind::Text},
                      {"image_mu", Kind::Text},
                      {"image_theta", Kind::Text},
                      {"canonical_mu", Kind::Text},
                      {"canonical_theta", Kind::Text},
                      {"reduced_mu", Kind::Text},
                      {"reduction_matrix", Kind::Text},
                      {"direction_re", Kind::Number, false},
                      {"direction_im", Kind::Number, false},
                      {"precision", Kind::Integer}};
        m["cf"] = {{"theta", Kind::Text},
                   {"terms", Kind::Integer},
                   {"mode", Kind::Text},
                   {"quotients", Kind::IntList},
                   {"terminated", Kind::Bool},
                   {"period_preperiod", Kind::Integer, false},
                   {"period_length", Kind::Integer, false},
                   {"precision", Kind::Integer, false},
                   {"convergents",
                    Kind::Rows,
                    true,
                    {{"index", Kind::Integer}, {"m", Kind::Text}, {"n", Kind::Text}, {"err", Kind::Number}}}};
        return m;
    }();
    return schemas;
}

inline void validate_payload(const std::string &kind, const json &payload)
{
    auto it = payload_schemas().find(kind);
    if (it == payload_schemas().end())
        throw Error(Errc::SchemaViolation, "no schema for '" + kind + "'");
    validate(payload, it->second, kind);
}

inline std::string csv_cell(const json &v)
{
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

/// Flat projection: the table named `table` (one line per row), or a single
/// line of the scalar fields when no table is given.
inline std::string to_csv(const json &payload, const std::string &table, const std::vector<std::string> &columns)
{
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c)
        out += (c ? "," : "") + columns[c];
    out += "\n";
    auto line = [&](const json &obj) {
        for (std::size_t c = 0; c < columns.size(); ++c)
        {
            auto it = obj.find(columns[c]);
            out += (c ? "," : "") + (it == obj.end() ? std::string() : csv_cell(*it));
        }
        out += "\n";
    };
    if (table.empty())
        line(payload);
    else
        for (const auto &row : payload.at(table))
            line(row);
    return out;
}

struct Manifest
{
    std::vector<std::string> command_line;
    json config = json::object();
    Precision precision = 0;
    std::optional<std::string> config_file_digest;
    double wall_time_seconds = 0;
    unsigned workers = 1;

    json to_json(const std::string &payload_digest, const std::string &format) const
    {
        json m;
        m["command_line"] = command_line;
        m["config"] = config;
        m["precision"] = precision;
        m["workers"] = workers;
        m["versions"] = {{"qtj", kToolVersion},
                         {"schema", kSchemaVersion},
                         {"gmp", gmp_version},
                         {"mpfr", mpfr_get_version()},
                         {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        std::string argv_joined;
        for (const auto &a : command_line)
            argv_joined += a + '\0';
        m["input_hashes"] = {{"argv_sha256", sha256_hex(argv_joined)}};
        if (config_file_digest)
            m["input_hashes"]["config_file_sha256"] = *config_file_digest;
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.6f", wall_time_seconds);
        m["wall_time_seconds"] = wall;
        m["output_digests"] = {{"payload_sha256", payload_digest}, {"format", format}};
        return m;
    }
};

struct Emitted
{
    std::string text;   // what goes to the output path or stdout
    std::string digest; // sha256 of the canonical payload bytes
    std::optional<std::string> sidecar; // manifest for CSV written to a file
};

/// Validates, serializes and digests. Throws SchemaViolation before anything
/// is produced when the payload does not match its schema.
inline Emitted render(const std::string &kind, const json &payload, const Manifest &manifest, bool csv,
                      const std::string &table, const std::vector<std::string> &columns)
{
    validate_payload(kind, payload);
    Emitted out;
    if (csv)
    {
        out.text = to_csv(payload, table, columns);
        out.digest = sha256_hex(out.text);
        json side;
        side["schema_version"] = kSchemaVersion;
        side["kind"] = kind;
        side["manifest"] = manifest.to_json(out.digest, "csv");
        out.sidecar = side.dump(2) + "\n";
        return out;
    }
    const std::string canonical = payload.dump();
    out.digest = sha256_hex(canonical);
    json env;
    env["schema_version"] = kSchemaVersion;
    env["kind"] = kind;
    env["payload"] = payload;
    env["manifest"] = manifest.to_json(out.digest, "json");
    out.text = env.dump(2) + "\n";
    return out;
}

inline void write_file(const std::string &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error(Errc::IoFailure, "cannot open '" + path + "' for writing");
    f << text;
    if (!f.flush())
        throw Error(Errc::IoFailure, "write to '" + path + "' failed");
}

} // namespace qtj::cli
