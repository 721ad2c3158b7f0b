// partq: command-line front end for the exact partition library.
//
// Ten subcommands cover single-shot queries (cell, lochs, threedist,
// sturmian, nonbalanced, norms), the Monte Carlo engines (weights, limits,
// clt), and a quick self-check (selftest). Every run echoes its fully
// resolved configuration; JSON artifacts are {config, results, versions}
// and can be re-fed through --replay to reproduce the same output.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmp.h>
#include <mpfr.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "partq/cf.hpp"
#include "partq/errors.hpp"
#include "partq/experiments.hpp"
#include "partq/interval.hpp"
#include "partq/lochs.hpp"
#include "partq/partitions.hpp"
#include "partq/point.hpp"
#include "partq/rational.hpp"
#include "partq/rng.hpp"
#include "partq/sturmian.hpp"
#include "partq/weights.hpp"

#ifndef PARTQ_VERSION
#define PARTQ_VERSION "0.0.0"
#endif

namespace {

using ojson = nlohmann::ordered_json;
using namespace partq;

constexpr int kSchemaVersion = 1;

[[noreturn]] void bad_config(const std::string& msg) { throw ConfigError(msg); }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

BigRational parse_rational(const std::string& text, const std::string& what) {
    BigRational r;
    try {
        r = BigRational(text);
    } catch (const std::invalid_argument&) {
        bad_config(what + ": cannot parse rational '" + text + "'");
    }
    if (r.get_den() == 0) bad_config(what + ": zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

BigInt parse_integer(const std::string& text, const std::string& what) {
    try {
        return BigInt(text);
    } catch (const std::invalid_argument&) {
        bad_config(what + ": cannot parse integer '" + text + "'");
    }
}

long parse_machine_long(const std::string& text, const std::string& what) {
    BigInt v = parse_integer(text, what);
    if (!v.fits_slong_p()) bad_config(what + ": value '" + text + "' out of range");
    return v.get_si();
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        bad_config(what + ": cannot parse unsigned integer '" + text + "'");
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        bad_config(what + ": value '" + text + "' out of range");
    }
}

// --- spec-string parsers (inverses of the library's spec_string forms) ---

Scale parse_scale(const std::string& text) {
    std::string rest = text;
    BigRational rat(1);
    auto star = text.find('*');
    if (star != std::string::npos) {
        rat = parse_rational(text.substr(0, star), "scale");
        rest = text.substr(star + 1);
    }
    if (rest == "pi2/6") return Scale::pi2_over_6(rat);
    if (rest == "pi2/(6log2)") return Scale::cf_entropy(rat);
    if (rest == "pi2/(12log2)") return Scale::levy(rat);
    if (rest.rfind("log(", 0) == 0 && !rest.empty() && rest.back() == ')')
        return Scale::log_of(parse_rational(rest.substr(4, rest.size() - 5), "scale"), rat);
    if (star == std::string::npos) return Scale::one(parse_rational(rest, "scale"));
    bad_config("scale: unknown symbolic factor '" + rest + "'");
}

WeightFunction parse_weight(const std::string& text) {
    if (text == "twolog") return WeightFunction::two_log();
    if (text == "onelog") return WeightFunction::one_log();
    auto colon = text.find(':');
    if (colon == std::string::npos)
        bad_config("weight: unknown form '" + text +
                   "' (try linear:<scale>, twolog, onelog, noverlog:<scale>, power:<s>:<scale>)");
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);
    if (head == "linear") return WeightFunction::linear(parse_scale(tail));
    if (head == "noverlog") return WeightFunction::n_over_log_n(parse_scale(tail));
    if (head == "power") {
        auto colon2 = tail.find(':');
        if (colon2 == std::string::npos) bad_config("weight: power form is power:<s>:<scale>");
        BigRational s = parse_rational(tail.substr(0, colon2), "weight exponent");
        if (s <= 0) bad_config("weight: power exponent must be positive");
        return WeightFunction::power_law(s, parse_scale(tail.substr(colon2 + 1)));
    }
    bad_config("weight: unknown form '" + text + "'");
}

UnitPoint parse_point(const std::string& text, long bits) {
    if (text == "golden") return materialize(CFRule{CFRule::Golden{}}, bits);
    if (text == "e-2") return materialize(CFRule{CFRule::EulerEMinus2{}}, bits);
    if (text.rfind("rational:", 0) == 0)
        return explicit_point(parse_rational(text.substr(9), "point"));
    if (text.rfind("power:", 0) == 0) {
        BigRational s = parse_rational(text.substr(6), "point exponent");
        if (s <= 0) bad_config("point: power exponent must be positive");
        return materialize(CFRule{CFRule::Power{s}}, bits);
    }
    if (text.rfind("dyadic:", 0) == 0) {
        auto parts = split(text.substr(7), ':');
        if (parts.size() < 2 || parts.size() > 3)
            bad_config("point: dyadic form is dyadic:<bits>:<seed>[:<index>]");
        long b = parse_machine_long(parts[0], "dyadic bits");
        if (b < 1) bad_config("point: dyadic bits must be positive");
        std::uint64_t seed = parse_u64(parts[1], "dyadic seed");
        std::uint64_t index = parts.size() == 3 ? parse_u64(parts[2], "dyadic index") : 0;
        return sample_dyadic(seed, index, b);
    }
    bad_config("point: unknown spec '" + text +
               "' (try golden, e-2, rational:p/q, dyadic:<bits>:<seed>, power:<s>)");
}

PartitionFamily parse_family(const std::string& text, long bits) {
    if (text == "cf") return PartitionFamily::cf();
    if (text == "farey") return PartitionFamily::farey();
    if (text == "sb") return PartitionFamily::stern_brocot();
    if (text.rfind("bary:", 0) == 0) {
        BigInt b = parse_integer(text.substr(5), "family base");
        if (b < 2) bad_config("family: bary base must be >= 2");
        return PartitionFamily::bary(b);
    }
    if (text.rfind("beta:", 0) == 0) {
        BigRational be = parse_rational(text.substr(5), "family base");
        if (be <= 1) bad_config("family: beta base must be > 1");
        return PartitionFamily::beta(be);
    }
    if (text.rfind("3d:", 0) == 0)
        return PartitionFamily::three_distance(parse_point(text.substr(3), bits));
    if (text.rfind("synthetic:", 0) == 0)
        return PartitionFamily::synthetic(parse_weight(text.substr(10)));
    bad_config("family: unknown spec '" + text +
               "' (try cf, farey, sb, bary:<b>, beta:<p/q>, 3d:<alpha>, synthetic:<weight>)");
}

// Splits "source:target" where either side may itself contain ':' (e.g.
// "bary:10:cf"); the first split where both sides parse as families wins.
std::pair<std::string, std::string> split_pair(const std::string& text, long bits) {
    std::string first_error;
    for (auto pos = text.find(':'); pos != std::string::npos; pos = text.find(':', pos + 1)) {
        std::string a = text.substr(0, pos);
        std::string b = text.substr(pos + 1);
        try {
            parse_family(a, bits);
            parse_family(b, bits);
            return {a, b};
        } catch (const ConfigError& e) {
            if (first_error.empty()) first_error = e.what();
        }
    }
    bad_config("pair: cannot split '" + text + "' into <source>:<target> family specs" +
               (first_error.empty() ? "" : " (" + first_error + ")"));
}

MeasureKind parse_measure(const std::string& text) {
    if (text == "lebesgue") return MeasureKind::Lebesgue;
    if (text == "gauss") return MeasureKind::Gauss;
    bad_config("measure: expected lebesgue or gauss, got '" + text + "'");
}

SweepMode parse_mode(const std::string& text) {
    if (text == "ae") return SweepMode::AlmostEverywhere;
    if (text == "in_measure") return SweepMode::InMeasure;
    bad_config("mode: expected ae or in_measure, got '" + text + "'");
}

LochsTransform parse_transform(const std::string& text) {
    if (text == "l_over_n") return LochsTransform::LOverN;
    if (text == "log_l_over_n") return LochsTransform::LogLOverN;
    if (text == "l_over_log_n") return LochsTransform::LOverLogN;
    if (text == "l_over_n_over_log_n") return LochsTransform::LOverNOverLogN;
    if (text == "l_over_n_log_l") return LochsTransform::LOverNLogL;
    if (text == "weight_ratio") return LochsTransform::TargetWeightRatio;
    bad_config("transform: unknown form '" + text +
               "' (try l_over_n, log_l_over_n, l_over_log_n, l_over_n_over_log_n, "
               "l_over_n_log_l, weight_ratio)");
}

std::vector<BigInt> parse_depths(const std::string& text, const BigInt& min_value) {
    std::vector<BigInt> depths;
    for (const auto& part : split(text, ',')) {
        BigInt d = parse_integer(part, "depths");
        if (d < min_value) bad_config("depths: value '" + part + "' is too small");
        depths.push_back(d);
    }
    if (depths.empty()) bad_config("depths: empty list");
    return depths;
}

std::string method_name(LochsMethod m) {
    switch (m) {
        case LochsMethod::Generic: return "generic";
        case LochsMethod::ClosedForm: return "closed_form";
        case LochsMethod::LinearScan: return "linear_scan";
    }
    return "?";
}

// --- artifact emission ---

ojson versions_block() {
    return ojson{{"partq", PARTQ_VERSION}, {"gmp", gmp_version}, {"mpfr", mpfr_get_version()}};
}

std::string render_json(const ojson& config, const ojson& results) {
    ojson doc;
    doc["config"] = config;
    doc["results"] = results;
    doc["versions"] = versions_block();
    return doc.dump(2) + "\n";
}

std::string csv_scalar(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render_csv(const ojson& rows, const std::vector<std::string>& columns) {
    std::ostringstream out;
    out << "# schema_version=" << kSchemaVersion << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << csv_scalar(row.at(columns[i]));
        out << "\n";
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open output file " + path);
    out << text;
    if (!out) throw ResourceError("failed writing output file " + path);
}

void emit(const ojson& config, const ojson& results, const std::vector<std::string>& columns,
          const std::string& format, const std::string& output) {
    if (format == "json") {
        write_text(output, render_json(config, results));
        return;
    }
    if (format == "csv") {
        if (columns.empty()) bad_config("this command has no CSV form; use --format json");
        write_text(output, render_csv(results, columns));
        return;
    }
    bad_config("format: expected json or csv, got '" + format + "'");
}

const std::vector<std::string> kStatsColumns = {
    "depth", "n_samples", "rejections", "mean", "median",
    "q05",   "q95",       "target",     "abs_err_median"};

ojson stats_rows(const EstimatorReport& rep, bool with_traces) {
    ojson rows = ojson::array();
    for (std::size_t d = 0; d < rep.stats.size(); ++d) {
        const DepthStats& st = rep.stats[d];
        ojson row;
        row["depth"] = st.depth.get_str();
        row["n_samples"] = st.n_samples;
        row["rejections"] = st.rejections;
        row["mean"] = st.mean;
        row["median"] = st.median;
        row["q05"] = st.q05;
        row["q95"] = st.q95;
        row["target"] = st.target;
        row["abs_err_median"] = st.abs_err_median;
        row["cap_exceeded"] = st.cap_exceeded;
        if (with_traces) {
            ojson arr = ojson::array();
            for (const auto& tr : rep.traces)
                arr.push_back(d < tr.size() ? ojson(tr[d]) : ojson(nullptr));
            row["trace"] = arr;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
T cfg_get(const ojson& cfg, const char* key) {
    if (!cfg.contains(key)) bad_config(std::string("replay: config missing key '") + key + "'");
    try {
        return cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        bad_config(std::string("replay: config key '") + key + "' has the wrong type");
    }
}

// --- subcommands ---

struct CellCmd {
    std::string family = "farey";
    std::string x;
    std::string n = "1";
    long bits = 512;
    std::string format = "json";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion}, {"command", "cell"},
                     {"family", family},                 {"x", x},
                     {"n", n},                           {"bits", bits},
                     {"format", format}};
    }
    static CellCmd from_config(const ojson& cfg) {
        CellCmd c;
        c.family = cfg_get<std::string>(cfg, "family");
        c.x = cfg_get<std::string>(cfg, "x");
        c.n = cfg_get<std::string>(cfg, "n");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        PartitionFamily fam = parse_family(family, bits);
        UnitPoint pt = parse_point(x, bits);
        BigInt depth = parse_integer(n, "--n");
        if (depth < 0) bad_config("--n must be >= 0");
        Interval cell = cell_of(fam, pt, depth);
        ojson row;
        row["family"] = family;
        row["point"] = point_id(pt);
        row["depth"] = depth.get_str();
        row["lo"] = cell.lo.get_str();
        row["hi"] = cell.hi.get_str();
        BigRational len = cell.length();
        row["length"] = len.get_str();
        row["length_double"] = len.get_d();
        emit(config(), ojson::array({row}),
             {"family", "point", "depth", "lo", "hi", "length", "length_double"}, format, output);
    }
};

struct LochsCmd {
    std::string pair = "cf:farey";
    std::string x;
    std::string n = "1";
    std::string cap;  // empty: weight-calibrated default
    bool force_generic = false;
    long bits = 512;
    std::string format = "json";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion},
                     {"command", "lochs"},
                     {"pair", pair},
                     {"x", x},
                     {"n", n},
                     {"cap", cap},
                     {"force_generic", force_generic},
                     {"bits", bits},
                     {"format", format}};
    }
    static LochsCmd from_config(const ojson& cfg) {
        LochsCmd c;
        c.pair = cfg_get<std::string>(cfg, "pair");
        c.x = cfg_get<std::string>(cfg, "x");
        c.n = cfg_get<std::string>(cfg, "n");
        c.cap = cfg_get<std::string>(cfg, "cap");
        c.force_generic = cfg_get<bool>(cfg, "force_generic");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        auto [src_s, tgt_s] = split_pair(pair, bits);
        PartitionFamily src = parse_family(src_s, bits);
        PartitionFamily tgt = parse_family(tgt_s, bits);
        UnitPoint pt = parse_point(x, bits);
        BigInt nn = parse_integer(n, "--n");
        if (nn < 1) bad_config("--n must be >= 1");
        BigInt capv = cap.empty()
                          ? lochs_default_cap(canonical_weight(src), canonical_weight(tgt), nn)
                          : parse_integer(cap, "--cap");
        LochsRecord rec = tgt.self_refining() ? lochs_generic(pt, src, tgt, nn, capv)
                                              : lochs_linear_scan(pt, src, tgt, nn, capv);
        std::optional<BigInt> closed;
        if (!force_generic && ((src_s == "cf" && tgt_s == "farey") ||
                               (src_s == "farey" && tgt_s == "cf"))) {
            PointCache cache;
            const CFExpansion& e = cache.ensure_cf(pt);
            if (src_s == "cf") {
                if (!nn.fits_slong_p()) bad_config("--n too large for the cf source");
                closed = lochs_cf_to_farey(e, nn.get_si()).L;
            } else {
                closed = lochs_farey_to_cf(e, nn).L;
            }
        }
        ojson row;
        row["source"] = src_s;
        row["target"] = tgt_s;
        row["point"] = point_id(pt);
        row["n"] = nn.get_str();
        row["L"] = rec.L.get_str();
        row["method"] = method_name(rec.method);
        row["cap"] = capv.get_str();
        row["closed_L"] = closed ? ojson(closed->get_str()) : ojson(nullptr);
        row["methods_agree"] = closed ? ojson(*closed == rec.L) : ojson(nullptr);
        emit(config(), ojson::array({row}),
             {"source", "target", "point", "n", "L", "method", "cap", "closed_L",
              "methods_agree"},
             format, output);
    }
};

struct WeightsCmd {
    std::string family = "farey";
    std::string weight;  // empty: the family's canonical weight
    std::string depths = "100";
    long samples = 100;
    std::uint64_t seed = 1;
    std::string measure = "lebesgue";
    std::string mode = "ae";
    long initial_bits = 0;
    bool traces = false;
    double target = 1.0;
    int threads = 0;
    long bits = 512;
    std::string format = "csv";

    void finalize() {
        if (weight.empty()) weight = canonical_weight(parse_family(family, bits)).spec_string();
    }
    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion},
                     {"command", "weights"},
                     {"family", family},
                     {"weight", weight},
                     {"depths", depths},
                     {"samples", samples},
                     {"seed", seed},
                     {"measure", measure},
                     {"mode", mode},
                     {"initial_bits", initial_bits},
                     {"traces", traces},
                     {"target", target},
                     {"threads", threads},
                     {"bits", bits},
                     {"format", format}};
    }
    static WeightsCmd from_config(const ojson& cfg) {
        WeightsCmd c;
        c.family = cfg_get<std::string>(cfg, "family");
        c.weight = cfg_get<std::string>(cfg, "weight");
        c.depths = cfg_get<std::string>(cfg, "depths");
        c.samples = cfg_get<long>(cfg, "samples");
        c.seed = cfg_get<std::uint64_t>(cfg, "seed");
        c.measure = cfg_get<std::string>(cfg, "measure");
        c.mode = cfg_get<std::string>(cfg, "mode");
        c.initial_bits = cfg_get<long>(cfg, "initial_bits");
        c.traces = cfg_get<bool>(cfg, "traces");
        c.target = cfg_get<double>(cfg, "target");
        c.threads = cfg_get<int>(cfg, "threads");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        c.finalize();
        return c;
    }
    void run(const std::string& output) const {
        SweepConfig cfg;
        cfg.family = parse_family(family, bits);
        cfg.f = parse_weight(weight);
        cfg.measure = parse_measure(measure);
        cfg.depths = parse_depths(depths, BigInt(1));
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.mode = parse_mode(mode);
        cfg.initial_bits = initial_bits;
        cfg.retain_traces = traces;
        cfg.target_value = target;
        cfg.threads = threads;
        EstimatorReport rep = convergence_sweep(cfg);
        emit(config(), stats_rows(rep, traces), kStatsColumns, format, output);
    }
};

struct LimitsCmd {
    std::string pair = "cf:farey";
    std::string transform = "l_over_n";
    std::string depths = "100";
    long samples = 100;
    std::uint64_t seed = 1;
    std::string cap;  // empty: weight-calibrated default per depth
    bool force_generic = false;
    long initial_bits = 0;
    bool traces = false;
    double target = 1.0;
    int threads = 0;
    long bits = 512;
    std::string format = "csv";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion},
                     {"command", "limits"},
                     {"pair", pair},
                     {"transform", transform},
                     {"depths", depths},
                     {"samples", samples},
                     {"seed", seed},
                     {"cap", cap},
                     {"force_generic", force_generic},
                     {"initial_bits", initial_bits},
                     {"traces", traces},
                     {"target", target},
                     {"threads", threads},
                     {"bits", bits},
                     {"format", format}};
    }
    static LimitsCmd from_config(const ojson& cfg) {
        LimitsCmd c;
        c.pair = cfg_get<std::string>(cfg, "pair");
        c.transform = cfg_get<std::string>(cfg, "transform");
        c.depths = cfg_get<std::string>(cfg, "depths");
        c.samples = cfg_get<long>(cfg, "samples");
        c.seed = cfg_get<std::uint64_t>(cfg, "seed");
        c.cap = cfg_get<std::string>(cfg, "cap");
        c.force_generic = cfg_get<bool>(cfg, "force_generic");
        c.initial_bits = cfg_get<long>(cfg, "initial_bits");
        c.traces = cfg_get<bool>(cfg, "traces");
        c.target = cfg_get<double>(cfg, "target");
        c.threads = cfg_get<int>(cfg, "threads");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        auto [src_s, tgt_s] = split_pair(pair, bits);
        LochsConfig cfg;
        cfg.source = parse_family(src_s, bits);
        cfg.target = parse_family(tgt_s, bits);
        cfg.transform = parse_transform(transform);
        cfg.depths = parse_depths(depths, BigInt(1));
        cfg.samples = samples;
        cfg.seed = seed;
        if (!cap.empty()) cfg.cap = parse_integer(cap, "--cap");
        cfg.force_generic = force_generic;
        cfg.initial_bits = initial_bits;
        cfg.retain_traces = traces;
        cfg.target_value = target;
        cfg.threads = threads;
        EstimatorReport rep = lochs_limit_experiment(cfg);
        emit(config(), stats_rows(rep, traces), kStatsColumns, format, output);
    }
};

struct CltCmd {
    std::string n = "100";
    long samples = 100;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string format = "csv";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion},
                     {"command", "clt"},
                     {"n", n},
                     {"samples", samples},
                     {"seed", seed},
                     {"threads", threads},
                     {"format", format}};
    }
    static CltCmd from_config(const ojson& cfg) {
        CltCmd c;
        c.n = cfg_get<std::string>(cfg, "n");
        c.samples = cfg_get<long>(cfg, "samples");
        c.seed = cfg_get<std::uint64_t>(cfg, "seed");
        c.threads = cfg_get<int>(cfg, "threads");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        BigInt nn = parse_integer(n, "--n");
        if (nn < 1) bad_config("--n must be >= 1");
        GaussianDiagnostic d = clt_diagnostic(nn, samples, seed, threads);
        ojson row;
        row["n"] = d.n.get_str();
        row["samples"] = d.samples;
        row["rejections"] = d.rejections;
        row["mean_log_q_over_n"] = d.mean_log_q_over_n;
        row["b_hat"] = d.b_hat;
        row["ks_stat"] = d.ks_stat;
        row["skewness"] = d.skewness;
        row["excess_kurtosis"] = d.excess_kurtosis;
        emit(config(), ojson::array({row}),
             {"n", "samples", "rejections", "mean_log_q_over_n", "b_hat", "ks_stat",
              "skewness", "excess_kurtosis"},
             format, output);
    }
};

struct ThreedistCmd {
    std::string alpha;
    std::string n = "1";
    long bits = 512;
    std::string format = "csv";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion}, {"command", "threedist"},
                     {"alpha", alpha},                   {"n", n},
                     {"bits", bits},                     {"format", format}};
    }
    static ThreedistCmd from_config(const ojson& cfg) {
        ThreedistCmd c;
        c.alpha = cfg_get<std::string>(cfg, "alpha");
        c.n = cfg_get<std::string>(cfg, "n");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        UnitPoint pt = parse_point(alpha, bits);
        BigInt nn = parse_integer(n, "--n");
        if (nn < 1) bad_config("--n must be >= 1");
        auto profile = three_distance_profile(pt, nn);
        auto dec = three_distance_decomposition(pt, nn);
        PointCache cache;
        const CFExpansion& e = cache.ensure_cf(pt);
        BigInt qk = e.q(dec.k);
        BigRational eta = dec.eta_k;
        BigRational delta = dec.eta_k_minus - BigRational(dec.m) * eta;

        // Rebuild the profile from the (k, m, r) decomposition and compare.
        std::vector<std::pair<BigRational, BigInt>> expected;
        auto add = [&expected](const BigRational& len, const BigInt& cnt) {
            if (cnt == 0) return;
            for (auto& pr : expected)
                if (pr.first == len) {
                    pr.second += cnt;
                    return;
                }
            expected.emplace_back(len, cnt);
        };
        add(eta, BigInt(nn + 1 - qk));
        add(delta, BigInt(dec.r + 1));
        add(BigRational(delta + eta), BigInt(qk - dec.r - 1));
        std::sort(expected.begin(), expected.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool counts_match = expected.size() == profile.size();
        if (counts_match)
            for (std::size_t i = 0; i < expected.size(); ++i)
                counts_match = counts_match && expected[i].first == profile[i].length &&
                               expected[i].second == profile[i].count;
        ojson largest_is_sum =
            profile.size() == 3
                ? ojson(profile[2].length == profile[0].length + profile[1].length)
                : ojson(nullptr);

        ojson rows = ojson::array();
        for (const auto& cls : profile) {
            ojson row;
            row["length"] = cls.length.get_str();
            row["length_double"] = cls.length.get_d();
            row["count"] = cls.count.get_str();
            row["k"] = dec.k;
            row["m"] = dec.m.get_str();
            row["r"] = dec.r.get_str();
            row["counts_match"] = counts_match;
            row["largest_is_sum"] = largest_is_sum;
            rows.push_back(std::move(row));
        }
        emit(config(), rows,
             {"length", "length_double", "count", "k", "m", "r", "counts_match",
              "largest_is_sum"},
             format, output);
    }
};

struct SturmianCmd {
    std::string alpha;
    long n = 1;
    long tree = -1;  // -1: no tree dump
    long bits = 512;
    std::string format = "json";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion}, {"command", "sturmian"},
                     {"alpha", alpha},                   {"n", n},
                     {"tree", tree},                     {"bits", bits},
                     {"format", format}};
    }
    static SturmianCmd from_config(const ojson& cfg) {
        SturmianCmd c;
        c.alpha = cfg_get<std::string>(cfg, "alpha");
        c.n = cfg_get<long>(cfg, "n");
        c.tree = cfg_get<long>(cfg, "tree");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        if (n < 1) bad_config("--n must be >= 1");
        UnitPoint pt = parse_point(alpha, bits);
        std::string rot = rotation_code(pt, n);
        std::string fy = farey_prefix(pt, n);
        auto pal = palindrome_depths(pt, n);
        std::ostringstream pal_list;
        for (std::size_t i = 0; i < pal.size(); ++i) pal_list << (i ? ";" : "") << pal[i];
        ojson row;
        row["alpha"] = point_id(pt);
        row["n"] = n;
        row["rotation_word"] = rot;
        row["farey_word"] = fy;
        row["agree"] = (rot == fy);
        row["palindrome_depths"] = pal_list.str();
        if (tree >= 0) {
            if (format != "json") bad_config("--tree requires --format json");
            LabeledFareyTree t = LabeledFareyTree::build(tree);
            ojson levels = ojson::array();
            for (long d = 0; d <= t.depth(); ++d) {
                ojson cells = ojson::array();
                for (const auto& lc : t.level(d)) {
                    ojson cell;
                    cell["lo"] = lc.cell.lo.get_str();
                    cell["hi"] = lc.cell.hi.get_str();
                    cell["letter"] =
                        lc.word.empty() ? std::string() : lc.word.substr(lc.word.size() - 1);
                    cell["word"] = lc.word;
                    cells.push_back(std::move(cell));
                }
                levels.push_back(ojson{{"depth", d}, {"cells", std::move(cells)}});
            }
            row["tree"] = std::move(levels);
        }
        emit(config(), ojson::array({row}),
             {"alpha", "n", "rotation_word", "farey_word", "agree", "palindrome_depths"},
             format, output);
    }
};

struct NonbalancedCmd {
    std::string s = "1";
    long kmax = 8;
    std::string format = "csv";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion},
                     {"command", "nonbalanced"},
                     {"s", s},
                     {"kmax", kmax},
                     {"format", format}};
    }
    static NonbalancedCmd from_config(const ojson& cfg) {
        NonbalancedCmd c;
        c.s = cfg_get<std::string>(cfg, "s");
        c.kmax = cfg_get<long>(cfg, "kmax");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        BigRational sv = parse_rational(s, "--s");
        if (sv <= 0) bad_config("--s must be positive");
        auto rows_in = nonbalanced_demo(sv, kmax);
        ojson rows = ojson::array();
        for (const auto& r : rows_in) {
            ojson row;
            row["k"] = r.k;
            row["a_next"] = r.a_next.get_str();
            row["m"] = r.m.get_str();
            row["r"] = r.r.get_str();
            row["n"] = r.n.get_str();
            row["eta"] = r.eta.get_str();
            row["delta"] = r.delta.get_str();
            row["mass"] = r.mass.get_str();
            row["mass_double"] = r.mass.get_d();
            row["ratio_eta"] = r.ratio_eta;
            row["ratio_delta"] = r.ratio_delta;
            rows.push_back(std::move(row));
        }
        emit(config(), rows,
             {"k", "a_next", "m", "r", "n", "eta", "delta", "mass", "mass_double",
              "ratio_eta", "ratio_delta"},
             format, output);
    }
};

struct NormsCmd {
    std::string family = "farey";
    std::string depths = "1";
    long bits = 512;
    std::string format = "csv";

    ojson config() const {
        return ojson{{"schema_version", kSchemaVersion}, {"command", "norms"},
                     {"family", family},                 {"depths", depths},
                     {"bits", bits},                     {"format", format}};
    }
    static NormsCmd from_config(const ojson& cfg) {
        NormsCmd c;
        c.family = cfg_get<std::string>(cfg, "family");
        c.depths = cfg_get<std::string>(cfg, "depths");
        c.bits = cfg_get<long>(cfg, "bits");
        c.format = cfg_get<std::string>(cfg, "format");
        return c;
    }
    void run(const std::string& output) const {
        PartitionFamily fam = parse_family(family, bits);
        ojson rows = ojson::array();
        for (const BigInt& d : parse_depths(depths, BigInt(0))) {
            BigRational nm = partition_norm(fam, d);
            ojson row;
            row["depth"] = d.get_str();
            row["norm"] = nm.get_str();
            row["norm_double"] = nm.get_d();
            rows.push_back(std::move(row));
        }
        emit(config(), rows, {"depth", "norm", "norm_double"}, format, output);
    }
};

// Fast cross-checks of independent code paths against each other; any
// disagreement is an invariant violation (exit 4).
struct SelftestCmd {
    static void require(bool ok, const std::string& what) {
        if (!ok) throw InvariantViolation("selftest: " + what);
    }

    void run() const {
        long cases = 0;
        std::vector<UnitPoint> pts;
        pts.push_back(materialize(CFRule{CFRule::Golden{}}, 256));
        pts.push_back(materialize(CFRule{CFRule::EulerEMinus2{}}, 256));
        for (std::uint64_t i = 0; i < 10; ++i) pts.push_back(sample_dyadic(424242, i, 256));
        PartitionFamily farey = PartitionFamily::farey();
        PartitionFamily cf = PartitionFamily::cf();

        for (const auto& pt : pts) {
            PointCache cache;
            const CFExpansion& e = cache.ensure_cf(pt);
            for (long nn = 1; nn <= 10; ++nn) {
                BigInt cap = 2 * e.q(nn) + e.q(nn - 1) + 64;
                require(lochs_cf_to_farey(e, nn).L ==
                            lochs_generic(pt, cf, farey, BigInt(nn), cap).L,
                        "cf->farey closed form disagrees with containment");
                ++cases;
            }
            for (BigInt m = 2; m <= 40; m += 7) {
                BigInt cap =
                    lochs_default_cap(canonical_weight(farey), canonical_weight(cf), m);
                require(lochs_farey_to_cf(e, m).L == lochs_generic(pt, farey, cf, m, cap).L,
                        "farey->cf closed form disagrees with containment");
                ++cases;
            }
        }
        std::cout << "ok: closed-form indexes match containment (" << cases << " cases)\n";

        cases = 0;
        std::vector<PartitionFamily> fams = {farey, PartitionFamily::stern_brocot(),
                                             PartitionFamily::bary(BigInt(3))};
        for (const auto& fam : fams) {
            for (std::uint64_t i = 0; i < 5; ++i) {
                UnitPoint pt = sample_dyadic(515151, i, 256);
                for (long nn = 1; nn <= 8; ++nn) {
                    Interval cell = cell_of(fam, pt, BigInt(nn));
                    auto cells = enumerate_cells(fam, nn);
                    bool found = false;
                    for (const auto& c : cells)
                        if (c.lo < pt.value && pt.value < c.hi) {
                            found = c == cell;
                            break;
                        }
                    require(found, "located cell differs from the enumerated one");
                    ++cases;
                }
            }
        }
        std::cout << "ok: located cells match enumeration (" << cases << " cases)\n";

        cases = 0;
        for (const auto& pt : pts) {
            PointCache cache;
            const CFExpansion& e = cache.ensure_cf(pt);
            for (long nn = 1; nn <= 30; ++nn) {
                FareyCell fc = cell_farey(e, BigInt(nn));
                require(farey_adjacency_check(fc.interval.lo, fc.interval.hi, BigInt(nn)),
                        "depth-n cell endpoints are not Farey neighbours");
                ++cases;
            }
        }
        std::cout << "ok: cell endpoints are Farey neighbours (" << cases << " cases)\n";

        cases = 0;
        SplitMix64 rng(373737);
        for (int t = 0; t < 5; ++t) {
            BigInt den(100000 + static_cast<long>(rng.below(100000)));
            BigInt num(1 + static_cast<long>(rng.below(99999)));
            BigRational a = make_rational(num, den);
            UnitPoint alpha = explicit_point(a);
            for (long nn : {10L, 100L, 999L}) {
                auto profile = three_distance_profile(alpha, BigInt(nn));
                require(profile.size() <= 3, "more than three gap lengths");
                BigInt total(0);
                BigRational mass(0);
                for (const auto& cls : profile) {
                    total += cls.count;
                    mass += cls.length * BigRational(cls.count);
                }
                require(total == nn + 1, "gap counts do not total n+1");
                require(mass == 1, "gap lengths do not tile the circle");
                ++cases;
            }
        }
        std::cout << "ok: rotation gap profiles tile the circle (" << cases << " cases)\n";

        cases = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            require(rotation_code(pts[i], 80) == farey_prefix(pts[i], 80),
                    "rotation coding disagrees with the labeled-tree coding");
            ++cases;
        }
        std::cout << "ok: rotation and tree codings agree (" << cases << " cases)\n";

        cases = 0;
        for (const auto& fam : fams) {
            for (long nn = 1; nn <= 7; ++nn) {
                BigRational widest(0);
                for (const auto& c : enumerate_cells(fam, nn))
                    widest = std::max(widest, BigRational(c.length()));
                require(partition_norm(fam, BigInt(nn)) == widest,
                        "partition norm differs from the widest enumerated cell");
                ++cases;
            }
        }
        std::cout << "ok: partition norms match enumeration (" << cases << " cases)\n";

        std::cout << "selftest passed\n";
    }
};

// --- replay ---

void run_replay(const std::string& path, const std::string& output) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("replay: cannot open " + path);
    ojson art;
    try {
        art = ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad_config(std::string("replay: invalid artifact: ") + e.what());
    }
    if (!art.contains("config") || !art["config"].is_object())
        bad_config("replay: artifact has no config block");
    const ojson& cfg = art["config"];
    if (cfg_get<int>(cfg, "schema_version") != kSchemaVersion)
        bad_config("replay: unsupported schema_version");
    std::string cmd = cfg_get<std::string>(cfg, "command");
    if (cmd == "cell")
        CellCmd::from_config(cfg).run(output);
    else if (cmd == "lochs")
        LochsCmd::from_config(cfg).run(output);
    else if (cmd == "weights")
        WeightsCmd::from_config(cfg).run(output);
    else if (cmd == "limits")
        LimitsCmd::from_config(cfg).run(output);
    else if (cmd == "clt")
        CltCmd::from_config(cfg).run(output);
    else if (cmd == "threedist")
        ThreedistCmd::from_config(cfg).run(output);
    else if (cmd == "sturmian")
        SturmianCmd::from_config(cfg).run(output);
    else if (cmd == "nonbalanced")
        NonbalancedCmd::from_config(cfg).run(output);
    else if (cmd == "norms")
        NormsCmd::from_config(cfg).run(output);
    else
        bad_config("replay: unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact interval partitions, base-conversion indexes, and limit experiments"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", PARTQ_VERSION);

    std::string replay_path;
    std::string output;
    app.add_option("--replay", replay_path,
                   "re-run a saved JSON artifact and reproduce its output exactly");
    app.add_option("--output", output, "write the artifact to this file instead of stdout");

    CellCmd cell;
    auto* sc = app.add_subcommand("cell", "locate the depth-n cell of a point");
    sc->fallthrough();
    sc->add_option("--family", cell.family, "partition family spec")->capture_default_str();
    sc->add_option("--x", cell.x, "point spec")->required();
    sc->add_option("--n", cell.n, "depth")->capture_default_str();
    sc->add_option("--bits", cell.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc->add_option("--format", cell.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    LochsCmd lochs;
    auto* sl = app.add_subcommand(
        "lochs", "base-conversion index of a point for a source:target pair");
    sl->fallthrough();
    sl->add_option("--pair", lochs.pair, "source:target family specs")->capture_default_str();
    sl->add_option("--x", lochs.x, "point spec")->required();
    sl->add_option("--n", lochs.n, "source depth")->capture_default_str();
    sl->add_option("--cap", lochs.cap, "search cap (default: weight-calibrated)");
    sl->add_flag("--force-generic", lochs.force_generic,
                 "skip closed forms even when available");
    sl->add_option("--bits", lochs.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sl->add_option("--format", lochs.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    WeightsCmd weights;
    auto* sw = app.add_subcommand(
        "weights", "distribution of -log(cell length)/f(n) over sampled points");
    sw->fallthrough();
    sw->add_option("--family", weights.family, "partition family spec")->capture_default_str();
    sw->add_option("--weight", weights.weight,
                   "weight function spec (default: the family's own)");
    sw->add_option("--depths", weights.depths, "comma-separated depth list")
        ->capture_default_str();
    sw->add_option("--samples", weights.samples, "points per depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sw->add_option("--seed", weights.seed, "sampling seed")->capture_default_str();
    sw->add_option("--measure", weights.measure, "lebesgue or gauss")
        ->check(CLI::IsMember({"lebesgue", "gauss"}))
        ->capture_default_str();
    sw->add_option("--mode", weights.mode, "ae (one draw per point) or in_measure")
        ->check(CLI::IsMember({"ae", "in_measure"}))
        ->capture_default_str();
    sw->add_option("--initial-bits", weights.initial_bits,
                   "starting sample resolution (0 = auto)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sw->add_flag("--traces", weights.traces, "retain per-sample values in the JSON artifact");
    sw->add_option("--target", weights.target, "reference value for abs_err_median")
        ->capture_default_str();
    sw->add_option("--threads", weights.threads, "worker threads (0 = auto)")
        ->envname("PARTQ_THREADS")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sw->add_option("--bits", weights.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sw->add_option("--format", weights.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    LimitsCmd limits;
    auto* si = app.add_subcommand(
        "limits", "distribution of the normalized base-conversion index per depth");
    si->fallthrough();
    si->add_option("--pair", limits.pair, "source:target family specs")->capture_default_str();
    si->add_option("--transform", limits.transform,
                   "normalization applied to L before aggregating")
        ->capture_default_str();
    si->add_option("--depths", limits.depths, "comma-separated depth list")
        ->capture_default_str();
    si->add_option("--samples", limits.samples, "points per depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    si->add_option("--seed", limits.seed, "sampling seed")->capture_default_str();
    si->add_option("--cap", limits.cap, "search cap (default: weight-calibrated per depth)");
    si->add_flag("--force-generic", limits.force_generic,
                 "skip closed forms even when available");
    si->add_option("--initial-bits", limits.initial_bits,
                   "starting sample resolution (0 = auto)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    si->add_flag("--traces", limits.traces, "retain per-sample values in the JSON artifact");
    si->add_option("--target", limits.target, "reference value for abs_err_median")
        ->capture_default_str();
    si->add_option("--threads", limits.threads, "worker threads (0 = auto)")
        ->envname("PARTQ_THREADS")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    si->add_option("--bits", limits.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    si->add_option("--format", limits.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    CltCmd clt;
    auto* sg = app.add_subcommand("clt", "distribution of log q_n against the normal law");
    sg->fallthrough();
    sg->add_option("--n", clt.n, "expansion depth")->capture_default_str();
    sg->add_option("--samples", clt.samples, "sampled points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sg->add_option("--seed", clt.seed, "sampling seed")->capture_default_str();
    sg->add_option("--threads", clt.threads, "worker threads (0 = auto)")
        ->envname("PARTQ_THREADS")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sg->add_option("--format", clt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    ThreedistCmd threedist;
    auto* st = app.add_subcommand(
        "threedist", "gap-length classes of the rotation partition at depth n");
    st->fallthrough();
    st->add_option("--alpha", threedist.alpha, "rotation number spec")->required();
    st->add_option("--n", threedist.n, "depth")->capture_default_str();
    st->add_option("--bits", threedist.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    st->add_option("--format", threedist.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SturmianCmd sturmian;
    auto* ss = app.add_subcommand(
        "sturmian", "rotation coding of alpha, its tree coding, and palindrome depths");
    ss->fallthrough();
    ss->add_option("--alpha", sturmian.alpha, "rotation number spec")->required();
    ss->add_option("--n", sturmian.n, "word length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ss->add_option("--tree", sturmian.tree,
                   "also dump the labeled tree to this depth (JSON only)")
        ->check(CLI::Range(0L, 2000L));
    ss->add_option("--bits", sturmian.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ss->add_option("--format", sturmian.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    NonbalancedCmd nonbalanced;
    auto* sn = app.add_subcommand(
        "nonbalanced", "per-quotient gap report for the power-rule point");
    sn->fallthrough();
    sn->add_option("--s", nonbalanced.s, "rule exponent (positive rational)")
        ->capture_default_str();
    sn->add_option("--kmax", nonbalanced.kmax, "number of quotient stages")
        ->check(CLI::Range(1L, 40L))
        ->capture_default_str();
    sn->add_option("--format", nonbalanced.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    NormsCmd norms;
    auto* so = app.add_subcommand("norms", "widest cell length per depth");
    so->fallthrough();
    so->add_option("--family", norms.family, "partition family spec")->capture_default_str();
    so->add_option("--depths", norms.depths, "comma-separated depth list")
        ->capture_default_str();
    so->add_option("--bits", norms.bits, "materialization resolution for rule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    so->add_option("--format", norms.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SelftestCmd selftest;
    auto* sq =
        app.add_subcommand("selftest", "cross-check independent code paths; exit 0 on success");
    sq->fallthrough();

    sc->callback([&] { cell.run(output); });
    sl->callback([&] { lochs.run(output); });
    sw->callback([&] {
        weights.finalize();
        weights.run(output);
    });
    si->callback([&] { limits.run(output); });
    sg->callback([&] { clt.run(output); });
    st->callback([&] { threedist.run(output); });
    ss->callback([&] { sturmian.run(output); });
    sn->callback([&] { nonbalanced.run(output); });
    so->callback([&] { norms.run(output); });
    sq->callback([&] { selftest.run(); });

    try {
        app.parse(argc, argv);
        if (!replay_path.empty()) {
            if (!app.get_subcommands().empty())
                bad_config("--replay excludes a subcommand; pick one");
            run_replay(replay_path, output);
        } else if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const partq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (dynamic_cast<const ResourceError*>(&e) != nullptr) return 3;
        if (dynamic_cast<const InvariantViolation*>(&e) != nullptr) return 4;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
