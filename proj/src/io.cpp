#include "divisikit/io.hpp"

#include "divisikit/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace divisikit::io {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    fail(Errc::ParseError, what);
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

const Json& array_field(const Json& j, const char* key)
{
    const Json& a = field(j, key);
    if (!a.is_array()) bad(std::string("field '") + key + "' must be an array");
    return a;
}

std::vector<Rational> rational_list(const Json& a)
{
    std::vector<Rational> v;
    for (const auto& x : a) v.push_back(rational_from_json(x));
    return v;
}

Json rational_list_json(const std::vector<Rational>& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

int square_dim(const Json& j)
{
    const Json& rows = array_field(j, "rows");
    int d = static_cast<int>(rows.size());
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<long>() != d) bad("'dim' does not match the row count");
    }
    if (d == 0) bad("empty matrix");
    for (const auto& r : rows)
        if (!r.is_array() || static_cast<int>(r.size()) != d) bad("matrix rows must form a square array");
    return d;
}

template <class M, class F>
Json matrix_json(const M& m, int d, F entry)
{
    Json rows = Json::array();
    for (int i = 0; i < d; ++i) {
        Json r = Json::array();
        for (int j = 0; j < d; ++j) r.push_back(entry(m(i, j)));
        rows.push_back(std::move(r));
    }
    Json out;
    out["dim"] = d;
    out["rows"] = std::move(rows);
    return out;
}

} // namespace

Json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out) bad("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

Json to_json(const Rational& q)
{
    return to_string(q);
}

Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    bad("expected a rational, got " + j.dump());
}

Json to_json(const FiniteDistribution& d)
{
    Json out;
    out["pmf"] = rational_list_json(d.probs());
    return out;
}

FiniteDistribution dist_from_json(const Json& j)
{
    return normalize_distribution(rational_list(array_field(j, "pmf"))).dist;
}

Json to_json(const RationalMatrix& m)
{
    return matrix_json(m, m.dim(), [](const Rational& x) { return to_json(x); });
}

RationalMatrix matrix_from_json(const Json& j)
{
    int d = square_dim(j);
    RationalMatrix m(d);
    const Json& rows = j["rows"];
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Json& x = rows[i][k];
            if (x.is_object()) {
                if (x.contains("im") && rational_from_json(x["im"]) != 0) bad("expected a real matrix");
                m(i, k) = rational_from_json(field(x, "re"));
            } else {
                m(i, k) = rational_from_json(x);
            }
        }
    return m;
}

std::string format_double(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

Json to_json(const NumericMatrix& m)
{
    return matrix_json(m, m.dim, [](double x) { return format_double(x); });
}

Json to_json(const ComplexRationalMatrix& m)
{
    return matrix_json(m, m.dim, [](const ComplexRational& z) {
        Json e;
        e["re"] = to_json(z.re);
        e["im"] = to_json(z.im);
        return e;
    });
}

Json to_json(const ComplexMatrix& m)
{
    return matrix_json(m, m.dim, [](Complex z) {
        Json e;
        e["re"] = format_double(z.real());
        e["im"] = format_double(z.imag());
        return e;
    });
}

ComplexRationalMatrix complex_matrix_from_json(const Json& j)
{
    int d = square_dim(j);
    ComplexRationalMatrix m(d);
    const Json& rows = j["rows"];
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Json& x = rows[i][k];
            if (x.is_object()) {
                m(i, k).re = x.contains("re") ? rational_from_json(x["re"]) : Rational(0);
                m(i, k).im = x.contains("im") ? rational_from_json(x["im"]) : Rational(0);
            } else {
                m(i, k).re = rational_from_json(x);
            }
        }
    return m;
}

Json to_json(const SubsetSumInstance& s)
{
    Json out;
    out["elements"] = rational_list_json(s.elements);
    out["variant"] = variant_name(s.variant);
    if (s.variant != SubsetVariant::SignedM) out["bound"] = to_json(s.bound);
    if (s.variant == SubsetVariant::M || s.variant == SubsetVariant::SignedM) out["m"] = s.m;
    if (s.variant == SubsetVariant::SignedM) out["window"] = Json::array({to_json(s.window_lo), to_json(s.window_hi)});
    return out;
}

SubsetSumInstance instance_from_json(const Json& j)
{
    SubsetSumInstance s;
    s.elements = rational_list(array_field(j, "elements"));
    s.variant = j.contains("variant") ? parse_variant(j["variant"].get<std::string>()) : SubsetVariant::Plain;
    if (j.contains("bound")) s.bound = rational_from_json(j["bound"]);
    else if (s.variant != SubsetVariant::SignedM) bad("missing field 'bound'");
    if (s.variant == SubsetVariant::M || s.variant == SubsetVariant::SignedM) {
        const Json& m = field(j, "m");
        if (!m.is_number_integer()) bad("'m' must be an integer");
        s.m = m.get<int>();
    }
    if (s.variant == SubsetVariant::SignedM) {
        const Json& w = array_field(j, "window");
        if (w.size() != 2) bad("'window' must have two entries");
        s.window_lo = rational_from_json(w[0]);
        s.window_hi = rational_from_json(w[1]);
    }
    return s;
}

PartitionInstance partition_from_json(const Json& j)
{
    PartitionInstance p;
    p.elements = rational_list(array_field(j, "elements"));
    for (const auto& x : p.elements)
        if (x <= 0) bad("partition elements must be positive");
    return p;
}

Json to_json(const SatInstance& s)
{
    Json out;
    out["n_v"] = s.n_v;
    Json cl = Json::array();
    for (const auto& c : s.clauses) {
        Json lits = Json::array();
        for (const auto& l : c) lits.push_back(l.positive ? l.var : -l.var);
        cl.push_back(std::move(lits));
    }
    out["clauses"] = std::move(cl);
    return out;
}

SatInstance sat_from_json(const Json& j)
{
    SatInstance s;
    const Json& nv = field(j, "n_v");
    if (!nv.is_number_integer()) bad("'n_v' must be an integer");
    s.n_v = nv.get<int>();
    for (const auto& c : array_field(j, "clauses")) {
        if (!c.is_array() || c.size() != 3) bad("each clause needs exactly three literals");
        Clause cl;
        for (int k = 0; k < 3; ++k) {
            if (!c[k].is_number_integer() || c[k].get<long>() == 0) bad("literals are nonzero integers");
            long v = c[k].get<long>();
            cl[k] = Literal{static_cast<int>(v < 0 ? -v : v), v > 0};
        }
        s.clauses.push_back(cl);
    }
    validate(s);
    return s;
}

} // namespace divisikit::io
