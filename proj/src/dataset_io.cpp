#include "dataset_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace mink {

using json = nlohmann::ordered_json;

ParseError::ParseError(const std::string& msg, std::size_t line)
    : Error(errc::parse, line ? "line " + std::to_string(line) + ": " + msg : msg),
      line_(line) {}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/* mult[l][m][n] = display matrix l, row n, column m */
FusionRing ring_from_display(std::size_t s,
                             const std::vector<std::vector<int>>& rows,
                             std::string label) {
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t l = 0; l < s; ++l)
        for (std::size_t n = 0; n < s; ++n)
            for (std::size_t m = 0; m < s; ++m)
                mult[(l * s + m) * s + n] = rows[l * s + n][m];
    return FusionRing(s, std::move(mult), std::move(label));
}

} // namespace

Dataset parse_dataset_text(std::istream& in) {
    Dataset ds;
    std::string line;
    std::size_t line_no = 0;

    std::string label;
    std::size_t label_line = 0;
    std::size_t rank = 0;
    std::vector<std::vector<int>> rows;
    bool open = false;
    std::set<std::string> seen;

    auto flush = [&](std::size_t at_line) {
        if (!open) return;
        if (rows.empty())
            throw ParseError("ring '" + label + "' has no matrix data", label_line);
        if (rows.size() != rank * rank) {
            std::ostringstream os;
            os << "ring '" << label << "' has " << rows.size() << " matrix rows, expected "
               << rank << " matrices of " << rank << " rows (" << rank * rank << ")";
            throw ParseError(os.str(), at_line);
        }
        if (!seen.insert(label).second)
            throw ParseError("duplicate ring label '" + label + "'", label_line);
        ds.rings.push_back({ring_from_display(rank, rows, label), ""});
        rows.clear();
        rank = 0;
        open = false;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            flush(line_no);
            label = trim(t.substr(1));
            if (label.empty())
                throw ParseError("ring header with empty label", line_no);
            label_line = line_no;
            open = true;
            continue;
        }
        if (!open)
            throw ParseError("matrix data before the first '# label' header", line_no);

        std::vector<int> row;
        std::istringstream ls(t);
        std::string tok;
        while (ls >> tok) {
            int value = 0;
            const char* first = tok.data();
            const char* last = tok.data() + tok.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last)
                throw ParseError("'" + tok + "' is not a nonnegative integer", line_no);
            if (value < 0)
                throw ParseError("negative structure constant " + tok, line_no);
            row.push_back(value);
        }
        if (rank == 0) rank = row.size();
        if (row.size() != rank) {
            std::ostringstream os;
            os << "expected " << rank << " entries in matrix row, got " << row.size();
            throw ParseError(os.str(), line_no);
        }
        if (rows.size() == rank * rank) {
            std::ostringstream os;
            os << "ring '" << label << "' has more than " << rank * rank
               << " matrix rows; missing a '# label' header?";
            throw ParseError(os.str(), line_no);
        }
        rows.push_back(std::move(row));
    }
    flush(line_no + 1);
    return ds;
}

void serialize_dataset_text(const Dataset& ds, std::ostream& out) {
    for (const RingRecord& rec : ds.rings) {
        const FusionRing& ring = rec.ring;
        if (ring.label().find('\n') != std::string::npos ||
            ring.label().find('#') == 0)
            throw Error(errc::invalid_argument,
                        "ring label not representable in the text format");
        out << "# " << ring.label() << "\n";
        const std::size_t s = ring.rank();
        for (std::size_t l = 0; l < s; ++l) {
            for (std::size_t n = 0; n < s; ++n) {
                for (std::size_t m = 0; m < s; ++m) {
                    if (m) out << ' ';
                    out << ring.mult(l, m, n); // display convention
                }
                out << '\n';
            }
            out << '\n';
        }
    }
}

namespace {

[[noreturn]] void jfail(const std::string& path, const std::string& msg) {
    throw ParseError(path + ": " + msg);
}

const json& jfield(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) jfail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) jfail(path, std::string("missing field '") + key + "'");
    return *it;
}

int jint(const json& v, const std::string& path) {
    if (!v.is_number_integer()) jfail(path, "expected an integer");
    return v.get<int>();
}

double jnum(const json& v, const std::string& path) {
    if (!v.is_number()) jfail(path, "expected a number");
    return v.get<double>();
}

std::string jstr(const json& v, const std::string& path) {
    if (!v.is_string()) jfail(path, "expected a string");
    return v.get<std::string>();
}

RingRecord ring_from_json(const json& v, const std::string& path) {
    std::string label = jstr(jfield(v, path, "label"), path + "/label");
    const json& mats = jfield(v, path, "matrices");
    const std::string mpath = path + "/matrices";
    if (!mats.is_array() || mats.empty()) jfail(mpath, "expected a nonempty array");
    const std::size_t s = mats.size();
    if (auto it = v.find("rank"); it != v.end()) {
        int r = jint(*it, path + "/rank");
        if (r != static_cast<int>(s)) {
            std::ostringstream os;
            os << "rank field says " << r << " but there are " << s << " matrices";
            jfail(path, os.str());
        }
    }
    std::vector<std::vector<int>> rows;
    rows.reserve(s * s);
    for (std::size_t l = 0; l < s; ++l) {
        const json& mat = mats[l];
        const std::string lp = mpath + "/" + std::to_string(l);
        if (!mat.is_array() || mat.size() != s) {
            std::ostringstream os;
            os << "expected " << s << " rows";
            jfail(lp, os.str());
        }
        for (std::size_t n = 0; n < s; ++n) {
            const json& r = mat[n];
            const std::string rp = lp + "/" + std::to_string(n);
            if (!r.is_array() || r.size() != s) {
                std::ostringstream os;
                os << "expected " << s << " entries";
                jfail(rp, os.str());
            }
            std::vector<int> row(s);
            for (std::size_t m = 0; m < s; ++m) {
                int e = jint(r[m], rp + "/" + std::to_string(m));
                if (e < 0) jfail(rp + "/" + std::to_string(m), "negative entry");
                row[m] = e;
            }
            rows.push_back(std::move(row));
        }
    }
    std::string prov;
    if (auto it = v.find("provenance"); it != v.end())
        prov = jstr(*it, path + "/provenance");
    return {ring_from_display(s, rows, std::move(label)), std::move(prov)};
}

json certificate_json(const Certificate& c) {
    json j;
    j["ring"] = c.ring_label;
    j["triple"] = {c.triple[0] + 1, c.triple[1] + 1, c.triple[2] + 1};
    j["a"] = c.a;
    j["inv_p"] = c.inv_p;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["ratio"] = c.ratio;
    j["verified"] = c.verified;
    return j;
}

Certificate certificate_from(const json& v, const std::string& path) {
    Certificate c;
    c.ring_label = jstr(jfield(v, path, "ring"), path + "/ring");
    const json& t = jfield(v, path, "triple");
    if (!t.is_array() || t.size() != 3) jfail(path + "/triple", "expected [i,j,k]");
    for (int x = 0; x < 3; ++x) {
        int ix = jint(t[x], path + "/triple");
        if (ix < 1) jfail(path + "/triple", "indices are 1-based");
        c.triple[static_cast<std::size_t>(x)] = static_cast<std::size_t>(ix - 1);
    }
    const json& a = jfield(v, path, "a");
    if (!a.is_array()) jfail(path + "/a", "expected an array");
    for (std::size_t n = 0; n < a.size(); ++n)
        c.a.push_back(jnum(a[n], path + "/a/" + std::to_string(n)));
    c.inv_p = jnum(jfield(v, path, "inv_p"), path + "/inv_p");
    if (!(c.inv_p > 0.0 && c.inv_p <= 1.0)) jfail(path + "/inv_p", "must lie in (0,1]");
    c.lhs = jnum(jfield(v, path, "lhs"), path + "/lhs");
    c.rhs = jnum(jfield(v, path, "rhs"), path + "/rhs");
    c.ratio = jnum(jfield(v, path, "ratio"), path + "/ratio");
    const json& ver = jfield(v, path, "verified");
    if (!ver.is_boolean()) jfail(path + "/verified", "expected a boolean");
    c.verified = ver.get<bool>();
    return c;
}

json parse_json_or_throw(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("input is not valid JSON");
    return j;
}

} // namespace

Dataset parse_dataset_json(const std::string& text) {
    json j = parse_json_or_throw(text);
    Dataset ds;
    const json* rings = nullptr;
    std::string base;
    if (j.is_array()) {
        rings = &j;
    } else if (j.is_object()) {
        rings = &jfield(j, "", "rings");
        base = "/rings";
        if (!rings->is_array()) jfail(base, "expected an array");
    } else {
        jfail("", "expected an array of rings or an object with 'rings'");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rings->size(); ++i) {
        RingRecord rec = ring_from_json((*rings)[i], base + "/" + std::to_string(i));
        if (!seen.insert(rec.ring.label()).second)
            jfail(base + "/" + std::to_string(i),
                  "duplicate ring label '" + rec.ring.label() + "'");
        ds.rings.push_back(std::move(rec));
    }
    if (j.is_object()) {
        if (auto it = j.find("certificates"); it != j.end()) {
            if (!it->is_array()) jfail("/certificates", "expected an array");
            for (std::size_t i = 0; i < it->size(); ++i)
                ds.certificates.push_back(
                    certificate_from((*it)[i], "/certificates/" + std::to_string(i)));
        }
    }
    return ds;
}

std::string serialize_dataset_json(const Dataset& ds) {
    json j;
    j["rings"] = json::array();
    for (const RingRecord& rec : ds.rings) {
        const FusionRing& ring = rec.ring;
        const std::size_t s = ring.rank();
        json m = json::array();
        for (std::size_t l = 0; l < s; ++l) {
            json mat = json::array();
            for (std::size_t n = 0; n < s; ++n) {
                json row = json::array();
                for (std::size_t mm = 0; mm < s; ++mm)
                    row.push_back(ring.mult(l, mm, n)); // display convention
                mat.push_back(std::move(row));
            }
            m.push_back(std::move(mat));
        }
        json rj;
        rj["label"] = ring.label();
        rj["rank"] = s;
        rj["matrices"] = std::move(m);
        if (!rec.provenance.empty()) rj["provenance"] = rec.provenance;
        j["rings"].push_back(std::move(rj));
    }
    if (!ds.certificates.empty()) {
        j["certificates"] = json::array();
        for (const Certificate& c : ds.certificates)
            j["certificates"].push_back(certificate_json(c));
    }
    return j.dump(2) + "\n";
}

Dataset parse_dataset(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        if (c == '{' || c == '[') return parse_dataset_json(text);
        break;
    }
    std::istringstream in(text);
    return parse_dataset_text(in);
}

std::string certificate_to_json(const Certificate& cert) {
    return certificate_json(cert).dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
    return certificate_from(parse_json_or_throw(text), "");
}

CommutingSquareSpec parse_square_json(const std::string& text) {
    json j = parse_json_or_throw(text);
    if (!j.is_object()) jfail("", "expected an object");
    auto matrix = [&](const char* key) {
        const json& m = jfield(j, "", key);
        const std::string path = std::string("/") + key;
        if (!m.is_array() || m.empty()) jfail(path, "expected a nonempty array");
        const std::size_t rows = m.size();
        std::size_t cols = 0;
        Eigen::MatrixXi out;
        for (std::size_t r = 0; r < rows; ++r) {
            const json& row = m[r];
            const std::string rp = path + "/" + std::to_string(r);
            if (!row.is_array() || row.empty()) jfail(rp, "expected a nonempty array");
            if (r == 0) {
                cols = row.size();
                out.resize(static_cast<Eigen::Index>(rows),
                           static_cast<Eigen::Index>(cols));
            } else if (row.size() != cols) {
                jfail(rp, "ragged matrix rows");
            }
            for (std::size_t c = 0; c < cols; ++c)
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    jint(row[c], rp + "/" + std::to_string(c));
        }
        return out;
    };
    CommutingSquareSpec spec;
    spec.t00_01 = matrix("t00_01");
    spec.t01_11 = matrix("t01_11");
    spec.t00_10 = matrix("t00_10");
    spec.t10_11 = matrix("t10_11");
    const json& v = jfield(j, "", "v11");
    if (!v.is_array() || v.empty()) jfail("/v11", "expected a nonempty array");
    spec.v11.resize(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        spec.v11(static_cast<Eigen::Index>(i)) = jnum(v[i], "/v11/" + std::to_string(i));
    if (auto it = j.find("label"); it != j.end()) spec.label = jstr(*it, "/label");
    return spec;
}

std::string serialize_square_json(const CommutingSquareSpec& spec) {
    json j;
    auto put = [&](const char* key, const Eigen::MatrixXi& m) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        j[key] = std::move(rows);
    };
    put("t00_01", spec.t00_01);
    put("t01_11", spec.t01_11);
    put("t00_10", spec.t00_10);
    put("t10_11", spec.t10_11);
    j["v11"] = std::vector<double>(spec.v11.data(), spec.v11.data() + spec.v11.size());
    if (!spec.label.empty()) j["label"] = spec.label;
    return j.dump(2) + "\n";
}

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "table") return ReportFormat::table;
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw Error(errc::invalid_argument, "unknown report format '" + name + "'");
}

namespace {

std::string config_echo(const SearchConfig& c) {
    std::ostringstream os;
    os << "seed=" << c.seed << " restarts=" << c.restarts << " iterations="
       << c.iterations << " step=" << fmt17(c.step) << " delta=" << fmt17(c.delta)
       << " invp-min=" << fmt17(c.invp_min) << " margin="
       << fmt17(c.violation_margin);
    if (c.grid_fallback) os << " grid-fallback";
    if (!c.triples.empty()) {
        os << " triples=";
        for (std::size_t i = 0; i < c.triples.size(); ++i) {
            if (i) os << ';';
            os << c.triples[i][0] + 1 << ',' << c.triples[i][1] + 1 << ','
               << c.triples[i][2] + 1;
        }
    }
    return os.str();
}

std::string ratio_text(double v) {
    return std::isnan(v) ? std::string("-") : fmt17(v);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

void render_cells(std::ostringstream& os, const ScanTable& t, bool rates) {
    const std::string corner = rates ? "rate%" : "excl/total";
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head{"mult\\rank"};
    for (std::size_t ri = 0; ri < t.ranks.size(); ++ri)
        head.push_back(std::to_string(t.ranks[ri]));
    head.push_back("total");
    grid.push_back(head);

    auto cell_text = [&](int e, int n) {
        if (rates) {
            if (n == 0) return std::string("-");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", 100.0 * e / n);
            return std::string(buf);
        }
        return std::to_string(e) + "/" + std::to_string(n);
    };

    std::vector<int> col_e(t.ranks.size(), 0), col_n(t.ranks.size(), 0);
    for (std::size_t mi = 0; mi < t.mults.size(); ++mi) {
        std::vector<std::string> row{std::to_string(t.mults[mi])};
        int row_e = 0, row_n = 0;
        for (std::size_t ri = 0; ri < t.ranks.size(); ++ri) {
            const ScanTableCell& c = t.at(mi, ri);
            row.push_back(cell_text(c.excluded, c.total));
            row_e += c.excluded;
            row_n += c.total;
            col_e[ri] += c.excluded;
            col_n[ri] += c.total;
        }
        row.push_back(cell_text(row_e, row_n));
        grid.push_back(std::move(row));
    }
    std::vector<std::string> totals{"total"};
    int all_e = 0, all_n = 0;
    for (std::size_t ri = 0; ri < t.ranks.size(); ++ri) {
        totals.push_back(cell_text(col_e[ri], col_n[ri]));
        all_e += col_e[ri];
        all_n += col_n[ri];
    }
    totals.push_back(cell_text(all_e, all_n));
    grid.push_back(std::move(totals));

    std::vector<std::size_t> width(grid[0].size(), 0);
    for (const auto& row : grid)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    for (const auto& row : grid) {
        os << "  ";
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << std::string(width[c] - row[c].size(), ' ') << row[c];
            if (c + 1 < row.size()) os << "  ";
        }
        os << '\n';
    }
}

std::string render_table(const ScanReport& r) {
    std::ostringstream os;
    os << "scan: " << r.outcomes.size() << " ring(s), " << total_excluded(r)
       << " excluded\n";
    os << "config: " << config_echo(r.config) << "\n\n";
    for (const RingOutcome& o : r.outcomes) {
        os << o.label << ": " << ring_status_name(o.status) << "  rank=" << o.rank
           << " mult=" << o.max_mult;
        if (!std::isnan(o.best_ratio)) os << " ratio=" << fmt17(o.best_ratio);
        if (o.aborted_restarts > 0) os << " aborted-restarts=" << o.aborted_restarts;
        os << '\n';
        if (o.certificate) {
            const Certificate& c = *o.certificate;
            os << "  certificate: triple=(" << c.triple[0] + 1 << ','
               << c.triple[1] + 1 << ',' << c.triple[2] + 1 << ") 1/p="
               << fmt17(c.inv_p) << " lhs=" << fmt17(c.lhs) << " rhs="
               << fmt17(c.rhs) << " ratio=" << fmt17(c.ratio) << "\n  a=[";
            for (std::size_t n = 0; n < c.a.size(); ++n) {
                if (n) os << ", ";
                os << fmt17(c.a[n]);
            }
            os << "]\n";
        }
        if (!o.detail.empty()) os << "  note: " << o.detail << '\n';
    }
    if (!r.outcomes.empty()) {
        os << "\nexclusions by max multiplicity (rows) x rank (columns):\n";
        render_cells(os, r.table, /*rates=*/false);
        os << "\nexclusion rates (%):\n";
        render_cells(os, r.table, /*rates=*/true);
    }
    return os.str();
}

std::string render_csv(const ScanReport& r) {
    std::ostringstream os;
    os << "# config: " << config_echo(r.config) << '\n';
    os << "label,rank,max_mult,status,best_ratio,triple,inv_p,ratio,a\n";
    for (const RingOutcome& o : r.outcomes) {
        os << csv_quote(o.label) << ',' << o.rank << ',' << o.max_mult << ','
           << ring_status_name(o.status) << ',' << ratio_text(o.best_ratio) << ',';
        if (o.certificate) {
            const Certificate& c = *o.certificate;
            os << c.triple[0] + 1 << ';' << c.triple[1] + 1 << ';' << c.triple[2] + 1
               << ',' << fmt17(c.inv_p) << ',' << fmt17(c.ratio) << ',';
            std::string a;
            for (std::size_t n = 0; n < c.a.size(); ++n) {
                if (n) a += ';';
                a += fmt17(c.a[n]);
            }
            os << a;
        } else {
            os << ",,,";
        }
        os << '\n';
    }
    return os.str();
}

std::string render_json(const ScanReport& r) {
    json j;
    json cfg;
    cfg["seed"] = r.config.seed;
    cfg["restarts"] = r.config.restarts;
    cfg["iterations"] = r.config.iterations;
    cfg["step"] = r.config.step;
    cfg["delta"] = r.config.delta;
    cfg["invp_min"] = r.config.invp_min;
    cfg["violation_margin"] = r.config.violation_margin;
    cfg["grid_fallback"] = r.config.grid_fallback;
    if (!r.config.triples.empty()) {
        json ts = json::array();
        for (const auto& t : r.config.triples)
            ts.push_back({t[0] + 1, t[1] + 1, t[2] + 1});
        cfg["triples"] = std::move(ts);
    }
    j["config"] = std::move(cfg);
    j["summary"] = {{"rings", r.outcomes.size()}, {"excluded", total_excluded(r)}};
    json outs = json::array();
    for (const RingOutcome& o : r.outcomes) {
        json oj;
        oj["label"] = o.label;
        oj["rank"] = o.rank;
        oj["max_mult"] = o.max_mult;
        oj["status"] = ring_status_name(o.status);
        if (std::isnan(o.best_ratio))
            oj["best_ratio"] = nullptr;
        else
            oj["best_ratio"] = o.best_ratio;
        if (o.aborted_restarts > 0) oj["aborted_restarts"] = o.aborted_restarts;
        if (!o.detail.empty()) oj["detail"] = o.detail;
        if (o.certificate) oj["certificate"] = certificate_json(*o.certificate);
        outs.push_back(std::move(oj));
    }
    j["outcomes"] = std::move(outs);
    json tbl;
    tbl["mults"] = r.table.mults;
    tbl["ranks"] = r.table.ranks;
    json cells = json::array();
    for (std::size_t mi = 0; mi < r.table.mults.size(); ++mi) {
        json row = json::array();
        for (std::size_t ri = 0; ri < r.table.ranks.size(); ++ri) {
            const ScanTableCell& c = r.table.at(mi, ri);
            row.push_back({{"excluded", c.excluded}, {"total", c.total}});
        }
        cells.push_back(std::move(row));
    }
    tbl["cells"] = std::move(cells);
    j["table"] = std::move(tbl);
    return j.dump(2) + "\n";
}

} // namespace

std::string render_report(const ScanReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::table: return render_table(report);
        case ReportFormat::csv: return render_csv(report);
        case ReportFormat::json: return render_json(report);
    }
    throw Error(errc::internal, "unreachable report format");
}

} // namespace mink
