// Command-line front end for the Minkowski screening library; talks to the
// shared library exclusively through its C interface.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "minkowski/minkowski.h"

namespace {

constexpr int kExitClean = 0; // completed; nothing flagged
constexpr int kExitError = 1; // usage or runtime error
constexpr int kExitFound = 2; // exclusions found / validation or check failed

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void die(const std::string& context) {
    std::cerr << "error: " << context;
    const char* detail = mk_last_error();
    if (detail && *detail) std::cerr << ": " << detail;
    std::cerr << '\n';
    std::exit(kExitError);
}

struct StringDeleter {
    void operator()(char* p) const { mk_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DatasetDeleter {
    void operator()(mk_dataset* p) const { mk_dataset_free(p); }
};
using OwnedDataset = std::unique_ptr<mk_dataset, DatasetDeleter>;

struct ReportDeleter {
    void operator()(mk_scan_report* p) const { mk_scan_report_free(p); }
};
using OwnedReport = std::unique_ptr<mk_scan_report, ReportDeleter>;

struct SquareDeleter {
    void operator()(mk_square* p) const { mk_square_free(p); }
};
using OwnedSquare = std::unique_ptr<mk_square, SquareDeleter>;

struct CertificateDeleter {
    void operator()(mk_certificate* p) const { mk_certificate_free(p); }
};
using OwnedCertificate = std::unique_ptr<mk_certificate, CertificateDeleter>;

OwnedDataset load_dataset(const std::string& path) {
    mk_dataset* ds = nullptr;
    if (mk_dataset_open(path.c_str(), &ds) != MK_OK)
        die("loading dataset " + path);
    return OwnedDataset(ds);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot write " + path);
    out << text;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            die("cannot parse number '" + item + "'");
        }
    }
    return out;
}

/* "i,j,k;i,j,k;..." with 1-based entries. */
std::vector<int> parse_triple_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) {
        std::vector<double> nums = parse_csv_doubles(group);
        if (nums.size() != 3) die("triple '" + group + "' needs exactly i,j,k");
        for (double v : nums) {
            int n = static_cast<int>(v);
            if (n != v || n < 1) die("triple indices must be positive integers");
            out.push_back(n);
        }
    }
    return out;
}

struct ScanOptions {
    std::uint64_t seed = 0;
    int restarts = 0;
    int iterations = 0;
    double step = 0, delta = 0, invp_min = 0, margin = 0;
    bool grid_fallback = false;
    int parallel = 1;
    std::string triples_text;
    std::string report = "table";
    std::string output;

    ScanOptions() {
        mk_search_config cfg;
        mk_search_config_init(&cfg);
        seed = cfg.seed;
        restarts = cfg.restarts;
        iterations = cfg.iterations;
        step = cfg.step;
        delta = cfg.delta;
        invp_min = cfg.invp_min;
        margin = cfg.margin;
    }
};

void add_scan_flags(CLI::App* sub, ScanOptions& o) {
    sub->add_option("--seed", o.seed, "search seed")
        ->envname("MINKOWSKI_SEED")
        ->capture_default_str();
    sub->add_option("--restarts", o.restarts, "random restarts per triple")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--iterations", o.iterations, "descent iterations per restart")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--step", o.step, "gradient step size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--delta", o.delta, "finite-difference probe")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--invp-min", o.invp_min, "lower bound for the initial 1/p draw")
        ->capture_default_str();
    sub->add_option("--margin", o.margin, "certify only ratio < 1 - margin")
        ->capture_default_str();
    sub->add_flag("--grid-fallback", o.grid_fallback,
                  "coarse grid pass when descent finds nothing");
    sub->add_option("--parallel", o.parallel,
                    "worker threads (never changes any output byte)")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    sub->add_option("--triples", o.triples_text,
                    "restrict to 'i,j,k;i,j,k;...' (1-based)");
    sub->add_option("--report", o.report, "table, csv, or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", o.output, "write the report here instead of stdout");
}

mk_search_config make_config(const ScanOptions& o, std::vector<int>& triples) {
    mk_search_config cfg;
    mk_search_config_init(&cfg);
    cfg.seed = o.seed;
    cfg.restarts = o.restarts;
    cfg.iterations = o.iterations;
    cfg.step = o.step;
    cfg.delta = o.delta;
    cfg.invp_min = o.invp_min;
    cfg.margin = o.margin;
    cfg.grid_fallback = o.grid_fallback ? 1 : 0;
    cfg.threads = o.parallel;
    if (!o.triples_text.empty()) {
        triples = parse_triple_list(o.triples_text);
        cfg.triples = triples.data();
        cfg.triple_count = triples.size() / 3;
    }
    return cfg;
}

int emit_report(mk_scan_report* rep, const ScanOptions& o) {
    char* text = nullptr;
    if (mk_scan_report_render(rep, o.report.c_str(), &text) != MK_OK)
        die("rendering report");
    OwnedString owned(text);
    write_output(o.output, owned.get());
    return mk_scan_report_excluded(rep) > 0 ? kExitFound : kExitClean;
}

int run_validate(const std::string& input) {
    OwnedDataset ds = load_dataset(input);
    const std::size_t n = mk_dataset_size(ds.get());
    bool all_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        const mk_ring* r = mk_dataset_ring(ds.get(), i);
        int valid = 0;
        char* msg = nullptr;
        if (mk_ring_validate(r, &valid, &msg) != MK_OK)
            die(std::string("validating ") + mk_ring_label(r));
        OwnedString owned(msg);
        if (valid) {
            std::cout << mk_ring_label(r) << ": ok\n";
        } else {
            all_ok = false;
            std::cout << mk_ring_label(r) << ": INVALID  "
                      << (msg ? msg : "") << '\n';
        }
    }
    std::cout << (all_ok ? "all rings valid\n" : "invalid rings present\n");
    return all_ok ? kExitClean : kExitFound;
}

int run_dims(const std::string& input, const std::string& label) {
    OwnedDataset ds = load_dataset(input);
    const std::size_t n = mk_dataset_size(ds.get());
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        const mk_ring* r = mk_dataset_ring(ds.get(), i);
        if (!label.empty() && label != mk_ring_label(r)) continue;
        any = true;
        const int rank = mk_ring_rank(r);
        std::vector<double> dims(static_cast<std::size_t>(rank));
        double residual = 0.0;
        if (mk_ring_dimensions(r, dims.data(), &residual) != MK_OK)
            die(std::string("dimensions of ") + mk_ring_label(r));
        std::vector<int> dual(static_cast<std::size_t>(rank));
        if (mk_ring_dual(r, dual.data()) != MK_OK)
            die(std::string("dual of ") + mk_ring_label(r));
        std::cout << mk_ring_label(r) << ": rank=" << rank
                  << " max-mult=" << mk_ring_max_multiplicity(r) << '\n';
        std::cout << "  dims =";
        for (double d : dims) std::cout << ' ' << fmt17(d);
        std::cout << '\n';
        std::cout << "  residual = " << fmt17(residual) << '\n';
        std::cout << "  dual = (";
        for (int x = 0; x < rank; ++x)
            std::cout << (x ? ", " : "") << dual[static_cast<std::size_t>(x)];
        std::cout << ")\n";
    }
    if (!label.empty() && !any) die("no ring labeled '" + label + "'");
    return kExitClean;
}

int run_check(const std::string& input, const std::string& cert_path,
              const std::string& ring_override, double margin) {
    OwnedDataset ds = load_dataset(input);
    mk_certificate* raw = nullptr;
    if (mk_certificate_parse(read_text_file(cert_path).c_str(), &raw) != MK_OK)
        die("parsing certificate " + cert_path);
    OwnedCertificate cert(raw);

    const std::string label =
        ring_override.empty() ? mk_certificate_ring(cert.get()) : ring_override;
    const mk_ring* r = mk_dataset_find(ds.get(), label.c_str());
    if (!r) die("no ring labeled '" + label + "' in " + input);

    int i = 0, j = 0, k = 0;
    mk_certificate_triple(cert.get(), &i, &j, &k);
    const double inv_p = mk_certificate_inv_p(cert.get());
    std::vector<double> a(mk_certificate_rank(cert.get()));
    if (mk_certificate_weights(cert.get(), a.data(), a.size()) != MK_OK)
        die("reading certificate weights");

    double lhs = 0, rhs = 0, ratio = 0;
    if (mk_cat_sides(r, i, j, k, a.data(), 1.0 / inv_p, &lhs, &rhs, &ratio) != MK_OK)
        die("re-evaluating certificate point");

    int verified = 0;
    if (mk_certificate_verify(r, cert.get(), margin, &verified) != MK_OK)
        die("verifying certificate");

    std::cout << "certificate for " << label << ": triple=(" << i << ',' << j
              << ',' << k << ") 1/p=" << fmt17(inv_p) << '\n';
    std::cout << "  stored:     lhs=" << fmt17(mk_certificate_lhs(cert.get()))
              << " rhs=" << fmt17(mk_certificate_rhs(cert.get()))
              << " ratio=" << fmt17(mk_certificate_ratio(cert.get())) << '\n';
    std::cout << "  recomputed: lhs=" << fmt17(lhs) << " rhs=" << fmt17(rhs)
              << " ratio=" << fmt17(ratio) << '\n';
    std::cout << "  verdict: "
              << (verified ? "verified (ratio < 1 - margin)" : "NOT verified")
              << '\n';
    return verified ? kExitClean : kExitFound;
}

int run_search(const std::string& input, const std::string& label,
               ScanOptions& o) {
    OwnedDataset ds = load_dataset(input);
    const mk_ring* r = mk_dataset_find(ds.get(), label.c_str());
    if (!r) die("no ring labeled '" + label + "' in " + input);
    std::vector<int> triples;
    mk_search_config cfg = make_config(o, triples);
    mk_scan_report* rep = nullptr;
    if (mk_scan_ring(r, &cfg, &rep) != MK_OK) die("scanning " + label);
    OwnedReport owned(rep);
    return emit_report(rep, o);
}

int run_scan(const std::string& input, ScanOptions& o) {
    OwnedDataset ds = load_dataset(input);
    std::vector<int> triples;
    mk_search_config cfg = make_config(o, triples);
    mk_scan_report* rep = nullptr;
    if (mk_scan_dataset(ds.get(), &cfg, &rep) != MK_OK)
        die("scanning " + input);
    OwnedReport owned(rep);
    return emit_report(rep, o);
}

int run_cs_check(const std::string& input, const std::string& weights_text,
                 double inv_p, int row, bool variants) {
    mk_square* raw = nullptr;
    if (mk_square_open(input.c_str(), &raw) != MK_OK)
        die("loading square " + input);
    OwnedSquare sq(raw);

    int n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    mk_square_shape(sq.get(), &n00, &n01, &n10, &n11);
    std::cout << "square " << mk_square_label(sq.get()) << ": shape "
              << n00 << " -> (" << n01 << ", " << n10 << ") -> " << n11 << '\n';

    std::vector<double> v00(static_cast<std::size_t>(n00)),
        v01(static_cast<std::size_t>(n01)), v10(static_cast<std::size_t>(n10)),
        v11(static_cast<std::size_t>(n11));
    if (mk_square_traces(sq.get(), v00.data(), v01.data(), v10.data(),
                         v11.data()) != MK_OK)
        die("computing induced traces");
    auto show = [](const char* name, const std::vector<double>& v) {
        std::cout << "  " << name << " =";
        for (double x : v) std::cout << ' ' << fmt17(x);
        std::cout << '\n';
    };
    show("v11", v11);
    show("v10", v10);
    show("v01", v01);
    show("v00", v00);

    std::vector<double> a;
    if (weights_text.empty())
        a.assign(static_cast<std::size_t>(n11), 1.0);
    else
        a = parse_csv_doubles(weights_text);
    if (a.size() != static_cast<std::size_t>(n11))
        die("need exactly " + std::to_string(n11) + " weights");
    if (!(inv_p > 0.0 && inv_p <= 1.0)) die("--inv-p must lie in (0, 1]");

    bool any_violation = false;
    auto eval_rows = [&](mk_square* s, const std::vector<double>& w, int only_row) {
        int rows = 0;
        mk_square_shape(s, &rows, nullptr, nullptr, nullptr);
        for (int rr = 1; rr <= rows; ++rr) {
            if (only_row > 0 && rr != only_row) continue;
            double lhs = 0, rhs = 0, ratio = 0;
            if (mk_cs_sides(s, rr, w.data(), 1.0 / inv_p, &lhs, &rhs, &ratio) != MK_OK)
                die("evaluating row " + std::to_string(rr));
            std::cout << "  row " << rr << ": lhs=" << fmt17(lhs)
                      << " rhs=" << fmt17(rhs) << " ratio=" << fmt17(ratio);
            if (ratio < 1.0) {
                std::cout << "  [violation]";
                any_violation = true;
            }
            std::cout << '\n';
        }
    };
    if (row > n00) die("--row out of range");
    eval_rows(sq.get(), a, row);

    if (variants) {
        static const char* kNames[4] = {"original", "swap-mid", "swap-corners",
                                        "reverse"};
        for (int idx = 1; idx < 4; ++idx) {
            mk_square* vraw = nullptr;
            int applicable = 0;
            char* note = nullptr;
            if (mk_square_variant(sq.get(), idx, &vraw, &applicable, &note) != MK_OK)
                die(std::string("building variant ") + kNames[idx]);
            OwnedSquare variant(vraw);
            OwnedString note_owned(note);
            std::cout << "variant " << kNames[idx] << ": "
                      << (applicable ? "applicable" : "not applicable");
            if (note && *note) std::cout << "  (" << note << ')';
            std::cout << '\n';
            if (applicable) {
                int vn11 = 0;
                mk_square_shape(variant.get(), nullptr, nullptr, nullptr, &vn11);
                std::vector<double> ones(static_cast<std::size_t>(vn11), 1.0);
                eval_rows(variant.get(), ones, 0);
            }
        }
    }
    return any_violation ? kExitFound : kExitClean;
}

int run_verify_oracle(long long trials, std::uint64_t seed) {
    char* summary = nullptr;
    long long failures = 0;
    if (mk_oracle_verify(trials, seed, &summary, &failures) != MK_OK)
        die("running operator verification");
    OwnedString owned(summary);
    std::cout << (summary ? summary : "");
    return failures == 0 ? kExitClean : kExitFound;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("minkowski ") + mk_version() +
                 " - screening toolkit for fusion rings and commuting-square "
                 "data"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 clean, 1 error, 2 exclusions found / check failed");

    std::string input, label, cert_path, weights_text;
    double margin = 1e-9, inv_p = 0.5;
    int row = 0;
    bool variants = false;
    long long trials = 1000;
    std::uint64_t oracle_seed = 0;
    ScanOptions scan_opts, search_opts;

    CLI::App* validate = app.add_subcommand("validate", "check the ring axioms");
    validate->add_option("--input", input, "dataset (text or JSON)")->required();

    CLI::App* dims = app.add_subcommand(
        "dims", "Perron-Frobenius dimensions, residual, and duals");
    dims->add_option("--input", input, "dataset (text or JSON)")->required();
    dims->add_option("--ring", label, "only this ring");

    CLI::App* check = app.add_subcommand(
        "check", "re-verify an exclusion certificate against its ring");
    check->add_option("--input", input, "dataset (text or JSON)")->required();
    check->add_option("--certificate", cert_path, "certificate JSON")->required();
    check->add_option("--ring", label, "override the ring label");
    check->add_option("--margin", margin, "require ratio < 1 - margin")
        ->capture_default_str();

    CLI::App* search = app.add_subcommand(
        "search", "search one ring for a violation of the screening inequality");
    search->add_option("--input", input, "dataset (text or JSON)")->required();
    search->add_option("--ring", label, "ring label")->required();
    add_scan_flags(search, search_opts);

    CLI::App* scan = app.add_subcommand(
        "scan", "validate and search every ring of a dataset");
    scan->add_option("--input", input, "dataset (text or JSON)")->required();
    add_scan_flags(scan, scan_opts);

    CLI::App* cs = app.add_subcommand(
        "cs-check", "evaluate the inequality on a commuting-square datum");
    cs->add_option("--input", input, "square JSON")->required();
    cs->add_option("--weights", weights_text, "comma-separated weights (default: all 1)");
    cs->add_option("--inv-p", inv_p, "1/p in (0, 1]")->capture_default_str();
    cs->add_option("--row", row, "evaluate only this 1-based row (default: all)");
    cs->add_flag("--variants", variants, "also evaluate the transpose variants");

    CLI::App* oracle = app.add_subcommand(
        "verify-oracle", "randomized operator-level verification suites");
    oracle->add_option("--trials", trials, "trials per suite")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    oracle->add_option("--seed", oracle_seed, "suite seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (*validate) return run_validate(input);
    if (*dims) return run_dims(input, label);
    if (*check) return run_check(input, cert_path, label, margin);
    if (*search) return run_search(input, label, search_opts);
    if (*scan) return run_scan(input, scan_opts);
    if (*cs) return run_cs_check(input, weights_text, inv_p, row, variants);
    if (*oracle) return run_verify_oracle(trials, oracle_seed);
    return kExitError;
}
