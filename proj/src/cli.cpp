#include "matargs/cli.hpp"

#include "matargs/linalg.hpp"
#include "matargs/partition.hpp"
#include "matargs/randmat.hpp"
#include "matargs/specfun.hpp"
#include "matargs/symfun.hpp"
#include "matargs/verify.hpp"
#include "matargs/zonal.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace matargs {

namespace {

OutputFormat to_format(const std::string& f) {
    if (f == "json") return OutputFormat::json;
    if (f == "csv") return OutputFormat::csv;
    return OutputFormat::text;
}

void add_format_option(CLI::App* cmd, std::string& fmt) {
    cmd->add_option("--format", fmt, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
}

std::string fmt_num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

std::string plain(const nlohmann::ordered_json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

// One flat record in the chosen format: a JSON object, a CSV header/row pair,
// or "key: value" lines.
void emit_record(std::ostream& out, OutputFormat fmt, const nlohmann::ordered_json& j) {
    if (fmt == OutputFormat::json) {
        out << j.dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        std::string header;
        std::string row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += it.key();
            row += csv_cell(plain(it.value()));
        }
        out << header << '\n' << row << '\n';
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        out << it.key() << ": " << plain(it.value()) << '\n';
}

// Scalar-producing subcommands print the bare number in text mode and the
// full record otherwise.
void emit_scalar(std::ostream& out, OutputFormat fmt, nlohmann::ordered_json meta,
                 double value) {
    if (fmt == OutputFormat::text) {
        out << fmt_num(value) << '\n';
        return;
    }
    meta["value"] = value;
    emit_record(out, fmt, meta);
}

std::vector<double> parse_csv_doubles(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(flag) + ": cannot parse number '" + token +
                                        "'");
        }
        if (used != token.size())
            throw std::invalid_argument(std::string(flag) + ": cannot parse number '" + token +
                                        "'");
        values.push_back(v);
    }
    if (values.empty())
        throw std::invalid_argument(std::string(flag) +
                                    ": needs a comma-separated list of numbers");
    return values;
}

Partition parse_partition_flag(const std::string& text, const char* flag) {
    try {
        return Partition::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string(flag) + ": " + e.what());
    }
}

// Matrix specifiers: "identity", "diag:a,b,...", "random", or a JSON file
// path. Each "random" consumes draws from the shared fixture stream, so two
// random matrices in one invocation differ but replay exactly under the seed.
SymMatrix parse_sym_matrix(const std::string& spec, int m, RngStream& fixtures,
                           const char* flag) {
    if (spec == "identity") return SymMatrix::identity(m);
    if (spec.rfind("diag:", 0) == 0) {
        const auto d = parse_csv_doubles(spec.substr(5), flag);
        if (static_cast<int>(d.size()) != m)
            throw std::invalid_argument(std::string(flag) + ": diag needs exactly m entries");
        return SymMatrix::diag(d);
    }
    if (spec == "random") return random_spd(fixtures, m, 10.0).matrix();
    std::ifstream in(spec);
    if (!in)
        throw std::invalid_argument(std::string(flag) + ": cannot open matrix file '" + spec +
                                    "'");
    SymMatrix a = load_matrix_json(in);
    if (a.dim() != m)
        throw std::invalid_argument(std::string(flag) + ": matrix dimension does not match m");
    return a;
}

SPDMatrix parse_spd_matrix(const std::string& spec, int m, RngStream& fixtures,
                           const char* flag) {
    if (spec == "random") return random_spd(fixtures, m, 10.0);
    const SymMatrix a = parse_sym_matrix(spec, m, fixtures, flag);
    try {
        return cholesky(a);
    } catch (const std::domain_error&) {
        throw std::domain_error(std::string(flag) + ": requires a positive definite matrix");
    }
}

int run_selftest(std::ostream& out) {
    int failures = 0;
    int total = 0;
    const auto check = [&](const char* name, const std::function<bool()>& fn) {
        ++total;
        bool ok = false;
        std::string note;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            note = e.what();
        }
        if (ok) {
            out << "[ok]   " << name << '\n';
        } else {
            out << "[FAIL] " << name << (note.empty() ? "" : " (" + note + ")") << '\n';
            ++failures;
        }
    };
    const auto close = [](double x, double y, double tol) {
        return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
    };

    const ZonalTable table = ZonalTable::build(6);

    check("partition enumeration counts", [&] {
        const int counts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
        for (int k = 0; k <= 10; ++k)
            if (static_cast<int>(enumerate_partitions(k, std::max(k, 1)).size()) != counts[k])
                return false;
        return enumerate_partitions(4, 2).size() == std::size_t{3};
    });

    check("zonal table small-degree coefficients", [&] {
        const Partition two({2});
        const Partition one_one({1, 1});
        if (!(table.poly(two).coeff(two) == Rational(1))) return false;
        if (!(table.poly(two).coeff(one_one) == Rational(2, 3))) return false;
        if (!(table.poly(one_one).coeff(one_one) == Rational(4, 3))) return false;
        if (!(table.d_kappa(Partition({2, 1})) == Rational(12, 5))) return false;
        return table.d_kappa(Partition({2, 2})) == Rational(16, 5);
    });

    check("zonal values at the identity", [&] {
        const std::vector<double> ones2{1.0, 1.0};
        if (!close(eval_eigs(table, Partition({2, 1}), ones2), 4.8, 1e-12)) return false;
        const std::vector<double> ones3{1.0, 1.0, 1.0};
        double s = 0;
        for (const auto& kp : table.degree_partitions(3)) s += eval_eigs(table, kp, ones3);
        return close(s, 27.0, 1e-12);
    });

    check("dual partition identity", [&] {
        RngStream rng(31, 0);
        for (int m = 2; m <= 3; ++m)
            for (int k = 1; k <= 3; ++k)
                for (const auto& kp : table.degree_partitions(k)) {
                    if (kp.length() > m) continue;
                    for (int rep = 0; rep < 5; ++rep) {
                        const SPDMatrix a = random_spd(rng, m, 10.0);
                        if (std::abs(dual_identity_residual(table, kp, kp.part(1), a)) > 1e-8)
                            return false;
                    }
                }
        return true;
    });

    check("gamma function and product forms", [&] {
        const double pi = std::acos(-1.0);
        if (!close(gamma_fn(5.0), 24.0, 1e-13)) return false;
        if (!close(gamma_fn(0.5), std::sqrt(pi), 1e-13)) return false;
        if (!close(multivariate_gamma(3.0, 2), 1.5 * pi, 1e-13)) return false;
        for (int m = 1; m <= 6; ++m)
            for (int j = 0; j < 20; ++j) {
                const double a = (m - 1) / 2.0 + 0.3 + 0.35 * j;
                if (!close(multivariate_gamma(a, m, GammaForm::ascending),
                           multivariate_gamma(a, m, GammaForm::descending), 1e-13))
                    return false;
            }
        return true;
    });

    check("pochhammer identities", [&] {
        RngStream rng(11, 0);
        for (int c = 0; c < 200; ++c) {
            const double x = 6.0 * rng.next_uniform() - 3.0;
            const int q = static_cast<int>(rng.next_u64() % 7);
            const double neg_scale = std::max(1.0, std::abs(pochhammer_rising(-x, q)));
            if (std::abs(neg_pochhammer_identity_residual(x, q)) > 1e-12 * neg_scale)
                return false;
            const double xp = 0.2 + 3.8 * rng.next_uniform();
            if (!close(pochhammer_rising(xp, q), gamma_fn(xp + q) / gamma_fn(xp), 1e-12))
                return false;
            const double sign = q % 2 ? -1.0 : 1.0;
            if (!close(pochhammer_falling(x, q), sign * pochhammer_rising(-x, q), 1e-12))
                return false;
            const int qq = std::max(q, 1);
            std::vector<int> shifts(static_cast<std::size_t>(qq));
            for (auto& v : shifts) v = static_cast<int>(rng.next_u64() % 5);
            const auto lin = [](double t) { return t + 0.25; };
            const auto res = reindex_product_residuals(lin, x, qq, shifts, 1);
            double scale1 = 1.0;
            double scale2 = 1.0;
            for (int i = 1; i <= qq; ++i) {
                scale1 *= std::max(1.0, std::abs(lin(x + i - 1)));
                scale2 *= std::max(1.0, std::abs(lin(x + shifts[i - 1] - qq + i)));
            }
            if (std::abs(res.first) > 1e-12 * scale1) return false;
            if (std::abs(res.second) > 1e-12 * scale2) return false;
        }
        return true;
    });

    check("normalizing constant variants", [&] {
        const Partition two({2});
        if (!close(theorem1_denominator(4.0, 2, two, ConstantVariant::corrected), 3.75, 1e-13))
            return false;
        if (!close(theorem1_denominator(4.0, 2, two, ConstantVariant::muirhead_incorrect), 6.0,
                   1e-13))
            return false;
        if (theorem1_variants_coincide(two, 2)) return false;
        if (!theorem1_variants_coincide(Partition({1, 1}), 2)) return false;
        if (!theorem1_variants_coincide(Partition({1}), 1)) return false;
        if (theorem1_variants_coincide(Partition({2, 1}), 3)) return false;
        if (!theorem1_variants_coincide(Partition({1, 1, 1}), 3)) return false;
        return theorem1_variants_coincide(Partition(), 4);
    });

    check("generalized pochhammer reduction", [&] {
        for (int q = 0; q <= 6; ++q) {
            const Partition kp = q ? Partition({q}) : Partition();
            if (gen_pochhammer(1.7, kp, 1) != pochhammer_rising(1.7, q)) return false;
        }
        return close(gen_pochhammer(2.0, Partition({1, 1}), 2), 3.0, 1e-13);
    });

    check("gamma integral quadrature", [&] {
        const auto [q1, p1] = verify_gamma_integral(1, 2.0, 160);
        if (std::abs(q1 - 1.0) > 1e-8 || std::abs(p1 - 1.0) > 1e-13) return false;
        for (const double a : {1.6, 2.0, 3.0, 3.5}) {
            const auto [q2, p2] = verify_gamma_integral(2, a, 160);
            if (std::abs(q2 - p2) > 1e-6 * std::abs(p2)) return false;
        }
        return true;
    });

    check("cholesky, inverse, determinant", [&] {
        const SymMatrix a(2, {4, 2, 2, 5});
        const SPDMatrix f = cholesky(a);
        if (!close(f.t(0, 0), 2.0, 1e-14) || !close(f.t(0, 1), 1.0, 1e-14) ||
            !close(f.t(1, 1), 2.0, 1e-14) || f.t(1, 0) != 0.0)
            return false;
        if (!close(f.determinant(), 16.0, 1e-13)) return false;
        const SymMatrix inv = f.inverse();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0;
                for (int t = 0; t < 2; ++t) s += a(i, t) * inv(t, j);
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) return false;
            }
        try {
            cholesky(SymMatrix(2, {1, 2, 2, 1}));
            return false;
        } catch (const std::domain_error&) {
            return true;
        }
    });

    check("eigenvalues, minors, product eigenvalues", [&] {
        const std::vector<double> d{3.0, 1.0, 2.0};
        const auto ev = sym_eigs(SymMatrix::diag(d));
        if (!close(ev[0], 3.0, 1e-13) || !close(ev[1], 2.0, 1e-13) || !close(ev[2], 1.0, 1e-13))
            return false;
        const std::vector<double> d2{1.0, 2.0, 3.0};
        if (!close(elementary_symmetric(SymMatrix::diag(d2), 2), 11.0, 1e-12)) return false;
        const SymMatrix a(2, {4, 2, 2, 5});
        if (!close(leading_principal_minor(a, 1), 4.0, 1e-13)) return false;
        if (!close(leading_principal_minor(a, 2), 16.0, 1e-13)) return false;
        return sym_eigs(a) == product_eigs(cholesky(a), SymMatrix::identity(2));
    });

    check("rng stream determinism", [&] {
        RngStream r1(99, 5);
        RngStream r2(99, 5);
        RngStream r3(99, 6);
        bool streams_differ = false;
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t v = r1.next_u64();
            if (v != r2.next_u64()) return false;
            if (v != r3.next_u64()) streams_differ = true;
        }
        if (!streams_differ) return false;
        RngStream u(3, 1);
        for (int i = 0; i < 1000; ++i) {
            const double v = u.next_uniform();
            if (!(v > 0.0 && v < 1.0)) return false;
        }
        return true;
    });

    check("sampler moments", [&] {
        RngStream r(2024, 1);
        ChunkStats nm;
        ChunkStats gm;
        for (int i = 0; i < 20000; ++i) nm.add(r.next_normal());
        for (int i = 0; i < 20000; ++i) gm.add(r.next_gamma(2.5));
        const double nvar = nm.m2 / static_cast<double>(nm.n - 1);
        const double gvar = gm.m2 / static_cast<double>(gm.n - 1);
        return std::abs(nm.mean) < 0.05 && std::abs(nvar - 1.0) < 0.1 &&
               std::abs(gm.mean - 2.5) < 0.15 && std::abs(gvar - 2.5) < 0.5;
    });

    check("wishart mean", [&] {
        const SymMatrix s(2, {1.0, 0.3, 0.3, 0.5});
        const WishartSpec spec{2, 7.0, cholesky(s)};
        double acc[4] = {0, 0, 0, 0};
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            RngStream r(77, static_cast<std::uint64_t>(i) + 1);
            const SPDMatrix x = wishart(r, spec);
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) acc[p * 2 + q] += x.matrix()(p, q);
        }
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                const double want = 7.0 * s(p, q);
                if (std::abs(acc[p * 2 + q] / n - want) > 0.12 * std::max(1.0, std::abs(want)))
                    return false;
            }
        return true;
    });

    check("accumulator and merge invariance", [&] {
        const auto constant = mc_accumulate({1.0, 1.0, 1.0, 1.0});
        if (constant.first != 1.0 || constant.second != 0.0) return false;
        const auto pair = mc_accumulate({0.0, 2.0});
        if (!close(pair.first, 1.0, 1e-15) || !close(pair.second, 1.0, 1e-15)) return false;
        RngStream r(8, 1);
        std::vector<double> xs(1000);
        for (auto& v : xs) v = r.next_normal();
        ChunkStats whole;
        for (const double v : xs) whole.add(v);
        for (const std::size_t cut : {std::size_t{1}, std::size_t{17}, std::size_t{999}}) {
            ChunkStats lo;
            ChunkStats hi;
            for (std::size_t i = 0; i < xs.size(); ++i) (i < cut ? lo : hi).add(xs[i]);
            const ChunkStats merged = ChunkStats::merge(lo, hi);
            if (merged.n != whole.n) return false;
            if (!close(merged.mean, whole.mean, 1e-14)) return false;
            if (!close(merged.m2, whole.m2, 1e-12)) return false;
        }
        return true;
    });

    check("closed-form expectation oracles", [&] {
        const SPDMatrix i2 = cholesky(SymMatrix::identity(2));
        if (!close(theorem1_expected(table, 2, 3.0, Partition({1}), i2,
                                     ConstantVariant::corrected),
                   4.0 / 3.0, 1e-12))
            return false;
        const std::vector<double> zd{2.3};
        const SPDMatrix z1 = cholesky(SymMatrix::diag(zd));
        if (!close(theorem1_expected(table, 1, 2.0, Partition({1}), z1,
                                     ConstantVariant::corrected),
                   2.3, 1e-12))
            return false;
        const std::vector<double> vd{1.0, 2.0};
        const std::vector<double> td{1.0, -1.0};
        return close(corollary1_expected(table, 2, 4.0, Partition({1}),
                                         cholesky(SymMatrix::diag(vd)), SymMatrix::diag(td),
                                         ConstantVariant::corrected),
                     -0.4, 1e-12);
    });

    check("coefficient extraction", [&] {
        const SPDMatrix y = cholesky(SymMatrix(2, {4, 2, 2, 5}));
        const CoeffReport rep = verify_lemma2(table, 2, Partition({2}), y, 4);
        return rep.verdict == "pass" && rep.rel_error <= 1e-10 &&
               rep.control_status == "mismatch";
    });

    out << (failures == 0 ? "selftest: ok" : "selftest: FAIL") << " (" << total << " checks, "
        << failures << " failures)\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zonal polynomials, matrix-argument special functions, and Monte Carlo "
                 "verification of the corrected Laplace-integral constants"};
    app.name("matargs");
    app.require_subcommand(1);
    int exit_code = 0;

    struct {
        int k = 0;
        int max_parts = 0;
        std::string format = "text";
    } po;
    auto* c_partitions = app.add_subcommand("partitions", "List the partitions of a weight");
    c_partitions->add_option("--k", po.k, "Partition weight")->required()->check(CLI::Range(0, 60));
    c_partitions->add_option("--max-parts", po.max_parts, "Cap on the number of parts (default: k)")
        ->check(CLI::Range(1, 60));
    add_format_option(c_partitions, po.format);
    c_partitions->callback([&] {
        const int max_parts = po.max_parts > 0 ? po.max_parts : std::max(po.k, 1);
        const auto list = enumerate_partitions(po.k, max_parts);
        const OutputFormat fmt = to_format(po.format);
        if (fmt == OutputFormat::json) {
            nlohmann::ordered_json j;
            j["k"] = po.k;
            j["max_parts"] = max_parts;
            j["count"] = list.size();
            auto arr = nlohmann::ordered_json::array();
            for (const auto& p : list) arr.push_back(p.str());
            j["partitions"] = std::move(arr);
            out << j.dump(2) << '\n';
        } else if (fmt == OutputFormat::csv) {
            out << "partition\n";
            for (const auto& p : list) out << csv_cell(p.str()) << '\n';
        } else {
            for (const auto& p : list) out << p.str() << '\n';
        }
    });

    struct {
        int degree = 2;
        std::string format = "json";
    } zt;
    auto* c_table = app.add_subcommand("zonal-table",
                                       "Exact coefficient table in the monomial basis");
    c_table->add_option("--degree", zt.degree, "Largest degree in the table")
        ->required()
        ->check(CLI::Range(1, 12));
    add_format_option(c_table, zt.format);
    c_table->callback([&] {
        const ZonalTable table = ZonalTable::build(zt.degree);
        const OutputFormat fmt = to_format(zt.format);
        if (fmt == OutputFormat::json) {
            table.write_json(out);
        } else if (fmt == OutputFormat::csv) {
            table.write_csv(out);
        } else {
            for (int k = 0; k <= zt.degree; ++k)
                for (const auto& kp : table.degree_partitions(k)) {
                    out << "C[" << kp.str() << "] =";
                    const auto& terms = table.poly(kp).terms();
                    bool first = true;
                    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
                        out << (first ? " " : " + ");
                        if (!(it->second == Rational(1))) out << it->second.str() << ' ';
                        out << "m[" << it->first.str() << ']';
                        first = false;
                    }
                    out << '\n';
                }
        }
    });

    struct {
        std::string kappa;
        std::string eigs;
        std::string format = "text";
    } ze;
    auto* c_eval = app.add_subcommand("zonal-eval", "Evaluate C_kappa at given eigenvalues");
    c_eval->add_option("--kappa", ze.kappa, "Partition, e.g. 2,1")->required();
    c_eval->add_option("--eigs", ze.eigs, "Comma-separated eigenvalues")->required();
    add_format_option(c_eval, ze.format);
    c_eval->callback([&] {
        const Partition kp = parse_partition_flag(ze.kappa, "--kappa");
        const auto eigs = parse_csv_doubles(ze.eigs, "--eigs");
        const ZonalTable table = ZonalTable::build(std::max(kp.weight(), 1));
        nlohmann::ordered_json meta;
        meta["kappa"] = kp.str();
        meta["eigs"] = eigs;
        emit_scalar(out, to_format(ze.format), std::move(meta), eval_eigs(table, kp, eigs));
    });

    struct {
        int m = 1;
        double a = 0;
        std::string form = "ascending";
        bool log = false;
        std::string format = "text";
    } gm;
    auto* c_gamma = app.add_subcommand("gamma-mv", "Multivariate gamma function");
    c_gamma->add_option("--m", gm.m, "Dimension")->required()->check(CLI::Range(1, 64));
    c_gamma->add_option("--a", gm.a, "Argument; requires a > (m-1)/2")->required();
    c_gamma->add_option("--form", gm.form, "Product form")
        ->check(CLI::IsMember({"ascending", "descending"}))
        ->capture_default_str();
    c_gamma->add_flag("--log", gm.log, "Return the logarithm");
    add_format_option(c_gamma, gm.format);
    c_gamma->callback([&] {
        const GammaForm form =
            gm.form == "descending" ? GammaForm::descending : GammaForm::ascending;
        const double value = gm.log ? multivariate_log_gamma(gm.a, gm.m, form)
                                    : multivariate_gamma(gm.a, gm.m, form);
        nlohmann::ordered_json meta;
        meta["m"] = gm.m;
        meta["a"] = gm.a;
        meta["form"] = gm.form;
        meta["log"] = gm.log;
        emit_scalar(out, to_format(gm.format), std::move(meta), value);
    });

    struct {
        double x = 0;
        int q = 0;
        bool falling = false;
        std::string format = "text";
    } ph;
    auto* c_poch = app.add_subcommand("pochhammer", "Rising or falling factorial");
    c_poch->add_option("--x", ph.x, "Base")->required();
    c_poch->add_option("--q", ph.q, "Number of factors")->required()->check(CLI::Range(0, 1000));
    c_poch->add_flag("--falling", ph.falling, "Falling instead of rising");
    add_format_option(c_poch, ph.format);
    c_poch->callback([&] {
        const double value =
            ph.falling ? pochhammer_falling(ph.x, ph.q) : pochhammer_rising(ph.x, ph.q);
        nlohmann::ordered_json meta;
        meta["x"] = ph.x;
        meta["q"] = ph.q;
        meta["kind"] = ph.falling ? "falling" : "rising";
        emit_scalar(out, to_format(ph.format), std::move(meta), value);
    });

    struct {
        double b = 0;
        std::string kappa;
        int m = 1;
        std::string format = "text";
    } gp;
    auto* c_genp = app.add_subcommand("gen-pochhammer",
                                      "Partition-indexed generalized Pochhammer symbol");
    c_genp->add_option("--b", gp.b, "Base")->required();
    c_genp->add_option("--kappa", gp.kappa, "Partition")->required();
    c_genp->add_option("--m", gp.m, "Dimension")->required()->check(CLI::Range(1, 64));
    add_format_option(c_genp, gp.format);
    c_genp->callback([&] {
        const Partition kp = parse_partition_flag(gp.kappa, "--kappa");
        nlohmann::ordered_json meta;
        meta["b"] = gp.b;
        meta["kappa"] = kp.str();
        meta["m"] = gp.m;
        emit_scalar(out, to_format(gp.format), std::move(meta), gen_pochhammer(gp.b, kp, gp.m));
    });

    struct {
        double a = 0;
        int m = 1;
        std::string kappa;
        std::string variant = "corrected";
        std::string format = "text";
    } ct;
    auto* c_const =
        app.add_subcommand("constant", "Normalizing constant of the Laplace integral identity");
    c_const->add_option("--a", ct.a, "Exponent; requires a > k_1 + (m-1)/2")->required();
    c_const->add_option("--m", ct.m, "Dimension")->required()->check(CLI::Range(1, 64));
    c_const->add_option("--kappa", ct.kappa, "Partition")->required();
    c_const->add_option("--variant", ct.variant, "Denominator variant")
        ->check(CLI::IsMember({"corrected", "incorrect"}))
        ->capture_default_str();
    add_format_option(c_const, ct.format);
    c_const->callback([&] {
        const Partition kp = parse_partition_flag(ct.kappa, "--kappa");
        const ConstantVariant variant = ct.variant == "incorrect"
                                            ? ConstantVariant::muirhead_incorrect
                                            : ConstantVariant::corrected;
        nlohmann::ordered_json meta;
        meta["a"] = ct.a;
        meta["m"] = ct.m;
        meta["kappa"] = kp.str();
        meta["variant"] = ct.variant;
        emit_scalar(out, to_format(ct.format), std::move(meta),
                    theorem1_constant(ct.a, ct.m, kp, variant));
    });

    struct MCFlags {
        int m = 1;
        double a = 0;
        std::string kappa;
        long long samples = 200000;
        std::uint64_t seed = 42;
        long long chunk_size = 4096;
        int threads = 0;
        double z_pass = 4.0;
        double z_reject = 10.0;
        std::string format = "json";
    };
    const auto add_mc_options = [](CLI::App* cmd, MCFlags& f) {
        cmd->add_option("--m", f.m, "Dimension")->required()->check(CLI::Range(1, 16));
        cmd->add_option("--a", f.a, "Exponent; requires a > k_1 + (m-1)/2")->required();
        cmd->add_option("--kappa", f.kappa, "Partition")->required();
        cmd->add_option("--samples", f.samples, "Monte Carlo sample count")
            ->check(CLI::Range(2ll, 2000000000ll))
            ->capture_default_str();
        cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
        cmd->add_option("--chunk-size", f.chunk_size, "Samples per accumulation chunk")
            ->check(CLI::Range(1ll, 100000000ll))
            ->capture_default_str();
        cmd->add_option("--threads", f.threads,
                        "Worker threads (0: MATARGS_THREADS or all cores)")
            ->check(CLI::Range(0, 1024))
            ->capture_default_str();
        cmd->add_option("--z-pass", f.z_pass, "Acceptance threshold on |z_correct|")
            ->capture_default_str();
        cmd->add_option("--z-reject", f.z_reject, "Refutation threshold on |z_incorrect|")
            ->capture_default_str();
        add_format_option(cmd, f.format);
    };

    MCFlags vt;
    std::string vt_z = "identity";
    auto* c_vt = app.add_subcommand("verify-theorem1",
                                    "Monte Carlo check of the one-matrix integral identity");
    add_mc_options(c_vt, vt);
    c_vt->add_option("--z", vt_z, "Matrix: identity | diag:... | random | file.json")
        ->capture_default_str();
    c_vt->callback([&] {
        const Partition kp = parse_partition_flag(vt.kappa, "--kappa");
        RngStream fixtures(vt.seed, 0);
        const SPDMatrix z = parse_spd_matrix(vt_z, vt.m, fixtures, "--z");
        const ZonalTable table = ZonalTable::build(std::max(kp.weight(), 1));
        MCOptions opts;
        opts.chunk_size = vt.chunk_size;
        opts.threads = vt.threads;
        opts.z_pass = vt.z_pass;
        opts.z_reject = vt.z_reject;
        opts.z_desc = vt_z;
        const MCReport rep =
            verify_theorem1(table, vt.m, vt.a, kp, z, vt.samples, vt.seed, opts);
        rep.write(out, to_format(vt.format));
        exit_code = rep.exit_code();
    });

    MCFlags vc;
    std::string vc_v = "identity";
    std::string vc_t = "identity";
    auto* c_vc = app.add_subcommand("verify-corollary1",
                                    "Monte Carlo check of the two-matrix integral identity");
    add_mc_options(c_vc, vc);
    c_vc->add_option("--v", vc_v, "Positive definite matrix: identity | diag:... | random | file.json")
        ->capture_default_str();
    c_vc->add_option("--t", vc_t, "Symmetric matrix: identity | diag:... | random | file.json")
        ->capture_default_str();
    c_vc->callback([&] {
        const Partition kp = parse_partition_flag(vc.kappa, "--kappa");
        RngStream fixtures(vc.seed, 0);
        const SPDMatrix v = parse_spd_matrix(vc_v, vc.m, fixtures, "--v");
        const SymMatrix t = parse_sym_matrix(vc_t, vc.m, fixtures, "--t");
        const ZonalTable table = ZonalTable::build(std::max(kp.weight(), 1));
        MCOptions opts;
        opts.chunk_size = vc.chunk_size;
        opts.threads = vc.threads;
        opts.z_pass = vc.z_pass;
        opts.z_reject = vc.z_reject;
        opts.v_desc = vc_v;
        opts.t_desc = vc_t;
        const MCReport rep =
            verify_corollary1(table, vc.m, vc.a, kp, v, t, vc.samples, vc.seed, opts);
        rep.write(out, to_format(vc.format));
        exit_code = rep.exit_code();
    });

    struct {
        int m = 2;
        std::string kappa;
        std::string y = "random";
        int grid_size = 0;
        double tolerance = 1e-8;
        double control_tol = 1e-6;
        std::uint64_t seed = 42;
        std::string format = "json";
    } vl;
    auto* c_vl = app.add_subcommand("verify-lemma2",
                                    "Exact coefficient extraction against the minor product");
    c_vl->add_option("--m", vl.m, "Dimension")->required()->check(CLI::Range(1, 12));
    c_vl->add_option("--kappa", vl.kappa, "Partition")->required();
    c_vl->add_option("--y", vl.y, "Matrix: identity | diag:... | random | file.json")
        ->capture_default_str();
    c_vl->add_option("--grid-size", vl.grid_size,
                     "Interpolation nodes per axis (default: |kappa| + 1)")
        ->check(CLI::Range(0, 64));
    c_vl->add_option("--tolerance", vl.tolerance, "Relative error bound")->capture_default_str();
    c_vl->add_option("--control-tol", vl.control_tol,
                     "Relative gap treated as a control match")
        ->capture_default_str();
    c_vl->add_option("--seed", vl.seed, "RNG seed for --y random")->capture_default_str();
    add_format_option(c_vl, vl.format);
    c_vl->callback([&] {
        const Partition kp = parse_partition_flag(vl.kappa, "--kappa");
        RngStream fixtures(vl.seed, 0);
        const SPDMatrix y = parse_spd_matrix(vl.y, vl.m, fixtures, "--y");
        const int grid = vl.grid_size > 0 ? vl.grid_size : kp.weight() + 1;
        const ZonalTable table = ZonalTable::build(std::max(kp.weight(), 1));
        Lemma2Options opts;
        opts.tolerance = vl.tolerance;
        opts.control_match_tol = vl.control_tol;
        opts.y_desc = vl.y;
        const CoeffReport rep = verify_lemma2(table, vl.m, kp, y, grid, opts);
        rep.write(out, to_format(vl.format));
        exit_code = rep.exit_code();
    });

    struct {
        int m = 1;
        double a = 0;
        int quad_points = 160;
        double tol = 1e-6;
        std::string format = "json";
    } vg;
    auto* c_vg = app.add_subcommand("verify-gamma-quad",
                                    "Quadrature of the defining integral vs the product form");
    c_vg->add_option("--m", vg.m, "Dimension")->required()->check(CLI::Range(1, 2));
    c_vg->add_option("--a", vg.a, "Argument; requires a > (m-1)/2")->required();
    c_vg->add_option("--quad-points", vg.quad_points, "Nodes per one-dimensional rule")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    c_vg->add_option("--tol", vg.tol, "Relative agreement bound")->capture_default_str();
    add_format_option(c_vg, vg.format);
    c_vg->callback([&] {
        const auto [quad, product] = verify_gamma_integral(vg.m, vg.a, vg.quad_points);
        const double rel = std::abs(quad - product) / std::max(std::abs(product), 1e-300);
        const bool pass = rel <= vg.tol;
        nlohmann::ordered_json j;
        j["claim"] = "gamma-quad";
        j["m"] = vg.m;
        j["a"] = vg.a;
        j["quad_points"] = vg.quad_points;
        j["quadrature"] = quad;
        j["product_form"] = product;
        j["rel_error"] = rel;
        j["tolerance"] = vg.tol;
        j["verdict"] = pass ? "pass" : "fail";
        emit_record(out, to_format(vg.format), j);
        exit_code = pass ? 0 : 1;
    });

    auto* c_self = app.add_subcommand("selftest", "Fast cross-module invariant sweep");
    c_self->callback([&] { exit_code = run_selftest(out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}

}  // namespace matargs
