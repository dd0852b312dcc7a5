// slm: pricing, smiles, defect extraction and bubble detection for strict
// local martingale models. Subcommands: price, smile, defect, boundary,
// detect, mc, dual-check, classify.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "slm/asymptotics.hpp"
#include "slm/detector.hpp"
#include "slm/duality.hpp"
#include "slm/errors.hpp"
#include "slm/mcsim.hpp"
#include "slm/model_spec.hpp"
#include "slm/models.hpp"
#include "slm/pricer.hpp"
#include "slm/specfun.hpp"

namespace {

struct parse_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON numbers at 17 significant digits (round-trip exact), CSV at 10.
std::string jnum(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    if (v == 0.0) return "0";  // normalise -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<double> parse_range(const std::string& text) {
    // "a:b:step" inclusive grid, or a single value.
    std::vector<double> parts;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ':')) {
        try {
            parts.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw parse_failure("bad range token '" + tok + "' in '" + text + "'");
        }
    }
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3) throw parse_failure("range must be 'a:b:step' or a single value");
    const double a = parts[0], b = parts[1], step = parts[2];
    if (!(step > 0.0) || b < a) throw parse_failure("range needs b >= a and step > 0");
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
    const double snap = 1e-12 * std::max(std::abs(a), std::abs(b));
    for (int i = 0; i <= n; ++i) {
        double x = a + i * step;
        if (std::abs(x) < snap) x = 0.0;  // grids like -0.3:0.3:0.1 hit fp dust at zero
        grid.push_back(x);
    }
    return grid;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw parse_failure(std::string("bad ") + what + " value '" + tok + "'");
        }
    }
    if (values.empty()) throw parse_failure(std::string("empty ") + what + " list");
    return values;
}

slm::models::TerminalLaw make_law(const std::string& spec, double T) {
    try {
        return slm::model_spec::parse(spec, T);
    } catch (const slm::domain_error& e) {
        // Grammar violations are invocation errors, not pricing domain errors.
        if (std::string(e.what()).rfind("model spec:", 0) == 0) throw parse_failure(e.what());
        throw;
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw slm::domain_error("cannot open output file '" + path + "'");
    out << content;
}

int threads_from_env() {
    if (const char* env = std::getenv("SLM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Evaluate body(i) for i in [0, n) on the worker pool; results must be
// written by index so output order never depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& body) {
    const int n_threads = std::min(threads_from_env(), n);
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex mu;
    const int chunk = (n + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        const int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------- price --

struct PriceArgs {
    std::string model;
    double T = 1.0;
    double x = 0.0;
    double alpha = 0.0;
    std::string output = "-";
};

void run_price(const PriceArgs& a) {
    const auto law = make_law(a.model, a.T);
    const double call0 = slm::pricer::call_price_uncollateralised(law, a.x);
    const double call = call0 + a.alpha * law.defect;
    const double put = slm::pricer::put_price(law, a.x);
    const double residual = call0 - put - (1.0 - std::exp(a.x) - law.defect);
    std::ostringstream out;
    out << "{\"model\":\"" << a.model << "\",\"T\":" << jnum(a.T) << ",\"x\":" << jnum(a.x)
        << ",\"alpha\":" << jnum(a.alpha) << ",\"call\":" << jnum(call)
        << ",\"call_uncollateralised\":" << jnum(call0) << ",\"put\":" << jnum(put)
        << ",\"m_T\":" << jnum(law.defect) << ",\"parity_residual\":" << jnum(residual)
        << "}\n";
    write_output(a.output, out.str());
}

// ---------------------------------------------------------------- smile --

struct SmileArgs {
    std::string model;
    double T = 1.0;
    std::string x_range;
    double alpha = 1.0;
    std::string format = "csv";
    std::string output = "-";
};

void run_smile(const SmileArgs& a) {
    const auto law = make_law(a.model, a.T);
    const auto grid = parse_range(a.x_range);
    const double m = law.defect;
    const bool have_wing = m > 0.0;
    slm::asymptotics::WingExpansion wing{};
    if (have_wing) wing = slm::asymptotics::make_wing(m, a.T);

    struct Row {
        double x, put_iv, call_iv_alpha, w1, w2, residual;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const double x = grid[i];
        Row r{};
        r.x = x;
        r.put_iv = slm::pricer::put_smile(law, x);
        try {
            r.call_iv_alpha = slm::pricer::smile(law, x, a.alpha);
        } catch (const slm::non_existence_error&) {
            r.call_iv_alpha = std::nan("");
        }
        const bool wing_ok = have_wing && x > 0.0;
        r.w1 = wing_ok ? slm::asymptotics::wing_value(wing, x) : std::nan("");
        r.w2 = wing_ok ? slm::asymptotics::wing_value_order2(wing, x) : std::nan("");
        r.residual = wing_ok ? r.put_iv - r.w1 : std::nan("");
        rows[i] = r;
    });

    std::ostringstream out;
    if (a.format == "csv") {
        out << "x,put_iv,call_iv_alpha,wing_order1,wing_order2,residual\n";
        for (const Row& r : rows)
            out << cnum(r.x) << ',' << cnum(r.put_iv) << ',' << cnum(r.call_iv_alpha)
                << ',' << cnum(r.w1) << ',' << cnum(r.w2) << ',' << cnum(r.residual)
                << '\n';
    } else {
        out << "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row& r = rows[i];
            out << (i ? ",\n " : "\n ") << "{\"x\":" << jnum(r.x)
                << ",\"put_iv\":" << jnum(r.put_iv)
                << ",\"call_iv_alpha\":" << jnum(r.call_iv_alpha)
                << ",\"wing_order1\":" << jnum(r.w1) << ",\"wing_order2\":" << jnum(r.w2)
                << ",\"residual\":" << jnum(r.residual) << "}";
        }
        out << "\n]\n";
    }
    write_output(a.output, out.str());
}

// --------------------------------------------------------------- defect --

void run_defect(const std::string& model, double T, const std::string& output) {
    const auto law = make_law(model, T);
    const double m = slm::models::martingale_defect(law);
    const double n = slm::specfun::norm_quantile(m);
    std::ostringstream out;
    out << "{\"model\":\"" << model << "\",\"T\":" << jnum(T) << ",\"m_T\":" << jnum(m)
        << ",\"n_T\":" << jnum(n) << "}\n";
    write_output(output, out.str());
}

// ------------------------------------------------------------- boundary --

void run_boundary(const std::string& model, double T, const std::string& alphas,
                  const std::string& output) {
    const auto law = make_law(model, T);
    const double m = law.defect;
    std::ostringstream out;
    out << "{\"model\":\"" << model << "\",\"T\":" << jnum(T) << ",\"m_T\":" << jnum(m)
        << ",\"boundaries\":[";
    bool first = true;
    for (double alpha : parse_list(alphas, "alpha")) {
        const auto b = slm::pricer::existence_boundary(law, alpha);
        const double lower = (m > 0.0 && alpha < 1.0)
                                 ? std::log((1.0 - alpha) * m)
                                 : -std::numeric_limits<double>::infinity();
        const double upper = std::log1p(-alpha * m);
        const bool ok = std::isinf(b.x_star) ? (alpha == 1.0 || m == 0.0)
                                             : (lower < b.x_star && b.x_star <= upper);
        out << (first ? "" : ",") << "{\"alpha\":" << jnum(alpha)
            << ",\"x_star\":" << jnum(b.x_star) << ",\"lower_bound\":" << jnum(lower)
            << ",\"upper_bound\":" << jnum(upper) << ",\"sandwich_ok\":"
            << (ok ? "true" : "false") << "}";
        first = false;
    }
    out << "]}\n";
    write_output(output, out.str());
}

// --------------------------------------------------------------- detect --

struct DetectArgs {
    std::string input;
    double T = 1.0;
    slm::detector::Config cfg;
    std::string output = "-";
};

void run_detect(const DetectArgs& a) {
    slm::detector::QuoteSet quotes;
    if (a.input.empty() || a.input == "-") {
        quotes = slm::detector::quotes_from_csv(std::cin, a.T);
    } else {
        std::ifstream in(a.input);
        if (!in) throw slm::domain_error("cannot open input file '" + a.input + "'");
        quotes = slm::detector::quotes_from_csv(in, a.T);
    }
    const auto rep = slm::detector::detect(quotes, a.cfg);
    std::ostringstream out;
    out << "{\"verdict\":\"" << slm::detector::to_string(rep.verdict) << "\""
        << ",\"n_hat\":" << jnum(rep.n_hat) << ",\"m_hat\":" << jnum(rep.m_hat)
        << ",\"slope\":" << jnum(rep.slope) << ",\"trend_stat\":" << jnum(rep.trend_stat)
        << ",\"wing_points\":" << rep.wing_points << ",\"residuals\":[";
    for (std::size_t i = 0; i < rep.residuals.size(); ++i)
        out << (i ? "," : "") << jnum(rep.residuals[i]);
    out << "],\"note\":\"" << rep.note << "\"}\n";
    write_output(a.output, out.str());
}

// ------------------------------------------------------------------- mc --

struct McArgs {
    std::string model;
    double T = 1.0;
    std::int64_t paths = 100000;
    int steps = 2000;
    std::uint64_t seed = 1;
    std::string z_levels = "8,16,32,64";
    std::string output = "-";
};

void run_mc(const McArgs& a) {
    slm::mcsim::McConfig cfg;
    cfg.n_paths = a.paths;
    cfg.n_steps = a.steps;
    cfg.seed = a.seed;
    cfg.z_levels = parse_list(a.z_levels, "z-level");

    // The supremum estimator needs a simulable strictly-local (or control)
    // model; the exact path schemes cover cev beta=1 and the lognormal control.
    const auto colon = a.model.find(':');
    const std::string name = a.model.substr(0, colon);
    if (name == "bridge")
        throw slm::domain_error("mc: supremum estimator not applicable to Dirac endpoints");

    const auto law = make_law(a.model, a.T);  // validates the grammar
    auto field = [&](const char* key, double fallback) {
        const auto pos = a.model.find(std::string(key) + "=");
        if (pos == std::string::npos) return fallback;
        return std::stod(a.model.substr(pos + std::string(key).size() + 1));
    };
    slm::mcsim::PathSample paths;
    double defect_oracle = 0.0;
    if (name == "cev") {
        if (field("beta", 1.0) != 1.0 || field("s0", 1.0) != 1.0)
            throw slm::domain_error("mc: exact path simulation covers cev beta=1, s0=1 only");
        paths = slm::mcsim::simulate_cev1_paths(field("sigma", 1.0), a.T, cfg);
        defect_oracle = law.defect;
    } else if (name == "lognormal") {
        paths = slm::mcsim::simulate_lognormal_paths(field("sigma", 0.2), a.T, cfg);
        defect_oracle = 0.0;
    } else {
        throw slm::domain_error("mc: no exact path scheme for model '" + name + "'");
    }

    const auto est = slm::mcsim::estimate_pi(paths, cfg);
    std::ostringstream out;
    out << "{\"model\":\"" << a.model << "\",\"T\":" << jnum(a.T)
        << ",\"paths\":" << a.paths << ",\"steps\":" << a.steps << ",\"seed\":" << a.seed
        << ",\"per_level\":[";
    for (std::size_t i = 0; i < est.per_level.size(); ++i) {
        const auto& l = est.per_level[i];
        out << (i ? "," : "") << "{\"z\":" << jnum(l.z) << ",\"estimate\":" << jnum(l.estimate)
            << ",\"std_err\":" << jnum(l.std_err) << ",\"exceedances\":" << l.exceedances
            << "}";
    }
    out << "],\"pi_hat\":" << jnum(est.pi_hat) << ",\"std_err\":" << jnum(est.std_err)
        << ",\"defect_oracle\":" << jnum(defect_oracle) << "}\n";
    write_output(a.output, out.str());
}

// ------------------------------------------------------------ dual-check --

struct DualArgs {
    double sigma = 1.0;
    double T = 1.0;
    std::string x_range = "0";
    double alpha = 1.0;
    std::string output = "-";
};

void run_dual_check(const DualArgs& a) {
    const auto pair = slm::duality::make_cev1_pair(a.sigma, a.T);
    const auto grid = parse_range(a.x_range);
    struct Row {
        double x, call_res, put_res, smile_res;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const double x = grid[i];
        const auto pr = slm::duality::dual_price_check(pair, x, a.alpha);
        rows[i] = {x, pr.call_res, pr.put_res,
                   slm::duality::smile_reflection_residual(pair, x)};
    });
    std::ostringstream out;
    out << "{\"sigma\":" << jnum(a.sigma) << ",\"T\":" << jnum(a.T)
        << ",\"alpha\":" << jnum(a.alpha) << ",\"m_T\":" << jnum(pair.s_law.defect)
        << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        out << (i ? "," : "") << "{\"x\":" << jnum(r.x) << ",\"call_res\":" << jnum(r.call_res)
            << ",\"put_res\":" << jnum(r.put_res) << ",\"smile_res\":" << jnum(r.smile_res)
            << "}";
    }
    out << "]}\n";
    write_output(a.output, out.str());
}

// -------------------------------------------------------------- classify --

void run_classify(double qa, double qb, double qc, double s0, const std::string& output) {
    const auto tag = slm::models::classify_quadratic({qa, qb, qc, s0});
    std::ostringstream out;
    out << "{\"a\":" << jnum(qa) << ",\"b\":" << jnum(qb) << ",\"c\":" << jnum(qc)
        << ",\"s0\":" << jnum(s0) << ",\"class\":\"" << slm::models::to_string(tag)
        << "\"}\n";
    write_output(output, out.str());
}

void emit_error(const char* code, const std::string& message) {
    std::string escaped;
    for (char ch : message)
        if (ch == '"' || ch == '\\')
            escaped += std::string("\\") + ch;
        else if (ch == '\n')
            escaped += "\\n";
        else
            escaped += ch;
    std::cerr << "{\"error\":\"" << code << "\",\"message\":\"" << escaped << "\"}\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strict local martingale pricing and bubble detection"};
    app.require_subcommand(1);

    PriceArgs price;
    auto* cmd_price = app.add_subcommand("price", "price a Put and alpha-collateralised Call");
    cmd_price->add_option("--model", price.model, "model spec")->required();
    cmd_price->add_option("--T", price.T, "maturity");
    cmd_price->add_option("--x", price.x, "log-strike")->required();
    cmd_price->add_option("--alpha", price.alpha, "collateral fraction");
    cmd_price->add_option("--output", price.output, "output path or -");

    SmileArgs smile;
    auto* cmd_smile = app.add_subcommand("smile", "implied-vol smile with wing expansions");
    cmd_smile->add_option("--model", smile.model, "model spec")->required();
    cmd_smile->add_option("--T", smile.T, "maturity");
    cmd_smile->add_option("--x", smile.x_range, "log-strike grid a:b:step")->required();
    cmd_smile->add_option("--alpha", smile.alpha, "collateral fraction");
    cmd_smile->add_option("--format", smile.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_smile->add_option("--output", smile.output, "output path or -");

    std::string defect_model, defect_output = "-";
    double defect_T = 1.0;
    auto* cmd_defect = app.add_subcommand("defect", "martingale defect m_T and intercept n_T");
    cmd_defect->add_option("--model", defect_model, "model spec")->required();
    cmd_defect->add_option("--T", defect_T, "maturity");
    cmd_defect->add_option("--output", defect_output, "output path or -");

    std::string bnd_model, bnd_alphas = "0,0.25,0.5,0.75,1", bnd_output = "-";
    double bnd_T = 1.0;
    auto* cmd_boundary = app.add_subcommand("boundary", "existence boundary x*(alpha)");
    cmd_boundary->add_option("--model", bnd_model, "model spec")->required();
    cmd_boundary->add_option("--T", bnd_T, "maturity");
    cmd_boundary->add_option("--alpha", bnd_alphas, "comma-separated alphas");
    cmd_boundary->add_option("--output", bnd_output, "output path or -");

    DetectArgs detect;
    auto* cmd_detect = app.add_subcommand("detect", "bubble test on implied-vol quotes");
    cmd_detect->add_option("--input", detect.input, "quotes csv path or -");
    cmd_detect->add_option("--T", detect.T, "maturity")->required();
    cmd_detect->add_option("--x-min-wing", detect.cfg.x_min_wing, "wing window threshold");
    cmd_detect->add_option("--flat-tol", detect.cfg.flat_tol, "flat-slope tolerance");
    cmd_detect->add_option("--trend-tstat", detect.cfg.trend_tstat, "t-stat threshold");
    cmd_detect->add_option("--min-wing-points", detect.cfg.min_wing_points,
                           "points needed for a verdict");
    cmd_detect->add_option("--output", detect.output, "output path or -");

    McArgs mc;
    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo pi_T estimate from path suprema");
    cmd_mc->add_option("--model", mc.model, "cev:beta=1,... or lognormal:...")->required();
    cmd_mc->add_option("--T", mc.T, "maturity");
    cmd_mc->add_option("--paths", mc.paths, "number of paths");
    cmd_mc->add_option("--steps", mc.steps, "grid steps");
    cmd_mc->add_option("--seed", mc.seed, "rng seed");
    cmd_mc->add_option("--z-levels", mc.z_levels, "comma-separated thresholds");
    cmd_mc->add_option("--output", mc.output, "output path or -");

    DualArgs dual;
    auto* cmd_dual = app.add_subcommand("dual-check", "dual price and smile relations");
    cmd_dual->add_option("--sigma", dual.sigma, "cev beta=1 volatility");
    cmd_dual->add_option("--T", dual.T, "maturity");
    cmd_dual->add_option("--x", dual.x_range, "log-strike grid a:b:step");
    cmd_dual->add_option("--alpha", dual.alpha, "collateral fraction");
    cmd_dual->add_option("--output", dual.output, "output path or -");

    double qa = 0.0, qb = 0.0, qc = 0.0, qs0 = 0.0;
    std::string cls_output = "-";
    auto* cmd_classify = app.add_subcommand("classify", "quadratic-volatility classification");
    cmd_classify->add_option("--a", qa, "s^2 coefficient")->required();
    cmd_classify->add_option("--b", qb, "s coefficient")->required();
    cmd_classify->add_option("--c", qc, "constant coefficient")->required();
    cmd_classify->add_option("--s0", qs0, "starting point")->required();
    cmd_classify->add_option("--output", cls_output, "output path or -");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("parse", e.what());
        return 2;
    }

    try {
        if (cmd_price->parsed()) run_price(price);
        if (cmd_smile->parsed()) run_smile(smile);
        if (cmd_defect->parsed()) run_defect(defect_model, defect_T, defect_output);
        if (cmd_boundary->parsed()) run_boundary(bnd_model, bnd_T, bnd_alphas, bnd_output);
        if (cmd_detect->parsed()) run_detect(detect);
        if (cmd_mc->parsed()) run_mc(mc);
        if (cmd_dual->parsed()) run_dual_check(dual);
        if (cmd_classify->parsed()) run_classify(qa, qb, qc, qs0, cls_output);
    } catch (const parse_failure& e) {
        emit_error("parse", e.what());
        return 2;
    } catch (const slm::domain_error& e) {
        emit_error("domain", e.what());
        return 3;
    } catch (const slm::error& e) {
        emit_error("numerical", e.what());
        return 4;
    } catch (const std::exception& e) {
        emit_error("numerical", e.what());
        return 4;
    }
    return 0;
}
