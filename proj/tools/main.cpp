// Command-line valuation tool for convertible bonds on a defaultable-stock
// binomial tree, with a finite-difference cross-check and a step validator.
//
// Exit codes: 0 success, 1 usage/configuration problems, 2 model-level
// failures (a machine-readable token such as STEP_TOO_COARSE goes to stderr).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbtree/errors.hpp"
#include "cbtree/format.hpp"
#include "cbtree/pde.hpp"
#include "cbtree/pricer.hpp"
#include "cbtree/schedule.hpp"
#include "cbtree/termsheet.hpp"

namespace {

using namespace cbtree;

struct CommonArgs {
    std::string terms_path;
    std::string model_name = "constant";
    double rate = 0.05;
    double sigma = 0.2;
    double lambda0 = 0.0;
    std::optional<double> alpha;
    std::optional<double> s0;
    double eta = 1.0;
    std::optional<double> recovery;
    std::optional<std::string> valuation;
    int steps = 1000;
    std::string out_path;  // empty: stdout
};

void add_market_options(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--terms", a.terms_path, "term sheet file")->required();
    cmd->add_option("--model", a.model_name, "constant|synthesis|hull")
        ->check(CLI::IsMember({"constant", "synthesis", "hull"}));
    cmd->add_option("--r", a.rate, "risk-free rate (cc)");
    cmd->add_option("--sigma", a.sigma, "stock volatility");
    cmd->add_option("--lambda0", a.lambda0, "default intensity (scale)");
    cmd->add_option("--alpha", a.alpha, "synthesis exponent (negative)");
    cmd->add_option("--s0", a.s0, "synthesis reference spot");
    cmd->add_option("--eta", a.eta, "stock drop fraction on default");
    cmd->add_option("--recovery", a.recovery, "override the sheet's recovery");
    cmd->add_option("--valuation", a.valuation, "valuation date (default: issue)");
    cmd->add_option("--steps", a.steps, "tree time steps");
    cmd->add_option("--out", a.out_path, "output file (default: stdout)");
}

ModelKind parse_model(const std::string& name) {
    if (name == "constant")
        return ModelKind::ConstantIntensity;
    if (name == "synthesis")
        return ModelKind::Synthesis;
    return ModelKind::Hull2011;
}

struct Problem {
    ConvertibleTerms terms;
    MarketState market{0.0, 0.2};
    DefaultSpec def{1.0, HazardModel::constant(0.0)};
    PricingConfig config;
};

Problem assemble(const CommonArgs& a) {
    Problem p{load_termsheet(a.terms_path), MarketState{a.rate, a.sigma},
              DefaultSpec{1.0, HazardModel::constant(0.0)}, {}};
    if (a.recovery)
        p.terms.recovery = *a.recovery;
    p.terms.validate();

    const ModelKind model = parse_model(a.model_name);
    if (model == ModelKind::Synthesis) {
        if (!a.alpha || !a.s0)
            throw std::invalid_argument("synthesis model needs --alpha and --s0");
        p.def = DefaultSpec{a.eta, HazardModel::synthesis(a.lambda0, *a.alpha, *a.s0)};
    } else {
        if (model == ModelKind::Hull2011 && a.eta != 1.0)
            throw std::invalid_argument("hull model implies --eta 1");
        p.def = DefaultSpec{a.eta, HazardModel::constant(a.lambda0)};
    }

    p.config.model = model;
    p.config.n_steps = a.steps;
    p.config.valuation_date =
        a.valuation ? Date::parse(*a.valuation) : p.terms.issue_date;
    return p;
}

std::vector<double> parse_grid(const std::string& text) {
    // lo:hi:n, inclusive ends
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("--spot-grid wants lo:hi:n");
    const auto num = [&](size_t b, size_t e) {
        double v = 0.0;
        const char* s = text.data() + b;
        const char* s_end = text.data() + e;
        const auto [ptr, ec] = std::from_chars(s, s_end, v);
        if (ec != std::errc{} || ptr != s_end)
            throw std::invalid_argument("bad number in --spot-grid");
        return v;
    };
    const double lo = num(0, first);
    const double hi = num(first + 1, second);
    int n = 0;
    {
        const char* s = text.data() + second + 1;
        const char* s_end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(s, s_end, n);
        if (ec != std::errc{} || ptr != s_end || n < 1)
            throw std::invalid_argument("bad point count in --spot-grid");
    }
    if (hi < lo)
        throw std::invalid_argument("--spot-grid wants lo <= hi");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    if (n == 1) {
        out.push_back(lo);
    } else {
        for (int i = 0; i < n; ++i)
            out.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return out;
}

std::vector<int> parse_ladder(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss{text};
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || n < 1)
            throw std::invalid_argument("bad step count '" + tok + "' in --ladder");
        out.push_back(n);
    }
    if (out.empty())
        throw std::invalid_argument("--ladder is empty");
    return out;
}

// Writes either to --out or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::runtime_error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_price(const CommonArgs& a, double spot) {
    Problem p = assemble(a);
    p.config.spot = spot;
    const PriceResult r = price(p.terms, p.market, p.def, p.config);

    Sink sink{a.out_path};
    std::ostream& os = sink.stream();
    os << "model=" << to_string(p.config.model) << " spot=" << format_double(spot)
       << " steps=" << p.config.n_steps << " value=" << format_double(r.value)
       << " delta=" << format_double(r.delta)
       << " step_margin=" << format_double(r.step_margin)
       << " clamped_nodes=" << r.clamped_nodes;
    if (r.floor)
        os << " floor=" << format_double(*r.floor);
    if (p.def.hazard.lambda0() == 0.0)
        os << " note=crr-equivalent";  // no default branch left anywhere
    os << "\n";
    return 0;
}

int cmd_profile(const CommonArgs& a, const std::string& grid_text) {
    Problem p = assemble(a);
    const std::vector<double> spots = parse_grid(grid_text);
    const auto points = price_profile(p.terms, p.market, p.def, p.config, spots);

    Sink sink{a.out_path};
    std::ostream& os = sink.stream();
    os << "spot,value,delta,floor_extended,model\n";
    for (const ProfilePoint& pt : points) {
        os << format_double(pt.spot) << ',' << format_double(pt.result.value) << ','
           << format_double(pt.result.delta) << ','
           << (pt.result.floor_extended ? "true" : "false") << ','
           << to_string(p.config.model) << "\n";
    }
    return 0;
}

int cmd_converge(const CommonArgs& a, double spot, const std::string& ladder_text,
                 int grid_space, int grid_time, const std::string& scheme_name) {
    Problem p = assemble(a);
    p.config.spot = spot;
    const std::vector<int> ladder = parse_ladder(ladder_text);

    // Reference: closed form when nothing optional is left in the claim,
    // otherwise the finite-difference solve.
    double reference = 0.0;
    std::string source;
    const bool pure_bond = p.def.hazard.lambda0() == 0.0 && !p.terms.convertible() &&
                           p.terms.calls.empty() && p.terms.puts.empty();
    if (pure_bond) {
        const double horizon = year_fraction(p.config.valuation_date, p.terms.maturity_date);
        reference = p.terms.face * std::exp(-p.market.rate * horizon);
        for (const CouponPayment& c : coupon_amounts(p.terms)) {
            const double x = year_fraction(p.config.valuation_date, c.date);
            if (x > 0.0)
                reference += c.amount * std::exp(-p.market.rate * x);
        }
        source = "analytic";
    } else {
        FdGrid grid;
        grid.n_space = grid_space;
        grid.n_time = grid_time;
        grid.scheme = scheme_name == "cn" ? FdScheme::CrankNicolson : FdScheme::Implicit;
        const FdSolution ref = solve_afv(p.terms, p.market, p.def, p.config.model,
                                         p.config.valuation_date, grid);
        reference = ref.value_at(spot);
        source = "fd";
    }

    std::vector<std::future<PriceResult>> futures;
    futures.reserve(ladder.size());
    for (const int n : ladder) {
        futures.push_back(std::async(std::launch::async, [&, n] {
            PricingConfig cfg = p.config;
            cfg.n_steps = n;
            return price(p.terms, p.market, p.def, cfg);
        }));
    }

    Sink sink{a.out_path};
    std::ostream& os = sink.stream();
    std::cerr << "reference=" << format_double(reference) << " source=" << source << "\n";
    os << "n_steps,value,abs_error\n";
    for (size_t i = 0; i < ladder.size(); ++i) {
        const PriceResult r = futures[i].get();
        os << ladder[i] << ',' << format_double(r.value) << ','
           << format_double(std::abs(r.value - reference)) << "\n";
    }
    return 0;
}

int cmd_compare_hull(const CommonArgs& a, const std::string& grid_text) {
    CommonArgs base = a;
    if (base.eta != 1.0)
        throw std::invalid_argument("the hull comparison is defined for --eta 1");

    base.model_name = "constant";
    Problem constant_leg = assemble(base);
    base.model_name = "hull";
    Problem hull_leg = assemble(base);

    const std::vector<double> spots = parse_grid(grid_text);
    // Fail fast (before any output) when the hull leg is degenerate.
    StepGeometry::hull(hull_leg.market, hull_leg.def.hazard.lambda0(),
                       year_fraction(hull_leg.config.valuation_date,
                                     hull_leg.terms.maturity_date) /
                           hull_leg.config.n_steps);

    const auto lhs = price_profile(constant_leg.terms, constant_leg.market, constant_leg.def,
                                   constant_leg.config, spots);
    const auto rhs =
        price_profile(hull_leg.terms, hull_leg.market, hull_leg.def, hull_leg.config, spots);

    Sink sink{a.out_path};
    std::ostream& os = sink.stream();
    os << "spot,value_constant,value_hull,difference\n";
    for (size_t i = 0; i < spots.size(); ++i) {
        const double vc = lhs[i].result.value;
        const double vh = rhs[i].result.value;
        os << format_double(spots[i]) << ',' << format_double(vc) << ',' << format_double(vh)
           << ',' << format_double(vh - vc) << "\n";
    }
    return 0;
}

int cmd_validate_step(const std::string& model_name, double rate, double sigma, double eta,
                      double lambda0, double dt, std::optional<double> alpha,
                      std::optional<double> s0) {
    const MarketState market{rate, sigma};

    if (model_name == "synthesis") {
        if (!alpha || !s0)
            throw std::invalid_argument("synthesis model needs --alpha and --s0");
        const HazardModel model = HazardModel::synthesis(lambda0, *alpha, *s0);
        const double bound = max_hazard_step(market, eta, dt);
        // Throws STEP_TOO_COARSE when no spot is admissible at this step size.
        const auto floor = stock_floor(model, market, eta, dt);
        std::cout << "valid=true bound=" << format_double(bound)
                  << " floor=" << format_double(floor.value()) << "\n";
        return 0;
    }

    const double bound = model_name == "hull"
                             ? std::log(StepGeometry::hull(market, lambda0, dt).up) - rate * dt
                             : max_hazard_step(market, eta, dt);
    try {
        const StepParams p = model_name == "hull" ? hull_step_params(market, lambda0, dt)
                                                  : build_step_params(market, eta, lambda0, dt);
        std::cout << "valid=true bound=" << format_double(bound)
                  << " lambda_dt=" << format_double(lambda0 * dt)
                  << " margin=" << format_double(bound - lambda0 * dt)
                  << " up=" << format_double(p.up) << " down=" << format_double(p.down)
                  << " p_up=" << format_double(p.p_up) << " p_down=" << format_double(p.p_down)
                  << " p_default=" << format_double(p.p_default) << "\n";
    } catch (const StepTooCoarse&) {
        // Still give scripts the numbers on stdout, then fail with the token.
        std::cout << "valid=false bound=" << format_double(bound)
                  << " lambda_dt=" << format_double(lambda0 * dt)
                  << " margin=" << format_double(bound - lambda0 * dt) << "\n";
        throw;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convertible bond valuation on a defaultable-stock binomial tree"};
    app.require_subcommand(1);

    CommonArgs price_args, profile_args, converge_args, compare_args;
    double spot = 0.0;
    double converge_spot = 0.0;
    std::string profile_grid, compare_grid;
    std::string ladder = "125,250,500,1000,2000,4000";
    int fd_space = 800;
    int fd_time = 800;
    std::string fd_scheme = "implicit";

    CLI::App* c_price = app.add_subcommand("price", "value one convertible at one spot");
    add_market_options(c_price, price_args);
    c_price->add_option("--spot", spot, "stock price")->required();

    CLI::App* c_profile =
        app.add_subcommand("profile", "value over a spot ladder, CSV output");
    add_market_options(c_profile, profile_args);
    c_profile->add_option("--spot-grid", profile_grid, "lo:hi:n")->required();

    CLI::App* c_converge = app.add_subcommand(
        "converge", "tree values across a step ladder against a reference, CSV output");
    add_market_options(c_converge, converge_args);
    c_converge->add_option("--spot", converge_spot, "stock price")->required();
    c_converge->add_option("--ladder", ladder, "comma-separated step counts");
    c_converge->add_option("--fd-space", fd_space, "reference grid: space intervals");
    c_converge->add_option("--fd-time", fd_time, "reference grid: time steps");
    c_converge->add_option("--fd-scheme", fd_scheme, "implicit|cn")
        ->check(CLI::IsMember({"implicit", "cn"}));

    CLI::App* c_compare = app.add_subcommand(
        "compare-hull", "flat-intensity tree vs the reduced-volatility variant, CSV output");
    add_market_options(c_compare, compare_args);
    c_compare->add_option("--spot-grid", compare_grid, "lo:hi:n")->required();

    CLI::App* c_validate =
        app.add_subcommand("validate-step", "check one step geometry against its intensity");
    std::string v_model = "constant";
    double v_rate = 0.05, v_sigma = 0.2, v_eta = 1.0, v_lambda0 = 0.0, v_dt = 0.0;
    std::optional<double> v_alpha, v_s0;
    c_validate->add_option("--model", v_model, "constant|synthesis|hull")
        ->check(CLI::IsMember({"constant", "synthesis", "hull"}));
    c_validate->add_option("--r", v_rate, "risk-free rate (cc)");
    c_validate->add_option("--sigma", v_sigma, "stock volatility");
    c_validate->add_option("--eta", v_eta, "stock drop fraction on default");
    c_validate->add_option("--lambda0", v_lambda0, "default intensity (scale)");
    c_validate->add_option("--dt", v_dt, "step size in years")->required();
    c_validate->add_option("--alpha", v_alpha, "synthesis exponent (negative)");
    c_validate->add_option("--s0", v_s0, "synthesis reference spot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (c_price->parsed())
            return cmd_price(price_args, spot);
        if (c_profile->parsed())
            return cmd_profile(profile_args, profile_grid);
        if (c_converge->parsed())
            return cmd_converge(converge_args, converge_spot, ladder, fd_space, fd_time,
                                fd_scheme);
        if (c_compare->parsed())
            return cmd_compare_hull(compare_args, compare_grid);
        if (c_validate->parsed())
            return cmd_validate_step(v_model, v_rate, v_sigma, v_eta, v_lambda0, v_dt, v_alpha,
                                     v_s0);
    } catch (const ParseError& e) {
        std::cerr << "error: term sheet: " << e.what() << "\n";
        return 1;
    } catch (const PricingError& e) {
        std::cerr << "error: " << e.token() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
