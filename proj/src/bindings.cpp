// Python bindings for the valuation core. Thin: every function here forwards
// to the C++ API and converts containers at the edge. Model errors surface as
// cbtree.PricingError with the message prefixed by the stable token, e.g.
// "STEP_TOO_COARSE: ...".

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cbtree/dates.hpp"
#include "cbtree/errors.hpp"
#include "cbtree/hazard.hpp"
#include "cbtree/instrument.hpp"
#include "cbtree/lattice.hpp"
#include "cbtree/market.hpp"
#include "cbtree/pde.hpp"
#include "cbtree/pricer.hpp"
#include "cbtree/termsheet.hpp"

namespace py = pybind11;
using namespace cbtree;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Convertible bond valuation on a defaultable-stock binomial tree";

    // Exception hierarchy: one Python type for model errors (token-prefixed
    // message), one for term-sheet syntax.
    static py::exception<PricingError> pricing_error(m, "PricingError");
    static py::exception<ParseError> parse_error(m, "TermSheetError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PricingError& e) {
            PyErr_SetString(pricing_error.ptr(), (e.token() + ": " + e.what()).c_str());
        } catch (const ParseError& e) {
            std::ostringstream msg;
            msg << "line " << e.line() << ", " << e.field() << ": " << e.what();
            PyErr_SetString(parse_error.ptr(), msg.str().c_str());
        }
    });

    py::class_<Date>(m, "Date")
        .def(py::init<>())
        .def_static("parse", &Date::parse, py::arg("iso"))
        .def_static("from_ymd", &Date::from_ymd, py::arg("year"), py::arg("month"), py::arg("day"))
        .def_property_readonly("serial", &Date::serial)
        .def("__str__", &Date::to_string)
        .def("__repr__", [](Date d) { return "Date('" + d.to_string() + "')"; })
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def(py::self > py::self)
        .def(py::self >= py::self)
        .def("__hash__", [](Date d) { return py::hash(py::int_(d.serial())); });

    m.def("days_between", &days_between, py::arg("from_date"), py::arg("to_date"));
    m.def("year_fraction", &year_fraction, py::arg("from_date"), py::arg("to_date"));

    py::class_<MarketState>(m, "MarketState")
        .def(py::init<double, double>(), py::arg("rate"), py::arg("sigma"))
        .def_readonly("rate", &MarketState::rate)
        .def_readonly("sigma", &MarketState::sigma);

    py::class_<StepParams>(m, "StepParams")
        .def_readonly("up", &StepParams::up)
        .def_readonly("down", &StepParams::down)
        .def_readonly("p_up", &StepParams::p_up)
        .def_readonly("p_down", &StepParams::p_down)
        .def_readonly("p_default", &StepParams::p_default)
        .def_readonly("dt", &StepParams::dt)
        .def_readonly("lambda_", &StepParams::lambda)
        .def_readonly("growth", &StepParams::growth)
        .def("valid", &StepParams::valid);

    m.def("build_step_params", &build_step_params, py::arg("market"), py::arg("eta"),
          py::arg("lambda_"), py::arg("dt"));
    m.def("hull_step_params", &hull_step_params, py::arg("market"), py::arg("lambda_"),
          py::arg("dt"));
    m.def("max_hazard_step", &max_hazard_step, py::arg("market"), py::arg("eta"), py::arg("dt"));

    py::class_<HazardModel>(m, "HazardModel")
        .def_static("constant", &HazardModel::constant, py::arg("lambda0"))
        .def_static("synthesis", &HazardModel::synthesis, py::arg("lambda0"), py::arg("alpha"),
                    py::arg("s0"))
        .def_property_readonly("is_constant", &HazardModel::is_constant)
        .def_property_readonly("lambda0", &HazardModel::lambda0)
        .def_property_readonly("alpha", &HazardModel::alpha)
        .def_property_readonly("s0", &HazardModel::s0);

    m.def("hazard_at", &hazard_at, py::arg("model"), py::arg("spot"));
    m.def("stock_floor", &stock_floor, py::arg("model"), py::arg("market"), py::arg("eta"),
          py::arg("dt"));

    py::class_<DefaultSpec>(m, "DefaultSpec")
        .def(py::init<double, HazardModel>(), py::arg("eta"), py::arg("hazard"))
        .def_readonly("eta", &DefaultSpec::eta)
        .def_readonly("hazard", &DefaultSpec::hazard);

    py::class_<CallWindow>(m, "CallWindow")
        .def(py::init<Date, Date, double>(), py::arg("start"), py::arg("end"), py::arg("price"))
        .def_readwrite("start", &CallWindow::start)
        .def_readwrite("end", &CallWindow::end)
        .def_readwrite("price", &CallWindow::price);

    py::class_<PutDate>(m, "PutDate")
        .def(py::init<Date, double>(), py::arg("date"), py::arg("price"))
        .def_readwrite("date", &PutDate::date)
        .def_readwrite("price", &PutDate::price);

    py::class_<RatioPeriod>(m, "RatioPeriod")
        .def(py::init<Date, double>(), py::arg("from_date"), py::arg("ratio"))
        .def_readwrite("from_date", &RatioPeriod::from)
        .def_readwrite("ratio", &RatioPeriod::ratio);

    py::class_<ConvertibleTerms>(m, "ConvertibleTerms")
        .def(py::init<>())
        .def_readwrite("face", &ConvertibleTerms::face)
        .def_readwrite("coupon_rate", &ConvertibleTerms::coupon_rate)
        .def_readwrite("coupon_dates", &ConvertibleTerms::coupon_dates)
        .def_readwrite("conversion_start", &ConvertibleTerms::conversion_start)
        .def_readwrite("conversion_end", &ConvertibleTerms::conversion_end)
        .def_readwrite("conversion_ratios", &ConvertibleTerms::conversion_ratios)
        .def_readwrite("calls", &ConvertibleTerms::calls)
        .def_readwrite("puts", &ConvertibleTerms::puts)
        .def_readwrite("recovery", &ConvertibleTerms::recovery)
        .def_readwrite("issue_date", &ConvertibleTerms::issue_date)
        .def_readwrite("maturity_date", &ConvertibleTerms::maturity_date)
        .def("convertible", &ConvertibleTerms::convertible)
        .def("validate", &ConvertibleTerms::validate);

    py::class_<CouponPayment>(m, "CouponPayment")
        .def_readonly("date", &CouponPayment::date)
        .def_readonly("amount", &CouponPayment::amount);

    m.def("coupon_amounts", &coupon_amounts, py::arg("terms"));

    py::class_<Provisions>(m, "Provisions")
        .def_readonly("conversion_ratio", &Provisions::conversion_ratio)
        .def_readonly("call_price", &Provisions::call_price)
        .def_readonly("put_price", &Provisions::put_price);

    m.def("provisions_at", &provisions_at, py::arg("terms"), py::arg("t"));

    m.def("parse_termsheet", &parse_termsheet, py::arg("text"));
    m.def("load_termsheet", &load_termsheet, py::arg("path"));
    m.def("write_termsheet", &write_termsheet, py::arg("terms"));

    py::enum_<ModelKind>(m, "ModelKind")
        .value("ConstantIntensity", ModelKind::ConstantIntensity)
        .value("Synthesis", ModelKind::Synthesis)
        .value("Hull2011", ModelKind::Hull2011);

    py::class_<PricingConfig>(m, "PricingConfig")
        .def(py::init([](int n_steps, ModelKind model, double spot, Date valuation_date) {
                 return PricingConfig{n_steps, model, spot, valuation_date};
             }),
             py::arg("n_steps"), py::arg("model"), py::arg("spot"), py::arg("valuation_date"))
        .def_readwrite("n_steps", &PricingConfig::n_steps)
        .def_readwrite("model", &PricingConfig::model)
        .def_readwrite("spot", &PricingConfig::spot)
        .def_readwrite("valuation_date", &PricingConfig::valuation_date);

    py::class_<PriceResult>(m, "PriceResult")
        .def_readonly("value", &PriceResult::value)
        .def_readonly("delta", &PriceResult::delta)
        .def_readonly("floor", &PriceResult::floor)
        .def_readonly("floor_extended", &PriceResult::floor_extended)
        .def_readonly("step_margin", &PriceResult::step_margin)
        .def_readonly("clamped_nodes", &PriceResult::clamped_nodes);

    m.def("default_payoff", &default_payoff, py::arg("terms"), py::arg("spot"), py::arg("eta"),
          py::arg("t"));
    m.def("rollback_step", &rollback_step, py::arg("value_up"), py::arg("value_down"),
          py::arg("value_default"), py::arg("step"), py::arg("coupon_pv"));
    m.def("apply_provisions",
          py::overload_cast<double, double, const Provisions&>(&apply_provisions),
          py::arg("continuation"), py::arg("spot"), py::arg("active"));
    m.def("price", &price, py::arg("terms"), py::arg("market"), py::arg("default_spec"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<ProfilePoint>(m, "ProfilePoint")
        .def_readonly("spot", &ProfilePoint::spot)
        .def_readonly("result", &ProfilePoint::result);

    m.def(
        "price_profile",
        [](const ConvertibleTerms& terms, const MarketState& market, const DefaultSpec& def,
           const PricingConfig& config, const std::vector<double>& spots) {
            py::gil_scoped_release release;
            return price_profile(terms, market, def, config, spots);
        },
        py::arg("terms"), py::arg("market"), py::arg("default_spec"), py::arg("config"),
        py::arg("spots"));

    py::enum_<FdScheme>(m, "FdScheme")
        .value("Implicit", FdScheme::Implicit)
        .value("CrankNicolson", FdScheme::CrankNicolson);

    py::class_<FdGrid>(m, "FdGrid")
        .def(py::init([](double s_max, int n_space, int n_time, FdScheme scheme) {
                 return FdGrid{s_max, n_space, n_time, scheme};
             }),
             py::arg("s_max") = 0.0, py::arg("n_space") = 400, py::arg("n_time") = 400,
             py::arg("scheme") = FdScheme::Implicit)
        .def_readwrite("s_max", &FdGrid::s_max)
        .def_readwrite("n_space", &FdGrid::n_space)
        .def_readwrite("n_time", &FdGrid::n_time)
        .def_readwrite("scheme", &FdGrid::scheme);

    py::class_<FdSolution>(m, "FdSolution")
        .def_readonly("spots", &FdSolution::spots)
        .def_readonly("values", &FdSolution::values)
        .def("value_at", &FdSolution::value_at, py::arg("spot"))
        .def("delta_at", &FdSolution::delta_at, py::arg("spot"));

    m.def("solve_afv", &solve_afv, py::arg("terms"), py::arg("market"), py::arg("default_spec"),
          py::arg("model"), py::arg("valuation"), py::arg("grid"),
          py::call_guard<py::gil_scoped_release>());
    m.def("solve_afv_checked", &solve_afv_checked, py::arg("terms"), py::arg("market"),
          py::arg("default_spec"), py::arg("model"), py::arg("valuation"), py::arg("grid"),
          py::arg("spot"), py::arg("tol"), py::call_guard<py::gil_scoped_release>());
}
