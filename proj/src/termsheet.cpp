#include "cbtree/termsheet.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cbtree/errors.hpp"
#include "cbtree/format.hpp"

namespace cbtree {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_number(int line, const std::string& key, std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, key, "expected a number, got '" + std::string(text) + "'");
    return value;
}

Date parse_date(int line, const std::string& key, std::string_view text) {
    try {
        return Date::parse(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, key, e.what());
    }
}

std::pair<Date, Date> parse_window(int line, const std::string& key, std::string_view text) {
    const auto sep = text.find("..");
    if (sep == std::string_view::npos)
        throw ParseError(line, key, "expected 'start..end', got '" + std::string(text) + "'");
    return {parse_date(line, key, trim(text.substr(0, sep))),
            parse_date(line, key, trim(text.substr(sep + 2)))};
}

// One half of a numbered provision, remembered with its source line so the
// "call.2.price missing" class of errors can point somewhere useful.
template <typename T>
struct Seen {
    T value{};
    int line = 0;
    bool set = false;
};

template <typename T>
void put_once(int line, const std::string& key, Seen<T>& slot, T value) {
    if (slot.set)
        throw ParseError(line, key, "duplicate key");
    slot.value = std::move(value);
    slot.line = line;
    slot.set = true;
}

template <typename T>
const T& need(const Seen<T>& slot, int group_line, const std::string& key) {
    if (!slot.set)
        throw ParseError(group_line, key, "missing");
    return slot.value;
}

struct CallEntry {
    Seen<std::pair<Date, Date>> window;
    Seen<double> price;
};
struct PutEntry {
    Seen<Date> date;
    Seen<double> price;
};
struct ConvEntry {
    Seen<Date> from;
    Seen<double> ratio;
};

// Splits "call.1.price" into ("call", 1, "price"). Returns false when the key
// does not have the numbered shape.
bool split_numbered(std::string_view key, std::string_view& group, int& index,
                    std::string_view& field) {
    const auto first = key.find('.');
    if (first == std::string_view::npos)
        return false;
    const auto second = key.find('.', first + 1);
    if (second == std::string_view::npos)
        return false;
    const std::string_view mid = key.substr(first + 1, second - first - 1);
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(mid.data(), mid.data() + mid.size(), idx);
    if (ec != std::errc{} || ptr != mid.data() + mid.size())
        return false;
    group = key.substr(0, first);
    index = idx;
    field = key.substr(second + 1);
    return true;
}

template <typename Entry>
std::vector<Entry*> in_index_order(std::map<int, Entry>& entries, const std::string& group) {
    std::vector<Entry*> out;
    int expected = 1;
    for (auto& [idx, entry] : entries) {
        if (idx != expected)
            throw ParseError(0, group + "." + std::to_string(expected),
                             "numbered entries must run 1, 2, ... without gaps");
        out.push_back(&entry);
        ++expected;
    }
    return out;
}

} // namespace

ConvertibleTerms parse_termsheet(std::string_view text) {
    Seen<Date> issue, maturity;
    Seen<double> face, coupon_rate, recovery;
    Seen<std::vector<Date>> coupon_dates;
    Seen<std::pair<Date, Date>> conversion_window;
    std::map<int, CallEntry> calls;
    std::map<int, PutEntry> puts;
    std::map<int, ConvEntry> convs;

    std::istringstream lines{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string_view line{raw};
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, std::string(line), "expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(line_no, std::string(line), "empty key");
        if (value.empty())
            throw ParseError(line_no, key, "empty value");

        std::string_view group, field;
        int index = 0;
        if (key == "issue") {
            put_once(line_no, key, issue, parse_date(line_no, key, value));
        } else if (key == "maturity") {
            put_once(line_no, key, maturity, parse_date(line_no, key, value));
        } else if (key == "face") {
            put_once(line_no, key, face, parse_number(line_no, key, value));
        } else if (key == "recovery") {
            put_once(line_no, key, recovery, parse_number(line_no, key, value));
        } else if (key == "coupon.rate") {
            put_once(line_no, key, coupon_rate, parse_number(line_no, key, value));
        } else if (key == "coupon.dates") {
            std::vector<Date> dates;
            std::istringstream parts{std::string(value)};
            std::string token;
            while (parts >> token)
                dates.push_back(parse_date(line_no, key, token));
            put_once(line_no, key, coupon_dates, std::move(dates));
        } else if (key == "conversion.window") {
            put_once(line_no, key, conversion_window, parse_window(line_no, key, value));
        } else if (split_numbered(key, group, index, field)) {
            if (index < 1)
                throw ParseError(line_no, key, "indices start at 1");
            if (group == "call" && field == "window") {
                put_once(line_no, key, calls[index].window, parse_window(line_no, key, value));
            } else if (group == "call" && field == "price") {
                put_once(line_no, key, calls[index].price, parse_number(line_no, key, value));
            } else if (group == "put" && field == "date") {
                put_once(line_no, key, puts[index].date, parse_date(line_no, key, value));
            } else if (group == "put" && field == "price") {
                put_once(line_no, key, puts[index].price, parse_number(line_no, key, value));
            } else if (group == "conversion" && field == "from") {
                put_once(line_no, key, convs[index].from, parse_date(line_no, key, value));
            } else if (group == "conversion" && field == "ratio") {
                put_once(line_no, key, convs[index].ratio, parse_number(line_no, key, value));
            } else {
                throw ParseError(line_no, key, "unknown key");
            }
        } else {
            throw ParseError(line_no, key, "unknown key");
        }
    }

    ConvertibleTerms terms;
    terms.issue_date = need(issue, 0, "issue");
    terms.maturity_date = need(maturity, 0, "maturity");
    if (face.set)
        terms.face = face.value;
    if (recovery.set)
        terms.recovery = recovery.value;
    if (coupon_rate.set)
        terms.coupon_rate = coupon_rate.value;
    if (coupon_dates.set)
        terms.coupon_dates = coupon_dates.value;
    if (coupon_rate.set != coupon_dates.set && terms.coupon_rate != 0.0)
        throw ParseError(coupon_rate.line, "coupon.rate",
                         "coupon.rate and coupon.dates go together");

    for (CallEntry* e : in_index_order(calls, "call")) {
        const int at = e->window.set ? e->window.line : e->price.line;
        const auto& [start, end] = need(e->window, at, "call window");
        terms.calls.push_back({start, end, need(e->price, at, "call price")});
    }
    for (PutEntry* e : in_index_order(puts, "put")) {
        const int at = e->date.set ? e->date.line : e->price.line;
        terms.puts.push_back({need(e->date, at, "put date"), need(e->price, at, "put price")});
    }
    if (!convs.empty() || conversion_window.set) {
        if (!conversion_window.set)
            throw ParseError(0, "conversion.window", "missing");
        if (convs.empty())
            throw ParseError(conversion_window.line, "conversion.window",
                             "window given but no conversion.N.from/ratio entries");
        terms.conversion_start = conversion_window.value.first;
        terms.conversion_end = conversion_window.value.second;
        for (ConvEntry* e : in_index_order(convs, "conversion")) {
            const int at = e->from.set ? e->from.line : e->ratio.line;
            terms.conversion_ratios.push_back(
                {need(e->from, at, "conversion from"), need(e->ratio, at, "conversion ratio")});
        }
    }

    terms.validate();
    return terms;
}

ConvertibleTerms load_termsheet(const std::string& path) {
    std::ifstream in{path};
    if (!in)
        throw std::runtime_error("cannot open term sheet '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_termsheet(buf.str());
}

std::string write_termsheet(const ConvertibleTerms& terms) {
    std::ostringstream os;
    os << "issue = " << terms.issue_date.to_string() << "\n";
    os << "maturity = " << terms.maturity_date.to_string() << "\n";
    os << "face = " << format_double(terms.face) << "\n";
    os << "recovery = " << format_double(terms.recovery) << "\n";
    if (!terms.coupon_dates.empty() || terms.coupon_rate != 0.0) {
        os << "coupon.rate = " << format_double(terms.coupon_rate) << "\n";
        if (!terms.coupon_dates.empty()) {
            os << "coupon.dates =";
            for (const Date d : terms.coupon_dates)
                os << ' ' << d.to_string();
            os << "\n";
        }
    }
    if (terms.convertible()) {
        os << "conversion.window = " << terms.conversion_start.to_string() << ".."
           << terms.conversion_end.to_string() << "\n";
        int i = 1;
        for (const RatioPeriod& p : terms.conversion_ratios) {
            os << "conversion." << i << ".from = " << p.from.to_string() << "\n";
            os << "conversion." << i << ".ratio = " << format_double(p.ratio) << "\n";
            ++i;
        }
    }
    int i = 1;
    for (const CallWindow& c : terms.calls) {
        os << "call." << i << ".window = " << c.start.to_string() << ".." << c.end.to_string()
           << "\n";
        os << "call." << i << ".price = " << format_double(c.price) << "\n";
        ++i;
    }
    i = 1;
    for (const PutDate& p : terms.puts) {
        os << "put." << i << ".date = " << p.date.to_string() << "\n";
        os << "put." << i << ".price = " << format_double(p.price) << "\n";
        ++i;
    }
    return os.str();
}

} // namespace cbtree
