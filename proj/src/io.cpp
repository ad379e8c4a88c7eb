#include "essvi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "essvi/errors.hpp"

namespace essvi::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double to_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad numeric field for ") + what + ": '" + s + "'");
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

OptionChain load_chain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    OptionChain chain;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty chain file " + path);
    bool first_row = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw ParseError("chain row needs 8 fields: " + line);
        if (f[3] != "C" && f[3] != "P") throw ParseError("option type must be C or P: " + f[3]);
        OptionQuote q;
        q.expiry = f[1];
        q.maturity = to_double(f[2], "maturity_years");
        q.is_call = f[3] == "C";
        q.strike = to_double(f[4], "strike");
        q.bid = to_double(f[5], "bid");
        q.ask = to_double(f[6], "ask");
        if (q.bid < 0.0 || q.ask < q.bid) throw ParseError("invalid bid/ask: " + line);
        if (first_row) {
            chain.quote_date = f[0];
            chain.underlying = to_double(f[7], "underlying");
            first_row = false;
        }
        chain.quotes.push_back(std::move(q));
    }
    if (first_row) throw ParseError("chain file has no quotes: " + path);
    return chain;
}

std::vector<RatePoint> load_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<RatePoint> curve;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty curve file " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw ParseError("curve row needs 2 fields: " + line);
        curve.push_back({to_double(f[0], "tenor_years"), to_double(f[1], "rate")});
    }
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].tenor <= curve[i - 1].tenor)
            throw ParseError("curve tenors must be strictly increasing");
    return curve;
}

void write_chain_csv(const std::string& path, const OptionChain& chain) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "quote_date,expiry,maturity_years,type,strike,bid,ask,underlying\n";
    for (const auto& q : chain.quotes)
        out << chain.quote_date << ',' << q.expiry << ',' << fmt17(q.maturity) << ','
            << (q.is_call ? 'C' : 'P') << ',' << fmt17(q.strike) << ',' << fmt17(q.bid) << ','
            << fmt17(q.ask) << ',' << fmt17(chain.underlying) << '\n';
}

void write_curve_csv(const std::string& path, const std::vector<RatePoint>& curve) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "tenor_years,rate\n";
    for (const auto& p : curve) out << fmt17(p.tenor) << ',' << fmt17(p.rate) << '\n';
}

nlohmann::json anchors_to_json(const std::vector<SliceAnchor>& anchors) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : anchors) {
        nlohmann::json quotes = nlohmann::json::array();
        for (const auto& q : a.quotes)
            quotes.push_back({{"strike", q.strike},
                              {"k", q.k},
                              {"bid", q.bid},
                              {"ask", q.ask},
                              {"mid", q.mid},
                              {"is_call", q.is_call},
                              {"implied_w", q.implied_w},
                              {"implied_vol", q.implied_vol},
                              {"vega", q.vega}});
        arr.push_back({{"maturity", a.maturity},
                       {"forward", a.forward},
                       {"rate", a.rate},
                       {"k_star", a.k_star},
                       {"theta_star", a.theta_star},
                       {"n_quotes", a.quotes.size()},
                       {"quotes", std::move(quotes)}});
    }
    return arr;
}

std::vector<SliceAnchor> anchors_from_json(const nlohmann::json& j) {
    std::vector<SliceAnchor> anchors;
    for (const auto& ja : j) {
        SliceAnchor a;
        a.maturity = ja.at("maturity").get<double>();
        a.forward = ja.at("forward").get<double>();
        a.rate = ja.at("rate").get<double>();
        a.k_star = ja.at("k_star").get<double>();
        a.theta_star = ja.at("theta_star").get<double>();
        for (const auto& jq : ja.at("quotes"))
            a.quotes.push_back({jq.at("strike").get<double>(), jq.at("k").get<double>(),
                                jq.at("bid").get<double>(), jq.at("ask").get<double>(),
                                jq.at("mid").get<double>(), jq.at("is_call").get<bool>(),
                                jq.at("implied_w").get<double>(),
                                jq.at("implied_vol").get<double>(), jq.at("vega").get<double>()});
        anchors.push_back(std::move(a));
    }
    return anchors;
}

nlohmann::json surface_to_json(const std::vector<EssviSlice>& slices) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : slices)
        arr.push_back({{"maturity", s.maturity},
                       {"theta", s.theta},
                       {"rho", s.rho},
                       {"psi", s.psi},
                       {"phi", s.phi()}});
    return arr;
}

std::vector<EssviSlice> surface_from_json(const nlohmann::json& j) {
    std::vector<EssviSlice> slices;
    for (const auto& js : j)
        slices.push_back({js.at("theta").get<double>(), js.at("rho").get<double>(),
                          js.at("psi").get<double>(), js.at("maturity").get<double>()});
    return slices;
}

nlohmann::json classification_to_json(const PairClassification& c) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : c.intersections)
        points.push_back({{"x", p.x},
                          {"k", p.k},
                          {"kind", p.kind == IntersectionKind::Tangency ? "tangency" : "crossing"}});
    return {{"verdict", to_string(c.verdict)},
            {"no_arbitrage", c.no_arbitrage()},
            {"identical_slices", c.identical_slices},
            {"theta_margin", c.theta_margin},
            {"slope_lower_margin", c.slope_lower_margin},
            {"slope_upper_margin", c.slope_upper_margin},
            {"intersections", std::move(points)}};
}

nlohmann::json report_to_json(const FitReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.per_maturity)
        rows.push_back({{"maturity", r.maturity},
                        {"n", r.n},
                        {"f1", r.f1},
                        {"f2", r.f2},
                        {"f3", r.f3},
                        {"f4", r.f4}});
    return {{"f1", rep.f1},        {"f2", rep.f2},
            {"f3", rep.f3},        {"f4", rep.f4},
            {"n_total", rep.n_total}, {"per_maturity", std::move(rows)}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
}

}  // namespace essvi::io
