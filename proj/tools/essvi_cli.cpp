#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "essvi/arbitrage.hpp"
#include "essvi/errors.hpp"
#include "essvi/global_calib.hpp"
#include "essvi/io.hpp"
#include "essvi/metrics.hpp"
#include "essvi/pipeline.hpp"
#include "essvi/robust_calib.hpp"
#include "essvi/synth.hpp"

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kEmptyChain = 2;
constexpr int kAllRhoInfeasible = 3;
constexpr int kInitInfeasible = 4;
constexpr int kArbitrageFound = 5;

bool verbose() { return std::getenv("ESSVI_LOG") != nullptr; }

void log(const std::string& msg) {
    if (verbose()) std::cerr << "[essvi] " << msg << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<essvi::SliceAnchor> load_anchors(const std::string& input, const std::string& curve_path) {
    if (ends_with(input, ".json")) return essvi::io::anchors_from_json(essvi::io::read_json(input));
    essvi::OptionChain chain = essvi::io::load_chain_csv(input);
    if (curve_path.empty()) throw essvi::ParseError("chain CSV input requires --curve");
    chain.curve = essvi::io::load_curve_csv(curve_path);
    return essvi::filter_chain(chain);
}

nlohmann::json pairwise_classifications(const std::vector<essvi::EssviSlice>& slices) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < slices.size(); ++i) {
        auto cls = essvi::classify_pair(slices[i], slices[i + 1]);
        auto j = essvi::io::classification_to_json(cls);
        j["near_maturity"] = slices[i].maturity;
        j["far_maturity"] = slices[i + 1].maturity;
        arr.push_back(std::move(j));
    }
    return arr;
}

int cmd_filter(const std::string& chain_path, const std::string& curve_path,
               const std::string& out_path) {
    essvi::OptionChain chain = essvi::io::load_chain_csv(chain_path);
    chain.curve = essvi::io::load_curve_csv(curve_path);
    try {
        const auto anchors = essvi::filter_chain(chain);
        essvi::io::write_json(out_path, essvi::io::anchors_to_json(anchors));
        log("filter: " + std::to_string(anchors.size()) + " maturities survived");
    } catch (const essvi::EmptyChain&) {
        essvi::io::write_json(out_path, nlohmann::json::array());
        std::cerr << "essvi filter: no maturity survived filtering\n";
        return kEmptyChain;
    }
    return kOk;
}

int cmd_calibrate(const std::string& input, const std::string& curve_path,
                  const std::string& method, const std::string& weights, const std::string& init,
                  const essvi::RobustConfig& rcfg, int budget, const std::string& out_dir) {
    const auto anchors = load_anchors(input, curve_path);

    std::vector<essvi::EssviSlice> slices;
    nlohmann::json diag;
    diag["method"] = method;

    const bool need_robust = method == "robust" || init == "robust";
    essvi::RobustResult robust;
    if (need_robust) {
        try {
            robust = essvi::calibrate_robust(anchors, rcfg);
        } catch (const essvi::AllRhoInfeasible& e) {
            std::cerr << "essvi calibrate: " << e.what() << '\n';
            return kAllRhoInfeasible;
        }
        nlohmann::json per_slice = nlohmann::json::array();
        for (std::size_t i = 0; i < robust.diagnostics.size(); ++i) {
            const auto& d = robust.diagnostics[i];
            per_slice.push_back({{"maturity", anchors[i].maturity},
                                 {"objective_evals", d.objective_evals},
                                 {"L", d.L},
                                 {"U", d.U},
                                 {"rho", d.rho},
                                 {"psi", d.psi},
                                 {"objective", d.objective}});
        }
        diag["robust"] = {{"per_slice", std::move(per_slice)}};
    }

    if (method == "robust") {
        slices = robust.slices;
    } else {
        essvi::WeightScheme scheme{weights == "const" ? essvi::WeightScheme::Constant
                                                      : essvi::WeightScheme::InverseVegaSquared};
        const auto mode = init == "robust" ? essvi::GlobalInit::RobustSeed
                                           : essvi::GlobalInit::LessDataDriven;
        essvi::GlobalResult g;
        try {
            g = essvi::calibrate_global(anchors, scheme, mode, robust.slices, budget);
        } catch (const essvi::InitInfeasible& e) {
            std::cerr << "essvi calibrate: " << e.what() << '\n';
            return kInitInfeasible;
        }
        slices = g.slices;
        diag["global"] = {{"n_evals", g.diagnostics.n_evals},
                          {"stop_reason", g.diagnostics.stop_reason},
                          {"initial_cost", g.diagnostics.initial_cost},
                          {"final_cost", g.diagnostics.final_cost},
                          {"n_capped_weights", g.diagnostics.n_capped_weights},
                          {"weights", weights},
                          {"init", init}};
    }

    diag["pairwise"] = pairwise_classifications(slices);
    std::filesystem::create_directories(out_dir);
    essvi::io::write_json(out_dir + "/surface.json", essvi::io::surface_to_json(slices));
    essvi::io::write_json(out_dir + "/diagnostics.json", diag);
    log("calibrate: wrote " + out_dir + "/surface.json");
    return kOk;
}

int cmd_check_arb(const std::string& surface_path, const std::string& out_path) {
    const auto slices = essvi::io::surface_from_json(essvi::io::read_json(surface_path));
    if (slices.empty()) throw essvi::ParseError("surface has no slices");

    bool all_pass = true;
    nlohmann::json butterflies = nlohmann::json::array();
    for (const auto& s : slices) {
        const auto b = essvi::butterfly_check(s);
        all_pass = all_pass && b.pass;
        butterflies.push_back({{"maturity", s.maturity},
                               {"pass", b.pass},
                               {"b1_lhs", b.b1_lhs},
                               {"b2_lhs", b.b2_lhs},
                               {"b2_rhs", b.b2_rhs}});
    }
    nlohmann::json pairs = pairwise_classifications(slices);
    for (const auto& p : pairs) all_pass = all_pass && p.at("no_arbitrage").get<bool>();

    essvi::io::write_json(out_path,
                          {{"pass", all_pass}, {"butterfly", butterflies}, {"pairs", pairs}});
    return all_pass ? kOk : kArbitrageFound;
}

int cmd_synth(const essvi::SynthConfig& cfg, const std::string& out_dir) {
    const auto result = essvi::generate_chain(cfg);
    std::filesystem::create_directories(out_dir);
    essvi::io::write_chain_csv(out_dir + "/chain.csv", result.chain);
    essvi::io::write_curve_csv(out_dir + "/curve.csv", result.chain.curve);
    essvi::io::write_json(out_dir + "/truth.json", essvi::io::surface_to_json(result.surface));
    log("synth: wrote " + out_dir + "/chain.csv");
    return kOk;
}

int cmd_report(const std::string& surface_path, const std::string& chain_path,
               const std::string& curve_path, const std::string& out_path,
               const std::string& plot_path) {
    const auto slices = essvi::io::surface_from_json(essvi::io::read_json(surface_path));
    essvi::OptionChain chain = essvi::io::load_chain_csv(chain_path);
    chain.curve = essvi::io::load_curve_csv(curve_path);
    const auto anchors = essvi::filter_chain(chain);
    if (slices.size() != anchors.size())
        throw essvi::ParseError("surface and filtered chain have different maturity counts");

    const auto rep = essvi::fit_report(slices, anchors);
    auto j = essvi::io::report_to_json(rep);
    const auto corr = essvi::chain_correlations(anchors);
    j["correlations"] = {{"vega_vs_spread", corr.vega_vs_spread},
                         {"dte_vs_spread", corr.dte_vs_spread}};
    essvi::io::write_json(out_path, j);

    if (!plot_path.empty()) {
        std::ofstream out(plot_path);
        out << "maturity,n,f1,f2,f3,f4\n";
        for (const auto& r : rep.per_maturity) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", r.maturity, r.n,
                          r.f1, r.f2, r.f3, r.f4);
            out << buf;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eSSVI implied-volatility surface calibration"};
    app.require_subcommand(1);

    // filter
    std::string chain_path, curve_path, out_path = "anchors.json";
    auto* filter = app.add_subcommand("filter", "Filter a chain and emit per-maturity anchors");
    filter->add_option("chain", chain_path, "chain CSV")->required();
    filter->add_option("curve", curve_path, "curve CSV")->required();
    filter->add_option("--out", out_path, "output anchors JSON");

    // calibrate
    std::string cal_input, cal_curve, method = "robust", weights = "vega", init = "robust";
    std::string cal_out = ".";
    essvi::RobustConfig rcfg;
    int budget = 500;
    auto* calibrate = app.add_subcommand("calibrate", "Calibrate an eSSVI surface");
    calibrate->add_option("input", cal_input, "anchors JSON or chain CSV")->required();
    calibrate->add_option("--curve", cal_curve, "curve CSV (with chain input)");
    calibrate->add_option("--method", method)->check(CLI::IsMember({"robust", "global"}));
    calibrate->add_option("--weights", weights)->check(CLI::IsMember({"vega", "const"}));
    calibrate->add_option("--init", init)->check(CLI::IsMember({"robust", "simple"}));
    calibrate->add_option("--r", rcfg.r, "rho grid size");
    calibrate->add_option("--epsilon", rcfg.epsilon, "refinement stop width");
    calibrate->add_option("--budget", budget, "global objective evaluation budget");
    calibrate->add_option("--out", cal_out, "output directory");

    // check-arb
    std::string surface_path, verdicts_path = "verdicts.json";
    auto* check = app.add_subcommand("check-arb", "Certify butterfly and calendar no-arbitrage");
    check->add_option("surface", surface_path, "surface JSON")->required();
    check->add_option("--out", verdicts_path, "output verdicts JSON");

    // synth
    essvi::SynthConfig scfg;
    std::string synth_out = ".";
    auto* synth = app.add_subcommand("synth", "Generate a reproducible synthetic chain");
    synth->add_option("--seed", scfg.seed);
    synth->add_option("--maturities", scfg.n_maturities);
    synth->add_option("--strikes", scfg.n_strikes);
    synth->add_option("--spread", scfg.half_spread, "proportional half-spread");
    synth->add_option("--noise", scfg.mid_noise, "multiplicative mid noise amplitude");
    synth->add_option("--out", synth_out, "output directory");

    // report
    std::string rep_surface, rep_chain, rep_curve, rep_out = "report.json", rep_plot;
    auto* report = app.add_subcommand("report", "Fit measures for a calibrated surface");
    report->add_option("surface", rep_surface)->required();
    report->add_option("chain", rep_chain)->required();
    report->add_option("curve", rep_curve)->required();
    report->add_option("--out", rep_out);
    report->add_option("--plot-data", rep_plot, "per-maturity fit-measure CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*filter) return cmd_filter(chain_path, curve_path, out_path);
        if (*calibrate)
            return cmd_calibrate(cal_input, cal_curve, method, weights, init, rcfg, budget, cal_out);
        if (*check) return cmd_check_arb(surface_path, verdicts_path);
        if (*synth) return cmd_synth(scfg, synth_out);
        if (*report) return cmd_report(rep_surface, rep_chain, rep_curve, rep_out, rep_plot);
    } catch (const essvi::EmptyChain& e) {
        std::cerr << "essvi: " << e.what() << '\n';
        return kEmptyChain;
    } catch (const essvi::Error& e) {
        std::cerr << "essvi: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "essvi: " << e.what() << '\n';
        return kBadInput;
    }
    return kOk;
}
