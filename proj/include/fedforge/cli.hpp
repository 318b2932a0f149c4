#pragma once

#include <algorithm>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "../../vendor/CLI11.hpp"
#include "fedforge/chart_json.hpp"
#include "fedforge/dequantize.hpp"
#include "fedforge/polyparse.hpp"
#include "fedforge/verify.hpp"

namespace fedforge {

namespace cli_detail {

struct CommonArgs {
    std::string chart;
    int K = 0;
    int N_f = 0;
    std::string format = "text";

    bool json() const { return format == "json"; }

    ChartGeometry load() const {
        ChartInput in = resolve_chart(chart);
        if (K > 0) in.config.K = K;
        if (N_f > 0) in.config.N_f = N_f;
        return ChartGeometry::build(in);
    }
};

inline void add_common(CLI::App* sub, CommonArgs& a) {
    sub->add_option("--chart", a.chart, "chart preset name or JSON file path")->required();
    sub->add_option("--K", a.K, "override the total truncation order");
    sub->add_option("--Nf", a.N_f, "override the cotangent fiber order");
    sub->add_option("--format", a.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
}

inline void meta_line(std::ostream& out, const ChartGeometry& G) {
    out << "# chart " << G.name << "  K " << G.cfg.K << "  Nf " << G.cfg.N_f << "\n";
}

}  // namespace cli_detail

/** Runs one engine command; args exclude the program name. Returns 0 on
 *  success, 1 on usage errors, 2 on input/validation errors, 3 on internal
 *  errors, 4 when a verification run reports failures. */
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::CommonArgs;
    using cli_detail::add_common;
    using cli_detail::meta_line;

    CLI::App app{"exact Fedosov star-products and their dequantization on a chart"};
    app.require_subcommand(1);
    int rc = 0;

    CommonArgs rA;
    bool r_classical = false;
    CLI::App* rCmd = app.add_subcommand("r", "flat-connection correction series by degree");
    add_common(rCmd, rA);
    rCmd->add_flag("--classical", r_classical, "nu-free correction graded by fiber degree");
    rCmd->callback([&] {
        ChartGeometry G = rA.load();
        nlohmann::json doc{{"chart", G.name}, {"K", G.cfg.K}, {"components", nlohmann::json::array()}};
        if (!rA.json()) meta_line(out, G);
        if (r_classical) {
            ClassicalCorrection rv = compute_r_classical(G);
            for (int k = 2; k <= G.cfg.K; ++k) {
                if (rA.json())
                    doc["components"].push_back({{"degree", k}, {"value", rv.by_deg[k].str()}});
                else
                    out << "r[" << k << "] = " << rv.by_deg[k].str() << "\n";
            }
        } else {
            FlatCorrection r = compute_r(G);
            for (int k = 2; k <= G.cfg.K; ++k) {
                if (rA.json())
                    doc["components"].push_back({{"degree", k}, {"value", r.by_deg[k].str()}});
                else
                    out << "r[" << k << "] = " << r.by_deg[k].str() << "\n";
            }
        }
        if (rA.json()) out << doc.dump(2) << "\n";
    });

    CommonArgs tauA;
    std::string tau_f;
    CLI::App* tauCmd = app.add_subcommand("tau", "flat section extending a base polynomial");
    add_common(tauCmd, tauA);
    tauCmd->add_option("--f", tau_f, "base polynomial, e.g. \"x1^2 + 2*x2\"")->required();
    tauCmd->callback([&] {
        ChartGeometry G = tauA.load();
        FlatCorrection r = compute_r(G);
        TauCache tc(G, r);
        GradedSeries tf = tc.tau(parse_polynomial(tau_f, G.wp));
        if (tauA.json()) {
            out << nlohmann::json{{"chart", G.name}, {"K", G.cfg.K}, {"f", tau_f},
                                  {"value", tf.str()}}
                       .dump(2)
                << "\n";
        } else {
            meta_line(out, G);
            out << tf.str() << "\n";
        }
    });

    CommonArgs starA;
    std::string star_f, star_g;
    CLI::App* starCmd = app.add_subcommand("star", "star-product of two base polynomials");
    add_common(starCmd, starA);
    starCmd->add_option("--f", star_f, "left factor")->required();
    starCmd->add_option("--g", star_g, "right factor")->required();
    starCmd->callback([&] {
        ChartGeometry G = starA.load();
        FlatCorrection r = compute_r(G);
        TauCache tc(G, r);
        StarSeries s = star(G, tc, parse_polynomial(star_f, G.wp),
                            parse_polynomial(star_g, G.wp));
        if (starA.json()) {
            nlohmann::json doc{{"chart", G.name},
                               {"K", G.cfg.K},
                               {"certified_order", s.certified_order},
                               {"f", star_f},
                               {"g", star_g},
                               {"value", s.value.str()},
                               {"coefficients", nlohmann::json::array()}};
            for (int k = 0; k <= s.certified_order; ++k)
                doc["coefficients"].push_back({{"slot", k}, {"value", s.c_slot(k).str()}});
            out << doc.dump(2) << "\n";
        } else {
            out << "# chart " << G.name << "  K " << G.cfg.K << "  certified-order "
                << s.certified_order << "\n";
            out << s.value.str() << "\n";
        }
    });

    CommonArgs kapA;
    CLI::App* kapCmd = app.add_subcommand("kappa", "flat lifts of the chart coordinates");
    add_common(kapCmd, kapA);
    kapCmd->callback([&] {
        ChartGeometry G = kapA.load();
        ClassicalCorrection rv = compute_r_classical(G);
        ClassicalTauCache ctc(G, rv);
        std::vector<GradedSeries> kap = compute_kappa(G, ctc);
        nlohmann::json doc{{"chart", G.name}, {"K", G.cfg.K}, {"components", nlohmann::json::array()}};
        if (!kapA.json()) meta_line(out, G);
        for (int k = 1; k <= G.wp.n; ++k) {
            if (kapA.json())
                doc["components"].push_back({{"index", k}, {"value", kap[k - 1].str()}});
            else
                out << "kappa[" << k << "] = " << kap[k - 1].str() << "\n";
        }
        if (kapA.json()) out << doc.dump(2) << "\n";
    });

    CommonArgs zetaA;
    CLI::App* zetaCmd = app.add_subcommand("zeta", "fiber change between the two cotangent charts");
    add_common(zetaCmd, zetaA);
    zetaCmd->callback([&] {
        ChartGeometry G = zetaA.load();
        Dequantization D = dequantize(G, compute_r_classical(G));
        nlohmann::json doc{{"chart", G.name},
                           {"K", G.cfg.K},
                           {"Nf", G.cfg.N_f},
                           {"xi_of_zeta", nlohmann::json::array()},
                           {"zeta_of_xi", nlohmann::json::array()}};
        if (!zetaA.json()) meta_line(out, G);
        for (int p = 1; p <= G.wp.n; ++p) {
            if (zetaA.json()) {
                doc["xi_of_zeta"].push_back(D.xi_of_zeta[p - 1].str());
                doc["zeta_of_xi"].push_back(D.zeta_of_xi[p - 1].str());
            } else {
                out << "xi[" << p << "](zeta) = " << D.xi_of_zeta[p - 1].str() << "\n";
            }
        }
        for (int p = 1; p <= G.wp.n && !zetaA.json(); ++p)
            out << "zeta[" << p << "](xi) = " << D.zeta_of_xi[p - 1].str() << "\n";
        if (zetaA.json()) out << doc.dump(2) << "\n";
    });

    CommonArgs deqA;
    CLI::App* deqCmd = app.add_subcommand("dequantize", "source and target maps of the chart");
    add_common(deqCmd, deqA);
    deqCmd->callback([&] {
        ChartGeometry G = deqA.load();
        Dequantization D = dequantize(G, compute_r_classical(G));
        nlohmann::json doc{{"chart", G.name}, {"K", G.cfg.K}, {"Nf", G.cfg.N_f},
                           {"s_of_zeta", nlohmann::json::array()},
                           {"t_of_zeta", nlohmann::json::array()},
                           {"s_of_xi", nlohmann::json::array()},
                           {"t_of_xi", nlohmann::json::array()}};
        if (!deqA.json()) meta_line(out, G);
        for (int k = 1; k <= G.wp.n; ++k) {
            if (deqA.json()) {
                doc["s_of_zeta"].push_back(D.s_of_zeta[k - 1].str());
                doc["t_of_zeta"].push_back(D.t_of_zeta[k - 1].str());
                doc["s_of_xi"].push_back(D.s_of_xi[k - 1].str());
                doc["t_of_xi"].push_back(D.t_of_xi[k - 1].str());
            } else {
                out << "s[" << k << "](zeta) = " << D.s_of_zeta[k - 1].str() << "\n"
                    << "t[" << k << "](zeta) = " << D.t_of_zeta[k - 1].str() << "\n"
                    << "s[" << k << "](xi) = " << D.s_of_xi[k - 1].str() << "\n"
                    << "t[" << k << "](xi) = " << D.t_of_xi[k - 1].str() << "\n";
            }
        }
        if (deqA.json()) out << doc.dump(2) << "\n";
    });

    CommonArgs verA;
    CLI::App* verCmd = app.add_subcommand("verify", "run the full identity battery");
    add_common(verCmd, verA);
    verCmd->callback([&] {
        ChartGeometry G = verA.load();
        std::vector<CheckResult> res = run_verification(G);
        int passed = 0;
        nlohmann::json doc{{"chart", G.name}, {"K", G.cfg.K}, {"checks", nlohmann::json::array()}};
        for (const auto& c : res) {
            if (c.ok) ++passed;
            if (verA.json()) {
                doc["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
            } else {
                out << (c.ok ? "ok   " : "FAIL ") << c.name;
                if (!c.ok && !c.detail.empty()) out << ": " << c.detail;
                out << "\n";
            }
        }
        if (verA.json()) {
            doc["passed"] = passed;
            doc["total"] = static_cast<int>(res.size());
            out << doc.dump(2) << "\n";
        } else {
            out << "# passed " << passed << "/" << res.size() << "\n";
        }
        if (passed != static_cast<int>(res.size())) rc = 4;
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "invalid chart: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        err << "contract violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}

}  // namespace fedforge
