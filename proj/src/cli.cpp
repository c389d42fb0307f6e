#include "snbif/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "snbif/bifurcation.hpp"
#include "snbif/dconcavity.hpp"
#include "snbif/errors.hpp"
#include "snbif/integrator.hpp"
#include "snbif/report.hpp"

namespace snbif {

namespace {

struct Common {
    std::string scenario_path;
    std::string out_path;
    std::vector<std::string> overrides;
    int threads = 0;
};

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& c, bool needs_out = false) {
    sub->add_option("-s,--scenario", c.scenario_path, "scenario file (JSON)")->required();
    auto* o = sub->add_option("-o,--out", c.out_path, "output file (default: stdout)");
    if (needs_out) o->required();
    sub->add_option("--set", c.overrides, "numerics override key=value (repeatable)");
    sub->add_option("--threads", c.threads, "worker threads (default: $SNBIF_THREADS or all cores)");
}

Scenario load(const Common& c) {
    std::ifstream in(c.scenario_path);
    if (!in) throw Usage("cannot read scenario file " + c.scenario_path);
    std::stringstream buf;
    buf << in.rdbuf();
    Scenario s = parse_scenario(buf.str());
    for (const auto& o : c.overrides) apply_numerics_override(s, o);
    return s;
}

int thread_count(const Common& c) {
    if (c.threads > 0) return c.threads;
    if (const char* env = std::getenv("SNBIF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw Usage("cannot write " + c.out_path);
    f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Writes the validation report and returns false when a required check fails.
bool precheck(const Scenario& s, const std::vector<std::string>& required, std::ostream& err) {
    const auto rep = validate_model(s);
    bool ok = true;
    for (const auto& name : required) ok = ok && rep.passed(name);
    if (!ok) err << dump(to_json(rep));
    return ok;
}

std::string sibling_json(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".json";
    return path.substr(0, dot) + ".json";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"snbif: attractors, minimal sets and bifurcations of scalar nonautonomous ODEs"};
    app.name("snbif");
    app.require_subcommand(1);

    Common c;
    double lambda = 0.0;
    std::vector<double> interval;
    std::vector<double> eps;
    double x0 = 0.0, t = 1.0;
    std::vector<double> theta;
    int count = 3;
    std::string observable = "a2";
    std::vector<double> horizons;

    auto* validate = app.add_subcommand("validate", "check coercivity and d-concavity of the model");
    add_common(validate, c);

    auto* census_cmd = app.add_subcommand("census", "minimal-set census at one parameter value");
    add_common(census_cmd, c);
    census_cmd->add_option("--lambda", lambda, "parameter value")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "census over the sweep grid, located and classified");
    add_common(sweep_cmd, c, true);

    auto* locate_cmd = app.add_subcommand("locate", "bisect a count transition inside an interval");
    add_common(locate_cmd, c);
    locate_cmd->add_option("--interval", interval, "bracket lo hi")->expected(2)->required();
    locate_cmd->add_option("--count", count, "predicate: census count equals this value (default 3)");

    auto* dc_cmd = app.add_subcommand("dc", "measure of the positivity set of the d-concavity module");
    add_common(dc_cmd, c);
    dc_cmd->add_option("--interval", interval, "interval J as lo hi")->expected(2)->required();
    dc_cmd->add_option("--eps", eps, "module width(s), ascending")->required();

    auto* spec_cmd = app.add_subcommand("spectrum", "spectrum endpoints from finite-time averages");
    add_common(spec_cmd, c);
    spec_cmd->add_option("--observable", observable, "a2 or fx0")->check(CLI::IsMember({"a2", "fx0"}));
    spec_cmd->add_option("--horizons", horizons, "averaging horizons (default: T/4 T/2 T)");

    auto* sch_cmd = app.add_subcommand("schwarzian", "Schwarzian derivative of the fiber flow");
    add_common(sch_cmd, c);
    sch_cmd->add_option("--lambda", lambda, "parameter value")->required();
    sch_cmd->add_option("--x0", x0, "initial value");
    sch_cmd->add_option("--t", t, "time (>= 0)");
    sch_cmd->add_option("--theta", theta, "base point angles (default: origin)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        const Scenario s = load(c);
        const int threads = thread_count(c);

        if (*validate) {
            const auto rep = validate_model(s);
            emit(c, dump(to_json(rep)), out);
            return rep.all_passed() ? kExitOk : kExitValidation;
        }
        if (*census_cmd) {
            if (!precheck(s, {"coercive"}, err)) return kExitValidation;
            const auto rep = census(s, lambda);
            emit(c, dump(to_json(rep)), out);
            return rep.degraded ? kExitDegraded : kExitOk;
        }
        if (*sweep_cmd) {
            if (!precheck(s, {"coercive"}, err)) return kExitValidation;
            const auto d = sweep(s, threads);
            emit(c, diagram_csv(d), out);
            Common js = c;
            js.out_path = sibling_json(c.out_path);
            emit(js, dump(to_json(d)), out);
            return d.degraded.empty() ? kExitOk : kExitDegraded;
        }
        if (*locate_cmd) {
            if (!precheck(s, {"coercive"}, err)) return kExitValidation;
            const int want = count;
            const auto loc = locate_bifurcation(s, interval[0], interval[1],
                                                [want](const MinimalSetReport& r) { return r.count == want; });
            nlohmann::json j{{"location", loc.location}, {"width", loc.width}, {"degraded", loc.degraded},
                             {"predicate", "count == " + std::to_string(want)}};
            emit(c, dump(j), out);
            return loc.degraded ? kExitDegraded : kExitOk;
        }
        if (*dc_cmd) {
            const DcInterval J{interval[0], interval[1]};
            const auto rep = classify_sdc(s, J, eps);
            auto j = to_json(rep);
            if (rep.measures.size() == 1) j["measure"] = rep.measures.front();
            emit(c, dump(j), out);
            return rep.classification == SdcClass::NotDC ? kExitValidation : kExitOk;
        }
        if (*spec_cmd) {
            const double T = s.numerics.birkhoff_T;
            if (horizons.empty()) horizons = {T / 4, T / 2, T};
            const auto obs = observable == "a2" ? SpectrumObservable::A2Coefficient : SpectrumObservable::FxAtZeroSection;
            auto j = to_json(estimate_spectrum(s, obs, horizons));
            j["observable"] = to_string(obs);
            emit(c, dump(j), out);
            return kExitOk;
        }
        if (*sch_cmd) {
            BasePoint omega = origin(s.base);
            if (!theta.empty()) {
                if (theta.size() != s.base.dim()) throw Usage("--theta needs one angle per base frequency");
                for (std::size_t i = 0; i < theta.size(); ++i) omega.theta[i] = wrap_unit(theta[i]);
            }
            const double v = schwarzian(s, lambda, omega, x0, t);
            nlohmann::json j{{"lambda", lambda}, {"x0", x0}, {"t", t}, {"theta", omega.theta}, {"schwarzian", v}};
            emit(c, dump(j), out);
            return kExitOk;
        }
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "degraded: " << e.what() << "\n";
        return kExitDegraded;
    }
    return kExitUsage;
}

}  // namespace snbif
