// Command-line front end: generate data, verify, factorize, inspect the
// Grassmannian model and sample maps on a grid.
//
// Exit codes: 0 success, 1 other runtime errors, 2 parse errors, 3 no generic
// sample point could be found, 4 a verification check failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unitons/errors.hpp"
#include "unitons/grassmannian.hpp"
#include "unitons/serialization.hpp"
#include "unitons/uniton_builder.hpp"
#include "unitons/verifier.hpp"

using namespace unitons;
using io::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitVerification = 4;

struct RunConfig {
    std::string input;
    std::string output;
    std::string mode = "random";
    int n = 3;
    int r = 2;
    std::uint64_t seed = 1;
    int max_degree = 3;
    int samples = 10;
    double tol = 1e-5;
    int grid = 16;
    std::string rect = "-2,2,-2,2";
    std::string q_span;
    std::vector<int> ranks;
    int columns = 1;
};

void write_output(const RunConfig& cfg, const json& j) {
    const std::string text = io::dump(j);
    if (cfg.output.empty() || cfg.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.output);
    out << text;
}

std::vector<int> default_ranks(const RunConfig& cfg) {
    if (!cfg.ranks.empty()) return cfg.ranks;
    std::vector<int> ranks;
    for (int i = 1; i <= cfg.r; ++i) ranks.push_back(i);
    return ranks;
}

DataArray generate(const RunConfig& cfg) {
    if (cfg.mode == "random")
        return unitons::random_data(cfg.n, cfg.r, cfg.max_degree, std::nullopt, cfg.seed, cfg.columns);
    if (cfg.mode == "echelon") return unitons::random_data(cfg.n, cfg.r, cfg.max_degree, default_ranks(cfg), cfg.seed);
    if (cfg.mode == "s1") return s1_invariant_data(cfg.n, default_ranks(cfg), cfg.max_degree, cfg.seed);
    throw ParseError("unknown mode '" + cfg.mode + "'");
}

// --input wins; otherwise the data is generated from --mode/--n/--r/--seed.
DataArray load_or_generate(const RunConfig& cfg) {
    if (!cfg.input.empty()) return io::data_array_from_json(io::read_file(cfg.input));
    return generate(cfg);
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    return out;
}

QInvolution q_from_flag(const std::string& q_span, int n) {
    if (q_span.empty()) return QInvolution::identity(n);
    CMatrix basis(n, 0);
    for (const double idx : parse_numbers(q_span, "--q-span")) {
        const int k = static_cast<int>(idx);
        if (k != idx || k < 0 || k >= n) throw ParseError("--q-span indices must be integers in [0, n)");
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = CVector::Unit(n, k);
    }
    return {orthonormal_basis(basis)};
}

int cmd_generate(const RunConfig& cfg) {
    write_output(cfg, io::to_json(generate(cfg)));
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const HarmonicMapSampler sampler(load_or_generate(cfg));
    const auto points = generic_points(sampler, cfg.samples, cfg.seed);
    Tolerances tol;
    tol.residual = cfg.tol;
    const auto report = verify_all(sampler, points, cfg.seed, tol);
    json out = io::to_json(report);
    out["n"] = sampler.n();
    out["r"] = sampler.r();
    write_output(cfg, out);
    return report.all_pass() ? 0 : kExitVerification;
}

int cmd_factorize(const RunConfig& cfg) {
    std::vector<io::LoopFiber> fibers;
    json source = cfg.input.empty() ? json(nullptr) : io::read_file(cfg.input);
    if (source.is_object() && source.contains("fibers")) {
        fibers = io::loop_fibers_from_json(source);
    } else {
        const HarmonicMapSampler sampler(source.is_null() ? generate(cfg) : io::data_array_from_json(source));
        for (const auto z : generic_points(sampler, cfg.samples, cfg.seed))
            fibers.push_back({z, LoopPoly::from_chain(sampler.fiber(z).chain, sampler.n())});
    }

    constexpr double kAngleTol = 1e-7;
    constexpr double kEntryTol = 1e-8;
    json list = json::array();
    bool pass = true;
    for (const auto& f : fibers) {
        json entry{{"z", io::to_json(f.z)}};
        try {
            const Factorization iw = iwasawa_factorize(w_from_loop(f.loop));
            const Factorization ker = kernel_factorize(f.loop);
            double agreement = 0.0;
            for (std::size_t i = 0; i < iw.alphas.size(); ++i)
                agreement = std::max(agreement, iw.alphas[i].rank() == ker.alphas[i].rank()
                                                    ? max_principal_angle(iw.alphas[i], ker.alphas[i])
                                                    : 10.0);
            double reconstruction = 0.0;
            for (const auto lambda : roots_of_unity(8))
                reconstruction = std::max(reconstruction,
                                          (iw.loop(f.loop.n())(lambda) - f.loop(lambda)).cwiseAbs().maxCoeff());
            const bool ok = agreement <= kAngleTol && reconstruction <= kEntryTol;
            pass = pass && ok;
            entry["iwasawa"] = io::to_json(iw.chain, iw.alphas);
            entry["iwasawa_all_proper"] = iw.all_proper();
            entry["kernel"] = io::to_json(ker.chain, ker.alphas);
            entry["agreement"] = agreement;
            entry["reconstruction"] = reconstruction;
            entry["pass"] = ok;
        } catch (const std::runtime_error& e) {
            pass = false;
            entry["error"] = e.what();
            entry["pass"] = false;
        }
        list.push_back(std::move(entry));
    }
    write_output(cfg, {{"fibers", std::move(list)}, {"pass", pass}});
    return pass ? 0 : kExitVerification;
}

int cmd_grassmann(const RunConfig& cfg) {
    const HarmonicMapSampler sampler(load_or_generate(cfg));
    const QInvolution q = q_from_flag(cfg.q_span, sampler.n());
    constexpr double kDefectTol = 1e-7;
    json list = json::array();
    double worst = 0.0;
    for (const auto z : generic_points(sampler, cfg.samples, cfg.seed)) {
        const auto fiber = sampler.fiber(z);
        const WSubspace w = w_from_loop(LoopPoly::from_chain(fiber.chain, sampler.n()), sampler.r());
        const auto result = q_adapted_check(w, q, kDefectTol);
        worst = std::max(worst, result.defect);
        json entry{{"z", io::to_json(z)}, {"w", io::to_json(w)}, {"defect", result.defect},
                   {"adapted", result.defect <= kDefectTol}};
        if (result.defect <= kDefectTol) {
            entry["parity"] = result.parity;
            entry["adapted_basis"] = io::to_json(result.adapted_basis);
        }
        list.push_back(std::move(entry));
    }
    write_output(cfg, {{"q_rank", q.a_span.rank()}, {"max_defect", worst}, {"fibers", std::move(list)}});
    return 0;
}

int cmd_sample(const RunConfig& cfg) {
    const HarmonicMapSampler sampler(load_or_generate(cfg));
    const auto rect = parse_numbers(cfg.rect, "--rect");
    if (rect.size() != 4 || !(rect[0] < rect[1]) || !(rect[2] < rect[3]))
        throw ParseError("--rect expects x0,x1,y0,y1 with x0 < x1 and y0 < y1");
    if (cfg.grid < 1) throw ParseError("--grid must be at least 1");
    json records = json::array();
    for (int iy = 0; iy < cfg.grid; ++iy)
        for (int ix = 0; ix < cfg.grid; ++ix) {
            const double tx = cfg.grid == 1 ? 0.5 : static_cast<double>(ix) / (cfg.grid - 1);
            const double ty = cfg.grid == 1 ? 0.5 : static_cast<double>(iy) / (cfg.grid - 1);
            const cplx z{rect[0] + tx * (rect[1] - rect[0]), rect[2] + ty * (rect[3] - rect[2])};
            json record{{"z", io::to_json(z)}};
            try {
                record["phi"] = io::to_json(sampler.map(z));
            } catch (const DegeneratePoint& e) {
                record["phi"] = nullptr;
                record["degenerate"] = e.what();
            }
            records.push_back(std::move(record));
        }
    write_output(cfg, {{"n", sampler.n()}, {"r", sampler.r()}, {"grid", cfg.grid}, {"records", std::move(records)}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite uniton number harmonic maps into U(n): construction, verification, factorization"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "JSON input file");
        sub->add_option("--output", cfg.output, "output file (default stdout)");
        sub->add_option("--mode", cfg.mode, "data generator when no input is given")
            ->check(CLI::IsMember({"random", "echelon", "s1"}));
        sub->add_option("--n", cfg.n, "ambient dimension")->check(CLI::PositiveNumber);
        sub->add_option("--r", cfg.r, "number of rows (unitons)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--max-degree", cfg.max_degree, "polynomial degree bound")->check(CLI::NonNegativeNumber);
        sub->add_option("--ranks", cfg.ranks, "rank steps d_1 <= ... <= d_r for echelon and s1 modes");
        sub->add_option("--columns", cfg.columns, "number of dense columns in random mode")
            ->check(CLI::PositiveNumber);
        sub->add_option("--samples", cfg.samples, "number of generic sample points")->check(CLI::PositiveNumber);
    };

    auto* gen = app.add_subcommand("generate", "emit a DataArray");
    common(gen);
    auto* ver = app.add_subcommand("verify", "run the verifier suite");
    common(ver);
    ver->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    auto* fac = app.add_subcommand("factorize", "run both factorizations and compare");
    common(fac);
    auto* gr = app.add_subcommand("grassmann", "W fibers and the Q-adapted test");
    common(gr);
    gr->add_option("--q-span", cfg.q_span, "comma-separated basis indices spanning A (default Q = I)");
    auto* smp = app.add_subcommand("sample", "evaluate phi on a grid");
    common(smp);
    smp->add_option("--grid", cfg.grid, "grid resolution m (m x m points)");
    smp->add_option("--rect", cfg.rect, "x0,x1,y0,y1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*gen) return cmd_generate(cfg);
        if (*ver) return cmd_verify(cfg);
        if (*fac) return cmd_factorize(cfg);
        if (*gr) return cmd_grassmann(cfg);
        if (*smp) return cmd_sample(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const io::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const BadShape& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DegeneratePoint& e) {
        std::cerr << "no generic point: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
