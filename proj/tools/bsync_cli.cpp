// Command-line front end: BER sweeps, single-burst slip detection and
// S-curve diagnostics. Exit codes: 0 success, 2 configuration error,
// 3 non-convergence with --strict.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bsync/harness.hpp"
#include "bsync/rng.hpp"
#include "bsync/serialize.hpp"

using namespace bsync;

namespace {

// "start:step:stop" or a single value
bool parse_range(const std::string& text, std::vector<double>& out) {
    out.clear();
    if (text.find(':') == std::string::npos) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size())
                return false;
            out.push_back(v);
            return true;
        } catch (...) {
            return false;
        }
    }
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    ss >> start >> c1 >> step >> c2 >> stop;
    if (ss.fail() || c1 != ':' || c2 != ':' || !(step > 0) || stop < start)
        return false;
    for (double v = start; v <= stop + 1e-9; v += step)
        out.push_back(v);
    return true;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        return false;
    f << content;
    return static_cast<bool>(f);
}

int run_ber(const std::string& mod, const std::string& snr, double eps, int burst, double tau,
            const std::string& pipeline, int segment, int dft_len, int trials,
            std::uint64_t seed, const std::string& out, bool strict) {
    std::vector<double> ebn0;
    if (!parse_range(snr, ebn0)) {
        std::cerr << "bsync: bad --snr-db range: " << snr << "\n";
        return 2;
    }
    const auto pipe = pipeline_from_string(pipeline);
    if (!pipe) {
        std::cerr << "bsync: unknown pipeline: " << pipeline << "\n";
        return 2;
    }

    SweepSpec spec;
    spec.base.modulation = mod == "qpsk" ? Modulation::QPSK : Modulation::BPSK;
    spec.base.pipeline = *pipe;
    spec.base.eps = eps;
    spec.base.burst_len = burst;
    spec.base.tau_over_t = tau;
    spec.base.segment_len = segment;
    spec.base.dft_len = dft_len;
    spec.ebn0_db = ebn0;
    spec.eps = {eps};
    spec.burst_len = {burst};
    spec.trials_per_point = trials;
    spec.base_seed = seed;

    const auto rows = ber_sweep(spec);
    if (!write_file(out, to_csv(rows))) {
        std::cerr << "bsync: cannot write " << out << "\n";
        return 2;
    }
    bool all_converged = true;
    for (const SweepRow& r : rows)
        all_converged = all_converged && r.all_converged;
    if (strict && !all_converged) {
        std::cerr << "bsync: at least one trial did not converge\n";
        return 3;
    }
    return 0;
}

int run_detect(const std::string& mod, double eps, int burst, double snr_db, double tau,
               int dft_len, double threshold, std::uint64_t seed, bool corrected,
               const std::string& dump_u, const std::string& dump_spectrum) {
    TrialConfig cfg;
    cfg.modulation = mod == "qpsk" ? Modulation::QPSK : Modulation::BPSK;
    cfg.burst_len = burst;
    cfg.eps = eps;
    cfg.ebn0_db = snr_db;
    cfg.tau_over_t = tau;
    cfg.dft_len = dft_len;
    cfg.threshold = threshold;
    cfg.seed = seed;
    cfg.pipeline = Pipeline::corrected;
    validate(cfg);

    HarnessContext ctx;
    ctx.modulation = cfg.modulation;
    ctx.symbol_period = 1.0;
    ctx.pulse = srrc_pulse(cfg.rolloff, cfg.span, cfg.oversampling);
    // detection needs no gain calibration
    ctx.gain = DetectorGain{1.0, ctx.pulse.id()};

    const FrontEnd fe = build_front_end(cfg, ctx);
    double rate = fe.assumed_rate;
    if (corrected) {
        const CorrectedRate cr =
            resolve_rate(fe.resampler(), [](const ReceiverSamples& r) { return gardner_errors(r); },
                         fe.assumed_rate, cfg.dft_len, cfg.threshold, cfg.max_rounds);
        rate = cr.rate;
    }
    const auto rx = fe.resampler()(rate);
    if (!rx) {
        std::cerr << "bsync: rate outside stream support\n";
        return 2;
    }
    const TimingErrorSequence u = gardner_errors(*rx);
    const SlipReport report = detect(u, cfg.dft_len, cfg.threshold);

    if (!dump_u.empty()) {
        std::string csv = "k,u\n";
        char buf[48];
        for (std::size_t k = 0; k < u.u.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%.10g\n", k, u.u[k]);
            csv += buf;
        }
        if (!write_file(dump_u, csv)) {
            std::cerr << "bsync: cannot write " << dump_u << "\n";
            return 2;
        }
    }
    if (!dump_spectrum.empty()) {
        const auto spec = spectrum(u, cfg.dft_len);
        std::string csv = "bin,magnitude\n";
        char buf[48];
        for (std::size_t l = 0; l < spec.size() / 2; ++l) {
            std::snprintf(buf, sizeof buf, "%zu,%.10g\n", l, std::abs(spec[l]));
            csv += buf;
        }
        if (!write_file(dump_spectrum, csv)) {
            std::cerr << "bsync: cannot write " << dump_spectrum << "\n";
            return 2;
        }
    }

    std::cout << to_json(report) << "\n";
    return 0;
}

int run_scurve(double rolloff, int points, int symbols, int span, int oversampling,
               std::uint64_t seed, const std::string& out) {
    if (points < 2) {
        std::cerr << "bsync: --points must be at least 2\n";
        return 2;
    }
    const PulseShape pulse = srrc_pulse(rolloff, span, oversampling);
    std::vector<double> offsets(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        offsets[static_cast<std::size_t>(i)] = -0.45 + 0.9 * (i + 0.5) / points;
    const auto pts = s_curve(pulse, Modulation::BPSK, offsets, symbols, seed);

    std::string csv = "offset,mean_u,stderr\n";
    char buf[96];
    for (const SCurvePoint& p : pts) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", p.offset, p.mean_u, p.stderr_u);
        csv += buf;
    }
    if (!write_file(out, csv)) {
        std::cerr << "bsync: cannot write " << out << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"burst-mode symbol timing recovery with cycle-slip correction"};
    app.require_subcommand(1);

    // ber
    auto* ber = app.add_subcommand("ber", "Monte-Carlo BER sweep over Eb/N0, CSV output");
    std::string mod = "bpsk", snr = "8", pipeline = "corrected", out;
    double eps = 0.1, tau = 0.2;
    int burst = 300, segment = 50, dft_len = 5000, trials = 100;
    std::uint64_t seed = 1;
    bool strict = false;
    ber->add_option("--mod", mod)->check(CLI::IsMember({"bpsk", "qpsk"}));
    ber->add_option("--snr-db", snr, "Eb/N0 in dB, single value or start:step:stop");
    ber->add_option("--eps", eps, "normalized symbol rate offset");
    ber->add_option("--burst", burst, "burst length in symbols");
    ber->add_option("--tau", tau, "initial timing offset in symbols");
    ber->add_option("--pipeline", pipeline)
        ->check(CLI::IsMember({"corrected", "uncorrected", "burst-by-burst", "genie"}));
    ber->add_option("--segment", segment, "segment length for burst-by-burst");
    ber->add_option("--dft-len", dft_len, "DFT length for slip detection");
    ber->add_option("--trials", trials, "bursts per grid point");
    ber->add_option("--seed", seed, "base seed");
    ber->add_option("--out", out, "output CSV path")->required();
    ber->add_flag("--strict", strict, "exit 3 if any trial fails to converge");

    // detect
    auto* det = app.add_subcommand("detect", "single-burst slip detection, JSON output");
    std::string dmod = "bpsk", dump_u, dump_spectrum;
    double deps = 0.1, dsnr = 10.0, dtau = 0.2, threshold = kDefaultSlipThreshold;
    int dburst = 500, ddft = 5000;
    std::uint64_t dseed = 1;
    bool corrected = false;
    det->add_option("--mod", dmod)->check(CLI::IsMember({"bpsk", "qpsk"}));
    det->add_option("--eps", deps, "normalized symbol rate offset");
    det->add_option("--burst", dburst, "burst length in symbols");
    det->add_option("--snr-db", dsnr, "Eb/N0 in dB (inf for noiseless)");
    det->add_option("--tau", dtau, "initial timing offset in symbols");
    det->add_option("--dft-len", ddft, "DFT length");
    det->add_option("--threshold", threshold, "slip dominance threshold");
    det->add_option("--seed", dseed, "seed");
    det->add_flag("--corrected", corrected, "detect after rate correction");
    det->add_option("--dump-u", dump_u, "write the timing-error sequence to CSV");
    det->add_option("--dump-spectrum", dump_spectrum, "write DFT magnitudes to CSV");

    // scurve
    auto* scv = app.add_subcommand("scurve", "detector S-curve diagnostic, CSV output");
    double rolloff = 0.5;
    int points = 25, symbols = 6000, span = 10, oversampling = 16;
    std::uint64_t sseed = 1;
    std::string sout;
    scv->add_option("--rolloff", rolloff, "SRRC roll-off factor");
    scv->add_option("--points", points, "number of offsets in (-0.45T, 0.45T)");
    scv->add_option("--symbols", symbols, "symbols per offset");
    scv->add_option("--span", span, "pulse span in symbols");
    scv->add_option("--oversampling", oversampling, "samples per symbol");
    scv->add_option("--seed", sseed, "seed");
    scv->add_option("--out", sout, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (ber->parsed())
            return run_ber(mod, snr, eps, burst, tau, pipeline, segment, dft_len, trials, seed,
                           out, strict);
        if (det->parsed())
            return run_detect(dmod, deps, dburst, dsnr, dtau, ddft, threshold, dseed, corrected,
                              dump_u, dump_spectrum);
        if (scv->parsed())
            return run_scurve(rolloff, points, symbols, span, oversampling, sseed, sout);
    } catch (const std::exception& e) {
        std::cerr << "bsync: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
