#include "pvq/cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pvq/analysis/analysis.hpp"
#include "pvq/io/formats.hpp"
#include "pvq/io/io.hpp"
#include "pvq/keyproto/keyproto.hpp"
#include "pvq/noise/noise.hpp"
#include "pvq/photonics/photonics.hpp"
#include "pvq/qcore/rng.hpp"
#include "pvq/randtests/randtests.hpp"
#include "pvq/verify/verify.hpp"

namespace pvq::cli {

namespace {

using json = nlohmann::ordered_json;

// Shared source/noise flag block used by generate and the key session.
struct SourceFlags {
    double pump_mw = 1.0;
    double duration_s = 1.0;
    double pair_rate = 16400.0;
    double efficiency = 0.915;
    double accidental_rate = -1.0;
    double window_ns = 1.0;
    std::uint64_t seed = 1;
    double p = 0.0;
    double alpha = 0.70710678118654752440;
    double theta_hwp = 0.0;
    double theta_pol = 0.0;
};

void add_source_flags(CLI::App* cmd, SourceFlags& f, bool with_polarizer) {
    cmd->add_option("--pump-mw", f.pump_mw, "Pump power in mW")->capture_default_str();
    cmd->add_option("--duration-s", f.duration_s, "Simulated duration in seconds")->capture_default_str();
    cmd->add_option("--pair-rate", f.pair_rate, "Pair rate per mW in Hz")->capture_default_str();
    cmd->add_option("--efficiency", f.efficiency, "Fraction of pairs yielding a coincidence")
        ->capture_default_str();
    cmd->add_option("--accidental-rate", f.accidental_rate,
                    "Accidental singles rate per side in Hz; negative derives the pump-power default")
        ->capture_default_str();
    cmd->add_option("--window-ns", f.window_ns, "Coincidence window in ns")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--p", f.p, "Depolarizing probability")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Non-maximal pair amplitude")->capture_default_str();
    cmd->add_option("--theta-hwp", f.theta_hwp, "Wave-plate angle on arm A, radians")->capture_default_str();
    if (with_polarizer)
        cmd->add_option("--theta-pol", f.theta_pol, "Polarizer angle on arm B, radians")->capture_default_str();
}

photonics::SourceConfig to_source_config(const SourceFlags& f) {
    photonics::SourceConfig src;
    src.pump_power_mw = f.pump_mw;
    src.duration_s = f.duration_s;
    src.pair_rate_per_mw_hz = f.pair_rate;
    src.coincidence_efficiency = f.efficiency;
    src.accidental_rate_hz = f.accidental_rate;
    src.coincidence_window_s = f.window_ns * 1e-9;
    src.seed = f.seed;
    return src;
}

noise::NoiseConfig to_noise_config(const SourceFlags& f) {
    noise::NoiseConfig cfg;
    cfg.p = f.p;
    cfg.alpha = f.alpha;
    cfg.theta_h = f.theta_hwp;
    cfg.theta_p = f.theta_pol;
    return cfg;
}

verify::Role parse_role(const std::string& letter) {
    if (letter.size() == 1) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(letter[0])));
        if (c >= 'A' && c <= 'D') return static_cast<verify::Role>(c - 'A');
    }
    throw std::invalid_argument("role must be one of A, B, C, D; got '" + letter + "'");
}

std::string role_letter(verify::Role role) {
    return std::string(1, static_cast<char>('A' + static_cast<int>(role)));
}

// "verify=A,discard=D" in either order; the kept columns follow letter order.
verify::RolePartition parse_roles(const std::string& text) {
    verify::Role verify_role = verify::Role::A;
    verify::Role discard_role = verify::Role::D;
    bool saw_verify = false, saw_discard = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("roles: expected key=letter, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const verify::Role value = parse_role(item.substr(eq + 1));
        if (key == "verify") {
            verify_role = value;
            saw_verify = true;
        } else if (key == "discard") {
            discard_role = value;
            saw_discard = true;
        } else {
            throw std::invalid_argument("roles: unknown key '" + key + "'");
        }
        pos = comma + 1;
    }
    if (!saw_verify || !saw_discard)
        throw std::invalid_argument("roles: both verify= and discard= are required");
    return verify::make_role_partition(verify_role, discard_role);
}

// "lo:hi:n" for an even grid, otherwise a comma-separated value list.
std::vector<double> parse_grid(const std::string& text) {
    const auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("grid: bad number '" + s + "'");
        return v;
    };
    const std::size_t c1 = text.find(':');
    if (c1 != std::string::npos) {
        const std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument("grid: expected lo:hi:n");
        const double lo = to_double(text.substr(0, c1));
        const double hi = to_double(text.substr(c1 + 1, c2 - c1 - 1));
        const long n = std::stol(text.substr(c2 + 1));
        if (n < 1) throw std::invalid_argument("grid: need at least one point");
        return analysis::linspace(lo, hi, static_cast<std::size_t>(n));
    }
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        grid.push_back(to_double(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return grid;
}

void emit_report(const json& report, std::ostream& out, const std::string& report_path) {
    const std::string text = report.dump(2);
    out << text << '\n';
    if (!report_path.empty()) {
        std::ofstream file(report_path, std::ios::binary);
        if (!file) throw io::format_error("cannot write report file: " + report_path);
        file << text << '\n';
    }
}

json rate_json(const photonics::RateReport& rate) {
    return json{{"coincidences_per_s", rate.coincidences_per_s},
                {"per_string_kbps", rate.per_string_kbps},
                {"collective_kbps", rate.collective_kbps},
                {"secure_kbps", rate.secure_kbps}};
}

// ---- generate ----

struct GenerateOptions {
    SourceFlags source;
    unsigned workers = 1;
    std::string out_path;
    std::string report_path;
    bool no_timestamps = false;
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
    const photonics::SourceConfig src = to_source_config(opt.source);
    const noise::NoiseConfig noise_cfg = to_noise_config(opt.source);

    const auto streams = photonics::simulate_detections(src, noise::record_state(noise_cfg), opt.workers);
    photonics::BitRecordStream stream = photonics::coincidence_postselect(streams, src.coincidence_window_s);
    if (noise_cfg.theta_p != 0.0) {
        const std::uint64_t pol_seed = qcore::Rng::derive_stream_seed(src.seed, 0x8000000000000000ull);
        stream = photonics::polarizer_postselect(stream, noise_cfg.theta_p, pol_seed);
    }
    if (opt.no_timestamps) stream.timestamps.clear();
    io::write_record_file(opt.out_path, stream);

    json report{{"command", "generate"},
                {"out", opt.out_path},
                {"n_records", stream.size()},
                {"duration_s", src.duration_s},
                {"seed", src.seed},
                {"pump_mw", src.pump_power_mw},
                {"rate", rate_json(photonics::rate_summary(stream, src.duration_s))}};
    emit_report(report, out, opt.report_path);
    return kOk;
}

// ---- verify ----

struct VerifyOptions {
    std::string input;
    double sample_fraction = 0.1;
    double threshold = 0.95;
    std::uint64_t seed = 1;
    std::string roles = "verify=A,discard=D";
    std::string out_prefix;
    std::string report_path;
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
    const photonics::BitRecordStream stream = io::read_record_file(opt.input);
    const verify::RolePartition roles = parse_roles(opt.roles);
    const verify::EntanglementVerification ver =
        verify::entanglement_verification(stream, opt.sample_fraction, opt.threshold, opt.seed);
    const verify::PipelineResult pipe = verify::public_verification_pipeline(ver.surviving, roles);

    json report{{"command", "verify"},
                {"input", opt.input},
                {"n_records", stream.size()},
                {"sample_fraction", opt.sample_fraction},
                {"threshold", opt.threshold},
                {"seed", opt.seed},
                {"sampled",
                 {{"n_records", ver.report.n_records},
                  {"n_violations", ver.report.n_violations},
                  {"qber", ver.report.qber},
                  {"pass_fraction", ver.report.pass_fraction},
                  {"pass", ver.report.pass}}},
                {"surviving_records", ver.surviving.size()},
                {"roles",
                 {{"verify", role_letter(roles.verify_role)},
                  {"discard", role_letter(roles.discard_role)},
                  {"keep_1", role_letter(roles.keep_1)},
                  {"keep_2", role_letter(roles.keep_2)}}},
                {"public_bits", pipe.public_bits.size()},
                {"merged_bits", pipe.merged_bits.size()}};

    if (ver.report.pass && !opt.out_prefix.empty()) {
        io::write_bit_file(opt.out_prefix + "_public.pvq1", pipe.public_bits);
        io::write_bit_file(opt.out_prefix + "_keep1.pvq1", pipe.keep_bits_1);
        io::write_bit_file(opt.out_prefix + "_keep2.pvq1", pipe.keep_bits_2);
        io::write_bit_file(opt.out_prefix + "_merged.pvq1", pipe.merged_bits);
        io::write_record_file(opt.out_prefix + "_surviving.pvq4", ver.surviving);
        report["out_prefix"] = opt.out_prefix;
    }
    emit_report(report, out, opt.report_path);
    return ver.report.pass ? kOk : kVerificationFailure;
}

// ---- test ----

struct TestOptions {
    std::string input;
    std::string column = "A";
    std::size_t block_frequency_block = 128;
    int serial_m = 16;
    int apen_m = 10;
    double significance = 0.01;
    bool require_pass = false;
    std::string report_path;
};

int cmd_test(const TestOptions& opt, std::ostream& out) {
    const std::string magic = io::sniff_magic(opt.input);
    std::vector<std::uint8_t> bits;
    if (magic == "PVQ4") {
        const photonics::BitRecordStream stream = io::read_record_file(opt.input);
        bits = photonics::column_bits(stream, static_cast<int>(parse_role(opt.column)));
    } else if (magic == "PVQ1") {
        bits = io::read_bit_file(opt.input);
    } else {
        throw io::format_error("test: input is neither a record file nor a bit file");
    }

    randtests::BatteryParams params;
    params.block_frequency_block = opt.block_frequency_block;
    params.serial_m = opt.serial_m;
    params.apen_m = opt.apen_m;
    params.alpha = opt.significance;
    const randtests::TestReport battery = randtests::run_battery(bits, params);

    json rows = json::array();
    for (const auto& r : battery.results) {
        rows.push_back(json{{"name", r.name},
                            {"p_value", std::isnan(r.p_value) ? json() : json(r.p_value)},
                            {"pass", r.pass},
                            {"applicable", r.applicable},
                            {"note", r.note}});
    }
    json report{{"command", "test"},      {"input", opt.input},   {"n_bits", battery.n_bits},
                {"alpha", params.alpha},  {"results", rows},      {"all_pass", battery.all_pass}};
    if (magic == "PVQ4") report["column"] = opt.column;
    emit_report(report, out, opt.report_path);
    return (opt.require_pass && !battery.all_pass) ? kVerificationFailure : kOk;
}

// ---- keys ----

struct KeyFileOptions {
    std::string records_path;
    std::string in_path;
    std::string out_path;
    std::string report_path;
};

int cmd_keys_encrypt(const KeyFileOptions& opt, std::ostream& out) {
    keyproto::KeyBundle bundle = keyproto::derive_keys(io::read_record_file(opt.records_path));
    keyproto::encrypt_file(opt.in_path, opt.out_path, bundle);
    json report{{"command", "keys encrypt"},
                {"records", opt.records_path},
                {"n_records", bundle.size()},
                {"consumed_bits", bundle.consumed},
                {"remaining_bits", bundle.available()},
                {"out", opt.out_path}};
    emit_report(report, out, opt.report_path);
    return kOk;
}

int cmd_keys_decrypt(const KeyFileOptions& opt, std::ostream& out) {
    const keyproto::KeyBundle bundle = keyproto::derive_keys(io::read_record_file(opt.records_path));
    keyproto::decrypt_file(opt.in_path, opt.out_path, bundle.bob_private_1, bundle.bob_private_2);
    json report{{"command", "keys decrypt"},
                {"records", opt.records_path},
                {"in", opt.in_path},
                {"out", opt.out_path}};
    emit_report(report, out, opt.report_path);
    return kOk;
}

struct SessionOptions {
    SourceFlags source;
    std::uint64_t bob_seed = 0;
    bool bob_seed_set = false;
    double bob_window_ns = 0.0;
    bool bob_window_set = false;
    std::string sender = "alice";
    std::string in_path;
    std::string out_path;
    std::string transcript_path;
    std::string report_path;
};

int cmd_keys_session(const SessionOptions& opt, std::ostream& out) {
    keyproto::EndpointConfig alice;
    alice.source = to_source_config(opt.source);
    alice.noise = to_noise_config(opt.source);
    alice.window_s = opt.source.window_ns * 1e-9;

    keyproto::EndpointConfig bob = alice;
    if (opt.bob_seed_set) bob.source.seed = opt.bob_seed;
    if (opt.bob_window_set) bob.window_s = opt.bob_window_ns * 1e-9;

    const keyproto::Bits message = keyproto::bytes_to_bits(io::read_file_bytes(opt.in_path));
    const keyproto::SenderRole sender =
        opt.sender == "bob" ? keyproto::SenderRole::bob : keyproto::SenderRole::alice;
    const keyproto::SessionResult result = keyproto::session_run(alice, bob, message, sender);

    if (!opt.transcript_path.empty()) {
        std::vector<std::uint8_t> wire;
        for (const auto& entry : result.transcript) {
            io::append_u8(wire, entry.sender == "alice" ? 0 : 1);
            const auto frame = keyproto::encode_frame(entry.frame);
            wire.insert(wire.end(), frame.begin(), frame.end());
        }
        io::write_file_bytes(opt.transcript_path, wire);
    }
    if (result.success && !opt.out_path.empty())
        io::write_file_bytes(opt.out_path, keyproto::bits_to_bytes(result.decrypted));

    json report{{"command", "keys session"},
                {"sender", opt.sender},
                {"message_bits", message.size()},
                {"success", result.success},
                {"n_matched", result.n_matched},
                {"transcript_frames", result.transcript.size()}};
    if (!result.success) report["failure_reason"] = result.failure_reason;
    if (result.success && !opt.out_path.empty()) report["out"] = opt.out_path;
    emit_report(report, out, opt.report_path);
    return result.success ? kOk : kProtocolFailure;
}

// ---- analyze ----

struct AnalyzeOptions {
    std::string sweep;
    std::string grid;
    std::string out_path;
    double pump_mw = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples_per_row = 20000;
    std::size_t battery_bits = 1000000;
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
    analysis::SweepConfig cfg;
    cfg.pump_power_mw = opt.pump_mw;
    cfg.seed = opt.seed;
    cfg.samples_per_row = opt.samples_per_row;
    cfg.battery_bits = opt.battery_bits;

    analysis::SweepTable table;
    if (opt.sweep == "depolarizing") {
        table = analysis::sweep_depolarizing(
            opt.grid.empty() ? analysis::default_depolarizing_grid() : parse_grid(opt.grid), cfg);
    } else if (opt.sweep == "hwp") {
        table = analysis::sweep_hwp(opt.grid.empty() ? analysis::default_hwp_grid() : parse_grid(opt.grid), cfg);
    } else if (opt.sweep == "polarizer") {
        table = analysis::sweep_polarizer(
            opt.grid.empty() ? analysis::default_polarizer_grid() : parse_grid(opt.grid), cfg);
    } else {
        throw std::invalid_argument("analyze: unknown sweep '" + opt.sweep + "'");
    }

    const std::string csv = table.to_csv();
    if (opt.out_path.empty()) {
        out << csv;
    } else {
        std::ofstream file(opt.out_path, std::ios::binary);
        if (!file) throw io::format_error("cannot write CSV file: " + opt.out_path);
        file << csv;
        out << json{{"command", "analyze"}, {"sweep", opt.sweep}, {"rows", table.rows.size()},
                    {"out", opt.out_path}}
                   .dump(2)
            << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Four-qubit photonic randomness and key toolkit"};
    app.name("pvq");
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("generate", "Simulate a source run and write a record file");
    add_source_flags(gen_cmd, gen.source, true);
    gen_cmd->add_option("--workers", gen.workers, "Worker threads")->capture_default_str();
    gen_cmd->add_option("--out", gen.out_path, "Output record file (PVQ4)")->required();
    gen_cmd->add_option("--report", gen.report_path, "Also write the JSON report here");
    gen_cmd->add_flag("--no-timestamps", gen.no_timestamps, "Drop the timestamp column");

    VerifyOptions ver;
    CLI::App* ver_cmd = app.add_subcommand("verify", "Sampled entanglement verification and key split");
    ver_cmd->add_option("input", ver.input, "Record file (PVQ4)")->required();
    ver_cmd->add_option("--sample-fraction", ver.sample_fraction, "Fraction of records consumed by the check")
        ->capture_default_str();
    ver_cmd->add_option("--threshold", ver.threshold, "Pass-fraction threshold")->capture_default_str();
    ver_cmd->add_option("--seed", ver.seed, "Sampling seed")->capture_default_str();
    ver_cmd->add_option("--roles", ver.roles, "Column roles, e.g. verify=A,discard=D")->capture_default_str();
    ver_cmd->add_option("--out-prefix", ver.out_prefix,
                        "Write <prefix>_public/_keep1/_keep2/_merged.pvq1 and <prefix>_surviving.pvq4");
    ver_cmd->add_option("--report", ver.report_path, "Also write the JSON report here");

    TestOptions tst;
    CLI::App* tst_cmd = app.add_subcommand("test", "Run the statistical battery over a bit stream");
    tst_cmd->add_option("input", tst.input, "Bit file (PVQ1) or record file (PVQ4)")->required();
    tst_cmd->add_option("--column", tst.column, "Column letter for record files")->capture_default_str();
    tst_cmd->add_option("--block-size", tst.block_frequency_block, "Block length for block frequency")
        ->capture_default_str();
    tst_cmd->add_option("--serial-m", tst.serial_m, "Serial test block length")->capture_default_str();
    tst_cmd->add_option("--apen-m", tst.apen_m, "Approximate-entropy block length")->capture_default_str();
    tst_cmd->add_option("--significance", tst.significance, "Per-test significance level")->capture_default_str();
    tst_cmd->add_flag("--require-pass", tst.require_pass, "Exit nonzero unless every test passes");
    tst_cmd->add_option("--report", tst.report_path, "Also write the JSON report here");

    CLI::App* keys_cmd = app.add_subcommand("keys", "Key derivation, file encryption and the session demo");
    keys_cmd->require_subcommand(1);

    KeyFileOptions enc;
    CLI::App* enc_cmd = keys_cmd->add_subcommand("encrypt", "Encrypt a file with record-derived keys");
    enc_cmd->add_option("--records", enc.records_path, "Record file supplying key material")->required();
    enc_cmd->add_option("--in", enc.in_path, "Plaintext file")->required();
    enc_cmd->add_option("--out", enc.out_path, "Ciphertext file (PVQC)")->required();
    enc_cmd->add_option("--report", enc.report_path, "Also write the JSON report here");

    KeyFileOptions dec;
    CLI::App* dec_cmd = keys_cmd->add_subcommand("decrypt", "Decrypt a ciphertext file");
    dec_cmd->add_option("--records", dec.records_path, "Record file supplying key material")->required();
    dec_cmd->add_option("--in", dec.in_path, "Ciphertext file (PVQC)")->required();
    dec_cmd->add_option("--out", dec.out_path, "Recovered plaintext file")->required();
    dec_cmd->add_option("--report", dec.report_path, "Also write the JSON report here");

    SessionOptions ses;
    CLI::App* ses_cmd = keys_cmd->add_subcommand("session", "Run the two-endpoint protocol in process");
    add_source_flags(ses_cmd, ses.source, false);
    ses_cmd->add_option("--bob-seed", ses.bob_seed, "Bob-side seed when it differs from --seed");
    ses_cmd->add_option("--bob-window-ns", ses.bob_window_ns, "Bob-side matching window when it differs");
    ses_cmd->add_option("--sender", ses.sender, "Which endpoint sends the message")
        ->check(CLI::IsMember({"alice", "bob"}))
        ->capture_default_str();
    ses_cmd->add_option("--in", ses.in_path, "Message file")->required();
    ses_cmd->add_option("--out", ses.out_path, "Write the receiver's decryption here");
    ses_cmd->add_option("--transcript", ses.transcript_path, "Write the binary channel transcript here");
    ses_cmd->add_option("--report", ses.report_path, "Also write the JSON report here");

    AnalyzeOptions ana;
    CLI::App* ana_cmd = app.add_subcommand("analyze", "Run an imperfection sweep and emit CSV");
    ana_cmd->add_option("--sweep", ana.sweep, "depolarizing, hwp or polarizer")
        ->required()
        ->check(CLI::IsMember({"depolarizing", "hwp", "polarizer"}));
    ana_cmd->add_option("--grid", ana.grid, "lo:hi:n or comma-separated values (default per sweep)");
    ana_cmd->add_option("--out", ana.out_path, "CSV output path (default: stdout)");
    ana_cmd->add_option("--pump-mw", ana.pump_mw, "Pump power in mW")->capture_default_str();
    ana_cmd->add_option("--seed", ana.seed, "Random seed")->capture_default_str();
    ana_cmd->add_option("--samples-per-row", ana.samples_per_row, "Sampled records per wave-plate row")
        ->capture_default_str();
    ana_cmd->add_option("--battery-bits", ana.battery_bits, "Bits fed to the battery per polarizer row")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pvq");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        ses.bob_seed_set = ses_cmd->count("--bob-seed") > 0;
        ses.bob_window_set = ses_cmd->count("--bob-window-ns") > 0;

        if (gen_cmd->parsed()) return cmd_generate(gen, out);
        if (ver_cmd->parsed()) return cmd_verify(ver, out);
        if (tst_cmd->parsed()) return cmd_test(tst, out);
        if (keys_cmd->parsed()) {
            if (enc_cmd->parsed()) return cmd_keys_encrypt(enc, out);
            if (dec_cmd->parsed()) return cmd_keys_decrypt(dec, out);
            if (ses_cmd->parsed()) return cmd_keys_session(ses, out);
        }
        if (ana_cmd->parsed()) return cmd_analyze(ana, out);
        err << "pvq: no command\n";
        return kConfigError;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    } catch (const io::format_error& e) {
        err << "format error: " << e.what() << '\n';
        return kFormatError;
    } catch (const keyproto::protocol_error& e) {
        err << "protocol failure: " << e.what() << '\n';
        return kProtocolFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace pvq::cli
