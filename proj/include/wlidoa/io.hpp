///
/// \file io.hpp
///
/// Plain-text, self-describing file formats (header lines key=value, complex
/// samples as "re,im" rows) plus the CSV emitters used by the CLI and the
/// experiment harness.
///
#ifndef WLIDOA_IO_HPP
#define WLIDOA_IO_HPP

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wlidoa/array_model.hpp"
#include "wlidoa/completion.hpp"
#include "wlidoa/doa.hpp"
#include "wlidoa/harness.hpp"
#include "wlidoa/types.hpp"

namespace wlidoa {

namespace detail {

inline std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_complex(Complex z)
{
    return fmt_double(z.real()) + "," + fmt_double(z.imag());
}

inline Complex parse_complex(const std::string& line)
{
    const auto comma = line.find(',');
    check(comma != std::string::npos, "file format: expected re,im row, got '" + line + "'");
    return {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

inline void write_complex_rows(std::ostream& os, const ComplexMatrix& m)
{
    for (int t = 0; t < m.cols(); ++t) {
        for (int i = 0; i < m.rows(); ++i) {
            os << fmt_complex(m(i, t)) << "\n";
        }
    }
}

} // namespace detail

struct SnapshotFile {
    int n = 0;
    int m = 0;
    int snapshots = 1;
    double spacing_ratio = 0.5;
    double noise_eta = 0.0;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    IndexSet omega;
    std::optional<SourceSet> sources;
    ComplexMatrix y_obs;                 ///< M x T
    std::optional<ComplexMatrix> y_full; ///< N x T
    std::optional<ComplexMatrix> noise;  ///< N x T
};

inline void write_snapshot_file(const std::string& path, const SnapshotFile& f)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "# wlidoa snapshot v1\n";
    os << "n=" << f.n << "\n";
    os << "m=" << f.m << "\n";
    os << "snapshots=" << f.snapshots << "\n";
    os << "spacing_ratio=" << detail::fmt_double(f.spacing_ratio) << "\n";
    os << "noise_eta=" << detail::fmt_double(f.noise_eta) << "\n";
    if (f.snr_db) {
        os << "snr_db=" << detail::fmt_double(*f.snr_db) << "\n";
    }
    os << "seed=" << f.seed << "\n";
    os << "omega=";
    for (std::size_t i = 0; i < f.omega.size(); ++i) {
        os << (i ? "," : "") << f.omega[i];
    }
    os << "\n";
    if (f.sources) {
        os << "sources=";
        for (int k = 0; k < f.sources->count(); ++k) {
            const auto& s = f.sources->sources[static_cast<std::size_t>(k)];
            os << (k ? ";" : "") << detail::fmt_double(s.theta_deg) << ":"
               << detail::fmt_double(s.amplitude.real()) << ":"
               << detail::fmt_double(s.amplitude.imag());
        }
        os << "\n";
    }
    os << "y_obs:\n";
    detail::write_complex_rows(os, f.y_obs);
    if (f.y_full) {
        os << "y_full:\n";
        detail::write_complex_rows(os, *f.y_full);
    }
    if (f.noise) {
        os << "noise:\n";
        detail::write_complex_rows(os, *f.noise);
    }
}

inline SnapshotFile read_snapshot_file(const std::string& path)
{
    std::ifstream is(path);
    detail::check(is.good(), "cannot open: " + path);
    SnapshotFile f;
    std::string line;
    std::string section;
    std::vector<Complex> buf;
    auto flush = [&]() {
        if (section.empty()) {
            return;
        }
        const int rows = section == "y_obs" ? f.m : f.n;
        detail::check(static_cast<int>(buf.size()) == rows * f.snapshots,
                      "file format: wrong row count in section " + section);
        ComplexMatrix m(rows, f.snapshots);
        for (int t = 0; t < f.snapshots; ++t) {
            for (int i = 0; i < rows; ++i) {
                m(i, t) = buf[static_cast<std::size_t>(t * rows + i)];
            }
        }
        if (section == "y_obs") {
            f.y_obs = m;
        } else if (section == "y_full") {
            f.y_full = m;
        } else if (section == "noise") {
            f.noise = m;
        }
        buf.clear();
    };
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.back() == ':') {
            flush();
            section = line.substr(0, line.size() - 1);
            continue;
        }
        if (!section.empty()) {
            buf.push_back(detail::parse_complex(line));
            continue;
        }
        const auto eq = line.find('=');
        detail::check(eq != std::string::npos, "file format: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "n") {
            f.n = std::stoi(val);
        } else if (key == "m") {
            f.m = std::stoi(val);
        } else if (key == "snapshots") {
            f.snapshots = std::stoi(val);
        } else if (key == "spacing_ratio") {
            f.spacing_ratio = std::stod(val);
        } else if (key == "noise_eta") {
            f.noise_eta = std::stod(val);
        } else if (key == "snr_db") {
            f.snr_db = std::stod(val);
        } else if (key == "seed") {
            f.seed = std::stoull(val);
        } else if (key == "omega") {
            for (const auto& tok : detail::split(val, ',')) {
                if (!tok.empty()) {
                    f.omega.push_back(std::stoi(tok));
                }
            }
        } else if (key == "sources") {
            SourceSet s;
            s.spacing_ratio = f.spacing_ratio;
            for (const auto& tok : detail::split(val, ';')) {
                const auto parts = detail::split(tok, ':');
                detail::check(parts.size() == 3, "file format: bad source entry '" + tok + "'");
                s.sources.push_back(
                    {std::stod(parts[0]), Complex(std::stod(parts[1]), std::stod(parts[2]))});
            }
            f.sources = s;
        } else {
            throw std::invalid_argument("file format: unknown key '" + key + "'");
        }
    }
    flush();
    detail::check(f.n >= 1 && f.y_obs.size() > 0, "file format: missing n or y_obs");
    if (f.sources) {
        f.sources->spacing_ratio = f.spacing_ratio;
    }
    return f;
}

struct CompletedFile {
    int n = 0;
    int snapshots = 1;
    double spacing_ratio = 0.5;
    std::string weights_mode = "minimax";
    double weights_floor = 0.05;
    std::string lifting_kind = "hankel";
    int lifting_d = 0;
    double rho = 1e3;
    double gamma = 1e5;
    int iters = 0;
    int rank = 0;
    int iterations_run = 0;
    int final_rank_estimate = 0;
    ComplexMatrix y_hat;
};

inline void write_completed_file(const std::string& path, const CompletedFile& f)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "# wlidoa completed v1\n";
    os << "n=" << f.n << "\n";
    os << "snapshots=" << f.snapshots << "\n";
    os << "spacing_ratio=" << detail::fmt_double(f.spacing_ratio) << "\n";
    os << "weights.mode=" << f.weights_mode << "\n";
    os << "weights.floor=" << detail::fmt_double(f.weights_floor) << "\n";
    os << "lifting.kind=" << f.lifting_kind << "\n";
    os << "lifting.d=" << f.lifting_d << "\n";
    os << "solver.rho=" << detail::fmt_double(f.rho) << "\n";
    os << "solver.gamma=" << detail::fmt_double(f.gamma) << "\n";
    os << "solver.iters=" << f.iters << "\n";
    os << "solver.rank=" << f.rank << "\n";
    os << "iterations_run=" << f.iterations_run << "\n";
    os << "final_rank_estimate=" << f.final_rank_estimate << "\n";
    os << "y_hat:\n";
    detail::write_complex_rows(os, f.y_hat);
}

inline CompletedFile read_completed_file(const std::string& path)
{
    std::ifstream is(path);
    detail::check(is.good(), "cannot open: " + path);
    CompletedFile f;
    std::string line;
    bool in_rows = false;
    std::vector<Complex> buf;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line == "y_hat:") {
            in_rows = true;
            continue;
        }
        if (in_rows) {
            buf.push_back(detail::parse_complex(line));
            continue;
        }
        const auto eq = line.find('=');
        detail::check(eq != std::string::npos, "file format: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "n") f.n = std::stoi(val);
        else if (key == "snapshots") f.snapshots = std::stoi(val);
        else if (key == "spacing_ratio") f.spacing_ratio = std::stod(val);
        else if (key == "weights.mode") f.weights_mode = val;
        else if (key == "weights.floor") f.weights_floor = std::stod(val);
        else if (key == "lifting.kind") f.lifting_kind = val;
        else if (key == "lifting.d") f.lifting_d = std::stoi(val);
        else if (key == "solver.rho") f.rho = std::stod(val);
        else if (key == "solver.gamma") f.gamma = std::stod(val);
        else if (key == "solver.iters") f.iters = std::stoi(val);
        else if (key == "solver.rank") f.rank = std::stoi(val);
        else if (key == "iterations_run") f.iterations_run = std::stoi(val);
        else if (key == "final_rank_estimate") f.final_rank_estimate = std::stoi(val);
        else throw std::invalid_argument("file format: unknown key '" + key + "'");
    }
    detail::check(f.n >= 1 && static_cast<int>(buf.size()) == f.n * f.snapshots,
                  "file format: y_hat row count mismatch");
    f.y_hat.resize(f.n, f.snapshots);
    for (int t = 0; t < f.snapshots; ++t) {
        for (int i = 0; i < f.n; ++i) {
            f.y_hat(i, t) = buf[static_cast<std::size_t>(t * f.n + i)];
        }
    }
    return f;
}

inline void write_trace_csv(const std::string& path, const std::vector<TracePoint>& trace)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "iter,feas_residual,data_residual\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << (i + 1) << "," << detail::fmt_double(trace[i].feas) << ","
           << detail::fmt_double(trace[i].data) << "\n";
    }
}

inline void write_weights_csv(const std::string& path, const WeightPair& w)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "index,w_left,w_right\n";
    const int rows = std::max<int>(static_cast<int>(w.w_left.size()),
                                   static_cast<int>(w.w_right.size()));
    for (int i = 0; i < rows; ++i) {
        os << (i + 1) << ",";
        if (i < w.w_left.size()) os << detail::fmt_double(w.w_left(i));
        os << ",";
        if (i < w.w_right.size()) os << detail::fmt_double(w.w_right(i));
        os << "\n";
    }
}

inline void write_estimates_csv(const std::string& path, const DoaEstimate& est,
                                const std::vector<std::string>& header_notes = {})
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    for (const auto& note : header_notes) {
        os << "# " << note << "\n";
    }
    os << "theta_deg,tau,amp_re,amp_im\n";
    for (std::size_t k = 0; k < est.taus.size(); ++k) {
        os << detail::fmt_double(est.thetas[k]) << "," << detail::fmt_double(est.taus[k]) << ","
           << detail::fmt_double(est.amps.size() > k ? est.amps[k].real() : 0.0) << ","
           << detail::fmt_double(est.amps.size() > k ? est.amps[k].imag() : 0.0) << "\n";
    }
}

inline void write_records_csv(const std::string& path, const std::vector<TrialRecord>& records)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "method,sweep_axis,sweep_value,trial,seed,nmse,success,rmse_deg,wall_ms\n";
    for (const auto& r : records) {
        os << method_name(r.method) << "," << sweep_name(r.sweep) << ","
           << detail::fmt_double(r.sweep_value) << "," << r.trial << "," << r.seed << ","
           << detail::fmt_double(r.nmse) << "," << (r.success ? 1 : 0) << ","
           << detail::fmt_double(r.rmse_deg) << "," << detail::fmt_double(r.wall_ms) << "\n";
    }
}

/// Summary rows; the crb and zzb columns are emitted empty (their formulas
/// are supplied externally when needed).
inline void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows)
{
    std::ofstream os(path);
    detail::check(os.good(), "cannot open for writing: " + path);
    os << "method,sweep_value,mean_nmse,median_nmse,recovery,rmse_deg,crb,zzb\n";
    for (const auto& r : rows) {
        os << method_name(r.method) << "," << detail::fmt_double(r.sweep_value) << ","
           << detail::fmt_double(r.mean_nmse) << "," << detail::fmt_double(r.median_nmse) << ","
           << detail::fmt_double(r.recovery) << "," << detail::fmt_double(r.rmse_deg) << ",,\n";
    }
}

} // namespace wlidoa

#endif // WLIDOA_IO_HPP
