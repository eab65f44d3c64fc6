#include "run_support.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "giant/error.hpp"
#include "giant/layout_io.hpp"

#ifndef GIANT_VERSION
#define GIANT_VERSION "0.0.0"
#endif

namespace giant::cli {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line;
}

}  // namespace

std::string tool_version() { return GIANT_VERSION; }

std::string iso_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

void CsvWriter::add(const std::vector<double>& row) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(format_number(v));
    add_text(cells);
}

void CsvWriter::add_text(const std::vector<std::string>& row) {
    if (row.size() != header_.size()) throw ConfigError("csv row width does not match header");
    rows_.push_back(join(row));
}

std::string CsvWriter::render(const std::string& timestamp) const {
    std::string out = join(header_) + "\n# generated " + timestamp + "\n";
    for (const auto& r : rows_) out += r + "\n";
    return out;
}

RunContext::RunContext(std::string subcommand, json config, std::string out_dir, bool resume)
    : subcommand_(std::move(subcommand)),
      config_(std::move(config)),
      out_dir_(std::move(out_dir)),
      timestamp_(iso_timestamp()),
      started_(now_seconds()) {
    config_hash_ = hex64(fnv1a(subcommand_ + "\n" + config_.dump()));
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    const fs::path probe = fs::path(out_dir_) / ".write-probe";
    {
        std::ofstream f(probe);
        if (ec || !f) throw ConfigError("output directory " + out_dir_ + " is not writable");
    }
    fs::remove(probe, ec);

    const fs::path manifest = fs::path(out_dir_) / "manifest.json";
    if (resume && fs::exists(manifest)) {
        std::ifstream in(manifest);
        json old;
        try {
            in >> old;
        } catch (const json::exception& e) {
            throw ConfigError("cannot resume: unreadable manifest " + manifest.string() + ": " + e.what());
        }
        if (old.value("config_hash", "") != config_hash_)
            throw ConfigError("cannot resume: " + manifest.string() + " was written for a different configuration");
        const json points = old.value("points", json::object());
        for (const auto& [k, v] : points.items()) completed_[k] = v;
        resumed_ = static_cast<int>(completed_.size());
    }
}

void RunContext::record_point(const std::string& key, json value) { completed_[key] = std::move(value); }

void RunContext::write_file(const std::string& name, const std::string& content) {
    const fs::path p = fs::path(out_dir_) / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw ConfigError("cannot write " + p.string());
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void RunContext::checkpoint(bool finished) {
    json m;
    m["tool"] = "giant";
    m["version"] = tool_version();
    m["subcommand"] = subcommand_;
    m["config"] = config_;
    m["config_hash"] = config_hash_;
    m["layout_hash"] = layout_hash_;
    m["started"] = timestamp_;
    m["wall_clock_s"] = now_seconds() - started_;
    m["finished"] = finished;
    m["files"] = files_;
    m["points"] = json::object();
    for (const auto& [k, v] : completed_) m["points"][k] = v;
    const fs::path p = fs::path(out_dir_) / "manifest.json";
    const fs::path tmp = fs::path(out_dir_) / "manifest.json.tmp";
    {
        std::ofstream f(tmp);
        f << m.dump(2) << "\n";
        if (!f) throw ConfigError("cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

void run_jobs(std::size_t count, int workers, const std::function<json(std::size_t)>& job,
              const std::function<void(std::size_t, json)>& sink) {
    if (count == 0) return;
    const std::size_t nthreads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    std::vector<std::optional<json>> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<bool> done(count, false);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || stop) return;
            std::optional<json> r;
            std::exception_ptr err;
            try {
                r = job(i);
            } catch (...) {
                err = std::current_exception();
            }
            std::lock_guard<std::mutex> lock(mu);
            results[i] = std::move(r);
            errors[i] = err;
            done[i] = true;
            cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    std::exception_ptr failure;
    for (std::size_t i = 0; i < count && !failure; ++i) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return done[i]; });
        if (errors[i]) {
            failure = errors[i];
            stop = true;
            break;
        }
        json r = std::move(*results[i]);
        results[i].reset();
        lock.unlock();
        try {
            sink(i, std::move(r));
        } catch (...) {
            failure = std::current_exception();
            stop = true;
        }
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace giant::cli
