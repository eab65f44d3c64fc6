#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace giant::cli {

using nlohmann::json;

std::string tool_version();
// UTC, second resolution.
std::string iso_timestamp();
// Numbers are written with 12 significant digits.
std::string format_number(double v);

// Header row, then one timestamp comment line, then data rows.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(const std::vector<double>& row);
    void add_text(const std::vector<std::string>& row);
    std::size_t rows() const { return rows_.size(); }
    std::string render(const std::string& timestamp) const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

// Output directory plus the manifest kept in it. Completed sweep points are
// stored under their key so that --resume can skip them.
class RunContext {
public:
    RunContext(std::string subcommand, json config, std::string out_dir, bool resume);

    const std::string& out_dir() const { return out_dir_; }
    const json& config() const { return config_; }
    void set_layout_hash(const std::string& h) { layout_hash_ = h; }

    bool has_point(const std::string& key) const { return completed_.count(key) > 0; }
    const json& point(const std::string& key) const { return completed_.at(key); }
    void record_point(const std::string& key, json value);
    int resumed_points() const { return resumed_; }

    void write_file(const std::string& name, const std::string& content);
    void write_csv(const std::string& name, const CsvWriter& csv) { write_file(name, csv.render(timestamp_)); }
    void write_json(const std::string& name, const json& doc) { write_file(name, doc.dump(2) + "\n"); }

    // Writes manifest.json; called after each point and once at the end.
    void checkpoint(bool finished);

private:
    std::string subcommand_;
    json config_;
    std::string config_hash_;
    std::string out_dir_;
    std::string layout_hash_;
    std::string timestamp_;
    double started_ = 0.0;
    std::map<std::string, json> completed_;
    std::vector<std::string> files_;
    int resumed_ = 0;
};

// Runs independent jobs on `workers` threads. Results are handed to `sink` on the
// calling thread in job order, so output does not depend on scheduling.
void run_jobs(std::size_t count, int workers, const std::function<json(std::size_t)>& job,
              const std::function<void(std::size_t, json)>& sink);

}  // namespace giant::cli
