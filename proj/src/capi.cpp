// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/sgrecon.h"

#include "sgrecon/config.hpp"
#include "sgrecon/dataset.hpp"
#include "sgrecon/fedbaseline.hpp"
#include "sgrecon/pipeline.hpp"
#include "sgrecon/validation.hpp"

#include "json.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

struct sgr_config {
    sgrecon::GeneratorConfig value;
};

struct sgr_report {
    sgrecon::ValidationReport value;
};

namespace {

thread_local std::string g_last_error;

sgr_status fail(sgr_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

char* copy_string(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

/// Maps C++ exceptions onto status codes at the API boundary.
template <typename Fn>
sgr_status guarded(Fn&& fn)
{
    g_last_error.clear();
    try {
        return fn();
    } catch (const sgrecon::ConfigError& e) {
        return fail(SGR_ERR_CONFIG, e.what());
    } catch (const sgrecon::DatasetError& e) {
        return fail(SGR_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(SGR_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SGR_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SGR_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(SGR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SGR_ERR_INTERNAL, "unknown error");
    }
}

sgr_status wrap_config(sgrecon::GeneratorConfig config, sgr_config** out)
{
    if (out == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null output pointer");
    }
    *out = new sgr_config{std::move(config)};
    return SGR_OK;
}

sgrecon::Split to_split(sgr_split split)
{
    switch (split) {
    case SGR_SPLIT_TRAIN: return sgrecon::Split::Train;
    case SGR_SPLIT_VAL: return sgrecon::Split::Val;
    case SGR_SPLIT_TEST: return sgrecon::Split::Test;
    }
    throw std::invalid_argument("unknown split");
}

} // namespace

extern "C" {

const char* sgr_version(void)
{
    return "1.0.0";
}

const char* sgr_last_error(void)
{
    return g_last_error.c_str();
}

void sgr_string_free(char* s)
{
    std::free(s);
}

sgr_status sgr_config_default(sgr_config** out)
{
    return guarded([&] { return wrap_config(sgrecon::default_config(), out); });
}

sgr_status sgr_config_load_file(const char* path, sgr_config** out)
{
    if (path == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null path");
    }
    return guarded([&] {
        if (!std::filesystem::exists(path)) {
            return fail(SGR_ERR_IO, std::string("config file not found: ") + path);
        }
        return wrap_config(sgrecon::load_config_file(path), out);
    });
}

sgr_status sgr_config_load_string(const char* json, sgr_config** out)
{
    if (json == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null document");
    }
    return guarded([&] { return wrap_config(sgrecon::load_config(json), out); });
}

sgr_status sgr_config_set_seed(sgr_config* config, uint64_t seed_base)
{
    if (config == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null config");
    }
    config->value.seed_base = seed_base;
    return SGR_OK;
}

sgr_status sgr_config_seed(const sgr_config* config, uint64_t* seed_base)
{
    if (config == nullptr || seed_base == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    *seed_base = config->value.seed_base;
    return SGR_OK;
}

sgr_status sgr_config_to_json(const sgr_config* config, char** json)
{
    if (config == nullptr || json == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *json = copy_string(sgrecon::to_json_string(config->value));
        return SGR_OK;
    });
}

sgr_status sgr_config_validate(const sgr_config* config)
{
    if (config == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null config");
    }
    return guarded([&] {
        const auto violations = sgrecon::validate_config(config->value);
        if (violations.empty()) {
            return SGR_OK;
        }
        std::string msg;
        for (const auto& v : violations) {
            msg += (msg.empty() ? "" : "; ") + v.field + ": " + v.message;
        }
        return fail(SGR_ERR_CONFIG, msg);
    });
}

void sgr_config_free(sgr_config* config)
{
    delete config;
}

sgr_status sgr_derive_split_seed(uint64_t seed_base, sgr_split split, uint64_t* seed)
{
    if (seed == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null output pointer");
    }
    return guarded([&] {
        *seed = sgrecon::derive_split_seed(seed_base, to_split(split));
        return SGR_OK;
    });
}

sgr_status sgr_topology_node_count(const sgr_config* config, size_t* count)
{
    if (config == nullptr || count == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *count = sgrecon::build_default_topology(config->value.attack.eligible_tech).size();
        return SGR_OK;
    });
}

sgr_status sgr_topology_mixing(const sgr_config* config, double* out, size_t capacity)
{
    if (config == nullptr || out == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto topo = sgrecon::build_default_topology(config->value.attack.eligible_tech);
        const auto w = sgrecon::compute_mixing(topo, config->value.mixing_alpha);
        if (capacity < w.data().size()) {
            return fail(SGR_ERR_ARGUMENT, "mixing buffer needs " + std::to_string(w.data().size()) + " elements");
        }
        std::copy(w.data().begin(), w.data().end(), out);
        return SGR_OK;
    });
}

sgr_status sgr_generate(const sgr_config* config, const char* out_dir, unsigned threads, char** manifest_json)
{
    if (config == nullptr || out_dir == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto manifest = sgrecon::generate_dataset(config->value, out_dir, threads);
        if (manifest_json != nullptr) {
            nlohmann::ordered_json doc;
            doc["out_dir"] = out_dir;
            doc["windows"] = manifest.window_count;
            auto files = nlohmann::ordered_json::array();
            for (const auto& f : manifest.files) {
                files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
            }
            doc["files"] = files;
            *manifest_json = copy_string(doc.dump(2) + "\n");
        }
        return SGR_OK;
    });
}

sgr_status sgr_validate(const char* dataset_dir, unsigned threads, sgr_report** out)
{
    if (dataset_dir == nullptr || out == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto dataset = sgrecon::load_dataset(dataset_dir);
        auto* report = new sgr_report{sgrecon::validate_dataset(dataset, threads)};
        *out = report;
        if (report->value.passed()) {
            return SGR_OK;
        }
        std::string failed;
        for (const auto& c : report->value.checks) {
            if (!c.passed) {
                failed += (failed.empty() ? "" : ", ") + c.name;
            }
        }
        return fail(SGR_ERR_AUDIT, "audit failed: " + failed);
    });
}

int sgr_report_passed(const sgr_report* report)
{
    return report != nullptr && report->value.passed() ? 1 : 0;
}

sgr_status sgr_report_text(const sgr_report* report, char** text)
{
    if (report == nullptr || text == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *text = copy_string(report->value.to_text());
        return SGR_OK;
    });
}

sgr_status sgr_report_json(const sgr_report* report, char** json)
{
    if (report == nullptr || json == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *json = copy_string(report->value.to_json());
        return SGR_OK;
    });
}

sgr_status sgr_report_write(const sgr_report* report, const char* out_dir)
{
    if (report == nullptr || out_dir == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        sgrecon::write_file(dir / "validation_report.json", report->value.to_json());
        sgrecon::write_file(dir / "validation_report.txt", report->value.to_text());
        sgrecon::write_file(dir / "shift_quantiles.csv", report->value.quantiles_csv());
        return SGR_OK;
    });
}

void sgr_report_free(sgr_report* report)
{
    delete report;
}

sgr_status sgr_baseline(const char* dataset_dir, const char* hyperparams_json, const uint64_t* train_seed,
                        const uint64_t* seed_base, const char* out_dir, char** result_json)
{
    if (dataset_dir == nullptr) {
        return fail(SGR_ERR_ARGUMENT, "null dataset directory");
    }
    return guarded([&] {
        const auto dataset = sgrecon::load_dataset(dataset_dir);
        auto config = dataset.config;
        if (hyperparams_json != nullptr && *hyperparams_json != '\0') {
            nlohmann::json patch;
            try {
                patch = nlohmann::json::parse(hyperparams_json);
            } catch (const nlohmann::json::exception& e) {
                throw sgrecon::ConfigError(std::string("hyperparameters are not valid JSON: ") + e.what());
            }
            auto doc = nlohmann::json::parse(sgrecon::to_json_string(config));
            doc["baseline"].merge_patch(patch);
            config = sgrecon::load_config(doc.dump());
        }
        sgrecon::Standardizer standardizer;
        try {
            standardizer = sgrecon::Standardizer::from_json(dataset.normalization_text);
        } catch (const std::invalid_argument& e) {
            throw sgrecon::DatasetError(e.what());
        }
        std::uint64_t seed = sgrecon::default_train_seed(seed_base != nullptr ? *seed_base : config.seed_base);
        if (train_seed != nullptr) {
            seed = *train_seed;
        } else if (config.baseline.train_seed.has_value()) {
            seed = *config.baseline.train_seed;
        }
        const auto run = sgrecon::run_baseline(dataset.tables, dataset.topology, standardizer, config.baseline, seed);
        const auto json = sgrecon::baseline_json(run, config.baseline);
        if (out_dir != nullptr) {
            const std::filesystem::path dir(out_dir);
            std::filesystem::create_directories(dir);
            sgrecon::write_file(dir / "baseline_test_metrics.csv", sgrecon::metrics_csv(run.test));
            sgrecon::write_file(dir / "baseline_val_metrics.csv", sgrecon::metrics_csv(run.validation));
            sgrecon::write_file(dir / "baseline_result.json", json);
        }
        if (result_json != nullptr) {
            *result_json = copy_string(json);
        }
        return SGR_OK;
    });
}

} // extern "C"
