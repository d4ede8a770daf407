// SPDX-License-Identifier: Apache-2.0
//
// risbeam - RIS beam selection from previously sampled channels
// Copyright (C) 2026 The risbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "risbeam/harness.hpp"

namespace risbeam
{
    using nlohmann::json;

    namespace
    {
        void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &where)
        {
            if (!obj.is_object())
                throw std::invalid_argument("config: '" + where + "' must be an object");
            for (const auto &[key, _] : obj.items())
                if (!known.count(key))
                    throw std::invalid_argument("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
        }

        template <typename T>
        void take(const json &obj, const char *key, T &dst)
        {
            if (obj.contains(key))
                dst = obj.at(key).get<T>();
        }

        Pulse parse_pulse(const std::string &s)
        {
            if (s == "sinc")
                return Pulse::sinc;
            if (s == "delta")
                return Pulse::delta;
            throw std::invalid_argument("config: pulse must be 'sinc' or 'delta', got '" + s + "'");
        }
    }

    ExperimentConfig config_from_json(const std::string &text)
    {
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config: parse error: ") + e.what());
        }

        ExperimentConfig c;
        try
        {
            reject_unknown(root,
                           {"scenario", "budget", "codebook_size", "m_bar", "k_in", "t_s", "pilot_snr_db", "trajectory_length",
                            "train_sizes", "test_size", "mlp", "train", "seeds", "output_dir", "channel_file",
                            "control_arms", "jobs", "sweep_values"},
                           "");

            if (root.contains("scenario"))
            {
                const auto &s = root.at("scenario");
                reject_unknown(s,
                               {"geometry", "num_paths", "num_subcarriers", "num_taps", "sample_period", "path_loss",
                                "pulse", "trajectory_step"},
                               "scenario");
                if (s.contains("geometry"))
                {
                    const auto &g = s.at("geometry");
                    reject_unknown(g, {"mx", "my", "mz", "spacing"}, "scenario.geometry");
                    take(g, "mx", c.scenario.geometry.mx);
                    take(g, "my", c.scenario.geometry.my);
                    take(g, "mz", c.scenario.geometry.mz);
                    take(g, "spacing", c.scenario.geometry.spacing);
                }
                take(s, "num_paths", c.scenario.num_paths);
                take(s, "num_subcarriers", c.scenario.num_subcarriers);
                take(s, "num_taps", c.scenario.num_taps);
                take(s, "sample_period", c.scenario.sample_period);
                take(s, "path_loss", c.scenario.path_loss);
                take(s, "trajectory_step", c.scenario.trajectory_step);
                if (s.contains("pulse"))
                    c.scenario.pulse = parse_pulse(s.at("pulse").get<std::string>());
            }
            if (root.contains("budget"))
            {
                const auto &b = root.at("budget");
                reject_unknown(b, {"total_power", "noise_power"}, "budget");
                take(b, "total_power", c.budget.total_power);
                take(b, "noise_power", c.budget.noise_power);
            }
            take(root, "codebook_size", c.codebook_size);
            take(root, "m_bar", c.m_bar);
            take(root, "k_in", c.k_in);
            take(root, "t_s", c.t_s);
            if (root.contains("pilot_snr_db"))
            {
                if (root.at("pilot_snr_db").is_null())
                    c.pilot_snr_db.reset();
                else
                    c.pilot_snr_db = root.at("pilot_snr_db").get<double>();
            }
            take(root, "trajectory_length", c.trajectory_length);
            take(root, "train_sizes", c.train_sizes);
            take(root, "test_size", c.test_size);
            if (root.contains("mlp"))
            {
                const auto &m = root.at("mlp");
                reject_unknown(m, {"hidden_widths", "dropout_rate"}, "mlp");
                take(m, "hidden_widths", c.hidden_widths);
                take(m, "dropout_rate", c.dropout_rate);
            }
            if (root.contains("train"))
            {
                const auto &t = root.at("train");
                reject_unknown(t,
                               {"max_epochs", "batch_size", "l2_coefficient", "initial_lr", "lr_drop_period_epochs",
                                "lr_drop_factor", "momentum"},
                               "train");
                take(t, "max_epochs", c.train.max_epochs);
                take(t, "batch_size", c.train.batch_size);
                take(t, "l2_coefficient", c.train.l2_coefficient);
                take(t, "initial_lr", c.train.initial_lr);
                take(t, "lr_drop_period_epochs", c.train.lr_drop_period_epochs);
                take(t, "lr_drop_factor", c.train.lr_drop_factor);
                take(t, "momentum", c.train.momentum);
            }
            take(root, "seeds", c.seeds);
            take(root, "output_dir", c.output_dir);
            take(root, "channel_file", c.channel_file);
            take(root, "control_arms", c.control_arms);
            take(root, "jobs", c.jobs);
            if (root.contains("sweep_values"))
            {
                c.sweep_values.clear();
                for (const auto &[axis, values] : root.at("sweep_values").items())
                {
                    parse_sweep_axis(axis);
                    c.sweep_values[axis] = values.get<std::vector<double>>();
                }
            }
        }
        catch (const json::exception &e)
        {
            throw std::invalid_argument(std::string("config: ") + e.what());
        }

        c.sync();
        return c;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return config_from_json(ss.str());
    }

    std::string config_to_json(const ExperimentConfig &c)
    {
        json root;
        root["scenario"] = {
            {"geometry",
             {{"mx", c.scenario.geometry.mx},
              {"my", c.scenario.geometry.my},
              {"mz", c.scenario.geometry.mz},
              {"spacing", c.scenario.geometry.spacing}}},
            {"num_paths", c.scenario.num_paths},
            {"num_subcarriers", c.scenario.num_subcarriers},
            {"num_taps", c.scenario.num_taps},
            {"sample_period", c.scenario.sample_period},
            {"path_loss", c.scenario.path_loss},
            {"pulse", c.scenario.pulse == Pulse::sinc ? "sinc" : "delta"},
            {"trajectory_step", c.scenario.trajectory_step},
        };
        root["budget"] = {{"total_power", c.budget.total_power}, {"noise_power", c.budget.noise_power}};
        root["codebook_size"] = c.codebook_size;
        root["m_bar"] = c.m_bar;
        root["k_in"] = c.k_in;
        root["t_s"] = c.t_s;
        root["pilot_snr_db"] = c.pilot_snr_db ? json(*c.pilot_snr_db) : json(nullptr);
        root["trajectory_length"] = c.trajectory_length;
        root["train_sizes"] = c.train_sizes;
        root["test_size"] = c.test_size;
        root["mlp"] = {{"hidden_widths", c.hidden_widths}, {"dropout_rate", c.dropout_rate}};
        root["train"] = {
            {"max_epochs", c.train.max_epochs},
            {"batch_size", c.train.batch_size},
            {"l2_coefficient", c.train.l2_coefficient},
            {"initial_lr", c.train.initial_lr},
            {"lr_drop_period_epochs", c.train.lr_drop_period_epochs},
            {"lr_drop_factor", c.train.lr_drop_factor},
            {"momentum", c.train.momentum},
        };
        root["seeds"] = c.seeds;
        root["output_dir"] = c.output_dir;
        root["channel_file"] = c.channel_file;
        root["control_arms"] = c.control_arms;
        root["jobs"] = c.jobs;
        root["sweep_values"] = json::object();
        for (const auto &[axis, values] : c.sweep_values)
            root["sweep_values"][axis] = values;
        return root.dump(2);
    }
}
