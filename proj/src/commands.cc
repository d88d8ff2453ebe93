// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lff/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "lff/bench.h"
#include "lff/evaluation.h"
#include "lff/frontend.h"
#include "lff/trainer.h"
#include "lff/wav.h"

namespace lff::cli {

namespace fs = std::filesystem;

namespace {

std::string ReadTextFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Header fields for feature files from time-domain front-ends: the kernel
// length stands in for the window, the effective hop is stride*pool, and
// n_fft is 0 because no transform is involved.
StftConfig FeatureHeaderConfig(const FrontendSpec& spec) {
  if (spec.UsesFilterbank()) return spec.stft;
  StftConfig header;
  header.window_len = spec.time_kernels.kernel_len;
  header.hop = spec.time_kernels.stride * spec.time_kernels.pool;
  header.n_fft = 0;
  header.spectrum = spec.time_kernels.kind == TimeKernelKind::kGabor
                        ? SpectrumKind::kPower
                        : SpectrumKind::kMagnitude;
  return header;
}

void ExtractOne(const FrontendSpec& spec, const std::string& wav_path,
                const std::string& out_path, std::ostream& manifest) {
  AudioBuffer audio = LoadWav(wav_path);
  FeatureMatrix features = ComputeFrontendFeatures(spec, audio);
  WriteMatrixFile(features.values, FeatureHeaderConfig(spec), out_path);
  manifest << out_path << " " << features.NumFrames() << " "
           << features.NumFeatures() << "\n";
}

}  // namespace

void Extract(const std::string& frontend_override, const std::string& config_path,
             const std::string& input_path, const std::string& output_path) {
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(ReadTextFile(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!frontend_override.empty()) config["frontend"] = frontend_override;
  FrontendSpec spec = FrontendSpecFromJson(config.dump());
  std::string config_hash = ConfigHashHex(FrontendSpecToJson(spec));

  if (fs::is_directory(input_path)) {
    std::vector<fs::path> wavs;
    for (const auto& entry : fs::directory_iterator(input_path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        wavs.push_back(entry.path());
    }
    if (wavs.empty())
      throw ConfigError("no .wav files in input directory: " + input_path);
    std::sort(wavs.begin(), wavs.end());

    fs::create_directories(output_path);
    std::ostringstream manifest;
    manifest << "config_hash " << config_hash << "\n";
    for (const fs::path& wav : wavs) {
      fs::path out = fs::path(output_path) / (wav.stem().string() + ".feat");
      ExtractOne(spec, wav.string(), out.string(), manifest);
    }
    std::ofstream mf(fs::path(output_path) / "manifest.txt");
    if (!mf) throw ConfigError("cannot write manifest in " + output_path);
    mf << manifest.str();
  } else if (fs::is_regular_file(input_path)) {
    std::ostringstream manifest;
    manifest << "config_hash " << config_hash << "\n";
    ExtractOne(spec, input_path, output_path, manifest);
    std::ofstream mf(output_path + ".manifest");
    if (!mf) throw ConfigError("cannot write manifest for " + output_path);
    mf << manifest.str();
  } else {
    throw ConfigError("input path does not exist: " + input_path);
  }
}

void ExportFilters(const std::string& model_path, const std::string& output_csv) {
  TrainedModel model = LoadModel(model_path);
  if (!model.frontend.UsesFilterbank())
    throw ConfigError("model does not contain a learnable filterbank front-end");
  std::string config_hash = ConfigHashHex(FrontendSpecToJson(model.frontend));
  WriteFilterParamsCsv(model.frontend.filterbank, model.frontend.sample_rate,
                       output_csv, config_hash);
}

void Bench(const std::string& sweep_path, const std::string& output_csv,
           std::optional<uint64_t> seed) {
  SweepSpec spec = SweepSpecFromJson(ReadTextFile(sweep_path));
  if (seed) spec.seed = *seed;
  std::vector<BenchRow> rows = RunBenchSweep(spec);
  WriteBenchCsv(rows, output_csv, ConfigHashHex(SweepSpecToJson(spec)));
}

namespace {

struct ToySpec {
  uint64_t seed = 7;
  int sample_rate = 8000;
  double utterance_seconds = 3.0;
  int utterances_per_speaker = 20;
  int heldout_per_speaker = 5;
  int n_filters = 32;
  StftConfig stft;
  int kernel_len = 201;
  int stride = 80;
  int pool = 1;
  std::vector<SyntheticSpeakerProfile> speakers;
  std::vector<FrontendKind> frontends;
  TrainConfig train;
};

SyntheticSpeakerProfile ProfileFromJson(const nlohmann::json& j) {
  SyntheticSpeakerProfile p;
  p.fundamental_hz = j.at("fundamental_hz").get<double>();
  p.harmonic_amplitudes = j.at("harmonic_amplitudes").get<std::vector<double>>();
  p.spectral_tilt_db_per_octave = j.value("spectral_tilt_db_per_octave", 0.0);
  p.jitter_fraction = j.value("jitter_fraction", 0.0);
  return p;
}

std::vector<SyntheticSpeakerProfile> GenerateSpeakers(const nlohmann::json& g,
                                                      uint64_t seed) {
  int count = g.value("count", 10);
  double f0_min = g.value("f0_min_hz", 110.0);
  double f0_max = g.value("f0_max_hz", 320.0);
  int harmonics = g.value("num_harmonics", 8);
  double tilt_min = g.value("tilt_min_db", -9.0);
  double tilt_max = g.value("tilt_max_db", -3.0);
  double jitter = g.value("jitter", 0.01);
  if (count < 2) throw ConfigError("need at least 2 generated speakers");

  std::vector<SyntheticSpeakerProfile> speakers;
  for (int i = 0; i < count; ++i) {
    Rng rng(MixSeed(seed, 0x5350u + static_cast<uint64_t>(i)));
    SyntheticSpeakerProfile p;
    double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    p.fundamental_hz = f0_min * std::pow(f0_max / f0_min, frac);
    double decay = 0.5 + rng.UniformReal();
    p.harmonic_amplitudes.resize(static_cast<size_t>(harmonics));
    for (int k = 0; k < harmonics; ++k) {
      p.harmonic_amplitudes[k] =
          std::pow(1.0 / (k + 1), decay) * (0.7 + 0.6 * rng.UniformReal());
    }
    p.spectral_tilt_db_per_octave = tilt_min + (tilt_max - tilt_min) * frac;
    p.jitter_fraction = jitter;
    speakers.push_back(std::move(p));
  }
  return speakers;
}

ToySpec ToySpecFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid toy spec JSON: ") + e.what());
  }

  ToySpec spec;
  spec.seed = j.value("seed", spec.seed);
  spec.sample_rate = j.value("sample_rate", spec.sample_rate);
  spec.utterance_seconds = j.value("utterance_seconds", spec.utterance_seconds);
  spec.utterances_per_speaker =
      j.value("utterances_per_speaker", spec.utterances_per_speaker);
  spec.heldout_per_speaker = j.value("heldout_per_speaker", spec.heldout_per_speaker);
  spec.n_filters = j.value("n_filters", spec.n_filters);
  spec.kernel_len = j.value("kernel_len", spec.kernel_len);
  spec.stride = j.value("stride", spec.stride);
  spec.pool = j.value("pool", spec.pool);

  spec.stft.window_len = 200;
  spec.stft.hop = 80;
  spec.stft.n_fft = 512;
  if (j.contains("stft")) {
    const auto& s = j["stft"];
    spec.stft.window_len = s.value("window_len", spec.stft.window_len);
    spec.stft.hop = s.value("hop", spec.stft.hop);
    spec.stft.n_fft = s.value("n_fft", spec.stft.n_fft);
    if (s.contains("window"))
      spec.stft.window = WindowKindFromString(s["window"].get<std::string>());
    if (s.contains("spectrum"))
      spec.stft.spectrum = SpectrumKindFromString(s["spectrum"].get<std::string>());
  }
  spec.stft.Validate();

  if (j.contains("speakers")) {
    for (const auto& sp : j["speakers"]) spec.speakers.push_back(ProfileFromJson(sp));
  } else if (j.contains("generate_speakers")) {
    spec.speakers = GenerateSpeakers(j["generate_speakers"], spec.seed);
  } else {
    spec.speakers = GenerateSpeakers(nlohmann::json::object(), spec.seed);
  }
  if (spec.speakers.size() < 2) throw ConfigError("toy spec needs >= 2 speakers");

  if (!j.contains("frontends") || !j["frontends"].is_array() ||
      j["frontends"].empty())
    throw ConfigError("toy spec needs a non-empty frontends array");
  for (const auto& name : j["frontends"])
    spec.frontends.push_back(FrontendKindFromString(name.get<std::string>()));

  if (j.contains("train")) {
    const auto& t = j["train"];
    spec.train.lr = t.value("lr", spec.train.lr);
    spec.train.epochs = t.value("epochs", spec.train.epochs);
    spec.train.batch = t.value("batch", spec.train.batch);
    spec.train.loss_scale = t.value("loss_scale", spec.train.loss_scale);
    spec.train.loss_margin = t.value("loss_margin", spec.train.loss_margin);
    spec.train.lambda_mix = t.value("lambda_mix", spec.train.lambda_mix);
    spec.train.momentum = t.value("momentum", spec.train.momentum);
    if (t.contains("optimizer"))
      spec.train.optimizer = OptimizerKindFromString(t["optimizer"].get<std::string>());
    spec.train.lr_decay = t.value("lr_decay", spec.train.lr_decay);
    if (t.contains("lr_decay_epochs"))
      spec.train.lr_decay_epochs = t["lr_decay_epochs"].get<std::vector<int>>();
    spec.train.crop_seconds = t.value("crop_seconds", spec.train.crop_seconds);
    spec.train.backbone_hidden = t.value("backbone_hidden", spec.train.backbone_hidden);
    spec.train.backbone_layers = t.value("backbone_layers", spec.train.backbone_layers);
    spec.train.embedding_dim = t.value("embedding_dim", spec.train.embedding_dim);
  }
  spec.train.seed = spec.seed;
  spec.train.Validate();

  if (spec.utterances_per_speaker < 2)
    throw ConfigError("need at least 2 utterances per speaker");
  if (spec.heldout_per_speaker < 2 ||
      spec.heldout_per_speaker >= spec.utterances_per_speaker)
    throw ConfigError("heldout_per_speaker must lie in [2, utterances_per_speaker)");
  if (spec.utterance_seconds < spec.train.crop_seconds)
    throw ConfigError("utterances must cover at least one training crop");
  return spec;
}

std::string CanonicalToyConfig(const ToySpec& spec) {
  // Canonical re-serialization for the provenance hash.
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["sample_rate"] = spec.sample_rate;
  j["utterance_seconds"] = spec.utterance_seconds;
  j["utterances_per_speaker"] = spec.utterances_per_speaker;
  j["heldout_per_speaker"] = spec.heldout_per_speaker;
  j["n_filters"] = spec.n_filters;
  j["kernel_len"] = spec.kernel_len;
  j["stride"] = spec.stride;
  j["pool"] = spec.pool;
  j["stft"] = {{"window_len", spec.stft.window_len},
               {"hop", spec.stft.hop},
               {"n_fft", spec.stft.n_fft},
               {"window", ToString(spec.stft.window)},
               {"spectrum", ToString(spec.stft.spectrum)}};
  for (const auto& sp : spec.speakers) {
    j["speakers"].push_back({{"fundamental_hz", sp.fundamental_hz},
                             {"harmonic_amplitudes", sp.harmonic_amplitudes},
                             {"spectral_tilt_db_per_octave",
                              sp.spectral_tilt_db_per_octave},
                             {"jitter_fraction", sp.jitter_fraction}});
  }
  for (FrontendKind kind : spec.frontends) j["frontends"].push_back(ToString(kind));
  j["train"] = {{"lr", spec.train.lr},
                {"epochs", spec.train.epochs},
                {"batch", spec.train.batch},
                {"loss_scale", spec.train.loss_scale},
                {"loss_margin", spec.train.loss_margin},
                {"lambda_mix", spec.train.lambda_mix},
                {"momentum", spec.train.momentum},
                {"optimizer", ToString(spec.train.optimizer)},
                {"crop_seconds", spec.train.crop_seconds},
                {"backbone_hidden", spec.train.backbone_hidden},
                {"backbone_layers", spec.train.backbone_layers},
                {"embedding_dim", spec.train.embedding_dim}};
  return j.dump();
}

struct ToyDataset {
  std::vector<LabeledUtterance> train;
  std::vector<LabeledUtterance> heldout;
};

ToyDataset BuildToyDataset(const ToySpec& spec) {
  ToyDataset data;
  for (size_t spk = 0; spk < spec.speakers.size(); ++spk) {
    for (int utt = 0; utt < spec.utterances_per_speaker; ++utt) {
      LabeledUtterance u;
      u.label = static_cast<int>(spk);
      u.id = "spk" + std::to_string(spk) + "_utt" + std::to_string(utt);
      u.audio = SynthSpeakerUtterance(
          spec.speakers[spk], spec.utterance_seconds, spec.sample_rate,
          MixSeed(MixSeed(spec.seed, spk), static_cast<uint64_t>(utt)));
      bool heldout = utt >= spec.utterances_per_speaker - spec.heldout_per_speaker;
      (heldout ? data.heldout : data.train).push_back(std::move(u));
    }
  }
  return data;
}

FrontendSpec ToyFrontendSpec(const ToySpec& spec, FrontendKind kind) {
  FrontendSpec fe;
  fe.kind = kind;
  fe.sample_rate = spec.sample_rate;
  fe.stft = spec.stft;
  if (fe.UsesFilterbank()) {
    FilterShape shape =
        kind == FrontendKind::kLffBell ? FilterShape::kBell : FilterShape::kTriangle;
    fe.filterbank =
        MelInit(spec.n_filters, spec.stft.NumBins(), spec.sample_rate, shape);
  } else if (kind == FrontendKind::kSinc) {
    fe.time_kernels = MelSpacedSincBank(spec.n_filters, spec.kernel_len, spec.stride,
                                        spec.pool, spec.sample_rate);
  } else {
    fe.time_kernels = MelSpacedGaborBank(spec.n_filters, spec.kernel_len, spec.stride,
                                         spec.pool, spec.sample_rate);
  }
  fe.Validate();
  return fe;
}

// Within-speaker held-out pairs are targets; across speakers, utterances with
// equal rank pair up as non-targets.
ScoreSet ScoreHeldoutTrials(const TrainedModel& model, const ToyDataset& data,
                            int heldout_per_speaker) {
  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(data.heldout.size());
  for (const LabeledUtterance& utt : data.heldout)
    embeddings.push_back(EmbedUtterance(model, utt.audio));

  int per = heldout_per_speaker;
  int num_speakers = static_cast<int>(data.heldout.size()) / per;
  ScoreSet scores;
  for (int spk = 0; spk < num_speakers; ++spk) {
    for (int i = 0; i < per; ++i) {
      for (int k = i + 1; k < per; ++k) {
        double s = CosineSimilarity(embeddings[spk * per + i],
                                    embeddings[spk * per + k]);
        scores.scores.emplace_back(s, true);
      }
    }
  }
  for (int a = 0; a < num_speakers; ++a) {
    for (int b = a + 1; b < num_speakers; ++b) {
      for (int i = 0; i < per; ++i) {
        double s =
            CosineSimilarity(embeddings[a * per + i], embeddings[b * per + i]);
        scores.scores.emplace_back(s, false);
      }
    }
  }
  return scores;
}

std::string StripJsonSuffix(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    return path.substr(0, path.size() - 5);
  return path;
}

}  // namespace

void ToyExperiment(const std::string& spec_path, const std::string& output_json,
                   std::optional<uint64_t> seed) {
  ToySpec spec = ToySpecFromJson(ReadTextFile(spec_path));
  if (seed) {
    spec.seed = *seed;
    spec.train.seed = *seed;
  }
  std::string config_hash = ConfigHashHex(CanonicalToyConfig(spec));
  ToyDataset data = BuildToyDataset(spec);

  std::string base = StripJsonSuffix(output_json);
  nlohmann::json metrics;
  metrics["config_hash"] = config_hash;
  metrics["seed"] = spec.seed;
  metrics["num_speakers"] = spec.speakers.size();
  metrics["num_train_utterances"] = data.train.size();
  metrics["num_heldout_utterances"] = data.heldout.size();

  for (FrontendKind kind : spec.frontends) {
    FrontendSpec fe = ToyFrontendSpec(spec, kind);
    TrainResult result = Train(data.train, fe, spec.train);

    ScoreSet scores =
        ScoreHeldoutTrials(result.model, data, spec.heldout_per_speaker);
    EerResult eer = ComputeEer(scores);

    std::string name = ToString(kind);
    nlohmann::json entry;
    entry["eer"] = eer.eer;
    entry["eer_threshold"] = eer.threshold;
    entry["initial_loss"] = result.history.epochs.front().mean_loss;
    entry["final_loss"] = result.history.epochs.back().mean_loss;

    std::string model_path = base + "." + name + ".model";
    SaveModel(result.model, model_path);
    entry["model_file"] = model_path;

    std::string history_path = base + "." + name + ".history.csv";
    WriteHistoryCsv(result.history, history_path, config_hash);
    entry["history_csv"] = history_path;

    if (fe.UsesFilterbank()) {
      const FilterBankParams& trained = result.model.frontend.filterbank;
      FilterBankParams init =
          MelInit(trained.NumFilters(), trained.n_bins, spec.sample_rate,
                  trained.shape);
      double da = 0.0, db = 0.0;
      for (int i = 0; i < trained.NumFilters(); ++i) {
        da += std::abs(trained.alphas[i] - init.alphas[i]);
        db += std::abs(trained.betas[i] - init.betas[i]);
      }
      entry["mean_abs_delta_alpha"] = da / trained.NumFilters();
      entry["mean_abs_delta_beta"] = db / trained.NumFilters();

      std::string filters_path = base + "." + name + ".filters.csv";
      WriteFilterParamsCsv(trained, spec.sample_rate, filters_path, config_hash);
      entry["filters_csv"] = filters_path;
    }
    metrics["frontends"][name] = entry;
  }

  std::ofstream os(output_json);
  if (!os) throw ConfigError("cannot open metrics output: " + output_json);
  os << metrics.dump(2) << "\n";
}

int Run(int argc, const char* const* argv) {
  CLI::App app{"Learnable frequency-filter front-end toolkit"};
  app.require_subcommand(1);

  uint64_t seed_value = 0;
  bool seed_given = false;
  app.add_option("--seed", seed_value, "Override the experiment seed")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  std::string frontend, config_path, input_path, output_path;
  CLI::App* extract = app.add_subcommand("extract", "Extract features to files");
  extract->add_option("--frontend", frontend,
                      "Front-end name overriding the config (lff-t, lff-b, mel, "
                      "sinc, gabor)");
  extract->add_option("--config", config_path, "Front-end config JSON")->required();
  extract->add_option("--in", input_path, "Input WAV file or directory")->required();
  extract->add_option("--out", output_path, "Output feature file or directory")
      ->required();

  std::string sweep_path, bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Stride sweep cost benchmark");
  bench->add_option("--sweep", sweep_path, "Sweep spec JSON")->required();
  bench->add_option("--out", bench_out, "Output CSV")->required();

  std::string model_path, filters_out;
  CLI::App* export_filters =
      app.add_subcommand("export-filters", "Export learned filter parameters");
  export_filters->add_option("--model", model_path, "Trained model file")->required();
  export_filters->add_option("--out", filters_out, "Output CSV")->required();

  std::string toy_spec, toy_out;
  CLI::App* toy = app.add_subcommand("toy", "Desk-scale training experiment");
  toy->add_option("--spec", toy_spec, "Experiment spec JSON")->required();
  toy->add_option("--out", toy_out, "Metrics JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::optional<uint64_t> seed;
  if (seed_given) seed = seed_value;

  try {
    if (extract->parsed()) {
      Extract(frontend, config_path, input_path, output_path);
    } else if (bench->parsed()) {
      Bench(sweep_path, bench_out, seed);
    } else if (export_filters->parsed()) {
      ExportFilters(model_path, filters_out);
    } else if (toy->parsed()) {
      ToyExperiment(toy_spec, toy_out, seed);
    }
    return 0;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace lff::cli
