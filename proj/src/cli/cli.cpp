/* Copyright 2026 The Coralab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "coralab/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "coralab/analytics.h"
#include "coralab/backend.h"
#include "coralab/coco.h"
#include "coralab/error.h"
#include "coralab/export.h"
#include "coralab/format.h"
#include "coralab/image_io.h"
#include "coralab/metrics.h"
#include "coralab/oracle_backend.h"
#include "coralab/project.h"
#include "coralab/service.h"
#include "coralab/simulate.h"

namespace coralab {
namespace {

namespace fs = std::filesystem;

// A missing option the parser cannot express (e.g. "flag or environment").
struct UsageError {
  std::string message;
};

struct Options {
  // project new
  std::vector<std::string> images;
  int stride = 1;
  double min_area = 0.0;
  double confidence = 0.0;
  std::string site;
  // shared
  std::string project;
  std::string backend;
  std::string out;
  std::optional<int> image_id;
  bool has_min_area = false;
  bool has_confidence = false;
  // stats / export
  std::string format = "json";
  std::string csv_kind = "instances";
  // sim
  std::string gt;
  int64_t points = 0;
  int budget = 0;
  std::optional<uint64_t> seed;
  int erosion = 0;
  std::vector<int64_t> schedule;
  bool fill_background = false;
  bool no_negative = false;
  std::string per_image;
  // eval
  std::string pred;
  // aggregate
  std::string in;
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

void WriteOutput(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  WriteFileBytes(path, std::vector<uint8_t>(text.begin(), text.end()));
}

BackendDescriptor ResolveBackend(const std::string& flag) {
  if (!flag.empty()) return ParseBackendDescriptor(flag);
  if (const char* env = std::getenv(kBackendEnvVar); env && *env) {
    return ParseBackendDescriptor(env);
  }
  throw UsageError{std::string("a backend is required: pass --backend or set ") +
                   kBackendEnvVar};
}

std::optional<BackendDescriptor> OptionalBackend(const std::string& flag) {
  if (!flag.empty()) return ParseBackendDescriptor(flag);
  if (const char* env = std::getenv(kBackendEnvVar); env && *env) {
    return ParseBackendDescriptor(env);
  }
  return std::nullopt;
}

fs::path ProjectDir(const std::string& project) {
  return fs::absolute(project).parent_path();
}

std::vector<int> TargetImages(const Project& p, const std::optional<int>& id) {
  if (id) {
    FindImage(p, *id);
    return {*id};
  }
  std::vector<int> ids;
  for (const ImageEntry& image : p.images) ids.push_back(image.id);
  return ids;
}

// Expands directories to their supported images; files pass through.
std::vector<fs::path> ExpandImages(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && IsSupportedImagePath(entry.path())) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

int ProjectNew(const Options& o, std::ostream& out, std::ostream& err) {
  const auto paths = SampleImages(ExpandImages(o.images), o.stride);
  const fs::path base = fs::absolute(o.out).parent_path();
  ImportResult result =
      CreateProject(paths, ProjectConfig{o.min_area, o.confidence}, base);
  if (!o.site.empty()) {
    for (ImageEntry& image : result.project.images) image.site = o.site;
  }
  for (const ImportError& e : result.errors) {
    err << "skipped " << e.path << ": " << e.message << "\n";
  }
  SaveProject(result.project, o.out);
  out << "created " << o.out << " with " << result.project.images.size()
      << " images\n";
  return kExitOk;
}

int ProjectPrepare(const Options& o, std::ostream& out) {
  const BackendDescriptor descriptor = ResolveBackend(o.backend);
  Project p = LoadProject(o.project);
  const auto backend = MakeBackend(descriptor);
  const fs::path dir = ProjectDir(o.project);
  int prepared = 0;
  try {
    for (int id : TargetImages(p, o.image_id)) {
      const PreparationReceipt r = PrepareImage(*backend, p, id, dir);
      out << "image " << id << (r.already_prepared ? ": already prepared\n" : ": prepared\n");
      ++prepared;
    }
  } catch (const Error&) {
    // Keep the flags of images that did complete.
    if (prepared > 0) SaveProject(p, o.project);
    throw;
  }
  SaveProject(p, o.project);
  return kExitOk;
}

int SegmentAuto(const Options& o, std::ostream& out) {
  const BackendDescriptor descriptor = ResolveBackend(o.backend);
  Project p = LoadProject(o.project);
  const auto backend = MakeBackend(descriptor);
  const fs::path dir = ProjectDir(o.project);
  const double min_area = o.has_min_area ? o.min_area : p.config.min_area_fraction;
  const double threshold = o.has_confidence ? o.confidence : p.config.confidence_threshold;
  for (int id : TargetImages(p, o.image_id)) {
    PrepareImage(*backend, p, id, dir);
    const auto proposals =
        AutoSegment(*backend, ImageRefFor(p, id, dir), min_area, threshold);
    for (const MaskProposal& prop : proposals) {
      AddInstance(p, id, prop.mask, InstanceSource::kAuto, prop.confidence);
    }
    out << "image " << id << ": " << proposals.size() << " proposals\n";
  }
  SaveProject(p, o.project);
  return kExitOk;
}

int Stats(const Options& o, std::ostream& out) {
  const Project p = LoadProject(o.project);
  if (o.format == "csv") {
    std::vector<StatsReport> reports;
    if (o.image_id) {
      reports.push_back(ImageStats(p, *o.image_id));
      WriteOutput(o.out, ExportStatsCsv(reports, p), out);
    } else {
      WriteOutput(o.out, ExportProjectStatsCsv(p), out);
    }
    return kExitOk;
  }
  const StatsReport r = o.image_id ? ImageStats(p, *o.image_id) : ProjectStats(p);
  WriteOutput(o.out, StatsToJson(r, p).dump(2) + "\n", out);
  return kExitOk;
}

int ExportOverlay(const Options& o, std::ostream& out) {
  const Project p = LoadProject(o.project);
  const fs::path dir = ProjectDir(o.project);
  auto render = [&](int id) {
    const ImageEntry& image = FindImage(p, id);
    return RenderOverlay(ReadFileBytes(dir / image.path), InstancesOf(p, id), p.labels);
  };
  if (o.image_id) {
    WriteFileBytes(o.out, render(*o.image_id));
    out << "wrote " << o.out << "\n";
    return kExitOk;
  }
  fs::create_directories(o.out);
  for (const ImageEntry& image : p.images) {
    const fs::path target =
        fs::path(o.out) / (fs::path(image.path).stem().string() + "_overlay.png");
    WriteFileBytes(target, render(image.id));
    out << "wrote " << target.string() << "\n";
  }
  return kExitOk;
}

std::vector<GroundTruth> LoadGroundTruth(const Options& o) {
  std::vector<GroundTruth> gts = ImportCoco(o.gt).ToGroundTruth();
  if (o.image_id) {
    std::erase_if(gts, [&](const GroundTruth& g) { return g.image_id != *o.image_id; });
    if (gts.empty()) {
      throw Error(ErrorCode::kNotFound,
                  "image " + std::to_string(*o.image_id) + " not in " + o.gt);
    }
  }
  if (gts.empty()) throw Error(ErrorCode::kValidation, o.gt + " has no images");
  return gts;
}

std::unique_ptr<SegmentationBackend> SimBackend(const Options& o,
                                                const std::vector<GroundTruth>& gts) {
  if (!o.backend.empty()) return MakeBackend(ParseBackendDescriptor(o.backend));
  return std::make_unique<OracleBackend>(gts, o.erosion);
}

// Per-effort mean over images; curves that ended early carry their final
// accuracy forward.
SimCurve MeanCurve(SimMethod method, uint64_t seed, const std::vector<SimCurve>& curves) {
  size_t longest = 0;
  for (const SimCurve& c : curves) longest = std::max(longest, c.points.size());
  SimCurve mean{method, seed, {}};
  for (size_t i = 0; i < longest; ++i) {
    double sum = 0.0;
    int64_t effort = 0;
    for (const SimCurve& c : curves) {
      const CurvePoint& pt = c.points[std::min(i, c.points.size() - 1)];
      sum += pt.accuracy;
      if (i < c.points.size()) effort = std::max(effort, pt.effort);
    }
    mean.points.push_back({effort, sum / static_cast<double>(curves.size())});
  }
  return mean;
}

void WritePerImage(const Options& o, const std::vector<GroundTruth>& gts,
                   const std::vector<double>& accuracies, std::ostream& out) {
  if (o.per_image.empty()) return;
  std::string csv = "image_id,file_name,accuracy\n";
  for (size_t i = 0; i < gts.size(); ++i) {
    csv += CsvRow({std::to_string(gts[i].image_id), gts[i].file_name,
                   FormatReal(accuracies[i])});
  }
  WriteOutput(o.per_image, csv, out);
}

int Sim(const std::string& method, const Options& o, std::ostream& out) {
  const std::vector<GroundTruth> gts = LoadGroundTruth(o);
  std::vector<SimCurve> curves;
  std::vector<double> finals;
  if (method == "sparse") {
    SparseOptions opts{o.schedule, o.fill_background ? SparseConvention::kFillBackground
                                                     : SparseConvention::kUnlabeledIncorrect};
    for (const GroundTruth& gt : gts) {
      curves.push_back(SimulateSparse(gt, o.points, *o.seed, opts));
      finals.push_back(curves.back().points.back().accuracy);
    }
  } else if (method == "prompt") {
    const auto backend = SimBackend(o, gts);
    for (const GroundTruth& gt : gts) {
      backend->Prepare(GroundTruthRef(gt));
      curves.push_back(SimulatePrompts(gt, *backend, o.budget, *o.seed,
                                       PromptSimOptions{!o.no_negative}));
      finals.push_back(curves.back().points.back().accuracy);
    }
  } else {
    const auto backend = SimBackend(o, gts);
    for (const GroundTruth& gt : gts) {
      backend->Prepare(GroundTruthRef(gt));
      finals.push_back(EvaluateAuto(gt, *backend, o.min_area, o.confidence));
      curves.push_back(SimCurve{SimMethod::kAuto, o.seed.value_or(0), {{0, finals.back()}}});
    }
  }
  const SimMethod m = curves.front().method;
  WriteOutput(o.out, CurveCsv(MeanCurve(m, o.seed.value_or(0), curves)), out);
  WritePerImage(o, gts, finals, out);
  return kExitOk;
}

int EvalMae(const Options& o, std::ostream& out) {
  const auto truth = ImportCoco(o.gt).ToGroundTruth();
  const auto pred = ImportCoco(o.pred).ToGroundTruth();
  std::map<int, const GroundTruth*> by_id;
  for (const GroundTruth& p : pred) by_id[p.image_id] = &p;
  for (const GroundTruth& p : pred) {
    if (std::none_of(truth.begin(), truth.end(),
                     [&](const GroundTruth& g) { return g.image_id == p.image_id; })) {
      throw Error(ErrorCode::kValidation,
                  "prediction image " + std::to_string(p.image_id) + " has no ground truth");
    }
  }
  if (truth.empty()) throw Error(ErrorCode::kValidation, o.gt + " has no images");
  double sum = 0.0;
  for (const GroundTruth& g : truth) {
    auto it = by_id.find(g.image_id);
    // Images without a prediction count as predicting no coral.
    const BinaryMask p = it == by_id.end() ? BinaryMask::Empty(g.width, g.height)
                                           : it->second->CoralUnion();
    sum += Mae(p, g.CoralUnion());
  }
  out << FormatReal(sum / static_cast<double>(truth.size())) << "\n";
  return kExitOk;
}

int Aggregate(const Options& o, std::ostream& out) {
  const auto bytes = ReadFileBytes(o.in);
  const auto rows = ParseCsv(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                              bytes.size()));
  if (rows.empty()) throw Error(ErrorCode::kValidation, o.in + " is empty");
  const auto& header = rows.front();
  const auto loc_col = std::find(header.begin(), header.end(), "location");
  const auto acc_col = std::find(header.begin(), header.end(), "accuracy");
  if (loc_col == header.end() || acc_col == header.end()) {
    throw Error(ErrorCode::kValidation, o.in + " needs location and accuracy columns");
  }
  const size_t li = static_cast<size_t>(loc_col - header.begin());
  const size_t ai = static_cast<size_t>(acc_col - header.begin());
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  std::map<std::string, size_t> index;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= std::max(li, ai)) {
      throw Error(ErrorCode::kValidation, "row " + std::to_string(r + 1) + " is short");
    }
    double acc;
    try {
      size_t used = 0;
      acc = std::stod(row[ai], &used);
      if (used != row[ai].size()) throw std::invalid_argument(row[ai]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kValidation, "row " + std::to_string(r + 1) +
                                              ": bad accuracy \"" + row[ai] + "\"");
    }
    if (!(acc >= 0.0 && acc <= 1.0)) {
      throw Error(ErrorCode::kValidation, "row " + std::to_string(r + 1) +
                                              ": accuracy outside [0,1]");
    }
    auto [it, fresh] = index.emplace(row[li], groups.size());
    if (fresh) groups.push_back({row[li], {}});
    groups[it->second].second.push_back(acc);
  }
  WriteOutput(o.out, AggregateCsv(AggregateLocations(groups)), out);
  return kExitOk;
}

int ServeCmd(const Options& o, std::ostream& out) {
  const auto descriptor = OptionalBackend(o.backend);
  std::shared_ptr<SegmentationBackend> backend;
  std::string name;
  if (descriptor) {
    backend = MakeBackend(*descriptor);
    name = FormatBackendDescriptor(*descriptor);
  }
  ProjectService service(o.project, backend, name);
  ServeOptions opts{o.host, o.port, o.static_dir};
  Serve(service, opts,
        [&](int port) {
          out << "listening on http://" << o.host << ":" << port << std::endl;
        },
        /*handle_signals=*/true);
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense coral mask labelling, statistics and evaluation."};
  app.name("coralab");
  app.require_subcommand(1);
  Options o;
  std::string selected;

  auto* project = app.add_subcommand("project", "Create and prepare projects");
  project->require_subcommand(1);
  auto* p_new = project->add_subcommand("new", "Import images into a new project");
  p_new->add_option("images", o.images, "Image files or directories")->required();
  p_new->add_option("--out", o.out, "Project file to write")->required();
  p_new->add_option("--stride", o.stride, "Keep every n-th image")->check(CLI::PositiveNumber);
  p_new->add_option("--min-area", o.min_area, "Auto-segmentation min area fraction");
  p_new->add_option("--confidence", o.confidence, "Auto-segmentation confidence threshold");
  p_new->add_option("--site", o.site, "Collection site tag for every image");

  auto add_backend = [&](CLI::App* cmd) {
    cmd->add_option("--backend", o.backend,
                    std::string("oracle:<gt>[;erosion=r] or subprocess:<cmd>; default $") +
                        kBackendEnvVar);
  };
  auto add_project = [&](CLI::App* cmd) {
    cmd->add_option("--project", o.project, "Project file")->required();
  };
  auto add_image = [&](CLI::App* cmd) {
    cmd->add_option("--image-id", o.image_id, "Restrict to one image");
  };

  auto* p_prep = project->add_subcommand("prepare", "Run backend preparation per image");
  add_project(p_prep);
  add_backend(p_prep);
  add_image(p_prep);

  auto* segment = app.add_subcommand("segment", "Automatic segmentation");
  segment->require_subcommand(1);
  auto* s_auto = segment->add_subcommand("auto", "Add automatic proposals as instances");
  add_project(s_auto);
  add_backend(s_auto);
  add_image(s_auto);
  auto* s_min = s_auto->add_option("--min-area", o.min_area, "Override min area fraction");
  auto* s_conf = s_auto->add_option("--confidence", o.confidence, "Override threshold");

  auto* stats = app.add_subcommand("stats", "Coverage, label and health statistics");
  add_project(stats);
  add_image(stats);
  stats->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  stats->add_option("--out", o.out, "Output file (default stdout)");

  auto* exp = app.add_subcommand("export", "Export annotations");
  exp->require_subcommand(1);
  auto* e_coco = exp->add_subcommand("coco", "COCO JSON with RLE segmentations");
  add_project(e_coco);
  e_coco->add_option("--out", o.out, "Output file (default stdout)");
  auto* e_csv = exp->add_subcommand("csv", "Instances or statistics CSV");
  add_project(e_csv);
  e_csv->add_option("--kind", o.csv_kind, "instances or stats")
      ->check(CLI::IsMember({"instances", "stats"}));
  e_csv->add_option("--out", o.out, "Output file (default stdout)");
  auto* e_overlay = exp->add_subcommand("overlay", "PNG overlays of the masks");
  add_project(e_overlay);
  add_image(e_overlay);
  e_overlay->add_option("--out", o.out, "PNG file, or directory without --image-id")
      ->required();

  auto* sim = app.add_subcommand("sim", "Annotation-effort simulations");
  sim->require_subcommand(1);
  auto add_sim_common = [&](CLI::App* cmd) {
    cmd->add_option("--gt", o.gt, "Ground truth COCO JSON")->required();
    cmd->add_option("--out", o.out, "Curve CSV (default stdout)");
    cmd->add_option("--per-image", o.per_image, "Per-image final accuracy CSV");
    add_image(cmd);
  };
  auto* sim_sparse = sim->add_subcommand("sparse", "Random sparse point labelling");
  add_sim_common(sim_sparse);
  sim_sparse->add_option("--points", o.points, "Points per image")->required();
  sim_sparse->add_option("--seed", o.seed, "RNG seed")->required();
  sim_sparse->add_option("--schedule", o.schedule, "Efforts to record (default all)")
      ->delimiter(',');
  sim_sparse->add_flag("--fill-background", o.fill_background,
                       "Score unlabelled pixels as background");
  auto* sim_prompt = sim->add_subcommand("prompt", "Iterative click refinement");
  add_sim_common(sim_prompt);
  add_backend(sim_prompt);
  sim_prompt->add_option("--budget", o.budget, "Prompts per image")->required();
  sim_prompt->add_option("--seed", o.seed, "RNG seed")->required();
  sim_prompt->add_option("--erosion", o.erosion, "Oracle erosion radius")
      ->check(CLI::NonNegativeNumber);
  sim_prompt->add_flag("--no-negative", o.no_negative, "Never issue negative prompts");
  auto* sim_auto = sim->add_subcommand("auto", "Unrefined automatic segmentation");
  add_sim_common(sim_auto);
  add_backend(sim_auto);
  sim_auto->add_option("--seed", o.seed, "Recorded in the output only");
  sim_auto->add_option("--erosion", o.erosion, "Oracle erosion radius")
      ->check(CLI::NonNegativeNumber);
  sim_auto->add_option("--min-area", o.min_area, "Min area fraction");
  sim_auto->add_option("--confidence", o.confidence, "Confidence threshold");

  auto* eval = app.add_subcommand("eval", "Compare predictions with ground truth");
  eval->require_subcommand(1);
  auto* e_mae = eval->add_subcommand("mae", "Mean absolute error over images");
  e_mae->add_option("--pred", o.pred, "Predicted COCO JSON")->required();
  e_mae->add_option("--gt", o.gt, "Ground truth COCO JSON")->required();

  auto* agg = app.add_subcommand("aggregate", "Per-location mean accuracy");
  agg->add_option("--in", o.in, "CSV with location and accuracy columns")->required();
  agg->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* serve = app.add_subcommand("serve", "HTTP API for the labelling UI");
  add_project(serve);
  add_backend(serve);
  serve->add_option("--port", o.port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--static", o.static_dir, "Directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const CLI::App* sub = &app; sub;) {
      failing = sub;
      const auto subs = sub->get_subcommands();
      sub = subs.empty() ? nullptr : subs.front();
    }
    err << failing->help();
    return kExitUsage;
  }
  o.has_min_area = s_min->count() > 0;
  o.has_confidence = s_conf->count() > 0;

  try {
    if (*p_new) return ProjectNew(o, out, err);
    if (*p_prep) return ProjectPrepare(o, out);
    if (*s_auto) return SegmentAuto(o, out);
    if (*stats) return Stats(o, out);
    if (*e_coco) {
      WriteOutput(o.out, ExportCocoText(LoadProject(o.project)), out);
      return kExitOk;
    }
    if (*e_csv) {
      const Project p = LoadProject(o.project);
      WriteOutput(o.out, o.csv_kind == "stats" ? ExportProjectStatsCsv(p)
                                               : ExportInstancesCsv(p), out);
      return kExitOk;
    }
    if (*e_overlay) return ExportOverlay(o, out);
    if (*sim_sparse) return Sim("sparse", o, out);
    if (*sim_prompt) return Sim("prompt", o, out);
    if (*sim_auto) return Sim("auto", o, out);
    if (*e_mae) return EvalMae(o, out);
    if (*agg) return Aggregate(o, out);
    if (*serve) return ServeCmd(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace coralab
