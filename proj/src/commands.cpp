#include "hdk/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "hdk/depth_render.hpp"
#include "hdk/evalkit.hpp"
#include "hdk/fitting.hpp"
#include "hdk/io.hpp"
#include "hdk/svg.hpp"

namespace hdk::cli {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

// An input file that could not be read or failed validation.
class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
auto validated(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw BadInput(path.filename().string() + ": " + e.what());
  }
}

struct Outcome {
  int code = kExitOk;
  std::string message;
};

Outcome guarded(const fs::path& input, const std::function<std::string()>& body) {
  try {
    return {kExitOk, body()};
  } catch (const BadInput& e) {
    return {kExitInput, e.what()};
  } catch (const Error& e) {
    return {exit_code(e.code()), input.filename().string() + ": " + e.what()};
  } catch (const std::exception& e) {
    return {kExitInput, input.filename().string() + ": " + e.what()};
  }
}

// Runs body(i) for i in [0, count) on up to thread_limit() workers; results
// are kept in index order so output never depends on scheduling.
std::vector<Outcome> run_all(std::size_t count, const std::function<Outcome(std::size_t)>& body) {
  std::vector<Outcome> results(count);
  const std::size_t workers = std::min<std::size_t>(thread_limit(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = body(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) results[i] = body(i);
    });
  }
  pool.clear();
  return results;
}

int report(const std::vector<Outcome>& results, const Globals& g, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  for (const Outcome& r : results) {
    if (r.code != kExitOk) {
      err << "error: " << r.message << "\n";
      if (code == kExitOk) code = r.code;
    } else if (!g.quiet && !r.message.empty()) {
      out << r.message << "\n";
    }
  }
  return code;
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Input files paired with output locations: a single file maps to the given
// paths, a directory maps each *.json to a same-named file in each output dir.
struct Job {
  fs::path input;
  fs::path out;
  std::optional<fs::path> extra;
  std::optional<fs::path> svg;
};

std::vector<Job> plan_jobs(const fs::path& input, const fs::path& out, const std::optional<fs::path>& extra,
                           const std::optional<fs::path>& svg) {
  if (!fs::exists(input)) throw BadInput("no such file or directory: " + input.string());
  if (!fs::is_directory(input)) return {{input, out, extra, svg}};
  fs::create_directories(out);
  if (extra) fs::create_directories(*extra);
  if (svg) fs::create_directories(*svg);
  std::vector<Job> jobs;
  for (const fs::path& f : json_files(input)) {
    Job j{f, out / f.filename(), std::nullopt, std::nullopt};
    if (extra) j.extra = *extra / f.filename();
    if (svg) j.svg = *svg / f.filename().replace_extension(".svg");
    jobs.push_back(std::move(j));
  }
  return jobs;
}

struct Loaded {
  std::string text;
  std::uint64_t hash;
};

Loaded load(const fs::path& path) {
  std::string text = validated(path, [&] { return io::read_text(path); });
  const std::uint64_t h = io::fnv1a(text);
  return {std::move(text), h};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json with_manifest(Json doc, io::Manifest m, Clock::time_point t0) {
  m.duration_seconds = seconds_since(t0);
  doc["manifest"] = io::manifest_to_json(m);
  return doc;
}

std::uint64_t config_hash(const Json& cfg) { return io::fnv1a(io::dump(cfg)); }

double max_discrepancy(const HorizonDepthMap& a, const HorizonDepthMap& b) {
  double worst = 0.0;
  for (int j = 0; j < a.m(); ++j) {
    worst = std::max(worst, std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]));
  }
  return worst;
}

Json values_of(const HorizonDepthMap& d) { return Json(std::vector<double>(d.values().begin(), d.values().end())); }

void check_rays(int m) {
  if (m < 4) throw BadInput("--m must be at least 4");
}

Polygon lifted_plan(const BoundaryPair& pair, double h, double ratio) {
  Polygon plan;
  for (const Vec3& p : lift_to_plane(pair.floor(), h, ratio)) plan.push_back({p.x, p.z});
  return plan;
}

template <class Run>
int dispatch(Run&& run, std::ostream& err) {
  try {
    return run();
  } catch (const BadInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
    case ErrorCode::kFormat:
    case ErrorCode::kShape:
      return kExitInput;
    case ErrorCode::kFitFailure:
      return kExitFit;
    default:
      return kExitGeometry;
  }
}

unsigned thread_limit() {
  if (const char* env = std::getenv("HDK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_gen_gt(const GenGtArgs& args, const Globals& g, std::ostream& out, std::ostream& err) {
  return dispatch(
      [&] {
        check_rays(args.m);
        const auto jobs = plan_jobs(args.input, args.out, args.boundary_out, args.svg);
        const Json cfg{{"m", args.m}};
        const auto results = run_all(jobs.size(), [&](std::size_t i) {
          const Job& job = jobs[i];
          return guarded(job.input, [&] {
            const auto t0 = Clock::now();
            const Loaded in = load(job.input);
            const LayoutAnnotation a = validated(job.input, [&] {
              return io::annotation_from_json(io::parse_json(in.text, job.input.filename().string()));
            });
            const PairRender r = render_annotation(a, make_ray_fan(args.m));
            const io::Manifest m{"gen-gt", {{job.input.filename().string(), in.hash}}, config_hash(cfg), g.seed, 0.0};

            if (job.extra) {
              // Corner boundary when every corner is visible, else the visible
              // boundary sampled along the ray fan.
              std::string source = "corners";
              std::optional<BoundaryPair> pair;
              try {
                pair = annotation_to_boundaries(a);
              } catch (const Error& e) {
                if (e.code() != ErrorCode::kGeometry) throw;
                pair = sample_boundary_pair(a, args.m);
                source = "sampled";
              }
              Json doc = io::boundary_to_json(*pair, a.camera_height(), a.ceiling_ratio());
              doc["source"] = source;
              io::write_atomic(*job.extra, io::dump(with_manifest(std::move(doc), m, t0)));
            }
            if (job.svg) io::write_atomic(*job.svg, plot_svg(a.corners(), r.floor.depth, r.ceiling.depth));
            Json doc{{"m", args.m},
                     {"values", values_of(r.floor.depth)},
                     {"floor_ceiling_max_discrepancy", max_discrepancy(r.floor.depth, r.ceiling.depth)}};
            io::write_atomic(job.out, io::dump(with_manifest(std::move(doc), m, t0)));
            return job.input.filename().string() + " -> " + job.out.string();
          });
        });
        return report(results, g, out, err);
      },
      err);
}

int run_render(const RenderArgs& args, const Globals& g, std::ostream& out, std::ostream& err) {
  return dispatch(
      [&] {
        check_rays(args.m);
        const auto jobs = plan_jobs(args.input, args.out, std::nullopt, args.svg);
        const Json cfg{{"m", args.m}};
        const auto results = run_all(jobs.size(), [&](std::size_t i) {
          const Job& job = jobs[i];
          return guarded(job.input, [&] {
            const auto t0 = Clock::now();
            const Loaded in = load(job.input);
            const io::BoundaryFile b = validated(job.input, [&] {
              return io::boundary_from_json(io::parse_json(in.text, job.input.filename().string()));
            });
            const PairRender r = render_pair(b.pair, b.camera_height, b.ceiling_ratio, make_ray_fan(args.m));
            const io::Manifest m{"render", {{job.input.filename().string(), in.hash}}, config_hash(cfg), g.seed, 0.0};
            if (job.svg) {
              io::write_atomic(*job.svg, plot_svg(lifted_plan(b.pair, b.camera_height, b.ceiling_ratio),
                                                  r.floor.depth, r.ceiling.depth));
            }
            Json doc{{"m", args.m},
                     {"values", values_of(r.floor.depth)},
                     {"ceiling_values", values_of(r.ceiling.depth)},
                     {"floor_ceiling_max_discrepancy", max_discrepancy(r.floor.depth, r.ceiling.depth)}};
            io::write_atomic(job.out, io::dump(with_manifest(std::move(doc), m, t0)));
            return job.input.filename().string() + " -> " + job.out.string();
          });
        });
        return report(results, g, out, err);
      },
      err);
}

int run_fit(const FitArgs& args, const Globals& g, std::ostream& out, std::ostream& err) {
  return dispatch(
      [&] {
        std::optional<Json> cfg_doc;
        std::vector<std::pair<std::string, std::uint64_t>> cfg_input;
        if (args.config) {
          const Loaded c = load(*args.config);
          cfg_doc = io::parse_json(c.text, args.config->filename().string());
          cfg_input.emplace_back(args.config->filename().string(), c.hash);
        }
        const auto jobs = plan_jobs(args.input, args.out, std::nullopt, args.svg);
        const auto results = run_all(jobs.size(), [&](std::size_t i) {
          const Job& job = jobs[i];
          return guarded(job.input, [&] {
            const auto t0 = Clock::now();
            const Loaded in = load(job.input);
            const HorizonDepthMap target = validated(job.input, [&] {
              return job.input.extension() == ".csv"
                         ? io::depth_from_csv(in.text)
                         : io::depth_from_json(io::parse_json(in.text, job.input.filename().string()));
            });
            FitConfig base;
            base.m_rays = target.m();
            base.seed = g.seed;
            const FitConfig cfg = validated(args.config.value_or(job.input), [&] {
              if (!cfg_doc) {
                base.validate();
                return base;
              }
              return io::fit_config_from_json(*cfg_doc, base);
            });
            const Json cfg_json = io::fit_config_to_json(cfg);
            io::Manifest m{"fit", {{job.input.filename().string(), in.hash}}, config_hash(cfg_json), cfg.seed, 0.0};
            m.inputs.insert(m.inputs.end(), cfg_input.begin(), cfg_input.end());

            FitResult fit = [&] {
              try {
                return fit_layout(target, cfg);
              } catch (const FitFailure& f) {
                Json doc{{"error", f.what()}, {"config", cfg_json}, {"loss_trajectory", f.loss_trajectory()}};
                io::write_atomic(job.out, io::dump(with_manifest(std::move(doc), m, t0)));
                throw;
              }
            }();

            Json annotation = nullptr;
            bool snapped = false;
            std::optional<LayoutAnnotation> plan;
            try {
              plan = manhattan_snap(fit.boundary, fit.ceiling_ratio, cfg.camera_height);
              snapped = true;
            } catch (const Error&) {
              try {
                plan = LayoutAnnotation(lifted_plan(fit.boundary, cfg.camera_height, fit.ceiling_ratio),
                                        cfg.camera_height, fit.ceiling_ratio);
              } catch (const Error&) {
              }
            }
            if (plan) annotation = io::annotation_to_json(*plan);
            if (job.svg && plan) {
              const PairRender r = render_pair(fit.boundary, cfg.camera_height, fit.ceiling_ratio, target.fan());
              io::write_atomic(*job.svg, plot_svg(plan->corners(), r.floor.depth, r.ceiling.depth));
            }
            Json doc{{"converged", fit.converged},
                     {"iterations", fit.iterations},
                     {"final_loss", fit.loss_trajectory.back()},
                     {"ceiling_ratio", fit.ceiling_ratio},
                     {"snapped", snapped},
                     {"annotation", annotation},
                     {"boundary", io::boundary_to_json(fit.boundary, cfg.camera_height, fit.ceiling_ratio)},
                     {"loss_trajectory", fit.loss_trajectory},
                     {"config", cfg_json}};
            io::write_atomic(job.out, io::dump(with_manifest(std::move(doc), m, t0)));
            char summary[160];
            std::snprintf(summary, sizeof summary, " (%d iterations, loss %.6g, %zu corners%s)", fit.iterations,
                          fit.loss_trajectory.back(), plan ? plan->corners().size() : std::size_t{0},
                          snapped ? "" : ", unsnapped");
            return job.input.filename().string() + " -> " + job.out.string() + summary;
          });
        });
        return report(results, g, out, err);
      },
      err);
}

int run_eval(const EvalArgs& args, const Globals& g, std::ostream& out, std::ostream& err) {
  return dispatch(
      [&] {
        const auto t0 = Clock::now();
        for (const fs::path& d : {args.pred_dir, args.gt_dir}) {
          if (!fs::is_directory(d)) throw BadInput("not a directory: " + d.string());
        }
        std::map<std::string, fs::path> preds, gts;
        for (const fs::path& f : json_files(args.pred_dir)) preds[f.filename().string()] = f;
        for (const fs::path& f : json_files(args.gt_dir)) gts[f.filename().string()] = f;

        std::vector<std::string> names, unmatched;
        for (const auto& [name, _] : preds) (gts.count(name) ? names : unmatched).push_back(name);
        for (const auto& [name, _] : gts) {
          if (!preds.count(name)) unmatched.push_back(name);
        }
        std::sort(unmatched.begin(), unmatched.end());

        std::vector<IoUReport> reports(names.size());
        std::vector<std::pair<std::string, std::uint64_t>> hashes(2 * names.size());
        const auto results = run_all(names.size(), [&](std::size_t i) {
          const fs::path& pf = preds[names[i]];
          const fs::path& gf = gts[names[i]];
          return guarded(pf, [&] {
            const Loaded p = load(pf);
            const Loaded t = load(gf);
            hashes[2 * i] = {"pred/" + names[i], p.hash};
            hashes[2 * i + 1] = {"gt/" + names[i], t.hash};
            const LayoutAnnotation pred = validated(pf, [&] {
              Json doc = io::parse_json(p.text, pf.filename().string());
              if (doc.is_object() && doc.contains("annotation")) doc = doc["annotation"];
              return io::annotation_from_json(doc);
            });
            const LayoutAnnotation gt =
                validated(gf, [&] { return io::annotation_from_json(io::parse_json(t.text, gf.filename().string())); });
            reports[i] = layout_iou(pred, gt);
            return std::string();
          });
        });

        Json samples = Json::array(), failures = Json::array();
        std::vector<IoUReport> ok;
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (results[i].code != kExitOk) {
            failures.push_back({{"name", names[i]}, {"error", results[i].message}});
            continue;
          }
          Json s{{"name", names[i]}};
          s.update(io::iou_report_to_json(reports[i]));
          samples.push_back(std::move(s));
          ok.push_back(reports[i]);
        }
        const BucketTable table = bucket_by_corners(ok);
        io::Manifest m{"eval", {}, config_hash(Json::object()), g.seed, 0.0};
        for (const auto& h : hashes) {
          if (!h.first.empty()) m.inputs.push_back(h);
        }
        Json doc{{"samples", samples},
                 {"table", io::bucket_table_to_json(table)},
                 {"unmatched", unmatched},
                 {"failed", failures}};
        io::write_atomic(args.out, io::dump(with_manifest(std::move(doc), m, t0)));

        int code = report(results, Globals{g.seed, true}, out, err);
        for (const std::string& u : unmatched) err << "error: unmatched file " << u << "\n";
        if (!unmatched.empty() && code == kExitOk) code = kExitInput;
        if (!g.quiet) out << format_table(table);
        return code;
      },
      err);
}

int run_ablate(const AblateArgs& args, const Globals& g, std::ostream& out, std::ostream& err) {
  return dispatch(
      [&] {
        const auto t0 = Clock::now();
        if (args.m_list.empty()) throw BadInput("--m-list is empty");
        for (int m : args.m_list) check_rays(m);
        check_rays(args.reference_m);
        if (!fs::exists(args.input)) throw BadInput("no such file or directory: " + args.input.string());
        const std::vector<fs::path> files =
            fs::is_directory(args.input) ? json_files(args.input) : std::vector<fs::path>{args.input};
        const RayFan reference_fan = make_ray_fan(args.reference_m);

        struct RoomErrors {
          std::vector<double> max_err, mean_err;
          std::uint64_t hash = 0;
        };
        std::vector<RoomErrors> rooms(files.size());
        const auto results = run_all(files.size(), [&](std::size_t i) {
          return guarded(files[i], [&] {
            const Loaded in = load(files[i]);
            rooms[i].hash = in.hash;
            const LayoutAnnotation a = validated(files[i], [&] {
              return io::annotation_from_json(io::parse_json(in.text, files[i].filename().string()));
            });
            const HorizonDepthMap reference = render_annotation(a, reference_fan).floor.depth;
            for (int m : args.m_list) {
              const ApproximationError e = ray_count_error(a, m, reference);
              rooms[i].max_err.push_back(e.max_abs);
              rooms[i].mean_err.push_back(e.mean_abs);
            }
            return std::string();
          });
        });

        Json rows = Json::array(), per_room = Json::array();
        io::Manifest man{"ablate-m", {}, 0, g.seed, 0.0};
        std::size_t used = 0;
        std::vector<double> row_max(args.m_list.size(), 0.0), row_mean(args.m_list.size(), 0.0);
        for (std::size_t i = 0; i < files.size(); ++i) {
          man.inputs.emplace_back(files[i].filename().string(), rooms[i].hash);
          if (results[i].code != kExitOk) continue;
          ++used;
          Json errs = Json::array();
          for (std::size_t k = 0; k < args.m_list.size(); ++k) {
            row_max[k] = std::max(row_max[k], rooms[i].max_err[k]);
            row_mean[k] += rooms[i].mean_err[k];
            errs.push_back({{"m", args.m_list[k]},
                            {"max_abs_error", rooms[i].max_err[k]},
                            {"mean_abs_error", rooms[i].mean_err[k]}});
          }
          per_room.push_back({{"name", files[i].filename().string()}, {"errors", errs}});
        }
        for (std::size_t k = 0; k < args.m_list.size(); ++k) {
          const double mean = used ? row_mean[k] / static_cast<double>(used) : 0.0;
          rows.push_back({{"m", args.m_list[k]}, {"max_abs_error", row_max[k]}, {"mean_abs_error", mean}});
          if (!g.quiet) {
            char line[96];
            std::snprintf(line, sizeof line, "M=%-6d max %.6e  mean %.6e\n", args.m_list[k], row_max[k], mean);
            out << line;
          }
        }
        const Json cfg{{"m_list", args.m_list}, {"reference_m", args.reference_m}};
        man.config_hash = config_hash(cfg);
        Json doc{{"reference_m", args.reference_m}, {"rooms_used", used}, {"rows", rows}, {"rooms", per_room}};
        io::write_atomic(args.out, io::dump(with_manifest(std::move(doc), man, t0)));
        return report(results, Globals{g.seed, true}, out, err);
      },
      err);
}

}  // namespace hdk::cli
