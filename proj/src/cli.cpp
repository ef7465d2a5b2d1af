#include "windbool/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "windbool/io.hpp"

namespace windbool::cli {

namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void print_audit(std::ostream& out, const MeshAudit& a, const std::string& prefix = "") {
  out << prefix << "is_closed=" << (a.is_closed ? "true" : "false") << '\n'
      << prefix << "is_edge_manifold=" << (a.is_edge_manifold ? "true" : "false") << '\n'
      << prefix << "boundary_edge_count=" << a.boundary_edge_count << '\n'
      << prefix << "degenerate_face_count=" << a.degenerate_face_count << '\n';
}

unsigned parse_threads(const std::string& text) {
  if (text.empty() || text == "auto") return 0;
  std::size_t used = 0;
  const long n = std::stol(text, &used);
  if (used != text.size() || n <= 0) throw std::invalid_argument("--threads expects a positive integer or 'auto'");
  return static_cast<unsigned>(n);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const io::ParseError& e) {
    err << "wind-bool: parse error: " << e.what() << '\n';
    return kExitParseOrIo;
  } catch (const io::IoError& e) {
    err << "wind-bool: I/O error: " << e.what() << '\n';
    return kExitParseOrIo;
  } catch (const RobustnessError& e) {
    err << "wind-bool: robustness error: " << e.what() << '\n';
    return kExitRobustness;
  } catch (const std::invalid_argument& e) {
    err << "wind-bool: invalid argument: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const std::exception& e) {
    err << "wind-bool: internal error: " << e.what() << '\n';
    return kExitRobustness;
  }
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 5) throw std::invalid_argument("--grid expects nx,ny,nz,min,max");
  GridSpec g;
  try {
    std::size_t used = 0;
    auto as_int = [&](const std::string& s) {
      const int v = std::stoi(s, &used);
      if (used != s.size() || v <= 0) throw std::invalid_argument("grid counts must be positive integers");
      return v;
    };
    auto as_double = [&](const std::string& s) {
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("grid bounds must be finite numbers");
      return v;
    };
    g.nx = as_int(parts[0]);
    g.ny = as_int(parts[1]);
    g.nz = as_int(parts[2]);
    g.min = as_double(parts[3]);
    g.max = as_double(parts[4]);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("--grid value out of range");
  }
  if (!(g.min <= g.max)) throw std::invalid_argument("--grid needs min <= max");
  return g;
}

std::vector<Point3> grid_points(const GridSpec& g) {
  auto coord = [&](int i, int n) { return n == 1 ? g.min : g.min + (g.max - g.min) * i / (n - 1); };
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(g.nx) * g.ny * g.nz);
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) pts.push_back({coord(i, g.nx), coord(j, g.ny), coord(k, g.nz)});
    }
  }
  return pts;
}

BoolOp parse_op(const std::string& name) {
  if (name == "union") return BoolOp::Union;
  if (name == "intersect") return BoolOp::Intersection;
  if (name == "minus") return BoolOp::DifferenceAB;
  if (name == "rminus") return BoolOp::DifferenceBA;
  if (name == "xor") return BoolOp::SymmetricDifference;
  throw std::invalid_argument("unknown --op '" + name + "'");
}

InsideRule parse_rule(const std::string& name) {
  if (name == "gt-half") return InsideRule::WindingGtHalf;
  if (name == "abs-gt-half") return InsideRule::AbsWindingGtHalf;
  if (name == "positive") return InsideRule::WindingPositive;
  if (name == "abs-positive") return InsideRule::AbsWindingPositive;
  throw std::invalid_argument("unknown --rule '" + name + "'");
}

int run_bool(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.a.empty() || config.b.empty() || config.output.empty()) {
    err << "wind-bool: bool-op requires -a, -b and -o\n";
    return kExitInvalidArguments;
  }
  return guarded(err, [&] {
    Stopwatch clock;
    const io::ReadOptions read{config.weld};
    const TriMesh a = io::read_mesh(config.a, read);
    const TriMesh b = io::read_mesh(config.b, read);
    const double t_read = clock.lap_ms();

    RefinedPair refined = corefine(a, b);
    const double t_corefine = clock.lap_ms();
    const auto classified = classify(refined, config.spec, hierarchical_evaluator(config.threads));
    const double t_classify = clock.lap_ms();
    const auto duplicates = resolve_coplanar(refined, config.spec);
    const double t_coplanar = clock.lap_ms();
    const TriMesh result = assemble(classified, duplicates, refined);
    const double t_assemble = clock.lap_ms();
    io::write_mesh(result, config.output);
    const double t_write = clock.lap_ms();

    if (config.verbose) {
      std::size_t keep = 0, flip = 0, discard = 0;
      for (const ClassifiedFace& c : classified) {
        keep += c.action == FaceAction::Keep;
        flip += c.action == FaceAction::KeepFlip;
        discard += c.action == FaceAction::Discard;
      }
      const auto& d = refined.diagnostics;
      out << "op=" << to_string(config.spec.op) << '\n'
          << "inside_rule=" << to_string(config.spec.inside_rule) << '\n'
          << "input_faces_a=" << a.face_count() << '\n'
          << "input_faces_b=" << b.face_count() << '\n'
          << "candidate_pairs=" << d.candidate_pairs << '\n'
          << "intersecting_pairs=" << d.intersecting_pairs << '\n'
          << "coplanar_overlaps=" << d.coplanar_overlaps << '\n'
          << "skipped_degenerate_pairs=" << d.skipped_degenerate_pairs << '\n'
          << "new_vertices=" << d.new_vertices << '\n'
          << "refined_faces_a=" << d.refined_faces_a << '\n'
          << "refined_faces_b=" << d.refined_faces_b << '\n'
          << "coplanar_pairs=" << refined.coplanar_pairs.size() << '\n'
          << "faces_keep=" << keep << '\n'
          << "faces_keep_flip=" << flip << '\n'
          << "faces_discard=" << discard << '\n'
          << "output_faces=" << result.face_count() << '\n';
      print_audit(out, audit(result), "output_");
      out << "time_read_ms=" << t_read << '\n'
          << "time_corefine_ms=" << t_corefine << '\n'
          << "time_classify_ms=" << t_classify << '\n'
          << "time_coplanar_ms=" << t_coplanar << '\n'
          << "time_assemble_ms=" << t_assemble << '\n'
          << "time_write_ms=" << t_write << '\n';
    }
    return kExitOk;
  });
}

int run_field(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.a.empty() || (config.points.empty() && !config.grid)) {
    err << "wind-bool: field requires -a and either --points or --grid\n";
    return kExitInvalidArguments;
  }
  return guarded(err, [&] {
    Stopwatch clock;
    const TriMesh mesh = io::read_mesh(config.a, io::ReadOptions{config.weld});
    const std::vector<Point3> points =
        config.grid ? grid_points(*config.grid) : io::parse_points_csv(io::read_text(config.points));
    const double t_read = clock.lap_ms();

    std::vector<double> values(points.size(), 0.0);
    if (!mesh.empty()) {
      const WindingBvh bvh = build_bvh(mesh);
      const auto w = winding_number_batch(mesh, bvh, points, config.threads);
      for (std::size_t i = 0; i < w.size(); ++i) {
        values[i] = w[i].on_surface ? std::numeric_limits<double>::quiet_NaN() : w[i].value;
      }
    }
    const double t_eval = clock.lap_ms();
    if (config.output.empty()) {
      out << io::format_field(points, values);
    } else {
      io::write_field(points, values, config.output);
    }
    if (config.verbose) {
      err << "points=" << points.size() << "\nfaces=" << mesh.face_count() << "\ntime_read_ms=" << t_read
          << "\ntime_eval_ms=" << t_eval << '\n';
    }
    return kExitOk;
  });
}

int run_audit(const CliConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TriMesh mesh = io::read_mesh(config.a, io::ReadOptions{config.weld});
    const MeshAudit a = audit(mesh);
    print_audit(out, a);
    if (config.verbose) out << "vertex_count=" << mesh.vertex_count() << "\nface_count=" << mesh.face_count() << '\n';
    return a.is_closed && a.is_edge_manifold ? kExitOk : kExitDiagnostic;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boolean operations on oriented triangle meshes via generalized winding numbers", "wind-bool"};
  app.require_subcommand(1);

  CliConfig config;
  std::string op;
  std::string rule = "gt-half";
  std::string threads = "auto";
  std::string grid;
  std::string a, b, output, points;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--weld", config.weld, "Merge bit-identical vertices on import");
    sub->add_flag("-v,--verbose", config.verbose, "Print diagnostics");
    sub->add_option("--threads", threads, "Worker threads or 'auto' (fallback: WIND_BOOL_THREADS)");
  };

  CLI::App* bool_cmd = app.add_subcommand("bool-op", "Boolean of two meshes");
  bool_cmd->add_option("--op", op, "union | intersect | minus | rminus | xor");
  bool_cmd->add_option("--rule", rule, "gt-half | abs-gt-half | positive | abs-positive");
  bool_cmd->add_option("-a", a, "First operand (.obj or .stl)");
  bool_cmd->add_option("-b", b, "Second operand (.obj or .stl)");
  bool_cmd->add_option("-o,--output", output, "Output mesh (.obj or .stl)");
  common(bool_cmd);

  CLI::App* field_cmd = app.add_subcommand("field", "Sample the winding number of a mesh");
  field_cmd->add_option("-a", a, "Mesh (.obj or .stl)");
  field_cmd->add_option("--points", points, "CSV of x,y,z query points");
  field_cmd->add_option("--grid", grid, "Lattice nx,ny,nz,min,max");
  field_cmd->add_option("-o,--output", output, "Output CSV (default: standard output)");
  common(field_cmd);

  CLI::App* audit_cmd = app.add_subcommand("audit", "Report closedness and manifoldness of a mesh");
  audit_cmd->add_option("-a", a, "Mesh (.obj or .stl)");
  common(audit_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "wind-bool: " << e.what() << '\n' << app.help();
    return kExitInvalidArguments;
  }

  try {
    config.threads = parse_threads(threads);
    config.a = a;
    config.b = b;
    config.output = output;
    config.points = points;
    if (*bool_cmd) {
      config.subcommand = Subcommand::BoolOp;
      if (op.empty() || a.empty() || b.empty() || output.empty()) {
        err << "wind-bool: bool-op requires --op, -a, -b and -o\n" << bool_cmd->help();
        return kExitInvalidArguments;
      }
      config.spec = {parse_op(op), parse_rule(rule)};
      return run_bool(config, out, err);
    }
    if (*field_cmd) {
      config.subcommand = Subcommand::Field;
      if (!grid.empty()) config.grid = parse_grid(grid);
      if (a.empty() || (points.empty() && grid.empty())) {
        err << "wind-bool: field requires -a and either --points or --grid\n" << field_cmd->help();
        return kExitInvalidArguments;
      }
      return run_field(config, out, err);
    }
    config.subcommand = Subcommand::Audit;
    return run_audit(config, out, err);
  } catch (const std::invalid_argument& e) {
    err << "wind-bool: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const std::out_of_range& e) {
    err << "wind-bool: argument out of range: " << e.what() << '\n';
    return kExitInvalidArguments;
  }
}

}  // namespace windbool::cli
