#include "glassseg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "glassseg/pnm.hpp"

namespace glassseg {
namespace {

namespace pt = boost::property_tree;

struct Field {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

[[noreturn]] void bad_value(const std::string& value, const char* expected) {
  fail(ErrorKind::config, "'" + value + "' is not " + expected);
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) bad_value(s, "a number");
  return v;
}

Field real(std::string section, std::string key, double& v) {
  return {std::move(section), std::move(key), [&v](const std::string& s) { v = parse_number<double>(s); },
          [&v] { return format_double(v); }};
}

Field integer(std::string section, std::string key, int& v) {
  return {std::move(section), std::move(key), [&v](const std::string& s) { v = parse_number<int>(s); },
          [&v] { return std::to_string(v); }};
}

Field unsigned64(std::string section, std::string key, std::uint64_t& v) {
  return {std::move(section), std::move(key),
          [&v](const std::string& s) { v = parse_number<std::uint64_t>(s); },
          [&v] { return std::to_string(v); }};
}

Field boolean(std::string section, std::string key, bool& v) {
  return {std::move(section), std::move(key),
          [&v](const std::string& s) {
            if (s == "true" || s == "1" || s == "yes") {
              v = true;
            } else if (s == "false" || s == "0" || s == "no") {
              v = false;
            } else {
              bad_value(s, "a boolean");
            }
          },
          [&v] { return std::string(v ? "true" : "false"); }};
}

template <typename E>
Field choice(std::string section, std::string key, E& v,
             std::vector<std::pair<std::string, E>> names) {
  return {std::move(section), std::move(key),
          [&v, names](const std::string& s) {
            for (const auto& [n, e] : names) {
              if (n == s) {
                v = e;
                return;
              }
            }
            std::string allowed;
            for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : "|") + n;
            bad_value(s, ("one of " + allowed).c_str());
          },
          [&v, names] {
            for (const auto& [n, e] : names) {
              if (e == v) return n;
            }
            return std::string();
          }};
}

Field connectivity(std::string section, std::string key, Connectivity& v) {
  return choice(std::move(section), std::move(key), v,
                {{"4", Connectivity::four}, {"8", Connectivity::eight}});
}

std::vector<Field> pipeline_fields(PipelineConfig& c) {
  return {
      real("grayscale", "r", c.luma.r),
      real("grayscale", "g", c.luma.g),
      real("grayscale", "b", c.luma.b),
      real("tv-inpaint", "alpha", c.tv.alpha),
      real("tv-inpaint", "eps", c.tv.eps),
      real("tv-inpaint", "dt", c.tv.dt),
      integer("tv-inpaint", "max_iters", c.tv.max_iters),
      real("tv-inpaint", "tol", c.tv.tol),
      choice("gradient", "norm", c.gradient_norm,
             {{"euclidean", GradientNorm::euclidean}, {"absolute-sum", GradientNorm::absolute_sum}}),
      boolean("gradient", "normalize", c.normalize_gradient),
      real("diffusion", "k", c.diffusion.k),
      real("diffusion", "lam", c.diffusion.lam),
      integer("diffusion", "iters", c.diffusion.iters),
      integer("kmeans", "k_clusters", c.kmeans.k_clusters),
      integer("kmeans", "max_iters", c.kmeans.max_iters),
      real("kmeans", "tol", c.kmeans.tol),
      unsigned64("kmeans", "seed", c.kmeans.seed),
      boolean("kmeans", "refine", c.kmeans.refine),
      integer("kmeans", "restarts", c.kmeans_restarts),
      choice("kmeans", "input", c.kmeans_input,
             {{"diffused-gradient", KMeansInput::diffused_gradient},
              {"inpainted-gray", KMeansInput::inpainted_gray}}),
      integer("watershed", "min_area", c.markers.min_area),
      connectivity("watershed", "marker_connectivity", c.markers.connectivity),
      integer("watershed", "marker_clusters", c.marker_clusters),
      connectivity("watershed", "connectivity", c.flood_connectivity),
      real("laplace-interp", "tol", c.laplace.tol),
      integer("laplace-interp", "max_iters", c.laplace.max_iters),
      real("laplace-interp", "omega", c.laplace.omega),
      choice("laplace-interp", "objects", c.object_rule,
             {{"brightest-markers", ObjectRule::brightest_markers},
              {"brightest-cluster", ObjectRule::brightest_cluster}}),
      real("laplace-interp", "min_object_contrast", c.min_object_contrast),
      boolean("pipeline", "dump_stages", c.dump_stages),
      {"pipeline", "output", [&c](const std::string& s) { c.output_dir = s; },
       [&c] { return c.output_dir.string(); }},
  };
}

pt::ptree read_tree(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::config, std::string("config: ") + e.what());
  }
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      fail(ErrorKind::config, "config: key '" + name + "' outside of a section");
    }
  }
  return tree;
}

// Applies tree entries through the field table; `extra` handles keys the
// table does not know and returns false to reject them.
void apply(const pt::ptree& tree, const std::vector<Field>& fields,
           const std::function<bool(const std::string&, const std::string&, const std::string&)>& extra) {
  for (const auto& [section_name, section] : tree) {
    for (const auto& [key, node] : section) {
      const std::string value = node.data();
      bool handled = false;
      for (const Field& f : fields) {
        if (f.section == section_name && f.key == key) {
          try {
            f.set(value);
          } catch (const Error& e) {
            fail(ErrorKind::config, "config: [" + section_name + "] " + key + ": " + e.what());
          }
          handled = true;
          break;
        }
      }
      if (!handled && !(extra && extra(section_name, key, value))) {
        fail(ErrorKind::config, "config: unknown key [" + section_name + "] " + key);
      }
    }
  }
}

std::string write(const std::vector<Field>& fields,
                  const std::vector<std::pair<std::string, std::string>>& extra_lines = {}) {
  std::string out;
  std::string current;
  for (const Field& f : fields) {
    if (f.section != current) {
      out += (out.empty() ? "[" : "\n[") + f.section + "]\n";
      current = f.section;
    }
    out += f.key + " = " + f.get() + "\n";
  }
  for (const auto& [k, v] : extra_lines) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<Field> scene_fields(SceneSpec& s) {
  const std::string n = "scene";
  return {
      integer(n, "width", s.width),
      integer(n, "height", s.height),
      real(n, "background", s.background),
      real(n, "texture_amplitude", s.texture_amplitude),
      real(n, "noise_amplitude", s.noise_amplitude),
      real(n, "stain_clutter", s.stain_clutter),
      integer(n, "random_objects", s.random_objects),
      real(n, "object_min_size", s.object_min_size),
      real(n, "object_max_size", s.object_max_size),
      real(n, "object_intensity_lo", s.object_intensity_lo),
      real(n, "object_intensity_hi", s.object_intensity_hi),
      integer(n, "random_stains", s.random_stains),
      real(n, "stain_min_radius", s.stain_min_radius),
      real(n, "stain_max_radius", s.stain_max_radius),
      real(n, "max_stain_coverage", s.max_stain_coverage),
      real(n, "max_object_stain_fraction", s.max_object_stain_fraction),
      integer(n, "stain_edge_clearance", s.stain_edge_clearance),
      unsigned64(n, "seed", s.seed),
  };
}

// Numbered shape keys (object1, stain2, ...) are collected and sorted by index.
bool numbered(const std::string& key, const std::string& prefix, int& index) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return false;
  const std::string digits = key.substr(prefix.size());
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  return res.ec == std::errc() && res.ptr == digits.data() + digits.size() && index >= 0;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text) {
  PipelineConfig cfg;
  apply(read_tree(text), pipeline_fields(cfg), nullptr);
  cfg.validate();
  return cfg;
}

std::string serialize_pipeline_config(const PipelineConfig& cfg) {
  PipelineConfig copy = cfg;
  return write(pipeline_fields(copy));
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  return parse_pipeline_config(std::string(bytes.begin(), bytes.end()));
}

SceneSpec parse_scene_spec(const std::string& text) {
  SceneSpec spec;
  std::vector<std::pair<int, ObjectShape>> objects;
  std::vector<std::pair<int, StainBlob>> stains;
  auto extra = [&](const std::string& section, const std::string& key, const std::string& value) {
    if (section != "scene") return false;
    int index = 0;
    const std::vector<std::string> w = split_words(value);
    auto num = [&](std::size_t i) { return parse_number<double>(w[i]); };
    try {
      if (numbered(key, "object", index)) {
        if (w.size() != 6) fail(ErrorKind::config, "expected: kind cx cy half_w half_h intensity");
        ObjectShape s;
        if (w[0] == "ellipse") {
          s.kind = ShapeKind::ellipse;
        } else if (w[0] == "rectangle") {
          s.kind = ShapeKind::rectangle;
        } else {
          bad_value(w[0], "ellipse or rectangle");
        }
        s.cx = num(1);
        s.cy = num(2);
        s.half_w = num(3);
        s.half_h = num(4);
        s.intensity = num(5);
        objects.emplace_back(index, s);
        return true;
      }
      if (numbered(key, "stain", index)) {
        if (w.size() != 5 && w.size() != 7) {
          fail(ErrorKind::config, "expected: cx cy radius intensity opacity [wobble phase]");
        }
        StainBlob b;
        b.cx = num(0);
        b.cy = num(1);
        b.radius = num(2);
        b.intensity = num(3);
        b.opacity = num(4);
        if (w.size() == 7) {
          b.wobble = num(5);
          b.phase = num(6);
        }
        stains.emplace_back(index, b);
        return true;
      }
    } catch (const Error& e) {
      fail(ErrorKind::config, "config: [scene] " + key + ": " + e.what());
    }
    return false;
  };
  apply(read_tree(text), scene_fields(spec), extra);
  std::stable_sort(objects.begin(), objects.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::stable_sort(stains.begin(), stains.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [i, s] : objects) spec.objects.push_back(s);
  for (auto& [i, b] : stains) spec.stains.push_back(b);
  spec.validate();
  return spec;
}

std::string serialize_scene_spec(const SceneSpec& spec) {
  SceneSpec copy = spec;
  std::vector<std::pair<std::string, std::string>> lines;
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const ObjectShape& s = spec.objects[i];
    lines.emplace_back("object" + std::to_string(i + 1),
                       std::string(s.kind == ShapeKind::ellipse ? "ellipse" : "rectangle") + " " +
                           format_double(s.cx) + " " + format_double(s.cy) + " " +
                           format_double(s.half_w) + " " + format_double(s.half_h) + " " +
                           format_double(s.intensity));
  }
  for (std::size_t i = 0; i < spec.stains.size(); ++i) {
    const StainBlob& b = spec.stains[i];
    lines.emplace_back("stain" + std::to_string(i + 1),
                       format_double(b.cx) + " " + format_double(b.cy) + " " +
                           format_double(b.radius) + " " + format_double(b.intensity) + " " +
                           format_double(b.opacity) + " " + format_double(b.wobble) + " " +
                           format_double(b.phase));
  }
  return write(scene_fields(copy), lines);
}

}  // namespace glassseg
