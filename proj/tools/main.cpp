#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mergemetrics/mergemetrics.hpp"

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_text(const mm::tree_point& p) {
  return "(node " + std::to_string(p.base) + ", height " + fmt17(p.height) + ")";
}

mm::discrete_path path_from_files(const std::vector<std::string>& files) {
  mm::discrete_path p;
  std::size_t m = files.size();
  for (std::size_t k = 0; k < m; ++k) {
    double t = m == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(m - 1);
    p.waypoints.push_back({t, mm::load_tree(files[k])});
  }
  return p;
}

void print_matching(const mm::barcode& b1, const mm::barcode& b2, const mm::partial_matching& m) {
  std::vector<bool> used1(b1.size(), false), used2(b2.size(), false);
  for (auto [i, j] : m.pairs) {
    used1[i] = used2[j] = true;
    std::cout << "match " << i << " -> " << j << "\n";
  }
  for (std::size_t i = 0; i < b1.size(); ++i)
    if (!used1[i]) std::cout << "unmatched left " << i << "\n";
  for (std::size_t j = 0; j < b2.size(); ++j)
    if (!used2[j]) std::cout << "unmatched right " << j << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric geometry on merge trees: barcodes, bottleneck and "
               "interleaving distances, chambers, and geodesic witnesses"};
  app.require_subcommand(1);

  std::string file_a, file_b, mode = "exact", metric = "bottleneck";
  std::vector<std::string> files;
  double epsilon = 0.0;
  std::size_t samples = 128, trials = 200, max_leaves = 4, leaves = 2;
  std::uint64_t seed = 7;
  double lo = 0.0, hi = 8.0;

  auto* c_validate = app.add_subcommand("validate", "parse and validate a tree document");
  c_validate->add_option("tree", file_a)->required();

  auto* c_barcode = app.add_subcommand("barcode", "barcode of a merge tree (Elder Rule)");
  c_barcode->add_option("tree", file_a)->required();

  auto* c_bottleneck =
      app.add_subcommand("bottleneck", "bottleneck distance between two trees' barcodes");
  c_bottleneck->add_option("tree-a", file_a)->required();
  c_bottleneck->add_option("tree-b", file_b)->required();

  auto* c_interleave = app.add_subcommand("interleave", "interleaving distance or bounds");
  c_interleave->add_option("--mode", mode)->check(CLI::IsMember({"exact", "upper", "trivial"}));
  c_interleave->add_option("tree-a", file_a)->required();
  c_interleave->add_option("tree-b", file_b)->required();

  auto* c_chamber = app.add_subcommand("chamber", "chamber signatures and in-chamber distance");
  c_chamber->require_subcommand(1);
  auto* c_sig = c_chamber->add_subcommand("signature", "print the chamber signature");
  c_sig->add_option("tree", file_a)->required();
  auto* c_cmp = c_chamber->add_subcommand("compare", "do two trees share a chamber?");
  c_cmp->add_option("tree-a", file_a)->required();
  c_cmp->add_option("tree-b", file_b)->required();
  auto* c_dist = c_chamber->add_subcommand("distance", "in-chamber distance max |dM|");
  c_dist->add_option("tree-a", file_a)->required();
  c_dist->add_option("tree-b", file_b)->required();

  auto* c_prune = app.add_subcommand("prune", "shift waypoints by i^epsilon");
  c_prune->add_option("--epsilon", epsilon)->required();
  c_prune->add_option("trees", files)->required()->expected(-1);

  auto* c_length = app.add_subcommand("path-length", "discrete length of a waypoint path");
  c_length->add_option("--metric", metric)
      ->check(CLI::IsMember({"bottleneck", "interleaving", "cophenetic"}));
  c_length->add_option("trees", files)->required()->expected(-2);

  auto* c_geodesic = app.add_subcommand("geodesic", "witness path certifying the distance");
  c_geodesic->add_option("--samples", samples);
  c_geodesic->add_option("tree-a", file_a)->required();
  c_geodesic->add_option("tree-b", file_b)->required();

  auto* c_verify = app.add_subcommand("verify-theorem", "randomized length-equality experiment");
  c_verify->add_option("--trials", trials);
  c_verify->add_option("--max-leaves", max_leaves);
  c_verify->add_option("--samples", samples);
  c_verify->add_option("--seed", seed);

  auto* c_random = app.add_subcommand("random", "deterministic random tree document");
  c_random->add_option("--leaves", leaves)->required();
  c_random->add_option("--seed", seed)->required();
  c_random->add_option("--min-height", lo);
  c_random->add_option("--max-height", hi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_validate) {
      mm::merge_tree t = mm::load_tree(file_a);
      std::cout << "valid: nodes=" << t.size() << " leaves=" << t.leaf_count()
                << " root_height=" << fmt17(t.root_height())
                << " min_height=" << fmt17(t.min_height()) << "\n";
    } else if (*c_barcode) {
      std::cout << mm::serialize_barcode(mm::elder_rule(mm::load_tree(file_a)));
    } else if (*c_bottleneck) {
      mm::barcode b1 = mm::elder_rule(mm::load_tree(file_a));
      mm::barcode b2 = mm::elder_rule(mm::load_tree(file_b));
      mm::bottleneck_result r = mm::bottleneck(b1, b2);
      std::cout << "distance = " << fmt17(r.distance) << "\n";
      print_matching(b1, b2, r.matching);
    } else if (*c_interleave) {
      mm::merge_tree a = mm::load_tree(file_a), b = mm::load_tree(file_b);
      if (mode == "exact") {
        mm::exact_interleaving ex = mm::interleaving_distance_exact(a, b);
        std::cout << "distance = " << fmt17(ex.distance) << "\n";
        for (std::size_t i = 0; i < ex.witness.alpha.size(); ++i)
          std::cout << "alpha " << i << " -> " << point_text(ex.witness.alpha[i]) << "\n";
        for (std::size_t j = 0; j < ex.witness.beta.size(); ++j)
          std::cout << "beta " << j << " -> " << point_text(ex.witness.beta[j]) << "\n";
      } else if (mode == "upper") {
        mm::labeled_bound lb = mm::best_labeled_upper_bound(a, b);
        std::cout << "bound = " << fmt17(lb.bound) << "\n";
        for (std::size_t i = 0; i < lb.bijection.size(); ++i)
          std::cout << "pair " << i << " -> " << lb.bijection[i] << "\n";
      } else {
        std::cout << "bound = " << fmt17(mm::trivial_interleaving_bound(a, b)) << "\n";
      }
    } else if (*c_sig) {
      mm::chamber_signature sig = mm::chamber_signature_of(mm::load_tree(file_a));
      std::cout << "n = " << sig.n << "\nranking =";
      for (std::size_t r : sig.ranking) std::cout << " " << r;
      std::cout << "\n";
    } else if (*c_cmp) {
      bool same = mm::same_chamber(mm::load_tree(file_a), mm::load_tree(file_b));
      std::cout << "same_chamber = " << (same ? "true" : "false") << "\n";
    } else if (*c_dist) {
      double d = mm::chamber_distance(mm::load_tree(file_a), mm::load_tree(file_b));
      std::cout << "distance = " << fmt17(d) << "\n";
    } else if (*c_prune) {
      if (files.size() == 1) {
        std::cout << mm::serialize_tree(mm::shift(mm::load_tree(files[0]), epsilon));
      } else {
        mm::discrete_path p = mm::prune_path(path_from_files(files), epsilon);
        std::cout << mm::path_to_json(p).dump(2) << "\n";
      }
    } else if (*c_length) {
      mm::path_metric pm = metric == "bottleneck"      ? mm::path_metric::bottleneck
                           : metric == "interleaving" ? mm::path_metric::interleaving_oracle
                                                       : mm::path_metric::cophenetic_upper;
      std::cout << "length = " << fmt17(mm::discrete_length(path_from_files(files), pm)) << "\n";
    } else if (*c_geodesic) {
      mm::merge_tree a = mm::load_tree(file_a), b = mm::load_tree(file_b);
      mm::exact_interleaving ex = mm::interleaving_distance_exact(a, b);
      mm::discrete_path p = mm::geodesic_witness(a, b, samples);
      mm::json doc = mm::path_to_json(p);
      doc["distance"] = ex.distance;
      doc["length_bottleneck"] = mm::discrete_length(p, mm::path_metric::bottleneck);
      std::cout << doc.dump(2) << "\n";
    } else if (*c_verify) {
      mm::theorem_report rep = mm::verify_intrinsic_theorem(trials, max_leaves, samples, seed);
      std::cout << mm::report_to_json(rep).dump(2) << "\n";
    } else if (*c_random) {
      std::cout << mm::serialize_tree(mm::random_tree(leaves, seed, lo, hi));
    }
  } catch (const mm::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: CheckFailed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
