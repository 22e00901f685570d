#include "pmelt/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelt/topo_metrics.hpp"

namespace pmelt {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::size_t AuditReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

std::string AuditReport::csv() const {
  std::ostringstream os;
  os << "image,property,result,detail\n";
  for (const auto& c : checks) {
    os << c.image << ',' << c.property << ',' << (c.passed ? "pass" : "FAIL") << ',' << c.detail
       << '\n';
  }
  os << "# images=" << images << " checks=" << checks.size() << " violations=" << violations()
     << '\n';
  return os.str();
}

std::vector<AuditCheck> audit_image(const GrayImage& x, const std::string& name,
                                    const AuditOptions& opts, const MeltOperator& op) {
  const MeltSchedule s = build_schedule(x, opts.region_threshold, opts.min_persistence);
  const auto grid = uniform_grid(opts.grid_points);

  std::vector<GrayImage> melted;
  melted.reserve(grid.size());
  for (double t : grid) melted.push_back(op(s, t));

  std::vector<AuditCheck> out;
  auto check = [&](std::string property, bool ok, std::string detail = {}) {
    out.push_back({name, std::move(property), ok, std::move(detail)});
  };

  {
    std::vector<int> betti;
    for (const auto& m : melted) betti.push_back(measure_beta1(m));
    const bool monotone = std::is_sorted(betti.rbegin(), betti.rend());
    std::string seq;
    for (int b : betti) seq += (seq.empty() ? "" : " ") + std::to_string(b);
    check("beta1_monotone", monotone, seq);
    check("endpoint_beta1_zero", betti.back() == 0, "beta1(t=1)=" + std::to_string(betti.back()));
  }

  check("endpoint_identity", melted.front() == x);

  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 1; i < melted.size() && ok; ++i) {
      const auto a = melted[i - 1].data(), b = melted[i].data();
      for (std::size_t p = 0; p < a.size(); ++p) {
        if (a[p] > b[p]) {
          ok = false;
          detail = "t=" + fmt(grid[i]) + " pixel " + std::to_string(p);
          break;
        }
      }
    }
    check("pointwise_monotone", ok, detail);
  }

  {
    double worst = 0.0;
    bool sequential = true;
    for (double t : grid) {
      double mass = 0.0;
      bool later_started = false;
      for (std::size_t k = s.size(); k-- > 0;) {
        const double a = amplitude(s, k, t);
        mass += a * s.features()[k].mass();
        if (later_started && a != 1.0) sequential = false;
        if (a > 0.0) later_started = true;
      }
      worst = std::max(worst, std::abs(mass - std::min(t * s.total_mass(), s.total_mass())));
    }
    check("mass_accounting", worst <= opts.mass_tolerance, "max_error=" + fmt(worst));
    check("sequential_fill", sequential);
  }

  {
    int overlaps = 0;
    const auto f = s.features();
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j)
        if (f[i].region.intersects(f[j].region)) ++overlaps;
    check("regions_disjoint", overlaps == 0,
          "features=" + std::to_string(f.size()) + " overlaps=" + std::to_string(overlaps));
  }
  return out;
}

AuditReport audit_corpus(std::span<const NamedImage> corpus, const AuditOptions& opts,
                         const MeltOperator& op) {
  AuditReport report;
  for (const auto& item : corpus) {
    auto checks = audit_image(item.image, item.name, opts, op);
    report.checks.insert(report.checks.end(), std::make_move_iterator(checks.begin()),
                         std::make_move_iterator(checks.end()));
    ++report.images;
  }
  return report;
}

}  // namespace pmelt
