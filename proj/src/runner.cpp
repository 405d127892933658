#include "slabrad/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>

#include "slabrad/lindblad.hpp"
#include "slabrad/parallel.hpp"
#include "slabrad/slab_modes.hpp"
#include "slabrad/superradiance.hpp"

namespace slabrad {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double num(const json& c, const std::string& path) { return at_path(c, path).get<double>(); }
long long integer(const json& c, const std::string& path) { return at_path(c, path).get<long long>(); }
std::string str(const json& c, const std::string& path) { return at_path(c, path).get<std::string>(); }

std::vector<double> linspace(double a, double b, long long n, const std::string& name) {
  if (n <= 0) throw DomainError("empty sweep axis '" + name + "'");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) v[std::size_t(i)] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
  return v;
}

std::vector<double> phi_grid(const json& c) {
  const long long n = integer(c, "sweep.phi_points");
  if (n <= 0) throw DomainError("empty sweep axis 'phi'");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) v[std::size_t(i)] = 2.0 * kPi * double(i) / double(n);
  return v;
}

std::vector<double> d_grid(const json& c) {
  return linspace(num(c, "sweep.d_min_over_lambda"), num(c, "sweep.d_max_over_lambda"),
                  integer(c, "sweep.d_points"), "d_over_lambda");
}

Vec3 orientation(const json& c) {
  const auto o = str(c, "dipole.orientation");
  return o == "x" ? Vec3::UnitX() : o == "y" ? Vec3::UnitY() : Vec3::UnitZ();
}

Cell sign_cell(double v) {
  if (std::isnan(v)) return kNan;
  return (long long)(v >= 0.0);
}

RunResult run_modes(const json& c) {
  RunResult r;
  r.table.columns = {"width_nm", "polarization", "order", "n_eff", "k_g_per_m"};
  const auto widths = linspace(num(c, "modes.width_min_nm"), num(c, "modes.width_max_nm"),
                               integer(c, "modes.width_points"), "width_nm");
  std::vector<std::vector<std::vector<Cell>>> rows(widths.size());
  std::vector<std::string> errors(widths.size());
  parallel_for(widths.size(), [&](std::size_t i) {
    const SlabSpec spec{num(c, "slab.index"), num(c, "slab.cladding_index"), widths[i] * 1e-9,
                        num(c, "wavelength_nm") * 1e-9};
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
      try {
        for (const auto& m : find_modes(spec, pol)) {
          rows[i].push_back({widths[i], std::string(to_string(pol)), (long long)m.order, m.n_eff, m.k_g});
        }
      } catch (const Error& e) {
        rows[i].push_back({widths[i], std::string(to_string(pol)), -1LL, kNan, kNan});
        errors[i] += std::string(errors[i].empty() ? "" : "; ") + "width_nm=" +
                     std::to_string(widths[i]) + " " + to_string(pol) + ": " + e.what();
      }
    }
  });
  for (std::size_t i = 0; i < widths.size(); ++i) {
    for (auto& row : rows[i]) r.table.rows.push_back(std::move(row));
    if (!errors[i].empty()) r.failures.push_back(errors[i]);
  }
  return r;
}

RunResult run_greens(const json& c) {
  RunResult r;
  r.table.columns = {"d_over_lambda"};
  const char* axes = "xyz";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (const char* part : {"re_", "im_"}) r.table.columns.push_back(std::string(part) + axes[i] + axes[j]);
  const auto ds = d_grid(c);
  const GreensKernel kernel(medium_from_config(c));
  const double lambda = host_wavelength(c), z = emitter_height(c);
  r.table.rows.resize(ds.size());
  std::vector<std::string> errors(ds.size());
  parallel_for(ds.size(), [&](std::size_t k) {
    auto& row = r.table.rows[k];
    row.push_back(ds[k]);
    try {
      const Mat3c g = kernel.tensor(Vec3(ds[k] * lambda, 0.0, z), Vec3(0.0, 0.0, z)).total();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          row.push_back(g(i, j).real());
          row.push_back(g(i, j).imag());
        }
    } catch (const Error& e) {
      row.resize(1);
      row.insert(row.end(), 18, kNan);
      errors[k] = "d_over_lambda=" + std::to_string(ds[k]) + ": " + e.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) r.failures.push_back(e);
  return r;
}

RunResult run_pairpower(const json& c) {
  RunResult r;
  r.table.columns = {"d_over_lambda", "power_homogeneous", "power_slab"};
  const auto ds = d_grid(c);
  json bulk_cfg = c;
  bulk_cfg["environment"] = "homogeneous";
  json slab_cfg = c;
  slab_cfg["environment"] = "slab";
  const Medium media[2] = {medium_from_config(bulk_cfg), medium_from_config(slab_cfg)};
  const double lambda = host_wavelength(c);
  const Vec3 d_hat = orientation(c);
  r.table.rows.resize(ds.size());
  std::vector<std::string> errors(ds.size());
  parallel_for(ds.size(), [&](std::size_t k) {
    auto& row = r.table.rows[k];
    row = {ds[k], kNan, kNan};
    for (int m = 0; m < 2; ++m) {
      try {
        row[1 + m] = pair_radiated_power(ds[k] * lambda, d_hat, media[m]);
      } catch (const Error& e) {
        errors[k] += std::string(errors[k].empty() ? "" : "; ") + "d_over_lambda=" +
                     std::to_string(ds[k]) + (m ? " slab: " : " homogeneous: ") + e.what();
      }
    }
  });
  for (auto& e : errors)
    if (!e.empty()) r.failures.push_back(e);
  return r;
}

LatticeKind kind_of(const json& c) { return parse_lattice_kind(str(c, "lattice.kind")); }

RunResult run_spectrum(const json& c) {
  RunResult r;
  const int n = int(integer(c, "lattice.sites"));
  r.table.columns = {"d_over_lambda"};
  for (int i = 1; i <= n; ++i) r.table.columns.push_back("gamma_nu_" + std::to_string(i));
  const auto ds = d_grid(c);
  const GreensKernel kernel(medium_from_config(c));
  r.table.rows.resize(ds.size());
  std::vector<std::string> errors(ds.size());
  parallel_for(ds.size(), [&](std::size_t k) {
    auto& row = r.table.rows[k];
    row.push_back(ds[k]);
    try {
      const auto cm = coupling_matrices(lattice_array(c, kind_of(c), n, ds[k]), kernel);
      const auto s = collective_spectrum(cm);
      for (int i = 0; i < n; ++i) row.push_back(s.rates(i) / cm.gamma_eps);
    } catch (const Error& e) {
      row.resize(1);
      row.insert(row.end(), std::size_t(n), kNan);
      errors[k] = "d_over_lambda=" + std::to_string(ds[k]) + ": " + e.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) r.failures.push_back(e);
  return r;
}

Criterion criterion_of(const json& c) {
  return str(c, "sweep.criterion") == "total" ? Criterion::Total : Criterion::Directional;
}

RunResult run_map(const json& c) {
  RunResult r;
  const GreensKernel kernel(medium_from_config(c));
  const int n = int(integer(c, "lattice.sites"));
  const LatticeKind kind = kind_of(c);
  const Criterion crit = criterion_of(c);
  const SweepAxis rows{"d_over_lambda", d_grid(c)};
  const SweepAxis cols{"phi", crit == Criterion::Total ? std::vector<double>{0.0} : phi_grid(c)};
  const auto map = sweep_map([&](double d, double) { return lattice_array(c, kind, n, d); }, rows,
                             cols, kernel, crit);
  if (crit == Criterion::Total) {
    r.table.columns = {"d_over_lambda", "gamma_dot", "superradiant"};
    for (std::size_t i = 0; i < rows.values.size(); ++i) {
      const double v = map.values(long(i), 0);
      r.table.rows.push_back({rows.values[i], v, sign_cell(v)});
    }
  } else {
    r.table.columns = {"d_over_lambda", "phi", "gamma_dot", "superradiant"};
    for (std::size_t i = 0; i < rows.values.size(); ++i) {
      for (std::size_t j = 0; j < cols.values.size(); ++j) {
        const double v = map.values(long(i), long(j));
        r.table.rows.push_back({rows.values[i], cols.values[j], v, sign_cell(v)});
      }
    }
  }
  r.failures = map.failures;
  return r;
}

RunResult run_sizesweep(const json& c) {
  RunResult r;
  const GreensKernel kernel(medium_from_config(c));
  const LatticeKind kind = kind_of(c);
  const Criterion crit = criterion_of(c);
  SweepAxis rows{"N", {}};
  for (const auto& v : at_path(c, "sweep.N_list")) rows.values.push_back(v.get<double>());
  const SweepAxis cols{"d_over_lambda", d_grid(c)};
  const double phi = num(c, "sweep.phi_over_pi") * kPi;
  const auto map = sweep_grid(
      [&](double n, double d) { return lattice_array(c, kind, int(std::lround(n)), d); }, rows, cols,
      phi, kernel, crit);
  r.table.columns = {"N", "d_over_lambda", "gamma_dot", "superradiant"};
  for (std::size_t i = 0; i < rows.values.size(); ++i) {
    for (std::size_t j = 0; j < cols.values.size(); ++j) {
      const double v = map.values(long(i), long(j));
      r.table.rows.push_back({(long long)std::lround(rows.values[i]), cols.values[j], v, sign_cell(v)});
    }
  }
  r.failures = map.failures;
  r.extra["phi"] = phi;
  return r;
}

RunResult run_scaling(const json& c) {
  RunResult r;
  r.table.columns = {"dimensions", "alpha", "N", "d_min_times_k0"};
  for (int dims : {1, 2}) {
    std::vector<int> ns;
    for (const auto& v : at_path(c, dims == 1 ? "scaling.N_list_1d" : "scaling.N_list_2d")) ns.push_back(v.get<int>());
    if (ns.empty()) throw DomainError("empty sweep axis 'N'");
    for (const auto& a : at_path(c, "scaling.alpha")) {
      const double alpha = a.get<double>();
      for (const auto& p : dmin_scaling_check(alpha, dims, ns)) {
        r.table.rows.push_back({(long long)dims, alpha, (long long)p.n, p.d_min});
      }
    }
  }
  return r;
}

RunResult run_disorder(const json& c) {
  RunResult r;
  r.table.columns = {"phi", "mean_gamma_dot", "stderr", "realizations_used", "sigma_over_d"};
  const int n = int(integer(c, "lattice.sites"));
  const double d = num(c, "lattice.d_over_lambda");
  const EmitterArray lattice = lattice_array(c, kind_of(c), n, d);
  const auto phis = phi_grid(c);
  const auto& sigmas = at_path(c, "disorder.sigma_over_d");
  if (sigmas.empty()) throw DomainError("empty sweep axis 'sigma_over_d'");
  json rejected = json::array();
  for (const auto& s : sigmas) {
    DisorderSpec spec{s.get<double>(), int(integer(c, "disorder.realizations")),
                      std::uint64_t(integer(c, "disorder.seed"))};
    const auto curve = disorder_average(lattice, d * host_wavelength(c), spec, phis);
    for (std::size_t p = 0; p < phis.size(); ++p) {
      r.table.rows.push_back({phis[p], curve.mean[p], curve.stderr_[p], (long long)curve.used, spec.sigma});
    }
    for (const auto& f : curve.failures) r.failures.push_back("sigma_over_d=" + std::to_string(spec.sigma) + " " + f);
    rejected.push_back(curve.rejected);
  }
  r.extra["redrawn_realizations"] = rejected;
  return r;
}

RunResult run_oracle_check(const json& c) {
  RunResult r;
  r.table.columns = {"case", "N", "environment", "d_over_lambda", "criterion", "phi",
                     "closed_form", "finite_difference", "rel_error", "pass"};
  const int n = int(integer(c, "oracle.n"));
  if (n < 1 || n > kMaxOracleEmitters) {
    throw DomainError("oracle.n must lie in 1.." + std::to_string(kMaxOracleEmitters));
  }
  const auto seed = std::uint64_t(integer(c, "oracle.seed"));
  const int cases = int(integer(c, "oracle.cases"));
  const int nphi = int(integer(c, "oracle.phi_samples"));
  const double tol = num(c, "oracle.rel_tol");
  const double lambda = host_wavelength(c);
  const Medium medium = medium_from_config(c);
  const GreensKernel kernel(medium);
  std::vector<std::vector<std::vector<Cell>>> rows(static_cast<std::size_t>(cases));
  parallel_for(std::size_t(cases), [&](std::size_t k) {
    const double d = 0.1 + 2.9 * uniform01(seed, k, 0, 0, 0);
    EmitterArray a = lattice_array(c, LatticeKind::Chain, n, d);
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < 2; ++x) a.positions(x, i) += 0.2 * d * lambda * gaussian(seed, k, 1, std::uint64_t(i), std::uint64_t(x));
    const auto cm = coupling_matrices(a, kernel);
    const double scale_total = n * cm.gamma_eps * cm.gamma_eps;
    auto add = [&](const std::string& crit, double phi, double closed, double fd, double scale) {
      const double err = std::abs(fd - closed) / std::max(std::abs(closed), 1e-3 * scale);
      rows[k].push_back({(long long)k, (long long)n, str(c, "environment"), d, crit, phi, closed, fd,
                         err, (long long)(err <= tol)});
    };
    add("total", kNan, gamma_dot_total(cm), rate_derivative_fd(cm), scale_total);
    const double k_used = directional_wavenumber(a);
    for (int p = 0; p < nphi; ++p) {
      const double phi = 2.0 * kPi * uniform01(seed, k, 2, std::uint64_t(p), 0);
      const auto theta = directional_phases(a.positions, phi, k_used);
      add("directional", phi, gamma_dot_directional(cm, theta), rate_derivative_fd(cm, &theta),
          cm.gamma0 * n * cm.gamma_eps);
    }
  });
  for (auto& block : rows) {
    for (auto& row : block) {
      if (std::get<long long>(row.back()) == 0) {
        r.failures.push_back("case " + std::to_string(std::get<long long>(row[0])) + " " +
                             std::get<std::string>(row[4]) + " exceeds oracle.rel_tol");
      }
      r.table.rows.push_back(std::move(row));
    }
  }
  return r;
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"modes",    "greens",   "pairpower",
                                                 "spectrum", "map",      "sizesweep",
                                                 "scaling",  "disorder", "oracle-check"};
  return names;
}

Medium medium_from_config(const json& c) {
  const double lambda0 = num(c, "wavelength_nm") * 1e-9;
  const double index = num(c, "slab.index");
  if (str(c, "environment") == "homogeneous") return HomogeneousMedium{index, lambda0};
  QuadratureConfig q;
  q.detour_height = num(c, "quadrature.detour_height");
  q.k_max = num(c, "quadrature.k_max_over_k0");
  q.rel_tol = num(c, "quadrature.rel_tol");
  q.tail_terms = int(integer(c, "quadrature.tail_terms"));
  q.validate(index);
  const auto stack = LayerStack::centered(index, num(c, "slab.width_nm") * 1e-9, lambda0,
                                          num(c, "slab.cladding_index"));
  stack.validate();
  return SlabMedium{stack, q};
}

double emitter_height(const json& c) {
  if (str(c, "environment") == "homogeneous") return 0.0;
  const double z = num(c, "slab.emitter_z_nm") * 1e-9;
  if (std::abs(z) >= 0.5 * num(c, "slab.width_nm") * 1e-9) {
    throw DomainError("slab.emitter_z_nm places the emitters outside the slab");
  }
  return z;
}

double host_wavelength(const json& c) { return num(c, "wavelength_nm") * 1e-9 / num(c, "slab.index"); }

EmitterArray lattice_array(const json& c, LatticeKind kind, int sites, double d_over_lambda) {
  EmitterArray a;
  a.medium = medium_from_config(c);
  a.orientation = orientation(c);
  a.positions = generate_lattice({kind, sites, d_over_lambda * host_wavelength(c), emitter_height(c)});
  return a;
}

RunResult run_subcommand(const std::string& name, const json& config) {
  if (name == "modes") return run_modes(config);
  if (name == "greens") return run_greens(config);
  if (name == "pairpower") return run_pairpower(config);
  if (name == "spectrum") return run_spectrum(config);
  if (name == "map") return run_map(config);
  if (name == "sizesweep") return run_sizesweep(config);
  if (name == "scaling") return run_scaling(config);
  if (name == "disorder") return run_disorder(config);
  if (name == "oracle-check") return run_oracle_check(config);
  throw DomainError("unknown subcommand '" + name + "'");
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

json table_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        r.push_back(std::isnan(*d) ? json(nullptr) : json(*d));
      } else if (const auto* i = std::get_if<long long>(&cell)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

int write_outputs(const std::string& subcommand, const json& config, const RunResult& result,
                  double wall_time_s) {
  const std::string path = str(config, "output.path");
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write output file '" + path + "'");
    if (str(config, "output.format") == "json") {
      out << table_json(result.table).dump(1) << '\n';
    } else {
      out << format_csv(result.table);
    }
  }
  const long long seed = subcommand == "oracle-check" ? integer(config, "oracle.seed")
                                                      : integer(config, "disorder.seed");
  json meta = {{"tool_version", SLABRAD_VERSION},
               {"seed", seed},
               {"wall_time_s", wall_time_s},
               {"failed_points", result.failures.size()},
               {"failures", result.failures}};
  for (const auto& [k, v] : result.extra.items()) meta[k] = v;
  const json sidecar = {{"subcommand", subcommand}, {"config", config}, {"meta", meta}};
  std::ofstream side(path + ".meta.json", std::ios::binary);
  if (!side) throw Error("cannot write sidecar '" + path + ".meta.json'");
  side << sidecar.dump(2) << '\n';
  return result.failures.empty() ? 0 : 2;
}

}  // namespace slabrad
