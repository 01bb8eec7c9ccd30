// bitomo: parameter counting, operator bases, tomography demonstrations and
// exact ideality coefficients for theories with latent joint parameters.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bitomo/bitomo.hpp"

namespace {

using namespace bitomo;

enum class Format { Json, Text };

struct CommonOptions {
  Format format = Format::Json;
  double rank_tol = kRankRelTol;
};

void add_format_flag(CLI::App* cmd, Format& format) {
  cmd->add_option_function<std::string>(
         "--format",
         [&format](const std::string& value) {
           if (value == "json")
             format = Format::Json;
           else if (value == "text")
             format = Format::Text;
           else
             throw CLI::ValidationError("--format must be json or text");
         },
         "Output format (json or text)")
      ->default_str("json");
}

SystemDims parse_dims(const std::string& csv) {
  SystemDims dims;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty())
      throw MalformedInputError("empty entry in dims list '" + csv + "'");
    std::size_t used = 0;
    const std::int64_t value = std::stoll(token, &used);
    if (used != token.size())
      throw MalformedInputError("bad dims entry '" + token + "'");
    dims.push_back(value);
  }
  validate_dims(dims);
  return dims;
}

JsonValue dims_to_json(const SystemDims& dims) {
  JsonValue arr = JsonValue::array();
  for (auto d : dims) arr.push(JsonValue::number(d));
  return arr;
}

void emit(const JsonValue& doc) { std::cout << doc.dump(); }

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void emit_text_table(const std::vector<std::pair<std::string, std::string>>&
                         rows) {
  std::size_t width = 0;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  for (const auto& [key, value] : rows)
    std::cout << pad_right(key, width + 2) << value << "\n";
}

// ---------------------------------------------------------------------------
// count

struct CountOptions {
  std::string dims_csv;
  int r = 2;
  int s = 2;
  std::int64_t alpha = 1;
  bool audit = false;
  Format format = Format::Json;
};

int run_count(const CountOptions& opt) {
  const SystemDims dims = parse_dims(opt.dims_csv);
  const TheoryProfile profile{opt.r, opt.s, opt.alpha};
  const KLPair kl = kl_multi(dims, profile);

  std::optional<RedundancyAudit> audit;
  if (opt.audit) audit = bilocal_redundancy_audit(dims, profile);

  if (opt.format == Format::Text) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("k", std::to_string(kl.k));
    rows.emplace_back("l", std::to_string(kl.l));
    if (audit) {
      rows.emplace_back("naive_count", std::to_string(audit->naive_count));
      rows.emplace_back("true_k", std::to_string(audit->true_k));
      rows.emplace_back("surplus", std::to_string(audit->surplus));
      for (const auto& [label, value] : audit->per_class)
        rows.emplace_back("class " + label, std::to_string(value));
    }
    emit_text_table(rows);
    return 0;
  }

  JsonValue doc = JsonValue::object();
  doc.add("k", JsonValue::exact(kl.k));
  doc.add("l", JsonValue::exact(kl.l));
  if (audit) {
    JsonValue audit_doc = JsonValue::object();
    audit_doc.add("naive_count", JsonValue::exact(audit->naive_count));
    audit_doc.add("true_k", JsonValue::exact(audit->true_k));
    audit_doc.add("surplus", JsonValue::exact(audit->surplus));
    JsonValue per_class = JsonValue::object();
    for (const auto& [label, value] : audit->per_class)
      per_class.add(label, JsonValue::exact(value));
    audit_doc.add("per_class", std::move(per_class));
    doc.add("audit", std::move(audit_doc));
  }
  emit(doc);
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
  std::string path;  // empty means stdin
  Format format = Format::Json;
};

int run_fit(const FitOptions& opt) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!opt.path.empty()) {
    file.open(opt.path);
    if (!file) throw MalformedInputError("cannot open table: " + opt.path);
    in = &file;
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> table;
  std::string line;
  while (std::getline(*in, line)) {
    std::stringstream ss(line);
    std::int64_t n = 0;
    std::int64_t k = 0;
    if (!(ss >> n)) continue;  // blank line
    if (!(ss >> k))
      throw MalformedInputError("table line needs two columns: '" + line +
                                "'");
    std::string extra;
    if (ss >> extra)
      throw MalformedInputError("table line has extra columns: '" + line +
                                "'");
    table.emplace_back(n, k);
  }

  const std::optional<TheoryProfile> fit = fit_profile(table);
  if (opt.format == Format::Text) {
    if (fit)
      emit_text_table({{"r", std::to_string(fit->r)},
                       {"s", std::to_string(fit->s)}});
    else
      emit_text_table({{"fit", "none"},
                       {"reason", "no (r, s) pair reproduces the table"}});
    return 0;
  }

  JsonValue doc = JsonValue::object();
  if (fit) {
    doc.add("r", JsonValue::exact(static_cast<std::int64_t>(fit->r)));
    doc.add("s", JsonValue::exact(static_cast<std::int64_t>(fit->s)));
  } else {
    doc.add("fit", JsonValue::null());
    doc.add("reason",
            JsonValue::str("no (r, s) pair reproduces the table"));
  }
  emit(doc);
  return 0;
}

// ---------------------------------------------------------------------------
// basis

struct BasisOptions {
  std::string dims_csv;
  std::string kind = "complex";
  bool check = false;
  std::string dump_path;
  Format format = Format::Json;
  double rank_tol = kRankRelTol;
};

OperatorBasis build_basis(const std::string& kind, const SystemDims& dims) {
  if (kind == "complex") return complex_product_basis(dims);
  if (kind == "real") return real_product_basis(dims);
  if (kind == "bilocal-projector") return bilocal_projector_basis(dims);
  throw MalformedInputError(
      "--kind must be complex, real or bilocal-projector");
}

int run_basis(const BasisOptions& opt) {
  const SystemDims dims = parse_dims(opt.dims_csv);
  const OperatorBasis basis = build_basis(opt.kind, dims);

  bool pass = true;
  JsonValue doc = JsonValue::object();
  doc.add("kind", JsonValue::str(basis_kind_name(basis.kind)));
  doc.add("dims", dims_to_json(dims));
  doc.add("dim", JsonValue::number(static_cast<std::int64_t>(basis.dim())));
  doc.add("count",
          JsonValue::number(static_cast<std::int64_t>(basis.size())));

  std::vector<std::pair<std::string, std::string>> rows = {
      {"kind", basis_kind_name(basis.kind)},
      {"dim", std::to_string(basis.dim())},
      {"count", std::to_string(basis.size())},
  };

  if (opt.check) {
    const RankCertificate cert =
        linear_independence_rank(basis.ops, opt.rank_tol);
    const bool full_rank =
        cert.rank == static_cast<int>(basis.size());
    pass = pass && full_rank;
    doc.add("rank", JsonValue::exact(static_cast<std::int64_t>(cert.rank)));
    doc.add("min_relative_sv", JsonValue::number(cert.min_relative_sv));
    doc.add("full_rank", JsonValue::boolean(full_rank));
    rows.emplace_back("rank", std::to_string(cert.rank));
    rows.emplace_back("full_rank", full_rank ? "yes" : "no");

    if (basis.kind == BasisKind::ComplexProjector ||
        basis.kind == BasisKind::BilocalProjector) {
      double defect = 0.0;
      for (const auto& op : basis.ops)
        defect = std::max(
            defect, (op.mat * op.mat - op.mat).cwiseAbs().maxCoeff());
      const bool idempotent = defect <= kHermitianTol;
      pass = pass && idempotent;
      doc.add("max_idempotence_defect", JsonValue::number(defect));
      doc.add("idempotent", JsonValue::boolean(idempotent));
      rows.emplace_back("idempotent", idempotent ? "yes" : "no");
    }
    if (basis.kind == BasisKind::RealProduct ||
        basis.kind == BasisKind::BilocalProjector) {
      bool all_real = true;
      for (const auto& op : basis.ops)
        all_real = all_real && op.reality == Reality::RealSymmetric;
      pass = pass && all_real;
      doc.add("all_real_symmetric", JsonValue::boolean(all_real));
      rows.emplace_back("all_real_symmetric", all_real ? "yes" : "no");
    }
    doc.add("pass", JsonValue::boolean(pass));
    rows.emplace_back("pass", pass ? "yes" : "no");
  }

  if (!opt.dump_path.empty()) {
    std::ofstream out(opt.dump_path);
    if (!out)
      throw MalformedInputError("cannot write dump file: " + opt.dump_path);
    out << basis_to_json(basis).dump();
  }

  if (opt.format == Format::Text)
    emit_text_table(rows);
  else
    emit(doc);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// tomo

struct TomoOptions {
  std::string dims_csv;
  std::string field = "real";
  std::string frame = "bilocal-projector";
  int trials = 5;
  std::uint64_t seed = 0;
  Format format = Format::Json;
  double rank_tol = kRankRelTol;
};

int run_tomo(const TomoOptions& opt) {
  const SystemDims dims = parse_dims(opt.dims_csv);
  FieldKind field;
  if (opt.field == "real")
    field = FieldKind::Real;
  else if (opt.field == "complex")
    field = FieldKind::Complex;
  else
    throw MalformedInputError("--field must be real or complex");
  if (opt.trials < 1) throw MalformedInputError("--trials must be >= 1");

  OperatorBasis basis;
  if (opt.frame == "complex")
    basis = complex_product_basis(dims);
  else if (opt.frame == "bilocal-projector")
    basis = bilocal_projector_basis(dims);
  else
    throw MalformedInputError("--frame must be complex or bilocal-projector");
  const MeasurementFrame frame = make_frame(std::move(basis), opt.frame);

  std::mt19937_64 rng(opt.seed);
  std::vector<double> errors;
  for (int trial = 0; trial < opt.trials; ++trial) {
    const DensityMatrix rho = field == FieldKind::Real
                                  ? random_real_state(frame.dim(), rng)
                                  : random_complex_state(frame.dim(), rng);
    const DensityMatrix rebuilt =
        reconstruct(expectations(rho, frame), frame, field, opt.rank_tol);
    errors.push_back((rho.op.mat - rebuilt.op.mat).norm());
  }
  double max_error = 0.0;
  for (double e : errors) max_error = std::max(max_error, e);
  const bool pass = max_error <= kRoundTripTol;

  if (opt.format == Format::Text) {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"field", opt.field},
        {"frame", opt.frame},
        {"trials", std::to_string(opt.trials)},
        {"seed", std::to_string(opt.seed)},
    };
    for (std::size_t i = 0; i < errors.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", errors[i]);
      rows.emplace_back("error[" + std::to_string(i) + "]", buf);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", max_error);
    rows.emplace_back("max_error", buf);
    rows.emplace_back("pass", pass ? "yes" : "no");
    emit_text_table(rows);
    return pass ? 0 : 1;
  }

  JsonValue doc = JsonValue::object();
  doc.add("dims", dims_to_json(dims));
  doc.add("field", JsonValue::str(opt.field));
  doc.add("frame", JsonValue::str(opt.frame));
  doc.add("trials", JsonValue::number(static_cast<std::int64_t>(opt.trials)));
  doc.add("seed", JsonValue::exact(static_cast<std::int64_t>(opt.seed)));
  JsonValue err_arr = JsonValue::array();
  for (double e : errors) err_arr.push(JsonValue::number(e));
  doc.add("round_trip_errors", std::move(err_arr));
  doc.add("max_error", JsonValue::number(max_error));
  doc.add("tolerance", JsonValue::number(kRoundTripTol));
  doc.add("pass", JsonValue::boolean(pass));
  emit(doc);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// witness

struct WitnessOptions {
  std::string dims_csv;
  Format format = Format::Json;
};

int run_witness(const WitnessOptions& opt) {
  const SystemDims dims = parse_dims(opt.dims_csv);
  const WitnessReport report = local_tomography_witness(dims);

  if (opt.format == Format::Text) {
    char dist[64];
    char gap[64];
    char local[64];
    std::snprintf(dist, sizeof(dist), "%.17g", report.global_distance);
    std::snprintf(gap, sizeof(gap), "%.17g", report.discriminator_gap);
    std::snprintf(local, sizeof(local), "%.17g", report.max_local_stat_gap);
    emit_text_table({
        {"global_distance", dist},
        {"max_local_stat_gap", local},
        {"discriminating_observable", report.discriminating_observable.str()},
        {"discriminator_gap", gap},
        {"valid", report.valid ? "yes" : "no"},
    });
    return report.valid ? 0 : 1;
  }

  JsonValue doc = JsonValue::object();
  doc.add("dims", dims_to_json(dims));
  doc.add("global_distance", JsonValue::number(report.global_distance));
  doc.add("max_local_stat_gap",
          JsonValue::number(report.max_local_stat_gap));
  doc.add("discriminating_observable",
          JsonValue::str(report.discriminating_observable.str()));
  doc.add("discriminator_gap", JsonValue::number(report.discriminator_gap));
  doc.add("valid", JsonValue::boolean(report.valid));
  doc.add("state_a", state_to_json(report.state_a));
  doc.add("state_b", state_to_json(report.state_b));
  emit(doc);
  return report.valid ? 0 : 1;
}

// ---------------------------------------------------------------------------
// ideality

struct IdealityOptions {
  int level = 3;
  std::string verify_dims_csv;
  int r = 2;
  int s = 1;
  Format format = Format::Json;
};

int run_ideality(const IdealityOptions& opt) {
  const IdealitySolution solution = solve_ideality(opt.level);

  std::optional<std::int64_t> residual;
  SystemDims verify_dims;
  if (!opt.verify_dims_csv.empty()) {
    verify_dims = parse_dims(opt.verify_dims_csv);
    residual =
        verify_inclusion_numeric(TheoryProfile{opt.r, opt.s, 1}, verify_dims);
  }

  if (opt.format == Format::Text) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("level", std::to_string(solution.n));
    for (const auto& [shape, coeff] : solution.coefficients)
      rows.emplace_back(shape_string(shape), coeff.str());
    if (solution.epsilon)
      rows.emplace_back("epsilon", solution.epsilon->str());
    if (residual) rows.emplace_back("residual", std::to_string(*residual));
    emit_text_table(rows);
    return 0;
  }

  JsonValue doc = JsonValue::object();
  doc.add("level",
          JsonValue::number(static_cast<std::int64_t>(solution.n)));
  JsonValue coeffs = JsonValue::object();
  for (const auto& [shape, coeff] : solution.coefficients)
    coeffs.add(shape_string(shape), JsonValue::exact(coeff));
  doc.add("coefficients", std::move(coeffs));
  doc.add("epsilon", solution.epsilon
                         ? JsonValue::exact(*solution.epsilon)
                         : JsonValue::null());
  if (residual) {
    JsonValue ver = JsonValue::object();
    ver.add("dims", dims_to_json(verify_dims));
    ver.add("r", JsonValue::exact(static_cast<std::int64_t>(opt.r)));
    ver.add("s", JsonValue::exact(static_cast<std::int64_t>(opt.s)));
    ver.add("residual", JsonValue::exact(*residual));
    doc.add("verification", std::move(ver));
  }
  emit(doc);
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportItem {
  std::string name;
  bool pass = false;
  std::string computed;
  std::string expected;
};

ReportItem check_complex_counting() {
  ReportItem item{"complex_counting", true, "", "K(N) = N^2 for N <= 4"};
  std::string computed;
  for (std::int64_t n = 1; n <= 4; ++n) {
    const std::int64_t k = kl_single(n, TheoryProfile{2, 2, 1}).k;
    const OperatorBasis basis = complex_projector_basis(n);
    const int rank = linear_independence_rank(basis.ops).rank;
    item.pass = item.pass && k == n * n &&
                basis.size() == static_cast<std::size_t>(n * n) &&
                rank == n * n;
    if (!computed.empty()) computed += ", ";
    computed += "K(" + std::to_string(n) + ")=" + std::to_string(k);
  }
  item.computed = computed;
  return item;
}

ReportItem check_real_counting() {
  ReportItem item{"real_counting", true, "", "K(N) = N(N+1)/2 for N <= 6"};
  std::string computed;
  for (std::int64_t n = 1; n <= 6; ++n) {
    const std::int64_t k = kl_single(n, TheoryProfile{2, 1, 1}).k;
    item.pass = item.pass && k == n * (n + 1) / 2;
    if (!computed.empty()) computed += ", ";
    computed += "K(" + std::to_string(n) + ")=" + std::to_string(k);
  }
  item.computed = computed;
  return item;
}

ReportItem check_grouping_invariance() {
  ReportItem item{"grouping_invariance", true, "", "fold order never matters"};
  int checked = 0;
  for (int r = 1; r <= 3; ++r) {
    for (int s = 1; s <= r; ++s) {
      const TheoryProfile profile{r, s, 1};
      for (std::int64_t a = 1; a <= 3; ++a) {
        for (std::int64_t b = 1; b <= 3; ++b) {
          for (std::int64_t c = 1; c <= 3; ++c) {
            const KLPair ab_c = kl_compose(
                kl_compose(kl_single(a, profile), kl_single(b, profile)),
                kl_single(c, profile));
            const KLPair a_bc = kl_compose(
                kl_single(a, profile),
                kl_compose(kl_single(b, profile), kl_single(c, profile)));
            item.pass = item.pass && ab_c.k == a_bc.k && ab_c.l == a_bc.l;
            const KLPair closed =
                kl_single(a * b * c, profile);
            item.pass = item.pass && ab_c.k == closed.k && ab_c.l == closed.l;
            ++checked;
          }
        }
      }
    }
  }
  item.computed = std::to_string(checked) + " triples checked";
  return item;
}

ReportItem check_real_basis_rank() {
  ReportItem item{"real_basis_rank", true, "", "(2,2): 10/10, (2,2,2): 36/36"};
  const OperatorBasis two = real_product_basis({2, 2});
  const OperatorBasis three = real_product_basis({2, 2, 2});
  const int rank2 = linear_independence_rank(two.ops).rank;
  const int rank3 = linear_independence_rank(three.ops).rank;
  item.pass = two.size() == 10 && rank2 == 10 && three.size() == 36 &&
              rank3 == 36;
  item.computed = "(2,2): " + std::to_string(two.size()) + "/" +
                  std::to_string(rank2) + ", (2,2,2): " +
                  std::to_string(three.size()) + "/" + std::to_string(rank3);
  return item;
}

ReportItem check_bilocal_idempotence() {
  ReportItem item{"bilocal_idempotence", true, "",
                  "max |P^2 - P| <= 1e-12 on (2,2) and (2,2,2)"};
  double defect = 0.0;
  for (const SystemDims& dims : {SystemDims{2, 2}, SystemDims{2, 2, 2}}) {
    for (const auto& op : bilocal_projector_basis(dims).ops)
      defect =
          std::max(defect, (op.mat * op.mat - op.mat).cwiseAbs().maxCoeff());
  }
  item.pass = defect <= kHermitianTol;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", defect);
  item.computed = std::string("max defect ") + buf;
  return item;
}

ReportItem check_round_trip(std::uint64_t seed) {
  ReportItem item{"tomography_round_trip", true, "",
                  "Frobenius error <= 1e-10"};
  std::mt19937_64 rng(seed);
  double max_error = 0.0;
  {
    const MeasurementFrame frame =
        make_frame(bilocal_projector_basis({2, 2}), "bilocal");
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho = random_real_state(4, rng);
      const DensityMatrix rebuilt =
          reconstruct(expectations(rho, frame), frame, FieldKind::Real);
      max_error =
          std::max(max_error, (rho.op.mat - rebuilt.op.mat).norm());
    }
  }
  {
    const MeasurementFrame frame =
        make_frame(complex_projector_basis(3), "complex");
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho = random_complex_state(3, rng);
      const DensityMatrix rebuilt =
          reconstruct(expectations(rho, frame), frame, FieldKind::Complex);
      max_error =
          std::max(max_error, (rho.op.mat - rebuilt.op.mat).norm());
    }
  }
  item.pass = max_error <= kRoundTripTol;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", max_error);
  item.computed = std::string("max error ") + buf;
  return item;
}

ReportItem check_witness() {
  ReportItem item{"local_witness", true, "",
                  "distance 1, local gap <= 1e-12, discriminator gap 2"};
  const WitnessReport report = local_tomography_witness({2, 2});
  item.pass = report.valid &&
              std::abs(report.global_distance - 1.0) <= 1e-12 &&
              std::abs(report.discriminator_gap - 2.0) <= 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "distance %.3g, local gap %.3g, obs gap %.3g",
                report.global_distance, report.max_local_stat_gap,
                report.discriminator_gap);
  item.computed = buf;
  return item;
}

ReportItem check_four_rebit_audit() {
  ReportItem item{"four_rebit_audit", true, "",
                  "naive=138 true=136 surplus=2"};
  const RedundancyAudit audit =
      bilocal_redundancy_audit({2, 2, 2, 2}, TheoryProfile{2, 1, 1});
  item.pass = audit.naive_count == 138 && audit.true_k == 136 &&
              audit.surplus == 2;
  item.computed = "naive=" + std::to_string(audit.naive_count) +
                  " true=" + std::to_string(audit.true_k) +
                  " surplus=" + std::to_string(audit.surplus);
  return item;
}

ReportItem check_four_rebit_coincidence(std::uint64_t seed) {
  ReportItem item{"four_rebit_coincidence", true, "",
                  "pairing spread <= 1e-12, rank 136"};
  const FourRebitReport report = four_rebit_coincidence(seed);
  item.pass = report.max_spread <= 1e-12 && report.bilocal_rank == 136;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "spread %.3g, rank %d", report.max_spread,
                report.bilocal_rank);
  item.computed = buf;
  return item;
}

ReportItem check_ideality(int level, const std::string& expected) {
  ReportItem item{"ideality_level_" + std::to_string(level), true, "",
                  expected};
  const IdealitySolution solution = solve_ideality(level);
  std::string computed;
  for (const auto& [shape, coeff] : solution.coefficients) {
    if (!computed.empty()) computed += ", ";
    computed += shape_string(shape) + ": " + coeff.str();
  }
  if (solution.epsilon) computed += ", epsilon: " + solution.epsilon->str();
  item.computed = computed;
  item.pass = computed == expected;
  return item;
}

struct ReportOptions {
  std::uint64_t seed = 0;
  Format format = Format::Json;
};

int run_report(const ReportOptions& opt) {
  std::vector<ReportItem> items;
  items.push_back(check_complex_counting());
  items.push_back(check_real_counting());
  items.push_back(check_grouping_invariance());
  items.push_back(check_real_basis_rank());
  items.push_back(check_bilocal_idempotence());
  items.push_back(check_round_trip(opt.seed));
  items.push_back(check_witness());
  items.push_back(check_four_rebit_audit());
  items.push_back(check_four_rebit_coincidence(opt.seed));
  items.push_back(check_ideality(1, "1+1: 1"));
  items.push_back(check_ideality(2, "1+1+1: -2, 2+1: 1"));
  items.push_back(check_ideality(
      3, "1+1+1+1: 4, 2+1+1: -4/3, 2+2: 1/3, 3+1: 1, epsilon: 1/2"));

  int failed = 0;
  for (const auto& item : items)
    if (!item.pass) ++failed;

  if (opt.format == Format::Text) {
    std::size_t width = 0;
    for (const auto& item : items) width = std::max(width, item.name.size());
    for (const auto& item : items) {
      std::cout << (item.pass ? "PASS  " : "FAIL  ")
                << pad_right(item.name, width + 2) << item.computed << "\n";
    }
    std::cout << (failed == 0 ? "all items passed"
                              : std::to_string(failed) + " item(s) failed")
              << "\n";
    return failed == 0 ? 0 : 1;
  }

  JsonValue doc = JsonValue::object();
  JsonValue arr = JsonValue::array();
  for (const auto& item : items) {
    JsonValue entry = JsonValue::object();
    entry.add("name", JsonValue::str(item.name));
    entry.add("pass", JsonValue::boolean(item.pass));
    entry.add("computed", JsonValue::str(item.computed));
    entry.add("expected", JsonValue::str(item.expected));
    arr.push(std::move(entry));
  }
  doc.add("items", std::move(arr));
  doc.add("failed", JsonValue::number(static_cast<std::int64_t>(failed)));
  doc.add("pass", JsonValue::boolean(failed == 0));
  emit(doc);
  return failed == 0 ? 0 : 1;
}

double rank_tolerance_from_env() {
  const char* raw = std::getenv("BITOMO_TOLERANCE_RANK");
  if (raw == nullptr) return kRankRelTol;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || value <= 0.0)
    throw MalformedInputError(
        "BITOMO_TOLERANCE_RANK must be a positive number");
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Parameter counting, operator bases and tomography for theories with "
      "latent joint parameters"};
  app.require_subcommand(1);

  CountOptions count_opt;
  CLI::App* count = app.add_subcommand("count", "K and L parameter counts");
  count->add_option("--dims", count_opt.dims_csv, "Component dims, e.g. 2,2,2")
      ->required();
  count->add_option("--r", count_opt.r, "Exponent r");
  count->add_option("--s", count_opt.s, "Exponent s");
  count->add_option("--alpha", count_opt.alpha, "Composition factor");
  count->add_flag("--audit", count_opt.audit,
                  "Include the bilocal redundancy audit (needs >= 3 dims)");
  add_format_flag(count, count_opt.format);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit (r, s) to a two-column table of n and K(n)");
  fit->add_option("table", fit_opt.path,
                  "Table file (reads stdin when omitted)");
  add_format_flag(fit, fit_opt.format);

  BasisOptions basis_opt;
  CLI::App* basis = app.add_subcommand("basis", "Operator basis construction");
  basis->add_option("--dims", basis_opt.dims_csv, "Component dims")
      ->required();
  basis->add_option("--kind", basis_opt.kind,
                    "complex, real or bilocal-projector");
  basis->add_flag("--check", basis_opt.check,
                  "Certify rank and projector/reality properties");
  basis->add_option("--dump", basis_opt.dump_path,
                    "Write the operators to a JSON file");
  add_format_flag(basis, basis_opt.format);

  TomoOptions tomo_opt;
  CLI::App* tomo =
      app.add_subcommand("tomo", "Random-state reconstruction round trips");
  tomo->add_option("--dims", tomo_opt.dims_csv, "Component dims")->required();
  tomo->add_option("--field", tomo_opt.field, "real or complex");
  tomo->add_option("--frame", tomo_opt.frame,
                   "complex or bilocal-projector");
  tomo->add_option("--trials", tomo_opt.trials, "Number of random states");
  tomo->add_option("--seed", tomo_opt.seed, "RNG seed");
  add_format_flag(tomo, tomo_opt.format);

  WitnessOptions witness_opt;
  CLI::App* witness = app.add_subcommand(
      "witness", "Two-site witness of the failure of local tomography");
  witness->add_option("--dims", witness_opt.dims_csv, "Two component dims")
      ->required();
  add_format_flag(witness, witness_opt.format);

  IdealityOptions ideality_opt;
  CLI::App* ideality =
      app.add_subcommand("ideality", "Exact n-local ideality coefficients");
  ideality->add_option("--level", ideality_opt.level, "Locality level 1-3");
  ideality->add_option("--verify-dims", ideality_opt.verify_dims_csv,
                       "Evaluate the level-3 identity on these 4 dims");
  ideality->add_option("--r", ideality_opt.r, "Exponent r for --verify-dims");
  ideality->add_option("--s", ideality_opt.s, "Exponent s for --verify-dims");
  add_format_flag(ideality, ideality_opt.format);

  ReportOptions report_opt;
  CLI::App* report = app.add_subcommand(
      "report", "Run every headline check and report pass/fail");
  report->add_option("--seed", report_opt.seed, "RNG seed");
  add_format_flag(report, report_opt.format);

  CLI11_PARSE(app, argc, argv);

  try {
    const double rank_tol = rank_tolerance_from_env();
    basis_opt.rank_tol = rank_tol;
    tomo_opt.rank_tol = rank_tol;
    if (count->parsed()) return run_count(count_opt);
    if (fit->parsed()) return run_fit(fit_opt);
    if (basis->parsed()) return run_basis(basis_opt);
    if (tomo->parsed()) return run_tomo(tomo_opt);
    if (witness->parsed()) return run_witness(witness_opt);
    if (ideality->parsed()) return run_ideality(ideality_opt);
    if (report->parsed()) return run_report(report_opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
