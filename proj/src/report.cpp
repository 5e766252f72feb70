#include "finslab/report.hpp"

namespace finslab {

namespace {

// Minimal writer: the report schema is the stable public interface, so the
// bytes are produced directly rather than through a JSON library's own
// number formatting.
class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  void raw(const std::string& s) {
    comma();
    out_ += s;
  }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const char* name) {
    comma();
    string_literal(name);
    out_ += ':';
    fresh_ = true;
  }

  void value(const std::string& s) {
    comma();
    string_literal(s.c_str());
  }
  void value(const char* s) { value(std::string(s)); }
  void value(double v) {
    comma();
    out_ += format_real(v);
  }
  void value_int(long long v) {
    comma();
    out_ += std::to_string(v);
  }
  void value_uint(unsigned long long v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(bool b) {
    comma();
    out_ += b ? "true" : "false";
  }

 private:
  void open(char c) {
    comma();
    out_ += c;
    fresh_ = true;
  }
  void close(char c) {
    out_ += c;
    fresh_ = false;
  }
  void comma() {
    if (!fresh_) out_ += ',';
    fresh_ = false;
  }
  void string_literal(const char* s) {
    out_ += '"';
    for (const char* p = s; *p; ++p) {
      if (*p == '"' || *p == '\\') out_ += '\\';
      out_ += *p;
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
};

void write_vector(JsonWriter& w, const std::vector<double>& v) {
  w.begin_array();
  for (double c : v) w.value(c);
  w.end_array();
}

void write_constant(JsonWriter& w, const char* name, const std::optional<ConstantFit>& fit) {
  w.key(name);
  if (!fit) {
    w.raw("null");
    return;
  }
  w.begin_object();
  w.key("mode");
  w.value(fit->mode);
  w.key("value");
  w.value(fit->value);
  w.key("fit_residual");
  w.value(fit->fit_residual);
  w.end_object();
}

}  // namespace

std::string report_to_json(const Report& report) {
  JsonWriter w;
  w.begin_object();
  w.key("tool");
  w.begin_object();
  w.key("name");
  w.value(report.tool_name);
  w.key("version");
  w.value(report.tool_version);
  w.end_object();

  w.key("config");
  w.raw(config_to_json(report.config));

  w.key("suites_run");
  w.begin_array();
  for (const auto& s : report.suites_run) w.value(s);
  w.end_array();

  w.key("flags");
  w.begin_array();
  for (const auto& f : report.flags) {
    w.begin_object();
    w.key("flag");
    w.value(f.flag);
    w.key("verdict");
    w.value(f.verdict);
    w.key("residual_max");
    w.value(f.residual_max);
    w.key("residual_mean");
    w.value(f.residual_mean);
    w.key("witnesses");
    w.begin_array();
    for (const auto& wit : f.witnesses) {
      w.begin_object();
      w.key("x");
      write_vector(w, wit.x);
      w.key("y");
      write_vector(w, wit.y);
      w.key("residual");
      w.value(wit.residual);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();

  w.key("constants");
  w.begin_object();
  write_constant(w, "k1", report.k1);
  write_constant(w, "c", report.c);
  w.key("degenerate_2c_minus_k1");
  w.value(report.rigidity.ran ? report.rigidity.degenerate_2c_minus_k1 : false);
  w.end_object();

  w.key("isotropy");
  if (report.isotropy) {
    w.begin_object();
    w.key("r");
    write_vector(w, report.isotropy->r_values);
    w.key("c");
    write_vector(w, report.isotropy->c_values);
    w.key("c_deviation");
    write_vector(w, report.isotropy->c_deviations);
    w.key("cross_r_deviation");
    w.value(report.isotropy->cross_r_deviation);
    w.end_object();
  } else {
    w.raw("null");
  }

  w.key("cross_validation");
  w.begin_array();
  for (const auto& row : report.cross_validation) {
    w.begin_object();
    w.key("quantity");
    w.value(row.quantity);
    w.key("max_deviation");
    w.value(row.max_deviation);
    w.key("tolerance");
    w.value(row.tolerance);
    w.key("pass");
    w.value(row.pass);
    w.key("note");
    w.value(row.note);
    w.end_object();
  }
  w.end_array();

  w.key("rigidity");
  if (report.rigidity.ran) {
    const auto& rg = report.rigidity;
    w.begin_object();
    w.key("pfdf_psi_max");
    w.value(rg.pfdf_psi_max);
    w.key("corollary_p_max");
    w.value(rg.corollary_p_max);
    w.key("corollary_q_max");
    w.value(rg.corollary_q_max);
    w.key("isotropy_consistency_applicable");
    w.value(rg.isotropy_consistency_applicable);
    w.key("isotropy_consistency_max");
    w.value(rg.isotropy_consistency_max);
    w.key("have_k_chain");
    w.value(rg.have_k_chain);
    w.key("hash_max");
    w.value(rg.hash_max);
    w.key("star_max");
    w.value(rg.star_max);
    w.key("two_star_max");
    w.value(rg.two_star_max);
    w.key("two_hash_max");
    w.value(rg.two_hash_max);
    w.key("star_identity_max");
    w.value(rg.star_identity_max);
    w.key("riemannian");
    w.value(rg.riemannian);
    w.key("riemann_third_max");
    w.value(rg.riemann_third_max);
    w.key("degenerate_2c_minus_k1");
    w.value(rg.degenerate_2c_minus_k1);
    w.key("chain_consistent");
    w.value(rg.chain_consistent);
    w.key("chain_note");
    w.value(rg.chain_note);
    w.end_object();
  } else {
    w.raw("null");
  }

  w.key("status");
  w.begin_object();
  w.key("exit_code");
  w.value_int(report.exit_code);
  w.end_object();

  w.end_object();
  std::string out = w.take();
  out += "\n";
  return out;
}

std::string report_to_csv(const Report& report) {
  std::string out = "kind,name,verdict,residual_max,residual_mean_or_tolerance\n";
  for (const auto& f : report.flags) {
    out += "flag," + f.flag + "," + f.verdict + "," + format_real(f.residual_max) + "," +
           format_real(f.residual_mean) + "\n";
  }
  for (const auto& row : report.cross_validation) {
    out += "cross_validation," + row.quantity + "," + (row.pass ? "pass" : "fail") + "," +
           format_real(row.max_deviation) + "," + format_real(row.tolerance) + "\n";
  }
  return out;
}

}  // namespace finslab
