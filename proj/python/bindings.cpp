#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "safe/codec.hpp"
#include "safe/error.hpp"
#include "safe/fragmenter.hpp"
#include "safe/genlab.hpp"
#include "safe/pipeline.hpp"
#include "safe/properties.hpp"
#include "safe/smiles.hpp"
#include "safe/tokenizer.hpp"

namespace py = pybind11;

namespace {

std::vector<safe::BondCutRule> rules_from(const std::optional<std::string>& rule_file) {
  return rule_file ? safe::load_rules(*rule_file) : safe::default_rules();
}

py::dict encode(const std::string& smiles, bool canonical, const std::optional<std::string>& rule_file) {
  const auto r = safe::encode_safe(safe::parse_smiles(smiles), rules_from(rule_file), canonical);
  py::dict d;
  d["safe"] = r.safe.text;
  d["n_fragments"] = r.report.n_fragments;
  d["max_original_ring_digit"] = r.report.max_original_ring_digit;
  d["first_attachment_digit"] = r.report.first_attachment_digit;
  d["source"] = std::string(safe::cut_source_name(r.report.cut_rule_source));
  d["attachment_digits"] = r.safe.attachment_digits;
  return d;
}

std::vector<std::string> fragments(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& f : safe::list_fragments(text)) out.push_back(safe::canonical_smiles(f.graph));
  return out;
}

safe::TaskPrompt prompt(const std::string& task, const std::vector<std::string>& molecules,
                        const std::optional<std::string>& reference, int sites, std::uint64_t seed) {
  safe::PromptInputs in;
  for (const auto& m : molecules) in.molecules.push_back(safe::parse_smiles(m));
  if (reference) in.reference = safe::parse_smiles(*reference);
  in.sites = sites;
  in.seed = seed;
  return safe::make_prompt(safe::parse_task(task), in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SAFE molecular line notation: encoding, tokenization and constrained generation";

  static py::exception<safe::SafeError> safe_error(m, "SafeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const safe::SafeError& e) {
      py::set_error(safe_error, e.what());
    }
  });

  m.def("canonical_smiles", [](const std::string& s) { return safe::canonical_smiles(safe::parse_smiles(s)); },
        py::arg("smiles"));
  m.def("encode", &encode, py::arg("smiles"), py::arg("canonical") = true, py::arg("rule_file") = py::none(),
        "SMILES to SAFE; returns a dict with the text and the encode report");
  m.def("decode", [](const std::string& t) { return safe::canonical_smiles(safe::decode_safe(t)); },
        py::arg("safe"), "SAFE to canonical SMILES");
  m.def("canonical_safe", [](const std::string& t) { return safe::canonical_safe(t).text; }, py::arg("safe"));
  m.def("randomize_safe", [](const std::string& t, std::uint64_t seed, bool reroot) {
          return safe::randomize_safe(t, seed, reroot).text;
        },
        py::arg("safe"), py::arg("seed"), py::arg("reroot") = false);
  m.def("fragments", &fragments, py::arg("safe"), "canonical SMILES of each block, attachment sites as *");
  m.def("cut_bonds", [](const std::string& s) { return safe::detect_cut_bonds(safe::parse_smiles(s), safe::default_rules()); },
        py::arg("smiles"));
  m.def("molecular_weight", [](const std::string& s) { return safe::molecular_weight(safe::parse_smiles(s)); },
        py::arg("smiles"));

  m.def("pretokenize", [](const std::string& t) { return safe::pretokenize(t); }, py::arg("text"));

  py::class_<safe::Vocabulary>(m, "Vocabulary")
      .def_static("train", [](const std::vector<std::string>& lines, std::size_t size) {
            std::vector<std::vector<std::string>> corpus;
            for (const auto& l : lines) corpus.push_back(safe::pretokenize(l));
            return safe::train_bpe(corpus, size);
          },
          py::arg("lines"), py::arg("vocab_size"))
      .def_static("load", &safe::Vocabulary::load, py::arg("vocab_path"), py::arg("merges_path"))
      .def("save", &safe::Vocabulary::save, py::arg("vocab_path"), py::arg("merges_path"))
      .def("__len__", &safe::Vocabulary::size)
      .def("id_of", [](const safe::Vocabulary& v, const std::string& s) { return v.id_of(s); })
      .def("surface", &safe::Vocabulary::surface)
      .def("merges", &safe::Vocabulary::merges)
      .def("encode", [](const safe::Vocabulary& v, const std::string& t, bool framed) {
            return safe::encode_tokens(t, v, framed).tokens;
          },
          py::arg("text"), py::arg("framed") = false)
      .def("decode", [](const safe::Vocabulary& v, const std::vector<int>& ids) { return safe::decode_tokens(ids, v); });

  py::class_<safe::TaskPrompt>(m, "TaskPrompt")
      .def_readonly("prefix", &safe::TaskPrompt::prefix)
      .def_readonly("open_labels", &safe::TaskPrompt::open_labels)
      .def_property_readonly("task", [](const safe::TaskPrompt& p) { return std::string(safe::task_name(p.task)); })
      .def("verify", [](const safe::TaskPrompt& p, const std::string& text) {
        const auto v = safe::verify_completion(p, text);
        return py::make_tuple(v.accepted, v.reason);
      });
  m.def("make_prompt", &prompt, py::arg("task"), py::arg("molecules"), py::arg("reference") = py::none(),
        py::arg("sites") = 1, py::arg("seed") = 0);

  py::class_<safe::NGramModel>(m, "NGramModel")
      .def_static("train", &safe::train_ngram, py::arg("texts"), py::arg("vocab"), py::arg("order") = 3)
      .def_static("load", &safe::NGramModel::load, py::arg("path"))
      .def("save", &safe::NGramModel::save, py::arg("path"))
      .def_property_readonly("order", &safe::NGramModel::order)
      .def("sample", [](const safe::NGramModel& model, std::optional<safe::TaskPrompt> p, int n, std::uint64_t seed,
                        double temperature, int max_len) {
            safe::SampleOptions opt;
            opt.n_samples = n;
            opt.seed = seed;
            opt.temperature = temperature;
            opt.max_len = max_len;
            const auto samples = p ? safe::complete_prefix(model, *p, opt) : safe::sample_denovo(model, opt);
            py::list out;
            for (const auto& s : samples) out.append(py::make_tuple(s.text, s.accepted, s.reason));
            return out;
          },
          py::arg("prompt") = py::none(), py::arg("n") = 1, py::arg("seed") = 0, py::arg("temperature") = 1.0,
          py::arg("max_len") = 128);

  m.def("evaluate", [](const std::vector<std::string>& texts, const std::optional<std::string>& reference) {
          std::optional<safe::MolecularGraph> ref;
          if (reference) ref = safe::parse_smiles(*reference);
          const auto g = safe::evaluate_set(texts, ref ? &*ref : nullptr);
          py::dict d;
          d["validity"] = g.validity;
          d["uniqueness"] = g.uniqueness;
          d["diversity"] = g.diversity;
          d["distance_to_reference"] = g.distance_to_reference;
          return d;
        },
        py::arg("texts"), py::arg("reference") = py::none());
  m.def("property_reward", [](const std::string& s, double target, double alpha) {
          return safe::property_reward(safe::parse_smiles(s), {target, alpha});
        },
        py::arg("smiles"), py::arg("target"), py::arg("alpha") = 0.5);

  m.def("convert_file", [](const std::string& input, const std::string& output, const std::string& report,
                           int threads, bool canonical) {
          safe::ConvertConfig cfg;
          cfg.input_path = input;
          cfg.output_path = output;
          cfg.report_path = report;
          cfg.threads = threads;
          cfg.canonical = canonical;
          safe::ConversionStats stats;
          {
            py::gil_scoped_release release;
            stats = safe::run_convert(cfg);
          }
          py::dict d;
          d["n_in"] = stats.n_in;
          d["n_ok"] = stats.n_ok;
          d["n_fallback"] = stats.n_fallback;
          d["n_excluded"] = stats.n_excluded;
          d["passed"] = stats.passed;
          return d;
        },
        py::arg("input"), py::arg("output"), py::arg("report") = "", py::arg("threads") = 1,
        py::arg("canonical") = true);
}
