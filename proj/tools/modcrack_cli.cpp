// Command-line workbench: encrypt/decrypt family presets, build recovery
// atoms against an oracle, recover ciphertexts without keys, and run the
// transfer-function checks.
//
// Exit codes: 0 success, 2 usage, 3 file format, 4 dimension/modulus, 5
// verification mismatch.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modcrack/modcrack.hpp"

namespace {

using nlohmann::json;
using namespace modcrack;

struct ImageFlags {
  std::string format = "auto";  // auto | pgm | raw | csv
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t depth = 8;  // bits per sample for raw/csv
};

std::uint32_t depth_modulus(std::uint32_t depth) {
  if (depth == 8) return 256;
  if (depth == 16) return 65536;
  throw format_error("--depth must be 8 or 16");
}

std::string detect_format(const std::string& path, const std::string& requested) {
  if (requested != "auto") return requested;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") return "pgm";
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return "csv";
  return "raw";
}

ModImage load_image(const std::string& path, const ImageFlags& flags) {
  const std::string fmt = detect_format(path, flags.format);
  if (fmt == "pgm") return read_pgm(path);
  if (fmt == "csv") return read_csv(path, depth_modulus(flags.depth));
  if (fmt == "raw") {
    if (flags.height == 0 || flags.width == 0)
      throw format_error("raw input needs --height and --width");
    return read_raw(path, flags.height, flags.width, flags.depth);
  }
  throw format_error("unknown image format: " + fmt);
}

void store_image(const ModImage& m, const std::string& path, const ImageFlags& flags) {
  const std::string fmt = detect_format(path, flags.format);
  if (fmt == "pgm")
    write_pgm(m, path);
  else if (fmt == "csv")
    write_csv(m, path);
  else if (fmt == "raw")
    write_raw(m, path);
  else
    throw format_error("unknown image format: " + fmt);
}

Schedule parse_schedule(const std::string& name) {
  if (name == "logistic-sine") return Schedule::LogisticSine;
  if (name == "counter") return Schedule::Counter;
  throw lookup_error("unknown schedule: " + name);
}

CipherSpec spec_from_flags(const std::string& preset_name, std::uint32_t rounds,
                           std::uint32_t depth) {
  CipherSpec spec = preset(preset_name);
  if (rounds > 0) spec.rounds = rounds;
  spec.modulus = depth_modulus(depth);
  return spec;
}

void emit(const json& record) { std::cout << record.dump() << "\n"; }

json dims_json(const ModImage& m) {
  return json{{"height", m.height}, {"width", m.width}, {"modulus", m.modulus}};
}

// ---- subcommand bodies ----

int cmd_keygen(const std::string& preset_name, const std::string& seed_hex,
               const std::string& schedule_name, std::uint32_t h, std::uint32_t w,
               std::uint32_t rounds, std::uint32_t depth, const std::string& out_path) {
  const CipherSpec spec = spec_from_flags(preset_name, rounds, depth);
  const auto seed = parse_hex_seed(seed_hex);
  auto stream = make_stream(parse_schedule(schedule_name), seed, spec.modulus);
  const RoundMaterial material = material_for(spec, h, w, *stream);
  write_material(material, out_path);
  emit(json{{"command", "keygen"},
            {"preset", spec.name},
            {"rounds", spec.rounds},
            {"height", h},
            {"width", w},
            {"modulus", spec.modulus},
            {"seed_digest", seed_digest(seed)},
            {"material", out_path}});
  return 0;
}

RoundMaterial material_from_flags(const CipherSpec& spec, std::uint32_t h,
                                  std::uint32_t w, const std::string& material_path,
                                  const std::string& seed_hex,
                                  const std::string& schedule_name) {
  if (!material_path.empty()) return read_material(material_path);
  if (seed_hex.empty())
    throw seed_error("either --material or --seed is required");
  const auto seed = parse_hex_seed(seed_hex);
  auto stream = make_stream(parse_schedule(schedule_name), seed, spec.modulus);
  return material_for(spec, h, w, *stream);
}

int cmd_encrypt(bool decrypting, const std::string& preset_name,
                const std::string& seed_hex, const std::string& schedule_name,
                const std::string& material_path, std::uint32_t rounds,
                const ImageFlags& in_flags, const std::string& in_path,
                const std::string& out_path) {
  CipherSpec spec = spec_from_flags(preset_name, rounds, in_flags.depth);
  const ModImage input = load_image(in_path, in_flags);
  if (input.modulus != spec.modulus)
    throw dimension_error("input image modulus does not match --depth");

  std::uint32_t pt_h = input.height, pt_w = input.width;
  if (decrypting && spec.border_insertion) {
    if (input.height < 3 || input.width < 3)
      throw dimension_error("framed ciphertext must be at least 3x3");
    pt_h = input.height - 2;
    pt_w = input.width - 2;
  }
  const RoundMaterial material =
      material_from_flags(spec, pt_h, pt_w, material_path, seed_hex, schedule_name);

  const ModImage output = decrypting ? decrypt(spec, material, input)
                                     : encrypt(spec, material, input);
  store_image(output, out_path, in_flags);
  emit(json{{"command", decrypting ? "decrypt" : "encrypt"},
            {"preset", spec.name},
            {"rounds", spec.rounds},
            {"in", dims_json(input)},
            {"out", dims_json(output)},
            {"file", out_path}});
  return 0;
}

int cmd_build_atoms(const std::string& preset_name, const std::string& seed_hex,
                    const std::string& schedule_name, const std::string& fixture_path,
                    std::uint32_t h, std::uint32_t w, std::uint32_t rounds,
                    std::uint32_t depth, bool sparse, unsigned jobs,
                    const std::string& out_path) {
  using clock = std::chrono::steady_clock;
  std::unique_ptr<DecryptionOracle> oracle;
  json source;
  if (!fixture_path.empty()) {
    oracle = std::make_unique<FixtureOracle>(FixtureOracle::from_file(fixture_path));
    source = json{{"fixture", fixture_path}};
  } else {
    if (seed_hex.empty()) throw seed_error("--seed or --fixture is required");
    if (h == 0 || w == 0) throw dimension_error("--height and --width are required");
    const CipherSpec spec = spec_from_flags(preset_name, rounds, depth);
    const auto seed = parse_hex_seed(seed_hex);
    auto stream = make_stream(parse_schedule(schedule_name), seed, spec.modulus);
    RoundMaterial material = material_for(spec, h, w, *stream);
    oracle = cipher_oracle(spec, std::move(material), h, w);
    source = json{{"preset", spec.name},
                  {"rounds", spec.rounds},
                  {"modulus", spec.modulus},
                  {"seed_digest", seed_digest(seed)}};
  }

  const auto t0 = clock::now();
  AttackAtoms atoms = build_atoms(*oracle, jobs);
  const auto t1 = clock::now();
  bool within_budget = true;
  if (sparse) {
    auto result = sparsify_atoms(atoms);
    atoms = std::move(result.atoms);
    within_budget = result.within_budget;
  }
  write_atoms(atoms, out_path);
  const AtomDensity density = atom_density(atoms);

  emit(json{{"command", "build-atoms"},
            {"oracle", source},
            {"ciphertext_len", atoms.ciphertext_len},
            {"plaintext", dims_json(atoms.base)},
            {"queries", oracle->queries()},
            {"sparse", atoms.is_sparse},
            {"nnz_total", density.total_nnz},
            {"nnz_max", density.max_nnz},
            {"within_budget", within_budget},
            {"build_seconds", std::chrono::duration<double>(t1 - t0).count()},
            {"atoms", out_path}});
  return 0;
}

int cmd_recover(const std::string& atoms_path, const ImageFlags& in_flags,
                const std::string& in_path, const std::string& out_path) {
  using clock = std::chrono::steady_clock;
  const AttackAtoms atoms = read_atoms(atoms_path);
  ImageFlags ct_flags = in_flags;
  ct_flags.depth = atoms.modulus() == 65536 ? 16 : 8;
  const ModImage ciphertext = load_image(in_path, ct_flags);
  const auto t0 = clock::now();
  const ModImage plaintext = recover(atoms, ciphertext);
  const auto t1 = clock::now();
  store_image(plaintext, out_path, in_flags);
  emit(json{{"command", "recover"},
            {"atoms", atoms_path},
            {"ciphertext", dims_json(ciphertext)},
            {"plaintext", dims_json(plaintext)},
            {"queries", 0},
            {"recover_seconds", std::chrono::duration<double>(t1 - t0).count()},
            {"file", out_path}});
  return 0;
}

int cmd_check(const std::string& preset_name, const std::string& seed_hex,
              const std::string& schedule_name, std::uint32_t h, std::uint32_t w,
              std::uint32_t rounds, std::uint32_t depth, std::uint64_t trials,
              bool exhaustive, std::uint64_t rng_seed) {
  CipherSpec spec = spec_from_flags(preset_name, rounds, depth);
  if (exhaustive) {
    spec.modulus = 4;  // tiny instance so the whole space can be enumerated
    if (h == 0 || w == 0) {
      h = 1;
      w = 3;
    }
  } else if (h == 0 || w == 0) {
    h = 4;
    w = 4;
  }
  const auto seed = parse_hex_seed(seed_hex);
  auto stream = make_stream(parse_schedule(schedule_name), seed, spec.modulus);
  const RoundMaterial material = material_for(spec, h, w, *stream);
  const DtfProbe probe = make_probe(spec, material, h, w);

  auto verdict_json = [&](const char* check, const Verdict& v) {
    json record{{"command", "check"}, {"check", check},     {"preset", spec.name},
                {"rounds", spec.rounds}, {"modulus", spec.modulus}, {"height", h},
                {"width", w},         {"pass", v.pass},     {"trials", v.trials},
                {"rng_seed", v.rng_seed}};
    if (!v.detail.empty()) record["detail"] = v.detail;
    if (!v.counterexample.empty()) {
      json deltas = json::array();
      for (const auto& d : v.counterexample) deltas.push_back(d.pixels);
      record["counterexample"] = deltas;
    }
    emit(record);
  };

  verdict_json("additivity", check_additivity(probe, trials, rng_seed, exhaustive));
  verdict_json("multiplicability",
               check_multiplicability(probe, trials, rng_seed + 1, exhaustive));
  if (exhaustive) verdict_json("bijectivity", check_bijectivity(probe));
  verdict_json("cdtf_composition",
               check_cdtf_composition(probe, trials, rng_seed + 2, exhaustive));
  return 0;
}

int cmd_demo() {
  const bool ok = run_demo(std::cout);
  return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-substitution image cipher workbench and keyless "
               "chosen-ciphertext recovery"};
  app.require_subcommand(1);

  std::string preset_name = "basic", seed_hex, schedule_name = "logistic-sine";
  std::string material_path, fixture_path, in_path, out_path, atoms_path;
  ImageFlags flags;
  std::uint32_t rounds = 0;  // 0 = preset default
  bool sparse = false;
  unsigned jobs = 1;
  std::uint64_t trials = 500, rng_seed = 1;
  bool exhaustive = false;

  auto add_preset = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset_name, "cipher family member")
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--rounds", rounds, "override the preset's round count");
    cmd->add_option("--depth", flags.depth, "sample depth in bits")
        ->check(CLI::IsMember({8u, 16u}));
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_hex, "lowercase hex seed");
    cmd->add_option("--schedule", schedule_name, "key schedule generator")
        ->check(CLI::IsMember({"logistic-sine", "counter"}));
  };
  auto add_image_flags = [&](CLI::App* cmd) {
    cmd->add_option("--format", flags.format, "image format")
        ->check(CLI::IsMember({"auto", "pgm", "raw", "csv"}));
    cmd->add_option("--height", flags.height, "image height (raw input)");
    cmd->add_option("--width", flags.width, "image width (raw input)");
  };

  CLI::App* keygen = app.add_subcommand("keygen", "derive round material to a file");
  add_preset(keygen);
  add_seed(keygen);
  keygen->add_option("--height", flags.height)->required();
  keygen->add_option("--width", flags.width)->required();
  keygen->add_option("--out", out_path, "material file")->required();

  CLI::App* encrypt_cmd = app.add_subcommand("encrypt", "encrypt an image");
  add_preset(encrypt_cmd);
  add_seed(encrypt_cmd);
  add_image_flags(encrypt_cmd);
  encrypt_cmd->add_option("--material", material_path, "material file");
  encrypt_cmd->add_option("--in", in_path)->required();
  encrypt_cmd->add_option("--out", out_path)->required();

  CLI::App* decrypt_cmd = app.add_subcommand("decrypt", "decrypt an image");
  add_preset(decrypt_cmd);
  add_seed(decrypt_cmd);
  add_image_flags(decrypt_cmd);
  decrypt_cmd->add_option("--material", material_path, "material file");
  decrypt_cmd->add_option("--in", in_path)->required();
  decrypt_cmd->add_option("--out", out_path)->required();

  CLI::App* atoms_cmd = app.add_subcommand(
      "build-atoms", "query an oracle LL+1 times and store the recovery atoms");
  add_preset(atoms_cmd);
  add_seed(atoms_cmd);
  atoms_cmd->add_option("--fixture", fixture_path, "transcript file oracle");
  atoms_cmd->add_option("--height", flags.height, "plaintext height");
  atoms_cmd->add_option("--width", flags.width, "plaintext width");
  atoms_cmd->add_flag("--sparse", sparse, "store atoms sparsely");
  atoms_cmd->add_option("--jobs", jobs, "parallel oracle queries");
  atoms_cmd->add_option("--out", out_path, "atoms file")->required();

  CLI::App* recover_cmd =
      app.add_subcommand("recover", "recover a ciphertext using stored atoms");
  recover_cmd->add_option("--atoms", atoms_path)->required();
  add_image_flags(recover_cmd);
  recover_cmd->add_option("--in", in_path, "ciphertext image")->required();
  recover_cmd->add_option("--out", out_path, "plaintext image")->required();

  CLI::App* check_cmd =
      app.add_subcommand("check", "verify the differential-map properties");
  add_preset(check_cmd);
  add_seed(check_cmd);
  check_cmd->add_option("--height", flags.height, "probe height");
  check_cmd->add_option("--width", flags.width, "probe width");
  check_cmd->add_option("--trials", trials, "sampled trials per check");
  check_cmd->add_flag("--exhaustive", exhaustive,
                      "enumerate the whole space at modulus 4");
  check_cmd->add_option("--rng-seed", rng_seed, "seed for sampled checks");

  CLI::App* demo_cmd = app.add_subcommand(
      "demo", "replay the bundled keyless-recovery walkthrough");
  (void)demo_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("keygen"))
      return cmd_keygen(preset_name, seed_hex, schedule_name, flags.height,
                        flags.width, rounds, flags.depth, out_path);
    if (app.got_subcommand("encrypt"))
      return cmd_encrypt(false, preset_name, seed_hex, schedule_name, material_path,
                         rounds, flags, in_path, out_path);
    if (app.got_subcommand("decrypt"))
      return cmd_encrypt(true, preset_name, seed_hex, schedule_name, material_path,
                         rounds, flags, in_path, out_path);
    if (app.got_subcommand("build-atoms"))
      return cmd_build_atoms(preset_name, seed_hex, schedule_name, fixture_path,
                             flags.height, flags.width, rounds, flags.depth, sparse,
                             jobs, out_path);
    if (app.got_subcommand("recover"))
      return cmd_recover(atoms_path, flags, in_path, out_path);
    if (app.got_subcommand("check"))
      return cmd_check(preset_name, seed_hex, schedule_name, flags.height,
                       flags.width, rounds, flags.depth, trials, exhaustive, rng_seed);
    if (app.got_subcommand("demo")) return cmd_demo();
  } catch (const format_error& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 3;
  } catch (const seed_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const lookup_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
