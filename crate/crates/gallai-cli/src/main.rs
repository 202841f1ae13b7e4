//! Command-line interface for the gallai toolkit: generate, check, extract,
//! construct, audit, and benchmark, with reproducible seeds and
//! machine-readable JSON reports.
//!
//! All randomness flows from a single 64-bit `--seed` through ChaCha8.
//! Reports are deterministic for a fixed command line except for the
//! `timing_ms` field. Exit codes: 0 success, 2 property violated (a
//! guarantee failed or a rainbow triangle was found by `check`), 3 input
//! error, 4 scale cap, 5 search budget exhausted.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gallai::asymptotics::{self, FactsCGrid, FactsCParams};
use gallai::coloring::{self, ColorSet, EdgeColoring};
use gallai::constructions;
use gallai::discrepancy::{self, PairWeights};
use gallai::error::Error;
use gallai::extraction::{self, Certificate, ConstantsGeneral, ConstantsTight3};
use gallai::oracle;
use gallai::products::{self, ProductTree};
use gallai::ramsey;

#[derive(Parser)]
#[command(name = "gallai", version, about = "Rainbow-triangle-free coloring toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Gal,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Cograph,
    Triple,
    Weak,
    Tight3,
    General,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Paper,
    Desk,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Appendix {
    #[value(alias = "A")]
    A,
    #[value(alias = "C")]
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridArg {
    Boundary,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random Gallai coloring, or build one from a product tree.
    Gen {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// s-expression product tree file; overrides --n/--r.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Gal)]
        format: OutFormat,
    },
    /// Rainbow-triangle verdict for a coloring file (exit 2 when one exists).
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// Exact maximum subchromatic set for a color set.
    Oracle {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated colors, e.g. "1,3".
        #[arg(long)]
        colors: String,
    },
    /// Run an extraction algorithm on a coloring file.
    Extract {
        #[arg(long, value_enum)]
        alg: Alg,
        #[arg(long)]
        file: PathBuf,
        /// Target color-set size (weak/general).
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, value_enum, default_value_t = Profile::Desk)]
        constants: Profile,
        /// Ambient scale as "2^k" or a plain exponent (tight3).
        #[arg(long)]
        logm: Option<String>,
    },
    /// Build the optimal weight graph for (r, s) at scale m and realize it.
    Construct {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        /// Power of two, e.g. "4096" or "2^12".
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heavy-set and second-moment certificates for palette weights.
    Discrepancy {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        s: u32,
    },
    /// Verify the growth facts of the recursion-driving functions.
    Facts {
        #[arg(long, value_enum)]
        appendix: Appendix,
        #[arg(long, value_enum, default_value_t = Profile::Paper)]
        constants: Profile,
        /// "2^k" or a plain integer.
        #[arg(long)]
        logm: Option<String>,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long, value_enum, default_value_t = GridArg::Boundary)]
        grid: GridArg,
        /// Also scan for per-fact empirical thresholds (appendix C).
        #[arg(long)]
        thresholds: bool,
    },
    /// Search for a 2-coloring with small monochromatic cliques.
    RamseySearch {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        budget: u32,
    },
    /// Scaling table for the triple-product construction.
    Bench {
        #[arg(long, default_value = "triple-product")]
        family: String,
        /// Comma-separated factor sizes, e.g. "8,16,32".
        #[arg(long, default_value = "8,16")]
        t: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok((mut report, code)) => {
            if let Some(obj) = report.as_object_mut() {
                obj.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report"));
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn scale_cap() -> usize {
    std::env::var("GALLAI_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(200_000)
}

fn parse_pow2(text: &str) -> Result<BigUint, Error> {
    let t = text.trim();
    if let Some(exp) = t.strip_prefix("2^") {
        let k: u32 = exp
            .parse()
            .map_err(|e| Error::Parse(format!("bad exponent in '{t}': {e}")))?;
        if k > 1 << 20 {
            return Err(Error::ScaleCap("exponent too large".into()));
        }
        Ok(BigUint::one() << k)
    } else {
        t.parse::<BigUint>()
            .map_err(|e| Error::Parse(format!("bad number '{t}': {e}")))
    }
}

fn atomic_write(path: &Path, data: &str) -> Result<(), Error> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(data.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load_coloring(path: &Path) -> Result<EdgeColoring, Error> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        coloring::decode_json(&text)
    } else {
        coloring::decode(&text)
    }
}

fn witness_json(w: &gallai::coloring::Witness) -> Value {
    json!({
        "colors": w.colors.iter().collect::<Vec<u8>>(),
        "size": w.size(),
        "vertices": w.vertices,
    })
}

fn family_json(fam: &extraction::WitnessFamily) -> Value {
    Value::Array(fam.witnesses().map(witness_json).collect())
}

fn cert_json(cert: &Certificate) -> Value {
    json!({
        "pairs": cert.pairs,
        "weights": cert
            .weights
            .iter()
            .map(|(p, w)| json!({"pair": [p.0, p.1], "w": w.to_string()}))
            .collect::<Vec<_>>(),
        "eps": {"q": cert.eps.q.to_string(), "rho": cert.eps.rho.to_string()},
        "a": cert.a(),
    })
}

fn run(cmd: Cmd) -> Result<(Value, i32), Error> {
    match cmd {
        Cmd::Gen { n, r, seed, tree, out, format } => {
            let coloring = match &tree {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let t: ProductTree = products::tree_from_sexp(&text)?;
                    if t.vertex_count() > scale_cap() {
                        return Err(Error::ScaleCap(format!(
                            "tree yields {} vertices (cap {})",
                            t.vertex_count(),
                            scale_cap()
                        )));
                    }
                    t.flatten()?
                }
                None => {
                    let n = n.ok_or_else(|| Error::invalid("--n required without --tree"))?;
                    let r = r.ok_or_else(|| Error::invalid("--r required without --tree"))?;
                    if n < 1 {
                        return Err(Error::invalid("--n must be >= 1"));
                    }
                    if n > scale_cap() {
                        return Err(Error::ScaleCap(format!("n exceeds cap {}", scale_cap())));
                    }
                    products::random_gallai(n, r, seed)
                }
            };
            let verdict = if coloring.n() <= 8192 {
                json!(coloring.find_rainbow_triangle())
            } else {
                Value::Null
            };
            let text = match format {
                OutFormat::Gal => coloring::encode(&coloring),
                OutFormat::Json => coloring::encode_json(&coloring),
            };
            if let Some(path) = &out {
                atomic_write(path, &text)?;
            } else {
                print!("{text}");
            }
            Ok((
                json!({
                    "command": "gen",
                    "n": coloring.n(),
                    "r": coloring.r(),
                    "rainbow_triangle": verdict,
                    "out": out.map(|p| p.display().to_string()),
                }),
                0,
            ))
        }

        Cmd::Check { file } => {
            let f = load_coloring(&file)?;
            let triple = f.find_rainbow_triangle();
            let report = json!({
                "command": "check",
                "n": f.n(),
                "r": f.r(),
                "gallai": triple.is_none(),
                "rainbow_triangle": triple,
            });
            Ok((report, if triple.is_none() { 0 } else { 2 }))
        }

        Cmd::Oracle { file, colors } => {
            let f = load_coloring(&file)?;
            let parsed: Result<Vec<u8>, _> = colors.split(',').map(|c| c.trim().parse()).collect();
            let parsed = parsed.map_err(|e| Error::Parse(format!("bad colors: {e}")))?;
            let s = ColorSet::from_colors(parsed);
            let res = oracle::g_exact(&f, s)?;
            Ok((
                json!({
                    "command": "oracle",
                    "colors": s.iter().collect::<Vec<u8>>(),
                    "size": res.size,
                    "optimal": res.optimal,
                    "witness": witness_json(&res.witness),
                }),
                0,
            ))
        }

        Cmd::Extract { alg, file, s, constants, logm } => {
            let f = load_coloring(&file)?;
            let report = match alg {
                Alg::Cograph => {
                    let w = extraction::extract_two_colored(&f)?;
                    let bound = gallai::exact::ceil_cbrt(&BigUint::from(f.n()));
                    let ok =
                        BigUint::from(w.size()) >= bound && coloring::check_witness(&f, &w)?;
                    json!({
                        "command": "extract", "alg": "cograph",
                        "n": f.n(),
                        "witness": witness_json(&w),
                        "cbrt_bound": bound.to_string(),
                        "verdict": ok,
                    })
                }
                Alg::Triple => {
                    let fam = extraction::extract_triple(&f)?;
                    let product = fam.product_of_sizes();
                    json!({
                        "command": "extract", "alg": "triple",
                        "n": f.n(),
                        "witnesses": family_json(&fam),
                        "product": product.to_string(),
                        "verdict": product >= BigUint::from(f.n()) && fam.validate_all(&f)?,
                    })
                }
                Alg::Weak => {
                    let s = s.ok_or_else(|| Error::invalid("--s required for weak"))?;
                    let out = extraction::extract_weak_general(&f, s)?;
                    json!({
                        "command": "extract", "alg": "weak",
                        "n": f.n(), "s": s,
                        "witnesses": family_json(&out.family),
                        "best_colors": out.best.iter().collect::<Vec<u8>>(),
                        "product": out.family.product_of_sizes().to_string(),
                        "verdict": out.family.validate_all(&f)?,
                    })
                }
                Alg::Tight3 => {
                    let k = match constants {
                        Profile::Paper => ConstantsTight3::paper(),
                        Profile::Desk => ConstantsTight3::desk(),
                    };
                    let default_logm = match constants {
                        Profile::Paper => &k.kappa * 2u32,
                        Profile::Desk => BigUint::from(36u32),
                    };
                    let logm = match &logm {
                        Some(text) => parse_pow2(text)?,
                        None => default_logm,
                    };
                    let out = extraction::extract_tight3(&f, &k, &logm)?;
                    json!({
                        "command": "extract", "alg": "tight3",
                        "n": f.n(),
                        "witnesses": family_json(&out.family),
                        "product": out.family.product_of_sizes().to_string(),
                        "flag": format!("{:?}", out.flag),
                        "trace": out.trace,
                        "verdict": out.family.validate_all(&f)?,
                    })
                }
                Alg::General => {
                    let s = s.ok_or_else(|| Error::invalid("--s required for general"))?;
                    let k = match constants {
                        Profile::Paper => ConstantsGeneral::paper(f.r(), s, 1 << 16)?,
                        Profile::Desk => ConstantsGeneral::desk(f.r(), s)?,
                    };
                    let (fam, cert) = extraction::extract_general(&f, &k)?;
                    let report = extraction::validate_certificate(&f, &fam, &cert, &k)?;
                    json!({
                        "command": "extract", "alg": "general",
                        "n": f.n(), "s": s,
                        "witnesses": family_json(&fam),
                        "certificate": cert_json(&cert),
                        "validation": report,
                        "verdict": report.ok,
                    })
                }
            };
            let ok = report["verdict"].as_bool().unwrap_or(false);
            Ok((report, if ok { 0 } else { 2 }))
        }

        Cmd::Construct { r, s, m, seed, out } => {
            let m = parse_pow2(&m)?;
            let wg = constructions::optimal_weight_graph(r, s, &m)?;
            let product = wg.integral.product();
            if product > BigUint::from(scale_cap()) {
                return Err(Error::ScaleCap(format!(
                    "construction would have {product} vertices (cap {})",
                    scale_cap()
                )));
            }
            let built = constructions::coloring_from_weight_graph(&wg.integral, seed)?;
            if let Some(path) = &out {
                atomic_write(path, &coloring::encode(&built.coloring))?;
            }
            let mut per_set = Vec::new();
            for set in ColorSet::all_of_size(r, s) {
                per_set.push(json!({
                    "colors": set.iter().collect::<Vec<u8>>(),
                    "exact_g": built.exact_g(set).to_string(),
                }));
            }
            Ok((
                json!({
                    "command": "construct",
                    "r": r, "s": s,
                    "m": m.to_string(),
                    "n": built.coloring.n(),
                    "weights": wg.integral.weights.iter()
                        .map(|(p, w)| json!({"pair": [p.0, p.1], "w": w}))
                        .collect::<Vec<_>>(),
                    "factors": built.factors,
                    "exact_g": per_set,
                    "out": out.map(|p| p.display().to_string()),
                }),
                0,
            ))
        }

        Cmd::Discrepancy { weights, s } => {
            let text = std::fs::read_to_string(&weights)?;
            let pw = parse_pair_weights(&text)?;
            let heavy = discrepancy::find_heavy_set(&pw, s)?;
            let deviation = match discrepancy::heavy_set_from_deviation(&pw) {
                Ok(d) => json!(d),
                Err(Error::InvalidInput(msg)) => json!({"skipped": msg}),
                Err(e) => return Err(e),
            };
            let audit = discrepancy::variance_audit(&pw)?;
            Ok((
                json!({
                    "command": "discrepancy",
                    "r": pw.r, "s": s,
                    "total": pw.total().to_string(),
                    "heavy": heavy,
                    "deviation": deviation,
                    "variance": audit,
                }),
                0,
            ))
        }

        Cmd::Facts { appendix, constants, logm, r, s, grid, thresholds } => match appendix {
            Appendix::A => {
                let k = match constants {
                    Profile::Paper => ConstantsTight3::paper(),
                    Profile::Desk => ConstantsTight3::desk(),
                };
                let logm = match &logm {
                    Some(text) => parse_pow2(text)?,
                    None => &k.kappa * 2u32,
                };
                let reports = asymptotics::check_facts_a(&k, &logm)?;
                let ok = reports.iter().all(|r| r.holds);
                Ok((
                    json!({
                        "command": "facts", "appendix": "A",
                        "facts": reports,
                        "all_pass": ok,
                    }),
                    if ok { 0 } else { 2 },
                ))
            }
            Appendix::C => {
                let p = FactsCParams::new(r, s)?;
                let logm = match &logm {
                    Some(text) => parse_pow2(text)?,
                    None => BigUint::one() << 35u32,
                };
                let grid = match grid {
                    GridArg::Boundary => FactsCGrid::Boundary,
                    GridArg::Full => FactsCGrid::Full,
                };
                let reports = asymptotics::check_facts_c(&p, &logm, grid)?;
                let ok = reports.iter().all(|r| r.holds);
                let thresholds = if thresholds {
                    json!(asymptotics::facts_c_thresholds(&p, grid, 128)?)
                } else {
                    Value::Null
                };
                Ok((
                    json!({
                        "command": "facts", "appendix": "C",
                        "r": r, "s": s,
                        "facts": reports,
                        "thresholds": thresholds,
                        "all_pass": ok,
                    }),
                    if ok { 0 } else { 2 },
                ))
            }
        },

        Cmd::RamseySearch { t, bound, seed, budget } => {
            let f = ramsey::search_ramsey_coloring(t, bound, seed, budget)?;
            let omega = ramsey::max_mono_clique(&f);
            Ok((
                json!({
                    "command": "ramsey-search",
                    "t": t, "bound": bound,
                    "max_mono_clique": omega,
                    "coloring": coloring::encode(&f),
                    "verdict": omega <= bound,
                }),
                0,
            ))
        }

        Cmd::Bench { family, t, seed } => {
            if family != "triple-product" {
                return Err(Error::invalid(format!("unknown family '{family}'")));
            }
            let ts: Result<Vec<usize>, _> = t.split(',').map(|x| x.trim().parse()).collect();
            let ts = ts.map_err(|e| Error::Parse(format!("bad t list: {e}")))?;
            let mut rows = Vec::new();
            let mut all_ok = true;
            for (i, &t) in ts.iter().enumerate() {
                if t.pow(3) > scale_cap() {
                    return Err(Error::ScaleCap(format!("t^3 exceeds cap {}", scale_cap())));
                }
                let mut weights = std::collections::BTreeMap::new();
                for p in [(1u8, 2u8), (1, 3), (2, 3)] {
                    weights.insert(p, t as u64);
                }
                let wg = constructions::WeightGraph::new(3, weights)?;
                let built =
                    constructions::coloring_from_weight_graph(&wg, seed.wrapping_add(i as u64))?;
                let n = built.coloring.n();
                let witness = extraction::extract_two_colored(&built.coloring)?;
                // upper bound t (2 log t)^2 with the nominal targets
                let log_t = (usize::BITS - t.leading_zeros() - 1) as usize;
                let upper = t * (2 * log_t) * (2 * log_t);
                let mut g_max = BigUint::one();
                for set in ColorSet::all_of_size(3, 2) {
                    g_max = g_max.max(built.exact_g(set));
                }
                let ok = witness.size() >= t && g_max <= BigUint::from(upper);
                all_ok &= ok;
                rows.push(json!({
                    "t": t, "n": n,
                    "witness_size": witness.size(),
                    "lower_bound": t,
                    "max_exact_g": g_max.to_string(),
                    "upper_bound": upper,
                    "verdict": ok,
                }));
            }
            Ok((
                json!({"command": "bench", "family": family, "rows": rows, "all_pass": all_ok}),
                if all_ok { 0 } else { 2 },
            ))
        }
    }
}

fn parse_pair_weights(text: &str) -> Result<PairWeights, Error> {
    #[derive(serde::Deserialize)]
    struct Entry {
        pair: (u8, u8),
        w: String,
    }
    #[derive(serde::Deserialize)]
    struct FileFormat {
        r: u32,
        weights: Vec<Entry>,
    }
    let raw: FileFormat =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad weights json: {e}")))?;
    let mut map = std::collections::BTreeMap::new();
    for e in raw.weights {
        let w = e
            .w
            .parse::<num_rational::BigRational>()
            .map_err(|err| Error::Parse(format!("bad rational '{}': {err}", e.w)))?;
        map.insert(e.pair, w);
    }
    PairWeights::new(raw.r, map)
}
