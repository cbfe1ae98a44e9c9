//! Command-line surface: catalog validation, coefficients, veering,
//! classification, cable and Stallings constructions, and certificates.
//!
//! Exit codes: 0 success, 1 error, 2 indeterminate result (an interval
//! certificate was emitted instead of an exact value).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{builtin_catalog, find_entry, load_catalog, CatalogEntry, CheckLevel};
use crate::certificate::{build_certificate, render_veer, Certificate};
use crate::fdtc::{fdtc, FdtcValue};
use crate::mapping::{free_order, growth_evidence, GrowthVerdict};
use crate::openbook::{band_sum_curve, cable_2_1, stallings_twist, BandSumSpec, OpenBook};
use crate::surface::polygon_handle_arc;

#[derive(Parser)]
#[command(
    name = "openbook",
    version,
    about = "Dehn twist calculus for open book monodromies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct Common {
    /// Catalog file; the built-in catalog is used when absent.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Catalog entry to analyze.
    #[arg(long)]
    knot: Option<String>,
    /// Denominator bound for isolation.
    #[arg(long)]
    denom_bound: Option<u64>,
    /// Maximum bracketing iterations.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Veering witness search depth.
    #[arg(long)]
    search_depth: Option<usize>,
    /// Certificate output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Witness search shuffle seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Loads the catalog and reruns every pinned cross-check.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Computes the fractional Dehn twist coefficient of an entry.
    Fdtc {
        #[command(flatten)]
        common: Common,
    },
    /// Determines right- or left-veering, with witnesses at coefficient 0.
    Veer {
        #[command(flatten)]
        common: Common,
    },
    /// Reports periodicity, growth and the coefficient together.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Builds the (2,1)-cable open book and certifies its coefficient.
    Cable {
        #[command(flatten)]
        common: Common,
    },
    /// Runs the cable, band sum and Stallings twist for an entry.
    Stallings {
        #[command(flatten)]
        common: Common,
    },
    /// Emits a certificate for one entry or the whole catalog.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Certify every entry.
        #[arg(long)]
        all: bool,
    },
    /// Reproduces the full construction from the bundled 10_153 entry.
    PaperDemo {
        #[command(flatten)]
        common: Common,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Validate { common } => {
            let entries = load_entries(&common, CheckLevel::Full)?;
            for e in &entries {
                println!("{}: ok (genus {}, word {})", e.name, e.genus, e.word);
            }
            Ok(0)
        }
        Command::Fdtc { common } => {
            let entry = pick_entry(&common)?;
            let (cert, config) = entry_fdtc(&entry, &common)?;
            let code = match &cert.value {
                FdtcValue::Exact(v) => {
                    println!("fdtc({}) = {v}", entry.name);
                    0
                }
                FdtcValue::Indeterminate { lo, hi } => {
                    println!("fdtc({}) in [{lo}, {hi}] (indeterminate)", entry.name);
                    2
                }
            };
            write_certificate(
                &common,
                &build_certificate(
                    &entry.fiber,
                    format!("catalog:{}", entry.name),
                    &config,
                    &cert,
                    None,
                    entry.genus,
                ),
            )?;
            Ok(code)
        }
        Command::Veer { common } => {
            let entry = pick_entry(&common)?;
            let (cert, _) = entry_fdtc(&entry, &common)?;
            println!(
                "veering({}) = {}{}",
                entry.name,
                render_veer(cert.veering),
                if cert.veering_witnessed {
                    " (witnessed)"
                } else {
                    ""
                }
            );
            for w in &cert.witnesses {
                println!(
                    "  witness arc: {} crossings from vertex {}",
                    w.word.len(),
                    w.base
                );
            }
            Ok(if matches!(cert.value, FdtcValue::Indeterminate { .. }) {
                2
            } else {
                0
            })
        }
        Command::Classify { common } => {
            let entry = pick_entry(&common)?;
            let m = entry.monodromy()?;
            let order = free_order(&entry.fiber, &m, 24)?;
            match order {
                Some((n, k)) => println!("periodic up to boundary twists: m^{n} = T^{k}"),
                None => println!("not periodic up to boundary twists within 24 iterates"),
            }
            let seed = entry.fiber.labels.curves["c1"].clone();
            let growth = growth_evidence(&entry.fiber, &m, &seed, 8, 0.01)?;
            println!(
                "growth: {:?} (lambda estimate {:?})",
                growth.verdict, growth.lambda_hat
            );
            let (cert, _) = entry_fdtc(&entry, &common)?;
            match &cert.value {
                FdtcValue::Exact(v) => println!("fdtc = {v}"),
                FdtcValue::Indeterminate { lo, hi } => println!("fdtc in [{lo}, {hi}]"),
            }
            let verdict = match (order, growth.verdict) {
                (Some(_), _) => "periodic",
                (None, GrowthVerdict::Exponential) => "pseudo-Anosov evidence",
                _ => "inconclusive",
            };
            println!("classification: {verdict}");
            Ok(0)
        }
        Command::Cable { common } => {
            let entry = pick_entry(&common)?;
            let ob = OpenBook::from_word_on_fiber(
                &entry.name,
                entry.genus,
                &entry.alphabet,
                &entry.word,
            )?;
            let cfg = config_for(&entry, &common);
            let (cable, cert) = cable_2_1(&ob, &entry.alphabet, &cfg)?;
            println!(
                "cable(2,1) of {}: genus {}, chi {}, fdtc = 1/2, reducing multicurve preserved",
                entry.name,
                cable.genus,
                cable.fiber.euler_characteristic()
            );
            write_certificate(
                &common,
                &build_certificate(
                    &cable.fiber,
                    cable.provenance.describe(),
                    &cfg,
                    &cert,
                    None,
                    cable.genus,
                ),
            )?;
            Ok(0)
        }
        Command::Stallings { common } => {
            let entry = pick_entry(&common)?;
            let ob = OpenBook::from_word_on_fiber(
                &entry.name,
                entry.genus,
                &entry.alphabet,
                &entry.word,
            )?;
            let cfg = config_for(&entry, &common);
            let (cable, _) = cable_2_1(&ob, &entry.alphabet, &cfg)?;
            let arc =
                polygon_handle_arc(entry.genus, 1, &entry.fiber, &format!("a{}", entry.genus));
            let curve = band_sum_curve(&cable, &ob, &BandSumSpec { arc })?;
            let twisted = stallings_twist(&cable, &curve, 1, "band_sum(c)")?;
            let big_cfg = crate::fdtc::FdtcConfig::for_fiber(&cable.fiber, true);
            let cert = fdtc(&cable.fiber, &twisted.monodromy, 0, &big_cfg)?;
            match &cert.value {
                FdtcValue::Exact(v) => println!(
                    "stallings(+1) on cable of {}: fdtc = {v}, veering {}",
                    entry.name,
                    render_veer(cert.veering)
                ),
                FdtcValue::Indeterminate { lo, hi } => {
                    println!("stallings: fdtc in [{lo}, {hi}]")
                }
            }
            write_certificate(
                &common,
                &build_certificate(
                    &cable.fiber,
                    twisted.provenance.describe(),
                    &big_cfg,
                    &cert,
                    None,
                    cable.genus,
                ),
            )?;
            Ok(if matches!(cert.value, FdtcValue::Indeterminate { .. }) {
                2
            } else {
                0
            })
        }
        Command::Certify { common, all } => {
            let entries = load_entries(&common, CheckLevel::Structural)?;
            let targets: Vec<CatalogEntry> = if all {
                entries
            } else {
                vec![pick_from(&entries, &common)?.clone()]
            };
            // Entries are independent; certify them concurrently with
            // deterministic per-entry output order.
            let handles: Vec<_> = targets
                .into_iter()
                .map(|entry| {
                    let common = common.clone();
                    std::thread::spawn(move || -> Result<(String, Certificate, bool), String> {
                        let (cert, config) =
                            entry_fdtc(&entry, &common).map_err(|e| e.to_string())?;
                        let indeterminate = matches!(cert.value, FdtcValue::Indeterminate { .. });
                        Ok((
                            entry.name.clone(),
                            build_certificate(
                                &entry.fiber,
                                format!("catalog:{}", entry.name),
                                &config,
                                &cert,
                                None,
                                entry.genus,
                            ),
                            indeterminate,
                        ))
                    })
                })
                .collect();
            let mut code = 0;
            let mut certs = Vec::new();
            for h in handles {
                let (name, cert, indet) = h.join().map_err(|_| "worker panicked")??;
                println!(
                    "{name}: {}",
                    match &cert.boundaries[0].fdtc {
                        crate::certificate::ValueRecord::Exact { value } => value.clone(),
                        crate::certificate::ValueRecord::Interval { lo, hi } =>
                            format!("[{lo}, {hi}]"),
                    }
                );
                if indet {
                    code = 2;
                }
                certs.push(cert);
            }
            if let Some(path) = &common.out {
                let body = if certs.len() == 1 {
                    certs[0].to_json()
                } else {
                    serde_json::to_string_pretty(&certs)?
                };
                std::fs::write(path, body)?;
            }
            Ok(code)
        }
        Command::PaperDemo { common } => {
            let entries = load_entries(&common, CheckLevel::Structural)?;
            let entry = find_entry(&entries, common.knot.as_deref().unwrap_or("10_153"))?;
            let cfg = config_for(entry, &common);
            let demo = crate::demo::paper_demo(entry, Some(cfg), 14)?;
            for stage in &demo.stages {
                let b = &stage.certificate.boundaries[0];
                println!(
                    "stage {}: fdtc {}, veering {}{}",
                    stage.stage,
                    match &b.fdtc {
                        crate::certificate::ValueRecord::Exact { value } => value.clone(),
                        crate::certificate::ValueRecord::Interval { lo, hi } =>
                            format!("[{lo}, {hi}]"),
                    },
                    b.veering,
                    stage
                        .growth
                        .as_ref()
                        .map(|g| format!(", growth {}", g.verdict))
                        .unwrap_or_default()
                );
            }
            if let Some(path) = &common.out {
                std::fs::write(path, serde_json::to_string_pretty(&demo)?)?;
            }
            println!("paper demo: all stages check out");
            Ok(0)
        }
    }
}

fn load_entries(
    common: &Common,
    level: CheckLevel,
) -> Result<Vec<CatalogEntry>, Box<dyn std::error::Error>> {
    Ok(match &common.catalog {
        Some(path) => load_catalog(path, level)?,
        None => {
            if level == CheckLevel::Full {
                crate::catalog::load_catalog_str(crate::catalog::BUILTIN, level)?
            } else {
                builtin_catalog()
            }
        }
    })
}

fn pick_entry(common: &Common) -> Result<CatalogEntry, Box<dyn std::error::Error>> {
    let entries = load_entries(common, CheckLevel::Structural)?;
    Ok(pick_from(&entries, common)?.clone())
}

fn pick_from<'a>(
    entries: &'a [CatalogEntry],
    common: &Common,
) -> Result<&'a CatalogEntry, Box<dyn std::error::Error>> {
    let name = common.knot.as_deref().ok_or("missing --knot <name>")?;
    Ok(find_entry(entries, name)?)
}

fn config_for(entry: &CatalogEntry, common: &Common) -> crate::fdtc::FdtcConfig {
    let mut cfg = entry.fdtc_config();
    if let Some(d) = common.denom_bound {
        cfg.denom_bound = d;
    }
    if let Some(n) = common.max_iter {
        cfg.max_iter = n;
    }
    if let Some(d) = common.search_depth {
        cfg.search_depth = d;
    }
    cfg.seed = common.seed;
    cfg
}

fn entry_fdtc(
    entry: &CatalogEntry,
    common: &Common,
) -> Result<(crate::fdtc::FdtcCertificate, crate::fdtc::FdtcConfig), String> {
    let m = entry.monodromy().map_err(|e| e.to_string())?;
    let cfg = config_for(entry, common);
    let cert = fdtc(&entry.fiber, &m, 0, &cfg).map_err(|e| e.to_string())?;
    Ok((cert, cfg))
}

fn write_certificate(
    common: &Common,
    cert: &Certificate,
) -> Result<(), Box<dyn std::error::Error>> {
    if let Some(path) = &common.out {
        std::fs::write(path, cert.to_json())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_error_exits_one() {
        assert_eq!(run(["openbook", "bogus-subcommand"]), 1);
    }

    #[test]
    fn fdtc_trefoil_runs() {
        assert_eq!(run(["openbook", "fdtc", "--knot", "3_1"]), 0);
    }

    #[test]
    fn small_iteration_budget_is_indeterminate() {
        assert_eq!(
            run([
                "openbook",
                "fdtc",
                "--knot",
                "4_1",
                "--max-iter",
                "1",
                "--denom-bound",
                "1000",
                "--search-depth",
                "0",
            ]),
            2
        );
    }
}
