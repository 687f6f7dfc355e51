//! Command-line front end with reproducible, byte-stable output.
//!
//! Exit codes: 0 on success, 1 on a failed `--check` verification, 2 on
//! usage errors.

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};

use crate::characters::CharTable;
use crate::checks;
use crate::error::Error;
use crate::gluing::{conifold_log, football_product, football_sum, FootballParams};
use crate::hurwitz::{brute_force_hurwitz, hurwitz_number, hurwitz_table, phi};
use crate::partition::Partition;
use crate::series::{ei, MultiSeries, Truncation, Var};
use crate::symfunc::{schur, Alphabet};
use crate::vertex::{ikv_vertex, r_series, refined_vertex, VertexParams};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "ovx",
    version,
    about = "Exact one-leg orbifold refined vertices, Hurwitz series, and glued partition functions"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads for partition sums (0 keeps the library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition statistics, or enumeration of all partitions of a size.
    Partition {
        /// Partition, e.g. `3+1` or `3,1` (empty or `0` for the empty one).
        #[arg(long)]
        mu: Option<String>,
        /// List all partitions of this size instead.
        #[arg(long)]
        enumerate: Option<u32>,
    },
    /// Full character table of the symmetric group S_d.
    Chartable {
        #[arg(long)]
        d: u32,
    },
    /// The double Hurwitz series over a pair of profiles.
    Phi {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Double Hurwitz numbers via the Burnside formula.
    Hurwitz {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
        /// Euler characteristic; omit to print a table over r = 0..r-max.
        #[arg(long)]
        chi: Option<i64>,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        /// Verify against the brute-force factorization count.
        #[arg(long)]
        check: bool,
    },
    /// A Schur function at a structured specialization alphabet.
    Schur {
        #[arg(long)]
        lam: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
        /// Alphabet: `trho`, `principal`, or `orbifold` (uses --a).
        #[arg(long, default_value = "trho")]
        alphabet: String,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// The one-leg orbifold refined vertex; with --hbar-order, the
    /// exponential-coordinate R-series at framing --tau instead.
    Vertex {
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 8)]
        t_order: u32,
        /// Compute the R-series truncated at this hbar order.
        #[arg(long)]
        hbar_order: Option<u32>,
        /// Integer framing for the R-series.
        #[arg(long, default_value_t = 0)]
        tau: i64,
    },
    /// The refined vertex C_{λμν}(t, q).
    Ikv {
        #[arg(long, default_value = "")]
        lam: String,
        #[arg(long, default_value = "")]
        mu: String,
        #[arg(long, default_value = "")]
        nu: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
    },
    /// Glued partition function of the local football.
    Football {
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value_t = 2)]
        q_order: u32,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Also compute the double product and exit nonzero on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Resolved conifold partition function (or its closed logarithm).
    Conifold {
        #[arg(long, default_value_t = 3)]
        q_order: u32,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Emit the closed-form logarithm instead of Z.
        #[arg(long)]
        log: bool,
    },
    /// Run the full invariant suite; exits nonzero on the first violation.
    Selfcheck,
}

/// Result of one CLI invocation.
pub struct CliOutcome {
    pub code: i32,
    pub output: String,
}

fn series_output(series: &MultiSeries, format: Format, meta: &[(&str, serde_json::Value)]) -> String {
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in meta {
                obj.insert((*k).to_string(), v.clone());
            }
            obj.insert("series".to_string(), series.to_json());
            serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("serializable")
        }
        Format::Text => format!("{series}"),
    }
}

fn parse_partition(s: &str) -> Result<Partition, Error> {
    let p: Partition = s.parse()?;
    ensure_tractable(p.size())?;
    Ok(p)
}

/// Exact 64-bit centralizer orders and factorials stop at 20!.
fn ensure_tractable(d: u64) -> Result<(), Error> {
    if d > 20 {
        return Err(Error::domain(format!(
            "sizes above 20 are not supported (got {d})"
        )));
    }
    Ok(())
}

fn run_cmd(cli: &Cli) -> Result<CliOutcome, Error> {
    let format = cli.format;
    let out = match &cli.cmd {
        Cmd::Partition { mu, enumerate } => match (mu, enumerate) {
            (_, Some(d)) => {
                let parts = Partition::enumerate(*d);
                let listed: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                match format {
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "d": d,
                        "count": parts.len(),
                        "partitions": listed,
                    }))
                    .expect("serializable"),
                    Format::Text => listed.join("\n"),
                }
            }
            (Some(mu), None) => {
                let p = parse_partition(mu)?;
                let mut hooks = p.hooks();
                hooks.sort_unstable_by(|a, b| b.cmp(a));
                match format {
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "partition": p.to_string(),
                        "size": p.size(),
                        "length": p.len(),
                        "conjugate": p.conjugate().to_string(),
                        "z": p.z_factor(),
                        "kappa": p.kappa(),
                        "n": p.n_stat(),
                        "hooks": hooks,
                        "dimension": p.hook_dimension(),
                    }))
                    .expect("serializable"),
                    Format::Text => format!(
                        "{p}: size {}, length {}, conjugate {}, z {}, kappa {}",
                        p.size(),
                        p.len(),
                        p.conjugate(),
                        p.z_factor(),
                        p.kappa()
                    ),
                }
            }
            (None, None) => {
                return Err(Error::domain("partition needs --mu or --enumerate"));
            }
        },
        Cmd::Chartable { d } => {
            ensure_tractable(*d as u64)?;
            let table = CharTable::for_size(*d);
            let parts: Vec<String> = table.partitions().iter().map(|p| p.to_string()).collect();
            let rows: Vec<Vec<i64>> = table
                .partitions()
                .iter()
                .map(|lam| table.row(lam).to_vec())
                .collect();
            match format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "d": d,
                    "partitions": parts,
                    "chi": rows,
                }))
                .expect("serializable"),
                Format::Text => {
                    let mut lines = vec![format!("S_{d} characters, rows λ / columns μ")];
                    lines.push(format!("μ: {}", parts.join(" ")));
                    for (lam, row) in parts.iter().zip(&rows) {
                        lines.push(format!(
                            "{lam}: {}",
                            row.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        ));
                    }
                    lines.join("\n")
                }
            }
        }
        Cmd::Phi { nu, mu, order } => {
            let nu = parse_partition(nu)?;
            let mu = parse_partition(mu)?;
            let f = phi(&nu, &mu, *order)?;
            series_output(
                f.series(),
                format,
                &[
                    ("nu", serde_json::json!(nu.to_string())),
                    ("mu", serde_json::json!(mu.to_string())),
                ],
            )
        }
        Cmd::Hurwitz {
            nu,
            mu,
            chi,
            r_max,
            check,
        } => {
            let nu = parse_partition(nu)?;
            let mu = parse_partition(mu)?;
            if *check {
                for r in 0..=*r_max {
                    let chi_r = nu.len() as i64 + mu.len() as i64 - r as i64;
                    let burnside = hurwitz_number(chi_r, &nu, &mu)?;
                    let brute = brute_force_hurwitz(r, &nu, &mu)?;
                    if burnside != brute {
                        return Ok(CliOutcome {
                            code: 1,
                            output: format!(
                                "check failed at r={r}: Burnside {burnside} != brute force {brute}"
                            ),
                        });
                    }
                }
            }
            match chi {
                Some(chi) => {
                    let h = hurwitz_number(*chi, &nu, &mu)?;
                    match format {
                        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                            "nu": nu.to_string(),
                            "mu": mu.to_string(),
                            "chi": chi,
                            "h": h.to_string(),
                        }))
                        .expect("serializable"),
                        Format::Text => h.to_string(),
                    }
                }
                None => {
                    let table = hurwitz_table(&nu, &mu, *r_max)?;
                    match format {
                        Format::Json => {
                            serde_json::to_string_pretty(&table).expect("serializable")
                        }
                        Format::Text => table.to_string(),
                    }
                }
            }
        }
        Cmd::Schur {
            lam,
            order,
            alphabet,
            a,
        } => {
            let lam = parse_partition(lam)?;
            let trunc = Truncation::single(&[Var::T], ei(*order as i64));
            let alpha = match alphabet.as_str() {
                "trho" => Alphabet::rho(Var::T),
                "principal" => Alphabet::principal(Var::T),
                "orbifold" => Alphabet::orbifold_rays(*a, Var::T, Var::Qk),
                other => {
                    return Err(Error::domain(format!(
                        "unknown alphabet {other:?}: expected trho, principal, or orbifold"
                    )))
                }
            };
            let s = schur(&lam, &alpha, &trunc)?;
            series_output(
                &s,
                format,
                &[
                    ("lam", serde_json::json!(lam.to_string())),
                    ("alphabet", serde_json::json!(alphabet)),
                ],
            )
        }
        Cmd::Vertex {
            a,
            mu,
            t_order,
            hbar_order,
            tau,
        } => {
            let mu = parse_partition(mu)?;
            match hbar_order {
                Some(h) => {
                    let r = r_series(*a, &mu, *tau, *h)?;
                    series_output(
                        &r,
                        format,
                        &[
                            ("a", serde_json::json!(a)),
                            ("mu", serde_json::json!(mu.to_string())),
                            ("tau", serde_json::json!(tau)),
                        ],
                    )
                }
                None => {
                    let trunc = Truncation::single(&[Var::T], ei(*t_order as i64));
                    let v = refined_vertex(&VertexParams::new(*a, &mu, &trunc))?;
                    series_output(
                        &v,
                        format,
                        &[
                            ("a", serde_json::json!(a)),
                            ("mu", serde_json::json!(mu.to_string())),
                        ],
                    )
                }
            }
        }
        Cmd::Ikv {
            lam,
            mu,
            nu,
            order,
        } => {
            let lam = parse_partition(lam)?;
            let mu = parse_partition(mu)?;
            let nu = parse_partition(nu)?;
            let c = ikv_vertex(&lam, &mu, &nu, *order)?;
            series_output(
                &c,
                format,
                &[
                    ("lam", serde_json::json!(lam.to_string())),
                    ("mu", serde_json::json!(mu.to_string())),
                    ("nu", serde_json::json!(nu.to_string())),
                ],
            )
        }
        Cmd::Football {
            a,
            b,
            q_order,
            order,
            check,
        } => {
            ensure_tractable(*q_order as u64)?;
            let params = FootballParams::new(*a, *b, *q_order, *order);
            let sum = football_sum(&params)?;
            if *check {
                let product = football_product(&params)?;
                if sum != product {
                    return Ok(CliOutcome {
                        code: 1,
                        output: format!(
                            "check failed: glued sum and double product disagree at (a,b)=({a},{b})"
                        ),
                    });
                }
            }
            series_output(
                &sum,
                format,
                &[
                    ("a", serde_json::json!(a)),
                    ("b", serde_json::json!(b)),
                    ("checked", serde_json::json!(check)),
                ],
            )
        }
        Cmd::Conifold {
            q_order,
            order,
            log,
        } => {
            let closed = conifold_log(*q_order, *order)?;
            let series = if *log { closed } else { closed.exp()? };
            series_output(
                &series,
                format,
                &[("log", serde_json::json!(log))],
            )
        }
        Cmd::Selfcheck => {
            let reports = checks::run_all();
            let mut lines = Vec::new();
            let mut all_ok = true;
            for (i, r) in reports.iter().enumerate() {
                let status = if r.passed { "PASS" } else { "FAIL" };
                // no timings here: identical invocations stay byte-identical
                let mut line = format!("[{status}] {:2}. {}", i + 1, r.name);
                if !r.passed {
                    all_ok = false;
                    line.push_str(&format!("\n       {}", r.detail));
                }
                lines.push(line);
            }
            // keep a stable epilogue line for scripting
            lines.push(if all_ok {
                "selfcheck: all criteria hold exactly".to_string()
            } else {
                "selfcheck: FAILED".to_string()
            });
            return Ok(CliOutcome {
                code: if all_ok { 0 } else { 1 },
                output: lines.join("\n"),
            });
        }
    };
    Ok(CliOutcome { code: 0, output: out })
}

/// Parse and run one invocation; never panics on user input.
pub fn run<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return CliOutcome {
                code: e.exit_code(),
                output: e.render().to_string(),
            }
        }
    };
    if cli.threads > 0 {
        // best effort: the global pool can only be configured once
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run_cmd(&cli) {
        Ok(outcome) => outcome,
        Err(e) => CliOutcome {
            code: 2,
            output: format!("error: {e}"),
        },
    }
}
