//! Command-line front end. Every subcommand prints exactly one document
//! (JSON, CSV, or text per --format) on stdout; diagnostics go to
//! stderr. Exit codes: 0 ok, 2 usage error, 3 budget exceeded,
//! 4 verification rejected.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::json;

use abundant_core::constants::{
    beta, bounds_report, build_mu, g_mean, search_modulus, ReportConfig,
};
use abundant_core::runs::{scan_runs, SieveConfig, SigmaStrategy, DEFAULT_SEGMENT_SIZE};
use abundant_core::witness::{
    build_certificate, verify_certificate, WitnessBudget, WitnessCertificate,
};
use abundant_core::{classify, parse_rational, CertifiedScalar, Error, Factorization};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Multiplicative,
    DivisorAccumulation,
}

impl From<Strategy> for SigmaStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Multiplicative => SigmaStrategy::Multiplicative,
            Strategy::DivisorAccumulation => SigmaStrategy::DivisorAccumulation,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "abundant",
    version,
    about = "Certified computations around runs of consecutive abundant numbers"
)]
struct Cli {
    /// Output format for the single document written to stdout.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Worker threads (0 = automatic). Outputs never depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Precision in fractional bits for certified intervals.
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify n as abundant (sigma >= 2n; includes perfect) or deficient.
    Classify { n: u64 },

    /// E(limit) with the first-occurrence table of run lengths.
    Runs {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
        segment_size: u64,
        #[arg(long, value_enum, default_value = "multiplicative")]
        strategy: Strategy,
    },

    /// Certified interval for the prime double product beta.
    Beta {
        #[arg(long, default_value_t = 10_000)]
        prime_limit: u64,
        #[arg(long, default_value_t = 40)]
        depth: u32,
    },

    /// Full bounds report for one modulus.
    Bounds {
        /// Modulus as a decimal integer.
        #[arg(long, conflicts_with = "modulus_factored")]
        modulus: Option<String>,
        /// Modulus pre-factored, e.g. "2^8,3^6,5^4,7^3,11^2".
        #[arg(long)]
        modulus_factored: Option<String>,
        /// Abundancy threshold as a rational, e.g. 2 or 3/2.
        #[arg(long, default_value = "2")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        beta_prime_limit: u64,
        #[arg(long, default_value_t = 40)]
        beta_depth: u32,
        #[arg(long, default_value_t = 1 << 24)]
        divisor_budget: u64,
    },

    /// Build M_U = prod_{p<U} p^U and report the delta*tau/2 gap to beta.
    Mu {
        #[arg(long = "U")]
        u: u32,
        #[arg(long, default_value_t = 10_000)]
        beta_prime_limit: u64,
        #[arg(long, default_value_t = 40)]
        beta_depth: u32,
    },

    /// Build a CRT witness certificate for k consecutive abundant numbers.
    Witness {
        #[arg(long)]
        length: u64,
        #[arg(long, conflicts_with = "modulus_factored")]
        modulus: Option<String>,
        #[arg(long)]
        modulus_factored: Option<String>,
        #[arg(long, default_value = "2")]
        alpha: String,
        /// Prime-stream budget; construction fails loudly past this.
        #[arg(long, default_value_t = 1 << 33)]
        max_prime: u64,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Verify a certificate file; exit code 4 on rejection.
    Verify { file: PathBuf },

    /// Evaluate candidate moduli from a file (one per line, decimal or
    /// factored form; # comments) and keep the narrowest bracket.
    Search {
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value = "2")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        beta_prime_limit: u64,
        #[arg(long, default_value_t = 40)]
        beta_depth: u32,
        #[arg(long, default_value_t = 1 << 24)]
        divisor_budget: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn parse_modulus(
    modulus: &Option<String>,
    factored: &Option<String>,
) -> Result<Factorization, Error> {
    match (modulus, factored) {
        (Some(dec), None) => {
            let v = rug::Integer::from_str_radix(dec.trim(), 10)
                .map_err(|_| Error::InvalidInput(format!("bad modulus {dec:?}")))?;
            Factorization::from_integer(&v)
        }
        (None, Some(spec)) => Factorization::from_spec_str(spec),
        _ => Err(Error::InvalidInput(
            "exactly one of --modulus/--modulus-factored is required".into(),
        )),
    }
}

fn interval_text(label: &str, v: &CertifiedScalar) -> String {
    let (lo, hi) = v.endpoint_strings();
    format!("{label} in [{lo}, {hi}]")
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Classify { n } => {
            let c = classify(*n)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&c)?),
                Format::Csv => {
                    println!("n,kind,is_perfect,sigma");
                    println!("{},{:?},{},{}", c.n, c.kind, c.is_perfect, c.sigma);
                }
                Format::Text => {
                    let mut words = vec![format!("{:?}", c.kind).to_lowercase()];
                    if c.is_perfect {
                        words.push("perfect".into());
                    }
                    println!("{}: {} (sigma = {})", c.n, words.join(", "), c.sigma);
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Runs {
            limit,
            segment_size,
            strategy,
        } => {
            let cfg = SieveConfig::with_segment_size(*limit, *segment_size)?;
            if *limit >= 10_000_000 {
                eprintln!(
                    "sieving to {limit} in segments of {segment_size} ({} segments)",
                    limit.div_ceil(*segment_size)
                );
            }
            let out = scan_runs(&cfg, (*strategy).into())?;
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&out)?;
                    v["config"] = json!({
                        "segment_size": segment_size,
                        "strategy": match strategy {
                            Strategy::Multiplicative => "multiplicative",
                            Strategy::DivisorAccumulation => "divisor-accumulation",
                        },
                    });
                    println!("{v}");
                }
                Format::Csv => {
                    println!("length,start");
                    for r in &out.records {
                        println!("{},{}", r.length, r.start);
                    }
                }
                Format::Text => {
                    println!("E({}) = {}", out.limit, out.longest);
                    if let Some(w) = &out.witness {
                        println!("earliest run of {}: starts at {}", w.length, w.start);
                    }
                    for r in &out.records {
                        println!("first run of >= {}: starts at {}", r.length, r.start);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Beta { prime_limit, depth } => {
            let b = beta(*prime_limit, *depth, cli.bits)?;
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&b)?;
                    v["config"] =
                        json!({"prime_limit": prime_limit, "depth": depth, "bits": cli.bits});
                    println!("{v}");
                }
                Format::Csv => {
                    let (lo, hi) = b.endpoint_strings();
                    println!("lo,hi,bits");
                    println!("{lo},{hi},{}", b.precision_bits());
                }
                Format::Text => println!("{}", interval_text("beta", &b)),
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Bounds {
            modulus,
            modulus_factored,
            alpha,
            beta_prime_limit,
            beta_depth,
            divisor_budget,
        } => {
            let m = parse_modulus(modulus, modulus_factored)?;
            let cfg = ReportConfig {
                alpha: parse_alpha(alpha)?,
                precision_bits: cli.bits,
                beta_prime_limit: *beta_prime_limit,
                beta_depth: *beta_depth,
                divisor_budget: *divisor_budget,
            };
            let report = bounds_report(&m, &cfg)?;
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report)?;
                    v["config"] = json!({
                        "bits": cli.bits,
                        "beta_prime_limit": beta_prime_limit,
                        "beta_depth": beta_depth,
                        "divisor_budget": divisor_budget,
                    });
                    println!("{v}");
                }
                Format::Csv => {
                    println!("{}", abundant_core::constants::BoundsReport::CSV_HEADER);
                    println!("{}", report.to_csv_row());
                }
                Format::Text => {
                    println!("modulus {} at alpha {}", report.modulus, alpha);
                    println!("{}", interval_text("delta", &report.delta));
                    println!("{}", interval_text("tau", &report.tau));
                    println!("{}", interval_text("G", &report.g));
                    println!("{}", interval_text("upsilon", &report.upsilon));
                    println!("{}", interval_text("omega_lower", &report.omega_lower));
                    println!("{}", interval_text("omega_upper", &report.omega_upper));
                    println!(
                        "{}",
                        interval_text("limit_lower (rho2)", &report.limit_lower)
                    );
                    match &report.limit_upper {
                        Some(u) => println!("{}", interval_text("limit_upper (rho1)", u)),
                        None => println!("limit_upper (rho1): unavailable (delta below beta)"),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Mu {
            u,
            beta_prime_limit,
            beta_depth,
        } => {
            let m = build_mu(*u)?;
            let g = g_mean(&m, cli.bits);
            let b = beta(*beta_prime_limit, *beta_depth, cli.bits)?;
            // delta_M tau_M / 2 equals G_M at alpha = 2; the gap to beta
            // is the section-4 convergence quantity
            let gap = (g.midpoint() - b.midpoint()).abs();
            match cli.format {
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "U": u,
                            "modulus": serde_json::to_value(&m)?,
                            "G": serde_json::to_value(&g)?,
                            "beta": serde_json::to_value(&b)?,
                            "gap_midpoints": gap.to_f64(),
                            "config": {"bits": cli.bits, "beta_prime_limit": beta_prime_limit, "beta_depth": beta_depth},
                        })
                    );
                }
                Format::Csv => {
                    println!("u,modulus,g_lo,g_hi,beta_lo,beta_hi,gap");
                    let (glo, ghi) = g.endpoint_strings();
                    let (blo, bhi) = b.endpoint_strings();
                    println!("{u},{},{glo},{ghi},{blo},{bhi},{}", m.value(), gap.to_f64());
                }
                Format::Text => {
                    println!("M_{u} = {m} = {}", m.value());
                    println!("{}", interval_text("delta*tau/2 = G", &g));
                    println!("{}", interval_text("beta", &b));
                    println!("midpoint gap |G - beta| = {:.3e}", gap.to_f64());
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Witness {
            length,
            modulus,
            modulus_factored,
            alpha,
            max_prime,
            out,
        } => {
            let m = parse_modulus(modulus, modulus_factored)?;
            let a = parse_alpha(alpha)?;
            let budget = WitnessBudget {
                max_prime: *max_prime,
            };
            eprintln!("building certificate for k = {length} over M = {m}");
            let cert = build_certificate(&m, *length, &a, &budget)?;
            let primes_used: usize = cert.blocks.iter().map(|b| b.primes.len()).sum();
            let implied_x = cert.modulus_product() + cert.k;
            eprintln!(
                "blocks use {primes_used} primes; implied x has {} bits",
                implied_x.significant_bits()
            );
            if let Some(path) = out {
                cert.write_json(path)?;
                let summary = json!({
                    "written": path.display().to_string(),
                    "k": cert.k,
                    "modulus": cert.modulus_m.value().to_string(),
                    "primes_consumed": primes_used,
                    "m_bits": cert.m.significant_bits(),
                    "implied_x_bits": implied_x.significant_bits(),
                });
                match cli.format {
                    Format::Json => println!("{summary}"),
                    Format::Csv => {
                        println!("modulus,k,alpha,primes_consumed,m_bits,implied_x_bits");
                        println!(
                            "{},{},{},{},{},{}",
                            cert.modulus_m.value(),
                            cert.k,
                            alpha,
                            primes_used,
                            cert.m.significant_bits(),
                            implied_x.significant_bits()
                        );
                    }
                    Format::Text => println!(
                        "wrote certificate for k = {} (M = {}) to {}",
                        cert.k,
                        cert.modulus_m.value(),
                        path.display()
                    ),
                }
            } else {
                // the certificate itself is the one output document
                println!("{}", serde_json::to_string(&cert)?);
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Verify { file } => {
            let cert = WitnessCertificate::read_json(file)?;
            let verdict = verify_certificate(&cert);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&verdict)?),
                Format::Csv => {
                    println!("check,passed,detail");
                    for c in &verdict.checks {
                        println!("{},{},{}", c.name, c.passed, c.detail.replace(',', ";"));
                    }
                }
                Format::Text => {
                    for c in &verdict.checks {
                        println!(
                            "{:8} {} - {}",
                            if c.passed { "ok" } else { "FAILED" },
                            c.name,
                            c.detail
                        );
                    }
                    println!(
                        "{}",
                        if verdict.accepted {
                            "ACCEPTED"
                        } else {
                            "REJECTED"
                        }
                    );
                }
            }
            Ok(if verdict.accepted {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }

        Cmd::Search {
            candidates,
            alpha,
            beta_prime_limit,
            beta_depth,
            divisor_budget,
        } => {
            let text = std::fs::read_to_string(candidates)?;
            let mut list = Vec::new();
            for line in text.lines() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                if line.contains('^') || line.contains(',') {
                    list.push(Factorization::from_spec_str(line)?);
                } else {
                    let v = rug::Integer::from_str_radix(line, 10)
                        .map_err(|_| Error::InvalidInput(format!("bad modulus {line:?}")))?;
                    list.push(Factorization::from_integer(&v)?);
                }
            }
            let cfg = ReportConfig {
                alpha: parse_alpha(alpha)?,
                precision_bits: cli.bits,
                beta_prime_limit: *beta_prime_limit,
                beta_depth: *beta_depth,
                divisor_budget: *divisor_budget,
            };
            let outcome = search_modulus(&list, &cfg)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&outcome)?),
                Format::Csv => {
                    println!("index,modulus,bracket_lo,bracket_hi,width");
                    for (i, c) in outcome.candidates.iter().enumerate() {
                        let (lo, hi) = c.bracket.clone().unwrap_or((String::new(), String::new()));
                        println!(
                            "{i},{},{lo},{hi},{}",
                            c.modulus.replace(' ', ""),
                            c.width.map(|w| w.to_string()).unwrap_or_default()
                        );
                    }
                }
                Format::Text => {
                    println!(
                        "best modulus: {} (candidate {})",
                        outcome.best.modulus, outcome.best_index
                    );
                    println!(
                        "{}",
                        interval_text("limit_lower", &outcome.best.limit_lower)
                    );
                    if let Some(u) = &outcome.best.limit_upper {
                        println!("{}", interval_text("limit_upper", u));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_alpha(s: &str) -> Result<Rational, Error> {
    let a = parse_rational(s)?;
    if a < 1 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    Ok(a)
}
