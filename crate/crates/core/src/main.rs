//! Command-line surface over the sumfree library: verification,
//! constructions, exact solving, structural analysis, density tables,
//! bound evaluation, and randomized lemma property runs.

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;
use sumfree::constructions::{
    self, cameron_optimal, conjecture_bound, decimal_digits, fraction, mu_1d, one_d_extremal,
    pq_stripe, theorem2_bound, OneDimVariant, StripeSpec,
};
use sumfree::geometry::{
    check_p_translate_bound, check_pairing_bound, check_translate_bound, rectangle_pairing, Sign,
};
use sumfree::grid::{Dim, GridSet, Point};
use sumfree::solver::{
    self, brute_force_max, enumerate_optima, max_sum_free, Checkpoint, SolveOptions, SolveResult,
};
use sumfree::structure::{
    classify_type, er_type1_bound, er_type2_bound, line_close, min_gamma, point_close,
    stripe_containment, upper_boundary, TypeKind,
};
use sumfree::{pointlist, Error, Rational, SchurParams};

/// Fixed default seed: every randomized command reproduces without flags.
const DEFAULT_SEED: u64 = 271828;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Structured,
}

#[derive(Parser)]
#[command(name = "sumfree", version, about = "Sum-free subsets of [n] and [n]^2")]
struct Cli {
    /// Output style: `plain` for human-oriented lines, `structured` for
    /// key=value lines.
    #[arg(long, value_enum, default_value_t = Format::Structured, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a point-list file for (p,q)-sum-freeness.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
    },
    /// Emit a named construction as a point list plus a summary.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
        /// Stripe offset for pq-stripe, as an integer or `a/b` fraction.
        #[arg(long)]
        a: Option<String>,
        /// Closed lower sum bound for `stripe`.
        #[arg(long = "L")]
        lower: Option<i64>,
        /// Closed upper sum bound for `stripe`.
        #[arg(long = "U")]
        upper: Option<i64>,
        /// One-dimensional variant: odds, upper_half, or shifted.
        #[arg(long)]
        variant: Option<String>,
        /// Write the point list here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact maximum sum-free set search.
    Solve {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 2)]
        dim: u8,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
        /// Wall-clock limit in seconds; expiry yields an unproven incumbent.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Start from the empty set instead of the best construction.
        #[arg(long)]
        no_seed: bool,
        /// Use the small-instance exhaustive oracle instead of branch and bound.
        #[arg(long)]
        brute_force: bool,
        /// Write a resumable checkpoint here when the time limit expires.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Resume from a previously written checkpoint file.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// List every maximum sum-free set of a small instance.
    Enumerate {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        dim: u8,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Structural analysis of a point-list file: upper boundary, type
    /// classification, stripe containment, and size bounds.
    Analyze {
        file: PathBuf,
        /// Stripe width parameter; defaults to the set's own min_gamma.
        #[arg(long)]
        gamma: Option<String>,
        /// When set, report whether the witness line is eps-close to the
        /// diagonal x+y = 8n/5.
        #[arg(long)]
        eps: Option<String>,
        /// When set, report whether the extremal boundary point is
        /// beta-close to (4n/5, 4n/5).
        #[arg(long)]
        beta: Option<String>,
    },
    /// CSV density table: n,optimum,density,proven.
    Table {
        #[arg(long, default_value_t = 1)]
        dim: u8,
        #[arg(long)]
        n_from: i64,
        #[arg(long)]
        n_to: i64,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Evaluate the closed-form size bounds.
    Bound {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: Option<i64>,
    },
    /// Randomized exclusion-bound property run over maximal sum-free sets.
    Lemmas {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Largest grid side used by the trials.
        #[arg(long, default_value_t = 30)]
        n: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    Cameron,
    Stripe,
    PqStripe,
    OneD,
}

struct Report {
    format: Format,
    lines: Vec<(String, String)>,
}

impl Report {
    fn new(format: Format, command: &str) -> Report {
        let mut r = Report {
            format,
            lines: Vec::new(),
        };
        r.push("command", command);
        r.push("version", env!("CARGO_PKG_VERSION"));
        r
    }

    fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn push_rational(&mut self, key: &str, value: Rational) {
        self.push(key, fraction(value));
        self.push(&format!("{key}_decimal"), decimal_digits(value, 12));
    }

    fn print(&self) {
        for (k, v) in &self.lines {
            match self.format {
                Format::Structured => println!("{k}={v}"),
                Format::Plain => println!("{k}: {v}"),
            }
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, Error> {
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let numer: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad rational `{text}`")))?;
            let denom: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad rational `{text}`")))?;
            if denom == 0 {
                return Err(Error::InvalidInput(format!("zero denominator in `{text}`")));
            }
            Rational::new(numer, denom)
        }
        None => match text.trim().parse::<i64>() {
            Ok(i) => Rational::from_integer(i),
            Err(_) => {
                return Err(Error::InvalidInput(format!("bad rational `{text}`")));
            }
        },
    };
    Ok(value)
}

fn parse_dim(dim: u8) -> Result<Dim, Error> {
    Dim::from_u8(dim).ok_or_else(|| Error::InvalidInput(format!("dim must be 1 or 2, got {dim}")))
}

fn points_inline(s: &GridSet) -> String {
    let parts: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    parts.join(";")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let format = cli.format;
    match cli.command {
        Command::Verify { file, p, q } => {
            let params = SchurParams::new(p, q)?;
            let text = std::fs::read_to_string(&file)?;
            let s = pointlist::parse(&text)?;
            let mut report = Report::new(format, "verify");
            report.push("file", file.display());
            report.push("n", s.n());
            report.push("dim", s.dim().as_u8());
            report.push("p", p);
            report.push("q", q);
            report.push("size", s.len());
            match s.first_violation(params) {
                None => {
                    report.push("sum_free", true);
                    report.print();
                    Ok(ExitCode::SUCCESS)
                }
                Some(v) => {
                    report.push("sum_free", false);
                    report.push("violation", v);
                    report.print();
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Construct {
            kind,
            n,
            p,
            q,
            a,
            lower,
            upper,
            variant,
            output,
        } => {
            let params = SchurParams::new(p, q)?;
            let set = match kind {
                ConstructKind::Cameron => {
                    if n < 2 {
                        return Err(Error::InvalidInput(format!(
                            "cameron needs n >= 2, got {n}"
                        )));
                    }
                    cameron_optimal(n)
                }
                ConstructKind::Stripe => {
                    let (lower, upper) = match (lower, upper) {
                        (Some(l), Some(u)) => (l, u),
                        _ => {
                            return Err(Error::InvalidInput(
                                "stripe needs --L and --U".to_string(),
                            ))
                        }
                    };
                    constructions::stripe_set(&StripeSpec::closed(n, lower, upper))
                }
                ConstructKind::PqStripe => {
                    let a = a.as_deref().map(parse_rational).transpose()?;
                    pq_stripe(n, params, a)?
                }
                ConstructKind::OneD => {
                    let variant = variant.as_deref().unwrap_or("upper_half");
                    let variant = OneDimVariant::parse(variant).ok_or_else(|| {
                        Error::InvalidInput(format!("unknown variant `{variant}`"))
                    })?;
                    one_d_extremal(n, variant)?
                }
            };
            let text = pointlist::to_string(&set);
            match &output {
                Some(path) => std::fs::write(path, &text)?,
                None => print!("{text}"),
            }
            let mut report = Report::new(format, "construct");
            report.push(
                "kind",
                kind.to_possible_value().expect("no skipped variants").get_name(),
            );
            report.push("n", n);
            if let Some(path) = &output {
                report.push("output", path.display());
            }
            report.push("size", set.len());
            report.push_rational("density", set.density());
            report.print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            n,
            dim,
            p,
            q,
            time_limit,
            threads,
            no_seed,
            brute_force,
            checkpoint,
            resume,
        } => {
            let params = SchurParams::new(p, q)?;
            let options = SolveOptions {
                time_limit: time_limit.map(Duration::from_secs_f64),
                threads,
                seed_incumbent: !no_seed,
            };
            let mut report = Report::new(format, "solve");
            let result: SolveResult = if let Some(path) = resume {
                let text = std::fs::read_to_string(&path)?;
                let cp = Checkpoint::parse(&text)?;
                report.push("resumed_from", path.display());
                solver::resume(&cp, &options)
            } else {
                let n = n.ok_or_else(|| {
                    Error::InvalidInput("solve needs --n (or --resume)".to_string())
                })?;
                let dim = parse_dim(dim)?;
                if brute_force {
                    brute_force_max(n, dim, params)?
                } else {
                    max_sum_free(n, dim, params, &options)
                }
            };
            report.push("n", result.witness.n());
            report.push("dim", result.witness.dim().as_u8());
            report.push("p", p);
            report.push("q", q);
            report.push("optimum", result.optimum);
            report.push_rational("density", result.witness.density());
            report.push("nodes", result.nodes);
            report.push("proven", result.proven);
            if let Some(trace) = result.bound_trace {
                report.push("pruned_by_bound", trace.pruned_by_bound);
                report.push("pruned_by_conflict", trace.pruned_by_conflict);
                report.push("pruned_by_symmetry", trace.pruned_by_symmetry);
            }
            report.push("witness", points_inline(&result.witness));
            if let Some(cp) = &result.checkpoint {
                if let Some(path) = &checkpoint {
                    std::fs::write(path, cp.to_text())?;
                    report.push("checkpoint_written", path.display());
                } else {
                    report.push("checkpoint_open_subtrees", cp.open.len());
                }
            }
            report.print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { n, dim, p, q, limit } => {
            let params = SchurParams::new(p, q)?;
            let dim = parse_dim(dim)?;
            let optima = enumerate_optima(n, dim, params, limit)?;
            let mut report = Report::new(format, "enumerate");
            report.push("n", n);
            report.push("dim", dim.as_u8());
            report.push("p", p);
            report.push("q", q);
            report.push("optimum", optima.optimum);
            report.push("count", optima.sets.len());
            report.push("truncated", optima.truncated);
            for (i, s) in optima.sets.iter().enumerate() {
                report.push(&format!("optimum_{i}"), points_inline(s));
            }
            report.print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            file,
            gamma,
            eps,
            beta,
        } => {
            let text = std::fs::read_to_string(&file)?;
            let s = pointlist::parse(&text)?;
            if s.dim() != Dim::Two {
                return Err(Error::InvalidInput(
                    "analyze needs a two-dimensional point list".to_string(),
                ));
            }
            let n = s.n();
            let mut report = Report::new(format, "analyze");
            report.push("file", file.display());
            report.push("n", n);
            report.push("size", s.len());
            let boundary = upper_boundary(&s)?;
            report.push("boundary_points", boundary.points.len());
            report.push(
                "boundary_point_list",
                boundary
                    .points
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            for (i, line) in boundary.lines.iter().enumerate() {
                report.push(
                    &format!("line_{i}"),
                    format!("m={} c={}", fraction(line.m), fraction(line.c)),
                );
            }
            let witness = classify_type(&s)?;
            report.push("type", format!("{:?}", witness.kind));
            for (i, cond) in witness.conditions.iter().enumerate() {
                report.push(&format!("condition_{i}"), format!("{}: {}", cond.name, cond.passed));
            }
            if let Some(line) = witness.line {
                report.push(
                    "witness_line",
                    format!("m={} c={}", fraction(line.m), fraction(line.c)),
                );
                match witness.kind {
                    TypeKind::Type1 => {
                        let b = er_type1_bound(n, line.p1.x, line.p1.y, line.m, line.c)?;
                        report.push_rational("type1_size_bound", b);
                    }
                    TypeKind::Type2 => {
                        let b = er_type2_bound(n, line.m, line.c)?;
                        report.push_rational("type2_size_bound", b);
                    }
                    TypeKind::Neither => {}
                }
                if let Some(eps) = eps.as_deref() {
                    let eps = parse_rational(eps)?;
                    let target = Rational::new(8 * n, 5);
                    report.push("line_close", line_close(&line, target, eps, n));
                }
                if let Some(beta) = beta.as_deref() {
                    let beta = parse_rational(beta)?;
                    let target = (Rational::new(4 * n, 5), Rational::new(4 * n, 5));
                    report.push("point_close", point_close(line.p1, target, beta, n));
                }
            }
            let min_g = min_gamma(&s)?;
            report.push_rational("min_gamma", min_g);
            // min_gamma is an infimum and the stripe's upper bound is
            // strict, so the default nudges gamma up by 1e-9.
            let gamma = match gamma.as_deref() {
                Some(g) => parse_rational(g)?,
                None => min_g + Rational::new(1, 1_000_000_000),
            };
            report.push_rational("gamma", gamma);
            let containment = stripe_containment(&s, gamma);
            report.push("stripe_contained", containment.contained);
            report.push("stripe_offenders", containment.offenders.len());
            report.print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            dim,
            n_from,
            n_to,
            p,
            q,
            time_limit,
        } => {
            let params = SchurParams::new(p, q)?;
            let dim = parse_dim(dim)?;
            if n_from < 1 || n_to < n_from {
                return Err(Error::InvalidInput(format!(
                    "bad range --n-from {n_from} --n-to {n_to}"
                )));
            }
            let options = SolveOptions {
                time_limit: time_limit.map(Duration::from_secs_f64),
                ..SolveOptions::default()
            };
            let ns: Vec<i64> = (n_from..=n_to).collect();
            println!("n,optimum,density,proven");
            for row in solver::density_table(&ns, dim, params, &options) {
                println!(
                    "{},{},{},{}",
                    row.n,
                    row.size,
                    decimal_digits(row.density, 12),
                    row.proven
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { n, p, q } => {
            let params = SchurParams::new(p, q.unwrap_or(p))?;
            let mut report = Report::new(format, "bound");
            report.push("n", n);
            report.push("p", p);
            report.push("q", params.q);
            if params.symmetric() {
                report.push_rational("theorem_bound", theorem2_bound(n, p));
            }
            report.push_rational("conjecture_bound", conjecture_bound(n, params));
            if params == SchurParams::classical() {
                report.push_rational("mu_1d", mu_1d(n));
            }
            report.print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Lemmas { trials, seed, n } => {
            if n < 5 {
                return Err(Error::InvalidInput(format!(
                    "lemmas needs --n >= 5, got {n}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checked = [0usize; 3];
            let mut violations = [0usize; 3];
            for trial in 0..trials {
                let side = rng.gen_range(5..=n);
                let trial_seed = seed.wrapping_add(trial as u64).wrapping_mul(0x9e37_79b9);

                // Pairing bound: rectangle pairing region for a member.
                let s = solver::random_maximal_sum_free(
                    side,
                    Dim::Two,
                    SchurParams::classical(),
                    trial_seed,
                );
                let members: Vec<Point> = s.iter().collect();
                if !members.is_empty() {
                    let a = members[rng.gen_range(0..members.len())];
                    let region = rectangle_pairing(a, 1);
                    let r = check_pairing_bound(&s, a, &region, SchurParams::classical())?;
                    checked[0] += 1;
                    violations[0] += usize::from(!r.holds);

                    // Translate bound with a random lattice template T.
                    let count = rng.gen_range(1..=8);
                    let t: Vec<(i64, i64)> = (0..count)
                        .map(|_| (rng.gen_range(-side..=side), rng.gen_range(-side..=side)))
                        .collect();
                    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                    let r = check_translate_bound(&s, a, &t, sign)?;
                    checked[1] += 1;
                    violations[1] += usize::from(!r.holds);
                }

                // Dilated translate bound under (p,p).
                let p = rng.gen_range(1..=2);
                let sp = solver::random_maximal_sum_free(
                    side,
                    Dim::Two,
                    SchurParams::new(p, p)?,
                    trial_seed ^ 0x5555,
                );
                let members: Vec<Point> = sp.iter().collect();
                if !members.is_empty() {
                    let a = members[rng.gen_range(0..members.len())];
                    let count = rng.gen_range(1..=8);
                    let t: Vec<(i64, i64)> = (0..count)
                        .map(|_| (rng.gen_range(-side..=side), rng.gen_range(-side..=side)))
                        .collect();
                    let r = check_p_translate_bound(&sp, a, &t, p)?;
                    checked[2] += 1;
                    violations[2] += usize::from(!r.holds);
                }
            }
            let mut report = Report::new(format, "lemmas");
            report.push("trials", trials);
            report.push("seed", seed);
            report.push("max_n", n);
            for (i, name) in ["pairing", "translate", "dilated_translate"].iter().enumerate() {
                report.push(&format!("{name}_checked"), checked[i]);
                report.push(&format!("{name}_violations"), violations[i]);
            }
            let clean = violations.iter().all(|&v| v == 0);
            report.push("all_hold", clean);
            report.print();
            Ok(if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
