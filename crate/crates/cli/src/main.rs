//! `khtor`: Khovanov homology tables, pattern detection and torsion
//! certificates from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use khtor_core::complex::Complex;
use khtor_core::diagram::builtin::{builtin, NAMES};
use khtor_core::diagram::{a_smoothing_chord_diagram, LinkDiagram};
use khtor_core::homology::{homology_table_with, Coefficients, GradingMap};
use khtor_core::pattern::{find_patterns, PatternMatch};
use khtor_core::selftest::{run_all, Options, Verdict};
use khtor_core::torsion::{certify_torsion, TorsionError};

#[derive(Parser)]
#[command(name = "khtor", version, about = "Integral Khovanov homology and order-two torsion certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Refuse diagrams with more crossings (2^n smoothings are enumerated).
    #[arg(long, global = true, env = "KHTOR_MAX_CROSSINGS", default_value_t = 14)]
    max_crossings: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// PD code file (`X(a,b,c,d) …`) or JSON diagram.
    #[arg(long)]
    pd: Option<PathBuf>,
    /// One of the shipped diagrams.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Homology table in (i,j) and (h,q) degrees.
    Table {
        #[command(flatten)]
        input: Input,
        /// Ranks over the field with two elements instead of the integers.
        #[arg(long)]
        mod2: bool,
    },
    /// D(g,h) patterns of the A-smoothing.
    Detect {
        #[command(flatten)]
        input: Input,
    },
    /// Certify the order-two class [V] for odd r < h.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
    },
    /// Run the acceptance corpus.
    Selftest,
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn load(input: &Input, max_crossings: usize) -> Result<LinkDiagram, Failure> {
    let d = match (&input.pd, &input.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            let parsed = if text.trim_start().starts_with('{') { LinkDiagram::from_json(&text) } else { LinkDiagram::parse_pd(&text) };
            parsed.map_err(|e| input_error(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => {
            builtin(name).map_err(|e| input_error(format!("{e}; available: {}", NAMES.join(", "))))?
        }
        (None, None) => return Err(input_error("give --pd or --builtin")),
    };
    if d.crossing_count() > max_crossings {
        return Err(input_error(format!(
            "{} crossings exceeds the limit of {max_crossings} (raise --max-crossings or KHTOR_MAX_CROSSINGS)",
            d.crossing_count()
        )));
    }
    Ok(d)
}

fn patterns(d: &LinkDiagram) -> Result<Vec<PatternMatch>, Failure> {
    let cd = a_smoothing_chord_diagram(d).map_err(|e| input_error(e.to_string()))?;
    Ok(find_patterns(&cd))
}

fn cmd_table(cli: &Cli, input: &Input, mod2: bool) -> Result<(), Failure> {
    let d = load(input, cli.max_crossings)?;
    let coeffs = if mod2 { Coefficients::Mod2 } else { Coefficients::Integers };
    let table = homology_table_with(&Complex::new(&d), coeffs);
    match cli.format {
        Format::Json => println!("{}", table.to_json()),
        Format::Table => {
            let g = table.grading;
            let field = if mod2 { " over Z/2 (dimensions)" } else { "" };
            println!("crossings {}, p = {}, n = {}{field}", d.crossing_count(), g.p, g.n);
            println!("\ndiagram degrees (i, j)\n{}", table.render(false));
            println!("link degrees (h, q) = (i - n, j + p - 2n)\n{}", table.render(true));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Predicted {
    r: usize,
    i: i64,
    j: i64,
    h: i64,
    q: i64,
}

#[derive(Serialize)]
struct DetectRow<'a> {
    g: usize,
    h: usize,
    externals: usize,
    mono_circular: bool,
    bipartite: bool,
    predicted: Vec<Predicted>,
    pattern: &'a PatternMatch,
}

fn cmd_detect(cli: &Cli, input: &Input) -> Result<(), Failure> {
    let d = load(input, cli.max_crossings)?;
    let grading = GradingMap::of(&d);
    let ms = patterns(&d)?;
    let rows: Vec<DetectRow> = ms
        .iter()
        .map(|m| DetectRow {
            g: m.g(),
            h: m.h(),
            externals: m.external.len(),
            mono_circular: m.mono_circular,
            bipartite: m.bipartite_ok,
            predicted: m
                .predicted_bidegrees()
                .into_iter()
                .map(|(r, i, j)| {
                    let (h, q) = grading.to_hq(i, j);
                    Predicted { r, i, j, h, q }
                })
                .collect(),
            pattern: m,
        })
        .collect();
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("report serializes")),
        Format::Table => {
            if rows.is_empty() {
                println!("no D(g,h) pattern");
            }
            for row in &rows {
                let kind = if row.mono_circular { "mono-circular" } else if row.bipartite { "bipartite" } else { "not bipartite" };
                println!("D({},{}) main circle {}, |Λ| = {}, {kind}", row.g, row.h, row.pattern.main_circle, row.externals);
                println!("  outer chords {:?}, inner chords {:?}", row.pattern.out_chords, row.pattern.in_chords);
                for p in &row.predicted {
                    println!("  r = {}: torsion expected at (i,j) = ({}, {}), (h,q) = ({}, {})", p.r, p.i, p.j, p.h, p.q);
                }
            }
        }
    }
    Ok(())
}

fn cmd_certify(cli: &Cli, input: &Input, r: usize) -> Result<(), Failure> {
    let d = load(input, cli.max_crossings)?;
    let ms = patterns(&d)?;
    if ms.is_empty() {
        return Err(input_error("no D(g,h) pattern in the A-smoothing"));
    }
    let usable = |m: &PatternMatch| m.mono_circular || m.bipartite_ok;
    let Some(m) = ms.iter().find(|m| usable(m) && r < m.h()).or_else(|| ms.iter().find(|m| usable(m))) else {
        return Err(input_error("every pattern has a non-bipartite bichord graph"));
    };
    let cx = Complex::new(&d);
    let cert = match certify_torsion(&cx, m, r) {
        Ok(c) => c,
        Err(e @ (TorsionError::Membership(_) | TorsionError::IdentityFailed(_))) => {
            return Err(Failure { code: 2, message: e.to_string() })
        }
        Err(e) => return Err(input_error(format!("D({},{}), r = {r}: {e}", m.g(), m.h()))),
    };
    let summary = format!(
        "D({},{}) r = {}: V has {} terms at (i,j) = {:?}, (h,q) = {:?}; homology there {}; {}",
        m.g(),
        m.h(),
        r,
        cert.chain_v.len(),
        cert.bidegree,
        cert.topological,
        cert.homology,
        if cert.is_valid() { "all checks pass".to_string() } else { format!("failed: {}", cert.failures().join(", ")) }
    );
    match cli.format {
        Format::Json => {
            println!("{}", cert.to_json());
            eprintln!("{summary}");
        }
        Format::Table => {
            println!("{summary}");
            let c = &cert.checks;
            for (name, ok) in [
                ("d(X) = 2V", c.dx_identity),
                ("d(V) = 0", c.v_is_cycle),
                ("V not a boundary", c.v_not_exact),
                ("2V a boundary", c.two_v_exact),
                ("even torsion by SNF", c.even_torsion),
            ] {
                println!("  {:<22} {}", name, if ok { "ok" } else { "FAILED" });
            }
        }
    }
    if cert.is_valid() {
        Ok(())
    } else {
        Err(Failure { code: 2, message: format!("certificate checks failed: {}", cert.failures().join(", ")) })
    }
}

fn cmd_selftest(cli: &Cli) -> Result<(), Failure> {
    let opts = Options { max_crossings: cli.max_crossings, ..Options::default() };
    let reports = run_all(&opts);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| matches!(r.verdict, Verdict::Fail(_))).count();
    let skipped = reports.iter().filter(|r| matches!(r.verdict, Verdict::Skipped(_))).count();
    println!("{} passed, {failed} failed, {skipped} skipped", reports.len() - failed - skipped);
    if failed > 0 {
        return Err(Failure { code: 2, message: format!("{failed} criteria failed") });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let result = match &cli.command {
        Command::Table { input, mod2 } => cmd_table(&cli, input, *mod2),
        Command::Detect { input } => cmd_detect(&cli, input),
        Command::Certify { input, r } => cmd_certify(&cli, input, *r),
        Command::Selftest => cmd_selftest(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("khtor: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
