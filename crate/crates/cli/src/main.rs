//! `weber`: enumerate theta characteristics and verify the Riemann-Jacobi and Weber
//! formulas at a genus-3 Riemann matrix.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input, 3 τ rejected.

// `!(x < tol)` is deliberate: a NaN residual has to fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use weber_core::chars::{
    aronhold_sets_g3, is_aronhold, is_azygetic, load_aronhold_cache, n0, parity_counts,
    save_aronhold_cache, weber_systems, FundamentalSystem, QuadForm, SymplecticMapF2,
};
use weber_core::theta::{RiemannMatrix, ThetaEvalConfig};
use weber_core::weber::{
    basis_for, iota_eval, jacobi_eval, random_valid_tau, transported_sign, validate_tau,
    weber_eval, weber_sign, BitangentFrame, JacobiRecord, ThetaTable, WeberRecord,
    DEFAULT_NULL_THRESHOLD,
};

#[derive(Parser, Debug)]
#[command(
    name = "weber",
    version,
    about = "Theta characteristics and Weber's formula in genus 3"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Riemann matrix file, `{"g": 3, "re": [[..]], "im": [[..]]}`.
    #[arg(long, global = true)]
    tau: Option<PathBuf>,
    /// Tolerance for the identity checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Lattice truncation radius; chosen from --tail when absent.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Target truncation tail.
    #[arg(long, global = true, default_value_t = 1e-16)]
    tail: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all characteristics of a genus with their parity.
    Chars {
        #[arg(long, default_value_t = 3)]
        genus: usize,
    },
    /// Enumerate the genus-3 Aronhold sets and check them after a reload.
    Aronhold,
    /// Check S([P], τ) = ±1 for N₀ and random fundamental systems.
    Jacobi {
        /// Number of extra systems `σ·N₀` with random σ.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Comma-separated forms of an explicit system, checked instead of N₀.
        #[arg(long)]
        system: Option<String>,
    },
    /// Verify Weber's formula for one pair, or for random pairs with --pairs.
    Weber {
        #[arg(long)]
        qs: Option<QuadForm>,
        #[arg(long)]
        qt: Option<QuadForm>,
        #[arg(long, default_value_t = 10)]
        pairs: usize,
    },
    /// The sign (-1)^a(q0 + qS + qT), and the same sign transported from N₀.
    Sign {
        #[arg(long)]
        qs: QuadForm,
        #[arg(long)]
        qt: QuadForm,
    },
    /// ι of the eight systems built from an enumerated Aronhold set.
    Iota {
        #[arg(long, default_value_t = 0)]
        aronhold_index: usize,
        /// Reorder the set so its first three members sum to this form.
        #[arg(long)]
        qt: Option<QuadForm>,
    },
    /// Sample a validated genus-3 τ near i·I from --seed.
    Tau,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] weber_core::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use weber_core::Error as E;
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                E::TauRejected { .. } => 3,
                E::Verification(_) | E::Internal(_) => 1,
                _ => 2,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

impl RunArgs {
    fn config(&self) -> CliResult<ThetaEvalConfig> {
        if !(self.tol > 0.0) || !(self.tail > 0.0) {
            return Err(CliError::Input("--tol and --tail must be positive".into()));
        }
        Ok(ThetaEvalConfig {
            radius: self.radius,
            target_tail: self.tail,
            strict: false,
        })
    }

    fn load_table(&self) -> CliResult<ThetaTable> {
        let path = self
            .tau
            .as_ref()
            .ok_or_else(|| CliError::Input("--tau is required".into()))?;
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let tau = RiemannMatrix::from_json(&text)?;
        Ok(validate_tau(&tau, &self.config()?, DEFAULT_NULL_THRESHOLD)?)
    }

    fn emit<T: Serialize>(&self, report: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(report).map_err(weber_core::Error::from)?;
        text.push('\n');
        match &self.out {
            Some(path) => write_file(path, &text),
            None => {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(weber_core::Error::from)?;
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CharEntry {
    form: String,
    arf: u8,
}

#[derive(Serialize)]
struct CharsReport {
    genus: usize,
    even: usize,
    odd: usize,
    characteristics: Vec<CharEntry>,
}

fn cmd_chars(run: &RunArgs, genus: usize) -> CliResult<()> {
    if !(1..=5).contains(&genus) {
        return Err(CliError::Input(format!(
            "genus must be in 1..=5, got {genus}"
        )));
    }
    let characteristics: Vec<CharEntry> = QuadForm::all(genus)
        .map(|q| CharEntry {
            form: q.to_string(),
            arf: q.arf(),
        })
        .collect();
    let even = characteristics.iter().filter(|c| c.arf == 0).count();
    let odd = characteristics.len() - even;
    if (even, odd) != parity_counts(genus) {
        return Err(CliError::Failed(format!(
            "counts {even}/{odd} disagree with closed forms"
        )));
    }
    run.emit(&CharsReport {
        genus,
        even,
        odd,
        characteristics,
    })
}

#[derive(Serialize)]
struct AronholdReport {
    count: usize,
    all_aronhold: bool,
    all_azygetic: bool,
    path: Option<String>,
}

fn cmd_aronhold(run: &RunArgs) -> CliResult<()> {
    let sets = aronhold_sets_g3();
    // The enumeration goes to --out; the summary to stdout.
    let reloaded = match &run.out {
        Some(path) => {
            save_aronhold_cache(path, sets)?;
            load_aronhold_cache(path)?
        }
        None => sets.to_vec(),
    };
    let mut all_aronhold = true;
    let mut all_azygetic = true;
    for s in &reloaded {
        all_aronhold &= is_aronhold(s.forms())?;
        all_azygetic &= is_azygetic(s.forms())?;
    }
    let report = AronholdReport {
        count: reloaded.len(),
        all_aronhold,
        all_azygetic,
        path: run.out.as_ref().map(|p| p.display().to_string()),
    };
    let text = serde_json::to_string_pretty(&report).map_err(weber_core::Error::from)?;
    println!("{text}");
    if !(all_aronhold && all_azygetic) || report.count != 288 {
        return Err(CliError::Failed(
            "Aronhold enumeration failed its checks".into(),
        ));
    }
    Ok(())
}

fn parse_system(text: &str) -> CliResult<FundamentalSystem> {
    let forms = text
        .split(',')
        .map(|s| s.trim().parse::<QuadForm>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FundamentalSystem::new(forms)?)
}

fn cmd_jacobi(run: &RunArgs, random: usize, system: Option<&str>) -> CliResult<()> {
    let table = run.load_table()?;
    let mut systems = vec![match system {
        Some(s) => parse_system(s)?,
        None => n0(),
    }];
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    for _ in 0..random {
        let sigma = SymplecticMapF2::random(3, &mut rng);
        systems.push(systems[0].transform(&sigma)?);
    }
    let results = systems
        .iter()
        .map(|p| jacobi_eval(p, &table))
        .collect::<Result<Vec<_>, _>>()?;
    let records: Vec<JacobiRecord> = results.iter().map(JacobiRecord::from).collect();
    run.emit(&records)?;
    let failed = results.iter().filter(|r| !(r.residual < run.tol)).count();
    if failed > 0 {
        return Err(CliError::Failed(format!(
            "{failed} systems exceed tolerance {:e}",
            run.tol
        )));
    }
    Ok(())
}

fn cmd_weber(
    run: &RunArgs,
    qs: Option<QuadForm>,
    qt: Option<QuadForm>,
    pairs: usize,
) -> CliResult<()> {
    let table = run.load_table()?;
    let frame = BitangentFrame::new(&table)?;
    let chosen: Vec<(QuadForm, QuadForm)> = match (qs, qt) {
        (Some(a), Some(b)) => vec![(a, b)],
        (None, None) => {
            let evens: Vec<QuadForm> = QuadForm::all_even(3).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            let mut out: Vec<(QuadForm, QuadForm)> = Vec::new();
            while out.len() < pairs.min(36 * 35) {
                let a = evens[rng.gen_range(0..evens.len())];
                let b = evens[rng.gen_range(0..evens.len())];
                if a != b && !out.contains(&(a, b)) {
                    out.push((a, b));
                }
            }
            out
        }
        _ => {
            return Err(CliError::Input(
                "give both --qs and --qt, or neither".into(),
            ))
        }
    };
    let results = chosen
        .iter()
        .map(|(a, b)| weber_eval(a, b, &frame, &table))
        .collect::<Result<Vec<_>, _>>()?;
    let records: Vec<WeberRecord> = results.iter().map(WeberRecord::from).collect();
    run.emit(&records)?;
    let failed = results
        .iter()
        .filter(|r| !(r.relative_error < run.tol))
        .count();
    if failed > 0 {
        return Err(CliError::Failed(format!(
            "{failed} pairs exceed tolerance {:e}",
            run.tol
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SignReport {
    #[serde(rename = "qS")]
    q_s: String,
    #[serde(rename = "qT")]
    q_t: String,
    sign: i8,
    transported: i8,
}

fn cmd_sign(run: &RunArgs, qs: &QuadForm, qt: &QuadForm) -> CliResult<()> {
    let sign = weber_sign(qs, qt)?;
    let family = weber_systems(&basis_for(qs, qt)?, qt)?;
    let transported = transported_sign(family.base())?;
    run.emit(&SignReport {
        q_s: qs.to_string(),
        q_t: qt.to_string(),
        sign,
        transported,
    })?;
    if sign != transported {
        return Err(CliError::Failed("transported sign disagrees".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct IotaReport {
    aronhold_index: usize,
    #[serde(rename = "qS")]
    q_s: String,
    #[serde(rename = "qT")]
    q_t: String,
    iota_re: f64,
    iota_im: f64,
    sign: i8,
    residual: f64,
    weber_sign: i8,
    transported: i8,
}

fn cmd_iota(run: &RunArgs, index: usize, qt: Option<QuadForm>) -> CliResult<()> {
    let sets = aronhold_sets_g3();
    let set = sets
        .get(index)
        .ok_or_else(|| CliError::Input(format!("--aronhold-index must be below {}", sets.len())))?;
    let basis = match qt {
        Some(q) => set.ordered_for(&q).ok_or_else(|| {
            CliError::Input(format!("no three members of set {index} sum to {q}"))
        })?,
        None => set.clone(),
    };
    let q_t = basis.q_triple(1, 2, 3);
    let q_s = basis.sum();
    let table = run.load_table()?;
    let family = weber_systems(&basis, &q_t)?;
    let r = iota_eval(&family, &table)?;
    let report = IotaReport {
        aronhold_index: index,
        q_s: q_s.to_string(),
        q_t: q_t.to_string(),
        iota_re: r.value.re,
        iota_im: r.value.im,
        sign: r.sign,
        residual: r.residual,
        weber_sign: weber_sign(&q_s, &q_t)?,
        transported: transported_sign(family.base())?,
    };
    run.emit(&report)?;
    if !(r.residual < run.tol) {
        return Err(CliError::Failed(format!("iota residual {:e}", r.residual)));
    }
    if report.sign != report.weber_sign || report.sign != report.transported {
        return Err(CliError::Failed(
            "iota disagrees with the predicted sign".into(),
        ));
    }
    Ok(())
}

fn cmd_tau(run: &RunArgs) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let (tau, table) = random_valid_tau(&mut rng, &run.config()?)?;
    log::info!("smallest even theta null: {:e}", table.smallest_null().1);
    let mut text = tau.to_json();
    text.push('\n');
    match &run.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let run = &cli.run;
    run.config()?;
    match cli.command {
        Command::Chars { genus } => cmd_chars(run, genus),
        Command::Aronhold => cmd_aronhold(run),
        Command::Jacobi { random, system } => cmd_jacobi(run, random, system.as_deref()),
        Command::Weber { qs, qt, pairs } => cmd_weber(run, qs, qt, pairs),
        Command::Sign { qs, qt } => cmd_sign(run, &qs, &qt),
        Command::Iota { aronhold_index, qt } => cmd_iota(run, aronhold_index, qt),
        Command::Tau => cmd_tau(run),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
