use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use coherence_core::measures::{asym_discord, coherence, global_discord, rel_entropy_discord};
use coherence_core::protocols::{
    dqc1_report, named_unitary, stateprep_bound_series_upto, verify_result, werner_demo, BoundKind, Dqc1Config,
    StatePrepConfig, VerifySummary,
};
use coherence_core::qcore::CMatrix;
use coherence_core::{BoundReport, OptimizerConfig, ProductBasis};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::num;
use crate::{files, Cli, Command, DiscordMode, NamedUnitary, SeriesFormat, SEED_ENV};

pub enum Outcome {
    Ok,
    Violation(String),
}

/// What a subcommand hands back for printing and for the report file.
struct Produced {
    seed: Option<u64>,
    payload: Value,
    text: String,
    violation: Option<String>,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    command: Vec<String>,
    seed: Option<u64>,
    config: &'a Command,
    payload: &'a Value,
    version: &'static str,
}

/// Internal invariant failures exit with 2; everything else is an input
/// problem and exits with 1.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let internal = e.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<coherence_core::Error>(),
            Some(coherence_core::Error::NegativeMeasure { .. })
        )
    });
    if internal {
        2
    } else {
        1
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV} must be an unsigned integer, got {raw:?}")),
        Err(_) => Ok(0),
    }
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Outcome> {
    let produced = match &cli.command {
        Command::Coh(a) => coh(a)?,
        Command::Discord(a) => discord(a)?,
        Command::Stateprep(a) => stateprep(a)?,
        Command::Werner(a) => werner(a)?,
        Command::Dqc1(a) => dqc1(a)?,
        Command::Verify(a) => verify(a)?,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&produced.payload)?);
    } else {
        print!("{}", produced.text);
    }
    if let Some(path) = &cli.report {
        let mut command = vec!["coherence-ledger".to_string()];
        command.extend(argv);
        let report = ReportFile {
            command,
            seed: produced.seed,
            config: &cli.command,
            payload: &produced.payload,
            version: env!("CARGO_PKG_VERSION"),
        };
        let text = serde_json::to_string_pretty(&report)? + "\n";
        std::fs::write(path, text).with_context(|| format!("cannot write report {}", path.display()))?;
    }
    Ok(match produced.violation {
        Some(msg) => Outcome::Violation(msg),
        None => Outcome::Ok,
    })
}

fn coh(a: &crate::CohArgs) -> Result<Produced> {
    let state = files::read_state(&a.state)?;
    let basis = match &a.basis {
        Some(p) => files::read_basis(p)?,
        None => ProductBasis::computational(state.dims()),
    };
    let value = coherence(&state, &basis)?;
    Ok(Produced {
        seed: None,
        payload: json!({ "coherence": value }),
        text: format!("{}\n", num(value)),
        violation: None,
    })
}

fn discord(a: &crate::DiscordArgs) -> Result<Produced> {
    let state = files::read_state(&a.state)?;
    let seed = resolve_seed(a.seed)?;
    let defaults = OptimizerConfig::default();
    let opt = OptimizerConfig {
        grid_points_per_angle: a.grid.unwrap_or(defaults.grid_points_per_angle),
        multistarts: a.starts.unwrap_or(defaults.multistarts),
        seed,
        ..defaults
    };
    let result = match a.mode {
        DiscordMode::Global => global_discord(&state, &opt)?,
        DiscordMode::Relent => rel_entropy_discord(&state, &opt)?,
        DiscordMode::Asym => {
            let a_indices = a
                .a_indices
                .as_ref()
                .ok_or_else(|| anyhow!("--mode asym needs --a-indices"))?;
            asym_discord(&state, a_indices, &opt)?
        }
    };
    let mode = serde_json::to_value(a.mode)?;
    let text = format!(
        "{} discord: {}\nevaluations: {}\n",
        mode.as_str().unwrap_or_default(),
        num(result.value),
        result.evaluations
    );
    Ok(Produced {
        seed: Some(seed),
        payload: serde_json::to_value(&result)?,
        text,
        violation: None,
    })
}

fn failing(reports: &[&BoundReport]) -> Option<String> {
    let bad: Vec<&str> = reports
        .iter()
        .filter(|r| !r.holds())
        .map(|r| r.label.as_str())
        .collect();
    (!bad.is_empty()).then(|| format!("bound violated in: {}", bad.join(", ")))
}

fn bound_line(name: &str, r: &BoundReport) -> String {
    format!("{name}: lhs {} rhs {} slack {}\n", num(r.lhs), num(r.rhs), num(r.slack))
}

pub const SERIES_HEADER: &str = "l,global_discord,bound_rhs,deltaC_control";

fn series_csv(reports: &[BoundReport]) -> String {
    let mut out = format!("{SERIES_HEADER}\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.detail["l"] as usize,
            num(r.lhs),
            num(r.rhs),
            num(r.detail["deltaC_control"])
        );
    }
    out
}

fn stateprep(a: &crate::StatePrepArgs) -> Result<Produced> {
    let seed = resolve_seed(a.seed)?;
    let cfg = StatePrepConfig {
        n: a.n,
        p: a.p,
        theta: a.theta,
    };
    let upto = a.upto.unwrap_or(a.n.saturating_sub(1));
    let reports = stateprep_bound_series_upto(&cfg, upto, &OptimizerConfig::with_seed(seed))?;
    let body = match a.format {
        SeriesFormat::Csv => series_csv(&reports),
        SeriesFormat::Json => serde_json::to_string_pretty(&reports)? + "\n",
    };
    std::fs::write(&a.out, body).with_context(|| format!("cannot write {}", a.out.display()))?;
    let mut text = String::new();
    for r in &reports {
        let _ = write!(text, "{}", bound_line(&r.label, r));
    }
    let _ = writeln!(text, "wrote {}", a.out.display());
    Ok(Produced {
        seed: Some(seed),
        payload: serde_json::to_value(&reports)?,
        text,
        violation: failing(&reports.iter().collect::<Vec<_>>()),
    })
}

fn werner(a: &crate::WernerArgs) -> Result<Produced> {
    let seed = resolve_seed(a.seed)?;
    let w = werner_demo(a.p, &OptimizerConfig::with_seed(seed))?;
    let text = format!(
        "discord: {}\ncoherence of |+>: {}\nslack: {}\nnegativity: {}\n",
        num(w.report.lhs),
        num(w.report.rhs),
        num(w.report.slack),
        num(w.negativity)
    );
    Ok(Produced {
        seed: Some(seed),
        payload: serde_json::to_value(&w)?,
        text,
        violation: failing(&[&w.report]),
    })
}

fn diagonal_unitary(phases: &[f64], n: usize) -> Result<CMatrix> {
    let d = 1usize.checked_shl(n as u32).unwrap_or(0);
    if phases.len() != d {
        bail!(
            "--diag-phases needs {d} phases for {n} register qubits, got {}",
            phases.len()
        );
    }
    Ok(CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, phases[i])
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

fn complex_text(z: Complex64) -> String {
    let sign = if z.im < 0.0 { "-" } else { "+" };
    format!("{} {sign} {}i", num(z.re), num(z.im.abs()))
}

fn dqc1(a: &crate::Dqc1Args) -> Result<Produced> {
    let seed = resolve_seed(a.seed)?;
    let u = match (&a.unitary, &a.diag_phases, a.named) {
        (Some(p), _, _) => files::read_unitary(p)?,
        (_, Some(p), _) => diagonal_unitary(&files::read_phases(p)?, a.n)?,
        (_, _, Some(NamedUnitary::Identity)) => named_unitary("identity", a.n)?,
        (_, _, Some(NamedUnitary::Sigmaz)) => named_unitary("sigmaz", a.n)?,
        _ => bail!("one of --unitary, --diag-phases or --named is required"),
    };
    let cfg = Dqc1Config::new(a.n, u, seed)?;
    let r = dqc1_report(&cfg, &OptimizerConfig::with_seed(seed))?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "trace estimate: {}",
        complex_text(Complex64::new(r.trace_estimate[0], r.trace_estimate[1]))
    );
    let _ = writeln!(
        text,
        "Tr u / 2^n: {}",
        complex_text(Complex64::new(r.normalized_trace[0], r.normalized_trace[1]))
    );
    let _ = writeln!(text, "deltaC simulated: {}", num(r.delta_c_simulated));
    let _ = writeln!(text, "deltaC closed form: {}", num(r.delta_c_closed_form));
    text += &bound_line(&r.global.label, &r.global);
    text += &bound_line(&r.asymmetric.label, &r.asymmetric);
    let _ = writeln!(text, "frame: {}", r.frame);
    Ok(Produced {
        seed: Some(seed),
        payload: serde_json::to_value(&r)?,
        text,
        violation: failing(&[&r.global, &r.asymmetric]),
    })
}

fn verify(a: &crate::VerifyArgs) -> Result<Produced> {
    let seed = resolve_seed(a.seed)?;
    let which = BoundKind::try_from(a.result)?;
    let reports = verify_result(which, a.trials, seed, &OptimizerConfig::with_seed(seed))?;
    let summary = VerifySummary::of(&reports);
    let mut text = String::new();
    for r in reports.iter().filter(|r| !r.holds()) {
        text += &bound_line(&r.label, r);
    }
    let _ = writeln!(text, "trials: {}", summary.trials);
    let _ = writeln!(text, "violations: {}", summary.violations);
    let _ = writeln!(text, "uncertified: {}", summary.uncertified);
    let _ = writeln!(text, "min slack: {}", num(summary.min_slack));
    let violation = (!summary.passed()).then(|| {
        format!(
            "{} of {} trials violate the bound, {} uncertified",
            summary.violations, summary.trials, summary.uncertified
        )
    });
    Ok(Produced {
        seed: Some(seed),
        payload: json!({ "summary": summary, "reports": reports }),
        text,
        violation,
    })
}
