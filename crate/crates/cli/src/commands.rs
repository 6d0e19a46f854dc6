use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bhsum_core::campaign::{replay, run_campaign, CampaignConfig, FuzzReport, Witness};
use bhsum_core::constants::{asymptotic_envelope, exponent_comparison, ConstantsReport};
use bhsum_core::format::{sig17, to_json_string};
use bhsum_core::forms_lab::Verdict;
use bhsum_core::mixed_norms::{block_mixed_norm, mixed_norm};
use bhsum_core::{ExponentVector, Field, OrderedPartition, Tensor};

use crate::error::CliError;
use crate::{parse, usage, Cli, Command, FieldArg, Format};

pub const DEFAULT_TRIALS: usize = 1000;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Constants { m, t } => constants(cli, m, t),
        Command::Verify { check, m, n, t, replay } => match replay {
            Some(path) => replay_file(path),
            None => verify(cli, (*check).into(), *m, *n, *t),
        },
        Command::Norm { input, p, blocks } => norm(cli, input, p, blocks.as_deref()),
        Command::CompareExponents { n, big_n, q, r } => compare(cli, n, big_n, q, r),
        Command::Kappa { t, m_max } => kappa(cli, t, *m_max),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Writes to `--out` when given, standard output otherwise.
fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn constants(cli: &Cli, m: &str, t: &str) -> Result<(), CliError> {
    let ms = parse::integers(m)?;
    let ts = parse::numbers(t)?;
    let fields = cli.field.unwrap_or(FieldArg::Real).fields();
    let report = ConstantsReport::generate(&ms, &ts, &fields)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json()? + "\n",
    };
    emit(cli, &text)
}

fn verify(cli: &Cli, check: bhsum_core::campaign::Check, m: Option<usize>, n: Option<usize>, t: Option<f64>) -> Result<(), CliError> {
    let field = match cli.field {
        None | Some(FieldArg::Both) => None,
        Some(FieldArg::Real) => Some(Field::Real),
        Some(FieldArg::Complex) => Some(Field::Complex),
    };
    let config = CampaignConfig {
        field,
        m,
        n,
        t,
        tol: cli.tol,
        ..CampaignConfig::new(check, cli.seed, cli.trials.unwrap_or(DEFAULT_TRIALS))
    };
    let report = run_campaign(&config)?;
    let json = report.to_json()? + "\n";
    if report.verdict == Verdict::Violated {
        let path = cli
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("bhsum-witness-{}-{}.json", report.check, report.seed)));
        write(&path, &json)?;
        print!("{}", summary(&report, Some(&path)));
        return Err(CliError::Violation(path));
    }
    match (cli.format, &cli.out) {
        (Some(Format::Json), None) => print!("{json}"),
        (_, Some(path)) => {
            write(path, &json)?;
            print!("{}", summary(&report, Some(path)));
        }
        _ => print!("{}", summary(&report, None)),
    }
    Ok(())
}

fn summary(report: &FuzzReport, path: Option<&Path>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "check        {}", report.check);
    let _ = writeln!(s, "seed         {}", report.seed);
    let _ = writeln!(s, "trials       {}", report.trials);
    let _ = writeln!(s, "field        {}", report.field);
    let _ = writeln!(s, "verdict      {}", report.verdict);
    let _ = writeln!(s, "violations   {}", report.violations);
    let _ = writeln!(s, "inconclusive {}", report.inconclusive);
    let _ = writeln!(s, "worst ratio  {}", sig17(report.worst_ratio));
    let _ = writeln!(s, "worst slack  {}", sig17(report.worst_slack));
    let _ = writeln!(s, "witness      trial {}", report.witness.trial);
    if let Some(path) = path {
        let _ = writeln!(s, "report       {}", path.display());
    }
    s
}

fn replay_file(path: &Path) -> Result<(), CliError> {
    let text = read(path)?;
    let witness: Witness = match FuzzReport::from_json_str(&text) {
        Ok(report) => report.witness,
        Err(_) => serde_json::from_str(&text)?,
    };
    let (lhs, rhs) = replay(&witness)?;
    let stored = witness.slack();
    let replayed = lhs / rhs;
    println!("lhs          {}", sig17(lhs));
    println!("rhs          {}", sig17(rhs));
    println!("stored slack {}", sig17(stored));
    println!("replayed     {}", sig17(replayed));
    let same = replayed == stored || (replayed - stored).abs() <= 1e-12 * stored.abs();
    if same {
        Ok(())
    } else {
        Err(usage(format!("replayed slack {replayed} differs from stored {stored}")))
    }
}

fn norm(cli: &Cli, input: &Path, p: &str, blocks: Option<&str>) -> Result<(), CliError> {
    let tensor = Tensor::from_json_str(&read(input)?)?;
    let exps = parse::numbers(p)?;
    let value = match blocks {
        Some(text) => {
            let part = OrderedPartition::new(OrderedPartition::parse_blocks(text)?, exps, tensor.order())?;
            block_mixed_norm(&tensor, &part)?
        }
        None => mixed_norm(&tensor, &ExponentVector::new(exps)?)?,
    };
    let text = match cli.format {
        Some(Format::Json) => to_json_string(&serde_json::json!({ "value": value }))? + "\n",
        _ => sig17(value) + "\n",
    };
    emit(cli, &text)
}

fn compare(cli: &Cli, n: &str, big_n: &str, q: &str, r: &str) -> Result<(), CliError> {
    let (ns, big_ns) = (parse::integers(n)?, parse::integers(big_n)?);
    let (qs, rs) = (parse::numbers(q)?, parse::numbers(r)?);
    let mut rows = Vec::new();
    for &n in &ns {
        for &big_n in big_ns.iter().filter(|&&b| b > n) {
            for &q in &qs {
                for &r in &rs {
                    rows.push(exponent_comparison(n, big_n, q, r)?);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(usage("no grid point with n < N"));
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => to_json_string(&rows)? + "\n",
        Format::Csv => {
            let mut s = String::from("n,N,q,r,k,l,old,new,verdict\n");
            for c in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    c.n,
                    c.big_n,
                    sig17(c.q),
                    sig17(c.r),
                    c.k,
                    c.l,
                    sig17(c.old),
                    sig17(c.new),
                    c.verdict
                );
            }
            s
        }
    };
    emit(cli, &text)
}

fn kappa(cli: &Cli, t: &str, m_max: usize) -> Result<(), CliError> {
    let ts = parse::numbers(t)?;
    let fields = cli.field.unwrap_or(FieldArg::Complex).fields();
    let mut rows = Vec::new();
    for &field in &fields {
        for &t in &ts {
            rows.push(asymptotic_envelope(t, field, m_max)?);
        }
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => to_json_string(&rows)? + "\n",
        Format::Csv => {
            let mut s = String::from(
                "t,field,m_max,exponent,kappa_est,argmax,kappa_at_last_decade_start,last_decade_increase\n",
            );
            for e in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    sig17(e.t),
                    e.field,
                    e.m_max,
                    sig17(e.exponent),
                    sig17(e.kappa_est),
                    e.argmax,
                    sig17(e.kappa_at_last_decade_start),
                    sig17(e.last_decade_increase)
                );
            }
            s
        }
    };
    emit(cli, &text)
}
