//! Command-line surface. `run` returns the exit status: 0 ok, 1 verification
//! failure, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::embed::{embed, embedding_csv, embedding_json};
use crate::generators::{count_formula, enumerate_minimal_set, type_counts};
use crate::identities::Mode;
use crate::mat3::{rep_from_json, AnyRep};
use crate::reducer::{reduce_word_to_basis, reduce_word_to_minimal, ReduceError};
use crate::relmat::{build_relation_matrix, exact_rank, Family};
use crate::verify::{basis_set, round_trip, run_suite};
use crate::word::parse_word;

pub const DEFAULT_SEED: u64 = 7;

/// Seed used when none is given: SL3_SEED if set, else the fixed default.
pub fn default_seed() -> u64 {
    std::env::var("SL3_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Parser)]
#[command(name = "sl3", about = "Trace coordinates of SL(3) representations of free groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Ranks,
    Reduction,
    Embedding,
    Counts,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Five5,
    Six5,
    Six6,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// N_r and the per-type table
    Count {
        #[arg(long)]
        r: u64,
    },
    /// The ordered minimal generating set W_r
    Generators {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Embedding coordinates of a representation file (or every .json file in a directory)
    Embed {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Reduce the trace of a word
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        r: usize,
        #[arg(long, conflicts_with = "minimal")]
        basis: bool,
        #[arg(long)]
        minimal: bool,
        /// trials=K seed=S
        #[arg(long, num_args = 0..=2, value_name = "KEY=VALUE")]
        check: Option<Vec<String>>,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact rank of a relation matrix
    Rank {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_name = "PATH")]
        dump_matrix: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Parse argv (program name first) and run. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Count { r } => count(r, out),
        Command::Generators { r, json } => generators(r, json, out),
        Command::Embed { rep, json, csv } => embed_cmd(&rep, json, csv, out),
        Command::Reduce {
            word,
            r,
            basis,
            minimal: _,
            check,
        } => reduce(&word, r, basis, check, out),
        Command::Verify {
            suite,
            mode,
            trials,
            seed,
        } => verify(suite, mode, trials, seed.unwrap_or_else(default_seed), out),
        Command::Rank {
            family,
            dump_matrix,
        } => rank(family, dump_matrix.as_deref(), out),
    }
}

fn count(r: u64, out: &mut dyn Write) -> Outcome {
    if r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    writeln!(out, "{}", count_formula(r))?;
    for row in type_counts(r).rows {
        writeln!(
            out,
            "{:<12} x{:<2} C({r},{}) = {}",
            row.pattern, row.multiplier, row.letters, row.count
        )?;
    }
    Ok(true)
}

fn generators(r: usize, as_json: bool, out: &mut dyn Write) -> Outcome {
    if r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    let gens = enumerate_minimal_set(r)?;
    if as_json {
        let items: Vec<_> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| json!({"index": i + 1, "type": g.ty.pattern(), "key": g.key.to_string(), "units": g.key.units()}))
            .collect();
        writeln!(out, "{}", json!({"r": r, "count": gens.len(), "generators": items}))?;
    } else {
        for (i, g) in gens.iter().enumerate() {
            writeln!(out, "{:>5} {:<12} {}", i + 1, g.ty.pattern(), g.key)?;
        }
    }
    Ok(true)
}

fn read_rep(path: &Path) -> Result<AnyRep, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    rep_from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn embed_one(path: &Path, as_json: bool, csv: bool, out: &mut dyn Write) -> Outcome {
    let rep = read_rep(path)?;
    if as_json {
        let mut v = embedding_json(&rep)?;
        v["source"] = json!(path.display().to_string());
        writeln!(out, "{v}")?;
    } else if csv {
        for line in embedding_csv(&rep)? {
            writeln!(out, "{line}")?;
        }
    } else {
        match &rep {
            AnyRep::Exact(r) => {
                for (g, v) in embed(r)?.coordinates {
                    writeln!(out, "{} = {v}", g.key)?;
                }
            }
            AnyRep::Numeric(r) => {
                for (g, v) in embed(r)?.coordinates {
                    writeln!(out, "{} = {}", g.key, v)?;
                }
            }
        }
    }
    Ok(true)
}

fn embed_cmd(path: &Path, as_json: bool, csv: bool, out: &mut dyn Write) -> Outcome {
    if !path.is_dir() {
        return embed_one(path, as_json, csv, out);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    for f in files {
        if !as_json {
            writeln!(out, "# {}", f.display())?;
        }
        embed_one(&f, as_json, csv, out)?;
    }
    Ok(true)
}

fn parse_check(args: &[String]) -> Result<(usize, u64), Failure> {
    let (mut trials, mut seed) = (10, default_seed());
    for a in args {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--check expects KEY=VALUE, got {a:?}")))?;
        let bad = || Failure::Usage(format!("bad value in {a:?}"));
        match k {
            "trials" => trials = v.parse().map_err(|_| bad())?,
            "seed" => seed = v.parse().map_err(|_| bad())?,
            _ => return Err(Failure::Usage(format!("unknown --check key {k:?}"))),
        }
    }
    if trials == 0 {
        return Err(Failure::Usage("trials must be at least 1".into()));
    }
    Ok((trials, seed))
}

fn reduce(
    text: &str,
    r: usize,
    basis: bool,
    check: Option<Vec<String>>,
    out: &mut dyn Write,
) -> Outcome {
    let w = parse_word(text).map_err(|e| Failure::Usage(e.to_string()))?;
    if r == 0 || w.max_index() as usize > r {
        return Err(Failure::Usage(format!("word {w} needs r ≥ {}", w.max_index().max(1))));
    }
    let usage = |e: ReduceError| match e {
        ReduceError::IndexOutOfRange { .. } => Failure::Usage(e.to_string()),
        e => Failure::Failed(e.to_string()),
    };
    let p = if basis {
        reduce_word_to_basis(&w).map_err(usage)?
    } else {
        reduce_word_to_minimal(&w, r).map_err(usage)?
    };
    writeln!(out, "{p}")?;
    let Some(args) = check else {
        return Ok(true);
    };
    let (trials, seed) = parse_check(&args)?;
    if basis {
        let rep_ok = (0..trials).try_fold(true, |ok, i| -> Result<bool, Failure> {
            let rep = crate::mat3::random_exact_rep(crate::identities::trial_seed(seed, i), r);
            Ok(ok && p.evaluate(&rep)? == crate::mat3::trace_of_word(&rep, &w)?)
        })?;
        writeln!(out, "check: {} exact trials, {}", trials, if rep_ok { "pass" } else { "FAIL" })?;
        return Ok(rep_ok);
    }
    let t = round_trip(&w, r, trials, seed, Mode::Exact, &basis_set(r)?)?;
    writeln!(
        out,
        "check: {trials} exact trials, symbols in W_{r}: {}, {}",
        t.symbols_in_basis,
        if t.passed { "pass" } else { "FAIL" }
    )?;
    Ok(t.passed)
}

fn verify(suite: SuiteArg, mode: ModeArg, trials: usize, seed: u64, out: &mut dyn Write) -> Outcome {
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let name = suite
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Numeric => Mode::Numeric,
    };
    let checks = run_suite(&name, mode, trials, seed)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        writeln!(out, "{}", c.line())?;
    }
    writeln!(
        out,
        "{} checks, {} failed (suite={name} seed={seed})",
        checks.len(),
        failed
    )?;
    Ok(failed == 0)
}

fn rank(family: FamilyArg, dump: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let f = match family {
        FamilyArg::Five5 => Family::FiveInFive,
        FamilyArg::Six5 => Family::SixInFive,
        FamilyArg::Six6 => Family::SixInSix,
    };
    let m = build_relation_matrix(f)?;
    writeln!(out, "{}", exact_rank(&m))?;
    if let Some(p) = dump {
        let file = std::fs::File::create(p)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        m.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(true)
}
