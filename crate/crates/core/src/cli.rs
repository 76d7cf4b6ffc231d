// SPDX-License-Identifier: Apache-2.0

//! The `spk-ldd` command line.
//!
//! Exit status: 0 success, 1 invalid strings found by `validate`, 2 bad
//! input (grammar, flags, recipe), 3 empty language or corpus too short,
//! 4 I/O, 70 acceptor/oracle disagreement. Diagnostics go to stderr; stdout
//! carries only summaries and CSV.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::automaton::{PiecewiseDfa, DEFAULT_STATE_CAP};
use crate::corpus::{dataset_lines, Corpus};
use crate::error::{Error, Result};
use crate::generator::{split_dataset, Generator, LengthPlan};
use crate::grammar::{oracle_is_valid, SpkGrammar};
use crate::profiler::{ldd_profile, Estimator};
use crate::recipe::{run_recipe, write_outputs, ExperimentRecipe, BUNDLED_RECIPES};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_DISAGREEMENT: u8 = 70;

#[derive(Debug, Parser)]
#[command(name = "spk-ldd", version, about = "SPk datasets and LDD profiles")]
pub struct Cli {
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, env = "SPK_LDD_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a dataset of valid strings.
    Generate(GenerateArgs),
    /// Write the mutual-information curve of a corpus as CSV.
    Profile(ProfileArgs),
    /// Check every string of a dataset against a grammar.
    Validate(ValidateArgs),
    /// Run a recipe: one profile CSV per curve plus a manifest.
    Experiment(ExperimentArgs),
    /// Print the compiled acceptor's transition table.
    DumpDfa(DumpDfaArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("size").required(true).args(["count", "target_symbols"])))]
pub struct GenerateArgs {
    #[arg(long)]
    pub grammar: PathBuf,
    #[arg(long)]
    pub min_len: usize,
    #[arg(long)]
    pub max_len: usize,
    /// Number of strings.
    #[arg(long)]
    pub count: Option<usize>,
    /// Smallest count whose total length reaches this many symbols.
    #[arg(long)]
    pub target_symbols: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "SPK_LDD_OUT", default_value = ".")]
    pub out: PathBuf,
    /// File stem; writes `<name>.txt` and, with `--split`, `<name>.<split>.txt`.
    #[arg(long, default_value = "corpus")]
    pub name: String,
    /// Train, valid and test fractions, e.g. `0.8,0.1,0.1`.
    #[arg(long, value_parser = parse_split)]
    pub split: Option<[f64; 3]>,
    /// Omit the `#` header lines.
    #[arg(long)]
    pub bare: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to four times the maximum string length recorded in a
    /// dataset header.
    #[arg(long)]
    pub max_distance: Option<usize>,
    #[arg(long, value_enum, default_value_t = Estimator::Grassberger)]
    pub estimator: Estimator,
    /// Joins dataset strings with this symbol.
    #[arg(long)]
    pub separator: Option<char>,
    /// Treat the file as one symbol stream: every character, newlines
    /// included, is a symbol and `#` lines are not skipped.
    #[arg(long, conflicts_with = "separator")]
    pub raw: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Raise values below this floor (default 1e-6 bits) to it, for
    /// log-scale plots.
    #[arg(long, num_args = 0..=1, default_missing_value = "1e-6")]
    pub log_floor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub grammar: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Recipe file, or the name of a bundled recipe.
    #[arg(long, required_unless_present = "list")]
    pub recipe: Option<String>,
    /// Output directory; defaults to the recipe's `out_dir`, else `results/<name>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// List the bundled recipes.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct DumpDfaArgs {
    #[arg(long)]
    pub grammar: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

fn parse_split(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err("expected three comma-separated fractions".into());
    };
    let f = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok([f(a)?, f(b)?, f(c)?])
}

/// Parses arguments and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidPlan(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Profile(a) => cmd_profile(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::DumpDfa(a) => cmd_dump_dfa(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_grammar(path: &Path) -> Result<SpkGrammar> {
    read(path)?.parse()
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<u8> {
    let g = read_grammar(&a.grammar)?;
    if a.name.is_empty() || a.name.contains(['/', '\\']) {
        return Err(Error::InvalidPlan(format!("bad output name {:?}", a.name)));
    }
    let plan = match (a.count, a.target_symbols) {
        (Some(n), _) => LengthPlan::new(a.min_len, a.max_len, n)?,
        (None, Some(n)) => LengthPlan::with_target_symbols(a.min_len, a.max_len, n)?,
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let generator = Generator::new(&g, plan.max_len(), a.state_cap)?;
    let dataset = generator.generate(&plan, a.seed)?;
    let render = |d: &crate::generator::Dataset| {
        if a.bare {
            d.to_text()
                .lines()
                .filter(|l| !l.starts_with('#'))
                .flat_map(|l| [l, "\n"])
                .collect::<String>()
        } else {
            d.to_text()
        }
    };
    let mut files = vec![(format!("{}.txt", a.name), render(&dataset))];
    if let Some(fractions) = a.split {
        let (train, valid, test) = split_dataset(&dataset, fractions)?;
        for part in [&train, &valid, &test] {
            let split = part.split().expect("split datasets carry their split");
            files.push((format!("{}.{}.txt", a.name, split.name()), render(part)));
        }
    }
    write_outputs(&a.out, &files)?;
    print_stdout(&format!(
        "strings={} symbols={} fingerprint={}\n",
        dataset.len(),
        dataset.symbol_count(),
        dataset.fingerprint()
    ))?;
    Ok(0)
}

/// `max` from a `# plan: min=.. max=.. count=..` header line.
fn plan_max_len(text: &str) -> Option<usize> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.strip_prefix("# plan:"))
        .flat_map(str::split_whitespace)
        .find_map(|kv| kv.strip_prefix("max=")?.parse().ok())
}

pub fn cmd_profile(a: &ProfileArgs) -> Result<u8> {
    let text = read(&a.input)?;
    let corpus = if a.raw {
        Corpus::from_text(&text)?
    } else {
        Corpus::from_dataset_text(&text, a.separator)?
    };
    if corpus.len() < 2 {
        return Err(Error::CorpusTooShort(corpus.len()));
    }
    let max_distance = match a.max_distance.or_else(|| plan_max_len(&text).map(|m| 4 * m)) {
        Some(d) => d,
        None => {
            return Err(Error::InvalidPlan(
                "--max-distance is required when the input has no plan header".into(),
            ))
        }
    };
    let profile = ldd_profile(&corpus, max_distance, a.estimator)?;
    let csv = match a.log_floor {
        Some(floor) => profile.to_plot_csv(floor),
        None => profile.to_csv(),
    };
    match &a.output {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(path, csv).map_err(|e| Error::io(path, e))?;
        }
        None => print_stdout(&csv)?,
    }
    eprintln!(
        "profiled {} symbols, {} categories, D=1..={max_distance}, {}",
        corpus.len(),
        corpus.categories(),
        a.estimator
    );
    Ok(0)
}

pub fn cmd_validate(a: &ValidateArgs) -> Result<u8> {
    let g = read_grammar(&a.grammar)?;
    let dfa = PiecewiseDfa::compile(&g, a.state_cap)?;
    let text = read(&a.input)?;
    let (mut lines, mut invalid, mut disagreements) = (0usize, 0usize, 0usize);
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with('#') {
            continue;
        }
        lines += 1;
        let lineno = i + 1;
        let encoded = match g.alphabet().encode(line) {
            Ok(w) => w,
            Err(e) => {
                invalid += 1;
                eprintln!("line {lineno}: invalid: {e}");
                continue;
            }
        };
        let by_dfa = dfa.accepts(&encoded)?;
        let by_oracle = oracle_is_valid(&g, &encoded)?;
        if by_dfa != by_oracle {
            disagreements += 1;
            eprintln!("line {lineno}: acceptor says {by_dfa}, oracle says {by_oracle}: {line}");
        } else if !by_dfa {
            invalid += 1;
            eprintln!("line {lineno}: invalid: {line}");
        }
    }
    debug_assert_eq!(lines, dataset_lines(&text).count());
    if lines == 0 {
        eprintln!("warning: {} contains no strings", a.input.display());
    }
    print_stdout(&format!(
        "strings={lines} invalid={invalid} disagreements={disagreements}\n"
    ))?;
    Ok(if disagreements > 0 {
        EXIT_DISAGREEMENT
    } else if invalid > 0 {
        EXIT_INVALID
    } else {
        0
    })
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<u8> {
    if a.list {
        let mut out = String::new();
        for (name, _) in BUNDLED_RECIPES {
            out.push_str(name);
            out.push('\n');
        }
        print_stdout(&out)?;
        return Ok(0);
    }
    let spec = a.recipe.as_deref().expect("clap requires --recipe without --list");
    let recipe = ExperimentRecipe::resolve(spec)?;
    let out_dir = a
        .out
        .clone()
        .or_else(|| recipe.out_dir.clone())
        .unwrap_or_else(|| Path::new("results").join(&recipe.name));
    let output = run_recipe(&recipe)?;
    write_outputs(&out_dir, &output.files)?;
    let mut summary = String::new();
    for c in &output.curves {
        summary.push_str(&format!(
            "{} strings={} symbols={} max_distance={} file={}\n",
            c.label,
            c.strings,
            c.symbols,
            c.profile.max_distance(),
            out_dir.join(format!("{}.csv", c.label)).display()
        ));
    }
    print_stdout(&summary)?;
    Ok(0)
}

pub fn cmd_dump_dfa(a: &DumpDfaArgs) -> Result<u8> {
    let g = read_grammar(&a.grammar)?;
    let dfa = PiecewiseDfa::compile(&g, a.state_cap)?;
    eprintln!("{} states, dead state {}", dfa.state_count(), dfa.dead_state());
    print_stdout(&dfa.dump())?;
    Ok(0)
}
