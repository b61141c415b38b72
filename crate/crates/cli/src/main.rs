use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mhfa::constructions::{build_l2_acceptor, build_ln_acceptor, build_lnm_acceptor, build_valc_acceptor};
use mhfa::machine::{is_deterministic, is_one_way};
use mhfa::pcfa::{compile_pcfa_to_mhfa, is_deterministic_system, pcfa_step, PcfaConfiguration, PcfaSystem};
use mhfa::semantics::run_deterministic;
use mhfa::semilinear::{compare_semilinear, parikh_image, SemilinearVerdict};
use mhfa::text::{parse_machine_file, parse_semilinear, parse_tm, render_mhfa, MachineFile};
use mhfa::variants::{check_data_independent, determinize_oblivious, validate_partially_blind, DataIndependence};
use mhfa::{Acceptor, Equivalence, MultiHeadAutomaton, ParikhVector, Semilinear, Sym};

#[derive(Parser)]
#[command(name = "mhfa", version, about = "Multi-head finite automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a machine accepts one word.
    Run {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Print one line per configuration (deterministic machines only).
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
    },
    /// List accepted words in length-lexicographic order.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare two machines on all words up to a length.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Test a structural or behavioural property.
    Check {
        file: PathBuf,
        #[arg(long)]
        property: Property,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// One-based head index for `partially-blind`.
        #[arg(long)]
        designated_head: Option<usize>,
    },
    /// Translate a machine into a multi-head automaton.
    Compile {
        #[arg(long)]
        from: Source,
        #[arg(long)]
        to: Target,
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Power-set construction for an oblivious machine.
    Determinize {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write one of the built-in witness machines.
    Witness {
        #[command(subcommand)]
        which: Witness,
    },
    /// Parikh image of the accepted words up to a length.
    Parikh {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        semilinear: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Witness {
    /// Acceptor for w1$...$w2n with wi = w(2n+1-i), n = k(k-1)/2.
    Ln {
        #[arg(long)]
        heads: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Acceptor for a b a^2 b ... a^n b.
    L2 {
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Ln over paired tracks whose lower tracks are valid computations.
    Lnm {
        #[arg(long)]
        heads: usize,
        #[arg(long)]
        tm: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Deterministic,
    OneWay,
    DataIndependent,
    PartiallyBlind,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Tm,
    Pcfa,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    ValcAcceptor,
    Mhfa,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] mhfa::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: mhfa::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let lib = match self {
            CliError::Io { .. } => return 2,
            CliError::Lib(e) | CliError::File { source: e, .. } => e,
        };
        match lib {
            mhfa::Error::Usage(_) | mhfa::Error::Parse { .. } => 2,
            mhfa::Error::Validation(_) | mhfa::Error::Conformance(_) | mhfa::Error::Obliviousness(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Outcome of a command: exit 0 for accept/equal/yes, 1 otherwise.
#[derive(Clone, Copy)]
enum Verdict {
    Yes,
    No,
}

impl Verdict {
    fn of(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load(path: &Path) -> Result<MachineFile> {
    parse_machine_file(&read(path)?).map_err(|source| CliError::File { path: path.to_owned(), source })
}

fn load_acceptor(path: &Path) -> Result<Box<dyn Acceptor>> {
    match load(path)? {
        MachineFile::Mhfa(m) => Ok(Box::new(m)),
        MachineFile::Pcfa(s) => Ok(Box::new(s)),
        MachineFile::Tm(_) => Err(mhfa::Error::usage(format!("{}: tm files are only accepted by compile", path.display())).into()),
    }
}

fn load_mhfa(path: &Path) -> Result<MultiHeadAutomaton> {
    match load(path)? {
        MachineFile::Mhfa(m) => Ok(m),
        other => Err(mhfa::Error::usage(format!("{}: expected an mhfa file, found {}", path.display(), other.kind())).into()),
    }
}

fn save(path: &Path, m: &MultiHeadAutomaton) -> Result<Verdict> {
    write(path, &render_mhfa(m))?;
    println!("{}: {} states, {} transitions", m.name(), m.state_count(), m.transition_count());
    Ok(Verdict::Yes)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn trace_mhfa(m: &MultiHeadAutomaton, word: &[Sym], max_steps: usize) -> Result<()> {
    let run = run_deterministic(m, word, max_steps)?;
    for (t, c) in run.configurations.iter().enumerate() {
        println!("t={t} state={} heads={}", m.state_name(c.state), join(&c.positions));
    }
    Ok(())
}

fn trace_pcfa(sys: &PcfaSystem, word: &[Sym], max_steps: usize) -> Result<()> {
    let mut c = PcfaConfiguration::initial(sys);
    let mut seen = HashSet::new();
    for t in 0..=max_steps {
        let names: Vec<&str> = c.states.iter().map(|&s| sys.state_name(s)).collect();
        println!("t={t} state=({}) heads={}", names.join(","), join(&c.positions));
        if !seen.insert(c.clone()) {
            break;
        }
        match pcfa_step(sys, word, &c)?.pop() {
            Some(next) => c = next,
            None => break,
        }
    }
    Ok(())
}

fn run(file: &Path, input: &str, trace: bool, max_steps: usize) -> Result<Verdict> {
    let machine = load(file)?;
    let accepted = match &machine {
        MachineFile::Mhfa(m) => {
            let word = m.alphabet().parse_word(input)?;
            if trace && is_deterministic(m) {
                trace_mhfa(m, &word, max_steps)?;
            } else if trace {
                eprintln!("note: no trace for a nondeterministic machine");
            }
            m.accepts(&word)?
        }
        MachineFile::Pcfa(s) => {
            let word = s.alphabet().parse_word(input)?;
            if trace && is_deterministic_system(s) {
                trace_pcfa(s, &word, max_steps)?;
            } else if trace {
                eprintln!("note: no trace for a nondeterministic system");
            }
            s.accepts(&word)?
        }
        MachineFile::Tm(_) => return Err(mhfa::Error::usage("tm files are only accepted by compile").into()),
    };
    println!("{}", if accepted { "accept" } else { "reject" });
    Ok(Verdict::of(accepted))
}

fn enumerate(file: &Path, max_len: usize) -> Result<Verdict> {
    let m = load_acceptor(file)?;
    for w in m.enumerate(max_len)? {
        println!("{}", m.alphabet().render_word(&w));
    }
    Ok(Verdict::Yes)
}

fn compare(left: &Path, right: &Path, max_len: usize) -> Result<Verdict> {
    let (a, b) = (load_acceptor(left)?, load_acceptor(right)?);
    match mhfa::equivalent_up_to(a.as_ref(), b.as_ref(), max_len)? {
        Equivalence::Equal => {
            println!("equal");
            Ok(Verdict::Yes)
        }
        Equivalence::Counterexample(w) => {
            println!("{}", a.alphabet().render_word(&w));
            Ok(Verdict::No)
        }
    }
}

fn check(file: &Path, property: Property, max_len: usize, max_steps: usize, designated: Option<usize>) -> Result<Verdict> {
    let machine = load(file)?;
    let verdict = match (property, &machine) {
        (Property::Deterministic, MachineFile::Mhfa(m)) => Verdict::of(is_deterministic(m)),
        (Property::Deterministic, MachineFile::Pcfa(s)) => Verdict::of(is_deterministic_system(s)),
        (Property::OneWay, MachineFile::Mhfa(m)) => Verdict::of(is_one_way(m)),
        // Components only ever read forward.
        (Property::OneWay, MachineFile::Pcfa(_)) => Verdict::Yes,
        (Property::DataIndependent, MachineFile::Mhfa(m)) => match check_data_independent(m, max_len, max_steps)? {
            DataIndependence::Independent(_) => Verdict::Yes,
            DataIndependence::Violation(w) => {
                let ab = m.alphabet();
                println!(
                    "violation: head {} at time {} is at {} on {:?} and at {} on {:?}",
                    w.head + 1,
                    w.time,
                    w.first_position,
                    ab.render_word(&w.first),
                    w.second_position,
                    ab.render_word(&w.second)
                );
                Verdict::No
            }
        },
        (Property::PartiallyBlind, MachineFile::Mhfa(m)) => {
            let h = designated.ok_or_else(|| mhfa::Error::usage("partially-blind needs --designated-head"))?;
            if h == 0 || h > m.heads() {
                return Err(mhfa::Error::usage(format!("designated head {h} outside 1..={}", m.heads())).into());
            }
            Verdict::of(validate_partially_blind(m, h - 1))
        }
        (_, other) => {
            return Err(mhfa::Error::usage(format!("property not available for {} files", other.kind())).into());
        }
    };
    println!("{}", if matches!(verdict, Verdict::Yes) { "yes" } else { "no" });
    Ok(verdict)
}

fn compile(from: Source, to: Target, file: &Path, output: &Path) -> Result<Verdict> {
    let machine = load(file)?;
    let m = match (from, to, machine) {
        (Source::Tm, Target::ValcAcceptor, MachineFile::Tm(tm)) => build_valc_acceptor(&tm)?,
        (Source::Pcfa, Target::Mhfa, MachineFile::Pcfa(sys)) => compile_pcfa_to_mhfa(&sys)?,
        (Source::Tm, Target::ValcAcceptor, _) | (Source::Pcfa, Target::Mhfa, _) => {
            return Err(mhfa::Error::usage("the file kind does not match --from").into());
        }
        _ => return Err(mhfa::Error::usage("supported: --from tm --to valc-acceptor, --from pcfa --to mhfa").into()),
    };
    save(output, &m)
}

fn witness(which: &Witness) -> Result<Verdict> {
    match which {
        Witness::Ln { heads, output } => save(output, &build_ln_acceptor(*heads)?),
        Witness::L2 { output } => save(output, &build_l2_acceptor()?),
        Witness::Lnm { heads, tm, output } => {
            let tm = parse_tm(&read(tm)?).map_err(|source| CliError::File { path: tm.clone(), source })?;
            save(output, &build_lnm_acceptor(*heads, &tm)?)
        }
    }
}

fn parikh(file: &Path, max_len: usize, set: Option<&Path>) -> Result<Verdict> {
    let m = load_acceptor(file)?;
    let Some(path) = set else {
        let image = parikh_image::<u64, _>(m.as_ref(), max_len)?;
        for v in image {
            println!("{v}");
        }
        return Ok(Verdict::Yes);
    };
    let s: Semilinear = parse_semilinear(&read(path)?).map_err(|source| CliError::File { path: path.to_owned(), source })?;
    let report = |tag: &str, v: ParikhVector| {
        println!("{tag} {v}");
        Verdict::No
    };
    Ok(match compare_semilinear(m.as_ref(), &s, max_len)? {
        SemilinearVerdict::Consistent => {
            println!("consistent");
            Verdict::Yes
        }
        SemilinearVerdict::NotInSet(v) => report("not-in-set", v),
        SemilinearVerdict::NotRealized(v) => report("not-realized", v),
    })
}

fn dispatch(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Run { file, input, trace, max_steps } => run(&file, &input, trace, max_steps),
        Command::Enumerate { file, max_len } => enumerate(&file, max_len),
        Command::Compare { left, right, max_len } => compare(&left, &right, max_len),
        Command::Check { file, property, max_len, max_steps, designated_head } => {
            check(&file, property, max_len, max_steps, designated_head)
        }
        Command::Compile { from, to, file, output } => compile(from, to, &file, &output),
        Command::Determinize { file, max_len, output } => save(&output, &determinize_oblivious(&load_mhfa(&file)?, max_len)?),
        Command::Witness { which } => witness(&which),
        Command::Parikh { file, max_len, semilinear } => parikh(&file, max_len, semilinear.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
