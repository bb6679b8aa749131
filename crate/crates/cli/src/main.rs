//! Command-line surface for the conjugacy library: classify a
//! transformation's digraph, decide conjugacy of a pair within a family,
//! run class censuses, analyze abstract Cayley tables, and export DOT.
//!
//! Exit codes: 0 success (and "conjugate" for `conj`), 1 not conjugate,
//! 2 malformed input or out-of-range request.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use semiconj::{
    census, conj_oracle, conj_p_finite, conj_sym_finite, conj_t_finite, decompose, invariant,
    to_dot, CensusMode, ComponentKind, ConjugacyVerdict, FiniteSemigroup,
    PartialTransformation, RelationKind, SemigroupFamily,
};

#[derive(Parser)]
#[command(name = "semiconj", version, about = "Conjugacy in finite transformation semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a transformation: components, their kinds, and the
    /// conjugacy invariant.
    Classify {
        /// JSON file holding {"n": .., "image": [..]}, null = undefined
        file: PathBuf,
    },
    /// Decide whether two transformations are conjugate within a family.
    Conj {
        /// JSON file for the first transformation
        a: PathBuf,
        /// JSON file for the second transformation
        b: PathBuf,
        /// Family the pair lives in
        #[arg(long)]
        family: FamilyArg,
        /// Include conjugating witnesses in the verdict
        #[arg(long)]
        witness: bool,
    },
    /// Census of conjugacy classes over a whole family.
    Census {
        #[arg(long)]
        family: FamilyArg,
        /// Ground set size
        #[arg(long)]
        n: usize,
        /// invariant: group by the class invariant; bruteforce: decide
        /// pairwise; both: run the two and cross-check
        #[arg(long, default_value = "invariant")]
        mode: ModeArg,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze an abstract semigroup given by its Cayley table.
    Abstract {
        /// Table file: plain text (optional zero=Z header, order, rows)
        /// or JSON {"m": .., "table": [[..]], "zero": ..}
        table: PathBuf,
        /// Which relation to compute
        #[arg(long)]
        relation: RelationArg,
        /// Print the partition into classes (equivalences only)
        #[arg(long)]
        classes: bool,
        /// Run the structural cross-checks and print the report
        #[arg(long)]
        check_axioms: bool,
    },
    /// Print the functional digraph of a transformation as DOT.
    Dot {
        /// JSON file holding the transformation
        file: PathBuf,
        /// Also emit vertices outside the span
        #[arg(long)]
        show_isolated: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// All partial transformations
    P,
    /// Full transformations
    T,
    /// Injective partial transformations
    I,
    /// Permutations
    Sym,
}

impl From<FamilyArg> for SemigroupFamily {
    fn from(arg: FamilyArg) -> Self {
        match arg {
            FamilyArg::P => SemigroupFamily::PX,
            FamilyArg::T => SemigroupFamily::TX,
            FamilyArg::I => SemigroupFamily::IX,
            FamilyArg::Sym => SemigroupFamily::SymX,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Invariant,
    Bruteforce,
    Both,
}

impl From<ModeArg> for CensusMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Invariant => CensusMode::Invariant,
            ModeArg::Bruteforce => CensusMode::Bruteforce,
            ModeArg::Both => CensusMode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationArg {
    L,
    O,
    P,
    Pstar,
    C,
}

impl From<RelationArg> for RelationKind {
    fn from(arg: RelationArg) -> Self {
        match arg {
            RelationArg::L => RelationKind::L,
            RelationArg::O => RelationKind::O,
            RelationArg::P => RelationKind::P,
            RelationArg::Pstar => RelationKind::PStar,
            RelationArg::C => RelationKind::C,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Classify { file } => {
            print!("{}", describe(&read_transformation(&file)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Conj { a, b, family, witness } => {
            let a = read_transformation(&a)?;
            let b = read_transformation(&b)?;
            let family = SemigroupFamily::from(family);
            let mut verdict = decide(&a, &b, family, witness).map_err(|e| e.to_string())?;
            if !witness {
                verdict.witness_forward = None;
                verdict.witness_backward = None;
            }
            let json =
                serde_json::to_string_pretty(&verdict).map_err(|e| e.to_string())?;
            println!("{json}");
            Ok(if verdict.conjugate { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Census { family, n, mode, out } => {
            let report = census(family.into(), n, mode.into()).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            match out {
                Some(path) => std::fs::write(&path, json.as_bytes())
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Abstract { table, relation, classes, check_axioms } => {
            let s = read_semigroup(&table)?;
            match s.zero() {
                Some(z) => println!("order {}, zero = {z}", s.order()),
                None => println!("order {}, zero free", s.order()),
            }
            let kind = RelationKind::from(relation);
            let rel = s.relation(kind);
            let pairs = (0..s.order())
                .flat_map(|a| (0..s.order()).map(move |b| (a, b)))
                .filter(|&(a, b)| rel.contains(a, b))
                .count();
            println!("relation {kind}: {pairs} related pairs");
            if classes {
                let partition = s.classes(kind).map_err(|e| e.to_string())?;
                println!("classes ({}):", partition.len());
                for class in partition {
                    println!("  {}", fmt_set(class.iter().copied()));
                }
            }
            if check_axioms {
                print!("{}", s.check_axioms());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { file, show_isolated } => {
            print!("{}", to_dot(&read_transformation(&file)?, show_isolated));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn decide(
    a: &PartialTransformation,
    b: &PartialTransformation,
    family: SemigroupFamily,
    witness: bool,
) -> Result<ConjugacyVerdict, semiconj::ConjugacyError> {
    match family {
        SemigroupFamily::PX => conj_p_finite(a, b, witness),
        SemigroupFamily::TX => conj_t_finite(a, b, witness),
        SemigroupFamily::SymX => conj_sym_finite(a, b, witness),
        SemigroupFamily::IX => conj_oracle(a, b, family),
    }
}

fn read_transformation(path: &Path) -> Result<PartialTransformation, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_semigroup(path: &Path) -> Result<FiniteSemigroup, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if path.extension().is_some_and(|ext| ext == "json") {
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    } else {
        FiniteSemigroup::parse_text(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn describe(alpha: &PartialTransformation) -> String {
    let mut out = String::new();
    let span = alpha.span();
    let isolated: BTreeSet<usize> = (0..alpha.n()).filter(|x| !span.contains(x)).collect();
    let _ = writeln!(out, "n = {}", alpha.n());
    let _ = writeln!(out, "map = {alpha}");
    let _ = writeln!(out, "span = {}", fmt_set(span.iter().copied()));
    let _ = writeln!(out, "isolated = {}", fmt_set(isolated.iter().copied()));
    for c in decompose(alpha) {
        let vertices = fmt_set(c.vertices().iter().copied());
        match c.kind() {
            ComponentKind::Cycle { length } => {
                let _ = writeln!(out, "component {vertices}: cycle of length {length}");
            }
            ComponentKind::Cho { root, root_rank } => {
                let _ = writeln!(
                    out,
                    "component {vertices}: cho with root {root} of rank {root_rank}"
                );
            }
        }
    }
    let _ = writeln!(out, "invariant: {}", invariant(alpha));
    out
}

fn fmt_set(items: impl IntoIterator<Item = usize>) -> String {
    let mut out = String::from("{");
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x}");
    }
    out.push('}');
    out
}
