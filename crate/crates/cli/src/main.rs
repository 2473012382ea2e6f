//! `upcycle`: verify, build and analyze universal partial cycles.
//!
//! Exit codes: 0 success or valid verdict, 1 invalid or refused object,
//! 2 usage, parse or size-cap error.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use upcycle::construct::{
    alphabet_multiply, alphabet_multiply_default, alphabet_multiply_lex, MultiplierSpec,
};
use upcycle::graphview::{build_s, build_t, export_dot};
use upcycle::liftfold::{
    debruijn_lift, enumerate_debruijn_lifts, lift, try_fold, LiftSpec, LIFT_ENUMERATION_BOUND,
};
use upcycle::necklace::{
    euler_necklace, lex_necklace, reflect_expand, rotate_expand, stretch_necklace, Constraint,
    Necklace,
};
use upcycle::nonexist::{compute_d, curtain_audit, feasibility, feasibility_table, MAX_D_N};
use upcycle::pseudorand::{balance, balance_target, check_psd, check_r3, run_counts, FiniteField};
use upcycle::pword::{format_letters, infer_alphabet, parse_pword};
use upcycle::search::{
    cross_join_verified, find_cross_joins, search_upcycles, CrossJoin, SearchSpec,
};
use upcycle::verify::{verify_upcycle, verify_upword};
use upcycle::{AnyWord, Char, CycPWord, Error, PWord, Word};

const THREADS_ENV: &str = "UPCYCLE_THREADS";

#[derive(Parser)]
#[command(
    name = "upcycle",
    version,
    about = "Universal partial cycles, perfect necklaces and De Bruijn cycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check words (one per line) as upcycles or upwords.
    Verify(VerifyArgs),
    /// Balance, run counts, partial-subword distribution and R-3 report (TSV).
    Analyze(AnalyzeArgs),
    /// Build perfect necklaces.
    #[command(subcommand)]
    Necklace(NecklaceCmd),
    /// Alphabet multiplier: an (a·k, n, d) upcycle from an (a, n, d) one.
    Multiply(MultiplyArgs),
    /// Lift an upcycle by filling selected diamonds with a perfect necklace.
    Lift(LiftArgs),
    /// Fold a cycle by restoring diamonds at the given offsets.
    Fold(FoldArgs),
    /// Emit S(u) or T(u) as Graphviz DOT.
    Graph(GraphArgs),
    /// D(n): the least d for which every frame with d diamonds is curtained.
    Dn(DnArgs),
    /// Feasibility verdict for (a, n, d), or the table over a range of n.
    Feasible(FeasibleArgs),
    /// Backtracking search for upcycles.
    Search(SearchArgs),
    /// Cross-join a word at interleaved repeats, or list available cross-joins.
    Crossjoin(CrossjoinArgs),
}

/// Input file; `-` or absent reads standard input.
#[derive(Args)]
struct Input {
    file: Option<PathBuf>,
    /// Alphabet size; inferred from the largest letter when absent.
    #[arg(long)]
    a: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "linear")]
    cyclic: bool,
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    input: Input,
}

#[derive(Subcommand)]
enum NecklaceCmd {
    /// Euler tour of the astute graph G(a, n, t).
    Euler {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Start with t zeros.
        #[arg(long, conflicts_with = "contain")]
        zeros_prefix: bool,
        /// Contain this word of length n + 1.
        #[arg(long)]
        contain: Option<String>,
    },
    /// Words of A^n concatenated in lexicographic order.
    Lex {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        n: usize,
    },
    /// (a, n, nq + r)-necklace from an (a, n, n + r)-necklace file.
    Stretch {
        #[arg(long)]
        q: usize,
        file: Option<PathBuf>,
    },
    /// (a, n, n + r)-necklace from the rotations of a De Bruijn cycle.
    Rotate {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        input: Input,
    },
    /// (a, n, 2n - 1)-necklace from the reflections of a De Bruijn cycle.
    Reflect {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct MultiplyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    /// Filler necklace file (NECKLACE header); the Euler-tour filler is the default.
    #[arg(long, conflicts_with = "lex")]
    filler: Option<PathBuf>,
    /// Use the lexicographic filler.
    #[arg(long)]
    lex: bool,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    n: usize,
    /// Filler necklace file (NECKLACE header); needs --offsets.
    #[arg(long, requires = "offsets", conflicts_with = "enumerate")]
    necklace: Option<PathBuf>,
    /// Selected diamond offsets (residues mod n of 1-based positions).
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<usize>>,
    /// Every De Bruijn lift, one per rotation class.
    #[arg(long)]
    enumerate: bool,
    /// Cap on the number of candidate fillers tried by --enumerate.
    #[arg(long, default_value_t = LIFT_ENUMERATION_BOUND)]
    bound: u128,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct FoldArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    offsets: Vec<usize>,
    #[command(flatten)]
    input: Input,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    S,
    T,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct DnArgs {
    #[arg(long, default_value_t = 1)]
    min: usize,
    #[arg(long)]
    max: usize,
}

#[derive(Args)]
struct FeasibleArgs {
    #[arg(long, required_unless_present = "table")]
    a: Option<u32>,
    #[arg(long, required_unless_present = "table")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    d: Option<usize>,
    /// Table rows for LO ≤ n ≤ HI.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with_all = ["a", "n", "d"])]
    table: Option<Vec<usize>>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    a: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Diamond offsets (residues mod n of 1-based positions).
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<usize>>,
    /// Fixed prefix of the cycle.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    limit: Option<usize>,
    /// Worker threads; UPCYCLE_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CrossjoinArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, required_unless_present = "find", requires_all = ["y", "at"])]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// 1-based start positions ix,iy,jx,jy.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    at: Option<Vec<usize>>,
    /// List cross-joins of a cyclic word instead of applying one.
    #[arg(long, conflicts_with_all = ["x", "y", "at"])]
    find: bool,
    #[arg(long, default_value_t = 20)]
    limit: usize,
    #[command(flatten)]
    input: Input,
}

/// An object failed a check; exit code 1.
#[derive(Debug)]
struct Refused(String);

impl std::fmt::Display for Refused {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refused {}

fn refuse(msg: impl Into<String>) -> anyhow::Error {
    Refused(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Refused>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::NotUpcycle(_)
            | Error::NotDeBruijn(_)
            | Error::NotNecklace(_)
            | Error::NotPeriodic { .. }
            | Error::Divisibility(_)
            | Error::Precondition(_)
            | Error::Infeasible(_)
            | Error::NotBijective,
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = env_threads() {
        // search builds its own pool; this covers dn, analyze and lift
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let _ = out.flush();
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn env_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
}

fn read_text(file: Option<&PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

/// Non-blank lines that are not `#` comments.
fn word_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn alphabet_for(a: Option<u32>, text: &str) -> u32 {
    a.unwrap_or_else(|| infer_alphabet(text))
}

fn parse_cyclic(line: &str, a: u32) -> anyhow::Result<CycPWord> {
    match parse_pword(line, a, true)? {
        AnyWord::Cyclic(u) => Ok(u),
        AnyWord::Linear(_) => unreachable!("parsed as cyclic"),
    }
}

/// The single cyclic word of an input.
fn read_cyclic(input: &Input) -> anyhow::Result<CycPWord> {
    let text = read_text(input.file.as_ref())?;
    let lines = word_lines(&text);
    match lines.as_slice() {
        [line] => parse_cyclic(line, alphabet_for(input.a, line)),
        [] => Err(Error::EmptyInput.into()),
        _ => bail!("expected one word, found {}", lines.len()),
    }
}

/// The single cyclic word of an input, certified as an upcycle.
fn read_upcycle(input: &Input, n: usize) -> anyhow::Result<CycPWord> {
    let u = read_cyclic(input)?;
    let report = verify_upcycle(&u, n)?;
    if !report.valid {
        return Err(refuse(format!("input is not an upcycle: {report}")));
    }
    Ok(u)
}

fn read_necklace(path: &PathBuf) -> anyhow::Result<Necklace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    Ok(Necklace::parse(&body.join("\n"))?)
}

fn parse_chars(text: &str, a: u32) -> anyhow::Result<Vec<Char>> {
    Ok(parse_pword(text, a, false)?.chars().to_vec())
}

fn provenance(out: &mut impl Write, what: &str) -> io::Result<()> {
    writeln!(out, "# provenance: {what}")
}

fn run(command: Command, out: &mut impl Write) -> anyhow::Result<u8> {
    match command {
        Command::Verify(args) => verify(args, out),
        Command::Analyze(args) => analyze(args, out).map(|()| 0),
        Command::Necklace(cmd) => necklace(cmd, out).map(|()| 0),
        Command::Multiply(args) => multiply(args, out).map(|()| 0),
        Command::Lift(args) => lift_cmd(args, out).map(|()| 0),
        Command::Fold(args) => fold(args, out),
        Command::Graph(args) => graph(args, out).map(|()| 0),
        Command::Dn(args) => dn(args, out).map(|()| 0),
        Command::Feasible(args) => feasible(args, out).map(|()| 0),
        Command::Search(args) => search(args, out).map(|()| 0),
        Command::Crossjoin(args) => crossjoin(args, out).map(|()| 0),
    }
}

fn verify(args: VerifyArgs, out: &mut impl Write) -> anyhow::Result<u8> {
    let text = read_text(args.input.file.as_ref())?;
    if text.trim_start().starts_with("NECKLACE") {
        let neck_text: Vec<&str> = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect();
        return Ok(match Necklace::parse(&neck_text.join("\n")) {
            Ok(v) => {
                writeln!(out, "VALID necklace a={} n={} t={}", v.a, v.n, v.t)?;
                0
            }
            Err(e) => {
                writeln!(out, "INVALID necklace {e}")?;
                1
            }
        });
    }
    let lines = word_lines(&text);
    if lines.is_empty() {
        return Err(Error::EmptyInput.into());
    }
    let mut code = 0;
    for line in lines {
        let a = alphabet_for(args.input.a, line);
        let cyclic = args.cyclic || (!args.linear && line.starts_with('('));
        let report = if cyclic {
            verify_upcycle(&parse_cyclic(line, a)?, args.n)?
        } else {
            match parse_pword(line, a, false)? {
                AnyWord::Linear(w) => verify_upword(&w, args.n)?,
                AnyWord::Cyclic(_) => unreachable!("parsed as linear"),
            }
        };
        writeln!(out, "{report}")?;
        if !report.valid {
            code = 1;
        }
    }
    Ok(code)
}

fn analyze(args: AnalyzeArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let u = read_cyclic(&args.input)?;
    let n = args.n;
    let a = u.alphabet();
    let report = verify_upcycle(&u, n)?;
    writeln!(out, "section\tkey\tvalue")?;
    writeln!(out, "verify\t{n}\t{report}")?;

    let bal = balance(&u);
    for (l, c) in &bal.counts {
        writeln!(out, "balance\t{l}\t{c}")?;
    }
    let target = report
        .params
        .filter(|_| report.valid)
        .map(|p| balance_target(a, n, p.d));
    let target = target.map_or_else(|| "-".to_string(), |t| t.to_string());
    writeln!(out, "balance\tbalanced\t{}\ttarget={target}", bal.balanced)?;

    let runs = run_counts(&u, n)?;
    for ((l, r), e) in &runs.entries {
        writeln!(out, "run\t{l}^{r}\t{e}")?;
    }
    writeln!(out, "run\tholds\t{}", runs.holds)?;

    if report.valid {
        let psd = check_psd(&u, n)?;
        match psd.counterexample {
            None => writeln!(out, "psd\tholds\ttrue")?,
            Some(c) => writeln!(
                out,
                "psd\tholds\tfalse\tword={} expected={} actual={}",
                format_letters(&c.word),
                c.expected,
                c.actual
            )?,
        }
        if report.params.is_some_and(|p| p.d >= 1) {
            let audit = curtain_audit(&u, n)?;
            writeln!(
                out,
                "curtain\tzero-window\t{}\tpasses={}",
                audit.zero_window, audit.passes
            )?;
        }
    } else {
        writeln!(out, "psd\tholds\tskipped\tnot an upcycle")?;
    }

    let r3 = if u.letters().is_none() {
        Err("word has diamonds".to_string())
    } else {
        match FiniteField::new(a) {
            Err(_) => Err(format!("no field of order {a}")),
            Ok(field) => check_r3(&u, &field).map_err(|e| e.to_string()),
        }
    };
    match r3 {
        Ok(r) => {
            let taus: Vec<String> = r.failing.iter().map(|t| t.to_string()).collect();
            writeln!(out, "r3\tholds\t{}\tfailing={}", r.holds, taus.join(","))?;
        }
        Err(why) => writeln!(out, "r3\tholds\tskipped\t{why}")?,
    }
    Ok(())
}

fn necklace(cmd: NecklaceCmd, out: &mut impl Write) -> anyhow::Result<()> {
    let (v, why) = match cmd {
        NecklaceCmd::Euler {
            a,
            n,
            t,
            zeros_prefix,
            contain,
        } => {
            let constraint = match contain {
                Some(w) => {
                    let letters = parse_pword(&w, a, false)?;
                    let letters: Option<Vec<u32>> =
                        letters.chars().iter().map(|c| c.letter()).collect();
                    Constraint::ContainWord(
                        letters.ok_or_else(|| anyhow!("--contain must be a total word"))?,
                    )
                }
                None if zeros_prefix => Constraint::ZerosPrefix,
                None => Constraint::None,
            };
            (
                euler_necklace(a, n, t, &constraint)?,
                "an Euler tour of the astute graph G(a,n,t) spells an (a,n,t)-perfect necklace",
            )
        }
        NecklaceCmd::Lex { a, n } => (
            lex_necklace(a, n)?,
            "the words of A^n concatenated in lexicographic order form an (a,n,n)-perfect necklace",
        ),
        NecklaceCmd::Stretch { q, file } => {
            let text = read_text(file.as_ref())?;
            let body: Vec<&str> = text
                .lines()
                .filter(|l| !l.trim_start().starts_with('#'))
                .collect();
            let w = Necklace::parse(&body.join("\n"))?;
            (stretch_necklace(&w, q)?, "stretching an (a,n,n+r)-perfect necklace by q gives an (a,n,nq+r)-perfect necklace")
        }
        NecklaceCmd::Rotate { r, input } => {
            let w = read_cyclic(&input)?;
            (
                rotate_expand(&w, r)?,
                "rotating the blocks of a De Bruijn cycle gives an (a,n,n+r)-perfect necklace",
            )
        }
        NecklaceCmd::Reflect { input } => {
            let w = read_cyclic(&input)?;
            (
                reflect_expand(&w)?,
                "reflecting the blocks of a De Bruijn cycle gives an (a,n,2n-1)-perfect necklace",
            )
        }
    };
    provenance(out, why)?;
    writeln!(out, "{v}")?;
    Ok(())
}

fn multiply(args: MultiplyArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let base = read_upcycle(&args.input, args.n)?;
    let product = match (&args.filler, args.lex) {
        (Some(path), _) => {
            let filler = read_necklace(path)?;
            alphabet_multiply(&MultiplierSpec {
                base,
                n: args.n,
                k: args.k,
                filler,
            })?
        }
        (None, true) => alphabet_multiply_lex(&base, args.n, args.k)?,
        (None, false) => alphabet_multiply_default(&base, args.n, args.k)?,
    };
    provenance(
        out,
        "alphabet multiplier: a·v + u^(k^(n-d)) is an upcycle when v is a perfect necklace",
    )?;
    writeln!(out, "{product}")?;
    Ok(())
}

fn lift_cmd(args: LiftArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let base = read_upcycle(&args.input, args.n)?;
    if args.enumerate {
        let lifts = enumerate_debruijn_lifts(&base, args.n, args.bound)?;
        provenance(
            out,
            "every upcycle lifts to a De Bruijn cycle; one line per rotation class",
        )?;
        for w in lifts {
            writeln!(out, "{w}")?;
        }
        return Ok(());
    }
    let lifted = match args.necklace {
        Some(path) => {
            let filler = read_necklace(&path)?;
            let selected_offsets: BTreeSet<usize> =
                args.offsets.unwrap_or_default().into_iter().collect();
            lift(&LiftSpec {
                base,
                n: args.n,
                selected_offsets,
                filler,
            })?
        }
        None => debruijn_lift(&base, args.n)?,
    };
    provenance(out, "lift: filling an n-periodic selection of diamonds of u^(a^δ) with a perfect necklace gives an upcycle")?;
    writeln!(out, "{lifted}")?;
    Ok(())
}

fn fold(args: FoldArgs, out: &mut impl Write) -> anyhow::Result<u8> {
    let upper = read_upcycle(&args.input, args.n)?;
    let offsets: BTreeSet<usize> = args.offsets.into_iter().collect();
    match try_fold(&upper, args.n, args.delta, &offsets) {
        Some(lower) => {
            provenance(
                out,
                "fold: the input is a lift of this upcycle by the lift characterization",
            )?;
            writeln!(out, "{lower}")?;
            Ok(0)
        }
        None => Err(refuse(
            "no fold at these offsets: the input is not a lift of any upcycle there",
        )),
    }
}

fn graph(args: GraphArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let u = read_upcycle(&args.input, args.n)?;
    let (dot, why) = match args.model {
        Model::S => (
            export_dot(&build_s(&u, args.n)?),
            "S(u): words of A^n joined when covered at consecutive positions; out-degree a exactly at diamond-led windows",
        ),
        Model::T => (
            export_dot(&build_t(&u, args.n)?),
            "T(u): consecutive De Bruijn edge pairs covered by u, the union of T over its De Bruijn lifts",
        ),
    };
    let text = format!("# provenance: {why}\n{dot}");
    match args.out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dn(args: DnArgs, out: &mut impl Write) -> anyhow::Result<()> {
    if args.min == 0 || args.min > args.max {
        bail!("need 1 ≤ --min ≤ --max");
    }
    if args.max > MAX_D_N {
        return Err(Error::CapExceeded {
            what: "n for D(n)",
            value: args.max as u128,
            cap: MAX_D_N as u128,
        }
        .into());
    }
    writeln!(out, "n\tD(n)")?;
    for n in args.min..=args.max {
        writeln!(out, "{n}\t{}", compute_d(n)?)?;
    }
    Ok(())
}

fn feasible(args: FeasibleArgs, out: &mut impl Write) -> anyhow::Result<()> {
    if let Some(range) = args.table {
        let (lo, hi) = (range[0], range[1]);
        writeln!(out, "n\ta\td\tcitation")?;
        for row in feasibility_table(lo, hi)? {
            writeln!(
                out,
                "{}\t{}\t{}\tsurvives every rule; frame period m | gcd(a^(n-d), n) with d·m/n < D(m)",
                row.n,
                row.class,
                row.d_range()
            )?;
        }
        return Ok(());
    }
    let (a, n, d) = (
        args.a.expect("clap"),
        args.n.expect("clap"),
        args.d.expect("clap"),
    );
    let v = feasibility(a, n, d)?;
    writeln!(out, "a\tn\td\tstatus\tadmissible-periods")?;
    let periods: Vec<String> = v.admissible_periods.iter().map(|m| m.to_string()).collect();
    writeln!(out, "{a}\t{n}\t{d}\t{}\t{}", v.status, periods.join(","))?;
    for r in &v.reasons {
        writeln!(
            out,
            "# rule={} witness={} citation={}",
            r.rule, r.witness, r.citation
        )?;
    }
    Ok(())
}

fn search(args: SearchArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let mut spec = SearchSpec::new(args.a, args.n, args.d);
    spec.diamond_offsets = args.offsets.map(|o| o.into_iter().collect());
    spec.seed = match args.seed {
        Some(s) => Some(match parse_pword(&s, args.a, false)? {
            AnyWord::Linear(w) => w,
            AnyWord::Cyclic(_) => unreachable!("parsed as linear"),
        }),
        None => None,
    };
    spec.limit = args.limit;
    spec.exhaustive = args.exhaustive;
    spec.threads = env_threads().or(args.threads);
    let found = search_upcycles(&spec)?;
    provenance(
        out,
        "backtracking search; every result is certified by the upcycle verifier",
    )?;
    for u in found {
        writeln!(out, "{u}")?;
    }
    Ok(())
}

fn crossjoin(args: CrossjoinArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let text = read_text(args.input.file.as_ref())?;
    let lines = word_lines(&text);
    let [line] = lines.as_slice() else {
        bail!("expected one word, found {}", lines.len());
    };
    let a = alphabet_for(args.input.a, line);
    let w = AnyWord::parse_auto(line, a)?;
    if args.find {
        let AnyWord::Cyclic(u) = &w else {
            bail!("--find needs a cyclic word");
        };
        writeln!(out, "x\ty\tix\tiy\tjx\tjy")?;
        for (x, y, at) in find_cross_joins(u, args.n, args.limit) {
            let x = PWord::new(x, a)?;
            let y = PWord::new(y, a)?;
            writeln!(out, "{x}\t{y}\t{}\t{}\t{}\t{}", at.ix, at.iy, at.jx, at.jy)?;
        }
        return Ok(());
    }
    let x = parse_chars(args.x.as_deref().expect("clap"), a)?;
    let y = parse_chars(args.y.as_deref().expect("clap"), a)?;
    let at = args.at.expect("clap");
    let [ix, iy, jx, jy] = at[..] else {
        bail!("--at takes four positions ix,iy,jx,jy");
    };
    let joined = cross_join_verified(&w, args.n, &x, &y, &CrossJoin { ix, iy, jx, jy })?;
    provenance(
        out,
        "cross-join: swapping the segments between interleaved repeats keeps the set of windows",
    )?;
    writeln!(out, "{joined}")?;
    Ok(())
}
