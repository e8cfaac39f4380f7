//! The `ringinv` command line.
//!
//! Every command prints `key=value` lines on stdout. Exit codes: `0` for a
//! positive answer or a passing report, `2` for a negative answer or a
//! failing report, `1` for usage, parse and capability errors, which print a
//! single `error: ...` line on stderr.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ringinv::block::{self, Block2x2, BlockData, BlockOutcome};
use ringinv::mary::{self, AlongOutcome, MaryResult};
use ringinv::verify::{self, Mode, TheoremId, VerificationReport};
use ringinv::{green, regularity, Element, Error, GreenKind, Ring};

#[derive(Debug, Parser)]
#[command(
    name = "ringinv",
    version,
    about = "Exact generalized inverses in rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inner and reflexive inverse of A.
    InnerInverse(Literals),
    /// Decide a Green's relation between A and B.
    Green {
        /// One of leq-l, leq-r, leq-h, l, r, h.
        #[arg(long)]
        relation: GreenKind,
        #[command(flatten)]
        literals: Literals,
    },
    /// Inverse of A along D.
    InverseAlong(Literals),
    /// Inverse of A along P·M·Q; literals in the order A P M Q.
    InverseAlongProduct(Literals),
    /// Block inverse along D = [d1 d3; d2 0].
    #[command(name = "block-220")]
    Block220(BlockArgs),
    /// Block inverse along D = [d1 d3; d2 d4] with d4 regular.
    BlockGeneral(BlockArgs),
    /// Run a theorem check and print its report.
    Verify {
        #[arg(long)]
        theorem: TheoremId,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Look for (A, D) where A^∥D exists outside both block theorems.
    SearchQuestion(ModeArgs),
}

#[derive(Debug, Args)]
struct Literals {
    #[arg(long)]
    ring: Ring,
    /// Element literals, one per argument.
    #[arg(allow_negative_numbers = true)]
    literals: Vec<String>,
    /// Read literals from a file instead, one per line; `#` starts a comment.
    #[arg(long, conflicts_with = "literals")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BlockArgs {
    /// The base ring of the blocks.
    #[arg(long)]
    ring: Ring,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    d1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    d2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    d3: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    d4: Option<String>,
    /// Entries a, b, c, d, d1, d2, d3, d4 one per line (d4 optional for
    /// block-220); `#` starts a comment.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d", "d1", "d2", "d3", "d4"])]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModeArgs {
    /// The ring (base ring for block theorems and search-question).
    #[arg(long)]
    ring: Ring,
    #[arg(long, conflicts_with_all = ["seed", "count"])]
    exhaustive: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: u64,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        if self.exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Sampled {
                seed: self.seed,
                count: self.count,
            }
        }
    }
}

/// A failure to report on stderr with exit code 1.
struct Fault(String);

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault(e.to_string())
    }
}

type Outcome = Result<(Vec<(String, String)>, bool), Fault>;

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{}", first.trim());
            return 1;
        }
    };
    let result = match cli.command {
        Command::InnerInverse(lits) => inner_inverse(&lits),
        Command::Green { relation, literals } => green_relation(relation, &literals),
        Command::InverseAlong(lits) => inverse_along(&lits),
        Command::InverseAlongProduct(lits) => inverse_along_product(&lits),
        Command::Block220(args) => block_command(&args, true),
        Command::BlockGeneral(args) => block_command(&args, false),
        Command::Verify { theorem, mode } => {
            report(verify::run_check(theorem, &mode.ring, mode.mode()), out)
        }
        Command::SearchQuestion(mode) => {
            report(verify::search_question(&mode.ring, mode.mode()), out)
        }
    };
    match result {
        Ok((lines, positive)) => {
            for (k, v) in lines {
                let _ = writeln!(out, "{k}={v}");
            }
            if positive {
                0
            } else {
                2
            }
        }
        Err(Fault(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn report(result: ringinv::Result<VerificationReport>, out: &mut dyn Write) -> Outcome {
    let report = result?;
    let _ = writeln!(out, "{report}");
    Ok((Vec::new(), report.passed()))
}

/// Literal texts with their 1-based line numbers (1 for arguments).
fn read_literals(args: &[String], file: Option<&PathBuf>) -> Result<Vec<(usize, String)>, Fault> {
    match file {
        None => Ok(args.iter().map(|a| (1, a.clone())).collect()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fault(format!("{}: {e}", path.display())))?;
            Ok(text
                .lines()
                .enumerate()
                .filter_map(|(i, line)| {
                    let body = line.split('#').next().unwrap_or("").trim();
                    (!body.is_empty()).then(|| (i + 1, body.to_string()))
                })
                .collect())
        }
    }
}

fn parse_at(ring: &Ring, line: usize, text: &str, name: &str) -> Result<Element, Fault> {
    ringinv::parse_element(ring, text).map_err(|e| Fault(format!("{name}: {}", e.at_line(line))))
}

fn elements(lits: &Literals, names: &[&str]) -> Result<Vec<Element>, Fault> {
    let raw = read_literals(&lits.literals, lits.file.as_ref())?;
    if raw.len() != names.len() {
        return Err(Fault(format!(
            "expected {} literal(s) ({}), got {}",
            names.len(),
            names.join(" "),
            raw.len()
        )));
    }
    raw.iter()
        .zip(names)
        .map(|((line, text), name)| parse_at(&lits.ring, *line, text, name))
        .collect()
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn inner_inverse(lits: &Literals) -> Outcome {
    let [a] = &elements(lits, &["a"])?[..] else {
        unreachable!()
    };
    let mut lines = vec![kv("ring", &lits.ring), kv("a", a)];
    match regularity::inner_inverse(a)? {
        Some(cert) => {
            lines.extend([
                kv("regular", true),
                kv("inner", &cert.inner),
                kv("reflexive", &cert.reflexive),
            ]);
            Ok((lines, true))
        }
        None => {
            lines.push(kv("regular", false));
            Ok((lines, false))
        }
    }
}

fn green_relation(kind: GreenKind, lits: &Literals) -> Outcome {
    let [a, b] = &elements(lits, &["a", "b"])?[..] else {
        unreachable!()
    };
    let mut lines = vec![
        kv("ring", &lits.ring),
        kv("relation", kind),
        kv("a", a),
        kv("b", b),
    ];
    match green::relate(kind, a, b, ringinv::Strategy::Auto)? {
        Some(w) => {
            lines.push(kv("related", true));
            for (k, v) in [
                ("left", &w.left),
                ("right", &w.right),
                ("left_back", &w.left_back),
                ("right_back", &w.right_back),
            ] {
                if let Some(v) = v {
                    lines.push(kv(k, v));
                }
            }
            Ok((lines, true))
        }
        None => {
            lines.push(kv("related", false));
            Ok((lines, false))
        }
    }
}

fn along_lines(lines: &mut Vec<(String, String)>, outcome: &AlongOutcome) -> bool {
    match outcome {
        AlongOutcome::Exists(r) => {
            let MaryResult {
                inner_used,
                u,
                u_inv,
                v,
                v_inv,
                b,
                h_witness,
                ..
            } = r.as_ref();
            lines.extend([
                kv("exists", true),
                kv("inverse", b),
                kv("inner", inner_used),
                kv("u", u),
                kv("u_inv", u_inv),
                kv("v", v),
                kv("v_inv", v_inv),
            ]);
            if let (Some(l), Some(rt)) = (&h_witness.left, &h_witness.right) {
                lines.extend([kv("h_left", l), kv("h_right", rt)]);
            }
            true
        }
        AlongOutcome::NotInvertible(n) => {
            lines.extend([
                kv("exists", false),
                kv("reason", "u-not-unit"),
                kv("inner", &n.inner_used),
                kv("u", &n.u),
                kv("v", &n.v),
            ]);
            false
        }
        AlongOutcome::NotRegular { element } => {
            lines.extend([
                kv("exists", false),
                kv("reason", format!("not-regular:{element}")),
            ]);
            false
        }
    }
}

fn inverse_along(lits: &Literals) -> Outcome {
    let [a, d] = &elements(lits, &["a", "d"])?[..] else {
        unreachable!()
    };
    let mut lines = vec![kv("ring", &lits.ring), kv("a", a), kv("d", d)];
    let outcome = mary::inverse_along(a, d, None)?;
    let positive = along_lines(&mut lines, &outcome);
    Ok((lines, positive))
}

fn inverse_along_product(lits: &Literals) -> Outcome {
    let [a, p, m, q] = &elements(lits, &["a", "p", "m", "q"])?[..] else {
        unreachable!()
    };
    let mut lines = vec![
        kv("ring", &lits.ring),
        kv("a", a),
        kv("p", p),
        kv("m", m),
        kv("q", q),
    ];
    let Some(problem) = mary::ProductMaryProblem::derive(a, p, m, q)? else {
        lines.extend([
            kv("exists", false),
            kv("reason", format!("not-regular:{m}")),
        ]);
        return Ok((lines, false));
    };
    lines.extend([
        kv("d", problem.d()),
        kv("p_prime", &problem.p_prime),
        kv("q_prime", &problem.q_prime),
    ]);
    let outcome = mary::inverse_along_product(&problem)?;
    let positive = along_lines(&mut lines, &outcome);
    Ok((lines, positive))
}

fn block_entries(args: &BlockArgs, zero_corner: bool) -> Result<(Block2x2, Block2x2), Fault> {
    const NAMES: [&str; 8] = ["a", "b", "c", "d", "d1", "d2", "d3", "d4"];
    let raw: Vec<Option<(usize, String)>> = match &args.file {
        Some(path) => {
            let mut lits: Vec<Option<(usize, String)>> = read_literals(&[], Some(path))?
                .into_iter()
                .map(Some)
                .collect();
            let wanted = if zero_corner { 7..=8 } else { 8..=8 };
            if !wanted.contains(&lits.len()) {
                return Err(Fault(format!(
                    "{}: expected 8 literals (a b c d d1 d2 d3 d4)",
                    path.display()
                )));
            }
            lits.resize(8, None);
            lits
        }
        None => [
            &args.a, &args.b, &args.c, &args.d, &args.d1, &args.d2, &args.d3, &args.d4,
        ]
        .iter()
        .map(|v| v.as_ref().map(|t| (1, t.clone())))
        .collect(),
    };
    let mut entries = Vec::with_capacity(8);
    for (slot, name) in raw.iter().zip(NAMES) {
        entries.push(match slot {
            Some((line, text)) => parse_at(&args.ring, *line, text, name)?,
            None if zero_corner && name == "d4" => args.ring.zero(),
            None => return Err(Fault(format!("missing --{name}"))),
        });
    }
    let mut e = entries.into_iter();
    let mut next = || e.next().expect("eight entries");
    let (a, b, c, d) = (next(), next(), next(), next());
    let (d1, d2, d3, d4) = (next(), next(), next(), next());
    Ok((
        Block2x2::from_rows(a, c, b, d)?,
        Block2x2::from_rows(d1, d3, d2, d4)?,
    ))
}

fn data_lines(lines: &mut Vec<(String, String)>, data: &BlockData) {
    let along = match data.variant {
        block::BlockVariant::ZeroCorner => "c_along_d2",
        block::BlockVariant::General => "a_along_s",
    };
    lines.push(kv(along, &data.along));
    if let Some(w) = &data.w {
        lines.push(kv("w", w));
    }
    if let Some(s) = &data.schur {
        lines.extend([
            kv("d4_plus", &s.d4_plus),
            kv("e", &s.e),
            kv("f", &s.f),
            kv("s", &s.s),
        ]);
    }
    if let Some(t) = &data.t {
        lines.push(kv("t", t));
    }
    lines.extend([
        kv("u", &data.u),
        kv("u_inv", &data.u_inv),
        kv("alpha", &data.alpha),
        kv("beta", &data.beta),
        kv("xi", &data.xi),
    ]);
    for (k, v) in [("xi_inv", &data.xi_inv), ("x1", &data.x1), ("x2", &data.x2)] {
        if let Some(v) = v {
            lines.push(kv(k, v));
        }
    }
}

fn block_command(args: &BlockArgs, zero_corner: bool) -> Outcome {
    let (a, d) = block_entries(args, zero_corner)?;
    let outcome = if zero_corner {
        block::inverse_along_220(&a, &d)?
    } else {
        block::inverse_along_general(&a, &d)?
    };
    let mut lines = vec![
        kv("ring", &args.ring),
        kv("A", a.to_element()),
        kv("D", d.to_element()),
    ];
    let positive = match &outcome {
        BlockOutcome::Exists { result, data } => {
            lines.extend([kv("exists", true), kv("inverse", result.to_element())]);
            data_lines(&mut lines, data);
            true
        }
        BlockOutcome::NotInvertible { data } => {
            lines.extend([kv("exists", false), kv("reason", "xi-not-unit")]);
            data_lines(&mut lines, data);
            false
        }
        BlockOutcome::DNotRegular => {
            lines.extend([kv("exists", false), kv("reason", "d-not-regular")]);
            false
        }
    };
    Ok((lines, positive))
}
