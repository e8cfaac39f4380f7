//! Exhaustive and seeded-random theorem checks with line-oriented reports.
//!
//! Each [`TheoremId`] names a check over a tuple of elements drawn from one
//! ring: the ring itself for element-level results, the base ring for the
//! block-matrix results. A tuple either fails the theorem's hypotheses (it is
//! counted as rejected, never as a pass), passes every comparison, or yields
//! a failure transcript.
//!
//! # Report format
//!
//! One `key=value` per line, in this order:
//!
//! ```text
//! theorem=<id>
//! ring=<spec>
//! mode=exhaustive | sampled
//! seed=<u64>                  (sampled only)
//! count=<n>                   (sampled only)
//! cases_examined=<n>          tuples generated
//! hypothesis_rejected=<n>     tuples failing the hypotheses
//! cases_checked=<n>           tuples compared
//! stat.<name>=<n>             zero or more, sorted by name
//! findings=<n>                (search-question only)
//! failures=<n>
//! status=pass | fail
//! finding.<i>.<field>=<value> (search-question only, at most 100)
//! failure.<i>.<field>=<value> (at most 100)
//! elapsed=<seconds>s
//! ```
//!
//! Transcript fields are the tuple's inputs under their theorem names,
//! followed by `equation`, `lhs` and `rhs`. Every value is an element literal
//! that the CLI accepts as-is.
//!
//! Sampled mode draws tuple `i` from a ChaCha stream keyed by `(seed, i)`,
//! and stops once `count` tuples have passed the hypotheses or after
//! `200·count` draws. Both modes evaluate tuples in parallel and merge in
//! tuple order, so reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::block::{self, Block2x2, BlockOutcome, InnerChoices};
use crate::error::{Error, Result};
use crate::green::{self, GreenKind};
use crate::mary::{self, AlongOutcome, ProductMaryProblem};
use crate::regularity::{self, RegularityCertificate, Strategy};
use crate::ring::{Element, Ring};

/// Transcripts kept per report; the counts cover everything.
pub const MAX_TRANSCRIPTS: usize = 100;
/// Sampled mode stops after `count` times this many draws.
pub const SAMPLE_DRAW_FACTOR: u64 = 200;
/// Inner inverses tried per slot in the block choice-independence checks.
const BLOCK_CHOICE_LIMIT: usize = 4;
/// Per-element caches are kept for rings up to this size.
const CACHE_RING_LIMIT: u64 = 1296;
const BATCH: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Jacobson,
    Corner,
    MaryEquivalence,
    PmqTheorem,
    LtRegularity,
    Block220,
    BlockGeneral,
    GreenAgreement,
    Uniqueness,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::Jacobson,
        TheoremId::Corner,
        TheoremId::MaryEquivalence,
        TheoremId::PmqTheorem,
        TheoremId::LtRegularity,
        TheoremId::Block220,
        TheoremId::BlockGeneral,
        TheoremId::GreenAgreement,
        TheoremId::Uniqueness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Jacobson => "jacobson",
            TheoremId::Corner => "corner",
            TheoremId::MaryEquivalence => "mary-equivalence",
            TheoremId::PmqTheorem => "pmq-theorem",
            TheoremId::LtRegularity => "lt-regularity",
            TheoremId::Block220 => "block-220",
            TheoremId::BlockGeneral => "block-general",
            TheoremId::GreenAgreement => "green-agreement",
            TheoremId::Uniqueness => "uniqueness",
        }
    }

    /// Names of the tuple's components, in draw order.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            TheoremId::Jacobson => &["a", "b"],
            TheoremId::Corner => &["e", "x"],
            TheoremId::MaryEquivalence | TheoremId::Uniqueness => &["a", "d"],
            TheoremId::PmqTheorem => &["p", "m", "q", "a"],
            TheoremId::LtRegularity => &["d1", "d2", "d3"],
            TheoremId::Block220 => &["a", "b", "c", "d", "d1", "d2", "d3"],
            TheoremId::BlockGeneral => BLOCK_INPUTS,
            TheoremId::GreenAgreement => &["a", "b"],
        }
    }

    /// Whether tuples are drawn from the base ring of a `2×2` block matrix.
    pub fn over_base_ring(self) -> bool {
        matches!(
            self,
            TheoremId::LtRegularity | TheoremId::Block220 | TheoremId::BlockGeneral
        )
    }
}

const BLOCK_INPUTS: &[&str] = &["a", "b", "c", "d", "d1", "d2", "d3", "d4"];

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown theorem {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

/// What a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Theorem(TheoremId),
    SearchQuestion,
}

impl Subject {
    fn inputs(self) -> &'static [&'static str] {
        match self {
            Subject::Theorem(t) => t.inputs(),
            Subject::SearchQuestion => BLOCK_INPUTS,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Theorem(t) => t.fmt(f),
            Subject::SearchQuestion => f.write_str("search-question"),
        }
    }
}

/// Ordered `field → literal` pairs describing one tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub fields: Vec<(String, String)>,
}

impl Transcript {
    pub fn get(&self, field: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == field)
            .map(|(_, v)| v.as_str())
    }
}

/// The result of checking one tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseVerdict {
    Rejected,
    Passed {
        tags: Vec<&'static str>,
    },
    Failed(Transcript),
    /// Search only: `A^∥D` exists although no closed form applies.
    Finding(Transcript),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: Subject,
    pub ring: Ring,
    pub mode: Mode,
    pub cases_examined: u64,
    pub hypothesis_rejected: u64,
    pub cases_checked: u64,
    pub stats: BTreeMap<String, u64>,
    pub failure_count: u64,
    pub failures: Vec<Transcript>,
    pub finding_count: u64,
    pub findings: Vec<Transcript>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// The report without its `elapsed=` line.
    pub fn render_stable(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn fmt::Display| out.push_str(&format!("{k}={v}\n"));
        line("theorem", &self.subject);
        line("ring", &self.ring);
        match self.mode {
            Mode::Exhaustive => line("mode", &"exhaustive"),
            Mode::Sampled { seed, count } => {
                line("mode", &"sampled");
                line("seed", &seed);
                line("count", &count);
            }
        }
        line("cases_examined", &self.cases_examined);
        line("hypothesis_rejected", &self.hypothesis_rejected);
        line("cases_checked", &self.cases_checked);
        for (k, v) in &self.stats {
            line(&format!("stat.{k}"), v);
        }
        if self.subject == Subject::SearchQuestion {
            line("findings", &self.finding_count);
        }
        line("failures", &self.failure_count);
        line("status", &if self.passed() { "pass" } else { "fail" });
        for (prefix, list) in [("finding", &self.findings), ("failure", &self.failures)] {
            for (i, t) in list.iter().enumerate() {
                for (k, v) in &t.fields {
                    line(&format!("{prefix}.{i}.{k}"), v);
                }
            }
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}elapsed={:.6}s",
            self.render_stable(),
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs `theorem` over tuples from `ring` (the base ring for block
/// theorems).
pub fn run_check(theorem: TheoremId, ring: &Ring, mode: Mode) -> Result<VerificationReport> {
    capability(Subject::Theorem(theorem), ring)?;
    let ctx = Context::new(ring);
    drive(Subject::Theorem(theorem), ring, mode, |inputs| {
        check(theorem, &ctx, inputs)
    })
}

/// Enumerates `(A, D)` over `M_2(base)` with `D` regular and reports the
/// cases where `A^∥D` exists although neither block theorem's hypotheses
/// hold. When a theorem does apply, its closed form is compared with the
/// flattened ring and a disagreement is a failure.
pub fn search_question(base: &Ring, mode: Mode) -> Result<VerificationReport> {
    capability(Subject::SearchQuestion, base)?;
    drive(Subject::SearchQuestion, base, mode, search_case)
}

/// Re-evaluates one tuple, for instance from a failure transcript.
pub fn check_case(theorem: TheoremId, inputs: &[Element]) -> Result<CaseVerdict> {
    let names = theorem.inputs();
    if inputs.len() != names.len() {
        return Err(Error::Precondition(format!(
            "{theorem} takes {} inputs",
            names.len()
        )));
    }
    for x in inputs {
        inputs[0].same_ring(x)?;
    }
    check(theorem, &Context::new(inputs[0].ring()), inputs)
}

fn unsupported(operation: &'static str, ring: &Ring) -> Error {
    Error::Unsupported {
        operation,
        ring: ring.to_string(),
    }
}

fn flattened_computable(base: &Ring) -> Result<()> {
    let m2 = Ring::matrix(base, 2)?;
    if m2.has_field_scalars() {
        return Ok(());
    }
    m2.size().map(|_| ())
}

fn capability(subject: Subject, ring: &Ring) -> Result<()> {
    if ring.finite_size().is_none() {
        ring.size()?;
    }
    match subject {
        Subject::Theorem(TheoremId::Jacobson) => Ok(()),
        Subject::Theorem(TheoremId::GreenAgreement) => {
            if !ring.has_field_scalars() {
                return Err(unsupported("green-agreement (needs elimination)", ring));
            }
            ring.size().map(|_| ())
        }
        Subject::Theorem(
            TheoremId::Corner
            | TheoremId::MaryEquivalence
            | TheoremId::PmqTheorem
            | TheoremId::Uniqueness,
        ) => ring.size().map(|_| ()),
        Subject::Theorem(
            TheoremId::LtRegularity | TheoremId::Block220 | TheoremId::BlockGeneral,
        )
        | Subject::SearchQuestion => flattened_computable(ring),
    }
}

fn drive<F>(subject: Subject, ring: &Ring, mode: Mode, case: F) -> Result<VerificationReport>
where
    F: Fn(&[Element]) -> Result<CaseVerdict> + Sync,
{
    let start = Instant::now();
    let arity = subject.inputs().len();
    let size = ring.finite_size().expect("checked by capability");
    let mut acc = Accumulator::default();
    match mode {
        Mode::Exhaustive => {
            ring.size()?;
            let space = (size as u128).pow(arity as u32);
            let bound = ring.enumeration_bound();
            if space > bound as u128 {
                return Err(Error::BoundExceeded {
                    what: format!("tuple space of {subject} over {ring}"),
                    size: space.to_string(),
                    bound,
                });
            }
            let space = space as u64;
            let mut next = 0;
            while next < space {
                let end = (next + BATCH).min(space);
                let verdicts: Vec<Result<CaseVerdict>> = (next..end)
                    .into_par_iter()
                    .map(|i| case(&decode(ring, size, arity, i)))
                    .collect();
                for v in verdicts {
                    acc.add(v?);
                }
                next = end;
            }
        }
        Mode::Sampled { seed, count } => {
            let cap = count.saturating_mul(SAMPLE_DRAW_FACTOR);
            let mut next = 0;
            while acc.accepted() < count && next < cap {
                let end = (next + BATCH).min(cap);
                let verdicts: Vec<Result<CaseVerdict>> = (next..end)
                    .into_par_iter()
                    .map(|i| case(&draw(ring, size, arity, seed, i)))
                    .collect();
                for v in verdicts {
                    if acc.accepted() == count {
                        break;
                    }
                    acc.add(v?);
                }
                next = end;
            }
        }
    }
    Ok(acc.finish(subject, ring, mode, start.elapsed()))
}

/// Tuple `index` of the exhaustive order, first component most significant.
fn decode(ring: &Ring, size: u64, arity: usize, mut index: u64) -> Vec<Element> {
    let mut digits = vec![0; arity];
    for slot in digits.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    digits.into_iter().map(|d| ring.element_at(d)).collect()
}

fn draw(ring: &Ring, size: u64, arity: usize, seed: u64, index: u64) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..arity)
        .map(|_| ring.element_at(rng.gen_range(0..size)))
        .collect()
}

#[derive(Default)]
struct Accumulator {
    examined: u64,
    rejected: u64,
    stats: BTreeMap<String, u64>,
    failure_count: u64,
    failures: Vec<Transcript>,
    finding_count: u64,
    findings: Vec<Transcript>,
}

impl Accumulator {
    fn accepted(&self) -> u64 {
        self.examined - self.rejected
    }

    fn add(&mut self, verdict: CaseVerdict) {
        self.examined += 1;
        match verdict {
            CaseVerdict::Rejected => self.rejected += 1,
            CaseVerdict::Passed { tags } => {
                for tag in tags {
                    *self.stats.entry(tag.to_string()).or_default() += 1;
                }
            }
            CaseVerdict::Failed(t) => {
                self.failure_count += 1;
                if self.failures.len() < MAX_TRANSCRIPTS {
                    self.failures.push(t);
                }
            }
            CaseVerdict::Finding(t) => {
                self.finding_count += 1;
                if self.findings.len() < MAX_TRANSCRIPTS {
                    self.findings.push(t);
                }
            }
        }
    }

    fn finish(
        self,
        subject: Subject,
        ring: &Ring,
        mode: Mode,
        elapsed: Duration,
    ) -> VerificationReport {
        VerificationReport {
            subject,
            ring: ring.clone(),
            mode,
            cases_examined: self.examined,
            hypothesis_rejected: self.rejected,
            cases_checked: self.examined - self.rejected,
            stats: self.stats,
            failure_count: self.failure_count,
            failures: self.failures,
            finding_count: self.finding_count,
            findings: self.findings,
            elapsed,
        }
    }
}

/// An oracle value, or the non-uniqueness message.
type OracleEntry = std::result::Result<Option<Element>, String>;
type RegimeFormula = fn(&Block2x2, &Block2x2) -> Result<Option<Block2x2>>;

/// Per-run caches, indexed by enumeration position.
struct Context {
    ring: Ring,
    inner: Option<Vec<OnceLock<Vec<Element>>>>,
    oracle: Option<Vec<OnceLock<OracleEntry>>>,
}

impl Context {
    fn new(ring: &Ring) -> Self {
        let size = ring.size().ok().filter(|&s| s <= CACHE_RING_LIMIT);
        fn table<T>(n: u64) -> Vec<OnceLock<T>> {
            (0..n).map(|_| OnceLock::new()).collect()
        }
        Context {
            ring: ring.clone(),
            inner: size.map(table::<Vec<Element>>),
            oracle: size.filter(|&s| s * s <= 1 << 16).map(|s| table(s * s)),
        }
    }

    /// All inner inverses when the ring is enumerable, else the canonical
    /// one. Empty when `x` is not regular.
    fn inner_list(&self, x: &Element) -> Result<Vec<Element>> {
        if let (Some(table), true) = (&self.inner, *x.ring() == self.ring) {
            let slot = &table[self.ring.index_of(x) as usize];
            return Ok(slot
                .get_or_init(|| {
                    regularity::all_inner_inverses(x).expect("cached rings are enumerable")
                })
                .clone());
        }
        if x.ring().size().is_ok() {
            return regularity::all_inner_inverses(x);
        }
        Ok(regularity::inner_inverse(x)?
            .map(|c| c.inner)
            .into_iter()
            .collect())
    }

    /// `mary_oracle`, with a non-uniqueness violation as the inner error.
    fn oracle(&self, a: &Element, d: &Element) -> Result<OracleEntry> {
        let compute = || match mary::mary_oracle(a, d) {
            Ok(v) => Ok(Ok(v)),
            Err(Error::Invariant(msg)) => Ok(Err(msg)),
            Err(e) => Err(e),
        };
        match &self.oracle {
            Some(table) => {
                let n = self.ring.size()?;
                let slot = &table[(self.ring.index_of(a) * n + self.ring.index_of(d)) as usize];
                if let Some(v) = slot.get() {
                    return Ok(v.clone());
                }
                let v = compute()?;
                Ok(slot.get_or_init(|| v).clone())
            }
            None => compute(),
        }
    }
}

/// Inputs of the tuple under check, for building transcripts.
struct Case<'a> {
    names: &'static [&'static str],
    inputs: &'a [Element],
}

impl Case<'_> {
    fn transcript(&self, extra: &[(&str, String)]) -> Transcript {
        let mut fields: Vec<(String, String)> = self
            .names
            .iter()
            .zip(self.inputs)
            .map(|(n, x)| (n.to_string(), x.to_string()))
            .collect();
        fields.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        Transcript { fields }
    }

    fn fail(&self, equation: &str, lhs: impl fmt::Display, rhs: impl fmt::Display) -> CaseVerdict {
        CaseVerdict::Failed(self.transcript(&[
            ("equation", equation.to_string()),
            ("lhs", lhs.to_string()),
            ("rhs", rhs.to_string()),
        ]))
    }

    fn error(&self, operation: &str, err: Error) -> CaseVerdict {
        self.fail(operation, "error", err)
    }
}

fn show(x: Option<&Element>) -> String {
    x.map_or_else(|| "none".to_string(), Element::to_string)
}

fn show_block(x: Option<&Block2x2>) -> String {
    x.map_or_else(|| "none".to_string(), |b| b.to_element().to_string())
}

fn is_capability(e: &Error) -> bool {
    matches!(
        e,
        Error::Unsupported { .. } | Error::Infinite { .. } | Error::BoundExceeded { .. }
    )
}

/// Splits a library result into capability errors, which abort the run, and
/// everything else, which belongs in a transcript.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, Error>> {
    match r {
        Err(e) if is_capability(&e) => Err(e),
        other => Ok(other),
    }
}

macro_rules! attempt {
    ($case:expr, $op:expr, $e:expr) => {
        match soft($e)? {
            Ok(v) => v,
            Err(err) => return Ok($case.error($op, err)),
        }
    };
}

fn check(theorem: TheoremId, ctx: &Context, inputs: &[Element]) -> Result<CaseVerdict> {
    let case = Case {
        names: theorem.inputs(),
        inputs,
    };
    match theorem {
        TheoremId::Jacobson => check_jacobson(&case),
        TheoremId::Corner => check_corner(&case),
        TheoremId::MaryEquivalence => check_mary(&case, ctx),
        TheoremId::PmqTheorem => check_pmq(&case, ctx),
        TheoremId::LtRegularity => check_lt(&case),
        TheoremId::Block220 => check_block_220(&case, ctx),
        TheoremId::BlockGeneral => check_block_general(&case, ctx),
        TheoremId::GreenAgreement => check_green(&case),
        TheoremId::Uniqueness => check_uniqueness(&case),
    }
}

fn check_jacobson(case: &Case) -> Result<CaseVerdict> {
    let [a, b] = case.inputs else { unreachable!() };
    let one = a.ring().one();
    let ab = (&one + &(a * b)).try_invert();
    let ba = (&one + &(b * a)).try_invert();
    if ab.is_some() != ba.is_some() {
        return Ok(case.fail(
            "1+ab unit <=> 1+ba unit",
            show(ab.as_ref()),
            show(ba.as_ref()),
        ));
    }
    if let (Some(ab), Some(ba)) = (&ab, &ba) {
        let formula = &one - &(&(b * ab) * a);
        if formula != *ba {
            return Ok(case.fail("(1+ba)^-1 = 1-b(1+ab)^-1a", ba, formula));
        }
    }
    let lib = attempt!(case, "jacobson_invert", mary::jacobson_invert(a, b));
    let lib_ba = lib.as_ref().map(|j| &j.inv_1ba);
    if lib_ba != ba.as_ref() {
        return Ok(case.fail(
            "jacobson_invert = (1+ba)^-1",
            show(lib_ba),
            show(ba.as_ref()),
        ));
    }
    Ok(CaseVerdict::Passed {
        tags: vec![if ab.is_some() { "unit" } else { "non_unit" }],
    })
}

fn check_corner(case: &Case) -> Result<CaseVerdict> {
    let [e, x] = case.inputs else { unreachable!() };
    if !e.is_idempotent() {
        return Ok(CaseVerdict::Rejected);
    }
    let report = attempt!(case, "corner_invertible", mary::corner_invertible(e, x));
    let exe = &(e * x) * e;
    let scan = e
        .ring()
        .find_first(|y| *y == &(e * y) * e && &exe * y == *e && y * &exe == *e)?;
    if report.global_unit != scan.is_some() || report.corner_unit != scan.is_some() {
        return Ok(case.fail(
            "exe+1-e unit <=> exe unit in eRe",
            format!(
                "global={},corner={}",
                report.global_unit, report.corner_unit
            ),
            format!("scan={}", scan.is_some()),
        ));
    }
    if let Some(y) = &report.corner_inverse {
        if *y != &(e * y) * e || &exe * y != *e || y * &exe != *e {
            return Ok(case.fail("(exe)y = y(exe) = e", y, e));
        }
    }
    Ok(CaseVerdict::Passed {
        tags: vec![if scan.is_some() {
            "corner_unit"
        } else {
            "corner_non_unit"
        }],
    })
}

fn check_mary(case: &Case, ctx: &Context) -> Result<CaseVerdict> {
    let [a, d] = case.inputs else { unreachable!() };
    let oracle = match ctx.oracle(a, d)? {
        Ok(v) => v,
        Err(msg) => return Ok(case.fail("at most one candidate", "several", msg)),
    };
    let via_h = mary::exists_via_h(a, d)?;
    let out = attempt!(case, "inverse_along", mary::inverse_along(a, d, None));
    if via_h != oracle.is_some() {
        return Ok(case.fail(
            "exists_via_h = oracle existence",
            via_h,
            show(oracle.as_ref()),
        ));
    }
    if out.inverse() != oracle.as_ref() {
        return Ok(case.fail(
            "u^-1 d = oracle",
            show(out.inverse()),
            show(oracle.as_ref()),
        ));
    }
    let choices = ctx.inner_list(d)?;
    for g in &choices {
        let other = attempt!(
            case,
            "inverse_along with chosen inner",
            mary::inverse_along(a, d, Some(g))
        );
        if other.inverse() != oracle.as_ref() {
            return Ok(case.fail(
                &format!("choice independence (d^- = {g})"),
                show(other.inverse()),
                show(oracle.as_ref()),
            ));
        }
    }
    let mut tags = vec![if oracle.is_some() { "exists" } else { "absent" }];
    if choices.len() > 1 {
        tags.push("multiple_inner_inverses");
    }
    Ok(CaseVerdict::Passed { tags })
}

fn check_uniqueness(case: &Case) -> Result<CaseVerdict> {
    let [a, d] = case.inputs else { unreachable!() };
    let candidates = mary::oracle_candidates(a, d)?;
    if candidates.len() > 1 {
        let list: Vec<String> = candidates.iter().map(|c| c.to_string()).collect();
        return Ok(case.fail(
            "at most one b with dab = d = bad, b <=_H d",
            list.len(),
            list.join(";"),
        ));
    }
    let out = attempt!(case, "inverse_along", mary::inverse_along(a, d, None));
    if out.inverse() != candidates.first() {
        return Ok(case.fail(
            "u^-1 d = unique candidate",
            show(out.inverse()),
            show(candidates.first()),
        ));
    }
    Ok(CaseVerdict::Passed {
        tags: vec![if candidates.is_empty() {
            "absent"
        } else {
            "exists"
        }],
    })
}

fn check_pmq(case: &Case, ctx: &Context) -> Result<CaseVerdict> {
    let [p, m, q, a] = case.inputs else {
        unreachable!()
    };
    let problem = match soft(ProductMaryProblem::derive(a, p, m, q))? {
        Ok(Some(problem)) => problem,
        Ok(None) | Err(Error::Precondition(_)) => return Ok(CaseVerdict::Rejected),
        Err(err) => return Ok(case.error("derive", err)),
    };
    let d = problem.d();
    let oracle = match ctx.oracle(a, &d)? {
        Ok(v) => v,
        Err(msg) => return Ok(case.fail("at most one candidate", "several", msg)),
    };
    let plain = attempt!(case, "inverse_along", mary::inverse_along(a, &d, None));
    if plain.inverse() != oracle.as_ref() {
        return Ok(case.fail(
            "a^|pmq = oracle",
            show(plain.inverse()),
            show(oracle.as_ref()),
        ));
    }
    let one = a.ring().one();
    let choices = ctx.inner_list(m)?;
    for g in &choices {
        let u = &(&(&(&(m * q) * a) * p) + &one) - &(m * g);
        let v = &(&(&(&(q * a) * p) * m) + &one) - &(g * m);
        let (u_inv, v_inv) = (u.try_invert(), v.try_invert());
        if u_inv.is_some() != oracle.is_some() || v_inv.is_some() != oracle.is_some() {
            return Ok(case.fail(
                &format!("u unit <=> v unit <=> a^|pmq exists (m^- = {g})"),
                format!("u={},v={}", u_inv.is_some(), v_inv.is_some()),
                show(oracle.as_ref()),
            ));
        }
        if let (Some(ui), Some(vi)) = (&u_inv, &v_inv) {
            let left = &(&(p * ui) * m) * q;
            let right = &(&(p * m) * vi) * q;
            if left != right || Some(&left) != oracle.as_ref() {
                return Ok(case.fail(
                    &format!("pu^-1mq = pmv^-1q = oracle (m^- = {g})"),
                    format!("{left};{right}"),
                    show(oracle.as_ref()),
                ));
            }
        }
        let cert = attempt!(case, "certificate", RegularityCertificate::from_inner(m, g));
        let chosen = attempt!(
            case,
            "ProductMaryProblem::new",
            ProductMaryProblem::new(a, p, m, q, &problem.p_prime, &problem.q_prime, cert)
        );
        let lib = attempt!(
            case,
            "inverse_along_product",
            mary::inverse_along_product(&chosen)
        );
        if lib.inverse() != oracle.as_ref() {
            return Ok(case.fail(
                &format!("inverse_along_product = oracle (m^- = {g})"),
                show(lib.inverse()),
                show(oracle.as_ref()),
            ));
        }
    }
    let mut tags = vec![if oracle.is_some() { "exists" } else { "absent" }];
    if choices.len() > 1 {
        tags.push("multiple_inner_inverses");
    }
    Ok(CaseVerdict::Passed { tags })
}

fn flat_strategy(ring: &Ring) -> Strategy {
    if ring.size().is_ok() {
        Strategy::Scan
    } else {
        Strategy::Auto
    }
}

fn check_lt(case: &Case) -> Result<CaseVerdict> {
    let [d1, d2, d3] = case.inputs else {
        unreachable!()
    };
    if !regularity::is_regular(d2)? || !regularity::is_regular(d3)? {
        return Ok(CaseVerdict::Rejected);
    }
    let zero = d1.ring().zero();
    let m = Block2x2::from_rows(d2.clone(), zero, d1.clone(), d3.clone())?;
    let m_el = m.to_element();
    let m_regular = regularity::inner_inverse_with(&m_el, flat_strategy(m_el.ring()))?.is_some();
    let lt = attempt!(
        case,
        "lt_regular_inner",
        block::lt_regular_inner(d2, d1, d3)
    );
    match lt {
        block::LtRegularity::NotRegular { w } => {
            if m_regular {
                return Ok(case.fail(
                    "w regular <=> M regular",
                    format!("w={w} not regular"),
                    "M regular",
                ));
            }
            Ok(CaseVerdict::Passed {
                tags: vec!["not_regular"],
            })
        }
        block::LtRegularity::Regular { w, mm_minus, .. } => {
            if !m_regular {
                return Ok(case.fail(
                    "w regular <=> M regular",
                    format!("w={w} regular"),
                    "M not regular",
                ));
            }
            if &mm_minus * &m != m || &mm_minus * &mm_minus != mm_minus {
                return Ok(case.fail(
                    "MM^-M = M, (MM^-)^2 = MM^-",
                    show_block(Some(&mm_minus)),
                    show_block(Some(&m)),
                ));
            }
            let e = mm_minus.to_element();
            if green::right_factor(&e, &m_el, flat_strategy(m_el.ring()))?.is_none() {
                return Ok(case.fail("MM^- in M·R", e, m_el));
            }
            Ok(CaseVerdict::Passed {
                tags: vec!["regular"],
            })
        }
    }
}

fn blocks(inputs: &[Element]) -> Result<(Block2x2, Block2x2)> {
    let [a, b, c, d, d1, d2, d3, d4] = inputs else {
        unreachable!()
    };
    Ok((
        Block2x2::from_rows(a.clone(), c.clone(), b.clone(), d.clone())?,
        Block2x2::from_rows(d1.clone(), d3.clone(), d2.clone(), d4.clone())?,
    ))
}

/// Compares a closed-form outcome with the flattened ring; `None` if they
/// agree.
fn against_flattened(
    case: &Case,
    a: &Block2x2,
    d: &Block2x2,
    outcome: &BlockOutcome,
) -> Result<Option<CaseVerdict>> {
    let flat = block::flattened_inverse_along(a, d)?
        .ok_or_else(|| unsupported("flattened oracle", a.base()))?;
    let agree = match outcome {
        BlockOutcome::DNotRegular => matches!(flat, AlongOutcome::NotRegular { .. }),
        _ => flat.inverse() == outcome.inverse().map(Block2x2::to_element).as_ref(),
    };
    Ok((!agree).then(|| {
        let lhs = match outcome {
            BlockOutcome::DNotRegular => "D not regular".to_string(),
            other => show_block(other.inverse()),
        };
        let rhs = match &flat {
            AlongOutcome::NotRegular { .. } => "D not regular".to_string(),
            other => show(other.inverse()),
        };
        case.fail("closed form = flattened A^|D", lhs, rhs)
    }))
}

fn outcome_tag(outcome: &BlockOutcome) -> &'static str {
    match outcome {
        BlockOutcome::Exists { .. } => "exists",
        BlockOutcome::NotInvertible { .. } => "xi_not_unit",
        BlockOutcome::DNotRegular => "d_not_regular",
    }
}

fn first_choices(ctx: &Context, x: &Element) -> Result<Vec<Element>> {
    let mut list = ctx.inner_list(x)?;
    list.truncate(BLOCK_CHOICE_LIMIT);
    Ok(list)
}

fn check_block_220(case: &Case, ctx: &Context) -> Result<CaseVerdict> {
    let mut inputs = case.inputs.to_vec();
    inputs.push(inputs[0].ring().zero());
    let (a, d) = blocks(&inputs)?;
    let closed = match soft(block::inverse_along_220_closed_form(
        &a,
        &d,
        &InnerChoices::default(),
    ))? {
        Ok(out) => out,
        Err(Error::Precondition(_)) => return Ok(CaseVerdict::Rejected),
        Err(err) => return Ok(case.error("inverse_along_220", err)),
    };
    if let Some(fail) = against_flattened(case, &a, &d, &closed)? {
        return Ok(fail);
    }
    let mut variants = Vec::new();
    for g2 in first_choices(ctx, &d.d2)? {
        for g3 in first_choices(ctx, &d.d3)? {
            variants.push(InnerChoices {
                d2: Some(g2.clone()),
                d3: Some(g3),
                ..Default::default()
            });
        }
    }
    if let Some(w) = closed.data().and_then(|data| data.w.clone()) {
        for gw in first_choices(ctx, &w)? {
            variants.push(InnerChoices {
                w: Some(gw),
                ..Default::default()
            });
        }
    }
    for choices in &variants {
        let other = attempt!(
            case,
            "inverse_along_220 with chosen inners",
            block::inverse_along_220_closed_form(&a, &d, choices)
        );
        if other.inverse() != closed.inverse() {
            return Ok(case.fail(
                &format!("choice independence ({})", describe(choices)),
                show_block(other.inverse()),
                show_block(closed.inverse()),
            ));
        }
    }
    Ok(CaseVerdict::Passed {
        tags: vec![outcome_tag(&closed)],
    })
}

fn describe(choices: &InnerChoices) -> String {
    let slots = [
        ("d2", &choices.d2),
        ("d3", &choices.d3),
        ("d4", &choices.d4),
        ("s", &choices.s),
        ("w", &choices.w),
        ("t", &choices.t),
    ];
    slots
        .iter()
        .filter_map(|(n, v)| v.as_ref().map(|v| format!("{n}^- = {v}")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_block_general(case: &Case, ctx: &Context) -> Result<CaseVerdict> {
    let (a, d) = blocks(case.inputs)?;
    let closed = match soft(block::inverse_along_general_closed_form(
        &a,
        &d,
        &InnerChoices::default(),
    ))? {
        Ok(out) => out,
        Err(Error::Precondition(_)) => return Ok(CaseVerdict::Rejected),
        Err(err) => return Ok(case.error("inverse_along_general", err)),
    };
    if let Some(fail) = against_flattened(case, &a, &d, &closed)? {
        return Ok(fail);
    }
    let mut tags = vec![outcome_tag(&closed)];

    let regimes: [(&'static str, bool, RegimeFormula); 3] = [
        (
            "regime.d4_invertible",
            d.d4.is_unit(),
            block::regimes::d4_invertible,
        ),
        (
            "regime.d3_zero",
            d.d3.is_zero(),
            block::regimes::lower_triangular,
        ),
        (
            "regime.ed2_zero",
            ed2_vanishes(&d)?,
            block::regimes::ed2_zero,
        ),
    ];
    for (tag, applies, formula) in regimes {
        if !applies {
            continue;
        }
        let got = attempt!(case, tag, formula(&a, &d));
        if got.as_ref() != closed.inverse() {
            return Ok(case.fail(
                &format!("{tag} formula = general closed form"),
                show_block(got.as_ref()),
                show_block(closed.inverse()),
            ));
        }
        tags.push(tag);
    }

    let mut variants = Vec::new();
    for g4 in first_choices(ctx, &d.d4)? {
        variants.push(InnerChoices {
            d4: Some(g4),
            ..Default::default()
        });
    }
    if let Some(data) = closed.data() {
        let s = &data.schur.as_ref().expect("general variant").s;
        for gs in first_choices(ctx, s)? {
            variants.push(InnerChoices {
                s: Some(gs),
                ..Default::default()
            });
        }
        if let Some(t) = &data.t {
            for gt in first_choices(ctx, t)? {
                variants.push(InnerChoices {
                    t: Some(gt),
                    ..Default::default()
                });
            }
        }
    }
    for choices in &variants {
        let other = match soft(block::inverse_along_general_closed_form(&a, &d, choices))? {
            Ok(out) => out,
            // a different d4⁺ changes s, and a^∥s may fail to exist for it
            Err(Error::Precondition(_)) if choices.d4.is_some() => continue,
            Err(err) => return Ok(case.error("inverse_along_general with chosen inners", err)),
        };
        if other.inverse() != closed.inverse() {
            return Ok(case.fail(
                &format!("choice independence ({})", describe(choices)),
                show_block(other.inverse()),
                show_block(closed.inverse()),
            ));
        }
    }
    Ok(CaseVerdict::Passed { tags })
}

fn ed2_vanishes(d: &Block2x2) -> Result<bool> {
    Ok(match block::schur_decompose(d)? {
        Some(sd) => (&sd.e * &d.d2).is_zero() && (&d.d3 * &sd.f).is_zero(),
        None => false,
    })
}

fn check_green(case: &Case) -> Result<CaseVerdict> {
    let [a, b] = case.inputs else { unreachable!() };
    for kind in [
        GreenKind::LeqL,
        GreenKind::LeqR,
        GreenKind::LeqH,
        GreenKind::L,
        GreenKind::R,
        GreenKind::H,
    ] {
        let scan = green::relate(kind, a, b, Strategy::Scan)?;
        let elim = green::relate(kind, a, b, Strategy::Elimination)?;
        if scan.is_some() != elim.is_some() {
            return Ok(case.fail(
                &format!("{kind}: scan = elimination"),
                scan.is_some(),
                elim.is_some(),
            ));
        }
        for w in scan.iter().chain(elim.iter()) {
            if !w.verify() {
                return Ok(case.fail(
                    &format!("{kind}: witness equations"),
                    "invalid",
                    format!("{w:?}"),
                ));
            }
        }
    }
    Ok(CaseVerdict::Passed { tags: Vec::new() })
}

fn search_case(inputs: &[Element]) -> Result<CaseVerdict> {
    let case = Case {
        names: BLOCK_INPUTS,
        inputs,
    };
    let (a, d) = blocks(inputs)?;
    let flat = block::flattened_inverse_along(&a, &d)?
        .ok_or_else(|| unsupported("flattened oracle", a.base()))?;
    if matches!(flat, AlongOutcome::NotRegular { .. }) {
        return Ok(CaseVerdict::Rejected);
    }
    let mut reasons = Vec::new();
    let mut applicable = Vec::new();
    match soft(block::inverse_along_general_closed_form(
        &a,
        &d,
        &InnerChoices::default(),
    ))? {
        Ok(out) => applicable.push(out),
        Err(Error::Precondition(msg)) => reasons.push(format!("general: {msg}")),
        Err(err) => return Ok(case.error("inverse_along_general", err)),
    }
    if d.d4.is_zero() {
        match soft(block::inverse_along_220_closed_form(
            &a,
            &d,
            &InnerChoices::default(),
        ))? {
            Ok(out) => applicable.push(out),
            Err(Error::Precondition(msg)) => reasons.push(format!("zero-corner: {msg}")),
            Err(err) => return Ok(case.error("inverse_along_220", err)),
        }
    } else {
        reasons.push("zero-corner: d4 is not zero".to_string());
    }
    for out in &applicable {
        if let Some(fail) = against_flattened(&case, &a, &d, out)? {
            return Ok(fail);
        }
    }
    let exists = flat.exists();
    if exists && applicable.is_empty() {
        return Ok(CaseVerdict::Finding(case.transcript(&[
            ("inverse", show(flat.inverse())),
            ("reason", reasons.join("; ")),
        ])));
    }
    let mut tags = vec![if exists { "exists" } else { "absent" }];
    if !applicable.is_empty() {
        tags.push("hypotheses_hold");
    }
    Ok(CaseVerdict::Passed { tags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::{parse_element, parse_ring};

    fn ring(spec: &str) -> Ring {
        parse_ring(spec).unwrap()
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn spec_example_counts() {
        let r = run_check(TheoremId::MaryEquivalence, &ring("Z:6"), Mode::Exhaustive).unwrap();
        assert_eq!((r.cases_examined, r.failure_count), (36, 0));
        let r = run_check(TheoremId::PmqTheorem, &ring("Z:6"), Mode::Exhaustive).unwrap();
        assert_eq!((r.cases_examined, r.failure_count), (1296, 0));
        assert!(r.hypothesis_rejected > 0 && r.cases_checked > 0);
        let r = run_check(TheoremId::Jacobson, &ring("M:2:Z:2"), Mode::Exhaustive).unwrap();
        assert_eq!((r.cases_examined, r.failure_count), (256, 0));
    }

    #[test]
    fn tuple_space_bound_is_enforced() {
        match run_check(TheoremId::PmqTheorem, &ring("M:2:Z:3"), Mode::Exhaustive) {
            Err(Error::BoundExceeded { size, .. }) => assert_eq!(size, "43046721"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn capability_errors() {
        assert!(matches!(
            run_check(
                TheoremId::Jacobson,
                &Ring::rationals(),
                Mode::Sampled { seed: 1, count: 5 }
            ),
            Err(Error::Infinite { .. })
        ));
        assert!(matches!(
            run_check(TheoremId::GreenAgreement, &ring("Z:6"), Mode::Exhaustive),
            Err(Error::Unsupported { .. })
        ));
        assert!(matches!(
            search_question(&Ring::rationals(), Mode::Exhaustive),
            Err(Error::Infinite { .. })
        ));
    }

    #[test]
    fn sampled_reports_are_deterministic() {
        let mode = Mode::Sampled { seed: 7, count: 50 };
        let a = run_check(TheoremId::Corner, &ring("M:2:Z:3"), mode).unwrap();
        let b = run_check(TheoremId::Corner, &ring("M:2:Z:3"), mode).unwrap();
        assert_eq!(a.render_stable(), b.render_stable());
        assert_eq!(a.cases_checked, 50);
        assert!(a.render_stable().contains("seed=7\ncount=50\n"));
    }

    #[test]
    fn sampling_reaches_rings_beyond_the_bound() {
        let r = run_check(
            TheoremId::Jacobson,
            &ring("M:3:Z:6"),
            Mode::Sampled { seed: 3, count: 40 },
        )
        .unwrap();
        assert_eq!((r.cases_checked, r.failure_count), (40, 0));
    }

    #[test]
    fn block_checks_pass_exhaustively_over_z2() {
        for t in [
            TheoremId::LtRegularity,
            TheoremId::Block220,
            TheoremId::BlockGeneral,
        ] {
            let r = run_check(t, &ring("Z:2"), Mode::Exhaustive).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.cases_checked > 0, "{t}");
        }
    }

    #[test]
    fn search_question_over_z2() {
        let a = search_question(&ring("Z:2"), Mode::Exhaustive).unwrap();
        assert!(a.passed(), "{a}");
        assert_eq!(a.cases_examined, 256);
        let s = search_question(
            &ring("Z:2"),
            Mode::Sampled {
                seed: 1,
                count: 100,
            },
        )
        .unwrap();
        let t = search_question(
            &ring("Z:2"),
            Mode::Sampled {
                seed: 1,
                count: 100,
            },
        )
        .unwrap();
        assert_eq!(s.render_stable(), t.render_stable());
    }

    #[test]
    fn check_case_reruns_a_tuple() {
        let z6 = ring("Z:6");
        let el = |s: &str| parse_element(&z6, s).unwrap();
        let v = check_case(TheoremId::MaryEquivalence, &[el("5"), el("2")]).unwrap();
        assert_eq!(
            v,
            CaseVerdict::Passed {
                tags: vec!["exists", "multiple_inner_inverses"]
            }
        );
        assert!(check_case(TheoremId::MaryEquivalence, &[el("5")]).is_err());
    }

    #[test]
    fn report_layout() {
        let r = run_check(TheoremId::MaryEquivalence, &ring("Z:6"), Mode::Exhaustive).unwrap();
        let text = r.to_string();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(
            keys,
            [
                "theorem",
                "ring",
                "mode",
                "cases_examined",
                "hypothesis_rejected",
                "cases_checked",
                "stat.absent",
                "stat.exists",
                "stat.multiple_inner_inverses",
                "failures",
                "status",
                "elapsed"
            ]
        );
    }

    #[test]
    fn failure_transcripts_render_with_indices() {
        let z2 = ring("Z:2");
        let case = Case {
            names: &["a", "b"],
            inputs: &[z2.one(), z2.zero()],
        };
        let CaseVerdict::Failed(t) = case.fail("x = y", "1", "0") else {
            panic!()
        };
        let mut acc = Accumulator::default();
        acc.add(CaseVerdict::Failed(t));
        let r = acc.finish(
            Subject::Theorem(TheoremId::Jacobson),
            &z2,
            Mode::Exhaustive,
            Duration::ZERO,
        );
        let text = r.render_stable();
        assert!(text.contains(
            "failures=1\nstatus=fail\nfailure.0.a=1\nfailure.0.b=0\nfailure.0.equation=x = y\n"
        ));
    }
}
