//! Query execution. Queries are independent, so they run on a small pool of
//! scoped threads; results are reported in declaration order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{Call, Document, IdealArg, Operation, Pos, SetQuery};
use crate::correspondences::{is_radical_ls, sharp_rebuild, sigma_support, LocalizingSystemView, SingularLengthView, Source, Tau};
use crate::error::{Result, SslabError};
use crate::oracle::Lattice;
use crate::prufer::{stable_normalize, StableOpPair};
use crate::provenance::Provenance;
use crate::radical::RadicalOp;
use crate::spaces::{CbRank, DefinableSet, Space};
use crate::spectral::{SpectralOp, UniverseIdeal};

/// A query answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "kebab-case")]
pub enum Value {
    Bool(bool),
    /// A set in document literal syntax.
    Set(String),
    /// A Cantor–Bendixson rank, or `null` for a non-scattered set.
    Rank(Option<u32>),
    Perfect { scattered: bool, perfect: bool },
    /// An ideal colength, `0` or `INFINITY`.
    Tau(String),
    Operation(String),
    Lattice(LatticeSummary),
}

/// An enumerated lattice of stable pairs with its Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub descriptor: String,
    pub pairs: Vec<String>,
    pub radical: Vec<bool>,
    /// Covering relations `[lower, upper]` as indices into `pairs`.
    pub covers: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub value: Value,
    pub witness: Option<String>,
    pub provenance: Provenance,
}

impl Answer {
    fn new(value: Value, provenance: Provenance) -> Self {
        Answer { value, witness: None, provenance }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResult {
    pub name: String,
    pub query: String,
    pub line: usize,
    pub column: usize,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Ok { answer: Answer },
    Error { message: String },
}

impl QueryResult {
    pub fn answer(&self) -> Option<&Answer> {
        match &self.outcome {
            Outcome::Ok { answer } => Some(answer),
            Outcome::Error { .. } => None,
        }
    }

    pub fn error(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Ok { .. } => None,
            Outcome::Error { message } => Some(message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub queries: Vec<QueryResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.queries.iter().filter(|q| q.error().is_some()).count()
    }

    pub fn get(&self, name: &str) -> Option<&QueryResult> {
        self.queries.iter().find(|q| q.name == name)
    }
}

/// Answers every query; failures are recorded and the run continues.
pub fn execute(doc: &Document) -> Report {
    let n = doc.queries.len();
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(n);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let outcome = match answer(&doc.queries[i].call) {
                    Ok(answer) => Outcome::Ok { answer },
                    Err(e) => Outcome::Error { message: e.to_string() },
                };
                *slots[i].lock().expect("no worker panics while holding a slot") = Some(outcome);
            });
        }
    });
    let queries = doc
        .queries
        .iter()
        .zip(slots)
        .map(|(q, slot)| {
            let Pos { line, column } = q.pos;
            let outcome = slot.into_inner().expect("slot lock").expect("every query ran");
            QueryResult { name: q.name.clone(), query: q.text.clone(), line, column, outcome }
        })
        .collect();
    Report { queries }
}

fn set_value(space: &Space, s: &DefinableSet) -> Value {
    Value::Set(space.render_set(s))
}

fn op_provenance(op: &Operation) -> Provenance {
    match op {
        Operation::Radical(_) => Provenance::Fixpoint,
        _ => Provenance::Direct,
    }
}

fn source(op: &Operation) -> Source {
    match op {
        Operation::Spectral(s) => Source::Spectral(s.clone()),
        Operation::Radical(r) => Source::Radical(r.clone()),
        Operation::Stable(p) => Source::Pair(p.clone()),
    }
}

fn unsupported<T>(what: &str, op: &Operation) -> Result<T> {
    Err(SslabError::UnsupportedForm(format!("{what} is not defined for a {}", op.kind())))
}

fn spectral_family(ops: &[Operation]) -> Option<Vec<SpectralOp>> {
    ops.iter().map(|o| if let Operation::Spectral(s) = o { Some(s.clone()) } else { None }).collect()
}

fn stable_family(ops: &[Operation]) -> Option<Vec<StableOpPair>> {
    ops.iter().map(|o| if let Operation::Stable(p) = o { Some(p.clone()) } else { None }).collect()
}

fn radical_family(ops: &[Operation]) -> Option<Vec<RadicalOp>> {
    ops.iter().map(Operation::as_radical).collect()
}

/// `inf` (`meet = true`) or `sup` of a homogeneous family.
fn bound(ops: &[Operation], meet: bool) -> Result<Answer> {
    let first = ops.first().ok_or(SslabError::EmptyFamily)?;
    if let Some(family) = spectral_family(ops) {
        let r = if meet { SpectralOp::inf(&family)? } else { SpectralOp::sup(&family)? };
        return Ok(Answer::new(Value::Operation(r.render()), Provenance::Direct));
    }
    if let Some(pairs) = stable_family(ops) {
        let mut acc = pairs[0].clone();
        for p in &pairs[1..] {
            acc = if meet { acc.meet(p)? } else { acc.join(p)? };
        }
        return Ok(Answer::new(Value::Operation(acc.render()), Provenance::Direct));
    }
    if let Some(radicals) = radical_family(ops) {
        let mut acc = radicals[0].clone();
        for r in &radicals[1..] {
            acc = if meet { RadicalOp::radical_meet(&acc, r)? } else { RadicalOp::radical_join(&acc, r)? };
        }
        return Ok(Answer::new(Value::Operation(acc.render()), Provenance::Direct));
    }
    unsupported("a bound of stable pairs mixed with radical operations", first)
}

fn member(op: &Operation, ideal: &IdealArg) -> Result<bool> {
    // 1 ∉ (0)^⋆ in a domain: the zero ideal is never trivialized.
    let Some(ideal) = ideal else { return Ok(false) };
    match op {
        Operation::Spectral(s) => s.member(ideal),
        Operation::Radical(r) => r.member(ideal),
        Operation::Stable(p) => p.member(ideal),
    }
}

fn answer(call: &Call) -> Result<Answer> {
    match call {
        Call::Set(q, space, args) => set_answer(*q, space, args),
        Call::Member(op, ideal) => Ok(Answer::new(Value::Bool(member(op, ideal)?), op_provenance(op))),
        Call::Tau(op, ideal) => {
            let tau = if member(op, ideal)? { Tau::Zero } else { Tau::Infinity };
            Ok(Answer::new(Value::Tau(tau.to_string()), op_provenance(op)))
        }
        Call::Leq(a, b) => {
            let answer = match (a, b) {
                (Operation::Spectral(x), Operation::Spectral(y)) => x.leq(y)?,
                (Operation::Stable(x), Operation::Stable(y)) => x.leq(y)?,
                _ => return unsupported("leq between these kinds", a),
            };
            Ok(Answer::new(Value::Bool(answer), Provenance::Direct))
        }
        Call::Inf(ops) => bound(ops, true),
        Call::Sup(ops) => bound(ops, false),
        Call::Qspec(op) => {
            let space = op.space();
            match op {
                Operation::Spectral(s) => Ok(Answer::new(set_value(space, &s.qspec()), Provenance::Direct)),
                Operation::Radical(r) => {
                    let (set, provenance) = r.qspec()?;
                    Ok(Answer::new(set_value(space, &set), provenance))
                }
                Operation::Stable(p) => Ok(Answer::new(set_value(space, p.delta()), Provenance::Direct)),
            }
        }
        Call::IsSpectral(op) => match op {
            Operation::Spectral(_) => Ok(Answer::new(Value::Bool(true), Provenance::Direct)),
            Operation::Stable(p) => {
                let mut a = Answer::new(Value::Bool(p.space().is_empty(p.pi())), Provenance::Direct);
                if !p.space().is_empty(p.pi()) {
                    a.witness = Some(format!("pi = {}", p.space().render_set(p.pi())));
                }
                Ok(a)
            }
            Operation::Radical(r) => {
                let verdict = r.is_spectral()?;
                Ok(Answer {
                    value: Value::Bool(verdict.answer),
                    witness: verdict.witness.map(|w| r.space().render_set(&w)),
                    provenance: verdict.provenance,
                })
            }
        },
        Call::IsTrivial(op) => {
            let trivial = match op {
                Operation::Spectral(s) => s.is_trivial(),
                Operation::Radical(r) => r.is_trivial()?,
                Operation::Stable(p) => p.member_universe(&UniverseIdeal::Zero)?,
            };
            Ok(Answer::new(Value::Bool(trivial), op_provenance(op)))
        }
        Call::Gqc(r, c0) => {
            let set = r.greatest_quasi_closed(c0)?;
            Ok(Answer::new(set_value(r.space(), &set), Provenance::Fixpoint))
        }
        Call::IsRadical(op) => {
            let verdict = is_radical_ls(&LocalizingSystemView::new(source(op)))?;
            Ok(Answer {
                value: Value::Bool(verdict.answer),
                witness: verdict.witness.map(|w| w.render()),
                provenance: verdict.provenance,
            })
        }
        Call::Sigma(p) => Ok(Answer::new(set_value(p.space(), &sigma_support(p)), Provenance::Direct)),
        Call::Rebuild(p) => Ok(Answer::new(Value::Operation(sharp_rebuild(p)?.render()), Provenance::Direct)),
        Call::Normalize(d, op) => {
            let view = SingularLengthView::new(LocalizingSystemView::new(source(op)));
            let probe: Vec<&DefinableSet> = match op {
                Operation::Spectral(s) => vec![s.delta_down()],
                Operation::Radical(r) => r.defining_sets(),
                Operation::Stable(p) => vec![p.delta(), p.pi()],
            };
            let pair = stable_normalize(d.clone(), &probe, |i| Ok(view.tau_universe(i)? == Tau::Zero))?;
            let provenance = if d.space().as_poset().is_some() {
                Provenance::Exhaustive
            } else {
                Provenance::RelativeToGeneratedAlgebra
            };
            Ok(Answer::new(Value::Operation(pair.render()), provenance))
        }
        Call::Transfer(map, p) => Ok(Answer::new(Value::Operation(map.transfer_pair(p)?.render()), Provenance::Direct)),
        Call::Enumerate(d) => {
            let lattice = Lattice::enumerate(d)?;
            let summary = LatticeSummary {
                descriptor: d.render(),
                pairs: lattice.pairs.iter().map(StableOpPair::render).collect(),
                radical: lattice.pairs.iter().map(StableOpPair::is_radical).collect(),
                covers: lattice.covers().into_iter().map(|(a, b)| [a, b]).collect(),
            };
            Ok(Answer::new(Value::Lattice(summary), Provenance::Exhaustive))
        }
    }
}

fn set_answer(q: SetQuery, space: &Space, args: &[DefinableSet]) -> Result<Answer> {
    let a = &args[0];
    let value = match q {
        SetQuery::Show => set_value(space, a),
        SetQuery::Closure => set_value(space, &space.closure(a)?),
        SetQuery::IsClosed => Value::Bool(space.is_closed(a)?),
        SetQuery::Generizations => set_value(space, &space.generizations(a)?),
        SetQuery::Minimal => set_value(space, &space.minimal_points(a)?),
        SetQuery::Isolated => set_value(space, &space.isolated_points(a)?),
        SetQuery::Derived => set_value(space, &space.derived_set(a)?),
        SetQuery::IsScattered => Value::Bool(space.is_scattered(a)?),
        SetQuery::CbRank => Value::Rank(match space.cb_rank(a)? {
            CbRank::Rank(r) => Some(r),
            CbRank::NotScattered => None,
        }),
        SetQuery::Perfect => {
            let report = space.perfect_report(a)?;
            let mut answer = Answer::new(
                Value::Perfect { scattered: report.is_scattered, perfect: report.is_perfect },
                Provenance::Symbolic,
            );
            answer.witness = report.witness_isolated.map(|p| format!("isolated point {}", space.render_point(&p)));
            return Ok(answer);
        }
        SetQuery::IsDense => Value::Bool(space.is_dense_in(a, &args[1])?),
    };
    let provenance = if space.as_poset().is_some() { Provenance::Direct } else { Provenance::Symbolic };
    Ok(Answer::new(value, provenance))
}
