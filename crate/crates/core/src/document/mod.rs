//! Declarative documents: named spaces, sets, Prüfer descriptors, operations,
//! maps and queries, parsed from one text file and executed into a report.
//!
//! ```text
//! # comments run to the end of the line
//! space V3 = poset {o < p, o < q}
//! set P on V3 = points {p}
//! prufer D on V3 {idempotent: P, branched: all}
//! op A = stable(D, delta=points {o,p})
//! op B = stable(D, delta=points {o}, pi=points {p})
//! query le = leq(A, B)
//! query lat = enumerate(D)
//! ```
//!
//! Names are unique across all kinds and must be defined before use.

mod execute;
mod parse;
mod render;

use std::fmt;
use std::sync::Arc;

use crate::prufer::{Homeomorphism, PruferDescriptor, StableOpPair};
use crate::radical::RadicalOp;
use crate::spaces::{DefinableSet, Space};
use crate::spectral::{IdealDescriptor, SpectralOp};

pub use execute::{execute, Answer, LatticeSummary, QueryResult, Report, Value};
pub use parse::{parse_document, ParseError, Pos};
pub use render::{render_report, Format, RenderError};

/// A named definition and where it was made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition<T> {
    pub name: String,
    pub pos: Pos,
    pub value: T,
}

/// An operation as written in a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Spectral(SpectralOp),
    Radical(RadicalOp),
    Stable(StableOpPair),
}

impl Operation {
    pub fn space(&self) -> &Arc<Space> {
        match self {
            Operation::Spectral(s) => s.space(),
            Operation::Radical(r) => r.space(),
            Operation::Stable(p) => p.space(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Operation::Spectral(_) => "spectral operation",
            Operation::Radical(_) => "radical operation",
            Operation::Stable(_) => "stable pair",
        }
    }

    pub fn render(&self) -> String {
        match self {
            Operation::Spectral(s) => s.render(),
            Operation::Radical(r) => r.render(),
            Operation::Stable(p) => p.render(),
        }
    }

    /// The operation as a radical operation, when it is one.
    pub fn as_radical(&self) -> Option<RadicalOp> {
        match self {
            Operation::Spectral(s) => RadicalOp::join(vec![s.clone()]).ok(),
            Operation::Radical(r) => Some(r.clone()),
            Operation::Stable(_) => None,
        }
    }
}

/// An ideal argument; `None` is the zero ideal.
pub type IdealArg = Option<IdealDescriptor>;

/// A resolved query call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Call {
    Set(SetQuery, Arc<Space>, Vec<DefinableSet>),
    Member(Operation, IdealArg),
    Leq(Operation, Operation),
    Inf(Vec<Operation>),
    Sup(Vec<Operation>),
    Qspec(Operation),
    IsSpectral(Operation),
    IsTrivial(Operation),
    Gqc(RadicalOp, DefinableSet),
    IsRadical(Operation),
    Tau(Operation, IdealArg),
    Sigma(StableOpPair),
    Rebuild(StableOpPair),
    Normalize(Arc<PruferDescriptor>, Operation),
    Transfer(Homeomorphism, StableOpPair),
    Enumerate(Arc<PruferDescriptor>),
}

/// Queries about a definable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetQuery {
    Show,
    Closure,
    IsClosed,
    Generizations,
    Minimal,
    Isolated,
    Derived,
    IsScattered,
    CbRank,
    Perfect,
    IsDense,
}

impl SetQuery {
    pub const ALL: [SetQuery; 11] = [
        SetQuery::Show,
        SetQuery::Closure,
        SetQuery::IsClosed,
        SetQuery::Generizations,
        SetQuery::Minimal,
        SetQuery::Isolated,
        SetQuery::Derived,
        SetQuery::IsScattered,
        SetQuery::CbRank,
        SetQuery::Perfect,
        SetQuery::IsDense,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SetQuery::Show => "set",
            SetQuery::Closure => "closure",
            SetQuery::IsClosed => "is-closed",
            SetQuery::Generizations => "generizations",
            SetQuery::Minimal => "minimal",
            SetQuery::Isolated => "isolated",
            SetQuery::Derived => "derived",
            SetQuery::IsScattered => "is-scattered",
            SetQuery::CbRank => "cb-rank",
            SetQuery::Perfect => "perfect",
            SetQuery::IsDense => "is-dense",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            SetQuery::IsDense => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub name: String,
    pub pos: Pos,
    /// The call as written, whitespace-normalized.
    pub text: String,
    pub call: Call,
}

/// A parsed and resolved document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub spaces: Vec<Definition<Arc<Space>>>,
    pub sets: Vec<Definition<(Arc<Space>, DefinableSet)>>,
    pub ideals: Vec<Definition<(Arc<Space>, IdealArg)>>,
    pub descriptors: Vec<Definition<Arc<PruferDescriptor>>>,
    pub operations: Vec<Definition<Operation>>,
    pub maps: Vec<Definition<Homeomorphism>>,
    pub queries: Vec<Query>,
}

impl fmt::Display for Document {
    /// A summary of the entity graph, one definition per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.spaces {
            let s = &d.value;
            let mut notes = vec![s.backend().to_string()];
            if s.is_one_dimensional() {
                notes.push("one-dimensional".into());
            }
            if s.is_min_scattered() {
                notes.push("min-scattered".into());
            }
            writeln!(f, "space {} = {} [{}]", d.name, s, notes.join(", "))?;
        }
        for d in &self.sets {
            writeln!(f, "set {} = {}", d.name, d.value.0.render_set(&d.value.1))?;
        }
        for d in &self.ideals {
            let text = d.value.1.as_ref().map_or("zero".to_string(), IdealDescriptor::render);
            writeln!(f, "ideal {} = {text}", d.name)?;
        }
        for d in &self.descriptors {
            writeln!(f, "prufer {} = {}", d.name, d.value.render())?;
        }
        for d in &self.operations {
            writeln!(f, "op {} = {} [{}]", d.name, d.value.render(), d.value.kind())?;
        }
        for d in &self.maps {
            writeln!(f, "map {} : {} -> {}", d.name, d.value.source().render(), d.value.target().render())?;
        }
        for q in &self.queries {
            writeln!(f, "query {} = {}", q.name, q.text)?;
        }
        Ok(())
    }
}
