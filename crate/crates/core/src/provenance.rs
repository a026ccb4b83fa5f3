//! Which procedure produced an answer.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How an answer was obtained. Reports print this next to every result so
/// that sound-but-incomplete searches are distinguishable from exact ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Direct evaluation of a closed-form rule.
    Direct,
    /// Exhaustive enumeration over a finite universe.
    Exhaustive,
    /// Greatest-fixpoint iteration of the quasi-closure step operator.
    Fixpoint,
    /// Answered by the min-scattered theorem without search.
    TheoremFastPath,
    /// Evaluated symbolically over cells or cylinders.
    Symbolic,
    /// Searched inside the finite boolean algebra generated by the inputs;
    /// negative answers are certified by a witness, positive ones are not.
    RelativeToGeneratedAlgebra,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Direct => "direct",
            Provenance::Exhaustive => "exhaustive",
            Provenance::Fixpoint => "fixpoint",
            Provenance::TheoremFastPath => "theorem fast path",
            Provenance::Symbolic => "symbolic",
            Provenance::RelativeToGeneratedAlgebra => "relative to generated algebra",
        })
    }
}
