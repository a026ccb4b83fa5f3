//! Radical semistar operations as suprema of spectral families.
//!
//! A radical operation `⋆` is determined by the closed sets `V(J)` of its
//! closed radical ideals. For a family `{s_Δ}` these are the *quasi-closed*
//! sets: closed `c` with `Δ ∩ c` dense in `c` for every member. The
//! largest quasi-closed subset of `c0` is the greatest fixpoint of
//! `c ↦ c ∩ T(c)` with `T(c) = ⋂ closure(Δ ∩ c)`, and `1 ∈ I^⋆` exactly
//! when that fixpoint below `V(I)` is empty.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::error::{Result, SslabError};
use crate::ordinal::MAX_EXPONENT;
use crate::provenance::Provenance;
use crate::spaces::{poset::members, DefinableSet, Point, Space};
use crate::spectral::{same_space, IdealDescriptor, SpectralOp};

/// Environment variable overriding the fixpoint iteration cap.
pub const MAX_ATOMS_ENV: &str = "SSLAB_MAX_ATOMS";

/// Largest generated algebra whose closed unions are searched exhaustively
/// when deciding spectrality on the Cantor backend.
const EXHAUSTIVE_ATOM_LIMIT: usize = 14;

fn cap_override() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| std::env::var(MAX_ATOMS_ENV).ok().and_then(|v| v.trim().parse().ok()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RadicalOp {
    /// Supremum of an explicit spectral family.
    Join(Vec<SpectralOp>),
    /// Supremum of `{s_{(M∖{P})↓} : P ∈ S}`; the empty family is the identity.
    Punctured { space: Arc<Space>, m: DefinableSet, s: DefinableSet },
    /// Supremum of `Join`/`Punctured` terms that cannot be merged.
    Sup(Vec<RadicalOp>),
    /// Pointwise infimum of finitely many radical operations.
    Meet(Vec<RadicalOp>),
}

/// Answer of [`RadicalOp::is_spectral`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralityVerdict {
    pub answer: bool,
    /// A proper closed set on which the operation and `s_{qspec}` disagree.
    pub witness: Option<DefinableSet>,
    pub provenance: Provenance,
}

impl RadicalOp {
    pub fn join(family: Vec<SpectralOp>) -> Result<Self> {
        let first = family.first().ok_or(SslabError::EmptyFamily)?;
        if family.iter().any(|op| !same_space(first.space(), op.space())) {
            return Err(SslabError::SpaceMismatch);
        }
        Ok(RadicalOp::Join(family))
    }

    pub fn punctured(space: Arc<Space>, m: DefinableSet, s: DefinableSet) -> Result<Self> {
        space.check(&m)?;
        space.check(&s)?;
        if space.contains_generic(&m) {
            return Err(SslabError::InvalidIdeal("M must not contain the generic point".into()));
        }
        if !space.is_subset(&s, &m)? {
            return Err(SslabError::InvalidIdeal("S must be a subset of M".into()));
        }
        Ok(RadicalOp::Punctured { space, m, s })
    }

    pub fn meet(args: Vec<RadicalOp>) -> Result<Self> {
        let first = args.first().ok_or(SslabError::EmptyFamily)?;
        if args.iter().any(|op| !same_space(first.space(), op.space())) {
            return Err(SslabError::SpaceMismatch);
        }
        Ok(RadicalOp::Meet(args))
    }

    /// Supremum of two operations. Spectral families are concatenated and
    /// punctured families over the same `M` merge their `S`.
    pub fn radical_join(a: &RadicalOp, b: &RadicalOp) -> Result<RadicalOp> {
        if !same_space(a.space(), b.space()) {
            return Err(SslabError::SpaceMismatch);
        }
        let space = a.space().clone();
        let mut spectral: Vec<SpectralOp> = Vec::new();
        let mut punctured: Vec<(DefinableSet, DefinableSet)> = Vec::new();
        let mut pending = vec![a, b];
        while let Some(op) = pending.pop() {
            match op {
                RadicalOp::Join(fam) => spectral.extend(fam.iter().cloned()),
                RadicalOp::Punctured { m, s, .. } => match punctured.iter_mut().find(|(pm, _)| pm == m) {
                    Some((_, ps)) => *ps = space.union(ps, s)?,
                    None => punctured.push((m.clone(), s.clone())),
                },
                RadicalOp::Sup(parts) => pending.extend(parts.iter()),
                RadicalOp::Meet(_) => {
                    return Err(SslabError::UnsupportedForm("join of a meet node; distribute the meet first".into()))
                }
            }
        }
        // pending pops in reverse; restore declaration order
        spectral.reverse();
        punctured.reverse();
        let mut parts: Vec<RadicalOp> = Vec::new();
        if !spectral.is_empty() {
            parts.push(RadicalOp::Join(spectral));
        }
        parts.extend(punctured.into_iter().map(|(m, s)| RadicalOp::Punctured { space: space.clone(), m, s }));
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { RadicalOp::Sup(parts) })
    }

    pub fn radical_meet(a: &RadicalOp, b: &RadicalOp) -> Result<RadicalOp> {
        RadicalOp::meet(vec![a.clone(), b.clone()])
    }

    pub fn space(&self) -> &Arc<Space> {
        match self {
            RadicalOp::Join(fam) => fam[0].space(),
            RadicalOp::Punctured { space, .. } => space,
            RadicalOp::Sup(parts) | RadicalOp::Meet(parts) => parts[0].space(),
        }
    }

    /// Whether this is the trivial operation `I ↦ K`, the only one that
    /// sends the zero ideal to the quotient field.
    pub fn is_trivial(&self) -> Result<bool> {
        let space = self.space();
        Ok(match self {
            RadicalOp::Join(fam) => fam.iter().any(SpectralOp::is_trivial),
            RadicalOp::Punctured { m, s, .. } => match space.least_point(m) {
                Some(p) => space.singleton(&p)? == *m && space.contains(s, &p),
                None => false,
            },
            RadicalOp::Sup(parts) => parts.iter().map(RadicalOp::is_trivial).collect::<Result<Vec<_>>>()?.contains(&true),
            RadicalOp::Meet(args) => !args.iter().map(RadicalOp::is_trivial).collect::<Result<Vec<_>>>()?.contains(&false),
        })
    }

    /// Size of the defining data; bounds the fixpoint iteration.
    pub fn complexity(&self) -> usize {
        match self {
            RadicalOp::Join(fam) => fam.iter().map(|op| op.delta_down().complexity()).sum(),
            RadicalOp::Punctured { m, s, .. } => m.complexity() + s.complexity(),
            RadicalOp::Sup(parts) | RadicalOp::Meet(parts) => parts.iter().map(RadicalOp::complexity).sum(),
        }
    }

    /// Every set mentioned in the definition (the generators of the
    /// boolean algebra that all fixpoint iterates live in).
    pub fn defining_sets(&self) -> Vec<&DefinableSet> {
        match self {
            RadicalOp::Join(fam) => fam.iter().map(SpectralOp::delta_down).collect(),
            RadicalOp::Punctured { m, s, .. } => vec![m, s],
            RadicalOp::Sup(parts) | RadicalOp::Meet(parts) => parts.iter().flat_map(RadicalOp::defining_sets).collect(),
        }
    }

    fn iteration_cap(&self, c: &DefinableSet) -> usize {
        let levels = (MAX_EXPONENT as usize + 2).pow(2);
        cap_override().unwrap_or((self.complexity() + c.complexity() + 2) * levels)
    }

    fn require_query_set(&self, c: &DefinableSet) -> Result<()> {
        let space = self.space();
        space.require_closed(c)?;
        if space.contains_generic(c) {
            return Err(SslabError::InvalidIdeal("query set must be proper (without the generic point)".into()));
        }
        Ok(())
    }

    /// One application of the step operator `T` (not defined for meets).
    fn step(&self, c: &DefinableSet) -> Result<DefinableSet> {
        let space = self.space();
        match self {
            RadicalOp::Join(fam) => {
                let mut out = c.clone();
                for op in fam {
                    let t = space.closure(&space.intersection(op.delta_down(), c)?)?;
                    out = space.intersection(&out, &t)?;
                }
                Ok(out)
            }
            RadicalOp::Punctured { m, s, .. } => match &**space {
                Space::Poset(p) => {
                    let DefinableSet::Bits(mm) = m else { unreachable!("checked backend") };
                    let DefinableSet::Bits(ss) = s else { unreachable!("checked backend") };
                    let DefinableSet::Bits(cc) = c else { unreachable!("checked backend") };
                    let mut out = *cc;
                    for q in members(*ss) {
                        let delta = p.downward_closure(mm & !(1u64 << q));
                        out &= p.upward_closure(delta & cc);
                    }
                    Ok(DefinableSet::Bits(out))
                }
                _ if space.is_empty(s) => Ok(c.clone()),
                _ => {
                    // closure((M∖{P}) ∩ c) loses P exactly when P is isolated in M ∩ c
                    let inside = space.intersection(m, c)?;
                    let lost = space.intersection(s, &space.isolated_points(&inside)?)?;
                    Ok(space.difference(&space.closure(&inside)?, &lost)?)
                }
            },
            RadicalOp::Sup(parts) => {
                let mut out = c.clone();
                for part in parts {
                    out = space.intersection(&out, &part.step(c)?)?;
                }
                Ok(out)
            }
            RadicalOp::Meet(_) => Err(SslabError::UnsupportedForm("step operator of a meet node".into())),
        }
    }

    /// `V(rad(I^⋆ ∩ D))` for `V(I) = c0`: the largest quasi-closed closed subset of `c0`.
    pub fn greatest_quasi_closed(&self, c0: &DefinableSet) -> Result<DefinableSet> {
        self.require_query_set(c0)?;
        self.gqc_unchecked(c0)
    }

    fn gqc_unchecked(&self, c0: &DefinableSet) -> Result<DefinableSet> {
        let space = self.space();
        if let RadicalOp::Meet(args) = self {
            let mut parts = Vec::with_capacity(args.len());
            for arg in args {
                parts.push(arg.gqc_unchecked(c0)?);
            }
            return Ok(space.closure(&space.union_all(&parts)?)?);
        }
        let cap = self.iteration_cap(c0);
        let mut c = c0.clone();
        for _ in 0..=cap {
            if space.is_empty(&c) {
                return Ok(c);
            }
            let next = space.intersection(&c, &self.step(&c)?)?;
            if next == c {
                return Ok(c);
            }
            c = next;
        }
        Err(SslabError::IterationCap { cap })
    }

    /// Whether `c` is the closed set of a `⋆`-closed radical ideal.
    pub fn quasi_closed_test(&self, c: &DefinableSet) -> Result<bool> {
        self.require_query_set(c)?;
        let space = self.space();
        if space.is_empty(c) {
            return Err(SslabError::InvalidIdeal("query set must be nonempty".into()));
        }
        match self {
            RadicalOp::Meet(_) => Ok(space.is_subset(c, &self.gqc_unchecked(c)?)?),
            _ => Ok(space.is_subset(c, &self.step(c)?)?),
        }
    }

    /// `1 ∈ I^⋆` iff no nonempty quasi-closed set lies inside `V(I)`.
    pub fn member(&self, ideal: &IdealDescriptor) -> Result<bool> {
        if !same_space(self.space(), ideal.space()) {
            return Err(SslabError::SpaceMismatch);
        }
        Ok(self.space().is_empty(&self.gqc_unchecked(ideal.c())?))
    }

    /// The quasi-spectrum, including the generic point.
    pub fn qspec(&self) -> Result<(DefinableSet, Provenance)> {
        let space = self.space();
        match &**space {
            Space::Poset(p) => {
                let mut mask = 1u64 << p.bottom();
                for i in 0..p.len() {
                    if i != p.bottom() && !space.is_empty(&self.gqc_unchecked(&DefinableSet::Bits(p.up(i)))?) {
                        mask |= 1u64 << i;
                    }
                }
                Ok((DefinableSet::Bits(mask), Provenance::Exhaustive))
            }
            _ => Ok((space.union(&self.max_qspec()?, &space.generic_set())?, Provenance::Symbolic)),
        }
    }

    /// One-dimensional quasi-spectrum without the generic point: `P` is
    /// quasi-closed iff `T({P}) ∋ P`, decided per defining set.
    fn max_qspec(&self) -> Result<DefinableSet> {
        let space = self.space();
        match self {
            RadicalOp::Join(fam) => {
                let mut out = space.max_set();
                for op in fam {
                    out = space.intersection(&out, op.delta_down())?;
                }
                Ok(out)
            }
            RadicalOp::Punctured { s, .. } if space.is_empty(s) => Ok(space.max_set()),
            RadicalOp::Punctured { m, s, .. } => Ok(space.difference(m, s)?),
            RadicalOp::Sup(parts) => {
                let mut out = space.max_set();
                for part in parts {
                    out = space.intersection(&out, &part.max_qspec()?)?;
                }
                Ok(out)
            }
            RadicalOp::Meet(args) => {
                let mut out = space.empty_set();
                for arg in args {
                    out = space.union(&out, &arg.max_qspec()?)?;
                }
                Ok(out)
            }
        }
    }

    /// Whether `⋆` equals the spectral operation of its quasi-spectrum,
    /// i.e. `gqc(c) = closure(qspec ∩ c)` for every proper closed `c`.
    pub fn is_spectral(&self) -> Result<SpectralityVerdict> {
        let space = self.space().clone();
        let (qspec, _) = self.qspec()?;
        let agrees = |c: &DefinableSet| -> Result<bool> {
            let lhs = self.gqc_unchecked(c)?;
            let rhs = space.closure(&space.intersection(&qspec, c)?)?;
            Ok(space.is_subset(&lhs, &rhs)? && space.is_subset(&rhs, &lhs)?)
        };
        match &*space {
            Space::Poset(p) => {
                for up in p.up_sets() {
                    let c = DefinableSet::Bits(up);
                    if up & (1u64 << p.bottom()) == 0 && !agrees(&c)? {
                        return Ok(SpectralityVerdict { answer: false, witness: Some(c), provenance: Provenance::Exhaustive });
                    }
                }
                Ok(SpectralityVerdict { answer: true, witness: None, provenance: Provenance::Exhaustive })
            }
            Space::Ordinal { .. } => {
                Ok(SpectralityVerdict { answer: true, witness: None, provenance: Provenance::TheoremFastPath })
            }
            Space::Cantor => {
                for c in self.generated_closed_sets()? {
                    if !agrees(&c)? {
                        return Ok(SpectralityVerdict {
                            answer: false,
                            witness: Some(c),
                            provenance: Provenance::RelativeToGeneratedAlgebra,
                        });
                    }
                }
                Ok(SpectralityVerdict { answer: true, witness: None, provenance: Provenance::RelativeToGeneratedAlgebra })
            }
        }
    }

    /// Nonempty proper closed sets of the algebra generated by the
    /// defining sets, smallest unions of atoms first.
    fn generated_closed_sets(&self) -> Result<Vec<DefinableSet>> {
        let space = self.space();
        let atoms: Vec<DefinableSet> = space
            .atoms(&self.defining_sets())?
            .into_iter()
            .filter(|(_, rep)| *rep != Point::Generic)
            .map(|(atom, _)| atom)
            .collect();
        let n = atoms.len();
        let mut subsets: Vec<u64> = if n <= EXHAUSTIVE_ATOM_LIMIT {
            (1u64..(1u64 << n)).collect()
        } else {
            let mut v: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            for i in 0..n {
                for j in i + 1..n {
                    v.push((1u64 << i) | (1u64 << j));
                }
            }
            v
        };
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in subsets {
            let union = space.union_all(members(mask).map(|i| &atoms[i]))?;
            let c = space.closure(&union)?;
            let key = space.render_set(&c);
            if seen.insert(key) {
                out.push(c);
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let space = self.space();
        match self {
            RadicalOp::Join(fam) => {
                format!("join({})", fam.iter().map(SpectralOp::render).collect::<Vec<_>>().join(", "))
            }
            RadicalOp::Punctured { m, s, .. } => {
                format!("join-punctured(M={}, S={})", space.render_set(m), space.render_set(s))
            }
            RadicalOp::Sup(parts) => {
                format!("join({})", parts.iter().map(RadicalOp::render).collect::<Vec<_>>().join(", "))
            }
            RadicalOp::Meet(args) => {
                format!("meet({})", args.iter().map(RadicalOp::render).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;
    use crate::spaces::cantor::{CantorSet, Clopen};
    use crate::spaces::ordset::{End, OrdSet};
    use crate::spaces::poset::Poset;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn ordinal_space(top: &str) -> Arc<Space> {
        Arc::new(Space::ordinal(o(top)))
    }

    /// `{x ∈ [a, b] : ν(x) ≥ r}` inside `Max`.
    fn cells(space: &Space, a: &str, b: &str, r: u32) -> DefinableSet {
        let Space::Ordinal { max_top } = space else { panic!("ordinal space") };
        DefinableSet::Cells { generic: false, cells: OrdSet::cell(&o(a), &End::At(o(b).successor()), r, max_top) }
    }

    fn cyl(w: &str) -> DefinableSet {
        DefinableSet::Simple { generic: false, set: CantorSet::from_clopen(Clopen::cylinder(w).unwrap()) }
    }

    fn cpt(s: &str) -> DefinableSet {
        DefinableSet::Simple { generic: false, set: CantorSet::points([s.parse().unwrap()]) }
    }

    fn supnonrad() -> RadicalOp {
        let space = Arc::new(Space::Cantor);
        RadicalOp::punctured(space.clone(), space.max_set(), space.max_set()).unwrap()
    }

    fn spectral(space: &Arc<Space>, delta: DefinableSet) -> SpectralOp {
        SpectralOp::canonicalize(space.clone(), &delta).unwrap()
    }

    #[test]
    fn punctured_quasi_closed_examples() {
        let op = supnonrad();
        assert!(op.quasi_closed_test(&cyl("0")).unwrap());
        assert!(!op.quasi_closed_test(&cpt("0(1)")).unwrap());
    }

    #[test]
    fn dense_join_member_is_quasi_closed() {
        let space = ordinal_space("w");
        let below = DefinableSet::Cells {
            generic: false,
            cells: OrdSet::cell(&o("0"), &End::At(o("w")), 0, &o("w")),
        };
        let op = RadicalOp::join(vec![spectral(&space, below)]).unwrap();
        assert!(op.quasi_closed_test(&space.max_set()).unwrap());
    }

    /// Reference check for the fixpoint: the candidate is quasi-closed and
    /// no closed superset inside `c0` from the generated algebra is.
    fn assert_greatest(op: &RadicalOp, c0: &DefinableSet, got: &DefinableSet) {
        let space = op.space();
        assert!(space.is_empty(got) || op.quasi_closed_test(got).unwrap());
        let mut sets = op.defining_sets();
        sets.push(c0);
        let atoms: Vec<DefinableSet> = space
            .atoms(&sets)
            .unwrap()
            .into_iter()
            .filter(|(_, p)| *p != Point::Generic)
            .map(|(a, _)| a)
            .filter(|a| space.is_subset(a, c0).unwrap())
            .collect();
        for mask in 1u64..(1u64 << atoms.len()) {
            let cand = space.closure(&space.union_all(members(mask).map(|i| &atoms[i])).unwrap()).unwrap();
            if space.is_subset(&cand, c0).unwrap() && op.quasi_closed_test(&cand).unwrap() {
                assert!(space.is_subset(&cand, got).unwrap(), "missed quasi-closed {}", space.render_set(&cand));
            }
        }
    }

    #[test]
    fn greatest_quasi_closed_ordinal_example() {
        let space = ordinal_space("w");
        let d1 = spectral(&space, cells(&space, "0", "w", 0));
        let d2 = spectral(&space, cells(&space, "1", "w", 0));
        let op = RadicalOp::join(vec![d1, d2]).unwrap();
        let got = op.greatest_quasi_closed(&space.max_set()).unwrap();
        assert_eq!(got, cells(&space, "1", "w", 0));
        assert_greatest(&op, &space.max_set(), &got);
    }

    #[test]
    fn greatest_quasi_closed_strips_isolated_point() {
        let op = supnonrad();
        let space = op.space().clone();
        let c0 = space.union(&cyl("0"), &cpt("1(0)")).unwrap();
        let got = op.greatest_quasi_closed(&c0).unwrap();
        assert_eq!(got, cyl("0"));
        assert_greatest(&op, &c0, &got);
    }

    #[test]
    fn greatest_quasi_closed_of_member_is_empty() {
        let space = Arc::new(Space::Poset(
            Poset::new(vec!["o".into(), "p".into(), "q".into()], &[(0, 1), (0, 2)]).unwrap(),
        ));
        let op = RadicalOp::join(vec![spectral(&space, DefinableSet::Bits(0b010))]).unwrap();
        assert!(space.is_empty(&op.greatest_quasi_closed(&DefinableSet::Bits(0b100)).unwrap()));
    }

    #[test]
    fn supnonrad_membership() {
        let op = supnonrad();
        let space = op.space().clone();
        for w in ["", "0", "1", "01", "110"] {
            let ideal = IdealDescriptor::closed(space.clone(), cyl(w)).unwrap();
            assert!(!op.member(&ideal).unwrap(), "clopen cyl {w:?}");
        }
        let finite = space.union(&cpt("(0)"), &cpt("01(1)")).unwrap();
        assert!(op.member(&IdealDescriptor::closed(space.clone(), finite.clone()).unwrap()).unwrap());
        // every nonempty subset of a finite set has an isolated point
        for part in [cpt("(0)"), cpt("01(1)"), finite] {
            assert!(!op.quasi_closed_test(&part).unwrap());
        }
    }

    #[test]
    fn supnonrad_qspec_and_spectrality() {
        let op = supnonrad();
        let space = op.space().clone();
        let (qspec, prov) = op.qspec().unwrap();
        assert_eq!(qspec, space.generic_set());
        assert_eq!(prov, Provenance::Symbolic);
        let verdict = op.is_spectral().unwrap();
        assert!(!verdict.answer);
        let witness = verdict.witness.unwrap();
        let DefinableSet::Simple { set, .. } = &witness else { panic!() };
        assert!(set.plus().is_empty() && set.minus().is_empty() && !set.clopen().is_empty());
    }

    #[test]
    fn joins_on_ordinals_take_the_fast_path() {
        let space = ordinal_space("w^2");
        let op = RadicalOp::join(vec![spectral(&space, cells(&space, "0", "w^2", 1))]).unwrap();
        assert_eq!(
            op.is_spectral().unwrap(),
            SpectralityVerdict { answer: true, witness: None, provenance: Provenance::TheoremFastPath }
        );
    }

    #[test]
    fn join_and_meet_forms() {
        let space = Arc::new(Space::Cantor);
        let a = RadicalOp::punctured(space.clone(), space.max_set(), cpt("(0)")).unwrap();
        let b = RadicalOp::punctured(space.clone(), space.max_set(), cpt("(1)")).unwrap();
        let ab = RadicalOp::radical_join(&a, &b).unwrap();
        let both = space.union(&cpt("(0)"), &cpt("(1)")).unwrap();
        assert_eq!(ab, RadicalOp::punctured(space.clone(), space.max_set(), both).unwrap());
        let j = RadicalOp::join(vec![spectral(&space, cyl("0"))]).unwrap();
        assert!(matches!(RadicalOp::radical_join(&j, &a).unwrap(), RadicalOp::Sup(_)));
        let m = RadicalOp::radical_meet(&a, &b).unwrap();
        assert!(matches!(RadicalOp::radical_join(&m, &a), Err(SslabError::UnsupportedForm(_))));
    }

    #[test]
    fn empty_puncture_is_identity() {
        let space = Arc::new(Space::Cantor);
        let op = RadicalOp::punctured(space.clone(), space.max_set(), space.empty_set()).unwrap();
        assert!(!op.member(&IdealDescriptor::closed(space.clone(), cpt("(0)")).unwrap()).unwrap());
        assert!(op.member(&IdealDescriptor::closed(space.clone(), space.empty_set()).unwrap()).unwrap());
        assert_eq!(op.qspec().unwrap().0, space.full_set());
    }
}
