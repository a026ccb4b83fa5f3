//! Spectral semistar operations `s_Δ`, stored by their canonical
//! down-closed set `Δ↓`, and the ideal descriptors they act on.

use std::sync::Arc;

use crate::error::{Result, SslabError};
use crate::spaces::{DefinableSet, Point, Space};

pub(crate) fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The membership-relevant data of a nonzero ideal `I`: its closed set
/// `C = V(I)` and the locus `sharp ⊆ Min(C)` where `I` is locally a proper
/// primary ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealDescriptor {
    space: Arc<Space>,
    c: DefinableSet,
    sharp: DefinableSet,
}

impl IdealDescriptor {
    /// Validates `c` (closed, without the generic point) and `sharp ⊆ Min(c)`.
    pub fn new(space: Arc<Space>, c: DefinableSet, sharp: DefinableSet) -> Result<Self> {
        space.check(&c)?;
        space.check(&sharp)?;
        if !space.is_closed(&c)? {
            return Err(SslabError::InvalidIdeal(format!("C = {} is not closed", space.render_set(&c))));
        }
        if space.contains_generic(&c) {
            return Err(SslabError::InvalidIdeal(
                "C contains the generic point; the zero ideal has no descriptor".into(),
            ));
        }
        if !space.is_subset(&sharp, &space.minimal_points(&c)?)? {
            return Err(SslabError::InvalidIdeal(format!(
                "sharp = {} is not contained in Min(C)",
                space.render_set(&sharp)
            )));
        }
        Ok(IdealDescriptor { space, c, sharp })
    }

    /// Descriptor with an empty sharp locus.
    pub fn closed(space: Arc<Space>, c: DefinableSet) -> Result<Self> {
        let sharp = space.empty_set();
        Self::new(space, c, sharp)
    }

    /// `V(P)` for a nonzero prime `P`, optionally flagged as a proper primary at `P`.
    pub fn prime(space: Arc<Space>, point: &Point, primary: bool) -> Result<Self> {
        let c = space.point_closure(point)?;
        let sharp = if primary { space.singleton(point)? } else { space.empty_set() };
        Self::new(space, c, sharp)
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn c(&self) -> &DefinableSet {
        &self.c
    }

    pub fn sharp(&self) -> &DefinableSet {
        &self.sharp
    }

    /// The same closed set with an empty sharp locus.
    pub fn radical(&self) -> IdealDescriptor {
        IdealDescriptor { space: self.space.clone(), c: self.c.clone(), sharp: self.space.empty_set() }
    }

    /// Localization at `p`: `V(I·D_P ∩ D) = ↑(C ∩ ↓P)`, keeping the sharp
    /// points below `p`.
    pub fn localize(&self, p: &Point) -> Result<IdealDescriptor> {
        let below = self.space.generizations(&self.space.singleton(p)?)?;
        let c = self.space.closure(&self.space.intersection(&self.c, &below)?)?;
        let sharp = self.space.intersection(&self.sharp, &below)?;
        Ok(IdealDescriptor { space: self.space.clone(), c, sharp })
    }

    pub fn render(&self) -> String {
        format!("ideal(C={}, sharp={})", self.space.render_set(&self.c), self.space.render_set(&self.sharp))
    }
}

/// An entry of an ideal universe: the zero ideal or a nonzero ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UniverseIdeal {
    Zero,
    Proper(IdealDescriptor),
}

impl UniverseIdeal {
    pub fn render(&self) -> String {
        match self {
            UniverseIdeal::Zero => "ideal(zero)".to_string(),
            UniverseIdeal::Proper(i) => i.render(),
        }
    }
}

/// A spectral operation `s_Δ`; equality is equality of `Δ↓`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpectralOp {
    space: Arc<Space>,
    delta_down: DefinableSet,
}

impl SpectralOp {
    /// `s_Δ = s_{Δ↓}`.
    pub fn canonicalize(space: Arc<Space>, delta: &DefinableSet) -> Result<Self> {
        let delta_down = space.generizations(delta)?;
        Ok(SpectralOp { space, delta_down })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn delta_down(&self) -> &DefinableSet {
        &self.delta_down
    }

    pub fn is_trivial(&self) -> bool {
        self.space.is_empty(&self.delta_down)
    }

    fn check_space(&self, other: &Arc<Space>) -> Result<()> {
        if same_space(&self.space, other) {
            Ok(())
        } else {
            Err(SslabError::SpaceMismatch)
        }
    }

    /// `1 ∈ I^{s_Δ}` iff no prime of `Δ` contains `I`; the sharp locus is irrelevant.
    pub fn member(&self, ideal: &IdealDescriptor) -> Result<bool> {
        self.check_space(ideal.space())?;
        Ok(!self.space.meets(ideal.c(), &self.delta_down)?)
    }

    /// Membership extended to the zero ideal: `1 ∈ (0)^{s_Δ}` only for `Δ = ∅`.
    pub fn member_universe(&self, ideal: &UniverseIdeal) -> Result<bool> {
        match ideal {
            UniverseIdeal::Zero => Ok(self.is_trivial()),
            UniverseIdeal::Proper(i) => self.member(i),
        }
    }

    /// `self ≤ other` iff `other.Δ↓ ⊆ self.Δ↓`.
    pub fn leq(&self, other: &SpectralOp) -> Result<bool> {
        self.check_space(other.space())?;
        Ok(self.space.is_subset(&other.delta_down, &self.delta_down)?)
    }

    /// Infimum in the spectral lattice: the union of the `Δ↓`.
    pub fn inf(family: &[SpectralOp]) -> Result<SpectralOp> {
        Self::fold(family, |space, a, b| space.union(a, b))
    }

    /// Supremum in the spectral lattice: the intersection of the `Δ↓`.
    pub fn sup(family: &[SpectralOp]) -> Result<SpectralOp> {
        Self::fold(family, |space, a, b| space.intersection(a, b))
    }

    fn fold(
        family: &[SpectralOp],
        f: impl Fn(&Space, &DefinableSet, &DefinableSet) -> std::result::Result<DefinableSet, crate::spaces::SpaceError>,
    ) -> Result<SpectralOp> {
        let (first, rest) = family.split_first().ok_or(SslabError::EmptyFamily)?;
        let mut delta = first.delta_down.clone();
        for op in rest {
            first.check_space(op.space())?;
            delta = f(&first.space, &delta, &op.delta_down)?;
        }
        Ok(SpectralOp { space: first.space.clone(), delta_down: delta })
    }

    /// The quasi-spectrum together with the zero ideal: `Δ↓ ∪ {generic}`.
    pub fn qspec(&self) -> DefinableSet {
        self.space.union(&self.delta_down, &self.space.generic_set()).expect("same space")
    }

    pub fn render(&self) -> String {
        format!("spectral({})", self.space.render_set(&self.delta_down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::poset::Poset;

    fn v3() -> Arc<Space> {
        Arc::new(Space::Poset(
            Poset::new(vec!["o".into(), "p".into(), "q".into()], &[(0, 1), (0, 2)]).unwrap(),
        ))
    }

    fn op(space: &Arc<Space>, mask: u64) -> SpectralOp {
        SpectralOp::canonicalize(space.clone(), &DefinableSet::Bits(mask)).unwrap()
    }

    fn ideal(space: &Arc<Space>, mask: u64) -> IdealDescriptor {
        IdealDescriptor::closed(space.clone(), DefinableSet::Bits(mask)).unwrap()
    }

    #[test]
    fn canonicalization_examples() {
        let s = v3();
        assert_eq!(op(&s, 0b010).delta_down(), &DefinableSet::Bits(0b011));
        assert!(op(&s, 0).is_trivial());
        let cantor = Arc::new(Space::Cantor);
        let p = Point::Cantor("0(1)".parse().unwrap());
        let delta = cantor.difference(&cantor.max_set(), &cantor.singleton(&p).unwrap()).unwrap();
        let sp = SpectralOp::canonicalize(cantor.clone(), &delta).unwrap();
        assert!(cantor.contains_generic(sp.delta_down()));
        assert!(!cantor.contains(sp.delta_down(), &p));
    }

    #[test]
    fn membership_examples() {
        let s = v3();
        let a = op(&s, 0b011);
        assert!(a.member(&ideal(&s, 0b100)).unwrap());
        assert!(!a.member(&ideal(&s, 0b010)).unwrap());
        assert!(op(&s, 0).member(&ideal(&s, 0b110)).unwrap());
    }

    #[test]
    fn order_and_lattice_examples() {
        let s = v3();
        assert!(op(&s, 0b111).leq(&op(&s, 0b011)).unwrap());
        assert!(!op(&s, 0b011).leq(&op(&s, 0b101)).unwrap());
        assert_eq!(SpectralOp::inf(&[op(&s, 0b011), op(&s, 0b101)]).unwrap(), op(&s, 0b111));
        assert_eq!(SpectralOp::sup(&[op(&s, 0b011), op(&s, 0b101)]).unwrap(), op(&s, 0b001));
        assert_eq!(SpectralOp::inf(&[op(&s, 0b001), op(&s, 0)]).unwrap(), op(&s, 0b001));
        assert_eq!(SpectralOp::sup(&[]), Err(SslabError::EmptyFamily));
    }

    #[test]
    fn ideal_validation() {
        let s = v3();
        assert!(IdealDescriptor::closed(s.clone(), DefinableSet::Bits(0b111)).is_err());
        assert!(IdealDescriptor::closed(s.clone(), DefinableSet::Bits(0b001)).is_err());
        assert!(IdealDescriptor::new(s.clone(), DefinableSet::Bits(0b110), DefinableSet::Bits(0b010)).is_ok());
        assert!(IdealDescriptor::new(s, DefinableSet::Bits(0b010), DefinableSet::Bits(0b100)).is_err());
    }

    #[test]
    fn localization_keeps_the_part_below() {
        let s = v3();
        let i = IdealDescriptor::new(s.clone(), DefinableSet::Bits(0b110), DefinableSet::Bits(0b110)).unwrap();
        let l = i.localize(&Point::Poset(1)).unwrap();
        assert_eq!(l.c(), &DefinableSet::Bits(0b010));
        assert_eq!(l.sharp(), &DefinableSet::Bits(0b010));
        assert!(s.is_empty(i.localize(&Point::Poset(0)).unwrap().c()));
    }
}
