//! Stable semistar operations on min-scattered Prüfer models, classified by
//! their (quasi-spectrum, pseudo-spectrum) pair `(Δ, Π)`.
//!
//! Membership reduces to the valuation-local rule
//! `1 ∈ I^⋆ ⟺ V(I) ∩ Δ = ∅ ∧ V(I) ∩ Π ∩ sharp(I) = ∅`: at a prime of `Δ`
//! the localization keeps `I` proper, and at an idempotent prime of `Π` the
//! local v-operation keeps exactly the proper primary ideals proper.

use std::sync::Arc;

use crate::error::{PairViolation, Result, SslabError};
use crate::spaces::poset::{bit, members};
use crate::spaces::{DefinableSet, Point, Space};
use crate::spectral::{same_space, IdealDescriptor, UniverseIdeal};

/// The flags of a Prüfer model: which nonzero primes are idempotent and
/// which are branched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferDescriptor {
    space: Arc<Space>,
    idempotent: DefinableSet,
    branched: DefinableSet,
}

impl PruferDescriptor {
    /// One-dimensional backends force `branched = Max`; finite posets
    /// default to every nonzero prime and accept a smaller override.
    pub fn new(space: Arc<Space>, idempotent: DefinableSet, branched: Option<DefinableSet>) -> Result<Self> {
        space.check(&idempotent)?;
        if space.contains_generic(&idempotent) {
            return Err(SslabError::InvalidDescriptor("the generic point cannot be idempotent".into()));
        }
        let all = space.max_set();
        let branched = match branched {
            None => all,
            Some(b) => {
                space.check(&b)?;
                if space.is_one_dimensional() && b != all {
                    return Err(SslabError::InvalidDescriptor(
                        "one-dimensional models are branched at every maximal ideal".into(),
                    ));
                }
                if !space.is_subset(&b, &all)? {
                    return Err(SslabError::InvalidDescriptor("the generic point cannot be branched".into()));
                }
                b
            }
        };
        Ok(PruferDescriptor { space, idempotent, branched })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn idempotent(&self) -> &DefinableSet {
        &self.idempotent
    }

    pub fn branched(&self) -> &DefinableSet {
        &self.branched
    }

    /// Primes allowed in a pseudo-spectrum.
    pub fn admissible(&self) -> DefinableSet {
        self.space.intersection(&self.idempotent, &self.branched).expect("same space")
    }

    pub fn render(&self) -> String {
        format!(
            "prufer on {} {{ idempotent: {}, branched: {} }}",
            self.space,
            self.space.render_set(&self.idempotent),
            self.space.render_set(&self.branched)
        )
    }
}

fn same_descriptor(a: &Arc<PruferDescriptor>, b: &Arc<PruferDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A stable operation in pair form; the pair is the operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableOpPair {
    descriptor: Arc<PruferDescriptor>,
    delta: DefinableSet,
    pi: DefinableSet,
}

impl StableOpPair {
    /// Canonicalizes `delta` to its down-closure and checks every rule on `pi`.
    pub fn validate(descriptor: Arc<PruferDescriptor>, delta: &DefinableSet, pi: &DefinableSet) -> Result<Self> {
        let space = descriptor.space().clone();
        let delta = space.generizations(delta)?;
        space.check(pi)?;
        let mut violations = Vec::new();
        let bad = |set: DefinableSet| (!space.is_empty(&set)).then(|| space.render_set(&set));
        if space.contains_generic(pi) {
            violations.push(PairViolation::GenericInPi);
        }
        let proper_pi = space.max_part(pi);
        if let Some(s) = bad(space.difference(&proper_pi, descriptor.idempotent())?) {
            violations.push(PairViolation::PiNotIdempotent(s));
        }
        if let Some(s) = bad(space.difference(&proper_pi, descriptor.branched())?) {
            violations.push(PairViolation::PiNotBranched(s));
        }
        if let Some(s) = bad(space.intersection(pi, &delta)?) {
            violations.push(PairViolation::PiInsideDelta(s));
        }
        match (&*space, &proper_pi) {
            (Space::Poset(p), DefinableSet::Bits(mask)) => {
                let DefinableSet::Bits(d) = &delta else { unreachable!("checked backend") };
                for q in members(*mask) {
                    for l in members(p.down(q) & !bit(q) & !d) {
                        violations.push(PairViolation::LowerPrimeMissing {
                            point: p.name(q).to_string(),
                            lower: p.name(l).to_string(),
                        });
                    }
                }
            }
            _ if !space.is_empty(&proper_pi) && !space.contains_generic(&delta) => {
                violations.push(PairViolation::LowerPrimeMissing {
                    point: space.render_set(&proper_pi),
                    lower: "generic".to_string(),
                });
            }
            _ => {}
        }
        if violations.is_empty() {
            Ok(StableOpPair { descriptor, delta, pi: pi.clone() })
        } else {
            Err(SslabError::InvalidPair(violations))
        }
    }

    /// The spectral pair `(Δ↓, ∅)`.
    pub fn spectral(descriptor: Arc<PruferDescriptor>, delta: &DefinableSet) -> Result<Self> {
        let empty = descriptor.space().empty_set();
        Self::validate(descriptor, delta, &empty)
    }

    pub fn descriptor(&self) -> &Arc<PruferDescriptor> {
        &self.descriptor
    }

    pub fn space(&self) -> &Arc<Space> {
        self.descriptor.space()
    }

    pub fn delta(&self) -> &DefinableSet {
        &self.delta
    }

    pub fn pi(&self) -> &DefinableSet {
        &self.pi
    }

    fn check_descriptor(&self, other: &StableOpPair) -> Result<()> {
        if same_descriptor(&self.descriptor, &other.descriptor) {
            Ok(())
        } else {
            Err(SslabError::DescriptorMismatch)
        }
    }

    pub fn member(&self, ideal: &IdealDescriptor) -> Result<bool> {
        let space = self.space();
        if !same_space(space, ideal.space()) {
            return Err(SslabError::SpaceMismatch);
        }
        if !space.is_subset(ideal.sharp(), self.descriptor.branched())? {
            return Err(SslabError::InvalidIdeal("sharp lies outside the branched locus".into()));
        }
        if space.meets(ideal.c(), &self.delta)? {
            return Ok(false);
        }
        Ok(!space.meets(&space.intersection(ideal.c(), &self.pi)?, ideal.sharp())?)
    }

    /// Membership extended to the zero ideal, which only the trivial
    /// operation (`Δ = ∅`) sends to the quotient field.
    pub fn member_universe(&self, ideal: &UniverseIdeal) -> Result<bool> {
        match ideal {
            UniverseIdeal::Zero => Ok(self.space().is_empty(&self.delta)),
            UniverseIdeal::Proper(i) => self.member(i),
        }
    }

    /// `self ≤ other` iff `other.Δ ⊆ self.Δ` and `other.Π ⊆ self.Δ ∪ self.Π`.
    pub fn leq(&self, other: &StableOpPair) -> Result<bool> {
        self.check_descriptor(other)?;
        let space = self.space();
        Ok(space.is_subset(&other.delta, &self.delta)?
            && space.is_subset(&other.pi, &space.union(&self.delta, &self.pi)?)?)
    }

    pub fn meet(&self, other: &StableOpPair) -> Result<StableOpPair> {
        self.check_descriptor(other)?;
        let space = self.space();
        let delta = space.union(&self.delta, &other.delta)?;
        let pi = space.difference(&space.union(&self.pi, &other.pi)?, &delta)?;
        Self::validate(self.descriptor.clone(), &delta, &pi)
    }

    pub fn join(&self, other: &StableOpPair) -> Result<StableOpPair> {
        self.check_descriptor(other)?;
        let space = self.space();
        let delta = space.intersection(&self.delta, &other.delta)?;
        let reach_a = space.union(&self.delta, &self.pi)?;
        let reach_b = space.union(&other.delta, &other.pi)?;
        let pi = space.difference(&space.intersection(&reach_a, &reach_b)?, &delta)?;
        let pi = prune_ill_founded(space, &delta, pi)?;
        Self::validate(self.descriptor.clone(), &delta, &pi)
    }

    /// Radical (equivalently spectral) iff the pseudo-spectrum is empty.
    pub fn is_radical(&self) -> bool {
        self.space().is_empty(&self.pi)
    }

    pub fn render(&self) -> String {
        let space = self.space();
        format!("stable(delta={}, pi={})", space.render_set(&self.delta), space.render_set(&self.pi))
    }
}

/// Drops pseudo-spectrum points having a lower prime outside `delta`.
fn prune_ill_founded(space: &Space, delta: &DefinableSet, pi: DefinableSet) -> Result<DefinableSet> {
    Ok(match (space, delta, pi) {
        (Space::Poset(p), DefinableSet::Bits(d), DefinableSet::Bits(m)) => {
            let kept = members(m).filter(|&q| p.down(q) & !bit(q) & !d == 0).fold(0, |acc, q| acc | bit(q));
            DefinableSet::Bits(kept)
        }
        (_, _, pi) if space.contains_generic(delta) => pi,
        _ => space.empty_set(),
    })
}

/// Rebuilds the pair of a stable operation from its membership function
/// (`⋆ ↦ ⋆̃`).
///
/// Finite posets are probed at every prime. One-dimensional models are
/// probed at one representative of each atom of the boolean algebra
/// generated by `probe` and the descriptor flags, so the oracle must be
/// constant on those atoms (true for any pair whose sets lie in the
/// algebra).
pub fn stable_normalize(
    descriptor: Arc<PruferDescriptor>,
    probe: &[&DefinableSet],
    oracle: impl Fn(&UniverseIdeal) -> Result<bool>,
) -> Result<StableOpPair> {
    let space = descriptor.space().clone();
    let admissible = descriptor.admissible();
    let mut generators: Vec<&DefinableSet> = probe.to_vec();
    generators.push(descriptor.idempotent());
    generators.push(descriptor.branched());
    let mut delta = space.empty_set();
    let mut pi = space.empty_set();
    for (atom, rep) in space.atoms(&generators)? {
        if rep == space.generic_point() {
            if !oracle(&UniverseIdeal::Zero)? {
                delta = space.union(&delta, &atom)?;
            }
            continue;
        }
        let plain = IdealDescriptor::prime(space.clone(), &rep, false)?;
        if !oracle(&UniverseIdeal::Proper(plain))? {
            delta = space.union(&delta, &atom)?;
        } else if space.contains(&admissible, &rep) {
            let primary = IdealDescriptor::prime(space.clone(), &rep, true)?;
            if !oracle(&UniverseIdeal::Proper(primary))? {
                pi = space.union(&pi, &atom)?;
            }
        }
    }
    if space.generizations(&delta)? != delta {
        return Err(SslabError::OracleNotStable(format!(
            "quasi-spectrum {} is not closed under generization",
            space.render_set(&delta)
        )));
    }
    StableOpPair::validate(descriptor, &delta, &pi).map_err(|e| SslabError::OracleNotStable(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    /// `perm[i]` is the image of point `i`.
    Poset(Vec<usize>),
    Identity,
    /// Complements every coordinate of a Cantor point.
    CantorBitFlip,
}

/// A flag-preserving homeomorphism between two Prüfer models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homeomorphism {
    source: Arc<PruferDescriptor>,
    target: Arc<PruferDescriptor>,
    kind: MapKind,
}

impl Homeomorphism {
    pub fn new(source: Arc<PruferDescriptor>, target: Arc<PruferDescriptor>, kind: MapKind) -> Result<Self> {
        match (&kind, &**source.space(), &**target.space()) {
            (MapKind::Poset(perm), Space::Poset(p), Space::Poset(q)) => {
                let n = p.len();
                let mut hit = vec![false; n];
                if q.len() != n || perm.len() != n || perm.iter().any(|&j| j >= n || std::mem::replace(&mut hit[j], true)) {
                    return Err(SslabError::InvalidMap("not a bijection between the point sets".into()));
                }
                for a in 0..n {
                    for b in 0..n {
                        if p.leq(a, b) != q.leq(perm[a], perm[b]) {
                            return Err(SslabError::InvalidMap(format!(
                                "not an order isomorphism at {} -> {}",
                                p.name(a),
                                p.name(b)
                            )));
                        }
                    }
                }
            }
            (MapKind::Identity, _, _) if same_space(source.space(), target.space()) => {}
            (MapKind::CantorBitFlip, Space::Cantor, Space::Cantor) => {}
            _ => return Err(SslabError::InvalidMap("map kind does not fit the two spaces".into())),
        }
        let map = Homeomorphism { source, target, kind };
        let flags_ok = map.apply(map.source.idempotent())? == *map.target.idempotent()
            && map.apply(map.source.branched())? == *map.target.branched();
        if !flags_ok {
            return Err(SslabError::InvalidMap("idempotent or branched flags are not preserved".into()));
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<PruferDescriptor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PruferDescriptor> {
        &self.target
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// Image of a set of the source space.
    pub fn apply(&self, set: &DefinableSet) -> Result<DefinableSet> {
        self.source.space().check(set)?;
        Ok(match (&self.kind, set) {
            (MapKind::Poset(perm), DefinableSet::Bits(m)) => {
                DefinableSet::Bits(members(*m).fold(0, |acc, i| acc | bit(perm[i])))
            }
            (MapKind::CantorBitFlip, DefinableSet::Simple { generic, set }) => {
                DefinableSet::Simple { generic: *generic, set: set.flip() }
            }
            _ => set.clone(),
        })
    }

    pub fn apply_point(&self, point: &Point) -> Point {
        match (&self.kind, point) {
            (MapKind::Poset(perm), Point::Poset(i)) => Point::Poset(perm[*i]),
            (MapKind::CantorBitFlip, Point::Cantor(x)) => Point::Cantor(x.flip()),
            _ => point.clone(),
        }
    }

    pub fn inverse(&self) -> Homeomorphism {
        let kind = match &self.kind {
            MapKind::Poset(perm) => {
                let mut inv = vec![0; perm.len()];
                for (i, &j) in perm.iter().enumerate() {
                    inv[j] = i;
                }
                MapKind::Poset(inv)
            }
            other => other.clone(),
        };
        Homeomorphism { source: self.target.clone(), target: self.source.clone(), kind }
    }

    /// `(φ(Δ), φ(Π))` on the target descriptor.
    pub fn transfer_pair(&self, pair: &StableOpPair) -> Result<StableOpPair> {
        if !same_descriptor(pair.descriptor(), &self.source) {
            return Err(SslabError::DescriptorMismatch);
        }
        StableOpPair::validate(self.target.clone(), &self.apply(pair.delta())?, &self.apply(pair.pi())?)
    }
}

/// Flag-preserving automorphisms of a finite-poset descriptor.
pub fn automorphisms(descriptor: &Arc<PruferDescriptor>) -> Vec<Homeomorphism> {
    let Space::Poset(p) = &**descriptor.space() else { return Vec::new() };
    p.automorphisms()
        .into_iter()
        .filter_map(|perm| Homeomorphism::new(descriptor.clone(), descriptor.clone(), MapKind::Poset(perm)).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::poset::Poset;

    fn poset(names: &[&str], rel: &[(usize, usize)]) -> Arc<Space> {
        Arc::new(Space::Poset(Poset::new(names.iter().map(|s| s.to_string()).collect(), rel).unwrap()))
    }

    fn v3(idem: u64) -> Arc<PruferDescriptor> {
        let s = poset(&["o", "p", "q"], &[(0, 1), (0, 2)]);
        Arc::new(PruferDescriptor::new(s, DefinableSet::Bits(idem), None).unwrap())
    }

    fn pair(d: &Arc<PruferDescriptor>, delta: u64, pi: u64) -> StableOpPair {
        StableOpPair::validate(d.clone(), &DefinableSet::Bits(delta), &DefinableSet::Bits(pi)).unwrap()
    }

    fn ideal(d: &Arc<PruferDescriptor>, c: u64, sharp: u64) -> IdealDescriptor {
        IdealDescriptor::new(d.space().clone(), DefinableSet::Bits(c), DefinableSet::Bits(sharp)).unwrap()
    }

    fn rules(err: SslabError) -> Vec<&'static str> {
        match err {
            SslabError::InvalidPair(v) => v.iter().map(PairViolation::rule).collect(),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn validation_examples() {
        let d = v3(0b010);
        pair(&d, 0b001, 0b010);
        let e = StableOpPair::validate(d.clone(), &DefinableSet::Bits(0b001), &DefinableSet::Bits(0b100)).unwrap_err();
        assert_eq!(rules(e), ["pi-not-idempotent"]);
        let diamond = poset(&["o", "p", "q", "m"], &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let dd = Arc::new(PruferDescriptor::new(diamond, DefinableSet::Bits(0b1000), None).unwrap());
        let e = StableOpPair::validate(dd, &DefinableSet::Bits(0b0001), &DefinableSet::Bits(0b1000)).unwrap_err();
        assert_eq!(rules(e), ["lower-prime-missing", "lower-prime-missing"]);
    }

    #[test]
    fn membership_examples() {
        let d = v3(0b010);
        let a = pair(&d, 0b001, 0b010);
        assert!(!a.member(&ideal(&d, 0b010, 0b010)).unwrap());
        assert!(a.member(&ideal(&d, 0b010, 0)).unwrap());
        assert!(!pair(&d, 0b011, 0).member(&ideal(&d, 0b010, 0)).unwrap());
    }

    #[test]
    fn order_and_lattice_examples() {
        let d = v3(0b010);
        let spectral = pair(&d, 0b011, 0);
        let mixed = pair(&d, 0b001, 0b010);
        assert!(spectral.leq(&mixed).unwrap());
        assert!(!mixed.leq(&spectral).unwrap());
        assert_eq!(spectral.meet(&mixed).unwrap(), spectral);
        assert_eq!(spectral.join(&mixed).unwrap(), mixed);
        assert_eq!(mixed.join(&mixed).unwrap(), mixed);
        assert_eq!(mixed.meet(&mixed).unwrap(), mixed);
    }

    #[test]
    fn normalization_round_trip() {
        let d = v3(0b010);
        for p in [pair(&d, 0b001, 0b010), pair(&d, 0b011, 0), pair(&d, 0, 0), pair(&d, 0b001, 0)] {
            let back = stable_normalize(d.clone(), &[], |i| p.member_universe(i)).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn normalization_rejects_unstable_oracle() {
        let d = v3(0b010);
        // p closed but o not: Δ would not be down-closed
        let err = stable_normalize(d, &[], |i| {
            Ok(match i {
                UniverseIdeal::Zero => true,
                UniverseIdeal::Proper(x) => x.c() != &DefinableSet::Bits(0b010),
            })
        })
        .unwrap_err();
        assert!(matches!(err, SslabError::OracleNotStable(_)));
    }

    #[test]
    fn transfer_examples() {
        let d = v3(0b110);
        let swap = Homeomorphism::new(d.clone(), d.clone(), MapKind::Poset(vec![0, 2, 1])).unwrap();
        assert_eq!(swap.transfer_pair(&pair(&d, 0b011, 0)).unwrap(), pair(&d, 0b101, 0));
        let id = Homeomorphism::new(d.clone(), d.clone(), MapKind::Identity).unwrap();
        let p = pair(&d, 0b001, 0b110);
        assert_eq!(id.transfer_pair(&p).unwrap(), p);
        let asym = v3(0b010);
        assert!(Homeomorphism::new(asym.clone(), asym, MapKind::Poset(vec![0, 2, 1])).is_err());
        assert_eq!(automorphisms(&d).len(), 2);
    }

    #[test]
    fn radical_iff_empty_pseudo_spectrum() {
        let d = v3(0b010);
        assert!(pair(&d, 0b011, 0).is_radical());
        assert!(!pair(&d, 0b001, 0b010).is_radical());
        assert!(pair(&d, 0, 0).is_radical());
    }

    #[test]
    fn one_dimensional_descriptor_forces_branching() {
        let space = Arc::new(Space::Cantor);
        let max = space.max_set();
        assert!(PruferDescriptor::new(space.clone(), max.clone(), Some(space.empty_set())).is_err());
        let d = Arc::new(PruferDescriptor::new(space.clone(), max.clone(), None).unwrap());
        let e = StableOpPair::validate(d.clone(), &space.empty_set(), &max).unwrap_err();
        assert_eq!(rules(e), ["lower-prime-missing"]);
        let p = StableOpPair::validate(d.clone(), &space.generic_set(), &max).unwrap();
        let flip = Homeomorphism::new(d.clone(), d.clone(), MapKind::CantorBitFlip).unwrap();
        assert_eq!(flip.transfer_pair(&p).unwrap(), p);
        let back = stable_normalize(d, &[p.delta(), p.pi()], |i| p.member_universe(i)).unwrap();
        assert_eq!(back, p);
    }
}
