//! The dictionary between stable operations, localizing systems and
//! singular length functions.
//!
//! A localizing system is viewed through its membership predicate on ideal
//! descriptors; a singular length function through its ideal colength
//! `τ ∈ {0, ∞}`, which is `0` exactly on the members of the system.

use std::fmt;

use serde::Serialize;

use crate::error::{Result, SslabError};
use crate::prufer::{stable_normalize, StableOpPair};
use crate::provenance::Provenance;
use crate::radical::RadicalOp;
use crate::spaces::{DefinableSet, Point, Space};
use crate::spectral::{IdealDescriptor, SpectralOp, UniverseIdeal};

/// The operation a localizing system is read off from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Pair(StableOpPair),
    Radical(RadicalOp),
    Spectral(SpectralOp),
}

impl Source {
    pub fn space(&self) -> &std::sync::Arc<Space> {
        match self {
            Source::Pair(p) => p.space(),
            Source::Radical(r) => r.space(),
            Source::Spectral(s) => s.space(),
        }
    }
}

/// `F^⋆ = {I : 1 ∈ I^⋆}` as a predicate on descriptors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizingSystemView {
    source: Source,
}

impl LocalizingSystemView {
    pub fn new(source: Source) -> Self {
        LocalizingSystemView { source }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn member(&self, ideal: &IdealDescriptor) -> Result<bool> {
        match &self.source {
            Source::Pair(p) => p.member(ideal),
            Source::Radical(r) => r.member(ideal),
            Source::Spectral(s) => s.member(ideal),
        }
    }

    pub fn member_universe(&self, ideal: &UniverseIdeal) -> Result<bool> {
        match (&self.source, ideal) {
            (Source::Pair(p), _) => p.member_universe(ideal),
            (Source::Spectral(s), _) => s.member_universe(ideal),
            (Source::Radical(r), UniverseIdeal::Zero) => r.is_trivial(),
            (Source::Radical(r), UniverseIdeal::Proper(i)) => r.member(i),
        }
    }
}

/// Ideal colength of a singular length function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tau {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "INFINITY")]
    Infinity,
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tau::Zero => "0",
            Tau::Infinity => "INFINITY",
        })
    }
}

/// The singular length function attached to a localizing system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularLengthView {
    system: LocalizingSystemView,
}

impl SingularLengthView {
    pub fn new(system: LocalizingSystemView) -> Self {
        SingularLengthView { system }
    }

    pub fn system(&self) -> &LocalizingSystemView {
        &self.system
    }

    pub fn tau(&self, ideal: &IdealDescriptor) -> Result<Tau> {
        Ok(if self.system.member(ideal)? { Tau::Zero } else { Tau::Infinity })
    }

    pub fn tau_universe(&self, ideal: &UniverseIdeal) -> Result<Tau> {
        Ok(if self.system.member_universe(ideal)? { Tau::Zero } else { Tau::Infinity })
    }
}

pub fn colength_tau(view: &SingularLengthView, ideal: &IdealDescriptor) -> Result<Tau> {
    view.tau(ideal)
}

/// Answer of [`is_radical_ls`]; a negative answer carries an ideal that is
/// not a member while its radical is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalityVerdict {
    pub answer: bool,
    pub witness: Option<IdealDescriptor>,
    pub provenance: Provenance,
}

/// Whether `rad(I) ∈ F` implies `I ∈ F`.
pub fn is_radical_ls(view: &LocalizingSystemView) -> Result<RadicalityVerdict> {
    match view.source() {
        Source::Pair(p) => {
            let space = p.space();
            let witness = match space.least_point(p.pi()) {
                Some(q) => Some(IdealDescriptor::prime(space.clone(), &q, true)?),
                None => None,
            };
            Ok(RadicalityVerdict { answer: witness.is_none(), witness, provenance: Provenance::Direct })
        }
        Source::Spectral(_) => Ok(RadicalityVerdict { answer: true, witness: None, provenance: Provenance::Direct }),
        Source::Radical(r) => {
            // true by construction; re-check that membership ignores the sharp locus
            for ideal in sharp_probe(r)? {
                if view.member(&ideal)? != view.member(&ideal.radical())? {
                    return Ok(RadicalityVerdict { answer: false, witness: Some(ideal), provenance: Provenance::Fixpoint });
                }
            }
            Ok(RadicalityVerdict { answer: true, witness: None, provenance: Provenance::Fixpoint })
        }
    }
}

/// Ideals with a maximal sharp locus, one per closed set of the algebra
/// generated by the operation's defining sets.
fn sharp_probe(r: &RadicalOp) -> Result<Vec<IdealDescriptor>> {
    let space = r.space();
    let mut out = Vec::new();
    let candidates: Vec<DefinableSet> = match &**space {
        Space::Poset(p) => p
            .up_sets()
            .into_iter()
            .filter(|m| m & (1u64 << p.bottom()) == 0)
            .map(DefinableSet::Bits)
            .collect(),
        _ => space
            .atoms(&r.defining_sets())?
            .into_iter()
            .filter(|(_, rep)| *rep != Point::Generic)
            .map(|(atom, _)| space.closure(&atom))
            .collect::<std::result::Result<_, _>>()?,
    };
    for c in candidates {
        let sharp = space.minimal_points(&c)?;
        out.push(IdealDescriptor::new(space.clone(), c, sharp)?);
    }
    Ok(out)
}

/// `Σ(ℓ)`: primes at which some primary ideal has positive colength,
/// reported without the generic point.
pub fn sigma_support(pair: &StableOpPair) -> DefinableSet {
    let space = pair.space();
    space.max_part(&space.union(pair.delta(), pair.pi()).expect("same space"))
}

/// Membership of the length function `ℓ♯ = Σ_{P∈Σ} ℓ ⊗ D_P`: an ideal is
/// a member iff each localization at a point of `Σ` is.
fn rebuilt_member(pair: &StableOpPair, sigma: &DefinableSet, ideal: &UniverseIdeal) -> Result<bool> {
    let ideal = match ideal {
        // the zero ideal localizes to itself (and Σ meets the zero prime exactly when it is not a member)
        UniverseIdeal::Zero => return pair.member_universe(ideal),
        UniverseIdeal::Proper(i) => i,
    };
    let space = pair.space();
    let relevant = space.intersection(sigma, ideal.c())?;
    if space.is_empty(&relevant) {
        return Ok(true);
    }
    let generators = [pair.delta(), pair.pi(), ideal.sharp(), ideal.c(), sigma];
    for (_, rep) in space.atoms(&generators)? {
        if space.contains(&relevant, &rep) && !pair.member(&ideal.localize(&rep)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rebuilds the pair from its localized pieces over `Σ` and checks that
/// nothing changed (`ℓ = ℓ♯`).
pub fn sharp_rebuild(pair: &StableOpPair) -> Result<StableOpPair> {
    let space = pair.space();
    if !space.is_min_scattered() {
        return Err(SslabError::NotMinScattered);
    }
    let sigma = sigma_support(pair);
    let probe = [pair.delta(), pair.pi()];
    let rebuilt =
        stable_normalize(pair.descriptor().clone(), &probe, |i| rebuilt_member(pair, &sigma, i))?;
    if rebuilt == *pair {
        return Ok(rebuilt);
    }
    let mut candidates = vec![UniverseIdeal::Zero];
    let mut generators = probe.to_vec();
    generators.push(pair.descriptor().idempotent());
    for (_, rep) in space.atoms(&generators)? {
        if rep != space.generic_point() {
            candidates.push(UniverseIdeal::Proper(IdealDescriptor::prime(space.clone(), &rep, false)?));
            if space.contains(&pair.descriptor().admissible(), &rep) {
                candidates.push(UniverseIdeal::Proper(IdealDescriptor::prime(space.clone(), &rep, true)?));
            }
        }
    }
    for ideal in candidates {
        if pair.member_universe(&ideal)? != rebuilt.member_universe(&ideal)? {
            return Err(SslabError::RebuildMismatch { ideal: ideal.render() });
        }
    }
    Err(SslabError::RebuildMismatch { ideal: "none found in the probe algebra".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prufer::PruferDescriptor;
    use crate::spaces::poset::Poset;
    use std::sync::Arc;

    fn v3() -> Arc<PruferDescriptor> {
        let s = Arc::new(Space::Poset(
            Poset::new(vec!["o".into(), "p".into(), "q".into()], &[(0, 1), (0, 2)]).unwrap(),
        ));
        Arc::new(PruferDescriptor::new(s, DefinableSet::Bits(0b010), None).unwrap())
    }

    fn pair(d: &Arc<PruferDescriptor>, delta: u64, pi: u64) -> StableOpPair {
        StableOpPair::validate(d.clone(), &DefinableSet::Bits(delta), &DefinableSet::Bits(pi)).unwrap()
    }

    fn ideal(d: &Arc<PruferDescriptor>, c: u64, sharp: u64) -> IdealDescriptor {
        IdealDescriptor::new(d.space().clone(), DefinableSet::Bits(c), DefinableSet::Bits(sharp)).unwrap()
    }

    fn length(p: &StableOpPair) -> SingularLengthView {
        SingularLengthView::new(LocalizingSystemView::new(Source::Pair(p.clone())))
    }

    #[test]
    fn tau_examples() {
        let d = v3();
        let mixed = pair(&d, 0b001, 0b010);
        assert_eq!(colength_tau(&length(&mixed), &ideal(&d, 0b100, 0)).unwrap(), Tau::Zero);
        assert_eq!(colength_tau(&length(&mixed), &ideal(&d, 0b010, 0b010)).unwrap(), Tau::Infinity);
        let trivial = pair(&d, 0, 0);
        assert_eq!(colength_tau(&length(&trivial), &ideal(&d, 0b110, 0b110)).unwrap(), Tau::Zero);
    }

    #[test]
    fn radicality_examples() {
        let d = v3();
        let view = |p: StableOpPair| LocalizingSystemView::new(Source::Pair(p));
        assert!(is_radical_ls(&view(pair(&d, 0b011, 0))).unwrap().answer);
        let verdict = is_radical_ls(&view(pair(&d, 0b001, 0b010))).unwrap();
        assert!(!verdict.answer);
        assert_eq!(verdict.witness.unwrap(), ideal(&d, 0b010, 0b010));
        let cantor = Arc::new(Space::Cantor);
        let sup = RadicalOp::punctured(cantor.clone(), cantor.max_set(), cantor.max_set()).unwrap();
        assert!(is_radical_ls(&LocalizingSystemView::new(Source::Radical(sup))).unwrap().answer);
    }

    #[test]
    fn sigma_examples() {
        let d = v3();
        assert_eq!(sigma_support(&pair(&d, 0b001, 0b010)), DefinableSet::Bits(0b010));
        assert_eq!(sigma_support(&pair(&d, 0b011, 0)), DefinableSet::Bits(0b010));
        assert_eq!(sigma_support(&pair(&d, 0, 0)), DefinableSet::Bits(0));
    }

    #[test]
    fn sharp_rebuild_examples() {
        let d = v3();
        for p in [pair(&d, 0b001, 0b010), pair(&d, 0b111, 0), pair(&d, 0b001, 0), pair(&d, 0, 0)] {
            assert_eq!(sharp_rebuild(&p).unwrap(), p);
        }
        let cantor = Arc::new(Space::Cantor);
        let cd = Arc::new(PruferDescriptor::new(cantor.clone(), cantor.max_set(), None).unwrap());
        let p = StableOpPair::spectral(cd, &cantor.max_set()).unwrap();
        assert_eq!(sharp_rebuild(&p), Err(SslabError::NotMinScattered));
    }
}
