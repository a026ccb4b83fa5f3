//! Seeded random generators for sets, ideals, operations and pairs, used by
//! the `verify` suites and the property tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ordinal::Ordinal;
use crate::prufer::{PruferDescriptor, StableOpPair};
use crate::radical::RadicalOp;
use crate::spaces::cantor::{CantorPoint, CantorSet, Clopen};
use crate::spaces::ordset::{End, OrdSet};
use crate::spaces::poset::{bit, members};
use crate::spaces::{DefinableSet, Space};
use crate::spectral::{IdealDescriptor, SpectralOp};

fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| if rng.gen_bool(0.5) { '0' } else { '1' }).collect()
}

/// An ordinal in `[0, top]`, biased towards values with few terms.
pub fn ordinal<R: Rng>(rng: &mut R, top: &Ordinal) -> Ordinal {
    let degree = top.terms().first().map_or(0, |t| t.0);
    for _ in 0..8 {
        let count = rng.gen_range(0..=3usize);
        let mut exps: Vec<u32> = (0..count).map(|_| rng.gen_range(0..=degree)).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.dedup();
        let terms = exps.into_iter().map(|e| (e, rng.gen_range(1..=3u64))).collect();
        let x = Ordinal::from_terms(terms).expect("canonical terms");
        if &x <= top {
            return x;
        }
    }
    top.clone()
}

fn ordinal_cell<R: Rng>(rng: &mut R, top: &Ordinal) -> OrdSet {
    let a = ordinal(rng, top);
    let b = ordinal(rng, top);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let end = if rng.gen_bool(0.2) { End::Top } else { End::At(hi.successor()) };
    let degree = top.terms().first().map_or(0, |t| t.0);
    let level = rng.gen_range(0..=degree + 1);
    match rng.gen_range(0..4) {
        0 => OrdSet::point(&lo, top),
        1 => OrdSet::level_cell(&lo, &end, level.min(degree), top),
        _ => OrdSet::cell(&lo, &end, level, top),
    }
}

fn ordset<R: Rng>(rng: &mut R, top: &Ordinal) -> OrdSet {
    let mut s = OrdSet::empty();
    for _ in 0..rng.gen_range(0..=3) {
        s = s.union(&ordinal_cell(rng, top));
    }
    if rng.gen_bool(0.3) {
        s = s.difference(&ordinal_cell(rng, top));
    }
    s
}

pub fn cantor_point<R: Rng>(rng: &mut R) -> CantorPoint {
    let prefix = random_word(rng, 3);
    let mut period = random_word(rng, 2);
    if period.is_empty() {
        period.push(if rng.gen_bool(0.5) { '0' } else { '1' });
    }
    CantorPoint::new(&prefix, &period).expect("binary words")
}

fn cantor_set<R: Rng>(rng: &mut R) -> CantorSet {
    let words: Vec<String> = (0..rng.gen_range(0..=3)).map(|_| random_word(rng, 3)).collect();
    let mut s = CantorSet::from_clopen(Clopen::from_words(words));
    if rng.gen_bool(0.5) {
        s = s.union(&CantorSet::points((0..rng.gen_range(1..=2)).map(|_| cantor_point(rng))));
    }
    if rng.gen_bool(0.4) {
        s = s.difference(&CantorSet::points((0..rng.gen_range(1..=2)).map(|_| cantor_point(rng))));
    }
    s
}

/// A random definable set; `generic` controls whether the generic point may appear.
pub fn set<R: Rng>(rng: &mut R, space: &Space, generic: bool) -> DefinableSet {
    let with_generic = generic && rng.gen_bool(0.3);
    let s = match space {
        Space::Poset(p) => DefinableSet::Bits(rng.gen::<u64>() & p.full()),
        Space::Ordinal { max_top } => DefinableSet::Cells { generic: with_generic, cells: ordset(rng, max_top) },
        Space::Cantor => DefinableSet::Simple { generic: with_generic, set: cantor_set(rng) },
    };
    if generic {
        s
    } else {
        space.max_part(&s)
    }
}

/// A random proper closed set.
pub fn closed_set<R: Rng>(rng: &mut R, space: &Space) -> DefinableSet {
    let s = set(rng, space, false);
    space.closure(&s).expect("same space")
}

/// A random nonzero ideal; the sharp locus stays inside `branched` when given.
pub fn ideal<R: Rng>(rng: &mut R, space: &Arc<Space>, branched: Option<&DefinableSet>) -> IdealDescriptor {
    let c = closed_set(rng, space);
    let min = space.minimal_points(&c).expect("closed");
    let mut sharp = space.intersection(&min, &set(rng, space, false)).expect("same space");
    if let Some(b) = branched {
        sharp = space.intersection(&sharp, b).expect("same space");
    }
    IdealDescriptor::new(space.clone(), c, sharp).expect("valid by construction")
}

pub fn spectral_op<R: Rng>(rng: &mut R, space: &Arc<Space>) -> SpectralOp {
    let delta = set(rng, space, false);
    SpectralOp::canonicalize(space.clone(), &delta).expect("same space")
}

/// A random family of one to `max_len` spectral operations.
pub fn family<R: Rng>(rng: &mut R, space: &Arc<Space>, max_len: usize) -> Vec<SpectralOp> {
    (0..rng.gen_range(1..=max_len.max(1))).map(|_| spectral_op(rng, space)).collect()
}

pub fn join_op<R: Rng>(rng: &mut R, space: &Arc<Space>, max_len: usize) -> RadicalOp {
    RadicalOp::join(family(rng, space, max_len)).expect("nonempty family")
}

/// A random Prüfer descriptor (idempotent flags only; branched defaults).
pub fn descriptor<R: Rng>(rng: &mut R, space: &Arc<Space>) -> Arc<PruferDescriptor> {
    let idem = set(rng, space, false);
    Arc::new(PruferDescriptor::new(space.clone(), idem, None).expect("valid flags"))
}

/// A random valid pair on `descriptor`.
pub fn pair<R: Rng>(rng: &mut R, descriptor: &Arc<PruferDescriptor>) -> StableOpPair {
    let space = descriptor.space().clone();
    let delta = if rng.gen_bool(0.1) {
        space.empty_set()
    } else {
        let d = space.generizations(&set(rng, &space, false)).expect("same space");
        space.union(&d, &space.generic_set()).expect("same space")
    };
    let candidates = space
        .difference(&space.intersection(&descriptor.admissible(), &set(rng, &space, false)).expect("same"), &delta)
        .expect("same space");
    let pi = match (&*space, &candidates, &delta) {
        (Space::Poset(p), DefinableSet::Bits(m), DefinableSet::Bits(d)) => {
            let ok = members(*m).filter(|&q| p.down(q) & !bit(q) & !d == 0);
            DefinableSet::Bits(ok.fold(0, |acc, q| acc | bit(q)))
        }
        _ if space.contains_generic(&delta) => candidates,
        _ => space.empty_set(),
    };
    StableOpPair::validate(descriptor.clone(), &delta, &pi).expect("valid by construction")
}

/// One of the three example backends at random.
pub fn one_dim_space<R: Rng>(rng: &mut R) -> Arc<Space> {
    let tops = ["w", "w^2", "w^3", "w^2*2+w+3"];
    match rng.gen_range(0..5) {
        0 => Arc::new(Space::Cantor),
        _ => Arc::new(Space::ordinal(tops.choose(rng).expect("nonempty").parse().expect("literal"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let space = one_dim_space(&mut rng);
            let c = closed_set(&mut rng, &space);
            assert!(space.is_closed(&c).unwrap() && !space.contains_generic(&c));
            let d = descriptor(&mut rng, &space);
            let p = pair(&mut rng, &d);
            assert!(space.is_subset(p.pi(), &d.admissible()).unwrap());
            let top: Ordinal = "w^3".parse().unwrap();
            assert!(ordinal(&mut rng, &top) <= top);
        }
    }
}
