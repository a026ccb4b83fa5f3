//! Brute-force reference semantics on finite posets: every stable pair,
//! full membership tables, and lattice bounds found by scanning.

use std::sync::Arc;

use crate::error::{Result, SslabError};
use crate::prufer::{PruferDescriptor, StableOpPair};
use crate::spaces::poset::{bit, members, Poset};
use crate::spaces::{DefinableSet, Space};
use crate::spectral::{IdealDescriptor, UniverseIdeal};

/// Largest poset the exhaustive procedures accept.
pub const MAX_ORACLE_POINTS: usize = 12;

fn finite_poset(descriptor: &PruferDescriptor) -> Result<&Poset> {
    match &**descriptor.space() {
        Space::Poset(p) if p.len() <= MAX_ORACLE_POINTS => Ok(p),
        Space::Poset(p) => Err(SslabError::SizeGuard { points: p.len(), limit: MAX_ORACLE_POINTS }),
        _ => Err(SslabError::UnsupportedForm("the oracle runs on finite posets only".into())),
    }
}

fn mask(set: &DefinableSet) -> u64 {
    match set {
        DefinableSet::Bits(m) => *m,
        _ => 0,
    }
}

/// Every ideal the tables range over: the zero ideal, then each proper
/// closed set `C` with each `sharp ⊆ Min(C) ∩ branched`.
pub fn universe(descriptor: &PruferDescriptor) -> Result<Vec<UniverseIdeal>> {
    let p = finite_poset(descriptor)?;
    let space = descriptor.space();
    let branched = mask(descriptor.branched());
    let mut out = vec![UniverseIdeal::Zero];
    for c in p.up_sets() {
        if c & bit(p.bottom()) != 0 {
            continue;
        }
        let free = p.minimal(c) & branched;
        // subsets of `free` in increasing order
        let mut sharp = 0u64;
        loop {
            let ideal = IdealDescriptor::new(space.clone(), DefinableSet::Bits(c), DefinableSet::Bits(sharp))?;
            out.push(UniverseIdeal::Proper(ideal));
            if sharp == free {
                break;
            }
            sharp = (sharp.wrapping_sub(free)) & free;
        }
    }
    Ok(out)
}

/// `F^⋆` as a bit vector over a fixed universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTable {
    universe: Arc<Vec<UniverseIdeal>>,
    bits: Vec<bool>,
}

impl FTable {
    pub fn from_bits(universe: Arc<Vec<UniverseIdeal>>, bits: Vec<bool>) -> Self {
        assert_eq!(universe.len(), bits.len(), "one bit per universe entry");
        FTable { universe, bits }
    }

    pub fn universe(&self) -> &[UniverseIdeal] {
        &self.universe
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Containment of the localizing systems (the operation order).
    pub fn is_subset(&self, other: &FTable) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }
}

pub fn f_table(pair: &StableOpPair, universe: &Arc<Vec<UniverseIdeal>>) -> Result<FTable> {
    let bits = universe.iter().map(|i| pair.member_universe(i)).collect::<Result<Vec<_>>>()?;
    Ok(FTable { universe: universe.clone(), bits })
}

/// All valid pairs, ordered by `(Δ, Π)` bit masks.
pub fn enumerate_pairs(descriptor: &Arc<PruferDescriptor>) -> Result<Vec<StableOpPair>> {
    let p = finite_poset(descriptor)?;
    let admissible = mask(&descriptor.admissible());
    let mut keyed = Vec::new();
    for delta in p.down_sets() {
        let free = members(admissible & !delta)
            .filter(|&q| p.down(q) & !bit(q) & !delta == 0)
            .fold(0u64, |acc, q| acc | bit(q));
        let mut pi = 0u64;
        loop {
            keyed.push((delta, pi));
            if pi == free {
                break;
            }
            pi = (pi.wrapping_sub(free)) & free;
        }
    }
    keyed.sort_unstable();
    keyed
        .into_iter()
        .map(|(d, q)| StableOpPair::validate(descriptor.clone(), &DefinableSet::Bits(d), &DefinableSet::Bits(q)))
        .collect()
}

/// Every pair of a descriptor with its F-table.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub descriptor: Arc<PruferDescriptor>,
    pub universe: Arc<Vec<UniverseIdeal>>,
    pub pairs: Vec<StableOpPair>,
    pub tables: Vec<FTable>,
    order: Vec<Vec<bool>>,
}

impl Lattice {
    pub fn enumerate(descriptor: &Arc<PruferDescriptor>) -> Result<Self> {
        let universe = Arc::new(universe(descriptor)?);
        let pairs = enumerate_pairs(descriptor)?;
        Self::from_pairs(descriptor.clone(), universe, pairs)
    }

    pub fn from_pairs(
        descriptor: Arc<PruferDescriptor>,
        universe: Arc<Vec<UniverseIdeal>>,
        pairs: Vec<StableOpPair>,
    ) -> Result<Self> {
        let tables = pairs.iter().map(|p| f_table(p, &universe)).collect::<Result<Vec<_>>>()?;
        let order = tables.iter().map(|a| tables.iter().map(|b| a.is_subset(b)).collect()).collect();
        Ok(Lattice { descriptor, universe, pairs, tables, order })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, pair: &StableOpPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair)
    }

    /// `pairs[a] ≤ pairs[b]` by table containment.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order[a][b]
    }

    /// Greatest lower bound by scanning all lower bounds.
    pub fn glb(&self, a: usize, b: usize) -> Result<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&x| self.leq(x, a) && self.leq(x, b)).collect();
        self.extremal(&lower, |x, y| self.leq(y, x))
    }

    /// Least upper bound by scanning all upper bounds.
    pub fn lub(&self, a: usize, b: usize) -> Result<usize> {
        let upper: Vec<usize> = (0..self.len()).filter(|&x| self.leq(a, x) && self.leq(b, x)).collect();
        self.extremal(&upper, |x, y| self.leq(x, y))
    }

    /// The unique candidate `x` with `dominates(x, y)` for all candidates `y`.
    fn extremal(&self, candidates: &[usize], dominates: impl Fn(usize, usize) -> bool) -> Result<usize> {
        let mut found = candidates.iter().copied().filter(|&x| candidates.iter().all(|&y| dominates(x, y)));
        match (found.next(), found.next()) {
            (Some(x), None) => Ok(x),
            _ => Err(SslabError::NonUniqueBound),
        }
    }

    /// Covering relations `(lower, upper)` of the order (Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |a: usize, b: usize| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// `(glb, lub)` of `a` and `b` inside `pairs` under F-table containment.
pub fn lattice_oracle(pairs: &[StableOpPair], a: &StableOpPair, b: &StableOpPair) -> Result<(StableOpPair, StableOpPair)> {
    let descriptor = a.descriptor().clone();
    let universe = Arc::new(universe(&descriptor)?);
    let lattice = Lattice::from_pairs(descriptor, universe, pairs.to_vec())?;
    let missing = || SslabError::UnsupportedForm("operand is not among the enumerated pairs".into());
    let ia = lattice.index_of(a).ok_or_else(missing)?;
    let ib = lattice.index_of(b).ok_or_else(missing)?;
    Ok((lattice.pairs[lattice.glb(ia, ib)?].clone(), lattice.pairs[lattice.lub(ia, ib)?].clone()))
}

/// `u ⊆ v` as ideals: the zero ideal is below everything, otherwise a
/// larger ideal has a smaller closed set and a smaller sharp locus.
fn ideal_leq(u: &UniverseIdeal, v: &UniverseIdeal) -> bool {
    match (u, v) {
        (UniverseIdeal::Zero, _) => true,
        (_, UniverseIdeal::Zero) => false,
        (UniverseIdeal::Proper(a), UniverseIdeal::Proper(b)) => {
            let (ca, sa, cb, sb) = (mask(a.c()), mask(a.sharp()), mask(b.c()), mask(b.sharp()));
            cb & !ca == 0 && sb & !sa == 0
        }
    }
}

/// Upward closure: a member's larger ideals are members.
pub fn localizing_axioms_check(table: &FTable) -> bool {
    let u = table.universe();
    (0..u.len()).filter(|&i| table.get(i)).all(|i| (0..u.len()).all(|j| !ideal_leq(&u[i], &u[j]) || table.get(j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descriptor(names: &[&str], rel: &[(usize, usize)], idem: u64) -> Arc<PruferDescriptor> {
        let p = Poset::new(names.iter().map(|s| s.to_string()).collect(), rel).unwrap();
        Arc::new(PruferDescriptor::new(Arc::new(Space::Poset(p)), DefinableSet::Bits(idem), None).unwrap())
    }

    fn v3() -> Arc<PruferDescriptor> {
        descriptor(&["o", "p", "q"], &[(0, 1), (0, 2)], 0b010)
    }

    fn pair(d: &Arc<PruferDescriptor>, delta: u64, pi: u64) -> StableOpPair {
        StableOpPair::validate(d.clone(), &DefinableSet::Bits(delta), &DefinableSet::Bits(pi)).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_pairs(&v3()).unwrap().len(), 7);
        assert_eq!(enumerate_pairs(&descriptor(&["o", "m"], &[(0, 1)], 0)).unwrap().len(), 3);
        assert_eq!(enumerate_pairs(&descriptor(&["o", "m"], &[(0, 1)], 0b10)).unwrap().len(), 4);
    }

    /// Reference count: filter every (down-set, subset) by the validation rules.
    #[test]
    fn enumeration_matches_brute_force_filter() {
        let d = descriptor(&["o", "p", "q", "m"], &[(0, 1), (0, 2), (1, 3), (2, 3)], 0b1110);
        let brute = (0u64..16)
            .flat_map(|delta| (0u64..16).map(move |pi| (delta, pi)))
            .filter(|&(delta, _)| {
                let Space::Poset(p) = &**d.space() else { unreachable!() };
                p.downward_closure(delta) == delta
            })
            .filter(|&(delta, pi)| {
                StableOpPair::validate(d.clone(), &DefinableSet::Bits(delta), &DefinableSet::Bits(pi)).is_ok()
            })
            .count();
        assert_eq!(enumerate_pairs(&d).unwrap().len(), brute);
    }

    #[test]
    fn table_examples() {
        let d = v3();
        let lattice = Lattice::enumerate(&d).unwrap();
        let trivial = lattice.index_of(&pair(&d, 0, 0)).unwrap();
        assert!(lattice.tables[trivial].bits().iter().all(|b| *b));
        let full = lattice.index_of(&pair(&d, 0b111, 0)).unwrap();
        let members: Vec<usize> = (0..lattice.universe.len()).filter(|&i| lattice.tables[full].get(i)).collect();
        assert_eq!(members.len(), 1);
        assert!(matches!(&lattice.universe[members[0]], UniverseIdeal::Proper(i) if i.c() == &DefinableSet::Bits(0)));
        for i in 0..lattice.len() {
            for j in i + 1..lattice.len() {
                assert_ne!(lattice.tables[i], lattice.tables[j]);
            }
        }
    }

    #[test]
    fn oracle_bounds() {
        let d = v3();
        let pairs = enumerate_pairs(&d).unwrap();
        let spectral = pair(&d, 0b011, 0);
        let mixed = pair(&d, 0b001, 0b010);
        assert_eq!(lattice_oracle(&pairs, &spectral, &mixed).unwrap(), (spectral.clone(), mixed.clone()));
        assert_eq!(lattice_oracle(&pairs, &mixed, &mixed).unwrap(), (mixed.clone(), mixed));
    }

    #[test]
    fn axioms_check() {
        let d = v3();
        let lattice = Lattice::enumerate(&d).unwrap();
        assert!(lattice.tables.iter().all(localizing_axioms_check));
        let mut holed = lattice.tables[0].bits().to_vec();
        // the zero ideal is a member but some larger ideal is not
        holed[0] = true;
        let last = holed.len() - 1;
        holed[last] = false;
        assert!(!localizing_axioms_check(&FTable::from_bits(lattice.universe.clone(), holed)));
        let empty = FTable::from_bits(lattice.universe.clone(), vec![false; lattice.universe.len()]);
        assert!(localizing_axioms_check(&empty));
    }

    #[test]
    fn hasse_diagram_is_transitive_reduction() {
        let lattice = Lattice::enumerate(&v3()).unwrap();
        let covers = lattice.covers();
        let n = lattice.len();
        // reference: Warshall closure of the covers equals the strict order
        let mut reach = vec![vec![false; n]; n];
        for &(a, b) in &covers {
            reach[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        for (a, row) in reach.iter().enumerate() {
            for (b, &r) in row.iter().enumerate() {
                assert_eq!(r, a != b && lattice.leq(a, b));
            }
        }
        // no cover is implied by two others
        for &(a, b) in &covers {
            assert!(!(0..n).any(|c| c != a && c != b && reach[a][c] && reach[c][b]));
        }
    }
}
