//! Decidable models of prime spectra.
//!
//! Three backends share one interface:
//!
//! * [`Space::Poset`]: a finite poset with a unique minimum (the zero ideal),
//!   ordered by inclusion of primes; closed sets are up-sets.
//! * [`Space::Ordinal`]: `{generic} ∪ Max` with `Max = [0, max_top]` carrying
//!   the order topology. Every closed subset of `Max` is scattered.
//! * [`Space::Cantor`]: `{generic} ∪ Max` with `Max` the Cantor space.
//!
//! In the one-dimensional backends every nonempty open set contains the
//! generic point, so a set containing it is dense, and a subspace containing
//! it has the generic point as its only isolated point.

pub mod cantor;
pub mod ordset;
pub mod poset;

use std::fmt;

use thiserror::Error;

use crate::ordinal::Ordinal;
use cantor::{CantorPoint, CantorSet};
use ordset::OrdSet;
use poset::{bit, members, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("backend mismatch: expected a {expected} set, found a {found} set")]
    BackendMismatch { expected: &'static str, found: &'static str },
    #[error("set {0} is not Zariski-closed")]
    NotClosed(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("bad literal: {0}")]
    BadLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Poset(Poset),
    Ordinal { max_top: Ordinal },
    Cantor,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Generic,
    Poset(usize),
    Ordinal(Ordinal),
    Cantor(CantorPoint),
}

/// A decidable subset of a spectrum. `generic` records the generic point
/// in the one-dimensional backends; for posets it is the minimum's bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DefinableSet {
    Bits(u64),
    Cells { generic: bool, cells: OrdSet },
    Simple { generic: bool, set: CantorSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Complement,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CbRank {
    Rank(u32),
    NotScattered,
}

impl fmt::Display for CbRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CbRank::Rank(r) => write!(f, "{r}"),
            CbRank::NotScattered => f.write_str("not-scattered"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectReport {
    pub is_scattered: bool,
    pub is_perfect: bool,
    pub witness_isolated: Option<Point>,
}

impl DefinableSet {
    pub fn backend(&self) -> &'static str {
        match self {
            DefinableSet::Bits(_) => "poset",
            DefinableSet::Cells { .. } => "ordinal",
            DefinableSet::Simple { .. } => "cantor",
        }
    }

    /// Rough size of the representation; bounds fixpoint iteration counts.
    pub fn complexity(&self) -> usize {
        match self {
            DefinableSet::Bits(m) => m.count_ones() as usize,
            DefinableSet::Cells { cells, .. } => cells.complexity() + 1,
            DefinableSet::Simple { set, .. } => set.complexity() + 1,
        }
    }
}

impl Space {
    pub fn ordinal(max_top: Ordinal) -> Self {
        Space::Ordinal { max_top }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            Space::Poset(_) => "poset",
            Space::Ordinal { .. } => "ordinal",
            Space::Cantor => "cantor",
        }
    }

    pub fn as_poset(&self) -> Option<&Poset> {
        match self {
            Space::Poset(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_one_dimensional(&self) -> bool {
        !matches!(self, Space::Poset(_))
    }

    /// Whether every closed subset of the spectrum has a scattered space of
    /// minimal points (finite and ordinal backends; Cantor space is perfect).
    pub fn is_min_scattered(&self) -> bool {
        !matches!(self, Space::Cantor)
    }

    pub fn check(&self, s: &DefinableSet) -> Result<(), SpaceError> {
        if self.backend() == s.backend() {
            Ok(())
        } else {
            Err(SpaceError::BackendMismatch { expected: self.backend(), found: s.backend() })
        }
    }

    pub fn empty_set(&self) -> DefinableSet {
        match self {
            Space::Poset(_) => DefinableSet::Bits(0),
            Space::Ordinal { .. } => DefinableSet::Cells { generic: false, cells: OrdSet::empty() },
            Space::Cantor => DefinableSet::Simple { generic: false, set: CantorSet::empty() },
        }
    }

    /// The whole spectrum.
    pub fn full_set(&self) -> DefinableSet {
        match self {
            Space::Poset(p) => DefinableSet::Bits(p.full()),
            Space::Ordinal { max_top } => DefinableSet::Cells { generic: true, cells: OrdSet::full(max_top) },
            Space::Cantor => DefinableSet::Simple { generic: true, set: CantorSet::full() },
        }
    }

    /// Every point except the generic one (for one-dimensional backends, `Max`).
    pub fn max_set(&self) -> DefinableSet {
        self.difference(&self.full_set(), &self.generic_set()).expect("same backend")
    }

    pub fn generic_set(&self) -> DefinableSet {
        match self {
            Space::Poset(p) => DefinableSet::Bits(bit(p.bottom())),
            Space::Ordinal { .. } => DefinableSet::Cells { generic: true, cells: OrdSet::empty() },
            Space::Cantor => DefinableSet::Simple { generic: true, set: CantorSet::empty() },
        }
    }

    pub fn generic_point(&self) -> Point {
        match self {
            Space::Poset(p) => Point::Poset(p.bottom()),
            _ => Point::Generic,
        }
    }

    pub fn singleton(&self, point: &Point) -> Result<DefinableSet, SpaceError> {
        let mismatch = || SpaceError::UnknownPoint(format!("{point:?} is not a point of this {} space", self.backend()));
        Ok(match (self, point) {
            (Space::Poset(p), Point::Poset(i)) if *i < p.len() => DefinableSet::Bits(bit(*i)),
            (Space::Poset(p), Point::Generic) => DefinableSet::Bits(bit(p.bottom())),
            (Space::Ordinal { .. } | Space::Cantor, Point::Generic) => self.generic_set(),
            (Space::Ordinal { max_top }, Point::Ordinal(x)) if x <= max_top => {
                DefinableSet::Cells { generic: false, cells: OrdSet::point(x, max_top) }
            }
            (Space::Cantor, Point::Cantor(x)) => {
                DefinableSet::Simple { generic: false, set: CantorSet::points([x.clone()]) }
            }
            _ => return Err(mismatch()),
        })
    }

    pub fn contains(&self, s: &DefinableSet, point: &Point) -> bool {
        match (s, point) {
            (DefinableSet::Bits(m), Point::Poset(i)) => *i < 64 && m & bit(*i) != 0,
            (DefinableSet::Bits(m), Point::Generic) => {
                self.as_poset().is_some_and(|p| m & bit(p.bottom()) != 0)
            }
            (DefinableSet::Cells { generic, .. } | DefinableSet::Simple { generic, .. }, Point::Generic) => *generic,
            (DefinableSet::Cells { cells, .. }, Point::Ordinal(x)) => cells.contains(x),
            (DefinableSet::Simple { set, .. }, Point::Cantor(x)) => set.contains(x),
            _ => false,
        }
    }

    pub fn contains_generic(&self, s: &DefinableSet) -> bool {
        self.contains(s, &self.generic_point())
    }

    pub fn is_empty(&self, s: &DefinableSet) -> bool {
        match s {
            DefinableSet::Bits(m) => *m == 0,
            DefinableSet::Cells { generic, cells } => !generic && cells.is_empty(),
            DefinableSet::Simple { generic, set } => !generic && set.is_empty(),
        }
    }

    fn zip(
        &self,
        a: &DefinableSet,
        b: &DefinableSet,
        f: impl Fn(bool, bool) -> bool,
        bits: impl Fn(u64, u64) -> u64,
        ord: impl Fn(&OrdSet, &OrdSet) -> OrdSet,
        cantor: impl Fn(&CantorSet, &CantorSet) -> CantorSet,
    ) -> Result<DefinableSet, SpaceError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (DefinableSet::Bits(x), DefinableSet::Bits(y)) => DefinableSet::Bits(bits(*x, *y)),
            (DefinableSet::Cells { generic: g, cells: x }, DefinableSet::Cells { generic: h, cells: y }) => {
                DefinableSet::Cells { generic: f(*g, *h), cells: ord(x, y) }
            }
            (DefinableSet::Simple { generic: g, set: x }, DefinableSet::Simple { generic: h, set: y }) => {
                DefinableSet::Simple { generic: f(*g, *h), set: cantor(x, y) }
            }
            _ => unreachable!("backends checked"),
        })
    }

    pub fn union(&self, a: &DefinableSet, b: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.zip(a, b, |x, y| x || y, |x, y| x | y, OrdSet::union, CantorSet::union)
    }

    pub fn intersection(&self, a: &DefinableSet, b: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.zip(a, b, |x, y| x && y, |x, y| x & y, OrdSet::intersection, CantorSet::intersection)
    }

    pub fn difference(&self, a: &DefinableSet, b: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.zip(a, b, |x, y| x && !y, |x, y| x & !y, OrdSet::difference, CantorSet::difference)
    }

    /// Complement relative to the whole spectrum.
    pub fn complement(&self, a: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.difference(&self.full_set(), a)
    }

    pub fn combine(&self, op: SetOp, a: &DefinableSet, b: Option<&DefinableSet>) -> Result<DefinableSet, SpaceError> {
        let rhs = || b.ok_or_else(|| SpaceError::BadLiteral("binary set operation needs two operands".into()));
        match op {
            SetOp::Union => self.union(a, rhs()?),
            SetOp::Intersect => self.intersection(a, rhs()?),
            SetOp::Difference => self.difference(a, rhs()?),
            SetOp::Complement => self.complement(a),
        }
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a DefinableSet>>(&self, sets: I) -> Result<DefinableSet, SpaceError> {
        sets.into_iter().try_fold(self.empty_set(), |acc, s| self.union(&acc, s))
    }

    pub fn is_subset(&self, a: &DefinableSet, b: &DefinableSet) -> Result<bool, SpaceError> {
        Ok(self.is_empty(&self.difference(a, b)?))
    }

    pub fn meets(&self, a: &DefinableSet, b: &DefinableSet) -> Result<bool, SpaceError> {
        Ok(!self.is_empty(&self.intersection(a, b)?))
    }

    /// The set without its generic point.
    pub fn max_part(&self, a: &DefinableSet) -> DefinableSet {
        self.difference(a, &self.generic_set()).unwrap_or_else(|_| a.clone())
    }

    /// Smallest Zariski-closed set containing `a`.
    pub fn closure(&self, a: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.check(a)?;
        Ok(match (self, a) {
            (Space::Poset(p), DefinableSet::Bits(m)) => DefinableSet::Bits(p.upward_closure(*m)),
            (_, DefinableSet::Cells { generic: true, .. } | DefinableSet::Simple { generic: true, .. }) => {
                self.full_set()
            }
            (Space::Ordinal { max_top }, DefinableSet::Cells { cells, .. }) => {
                DefinableSet::Cells { generic: false, cells: cells.closure(max_top) }
            }
            (Space::Cantor, DefinableSet::Simple { set, .. }) => DefinableSet::Simple { generic: false, set: set.closure() },
            _ => unreachable!("backends checked"),
        })
    }

    pub fn is_closed(&self, a: &DefinableSet) -> Result<bool, SpaceError> {
        Ok(&self.closure(a)? == a)
    }

    pub fn require_closed(&self, a: &DefinableSet) -> Result<(), SpaceError> {
        if self.is_closed(a)? {
            Ok(())
        } else {
            Err(SpaceError::NotClosed(self.render_set(a)))
        }
    }

    /// Downward closure under specialization.
    pub fn generizations(&self, a: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.check(a)?;
        Ok(match (self, a) {
            (Space::Poset(p), DefinableSet::Bits(m)) => DefinableSet::Bits(p.downward_closure(*m)),
            (_, DefinableSet::Cells { cells, .. }) => {
                DefinableSet::Cells { generic: !self.is_empty(a), cells: cells.clone() }
            }
            (_, DefinableSet::Simple { set, .. }) => {
                DefinableSet::Simple { generic: !self.is_empty(a), set: set.clone() }
            }
            _ => unreachable!("backends checked"),
        })
    }

    /// Minimal points of a closed set.
    pub fn minimal_points(&self, c: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.require_closed(c)?;
        Ok(match (self, c) {
            (Space::Poset(p), DefinableSet::Bits(m)) => DefinableSet::Bits(p.minimal(*m)),
            _ if self.contains_generic(c) => self.generic_set(),
            _ => c.clone(),
        })
    }

    /// Points isolated in the subspace topology of `s`.
    pub fn isolated_points(&self, s: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.check(s)?;
        Ok(match (self, s) {
            (Space::Poset(p), DefinableSet::Bits(m)) => DefinableSet::Bits(p.minimal(*m)),
            (_, DefinableSet::Cells { generic: true, .. } | DefinableSet::Simple { generic: true, .. }) => {
                self.generic_set()
            }
            (Space::Ordinal { max_top }, DefinableSet::Cells { cells, .. }) => {
                DefinableSet::Cells { generic: false, cells: cells.isolated(max_top) }
            }
            (Space::Cantor, DefinableSet::Simple { set, .. }) => {
                DefinableSet::Simple { generic: false, set: set.isolated() }
            }
            _ => unreachable!("backends checked"),
        })
    }

    /// `s` minus its isolated points.
    pub fn derived_set(&self, s: &DefinableSet) -> Result<DefinableSet, SpaceError> {
        self.difference(s, &self.isolated_points(s)?)
    }

    /// Whether `a ∩ c` is dense in the closed set `c`.
    pub fn is_dense_in(&self, a: &DefinableSet, c: &DefinableSet) -> Result<bool, SpaceError> {
        self.require_closed(c)?;
        let inside = self.intersection(a, c)?;
        self.is_subset(c, &self.closure(&inside)?)
    }

    pub fn is_scattered(&self, s: &DefinableSet) -> Result<bool, SpaceError> {
        Ok(self.cb_rank(s)? != CbRank::NotScattered)
    }

    /// Least `m` with an empty `m`-th derived set.
    pub fn cb_rank(&self, s: &DefinableSet) -> Result<CbRank, SpaceError> {
        self.check(s)?;
        if let DefinableSet::Simple { set, .. } = s {
            if !set.clopen().is_empty() {
                return Ok(CbRank::NotScattered);
            }
        }
        let mut current = s.clone();
        let mut rank = 0;
        // each derivation strictly removes the lowest ν-level (or the generic point)
        while !self.is_empty(&current) {
            let next = self.derived_set(&current)?;
            if next == current {
                return Ok(CbRank::NotScattered);
            }
            current = next;
            rank += 1;
        }
        Ok(CbRank::Rank(rank))
    }

    pub fn perfect_report(&self, s: &DefinableSet) -> Result<PerfectReport, SpaceError> {
        let isolated = self.isolated_points(s)?;
        Ok(PerfectReport {
            is_scattered: self.is_scattered(s)?,
            is_perfect: self.is_empty(&isolated),
            witness_isolated: self.least_point(&isolated),
        })
    }

    /// A canonical member: the generic point if present, then the least
    /// poset index, least ordinal, or an isolated Cantor point.
    pub fn least_point(&self, s: &DefinableSet) -> Option<Point> {
        if self.is_empty(s) {
            return None;
        }
        if self.contains_generic(s) {
            return Some(self.generic_point());
        }
        match s {
            DefinableSet::Bits(m) => members(*m).next().map(Point::Poset),
            DefinableSet::Cells { cells, .. } => cells.min().map(Point::Ordinal),
            DefinableSet::Simple { set, .. } => set.pick().map(Point::Cantor),
        }
    }

    /// Atoms of the boolean algebra generated by `sets`, each with a
    /// representative point. The generic point is always its own atom.
    pub fn atoms(&self, sets: &[&DefinableSet]) -> Result<Vec<(DefinableSet, Point)>, SpaceError> {
        for s in sets {
            self.check(s)?;
        }
        let mut out = Vec::new();
        match self {
            Space::Poset(p) => {
                for i in 0..p.len() {
                    out.push((DefinableSet::Bits(bit(i)), Point::Poset(i)));
                }
            }
            Space::Ordinal { max_top } => {
                out.push((self.generic_set(), Point::Generic));
                let parts: Vec<&OrdSet> = sets
                    .iter()
                    .filter_map(|s| match s {
                        DefinableSet::Cells { cells, .. } => Some(cells),
                        _ => None,
                    })
                    .collect();
                for (atom, rep) in OrdSet::atoms(&parts, max_top) {
                    out.push((DefinableSet::Cells { generic: false, cells: atom }, Point::Ordinal(rep)));
                }
            }
            Space::Cantor => {
                out.push((self.generic_set(), Point::Generic));
                let parts: Vec<&CantorSet> = sets
                    .iter()
                    .filter_map(|s| match s {
                        DefinableSet::Simple { set, .. } => Some(set),
                        _ => None,
                    })
                    .collect();
                for (atom, rep) in CantorSet::atoms(&parts) {
                    out.push((DefinableSet::Simple { generic: false, set: atom }, Point::Cantor(rep)));
                }
            }
        }
        Ok(out)
    }

    /// The Zariski closure of a point, `V(P)`.
    pub fn point_closure(&self, point: &Point) -> Result<DefinableSet, SpaceError> {
        self.closure(&self.singleton(point)?)
    }

    /// Primes strictly below `point`.
    pub fn strictly_below(&self, point: &Point) -> Result<DefinableSet, SpaceError> {
        let single = self.singleton(point)?;
        self.difference(&self.generizations(&single)?, &single)
    }

    pub fn render_point(&self, point: &Point) -> String {
        match (self, point) {
            (Space::Poset(p), Point::Poset(i)) => p.name(*i).to_string(),
            (_, Point::Generic) => "generic".to_string(),
            (_, Point::Ordinal(x)) => x.to_string(),
            (_, Point::Cantor(x)) => format!("pt \"{x}\""),
            (_, Point::Poset(i)) => format!("#{i}"),
        }
    }

    /// Canonical literal for a set, in the document syntax.
    pub fn render_set(&self, s: &DefinableSet) -> String {
        match (self, s) {
            (Space::Poset(p), DefinableSet::Bits(m)) => p.render_mask(*m),
            (Space::Ordinal { max_top }, DefinableSet::Cells { generic, cells }) => {
                let body = cells.render(max_top);
                if *generic {
                    format!("{body} + generic")
                } else {
                    body
                }
            }
            (Space::Cantor, DefinableSet::Simple { generic, set }) => match (*generic, set.is_empty()) {
                (true, true) => "generic".to_string(),
                (true, false) => format!("{} + generic", set.render()),
                (false, _) => set.render(),
            },
            _ => format!("<{} set in a {} space>", s.backend(), self.backend()),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Poset(p) => write!(f, "{p}"),
            Space::Ordinal { max_top } => write!(f, "ordinal({max_top})"),
            Space::Cantor => f.write_str("cantor"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cantor::Clopen;
    use ordset::End;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn v3() -> Space {
        Space::Poset(Poset::new(vec!["o".into(), "p".into(), "q".into()], &[(0, 1), (0, 2)]).unwrap())
    }

    fn diamond() -> Space {
        let names = ["o", "p", "q", "m"].map(String::from).to_vec();
        Space::Poset(Poset::new(names, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
    }

    fn cells(space: &Space, a: &str, b: &str, r: u32) -> DefinableSet {
        let Space::Ordinal { max_top } = space else { panic!() };
        DefinableSet::Cells { generic: false, cells: OrdSet::cell(&o(a), &End::At(o(b).successor()), r, max_top) }
    }

    fn cyl(w: &str) -> DefinableSet {
        DefinableSet::Simple { generic: false, set: CantorSet::from_clopen(Clopen::cylinder(w).unwrap()) }
    }

    fn cpt(s: &str) -> DefinableSet {
        DefinableSet::Simple { generic: false, set: CantorSet::points([s.parse().unwrap()]) }
    }

    #[test]
    fn boolean_examples() {
        let w = Space::ordinal(o("w"));
        let c = cells(&w, "0", "w", 1);
        let comp = w.difference(&w.max_set(), &c).unwrap();
        assert_eq!(w.render_set(&comp), "cells[[1,w) nu=0]");
        let cantor = Space::Cantor;
        assert_eq!(cantor.union(&cyl("0"), &cyl("1")).unwrap(), cantor.max_set());
        let v = v3();
        assert!(v.is_empty(&v.intersection(&DefinableSet::Bits(0b010), &DefinableSet::Bits(0b100)).unwrap()));
        assert!(w.union(&c, &cyl("0")).is_err());
    }

    #[test]
    fn closure_examples() {
        let w = Space::ordinal(o("w"));
        let below = DefinableSet::Cells {
            generic: false,
            cells: OrdSet::cell(&o("0"), &End::At(o("w")), 0, &o("w")),
        };
        assert_eq!(w.closure(&below).unwrap(), w.max_set());
        let v = v3();
        assert_eq!(v.closure(&DefinableSet::Bits(0b001)).unwrap(), DefinableSet::Bits(0b111));
        let cantor = Space::Cantor;
        let punctured = cantor.difference(&cyl("01"), &cpt("01(0)")).unwrap();
        assert_eq!(cantor.closure(&punctured).unwrap(), cyl("01"));
    }

    #[test]
    fn generization_examples() {
        let v = v3();
        assert_eq!(v.generizations(&DefinableSet::Bits(0b010)).unwrap(), DefinableSet::Bits(0b011));
        assert_eq!(v.generizations(&DefinableSet::Bits(0)).unwrap(), DefinableSet::Bits(0));
        let cantor = Space::Cantor;
        let g = cantor.generizations(&cyl("0")).unwrap();
        assert_eq!(g, cantor.union(&cyl("0"), &cantor.generic_set()).unwrap());
    }

    #[test]
    fn minimal_point_examples() {
        let d = diamond();
        assert_eq!(d.minimal_points(&DefinableSet::Bits(0b1110)).unwrap(), DefinableSet::Bits(0b0110));
        assert_eq!(d.minimal_points(&d.full_set()).unwrap(), d.generic_set());
        let w = Space::ordinal(o("w^2"));
        let c = cells(&w, "w", "w^2", 1);
        assert_eq!(w.minimal_points(&c).unwrap(), c);
        assert!(matches!(d.minimal_points(&DefinableSet::Bits(0b0010)), Err(SpaceError::NotClosed(_))));
    }

    #[test]
    fn isolated_and_derived_examples() {
        let w = Space::ordinal(o("w"));
        let iso = w.isolated_points(&w.max_set()).unwrap();
        assert_eq!(iso, DefinableSet::Cells { generic: false, cells: OrdSet::cell(&o("0"), &End::At(o("w")), 0, &o("w")) });
        assert_eq!(w.derived_set(&w.max_set()).unwrap(), w.singleton(&Point::Ordinal(o("w"))).unwrap());
        let w2 = Space::ordinal(o("w^2"));
        let d = w2.derived_set(&w2.max_set()).unwrap();
        assert_eq!(d, DefinableSet::Cells { generic: false, cells: OrdSet::cell(&o("1"), &End::Top, 1, &o("w^2")) });
        let cantor = Space::Cantor;
        let s = cantor.union(&cyl("0"), &cpt("1(0)")).unwrap();
        assert_eq!(cantor.isolated_points(&s).unwrap(), cpt("1(0)"));
        let v = v3();
        assert_eq!(v.derived_set(&DefinableSet::Bits(0b110)).unwrap(), DefinableSet::Bits(0));
    }

    #[test]
    fn density_examples() {
        let w = Space::ordinal(o("w"));
        let below = DefinableSet::Cells { generic: false, cells: OrdSet::cell(&o("0"), &End::At(o("w")), 0, &o("w")) };
        assert!(w.is_dense_in(&below, &w.max_set()).unwrap());
        let successors = DefinableSet::Cells {
            generic: false,
            cells: OrdSet::level_cell(&o("1"), &End::At(o("w")), 0, &o("w")),
        };
        assert!(!w.is_dense_in(&successors, &w.max_set()).unwrap());
        let cantor = Space::Cantor;
        let punctured = cantor.difference(&cantor.max_set(), &cpt("0(1)")).unwrap();
        for word in ["", "0", "01", "110"] {
            assert!(cantor.is_dense_in(&punctured, &cyl(word)).unwrap());
        }
    }

    #[test]
    fn rank_examples() {
        let w2 = Space::ordinal(o("w^2"));
        assert_eq!(w2.cb_rank(&w2.max_set()).unwrap(), CbRank::Rank(3));
        let v = v3();
        assert_eq!(v.cb_rank(&DefinableSet::Bits(0b110)).unwrap(), CbRank::Rank(1));
        assert_eq!(Space::Cantor.cb_rank(&cyl("0")).unwrap(), CbRank::NotScattered);
        assert_eq!(v.cb_rank(&v.full_set()).unwrap(), CbRank::Rank(2));
    }

    #[test]
    fn perfect_report_examples() {
        let w = Space::ordinal(o("w"));
        assert_eq!(
            w.perfect_report(&w.max_set()).unwrap(),
            PerfectReport { is_scattered: true, is_perfect: false, witness_isolated: Some(Point::Ordinal(o("0"))) }
        );
        let cantor = Space::Cantor;
        assert_eq!(
            cantor.perfect_report(&cyl("0")).unwrap(),
            PerfectReport { is_scattered: false, is_perfect: true, witness_isolated: None }
        );
        assert_eq!(
            cantor.perfect_report(&cantor.empty_set()).unwrap(),
            PerfectReport { is_scattered: true, is_perfect: true, witness_isolated: None }
        );
    }

    #[test]
    fn generic_point_is_isolated_in_one_dimensional_subspaces() {
        let w = Space::ordinal(o("w"));
        assert_eq!(w.isolated_points(&w.full_set()).unwrap(), w.generic_set());
        assert_eq!(w.cb_rank(&w.full_set()).unwrap(), CbRank::Rank(3));
    }
}
