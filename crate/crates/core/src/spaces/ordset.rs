//! Definable subsets of an ordinal interval `[0, top]`.
//!
//! A set is stored through its exact-`ν` decomposition: for each level `ℓ`
//! the points with `ν(x) = ℓ` form a finite union of runs `[start, end)`
//! whose endpoints are themselves level-`ℓ` points (or `End::Top`, meaning
//! "through `top`"). Zero (`ν = top`) is a separate flag. With endpoints
//! lifted to their level and touching runs merged, the representation is
//! canonical, and the divisibility cells `{x ∈ [a,b] : ν(x) ≥ r}` as well as
//! their boolean combinations, closures and derived sets all stay inside it.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::ordinal::{Nu, Ordinal, MAX_EXPONENT};

pub const LEVELS: usize = MAX_EXPONENT as usize + 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum End {
    At(Ordinal),
    Top,
}

impl Ord for End {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (End::At(a), End::At(b)) => a.cmp(b),
            (End::At(_), End::Top) => Ordering::Less,
            (End::Top, End::At(_)) => Ordering::Greater,
            (End::Top, End::Top) => Ordering::Equal,
        }
    }
}

impl PartialOrd for End {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: Ordinal,
    pub end: End,
}

impl Run {
    fn contains(&self, x: &Ordinal) -> bool {
        &self.start <= x && End::At(x.clone()) < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdSet {
    zero: bool,
    levels: Vec<Vec<Run>>,
}

impl Default for OrdSet {
    fn default() -> Self {
        Self::empty()
    }
}

/// Normalizes `[start, end) ∩ {ν = level}` inside `[0, top]`.
fn normalize_run(level: u32, start: &Ordinal, end: &End, top: &Ordinal) -> Option<Run> {
    let s = start.lift(level)?;
    if &s > top {
        return None;
    }
    let end = match end {
        End::Top => End::Top,
        End::At(b) => match b.lift(level) {
            Some(e) if &e <= top => End::At(e),
            _ => End::Top,
        },
    };
    if let End::At(e) = &end {
        if e <= &s {
            return None;
        }
    }
    Some(Run { start: s, end })
}

/// Sorts and merges overlapping or touching runs.
fn merge_runs(mut runs: Vec<Run>) -> Vec<Run> {
    runs.sort_by(|a, b| a.start.cmp(&b.start));
    let mut out: Vec<Run> = Vec::with_capacity(runs.len());
    for r in runs {
        if let Some(last) = out.last_mut() {
            if End::At(r.start.clone()) <= last.end {
                if r.end > last.end {
                    last.end = r.end;
                }
                continue;
            }
        }
        out.push(r);
    }
    out
}

fn runs_contain(runs: &[Run], x: &Ordinal) -> bool {
    runs.iter().any(|r| r.contains(x))
}

/// Combines two canonical run lists of one level pointwise with `f`
/// (`f(false, false)` must be false).
fn combine_runs(a: &[Run], b: &[Run], f: impl Fn(bool, bool) -> bool) -> Vec<Run> {
    let mut bounds: Vec<Ordinal> = Vec::new();
    for r in a.iter().chain(b) {
        bounds.push(r.start.clone());
        if let End::At(e) = &r.end {
            bounds.push(e.clone());
        }
    }
    bounds.sort();
    bounds.dedup();
    let mut out: Vec<Run> = Vec::new();
    for (i, x) in bounds.iter().enumerate() {
        if !f(runs_contain(a, x), runs_contain(b, x)) {
            continue;
        }
        let end = bounds.get(i + 1).map_or(End::Top, |e| End::At(e.clone()));
        match out.last_mut() {
            Some(last) if last.end == End::At(x.clone()) => last.end = end,
            _ => out.push(Run { start: x.clone(), end }),
        }
    }
    out
}

impl OrdSet {
    pub fn empty() -> Self {
        OrdSet { zero: false, levels: vec![Vec::new(); LEVELS] }
    }

    /// All of `[0, top]`.
    pub fn full(top: &Ordinal) -> Self {
        Self::cell(&Ordinal::zero(), &End::Top, 0, top)
    }

    pub fn point(x: &Ordinal, top: &Ordinal) -> Self {
        let mut s = Self::empty();
        if x > top {
            return s;
        }
        match x.nu() {
            Nu::Top => s.zero = true,
            Nu::Finite(l) => {
                s.levels[l as usize].push(Run { start: x.clone(), end: End::At(x.add(&Ordinal::omega_pow(l))) });
                s.normalize(top);
            }
        }
        s
    }

    /// `{x ∈ [start, end) : ν(x) ≥ min_level}`.
    pub fn cell(start: &Ordinal, end: &End, min_level: u32, top: &Ordinal) -> Self {
        let mut s = Self::empty();
        s.zero = start.is_zero() && end > &End::At(Ordinal::zero());
        for l in min_level..=MAX_EXPONENT {
            if let Some(r) = normalize_run(l, start, end, top) {
                s.levels[l as usize].push(r);
            }
        }
        s
    }

    /// `{x ∈ [start, end) : ν(x) = level}`; zero is never included.
    pub fn level_cell(start: &Ordinal, end: &End, level: u32, top: &Ordinal) -> Self {
        let mut s = Self::empty();
        if let Some(r) = normalize_run(level, start, end, top) {
            s.levels[level as usize].push(r);
        }
        s
    }

    fn normalize(&mut self, top: &Ordinal) {
        for (l, runs) in self.levels.iter_mut().enumerate() {
            let fresh: Vec<Run> =
                runs.iter().filter_map(|r| normalize_run(l as u32, &r.start, &r.end, top)).collect();
            *runs = merge_runs(fresh);
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.zero
    }

    pub fn levels(&self) -> &[Vec<Run>] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        !self.zero && self.levels.iter().all(Vec::is_empty)
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        match x.nu() {
            Nu::Top => self.zero,
            Nu::Finite(l) => runs_contain(&self.levels[l as usize], x),
        }
    }

    /// Number of runs, plus one for zero.
    pub fn complexity(&self) -> usize {
        usize::from(self.zero) + self.levels.iter().map(Vec::len).sum::<usize>()
    }

    fn zip_with(&self, other: &OrdSet, f: impl Fn(bool, bool) -> bool + Copy) -> OrdSet {
        OrdSet {
            zero: f(self.zero, other.zero),
            levels: self.levels.iter().zip(&other.levels).map(|(a, b)| combine_runs(a, b, f)).collect(),
        }
    }

    pub fn union(&self, other: &OrdSet) -> OrdSet {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &OrdSet) -> OrdSet {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &OrdSet) -> OrdSet {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self, top: &Ordinal) -> OrdSet {
        OrdSet::full(top).difference(self)
    }

    pub fn is_subset(&self, other: &OrdSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Points of `[0, top]` that are limits of this set. A level-`ℓ` run
    /// `[s, e)` accumulates exactly at the points of `(s, e)` with `ν > ℓ`.
    pub fn limit_points(&self, top: &Ordinal) -> OrdSet {
        let mut out = OrdSet::empty();
        for (l, runs) in self.levels.iter().enumerate() {
            for r in runs {
                let after = r.start.successor();
                for higher in l + 1..LEVELS {
                    if let Some(run) = normalize_run(higher as u32, &after, &r.end, top) {
                        out.levels[higher].push(run);
                    }
                }
            }
        }
        out.normalize(top);
        out
    }

    pub fn closure(&self, top: &Ordinal) -> OrdSet {
        self.union(&self.limit_points(top))
    }

    pub fn derived(&self, top: &Ordinal) -> OrdSet {
        self.intersection(&self.limit_points(top))
    }

    pub fn isolated(&self, top: &Ordinal) -> OrdSet {
        self.difference(&self.limit_points(top))
    }

    pub fn min(&self) -> Option<Ordinal> {
        if self.zero {
            return Some(Ordinal::zero());
        }
        self.levels.iter().filter_map(|runs| runs.first().map(|r| r.start.clone())).min()
    }

    /// Bit-for-bit boundaries of this set, per level.
    fn boundaries(&self, level: usize) -> impl Iterator<Item = Ordinal> + '_ {
        self.levels[level].iter().flat_map(|r| {
            let end = match &r.end {
                End::At(e) => Some(e.clone()),
                End::Top => None,
            };
            std::iter::once(r.start.clone()).chain(end)
        })
    }

    /// Atoms of the boolean algebra generated by `sets`, each with its least
    /// point as a representative.
    pub fn atoms(sets: &[&OrdSet], top: &Ordinal) -> Vec<(OrdSet, Ordinal)> {
        let mut out = vec![(OrdSet { zero: true, ..OrdSet::empty() }, Ordinal::zero())];
        for l in 0..LEVELS {
            let Some(first) = Ordinal::zero().lift(l as u32).filter(|f| f <= top) else {
                continue;
            };
            let mut bounds: Vec<Ordinal> = vec![first];
            for s in sets {
                bounds.extend(s.boundaries(l));
            }
            bounds.sort();
            bounds.dedup();
            for (i, b) in bounds.iter().enumerate() {
                let end = bounds.get(i + 1).map_or(End::Top, |e| End::At(e.clone()));
                let atom = OrdSet::level_cell(b, &end, l as u32, top);
                if !atom.is_empty() {
                    out.push((atom, b.clone()));
                }
            }
        }
        out
    }

    pub fn render(&self, top: &Ordinal) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.zero {
            parts.push("[0,0] nu>=0".to_string());
        }
        for (l, runs) in self.levels.iter().enumerate() {
            for r in runs {
                let mut s = String::new();
                match &r.end {
                    // a run through the top only reaches `top` itself when ν(top) = l
                    End::Top if top.nu() == Nu::Finite(l as u32) => write!(s, "[{},{}] nu={l}", r.start, top),
                    End::Top => write!(s, "[{},{}) nu={l}", r.start, top),
                    End::At(e) => write!(s, "[{},{}) nu={l}", r.start, e),
                }
                .expect("string write");
                parts.push(s);
            }
        }
        format!("cells[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn closed_cell(a: &str, b: &str, r: u32, top: &Ordinal) -> OrdSet {
        OrdSet::cell(&o(a), &End::At(o(b).successor()), r, top)
    }

    #[test]
    fn complement_of_limit_cell_is_the_naturals() {
        let top = o("w");
        let cell = closed_cell("0", "w", 1, &top);
        let expected = OrdSet::level_cell(&o("1"), &End::At(o("w")), 0, &top);
        assert_eq!(cell.complement(&top), expected);
        assert_eq!(expected.render(&top), "cells[[1,w) nu=0]");
    }

    #[test]
    fn closure_of_naturals_adds_omega() {
        let top = o("w");
        let nat = OrdSet::cell(&o("0"), &End::At(o("w")), 0, &top);
        assert_eq!(nat.closure(&top), OrdSet::full(&top));
    }

    #[test]
    fn derived_sets_of_max() {
        let top = o("w");
        assert_eq!(OrdSet::full(&top).derived(&top), OrdSet::point(&o("w"), &top));
        let top2 = o("w^2");
        let d = OrdSet::full(&top2).derived(&top2);
        assert_eq!(d, OrdSet::cell(&o("1"), &End::Top, 1, &top2));
        assert!(d.contains(&o("w*3")) && d.contains(&o("w^2")) && !d.contains(&o("0")) && !d.contains(&o("w+1")));
    }

    #[test]
    fn isolated_points_of_limit_cell() {
        let top = o("w^2");
        let cell = closed_cell("0", "w^2", 1, &top);
        let iso = cell.isolated(&top);
        let expected = OrdSet::point(&o("0"), &top).union(&OrdSet::level_cell(&o("0"), &End::Top, 1, &top));
        assert_eq!(iso, expected);
    }

    #[test]
    fn derived_of_abutting_runs_sees_across_levels() {
        let top = o("w");
        // [0,w) ∪ {w}: per-cell derived sets would miss ω
        let s = OrdSet::cell(&o("0"), &End::At(o("w")), 0, &top).union(&OrdSet::point(&o("w"), &top));
        assert_eq!(s.derived(&top), OrdSet::point(&o("w"), &top));
    }

    #[test]
    fn point_sets_and_min() {
        let top = o("w^2");
        let p = OrdSet::point(&o("w*3+2"), &top);
        assert!(p.contains(&o("w*3+2")) && !p.contains(&o("w*3+3")));
        assert_eq!(p.min(), Some(o("w*3+2")));
        assert!(OrdSet::point(&o("w^3"), &top).is_empty());
        assert_eq!(OrdSet::empty().min(), None);
    }

    #[test]
    fn atoms_partition_the_space() {
        let top = o("w^2");
        let a = closed_cell("w", "w*3", 0, &top);
        let b = closed_cell("w*2", "w^2", 1, &top);
        let atoms = OrdSet::atoms(&[&a, &b], &top);
        let mut union = OrdSet::empty();
        for (atom, rep) in &atoms {
            assert!(atom.contains(rep));
            assert!(union.intersection(atom).is_empty());
            assert!(atom.is_subset(&a) || atom.intersection(&a).is_empty());
            assert!(atom.is_subset(&b) || atom.intersection(&b).is_empty());
            union = union.union(atom);
        }
        assert_eq!(union, OrdSet::full(&top));
    }
}
