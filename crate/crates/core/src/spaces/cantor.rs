//! Definable subsets of Cantor space `{0,1}^ω`: a clopen set given by
//! cylinder words, adjusted by finitely many eventually-periodic points.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::SpaceError;

/// An eventually periodic sequence `prefix (period)^ω`, kept with a primitive
/// period and the shortest possible prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CantorPoint {
    prefix: String,
    period: String,
}

fn is_word(s: &str) -> bool {
    s.bytes().all(|b| b == b'0' || b == b'1')
}

fn flip_word(s: &str) -> String {
    s.chars().map(|c| if c == '0' { '1' } else { '0' }).collect()
}

impl CantorPoint {
    pub fn new(prefix: &str, period: &str) -> Result<Self, SpaceError> {
        if period.is_empty() || !is_word(prefix) || !is_word(period) {
            return Err(SpaceError::BadLiteral(format!("`{prefix}({period})` is not an eventually periodic 0/1 point")));
        }
        let n = period.len();
        let root = (1..=n)
            .find(|&d| n.is_multiple_of(d) && period.as_bytes().chunks(d).all(|c| c == &period.as_bytes()[..d]))
            .unwrap_or(n);
        let mut prefix = prefix.to_string();
        let mut period = period[..root].to_string();
        while prefix.ends_with(period.chars().last().expect("period nonempty")) {
            prefix.pop();
            let last = period.pop().expect("period nonempty");
            period.insert(0, last);
        }
        Ok(CantorPoint { prefix, period })
    }

    pub fn bit(&self, i: usize) -> u8 {
        let p = self.prefix.as_bytes();
        if i < p.len() {
            p[i]
        } else {
            let q = self.period.as_bytes();
            q[(i - p.len()) % q.len()]
        }
    }

    pub fn in_cylinder(&self, word: &str) -> bool {
        word.bytes().enumerate().all(|(i, b)| self.bit(i) == b)
    }

    pub fn flip(&self) -> CantorPoint {
        CantorPoint::new(&flip_word(&self.prefix), &flip_word(&self.period)).expect("flip keeps the shape")
    }

    /// Some point of `cyl(word)` outside `avoid`.
    pub fn pick_in(word: &str, avoid: &BTreeSet<CantorPoint>) -> CantorPoint {
        (0..)
            .map(|k| CantorPoint::new(&format!("{word}{}", "0".repeat(k)), "1").expect("valid"))
            .find(|p| !avoid.contains(p))
            .expect("a cylinder has infinitely many candidate points")
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.prefix, self.period)
    }
}

impl FromStr for CantorPoint {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpaceError::BadLiteral(format!("`{s}` is not of the form u(v)"));
        let (prefix, rest) = s.split_once('(').ok_or_else(bad)?;
        let period = rest.strip_suffix(')').ok_or_else(bad)?;
        CantorPoint::new(prefix, period)
    }
}

/// A clopen set: the maximal cylinders it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clopen {
    words: BTreeSet<String>,
}

impl Clopen {
    pub fn empty() -> Self {
        Clopen::default()
    }

    pub fn full() -> Self {
        Clopen { words: [String::new()].into() }
    }

    pub fn cylinder(word: &str) -> Result<Self, SpaceError> {
        if !is_word(word) {
            return Err(SpaceError::BadLiteral(format!("`{word}` is not a 0/1 word")));
        }
        Ok(Clopen { words: [word.to_string()].into() })
    }

    pub fn from_words<I: IntoIterator<Item = String>>(words: I) -> Self {
        Self::normalized(words.into_iter().collect())
    }

    fn normalized(mut words: BTreeSet<String>) -> Self {
        loop {
            let covered: Vec<String> =
                words.iter().filter(|w| (0..w.len()).any(|k| words.contains(&w[..k]))).cloned().collect();
            for w in &covered {
                words.remove(w);
            }
            let merge = words.iter().find_map(|w| {
                let stem = w.strip_suffix('0')?;
                words.contains(&format!("{stem}1")).then(|| stem.to_string())
            });
            match merge {
                Some(stem) => {
                    words.remove(&format!("{stem}0"));
                    words.remove(&format!("{stem}1"));
                    words.insert(stem);
                }
                None if covered.is_empty() => return Clopen { words },
                None => {}
            }
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.words.iter().any(|w| p.in_cylinder(w))
    }

    pub fn union(&self, other: &Clopen) -> Clopen {
        Self::normalized(self.words.union(&other.words).cloned().collect())
    }

    pub fn intersection(&self, other: &Clopen) -> Clopen {
        let mut out = BTreeSet::new();
        for u in &self.words {
            for v in &other.words {
                if v.starts_with(u.as_str()) {
                    out.insert(v.clone());
                } else if u.starts_with(v.as_str()) {
                    out.insert(u.clone());
                }
            }
        }
        Self::normalized(out)
    }

    pub fn complement(&self) -> Clopen {
        fn go(words: &BTreeSet<String>, stem: String, out: &mut BTreeSet<String>) {
            if (0..=stem.len()).any(|k| words.contains(&stem[..k])) {
                return;
            }
            if !words.iter().any(|w| w.starts_with(stem.as_str())) {
                out.insert(stem);
                return;
            }
            go(words, format!("{stem}0"), out);
            go(words, format!("{stem}1"), out);
        }
        let mut out = BTreeSet::new();
        go(&self.words, String::new(), &mut out);
        Self::normalized(out)
    }

    pub fn difference(&self, other: &Clopen) -> Clopen {
        self.intersection(&other.complement())
    }

    pub fn flip(&self) -> Clopen {
        Self::normalized(self.words.iter().map(|w| flip_word(w)).collect())
    }
}

/// `(clopen ∪ plus) ∖ minus` with `plus` outside and `minus` inside the clopen part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CantorSet {
    clopen: Clopen,
    plus: BTreeSet<CantorPoint>,
    minus: BTreeSet<CantorPoint>,
}

impl CantorSet {
    pub fn empty() -> Self {
        CantorSet::default()
    }

    pub fn full() -> Self {
        CantorSet::from_clopen(Clopen::full())
    }

    pub fn from_clopen(clopen: Clopen) -> Self {
        CantorSet { clopen, ..Default::default() }
    }

    pub fn points<I: IntoIterator<Item = CantorPoint>>(points: I) -> Self {
        CantorSet { plus: points.into_iter().collect(), ..Default::default() }
    }

    pub fn clopen(&self) -> &Clopen {
        &self.clopen
    }

    pub fn plus(&self) -> &BTreeSet<CantorPoint> {
        &self.plus
    }

    pub fn minus(&self) -> &BTreeSet<CantorPoint> {
        &self.minus
    }

    pub fn is_empty(&self) -> bool {
        self.clopen.is_empty() && self.plus.is_empty()
    }

    pub fn contains(&self, p: &CantorPoint) -> bool {
        if self.clopen.contains(p) {
            !self.minus.contains(p)
        } else {
            self.plus.contains(p)
        }
    }

    pub fn complexity(&self) -> usize {
        self.clopen.words.len() + self.plus.len() + self.minus.len()
    }

    fn combine(&self, other: &CantorSet, clopen: Clopen, f: impl Fn(bool, bool) -> bool) -> CantorSet {
        let candidates: BTreeSet<&CantorPoint> =
            self.plus.iter().chain(&self.minus).chain(&other.plus).chain(&other.minus).collect();
        let mut out = CantorSet::from_clopen(clopen);
        for p in candidates {
            let inside = f(self.contains(p), other.contains(p));
            match (out.clopen.contains(p), inside) {
                (true, false) => {
                    out.minus.insert(p.clone());
                }
                (false, true) => {
                    out.plus.insert(p.clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn union(&self, other: &CantorSet) -> CantorSet {
        self.combine(other, self.clopen.union(&other.clopen), |a, b| a || b)
    }

    pub fn intersection(&self, other: &CantorSet) -> CantorSet {
        self.combine(other, self.clopen.intersection(&other.clopen), |a, b| a && b)
    }

    pub fn difference(&self, other: &CantorSet) -> CantorSet {
        self.combine(other, self.clopen.difference(&other.clopen), |a, b| a && !b)
    }

    pub fn complement(&self) -> CantorSet {
        CantorSet::full().difference(self)
    }

    pub fn is_subset(&self, other: &CantorSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Topological closure: clopen sets have no isolated points, so removed
    /// points come back and added points stay.
    pub fn closure(&self) -> CantorSet {
        CantorSet { clopen: self.clopen.clone(), plus: self.plus.clone(), minus: BTreeSet::new() }
    }

    pub fn isolated(&self) -> CantorSet {
        CantorSet::points(self.plus.iter().cloned())
    }

    pub fn derived(&self) -> CantorSet {
        CantorSet { clopen: self.clopen.clone(), plus: BTreeSet::new(), minus: self.minus.clone() }
    }

    /// Some member of the set, preferring isolated points.
    pub fn pick(&self) -> Option<CantorPoint> {
        if let Some(p) = self.plus.iter().next() {
            return Some(p.clone());
        }
        let w = self.clopen.words.iter().next()?;
        Some(CantorPoint::pick_in(w, &self.minus))
    }

    pub fn flip(&self) -> CantorSet {
        CantorSet {
            clopen: self.clopen.flip(),
            plus: self.plus.iter().map(CantorPoint::flip).collect(),
            minus: self.minus.iter().map(CantorPoint::flip).collect(),
        }
    }

    pub fn mentioned_points(&self) -> impl Iterator<Item = &CantorPoint> {
        self.plus.iter().chain(&self.minus)
    }

    /// Atoms of the algebra generated by `sets` (refined to depth one): the
    /// cells of the common clopen partition with mentioned points removed,
    /// and one singleton per mentioned point. Clopen atoms come first.
    pub fn atoms(sets: &[&CantorSet]) -> Vec<(CantorSet, CantorPoint)> {
        let mut parts = vec![Clopen::full()];
        let splitters = std::iter::once(Clopen::cylinder("0").expect("word")).chain(sets.iter().map(|s| s.clopen.clone()));
        for u in splitters {
            parts = parts
                .into_iter()
                .flat_map(|p| [p.intersection(&u), p.difference(&u)])
                .filter(|p| !p.is_empty())
                .collect();
        }
        let points: BTreeSet<CantorPoint> = sets.iter().flat_map(|s| s.mentioned_points().cloned()).collect();
        let mut out = Vec::new();
        for part in parts {
            let minus: BTreeSet<CantorPoint> = points.iter().filter(|p| part.contains(p)).cloned().collect();
            let word = part.words.iter().next().expect("nonempty part").clone();
            let rep = CantorPoint::pick_in(&word, &minus);
            out.push((CantorSet { clopen: part, plus: BTreeSet::new(), minus }, rep));
        }
        for p in points {
            out.push((CantorSet::points([p.clone()]), p));
        }
        out
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if !self.clopen.is_empty() {
            let words: Vec<String> = self.clopen.words.iter().map(|w| format!("\"{w}\"")).collect();
            parts.push(format!("cyl {{{}}}", words.join(",")));
        }
        if !self.plus.is_empty() {
            let pts: Vec<String> = self.plus.iter().map(|p| format!("\"{p}\"")).collect();
            parts.push(format!("pts {{{}}}", pts.join(",")));
        }
        let mut s = if parts.is_empty() { "empty".to_string() } else { parts.join(" + ") };
        if !self.minus.is_empty() {
            let pts: Vec<String> = self.minus.iter().map(|p| format!("\"{p}\"")).collect();
            s = format!("{s} - pts {{{}}}", pts.join(","));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> CantorPoint {
        s.parse().unwrap()
    }

    #[test]
    fn points_are_canonical() {
        assert_eq!(pt("0110(10)"), pt("01(10)"));
        assert_eq!(pt("0(1010)").to_string(), "(01)");
        assert_eq!(pt("01(1010)").to_string(), "01(10)");
        assert_eq!(pt("1(0)").to_string(), "1(0)");
        assert_eq!(pt("00(0)").to_string(), "(0)");
        assert!("01".parse::<CantorPoint>().is_err());
        assert!("0()".parse::<CantorPoint>().is_err());
    }

    #[test]
    fn cylinder_membership_is_a_prefix_test() {
        let p = pt("01(10)");
        assert!(p.in_cylinder("0110101"));
        assert!(!p.in_cylinder("00"));
        assert!(p.in_cylinder(""));
    }

    #[test]
    fn clopen_normal_form() {
        let u = Clopen::from_words(["0".to_string(), "1".to_string()]);
        assert_eq!(u, Clopen::full());
        let v = Clopen::from_words(["00".into(), "01".into(), "010".into(), "11".into()]);
        assert_eq!(v.words().collect::<Vec<_>>(), vec!["0", "11"]);
        assert_eq!(v.complement().words().collect::<Vec<_>>(), vec!["10"]);
        assert_eq!(v.union(&v.complement()), Clopen::full());
        assert!(v.intersection(&v.complement()).is_empty());
    }

    #[test]
    fn point_bookkeeping() {
        let a = CantorSet::from_clopen(Clopen::cylinder("0").unwrap());
        let b = CantorSet::points([pt("1(0)"), pt("0(1)")]);
        let u = a.union(&b);
        assert_eq!(u.plus().len(), 1);
        assert!(u.contains(&pt("1(0)")) && u.contains(&pt("0(1)")));
        let d = a.difference(&b);
        assert_eq!(d.minus().len(), 1);
        assert!(!d.contains(&pt("0(1)")));
        assert_eq!(d.closure(), a);
        assert_eq!(u.isolated(), CantorSet::points([pt("1(0)")]));
        assert_eq!(u.render(), "cyl {\"0\"} + pts {\"1(0)\"}");
    }

    #[test]
    fn atoms_cover_and_separate() {
        let a = CantorSet::from_clopen(Clopen::cylinder("01").unwrap()).union(&CantorSet::points([pt("1(0)")]));
        let atoms = CantorSet::atoms(&[&a]);
        let mut union = CantorSet::empty();
        for (atom, rep) in &atoms {
            assert!(atom.contains(rep));
            assert!(atom.is_subset(&a) || atom.intersection(&a).is_empty());
            assert!(union.intersection(atom).is_empty());
            union = union.union(atom);
        }
        assert_eq!(union, CantorSet::full());
    }
}
