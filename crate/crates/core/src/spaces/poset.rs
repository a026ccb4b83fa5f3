//! Finite posets with a unique minimum, modelling finite prime spectra.
//!
//! Subsets are bitmasks over point indices; the order is the specialization
//! order (`o < p` means the prime `o` is contained in `p`), so Zariski-closed
//! sets are up-sets.

use std::collections::BTreeSet;
use std::fmt;

use super::SpaceError;

/// Largest poset this backend represents (bitmask width).
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    names: Vec<String>,
    up: Vec<u64>,
    down: Vec<u64>,
    bottom: usize,
}

pub fn bit(i: usize) -> u64 {
    1u64 << i
}

pub fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask & bit(i) != 0)
}

impl Poset {
    /// Builds a poset from point names and strict relations `a < b`
    /// (transitively closed here).
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, SpaceError> {
        let n = names.len();
        if n == 0 || n > MAX_POINTS {
            return Err(SpaceError::InvalidPoset(format!("a poset needs 1..={MAX_POINTS} points, got {n}")));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(SpaceError::InvalidPoset(format!("duplicate point `{name}`")));
            }
        }
        let mut up: Vec<u64> = (0..n).map(bit).collect();
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(SpaceError::InvalidPoset("relation refers to a missing point".into()));
            }
            up[a] |= bit(b);
        }
        // Warshall on bitmasks
        for k in 0..n {
            for i in 0..n {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        for (i, &u) in up.iter().enumerate() {
            for j in members(u) {
                if j != i && up[j] & bit(i) != 0 {
                    return Err(SpaceError::InvalidPoset(format!(
                        "`{}` and `{}` are below each other",
                        names[i], names[j]
                    )));
                }
            }
        }
        let full = if n == 64 { u64::MAX } else { bit(n) - 1 };
        let bottoms: Vec<usize> = (0..n).filter(|&i| up[i] == full).collect();
        let [bottom] = bottoms[..] else {
            return Err(SpaceError::InvalidPoset("the poset must have a unique minimum".into()));
        };
        let mut down = vec![0u64; n];
        for (i, &u) in up.iter().enumerate() {
            for j in members(u) {
                down[j] |= bit(i);
            }
        }
        Ok(Poset { names, up, down, bottom })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn full(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    pub fn up(&self, i: usize) -> u64 {
        self.up[i]
    }

    pub fn down(&self, i: usize) -> u64 {
        self.down[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a] & bit(b) != 0
    }

    pub fn upward_closure(&self, mask: u64) -> u64 {
        members(mask).fold(0, |acc, i| acc | self.up[i])
    }

    pub fn downward_closure(&self, mask: u64) -> u64 {
        members(mask).fold(0, |acc, i| acc | self.down[i])
    }

    pub fn minimal(&self, mask: u64) -> u64 {
        members(mask).filter(|&i| self.down[i] & mask == bit(i)).fold(0, |acc, i| acc | bit(i))
    }

    /// Length of the longest chain inside `mask`.
    pub fn height(&self, mask: u64) -> u32 {
        let mut rest = mask;
        let mut h = 0;
        while rest != 0 {
            rest &= !self.minimal(rest);
            h += 1;
        }
        h
    }

    /// Points in an order compatible with the poset (lower points first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.down[i].count_ones(), i));
        order
    }

    /// All up-sets (Zariski-closed sets), enumerated without scanning every mask.
    pub fn up_sets(&self) -> Vec<u64> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        fn go(poset: &Poset, order: &[usize], k: usize, acc: u64, out: &mut Vec<u64>) {
            let Some(&x) = order.get(k) else {
                out.push(acc);
                return;
            };
            let strictly_below = poset.down[x] & !bit(x);
            if strictly_below & acc != 0 {
                go(poset, order, k + 1, acc | bit(x), out);
            } else {
                go(poset, order, k + 1, acc, out);
                go(poset, order, k + 1, acc | bit(x), out);
            }
        }
        go(self, &order, 0, 0, &mut out);
        out.sort_unstable();
        out
    }

    /// All down-sets, as complements of up-sets.
    pub fn down_sets(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.up_sets().into_iter().map(|u| self.full() & !u).collect();
        v.sort_unstable();
        v
    }

    /// Order automorphisms, as index maps.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = 0u64;
        fn go(p: &Poset, k: usize, image: &mut Vec<usize>, used: &mut u64, out: &mut Vec<Vec<usize>>) {
            let n = p.len();
            if k == n {
                out.push(image.clone());
                return;
            }
            for t in 0..n {
                if *used & bit(t) != 0 {
                    continue;
                }
                let consistent = (0..k).all(|j| p.leq(j, k) == p.leq(image[j], t) && p.leq(k, j) == p.leq(t, image[j]));
                if consistent {
                    image[k] = t;
                    *used |= bit(t);
                    go(p, k + 1, image, used, out);
                    *used &= !bit(t);
                }
            }
        }
        go(self, 0, &mut image, &mut used, &mut out);
        out
    }

    /// Strict relations `a < b`, for rendering.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            let above = self.up[a] & !bit(a);
            for b in members(self.minimal(above)) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<u64, SpaceError> {
        names.iter().try_fold(0u64, |acc, n| {
            self.index_of(n).map(|i| acc | bit(i)).ok_or_else(|| SpaceError::UnknownPoint(n.to_string()))
        })
    }

    pub fn render_mask(&self, mask: u64) -> String {
        let names: Vec<&str> = members(mask).map(|i| self.name(i)).collect();
        format!("points {{{}}}", names.join(","))
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let covers = self.covers();
        for i in 0..self.len() {
            if !covers.iter().any(|&(a, b)| a == i || b == i) {
                parts.push(self.names[i].clone());
            }
        }
        parts.extend(covers.iter().map(|&(a, b)| format!("{} < {}", self.names[a], self.names[b])));
        write!(f, "poset {{ {} }}", parts.join(", "))
    }
}

const CATALOG_NAMES: [&str; 12] = ["o", "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"];

/// Every finite poset with a unique minimum on at most `max_points` points,
/// one representative per isomorphism class, in a deterministic order.
/// The minimum is named `o`; other points `a`, `b`, ...
pub fn catalog(max_points: usize) -> Vec<Poset> {
    assert!(max_points <= 6, "catalog enumeration is exhaustive; keep it to six points");
    let mut out = Vec::new();
    for total in 1..=max_points {
        let m = total - 1;
        let mut classes: BTreeSet<u64> = BTreeSet::new();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        for code in 0u64..(1u64 << pairs.len()) {
            let rel = |i: usize, j: usize| -> bool {
                i != j && pairs.iter().position(|&p| p == (i, j)).map(|k| code & bit(k) != 0).unwrap_or(false)
            };
            let antisymmetric = (0..m).all(|i| (0..m).all(|j| !(rel(i, j) && rel(j, i))));
            if !antisymmetric {
                continue;
            }
            let transitive =
                (0..m).all(|i| (0..m).all(|j| (0..m).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))));
            if !transitive {
                continue;
            }
            classes.insert(canonical_code(m, &rel));
        }
        for code in classes {
            let mut names = vec![CATALOG_NAMES[0].to_string()];
            names.extend(CATALOG_NAMES[1..=m].iter().map(|s| s.to_string()));
            let mut relations: Vec<(usize, usize)> = (1..=m).map(|j| (0, j)).collect();
            for i in 0..m {
                for j in 0..m {
                    if i != j && code & bit(i * m + j) != 0 {
                        relations.push((i + 1, j + 1));
                    }
                }
            }
            out.push(Poset::new(names, &relations).expect("catalog posets are valid"));
        }
    }
    out
}

fn canonical_code(m: usize, rel: &dyn Fn(usize, usize) -> bool) -> u64 {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = u64::MAX;
    permute(&mut perm, 0, &mut |p| {
        let mut code = 0u64;
        for i in 0..m {
            for j in 0..m {
                if rel(p[i], p[j]) {
                    code |= bit(i * m + j);
                }
            }
        }
        best = best.min(code);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3() -> Poset {
        Poset::new(vec!["o".into(), "p".into(), "q".into()], &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn catalog_counts_match_poset_counts() {
        // unlabeled posets on 0..=4 points: 1, 1, 2, 5, 16
        let counts: Vec<usize> = (1..=5).map(|n| catalog(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9, 25]);
    }

    #[test]
    fn rejects_two_minima_and_cycles() {
        assert!(Poset::new(vec!["a".into(), "b".into()], &[]).is_err());
        assert!(Poset::new(vec!["o".into(), "a".into(), "b".into()], &[(0, 1), (1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn up_sets_of_v3() {
        let p = v3();
        // ∅, {p}, {q}, {p,q}, {o,p,q}
        assert_eq!(p.up_sets(), vec![0b000, 0b010, 0b100, 0b110, 0b111]);
        assert_eq!(p.down_sets().len(), 5);
    }

    #[test]
    fn up_sets_agree_with_mask_scan() {
        for poset in catalog(5) {
            let scan: Vec<u64> = (0..=poset.full()).filter(|&m| poset.upward_closure(m) == m).collect();
            assert_eq!(poset.up_sets(), scan);
        }
    }

    #[test]
    fn automorphisms_of_v3() {
        assert_eq!(v3().automorphisms(), vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn height_and_minimal() {
        let p = v3();
        assert_eq!(p.height(p.full()), 2);
        assert_eq!(p.minimal(0b110), 0b110);
        assert_eq!(p.render_mask(0b011), "points {o,p}");
    }
}
