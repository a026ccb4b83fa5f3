//! Ordinals below `ω^(K+1)` in Cantor normal form.
//!
//! These are the coordinates of the scattered one-dimensional backend: the
//! maximal points of an ordinal space are the ordinals in `[0, max_top]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest exponent allowed in a Cantor normal form. Fixed at build time so
/// canonical literals never change meaning between runs.
pub const MAX_EXPONENT: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("malformed ordinal literal `{literal}`: {reason}")]
    Malformed { literal: String, reason: String },
    #[error("term `{term}` has exponent {exponent}, above the bound {bound}")]
    ExponentBound { term: String, exponent: u32, bound: u32 },
    #[error("term `{term}` is out of Cantor normal form order")]
    NonCanonical { term: String },
    #[error("left subtraction underflow: {left} > {right}")]
    Underflow { left: Ordinal, right: Ordinal },
    #[error("ordinal coefficient overflow")]
    Overflow,
}

/// The `ν` valuation: the least exponent of a nonzero ordinal, or `Top` for 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nu {
    Finite(u32),
    Top,
}

impl Nu {
    pub fn at_least(self, level: u32) -> bool {
        match self {
            Nu::Finite(n) => n >= level,
            Nu::Top => true,
        }
    }
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu::Finite(n) => write!(f, "{n}"),
            Nu::Top => f.write_str("top"),
        }
    }
}

/// An ordinal `ω^e1·c1 + ... + ω^en·cn` with `e1 > ... > en` and `ci ≥ 1`.
/// The empty term list is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub is_limit: bool,
    pub nu: Nu,
    pub successor: Ordinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddMode {
    Add,
    LeftSubtract,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: u32) -> Self {
        assert!(exponent <= MAX_EXPONENT, "exponent above MAX_EXPONENT");
        Ordinal { terms: vec![(exponent, 1)] }
    }

    /// Builds an ordinal from `(exponent, coefficient)` terms, checking the
    /// normal-form invariants.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        for (i, &(e, c)) in terms.iter().enumerate() {
            let term = render_term(e, c);
            if e > MAX_EXPONENT {
                return Err(OrdinalError::ExponentBound { term, exponent: e, bound: MAX_EXPONENT });
            }
            if c == 0 || (i > 0 && terms[i - 1].0 <= e) {
                return Err(OrdinalError::NonCanonical { term });
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nu(&self) -> Nu {
        self.terms.last().map_or(Nu::Top, |&(e, _)| Nu::Finite(e))
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.nu(), Nu::Finite(e) if e >= 1)
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_limit: self.is_limit(),
            nu: self.nu(),
            successor: self.successor(),
        }
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::finite(1))
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        self.checked_add(other).expect("ordinal coefficient overflow")
    }

    pub fn checked_add(&self, other: &Ordinal) -> Option<Ordinal> {
        let Some(&(lead, lead_coef)) = other.terms.first() else {
            return Some(self.clone());
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().filter(|&(e, _)| e >= lead).collect();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                last.1 = last.1.checked_add(lead_coef)?;
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Some(Ordinal { terms })
    }

    /// The unique `c` with `self + c = other`.
    pub fn left_subtract(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > other {
            return Err(OrdinalError::Underflow { left: self.clone(), right: other.clone() });
        }
        for (i, &(eb, cb)) in other.terms.iter().enumerate() {
            match self.terms.get(i) {
                None => return Ok(Ordinal { terms: other.terms[i..].to_vec() }),
                Some(&(ea, ca)) if (ea, ca) == (eb, cb) => continue,
                Some(&(ea, ca)) => {
                    // self < other, so either ea < eb or ea == eb and ca < cb
                    let mut terms = if ea == eb { vec![(eb, cb - ca)] } else { vec![(eb, cb)] };
                    terms.extend_from_slice(&other.terms[i + 1..]);
                    return Ok(Ordinal { terms });
                }
            }
        }
        Ok(Ordinal::zero())
    }

    pub fn add_sub(&self, other: &Ordinal, mode: AddMode) -> Result<Ordinal, OrdinalError> {
        match mode {
            AddMode::Add => self.checked_add(other).ok_or(OrdinalError::Overflow),
            AddMode::LeftSubtract => self.left_subtract(other),
        }
    }

    /// Least ordinal `y ≥ self` with `ν(y) ≥ level` (zero counts, as `ν(0)` is top).
    pub fn round_up(&self, level: u32) -> Option<Ordinal> {
        if self.nu().at_least(level) {
            return Some(self.clone());
        }
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().filter(|&(e, _)| e >= level).collect();
        match terms.last_mut() {
            Some(last) if last.0 == level => last.1 = last.1.checked_add(1)?,
            _ => terms.push((level, 1)),
        }
        Some(Ordinal { terms })
    }

    /// Least ordinal `y ≥ self` with `ν(y) = level` exactly.
    pub fn lift(&self, level: u32) -> Option<Ordinal> {
        let y = self.round_up(level)?;
        if y.nu() == Nu::Finite(level) {
            Some(y)
        } else {
            y.checked_add(&Ordinal::omega_pow(level))
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn render_term(e: u32, c: u64) -> String {
    match (e, c) {
        (0, c) => c.to_string(),
        (1, 1) => "w".to_string(),
        (1, c) => format!("w*{c}"),
        (e, 1) => format!("w^{e}"),
        (e, c) => format!("w^{e}*{c}"),
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            f.write_str(&render_term(e, c))?;
        }
        Ok(())
    }
}

fn parse_nat(s: &str, literal: &str) -> Result<u64, OrdinalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(OrdinalError::Malformed {
            literal: literal.to_string(),
            reason: format!("expected a natural number, found `{s}`"),
        });
    }
    s.parse().map_err(|_| OrdinalError::Overflow)
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(OrdinalError::Malformed { literal: text.to_string(), reason: "empty literal".into() });
        }
        if compact == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms = Vec::new();
        for raw in compact.split('+') {
            let (exponent, coefficient) = if let Some(rest) = raw.strip_prefix('w') {
                let (exp_part, coef_part) = match rest.split_once('*') {
                    Some((e, c)) => (e, Some(c)),
                    None => (rest, None),
                };
                let exponent = if exp_part.is_empty() {
                    1
                } else if let Some(e) = exp_part.strip_prefix('^') {
                    let e = parse_nat(e, text)?;
                    u32::try_from(e).map_err(|_| OrdinalError::ExponentBound {
                        term: raw.to_string(),
                        exponent: u32::MAX,
                        bound: MAX_EXPONENT,
                    })?
                } else {
                    return Err(OrdinalError::Malformed {
                        literal: text.to_string(),
                        reason: format!("unexpected `{exp_part}` in term `{raw}`"),
                    });
                };
                let coefficient = match coef_part {
                    Some(c) => parse_nat(c, text)?,
                    None => 1,
                };
                (exponent, coefficient)
            } else {
                (0, parse_nat(raw, text)?)
            };
            if exponent > MAX_EXPONENT {
                return Err(OrdinalError::ExponentBound { term: raw.to_string(), exponent, bound: MAX_EXPONENT });
            }
            if coefficient == 0 {
                return Err(OrdinalError::NonCanonical { term: raw.to_string() });
            }
            if let Some(&(prev, _)) = terms.last() {
                if prev <= exponent {
                    return Err(OrdinalError::NonCanonical { term: raw.to_string() });
                }
            }
            terms.push((exponent, coefficient));
        }
        Ok(Ordinal { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_canonical_literals() {
        assert_eq!(o("w^2*3+w+4").terms(), &[(2, 3), (1, 1), (0, 4)]);
        assert!(o("0").is_zero());
        assert_eq!(o(" w * 2 + 1 ").to_string(), "w*2+1");
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!("w^9".parse::<Ordinal>(), Err(OrdinalError::ExponentBound { exponent: 9, .. })));
        match "w+w^2".parse::<Ordinal>() {
            Err(OrdinalError::NonCanonical { term }) => assert_eq!(term, "w^2"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!("w+w".parse::<Ordinal>(), Err(OrdinalError::NonCanonical { .. })));
        assert!(matches!("w*0".parse::<Ordinal>(), Err(OrdinalError::NonCanonical { .. })));
        assert!(matches!("x".parse::<Ordinal>(), Err(OrdinalError::Malformed { .. })));
        assert!(matches!("w^".parse::<Ordinal>(), Err(OrdinalError::Malformed { .. })));
        assert!("".parse::<Ordinal>().is_err());
    }

    #[test]
    fn compares() {
        assert_eq!(o("w*2+1").cmp(&o("w*2")), Ordering::Greater);
        assert_eq!(o("0").cmp(&o("0")), Ordering::Equal);
        assert_eq!(o("w^2").cmp(&o("w*5+9")), Ordering::Greater);
        assert!(o("3") < o("w"));
    }

    #[test]
    fn adds_and_subtracts() {
        assert_eq!(o("w").add(&o("w")), o("w*2"));
        assert_eq!(o("2").left_subtract(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w").left_subtract(&o("w*2")).unwrap(), o("w"));
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w+1").left_subtract(&o("w*2")).unwrap(), o("w"));
        assert!(matches!(o("w+1").left_subtract(&o("w")), Err(OrdinalError::Underflow { .. })));
        assert_eq!(o("w").add_sub(&o("w"), AddMode::LeftSubtract).unwrap(), o("0"));
    }

    #[test]
    fn classifies() {
        assert_eq!(o("w").classify(), Classification { is_limit: true, nu: Nu::Finite(1), successor: o("w+1") });
        assert_eq!(o("5").classify(), Classification { is_limit: false, nu: Nu::Finite(0), successor: o("6") });
        assert_eq!(o("0").classify(), Classification { is_limit: false, nu: Nu::Top, successor: o("1") });
    }

    #[test]
    fn lifts_to_exact_levels() {
        assert_eq!(o("w").lift(0), Some(o("w+1")));
        assert_eq!(o("0").lift(1), Some(o("w")));
        assert_eq!(o("0").lift(0), Some(o("1")));
        assert_eq!(o("w+3").lift(1), Some(o("w*2")));
        assert_eq!(o("w^2").lift(1), Some(o("w^2+w")));
        assert_eq!(o("w*2").lift(1), Some(o("w*2")));
        assert_eq!(o("w^2+5").round_up(2), Some(o("w^2*2")));
    }
}
