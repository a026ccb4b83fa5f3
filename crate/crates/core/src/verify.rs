//! Self-verification suites: exhaustive comparisons against the oracle on
//! the poset catalog and seeded randomized checks on the infinite backends.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::correspondences::{
    is_radical_ls, sharp_rebuild, sigma_support, LocalizingSystemView, SingularLengthView, Source, Tau,
};
use crate::error::{Result, SslabError};
use crate::ordinal::Ordinal;
use crate::oracle::{localizing_axioms_check, Lattice};
use crate::prufer::{automorphisms, stable_normalize, PruferDescriptor, StableOpPair};
use crate::radical::RadicalOp;
use crate::sample;
use crate::spaces::cantor::{CantorSet, Clopen};
use crate::spaces::ordset::{End, OrdSet};
use crate::spaces::poset::{bit, catalog, members, Poset};
use crate::spaces::{CbRank, DefinableSet, Point, Space};
use crate::spectral::{IdealDescriptor, SpectralOp, UniverseIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Topology,
    Spectral,
    Radical,
    Prufer,
    Correspondences,
    Lattice,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Topology, Suite::Spectral, Suite::Radical, Suite::Prufer, Suite::Correspondences, Suite::Lattice];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Topology => "topology",
            Suite::Spectral => "spectral",
            Suite::Radical => "radical",
            Suite::Prufer => "prufer",
            Suite::Correspondences => "correspondences",
            Suite::Lattice => "lattice",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest catalog poset used by the exhaustive checks.
    pub poset_size: usize,
    /// Number of random cases per randomized check.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, poset_size: 5, samples: 200 }
    }
}

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    /// First counterexample or error, if any.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Some(msg) => write!(f, "FAIL {} after {} cases: {msg}", self.name, self.cases),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

/// Counts cases and keeps the first failure.
pub struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    pub fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// Runs `body`, converting errors into a failure of the check.
pub fn run_check(name: &str, body: impl FnOnce(&mut Tally) -> Result<()>) -> CheckOutcome {
    let mut tally = Tally { cases: 0, failure: None };
    if let Err(e) = body(&mut tally) {
        tally.failure.get_or_insert_with(|| format!("error: {e}"));
    }
    CheckOutcome { name: name.to_string(), cases: tally.cases, failure: tally.failure }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> SuiteReport {
    let n = config.poset_size;
    let seed = config.seed;
    let k = config.samples;
    let checks = match suite {
        Suite::Topology => {
            let mut checks: Vec<CheckOutcome> =
                example_spaces().iter().map(|(label, space)| check_set_identities(label, space, k, seed)).collect();
            checks.push(check_cb_ranks(5));
            checks.push(check_isolated_reference());
            checks
        }
        Suite::Spectral => vec![
            check_spectral_lattice(k, seed),
            check_spectral_monotonicity(k, seed),
            check_spectral_qspec(n),
        ],
        Suite::Radical => vec![
            check_cor4(n),
            check_scattered_joins(&["w", "w^2", "w^3"], k.div_ceil(4), k, seed),
            check_supnonrad(k, seed),
            check_gqc_properties(k, seed),
            check_sharp_insensitivity(k, seed),
        ],
        Suite::Prufer => vec![
            check_normalize_catalog(n),
            check_normalize_one_dim(k, seed),
            check_transfer(n),
            check_stable_one_dim(k, seed),
        ],
        Suite::Correspondences => vec![check_dictionary(n), check_rebuild_one_dim(k, seed)],
        Suite::Lattice => vec![check_lattice_agreement(n)],
    };
    SuiteReport { suite, checks }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// One space per backend (two ordinal heights).
pub fn example_spaces() -> Vec<(String, Arc<Space>)> {
    let diamond = Poset::new(["o", "p", "q", "m", "n"].map(String::from).to_vec(), &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4)])
        .expect("valid poset");
    vec![
        ("poset".to_string(), Arc::new(Space::Poset(diamond))),
        ("ordinal w^2".to_string(), Arc::new(Space::ordinal("w^2".parse().expect("literal")))),
        ("ordinal w^3*2+w".to_string(), Arc::new(Space::ordinal("w^3*2+w".parse().expect("literal")))),
        ("cantor".to_string(), Arc::new(Space::Cantor)),
    ]
}

/// Every catalog poset with every idempotency pattern.
pub fn catalog_descriptors(max_points: usize) -> Vec<Arc<PruferDescriptor>> {
    let mut out = Vec::new();
    for p in catalog(max_points) {
        let nonzero = p.full() & !bit(p.bottom());
        let space = Arc::new(Space::Poset(p));
        let mut idem = 0u64;
        loop {
            let d = PruferDescriptor::new(space.clone(), DefinableSet::Bits(idem), None).expect("valid flags");
            out.push(Arc::new(d));
            if idem == nonzero {
                break;
            }
            idem = idem.wrapping_sub(nonzero) & nonzero;
        }
    }
    out
}

fn same(space: &Space, a: &DefinableSet, b: &DefinableSet) -> Result<bool> {
    Ok(space.is_subset(a, b)? && space.is_subset(b, a)?)
}

/// Points to probe pointwise identities with.
fn probe_points<R: Rng>(rng: &mut R, space: &Space, sets: &[&DefinableSet]) -> Vec<Point> {
    let mut pts = vec![Point::Generic];
    match space {
        Space::Poset(p) => pts.extend((0..p.len()).map(Point::Poset)),
        Space::Ordinal { max_top } => {
            for _ in 0..6 {
                pts.push(Point::Ordinal(sample::ordinal(rng, max_top)));
            }
            pts.push(Point::Ordinal(max_top.clone()));
        }
        Space::Cantor => {
            for _ in 0..6 {
                pts.push(Point::Cantor(sample::cantor_point(rng)));
            }
            for s in sets {
                if let DefinableSet::Simple { set, .. } = s {
                    pts.extend(set.mentioned_points().cloned().map(Point::Cantor));
                }
            }
        }
    }
    pts
}

/// Boolean, closure and Cantor–Bendixson identities on random sets.
pub fn check_set_identities(label: &str, space: &Arc<Space>, samples: usize, seed: u64) -> CheckOutcome {
    run_check(&format!("set identities on {label}"), |t| {
        let mut r = rng(seed, 1);
        for _ in 0..samples {
            let a = sample::set(&mut r, space, true);
            let b = sample::set(&mut r, space, true);
            let s = &**space;
            let show = |x: &DefinableSet| s.render_set(x);
            let ctx = || format!("a = {}, b = {}", show(&a), show(&b));
            let de_morgan = same(s, &s.complement(&s.union(&a, &b)?)?, &s.intersection(&s.complement(&a)?, &s.complement(&b)?)?)?
                && same(s, &s.complement(&s.intersection(&a, &b)?)?, &s.union(&s.complement(&a)?, &s.complement(&b)?)?)?;
            t.case(de_morgan, || format!("De Morgan fails for {}", ctx()));
            t.case(s.complement(&s.complement(&a)?)? == a, || format!("double complement changes {}", ctx()));
            let cl = s.closure(&a)?;
            t.case(s.closure(&cl)? == cl && s.is_subset(&a, &cl)?, || format!("closure not idempotent/extensive for {}", ctx()));
            let additive = same(s, &s.closure(&s.union(&a, &b)?)?, &s.union(&cl, &s.closure(&b)?)?)?;
            t.case(additive, || format!("closure not additive for {}", ctx()));
            let iso = s.isolated_points(&a)?;
            let der = s.derived_set(&a)?;
            let partition = same(s, &s.union(&iso, &der)?, &a)? && !s.meets(&iso, &der)?;
            t.case(partition, || format!("isolated/derived do not partition {}", ctx()));
            let g = s.generizations(&a)?;
            t.case(s.generizations(&g)? == g && s.is_subset(&a, &g)?, || format!("generization not a closure for {}", ctx()));
            // canonical forms: semantically equal sets are structurally equal
            let lhs = s.difference(&s.union(&a, &b)?, &b)?;
            let rhs = s.difference(&a, &b)?;
            t.case(lhs == rhs, || format!("non-canonical difference for {}", ctx()));
            for x in probe_points(&mut r, s, &[&a, &b]) {
                let (ia, ib) = (s.contains(&a, &x), s.contains(&b, &x));
                let ok = s.contains(&s.union(&a, &b)?, &x) == (ia || ib)
                    && s.contains(&s.intersection(&a, &b)?, &x) == (ia && ib)
                    && s.contains(&s.difference(&a, &b)?, &x) == (ia && !ib)
                    && (!ia || s.contains(&cl, &x));
                t.case(ok, || format!("pointwise identity fails at {} for {}", s.render_point(&x), ctx()));
            }
            if t.failed() {
                break;
            }
        }
        Ok(())
    })
}

/// `cb_rank(Max [0, w^k]) = k + 1` and the derived set of `[0, w^2]`.
pub fn check_cb_ranks(max_k: u32) -> CheckOutcome {
    run_check("Cantor-Bendixson ranks of [0, w^k]", |t| {
        for k in 0..=max_k {
            let space = Space::ordinal(Ordinal::omega_pow(k));
            let rank = space.cb_rank(&space.max_set())?;
            t.case(rank == CbRank::Rank(k + 1), || format!("cb_rank([0, w^{k}]) = {rank}, expected {}", k + 1));
        }
        let top: Ordinal = "w^2".parse().expect("literal");
        let space = Space::ordinal(top.clone());
        let derived = space.derived_set(&space.max_set())?;
        let expected = DefinableSet::Cells { generic: false, cells: OrdSet::cell(&"w".parse().expect("literal"), &End::Top, 1, &top) };
        t.case(derived == expected, || format!("derived([0, w^2]) = {}", space.render_set(&derived)));
        Ok(())
    })
}

/// All ordinals `< w^3` with coefficients up to `coef`, plus `w^3`.
fn ordinal_grid(coef: u64) -> Vec<Ordinal> {
    let mut out = Vec::new();
    for a in 0..=coef {
        for b in 0..=coef {
            for c in 0..=coef {
                let terms: Vec<(u32, u64)> =
                    [(2, a), (1, b), (0, c)].into_iter().filter(|&(_, k)| k > 0).collect();
                out.push(Ordinal::from_terms(terms).expect("canonical"));
            }
        }
    }
    out.push(Ordinal::omega_pow(3));
    out.sort();
    out
}

/// Isolated points of `{x ∈ [0, w^2] : ν(x) ≥ 1}` against the definition:
/// `x ∈ S` is a limit of `S` iff every `y < x` has some `z ∈ S` with `y < z < x`.
pub fn check_isolated_reference() -> CheckOutcome {
    run_check("isolated points of cell([0, w^2], nu>=1) by limit search", |t| {
        let top: Ordinal = "w^2".parse().expect("literal");
        let space = Space::ordinal(top.clone());
        let cell = OrdSet::cell(&Ordinal::zero(), &End::Top, 1, &top);
        let s = DefinableSet::Cells { generic: false, cells: cell.clone() };
        let iso = space.isolated_points(&s)?;
        let grid: Vec<Ordinal> = ordinal_grid(4).into_iter().filter(|x| x <= &top).collect();
        for x in grid.iter().filter(|x| cell.contains(x)) {
            // candidates between y and x: grid points and the least element of each level above y
            let is_limit = !x.is_zero()
                && x.is_limit()
                && grid.iter().filter(|y| *y < x).all(|y| {
                    let mut candidates: Vec<Ordinal> = grid.clone();
                    candidates.extend((0..=crate::ordinal::MAX_EXPONENT).filter_map(|l| y.successor().round_up(l)));
                    candidates.iter().any(|z| y < z && z < x && cell.contains(z))
                });
            let expected = !is_limit;
            let got = space.contains(&iso, &Point::Ordinal(x.clone()));
            t.case(got == expected, || format!("{x}: isolated = {got}, reference says {expected}"));
        }
        Ok(())
    })
}

fn spaces_for_ops() -> Vec<Arc<Space>> {
    example_spaces().into_iter().map(|(_, s)| s).collect()
}

/// Lattice axioms of `spectral_inf`/`spectral_sup` and the order.
pub fn check_spectral_lattice(samples: usize, seed: u64) -> CheckOutcome {
    run_check("spectral lattice axioms", |t| {
        let mut r = rng(seed, 2);
        for space in spaces_for_ops() {
            for _ in 0..samples {
                let a = sample::spectral_op(&mut r, &space);
                let b = sample::spectral_op(&mut r, &space);
                let c = sample::spectral_op(&mut r, &space);
                let inf = |x: &SpectralOp, y: &SpectralOp| SpectralOp::inf(&[x.clone(), y.clone()]);
                let sup = |x: &SpectralOp, y: &SpectralOp| SpectralOp::sup(&[x.clone(), y.clone()]);
                let ctx = || format!("{} / {} / {}", a.render(), b.render(), c.render());
                t.case(a.leq(&a)?, || format!("reflexivity fails: {}", ctx()));
                t.case(!(a.leq(&b)? && b.leq(&a)?) || a == b, || format!("antisymmetry fails: {}", ctx()));
                t.case(!(a.leq(&b)? && b.leq(&c)?) || a.leq(&c)?, || format!("transitivity fails: {}", ctx()));
                t.case(inf(&a, &a)? == a && sup(&a, &a)? == a, || format!("idempotence fails: {}", ctx()));
                t.case(inf(&a, &b)? == inf(&b, &a)? && sup(&a, &b)? == sup(&b, &a)?, || format!("commutativity fails: {}", ctx()));
                t.case(
                    inf(&inf(&a, &b)?, &c)? == inf(&a, &inf(&b, &c)?)? && sup(&sup(&a, &b)?, &c)? == sup(&a, &sup(&b, &c)?)?,
                    || format!("associativity fails: {}", ctx()),
                );
                t.case(
                    inf(&a, &sup(&a, &b)?)? == a && sup(&a, &inf(&a, &b)?)? == a,
                    || format!("absorption fails: {}", ctx()),
                );
                let m = inf(&a, &b)?;
                let j = sup(&a, &b)?;
                t.case(
                    m.leq(&a)? && m.leq(&b)? && a.leq(&j)? && b.leq(&j)?,
                    || format!("inf/sup are not bounds: {}", ctx()),
                );
            }
        }
        Ok(())
    })
}

/// `a ≤ b` implies membership nests.
pub fn check_spectral_monotonicity(samples: usize, seed: u64) -> CheckOutcome {
    run_check("spectral membership is monotone", |t| {
        let mut r = rng(seed, 3);
        for space in spaces_for_ops() {
            for _ in 0..samples {
                let a = sample::spectral_op(&mut r, &space);
                let b = SpectralOp::sup(&[a.clone(), sample::spectral_op(&mut r, &space)])?;
                let ideal = sample::ideal(&mut r, &space, None);
                t.case(!a.member(&ideal)? || b.member(&ideal)?, || {
                    format!("{} <= {} but {} separates them", a.render(), b.render(), ideal.render())
                });
            }
        }
        Ok(())
    })
}

/// The quasi-spectrum recomputed from membership equals `Δ↓ ∪ {generic}`.
pub fn check_spectral_qspec(max_points: usize) -> CheckOutcome {
    run_check("spectral quasi-spectrum on the catalog", |t| {
        for p in catalog(max_points) {
            let space = Arc::new(Space::Poset(p.clone()));
            for delta in p.down_sets() {
                let op = SpectralOp::canonicalize(space.clone(), &DefinableSet::Bits(delta))?;
                let mut q = bit(p.bottom());
                for i in (0..p.len()).filter(|&i| i != p.bottom()) {
                    if !op.member(&IdealDescriptor::prime(space.clone(), &Point::Poset(i), false)?)? {
                        q |= bit(i);
                    }
                }
                t.case(q == delta | bit(p.bottom()), || format!("{p}: Δ = {}", p.render_mask(delta)));
            }
        }
        Ok(())
    })
}

fn proper_closed(p: &Poset) -> Vec<u64> {
    p.up_sets().into_iter().filter(|c| c & bit(p.bottom()) == 0).collect()
}

/// Families of down-sets: every nonempty family when there are at most 12
/// down-sets, otherwise every family of at most `max_len` members.
fn families(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    if n <= 12 {
        return (1u64..(1u64 << n)).map(|m| members(m).collect()).collect();
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for fam in &frontier {
            let from = fam.last().map_or(0, |&i| i + 1);
            for i in from..n {
                let mut f = fam.clone();
                f.push(i);
                next.push(f);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every radical operation on a finite poset is spectral, and a join of a
/// spectral family is the spectral operation of the intersection.
pub fn check_cor4(max_points: usize) -> CheckOutcome {
    run_check("radical operations on finite posets are spectral", |t| {
        for p in catalog(max_points) {
            let space = Arc::new(Space::Poset(p.clone()));
            let ops: Vec<SpectralOp> = p
                .down_sets()
                .into_iter()
                .map(|d| SpectralOp::canonicalize(space.clone(), &DefinableSet::Bits(d)))
                .collect::<Result<_>>()?;
            let closed: Vec<IdealDescriptor> = proper_closed(&p)
                .into_iter()
                .map(|c| IdealDescriptor::closed(space.clone(), DefinableSet::Bits(c)))
                .collect::<Result<_>>()?;
            // an intersection of down-sets is already attained by one member
            // per excluded nonzero point
            let nonzero_points = p.len() - 1;
            for fam in families(ops.len(), nonzero_points.max(1)) {
                let members_of: Vec<SpectralOp> = fam.iter().map(|&i| ops[i].clone()).collect();
                let join = RadicalOp::join(members_of.clone())?;
                let sup = SpectralOp::sup(&members_of)?;
                let verdict = join.is_spectral()?;
                t.case(verdict.answer, || format!("{p}: {} reported not spectral", join.render()));
                for ideal in &closed {
                    t.case(join.member(ideal)? == sup.member(ideal)?, || {
                        format!("{p}: {} and {} differ on {}", join.render(), sup.render(), ideal.render())
                    });
                }
                t.case(join.qspec()?.0 == sup.qspec(), || format!("{p}: qspec of {}", join.render()));
                if t.failed() {
                    return Ok(());
                }
            }
            // binary meets are the spectral infimum; punctured families are spectral
            for a in &ops {
                for b in &ops {
                    let meet = RadicalOp::meet(vec![RadicalOp::join(vec![a.clone()])?, RadicalOp::join(vec![b.clone()])?])?;
                    let inf = SpectralOp::inf(&[a.clone(), b.clone()])?;
                    for ideal in &closed {
                        t.case(meet.member(ideal)? == inf.member(ideal)?, || {
                            format!("{p}: {} differs from {} on {}", meet.render(), inf.render(), ideal.render())
                        });
                    }
                    t.case(meet.qspec()?.0 == inf.qspec(), || format!("{p}: qspec of {}", meet.render()));
                    t.case(meet.is_spectral()?.answer, || format!("{p}: {} reported not spectral", meet.render()));
                }
            }
            let nonzero = p.full() & !bit(p.bottom());
            let punctured = RadicalOp::punctured(space.clone(), DefinableSet::Bits(nonzero), DefinableSet::Bits(nonzero))?;
            t.case(punctured.is_spectral()?.answer, || format!("{p}: {} reported not spectral", punctured.render()));
        }
        Ok(())
    })
}

/// On scattered ordinal spaces a join of spectral operations is the
/// spectral operation of the intersection.
pub fn check_scattered_joins(tops: &[&str], families: usize, ideals: usize, seed: u64) -> CheckOutcome {
    run_check("joins on ordinal spaces are spectral", |t| {
        let mut r = rng(seed, 4);
        for top in tops {
            let space = Arc::new(Space::ordinal(top.parse().map_err(|e| SslabError::InvalidIdeal(format!("{e}")))?));
            let sample_ideals: Vec<IdealDescriptor> = (0..ideals).map(|_| sample::ideal(&mut r, &space, None)).collect();
            for _ in 0..families {
                let fam = sample::family(&mut r, &space, 4);
                let join = RadicalOp::join(fam.clone())?;
                let sup = SpectralOp::sup(&fam)?;
                for ideal in &sample_ideals {
                    t.case(join.member(ideal)? == sup.member(ideal)?, || {
                        format!("[0,{top}]: {} and {} differ on {}", join.render(), sup.render(), ideal.render())
                    });
                }
                if t.failed() {
                    return Ok(());
                }
            }
        }
        Ok(())
    })
}

/// The Cantor example of a radical operation that is not spectral.
pub fn check_supnonrad(samples: usize, seed: u64) -> CheckOutcome {
    run_check("Cantor punctured supremum is radical but not spectral", |t| {
        let space = Arc::new(Space::Cantor);
        let op = RadicalOp::punctured(space.clone(), space.max_set(), space.max_set())?;
        let (qspec, _) = op.qspec()?;
        t.case(qspec == space.generic_set(), || format!("qspec = {}", space.render_set(&qspec)));
        let verdict = op.is_spectral()?;
        let clopen_witness = matches!(&verdict.witness,
            Some(DefinableSet::Simple { generic: false, set }) if set.plus().is_empty() && set.minus().is_empty() && !set.clopen().is_empty());
        t.case(!verdict.answer && clopen_witness, || format!("verdict {verdict:?}"));
        let mut r = rng(seed, 5);
        for _ in 0..samples {
            let words: Vec<String> = (0..r.gen_range(1..=3))
                .map(|_| (0..r.gen_range(0..=4)).map(|_| if r.gen_bool(0.5) { '0' } else { '1' }).collect())
                .collect();
            let clopen = DefinableSet::Simple { generic: false, set: CantorSet::from_clopen(Clopen::from_words(words)) };
            let ideal = IdealDescriptor::closed(space.clone(), clopen)?;
            t.case(!op.member(&ideal)?, || format!("clopen {} became a member", ideal.render()));
            let finite = DefinableSet::Simple {
                generic: false,
                set: CantorSet::points((0..r.gen_range(1..=4)).map(|_| sample::cantor_point(&mut r))),
            };
            let ideal = IdealDescriptor::closed(space.clone(), finite)?;
            t.case(op.member(&ideal)?, || format!("finite {} is not a member", ideal.render()));
        }
        Ok(())
    })
}

fn random_radical<R: Rng>(r: &mut R, space: &Arc<Space>) -> Result<RadicalOp> {
    Ok(match r.gen_range(0..4) {
        0 | 1 => sample::join_op(r, space, 3),
        2 => {
            let m = sample::set(r, space, false);
            let s = space.intersection(&m, &sample::set(r, space, false))?;
            RadicalOp::punctured(space.clone(), m, s)?
        }
        _ => RadicalOp::meet(vec![sample::join_op(r, space, 2), sample::join_op(r, space, 2)])?,
    })
}

/// The greatest quasi-closed set is quasi-closed, idempotent, monotone, and
/// contains the quasi-closed closed sets of the generated algebra.
pub fn check_gqc_properties(samples: usize, seed: u64) -> CheckOutcome {
    run_check("greatest quasi-closed subsets", |t| {
        let mut r = rng(seed, 6);
        for space in spaces_for_ops() {
            for _ in 0..samples {
                let op = random_radical(&mut r, &space)?;
                let c0 = sample::closed_set(&mut r, &space);
                let got = op.greatest_quasi_closed(&c0)?;
                let ctx = || format!("{} on {}", op.render(), space.render_set(&c0));
                t.case(space.is_subset(&got, &c0)?, || format!("result escapes c0: {}", ctx()));
                t.case(space.is_empty(&got) || op.quasi_closed_test(&got)?, || format!("result not quasi-closed: {}", ctx()));
                t.case(op.greatest_quasi_closed(&got)? == got, || format!("not idempotent: {}", ctx()));
                let smaller = space.intersection(&c0, &sample::closed_set(&mut r, &space))?;
                t.case(space.is_subset(&op.greatest_quasi_closed(&smaller)?, &got)?, || format!("not monotone: {}", ctx()));
                let mut gens = op.defining_sets();
                gens.push(&c0);
                for (atom, rep) in space.atoms(&gens)? {
                    if rep == space.generic_point() {
                        continue;
                    }
                    let cand = space.closure(&atom)?;
                    if space.is_subset(&cand, &c0)? && !space.is_empty(&cand) && op.quasi_closed_test(&cand)? {
                        t.case(space.is_subset(&cand, &got)?, || {
                            format!("misses quasi-closed {}: {}", space.render_set(&cand), ctx())
                        });
                    }
                }
                if t.failed() {
                    return Ok(());
                }
            }
        }
        Ok(())
    })
}

/// Radical membership ignores the sharp locus; single-member joins agree
/// with spectral membership.
pub fn check_sharp_insensitivity(samples: usize, seed: u64) -> CheckOutcome {
    run_check("radical membership depends only on V(I)", |t| {
        let mut r = rng(seed, 7);
        for space in spaces_for_ops() {
            for _ in 0..samples {
                let op = random_radical(&mut r, &space)?;
                let ideal = sample::ideal(&mut r, &space, None);
                t.case(op.member(&ideal)? == op.member(&ideal.radical())?, || {
                    format!("{} depends on sharp at {}", op.render(), ideal.render())
                });
                let single = sample::spectral_op(&mut r, &space);
                let join = RadicalOp::join(vec![single.clone()])?;
                t.case(join.member(&ideal)? == single.member(&ideal)?, || {
                    format!("{} vs {} at {}", join.render(), single.render(), ideal.render())
                });
            }
        }
        Ok(())
    })
}

/// Every enumerated pair is recovered from its membership function.
pub fn check_normalize_catalog(max_points: usize) -> CheckOutcome {
    run_check("normalization round-trips on the catalog", |t| {
        for d in catalog_descriptors(max_points) {
            for pair in crate::oracle::enumerate_pairs(&d)? {
                let back = stable_normalize(d.clone(), &[], |i| pair.member_universe(i))?;
                t.case(back == pair, || format!("{} came back as {}", pair.render(), back.render()));
            }
        }
        Ok(())
    })
}

/// Random one-dimensional pairs are recovered from their membership function.
pub fn check_normalize_one_dim(samples: usize, seed: u64) -> CheckOutcome {
    run_check("normalization round-trips on one-dimensional pairs", |t| {
        let mut r = rng(seed, 8);
        for _ in 0..samples {
            let space = sample::one_dim_space(&mut r);
            let d = sample::descriptor(&mut r, &space);
            let pair = sample::pair(&mut r, &d);
            let back = stable_normalize(d.clone(), &[pair.delta(), pair.pi()], |i| pair.member_universe(i))?;
            t.case(back == pair, || format!("{} came back as {}", pair.render(), back.render()));
        }
        Ok(())
    })
}

/// Flag-preserving automorphisms act as order isomorphisms on pairs.
pub fn check_transfer(max_points: usize) -> CheckOutcome {
    run_check("transfer along automorphisms is an order isomorphism", |t| {
        for d in catalog_descriptors(max_points) {
            let pairs = crate::oracle::enumerate_pairs(&d)?;
            for phi in automorphisms(&d) {
                let inv = phi.inverse();
                let images: Vec<StableOpPair> = pairs.iter().map(|p| phi.transfer_pair(p)).collect::<Result<_>>()?;
                for (p, img) in pairs.iter().zip(&images) {
                    t.case(&inv.transfer_pair(img)? == p, || format!("inverse does not undo transfer of {}", p.render()));
                    t.case(pairs.contains(img), || format!("image of {} is not enumerated", p.render()));
                }
                for (a, ia) in pairs.iter().zip(&images) {
                    for (b, ib) in pairs.iter().zip(&images) {
                        t.case(a.leq(b)? == ia.leq(ib)?, || format!("order not preserved at {} / {}", a.render(), b.render()));
                    }
                }
            }
        }
        Ok(())
    })
}

/// Lattice laws, bounds and spectral agreement for random one-dimensional pairs.
pub fn check_stable_one_dim(samples: usize, seed: u64) -> CheckOutcome {
    run_check("stable pairs on one-dimensional spaces", |t| {
        let mut r = rng(seed, 9);
        for _ in 0..samples {
            let space = sample::one_dim_space(&mut r);
            let d = sample::descriptor(&mut r, &space);
            let a = sample::pair(&mut r, &d);
            let b = sample::pair(&mut r, &d);
            let ctx = || format!("{} / {}", a.render(), b.render());
            let meet = a.meet(&b)?;
            let join = a.join(&b)?;
            t.case(a.leq(&a)?, || format!("reflexivity fails: {}", ctx()));
            t.case(meet.leq(&a)? && meet.leq(&b)? && a.leq(&join)? && b.leq(&join)?, || format!("bounds fail: {}", ctx()));
            t.case(a.meet(&join)? == a && a.join(&meet)? == a, || format!("absorption fails: {}", ctx()));
            t.case(meet == b.meet(&a)? && join == b.join(&a)?, || format!("commutativity fails: {}", ctx()));
            let ideal = sample::ideal(&mut r, &space, Some(d.branched()));
            t.case(!a.leq(&b)? || !a.member(&ideal)? || b.member(&ideal)?, || format!("order vs membership: {}", ctx()));
            let spectral_pair = StableOpPair::spectral(d.clone(), a.delta())?;
            let spectral = SpectralOp::canonicalize(space.clone(), a.delta())?;
            t.case(spectral_pair.member(&ideal)? == spectral.member(&ideal)?, || {
                format!("({}, ∅) vs {} at {}", space.render_set(a.delta()), spectral.render(), ideal.render())
            });
        }
        Ok(())
    })
}

/// The three views of a stable operation agree on every enumerated pair.
pub fn check_dictionary(max_points: usize) -> CheckOutcome {
    run_check("stable pair, localizing system and length function agree", |t| {
        for d in catalog_descriptors(max_points) {
            let lattice = Lattice::enumerate(&d)?;
            let space = d.space().clone();
            let Space::Poset(p) = &*space else { unreachable!("catalog posets") };
            let lengths: Vec<SingularLengthView> = lattice
                .pairs
                .iter()
                .map(|pair| SingularLengthView::new(LocalizingSystemView::new(Source::Pair(pair.clone()))))
                .collect();
            for (i, pair) in lattice.pairs.iter().enumerate() {
                let view = lengths[i].system();
                for (k, ideal) in lattice.universe.iter().enumerate() {
                    let tau = lengths[i].tau_universe(ideal)?;
                    t.case((tau == Tau::Zero) == lattice.tables[i].get(k) && view.member_universe(ideal)? == lattice.tables[i].get(k), || {
                        format!("{}: tau/member disagree on {}", pair.render(), ideal.render())
                    });
                }
                t.case(localizing_axioms_check(&lattice.tables[i]), || format!("{} is not upward closed", pair.render()));
                // radical: pair ⇔ localizing system ⇔ agreement with the spectral operation of Δ
                let ls = is_radical_ls(view)?.answer;
                let join = RadicalOp::join(vec![SpectralOp::canonicalize(space.clone(), pair.delta())?])?;
                let join_view = LocalizingSystemView::new(Source::Radical(join.clone()));
                let mut agrees = join.is_spectral()?.answer;
                for ideal in lattice.universe.iter() {
                    agrees &= join_view.member_universe(ideal)? == pair.member_universe(ideal)?;
                }
                t.case(ls == pair.is_radical() && ls == agrees, || {
                    format!("{}: radical views disagree ({ls}, {}, {agrees})", pair.render(), pair.is_radical())
                });
                // Σ by scanning τ over the primary ideals at each nonzero prime
                let mut scanned = 0u64;
                for q in (0..p.len()).filter(|&q| q != p.bottom()) {
                    let mut primaries = vec![IdealDescriptor::prime(space.clone(), &Point::Poset(q), false)?];
                    if d_mask(d.branched()) & bit(q) != 0 {
                        primaries.push(IdealDescriptor::prime(space.clone(), &Point::Poset(q), true)?);
                    }
                    for ideal in primaries {
                        if lengths[i].tau(&ideal)? == Tau::Infinity {
                            scanned |= bit(q);
                        }
                    }
                }
                let sigma = sigma_support(pair);
                t.case(sigma == DefinableSet::Bits(scanned), || format!("{}: sigma {}", pair.render(), space.render_set(&sigma)));
                let rebuilt = sharp_rebuild(pair)?;
                t.case(&rebuilt == pair, || format!("{} rebuilt as {}", pair.render(), rebuilt.render()));
                // order ⇔ nesting ⇔ pointwise τ
                for (j, other) in lattice.pairs.iter().enumerate() {
                    let nested = lattice.leq(i, j);
                    let mut tau_ge = true;
                    for ideal in lattice.universe.iter() {
                        let (ti, tj) = (lengths[i].tau_universe(ideal)?, lengths[j].tau_universe(ideal)?);
                        tau_ge &= !(ti == Tau::Zero && tj == Tau::Infinity);
                    }
                    t.case(pair.leq(other)? == nested && nested == tau_ge, || {
                        format!("order views disagree on {} / {}", pair.render(), other.render())
                    });
                }
                if t.failed() {
                    return Ok(());
                }
            }
        }
        Ok(())
    })
}

fn d_mask(set: &DefinableSet) -> u64 {
    match set {
        DefinableSet::Bits(m) => *m,
        _ => 0,
    }
}

/// `ℓ = ℓ♯` for random ordinal pairs.
pub fn check_rebuild_one_dim(samples: usize, seed: u64) -> CheckOutcome {
    run_check("length functions are rebuilt from their localizations", |t| {
        let mut r = rng(seed, 10);
        for _ in 0..samples {
            let top = ["w", "w^2", "w^3"][r.gen_range(0..3)];
            let space = Arc::new(Space::ordinal(top.parse().expect("literal")));
            let d = sample::descriptor(&mut r, &space);
            let pair = sample::pair(&mut r, &d);
            let rebuilt = sharp_rebuild(&pair)?;
            t.case(rebuilt == pair, || format!("{} rebuilt as {}", pair.render(), rebuilt.render()));
            let ideal = sample::ideal(&mut r, &space, Some(d.branched()));
            let bigger = IdealDescriptor::new(
                space.clone(),
                space.intersection(ideal.c(), &sample::closed_set(&mut r, &space))?,
                space.empty_set(),
            )?;
            t.case(!pair.member(&ideal)? || pair.member(&bigger)?, || {
                format!("{} not upward closed at {}", pair.render(), ideal.render())
            });
        }
        Ok(())
    })
}

/// Closed-form lattice operations agree with the oracle's scans.
pub fn check_lattice_agreement(max_points: usize) -> CheckOutcome {
    run_check("stable lattice agrees with the F-table oracle", |t| {
        for d in catalog_descriptors(max_points) {
            let lattice = Lattice::enumerate(&d)?;
            let index: HashMap<&StableOpPair, usize> = lattice.pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
            for i in 0..lattice.len() {
                for j in i + 1..lattice.len() {
                    t.case(lattice.tables[i] != lattice.tables[j], || {
                        format!("{} and {} share an F-table", lattice.pairs[i].render(), lattice.pairs[j].render())
                    });
                }
            }
            for (i, a) in lattice.pairs.iter().enumerate() {
                for (j, b) in lattice.pairs.iter().enumerate() {
                    let ctx = || format!("{} / {} over {}", a.render(), b.render(), d.render());
                    t.case(a.leq(b)? == lattice.leq(i, j), || format!("leq disagrees: {}", ctx()));
                    let meet = a.meet(b)?;
                    let join = a.join(b)?;
                    t.case(index.get(&meet) == Some(&lattice.glb(i, j)?), || format!("meet disagrees: {}", ctx()));
                    t.case(index.get(&join) == Some(&lattice.lub(i, j)?), || format!("join disagrees: {}", ctx()));
                }
                if t.failed() {
                    return Ok(());
                }
            }
            // spectral pairs: radical joins match the lattice lub
            let spectral: Vec<usize> = (0..lattice.len()).filter(|&i| lattice.pairs[i].is_radical()).collect();
            for &i in &spectral {
                for &j in &spectral {
                    let ops = [&lattice.pairs[i], &lattice.pairs[j]]
                        .map(|p| SpectralOp::canonicalize(d.space().clone(), p.delta()).map(|s| RadicalOp::join(vec![s])));
                    let [a, b] = ops;
                    let joined = RadicalOp::radical_join(&a??, &b??)?;
                    let lub = &lattice.pairs[lattice.lub(i, j)?];
                    let mut same_table = true;
                    for ideal in lattice.universe.iter() {
                        if let UniverseIdeal::Proper(x) = ideal {
                            same_table &= joined.member(x)? == lub.member(x)?;
                        }
                    }
                    t.case(same_table, || format!("radical join differs from lub {}", lub.render()));
                }
            }
        }
        Ok(())
    })
}
