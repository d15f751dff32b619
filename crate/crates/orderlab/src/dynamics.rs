//! Recurrence and Conradian probes for concrete orders under the
//! translation action, orbit-restriction sampling, and bounded
//! extraction of limit restrictions.
//!
//! Probes are bounded experiments: `Found(n)` is a checked witness,
//! `NotFound` only says "no recurrence up to N" and is never a proof of
//! non-recurrence.

use std::sync::Arc;

use crate::group::Elem;
use crate::oracle::{Cmp, OrderOracle};
use crate::window::{act, restrict, PairState, Window, WindowRelation};
use crate::Error;

pub const DEFAULT_PROBE_BOUND: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Found(u64),
    NotFound,
}

impl ProbeOutcome {
    pub fn found(self) -> Option<u64> {
        match self {
            ProbeOutcome::Found(n) => Some(n),
            ProbeOutcome::NotFound => None,
        }
    }
}

/// Outcome of a bounded recurrence probe for a pair `(g,h)` acting on a
/// window restriction, with per-step digests for audit.
#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub oracle: String,
    pub g: Elem,
    pub h: Elem,
    pub window: Arc<Window>,
    pub bound: u64,
    pub result: ProbeOutcome,
    /// The restriction being recurred to.
    pub base: WindowRelation,
    /// The translated restriction at the found step, when any.
    pub matched: Option<WindowRelation>,
    /// `(n, digest of the translated restriction)` for each probed step.
    pub orbit_digests: Vec<(u64, String)>,
}

/// Looks for the least n in [1, N] with `act(oracle, g^n, h^n, window)`
/// equal to `restrict(oracle, window)` as a pair table.
pub fn recurrence_probe(
    oracle: &OrderOracle,
    g: &Elem,
    h: &Elem,
    window: &Arc<Window>,
    bound: u64,
) -> Result<RecurrenceReport, Error> {
    if bound == 0 {
        return Err(Error::Hypothesis("probe bound must be at least 1".into()));
    }
    let spec = window.spec();
    spec.validate(g)?;
    spec.validate(h)?;
    let base = restrict(oracle, window)?;
    let mut orbit_digests = Vec::new();
    let mut result = ProbeOutcome::NotFound;
    let mut matched = None;
    for n in 1..=bound {
        let gn = spec.power(g, n as i64)?;
        let hn = spec.power(h, n as i64)?;
        let translated = act(oracle, &gn, &hn, window)?;
        orbit_digests.push((n, translated.digest()));
        if translated.same_restriction(&base) {
            result = ProbeOutcome::Found(n);
            matched = Some(translated);
            break;
        }
    }
    Ok(RecurrenceReport {
        oracle: oracle.name().to_string(),
        g: g.clone(),
        h: h.clone(),
        window: window.clone(),
        bound,
        result,
        base,
        matched,
        orbit_digests,
    })
}

/// Shortcut for left-invariant oracles: the translated restriction does
/// not depend on `g`, so probe with the identity on the left. Tests
/// cross-check this against the general path.
pub fn recurrence_probe_translation_only(
    oracle: &OrderOracle,
    h: &Elem,
    window: &Arc<Window>,
    bound: u64,
) -> Result<RecurrenceReport, Error> {
    recurrence_probe(oracle, &window.spec().identity(), h, window, bound)
}

#[derive(Clone, Debug)]
pub struct ConradianReport {
    pub oracle: String,
    pub x: Elem,
    pub y: Elem,
    pub bound: u64,
    pub result: ProbeOutcome,
    /// `(n, comparison of y against x y^n)` for each probed step.
    pub audit: Vec<(u64, Cmp)>,
}

/// Least n in [1, N] with `x y^n ≻ y`, for positive x, y under a total
/// left-invariant oracle.
pub fn conradian_probe(
    oracle: &OrderOracle,
    x: &Elem,
    y: &Elem,
    bound: u64,
) -> Result<ConradianReport, Error> {
    if bound == 0 {
        return Err(Error::Hypothesis("probe bound must be at least 1".into()));
    }
    let class = oracle.class();
    if !class.has_left_invariance() || class.admits_unrelated() {
        return Err(Error::Hypothesis(format!(
            "conradian probe needs a total left-invariant oracle, got class {class}"
        )));
    }
    let spec = oracle.spec().clone();
    spec.validate(x)?;
    spec.validate(y)?;
    let e = spec.identity();
    if oracle.compare(&e, x)? != Cmp::Less {
        return Err(Error::Hypothesis(format!("x = {x} is not positive")));
    }
    if oracle.compare(&e, y)? != Cmp::Less {
        return Err(Error::Hypothesis(format!("y = {y} is not positive")));
    }
    let mut audit = Vec::new();
    let mut result = ProbeOutcome::NotFound;
    let mut xyn = x.clone();
    for n in 1..=bound {
        xyn = spec.multiply(&xyn, y)?;
        let c = oracle.compare(y, &xyn)?;
        audit.push((n, c));
        if c == Cmp::Less {
            result = ProbeOutcome::Found(n);
            break;
        }
    }
    Ok(ConradianReport {
        oracle: oracle.name().to_string(),
        x: x.clone(),
        y: y.clone(),
        bound,
        result,
        audit,
    })
}

/// The sampled orbit of a window restriction under `(g^n, h^n)` for
/// n = 1..N, plus the multiset of distinct restrictions.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub oracle: String,
    pub g: Elem,
    pub h: Elem,
    pub window: Arc<Window>,
    pub bound: u64,
    /// `(n, restriction at n)` for n = 1..N in order.
    pub restrictions: Vec<(u64, WindowRelation)>,
}

/// One row of the orbit frequency table.
#[derive(Clone, Debug)]
pub struct FrequencyEntry {
    pub digest: String,
    pub count: u64,
    pub first_n: u64,
    pub last_n: u64,
    pub representative: WindowRelation,
}

impl OrbitSample {
    /// Distinct restrictions with frequencies, in order of first
    /// appearance along the orbit.
    pub fn frequencies(&self) -> Vec<FrequencyEntry> {
        self.frequencies_of(&self.restrictions)
    }

    fn frequencies_of(&self, slice: &[(u64, WindowRelation)]) -> Vec<FrequencyEntry> {
        let mut table: Vec<FrequencyEntry> = Vec::new();
        for (n, rel) in slice {
            let digest = rel.digest();
            match table.iter_mut().find(|fe| fe.digest == digest) {
                Some(fe) => {
                    fe.count += 1;
                    fe.last_n = *n;
                }
                None => table.push(FrequencyEntry {
                    digest,
                    count: 1,
                    first_n: *n,
                    last_n: *n,
                    representative: rel.clone(),
                }),
            }
        }
        table
    }

    /// The last half of the sampled indices (at least one entry).
    pub fn tail(&self) -> &[(u64, WindowRelation)] {
        let len = self.restrictions.len();
        &self.restrictions[len / 2..]
    }
}

pub fn orbit_restrictions(
    oracle: &OrderOracle,
    g: &Elem,
    h: &Elem,
    window: &Arc<Window>,
    bound: u64,
) -> Result<OrbitSample, Error> {
    if bound == 0 {
        return Err(Error::Hypothesis("probe bound must be at least 1".into()));
    }
    let spec = window.spec();
    spec.validate(g)?;
    spec.validate(h)?;
    let mut restrictions = Vec::new();
    for n in 1..=bound {
        let gn = spec.power(g, n as i64)?;
        let hn = spec.power(h, n as i64)?;
        restrictions.push((n, act(oracle, &gn, &hn, window)?));
    }
    Ok(OrbitSample {
        oracle: oracle.name().to_string(),
        g: g.clone(),
        h: h.clone(),
        window: window.clone(),
        bound,
        restrictions,
    })
}

/// Heuristic stand-in for the orbit's accumulation point: the restriction
/// with the highest frequency over the tail of the sample, ties broken by
/// latest occurrence. Reports carrying this value must flag it as a
/// heuristic and include the frequency table for audit.
pub fn limit_restriction(sample: &OrbitSample) -> WindowRelation {
    assert!(!sample.restrictions.is_empty(), "limit of an empty sample");
    let tail = sample.tail();
    let table = sample.frequencies_of(tail);
    let best = table
        .iter()
        .max_by_key(|fe| (fe.count, fe.last_n))
        .expect("nonempty tail");
    best.representative.clone()
}

#[derive(Clone, Debug)]
pub enum LinearityOutcome {
    /// All 2k consecutive comparisons agree in direction.
    Pass { ascending: bool },
    /// First consecutive pair breaking strict monotonicity; `offset` is
    /// the exponent i with the break between g·x^i and g·x^(i+1).
    Violation { offset: i64, left: Elem, right: Elem, state: PairState },
}

/// Checks that the coset chain g·x^-k, …, g, …, g·x^k is strictly
/// monotone in a single direction under the oracle.
pub fn coset_linearity_check(
    oracle: &OrderOracle,
    g: &Elem,
    x: &Elem,
    k: u64,
) -> Result<LinearityOutcome, Error> {
    let spec = oracle.spec().clone();
    spec.validate(g)?;
    spec.validate(x)?;
    if *x == spec.identity() {
        return Err(Error::Hypothesis("coset step element must not be the identity".into()));
    }
    if k == 0 {
        return Err(Error::Hypothesis("coset chain length k must be at least 1".into()));
    }
    let k = k as i64;
    let chain: Vec<Elem> = (-k..=k)
        .map(|i| {
            let xi = spec.power(x, i)?;
            spec.multiply(g, &xi)
        })
        .collect::<Result<_, _>>()?;
    let mut direction: Option<Cmp> = None;
    for (idx, pair) in chain.windows(2).enumerate() {
        let c = oracle.compare(&pair[0], &pair[1])?;
        let consistent = matches!(c, Cmp::Less | Cmp::Greater) && direction.map_or(true, |d| d == c);
        if !consistent {
            let state = match c {
                Cmp::Less => PairState::Less,
                Cmp::Greater => PairState::Greater,
                _ => PairState::Unrelated,
            };
            return Ok(LinearityOutcome::Violation {
                offset: idx as i64 - k,
                left: pair[0].clone(),
                right: pair[1].clone(),
                state,
            });
        }
        direction = Some(c);
    }
    Ok(LinearityOutcome::Pass { ascending: direction == Some(Cmp::Less) })
}

/// A failed positivity-closure instance: x, y ≻ e but xy ⊁ e.
#[derive(Clone, Debug)]
pub struct PositivityViolation {
    pub x: Elem,
    pub y: Elem,
    pub product: Elem,
}

/// Checks the positive cone of the oracle for closure under
/// multiplication, over all window pairs whose product stays in the
/// window.
pub fn cone_closed_check(
    oracle: &OrderOracle,
    window: &Arc<Window>,
) -> Result<Vec<PositivityViolation>, Error> {
    if oracle.spec() != window.spec() {
        return Err(Error::SpecMismatch);
    }
    let spec = window.spec();
    let e = spec.identity();
    let n = window.len();
    let positive: Vec<bool> = window
        .elems()
        .iter()
        .map(|x| Ok(*x != e && oracle.compare(&e, x)? == Cmp::Less))
        .collect::<Result<_, Error>>()?;
    let mut violations = Vec::new();
    for i in 0..n {
        if !positive[i] {
            continue;
        }
        for j in 0..n {
            if !positive[j] {
                continue;
            }
            let product = spec.multiply(window.elem(i), window.elem(j))?;
            if window.index_of(&product).is_none() {
                continue;
            }
            // inverse pairs multiply to e; that says nothing about the
            // cone (and cannot happen for positive x, y under a genuine
            // left-invariant order)
            if product == e {
                continue;
            }
            if !(product != e && oracle.compare(&e, &product)? == Cmp::Less) {
                violations.push(PositivityViolation {
                    x: window.elem(i).clone(),
                    y: window.elem(j).clone(),
                    product,
                });
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_elem, GroupSpec};
    use crate::oracle::OrderOracle;
    use crate::report::parse_window_items;

    fn z2() -> GroupSpec {
        GroupSpec::FreeAbelian(2)
    }

    fn v(a: i64, b: i64) -> Elem {
        Elem::Vector(vec![a, b])
    }

    fn win(spec: &GroupSpec, items: &str) -> Arc<Window> {
        Arc::new(parse_window_items(spec, items).unwrap())
    }

    #[test]
    fn bi_invariant_orders_recur_immediately() {
        let o = OrderOracle::lex(z2()).unwrap();
        let w = win(&z2(), "x;y");
        for g in z2().ball(2, 100).unwrap().elems() {
            for h in z2().ball(2, 100).unwrap().elems() {
                let rep = recurrence_probe(&o, g, h, &w, 8).unwrap();
                assert_eq!(rep.result, ProbeOutcome::Found(1));
            }
        }
    }

    #[test]
    fn affine_witness_never_recurs() {
        let spec = GroupSpec::DyadicAffine;
        let o = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let w = win(&spec, "e;(-2,1/8)");
        let y_inv = spec.invert(&parse_elem(&spec, "(-1,1/2)").unwrap()).unwrap();
        let rep = recurrence_probe(&o, &spec.identity(), &y_inv, &w, 64).unwrap();
        assert_eq!(rep.result, ProbeOutcome::NotFound);
        assert_eq!(rep.orbit_digests.len(), 64);
    }

    #[test]
    fn klein_flip_recurs_with_period_two() {
        let k = GroupSpec::KleinBottle;
        let o = OrderOracle::lex(k.clone()).unwrap();
        let w = win(&k, "y");
        let rep = recurrence_probe(&o, &k.identity(), &Elem::Klein(1, 0), &w, 10).unwrap();
        assert_eq!(rep.result, ProbeOutcome::Found(2));
    }

    #[test]
    fn conradian_probe_examples() {
        let lex = OrderOracle::lex(z2()).unwrap();
        let rep = conradian_probe(&lex, &v(0, 1), &v(1, 0), 8).unwrap();
        assert_eq!(rep.result, ProbeOutcome::Found(1));

        let spec = GroupSpec::DyadicAffine;
        let ad = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let x = parse_elem(&spec, "(-2,1/8)").unwrap();
        let y = parse_elem(&spec, "(-1,1/2)").unwrap();
        let rep = conradian_probe(&ad, &x, &y, 64).unwrap();
        assert_eq!(rep.result, ProbeOutcome::NotFound);
        assert_eq!(rep.audit.len(), 64);
        assert!(rep.audit.iter().all(|&(_, c)| c == Cmp::Greater), "x y^n < y throughout");

        let f2 = GroupSpec::FreeGroup(2);
        let mg = OrderOracle::magnus(f2.clone()).unwrap();
        let fx = f2.evaluate(&"x".parse().unwrap()).unwrap();
        let fy = f2.evaluate(&"y".parse().unwrap()).unwrap();
        let rep = conradian_probe(&mg, &fx, &fy, 4).unwrap();
        assert_eq!(rep.result, ProbeOutcome::Found(1));
    }

    #[test]
    fn conradian_probe_validates_hypotheses() {
        let norm = OrderOracle::norm_lio(z2()).unwrap();
        assert!(matches!(
            conradian_probe(&norm, &v(1, 0), &v(0, 1), 4),
            Err(Error::Hypothesis(_))
        ));
        let lex = OrderOracle::lex(z2()).unwrap();
        assert!(matches!(
            conradian_probe(&lex, &v(-1, 0), &v(1, 0), 4),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn norm_orbit_stabilizes_decided() {
        let o = OrderOracle::norm_lio(z2()).unwrap();
        let w = win(&z2(), "(1,0);(-1,0)");
        // g x h^-1 = x + (1,0) via g = e, h = (-1,0)
        let sample =
            orbit_restrictions(&o, &z2().identity(), &v(-1, 0), &w, 20).unwrap();
        let freq = sample.frequencies();
        assert_eq!(freq.len(), 1, "a single distinct restriction");
        let limit = limit_restriction(&sample);
        assert_eq!(limit.unrelated_pairs(), 0);
        assert_eq!(limit.undecided_pairs(), 0);
        let a = w.index_of(&v(1, 0)).unwrap();
        let b = w.index_of(&v(-1, 0)).unwrap();
        assert_eq!(limit.get(b, a), PairState::Less, "(-1,0) < (1,0) in the limit");
        // the original restriction left the pair unrelated
        let base = crate::window::restrict(&o, &w).unwrap();
        assert_eq!(base.get(a, b), PairState::Unrelated);
    }

    #[test]
    fn lex_orbit_is_a_fixed_point() {
        let o = OrderOracle::lex(z2()).unwrap();
        let w = win(&z2(), "x;y");
        let sample = orbit_restrictions(&o, &v(1, 1), &v(-2, 3), &w, 12).unwrap();
        assert_eq!(sample.frequencies().len(), 1);
        let limit = limit_restriction(&sample);
        assert!(limit.same_restriction(&crate::window::restrict(&o, &w).unwrap()));
    }

    #[test]
    fn klein_orbit_alternates_with_parity() {
        let k = GroupSpec::KleinBottle;
        let o = OrderOracle::lex(k.clone()).unwrap();
        let w = win(&k, "y");
        let sample = orbit_restrictions(&o, &k.identity(), &Elem::Klein(1, 0), &w, 6).unwrap();
        let freq = sample.frequencies();
        assert_eq!(freq.len(), 2);
        let base = crate::window::restrict(&o, &w).unwrap();
        for (n, rel) in &sample.restrictions {
            // odd powers of x flip the sign of y, even powers restore it
            assert_eq!(rel.same_restriction(&base), n % 2 == 0, "parity at n={n}");
        }
    }

    #[test]
    fn norm_vertical_shift_limit() {
        let o = OrderOracle::norm_lio(z2()).unwrap();
        let w = win(&z2(), "(0,1);(0,-1)");
        let sample = orbit_restrictions(&o, &z2().identity(), &v(0, -1), &w, 20).unwrap();
        let limit = limit_restriction(&sample);
        let up = w.index_of(&v(0, 1)).unwrap();
        let down = w.index_of(&v(0, -1)).unwrap();
        assert_eq!(limit.get(down, up), PairState::Less);
    }

    #[test]
    fn coset_linearity_examples() {
        let lex = OrderOracle::lex(z2()).unwrap();
        let out = coset_linearity_check(&lex, &z2().identity(), &v(1, 0), 3).unwrap();
        assert!(matches!(out, LinearityOutcome::Pass { ascending: true }));

        let norm = OrderOracle::norm_lio(z2()).unwrap();
        let out = coset_linearity_check(&norm, &z2().identity(), &v(1, 0), 1).unwrap();
        assert!(matches!(out, LinearityOutcome::Violation { .. }));

        let spec = GroupSpec::DyadicAffine;
        let bi = OrderOracle::affine_bi(spec.clone()).unwrap();
        let g = parse_elem(&spec, "(1,0)").unwrap();
        let x = parse_elem(&spec, "(0,1)").unwrap();
        let out = coset_linearity_check(&bi, &g, &x, 2).unwrap();
        assert!(matches!(out, LinearityOutcome::Pass { .. }));

        assert!(coset_linearity_check(&lex, &v(0, 0), &v(0, 0), 1).is_err());
    }

    #[test]
    fn cone_closure_examples() {
        let lex = OrderOracle::lex(z2()).unwrap();
        let w = Arc::new(z2().ball(2, 1000).unwrap());
        assert!(cone_closed_check(&lex, &w).unwrap().is_empty());

        let spec = GroupSpec::DyadicAffine;
        let ad = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let wa = Arc::new(spec.ball(2, 1000).unwrap());
        assert!(cone_closed_check(&ad, &wa).unwrap().is_empty());

        let norm = OrderOracle::norm_lio(z2()).unwrap();
        assert!(cone_closed_check(&norm, &w).unwrap().is_empty());
    }

    #[test]
    fn probe_bounds_are_monotone() {
        let k = GroupSpec::KleinBottle;
        let o = OrderOracle::lex(k.clone()).unwrap();
        let w = win(&k, "y");
        let h = Elem::Klein(1, 0);
        let at_small = recurrence_probe(&o, &k.identity(), &h, &w, 2).unwrap();
        let at_large = recurrence_probe(&o, &k.identity(), &h, &w, 50).unwrap();
        assert_eq!(at_small.result, at_large.result);
    }

    #[test]
    fn translation_only_path_matches_general_path() {
        let spec = GroupSpec::DyadicAffine;
        let o = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let w = Arc::new(spec.ball(1, 1000).unwrap());
        for g in spec.ball(1, 1000).unwrap().elems() {
            for h in spec.ball(1, 1000).unwrap().elems() {
                let general = recurrence_probe(&o, g, h, &w, 8).unwrap();
                let shortcut = recurrence_probe_translation_only(&o, h, &w, 8).unwrap();
                assert_eq!(general.result, shortcut.result);
                assert_eq!(general.orbit_digests, shortcut.orbit_digests);
            }
        }
    }
}
