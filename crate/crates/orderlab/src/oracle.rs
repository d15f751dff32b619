//! Computable order comparators on the group backends.
//!
//! Each oracle carries a declared class label. Labels are claims to be
//! tested by the window checkers, not trusted metadata: the test suite
//! validates every label (and rejects deliberately mislabeled oracles).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::group::{Elem, GroupSpec};
use crate::window::AxiomClass;
use crate::Error;

/// Result of comparing two elements. `Unrelated` only occurs for
/// partial-order comparators; `Equal` iff the elements coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Less,
    Greater,
    Equal,
    Unrelated,
}

impl Cmp {
    fn from_ord(o: Ordering) -> Cmp {
        match o {
            Ordering::Less => Cmp::Less,
            Ordering::Greater => Cmp::Greater,
            Ordering::Equal => Cmp::Equal,
        }
    }
}

#[derive(Clone, Debug)]
enum OracleKind {
    /// Lexicographic comparison of normal-form coordinates.
    Lex,
    /// Locally invariant partial order by squared Euclidean norm.
    NormLio,
    /// Bi-order on free groups via truncated power-series expansion.
    Magnus,
    /// Left order from the affine action on the line: basepoint image
    /// first, ties broken by slope exponent.
    AffineDyn,
    /// Bi-order on the dyadic affine group: slope exponent first.
    AffineBi,
    /// Order derived from a positive cone: `x < y  <=>  x^-1 y in P`.
    FromCone(Cone),
}

/// Total or partial computable comparator on a group, with declared class.
#[derive(Clone, Debug)]
pub struct OrderOracle {
    spec: GroupSpec,
    kind: OracleKind,
    class: AxiomClass,
    name: String,
}

/// Computable positive-cone membership predicate.
#[derive(Clone, Debug)]
pub struct Cone {
    spec: GroupSpec,
    source: ConeSource,
}

#[derive(Clone, Debug)]
enum ConeSource {
    /// Positivity under an existing oracle: `x in P  <=>  x > e`.
    Oracle(Arc<OrderOracle>),
    /// Half-space test on free abelian groups: positive inner product
    /// with the normal vector, lexicographic tie-break on the boundary.
    HalfSpace(Vec<i64>),
}

fn lex_supported(spec: &GroupSpec) -> bool {
    match spec {
        GroupSpec::FreeAbelian(_) | GroupSpec::Heisenberg | GroupSpec::KleinBottle => true,
        GroupSpec::DirectProduct(fs) => fs.iter().all(lex_supported),
        _ => false,
    }
}

fn lex_bi_invariant(spec: &GroupSpec) -> bool {
    // the Klein relation flips the second coordinate under conjugation
    match spec {
        GroupSpec::KleinBottle => false,
        GroupSpec::DirectProduct(fs) => fs.iter().all(lex_bi_invariant),
        _ => true,
    }
}

impl OrderOracle {
    pub fn lex(spec: GroupSpec) -> Result<OrderOracle, Error> {
        if !lex_supported(&spec) {
            return Err(Error::UnsupportedOracle(format!("lex on {spec}")));
        }
        let class = if lex_bi_invariant(&spec) {
            AxiomClass::BiInvariantTotal
        } else {
            AxiomClass::LeftInvariantTotal
        };
        Ok(OrderOracle { spec, kind: OracleKind::Lex, class, name: "lex".into() })
    }

    pub fn norm_lio(spec: GroupSpec) -> Result<OrderOracle, Error> {
        if !matches!(spec, GroupSpec::FreeAbelian(_)) {
            return Err(Error::UnsupportedOracle(format!("norm on {spec}")));
        }
        Ok(OrderOracle {
            spec,
            kind: OracleKind::NormLio,
            class: AxiomClass::LocallyInvariant,
            name: "norm".into(),
        })
    }

    pub fn magnus(spec: GroupSpec) -> Result<OrderOracle, Error> {
        if !matches!(spec, GroupSpec::FreeGroup(_)) {
            return Err(Error::UnsupportedOracle(format!("magnus on {spec}")));
        }
        Ok(OrderOracle {
            spec,
            kind: OracleKind::Magnus,
            class: AxiomClass::BiInvariantTotal,
            name: "magnus".into(),
        })
    }

    pub fn affine_dyn(spec: GroupSpec) -> Result<OrderOracle, Error> {
        if spec != GroupSpec::DyadicAffine {
            return Err(Error::UnsupportedOracle(format!("affine-dyn on {spec}")));
        }
        Ok(OrderOracle {
            spec,
            kind: OracleKind::AffineDyn,
            class: AxiomClass::LeftInvariantTotal,
            name: "affine-dyn".into(),
        })
    }

    pub fn affine_bi(spec: GroupSpec) -> Result<OrderOracle, Error> {
        if spec != GroupSpec::DyadicAffine {
            return Err(Error::UnsupportedOracle(format!("affine-bi on {spec}")));
        }
        Ok(OrderOracle {
            spec,
            kind: OracleKind::AffineBi,
            class: AxiomClass::BiInvariantTotal,
            name: "affine-bi".into(),
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn class(&self) -> AxiomClass {
        self.class
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Same comparator, different declared class (for negative controls).
    pub fn with_class(mut self, class: AxiomClass) -> OrderOracle {
        self.class = class;
        self
    }

    pub fn compare(&self, x: &Elem, y: &Elem) -> Result<Cmp, Error> {
        self.spec.validate(x)?;
        self.spec.validate(y)?;
        if x == y {
            return Ok(Cmp::Equal);
        }
        Ok(match &self.kind {
            OracleKind::Lex => Cmp::from_ord(lex_cmp(x, y)),
            OracleKind::NormLio => {
                let (nx, ny) = (sq_norm(x), sq_norm(y));
                match nx.cmp(&ny) {
                    Ordering::Less => Cmp::Less,
                    Ordering::Greater => Cmp::Greater,
                    Ordering::Equal => Cmp::Unrelated,
                }
            }
            OracleKind::Magnus => magnus_cmp(x, y),
            OracleKind::AffineDyn => {
                let (Elem::Affine(kx, dx), Elem::Affine(ky, dy)) = (x, y) else { unreachable!() };
                Cmp::from_ord(dx.cmp(dy).then(kx.cmp(ky)))
            }
            OracleKind::AffineBi => {
                let (Elem::Affine(kx, dx), Elem::Affine(ky, dy)) = (x, y) else { unreachable!() };
                Cmp::from_ord(kx.cmp(ky).then(dx.cmp(dy)))
            }
            OracleKind::FromCone(cone) => {
                let xinv_y = self.spec.multiply(&self.spec.invert(x)?, y)?;
                if cone.contains(&xinv_y)? {
                    Cmp::Less
                } else {
                    let yinv_x = self.spec.multiply(&self.spec.invert(y)?, x)?;
                    if cone.contains(&yinv_x)? {
                        Cmp::Greater
                    } else {
                        Cmp::Unrelated
                    }
                }
            }
        })
    }
}

impl fmt::Display for OrderOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn lex_cmp(x: &Elem, y: &Elem) -> Ordering {
    match (x, y) {
        (Elem::Vector(u), Elem::Vector(v)) => u.cmp(v),
        (Elem::Heis(a1, b1, c1), Elem::Heis(a2, b2, c2)) => {
            (a1, b1, c1).cmp(&(a2, b2, c2))
        }
        (Elem::Klein(m1, n1), Elem::Klein(m2, n2)) => (m1, n1).cmp(&(m2, n2)),
        (Elem::Prod(u), Elem::Prod(v)) => {
            for (a, b) in u.iter().zip(v) {
                let o = lex_cmp(a, b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        }
        _ => unreachable!("lex oracle constructed for supported specs only"),
    }
}

fn sq_norm(x: &Elem) -> i128 {
    let Elem::Vector(v) = x else { unreachable!() };
    v.iter().map(|&c| i128::from(c) * i128::from(c)).sum()
}

// ---- Magnus expansion ------------------------------------------------

type Mono = Vec<u32>;

/// Truncated noncommutative series as monomial -> coefficient.
fn expand(word: &[(u32, bool)], d_max: usize) -> HashMap<Mono, i64> {
    let mut acc: HashMap<Mono, i64> = HashMap::new();
    acc.insert(Vec::new(), 1);
    for &(idx, inv) in word {
        // g -> 1 + X;  g^-1 -> 1 - X + X^2 - ...
        let mut letter: Vec<(Mono, i64)> = vec![(Vec::new(), 1)];
        let mut coeff = if inv { -1i64 } else { 1 };
        for deg in 1..=d_max {
            letter.push((vec![idx; deg], coeff));
            if !inv {
                break;
            }
            coeff = -coeff;
        }
        let mut next: HashMap<Mono, i64> = HashMap::new();
        for (m, c) in &acc {
            for (lm, lc) in &letter {
                if m.len() + lm.len() > d_max {
                    continue;
                }
                let mut nm = m.clone();
                nm.extend_from_slice(lm);
                let e = next.entry(nm).or_insert(0);
                *e = e.checked_add(c.checked_mul(*lc).expect("coefficient overflow"))
                    .expect("coefficient overflow");
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    acc
}

/// Scan position of a monomial: total degree ascending, then within a
/// degree in decreasing colexicographic order (rightmost letter first,
/// larger generator index earlier). Any fixed degree-refining scan yields
/// a bi-invariant total order; this one decides `x` before `y` at degree
/// one while keeping the commutator `[x,y]` positive.
fn scan_key(m: &Mono) -> (usize, Vec<i64>) {
    (m.len(), m.iter().rev().map(|&i| -i64::from(i)).collect())
}

fn magnus_cmp(x: &Elem, y: &Elem) -> Cmp {
    let (Elem::Free(wx), Elem::Free(wy)) = (x, y) else { unreachable!() };
    // The lowest nonzero term of w - 1 has degree <= |w| for reduced w,
    // so this truncation decides every unequal pair.
    let d_max = wx.len() + wy.len() + 1;
    let sx = expand(wx, d_max);
    let sy = expand(wy, d_max);
    let mut monos: Vec<&Mono> = sx.keys().chain(sy.keys()).collect();
    monos.sort_by_key(|m| scan_key(m));
    monos.dedup();
    for m in monos {
        let cx = sx.get(m).copied().unwrap_or(0);
        let cy = sy.get(m).copied().unwrap_or(0);
        match cx.cmp(&cy) {
            Ordering::Greater => return Cmp::Greater,
            Ordering::Less => return Cmp::Less,
            Ordering::Equal => {}
        }
    }
    Cmp::Equal
}

/// Expansion of a free word truncated at `d_max`, exposed for the
/// truncation-bound validation: for reduced `w != e` the series already
/// differs from 1 at degree `|w|`.
pub fn magnus_series(word: &Elem, d_max: usize) -> HashMap<Vec<u32>, i64> {
    let Elem::Free(w) = word else { panic!("magnus_series needs a free-group element") };
    expand(w, d_max)
}

// ---- Cones -----------------------------------------------------------

impl Cone {
    /// Half-space cone on a free abelian group: `x in P` iff the inner
    /// product with `normal` is positive, or zero with `x` lex-positive.
    pub fn half_space(spec: GroupSpec, normal: Vec<i64>) -> Result<Cone, Error> {
        match &spec {
            GroupSpec::FreeAbelian(n) if *n == normal.len() => {
                Ok(Cone { spec, source: ConeSource::HalfSpace(normal) })
            }
            _ => Err(Error::UnsupportedOracle(format!("half-space cone on {spec}"))),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn contains(&self, x: &Elem) -> Result<bool, Error> {
        self.spec.validate(x)?;
        match &self.source {
            ConeSource::Oracle(o) => Ok(o.compare(x, &self.spec.identity())? == Cmp::Greater),
            ConeSource::HalfSpace(normal) => {
                let Elem::Vector(v) = x else { unreachable!() };
                let dot: i128 = v
                    .iter()
                    .zip(normal)
                    .map(|(&a, &b)| i128::from(a) * i128::from(b))
                    .sum();
                match dot.cmp(&0) {
                    Ordering::Greater => Ok(true),
                    Ordering::Less => Ok(false),
                    Ordering::Equal => Ok(v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)),
                }
            }
        }
    }
}

/// `P = { x : x > e }` for the given oracle.
pub fn order_to_cone(oracle: &OrderOracle) -> Cone {
    Cone {
        spec: oracle.spec.clone(),
        source: ConeSource::Oracle(Arc::new(oracle.clone())),
    }
}

/// The order `x < y  <=>  x^-1 y in P`. For a left-invariant total source
/// this round-trips exactly; for a merely locally invariant relation the
/// derived order may differ from the source.
pub fn cone_to_order(cone: &Cone) -> OrderOracle {
    OrderOracle {
        spec: cone.spec.clone(),
        kind: OracleKind::FromCone(cone.clone()),
        class: AxiomClass::LeftInvariantTotal,
        name: "cone".into(),
    }
}

/// Resolves an oracle specification string: `lex`, `norm`, `magnus`,
/// `affine-dyn`, `affine-bi`, or `cone:<file>` (one word per line; the
/// half-space normal is the sum of the evaluated words).
pub fn parse_oracle(spec: &GroupSpec, s: &str) -> Result<OrderOracle, Error> {
    match s {
        "lex" => OrderOracle::lex(spec.clone()),
        "norm" => OrderOracle::norm_lio(spec.clone()),
        "magnus" => OrderOracle::magnus(spec.clone()),
        "affine-dyn" => OrderOracle::affine_dyn(spec.clone()),
        "affine-bi" => OrderOracle::affine_bi(spec.clone()),
        _ => {
            if let Some(path) = s.strip_prefix("cone:") {
                let text = std::fs::read_to_string(path)?;
                let mut normal = vec![
                    0i64;
                    match spec {
                        GroupSpec::FreeAbelian(n) => *n,
                        _ => {
                            return Err(Error::UnsupportedOracle(format!("cone file on {spec}")))
                        }
                    }
                ];
                for line in text.lines() {
                    let line = line.split('#').next().unwrap_or("").trim();
                    if line.is_empty() {
                        continue;
                    }
                    let elem = spec.evaluate(&line.parse()?)?;
                    let Elem::Vector(v) = elem else { unreachable!() };
                    for (acc, c) in normal.iter_mut().zip(&v) {
                        *acc = acc.checked_add(*c).expect("cone normal overflow");
                    }
                }
                let mut oracle = cone_to_order(&Cone::half_space(spec.clone(), normal)?);
                oracle.name = s.to_string();
                Ok(oracle)
            } else {
                Err(Error::UnsupportedOracle(s.to_string()))
            }
        }
    }
}
