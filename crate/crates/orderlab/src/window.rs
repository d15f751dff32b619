//! Finite restrictions of binary relations on a group, axiom checking per
//! order class, the restriction map, and the exact G x G action
//! `x R^(g,h) y  <=>  g x h^-1 R g y h^-1`.
//!
//! A window can only check axiom instances that lie fully inside it, so
//! the checkers are window-relative: an instance is evaluated only when
//! every element it mentions is present and the needed entries are
//! decided. Undecided entries are "no information", never violations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::group::{Elem, GroupSpec, Word};
use crate::oracle::{Cmp, OrderOracle};
use crate::Error;

/// Finite ordered subset of a group, with index lookup. Each element
/// carries a representative word (a shortest one, for ball windows).
#[derive(Clone, Debug)]
pub struct Window {
    spec: GroupSpec,
    elems: Vec<Elem>,
    words: Vec<Word>,
    index: HashMap<Elem, usize>,
    identity_pos: Option<usize>,
}

impl Window {
    pub fn from_parts(spec: GroupSpec, elems: Vec<Elem>, words: Vec<Word>) -> Result<Window, Error> {
        assert_eq!(elems.len(), words.len());
        let mut index = HashMap::new();
        for (i, e) in elems.iter().enumerate() {
            spec.validate(e)?;
            if let Some(first) = index.insert(e.clone(), i) {
                return Err(Error::DuplicateElement { first, second: i });
            }
        }
        let identity_pos = index.get(&spec.identity()).copied();
        Ok(Window { spec, elems, words, index, identity_pos })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn identity_pos(&self) -> Option<usize> {
        self.identity_pos
    }

    /// `table[i][j] = Some(k)` when `elems[i] * elems[j] = elems[k]`.
    pub fn product_table(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.len();
        let mut table = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = self.spec.multiply(&self.elems[i], &self.elems[j]).expect("window elems valid");
                table[i][j] = self.index_of(&p);
            }
        }
        table
    }

    pub fn inverse_table(&self) -> Vec<Option<usize>> {
        self.elems
            .iter()
            .map(|e| {
                let inv = self.spec.invert(e).expect("window elems valid");
                self.index_of(&inv)
            })
            .collect()
    }
}

/// Builds a window from words in input order, prepending `e` if absent.
pub fn build_window(spec: &GroupSpec, words: &[Word]) -> Result<Window, Error> {
    let mut elems: Vec<Elem> = Vec::with_capacity(words.len() + 1);
    let mut kept: Vec<Word> = Vec::with_capacity(words.len() + 1);
    for w in words {
        elems.push(spec.evaluate(w)?);
        kept.push(w.clone());
    }
    let e = spec.identity();
    if !elems.contains(&e) {
        elems.insert(0, e);
        kept.insert(0, Word(Vec::new()));
    }
    Window::from_parts(spec.clone(), elems, kept)
}

/// Window file format: one word per line, `#` comments, blanks ignored.
pub fn parse_window_file(spec: &GroupSpec, text: &str) -> Result<Window, Error> {
    let mut words = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        words.push(line.parse::<Word>()?);
    }
    build_window(spec, &words)
}

/// State of one ordered pair in a window relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairState {
    Less,
    Greater,
    Unrelated,
    Undecided,
}

impl PairState {
    pub fn flip(self) -> PairState {
        match self {
            PairState::Less => PairState::Greater,
            PairState::Greater => PairState::Less,
            s => s,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PairState::Less => '<',
            PairState::Greater => '>',
            PairState::Unrelated => '|',
            PairState::Undecided => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<PairState> {
        match c {
            '<' => Some(PairState::Less),
            '>' => Some(PairState::Greater),
            '|' => Some(PairState::Unrelated),
            '?' => Some(PairState::Undecided),
            _ => None,
        }
    }

    pub fn is_decided(self) -> bool {
        self != PairState::Undecided
    }
}

/// Decided/undecided pair table over a window: a (partial) restriction of
/// a binary relation. Antisymmetry is maintained structurally: setting
/// `(i,j)` also sets the mirrored entry, and the diagonal is never stored.
#[derive(Clone, Debug)]
pub struct WindowRelation {
    window: Arc<Window>,
    entries: Vec<PairState>,
}

impl WindowRelation {
    pub fn new_undecided(window: Arc<Window>) -> WindowRelation {
        let n = window.len();
        WindowRelation { window, entries: vec![PairState::Undecided; n * n] }
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn get(&self, i: usize, j: usize) -> PairState {
        debug_assert_ne!(i, j);
        self.entries[i * self.window.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: PairState) {
        debug_assert_ne!(i, j);
        let n = self.window.len();
        self.entries[i * n + j] = s;
        self.entries[j * n + i] = s.flip();
    }

    pub fn undecided_pairs(&self) -> usize {
        let n = self.window.len();
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j) == PairState::Undecided {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn unrelated_pairs(&self) -> usize {
        let n = self.window.len();
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j) == PairState::Unrelated {
                    count += 1;
                }
            }
        }
        count
    }

    /// Same pair table over the same element list.
    pub fn same_restriction(&self, other: &WindowRelation) -> bool {
        self.window.elems() == other.window.elems() && self.entries == other.entries
    }

    /// Symbol matrix rows, `=` on the diagonal.
    pub fn symbol_rows(&self) -> Vec<String> {
        let n = self.window.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { '=' } else { self.get(i, j).symbol() })
                    .collect()
            })
            .collect()
    }

    /// Stable content digest of the pair table (hex, truncated).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for row in self.symbol_rows() {
            h.update(row.as_bytes());
            h.update(b"\n");
        }
        let out = h.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// The six order classes checkable on windows. Each class includes all
/// axioms of its prerequisites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AxiomClass {
    PartialOrder,
    TotalOrder,
    LeftInvariantTotal,
    BiInvariantTotal,
    LocallyInvariant,
    Conradian,
}

impl AxiomClass {
    pub const ALL: [AxiomClass; 6] = [
        AxiomClass::PartialOrder,
        AxiomClass::TotalOrder,
        AxiomClass::LeftInvariantTotal,
        AxiomClass::BiInvariantTotal,
        AxiomClass::LocallyInvariant,
        AxiomClass::Conradian,
    ];

    /// Classes that are total orders admit no Unrelated entries.
    pub fn admits_unrelated(self) -> bool {
        matches!(self, AxiomClass::PartialOrder | AxiomClass::LocallyInvariant)
    }

    pub fn has_left_invariance(self) -> bool {
        matches!(
            self,
            AxiomClass::LeftInvariantTotal | AxiomClass::BiInvariantTotal | AxiomClass::Conradian
        )
    }

    pub fn has_right_invariance(self) -> bool {
        self == AxiomClass::BiInvariantTotal
    }

    pub fn has_locally_invariant(self) -> bool {
        self == AxiomClass::LocallyInvariant
    }

    pub fn has_conradian(self) -> bool {
        self == AxiomClass::Conradian
    }
}

impl fmt::Display for AxiomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomClass::PartialOrder => "partial-order",
            AxiomClass::TotalOrder => "total-order",
            AxiomClass::LeftInvariantTotal => "left-invariant",
            AxiomClass::BiInvariantTotal => "bi-invariant",
            AxiomClass::LocallyInvariant => "locally-invariant",
            AxiomClass::Conradian => "conradian",
        };
        write!(f, "{s}")
    }
}

impl FromStr for AxiomClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<AxiomClass, Error> {
        match s {
            "partial-order" => Ok(AxiomClass::PartialOrder),
            "total-order" => Ok(AxiomClass::TotalOrder),
            "left-invariant" => Ok(AxiomClass::LeftInvariantTotal),
            "bi-invariant" => Ok(AxiomClass::BiInvariantTotal),
            "locally-invariant" => Ok(AxiomClass::LocallyInvariant),
            "conradian" => Ok(AxiomClass::Conradian),
            _ => Err(Error::Parse(format!("unknown axiom class `{s}`"))),
        }
    }
}

/// A falsified axiom instance: the witnessing elements and the entries
/// that contradict the axiom. Re-evaluating the instance on the relation
/// reproduces the violation.
#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: &'static str,
    pub elements: Vec<Elem>,
    pub entries: Vec<(Elem, Elem, PairState)>,
}

fn entry_of(rel: &WindowRelation, i: usize, j: usize) -> (Elem, Elem, PairState) {
    (rel.window.elem(i).clone(), rel.window.elem(j).clone(), rel.get(i, j))
}

/// Evaluates every axiom instance of `class` that lies fully inside the
/// window; returns the falsified ones. Undecided entries never violate.
pub fn check_axioms(rel: &WindowRelation, class: AxiomClass) -> Vec<Violation> {
    let mut out = Vec::new();
    let w = rel.window.clone();
    let n = w.len();
    let prod = w.product_table();
    let inv = w.inverse_table();

    // transitivity (all classes)
    for i in 0..n {
        for j in 0..n {
            if i == j || rel.get(i, j) != PairState::Less {
                continue;
            }
            for k in 0..n {
                if k == i || k == j || rel.get(j, k) != PairState::Less {
                    continue;
                }
                let s = rel.get(i, k);
                if s.is_decided() && s != PairState::Less {
                    out.push(Violation {
                        axiom: "transitivity",
                        elements: vec![w.elem(i).clone(), w.elem(j).clone(), w.elem(k).clone()],
                        entries: vec![entry_of(rel, i, j), entry_of(rel, j, k), entry_of(rel, i, k)],
                    });
                }
            }
        }
    }

    if !class.admits_unrelated() {
        for i in 0..n {
            for j in (i + 1)..n {
                if rel.get(i, j) == PairState::Unrelated {
                    out.push(Violation {
                        axiom: "totality",
                        elements: vec![w.elem(i).clone(), w.elem(j).clone()],
                        entries: vec![entry_of(rel, i, j)],
                    });
                }
            }
        }
    }

    if class.has_left_invariance() {
        for z in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i == j || rel.get(i, j) != PairState::Less {
                        continue;
                    }
                    let (Some(zi), Some(zj)) = (prod[z][i], prod[z][j]) else { continue };
                    let s = rel.get(zi, zj);
                    if s.is_decided() && s != PairState::Less {
                        out.push(Violation {
                            axiom: "left-invariance",
                            elements: vec![w.elem(z).clone(), w.elem(i).clone(), w.elem(j).clone()],
                            entries: vec![entry_of(rel, i, j), entry_of(rel, zi, zj)],
                        });
                    }
                }
            }
        }
    }

    if class.has_right_invariance() {
        for z in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i == j || rel.get(i, j) != PairState::Less {
                        continue;
                    }
                    let (Some(iz), Some(jz)) = (prod[i][z], prod[j][z]) else { continue };
                    let s = rel.get(iz, jz);
                    if s.is_decided() && s != PairState::Less {
                        out.push(Violation {
                            axiom: "right-invariance",
                            elements: vec![w.elem(z).clone(), w.elem(i).clone(), w.elem(j).clone()],
                            entries: vec![entry_of(rel, i, j), entry_of(rel, iz, jz)],
                        });
                    }
                }
            }
        }
    }

    if class.has_locally_invariant() {
        // x y > x  or  x y^-1 > x, for y != e; a violation needs BOTH
        // products present and both entries decided against the axiom.
        let e_pos = w.identity_pos();
        for xi in 0..n {
            for yi in 0..n {
                if Some(yi) == e_pos {
                    continue;
                }
                let Some(yinv) = inv[yi] else { continue };
                let (Some(xy), Some(xyi)) = (prod[xi][yi], prod[xi][yinv]) else { continue };
                // x < xy required (xy != x since y != e)
                let d1 = rel.get(xi, xy);
                let d2 = rel.get(xi, xyi);
                if d1.is_decided() && d2.is_decided() && d1 != PairState::Less && d2 != PairState::Less
                {
                    out.push(Violation {
                        axiom: "locally-invariant",
                        elements: vec![w.elem(xi).clone(), w.elem(yi).clone()],
                        entries: vec![entry_of(rel, xi, xy), entry_of(rel, xi, xyi)],
                    });
                }
            }
        }
    }

    if class.has_conradian() {
        // x > e and y > e  =>  x y^2 > y  (the n = 2 axiom form)
        if let Some(e_pos) = w.identity_pos() {
            for xi in 0..n {
                if xi == e_pos || rel.get(e_pos, xi) != PairState::Less {
                    continue;
                }
                for yi in 0..n {
                    if yi == e_pos || rel.get(e_pos, yi) != PairState::Less {
                        continue;
                    }
                    // x y^2 need not pass through y^2 inside the window
                    let spec = w.spec();
                    let Ok(y2) = spec.multiply(w.elem(yi), w.elem(yi)) else { continue };
                    let Ok(xy2_elem) = spec.multiply(w.elem(xi), &y2) else { continue };
                    let Some(xy2) = w.index_of(&xy2_elem) else { continue };
                    if xy2 == yi {
                        // x y^2 = y can never exceed y
                        out.push(Violation {
                            axiom: "conradian",
                            elements: vec![w.elem(xi).clone(), w.elem(yi).clone()],
                            entries: vec![entry_of(rel, e_pos, xi), entry_of(rel, e_pos, yi)],
                        });
                        continue;
                    }
                    let s = rel.get(yi, xy2);
                    if s.is_decided() && s != PairState::Less {
                        out.push(Violation {
                            axiom: "conradian",
                            elements: vec![w.elem(xi).clone(), w.elem(yi).clone()],
                            entries: vec![entry_of(rel, yi, xy2)],
                        });
                    }
                }
            }
        }
    }

    out
}

fn cmp_to_state(c: Cmp) -> PairState {
    match c {
        Cmp::Less => PairState::Less,
        Cmp::Greater => PairState::Greater,
        Cmp::Unrelated => PairState::Unrelated,
        // Distinct normal forms comparing Equal would be an oracle bug.
        Cmp::Equal => PairState::Unrelated,
    }
}

/// The restriction map: decides every pair of the window by the oracle.
pub fn restrict(oracle: &OrderOracle, window: &Arc<Window>) -> Result<WindowRelation, Error> {
    if oracle.spec() != window.spec() {
        return Err(Error::SpecMismatch);
    }
    let mut rel = WindowRelation::new_undecided(window.clone());
    let n = window.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = oracle.compare(window.elem(i), window.elem(j))?;
            debug_assert_ne!(c, Cmp::Equal, "distinct elements compared Equal");
            rel.set(i, j, cmp_to_state(c));
        }
    }
    Ok(rel)
}

/// The translated restriction: `entry(x,y) = compare(g x h^-1, g y h^-1)`.
pub fn act(
    oracle: &OrderOracle,
    g: &Elem,
    h: &Elem,
    window: &Arc<Window>,
) -> Result<WindowRelation, Error> {
    let spec = window.spec();
    if oracle.spec() != spec {
        return Err(Error::SpecMismatch);
    }
    let hinv = spec.invert(h)?;
    let translated: Vec<Elem> = window
        .elems()
        .iter()
        .map(|x| {
            let gx = spec.multiply(g, x)?;
            spec.multiply(&gx, &hinv)
        })
        .collect::<Result<_, _>>()?;
    let mut rel = WindowRelation::new_undecided(window.clone());
    let n = window.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if translated[i] == translated[j] {
                // can only happen for non-injective translations, which do
                // not arise in a group; keep the debug check anyway
                debug_assert!(false, "translation collapsed distinct elements");
                continue;
            }
            let c = oracle.compare(&translated[i], &translated[j])?;
            rel.set(i, j, cmp_to_state(c));
        }
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_elem;
    use crate::oracle::OrderOracle;

    fn z2() -> GroupSpec {
        GroupSpec::FreeAbelian(2)
    }

    fn v(a: i64, b: i64) -> Elem {
        Elem::Vector(vec![a, b])
    }

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn restrict_lex_example() {
        let w = Arc::new(build_window(&z2(), &words(&["x", "y"])).unwrap());
        let o = OrderOracle::lex(z2()).unwrap();
        let rel = restrict(&o, &w).unwrap();
        let e = w.index_of(&v(0, 0)).unwrap();
        let x = w.index_of(&v(1, 0)).unwrap();
        let y = w.index_of(&v(0, 1)).unwrap();
        assert_eq!(rel.get(e, y), PairState::Less);
        assert_eq!(rel.get(y, x), PairState::Less);
        assert_eq!(rel.get(x, e), PairState::Greater);
        assert_eq!(rel.undecided_pairs(), 0);
    }

    #[test]
    fn restrict_norm_example() {
        let w = Arc::new(build_window(&z2(), &words(&["x", "x^-1"])).unwrap());
        let o = OrderOracle::norm_lio(z2()).unwrap();
        let rel = restrict(&o, &w).unwrap();
        let a = w.index_of(&v(1, 0)).unwrap();
        let b = w.index_of(&v(-1, 0)).unwrap();
        assert_eq!(rel.get(a, b), PairState::Unrelated);
    }

    #[test]
    fn restrict_magnus_example() {
        let f2 = GroupSpec::FreeGroup(2);
        let w = Arc::new(build_window(&f2, &words(&["x", "y"])).unwrap());
        let o = OrderOracle::magnus(f2.clone()).unwrap();
        let rel = restrict(&o, &w).unwrap();
        let e = w.index_of(&f2.identity()).unwrap();
        let x = w.index_of(&f2.evaluate(&"x".parse().unwrap()).unwrap()).unwrap();
        let y = w.index_of(&f2.evaluate(&"y".parse().unwrap()).unwrap()).unwrap();
        assert_eq!(rel.get(e, x), PairState::Less);
        assert_eq!(rel.get(e, y), PairState::Less);
        assert_eq!(rel.get(x, y), PairState::Less);
    }

    #[test]
    fn check_axioms_lex_ball_clean() {
        let w = Arc::new(z2().ball(2, 1000).unwrap());
        let o = OrderOracle::lex(z2()).unwrap();
        let rel = restrict(&o, &w).unwrap();
        assert!(check_axioms(&rel, AxiomClass::BiInvariantTotal).is_empty());
    }

    #[test]
    fn check_axioms_torsion_violation() {
        let c2 = GroupSpec::CyclicFinite(2);
        let w = Arc::new(c2.ball(1, 10).unwrap());
        let e = w.index_of(&Elem::Cyc(0)).unwrap();
        let a = w.index_of(&Elem::Cyc(1)).unwrap();
        let mut rel = WindowRelation::new_undecided(w.clone());
        rel.set(e, a, PairState::Less); // a > e
        let violations = check_axioms(&rel, AxiomClass::LocallyInvariant);
        assert!(!violations.is_empty());
        // the instance x=a, y=a: both a·a and a·a^-1 are e, and a > e
        assert!(violations
            .iter()
            .any(|viol| viol.elements == vec![Elem::Cyc(1), Elem::Cyc(1)]));
    }

    #[test]
    fn check_axioms_affine_dyn_not_bi_invariant() {
        let spec = GroupSpec::DyadicAffine;
        let w = Arc::new(spec.ball(2, 1000).unwrap());
        let o = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let rel = restrict(&o, &w).unwrap();
        assert!(check_axioms(&rel, AxiomClass::LeftInvariantTotal).is_empty());
        assert!(!check_axioms(&rel, AxiomClass::BiInvariantTotal).is_empty());
    }

    #[test]
    fn negative_controls_mislabelled_oracles() {
        let norm_total = OrderOracle::norm_lio(z2()).unwrap().with_class(AxiomClass::TotalOrder);
        let w = Arc::new(z2().ball(1, 100).unwrap());
        let rel = restrict(&norm_total, &w).unwrap();
        assert!(!check_axioms(&rel, norm_total.class()).is_empty());
    }

    #[test]
    fn act_klein_flip_and_restore() {
        let k = GroupSpec::KleinBottle;
        let o = OrderOracle::lex(k.clone()).unwrap();
        let w = Arc::new(build_window(&k, &words(&["y"])).unwrap());
        let e = w.index_of(&k.identity()).unwrap();
        let y = w.index_of(&Elem::Klein(0, 1)).unwrap();
        let base = restrict(&o, &w).unwrap();
        assert_eq!(base.get(e, y), PairState::Less);
        let flipped = act(&o, &k.identity(), &Elem::Klein(1, 0), &w).unwrap();
        assert_eq!(flipped.get(y, e), PairState::Less);
        let restored = act(&o, &k.identity(), &Elem::Klein(2, 0), &w).unwrap();
        assert!(restored.same_restriction(&base));
    }

    #[test]
    fn act_fixes_bi_invariant_oracles() {
        let o = OrderOracle::lex(z2()).unwrap();
        let w = Arc::new(z2().ball(1, 100).unwrap());
        let base = restrict(&o, &w).unwrap();
        for g in z2().ball(2, 100).unwrap().elems() {
            for h in z2().ball(2, 100).unwrap().elems() {
                let moved = act(&o, g, h, &w).unwrap();
                assert!(moved.same_restriction(&base));
            }
        }
    }

    #[test]
    fn act_composes_and_identity_is_restrict() {
        let k = GroupSpec::KleinBottle;
        let o = OrderOracle::lex(k.clone()).unwrap();
        let w = Arc::new(k.ball(1, 100).unwrap());
        let e = k.identity();
        assert!(act(&o, &e, &e, &w).unwrap().same_restriction(&restrict(&o, &w).unwrap()));
        // act by (g1,h1) then (g2,h2) = act by (g2 g1, h2 h1) on comparisons
        let g1 = Elem::Klein(1, 0);
        let h1 = Elem::Klein(0, 1);
        let g2 = Elem::Klein(0, -1);
        let h2 = Elem::Klein(1, 1);
        let g21 = k.multiply(&g2, &g1).unwrap();
        let h21 = k.multiply(&h2, &h1).unwrap();
        let direct = act(&o, &g21, &h21, &w).unwrap();
        // composing means translating the translated window; compare entrywise
        let n = w.len();
        let h1i = k.invert(&h1).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let ti = k.multiply(&k.multiply(&g1, w.elem(i)).unwrap(), &h1i).unwrap();
                let tj = k.multiply(&k.multiply(&g1, w.elem(j)).unwrap(), &h1i).unwrap();
                let h2i = k.invert(&h2).unwrap();
                let tti = k.multiply(&k.multiply(&g2, &ti).unwrap(), &h2i).unwrap();
                let ttj = k.multiply(&k.multiply(&g2, &tj).unwrap(), &h2i).unwrap();
                let c = o.compare(&tti, &ttj).unwrap();
                let expected = match direct.get(i, j) {
                    PairState::Less => crate::oracle::Cmp::Less,
                    PairState::Greater => crate::oracle::Cmp::Greater,
                    other => panic!("unexpected state {other:?}"),
                };
                assert_eq!(c, expected);
            }
        }
    }

    #[test]
    fn act_of_left_invariant_oracle_ignores_g() {
        let spec = GroupSpec::DyadicAffine;
        let o = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let w = Arc::new(spec.ball(1, 100).unwrap());
        for g in spec.ball(2, 1000).unwrap().elems() {
            for h in spec.ball(2, 1000).unwrap().elems() {
                let with_g = act(&o, g, h, &w).unwrap();
                let without = act(&o, &spec.identity(), h, &w).unwrap();
                assert!(with_g.same_restriction(&without));
            }
        }
    }

    #[test]
    fn build_window_examples() {
        let w = build_window(&z2(), &words(&["x", "y"])).unwrap();
        assert_eq!(w.elems(), &[v(0, 0), v(1, 0), v(0, 1)]);
        let f2 = GroupSpec::FreeGroup(2);
        let wf = build_window(&f2, &words(&["x", "x x"])).unwrap();
        assert_eq!(wf.len(), 3);
        let err = build_window(&z2(), &words(&["x", "x"])).unwrap_err();
        assert!(matches!(err, Error::DuplicateElement { first: 1, second: 2 }));
    }

    #[test]
    fn restrict_commutes_with_inclusion() {
        let o = OrderOracle::lex(z2()).unwrap();
        let big = Arc::new(z2().ball(2, 1000).unwrap());
        let small = Arc::new(build_window(&z2(), &words(&["x", "y", "x y"])).unwrap());
        let rel_big = restrict(&o, &big).unwrap();
        let rel_small = restrict(&o, &small).unwrap();
        for i in 0..small.len() {
            for j in 0..small.len() {
                if i == j {
                    continue;
                }
                let bi = big.index_of(small.elem(i)).unwrap();
                let bj = big.index_of(small.elem(j)).unwrap();
                assert_eq!(rel_small.get(i, j), rel_big.get(bi, bj));
            }
        }
    }

    #[test]
    fn antisymmetry_maintained_by_set() {
        let w = Arc::new(z2().ball(1, 100).unwrap());
        let mut rel = WindowRelation::new_undecided(w);
        rel.set(0, 1, PairState::Less);
        assert_eq!(rel.get(1, 0), PairState::Greater);
        rel.set(2, 3, PairState::Unrelated);
        assert_eq!(rel.get(3, 2), PairState::Unrelated);
    }

    #[test]
    fn relation_digest_is_stable_and_entry_sensitive() {
        let w = Arc::new(z2().ball(1, 100).unwrap());
        let mut a = WindowRelation::new_undecided(w.clone());
        let mut b = WindowRelation::new_undecided(w);
        a.set(0, 1, PairState::Less);
        b.set(0, 1, PairState::Less);
        assert_eq!(a.digest(), b.digest());
        b.set(0, 2, PairState::Less);
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn axiom_class_strings_round_trip() {
        for class in AxiomClass::ALL {
            let s = class.to_string();
            assert_eq!(s.parse::<AxiomClass>().unwrap(), class);
        }
        assert!("weird".parse::<AxiomClass>().is_err());
    }

    #[test]
    fn window_file_parsing() {
        let text = "# a comment\nx\ny # trailing\n\nx y\n";
        let w = parse_window_file(&z2(), text).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.elem(0), &v(0, 0));
    }

    #[test]
    fn conradian_axiom_checked_on_windows() {
        // lex on Z^2 is conradian: no violation on a ball
        let o = OrderOracle::lex(z2()).unwrap();
        let w = Arc::new(z2().ball(2, 1000).unwrap());
        let rel = restrict(&o, &w).unwrap();
        assert!(check_axioms(&rel, AxiomClass::Conradian).is_empty());
        // affine_dyn is not: the known witness pair fails the n=2 form
        let spec = GroupSpec::DyadicAffine;
        let ad = OrderOracle::affine_dyn(spec.clone()).unwrap();
        let x = parse_elem(&spec, "(-2,1/8)").unwrap();
        let y = parse_elem(&spec, "(-1,1/2)").unwrap();
        let y2 = spec.multiply(&y, &y).unwrap();
        let xy2 = spec.multiply(&x, &y2).unwrap();
        let elems: Vec<Elem> = vec![spec.identity(), x, y.clone(), xy2];
        let ws = vec![Word(Vec::new()); elems.len()];
        let cw = Arc::new(Window::from_parts(spec.clone(), elems, ws).unwrap());
        let rel = restrict(&ad, &cw).unwrap();
        let violations = check_axioms(&rel, AxiomClass::Conradian);
        assert!(!violations.is_empty());
    }
}
