//! Exact arithmetic and Cayley-ball enumeration for a fixed catalog of
//! finitely generated groups with solvable word problem.
//!
//! Every element is kept in a canonical normal form, so equality of
//! elements is equality of encodings. Integer coordinates use checked
//! arithmetic that aborts on overflow; dyadic rationals are exact.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::window::Window;
use crate::Error;

const OVERFLOW: &str = "integer overflow in group arithmetic";

fn add_i(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect(OVERFLOW)
}

fn neg_i(a: i64) -> i64 {
    a.checked_neg().expect(OVERFLOW)
}

fn mul_i(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect(OVERFLOW)
}

/// Default cap on ball sizes; free-group balls grow exponentially.
pub const DEFAULT_BALL_CAP: usize = 100_000;

/// A group from the supported catalog, with its fixed generating set.
///
/// Generating sets: the standard basis for `FreeAbelian`, the two
/// off-diagonal generators for `Heisenberg`, the free generators for
/// `FreeGroup`, `{x = (1,0), y = (0,1)}` for `KleinBottle`, the residue 1
/// for `CyclicFinite`, `{t -> 2t, t -> t+1}` for `DyadicAffine`, and the
/// union of factor generators (in factor order) for `DirectProduct`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    FreeAbelian(usize),
    Heisenberg,
    FreeGroup(usize),
    KleinBottle,
    CyclicFinite(u64),
    DyadicAffine,
    DirectProduct(Vec<GroupSpec>),
}

/// Canonical normal form of a group element in a specific backend.
///
/// Conventions (each is the unique group law for the stated normal form):
/// - `Heis(a,b,c)`: `(a,b,c)(a',b',c') = (a+a', b+b', c+c' + a*b')`
/// - `Klein(m,n)` means `x^m y^n`: `(m,n)(m',n') = (m+m', (-1)^{m'} n + n')`
/// - `Affine(k,d)` means the map `t -> 2^k t + d`:
///   `(k,d)(k',d') = (k+k', 2^k d' + d)` (function composition)
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Vector(Vec<i64>),
    Heis(i64, i64, i64),
    /// Freely reduced word; `true` marks an inverse letter.
    Free(Vec<(u32, bool)>),
    Klein(i64, i64),
    Cyc(u64),
    Affine(i64, Dyadic),
    Prod(Vec<Elem>),
}

/// A sequence of (generator index, sign) letters, the input syntax for
/// elements. Indices are validated against the backend at evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<(usize, i8)>);

impl GroupSpec {
    pub fn identity(&self) -> Elem {
        match self {
            GroupSpec::FreeAbelian(n) => Elem::Vector(vec![0; *n]),
            GroupSpec::Heisenberg => Elem::Heis(0, 0, 0),
            GroupSpec::FreeGroup(_) => Elem::Free(Vec::new()),
            GroupSpec::KleinBottle => Elem::Klein(0, 0),
            GroupSpec::CyclicFinite(_) => Elem::Cyc(0),
            GroupSpec::DyadicAffine => Elem::Affine(0, Dyadic::ZERO),
            GroupSpec::DirectProduct(fs) => {
                Elem::Prod(fs.iter().map(|f| f.identity()).collect())
            }
        }
    }

    pub fn num_generators(&self) -> usize {
        match self {
            GroupSpec::FreeAbelian(n) => *n,
            GroupSpec::Heisenberg => 2,
            GroupSpec::FreeGroup(k) => *k,
            GroupSpec::KleinBottle => 2,
            GroupSpec::CyclicFinite(_) => 1,
            GroupSpec::DyadicAffine => 2,
            GroupSpec::DirectProduct(fs) => fs.iter().map(|f| f.num_generators()).sum(),
        }
    }

    pub fn generator(&self, i: usize) -> Result<Elem, Error> {
        let count = self.num_generators();
        if i >= count {
            return Err(Error::BadGenerator { index: i, count });
        }
        Ok(match self {
            GroupSpec::FreeAbelian(n) => {
                let mut v = vec![0; *n];
                v[i] = 1;
                Elem::Vector(v)
            }
            GroupSpec::Heisenberg => {
                if i == 0 {
                    Elem::Heis(1, 0, 0)
                } else {
                    Elem::Heis(0, 1, 0)
                }
            }
            GroupSpec::FreeGroup(_) => Elem::Free(vec![(i as u32, false)]),
            GroupSpec::KleinBottle => {
                if i == 0 {
                    Elem::Klein(1, 0)
                } else {
                    Elem::Klein(0, 1)
                }
            }
            GroupSpec::CyclicFinite(_) => Elem::Cyc(1),
            GroupSpec::DyadicAffine => {
                if i == 0 {
                    Elem::Affine(1, Dyadic::ZERO)
                } else {
                    Elem::Affine(0, Dyadic::ONE)
                }
            }
            GroupSpec::DirectProduct(fs) => {
                let mut rest = i;
                let mut comps: Vec<Elem> = Vec::with_capacity(fs.len());
                let mut placed = false;
                for f in fs {
                    let n = f.num_generators();
                    if !placed && rest < n {
                        comps.push(f.generator(rest)?);
                        placed = true;
                    } else {
                        if !placed {
                            rest -= n;
                        }
                        comps.push(f.identity());
                    }
                }
                Elem::Prod(comps)
            }
        })
    }

    /// Checks that `e` is a valid normal form for this backend.
    pub fn validate(&self, e: &Elem) -> Result<(), Error> {
        let ok = match (self, e) {
            (GroupSpec::FreeAbelian(n), Elem::Vector(v)) => v.len() == *n,
            (GroupSpec::Heisenberg, Elem::Heis(..)) => true,
            (GroupSpec::FreeGroup(k), Elem::Free(w)) => {
                w.iter().all(|&(i, _)| (i as usize) < *k)
                    && w.windows(2).all(|p| !(p[0].0 == p[1].0 && p[0].1 != p[1].1))
            }
            (GroupSpec::KleinBottle, Elem::Klein(..)) => true,
            (GroupSpec::CyclicFinite(k), Elem::Cyc(r)) => r < k,
            (GroupSpec::DyadicAffine, Elem::Affine(..)) => true,
            (GroupSpec::DirectProduct(fs), Elem::Prod(cs)) => {
                fs.len() == cs.len()
                    && fs.iter().zip(cs).all(|(f, c)| f.validate(c).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                spec: self.to_string(),
                elem: format!("{e:?}"),
            })
        }
    }

    /// Group law; returns the normal form of `ab`.
    pub fn multiply(&self, a: &Elem, b: &Elem) -> Result<Elem, Error> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul_raw(a, b))
    }

    fn mul_raw(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (GroupSpec::FreeAbelian(_), Elem::Vector(u), Elem::Vector(v)) => {
                Elem::Vector(u.iter().zip(v).map(|(&x, &y)| add_i(x, y)).collect())
            }
            (GroupSpec::Heisenberg, &Elem::Heis(a1, b1, c1), &Elem::Heis(a2, b2, c2)) => {
                Elem::Heis(add_i(a1, a2), add_i(b1, b2), add_i(add_i(c1, c2), mul_i(a1, b2)))
            }
            (GroupSpec::FreeGroup(_), Elem::Free(u), Elem::Free(v)) => {
                let mut w = u.clone();
                for &l in v {
                    match w.last() {
                        Some(&(i, inv)) if i == l.0 && inv != l.1 => {
                            w.pop();
                        }
                        _ => w.push(l),
                    }
                }
                Elem::Free(w)
            }
            (GroupSpec::KleinBottle, &Elem::Klein(m1, n1), &Elem::Klein(m2, n2)) => {
                let flipped = if m2.rem_euclid(2) == 1 { neg_i(n1) } else { n1 };
                Elem::Klein(add_i(m1, m2), add_i(flipped, n2))
            }
            (GroupSpec::CyclicFinite(k), &Elem::Cyc(r1), &Elem::Cyc(r2)) => {
                Elem::Cyc((r1 + r2) % k)
            }
            (GroupSpec::DyadicAffine, &Elem::Affine(k1, d1), &Elem::Affine(k2, d2)) => {
                Elem::Affine(add_i(k1, k2), d2.mul_pow2(k1).add(&d1))
            }
            (GroupSpec::DirectProduct(fs), Elem::Prod(u), Elem::Prod(v)) => Elem::Prod(
                fs.iter()
                    .zip(u.iter().zip(v))
                    .map(|(f, (x, y))| f.mul_raw(x, y))
                    .collect(),
            ),
            _ => unreachable!("validated operands"),
        }
    }

    pub fn invert(&self, a: &Elem) -> Result<Elem, Error> {
        self.validate(a)?;
        Ok(self.inv_raw(a))
    }

    fn inv_raw(&self, a: &Elem) -> Elem {
        match (self, a) {
            (GroupSpec::FreeAbelian(_), Elem::Vector(v)) => {
                Elem::Vector(v.iter().map(|&x| neg_i(x)).collect())
            }
            (GroupSpec::Heisenberg, &Elem::Heis(a, b, c)) => {
                Elem::Heis(neg_i(a), neg_i(b), add_i(neg_i(c), mul_i(a, b)))
            }
            (GroupSpec::FreeGroup(_), Elem::Free(w)) => {
                Elem::Free(w.iter().rev().map(|&(i, inv)| (i, !inv)).collect())
            }
            (GroupSpec::KleinBottle, &Elem::Klein(m, n)) => {
                // Solve (m,n)(m',n') = (0,0): n' = -(-1)^m n.
                let n2 = if m.rem_euclid(2) == 1 { n } else { neg_i(n) };
                Elem::Klein(neg_i(m), n2)
            }
            (GroupSpec::CyclicFinite(k), &Elem::Cyc(r)) => Elem::Cyc((k - r) % k),
            (GroupSpec::DyadicAffine, &Elem::Affine(k, d)) => {
                Elem::Affine(neg_i(k), d.neg().mul_pow2(-k))
            }
            (GroupSpec::DirectProduct(fs), Elem::Prod(u)) => {
                Elem::Prod(fs.iter().zip(u).map(|(f, x)| f.inv_raw(x)).collect())
            }
            _ => unreachable!("validated operand"),
        }
    }

    /// `a^n` for any integer `n`.
    pub fn power(&self, a: &Elem, n: i64) -> Result<Elem, Error> {
        self.validate(a)?;
        let (base, mut n) = if n < 0 {
            (self.inv_raw(a), n.unsigned_abs())
        } else {
            (a.clone(), n as u64)
        };
        let mut acc = self.identity();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(&acc, &sq);
            }
            n >>= 1;
            if n > 0 {
                sq = self.mul_raw(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// Conjugate `x^h = h^{-1} x h`.
    pub fn conjugate(&self, x: &Elem, h: &Elem) -> Result<Elem, Error> {
        let hi = self.invert(h)?;
        self.validate(x)?;
        Ok(self.mul_raw(&self.mul_raw(&hi, x), h))
    }

    /// Commutator `[x,h] = x^{-1} x^h = x^{-1} h^{-1} x h`.
    pub fn commutator(&self, x: &Elem, h: &Elem) -> Result<Elem, Error> {
        let xc = self.conjugate(x, h)?;
        Ok(self.mul_raw(&self.inv_raw(x), &xc))
    }

    /// Product of generators named by the word; the empty word is `e`.
    pub fn evaluate(&self, w: &Word) -> Result<Elem, Error> {
        let mut acc = self.identity();
        for &(idx, sign) in &w.0 {
            let g = self.generator(idx)?;
            let g = if sign < 0 { self.inv_raw(&g) } else { g };
            acc = self.mul_raw(&acc, &g);
        }
        Ok(acc)
    }

    /// Verifies the universal telescoping identity
    /// `x^{h^n} = x^h [x,h]^h [x,h]^{h^2} ... [x,h]^{h^{n-1}}`.
    ///
    /// True in every group; a `false` return signals an arithmetic bug.
    pub fn telescope_identity_check(&self, x: &Elem, h: &Elem, n: u32) -> Result<bool, Error> {
        assert!(n >= 1, "telescope check requires n >= 1");
        let hn = self.power(h, i64::from(n))?;
        let lhs = self.conjugate(x, &hn)?;
        let comm = self.commutator(x, h)?;
        let mut rhs = self.conjugate(x, h)?;
        for i in 1..n {
            let hi = self.power(h, i64::from(i))?;
            let term = self.conjugate(&comm, &hi)?;
            rhs = self.mul_raw(&rhs, &term);
        }
        Ok(lhs == rhs)
    }

    /// All elements expressible as products of at most `radius` generators
    /// or inverses, as a deterministic window: identity first, then sorted
    /// by word length of a shortest representative, ties broken by the
    /// normal-form encoding.
    pub fn ball(&self, radius: u32, cap: usize) -> Result<Window, Error> {
        let mut seen: HashMap<Elem, Word> = HashMap::new();
        let e = self.identity();
        seen.insert(e.clone(), Word(Vec::new()));
        let mut elems = vec![e];
        let mut words = vec![Word(Vec::new())];
        let mut frontier: Vec<usize> = vec![0];

        let gens: Vec<Elem> = (0..self.num_generators())
            .map(|i| self.generator(i))
            .collect::<Result<_, _>>()?;

        for _ in 0..radius {
            let mut level: Vec<(Elem, Word)> = Vec::new();
            for &fi in &frontier {
                let base = elems[fi].clone();
                let base_word = words[fi].clone();
                for (gi, g) in gens.iter().enumerate() {
                    for sign in [1i8, -1i8] {
                        let step = if sign < 0 { self.inv_raw(g) } else { g.clone() };
                        let next = self.mul_raw(&base, &step);
                        if !seen.contains_key(&next) {
                            let mut w = base_word.clone();
                            w.0.push((gi, sign));
                            seen.insert(next.clone(), w.clone());
                            level.push((next, w));
                        }
                    }
                }
            }
            level.sort_by(|a, b| a.0.cmp(&b.0));
            frontier.clear();
            for (el, w) in level {
                if elems.len() >= cap {
                    return Err(Error::BallCapExceeded { cap });
                }
                frontier.push(elems.len());
                elems.push(el);
                words.push(w);
            }
            if frontier.is_empty() {
                break; // finite group exhausted
            }
        }
        Window::from_parts(self.clone(), elems, words)
    }
}

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn gen_name(idx: usize) -> String {
    match idx {
        0 => "x".to_string(),
        1 => "y".to_string(),
        2 => "z".to_string(),
        _ => format!("g{}", idx + 1),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let mut parts = Vec::with_capacity(self.0.len());
        for &(idx, sign) in &self.0 {
            if sign < 0 {
                parts.push(format!("{}^-1", gen_name(idx)));
            } else {
                parts.push(gen_name(idx));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Whitespace-separated tokens `g<i>` / `g<i>^-1`, with aliases
    /// `x,y,z` for the first three generators and optional integer
    /// exponents (`x^3`, `y^-2`). `e` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Word, Error> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, exp)
                }
                None => (tok, 1),
            };
            let idx = match name {
                "x" => 0,
                "y" => 1,
                "z" => 2,
                _ => name
                    .strip_prefix('g')
                    .and_then(|d| d.parse::<usize>().ok())
                    .and_then(|d| d.checked_sub(1))
                    .ok_or_else(|| Error::Parse(format!("bad generator token `{tok}`")))?,
            };
            let sign = if exp < 0 { -1i8 } else { 1i8 };
            for _ in 0..exp.unsigned_abs() {
                letters.push((idx, sign));
            }
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Elem::Heis(a, b, c) => write!(f, "({a},{b},{c})"),
            Elem::Free(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                let parts: Vec<String> = w
                    .iter()
                    .map(|&(i, inv)| {
                        if inv {
                            format!("{}^-1", gen_name(i as usize))
                        } else {
                            gen_name(i as usize)
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
            Elem::Klein(m, n) => write!(f, "({m},{n})"),
            Elem::Cyc(r) => write!(f, "{r}"),
            Elem::Affine(k, d) => write!(f, "({k},{d})"),
            Elem::Prod(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(";"))
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits `s` on `sep` at paren depth zero.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses an element from either backend-specific literal syntax
/// (`"(1,0,0)"`, `"(-2,1/8)"`, `"2"`) or word syntax (`"x y^-1"`).
/// A `name:literal` pair names the literal; an optional `^<exp>` on the
/// name raises the literal to that power (`"y^-1:(-1,1/2)"` is the
/// inverse of `(-1,1/2)`).
pub fn parse_elem(spec: &GroupSpec, s: &str) -> Result<Elem, Error> {
    let s = s.trim();
    if let Some((tag, lit)) = s.split_once(':') {
        let lit = parse_elem(spec, lit)?;
        let exp: i64 = match tag.trim().split_once('^') {
            Some((_, e)) => e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{tag}`")))?,
            None => 1,
        };
        return spec.power(&lit, exp);
    }
    let looks_literal = s.starts_with('(')
        || (!matches!(spec, GroupSpec::FreeGroup(_))
            && s.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-'));
    if looks_literal {
        parse_literal(spec, s)
    } else {
        spec.evaluate(&s.parse()?)
    }
}

fn parse_literal(spec: &GroupSpec, s: &str) -> Result<Elem, Error> {
    let bad = || Error::Parse(format!("bad element literal `{s}` for {spec}"));
    let inner = |s: &str| -> Result<Vec<String>, Error> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let sep = if matches!(spec, GroupSpec::DirectProduct(_)) { ';' } else { ',' };
        Ok(split_top_level(t, sep).into_iter().map(|p| p.trim().to_string()).collect())
    };
    let int = |p: &str| p.parse::<i64>().map_err(|_| bad());
    let elem = match spec {
        GroupSpec::FreeAbelian(n) => {
            let parts = if s.starts_with('(') {
                inner(s)?
            } else {
                vec![s.to_string()]
            };
            if parts.len() != *n {
                return Err(bad());
            }
            Elem::Vector(parts.iter().map(|p| int(p)).collect::<Result<_, _>>()?)
        }
        GroupSpec::Heisenberg => {
            let p = inner(s)?;
            if p.len() != 3 {
                return Err(bad());
            }
            Elem::Heis(int(&p[0])?, int(&p[1])?, int(&p[2])?)
        }
        GroupSpec::KleinBottle => {
            let p = inner(s)?;
            if p.len() != 2 {
                return Err(bad());
            }
            Elem::Klein(int(&p[0])?, int(&p[1])?)
        }
        GroupSpec::CyclicFinite(k) => {
            let r = s.parse::<i64>().map_err(|_| bad())?;
            Elem::Cyc(r.rem_euclid(*k as i64) as u64)
        }
        GroupSpec::DyadicAffine => {
            let p = inner(s)?;
            if p.len() != 2 {
                return Err(bad());
            }
            let d: Dyadic = p[1].parse().map_err(Error::Parse)?;
            Elem::Affine(int(&p[0])?, d)
        }
        GroupSpec::FreeGroup(_) => return Err(bad()),
        GroupSpec::DirectProduct(fs) => {
            let p = inner(s)?;
            if p.len() != fs.len() {
                return Err(bad());
            }
            Elem::Prod(
                fs.iter()
                    .zip(&p)
                    .map(|(f, c)| parse_elem(f, c))
                    .collect::<Result<_, _>>()?,
            )
        }
    };
    spec.validate(&elem)?;
    Ok(elem)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian(n) => write!(f, "z:{n}"),
            GroupSpec::Heisenberg => write!(f, "heis"),
            GroupSpec::FreeGroup(k) => write!(f, "free:{k}"),
            GroupSpec::KleinBottle => write!(f, "klein"),
            GroupSpec::CyclicFinite(k) => write!(f, "cyclic:{k}"),
            GroupSpec::DyadicAffine => write!(f, "affine"),
            GroupSpec::DirectProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `z:<n>` (alias `free-abelian:<n>`), `heis`, `free:<k>`, `klein`,
    /// `cyclic:<k>`, `affine`, and `+`-joined products of these.
    fn from_str(s: &str) -> Result<GroupSpec, Error> {
        let s = s.trim();
        let parts = split_top_level(s, '+');
        if parts.len() > 1 {
            let fs = parts
                .iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<GroupSpec>, Error>>()?;
            return Ok(GroupSpec::DirectProduct(fs));
        }
        let bad = || Error::Parse(format!("unknown group spec `{s}`"));
        match s.split_once(':') {
            Some(("z", n)) | Some(("free-abelian", n)) => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n < 1 {
                    return Err(bad());
                }
                Ok(GroupSpec::FreeAbelian(n))
            }
            Some(("free", k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k < 1 {
                    return Err(bad());
                }
                Ok(GroupSpec::FreeGroup(k))
            }
            Some(("cyclic", k)) => {
                let k: u64 = k.parse().map_err(|_| bad())?;
                if k < 2 {
                    return Err(bad());
                }
                Ok(GroupSpec::CyclicFinite(k))
            }
            None => match s {
                "heis" | "heisenberg" => Ok(GroupSpec::Heisenberg),
                "klein" => Ok(GroupSpec::KleinBottle),
                "affine" => Ok(GroupSpec::DyadicAffine),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupSpec {
        GroupSpec::FreeAbelian(2)
    }

    fn dy(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn heisenberg_multiply_convention() {
        let g = GroupSpec::Heisenberg;
        let p = g.multiply(&Elem::Heis(1, 0, 0), &Elem::Heis(0, 1, 0)).unwrap();
        assert_eq!(p, Elem::Heis(1, 1, 1));
    }

    #[test]
    fn klein_multiply_convention() {
        let g = GroupSpec::KleinBottle;
        let p = g.multiply(&Elem::Klein(0, 1), &Elem::Klein(1, 0)).unwrap();
        assert_eq!(p, Elem::Klein(1, -1));
    }

    #[test]
    fn affine_multiply_composes_maps() {
        let g = GroupSpec::DyadicAffine;
        let half_up = Elem::Affine(-1, dy("1/2^1"));
        let p = g.multiply(&half_up, &half_up).unwrap();
        assert_eq!(p, Elem::Affine(-2, dy("3/2^2")));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(z2().invert(&Elem::Vector(vec![3, -1])).unwrap(), Elem::Vector(vec![-3, 1]));
        let k = GroupSpec::KleinBottle;
        assert_eq!(k.invert(&Elem::Klein(1, 1)).unwrap(), Elem::Klein(-1, 1));
        assert_eq!(
            k.multiply(&Elem::Klein(1, 1), &Elem::Klein(-1, 1)).unwrap(),
            k.identity()
        );
        let a = GroupSpec::DyadicAffine;
        assert_eq!(
            a.invert(&Elem::Affine(1, dy("3"))).unwrap(),
            Elem::Affine(-1, dy("-3/2^1"))
        );
    }

    #[test]
    fn evaluate_words() {
        let f2 = GroupSpec::FreeGroup(2);
        let w: Word = "x y x^-1".parse().unwrap();
        match f2.evaluate(&w).unwrap() {
            Elem::Free(letters) => assert_eq!(letters.len(), 3),
            other => panic!("unexpected {other}"),
        }
        let cancel: Word = "x x^-1".parse().unwrap();
        assert_eq!(f2.evaluate(&cancel).unwrap(), f2.identity());
        let c2 = GroupSpec::CyclicFinite(2);
        let www: Word = "x x x".parse().unwrap();
        assert_eq!(c2.evaluate(&www).unwrap(), Elem::Cyc(1));
    }

    #[test]
    fn conjugate_and_commutator() {
        let k = GroupSpec::KleinBottle;
        assert_eq!(k.conjugate(&k.identity(), &Elem::Klein(1, 1)).unwrap(), k.identity());
        assert_eq!(
            k.conjugate(&Elem::Klein(0, 1), &Elem::Klein(1, 0)).unwrap(),
            Elem::Klein(0, -1)
        );
        let h = GroupSpec::Heisenberg;
        assert_eq!(
            h.commutator(&Elem::Heis(1, 0, 0), &Elem::Heis(0, 1, 0)).unwrap(),
            Elem::Heis(0, 0, 1)
        );
    }

    #[test]
    fn commutator_definition_holds() {
        let h = GroupSpec::Heisenberg;
        let x = Elem::Heis(2, -1, 3);
        let g = Elem::Heis(-1, 4, 0);
        let lhs = h.commutator(&x, &g).unwrap();
        let rhs = h.multiply(&h.invert(&x).unwrap(), &h.conjugate(&x, &g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(z2().ball(1, 1000).unwrap().len(), 5);
        assert_eq!(GroupSpec::FreeGroup(2).ball(2, 1000).unwrap().len(), 17);
        assert_eq!(GroupSpec::CyclicFinite(2).ball(1, 1000).unwrap().len(), 2);
        let b0 = GroupSpec::Heisenberg.ball(0, 1000).unwrap();
        assert_eq!(b0.elems(), &[GroupSpec::Heisenberg.identity()]);
    }

    #[test]
    fn ball_is_monotone_and_identity_first() {
        for spec in [z2(), GroupSpec::KleinBottle, GroupSpec::Heisenberg] {
            let b1 = spec.ball(1, 10_000).unwrap();
            let b2 = spec.ball(2, 10_000).unwrap();
            assert_eq!(b1.elem(0), &spec.identity());
            for e in b1.elems() {
                assert!(b2.index_of(e).is_some(), "{e} missing from larger ball");
            }
        }
    }

    #[test]
    fn ball_cap_is_enforced() {
        let err = GroupSpec::FreeGroup(2).ball(4, 50).unwrap_err();
        assert!(matches!(err, Error::BallCapExceeded { cap: 50 }));
    }

    #[test]
    fn klein_relation() {
        let k = GroupSpec::KleinBottle;
        let x = Elem::Klein(1, 0);
        let y = Elem::Klein(0, 1);
        let yx_inv = k.multiply(&y, &k.invert(&x).unwrap()).unwrap();
        assert_eq!(k.multiply(&x, &yx_inv).unwrap(), Elem::Klein(0, -1));
    }

    #[test]
    fn telescope_identity_examples() {
        let h = GroupSpec::Heisenberg;
        assert!(h.telescope_identity_check(&Elem::Heis(1, 0, 0), &Elem::Heis(0, 1, 0), 3).unwrap());
        let f2 = GroupSpec::FreeGroup(2);
        let x = f2.evaluate(&"x y".parse().unwrap()).unwrap();
        let hh = f2.evaluate(&"y x^-1".parse().unwrap()).unwrap();
        assert!(f2.telescope_identity_check(&x, &hh, 4).unwrap());
        let a = GroupSpec::DyadicAffine;
        assert!(a
            .telescope_identity_check(&Elem::Affine(0, dy("1")), &Elem::Affine(1, dy("0")), 5)
            .unwrap());
    }

    #[test]
    fn power_handles_negatives() {
        let k = GroupSpec::KleinBottle;
        let y = Elem::Klein(0, 1);
        assert_eq!(k.power(&y, -3).unwrap(), Elem::Klein(0, -3));
        assert_eq!(k.power(&y, 0).unwrap(), k.identity());
        let x = Elem::Klein(1, 2);
        let via_mul = k.multiply(&x, &k.multiply(&x, &x).unwrap()).unwrap();
        assert_eq!(k.power(&x, 3).unwrap(), via_mul);
    }

    #[test]
    fn parse_elem_forms() {
        assert_eq!(parse_elem(&z2(), "(1,-5)").unwrap(), Elem::Vector(vec![1, -5]));
        assert_eq!(parse_elem(&z2(), "x y^-1").unwrap(), Elem::Vector(vec![1, -1]));
        let a = GroupSpec::DyadicAffine;
        assert_eq!(parse_elem(&a, "(-2,1/8)").unwrap(), Elem::Affine(-2, dy("1/2^3")));
        // named literal, optionally with a power applied
        assert_eq!(parse_elem(&z2(), "x:(1,0)").unwrap(), Elem::Vector(vec![1, 0]));
        assert_eq!(parse_elem(&z2(), "g^-1:(0,1)").unwrap(), Elem::Vector(vec![0, -1]));
        assert_eq!(
            parse_elem(&a, "y^-1:(-1,1/2)").unwrap(),
            a.invert(&Elem::Affine(-1, dy("1/2^1"))).unwrap()
        );
        assert!(parse_elem(&z2(), "x^q:(0,1)").is_err());
    }

    #[test]
    fn group_spec_strings_round_trip() {
        for s in ["z:2", "heis", "free:3", "klein", "cyclic:5", "affine", "z:1+klein"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("z:0".parse::<GroupSpec>().is_err());
        assert!("cyclic:1".parse::<GroupSpec>().is_err());
        assert!("nope".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn backend_mismatch_is_reported() {
        let err = z2().multiply(&Elem::Vector(vec![1, 0]), &Elem::Heis(0, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::BackendMismatch { .. }));
    }

    #[test]
    #[should_panic(expected = "integer overflow in group arithmetic")]
    fn overflow_panics_instead_of_wrapping() {
        let g = GroupSpec::Heisenberg;
        let big = Elem::Heis(i64::MAX, 1, 0);
        let _ = g.multiply(&big, &Elem::Heis(1, 0, 0));
    }

    #[test]
    fn direct_product_componentwise() {
        let spec: GroupSpec = "z:1+klein".parse().unwrap();
        let a = parse_elem(&spec, "(1;(0,1))").unwrap();
        let b = parse_elem(&spec, "(2;(1,0))").unwrap();
        let p = spec.multiply(&a, &b).unwrap();
        assert_eq!(p, parse_elem(&spec, "(3;(1,-1))").unwrap());
    }
}
