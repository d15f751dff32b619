//! Exact dyadic rationals `num / 2^exp`, stored in lowest terms.
//!
//! The numerator is odd (or zero with exponent zero). All arithmetic is
//! checked; overflow aborts with a panic rather than returning a wrong
//! answer, since order comparisons must never be approximate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

const OVERFLOW: &str = "dyadic arithmetic overflow";

fn shl(n: i128, s: u32) -> i128 {
    if n == 0 {
        return 0;
    }
    let factor = 1i128.checked_shl(s).expect(OVERFLOW);
    n.checked_mul(factor).expect(OVERFLOW)
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    /// `num / 2^exp`, normalized to lowest terms.
    pub fn new(mut num: i128, mut exp: u32) -> Dyadic {
        if num == 0 {
            return Dyadic::ZERO;
        }
        while num % 2 == 0 && exp > 0 {
            num /= 2;
            exp -= 1;
        }
        Dyadic { num, exp }
    }

    pub fn from_int(n: i128) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { num: self.num.checked_neg().expect(OVERFLOW), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = shl(self.num, exp - self.exp);
        let b = shl(other.num, exp - other.exp);
        Dyadic::new(a.checked_add(b).expect(OVERFLOW), exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    /// Multiply by `2^k` (k may be negative).
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        let new_exp = i64::from(self.exp) - k;
        if new_exp >= 0 {
            let e = u32::try_from(new_exp).expect(OVERFLOW);
            Dyadic::new(self.num, e)
        } else {
            let s = u32::try_from(-new_exp).expect(OVERFLOW);
            Dyadic { num: shl(self.num, s), exp: 0 }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = shl(self.num, exp - self.exp);
        let b = shl(other.num, exp - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = String;

    /// Accepts `7`, `-3/2^4`, and `-3/16` (power-of-two denominator).
    fn from_str(s: &str) -> Result<Dyadic, String> {
        let s = s.trim();
        match s.split_once('/') {
            None => {
                let n: i128 = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
                Ok(Dyadic::from_int(n))
            }
            Some((num, den)) => {
                let n: i128 = num.trim().parse().map_err(|_| format!("bad numerator `{num}`"))?;
                let den = den.trim();
                let exp = if let Some(e) = den.strip_prefix("2^") {
                    e.parse::<u32>().map_err(|_| format!("bad exponent `{e}`"))?
                } else {
                    let d: i128 = den.parse().map_err(|_| format!("bad denominator `{den}`"))?;
                    if d <= 0 || d.count_ones() != 1 {
                        return Err(format!("denominator `{den}` is not a power of two"));
                    }
                    d.trailing_zeros()
                };
                Ok(Dyadic::new(n, exp))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(6, 1), Dyadic::from_int(3));
    }

    #[test]
    fn arithmetic() {
        let half = Dyadic::new(1, 1);
        let quarter = Dyadic::new(1, 2);
        assert_eq!(half.add(&quarter), Dyadic::new(3, 2));
        assert_eq!(half.sub(&half), Dyadic::ZERO);
        assert_eq!(half.mul_pow2(-1), quarter);
        assert_eq!(quarter.mul_pow2(2), Dyadic::ONE);
    }

    #[test]
    fn ordering() {
        assert!(Dyadic::new(1, 3) < Dyadic::new(1, 1));
        assert!(Dyadic::from_int(-1) < Dyadic::new(1, 4));
        assert!(Dyadic::new(3, 2) > Dyadic::new(1, 1));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1/8".parse::<Dyadic>().unwrap(), Dyadic::new(1, 3));
        assert_eq!("-3/2^1".parse::<Dyadic>().unwrap(), Dyadic::new(-3, 1));
        assert_eq!("5".parse::<Dyadic>().unwrap(), Dyadic::from_int(5));
        assert_eq!(Dyadic::new(1, 3).to_string(), "1/2^3");
        assert_eq!(Dyadic::from_int(-2).to_string(), "-2");
        assert!("1/6".parse::<Dyadic>().is_err());
    }
}
