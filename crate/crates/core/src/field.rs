//! Exact scalars over the rationals and over prime fields GF(p) with p < 2^61.
//!
//! A [`Scalar`] carries its own modulus, so arithmetic never needs an outside
//! context. Mixing a rational with a modular scalar is a logic error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported prime moduli.
pub const PRIME_LIMIT: u64 = 1 << 61;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Field {
    Rational,
    Prime { p: u64 },
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= PRIME_LIMIT || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime { p })
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime { p } => *p,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime { p } => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime { p } => Scalar::Mod(Fp::new(v.rem_euclid(*p as i64) as u64, *p)),
        }
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime { p } => Scalar::Mod(Fp::new(v % p, *p)),
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Field::Prime { p } => {
                let n = reduce_bigint(num, *p);
                let d = reduce_bigint(den, *p);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator {den} vanishes mod {p}")));
                }
                let inv = Fp::new(d, *p).inv().expect("nonzero");
                Ok(Scalar::Mod(Fp::new(n, *p) * inv))
            }
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {text:?}")))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {text:?}")))?;
        self.from_ratio(&num, &den)
    }

    /// All elements of a prime field in the order 0, 1, ..., p-1.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar>> {
        let p = self.modulus()?;
        Some((0..p).map(move |v| Scalar::Mod(Fp::new(v, p))))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced below p")
}

/// An element of GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Fp {
        debug_assert!(value < modulus);
        Fp { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inv(&self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        Some(Fp::new(
            pow_mod(self.value, self.modulus - 2, self.modulus),
            self.modulus,
        ))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.value + o.value;
        Fp::new(
            if s >= self.modulus {
                s - self.modulus
            } else {
                s
            },
            self.modulus,
        )
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        let v = if self.value >= o.value {
            self.value - o.value
        } else {
            self.value + self.modulus - o.value
        };
        Fp::new(v, self.modulus)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp::new(mul_mod(self.value, o.value, self.modulus), self.modulus)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::new(
            if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            self.modulus,
        )
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for every u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod(Fp),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod(x) => Field::Prime { p: x.modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod(x) => x.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Mod(x) => x.inv().map(Scalar::Mod),
        }
    }

    /// `self / rhs`; panics on a zero divisor.
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Mod(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Mod(x) => Some(x.value),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Mod(x) => write!(f, "{}", x.value),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting; it is not a field order.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod(a), Scalar::Mod(b)) => (a.modulus, a.value).cmp(&(b.modulus, b.value)),
            (Scalar::Rational(_), Scalar::Mod(_)) => Ordering::Less,
            (Scalar::Mod(_), Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.$m(b)),
                    (Scalar::Mod(a), Scalar::Mod(b)) if a.modulus == b.modulus => {
                        Scalar::Mod(a.$m(*b))
                    }
                    _ => panic!("{}", Error::FieldMismatch),
                }
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod(a) => Scalar::Mod(-*a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Least common multiple of the denominators, for clearing a rational row.
pub(crate) fn denominator_lcm<'a>(entries: impl Iterator<Item = &'a BigRational>) -> BigInt {
    entries.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) - 3));
    }

    #[test]
    fn rejects_composites_and_large_primes() {
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert!(Field::prime((1 << 61) - 1).is_ok());
        assert!(Field::prime(2_305_843_009_213_693_967).is_err());
    }

    #[test]
    fn modular_arithmetic_near_the_limit() {
        let p = (1u64 << 61) - 1;
        let f = Field::prime(p).unwrap();
        let a = f.from_u64(p - 1);
        assert_eq!(&a * &a, f.one());
        assert_eq!(&a + &f.one(), f.zero());
        assert_eq!(a.inv().unwrap(), a);
    }

    #[test]
    fn parse_rational_and_modular() {
        let q = Field::Rational;
        assert_eq!(q.parse("-6/4").unwrap().to_string(), "-3/2");
        let f = Field::prime(7).unwrap();
        let x = f.parse("1/3").unwrap();
        assert_eq!(&x * &f.from_i64(3), f.one());
        assert_eq!(f.from_i64(-1).as_residue(), Some(6));
        assert!(f.parse("1/7").is_err());
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }
}
