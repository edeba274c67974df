use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::LinAlgError;

/// Ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    /// Prime field of the given order. Orders are kept below 2^31 so products fit a `u64`.
    Prime(u32),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinAlgError> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(LinAlgError::BadPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rational::ZERO),
            Field::Prime(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rational::small(n, 1)),
            Field::Prime(p) => Scalar::Fp { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    /// Parses `"a"` or `"a/b"` with arbitrary-precision integers.
    pub fn parse(self, s: &str) -> Result<Scalar, LinAlgError> {
        let bad = || LinAlgError::BadScalar(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            Field::Rational => Ok(Scalar::Q(Rational::from_big(BigRational::new(num, den)))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let a = num.mod_floor(&m).to_u32().unwrap();
                let b = den.mod_floor(&m).to_u32().unwrap();
                if b == 0 {
                    return Err(bad());
                }
                let a = Scalar::Fp { v: a, p };
                let b = Scalar::Fp { v: b, p };
                Ok(&a * &b.inv().unwrap())
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Rational => "rational".to_string(),
            Field::Prime(p) => format!("prime({p})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Exact rational with an `i64` fast path. The representation is canonical: a value is
/// stored as `Small` whenever numerator and denominator fit, so derived equality is sound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

impl Rational {
    pub const ZERO: Rational = Rational::Small { num: 0, den: 1 };

    fn small(num: i64, den: i64) -> Rational {
        Rational::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Rational::Small { num, den },
            _ => Rational::Big(Box::new(BigRational::new(n.into(), d.into()))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational::Small { num, den },
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small { num: 0, .. })
    }

    fn add(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                if b == d {
                    Rational::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rational::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rational::from_big(self.to_big() + other.to_big()),
        }
    }

    fn mul(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small { num, den } if *num != i64::MIN => {
                Rational::Small { num: -num, den: *den }
            }
            _ => Rational::from_big(-self.to_big()),
        }
    }

    fn inv(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small { num, den } => Rational::from_i128(*den as i128, *num as i128),
            Rational::Big(b) => Rational::from_big(b.recip()),
        })
    }

    fn cmp_value(&self, other: &Rational) -> Ordering {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small { den, .. } => *den == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small { num, .. } => *num < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small { num, den: 1 } => write!(f, "{num}"),
            Rational::Small { num, den } => write!(f, "{num}/{den}"),
            Rational::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Rational::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

/// An element of the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => matches!(r, Rational::Small { num: 1, den: 1 }),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => r.inv().map(Scalar::Q),
            Scalar::Fp { v, p } => {
                if *v == 0 {
                    return None;
                }
                // Fermat: v^(p-2)
                let (mut base, mut exp, mut acc) = (*v as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Some(Scalar::Fp { v: acc as u32, p: *p })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 1 {
            -&self
        } else {
            self
        }
    }

    /// Total order used only for canonical output; prime-field values compare by residue.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp_value(b),
            (Scalar::Fp { v: a, .. }, Scalar::Fp { v: b, .. }) => a.cmp(b),
            _ => panic!("mixed fields"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_overflow_promotes_to_big() {
        let q = Field::Rational;
        let big = q.from_i64(i64::MAX);
        let sum = &big + &big;
        assert!(matches!(sum, Scalar::Q(Rational::Big(_))));
        assert_eq!(sum.to_string(), "18446744073709551614");
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Q(Rational::Small { .. })));
    }

    #[test]
    fn parse_and_display() {
        let q = Field::Rational;
        assert_eq!(q.parse("6/4").unwrap().to_string(), "3/2");
        assert_eq!(q.parse("-2/-4").unwrap().to_string(), "1/2");
        assert_eq!(q.parse("7").unwrap().to_string(), "7");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("0.5").is_err());
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse("1/2").unwrap().to_string(), "4");
        assert_eq!(f7.parse("-1").unwrap().to_string(), "6");
    }

    #[test]
    fn prime_validation() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2147483647).is_ok());
    }

    #[test]
    fn inverses() {
        let f = Field::prime(101).unwrap();
        for n in 1..101 {
            let x = f.from_i64(n);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        let q = Field::Rational;
        let x = q.parse("-3/7").unwrap();
        assert_eq!(x.inv().unwrap().to_string(), "-7/3");
        assert!(q.zero().inv().is_none());
    }
}
