//! Exact scalar arithmetic. The default field is the arbitrary-precision
//! rationals; enabling the `prime-field` feature switches the whole crate to
//! Z/65521 instead (all rank decisions in this crate are field-stable for the
//! presentations we handle, so both modes agree on every structural output).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Self;
    fn parse(s: &str) -> Option<Self>;
}

#[cfg(not(feature = "prime-field"))]
mod rational {
    use super::Field;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    impl Field for BigRational {
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn from_i64(n: i64) -> Self {
            BigRational::from_integer(BigInt::from(n))
        }
        fn from_ratio(num: i64, den: i64) -> Self {
            BigRational::new(BigInt::from(num), BigInt::from(den))
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn inv(&self) -> Self {
            assert!(!Zero::is_zero(self), "division by zero");
            self.recip()
        }
        fn parse(s: &str) -> Option<Self> {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            } else {
                let n: BigInt = s.parse().ok()?;
                Some(BigRational::from_integer(n))
            }
        }
    }

    pub type K = BigRational;

    /// True when the scalar is negative; used by printers to fold the sign
    /// into the +/- separating relation terms.
    pub fn is_negative(x: &K) -> bool {
        x.is_negative()
    }
}

#[cfg(feature = "prime-field")]
mod modular {
    use super::Field;
    use std::fmt;
    use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

    pub const P: u64 = 65521;

    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub struct Fp(pub u64);

    impl Fp {
        fn new(v: i128) -> Self {
            let p = P as i128;
            Fp((((v % p) + p) % p) as u64)
        }
        fn pow(self, mut e: u64) -> Self {
            let mut b = self;
            let mut acc = Fp(1);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b;
                }
                b = b * b;
                e >>= 1;
            }
            acc
        }
    }

    impl Add for Fp {
        type Output = Fp;
        fn add(self, o: Fp) -> Fp {
            Fp((self.0 + o.0) % P)
        }
    }
    impl AddAssign for Fp {
        fn add_assign(&mut self, o: Fp) {
            *self = *self + o;
        }
    }
    impl Sub for Fp {
        type Output = Fp;
        fn sub(self, o: Fp) -> Fp {
            Fp((self.0 + P - o.0) % P)
        }
    }
    impl Mul for Fp {
        type Output = Fp;
        fn mul(self, o: Fp) -> Fp {
            Fp(self.0 * o.0 % P)
        }
    }
    impl Div for Fp {
        type Output = Fp;
        fn div(self, o: Fp) -> Fp {
            self * o.inv()
        }
    }
    impl Neg for Fp {
        type Output = Fp;
        fn neg(self) -> Fp {
            Fp((P - self.0) % P)
        }
    }
    impl fmt::Display for Fp {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", self.0)
        }
    }

    impl Field for Fp {
        fn zero() -> Self {
            Fp(0)
        }
        fn one() -> Self {
            Fp(1)
        }
        fn from_i64(n: i64) -> Self {
            Fp::new(n as i128)
        }
        fn from_ratio(num: i64, den: i64) -> Self {
            Fp::new(num as i128) / Fp::new(den as i128)
        }
        fn is_zero(&self) -> bool {
            self.0 == 0
        }
        fn inv(&self) -> Self {
            assert!(self.0 != 0, "division by zero");
            self.pow(P - 2)
        }
        fn parse(s: &str) -> Option<Self> {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let n: i64 = n.trim().parse().ok()?;
                let d: i64 = d.trim().parse().ok()?;
                if d % P as i64 == 0 {
                    return None;
                }
                Some(Fp::from_ratio(n, d))
            } else {
                let n: i64 = s.parse().ok()?;
                Some(Fp::from_i64(n))
            }
        }
    }

    pub type K = Fp;

    /// Treat the upper half of the residue range as negative so that printed
    /// relations look the same as over the rationals.
    pub fn is_negative(x: &K) -> bool {
        x.0 > P / 2
    }
}

#[cfg(not(feature = "prime-field"))]
pub use rational::{is_negative, K};

#[cfg(feature = "prime-field")]
pub use modular::{is_negative, K};

pub fn k(n: i64) -> K {
    K::from_i64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = K::from_ratio(1, 2);
        let b = K::from_ratio(1, 3);
        let s = a.clone() + b.clone();
        assert_eq!(s, K::from_ratio(5, 6));
        assert_eq!(a.clone() * a.inv(), K::one());
        assert!((b.clone() - b).is_zero());
    }

    #[test]
    fn parsing() {
        assert_eq!(K::parse("5"), Some(k(5)));
        assert_eq!(K::parse("-3/4"), Some(K::from_ratio(-3, 4)));
        assert_eq!(K::parse("1/0"), None);
        assert_eq!(K::parse("x"), None);
    }
}
