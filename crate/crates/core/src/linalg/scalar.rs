use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported prime modulus. Products of residues are formed in `u128`,
/// but trial division keeps the primality test cheap only below this bound.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("cannot parse scalar `{text}` over {field}")]
    BadScalar { text: String, field: ScalarField },
    #[error("scalar type does not support {0}")]
    Unsupported(ScalarField),
}

/// The exact ground field: either ℚ or 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarField {
    Rationals,
    Prime(u64),
}

impl ScalarField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(ScalarField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarField::Rationals => 0,
            ScalarField::Prime(p) => *p,
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact field elements usable as matrix entries.
///
/// `Zero`/`One` give field-independent constants; anything else is built
/// against an explicit [`ScalarField`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64, field: &ScalarField) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn parse(text: &str, field: &ScalarField) -> Result<Self, FieldError>;

    fn supports(field: &ScalarField) -> bool;

    /// `(-1)^k` as a scalar.
    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64, _field: &ScalarField) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn parse(text: &str, field: &ScalarField) -> Result<Self, FieldError> {
        let bad = || FieldError::BadScalar {
            text: text.to_string(),
            field: *field,
        };
        if *field != ScalarField::Rationals {
            return Err(FieldError::Unsupported(*field));
        }
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    }

    fn supports(field: &ScalarField) -> bool {
        *field == ScalarField::Rationals
    }
}

/// Element of 𝔽_p with a runtime modulus.
///
/// Values produced by `Zero::zero()`/`One::one()` carry no modulus yet
/// (`modulus == 0`) and adopt the modulus of whatever they are combined with.
/// Only the constants 0, ±1 and their products are ever left unbound, which
/// are nonzero in every field when nonzero as integers.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: i64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        debug_assert!(modulus > 0);
        Fp {
            value: value.rem_euclid(modulus as i64),
            modulus,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// Canonical residue in `0..p`, or the raw integer when unbound.
    pub fn value(&self) -> i64 {
        self.value
    }

    fn common(a: Fp, b: Fp) -> (Fp, Fp, u64) {
        match (a.modulus, b.modulus) {
            (0, 0) => (a, b, 0),
            (0, p) => (Fp::new(a.value, p), b, p),
            (p, 0) => (a, Fp::new(b.value, p), p),
            (p, q) => {
                assert_eq!(p, q, "mixed moduli in 𝔽_p arithmetic");
                (a, b, p)
            }
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = Fp::common(*self, *other);
        a.value == b.value
    }
}

impl Eq for Fp {}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::common(self, rhs);
        if p == 0 {
            return Fp {
                value: a.value + b.value,
                modulus: 0,
            };
        }
        Fp::new(((a.value as i128 + b.value as i128) % p as i128) as i64, p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            Fp {
                value: -self.value,
                modulus: 0,
            }
        } else {
            Fp::new(-self.value, self.modulus)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::common(self, rhs);
        if p == 0 {
            return Fp {
                value: a.value * b.value,
                modulus: 0,
            };
        }
        Fp::new(((a.value as i128 * b.value as i128) % p as i128) as i64, p)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inverse().expect("division by zero in 𝔽_p")
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Scalar for Fp {
    fn from_int(n: i64, field: &ScalarField) -> Self {
        match field {
            ScalarField::Prime(p) => Fp::new(n, *p),
            ScalarField::Rationals => panic!("𝔽_p scalar requested over Q"),
        }
    }

    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        if self.modulus == 0 {
            return match self.value {
                1 | -1 => Some(*self),
                _ => panic!("inverse of an unbound integer other than ±1"),
            };
        }
        // Extended Euclid on (value, p).
        let p = self.modulus as i128;
        let (mut r0, mut r1) = (p, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(Fp::new((t0.rem_euclid(p)) as i64, self.modulus))
    }

    fn parse(text: &str, field: &ScalarField) -> Result<Self, FieldError> {
        let p = match field {
            ScalarField::Prime(p) => *p,
            ScalarField::Rationals => return Err(FieldError::Unsupported(*field)),
        };
        let n: BigInt = text.trim().parse().map_err(|_| FieldError::BadScalar {
            text: text.to_string(),
            field: *field,
        })?;
        let r = n.mod_floor_u64(p);
        Ok(Fp::new(r as i64, p))
    }

    fn supports(field: &ScalarField) -> bool {
        matches!(field, ScalarField::Prime(_))
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let mut r = self % &m;
        if r.is_negative() {
            r += &m;
        }
        r.try_into().expect("residue fits in u64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(ScalarField::prime(2).is_ok());
        assert!(ScalarField::prime(7919).is_ok());
        assert_eq!(ScalarField::prime(4), Err(FieldError::NotPrime(4)));
        assert_eq!(ScalarField::prime(1), Err(FieldError::NotPrime(1)));
    }

    #[test]
    fn fp_lazy_constants_bind() {
        let f = ScalarField::prime(5).unwrap();
        let three = Fp::from_int(3, &f);
        assert_eq!(three * Fp::one() + Fp::one(), Fp::from_int(4, &f));
        assert_eq!(-Fp::one(), Fp::from_int(4, &f));
        assert_eq!(three.inverse().unwrap(), Fp::from_int(2, &f));
        assert!((three - three).is_zero());
    }

    #[test]
    fn parse_scalars() {
        let q = ScalarField::Rationals;
        let half = BigRational::parse("-2/4", &q).unwrap();
        assert_eq!(half, BigRational::from_int(-1, &q) / BigRational::from_int(2, &q));
        assert!(BigRational::parse("1/0", &q).is_err());
        let f = ScalarField::prime(7).unwrap();
        assert_eq!(Fp::parse("-1", &f).unwrap(), Fp::from_int(6, &f));
        assert!(Fp::parse("x", &f).is_err());
    }
}
