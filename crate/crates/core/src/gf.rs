//! Prime-field arithmetic.
//!
//! [`Fp`] is the field itself (a validated odd prime below 2^61) and carries
//! the raw `u64` arithmetic that the polynomial layer uses internally.
//! [`FieldElement`] is the user-facing value type: it remembers its modulus
//! and refuses to mix with elements of a different field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible modulus (exclusive). Products fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 61;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("bad modulus {0}: must be an odd prime below 2^61")]
    BadModulus(u64),
    #[error("{value} is not a square in F_{p}")]
    NotASquare { value: u64, p: u64 },
    #[error("mixed moduli {0} and {1}")]
    ModulusMismatch(u64, u64),
}

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Fp {
    p: u64,
}

impl TryFrom<u64> for Fp {
    type Error = GfError;
    fn try_from(p: u64) -> Result<Self, GfError> {
        Fp::new(p)
    }
}

impl From<Fp> for u64 {
    fn from(f: Fp) -> u64 {
        f.p
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all n < 3.3e24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, GfError> {
        if p < 3 || p % 2 == 0 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(GfError::BadModulus(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Wraps a signed integer into the field.
    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in (-p/2, p/2], handy for printing.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero(self.p));
        }
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Canonical square root: the root lying in [0, p/2].
    pub fn sqrt(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Ok(0);
        }
        if !self.is_square(a) {
            return Err(GfError::NotASquare { value: a, p: self.p });
        }
        let r = self.tonelli_shanks(a);
        Ok(if r > self.p / 2 { self.p - r } else { r })
    }

    fn tonelli_shanks(&self, a: u64) -> u64 {
        let p = self.p;
        if p % 4 == 3 {
            return self.pow(a, (p + 1) / 4);
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }

    /// Smallest quadratic non-residue.
    pub fn non_residue(&self) -> u64 {
        (2..self.p).find(|&z| !self.is_square(z)).expect("p >= 3 has a non-residue")
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.from_i64(v),
            p: self.p,
        }
    }

    pub fn from_raw(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// An element of F_p that remembers its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> Fp {
        Fp { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<Fp, GfError> {
        if self.p != other.p {
            return Err(GfError::ModulusMismatch(self.p, other.p));
        }
        Ok(self.field())
    }

    /// Checked binary/unary arithmetic. `b` is ignored for unary ops.
    pub fn arith(&self, b: &FieldElement, op: FieldOp) -> Result<FieldElement, GfError> {
        let f = self.same_field(b)?;
        let v = match op {
            FieldOp::Add => f.add(self.value, b.value),
            FieldOp::Sub => f.sub(self.value, b.value),
            FieldOp::Mul => f.mul(self.value, b.value),
            FieldOp::Div => f.div(self.value, b.value)?,
            FieldOp::Neg => f.neg(self.value),
            FieldOp::Inv => f.inv(self.value)?,
        };
        Ok(FieldElement { value: v, p: self.p })
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        self.arith(self, FieldOp::Inv)
    }

    pub fn div(&self, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.arith(b, FieldOp::Div)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            value: self.field().pow(self.value, e),
            p: self.p,
        }
    }

    pub fn is_square(&self) -> bool {
        self.field().is_square(self.value)
    }

    pub fn sqrt(&self) -> Result<FieldElement, GfError> {
        Ok(FieldElement {
            value: self.field().sqrt(self.value)?,
            p: self.p,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator impls panic on mixed moduli; use `arith` for the checked form.
macro_rules! binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.arith(&rhs, $op).expect("field arithmetic on mismatched moduli")
            }
        }
    };
}
binop!(Add, add, FieldOp::Add);
binop!(Sub, sub, FieldOp::Sub);
binop!(Mul, mul, FieldOp::Mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let f7 = Fp::new(7).unwrap();
        assert_eq!(f7.elem(3).inv().unwrap().value(), 5);
        assert_eq!((-f7.elem(0)).value(), 0);
        assert_eq!((f7.elem(5) * f7.elem(5)).value(), 4);
        assert!(f7.elem(2).is_square());
        assert!(!f7.elem(3).is_square());
        assert!(Fp::new(10007).unwrap().elem(2).is_square());
        assert_eq!(f7.elem(2).sqrt().unwrap().value(), 3);
        assert_eq!(f7.elem(0).sqrt().unwrap().value(), 0);
        assert_eq!(f7.elem(1).sqrt().unwrap().value(), 1);
    }

    #[test]
    fn errors() {
        let f7 = Fp::new(7).unwrap();
        assert_eq!(f7.elem(0).inv(), Err(GfError::DivisionByZero(7)));
        assert!(matches!(f7.elem(3).sqrt(), Err(GfError::NotASquare { .. })));
        for bad in [0, 1, 2, 4, 9, 15, 10005, MAX_MODULUS + 1] {
            assert_eq!(Fp::new(bad), Err(GfError::BadModulus(bad)));
        }
        let f11 = Fp::new(11).unwrap();
        assert_eq!(
            f7.elem(1).arith(&f11.elem(1), FieldOp::Add),
            Err(GfError::ModulusMismatch(7, 11))
        );
    }

    #[test]
    fn sqrt_on_p_1_mod_8() {
        // 41 = 1 mod 8 exercises the full Tonelli-Shanks loop
        let f = Fp::new(41).unwrap();
        for a in 0..41u64 {
            let sq = f.mul(a, a);
            let r = f.sqrt(sq).unwrap();
            assert!(r <= 20);
            assert_eq!(f.mul(r, r), sq);
        }
    }

    #[test]
    fn large_prime() {
        let p = (1u64 << 61) - 1;
        let f = Fp::new(p).unwrap();
        let a = 123456789012345u64;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        let s = f.mul(a, a);
        let r = f.sqrt(s).unwrap();
        assert_eq!(f.mul(r, r), s);
    }
}
