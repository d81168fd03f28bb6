//! Exact integer helpers and arithmetic in the maximal order of `Q(√N)`.
//!
//! Elements are stored as `(u + v√N)/d` with `d ∈ {1, 2}`; the half-integral
//! form is only admitted when `N ≡ 1 (mod 4)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Floor of the square root.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::domain(format!("isqrt of negative number {n}")));
    }
    Ok(n.sqrt())
}

/// Floor of the cube root.
pub fn icbrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::domain(format!("icbrt of negative number {n}")));
    }
    Ok(n.cbrt())
}

/// Returns `true` when `n` is the square of an integer. Negative `n` never is.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

/// Square-freeness by trial division up to `isqrt(n)`.
pub fn is_squarefree(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("is_squarefree of 0"));
    }
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(false);
            }
            while m % p == 0 {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(true)
}

/// Sign of the real number `x + y√n` for non-square `n > 0`, decided exactly.
pub fn surd_sign(x: &BigInt, y: &BigInt, n: &BigInt) -> Ordering {
    let sx = sign_to_ord(x.sign());
    let sy = sign_to_ord(y.sign());
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    // Opposite signs: the larger of x² and n·y² wins. They cannot tie since √n is irrational.
    match (x * x).cmp(&(n * y * y)) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

fn sign_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// An element `(u + v√N)/d` of the ring of integers of `Q(√N)`.
///
/// The representation is canonical, so structural equality is equality of
/// field elements. `N` must be a positive non-square; square-freeness is the
/// responsibility of the entry points that take `N` from a user.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    u: BigInt,
    v: BigInt,
    d: u8,
    n: BigInt,
}

impl QuadInt {
    pub fn new(
        u: impl Into<BigInt>,
        v: impl Into<BigInt>,
        d: u8,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let n = n.into();
        if n <= BigInt::one() || is_square(&n) {
            return Err(Error::domain(format!(
                "N = {n} must be a positive non-square"
            )));
        }
        if d != 1 && d != 2 {
            return Err(Error::domain(format!("denominator {d} not in {{1, 2}}")));
        }
        Self::normalized(u.into(), v.into(), u32::from(d), n)
    }

    /// The rational integer `k` viewed in `Q(√N)`.
    pub fn integer(k: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        Self::new(k, 0, 1, n)
    }

    pub fn one(n: &BigInt) -> Result<Self> {
        Self::integer(1, n.clone())
    }

    /// Reduces `(u + v√N)/d` for `d ∈ {1, 2, 4}` to a denominator in `{1, 2}`.
    fn normalized(mut u: BigInt, mut v: BigInt, mut d: u32, n: BigInt) -> Result<Self> {
        while d > 1 && u.is_even() && v.is_even() {
            u >>= 1;
            v >>= 1;
            d /= 2;
        }
        match d {
            1 => {}
            2 => {
                if u.is_even() != v.is_even() {
                    return Err(Error::domain(format!(
                        "({u}+{v}√{n})/2 is not an algebraic integer"
                    )));
                }
                if !mod4_is_one(&n) {
                    return Err(Error::domain(format!(
                        "half-integral element ({u}+{v}√{n})/2 requires N ≡ 1 (mod 4)"
                    )));
                }
            }
            _ => {
                return Err(Error::invariant(format!(
                    "({u}+{v}√{n})/{d} does not reduce to denominator 1 or 2"
                )))
            }
        }
        Ok(QuadInt {
            u,
            v,
            d: d as u8,
            n,
        })
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// True when the element lies in `Z[√N]`.
    pub fn is_integral_in_a(&self) -> bool {
        self.d == 1
    }

    pub fn norm(&self) -> BigInt {
        quad_norm(self)
    }

    pub fn conjugate(&self) -> QuadInt {
        QuadInt {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d,
            n: self.n.clone(),
        }
    }

    /// Exact comparison of the real embedding `(u + v√N)/d` with the integer `k`.
    pub fn cmp_integer(&self, k: &BigInt) -> Ordering {
        let shifted = &self.u - k * BigInt::from(self.d);
        surd_sign(&shifted, &self.v, &self.n)
    }
}

fn mod4_is_one(n: &BigInt) -> bool {
    n.mod_floor(&BigInt::from(4)) == BigInt::one()
}

/// Product in the maximal order.
pub fn quad_mul(x: &QuadInt, y: &QuadInt) -> Result<QuadInt> {
    if x.n != y.n {
        return Err(Error::domain(format!(
            "cannot multiply elements of Q(√{}) and Q(√{})",
            x.n, y.n
        )));
    }
    let u = &x.u * &y.u + &x.n * &x.v * &y.v;
    let v = &x.u * &y.v + &x.v * &y.u;
    let d = u32::from(x.d) * u32::from(y.d);
    QuadInt::normalized(u, v, d, x.n.clone())
}

/// `x^k` by repeated squaring.
pub fn quad_pow(x: &QuadInt, k: u64) -> QuadInt {
    let mut acc = QuadInt {
        u: BigInt::one(),
        v: BigInt::zero(),
        d: 1,
        n: x.n.clone(),
    };
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = quad_mul(&acc, &base).expect("same N, closed under multiplication");
        }
        k >>= 1;
        if k > 0 {
            base = quad_mul(&base, &base).expect("same N, closed under multiplication");
        }
    }
    acc
}

/// `(u² − N v²)/d²`.
pub fn quad_norm(x: &QuadInt) -> BigInt {
    let num = &x.u * &x.u - &x.n * &x.v * &x.v;
    let dd = BigInt::from(x.d) * BigInt::from(x.d);
    debug_assert!(num.is_multiple_of(&dd));
    num / dd
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        if !self.u.is_zero() || self.v.is_zero() {
            body.push_str(&self.u.to_string());
        }
        if !self.v.is_zero() {
            let mag = self.v.abs();
            if self.v.is_negative() {
                body.push('-');
            } else if !self.u.is_zero() {
                body.push('+');
            }
            if mag != BigInt::one() {
                body.push_str(&mag.to_string());
            }
            body.push('√');
            body.push_str(&self.n.to_string());
        }
        if self.d == 1 {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{}", self.d)
        }
    }
}
