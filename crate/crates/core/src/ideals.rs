//! Ideals of `A_N = Z[√N]` in the canonical form `s·[a, b + √N]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cfrac::{equivalent, IterCap, QuadIrr};
use crate::error::{Error, Result};
use crate::exactint::{is_square, is_squarefree};

/// The Z-module `s·(aZ + (b + √N)Z)` with `a | N − b²` and `0 ≤ b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealA {
    s: BigInt,
    a: BigInt,
    b: BigInt,
    n: BigInt,
}

impl IdealA {
    pub fn new(
        s: impl Into<BigInt>,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let (s, a, b, n) = (s.into(), a.into(), b.into(), n.into());
        if n <= BigInt::one() || is_square(&n) {
            return Err(Error::domain(format!(
                "N = {n} must be a positive non-square"
            )));
        }
        if !a.is_positive() || !s.is_positive() {
            return Err(Error::domain(format!(
                "need a > 0 and s > 0, got a = {a}, s = {s}"
            )));
        }
        let b = b.mod_floor(&a);
        if !(&n - &b * &b).is_multiple_of(&a) {
            return Err(Error::NotAnIdeal(format!(
                "[{a}, {b}+√{n}]: {a} does not divide N − b² = {}",
                &n - &b * &b
            )));
        }
        Ok(IdealA { s, a, b, n })
    }

    /// The whole ring `[1, √N]`.
    pub fn whole(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(1, 1, 0, n)
    }

    /// `I± = [4, √N ± 1]`.
    pub fn i_pm(n: impl Into<BigInt>, sign: i8) -> Result<Self> {
        Self::new(1, 4, i64::from(sign.signum()), n)
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn norm(&self) -> BigInt {
        ideal_norm(self)
    }

    /// The same ideal scaled by the positive integer `k`.
    pub fn scaled(&self, k: impl Into<BigInt>) -> Result<Self> {
        Self::new(
            &self.s * k.into(),
            self.a.clone(),
            self.b.clone(),
            self.n.clone(),
        )
    }

    /// Primitive part `[a, b + √N]`.
    pub fn primitive(&self) -> Self {
        IdealA {
            s: BigInt::one(),
            ..self.clone()
        }
    }

    /// Lattice basis rows `(x, y)` meaning `x + y√N`.
    fn basis(&self) -> [(BigInt, BigInt); 2] {
        [
            (&self.s * &self.a, BigInt::zero()),
            (&self.s * &self.b, self.s.clone()),
        ]
    }
}

impl fmt::Display for IdealA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.s.is_one() {
            write!(f, "{}", self.s)?;
        }
        if self.b.is_zero() {
            write!(f, "[{},√{}]", self.a, self.n)
        } else {
            write!(f, "[{},{}+√{}]", self.a, self.b, self.n)
        }
    }
}

/// Hermite normal form of a full-rank lattice in `Z²` given by generating rows.
///
/// Returns `(a, b, c)` for the basis `(a, 0), (b, c)` with `a, c > 0` and
/// `0 ≤ b < a`, or `None` when the rows span a lattice of rank < 2.
pub fn hnf2(rows: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut rows = rows.iter();
    let (mut px, mut py) = rows.next()?.clone();
    let mut a = BigInt::zero();
    for (x, y) in rows {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        // Unimodular step [[s, t], [y/g, −py/g]] folds y into the pivot.
        let ext = py.extended_gcd(y);
        let g = ext.gcd;
        let (yq, pyq) = (y / &g, &py / &g);
        let cleared = &yq * &px - &pyq * x;
        a = a.gcd(&cleared);
        px = &ext.x * &px + &ext.y * x;
        py = g;
    }
    if py.is_negative() {
        px = -px;
        py = -py;
    }
    if a.is_zero() || py.is_zero() {
        return None;
    }
    let b = px.mod_floor(&a);
    Some((a, b, py))
}

/// Product ideal, via the HNF of the four generator products.
pub fn ideal_mul(i: &IdealA, j: &IdealA) -> Result<IdealA> {
    if i.n != j.n {
        return Err(Error::domain(format!(
            "ideals of Z[√{}] and Z[√{}] cannot be multiplied",
            i.n, j.n
        )));
    }
    let n = &i.n;
    let (a1, b1, a2, b2) = (&i.a, &i.b, &j.a, &j.b);
    let gens = [
        (a1 * a2, BigInt::zero()),
        (a1 * b2, a1.clone()),
        (a2 * b1, a2.clone()),
        (b1 * b2 + n, b1 + b2),
    ];
    let (ha, hb, hc) =
        hnf2(&gens).ok_or_else(|| Error::invariant("product of ideals has rank < 2"))?;
    if !ha.is_multiple_of(&hc) || !hb.is_multiple_of(&hc) {
        return Err(Error::invariant(format!(
            "HNF ({ha}, {hb}, {hc}) of a product is not of ideal shape"
        )));
    }
    IdealA::new(&i.s * &j.s * &hc, &ha / &hc, &hb / &hc, n.clone())
}

pub fn ideal_norm(i: &IdealA) -> BigInt {
    &i.s * &i.s * &i.a
}

/// Re-reduces the ideal's own lattice basis; used to check HNF uniqueness.
pub fn rereduce(i: &IdealA) -> Result<IdealA> {
    let (ha, hb, hc) = hnf2(&i.basis()).ok_or_else(|| Error::invariant("rank < 2"))?;
    IdealA::new(hc.clone(), &ha / &hc, &hb / &hc, i.n.clone())
}

/// Principality of the primitive part, read off the continued fraction of `(b + √N)/a`.
pub fn is_principal_a(i: &IdealA, cap: IterCap) -> Result<bool> {
    let alpha = QuadIrr::new(i.b.clone(), i.a.clone(), i.n.clone())?;
    equivalent(&alpha, &QuadIrr::sqrt(i.n.clone())?, cap)
}

/// Whether the `O_N`-ideal generated by `2` and `(√N ± 1)/2` is all of `O_N`,
/// so that `J± = 2·[2, (√N ± 1)/2] = 2·O_N` is principal.
pub fn extension_is_2o(sign: i8, n: u64) -> Result<bool> {
    if n % 8 != 5 {
        return Err(Error::domain(format!("N = {n} ≢ 5 (mod 8)")));
    }
    if !is_squarefree(n)? {
        return Err(Error::domain(format!("N = {n} not square-free")));
    }
    // Coordinates over the basis {1, ω}, ω = (1 + √N)/2, ω² = ω + (N − 1)/4.
    let m = BigInt::from((n - 1) / 4);
    let times_omega = |(x, y): &(BigInt, BigInt)| (y * &m, x + y);
    let two = (BigInt::from(2), BigInt::zero());
    let half = if sign >= 0 {
        (BigInt::zero(), BigInt::one())
    } else {
        (BigInt::from(-1), BigInt::one())
    };
    let gens = [times_omega(&two), times_omega(&half), two, half];
    let hnf = hnf2(&gens).ok_or_else(|| Error::invariant("J has rank < 2"))?;
    Ok(hnf == (BigInt::one(), BigInt::zero(), BigInt::one()))
}
