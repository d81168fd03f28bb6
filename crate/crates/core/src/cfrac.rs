//! Continued fractions of quadratic irrationals `(P + √N)/Q`.
//!
//! The expansion runs the classical state recurrence
//!
//! ```text
//! a_i     = ⌊(P_i + √N)/Q_i⌋
//! P_{i+1} = a_i·Q_i − P_i
//! Q_{i+1} = (N − P_{i+1}²)/Q_i
//! ```
//!
//! which stays in exact integers as long as `Q | N − P²`. The state `(P, Q)`
//! determines the whole tail, so the period is found at the first repeated
//! state, with no numeric tolerance involved.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactint::{is_square, isqrt, surd_sign};

/// Step budget for the expansion engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterCap(pub usize);

impl IterCap {
    pub const DEFAULT: IterCap = IterCap(1_000_000);
}

impl Default for IterCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The real number `(P + √N)/Q` with `Q ≠ 0` and `Q | N − P²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: BigInt,
    q: BigInt,
    n: BigInt,
}

impl QuadIrr {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let (p, q, n) = (p.into(), q.into(), n.into());
        if !n.is_positive() {
            return Err(Error::domain(format!("N = {n} must be positive")));
        }
        if is_square(&n) {
            return Err(Error::domain("N is a perfect square"));
        }
        if q.is_zero() {
            return Err(Error::domain("Q must be nonzero"));
        }
        if !(&n - &p * &p).is_multiple_of(&q) {
            return Err(Error::domain(format!(
                "Q = {q} does not divide N − P² = {}",
                &n - &p * &p
            )));
        }
        Ok(QuadIrr { p, q, n })
    }

    /// `√N` itself.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, n)
    }

    /// `(√N + sign)/4`, the elements attached to the ideals `[4, √N ± 1]`.
    pub fn quarter(n: impl Into<BigInt>, sign: i8) -> Result<Self> {
        Self::new(i64::from(sign.signum()), 4, n)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// Exact floor of `(P + √N)/Q`.
    pub fn floor(&self) -> BigInt {
        let s = isqrt(&self.n).expect("N positive");
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.q)
        } else {
            let num: BigInt = -&self.p - s - 1;
            num.div_floor(&-&self.q)
        }
    }

    /// `α > 1` and `−1 < ᾱ < 0`, decided with exact sign tests.
    pub fn is_reduced(&self) -> bool {
        use std::cmp::Ordering::{Greater, Less};
        let one = BigInt::one();
        let minus_one = -&one;
        // Sign of (x + y√N)/Q.
        let over_q = |x: &BigInt, y: &BigInt| {
            let s = surd_sign(x, y, &self.n);
            if self.q.is_negative() {
                s.reverse()
            } else {
                s
            }
        };
        over_q(&(&self.p - &self.q), &one) == Greater
            && over_q(&self.p, &minus_one) == Less
            && over_q(&(&self.p + &self.q), &minus_one) == Greater
    }

    fn state(&self) -> (BigInt, BigInt) {
        (self.p.clone(), self.q.clone())
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.p.is_zero() {
            format!("√{}", self.n)
        } else if self.p.is_negative() {
            format!("√{}-{}", self.n, -&self.p)
        } else {
            format!("√{}+{}", self.n, self.p)
        };
        if self.q.is_one() {
            f.write_str(&num)
        } else {
            write!(f, "({num})/{}", self.q)
        }
    }
}

/// Preperiod, period and the `(P, Q)` states visited inside the period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    pub cycle_states: Vec<(BigInt, BigInt)>,
}

impl CfExpansion {
    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    /// All terms up to the end of the first period.
    pub fn terms(&self) -> impl Iterator<Item = &BigInt> {
        self.preperiod.iter().chain(self.period.iter())
    }
}

/// Expands `alpha` until the first repeated state.
pub fn expand(alpha: &QuadIrr, cap: IterCap) -> Result<CfExpansion> {
    let n = &alpha.n;
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut states: Vec<(BigInt, BigInt)> = Vec::new();
    let mut terms = Vec::new();
    let mut cur = alpha.clone();

    loop {
        let key = cur.state();
        if let Some(&start) = seen.get(&key) {
            let period = terms.split_off(start);
            let cycle_states = states.split_off(start);
            for (p, q) in &cycle_states {
                let st = QuadIrr {
                    p: p.clone(),
                    q: q.clone(),
                    n: n.clone(),
                };
                if !st.is_reduced() {
                    return Err(Error::invariant(format!("cycle state {st} is not reduced")));
                }
            }
            return Ok(CfExpansion {
                preperiod: terms,
                period,
                cycle_states,
            });
        }
        if terms.len() >= cap.0 {
            return Err(Error::IterationCap { cap: cap.0 });
        }
        seen.insert(key.clone(), states.len());
        states.push(key);

        let a = cur.floor();
        let p_next = &a * &cur.q - &cur.p;
        let (q_next, rem) = (n - &p_next * &p_next).div_rem(&cur.q);
        if !rem.is_zero() {
            return Err(Error::invariant(format!(
                "Q = {} does not divide N − P² at P = {p_next}",
                cur.q
            )));
        }
        terms.push(a);
        cur = QuadIrr {
            p: p_next,
            q: q_next,
            n: n.clone(),
        };
    }
}

/// Expansion of `√N`.
pub fn sqrt_cf(n: impl Into<BigInt>, cap: IterCap) -> Result<CfExpansion> {
    expand(&QuadIrr::sqrt(n)?, cap)
}

/// Canonical label of a purely periodic cycle: its least `(P, Q)` state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleKey {
    pub p: BigInt,
    pub q: BigInt,
}

pub fn cycle_key(alpha: &QuadIrr, cap: IterCap) -> Result<CycleKey> {
    let exp = expand(alpha, cap)?;
    let (p, q) = exp
        .cycle_states
        .into_iter()
        .min()
        .expect("period is nonempty");
    Ok(CycleKey { p, q })
}

/// Equality of periodic parts, i.e. equivalence under `GL₂(Z)`.
pub fn equivalent(alpha: &QuadIrr, beta: &QuadIrr, cap: IterCap) -> Result<bool> {
    if alpha.n != beta.n {
        return Err(Error::domain(format!(
            "cannot compare irrationals over √{} and √{}",
            alpha.n, beta.n
        )));
    }
    Ok(cycle_key(alpha, cap)? == cycle_key(beta, cap)?)
}

/// Convergents `p_k/q_k` of a finite term list.
pub fn convergents<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> Vec<(BigInt, BigInt)> {
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    terms
        .into_iter()
        .map(|a| {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            (p.clone(), q.clone())
        })
        .collect()
}
