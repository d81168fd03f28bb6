//! Fundamental units of `A_N = Z[√N]` and of the maximal order `O_N`, and
//! the index `e` with `ε_A = ε_O^e`.
//!
//! For `N ≡ 1 (mod 4)` the index is 1 or 3. Three independent signals decide
//! it and must agree:
//!
//! * parity: `ε_O = (x + y√N)/2` with `x, y` odd, i.e. an odd solution of
//!   `x² − Ny² = ±4`;
//! * continued fractions: `(√N ± 1)/4` lies on the principal cycle of `√N`
//!   (only meaningful for `N ≡ 5 (mod 8)`);
//! * the brute-force oracles below, used by the test suites at small `N`.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed};

use crate::cfrac::{convergents, equivalent, sqrt_cf, IterCap, QuadIrr};
use crate::error::{Error, Result};
use crate::exactint::{icbrt, is_square, is_squarefree, isqrt, quad_pow, QuadInt};

static CUBE_ROOT_APPROXIMATIONS: AtomicU64 = AtomicU64::new(0);
static CUBE_ROOT_SETTLED_EXACTLY: AtomicU64 = AtomicU64::new(0);

/// Counters for the fixed-point cube-root path.
///
/// Every approximation is followed by an exact cube check that either
/// confirms a root or proves none exists; `settled_exactly` counts those.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxCounters {
    pub approximations: u64,
    pub settled_exactly: u64,
}

pub fn approx_counters() -> ApproxCounters {
    ApproxCounters {
        approximations: CUBE_ROOT_APPROXIMATIONS.load(AtomicOrdering::SeqCst),
        settled_exactly: CUBE_ROOT_SETTLED_EXACTLY.load(AtomicOrdering::SeqCst),
    }
}

/// `ε_A` together with the data it was read off from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub unit: QuadInt,
    /// `+1` or `−1`.
    pub norm: i8,
    /// Period length of `√N`; the norm is `(−1)^ℓ`.
    pub period_length: usize,
}

/// Which independent methods were run, and what they said about `e = 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodFlags {
    /// `ε_O` has odd half-integral coordinates.
    pub parity: bool,
    /// `(√N + 1)/4 ~ √N`; present when `N ≡ 5 (mod 8)`.
    pub cf_plus: Option<bool>,
    /// `(√N − 1)/4 ~ √N`; present when `N ≡ 5 (mod 8)`.
    pub cf_minus: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitReport {
    pub n: u64,
    pub epsilon_a: QuadInt,
    pub epsilon_o: QuadInt,
    pub e: u32,
    pub norm_a: i8,
    pub period_length: usize,
    /// `(x, y)` odd with `x² − Ny² = ±4`, read off `ε_O = (x + y√N)/2`.
    pub odd_pell: Option<(BigInt, BigInt)>,
    pub methods: MethodFlags,
}

fn check_field(n: u64) -> Result<()> {
    if n < 2 || is_square(&BigInt::from(n)) {
        return Err(Error::domain(format!("N = {n} is a perfect square")));
    }
    if !is_squarefree(n)? {
        return Err(Error::domain(format!("N = {n} not square-free")));
    }
    Ok(())
}

/// `ε_A = p + q√N` from the last convergent before the end of the first period of `√N`.
pub fn fundamental_unit_a(n: u64, cap: IterCap) -> Result<FundamentalUnit> {
    check_field(n)?;
    let exp = sqrt_cf(n, cap)?;
    let len = exp.period_length();
    let terms: Vec<&BigInt> = exp.terms().take(len).collect();
    let (p, q) = convergents(terms).pop().expect("at least one term");
    let unit = QuadInt::new(p, q, 1, n)?;

    let norm = unit.norm();
    let expected = if len % 2 == 0 { 1 } else { -1 };
    if norm != BigInt::from(expected) {
        return Err(Error::invariant(format!(
            "norm of {unit} is {norm}, expected (−1)^{len}"
        )));
    }
    if unit.cmp_integer(&BigInt::one()) != Ordering::Greater {
        return Err(Error::invariant(format!("{unit} is not > 1")));
    }
    Ok(FundamentalUnit {
        unit,
        norm: expected,
        period_length: len,
    })
}

/// Cube root of `eps` in `O_N` with half-integral coordinates, if one exists.
///
/// A fixed-point approximation of `η = eps^(1/3)` proposes `(u, v)` with
/// `η = (u + v√N)/2`; the answer is settled by an exact cube, so the
/// precision of the approximation never decides the result.
pub fn cube_root_in_maximal_order(eps: &QuadInt) -> Result<Option<QuadInt>> {
    if eps.d() != 1 || !eps.u().is_positive() || !eps.v().is_positive() {
        return Err(Error::domain(format!(
            "{eps} is not a unit > 1 of Z[√N] with positive coordinates"
        )));
    }
    let sign = eps.norm();
    if sign.abs() != BigInt::one() {
        return Err(Error::domain(format!("{eps} is not a unit")));
    }
    CUBE_ROOT_APPROXIMATIONS.fetch_add(1, AtomicOrdering::SeqCst);

    let n = eps.n();
    let (x, y) = (eps.u(), eps.v());
    let k = (x.bits() + 1) / 3 + 64;

    // η·2^k and η̄·2^k, where η̄ = norm/η.
    let eps_scaled = (x << (3 * k)) + y * isqrt(&(n << (6 * k)))?;
    let eta = icbrt(&eps_scaled)?;
    let eta_bar = (&sign << (2 * k)).div_floor(&eta);
    let sqrt_n = isqrt(&(n << (2 * k)))?;

    let round_div = |a: BigInt, b: &BigInt| -> BigInt {
        let num: BigInt = a * 2 + b;
        num.div_floor(&(b * 2))
    };
    let u0 = round_div(&eta + &eta_bar, &(BigInt::one() << k));
    let v0 = round_div(&eta - &eta_bar, &sqrt_n);

    let mut found = None;
    'search: for du in [0i8, -1, 1] {
        for dv in [0i8, -1, 1] {
            let u = &u0 + du;
            let v = &v0 + dv;
            if u.is_even() != v.is_even() {
                continue;
            }
            let cand = QuadInt::new(u, v, 2, n.clone())?;
            if quad_pow(&cand, 3) == *eps {
                found = Some(cand);
                break 'search;
            }
        }
    }
    CUBE_ROOT_SETTLED_EXACTLY.fetch_add(1, AtomicOrdering::SeqCst);

    if let Some(root) = &found {
        assert_eq!(
            quad_pow(root, 3),
            *eps,
            "returned cube root must cube exactly"
        );
        if root.is_integral_in_a() {
            return Err(Error::invariant(format!(
                "{eps} has a cube root {root} inside Z[√N]; it is not fundamental"
            )));
        }
    }
    Ok(found)
}

/// Fundamental unit `ε` of `O_N`, with `ε = ε_A` or `ε³ = ε_A`.
pub fn fundamental_unit_o(n: u64, cap: IterCap) -> Result<QuadInt> {
    let eps_a = fundamental_unit_a(n, cap)?.unit;
    unit_o_from_a(n, eps_a)
}

fn unit_o_from_a(n: u64, eps_a: QuadInt) -> Result<QuadInt> {
    if n % 4 != 1 {
        return Ok(eps_a);
    }
    let eps = cube_root_in_maximal_order(&eps_a)?.unwrap_or_else(|| eps_a.clone());

    let norm = eps.norm();
    if norm.abs() != BigInt::one() {
        return Err(Error::invariant(format!("ε = {eps} has norm {norm}")));
    }
    if eps.cmp_integer(&BigInt::one()) != Ordering::Greater {
        return Err(Error::invariant(format!("ε = {eps} is not > 1")));
    }
    if eps != eps_a && quad_pow(&eps, 3) != eps_a {
        return Err(Error::invariant(format!(
            "ε = {eps} is neither ε_A nor its cube root"
        )));
    }
    Ok(eps)
}

/// Decides `e ∈ {1, 3}` for square-free `N ≡ 1 (mod 4)` and cross-checks the methods.
pub fn unit_index(n: u64, cap: IterCap) -> Result<UnitReport> {
    check_field(n)?;
    if n % 4 != 1 {
        return Err(Error::domain(format!("N = {n} ≢ 1 (mod 4)")));
    }
    let fa = fundamental_unit_a(n, cap)?;
    let eps_o = unit_o_from_a(n, fa.unit.clone())?;
    let e = if eps_o == fa.unit { 1 } else { 3 };

    let odd_pell = (eps_o.d() == 2).then(|| (eps_o.u().clone(), eps_o.v().clone()));
    let parity = odd_pell.is_some();
    if parity != (e == 3) {
        return Err(Error::invariant(format!(
            "N = {n}: parity of ε_O disagrees with e = {e}"
        )));
    }
    if quad_pow(&eps_o, u64::from(e)) != fa.unit {
        return Err(Error::invariant(format!("N = {n}: ε_O^{e} ≠ ε_A")));
    }

    let mut methods = MethodFlags {
        parity,
        cf_plus: None,
        cf_minus: None,
    };
    match n % 8 {
        1 if e != 1 => {
            return Err(Error::invariant(format!("N = {n} ≡ 1 (mod 8) but e = {e}")));
        }
        5 => {
            let root = QuadIrr::sqrt(n)?;
            let plus = equivalent(&QuadIrr::quarter(n, 1)?, &root, cap)?;
            let minus = equivalent(&QuadIrr::quarter(n, -1)?, &root, cap)?;
            if plus != parity || minus != parity {
                return Err(Error::invariant(format!(
                    "N = {n}: parity says e = {e}, but (√N+1)/4 ~ √N is {plus} and (√N−1)/4 ~ √N is {minus}"
                )));
            }
            methods.cf_plus = Some(plus);
            methods.cf_minus = Some(minus);
        }
        _ => {}
    }

    Ok(UnitReport {
        n,
        epsilon_a: fa.unit,
        epsilon_o: eps_o,
        e,
        norm_a: fa.norm,
        period_length: fa.period_length,
        odd_pell,
        methods,
    })
}

/// Quadratic residues mod 64, as a bitmask.
const SQUARES_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

fn is_square_u128(t: u128) -> Option<u128> {
    if SQUARES_MOD_64 & (1 << (t % 64)) == 0 {
        return None;
    }
    let s = t.sqrt();
    (s * s == t).then_some(s)
}

/// Smallest `y ≤ y_bound` such that `N y² ± 1` is a perfect square `x²`, as `x + y√N`.
///
/// Exhaustive search; an oracle for small `N` only.
pub fn brute_force_unit(n: u64, y_bound: u64) -> Option<QuadInt> {
    let nn = u128::from(n);
    for y in 1..=y_bound {
        let yy = u128::from(y);
        let hit = match yy.checked_mul(yy).and_then(|y2| y2.checked_mul(nn)) {
            Some(t) if t < u128::MAX => is_square_u128(t - 1)
                .or_else(|| is_square_u128(t + 1))
                .map(BigInt::from),
            _ => {
                let t = BigInt::from(n) * BigInt::from(y) * BigInt::from(y);
                [&t - 1, &t + 1]
                    .into_iter()
                    .find(is_square)
                    .map(|s| s.sqrt())
            }
        };
        if let Some(x) = hit {
            return QuadInt::new(x, y, 1, n).ok();
        }
    }
    None
}

/// Smallest odd `y ≤ y_bound` with `N y² ∓ 4 = x²` for odd `x`.
pub fn odd_pell_oracle(n: u64, y_bound: u64) -> Result<Option<(BigInt, BigInt)>> {
    if n % 8 != 5 {
        return Err(Error::domain(format!("N = {n} ≢ 5 (mod 8)")));
    }
    let nn = BigInt::from(n);
    let mut y = 1u64;
    while y <= y_bound {
        let t = &nn * BigInt::from(y) * BigInt::from(y);
        // N y² is odd, so N y² ± 4 is odd and any root is odd.
        for cand in [&t - 4, &t + 4] {
            if is_square(&cand) {
                return Ok(Some((cand.sqrt(), BigInt::from(y))));
            }
        }
        y += 2;
    }
    Ok(None)
}
