//! Reduced indefinite binary quadratic forms and narrow class numbers.
//!
//! A form `(A, B, C)` of discriminant `D = B² − 4AC > 0` is reduced when
//! `0 < B < √D` and `√D − B < 2|A| < √D + B`. The reduced forms of a proper
//! equivalence class form exactly one cycle under `ρ`, so counting cycles
//! counts narrow classes. All `√D` comparisons are done on squares.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};

use crate::cfrac::IterCap;
use crate::error::{Error, Result};
use crate::exactint::is_squarefree;
use crate::ideals::{is_principal_a, IdealA};
use crate::units::unit_index;

/// Primitive binary quadratic form `Ax² + Bxy + Cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        i128::from(self.b).pow(2) - 4 * i128::from(self.a) * i128::from(self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d <= 0 {
            return false;
        }
        let b = i128::from(self.b);
        let two_a = 2 * i128::from(self.a).abs();
        // 0 < B < √D
        let b_ok = b > 0 && b * b < d;
        // √D < 2|A| + B
        let lower = (two_a + b).pow(2) > d;
        // 2|A| − B < √D
        let upper = two_a - b < 0 || (two_a - b).pow(2) < d;
        b_ok && lower && upper
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn check_discriminant(d: u64) -> Result<i128> {
    let di = i128::from(d);
    let r = d.sqrt();
    if d == 0 || r * r == d {
        return Err(Error::domain(format!(
            "discriminant {d} must be a positive non-square"
        )));
    }
    if d % 4 != 0 && d % 4 != 1 {
        return Err(Error::domain(format!("discriminant {d} ≢ 0, 1 (mod 4)")));
    }
    if d > i64::MAX as u64 / 4 {
        return Err(Error::domain(format!(
            "discriminant {d} too large for enumeration"
        )));
    }
    Ok(di)
}

/// All primitive reduced forms of discriminant `d`, in lexicographic order.
pub fn enumerate_reduced_forms(d: u64) -> Result<BTreeSet<Form>> {
    let di = check_discriminant(d)? as i64;
    let mut out = BTreeSet::new();
    let mut b = if di % 2 == 0 { 2 } else { 1 };
    while b * b < di {
        let m = (di - b * b) / 4;
        let mut x = 1;
        while x * x <= m {
            if m % x == 0 {
                let y = m / x;
                for (p, q) in [(x, y), (y, x)] {
                    for f in [Form::new(p, b, -q), Form::new(-p, b, q)] {
                        if f.is_reduced() && f.is_primitive() {
                            out.insert(f);
                        }
                    }
                }
            }
            x += 1;
        }
        b += 2;
    }
    Ok(out)
}

/// One step of the reduction cycle: `(A, B, C) ↦ (C, B', (B'² − D)/4C)` with
/// `B' ≡ −B (mod 2C)` and `√D − 2|C| < B' < √D`.
pub fn rho(f: &Form) -> Result<Form> {
    if !f.is_reduced() {
        return Err(Error::domain(format!("{f} is not reduced")));
    }
    let d = f.discriminant();
    let r = (d as u128).sqrt() as i128;
    let m = 2 * i128::from(f.c).abs();
    let b_new = r - (r + i128::from(f.b)).rem_euclid(m);
    let num = b_new * b_new - d;
    let den = 4 * i128::from(f.c);
    if num % den != 0 {
        return Err(Error::invariant(format!(
            "ρ{f}: 4C does not divide B'² − D"
        )));
    }
    let g = Form::new(f.c, b_new as i64, (num / den) as i64);
    if !g.is_reduced() {
        return Err(Error::invariant(format!("ρ{f} = {g} is not reduced")));
    }
    Ok(g)
}

/// The ρ-cycles of the reduced forms of discriminant `d`, each listed from
/// its least form.
pub fn cycles(d: u64) -> Result<Vec<Vec<Form>>> {
    let forms = enumerate_reduced_forms(d)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &forms {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut cur = rho(&start)?;
        while cur != start {
            if !forms.contains(&cur) || !seen.insert(cur) {
                return Err(Error::invariant(format!(
                    "ρ-orbit of {start} leaves the reduced set or merges at {cur}"
                )));
            }
            cycle.push(cur);
            cur = rho(&cur)?;
        }
        out.push(cycle);
    }
    Ok(out)
}

/// Number of ρ-cycles among the reduced forms, i.e. `h⁺(d)`.
pub fn narrow_class_number(d: u64) -> Result<u64> {
    Ok(cycles(d)?.len() as u64)
}

/// Class-number data for the map `Cl(A_N) → Cl(O_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub n: u64,
    /// `h⁺(N)`, the maximal order.
    pub h_plus_o: u64,
    /// `h⁺(4N)`, the order `Z[√N]`.
    pub h_plus_a: u64,
    pub kernel_order: u64,
    pub predicted_e: u32,
    pub observed_e: u32,
    pub i_plus_principal: bool,
}

/// Kernel order of `Cl(A_N) → Cl(O_N)` from `h⁺(4N)/h⁺(N)`, checked against
/// the unit index and the principality of `[4, √N + 1]`.
pub fn kernel_check(n: u64, cap: IterCap) -> Result<ClassData> {
    if n % 8 != 5 {
        return Err(Error::domain(format!("N = {n} ≢ 5 (mod 8)")));
    }
    if !is_squarefree(n)? {
        return Err(Error::domain(format!("N = {n} not square-free")));
    }
    let h_plus_o = narrow_class_number(n)?;
    let h_plus_a = narrow_class_number(
        n.checked_mul(4)
            .ok_or_else(|| Error::domain(format!("4N overflows for N = {n}")))?,
    )?;
    if h_plus_a % h_plus_o != 0 {
        return Err(Error::invariant(format!(
            "N = {n}: h⁺(4N) = {h_plus_a} not divisible by h⁺(N) = {h_plus_o}"
        )));
    }
    let kernel_order = h_plus_a / h_plus_o;
    if kernel_order != 1 && kernel_order != 3 {
        return Err(Error::invariant(format!(
            "N = {n}: kernel order {kernel_order} ∉ {{1, 3}}"
        )));
    }
    let predicted_e = if kernel_order == 3 { 1 } else { 3 };
    let observed_e = unit_index(n, cap)?.e;
    if predicted_e != observed_e {
        return Err(Error::invariant(format!(
            "N = {n}: kernel order {kernel_order} predicts e = {predicted_e}, units give e = {observed_e}"
        )));
    }
    let i_plus_principal = is_principal_a(&IdealA::i_pm(BigInt::from(n), 1)?, cap)?;
    if i_plus_principal != (kernel_order == 1) {
        return Err(Error::invariant(format!(
            "N = {n}: [4, √N+1] principal = {i_plus_principal} but kernel order is {kernel_order}"
        )));
    }
    Ok(ClassData {
        n,
        h_plus_o,
        h_plus_a,
        kernel_order,
        predicted_e,
        observed_e,
        i_plus_principal,
    })
}
