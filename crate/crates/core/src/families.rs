//! The parametric families `N = a² + 4`, `N = a² − 4` and `N = 4a² + 1`
//! (`a` odd), whose continued fractions are known in closed form and whose
//! unit index is fixed: 3 for `a² ± 4`, 1 for `4a² + 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cfrac::{equivalent, sqrt_cf, IterCap, QuadIrr};
use crate::error::{Error, Result};
use crate::exactint::is_squarefree;
use crate::units::unit_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `a² + 4`
    APlus4,
    /// `a² − 4`
    AMinus4,
    /// `4a² + 1`
    FourAPlus1,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::APlus4,
        FamilyKind::AMinus4,
        FamilyKind::FourAPlus1,
    ];

    /// Least admissible `a`.
    pub fn min_a(self) -> u64 {
        match self {
            FamilyKind::APlus4 => 3,
            FamilyKind::AMinus4 | FamilyKind::FourAPlus1 => 5,
        }
    }

    pub fn predicted_e(self) -> u32 {
        match self {
            FamilyKind::APlus4 | FamilyKind::AMinus4 => 3,
            FamilyKind::FourAPlus1 => 1,
        }
    }

    pub fn n_of(self, a: u64) -> Result<u64> {
        let sq = a
            .checked_mul(a)
            .ok_or_else(|| Error::domain(format!("a = {a} too large")))?;
        let n = match self {
            FamilyKind::APlus4 => sq.checked_add(4),
            FamilyKind::AMinus4 => sq.checked_sub(4),
            FamilyKind::FourAPlus1 => sq.checked_mul(4).and_then(|x| x.checked_add(1)),
        };
        n.ok_or_else(|| Error::domain(format!("a = {a} out of range for {self}")))
    }

    fn check_a(self, a: u64) -> Result<()> {
        if a % 2 == 0 {
            return Err(Error::domain(format!("a = {a} must be odd")));
        }
        if a < self.min_a() {
            return Err(Error::domain(format!(
                "a below family bound: {self} needs odd a ≥ {}",
                self.min_a()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::APlus4 => "a2+4",
            FamilyKind::AMinus4 => "a2-4",
            FamilyKind::FourAPlus1 => "4a2+1",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a2+4" => Ok(FamilyKind::APlus4),
            "a2-4" => Ok(FamilyKind::AMinus4),
            "4a2+1" => Ok(FamilyKind::FourAPlus1),
            other => Err(Error::domain(format!(
                "unknown family {other:?}; expected a2+4, a2-4 or 4a2+1"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub kind: FamilyKind,
    pub a: u64,
    pub n: u64,
    pub squarefree: bool,
    pub predicted_e: u32,
    pub observed_e: Option<u32>,
    pub cf_pattern_ok: Option<bool>,
    pub equivalence_ok: Option<bool>,
}

impl FamilyRow {
    fn new(kind: FamilyKind, a: u64) -> Result<Self> {
        let n = kind.n_of(a)?;
        Ok(FamilyRow {
            kind,
            a,
            n,
            squarefree: is_squarefree(n)?,
            predicted_e: kind.predicted_e(),
            observed_e: None,
            cf_pattern_ok: None,
            equivalence_ok: None,
        })
    }
}

/// Odd `a` in `[a_min, a_max]`, optionally restricted to square-free `N`.
pub fn family_members(
    kind: FamilyKind,
    a_min: u64,
    a_max: u64,
    squarefree_only: bool,
) -> Result<Vec<FamilyRow>> {
    if a_min < kind.min_a() {
        return Err(Error::domain(format!(
            "a below family bound: {kind} needs odd a ≥ {}",
            kind.min_a()
        )));
    }
    let first = a_min | 1;
    let mut rows = Vec::new();
    for a in (first..=a_max).step_by(2) {
        let row = FamilyRow::new(kind, a)?;
        if row.squarefree || !squarefree_only {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// The first `count` square-free members, starting from the family's least `a`.
pub fn first_squarefree_members(kind: FamilyKind, count: usize) -> Result<Vec<FamilyRow>> {
    let mut rows = Vec::with_capacity(count);
    let mut a = kind.min_a();
    while rows.len() < count {
        let row = FamilyRow::new(kind, a)?;
        if row.squarefree {
            rows.push(row);
        }
        a += 2;
    }
    Ok(rows)
}

fn ints(v: &[u64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

/// Closed-form continued fraction of `√N` for the family member at `a`.
pub fn expected_cf_pattern(kind: FamilyKind, a: u64) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    kind.check_a(a)?;
    Ok(match kind {
        FamilyKind::APlus4 => {
            let h = (a - 1) / 2;
            (ints(&[a]), ints(&[h, 1, 1, h, 2 * a]))
        }
        FamilyKind::AMinus4 => {
            let h = (a - 3) / 2;
            (ints(&[a - 1]), ints(&[1, h, 2, h, 1, 2 * a - 2]))
        }
        FamilyKind::FourAPlus1 => square_plus_one_pattern(2 * a),
    })
}

/// `√(m² + 1) = (m; 2m)`.
pub fn square_plus_one_pattern(m: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    (ints(&[m]), ints(&[2 * m]))
}

/// `1 + √(a² − 4)/(a − 2)`, i.e. `(a − 2 + √N)/(a − 2)` for `N = a² − 4`.
pub fn shifted_a2m4_element(a: u64) -> Result<QuadIrr> {
    FamilyKind::AMinus4.check_a(a)?;
    let n = FamilyKind::AMinus4.n_of(a)?;
    QuadIrr::new(a - 2, a - 2, n)
}

/// `1 + √(a² − 4)/(a − 2)` is reduced, with purely periodic expansion
/// `(2, (a−3)/2, 1, 2a−2, 1, (a−3)/2)` repeated: a rotation of the period of `√N`.
pub fn shifted_a2m4_pattern(a: u64) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    FamilyKind::AMinus4.check_a(a)?;
    let h = (a - 3) / 2;
    Ok((vec![], ints(&[2, h, 1, 2 * a - 2, 1, h])))
}

/// `b` with `a = 4b ∓ 1`, the floor of `(√N ± 1)/4` for `N = a² + 4`.
pub fn quarter_floor_a2p4(a: u64, sign: i8) -> Result<u64> {
    FamilyKind::APlus4.check_a(a)?;
    // a = 4b − 1 pairs with the + sign, a = 4b + 1 with the − sign.
    match (a % 4, sign.signum()) {
        (3, 1) => Ok((a + 1) / 4),
        (1, -1) => Ok((a - 1) / 4),
        _ => Err(Error::domain(format!(
            "a = {a} is not of the form 4b {} 1",
            if sign >= 0 { "−" } else { "+" }
        ))),
    }
}

fn verification(row: &FamilyRow, reason: impl Into<String>) -> Error {
    Error::Verification {
        a: row.a,
        n: row.n,
        reason: format!("{}: {}", row.kind, reason.into()),
    }
}

/// Checks the continued-fraction pattern, the equivalence of `(√N ± 1)/4`
/// with `√N`, and (for square-free `N`) the unit index.
pub fn verify_member(row: &FamilyRow, cap: IterCap) -> Result<FamilyRow> {
    let mut row = row.clone();
    let kind = row.kind;

    let exp = sqrt_cf(row.n, cap)?;
    let (pre, per) = expected_cf_pattern(kind, row.a)?;
    let cf_ok = exp.preperiod == pre && exp.period == per;
    row.cf_pattern_ok = Some(cf_ok);
    if !cf_ok {
        return Err(verification(
            &row,
            "continued fraction of √N differs from the closed form",
        ));
    }

    let root = QuadIrr::sqrt(row.n)?;
    let want = kind.predicted_e() == 3;
    let plus = equivalent(&QuadIrr::quarter(row.n, 1)?, &root, cap)?;
    let minus = equivalent(&QuadIrr::quarter(row.n, -1)?, &root, cap)?;
    let eq_ok = plus == want && minus == want;
    row.equivalence_ok = Some(eq_ok);
    if !eq_ok {
        return Err(verification(
            &row,
            format!("(√N+1)/4 ~ √N is {plus}, (√N−1)/4 ~ √N is {minus}, expected {want}"),
        ));
    }

    if row.squarefree {
        let e = unit_index(row.n, cap)?.e;
        row.observed_e = Some(e);
        if e != row.predicted_e {
            return Err(verification(
                &row,
                format!("e = {e}, expected {}", row.predicted_e),
            ));
        }
    }
    Ok(row)
}

/// Verifies every member in range, in parallel; rows come back in order of `a`.
/// Members with non-square-free `N` are kept with `observed_e = None`.
pub fn survey(kind: FamilyKind, a_min: u64, a_max: u64, cap: IterCap) -> Result<Vec<FamilyRow>> {
    let rows = family_members(kind, a_min, a_max, false)?;
    rows.par_iter().map(|r| verify_member(r, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: IterCap = IterCap::DEFAULT;

    #[test]
    fn shifted_a2m4_is_purely_periodic() {
        for a in (5u64..=31).step_by(2) {
            let e = crate::cfrac::expand(&shifted_a2m4_element(a).unwrap(), CAP).unwrap();
            let (pre, per) = shifted_a2m4_pattern(a).unwrap();
            assert_eq!((e.preperiod, e.period), (pre, per), "a = {a}");
        }
        assert_eq!(
            shifted_a2m4_pattern(5).unwrap().1,
            ints(&[2, 1, 1, 8, 1, 1])
        );
    }

    fn ns(rows: &[FamilyRow]) -> Vec<u64> {
        rows.iter().map(|r| r.n).collect()
    }

    #[test]
    fn members_examples() {
        let r = family_members(FamilyKind::APlus4, 3, 7, true).unwrap();
        assert_eq!(ns(&r), vec![13, 29, 53]);
        assert!(family_members(FamilyKind::APlus4, 11, 11, true)
            .unwrap()
            .is_empty());
        let r = family_members(FamilyKind::FourAPlus1, 5, 9, true).unwrap();
        assert_eq!(ns(&r), vec![101, 197]);
        let r = family_members(FamilyKind::FourAPlus1, 5, 9, false).unwrap();
        assert_eq!(ns(&r), vec![101, 197, 325]);
        assert!(!r[2].squarefree);
        assert!(family_members(FamilyKind::APlus4, 9, 7, false)
            .unwrap()
            .is_empty());
        let err = family_members(FamilyKind::AMinus4, 1, 3, false).unwrap_err();
        assert!(err.to_string().contains("a below family bound"));
    }

    #[test]
    fn members_have_n_5_mod_8() {
        for kind in FamilyKind::ALL {
            for r in family_members(kind, kind.min_a(), 99, false).unwrap() {
                assert_eq!(r.n % 8, 5, "{kind} a = {}", r.a);
                assert_eq!(r.predicted_e == 1, kind == FamilyKind::FourAPlus1);
            }
        }
    }

    #[test]
    fn pattern_examples() {
        let p = |v: &[u64]| ints(v);
        assert_eq!(
            expected_cf_pattern(FamilyKind::APlus4, 5).unwrap(),
            (p(&[5]), p(&[2, 1, 1, 2, 10]))
        );
        assert_eq!(
            expected_cf_pattern(FamilyKind::AMinus4, 5).unwrap(),
            (p(&[4]), p(&[1, 1, 2, 1, 1, 8]))
        );
        assert_eq!(
            expected_cf_pattern(FamilyKind::FourAPlus1, 5).unwrap(),
            (p(&[10]), p(&[20]))
        );
        assert!(expected_cf_pattern(FamilyKind::AMinus4, 3).is_err());
        assert!(expected_cf_pattern(FamilyKind::APlus4, 4).is_err());
    }

    #[test]
    fn verify_examples() {
        let row = verify_member(&FamilyRow::new(FamilyKind::APlus4, 5).unwrap(), CAP).unwrap();
        assert_eq!((row.n, row.observed_e), (29, Some(3)));
        assert_eq!(
            (row.cf_pattern_ok, row.equivalence_ok),
            (Some(true), Some(true))
        );

        let row = verify_member(&FamilyRow::new(FamilyKind::FourAPlus1, 5).unwrap(), CAP).unwrap();
        assert_eq!((row.n, row.observed_e), (101, Some(1)));

        let row = verify_member(&FamilyRow::new(FamilyKind::AMinus4, 9).unwrap(), CAP).unwrap();
        assert_eq!((row.n, row.observed_e), (77, Some(3)));
    }

    #[test]
    fn verify_reports_mismatch() {
        let mut row = FamilyRow::new(FamilyKind::APlus4, 5).unwrap();
        row.kind = FamilyKind::FourAPlus1;
        let err = verify_member(&row, CAP).unwrap_err();
        assert!(
            matches!(err, Error::Verification { a: 5, n: 29, .. }),
            "{err}"
        );
    }

    #[test]
    fn survey_examples() {
        let rows = survey(FamilyKind::APlus4, 3, 21, CAP).unwrap();
        assert_eq!(rows.len(), 10);
        let verified: Vec<_> = rows.iter().filter(|r| r.squarefree).collect();
        assert_eq!(verified.len(), 9);
        assert!(verified.iter().all(|r| r.observed_e == Some(3)));
        let skipped = rows.iter().find(|r| !r.squarefree).unwrap();
        assert_eq!((skipped.n, skipped.observed_e), (125, None));
        assert_eq!(skipped.cf_pattern_ok, Some(true));

        let rows = survey(FamilyKind::FourAPlus1, 5, 21, CAP).unwrap();
        assert!(rows
            .iter()
            .filter(|r| r.squarefree)
            .all(|r| r.observed_e == Some(1)));

        let rows = survey(FamilyKind::AMinus4, 5, 5, CAP).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].n, rows[0].observed_e), (21, Some(3)));
    }

    #[test]
    fn quarter_floor() {
        // a = 5 = 4·1 + 1 pairs with (√N − 1)/4; a = 3 = 4·1 − 1 with (√N + 1)/4.
        assert_eq!(quarter_floor_a2p4(5, -1).unwrap(), 1);
        assert_eq!(quarter_floor_a2p4(3, 1).unwrap(), 1);
        assert!(quarter_floor_a2p4(5, 1).is_err());
    }

    #[test]
    fn kind_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.to_string().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("a2+5".parse::<FamilyKind>().is_err());
    }
}
