//! Production matrices and A/Z sequences.
//!
//! For a proper array `L = (g, f)` every interior entry satisfies
//! `l[n+1][k+1] = sum_j a_j l[n][k+j]` and every column-0 entry
//! `l[n+1][0] = sum_j z_j l[n][j]`. The sequences come out two ways:
//!
//! * from the series identities `A(z) = z / fbar(z)` and
//!   `Z(z) = (1 - g_0 / g(fbar(z))) / fbar(z)`;
//! * from the production matrix `P = L^{-1} * (L without its first row)`,
//!   whose column 0 is `Z` and column 1 is `A`.
//!
//! [`extract_az`] computes both and refuses to answer if they disagree.

use num_traits::Zero;
use thiserror::Error;

use crate::pair::{RiordanError, RiordanPair, TriMatrix};
use crate::rational::Rational;
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductionError {
    #[error(transparent)]
    Riordan(#[from] RiordanError),
    #[error("Z sequence has z_0 = 0; the array has no Z-sequence in the usual sense")]
    DegenerateZ,
    #[error("{which} sequence routes disagree at term {index}")]
    RoutesDisagree { which: &'static str, index: usize },
    #[error("requested {requested} terms but only {available} are determined")]
    Terms { requested: usize, available: usize },
}

impl From<crate::series::SeriesError> for ProductionError {
    fn from(e: crate::series::SeriesError) -> Self {
        ProductionError::Riordan(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ProductionMatrix,
    SeriesFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqReport {
    pub a_seq: Vec<Rational>,
    pub z_seq: Vec<Rational>,
    pub terms: usize,
    pub method: Method,
}

/// `rows x rows` production matrix `L^{-1} * L_shifted`.
///
/// Entry `(i, j)` is zero for `j > i + 1`.
pub fn production_matrix(l: &RiordanPair, rows: usize) -> Result<Vec<Vec<Rational>>, ProductionError> {
    let expanded = l.expand(rows + 1)?;
    let inv = l.inverse()?.expand(rows)?;
    Ok((0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| {
                    (j.saturating_sub(1)..=i).fold(Rational::zero(), |acc, k| {
                        acc + inv.get(i, k) * expanded.get(k + 1, j)
                    })
                })
                .collect()
        })
        .collect())
}

/// Each route loses one coefficient (the division by `z`, or the extra row).
fn check_terms(l: &RiordanPair, terms: usize) -> Result<(), ProductionError> {
    let available = l.order().saturating_sub(1);
    if terms > available {
        return Err(ProductionError::Terms {
            requested: terms,
            available,
        });
    }
    Ok(())
}

/// A-sequence by `A(z) = z / fbar(z)`.
pub fn a_sequence_series(l: &RiordanPair, terms: usize) -> Result<Vec<Rational>, ProductionError> {
    if !l.is_proper() {
        return Err(RiordanError::Propriety.into());
    }
    check_terms(l, terms)?;
    let fbar = l.f().reverse()?;
    let a = TruncSeries::var(fbar.order()).divide(&fbar)?;
    Ok(a.coeffs()[..terms].to_vec())
}

/// Z-sequence by `Z(z) = (1 - g_0 / g(fbar(z))) / fbar(z)`.
pub fn z_sequence_series(l: &RiordanPair, terms: usize) -> Result<Vec<Rational>, ProductionError> {
    if !l.is_proper() {
        return Err(RiordanError::Propriety.into());
    }
    check_terms(l, terms)?;
    let fbar = l.f().reverse()?;
    let n = fbar.order().min(l.g().order());
    let g0 = l.g().coeff(0).clone();
    let ratio = TruncSeries::constant(g0, n).divide(&l.g().compose(&fbar)?)?;
    let z = (&TruncSeries::one(n) - &ratio).divide(&fbar)?;
    Ok(z.coeffs()[..terms].to_vec())
}

/// Both sequences from the production matrix.
pub fn az_from_production(l: &RiordanPair, terms: usize) -> Result<SeqReport, ProductionError> {
    check_terms(l, terms)?;
    let p = production_matrix(l, terms)?;
    let z_seq = p.iter().map(|row| row[0].clone()).collect();
    let a_seq = if terms >= 2 {
        p.iter().map(|row| row[1].clone()).collect()
    } else {
        // the single-row matrix cannot hold column 1
        a_sequence_series(l, terms)?
    };
    Ok(SeqReport {
        a_seq,
        z_seq,
        terms,
        method: Method::ProductionMatrix,
    })
}

fn compare(which: &'static str, a: &[Rational], b: &[Rational]) -> Result<(), ProductionError> {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(index) => Err(ProductionError::RoutesDisagree { which, index }),
        None => Ok(()),
    }
}

/// A-sequence only, cross-checked by both routes. Unlike [`extract_az`]
/// this succeeds for arrays whose Z-sequence vanishes.
pub fn a_sequence(l: &RiordanPair, terms: usize) -> Result<Vec<Rational>, ProductionError> {
    let series = a_sequence_series(l, terms)?;
    let matrix = az_from_production(l, terms)?;
    compare("A", &series, &matrix.a_seq)?;
    Ok(series)
}

/// A- and Z-sequences to `terms` terms.
///
/// The series route is returned; the production-matrix route must match it
/// term for term.
pub fn extract_az(l: &RiordanPair, terms: usize) -> Result<SeqReport, ProductionError> {
    let a_seq = a_sequence_series(l, terms)?;
    let z_seq = z_sequence_series(l, terms)?;
    let matrix = az_from_production(l, terms)?;
    compare("A", &a_seq, &matrix.a_seq)?;
    compare("Z", &z_seq, &matrix.z_seq)?;
    if z_seq.first().is_none_or(Zero::is_zero) {
        return Err(ProductionError::DegenerateZ);
    }
    Ok(SeqReport {
        a_seq,
        z_seq,
        terms,
        method: Method::SeriesFormula,
    })
}

/// Rebuilds every entry of the first `rows` rows from the previous row using
/// the truncated sequences in `report`.
///
/// Entries whose recurrence sum would need terms beyond the report are
/// skipped. Returns the coordinates of the first mismatch, if any.
pub fn recurrence_mismatch(
    matrix: &TriMatrix,
    report: &SeqReport,
) -> Option<(usize, usize)> {
    let a = &report.a_seq;
    let z = &report.z_seq;
    for n in 0..matrix.num_rows().saturating_sub(1) {
        let prev = matrix.row(n);
        // column 0 uses z_0 .. z_n
        if n < z.len() {
            let sum = (0..=n).fold(Rational::zero(), |acc, j| acc + &z[j] * &prev[j]);
            if sum != matrix.get(n + 1, 0) {
                return Some((n + 1, 0));
            }
        }
        // entry (n+1, k+1) uses a_0 .. a_{n-k}
        for k in 0..=n {
            if n - k >= a.len() {
                continue;
            }
            let sum = (0..=n - k).fold(Rational::zero(), |acc, j| acc + &a[j] * &prev[k + j]);
            if sum != matrix.get(n + 1, k + 1) {
                return Some((n + 1, k + 1));
            }
        }
    }
    None
}

/// `true` iff the A/Z recurrences reproduce every complete-sum entry of the
/// first `rows` rows of `l`.
pub fn recurrence_check(l: &RiordanPair, report: &SeqReport, rows: usize) -> Result<bool, ProductionError> {
    let matrix = l.expand(rows)?;
    Ok(recurrence_mismatch(&matrix, report).is_none())
}
