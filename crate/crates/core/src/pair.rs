//! Riordan pairs `(g, f)` and their expansions.
//!
//! Column `k` of the array of `(g, f)` has generating function `g * f^k`.
//! A pair is *proper* when `f` has a nonzero linear term; proper pairs form
//! the Riordan group under `(g, f) * (h, l) = (g * h(f), l(f))` with identity
//! `(1, z)`. Pairs whose `f` starts at `z^2` or later (vertically stretched
//! arrays) can still be expanded and applied, but take no part in the group
//! operations.

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;
use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RiordanError {
    #[error("g must have a nonzero constant term")]
    ZeroG0,
    #[error("f must have a zero constant term")]
    NonzeroF0,
    #[error("operation requires a proper pair (f has a nonzero linear term)")]
    Propriety,
    #[error("requested {requested} rows but only {available} coefficients are known")]
    Order { requested: usize, available: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Lower-triangular array; row `n` holds entries `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMatrix {
    rows: Vec<Vec<Rational>>,
}

impl TriMatrix {
    /// Panics unless row `n` has exactly `n + 1` entries.
    pub fn new(rows: Vec<Vec<Rational>>) -> Self {
        for (n, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n + 1, "row {n} must hold {} entries", n + 1);
        }
        Self { rows }
    }

    /// Accepts ragged input, checking the triangular shape.
    pub fn try_new(rows: Vec<Vec<Rational>>) -> Option<Self> {
        rows.iter()
            .enumerate()
            .all(|(n, row)| row.len() == n + 1)
            .then_some(Self { rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// Entry `(n, k)`; zero above the diagonal.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        if k > n {
            Rational::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn column(&self, k: usize) -> Vec<Rational> {
        (k..self.num_rows()).map(|n| self.get(n, k)).collect()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, x| acc + x))
            .collect()
    }

    /// First `rows` rows.
    pub fn truncate(&self, rows: usize) -> Self {
        Self::new(self.rows[..rows.min(self.num_rows())].to_vec())
    }

    /// Ordinary matrix product over the common leading triangle.
    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.num_rows().min(other.num_rows());
        Self::new(
            (0..n)
                .map(|i| {
                    (0..=i)
                        .map(|k| {
                            (k..=i).fold(Rational::zero(), |acc, j| {
                                acc + &self.rows[i][j] * &other.rows[j][k]
                            })
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Product with a column vector; uses the first `min(rows, v.len())` rows.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.num_rows().min(v.len());
        (0..n)
            .map(|i| {
                (0..=i).fold(Rational::zero(), |acc, k| acc + &self.rows[i][k] * &v[k])
            })
            .collect()
    }
}

/// Outcome of an involution or pseudo-involution test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionCheck {
    /// Order the identities were requested to hold to.
    pub order: usize,
    /// Coefficients actually known for the pair.
    pub available: usize,
    /// Lowest coefficient index at which either identity fails.
    pub first_failure: Option<usize>,
}

impl InvolutionCheck {
    pub fn holds(&self) -> bool {
        self.available >= self.order && self.first_failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiordanPair {
    g: TruncSeries,
    f: TruncSeries,
}

impl RiordanPair {
    /// Validates `g_0 != 0` and `f_0 = 0`; stretched pairs are accepted.
    pub fn new(g: TruncSeries, f: TruncSeries) -> Result<Self, RiordanError> {
        if g.order() == 0 || g.coeff(0).is_zero() {
            return Err(RiordanError::ZeroG0);
        }
        if f.order() == 0 || !f.coeff(0).is_zero() {
            return Err(RiordanError::NonzeroF0);
        }
        Ok(Self { g, f })
    }

    /// Like [`RiordanPair::new`] but additionally requires propriety.
    pub fn proper(g: TruncSeries, f: TruncSeries) -> Result<Self, RiordanError> {
        let pair = Self::new(g, f)?;
        if !pair.is_proper() {
            return Err(RiordanError::Propriety);
        }
        Ok(pair)
    }

    pub fn identity(order: usize) -> Self {
        Self {
            g: TruncSeries::one(order),
            f: TruncSeries::var(order),
        }
    }

    /// `(1/(1-z), z/(1-z))`.
    pub fn pascal(order: usize) -> Self {
        let one_minus = TruncSeries::poly(&[1, -1], order);
        Self {
            g: TruncSeries::one(order).divide(&one_minus).unwrap(),
            f: TruncSeries::var(order).divide(&one_minus).unwrap(),
        }
    }

    /// `M = (1, -z)`.
    pub fn sign_flip(order: usize) -> Self {
        Self {
            g: TruncSeries::one(order),
            f: -TruncSeries::var(order),
        }
    }

    pub fn g(&self) -> &TruncSeries {
        &self.g
    }

    pub fn f(&self) -> &TruncSeries {
        &self.f
    }

    pub fn into_parts(self) -> (TruncSeries, TruncSeries) {
        (self.g, self.f)
    }

    pub fn is_proper(&self) -> bool {
        self.f.order() >= 2 && !self.f.coeff(1).is_zero()
    }

    /// `f` vanishes to its order; the expansion is concentrated in column 0.
    pub fn is_f_zero(&self) -> bool {
        self.f.is_zero()
    }

    /// Number of coefficients known for both components.
    pub fn order(&self) -> usize {
        self.g.order().min(self.f.order())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            g: self.g.truncate(order),
            f: self.f.truncate(order),
        }
    }

    /// Both components agree on their first `order` coefficients.
    pub fn agrees_to(&self, other: &Self, order: usize) -> bool {
        self.g.agrees_to(&other.g, order) && self.f.agrees_to(&other.f, order)
    }

    fn require_proper(&self) -> Result<(), RiordanError> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(RiordanError::Propriety)
        }
    }

    /// First `rows` rows of the array: entry `(n, k)` is `[z^n] g f^k`.
    pub fn expand(&self, rows: usize) -> Result<TriMatrix, RiordanError> {
        let available = self.order();
        if rows > available {
            return Err(RiordanError::Order {
                requested: rows,
                available,
            });
        }
        let f = self.f.truncate(rows);
        let mut column = self.g.truncate(rows);
        let mut out: Vec<Vec<Rational>> = (0..rows).map(|n| Vec::with_capacity(n + 1)).collect();
        for k in 0..rows {
            for (n, row) in out.iter_mut().enumerate().skip(k) {
                row.push(column.coeff(n).clone());
            }
            if k + 1 < rows {
                column = &column * &f;
            }
        }
        Ok(TriMatrix::new(out))
    }

    /// Group product `(g, f) * (h, l) = (g * h(f), l(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self, RiordanError> {
        self.require_proper()?;
        other.require_proper()?;
        let g = &self.g * &other.g.compose(&self.f)?;
        let f = other.f.compose(&self.f)?;
        Ok(Self { g, f })
    }

    /// Group inverse `(1 / g(fbar), fbar)` with `fbar` the compositional
    /// inverse of `f`.
    pub fn inverse(&self) -> Result<Self, RiordanError> {
        self.require_proper()?;
        let fbar = self.f.reverse()?;
        let g = self.g.compose(&fbar)?.recip()?;
        Ok(Self { g, f: fbar })
    }

    /// Action on a generating function: `g * h(f)`.
    pub fn apply(&self, h: &TruncSeries) -> Result<TruncSeries, RiordanError> {
        Ok(&self.g * &h.compose(&self.f)?)
    }

    /// `M L M` with `M = (1, -z)`, i.e. `(g(-z), -f(-z))`.
    pub fn mam_conjugate(&self) -> Self {
        Self {
            g: self.g.negate_arg(),
            f: -self.f.negate_arg(),
        }
    }

    /// Tests `g * g(F) = 1` and `F(F(z)) = z` modulo `z^order` where `F = f`.
    pub fn check_involution(&self, order: usize) -> InvolutionCheck {
        check_order_two(&self.g, &self.f, order, self.order())
    }

    pub fn is_involution(&self, order: usize) -> bool {
        self.check_involution(order).holds()
    }

    /// Tests `g * g(-f) = 1` and `-f(-f(z)) = z` modulo `z^order`, i.e. that
    /// `(g, f) * (1, -z)` is an involution.
    pub fn check_pseudo_involution(&self, order: usize) -> InvolutionCheck {
        check_order_two(&self.g, &-&self.f, order, self.order())
    }

    pub fn is_pseudo_involution(&self, order: usize) -> bool {
        self.check_pseudo_involution(order).holds()
    }
}

fn check_order_two(
    g: &TruncSeries,
    big_f: &TruncSeries,
    order: usize,
    available: usize,
) -> InvolutionCheck {
    let n = order.min(available);
    let g = g.truncate(n);
    let big_f = big_f.truncate(n);
    let first_failure = match (g.compose(&big_f), big_f.compose(&big_f)) {
        (Ok(gg), Ok(ff)) => {
            let left = (&g * &gg).first_difference(&TruncSeries::one(n), n);
            let right = ff.first_difference(&TruncSeries::var(n), n);
            match (left, right) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        }
        _ => Some(0),
    };
    InvolutionCheck {
        order,
        available,
        first_failure,
    }
}

/// The classical subgroups with a one-series parametrisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subgroup {
    /// `(g, z)`
    Appell,
    /// `(f/z, f)`
    Bell,
    /// `(1, f)`
    Associated,
    /// `(f', f)`
    Derivative,
    /// `(z f'/f, f)`
    HittingTime,
}

impl Subgroup {
    pub const ALL: [Subgroup; 5] = [
        Subgroup::Appell,
        Subgroup::Bell,
        Subgroup::Associated,
        Subgroup::Derivative,
        Subgroup::HittingTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subgroup::Appell => "appell",
            Subgroup::Bell => "bell",
            Subgroup::Associated => "associated",
            Subgroup::Derivative => "derivative",
            Subgroup::HittingTime => "hitting-time",
        }
    }
}

/// Builds the subgroup member determined by `seed`: `g` for Appell, `f` for
/// the others.
pub fn subgroup_element(kind: Subgroup, seed: &TruncSeries) -> Result<RiordanPair, RiordanError> {
    if kind == Subgroup::Appell {
        let z = TruncSeries::var(seed.order());
        return RiordanPair::proper(seed.clone(), z);
    }
    let f = seed;
    if f.order() < 2 || !f.coeff(0).is_zero() || f.coeff(1).is_zero() {
        return Err(RiordanError::Propriety);
    }
    let n = f.order();
    let f_over_z = f.divide(&TruncSeries::var(n))?;
    let g = match kind {
        Subgroup::Bell => f_over_z,
        Subgroup::Associated => TruncSeries::one(n),
        Subgroup::Derivative => f.derivative(),
        // z f'/f, written as f' / (f/z) so only one coefficient is lost
        Subgroup::HittingTime => f.derivative().divide(&f_over_z)?,
        Subgroup::Appell => unreachable!(),
    };
    RiordanPair::proper(g, f.clone())
}
