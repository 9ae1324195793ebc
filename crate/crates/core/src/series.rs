//! Truncated formal power series with exact rational coefficients.
//!
//! A `TruncSeries` of order `n` stores the coefficients of `z^0 .. z^(n-1)`;
//! everything from `z^n` on is unknown. Binary operations on series of
//! different orders produce the smaller order, so a result never claims more
//! precision than its inputs carry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, rat, rational_sqrt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series that is zero to order {order}")]
    DivisionByZero { order: usize },
    #[error("divisor valuation {divisor} exceeds dividend valuation {dividend}")]
    Valuation { dividend: usize, divisor: usize },
    #[error("composition requires an inner series with zero constant term")]
    Composition,
    #[error("reversion requires zero constant term and nonzero linear coefficient")]
    Reversion,
    #[error("square root requires a nonzero rational square as constant term, found {0}")]
    Sqrt(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    /// Series whose order is the number of given coefficients.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Polynomial with the given integer coefficients, padded with zeros to `order`.
    pub fn poly(coeffs: &[i64], order: usize) -> Self {
        let mut out = vec![Rational::zero(); order];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            *slot = rat(c);
        }
        Self::new(out)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::zero(); order])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c * z^power`, truncated to `order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power < order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Number of known coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^i`. Panics if `i >= order`.
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// Index of the first nonzero coefficient, `None` if zero to its order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Keeps the first `min(order, self.order())` coefficients.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self::new(self.coeffs[..n].to_vec())
    }

    /// True when both series agree on their first `order` coefficients and
    /// both actually know that many.
    pub fn agrees_to(&self, other: &Self, order: usize) -> bool {
        self.order() >= order
            && other.order() >= order
            && self.coeffs[..order] == other.coeffs[..order]
    }

    /// First index below `order` where the two series differ.
    pub fn first_difference(&self, other: &Self, order: usize) -> Option<usize> {
        let n = order.min(self.order()).min(other.order());
        (0..n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `s(-z)`.
    pub fn negate_arg(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Multiplication by `z^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        if self.coeffs[0].is_zero() {
            return match self.valuation() {
                None => Err(SeriesError::DivisionByZero { order: n }),
                Some(v) => Err(SeriesError::Valuation {
                    dividend: 0,
                    divisor: v,
                }),
            };
        }
        Ok(Self::new(long_divide(&Self::one(n).coeffs, &self.coeffs, n)))
    }

    /// Exact quotient `self / divisor`.
    ///
    /// A common factor `z^v` (with `v` the divisor's valuation) is cancelled
    /// first, which lowers the result order by `v`.
    pub fn divide(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let v = divisor.valuation().ok_or(SeriesError::DivisionByZero {
            order: divisor.order(),
        })?;
        let dividend_val = self.valuation().unwrap_or(self.order());
        if dividend_val < v {
            return Err(SeriesError::Valuation {
                dividend: dividend_val,
                divisor: v,
            });
        }
        let n = self.order().min(divisor.order()) - v;
        let num = &self.coeffs[v..v + n];
        let den = &divisor.coeffs[v..v + n];
        Ok(Self::new(long_divide(num, den, n)))
    }

    /// `self(inner(z))` by Horner evaluation.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if inner.order() > 0 && !inner.coeffs[0].is_zero() {
            return Err(SeriesError::Composition);
        }
        let n = self.order().min(inner.order());
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n - 1].clone(), n);
        for c in self.coeffs[..n - 1].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse, computed by Newton iteration with precision
    /// doubling: `y <- y - (f(y) - z) / f'(y)`.
    pub fn reverse(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n < 2 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(SeriesError::Reversion);
        }
        let deriv = self.derivative();
        let mut y = Self::monomial(self.coeffs[1].recip(), 1, 2);
        let mut prec = 2;
        while prec < n {
            let old = prec;
            prec = (2 * prec).min(n);
            let y_p = y.pad(prec);
            let residual = &self.truncate(prec).compose(&y_p)? - &Self::var(prec);
            // residual vanishes below `old`, so f'(y) is only needed to prec - old
            let slope = deriv.truncate(prec - old).compose(&y_p.truncate(prec - old))?;
            let step = mul_to(&residual.coeffs, &slope.recip()?.coeffs, prec);
            y = &y_p - &Self::new(step);
        }
        Ok(y.pad(n))
    }

    /// Square root with positive constant term.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let c0 = &self.coeffs[0];
        let r0 = match rational_sqrt(c0) {
            Some(r) if !r.is_zero() => r,
            _ => return Err(SeriesError::Sqrt(format_rational(c0))),
        };
        let two_r0 = &r0 * rat(2);
        let mut r = Vec::with_capacity(n);
        r.push(r0);
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &r[i] * &r[k - i];
            }
            r.push(acc / &two_r0);
        }
        Ok(Self::new(r))
    }

    /// Termwise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Zero-extends to at least `order` coefficients. Only sound when the
    /// caller knows the missing coefficients are zero.
    fn pad(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < order {
            coeffs.resize(order, Rational::zero());
        }
        Self::new(coeffs)
    }
}

/// First `n` coefficients of `num / den`, `den[0] != 0`.
fn long_divide(num: &[Rational], den: &[Rational], n: usize) -> Vec<Rational> {
    let lead = &den[0];
    let mut q: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num[k].clone();
        for i in 1..=k.min(den.len() - 1) {
            if !den[i].is_zero() {
                acc -= &den[i] * &q[k - i];
            }
        }
        q.push(acc / lead);
    }
    q
}

/// Cauchy product to `n` terms, treating coefficients past either slice as zero.
fn mul_to(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

impl<'a> Add<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<'a> Sub<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl<'a> Mul<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries::new(mul_to(&self.coeffs, &rhs.coeffs, n))
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $method(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        -&self
    }
}

impl From<Vec<Rational>> for TruncSeries {
    fn from(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = format_rational(c);
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", s),
            };
            if wrote {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag == "1" => {}
                _ => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn fib_poly(order: usize) -> TruncSeries {
        TruncSeries::poly(&[1, -1, -1], order)
    }

    /// Fibonacci numbers by their recurrence.
    fn fib_numbers(n: usize) -> Vec<i64> {
        let mut v = vec![1i64, 1];
        while v.len() < n {
            let k = v.len();
            v.push(v[k - 1] + v[k - 2]);
        }
        v.truncate(n);
        v
    }

    fn fib(order: usize) -> TruncSeries {
        TruncSeries::one(order).divide(&fib_poly(order)).unwrap()
    }

    #[test]
    fn add_examples() {
        let a = TruncSeries::from_ints(&[1, 1, 0]);
        let b = TruncSeries::from_ints(&[1, -1, 0]);
        assert_eq!(&a + &b, TruncSeries::from_ints(&[2, 0, 0]));
        assert_eq!(&fib(8) + &TruncSeries::zero(8), fib(8));

        // (1 + z^2) F(z): oracle is F_n + F_{n-2} from the recurrence
        let f = fib_numbers(6);
        let expected: Vec<i64> = (0..6)
            .map(|n| f[n] + if n >= 2 { f[n - 2] } else { 0 })
            .collect();
        assert_eq!(expected, vec![1, 1, 3, 4, 7, 11]);
        let sum = &fib(6) + &(&TruncSeries::poly(&[0, 0, 1], 6) * &fib(6));
        assert_eq!(sum, TruncSeries::from_ints(&expected));
    }

    #[test]
    fn mixed_orders_truncate_to_min() {
        let a = TruncSeries::from_ints(&[1, 2, 3, 4]);
        let b = TruncSeries::from_ints(&[1, 1]);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a * &b).order(), 2);
    }

    #[test]
    fn mul_examples() {
        let a = TruncSeries::from_ints(&[1, 1, 0, 0]);
        let b = TruncSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(&a * &b, TruncSeries::from_ints(&[1, 0, -1, 0]));
        assert_eq!(&fib(10) * &fib_poly(10), TruncSeries::one(10));
        assert_eq!(
            &fib(6) * &fib(6),
            TruncSeries::from_ints(&[1, 2, 5, 10, 20, 38])
        );
    }

    #[test]
    fn div_examples() {
        assert_eq!(fib(7), TruncSeries::from_ints(&[1, 1, 2, 3, 5, 8, 13]));
        let lucas = TruncSeries::poly(&[1, 0, 1], 7).divide(&fib_poly(7)).unwrap();
        assert_eq!(lucas, TruncSeries::from_ints(&[1, 1, 3, 4, 7, 11, 18]));
        let q = TruncSeries::poly(&[0, 0, 1], 4)
            .divide(&TruncSeries::var(4))
            .unwrap();
        assert_eq!(q, TruncSeries::from_ints(&[0, 1, 0]));
    }

    #[test]
    fn div_errors() {
        let z = TruncSeries::var(4);
        assert_eq!(
            TruncSeries::one(4).divide(&TruncSeries::zero(4)),
            Err(SeriesError::DivisionByZero { order: 4 })
        );
        assert_eq!(
            TruncSeries::one(4).divide(&z),
            Err(SeriesError::Valuation {
                dividend: 0,
                divisor: 1
            })
        );
        assert!(z.recip().is_err());
    }

    #[test]
    fn compose_examples() {
        let g = fib(8);
        assert_eq!(g.compose(&TruncSeries::var(8)).unwrap(), g);

        let one_minus = TruncSeries::poly(&[1, -1], 10);
        let one_plus = TruncSeries::poly(&[1, 1], 10);
        let z = TruncSeries::var(10);
        let outer = z.divide(&one_minus).unwrap();
        let inner = z.divide(&one_plus).unwrap();
        assert_eq!(outer.compose(&inner).unwrap(), z);

        let geo = TruncSeries::one(10).divide(&one_minus).unwrap();
        // (1 - z) / (1 - 2z)
        let powers: Vec<i64> = (0..10).map(|n| if n == 0 { 1 } else { 1 << (n - 1) }).collect();
        assert_eq!(
            geo.compose(&outer).unwrap(),
            TruncSeries::from_ints(&powers)
        );

        assert_eq!(
            g.compose(&TruncSeries::one(8)),
            Err(SeriesError::Composition)
        );
    }

    #[test]
    fn reverse_examples() {
        let z = TruncSeries::var(12);
        assert_eq!(z.reverse().unwrap(), z);

        let f = z.divide(&TruncSeries::poly(&[1, -1], 12)).unwrap();
        let expected = z.divide(&TruncSeries::poly(&[1, 1], 12)).unwrap();
        assert_eq!(f.reverse().unwrap(), expected);

        assert_eq!(TruncSeries::one(4).reverse(), Err(SeriesError::Reversion));
        assert_eq!(
            TruncSeries::poly(&[0, 0, 1], 4).reverse(),
            Err(SeriesError::Reversion)
        );
    }

    #[test]
    fn reverse_lucas_shift_matches_closed_form() {
        let n = 16;
        // G = (z + 2z^2)/(1 - z - z^2)
        let g = TruncSeries::poly(&[0, 1, 2], n).divide(&fib_poly(n)).unwrap();
        let rev = g.reverse().unwrap();
        // (-(1+z) + sqrt(5z^2 + 10z + 1)) / (2(2+z))
        let root = TruncSeries::poly(&[1, 10, 5], n).sqrt().unwrap();
        let closed = (&root - &TruncSeries::poly(&[1, 1], n))
            .divide(&TruncSeries::poly(&[4, 2], n))
            .unwrap();
        assert_eq!(rev, closed);
        assert_eq!(g.compose(&rev).unwrap(), TruncSeries::var(n));
        assert_eq!(rev.compose(&g).unwrap(), TruncSeries::var(n));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(
            TruncSeries::one(5).sqrt().unwrap(),
            TruncSeries::one(5)
        );
        assert_eq!(
            TruncSeries::poly(&[1, -2, 1], 6).sqrt().unwrap(),
            TruncSeries::poly(&[1, -1], 6)
        );
        let n = 8;
        let root = TruncSeries::poly(&[1, -6, -1, 10, 5], n).sqrt().unwrap();
        let f = (&fib_poly(n) - &root)
            .divide(&TruncSeries::poly(&[2, -2, -2], n))
            .unwrap();
        assert_eq!(f, TruncSeries::from_ints(&[0, 1, 3, 9, 32, 126, 538, 2429]));

        let quarter = TruncSeries::constant(ratio(9, 4), 3).sqrt().unwrap();
        assert_eq!(quarter.coeff(0), &ratio(3, 2));
        assert!(TruncSeries::poly(&[2, 1], 3).sqrt().is_err());
        assert!(TruncSeries::poly(&[0, 0, 1], 3).sqrt().is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(TruncSeries::var(3).derivative(), TruncSeries::from_ints(&[1, 0]));
        assert_eq!(
            TruncSeries::from_ints(&[0, 1, 3, 9, 32]).derivative(),
            TruncSeries::from_ints(&[1, 6, 27, 128])
        );
        assert!(TruncSeries::from_ints(&[5, 0, 0]).derivative().is_zero());
    }

    #[test]
    fn display() {
        let s = TruncSeries::new(vec![rat(1), rat(-1), ratio(1, 2), rat(0)]);
        assert_eq!(s.to_string(), "1 - z + 1/2*z^2 + O(z^4)");
        assert_eq!(TruncSeries::zero(2).to_string(), "0 + O(z^2)");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
    }

    fn series(order: usize) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec(small_rational(), order).prop_map(TruncSeries::new)
    }

    fn int_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec(-5i64..=5, order).prop_map(|v| TruncSeries::from_ints(&v))
    }

    /// Zero constant term, nonzero linear term.
    fn admissible(order: usize) -> impl Strategy<Value = TruncSeries> {
        (series(order), prop_oneof![-3i64..=-1, 1i64..=3]).prop_map(|(mut s, lin)| {
            s.coeffs[0] = Rational::zero();
            s.coeffs[1] = rat(lin);
            s
        })
    }

    fn no_constant(order: usize) -> impl Strategy<Value = TruncSeries> {
        series(order).prop_map(|mut s| {
            s.coeffs[0] = Rational::zero();
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series(12), b in series(12), c in series(12)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn integer_closure(a in int_series(16), b in int_series(16)) {
            let sum = &a + &b;
            let prod = &a * &b;
            for c in sum.coeffs().iter().chain(prod.coeffs()) {
                prop_assert!(c.is_integer());
            }
        }

        #[test]
        fn div_round_trip(a in series(12), b in series(12), shift in 0usize..3) {
            let b = b.shift_up(shift).truncate(12);
            prop_assume!(b.valuation() == Some(shift));
            let a = a.shift_up(shift).truncate(12);
            let q = a.divide(&b).unwrap();
            prop_assert_eq!(q.order(), 12 - shift);
            // (a / b) * b == a once the cancelled z^shift is restored
            let back = (&q * &b.coeffs()[shift..].to_vec().into()).shift_up(shift);
            prop_assert!(back.agrees_to(&a, q.order() + shift));
        }

        #[test]
        fn compose_associative(a in series(10), b in no_constant(10), c in no_constant(10)) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn reverse_round_trip(f in admissible(16)) {
            let r = f.reverse().unwrap();
            let z = TruncSeries::var(16);
            prop_assert_eq!(f.compose(&r).unwrap(), z.clone());
            prop_assert_eq!(r.compose(&f).unwrap(), z);
        }

        #[test]
        fn sqrt_squares_back(t in series(14), lead in 1i64..=4) {
            let mut t = t;
            t.coeffs[0] = rat(lead);
            let s = &t * &t;
            let r = s.sqrt().unwrap();
            prop_assert_eq!(&r * &r, s);
            prop_assert_eq!(r, t);
        }
    }
}
