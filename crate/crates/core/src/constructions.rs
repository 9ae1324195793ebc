//! Constructions of stochastic arrays and pseudo-involutions, plus the named
//! generating functions they start from.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::pair::{subgroup_element, RiordanError, RiordanPair, Subgroup};
use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("-f does not have compositional order 2 (first failure at z^{first_failure})")]
    OrderTwo { first_failure: usize },
    #[error(transparent)]
    Riordan(#[from] RiordanError),
}

impl From<SeriesError> for ConstructionError {
    fn from(e: SeriesError) -> Self {
        ConstructionError::Riordan(e.into())
    }
}

/// A generating function addressable by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGf {
    pub name: &'static str,
    pub series: TruncSeries,
    pub description: &'static str,
}

/// `(name, description)` for every registered generating function.
pub const NAMED_GFS: &[(&str, &str)] = &[
    ("fib", "Fibonacci numbers, 1/(1-z-z^2)"),
    ("lucas", "modified Lucas numbers, (1+z^2)/(1-z-z^2)"),
    ("lucas1", "modified Lucas numbers without the leading 1, (1+2z)/(1-z-z^2)"),
    ("cfib2", "convolved Fibonacci numbers, 1/(1-z-z^2)^2"),
    ("cfib3", "convolved Fibonacci numbers, 1/(1-z-z^2)^3"),
    ("catalan", "Catalan numbers, (1-sqrt(1-4z))/(2z)"),
    (
        "fibf",
        "order-two partner of fib, (1-z-z^2-sqrt(5z^4+10z^3-z^2-6z+1))/(2-2z-2z^2)",
    ),
    (
        "lucasf",
        "pseudo-involution partner of lucas, (1-z-z^2-sqrt(z^4+10z^3-13z^2-10z+1))/(4-2z)",
    ),
];

fn fib_den(order: usize) -> TruncSeries {
    TruncSeries::poly(&[1, -1, -1], order)
}

/// `1/(1-z-z^2)`.
pub fn fib(order: usize) -> TruncSeries {
    TruncSeries::one(order).divide(&fib_den(order)).unwrap()
}

/// `(1+z^2)/(1-z-z^2)`.
pub fn lucas(order: usize) -> TruncSeries {
    TruncSeries::poly(&[1, 0, 1], order)
        .divide(&fib_den(order))
        .unwrap()
}

/// `(1/(1-z-z^2))^n`.
pub fn convolved_fib(n: u64, order: usize) -> TruncSeries {
    fib(order).pow(n)
}

/// The `f` paired with `fib` by [`pseudo_from_g`], in closed form.
pub fn fib_f(order: usize) -> TruncSeries {
    let root = TruncSeries::poly(&[1, -6, -1, 10, 5], order).sqrt().unwrap();
    (&fib_den(order) - &root)
        .divide(&TruncSeries::poly(&[2, -2, -2], order))
        .unwrap()
}

/// The `f` paired with `lucas` by [`pseudo_from_g`], in closed form.
pub fn lucas_f(order: usize) -> TruncSeries {
    let root = TruncSeries::poly(&[1, -10, -13, 10, 1], order).sqrt().unwrap();
    (&fib_den(order) - &root)
        .divide(&TruncSeries::poly(&[4, -2], order))
        .unwrap()
}

/// Looks up a registered generating function at the given order.
pub fn named_gf(name: &str, order: usize) -> Option<NamedGf> {
    let (name, description) = *NAMED_GFS.iter().find(|(n, _)| *n == name)?;
    let series = match name {
        "fib" => fib(order),
        "lucas" => lucas(order),
        "lucas1" => TruncSeries::poly(&[1, 2], order)
            .divide(&fib_den(order))
            .unwrap(),
        "cfib2" => convolved_fib(2, order),
        "cfib3" => convolved_fib(3, order),
        "catalan" => {
            // one extra coefficient is consumed by the division by z
            let n = order + 1;
            let root = TruncSeries::poly(&[1, -4], n).sqrt().unwrap();
            (&TruncSeries::one(n) - &root)
                .divide(&TruncSeries::poly(&[0, 2], n))
                .unwrap()
        }
        "fibf" => fib_f(order),
        "lucasf" => lucas_f(order),
        _ => return None,
    };
    Some(NamedGf {
        name,
        series,
        description,
    })
}

/// Stochastic array `(g, 1 - (1 - z) g)`: every row sums to one.
///
/// The result is a Riordan array only when `g_0 = 1`; it is stretched when
/// additionally `g_1 = 1`.
pub fn stochastic_from_g(g: &TruncSeries) -> Result<RiordanPair, ConstructionError> {
    if g.order() == 0 || g.coeff(0).is_zero() {
        return Err(RiordanError::ZeroG0.into());
    }
    let n = g.order();
    let f = &TruncSeries::one(n) - &(&TruncSeries::poly(&[1, -1], n) * g);
    Ok(RiordanPair::new(g.clone(), f)?)
}

/// The unique `f` making `(g, f)` a pseudo-involution when `g_0 = 1` and
/// `g_1 != 0`: with `G = g - 1`, `f = -Gbar(-G / g)`.
pub fn pseudo_from_g(g: &TruncSeries) -> Result<RiordanPair, ConstructionError> {
    if g.order() < 2 || !g.coeff(0).is_one() {
        return Err(ConstructionError::Precondition(
            "g must have constant term 1".into(),
        ));
    }
    if g.coeff(1).is_zero() {
        return Err(ConstructionError::Precondition(
            "g must have a nonzero linear term".into(),
        ));
    }
    let big_g = g - &TruncSeries::one(g.order());
    let g_bar = big_g.reverse()?;
    let inner = (-&big_g).divide(g)?;
    let f = -g_bar.compose(&inner)?;
    Ok(RiordanPair::proper(g.clone(), f)?)
}

fn require_pseudo(l: &RiordanPair, what: &str) -> Result<(), ConstructionError> {
    let check = l.check_pseudo_involution(l.order());
    if check.holds() {
        Ok(())
    } else {
        Err(ConstructionError::Precondition(format!(
            "{what} is not a pseudo-involution (fails at z^{})",
            check.first_failure.unwrap_or(l.order())
        )))
    }
}

/// `(g^n, f)` for a pseudo-involution `(g, f)`.
pub fn power_pseudo(l: &RiordanPair, n: u64) -> Result<RiordanPair, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::Precondition("power must be positive".into()));
    }
    require_pseudo(l, "input pair")?;
    Ok(RiordanPair::proper(l.g().pow(n), l.f().clone())?)
}

/// The members of [`family_from_f`], in order.
pub const FAMILY: [Subgroup; 4] = [
    Subgroup::Associated,
    Subgroup::Bell,
    Subgroup::Derivative,
    Subgroup::HittingTime,
];

/// `(1, f)`, `(f/z, f)`, `(f', f)` and `(z f'/f, f)` for an `f` whose
/// negative has compositional order two.
pub fn family_from_f(f: &TruncSeries) -> Result<[RiordanPair; 4], ConstructionError> {
    if f.order() < 2 || !f.coeff(0).is_zero() || f.coeff(1).is_zero() {
        return Err(RiordanError::Propriety.into());
    }
    let neg = -f;
    let twice = neg.compose(&neg)?;
    if let Some(i) = twice.first_difference(&TruncSeries::var(f.order()), f.order()) {
        return Err(ConstructionError::OrderTwo { first_failure: i });
    }
    let [a, b, c, d] = FAMILY;
    Ok([
        subgroup_element(a, f)?,
        subgroup_element(b, f)?,
        subgroup_element(c, f)?,
        subgroup_element(d, f)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GOp {
    Mul,
    Inv,
}

/// Multiplies or inverts `g`s that share a pseudo-involution partner `f`.
/// `g2` is ignored for [`GOp::Inv`].
pub fn g_group_ops(
    g1: &TruncSeries,
    g2: &TruncSeries,
    f: &TruncSeries,
    op: GOp,
) -> Result<RiordanPair, ConstructionError> {
    let first = RiordanPair::proper(g1.clone(), f.clone())?;
    require_pseudo(&first, "(g1, f)")?;
    let g = match op {
        GOp::Mul => {
            let second = RiordanPair::proper(g2.clone(), f.clone())?;
            require_pseudo(&second, "(g2, f)")?;
            g1 * g2
        }
        GOp::Inv => g1.recip()?,
    };
    Ok(RiordanPair::proper(g, f.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};

    fn rows(l: &RiordanPair, n: usize) -> Vec<Vec<Rational>> {
        l.expand(n).unwrap().rows().to_vec()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn named_registry() {
        assert_eq!(named_gf("fib", 7).unwrap().series, TruncSeries::from_ints(&[1, 1, 2, 3, 5, 8, 13]));
        assert_eq!(named_gf("lucas", 7).unwrap().series, TruncSeries::from_ints(&[1, 1, 3, 4, 7, 11, 18]));
        assert_eq!(
            named_gf("cfib2", 9).unwrap().series,
            TruncSeries::from_ints(&[1, 2, 5, 10, 20, 38, 71, 130, 235])
        );
        assert_eq!(
            named_gf("catalan", 6).unwrap().series,
            TruncSeries::from_ints(&[1, 1, 2, 5, 14, 42])
        );
        for (name, _) in NAMED_GFS {
            assert_eq!(named_gf(name, 10).unwrap().series.order(), 10, "{name}");
        }
        assert!(named_gf("nope", 4).is_none());
    }

    #[test]
    fn stochastic_lucas_array() {
        let l = stochastic_from_g(&lucas(12)).unwrap();
        assert!(!l.is_proper());
        let expected_f = TruncSeries::poly(&[0, 0, -2, 1], 12).divide(&fib_den(12)).unwrap();
        assert_eq!(l.f(), &expected_f);
        assert_eq!(rows(&l, 5)[4], ints(&[7, -10, 4, 0, 0]));
        assert!(l.expand(12).unwrap().row_sums().iter().all(One::is_one));
    }

    #[test]
    fn stochastic_lucas_matrix() {
        let g = named_gf("lucas1", 10).unwrap().series;
        let l = stochastic_from_g(&g).unwrap();
        assert!(l.is_proper());
        assert_eq!(rows(&l, 3)[2], ints(&[4, -7, 4]));
    }

    #[test]
    fn stochastic_fib_and_degenerate() {
        let l = stochastic_from_g(&fib(10)).unwrap();
        let expected = (-TruncSeries::poly(&[0, 0, 1], 10)).divide(&fib_den(10)).unwrap();
        assert_eq!(l.f(), &expected);
        assert!(l.expand(10).unwrap().row_sums().iter().all(One::is_one));

        let geo = TruncSeries::one(6).divide(&TruncSeries::poly(&[1, -1], 6)).unwrap();
        let degenerate = stochastic_from_g(&geo).unwrap();
        assert!(degenerate.is_f_zero());
        let m = degenerate.expand(6).unwrap();
        for n in 0..6 {
            assert_eq!(m.get(n, 0), rat(1));
            assert!((1..=n).all(|k| m.get(n, k).is_zero()));
        }

        // g = 1 gives f = z, the identity array
        let id = stochastic_from_g(&TruncSeries::one(3)).unwrap();
        assert_eq!(id, RiordanPair::identity(3));

        assert!(matches!(
            stochastic_from_g(&TruncSeries::poly(&[0, 1], 3)),
            Err(ConstructionError::Riordan(RiordanError::ZeroG0))
        ));
        // g_0 = 2 would put 2 in the top-left corner; not a Riordan array
        assert!(matches!(
            stochastic_from_g(&TruncSeries::poly(&[2, 1], 3)),
            Err(ConstructionError::Riordan(RiordanError::NonzeroF0))
        ));
    }

    #[test]
    fn pseudo_from_geometric_recovers_pascal() {
        let n = 32;
        let geo = TruncSeries::one(n).divide(&TruncSeries::poly(&[1, -1], n)).unwrap();
        let l = pseudo_from_g(&geo).unwrap();
        assert_eq!(l, RiordanPair::pascal(n));
    }

    #[test]
    fn pseudo_from_lucas() {
        let l = pseudo_from_g(&lucas(20)).unwrap();
        assert_eq!(rows(&l, 4)[3], ints(&[4, 33, 11, 1]));
        assert_eq!(rows(&l, 5)[4], ints(&[7, 214, 88, 16, 1]));
        assert_eq!(l.f(), &lucas_f(20));
        assert!(l.is_pseudo_involution(20));
    }

    #[test]
    fn pseudo_from_fib_matches_closed_form() {
        let l = pseudo_from_g(&fib(24)).unwrap();
        assert_eq!(l.f(), &fib_f(24));
    }

    #[test]
    fn pseudo_from_g_preconditions() {
        assert!(matches!(
            pseudo_from_g(&TruncSeries::poly(&[2, 1], 5)),
            Err(ConstructionError::Precondition(_))
        ));
        assert!(matches!(
            pseudo_from_g(&TruncSeries::poly(&[1, 0, 1], 5)),
            Err(ConstructionError::Precondition(_))
        ));
    }

    #[test]
    fn uniqueness_of_f() {
        for g in [lucas(16), fib(16), convolved_fib(2, 16)] {
            let l = pseudo_from_g(&g).unwrap();
            for i in 1..16 {
                let mut coeffs = l.f().coeffs().to_vec();
                coeffs[i] += rat(1);
                let perturbed = RiordanPair::new(g.clone(), TruncSeries::new(coeffs)).unwrap();
                assert!(!perturbed.is_pseudo_involution(16), "position {i}");
            }
        }
    }

    #[test]
    fn powers() {
        let fib_pair = pseudo_from_g(&fib(24)).unwrap();
        assert_eq!(power_pseudo(&fib_pair, 1).unwrap(), fib_pair);

        let sq = power_pseudo(&fib_pair, 2).unwrap();
        assert_eq!(rows(&sq, 4)[3], ints(&[10, 20, 8, 1]));
        assert_eq!(
            sq.expand(9).unwrap().column(0),
            ints(&[1, 2, 5, 10, 20, 38, 71, 130, 235])
        );

        let cube = power_pseudo(&fib_pair, 3).unwrap();
        assert!(cube.is_pseudo_involution(16));
        assert_eq!(cube.g(), &convolved_fib(3, 24));
        assert_eq!(cube.f(), fib_pair.f());

        let not_pseudo = RiordanPair::proper(fib(16), TruncSeries::var(16)).unwrap();
        assert!(matches!(
            power_pseudo(&not_pseudo, 2),
            Err(ConstructionError::Precondition(_))
        ));
    }

    #[test]
    fn family() {
        let fam = family_from_f(&fib_f(24)).unwrap();
        assert_eq!(rows(&fam[0], 5)[4], ints(&[0, 32, 27, 9, 1]));
        assert_eq!(rows(&fam[2], 4)[3], ints(&[128, 54, 12, 1]));
        for member in &fam {
            assert!(member.is_pseudo_involution(16));
        }

        let z = TruncSeries::var(8);
        for member in family_from_f(&z).unwrap() {
            assert!(member.agrees_to(&RiordanPair::identity(8), member.order()));
        }

        let pascal_f = TruncSeries::var(8).divide(&TruncSeries::poly(&[1, -1], 8)).unwrap();
        assert!(family_from_f(&pascal_f).is_ok());
        let bad = TruncSeries::poly(&[0, 1, 1], 8);
        assert!(matches!(
            family_from_f(&bad),
            Err(ConstructionError::OrderTwo { .. })
        ));
    }

    #[test]
    fn g_group() {
        let f = fib_f(24);
        let bell_g = f.divide(&TruncSeries::var(24)).unwrap();
        let sq = g_group_ops(&bell_g, &bell_g, &f, GOp::Mul).unwrap();
        assert!(sq.is_pseudo_involution(16));
        assert_eq!(sq.g(), &bell_g.pow(2));

        let inv = g_group_ops(&bell_g, &bell_g, &f, GOp::Inv).unwrap();
        assert!(inv.is_pseudo_involution(16));
        // 1 / (f/z) = z/f
        assert_eq!(inv.g(), &TruncSeries::var(24).divide(&f).unwrap());

        let one = TruncSeries::one(23);
        let unchanged = g_group_ops(&bell_g, &one, &f, GOp::Mul).unwrap();
        assert_eq!(unchanged.g(), &bell_g);

        assert!(matches!(
            g_group_ops(&TruncSeries::poly(&[1, 2], 16), &one, &f, GOp::Mul),
            Err(ConstructionError::Precondition(_))
        ));
    }
}
