//! Reference arrays and sequences with the recipes that rebuild them.
//!
//! Expected values are stored as strings exactly as printed in the source
//! tables; [`verify`] recomputes each recipe and compares entry by entry.

use serde::{Deserialize, Serialize};

use crate::constructions::{family_from_f, power_pseudo, pseudo_from_g, stochastic_from_g, FAMILY};
use crate::expr::eval_series;
use crate::pair::RiordanPair;
use crate::production::{a_sequence, extract_az};
use crate::rational::{format_rational, parse_rational, Rational};

/// How a fixture's pair is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Pair { g: String, f: String },
    Inverse { g: String, f: String },
    Stochastic { g: String },
    PseudoFromG { g: String },
    /// `pseudo_from_g(g)` raised to the `n`-th power in `g`.
    PowerPseudo { g: String, n: u64 },
    /// One member of `family_from_f(f)`: associated, bell, derivative or hitting-time.
    Family { f: String, member: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub source: String,
    pub recipe: Recipe,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f_prefix: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a_prefix: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub z_prefix: Vec<String>,
    /// Order at which the pseudo-involution identities must hold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudo_involution: Option<usize>,
    /// Number of rows whose sums must all equal one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_row_sums: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Build(String),
    Entry {
        row: usize,
        col: usize,
        expected: String,
        actual: String,
    },
    Sequence {
        name: &'static str,
        index: usize,
        expected: String,
        actual: String,
    },
    RowSum { row: usize, actual: String },
    NotPseudoInvolution { order: usize, first_failure: Option<usize> },
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Build(e) => write!(f, "could not build: {e}"),
            Failure::Entry {
                row,
                col,
                expected,
                actual,
            } => write!(f, "entry ({row},{col}): expected {expected}, got {actual}"),
            Failure::Sequence {
                name,
                index,
                expected,
                actual,
            } => write!(f, "{name}[{index}]: expected {expected}, got {actual}"),
            Failure::RowSum { row, actual } => write!(f, "row {row} sums to {actual}, not 1"),
            Failure::NotPseudoInvolution {
                order,
                first_failure,
            } => match first_failure {
                Some(i) => write!(f, "not a pseudo-involution at order {order}: fails at z^{i}"),
                None => write!(f, "not enough coefficients to check order {order}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureReport {
    pub id: String,
    pub source: String,
    pub failure: Option<Failure>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn strs(rows: &[&[i64]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn seq(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

const FIB_F: &str = "(1-z-z^2-sqrt(5*z^4+10*z^3-z^2-6*z+1))/(2-2*z-2*z^2)";

/// A-sequence of `FIB_F`, shared by every pair built on it.
const FIB_F_A: [&str; 8] = ["1", "3", "0", "5", "-15", "70", "-310", "1455"];

fn fixture(id: &str, source: &str, recipe: Recipe) -> Fixture {
    Fixture {
        id: id.into(),
        source: source.into(),
        recipe,
        rows: vec![],
        f_prefix: vec![],
        a_prefix: vec![],
        z_prefix: vec![],
        pseudo_involution: None,
        unit_row_sums: None,
    }
}

fn family_fixture(id: &str, source: &str, member: &str, rows: &[&[i64]]) -> Fixture {
    Fixture {
        rows: strs(rows),
        a_prefix: seq(&FIB_F_A),
        pseudo_involution: Some(16),
        ..fixture(
            id,
            source,
            Recipe::Family {
                f: FIB_F.into(),
                member: member.into(),
            },
        )
    }
}

/// Every bundled fixture.
pub fn builtin() -> Vec<Fixture> {
    let pascal = || Recipe::Pair {
        g: "1/(1-z)".into(),
        f: "z/(1-z)".into(),
    };
    let mut ones = vec!["0".to_string()];
    ones.extend(std::iter::repeat_n("1".to_string(), 31));

    vec![
        Fixture {
            rows: strs(&[&[1], &[1, 1], &[1, 2, 1], &[1, 3, 3, 1], &[1, 4, 6, 4, 1]]),
            a_prefix: seq(&["1", "1", "0", "0"]),
            z_prefix: seq(&["1", "0", "0", "0"]),
            pseudo_involution: Some(16),
            ..fixture("pascal", "Pascal triangle (A007318)", pascal())
        },
        Fixture {
            rows: strs(&[
                &[1],
                &[-1, 1],
                &[1, -2, 1],
                &[-1, 3, -3, 1],
                &[1, -4, 6, -4, 1],
                &[-1, 5, -10, 10, -5, 1],
                &[1, -6, 15, -20, 15, -6, 1],
            ]),
            ..fixture(
                "pascal-inverse",
                "inverse Pascal matrix (A130595)",
                Recipe::Inverse {
                    g: "1/(1-z)".into(),
                    f: "z/(1-z)".into(),
                },
            )
        },
        Fixture {
            f_prefix: ones,
            pseudo_involution: Some(16),
            ..fixture(
                "pascal-from-g",
                "pseudo-involution partner of 1/(1-z) is z/(1-z)",
                Recipe::PseudoFromG {
                    g: "1/(1-z)".into(),
                },
            )
        },
        Fixture {
            rows: strs(&[
                &[1],
                &[1, 0],
                &[3, -2, 0],
                &[4, -3, 0, 0],
                &[7, -10, 4, 0, 0],
                &[11, -18, 8, 0, 0, 0],
                &[18, -38, 29, -8, 0, 0, 0],
                &[29, -71, 63, -20, 0, 0, 0, 0],
                &[47, -134, 150, -78, 16, 0, 0, 0, 0],
                &[76, -245, 317, -195, 48, 0, 0, 0, 0, 0],
            ]),
            unit_row_sums: Some(32),
            ..fixture(
                "stochastic-lucas-array",
                "stochastic Lucas array (vertically stretched)",
                Recipe::Stochastic { g: "lucas".into() },
            )
        },
        Fixture {
            rows: strs(&[
                &[1],
                &[3, -2],
                &[4, -7, 4],
                &[7, -14, 16, -8],
                &[11, -31, 41, -36, 16],
                &[18, -60, 105, -110, 80, -32],
                &[29, -116, 235, -315, 280, -176, 64],
                &[47, -216, 512, -790, 880, -688, 384, -128],
                &[76, -397, 1063, -1894, 2425, -2344, 1648, -832, 256],
                &[123, -718, 2153, -4298, 6303, -7002, 6032, -3872, 1792, -512],
            ]),
            z_prefix: seq(&[
                "3", "5/2", "25/8", "25/8", "375/128", "375/128", "3125/1024", "3125/1024",
            ]),
            a_prefix: seq(&["-2", "1/2", "-5/8", "0", "25/128", "0", "-125/1024", "0"]),
            unit_row_sums: Some(32),
            ..fixture(
                "stochastic-lucas-matrix",
                "stochastic Lucas matrix with its A and Z sequences",
                Recipe::Stochastic {
                    g: "(1+2*z)/(1-z-z^2)".into(),
                },
            )
        },
        Fixture {
            rows: strs(&[
                &[1],
                &[1, 1],
                &[3, 6, 1],
                &[4, 33, 11, 1],
                &[7, 214, 88, 16, 1],
                &[11, 1572, 699, 168, 21, 1],
                &[18, 12686, 5787, 1584, 273, 26, 1],
                &[29, 108583, 50036, 14652, 2994, 403, 31, 1],
                &[47, 967294, 447998, 136436, 30792, 5054, 558, 36, 1],
            ]),
            z_prefix: seq(&["1", "2", "-11", "58", "-384", "2872", "-23416", "201608"]),
            a_prefix: seq(&["1", "5", "0", "45", "-225", "1980", "-16200", "142920"]),
            pseudo_involution: Some(16),
            ..fixture(
                "lucas-pi",
                "Lucas pseudo-involution with its A and Z sequences",
                Recipe::PseudoFromG { g: "lucas".into() },
            )
        },
        Fixture {
            f_prefix: seq(&["0", "1", "3", "9", "32", "126", "538", "2429"]),
            a_prefix: seq(&FIB_F_A),
            pseudo_involution: Some(16),
            ..fixture(
                "fib-pi",
                "Fibonacci pseudo-involution; f matches the closed form with the square root",
                Recipe::PseudoFromG { g: "fib".into() },
            )
        },
        Fixture {
            rows: strs(&[
                &[1],
                &[2, 1],
                &[5, 5, 1],
                &[10, 20, 8, 1],
                &[20, 75, 44, 11, 1],
                &[38, 285, 212, 77, 14, 1],
                &[71, 1138, 976, 448, 119, 17, 1],
                &[130, 4820, 4476, 2390, 810, 170, 20, 1],
                &[235, 21545, 20838, 12266, 4905, 1325, 230, 23, 1],
            ]),
            z_prefix: seq(&["2", "1", "-5", "20", "-77", "308", "-1303", "5805"]),
            a_prefix: seq(&FIB_F_A),
            pseudo_involution: Some(16),
            ..fixture(
                "cfib2-pi",
                "convolved Fibonacci pseudo-involution (A001629 in column 0)",
                Recipe::PowerPseudo {
                    g: "fib".into(),
                    n: 2,
                },
            )
        },
        family_fixture(
            "fib-f-associated",
            "associated subgroup element (1, f)",
            "associated",
            &[
                &[1],
                &[0, 1],
                &[0, 3, 1],
                &[0, 9, 6, 1],
                &[0, 32, 27, 9, 1],
                &[0, 126, 118, 54, 12, 1],
                &[0, 538, 525, 285, 90, 15, 1],
                &[0, 2429, 2408, 1440, 560, 135, 18, 1],
                &[0, 11412, 11378, 7203, 3195, 970, 189, 21, 1],
                &[0, 55201, 55146, 36162, 17488, 6195, 1542, 252, 24, 1],
            ],
        ),
        family_fixture(
            "fib-f-bell",
            "Bell subgroup element (f/z, f)",
            "bell",
            &[
                &[1],
                &[3, 1],
                &[9, 6, 1],
                &[32, 27, 9, 1],
                &[126, 118, 54, 12, 1],
                &[538, 525, 285, 90, 15, 1],
                &[2429, 2408, 1440, 560, 135, 18, 1],
                &[11412, 11378, 7203, 3195, 970, 189, 21, 1],
                &[55201, 55146, 36162, 17488, 6195, 1542, 252, 24, 1],
                &[272993, 272904, 183132, 93926, 37043, 10926, 2303, 324, 27, 1],
            ],
        ),
        family_fixture(
            "fib-f-derivative",
            "derivative subgroup element (f', f)",
            "derivative",
            &[
                &[1],
                &[6, 1],
                &[27, 9, 1],
                &[128, 54, 12, 1],
                &[630, 295, 90, 15, 1],
                &[3228, 1575, 570, 135, 18, 1],
                &[17003, 8428, 3360, 980, 189, 21, 1],
                &[91296, 45512, 19208, 6390, 1552, 252, 24, 1],
                &[496809, 248157, 108486, 39348, 11151, 2313, 324, 27, 1],
                &[2729930, 1364520, 610440, 234815, 74086, 18210, 3290, 405, 30, 1],
            ],
        ),
        family_fixture(
            "fib-f-hitting-time",
            "hitting-time subgroup element (z f'/f, f)",
            "hitting-time",
            &[
                &[1],
                &[3, 1],
                &[9, 6, 1],
                &[42, 27, 9, 1],
                &[201, 128, 54, 12, 1],
                &[1043, 630, 295, 90, 15, 1],
                &[5544, 3228, 1575, 570, 135, 18, 1],
                &[30012, 17003, 8428, 3360, 980, 189, 21, 1],
                &[164281, 91296, 45512, 19208, 6390, 1552, 252, 24, 1],
                &[906693, 496809, 248157, 108486, 39348, 11151, 2313, 324, 27, 1],
            ],
        ),
    ]
}

/// Named sets of fixtures accepted by `verify` besides single ids and `all`.
pub const GROUPS: &[(&str, &[&str])] = &[(
    "fib-f-family",
    &[
        "fib-f-associated",
        "fib-f-bell",
        "fib-f-derivative",
        "fib-f-hitting-time",
    ],
)];

/// Resolves an id, a group name or `all` against `fixtures`.
pub fn select<'a>(fixtures: &'a [Fixture], key: &str) -> Vec<&'a Fixture> {
    if key == "all" {
        return fixtures.iter().collect();
    }
    if let Some((_, ids)) = GROUPS.iter().find(|(name, _)| *name == key) {
        return fixtures
            .iter()
            .filter(|f| ids.contains(&f.id.as_str()))
            .collect();
    }
    fixtures.iter().filter(|f| f.id == key).collect()
}

/// Builds the pair a recipe describes.
pub fn build(recipe: &Recipe, order: usize) -> Result<RiordanPair, String> {
    let series = |text: &str| eval_series(text, order).map_err(|e| format!("{text}: {e}"));
    let pair = match recipe {
        Recipe::Pair { g, f } => RiordanPair::new(series(g)?, series(f)?).map_err(|e| e.to_string())?,
        Recipe::Inverse { g, f } => RiordanPair::new(series(g)?, series(f)?)
            .and_then(|p| p.inverse())
            .map_err(|e| e.to_string())?,
        Recipe::Stochastic { g } => stochastic_from_g(&series(g)?).map_err(|e| e.to_string())?,
        Recipe::PseudoFromG { g } => pseudo_from_g(&series(g)?).map_err(|e| e.to_string())?,
        Recipe::PowerPseudo { g, n } => pseudo_from_g(&series(g)?)
            .and_then(|p| power_pseudo(&p, *n))
            .map_err(|e| e.to_string())?,
        Recipe::Family { f, member } => {
            let index = FAMILY
                .iter()
                .position(|k| k.name() == member)
                .ok_or_else(|| format!("unknown family member `{member}`"))?;
            let family = family_from_f(&series(f)?).map_err(|e| e.to_string())?;
            family[index].clone()
        }
    };
    Ok(pair)
}

fn compare_seq(name: &'static str, expected: &[String], actual: &[Rational]) -> Option<Failure> {
    for (index, want) in expected.iter().enumerate() {
        let got = actual.get(index).map(format_rational);
        let matches = match (parse_rational(want), actual.get(index)) {
            (Some(w), Some(a)) => &w == a,
            _ => false,
        };
        if !matches {
            return Some(Failure::Sequence {
                name,
                index,
                expected: want.clone(),
                actual: got.unwrap_or_else(|| "<missing>".into()),
            });
        }
    }
    None
}

/// Recomputes one fixture at the given series order.
pub fn verify(fx: &Fixture, order: usize) -> FixtureReport {
    FixtureReport {
        id: fx.id.clone(),
        source: fx.source.clone(),
        failure: first_failure(fx, order),
    }
}

fn first_failure(fx: &Fixture, order: usize) -> Option<Failure> {
    match build(&fx.recipe, order) {
        Ok(pair) => check(fx, &pair),
        Err(e) => Some(Failure::Build(e)),
    }
}

/// Compares an already built pair against the expectations in `fx`,
/// ignoring its recipe.
pub fn check(fx: &Fixture, pair: &RiordanPair) -> Option<Failure> {
    if !fx.rows.is_empty() {
        let m = match pair.expand(fx.rows.len()) {
            Ok(m) => m,
            Err(e) => return Some(Failure::Build(e.to_string())),
        };
        for (row, expected_row) in fx.rows.iter().enumerate() {
            for (col, want) in expected_row.iter().enumerate() {
                let actual = m.get(row, col);
                if parse_rational(want).as_ref() != Some(&actual) || col > row {
                    return Some(Failure::Entry {
                        row,
                        col,
                        expected: want.clone(),
                        actual: format_rational(&actual),
                    });
                }
            }
        }
    }

    if !fx.f_prefix.is_empty() {
        if let Some(f) = compare_seq("f", &fx.f_prefix, pair.f().coeffs()) {
            return Some(f);
        }
    }

    let terms = fx.a_prefix.len().max(fx.z_prefix.len());
    if !fx.z_prefix.is_empty() {
        match extract_az(pair, terms) {
            Ok(report) => {
                if let Some(f) = compare_seq("Z", &fx.z_prefix, &report.z_seq) {
                    return Some(f);
                }
                if let Some(f) = compare_seq("A", &fx.a_prefix, &report.a_seq) {
                    return Some(f);
                }
            }
            Err(e) => return Some(Failure::Build(e.to_string())),
        }
    } else if !fx.a_prefix.is_empty() {
        match a_sequence(pair, terms) {
            Ok(a) => {
                if let Some(f) = compare_seq("A", &fx.a_prefix, &a) {
                    return Some(f);
                }
            }
            Err(e) => return Some(Failure::Build(e.to_string())),
        }
    }

    if let Some(ord) = fx.pseudo_involution {
        let check = pair.check_pseudo_involution(ord);
        if !check.holds() {
            return Some(Failure::NotPseudoInvolution {
                order: ord,
                first_failure: check.first_failure,
            });
        }
    }

    if let Some(rows) = fx.unit_row_sums {
        let sums = match pair.expand(rows) {
            Ok(m) => m.row_sums(),
            Err(e) => return Some(Failure::Build(e.to_string())),
        };
        if let Some((row, s)) = sums.iter().enumerate().find(|(_, s)| !num_traits::One::is_one(*s)) {
            return Some(Failure::RowSum {
                row,
                actual: format_rational(s),
            });
        }
    }
    None
}

/// Verifies fixtures concurrently, keeping input order in the result.
pub fn verify_all(fixtures: &[&Fixture], order: usize) -> Vec<FixtureReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = fixtures
            .iter()
            .map(|fx| scope.spawn(move || verify(fx, order)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fixture verification panicked"))
            .collect()
    })
}
