//! The `riordan` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch (including a failed
//! `pseudo check`), 2 parse or evaluation error in an expression, 3 invariant
//! violation, 4 construction precondition failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::constructions::{
    family_from_f, power_pseudo, pseudo_from_g, stochastic_from_g, ConstructionError, FAMILY,
};
use crate::expr::{parse, ExprError};
use crate::fixtures::{self, Fixture};
use crate::pair::{RiordanError, RiordanPair, TriMatrix};
use crate::production::{extract_az, ProductionError};
use crate::rational::{format_rational, Rational};
use crate::render::{self, Format};
use crate::series::TruncSeries;

#[derive(Debug, Parser)]
#[command(name = "riordan", version, about = "Exact Riordan arrays and pseudo-involutions")]
pub struct Cli {
    /// Number of series coefficients carried through every computation.
    #[arg(long, global = true, default_value_t = 32)]
    pub order: usize,
    /// Number of rows to display.
    #[arg(long, global = true, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand the array of (g, f).
    Show {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Group product (g1, f1) * (g2, f2).
    Mul {
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
    },
    /// Group inverse of (g, f).
    Inv {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Apply (g, f) to a generating function h: g * h(f).
    Apply {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// A- and Z-sequences of (g, f).
    Az {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Stochastic array (g, 1 - (1 - z) g) with its row sums.
    Stochastic {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Pseudo-involution constructions and checks.
    #[command(subcommand)]
    Pseudo(PseudoCommand),
    /// Recompute bundled reference arrays and compare them exactly.
    Verify {
        /// Fixture id, group name, or `all`.
        #[arg(default_value = "all")]
        target: String,
        /// Load fixtures from a JSON file instead of the bundled set.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Print the bundled fixtures as JSON and exit.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum PseudoCommand {
    /// The unique f making (g, f) a pseudo-involution (needs g0 = 1, g1 != 0).
    FromG {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Test whether (g, f) is a pseudo-involution.
    Check {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// The associated, Bell, derivative and hitting-time members built on f.
    Family {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// (g^n, f) for a pseudo-involution (g, f).
    Power {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        n: u64,
    },
}

enum CliError {
    Mismatch(String),
    Parse(String),
    Invariant(String),
    Precondition(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Mismatch(m)
            | CliError::Parse(m)
            | CliError::Invariant(m)
            | CliError::Precondition(m) => m,
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<RiordanError> for CliError {
    fn from(e: RiordanError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ProductionError> for CliError {
    fn from(e: ProductionError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Riordan(inner) => inner.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invariant(format!("i/o error: {e}"))
    }
}

type Out<'a> = &'a mut dyn Write;

struct Ctx<'a> {
    cli: &'a Cli,
    out: Out<'a>,
    err: Out<'a>,
}

impl Ctx<'_> {
    fn series(&self, text: &str) -> Result<TruncSeries, CliError> {
        let e = parse(text).map_err(ExprError::from)?;
        Ok(e.eval(self.cli.order).map_err(ExprError::from)?)
    }

    fn pair(&self, g: &str, f: &str) -> Result<RiordanPair, CliError> {
        Ok(RiordanPair::new(self.series(g)?, self.series(f)?)?)
    }

    fn rows_for(&self, pair: &RiordanPair) -> usize {
        self.cli.rows.min(pair.order())
    }

    fn triangle(
        &mut self,
        pair: &RiordanPair,
        g_label: &str,
        extra: Option<&[Rational]>,
    ) -> Result<TriMatrix, CliError> {
        let m = pair.expand(self.rows_for(pair))?;
        let text = match self.cli.format {
            Format::Table => render::table(&m, extra),
            Format::Csv => render::csv(&m),
            Format::Json => {
                let mut j = render::json(&m, g_label, pair.f().coeffs(), self.cli.order);
                j.push('\n');
                j
            }
        };
        write!(self.out, "{text}")?;
        Ok(m)
    }

    fn sequence(&mut self, label: &str, values: &[Rational]) -> Result<(), CliError> {
        let items: Vec<String> = values.iter().map(format_rational).collect();
        match self.cli.format {
            Format::Json => writeln!(
                self.out,
                "{}",
                serde_json::json!({ "name": label, "values": items })
            )?,
            Format::Csv => writeln!(self.out, "{label},{}", items.join(","))?,
            Format::Table => writeln!(self.out, "{label}: {}", items.join(", "))?,
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), CliError> {
        match &self.cli.command {
            Command::Show { g, f } => {
                let pair = self.pair(g, f)?;
                if !pair.is_proper() {
                    writeln!(
                        self.err,
                        "warning: f has no linear term; the array is vertically stretched"
                    )?;
                }
                self.triangle(&pair, g, None)?;
            }
            Command::Mul { g1, f1, g2, f2 } => {
                let prod = self.pair(g1, f1)?.mul(&self.pair(g2, f2)?)?;
                self.triangle(&prod, &format!("({g1})*(({g2})∘({f1}))"), None)?;
            }
            Command::Inv { g, f } => {
                let inv = self.pair(g, f)?.inverse()?;
                self.triangle(&inv, &format!("inverse of ({g}, {f})"), None)?;
            }
            Command::Apply { g, f, h } => {
                let pair = self.pair(g, f)?;
                let out = pair.apply(&self.series(h)?)?;
                let n = self.cli.rows.min(out.order());
                self.sequence("coeffs", &out.coeffs()[..n])?;
            }
            Command::Az { g, f, terms } => {
                let pair = self.pair(g, f)?;
                if !pair.is_proper() {
                    return Err(CliError::Invariant(
                        "A/Z sequences are only defined for proper arrays".into(),
                    ));
                }
                let report = extract_az(&pair, *terms)?;
                self.sequence("A", &report.a_seq)?;
                self.sequence("Z", &report.z_seq)?;
            }
            Command::Stochastic { g } => {
                let pair = stochastic_from_g(&self.series(g)?)?;
                let rows = self.rows_for(&pair);
                let sums = pair.expand(rows)?.row_sums();
                self.triangle(&pair, g, Some(&sums))?;
            }
            Command::Pseudo(cmd) => self.pseudo(cmd)?,
            Command::Verify {
                target,
                fixtures: path,
                dump,
            } => self.verify(target, path.as_ref(), *dump)?,
        }
        Ok(())
    }

    fn pseudo(&mut self, cmd: &PseudoCommand) -> Result<(), CliError> {
        match cmd {
            PseudoCommand::FromG { g } => {
                let series = self.series(g)?;
                let pair = pseudo_from_g(&series)?;
                let n = self.cli.rows.min(pair.f().order());
                if self.cli.format == Format::Table {
                    self.sequence("f", &pair.f().coeffs()[..n])?;
                }
                self.triangle(&pair, g, None)?;
            }
            PseudoCommand::Check { g, f } => {
                let pair = self.pair(g, f)?;
                if !pair.is_proper() {
                    return Err(CliError::Invariant(
                        "pseudo-involutions must be proper arrays".into(),
                    ));
                }
                let order = pair.order();
                let check = pair.check_pseudo_involution(order);
                match check.first_failure {
                    None => writeln!(self.out, "PASS (checked to order {order})")?,
                    Some(i) => {
                        writeln!(self.out, "FAIL at order {i}")?;
                        return Err(CliError::Mismatch(format!(
                            "g(z)g(-f(z)) = 1 or -f(-f(z)) = z fails at z^{i}"
                        )));
                    }
                }
            }
            PseudoCommand::Family { f } => {
                let members = family_from_f(&self.series(f)?)?;
                for (kind, member) in FAMILY.iter().zip(&members) {
                    if self.cli.format == Format::Table {
                        writeln!(self.out, "# {}", kind.name())?;
                    }
                    self.triangle(member, kind.name(), None)?;
                }
            }
            PseudoCommand::Power { g, f, n } => {
                let pair = RiordanPair::proper(self.series(g)?, self.series(f)?)?;
                let powered = power_pseudo(&pair, *n)?;
                self.triangle(&powered, &format!("({g})^{n}"), None)?;
            }
        }
        Ok(())
    }

    fn verify(&mut self, target: &str, path: Option<&PathBuf>, dump: bool) -> Result<(), CliError> {
        let all: Vec<Fixture> = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?
            }
            None => fixtures::builtin(),
        };
        if dump {
            writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(&all).expect("fixtures serialize")
            )?;
            return Ok(());
        }
        let chosen = fixtures::select(&all, target);
        if chosen.is_empty() {
            return Err(CliError::Parse(format!("no fixture or group named `{target}`")));
        }
        let reports = fixtures::verify_all(&chosen, self.cli.order);
        let mut failed = 0;
        for r in &reports {
            match &r.failure {
                None => writeln!(self.out, "PASS {} ({})", r.id, r.source)?,
                Some(f) => {
                    failed += 1;
                    writeln!(self.out, "FAIL {} ({}): {f}", r.id, r.source)?;
                }
            }
        }
        writeln!(
            self.out,
            "{} passed, {} failed",
            reports.len() - failed,
            failed
        )?;
        if failed > 0 {
            return Err(CliError::Mismatch(format!("{failed} fixture(s) failed")));
        }
        Ok(())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    if cli.order == 0 {
        let _ = writeln!(err, "error: --order must be positive");
        return 2;
    }
    let mut ctx = Ctx {
        cli: &cli,
        out,
        err,
    };
    match ctx.run() {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}", e.message());
            e.code()
        }
    }
}
