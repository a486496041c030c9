//! Command-line driver. `run` returns the process exit code: 0 ok,
//! 1 discrepancy or failed check, 2 usage, 3 budget exceeded.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classifier::{classify, stratify, CoefficientPoint};
use crate::error::{Error, Result};
use crate::oracle::{default_budget, diff_against_classifier, diff_at, DiffReport};
use crate::presentations::{bfz_presentation, reduced_presentation_with, verify_reduction, Family, RankTwoForm};
use crate::seeds::LabeledSeed;

pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cluster-sing", version, about = "Seeds, presentations and fiber singularities of cluster algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// A, B, C, D, E, F4, G2 or rank2
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        Family::new(&self.ty, self.n, self.a, self.b)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Coeffs {
    Trivial,
    Principal,
    Generic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Normalized,
    Bfz,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a labeled seed.
    Seed {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "trivial")]
        coeffs: Coeffs,
    },
    /// Mutate a seed in the given directions, in order.
    Mutate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "principal")]
        coeffs: Coeffs,
        #[arg(short = 'k', required = true)]
        k: Vec<usize>,
    },
    /// Emit the exchange-relation presentation of an acyclic seed.
    Present {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "principal")]
        coeffs: Coeffs,
    },
    /// Emit the reduced presentation and check its witness.
    Reduce {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "normalized")]
        form: Form,
    },
    /// Classify the fiber over η.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        /// Comma-separated residues, one per coefficient.
        #[arg(long)]
        eta: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit the strata of the coefficient torus over F_p.
    Stratify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
    },
    /// Compare the classifier against brute-force enumeration.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: u64,
        /// Restrict to a single η.
        #[arg(long)]
        eta: Option<String>,
        /// Points-evaluated budget; overrides the environment.
        #[arg(long)]
        budget: Option<u128>,
    },
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, err) {
        Ok((value, code)) => {
            let _ = writeln!(out, "{}", render(&value));
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Pretty JSON with sorted keys; strings are emitted raw in text mode.
fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => serde_json::to_string_pretty(v).expect("serializable"),
    }
}

fn with_coeffs(s: LabeledSeed, c: Coeffs) -> Result<LabeledSeed> {
    match c {
        Coeffs::Trivial => Ok(s),
        Coeffs::Principal => s.with_principal_coefficients(),
        Coeffs::Generic => s.with_generic_coefficients(),
    }
}

fn point(family: Family, p: u64, eta: &str) -> Result<CoefficientPoint> {
    let pt = CoefficientPoint::parse(p, eta)?;
    pt.check_rank(family)?;
    Ok(pt)
}

fn dispatch(cmd: Command, err: &mut dyn Write) -> Result<(Value, i32)> {
    let v = match cmd {
        Command::Seed { family, coeffs } => {
            let s = with_coeffs(family.family()?.seed()?, coeffs)?;
            serde_json::to_value(s.to_json()).expect("serializable")
        }
        Command::Mutate { family, coeffs, k } => {
            let mut s = with_coeffs(family.family()?.seed()?, coeffs)?;
            let mut relations = Vec::new();
            for &dir in &k {
                let (next, rel) = s.mutate(dir)?;
                relations.push(rel.to_string());
                s = next;
            }
            json!({
                "directions": k,
                "seed": serde_json::to_value(s.to_json()).expect("serializable"),
                "relations": relations,
            })
        }
        Command::Present { family, coeffs } => {
            let s = with_coeffs(family.family()?.seed()?, coeffs)?;
            serde_json::to_value(bfz_presentation(&s)?.to_json()).expect("serializable")
        }
        Command::Reduce { family, form } => {
            let f = family.family()?;
            let form = match form {
                Form::Normalized => RankTwoForm::Normalized,
                Form::Bfz => RankTwoForm::Bfz,
            };
            let pres = reduced_presentation_with(f, form)?;
            let check = verify_reduction(f)?;
            let code = if check.passed() { 0 } else { EXIT_DISCREPANCY };
            let v = json!({
                "type": f.to_string(),
                "presentation": serde_json::to_value(pres.to_json()).expect("serializable"),
                "expected_fiber_dim": pres.expected_fiber_dim,
                "verification": {
                    "passed": check.passed(),
                    "checks": serde_json::to_value(&check.checks).expect("serializable"),
                },
            });
            return Ok((v, code));
        }
        Command::Classify { family, p, eta, format } => {
            let f = family.family()?;
            let rep = classify(f, &point(f, p, &eta)?)?;
            match format {
                Format::Json => rep.to_json(),
                Format::Text => Value::String(text_report(&rep)),
            }
        }
        Command::Stratify { family, p } => {
            let f = family.family()?;
            let st = stratify(f, p)?;
            json!({
                "type": f.to_string(),
                "p": p,
                "strata": st.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::Verify { family, p, eta, budget } => {
            let f = family.family()?;
            let budget = budget.unwrap_or_else(default_budget);
            let report = match eta {
                Some(e) => {
                    let pt = point(f, p, &e)?;
                    let (o, d) = diff_at(f, &pt, budget)?;
                    DiffReport { family: f.to_string(), p, vars: Vec::new(), outcomes: vec![o], discrepancies: d }
                }
                None => diff_against_classifier(f, p, budget)?,
            };
            let v = report.to_json();
            let _ = writeln!(err, "{}", v["summary"].as_str().unwrap_or_default());
            let code = if report.agrees() { 0 } else { EXIT_DISCREPANCY };
            return Ok((v, code));
        }
    };
    Ok((v, 0))
}

fn text_report(rep: &crate::classifier::SingularityReport) -> String {
    let eta: Vec<String> = rep.point.eta().iter().map(|v| v.to_string()).collect();
    let mut s = format!("{} over F_{} at eta = ({}): {}\n", rep.family, rep.point.p(), eta.join(", "), rep.verdict.summary());
    s.push_str(&format!("stratum {}\n", rep.stratum));
    for c in &rep.locus {
        let eqs: Vec<String> = c.equations.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!("{} = V({})\n", c.name, eqs.join(", ")));
    }
    s.trim_end().to_string()
}
