//! `stable`: command-line front end for stable-core.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};

use stable_core::check::{run_suite, Suite};
use stable_core::density::{cdf, pdf};
use stable_core::doa::{centering_bn, example_catalog, limit_params, Centering, ExampleName, Scaling, TailSpec};
use stable_core::montecarlo::{simulate_sums, symmetric_grid, SimConfig};
use stable_core::params::{cf, convert, laplace};
use stable_core::{Convention, Error, StableParams};

#[derive(Parser)]
#[command(name = "stable", version, about = "Stable laws: conversions, evaluations, domains of attraction and simulation")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Convert parameters between conventions
    Convert {
        #[arg(long, default_value = "s1", value_parser = parse_convention)]
        from: Convention,
        #[arg(long, value_parser = parse_convention)]
        to: Convention,
        #[command(flatten)]
        law: LawArgs,
    },
    /// Characteristic function E e^{itX}
    Cf {
        #[command(flatten)]
        law: Law,
        #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
    },
    /// Probability density
    Pdf {
        #[command(flatten)]
        law: Law,
        #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Distribution function
    Cdf {
        #[command(flatten)]
        law: Law,
        #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Laplace transform E e^{-tX}, t >= 0
    Laplace {
        #[command(flatten)]
        law: Law,
        #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Stable limit of normalized sums for a power tail
    #[command(group(ArgGroup::new("tail").required(true).args(["c", "lattice_c"])))]
    DoaLimit {
        #[arg(long)]
        alpha: f64,
        /// P(|X| > x) ~ C x^{-alpha}
        #[arg(long = "C", requires = "p_plus")]
        c: Option<f64>,
        #[arg(long)]
        p_plus: Option<f64>,
        /// integer law with P(X = n) ~ c n^{-alpha-1}
        #[arg(long, conflicts_with = "p_plus")]
        lattice_c: Option<f64>,
    },
    /// Centering constant b_n = n E sin(X/n) of an alpha = 1 example
    Bn {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long)]
        n: f64,
    },
    /// Simulate normalized sums of an example and compare with the limit
    Simulate {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        /// ECF comparison points (default: 41 points on [-5, 5])
        #[arg(long, num_args = 1, action = clap::ArgAction::Append, value_delimiter = ',', allow_hyphen_values = true)]
        t_grid: Option<Vec<f64>>,
    },
    /// Run the acceptance criteria
    Check {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
}

#[derive(Args)]
struct LawArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
}

#[derive(Args)]
struct Law {
    #[arg(long, default_value = "s1", value_parser = parse_convention)]
    convention: Convention,
    #[command(flatten)]
    args: LawArgs,
}

#[derive(Args)]
struct ExampleArgs {
    /// one-over-u, one-over-exp, uniform-ratio, exp-ratio, vsq-over-w, pareto, int-power
    #[arg(long)]
    example: String,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
}

impl LawArgs {
    fn params(&self, convention: Convention) -> Result<StableParams<f64>, Error> {
        StableParams::new(convention, self.alpha, self.beta, self.gamma, self.delta)
    }
}

impl ExampleArgs {
    fn name(&self) -> Result<ExampleName<f64>, Error> {
        ExampleName::parse(&self.example, self.q, self.alpha, self.c)
    }
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Writes floats with 17 significant digits.
struct Sci;

impl serde_json::ser::Formatter for Sci {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write!(w, "{v:.8e}")
    }
}

fn to_json<S: Serialize>(v: &S) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci);
    v.serialize(&mut ser).expect("output serializes");
    String::from_utf8(out).expect("utf-8 output")
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn to_csv(rows: &[Value]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(Value::Object(first)) = rows.first() {
        w.write_record(first.keys()).expect("in-memory write");
        for row in rows {
            if let Value::Object(m) = row {
                w.write_record(m.values().map(csv_cell)).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// One object for a single row, an array otherwise.
fn render(rows: Vec<Value>, format: Format) -> String {
    match format {
        Format::Csv => to_csv(&rows),
        Format::Json if rows.len() == 1 => to_json(&rows[0]) + "\n",
        Format::Json => to_json(&rows) + "\n",
    }
}

fn law_json(p: &StableParams<f64>) -> Value {
    json!({"convention": p.convention.name(), "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "delta": p.delta})
}

fn complex_row(key: &str, t: f64, z: Complex<f64>) -> Value {
    let mut m = serde_json::Map::new();
    m.insert(key.into(), json!(t));
    m.insert("re".into(), json!(z.re));
    m.insert("im".into(), json!(z.im));
    Value::Object(m)
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let f = cli.format;
    let out = match cli.command {
        Command::Convert { from, to, law } => {
            let p = law.params(from)?;
            render(vec![law_json(&convert(&p, to)?)], f)
        }
        Command::Cf { law, t } => {
            let p = law.args.params(law.convention)?;
            render(t.iter().map(|&t| complex_row("t", t, cf(&p, t))).collect(), f)
        }
        Command::Pdf { law, x } => {
            let p = law.args.params(law.convention)?;
            let rows = x.iter().map(|&x| Ok(json!({"x": x, "pdf": pdf(&p, x)?}))).collect::<Result<_, Error>>()?;
            render(rows, f)
        }
        Command::Cdf { law, x } => {
            let p = law.args.params(law.convention)?;
            let rows = x.iter().map(|&x| Ok(json!({"x": x, "cdf": cdf(&p, x)?}))).collect::<Result<_, Error>>()?;
            render(rows, f)
        }
        Command::Laplace { law, t } => {
            let p = law.args.params(law.convention)?;
            let rows = t
                .iter()
                .map(|&t| Ok(complex_row("t", t, laplace(&p, Complex::new(t, 0.0))?)))
                .collect::<Result<_, Error>>()?;
            render(rows, f)
        }
        Command::DoaLimit { alpha, c, p_plus, lattice_c } => {
            let spec = match (c, lattice_c) {
                (Some(c), _) => TailSpec::new(alpha, c, p_plus.expect("enforced by the parser"))?,
                (None, Some(l)) => TailSpec::lattice(alpha, l)?,
                (None, None) => unreachable!("enforced by the parser"),
            };
            let (law, norming) = limit_params(&spec)?;
            let scaling = match norming.scaling {
                Scaling::PowerInvAlpha if alpha == 1.0 => "n".to_string(),
                Scaling::PowerInvAlpha => format!("n^(1/{alpha})"),
                Scaling::SqrtNLogN => "sqrt(n log n)".to_string(),
            };
            let centering = match norming.centering {
                Centering::Zero => "0".to_string(),
                Centering::NMean => "n·E X".to_string(),
                Centering::NESin => "n·E sin(X/n)".to_string(),
                Centering::Explicit { log_coeff, constant } => format!("{log_coeff}·log n + {constant}"),
            };
            let row = json!({
                "convention": law.convention.name(), "alpha": law.alpha, "beta": law.beta,
                "gamma": law.gamma, "delta": law.delta, "a_n": scaling, "centering": centering,
            });
            render(vec![row], f)
        }
        Command::Bn { example, n } => {
            let model = example_catalog(example.name()?)?;
            let bn = centering_bn(&model, n)?;
            let asymptotic = model.bn_asymptotic(n);
            render(vec![json!({"example": model.name.to_string(), "n": n, "bn": bn, "asymptotic": asymptotic})], f)
        }
        Command::Simulate { example, n, reps, seed, t_grid } => {
            let model = example_catalog(example.name()?)?;
            let cfg = SimConfig::new(n, reps, seed, t_grid.unwrap_or_else(|| symmetric_grid(5.0, 41)))?;
            let report = simulate_sums(&model, &cfg)?;
            match f {
                Format::Csv => report.samples_csv(),
                Format::Json => to_json(&report) + "\n",
            }
        }
        Command::Check { suite } => {
            let outcomes = run_suite(suite);
            for o in &outcomes {
                eprintln!("{o}");
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let rows = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "criterion": o.id, "name": o.name, "passed": o.passed,
                        "seconds": o.seconds, "time_limit": o.time_limit, "detail": o.detail,
                    })
                })
                .collect::<Vec<_>>();
            let text = match f {
                Format::Csv => to_csv(&rows),
                Format::Json => to_json(&rows) + "\n",
            };
            return Ok((text, passed));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            match e {
                Error::InvalidParameter(_) | Error::UnknownExample(_) | Error::AlphaMismatch(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
