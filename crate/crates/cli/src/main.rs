//! `sharko`: forcing, entropy and cylinder orbits of cyclic patterns from
//! the command line.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sharko::{
    char_poly, check_sharkovskii_tail, default_omega, double_pattern, entropy_lower_bound,
    fmt_decimal, fmt_rational, forced_patterns, forces, horseshoe_count, lambda_root,
    min_entropy_pattern, parse_rational, pattern_entropy, periods, sharkovskii_compare,
    sharkovskii_decompose, stefan_pattern, CylinderPoint, Error, Pattern, SignedGraph,
    UncoupledSkewProduct, DEFAULT_TOL,
};

#[derive(Parser, Debug)]
#[command(
    name = "sharko",
    version,
    about = "Forcing and entropy of cyclic patterns"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pattern utilities.
    Pattern {
        #[command(subcommand)]
        action: PatternAction,
    },
    /// Sharkovskii order.
    Sharkovskii {
        #[command(subcommand)]
        action: SharkovskiiAction,
    },
    /// Štefan cycle of odd period q >= 3.
    Stefan { q: usize },
    /// Period-doubled pattern.
    Double { pattern: String },
    /// Signed Markov graph.
    Graph {
        pattern: String,
        /// Same as --format dot.
        #[arg(long)]
        dot: bool,
    },
    /// Entropy of a pattern.
    Entropy {
        pattern: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Largest root of x^q - 2x^(q-2) - 1.
    Lambda {
        q: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Whether tau forces nu.
    Forces { tau: String, nu: String },
    /// Patterns of a given period forced by tau.
    ForcedSet {
        tau: String,
        #[arg(long)]
        period: usize,
    },
    /// Periods realized by the connect-the-dots map.
    Periods {
        tau: String,
        #[arg(long)]
        max: usize,
    },
    /// Whether the realized periods form a Sharkovskii tail.
    TailCheck {
        tau: String,
        #[arg(long)]
        max: usize,
    },
    /// Pattern of minimal entropy among period m.
    MinEntropyPattern { m: u64 },
    /// Closed walks (T^n)_vv at a basic interval.
    Horseshoes {
        pattern: String,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        n: usize,
    },
    /// Uncoupled skew-product on the cylinder.
    Cylinder {
        #[command(subcommand)]
        action: CylinderAction,
    },
}

#[derive(Subcommand, Debug)]
enum PatternAction {
    /// Check that images form a cyclic permutation.
    Validate { images: String },
}

#[derive(Subcommand, Debug)]
enum SharkovskiiAction {
    /// Compare p and q; Greater means p comes first.
    Cmp { p: u64, q: u64 },
}

#[derive(Subcommand, Debug)]
enum CylinderAction {
    /// Horizontal circle orbit and its recovered pattern.
    Orbit { pattern: String },
    /// Trajectory of a point.
    Iterate {
        pattern: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        steps: usize,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn parse_pattern(s: &str) -> std::result::Result<Pattern, Failure> {
    s.parse::<Pattern>()
        .map_err(|e| Failure::Input(format!("invalid pattern {s:?}: {e}")))
}

fn pattern_json(p: &Pattern) -> Value {
    serde_json::to_value(p).expect("pattern serializes")
}

fn render(format: Format, value: &Value, text: impl FnOnce() -> String) -> Outcome {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value).expect("json") + "\n"),
        Format::Text => Ok(text()),
        Format::Dot | Format::Csv => Err(Failure::Input(format!(
            "format {format:?} is not available for this command"
        ))),
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Pattern {
            action: PatternAction::Validate { images },
        } => {
            let p = parse_pattern(&images)?;
            let v = json!({"valid": true, "pattern": pattern_json(&p)});
            render(fmt, &v, || {
                format!("valid pattern of period {}\n", p.period())
            })
        }
        Command::Sharkovskii {
            action: SharkovskiiAction::Cmp { p, q },
        } => {
            if p == 0 || q == 0 {
                return Err(Failure::Input("periods must be positive".into()));
            }
            let ord = format!("{:?}", sharkovskii_compare(p, q));
            let key = |m: u64| {
                let k = sharkovskii_decompose(m);
                json!({"n": k.n, "q": k.q})
            };
            let v = json!({"p": p, "q": q, "order": ord, "p_key": key(p), "q_key": key(q)});
            render(fmt, &v, || format!("{ord}\n"))
        }
        Command::Stefan { q } => {
            let p = stefan_pattern(q)?;
            render(fmt, &pattern_json(&p), || format!("{p}\n"))
        }
        Command::Double { pattern } => {
            let p = double_pattern(&parse_pattern(&pattern)?);
            render(fmt, &pattern_json(&p), || format!("{p}\n"))
        }
        Command::Graph { pattern, dot } => {
            let tau = parse_pattern(&pattern)?;
            let g = SignedGraph::of(&tau);
            if dot || fmt == Format::Dot {
                return Ok(g.to_dot());
            }
            let v = serde_json::to_value(&g).expect("graph serializes");
            render(fmt, &v, || {
                let mut s = String::new();
                for a in g.arrows() {
                    let _ = writeln!(s, "{} -> {} {}", a.from, a.to, a.sign);
                }
                s
            })
        }
        Command::Entropy { pattern, tol } => {
            let tau = parse_pattern(&pattern)?;
            let r = pattern_entropy(&tau, tol)?;
            let poly = char_poly(&SignedGraph::of(&tau).transition_matrix());
            let v = json!({
                "pattern": pattern_json(&tau),
                "char_poly": poly.to_string(),
                "rho": r.rho,
                "rho_exact": [fmt_rational(&r.rho.lo), fmt_rational(&r.rho.hi)],
                "h": r.h,
                "h_bounds": r.h_bounds,
                "method": r.method,
            });
            render(fmt, &v, || format!("h = {:.15}\n", r.h))
        }
        Command::Lambda { q, tol } => {
            let r = lambda_root(q, tol)?;
            let v = json!({
                "q": q,
                "lambda": r,
                "lambda_exact": [fmt_rational(&r.lo), fmt_rational(&r.hi)],
                "log_lambda": r.mid_f64().ln(),
            });
            render(fmt, &v, || format!("lambda_{q} = {:.15}\n", r.mid_f64()))
        }
        Command::Forces { tau, nu } => {
            let b = forces(&parse_pattern(&tau)?, &parse_pattern(&nu)?)?;
            render(fmt, &json!({"forces": b}), || format!("{b}\n"))
        }
        Command::ForcedSet { tau, period } => {
            let set = forced_patterns(&parse_pattern(&tau)?, period)?;
            let v = json!({
                "period": period,
                "patterns": set.iter().map(pattern_json).collect::<Vec<_>>(),
            });
            render(fmt, &v, || set.iter().map(|p| format!("{p}\n")).collect())
        }
        Command::Periods { tau, max } => {
            let ps = periods(&parse_pattern(&tau)?, max)?;
            let v = json!({"max": max, "periods": ps});
            render(fmt, &v, || {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                format!("{}\n", parts.join(" "))
            })
        }
        Command::TailCheck { tau, max } => {
            let t = parse_pattern(&tau)?;
            let ps = periods(&t, max)?;
            let tail = check_sharkovskii_tail(&t, max)?;
            let v = json!({"max": max, "periods": ps, "tail": tail});
            render(fmt, &v, || format!("{tail}\n"))
        }
        Command::MinEntropyPattern { m } => {
            let p = min_entropy_pattern(m)?;
            let h = pattern_entropy(&p, DEFAULT_TOL)?.h;
            let bound = entropy_lower_bound(m)?;
            let v = json!({
                "period": m,
                "pattern": pattern_json(&p),
                "h": h,
                "lower_bound": bound,
            });
            render(fmt, &v, || format!("{p}\n"))
        }
        Command::Horseshoes { pattern, vertex, n } => {
            let tau = parse_pattern(&pattern)?;
            let cert = horseshoe_count(&SignedGraph::of(&tau), vertex, n)?;
            let growth = cert
                .s
                .to_f64()
                .map(|s| if s > 0.0 { s.ln() / n as f64 } else { 0.0 });
            let h = pattern_entropy(&tau, DEFAULT_TOL)?.h;
            let v = json!({"certificate": cert, "log_s_over_n": growth, "h": h});
            render(fmt, &v, || format!("s = {}\n", cert.s))
        }
        Command::Cylinder { action } => cylinder(fmt, action),
    }
}

fn cylinder(fmt: Format, action: CylinderAction) -> Outcome {
    let omega = default_omega();
    match action {
        CylinderAction::Orbit { pattern } => {
            let tau = parse_pattern(&pattern)?;
            let f = UncoupledSkewProduct::new(&tau);
            let orbit = f.horizontal_orbit()?;
            let recovered = f.extract_pattern_from_bands(&orbit.bands)?;
            let graph_matches = f.basic_band_graph(&orbit)? == SignedGraph::of(&tau);
            if recovered != tau || !graph_matches {
                return Err(Failure::Internal(format!(
                    "cylinder round trip failed for {tau}: recovered {recovered}"
                )));
            }
            let v = json!({
                "omega": fmt_decimal(&omega, 30),
                "bands": orbit.bands,
                "pattern": pattern_json(&orbit.pattern),
                "recovered": pattern_json(&recovered),
                "graph_matches": graph_matches,
            });
            render(fmt, &v, || format!("{recovered}\n"))
        }
        CylinderAction::Iterate {
            pattern,
            theta,
            x,
            steps,
        } => {
            let tau = parse_pattern(&pattern)?;
            let f = UncoupledSkewProduct::new(&tau);
            let start = CylinderPoint {
                theta: parse_rational(&theta)?,
                x: parse_rational(&x)?,
            };
            match fmt {
                Format::Csv => Ok(f.trajectory_csv(&start, steps)?),
                _ => {
                    let traj = f.trajectory(&start, steps)?;
                    let rows: Vec<Value> = traj
                        .iter()
                        .enumerate()
                        .map(|(k, p)| {
                            json!({"k": k, "theta": fmt_decimal(&p.theta, 30), "x": fmt_rational(&p.x)})
                        })
                        .collect();
                    let v = json!({"omega": fmt_decimal(&omega, 30), "trajectory": rows});
                    render(fmt, &v, || {
                        traj.iter()
                            .map(|p| {
                                format!("{} {}\n", fmt_decimal(&p.theta, 12), fmt_rational(&p.x))
                            })
                            .collect()
                    })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
