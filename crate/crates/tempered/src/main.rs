//! Command-line front end: parse expressions, dispatch to the library, and
//! emit machine-readable verdicts.
//!
//! Exit codes: 0 for decided verdicts and successful reports, 1 for usage or
//! parse errors, 2 for inconclusive or empirical-only verdicts.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

use tempered::config::Config;
use tempered::expr::{eval, eval_approx, expr_from_str, expr_to_json, infer_dim, SeqExpr};
use tempered::growth::{
    audit_lower, audit_upper, infer_certificate, GrowthCertificate, LowerCertificate, Scope,
};
use tempered::ideals::{
    classify_principal_prime, fixed_maximal_member, maximality_witness, nonfixed_ideal_member,
    separator,
};
use tempered::krull::{
    chain_report, membership_bounded, membership_divergent, membership_dyadic_vanishing,
    pattern_mask, zero_order,
};
use tempered::lattice::{LatticePoint, Window};
use tempered::number::rat_from_str;
use tempered::report;
use tempered::ring::{divides, gcd, ideal_member, is_invertible, principal_generator};
use tempered::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tempered",
    about = "Exact computation in the ring of polynomial-growth lattice sequences",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Ambient dimension (inferred from inputs when omitted)
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Window radius for audits and fits
    #[arg(long, short = 'R', alias = "R", global = true, default_value_t = tempered::config::DEFAULT_RADIUS)]
    radius: u64,
    /// Probe horizon along the dyadic axis
    #[arg(long, short = 'K', alias = "K", global = true, default_value_t = tempered::config::DEFAULT_HORIZON)]
    horizon: u32,
    /// Zero-order scan cap
    #[arg(long, global = true, default_value_t = tempered::config::DEFAULT_ZERO_ORDER_CAP)]
    cap: u64,
    /// Largest certificate degree tried by window fits
    #[arg(long, global = true, default_value_t = tempered::config::DEFAULT_M_CAP)]
    m_cap: u32,
    /// Precision for approximate evaluation, in bits
    #[arg(long, global = true, default_value_t = tempered::config::DEFAULT_PRECISION_BITS)]
    precision_bits: u32,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at a lattice point (exact, or certified
    /// approximate when the expression contains a formal square root)
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        point: String,
    },
    /// Infer a global growth certificate structurally
    CertInfer {
        #[arg(long)]
        expr: String,
    },
    /// Audit a certificate on a window ((M, m) upper by default; lower with
    /// --lower and --delta)
    CertAudit {
        #[arg(long)]
        expr: String,
        #[arg(long, short = 'M')]
        bound: Option<String>,
        #[arg(long, short = 'm')]
        degree: u32,
        #[arg(long)]
        lower: bool,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Does g divide f?
    Divides {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// Is the expression invertible?
    Invertible {
        #[arg(long)]
        expr: String,
    },
    /// Magnitude-max greatest common divisor of a generator list
    Gcd {
        #[arg(long)]
        gens: String,
    },
    /// Ideal membership with explicit cofactors
    Member {
        #[arg(long)]
        f: String,
        #[arg(long)]
        gens: String,
    },
    /// Principalize a finitely generated ideal
    Principal {
        #[arg(long)]
        gens: String,
    },
    /// Membership in the fixed maximal ideal at a point
    MaximalMember {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        point: String,
    },
    /// Membership in the diagonal decay ideal along a subsequence
    NonfixedMember {
        #[arg(long)]
        expr: String,
        /// Strictly increasing positive integers as a JSON array; defaults
        /// to 1..=horizon
        #[arg(long)]
        subseq: Option<String>,
    },
    /// Classify the principal ideal generated by an expression
    ClassifyPrime {
        #[arg(long)]
        expr: String,
    },
    /// Separator for two distinct fixed maximal ideals
    Separator {
        #[arg(long)]
        n1: String,
        #[arg(long)]
        n2: String,
    },
    /// Zero-order of an expression at a point
    ZeroOrder {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        point: String,
    },
    /// Emit the dyadic mask family member of the given order
    Mask {
        #[arg(long)]
        order: u32,
    },
    /// Membership in the dyadic set families
    KrullMember {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum)]
        set: KrullSetArg,
        /// Degree for the divergent/bounded families
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Family memberships, ratio table, and disjointness evidence
    ChainReport {
        #[arg(long = "N")]
        levels: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KrullSetArg {
    Vanishing,
    Divergent,
    Bounded,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(&cli) {
        Ok((value, decided)) => {
            match cli.opts.format {
                Format::Json => print!("{}", report::canonical_string(&value)),
                Format::Text => print!("{}", report::render_text(&value)),
            }
            if decided {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_source(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::parse("stdin", e.to_string()))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::parse(arg, e.to_string()))
    }
}

fn load_expr(arg: &str, dim: Option<usize>) -> Result<SeqExpr> {
    expr_from_str(&read_source(arg)?, dim)
}

/// Load two expressions with a jointly inferred ambient dimension.
fn load_expr_pair(a: &str, b: &str, dim: Option<usize>) -> Result<(SeqExpr, SeqExpr)> {
    let text_a = read_source(a)?;
    let text_b = read_source(b)?;
    let parse_doc = |text: &str, src: &str| -> Result<Value> {
        serde_json::from_str(text).map_err(|e| Error::parse(src, format!("invalid JSON: {e}")))
    };
    let doc_a = parse_doc(&text_a, a)?;
    let doc_b = parse_doc(&text_b, b)?;
    let dim = dim
        .or_else(|| infer_dim(&doc_a))
        .or_else(|| infer_dim(&doc_b))
        .ok_or_else(|| Error::parse(a, "ambient dimension is neither given nor inferable"))?;
    Ok((
        tempered::expr::expr_from_json(&doc_a, dim)?,
        tempered::expr::expr_from_json(&doc_b, dim)?,
    ))
}

fn load_generators(arg: &str, dim: Option<usize>) -> Result<Vec<SeqExpr>> {
    let text = read_source(arg)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(arg, format!("invalid JSON: {e}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::parse(arg, "expected a JSON array of expressions"))?;
    if items.is_empty() {
        return Err(Error::EmptyList);
    }
    let dim = match dim.or_else(|| items.iter().find_map(infer_dim)) {
        Some(d) => d,
        None => {
            return Err(Error::parse(
                arg,
                "ambient dimension is neither given nor inferable",
            ))
        }
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            tempered::expr::expr_from_json(v, dim).map_err(|e| match e {
                Error::Parse { path, message } => Error::parse(
                    format!("{arg}[{i}]{}", path.trim_start_matches('$')),
                    message,
                ),
                other => other,
            })
        })
        .collect()
}

fn parse_point(arg: &str, dim: Option<usize>) -> Result<LatticePoint> {
    let value: Value = serde_json::from_str(arg)
        .map_err(|e| Error::parse("point", format!("invalid JSON array: {e}")))?;
    let coords = value
        .as_array()
        .ok_or_else(|| Error::parse("point", "expected a JSON array of integers"))?
        .iter()
        .map(|v| {
            v.as_i64()
                .ok_or_else(|| Error::parse("point", "coordinates must be integers"))
        })
        .collect::<Result<Vec<i64>>>()?;
    if coords.is_empty() {
        return Err(Error::parse("point", "points need dimension >= 1"));
    }
    if let Some(d) = dim {
        if coords.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: coords.len(),
            });
        }
    }
    Ok(LatticePoint::new(coords))
}

fn config_of(opts: &GlobalOpts) -> Config {
    Config {
        dim: opts.dim,
        radius: opts.radius,
        horizon: opts.horizon,
        zero_order_cap: opts.cap,
        m_cap: opts.m_cap,
        precision_bits: opts.precision_bits,
    }
}

fn positive_rational(text: &str, what: &str) -> Result<num_rational::BigRational> {
    let value = rat_from_str(text)?;
    if value <= num_rational::BigRational::from_integer(0.into()) {
        return Err(Error::Unsupported(format!("{what} must be positive")));
    }
    Ok(value)
}

fn validate(cfg: &Config) -> Result<()> {
    if cfg.radius > 10_000_000 {
        return Err(Error::BudgetExceeded("window radius capped at 10^7".into()));
    }
    if cfg.zero_order_cap == 0 {
        return Err(Error::Unsupported("zero-order cap must be >= 1".into()));
    }
    if cfg.precision_bits == 0 || cfg.precision_bits > 1 << 20 {
        return Err(Error::Unsupported(
            "precision must lie in 1..=2^20 bits".into(),
        ));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    let cfg = config_of(&cli.opts);
    validate(&cfg)?;
    match &cli.command {
        Command::Eval { expr, point } => {
            let p = parse_point(point, cfg.dim)?;
            let f = load_expr(expr, cfg.dim.or(Some(p.dim())))?;
            let body = if f.contains_half_root() {
                let v = eval_approx(&f, &p, cfg.precision_bits)?;
                json!({
                    "point": report::point_json(&p),
                    "value": report::gaussian_json(&v.value),
                    "abs_err": report::rational_json(&v.abs_err),
                    "approximate": true,
                    "scope": "global",
                })
            } else {
                let v = eval(&f, &p)?;
                json!({
                    "point": report::point_json(&p),
                    "value": report::gaussian_json(&v),
                    "scope": "global",
                })
            };
            Ok((report::envelope("eval", cfg.to_json(f.dim()), body), true))
        }
        Command::CertInfer { expr } => {
            let f = load_expr(expr, cfg.dim)?;
            let cert = infer_certificate(&f)?;
            let body = json!({
                "certificate": report::certificate_json(&cert),
                "scope": "global",
            });
            Ok((
                report::envelope("cert-infer", cfg.to_json(f.dim()), body),
                true,
            ))
        }
        Command::CertAudit {
            expr,
            bound,
            degree,
            lower,
            delta,
        } => {
            let f = load_expr(expr, cfg.dim)?;
            let window = Window::new(f.dim(), cfg.radius);
            let audit = if *lower {
                let delta = delta
                    .as_deref()
                    .ok_or_else(|| Error::Unsupported("--lower requires --delta".into()))?;
                let cert = LowerCertificate::new(positive_rational(delta, "delta")?, *degree);
                audit_lower(&f, &cert, &window)?
            } else {
                let bound = bound.as_deref().ok_or_else(|| {
                    Error::Unsupported("upper audits require --bound (-M)".into())
                })?;
                let cert =
                    GrowthCertificate::new(positive_rational(bound, "the bound M")?, *degree);
                audit_upper(&f, &cert, &window)?
            };
            let body = json!({"report": report::audit_json(&audit, Scope::Window(cfg.radius))});
            Ok((
                report::envelope("cert-audit", cfg.to_json(f.dim()), body),
                true,
            ))
        }
        Command::Divides { g, f } => {
            let (g, f) = load_expr_pair(g, f, cfg.dim)?;
            let window = Window::new(g.dim(), cfg.radius);
            let verdict = divides(&g, &f, &window, cfg.m_cap)?;
            let (body, decided) = report::divides_json(&verdict)?;
            Ok((
                report::envelope("divides", cfg.to_json(g.dim()), body),
                decided,
            ))
        }
        Command::Invertible { expr } => {
            let f = load_expr(expr, cfg.dim)?;
            let window = Window::new(f.dim(), cfg.radius);
            let verdict = is_invertible(&f, &window, cfg.m_cap)?;
            let (body, decided) = report::invertibility_json(&verdict)?;
            Ok((
                report::envelope("invertible", cfg.to_json(f.dim()), body),
                decided,
            ))
        }
        Command::Gcd { gens } => {
            let generators = load_generators(gens, cfg.dim)?;
            let d = gcd(&generators)?;
            let body = json!({
                "gcd": expr_to_json(&d)?,
                "zero_set": report::zero_set_json(&tempered::zero_set(&d)),
                "scope": "global",
            });
            Ok((report::envelope("gcd", cfg.to_json(d.dim()), body), true))
        }
        Command::Member { f, gens } => {
            let f_doc: Value = serde_json::from_str(&read_source(f)?)
                .map_err(|e| Error::parse(f, format!("invalid JSON: {e}")))?;
            let generators = load_generators(gens, cfg.dim.or_else(|| infer_dim(&f_doc)))?;
            let f = tempered::expr::expr_from_json(&f_doc, generators[0].dim())?;
            let window = Window::new(f.dim(), cfg.radius);
            let verdict = ideal_member(&f, &generators, &window, cfg.m_cap)?;
            let (body, decided) = report::membership_json(&verdict)?;
            Ok((
                report::envelope("member", cfg.to_json(f.dim()), body),
                decided,
            ))
        }
        Command::Principal { gens } => {
            let generators = load_generators(gens, cfg.dim)?;
            let window = Window::new(generators[0].dim(), cfg.radius);
            let report_data = principal_generator(&generators, &window, cfg.m_cap)?;
            let (body, decided) = report::principal_json(&report_data)?;
            Ok((
                report::envelope("principal", cfg.to_json(generators[0].dim()), body),
                decided,
            ))
        }
        Command::MaximalMember { expr, point } => {
            let p = parse_point(point, cfg.dim)?;
            let f = load_expr(expr, cfg.dim.or(Some(p.dim())))?;
            let member = fixed_maximal_member(&f, &p)?;
            let window = Window::new(f.dim(), cfg.radius);
            let witness = if member {
                Value::Null
            } else {
                // for nonmembers, the complementary unit decomposition
                let (g, checked) = maximality_witness(&p, &f, &window)?;
                json!({
                    "complement": expr_to_json(&g)?,
                    "unit_check": checked,
                })
            };
            let body = json!({
                "member": member,
                "point": report::point_json(&p),
                "maximality_witness": witness,
                "scope": "global",
            });
            Ok((
                report::envelope("maximal-member", cfg.to_json(f.dim()), body),
                true,
            ))
        }
        Command::NonfixedMember { expr, subseq } => {
            let f = load_expr(expr, cfg.dim)?;
            let subsequence: Vec<u64> = match subseq {
                Some(text) => serde_json::from_str(text)
                    .map_err(|e| Error::parse("subseq", format!("invalid JSON array: {e}")))?,
                None => (1..=cfg.horizon as u64).collect(),
            };
            let verdict = nonfixed_ideal_member(&f, &subsequence)?;
            let (body, decided) = report::nonfixed_json(&verdict);
            Ok((
                report::envelope("nonfixed-member", cfg.to_json(f.dim()), body),
                decided,
            ))
        }
        Command::ClassifyPrime { expr } => {
            let d = load_expr(expr, cfg.dim)?;
            let window = Window::new(d.dim(), cfg.radius);
            let classification = classify_principal_prime(&d, &window, cfg.m_cap)?;
            let (body, decided) = report::classification_json(&classification)?;
            Ok((
                report::envelope("classify-prime", cfg.to_json(d.dim()), body),
                decided,
            ))
        }
        Command::Separator { n1, n2 } => {
            let p1 = parse_point(n1, cfg.dim)?;
            let p2 = parse_point(n2, cfg.dim)?;
            let s = separator(&p1, &p2)?;
            let body = json!({
                "separator": expr_to_json(&s)?,
                "in_ideal_at": report::point_json(&p1),
                "not_in_ideal_at": report::point_json(&p2),
                "scope": "global",
            });
            Ok((
                report::envelope("separator", cfg.to_json(p1.dim()), body),
                true,
            ))
        }
        Command::ZeroOrder { expr, point } => {
            let p = parse_point(point, cfg.dim)?;
            let f = load_expr(expr, cfg.dim.or(Some(p.dim())))?;
            let order = zero_order(&f, &p, cfg.zero_order_cap)?;
            let body = json!({
                "point": report::point_json(&p),
                "cap": cfg.zero_order_cap,
                "order": report::zero_order_json(&order),
                "scope": "global",
            });
            Ok((
                report::envelope("zero-order", cfg.to_json(f.dim()), body),
                true,
            ))
        }
        Command::Mask { order } => {
            let dim = cfg.dim.unwrap_or(1);
            let f = pattern_mask(dim, *order)?;
            let body = json!({
                "expr": expr_to_json(&f)?,
                "order": order,
                "scope": "global",
            });
            Ok((report::envelope("mask", cfg.to_json(dim), body), true))
        }
        Command::KrullMember { expr, set, degree } => {
            let f = load_expr(expr, cfg.dim)?;
            let membership = match set {
                KrullSetArg::Vanishing => membership_dyadic_vanishing(&f, cfg.horizon)?,
                KrullSetArg::Divergent => membership_divergent(&f, *degree, cfg.horizon)?,
                KrullSetArg::Bounded => membership_bounded(&f, *degree, cfg.horizon)?,
            };
            let (body, decided) = report::krull_membership_json(&membership);
            Ok((
                report::envelope("krull-member", cfg.to_json(f.dim()), body),
                decided,
            ))
        }
        Command::ChainReport { levels } => {
            let dim = cfg.dim.unwrap_or(1);
            let data = chain_report(dim, *levels, cfg.horizon)?;
            let body = report::chain_report_json(&data);
            let decided =
                data.disjointness_violations.is_empty() && data.nesting_violations.is_empty();
            Ok((
                report::envelope("chain-report", cfg.to_json(dim), body),
                decided,
            ))
        }
    }
}
