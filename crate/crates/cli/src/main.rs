mod checks;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gbern::bernoulli::{family, gb_numbers, gb_polynomial};
use gbern::em::{em_composite, l2_norm_sq, mean_value, parseval_rhs, sup_norm};
use gbern::fourier::{dirichlet_average, fourier_coeffs, fourier_partial_sum, sample_tables};
use gbern::function::{exp, PowerFunction};
use gbern::rational::{factorial_q, floor, format_rational, int, parse_rational, Rational};
use gbern::scalar::format_decimal;
use gbern::series::{convergence_verdict, estimate_series};
use gbern::zeta::{euler_zeta, zeta2_via_midpoint, zeta_even_via_gb, PiMultiple};
use gbern::{BigFloat, Error, Real};

use output::{render, Format};

#[derive(Parser, Debug)]
#[command(name = "gbern", version, about = "Generalized Bernoulli polynomials, zeta values and Euler-Maclaurin sums")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "GBERN_PRECISION", default_value_t = 256)]
    precision: usize,
    /// Significant decimal digits in the output.
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Peri12,
    Htyq1,
    Euler,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Core,
    Fourier,
    Zeta,
    Quad,
    Series,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Numbers B_0 .. B_N of level m.
    Numbers {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Coefficients of B_n of level m, ascending degree.
    Poly {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// B_n(x), or the periodic p_n(x) = B_n({x})/n!, exactly.
    Eval {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        periodic: bool,
    },
    /// Fourier coefficients of p_n up to K.
    Fourier {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "K", visible_alias = "k")]
        k: usize,
        /// Also evaluate the partial sum at this point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// zeta(2r) as a rational multiple of pi^(2r).
    ZetaEven {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Via::Htyq1)]
        via: Via,
    },
    /// sum_{j>=1} j^(-s) by the level-m estimator.
    ZetaOdd {
        #[arg(long)]
        s: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u64,
    },
    /// Composite Euler-Maclaurin rule of level m.
    Quad {
        /// `exp` or `power:S` for x^(-S).
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        nsub: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
    /// L2 norm, sup norm, mean and the Parseval sum of B_n.
    Norms {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Runs the invariant suites.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Sample tables of B_n on [0, 1] and p_n on [-1, 2].
    ExportPlot {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Times the estimator for x^(-s) across levels.
    Bench {
        #[arg(long, default_value = "3")]
        s: String,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        max_level: usize,
    },
}

enum Failure {
    Usage(String),
    Check(Value),
    Tail(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLevel(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::DerivativeOrder { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::TailNotCertifiable(_) | Error::Missing(_) => Failure::Tail(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

struct Ctx {
    prec: usize,
    digits: usize,
}

impl Ctx {
    fn dec(&self, x: &BigFloat) -> String {
        format_decimal(x, self.digits)
    }

    fn bound(&self, x: &BigFloat) -> String {
        x.to_sci(6)
    }

    fn real(&self, q: &Rational) -> BigFloat {
        BigFloat::from_rational(q, self.prec)
    }
}

fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_arg(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|_| Failure::Usage(format!("cannot parse {s:?} as a number")))
}

fn numbers(m: usize, nmax: usize) -> Result<Value, Failure> {
    Ok(json!({ "m": m, "numbers": rational_strings(&gb_numbers(m, nmax)?) }))
}

fn poly(m: usize, n: usize) -> Result<Value, Failure> {
    Ok(json!({ "m": m, "n": n, "coeffs": gb_polynomial(m, n)?.coeff_strings() }))
}

fn eval(ctx: &Ctx, m: usize, n: usize, x: &str, periodic: bool) -> Result<Value, Failure> {
    let xq = parse_arg(x)?;
    let p = gb_polynomial(m, n)?;
    let value = if periodic {
        let frac = &xq - Rational::from_integer(floor(&xq));
        p.eval(&frac) / factorial_q(n)
    } else {
        p.eval(&xq)
    };
    Ok(json!({
        "m": m,
        "n": n,
        "x": format_rational(&xq),
        "periodic": periodic,
        "value": format_rational(&value),
        "decimal": ctx.dec(&ctx.real(&value)),
    }))
}

fn fourier(ctx: &Ctx, m: usize, n: usize, k: usize, at: Option<&str>) -> Result<Value, Failure> {
    let c = fourier_coeffs::<BigFloat>(m, n, k, ctx.prec)?;
    let mut out = json!({
        "m": m,
        "n": n,
        "a0": format_rational(&c.a0),
        "a": c.a.iter().map(|v| ctx.dec(v)).collect::<Vec<_>>(),
        "b": c.b.iter().map(|v| ctx.dec(v)).collect::<Vec<_>>(),
        "K": k,
    });
    if let Some(at) = at {
        let xq = parse_arg(at)?;
        let x = ctx.real(&xq);
        let s = fourier_partial_sum(m, n, &x, k)?;
        let frac = &xq - Rational::from_integer(floor(&xq));
        let target = if frac == int(0) {
            dirichlet_average(m, n)?
        } else {
            gb_polynomial(m, n)?.eval(&frac) / factorial_q(n)
        };
        out["at"] = json!({
            "x": format_rational(&xq),
            "partial_sum": ctx.dec(&s),
            "limit": format_rational(&target),
            "difference": ctx.bound(&(s - ctx.real(&target)).abs()),
        });
    }
    Ok(out)
}

fn pi_multiple(ctx: &Ctx, z: &PiMultiple, m: usize) -> Value {
    json!({ "r": z.r, "m": m, "q": z.q_string(), "decimal": z.decimal::<BigFloat>(ctx.prec, ctx.digits) })
}

fn zeta_even_cmd(ctx: &Ctx, r: usize, m: usize, via: Via) -> Result<Value, Failure> {
    let z = match via {
        Via::Peri12 => {
            if r != 1 {
                return Err(Failure::Usage("--via peri12 gives zeta(2) only; use --r 1".into()));
            }
            zeta2_via_midpoint(m)?
        }
        Via::Htyq1 => zeta_even_via_gb(m, r)?,
        Via::Euler => euler_zeta(r)?,
    };
    Ok(pi_multiple(ctx, &z, m))
}

fn power_exponent(s: &str) -> Result<PowerFunction, Failure> {
    let q = parse_arg(s)?;
    PowerFunction::new(q).map_err(Failure::from)
}

fn zeta_odd(ctx: &Ctx, s: &str, m: usize, r: usize, p: u64) -> Result<Value, Failure> {
    let pf = power_exponent(s)?;
    if pf.s <= int(1) {
        return Err(Failure::Usage("the series diverges for s <= 1".into()));
    }
    let fs = pf.stack::<BigFloat>()?;
    let e = estimate_series(&fs, m, r, p, ctx.prec)?;
    Ok(json!({
        "s": format_rational(&pf.s),
        "m": m,
        "r": r,
        "p": p,
        "value": ctx.dec(&e.value),
        "components": {
            "integral_tail": ctx.dec(&e.integral_tail),
            "partial_sum": ctx.dec(&e.partial_sum),
            "sigma_tilde": ctx.dec(&e.sigma_tilde),
            "sigma_inf": ctx.dec(&e.sigma_inf),
            "e_tail": ctx.dec(&e.e_tail),
            "delta_tail": ctx.dec(&e.delta_tail),
        },
        "error_bound": ctx.bound(&e.error_bound),
        "e_error": ctx.bound(&e.e_error),
        "delta_error": ctx.bound(&e.delta_error),
        "rounding": ctx.bound(&e.rounding),
        "delta_bound": ctx.bound(&e.delta_bound),
        "delta_bound_unscaled": ctx.bound(&e.delta_bound_unscaled),
        "verdict": convergence_verdict(&fs, m, r, ctx.prec).as_str(),
    }))
}

fn quad(ctx: &Ctx, f: &str, a: &str, b: &str, nsub: usize, m: usize, r: usize) -> Result<Value, Failure> {
    let fs = match f {
        "exp" => exp::<BigFloat>()?,
        other => match other.strip_prefix("power:") {
            Some(s) => power_exponent(s)?.stack::<BigFloat>()?,
            None => return Err(Failure::Usage(format!("unknown function {other:?}; use exp or power:S"))),
        },
    };
    let (aq, bq) = (parse_arg(a)?, parse_arg(b)?);
    if f != "exp" && aq <= int(0) {
        return Err(Failure::Usage("power functions need a > 0".into()));
    }
    let (av, bv) = (ctx.real(&aq), ctx.real(&bq));
    let rep = em_composite(&fs, &av, &bv, nsub, m, r)?;
    let mut out = json!({
        "main_sum": ctx.dec(&rep.main_sum),
        "remainder": ctx.dec(&rep.remainder),
        "remainder_bound": ctx.bound(&rep.remainder_bound),
        "total": ctx.dec(&rep.total),
    });
    if let Some(exact) = fs.exact_integral(&av, &bv) {
        out["exact"] = json!(ctx.dec(&exact));
        out["total_error"] = json!(ctx.bound(&(rep.total - exact).abs()));
    }
    Ok(out)
}

fn norms(ctx: &Ctx, m: usize, n: usize) -> Result<Value, Failure> {
    let fam = family(m)?;
    let l2 = l2_norm_sq(m, n)?;
    let mu: BigFloat = sup_norm(m, n, ctx.prec)?;
    Ok(json!({
        "m": m,
        "n": n,
        "l2_norm_sq": format_rational(&l2),
        "l2_norm_sq_decimal": ctx.dec(&ctx.real(&l2)),
        "sup_norm": ctx.dec(&mu),
        "mean": format_rational(&mean_value(m, n)?),
        "parseval_sum": format_rational(&parseval_rhs(m, n)?),
        "jump": format_rational(&fam.jump(n)),
    }))
}

fn export_plot(ctx: &Ctx, m: usize, n: usize, samples: usize) -> Result<Value, Failure> {
    let (poly, per) = sample_tables::<BigFloat>(m, n, samples, ctx.prec)?;
    let rows = |t: &[(BigFloat, BigFloat)]| -> Vec<Value> {
        t.iter().map(|(x, y)| json!([ctx.dec(x), ctx.dec(y)])).collect()
    };
    Ok(json!({ "m": m, "n": n, "polynomial": rows(&poly), "periodic": rows(&per) }))
}

fn bench(ctx: &Ctx, s: &str, r: usize, p: u64, max_level: usize) -> Result<Value, Failure> {
    let fs = power_exponent(s)?.stack::<BigFloat>()?;
    let mut runs = Vec::new();
    for m in 1..=max_level {
        let t = Instant::now();
        let e = estimate_series(&fs, m, r, p, ctx.prec)?;
        runs.push(json!({
            "m": m,
            "seconds": t.elapsed().as_secs_f64(),
            "value": ctx.dec(&e.value),
            "error_bound": ctx.bound(&e.error_bound),
        }));
    }
    Ok(json!({ "s": s, "r": r, "p": p, "runs": runs }))
}

fn check(ctx: &Ctx, suite: Suite) -> Result<Value, Failure> {
    let names: &[&str] = match suite {
        Suite::Core => &["core"],
        Suite::Fourier => &["fourier"],
        Suite::Zeta => &["zeta"],
        Suite::Quad => &["quad"],
        Suite::Series => &["series"],
        Suite::All => &["core", "fourier", "zeta", "quad", "series"],
    };
    let mut all_pass = true;
    let mut results = Vec::new();
    for name in names {
        for c in checks::run(name, ctx.prec) {
            eprintln!("{} {name}/{}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
            all_pass &= c.pass;
            results.push(json!({ "suite": name, "name": c.name, "pass": c.pass, "detail": c.detail }));
        }
    }
    let out = json!({ "passed": all_pass, "checks": results });
    if all_pass {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    if cli.precision < 64 {
        return Err(Failure::Usage(format!("--precision must be at least 64, got {}", cli.precision)));
    }
    let max_digits = (cli.precision as f64 * 0.3).floor() as usize;
    if cli.digits == 0 || cli.digits > max_digits {
        return Err(Failure::Usage(format!("--digits must be between 1 and {max_digits} at this precision")));
    }
    let ctx = Ctx { prec: cli.precision, digits: cli.digits };
    match &cli.command {
        Command::Numbers { m, nmax } => numbers(*m, *nmax),
        Command::Poly { m, n } => poly(*m, *n),
        Command::Eval { m, n, x, periodic } => eval(&ctx, *m, *n, x, *periodic),
        Command::Fourier { m, n, k, at } => fourier(&ctx, *m, *n, *k, at.as_deref()),
        Command::ZetaEven { r, m, via } => zeta_even_cmd(&ctx, *r, *m, *via),
        Command::ZetaOdd { s, m, r, p } => zeta_odd(&ctx, s, *m, *r, *p),
        Command::Quad { f, a, b, nsub, m, r } => quad(&ctx, f, a, b, *nsub, *m, *r),
        Command::Norms { m, n } => norms(&ctx, *m, *n),
        Command::Check { suite } => check(&ctx, *suite),
        Command::ExportPlot { m, n, samples } => export_plot(&ctx, *m, *n, *samples),
        Command::Bench { s, r, p, max_level } => bench(&ctx, s, *r, *p, *max_level),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            println!("{}", render(&v, cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Check(v)) => {
            println!("{}", render(&v, cli.format));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Tail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(e: Error) -> u8 {
        match Failure::from(e) {
            Failure::Usage(_) => 2,
            Failure::Tail(_) => 3,
            Failure::Check(_) | Failure::Other(_) => 1,
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(Error::TailNotCertifiable("x".into())), 3);
        assert_eq!(code(Error::Missing("a tail")), 3);
        assert_eq!(code(Error::InvalidLevel(0)), 2);
        assert_eq!(code(Error::Inconsistent("x".into())), 1);
    }
}
