//! `mgf`: evaluate matrix special functions, classify series and run the
//! identity suite from the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mgf_core::gammamat::{gamma_mat, pochhammer, rgamma_mat};
use mgf_core::hyper::{classify_pfq, classify_rrs, eval_pfq_with, eval_rrs_with, ParamSet};
use mgf_core::identities::{self, IdentityReport, Profile};
use mgf_core::incexp::{classify_res, eval_e_with, eval_res_with, IncExpParams, IncKind};
use mgf_core::incgamma::{gamma_star, lower_inc_gamma_with, upper_inc_gamma_with};
use mgf_core::matcore::{complex_power, real_power};
use mgf_core::series::{SeriesControl, SeriesResult, DEFAULT_TERM_CAP};
use mgf_core::{CMatrix, MgfError, Result, C64};

const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Parser, Debug)]
#[command(name = "mgf", version, about = "Matrix gamma and incomplete exponential functions")]
struct Cli {
    /// Series tolerance for `eval` and `sample`; for `check`, overrides every entry's tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Maximum number of series terms.
    #[arg(long, global = true, env = "MGF_TERM_CAP", default_value_t = DEFAULT_TERM_CAP)]
    term_cap: usize,

    /// Seed for every random draw (decimal or 0x-prefixed hex).
    #[arg(long, global = true, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function.
    Eval {
        #[arg(value_enum)]
        function: Function,
        #[command(flatten)]
        args: FnArgs,
    },
    /// Run one identity, or all of them.
    Check {
        /// Identity id such as EQ-2.4, or `all`.
        id: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value = "quick")]
        profile: String,
    },
    /// Tabulate a function along a real segment of x, u or z.
    Sample {
        #[arg(value_enum)]
        function: SampleFn,
        #[arg(long, value_enum)]
        var: SweepVar,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[command(flatten)]
        args: FnArgs,
    },
    /// Convergence class of a series from its parameters.
    Classify {
        #[arg(long, value_enum)]
        family: Family,
        /// Parameter file: {"upper": [...], "lower": [...], "P": ..., "Q": ...}.
        #[arg(long)]
        params: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Function {
    Gamma,
    Rgamma,
    Pochhammer,
    IncGammaLower,
    IncGammaUpper,
    GammaStar,
    #[value(name = "pFq")]
    PFq,
    #[value(name = "rRs")]
    RRs,
    #[value(name = "inc-exp-e")]
    IncExpLower,
    #[value(name = "inc-exp-E")]
    IncExpUpper,
    #[value(name = "res")]
    ResLower,
    #[value(name = "rEs")]
    ResUpper,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SampleFn {
    #[value(name = "inc-gamma-lower")]
    IncGammaLower,
    #[value(name = "inc-gamma-upper")]
    IncGammaUpper,
    GammaStar,
    /// `‖x^Q γ*(Q,x) − I‖₂`.
    GammaStarLimit,
    #[value(name = "inc-exp-e")]
    IncExpLower,
    #[value(name = "inc-exp-E")]
    IncExpUpper,
    #[value(name = "res")]
    ResLower,
    #[value(name = "rEs")]
    ResUpper,
    /// Residual of `Σ_k (−C)_k/k! e[A; C+(1−k)I](z) u^k = (1−u)^C e[A; C+I](z(1−u))`,
    /// with `C` the single lower parameter of the parameter file.
    BinomialSum,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SweepVar {
    X,
    U,
    Z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "pFq")]
    PFq,
    #[value(name = "rRs")]
    RRs,
    #[value(name = "res")]
    ResLower,
    #[value(name = "rEs")]
    ResUpper,
}

#[derive(Args, Debug, Clone, Default)]
struct FnArgs {
    /// Matrix argument of gamma, rgamma and pochhammer.
    #[arg(long = "A")]
    a: Option<PathBuf>,
    /// Matrix parameter of the incomplete functions.
    #[arg(long = "Q")]
    q: Option<PathBuf>,
    /// Parameter file for pFq, rRs, res and rEs.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    x: Option<f64>,
    /// Complex scalar written `a+bi`.
    #[arg(long, value_parser = parse_complex)]
    u: Option<C64>,
    /// Complex scalar written `a+bi`.
    #[arg(long, value_parser = parse_complex)]
    z: Option<C64>,
    #[arg(long)]
    n: Option<usize>,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed '{s}': {e}"))
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    if s.chars().any(char::is_whitespace) {
        return Err(format!("complex numbers are written a+bi without spaces, got '{s}'"));
    }
    s.parse::<C64>().map_err(|_| format!("cannot read '{s}' as a complex number a+bi"))
}

fn parse_failure(message: String) -> MgfError {
    MgfError::Parse {
        line: 0,
        column: 0,
        message,
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| MgfError::Io(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<CMatrix> {
    CMatrix::from_json_str(&read_text(path)?)
}

fn matrix_list(v: Option<&Value>) -> Result<Vec<CMatrix>> {
    match v {
        None => Ok(Vec::new()),
        Some(Value::Array(items)) => items.iter().map(CMatrix::from_json_value).collect(),
        Some(_) => Err(parse_failure("expected an array of matrices".into())),
    }
}

/// Reads `{"upper": [...], "lower": [...], "P": ..., "Q": ...}`; `P` and `Q`
/// are required only when `with_pq` is set.
fn read_params(path: &Path, with_pq: bool) -> Result<ParamSet> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| MgfError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let upper = matrix_list(v.get("upper"))?;
    let lower = matrix_list(v.get("lower"))?;
    if !with_pq {
        return ParamSet::hypergeometric(upper, lower);
    }
    let p = v.get("P").ok_or_else(|| parse_failure("parameter file needs \"P\"".into()))?;
    let q = v.get("Q").ok_or_else(|| parse_failure("parameter file needs \"Q\"".into()))?;
    ParamSet::new(upper, lower, CMatrix::from_json_value(p)?, CMatrix::from_json_value(q)?)
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| parse_failure(format!("missing --{name}")))
}

fn need_path<'a>(v: &'a Option<PathBuf>, name: &str) -> Result<&'a Path> {
    v.as_deref().ok_or_else(|| parse_failure(format!("missing --{name}")))
}

struct Outcome {
    value: CMatrix,
    terms_used: Option<usize>,
    tail_estimate: Option<f64>,
    convergence: Option<Value>,
}

impl Outcome {
    fn plain(value: CMatrix) -> Self {
        Outcome {
            value,
            terms_used: None,
            tail_estimate: None,
            convergence: None,
        }
    }

    fn series(r: SeriesResult) -> Self {
        Outcome {
            convergence: r.convergence.map(|c| serde_json::to_value(c).expect("class serializes")),
            value: r.value,
            terms_used: Some(r.terms_used),
            tail_estimate: Some(r.tail_estimate),
        }
    }
}

fn res_params(args: &FnArgs, kind: IncKind) -> Result<IncExpParams> {
    let base = read_params(need_path(&args.params, "params")?, true)?;
    IncExpParams::new(base, need(args.x, "x")?, kind)
}

fn eval(f: Function, args: &FnArgs, ctl: SeriesControl) -> Result<Outcome> {
    let matrix = |p: &Option<PathBuf>, name: &str| read_matrix(need_path(p, name)?);
    Ok(match f {
        Function::Gamma => Outcome::plain(gamma_mat(&matrix(&args.a, "A")?)?),
        Function::Rgamma => Outcome::plain(rgamma_mat(&matrix(&args.a, "A")?)?),
        Function::Pochhammer => Outcome::plain(pochhammer(&matrix(&args.a, "A")?, need(args.n, "n")?)),
        Function::IncGammaLower => {
            Outcome::series(lower_inc_gamma_with(&matrix(&args.q, "Q")?, need(args.x, "x")?, ctl)?)
        }
        Function::IncGammaUpper => {
            Outcome::plain(upper_inc_gamma_with(&matrix(&args.q, "Q")?, need(args.x, "x")?, ctl)?)
        }
        Function::GammaStar => Outcome::plain(gamma_star(&matrix(&args.q, "Q")?, need(args.x, "x")?)?),
        Function::PFq => {
            let p = read_params(need_path(&args.params, "params")?, false)?;
            Outcome::series(eval_pfq_with(&p, need(args.z, "z")?, ctl)?)
        }
        Function::RRs => {
            let p = read_params(need_path(&args.params, "params")?, true)?;
            Outcome::series(eval_rrs_with(&p, need(args.z, "z")?, ctl)?)
        }
        Function::IncExpLower | Function::IncExpUpper => {
            let kind = if f == Function::IncExpLower { IncKind::Lower } else { IncKind::Upper };
            let q = matrix(&args.q, "Q")?;
            Outcome::series(eval_e_with(&q, need(args.x, "x")?, need(args.u, "u")?, kind, ctl)?)
        }
        Function::ResLower | Function::ResUpper => {
            let kind = if f == Function::ResLower { IncKind::Lower } else { IncKind::Upper };
            Outcome::series(eval_res_with(&res_params(args, kind)?, need(args.z, "z")?, ctl)?)
        }
    })
}

fn cell(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn eval_output(f: Function, o: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = json!({
                "function": f.to_possible_value().expect("named").get_name(),
                "value": o.value.to_json(),
            });
            if let Some(t) = o.terms_used {
                v["terms_used"] = json!(t);
            }
            if let Some(t) = o.tail_estimate {
                v["tail_estimate"] = json!(t);
            }
            if let Some(c) = &o.convergence {
                v["convergence"] = c.clone();
            }
            format!("{v}\n")
        }
        Format::Csv => {
            let mut s = String::from("row,col,re,im\n");
            let n = o.value.dim();
            for i in 0..n {
                for j in 0..n {
                    let z = o.value.get(i, j);
                    s.push_str(&format!("{i},{j},{},{}\n", z.re, z.im));
                }
            }
            s
        }
    }
}

/// `(1−u)^C` and the two sides of the corrected binomial summation.
fn binomial_residual(args: &FnArgs, u: C64, ctl: SeriesControl) -> Result<f64> {
    let p = res_params(args, IncKind::Lower)?;
    let z = need(args.z, "z")?;
    let b = &p.base;
    if b.upper.len() != 1 || b.lower.len() != 1 {
        return Err(MgfError::Dimension("binomial-sum needs one upper and one lower parameter".into()));
    }
    let c = &b.lower[0];
    let with_lower = |l: CMatrix| -> Result<IncExpParams> {
        p.with_base(ParamSet::new(b.upper.clone(), vec![l], b.p.clone(), b.q.clone())?)
    };
    let n = c.dim();
    let neg_c = -c;
    let mut lhs = CMatrix::zeros(n);
    let mut poch = CMatrix::identity(n);
    let mut scal = C64::new(1.0, 0.0);
    let mut small = 0;
    for k in 0..ctl.term_cap {
        if k > 0 {
            poch = &poch * &neg_c.shift_re((k - 1) as f64);
            scal *= u / k as f64;
        }
        let inner = eval_res_with(&with_lower(c.shift_re(1.0 - k as f64))?, z, ctl)?.value;
        let term = (&poch * &inner).scale(scal);
        lhs += &term;
        small = if term.norm_fro() <= ctl.tol * lhs.norm_fro() { small + 1 } else { 0 };
        if small == 3 {
            break;
        }
    }
    let one_u = C64::new(1.0, 0.0) - u;
    let raised = eval_res_with(&with_lower(c.shift_re(1.0))?, z * one_u, ctl)?.value;
    let rhs = &complex_power(one_u, c)? * &raised;
    Ok(mgf_core::matcore::residual(&lhs, &rhs))
}

fn sample_value(f: SampleFn, args: &FnArgs, ctl: SeriesControl) -> Result<(f64, Option<C64>)> {
    let entry = |m: CMatrix| (m.norm2(), Some(m.get(0, 0)));
    let as_fn = |g: Function| -> Result<(f64, Option<C64>)> { Ok(entry(eval(g, args, ctl)?.value)) };
    match f {
        SampleFn::IncGammaLower => as_fn(Function::IncGammaLower),
        SampleFn::IncGammaUpper => as_fn(Function::IncGammaUpper),
        SampleFn::GammaStar => as_fn(Function::GammaStar),
        SampleFn::IncExpLower => as_fn(Function::IncExpLower),
        SampleFn::IncExpUpper => as_fn(Function::IncExpUpper),
        SampleFn::ResLower => as_fn(Function::ResLower),
        SampleFn::ResUpper => as_fn(Function::ResUpper),
        SampleFn::GammaStarLimit => {
            let q = read_matrix(need_path(&args.q, "Q")?)?;
            let x = need(args.x, "x")?;
            let scaled = if x == 0.0 {
                CMatrix::zeros(q.dim())
            } else {
                &real_power(x, &q)? * &gamma_star(&q, x)?
            };
            let dev = &scaled - &CMatrix::identity(q.dim());
            Ok((dev.norm2(), None))
        }
        SampleFn::BinomialSum => Ok((binomial_residual(args, need(args.u, "u")?, ctl)?, None)),
    }
}

fn sample(
    f: SampleFn,
    var: SweepVar,
    from: f64,
    to: f64,
    steps: usize,
    args: &FnArgs,
    ctl: SeriesControl,
    format: Format,
) -> Result<String> {
    let name = match var {
        SweepVar::X => "x",
        SweepVar::U => "u",
        SweepVar::Z => "z",
    };
    let mut rows = Vec::new();
    for i in 0..=steps {
        let t = if steps == 0 { from } else { from + (to - from) * i as f64 / steps as f64 };
        let mut a = args.clone();
        match var {
            SweepVar::X => a.x = Some(t),
            SweepVar::U => a.u = Some(C64::new(t, 0.0)),
            SweepVar::Z => a.z = Some(C64::new(t, 0.0)),
        }
        let (norm, e00) = sample_value(f, &a, ctl)?;
        rows.push((t, norm, e00));
    }
    Ok(match format {
        Format::Json => rows
            .iter()
            .map(|(t, norm, e00)| {
                let mut v = json!({ name: t, "norm": norm });
                if let Some(z) = e00 {
                    v["entry00"] = json!(cell(*z));
                }
                format!("{v}\n")
            })
            .collect(),
        Format::Csv => {
            let mut s = format!("{name},norm,entry00_re,entry00_im\n");
            for (t, norm, e00) in &rows {
                let (re, im) = e00.map_or((String::new(), String::new()), |z| (z.re.to_string(), z.im.to_string()));
                s.push_str(&format!("{t},{norm},{re},{im}\n"));
            }
            s
        }
    })
}

fn classify(family: Family, path: &Path) -> Result<String> {
    let class = match family {
        Family::PFq => classify_pfq(&read_params(path, false)?)?,
        Family::RRs => classify_rrs(&read_params(path, true)?)?,
        Family::ResLower | Family::ResUpper => {
            let kind = if family == Family::ResLower { IncKind::Lower } else { IncKind::Upper };
            classify_res(&IncExpParams::new(read_params(path, true)?, 0.0, kind)?)?
        }
    };
    Ok(format!("{}\n", serde_json::to_string(&class).expect("class serializes")))
}

fn report_csv(reports: &[IdentityReport]) -> String {
    let mut s = String::from("id,seed,trials,max_residual,tol,verdict,variant\n");
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        s.push_str(&format!(
            "{},{},{},{:e},{:e},{},{}\n",
            r.id,
            r.seed,
            r.trials,
            r.max_residual,
            r.tol,
            verdict.as_str().unwrap_or_default(),
            r.variant.as_deref().unwrap_or("")
        ));
    }
    s
}

fn check(
    id: &str,
    trials: Option<usize>,
    dim: Option<usize>,
    profile: Profile,
    seed: u64,
    tol: Option<f64>,
) -> Result<Vec<IdentityReport>> {
    let trials = trials.unwrap_or(profile.trials());
    let dims: Vec<usize> = dim.map_or_else(|| profile.dims().to_vec(), |d| vec![d]);
    if id == "all" {
        identities::registry()
            .iter()
            .map(|e| identities::run_entry(e, seed, trials, &dims, tol))
            .collect()
    } else {
        Ok(vec![identities::run_entry(identities::lookup(id)?, seed, trials, &dims, tol)?])
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| MgfError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| MgfError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let tol = cli.tol.unwrap_or(1e-10);
    if !(tol > 0.0) {
        return Err(MgfError::Domain(format!("--tol must be positive, got {tol}")));
    }
    if cli.term_cap < 10 {
        return Err(MgfError::Domain(format!("--term-cap must be at least 10, got {}", cli.term_cap)));
    }
    let ctl = SeriesControl {
        tol,
        term_cap: cli.term_cap,
    };
    match &cli.command {
        Command::Eval { function, args } => {
            let o = eval(*function, args, ctl)?;
            emit(&cli.output, &eval_output(*function, &o, cli.format))?;
            Ok(0)
        }
        Command::Check {
            id,
            trials,
            dim,
            profile,
        } => {
            let profile: Profile = profile.parse()?;
            let reports = check(id, *trials, *dim, profile, cli.seed, cli.tol)?;
            let text = match cli.format {
                Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
                Format::Csv => report_csv(&reports),
            };
            emit(&cli.output, &text)?;
            Ok(if reports.iter().any(IdentityReport::is_failure) { 1 } else { 0 })
        }
        Command::Sample {
            function,
            var,
            from,
            to,
            steps,
            args,
        } => {
            let text = sample(*function, *var, *from, *to, *steps, args, ctl, cli.format)?;
            emit(&cli.output, &text)?;
            Ok(0)
        }
        Command::Classify { family, params } => {
            emit(&cli.output, &classify(*family, params)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
