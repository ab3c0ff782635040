use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mutower::census::{
    census_rows, census_summary, pi_split_statistic, rows_to_csv, select_free_t, split_constant, AbelianField,
};
use mutower::characters::{
    koch_shafarevich, mirror_solve_s, mirror_solve_t, mirror_split_scenario, realizability_check, CharacterVec,
    KochShafarevichInput, MirrorInput,
};
use mutower::error::{Error, Result};
use mutower::iwasawa::{coinvariant_growth, fit_invariants, parse_module, parse_series, weierstrass_prepare};
use mutower::numberfield::FieldDescriptor;
use mutower::prationality::{
    character_of_asp, is_regular_prime, survey_quadratic, test_prationality, Method, Subfield,
};
use mutower::propgroups::{
    check_sigma_gamma, fixed_point_profile, fpf_charpoly_test, frobenius_check, nilpotency_class,
    no_fpf_order3_search, p_central_series_level, sigma_gamma, uniformity_check, FiniteQuotient, FixMode,
    GroupAutomorphism, GroupLaw,
};
use mutower::report::{envelope, error_envelope, Cache, OutputFormat, RunConfig};
use mutower::suite::run_suite;

#[derive(Parser)]
#[command(name = "mutower", version, about = "p-rational fields, uniform pro-p groups and Iwasawa invariants")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Emit the versioned JSON envelope.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Result cache directory (overrides MUTOWER_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// p-rationality of cyclotomic and quadratic fields.
    Prational(PrationalArgs),
    /// Fixed points and Frobenius structure for automorphisms of pro-p groups.
    Fpf(FpfArgs),
    /// Coinvariant growth and mu/lambda invariants of Lambda-modules.
    Iwasawa(IwasawaArgs),
    /// Character calculus: mirror identity, Koch-Shafarevich, realizability.
    Chars(CharsArgs),
    /// Splitting census of primes in an abelian field.
    Census(CensusArgs),
    /// Run the verification battery and print a pass/fail table.
    PaperSuite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Numerical,
    Theoretical,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["field", "survey", "regular"])))]
struct PrationalArgs {
    /// `cyclotomic:<f>` or `quadratic:<d>`.
    #[arg(long)]
    field: Option<FieldDescriptor>,
    #[arg(long)]
    prime: u64,
    #[arg(long, value_enum, default_value = "numerical")]
    method: MethodArg,
    /// Also decompose A_Sp under Gal(K/K_0) for this subfield, e.g. `quadratic:-7`.
    #[arg(long, requires = "field")]
    character: Option<Subfield>,
    /// Survey imaginary quadratic fields with |d| up to this bound (CSV by default).
    #[arg(long)]
    survey: Option<u64>,
    /// Only test regularity of the prime.
    #[arg(long)]
    regular: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Fixed,
    Frobenius,
    Uniform,
    Series,
    Nilpotency,
    Sigma,
    Order3,
}

#[derive(Args)]
struct FpfArgs {
    /// `gamma-s`, `gamma-torsion`, `zp`, or with the parameter inline (`gamma:1`, `zp:2`).
    #[arg(long, default_value = "gamma-s")]
    group: String,
    #[arg(long)]
    p: u64,
    /// Parameter of the group (s for Gamma(s), d for Z_p^d).
    #[arg(long, default_value_t = 0)]
    s: u32,
    /// Quotient level n (coordinates mod p^n).
    #[arg(long, default_value_t = 1)]
    level: u32,
    #[arg(long, value_enum, default_value = "fixed")]
    check: Check,
    /// Fixed-point mode: exhaustive or graded.
    #[arg(long, default_value = "graded")]
    mode: FixMode,
    /// Matrix rows for a characteristic-polynomial test, e.g. `0,0,1;1,0,0;0,1,0`.
    #[arg(long)]
    matrix: Option<String>,
}

#[derive(Args)]
struct IwasawaArgs {
    /// Relations of a cyclic module, comma separated, e.g. `p^2*(T^3+p*T+p)`.
    #[arg(long)]
    module: String,
    #[arg(long)]
    p: u64,
    /// Highest level n of the growth table.
    #[arg(long, default_value_t = 6)]
    levels: u32,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["mirror", "koch_shafarevich", "realizability", "split_scenario", "free_t"])))]
struct CharsArgs {
    #[arg(long)]
    mirror: bool,
    #[arg(long)]
    koch_shafarevich: bool,
    #[arg(long)]
    realizability: bool,
    /// Mirror identity with S a single inert place and |T| = r + 1.
    #[arg(long)]
    split_scenario: bool,
    /// Select primes T making G_S^T free over Q(zeta_p).
    #[arg(long)]
    free_t: bool,
    #[arg(long, default_value_t = 1)]
    r: u64,
    #[arg(long, default_value_t = 3)]
    m: u64,
    /// Index w with omega = chi_w.
    #[arg(long, default_value_t = 1)]
    omega: u64,
    #[arg(long, default_value_t = 0)]
    s_split: u64,
    #[arg(long, default_value_t = 0)]
    s_inert: u64,
    #[arg(long, default_value_t = 0)]
    t_split: u64,
    #[arg(long, default_value_t = 0)]
    t_inert: u64,
    /// Known chi(A_S^T) multiplicities, e.g. `0,1,1`.
    #[arg(long, conflicts_with = "a_t_s")]
    a_s_t: Option<String>,
    /// Known chi(A_T^S) multiplicities.
    #[arg(long)]
    a_t_s: Option<String>,
    #[arg(long, default_value_t = 0)]
    r1: u64,
    #[arg(long, default_value_t = 0)]
    r2: u64,
    #[arg(long, default_value_t = 1)]
    s: u64,
    #[arg(long, default_value_t = 0)]
    t: u64,
    #[arg(long, default_value_t = 0)]
    dp_a_ts: u64,
    #[arg(long, default_value_t = 0)]
    local_degree_sum: u64,
    #[arg(long, default_value_t = 3)]
    d: u64,
    #[arg(long, default_value_t = 2)]
    k0_degree: u64,
    #[arg(long, default_value_t = 7)]
    p: u64,
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Search bound for --free-t.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    conductor: u64,
    /// Subgroup H of (Z/f)^x fixing the field, e.g. `1,6`.
    #[arg(long, value_delimiter = ',')]
    subgroup: Vec<u64>,
    /// Upper bound; accepts `1e9`.
    #[arg(long, value_parser = parse_bound)]
    x: u64,
    /// Grid points for the split-constant estimate.
    #[arg(long, default_value_t = 12)]
    points: usize,
    /// Emit one CSV row per prime instead of a summary.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SuiteArgs {
    /// Skip the determinism rerun.
    #[arg(long)]
    quick: bool,
    /// Exit 1 if any criterion fails.
    #[arg(long)]
    strict: bool,
}

fn parse_bound(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if f.fract() != 0.0 || !(0.0..=1e18).contains(&f) {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(f as u64)
}

fn parse_mult(s: &str) -> Result<CharacterVec> {
    let mult = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("multiplicity `{t}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if mult.is_empty() {
        return Err(Error::Parse("empty multiplicity vector".into()));
    }
    Ok(CharacterVec::from_mult(mult))
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<u64>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("matrix entry `{t}`: {e}"))))
                .collect()
        })
        .collect()
}

fn group_law(a: &FpfArgs) -> Result<GroupLaw> {
    if a.group.contains(':') {
        a.group.parse()
    } else {
        format!("{}:{}", a.group, a.s).parse()
    }
}

/// The automorphism a check acts with: sigma on Gamma(s), inversion on Z_p^d.
fn default_automorphism(law: GroupLaw, p: u64, precision: u32) -> Result<(GroupAutomorphism, u64)> {
    match law {
        GroupLaw::Gamma { s } => Ok((sigma_gamma(p, s, precision)?, 3)),
        GroupLaw::Abelian { d } => {
            let pn = p.checked_pow(precision).ok_or_else(|| Error::Resource("p^n overflows".into()))?;
            let images = (0..d)
                .map(|i| (0..d).map(|j| if i == j { pn - 1 } else { 0 }).collect())
                .collect();
            Ok((GroupAutomorphism::from_images(law, p, precision, images)?, 2))
        }
        GroupLaw::GammaTorsion { .. } => Err(Error::Unsupported("no built-in automorphism for this group".into())),
    }
}

/// Returns `(result, text rendering)`.
type Output = (Value, String);

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn prational(a: &PrationalArgs) -> Result<Output> {
    if a.regular {
        let r = is_regular_prime(a.prime)?;
        let v = serde_json::to_value(&r)?;
        let text = format!("p = {}: {}\n", a.prime, if r.regular { "regular" } else { "irregular" });
        return Ok((v, text));
    }
    if let Some(bound) = a.survey {
        let r = survey_quadratic(a.prime, bound)?;
        return Ok((serde_json::to_value(&r)?, r.to_csv()));
    }
    let field = a.field.as_ref().expect("clap group");
    let method = match a.method {
        MethodArg::Numerical => Method::Numerical,
        MethodArg::Theoretical => Method::Theoretical,
    };
    let r = test_prationality(field, a.prime, method)?;
    let mut v = json!({ "report": r });
    if let Some(k0) = &a.character {
        v["character"] = serde_json::to_value(character_of_asp(field, k0, a.prime)?)?;
    }
    Ok((v.clone(), pretty(&v)))
}

fn fpf(a: &FpfArgs) -> Result<Output> {
    let law = group_law(a)?;
    let v = match a.check {
        Check::Order3 => {
            if let Some(m) = &a.matrix {
                serde_json::to_value(fpf_charpoly_test(&parse_matrix(m)?, a.p)?)?
            } else {
                serde_json::to_value(no_fpf_order3_search(a.p)?)?
            }
        }
        Check::Sigma => {
            let GroupLaw::Gamma { s } = law else {
                return Err(Error::Inapplicable("sigma is defined on Gamma(s) only".into()));
            };
            serde_json::to_value(check_sigma_gamma(a.p, s, a.level)?)?
        }
        Check::Uniform => serde_json::to_value(uniformity_check(law, a.p, a.level)?)?,
        Check::Series => serde_json::to_value(p_central_series_level(law, a.p, a.level)?)?,
        Check::Nilpotency => serde_json::to_value(nilpotency_class(&FiniteQuotient::new(law, a.p, a.level)?))?,
        Check::Fixed => {
            let (sigma, _) = default_automorphism(law, a.p, a.level)?;
            serde_json::to_value(fixed_point_profile(law, &sigma, a.level, a.mode)?)?
        }
        Check::Frobenius => {
            let (sigma, m) = default_automorphism(law, a.p, a.level)?;
            let q = FiniteQuotient::new(law, a.p, a.level)?;
            serde_json::to_value(frobenius_check(&q, &sigma, m)?)?
        }
    };
    Ok((v.clone(), pretty(&v)))
}

fn iwasawa(a: &IwasawaArgs) -> Result<Output> {
    let x = parse_module(&a.module, a.p)?;
    let table = coinvariant_growth(&x, 0..=a.levels)?;
    let fit = fit_invariants(&table)?;
    let mut v = json!({ "module": a.module, "growth": table, "fit": fit });
    if !a.module.contains(',') {
        v["preparation"] = serde_json::to_value(weierstrass_prepare(&parse_series(&a.module, a.p)?)?)?;
    }
    let mut text = String::from("n  dim_Fp  log_p|X_n|\n");
    for r in &table.rows {
        let lo = r.log_order.map_or("inf".to_string(), |l| l.to_string());
        text.push_str(&format!("{:<2} {:<7} {}\n", r.n, r.dim_fp, lo));
    }
    text.push_str(&format!("fit: {}\n", serde_json::to_string(&fit)?));
    Ok((v, text))
}

fn chars(a: &CharsArgs) -> Result<Output> {
    let v = if a.mirror {
        let input = MirrorInput {
            r: a.r,
            m: a.m,
            omega: a.omega,
            s_split: a.s_split,
            s_inert: a.s_inert,
            t_split: a.t_split,
            t_inert: a.t_inert,
        };
        let sol = match (&a.a_s_t, &a.a_t_s) {
            (Some(c), _) => mirror_solve_t(&input, &parse_mult(c)?)?,
            (None, Some(c)) => mirror_solve_s(&input, &parse_mult(c)?)?,
            (None, None) => mirror_solve_s(&input, &CharacterVec::zero(a.m))?,
        };
        serde_json::to_value(sol)?
    } else if a.split_scenario {
        serde_json::to_value(mirror_split_scenario(a.r, a.m, a.omega)?)?
    } else if a.koch_shafarevich {
        serde_json::to_value(koch_shafarevich(KochShafarevichInput {
            r1: a.r1,
            r2: a.r2,
            s: a.s,
            t: a.t,
            dp_a_ts: a.dp_a_ts,
            local_degree_sum: a.local_degree_sum,
        }))?
    } else if a.realizability {
        serde_json::to_value(realizability_check(a.d, a.m, a.k0_degree, a.p, a.n)?)?
    } else {
        serde_json::to_value(select_free_t(a.p, a.bound)?)?
    };
    Ok((v.clone(), pretty(&v)))
}

fn census(a: &CensusArgs, config: &RunConfig) -> Result<Output> {
    let field = AbelianField::new(a.conductor, &a.subgroup)?;
    if a.csv {
        let rows = census_rows(&field, a.x)?;
        return Ok((serde_json::to_value(&rows)?, rows_to_csv(&rows)));
    }
    let params = json!({ "conductor": a.conductor, "subgroup": field.subgroup, "x": a.x, "points": a.points });
    let compute = || -> Result<Value> {
        let mut v = json!({ "field": field, "degree": field.degree() });
        if a.x <= config.sieve_cap {
            v["summary"] = serde_json::to_value(census_summary(&field, a.x)?)?;
        }
        let ell = field.degree();
        if mutower::arith::is_prime(ell) && a.x >= 100 {
            v["pi_split"] = serde_json::to_value(pi_split_statistic(a.x, ell, &field)?)?;
            v["split_constant"] = serde_json::to_value(split_constant(ell, &field, a.x, a.points)?)?;
        }
        Ok(v)
    };
    let v = match Cache::from_config(config) {
        Some(cache) => cache.get_or_compute("census", &params, compute)?,
        None => compute()?,
    };
    Ok((v.clone(), pretty(&v)))
}

fn run(cli: &Cli, config: &RunConfig) -> Result<(Value, String, bool)> {
    let (v, text) = match &cli.command {
        Command::Prational(a) => prational(a)?,
        Command::Fpf(a) => fpf(a)?,
        Command::Iwasawa(a) => iwasawa(a)?,
        Command::Chars(a) => chars(a)?,
        Command::Census(a) => census(a, config)?,
        Command::PaperSuite(a) => {
            let r = run_suite(a.quick);
            let ok = !a.strict || r.failed.is_empty();
            return Ok((serde_json::to_value(&r)?, r.table(), ok));
        }
    };
    Ok((v, text, true))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Prational(_) => "prational",
        Command::Fpf(_) => "fpf",
        Command::Iwasawa(_) => "iwasawa",
        Command::Chars(_) => "chars",
        Command::Census(_) => "census",
        Command::PaperSuite(_) => "paper-suite",
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = RunConfig {
        threads: cli.threads,
        format: if cli.json { OutputFormat::Json } else { OutputFormat::Text },
        ..RunConfig::default()
    };
    if let Command::Census(a) = &cli.command {
        if a.csv && !cli.json {
            config.format = OutputFormat::Csv;
        }
    }
    if cli.cache_dir.is_some() {
        config.cache_dir = cli.cache_dir.clone();
    }
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("mutower: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    match run(&cli, &config) {
        Ok((v, text, ok)) => {
            if cli.json {
                match envelope(name, &config, &v) {
                    Ok(env) => emit(&pretty(&env)),
                    Err(e) => {
                        eprintln!("mutower: {e}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                emit(&text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                emit(&pretty(&error_envelope(name, &config, &e)));
            } else {
                eprintln!("mutower: {e}");
            }
            ExitCode::from(1)
        }
    }
}
