use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use qsym::lattice::io::{save_field, FieldMeta};
use qsym::lattice::{
    dispersion_omega, hierarchy_generate, mode_rate, space_evolve, time_step, Boundary, PolyTrajectory, SolutionField,
    SpaceGridField, SpectralField, Wavenumber, DEFAULT_TOLERANCE,
};
use qsym::model::{build_model, Gen, ModelKind};
use qsym::parse::parse_operator;
use qsym::series::{series_expand, DEFAULT_ORDER};
use qsym::suite::{run_suite, Suite};
use qsym::{Error, Rational};

#[derive(Parser)]
#[command(name = "qsym", version, about = "Verify the deformed Schrödinger algebra and solve its lattice equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an exact verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Evolve an initial field with the space or time lattice solver.
    Solve(SolveArgs),
    /// Apply a sequence of generators to a seed solution.
    Hierarchy(HierarchyArgs),
    /// Normal-order an operator expression and print its series in z.
    Expand(ExpandArgs),
    /// Tabulate the dispersion relation.
    Dispersion(DispersionArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Classical,
    Space,
    Time,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Classical => ModelKind::Classical,
            ModelArg::Space => ModelKind::Space,
            ModelArg::Time => ModelKind::Time,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, default_value = "all")]
    suite: String,
    /// Bind the parameter a to a rational such as -1/2; symbolic when absent.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct NumericArgs {
    #[arg(long, default_value_t = 0.125)]
    z: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Numerical value of a; C is a symmetry only at a = -1/2.
    #[arg(long, allow_hyphen_values = true, default_value = "-1/2")]
    a: String,
    /// Lattice points (space) or samples per period (time).
    #[arg(long, default_value_t = 64)]
    points: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// constant, mode:K, gaussian, or a CSV file with columns index,x,re,im
    #[arg(long, default_value = "gaussian")]
    init: String,
    /// Number of time steps (space: each of length dt; time: each of length 2z).
    #[arg(long, default_value_t = 1)]
    steps: usize,
    /// Time increment per step in the space model.
    #[arg(long)]
    dt: Option<f64>,
    /// Spatial period of the time-model field.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    period: f64,
    #[command(flatten)]
    num: NumericArgs,
    /// Directory for per-level CSV files and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct HierarchyArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// constant, noise, or mode:K (periodic)
    #[arg(long, default_value = "constant")]
    seed: String,
    /// Comma-separated generators, applied left to right.
    #[arg(long, value_delimiter = ',')]
    apply: Vec<String>,
    /// Time of the seed slice (space) or of its first level (time).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    /// Number of stored time levels in the time model.
    #[arg(long, default_value_t = 12)]
    levels: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[command(flatten)]
    num: NumericArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ExpandArgs {
    /// Operator expression, e.g. "(1/z^2)*(1 - Sx^-1)^2 - 2*m*dt".
    expr: String,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct DispersionArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, default_value_t = 0.125)]
    z: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    kmin: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    kmax: f64,
    #[arg(long, default_value_t = 33)]
    samples: usize,
    /// Treat k as a lattice phase θ (complex rate in the space model).
    #[arg(long)]
    phase: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotASolution(_)) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn io_failure(e: std::io::Error) -> Failure {
    usage(format!("i/o error: {e}"))
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse::<Rational>().map_err(|_| usage(format!("`{s}` is not a rational number")))
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(io_failure),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(io_failure)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let suite: Suite = args.suite.parse()?;
    let a = args.a.as_deref().map(parse_rational).transpose()?;
    let report = run_suite(args.model.into(), suite, a, args.order)?;
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("check_kind,subject,status\n");
            for c in &report.checks {
                let kind = serde_json::to_value(c.check_kind).expect("serializable");
                s.push_str(&format!(
                    "{},\"{}\",{}\n",
                    kind.as_str().unwrap_or(""),
                    c.subject,
                    if c.passed() { "pass" } else { "fail" }
                ));
            }
            s
        }
    };
    emit(&args.out, &text)?;
    eprintln!("{} passed, {} failed", report.passed, report.failed);
    Ok(if report.all_passed() { 0 } else { 2 })
}

fn check_numeric(num: &NumericArgs) -> Result<f64, Failure> {
    if !(num.z.is_finite() && num.z > 0.0) {
        return Err(usage(format!("--z must be positive, got {}", num.z)));
    }
    if !(num.m.is_finite() && num.m > 0.0) {
        return Err(usage(format!("--m must be positive, got {}", num.m)));
    }
    if num.points < 4 {
        return Err(usage("--points must be at least 4"));
    }
    Ok(rational_to_f64(&parse_rational(&num.a)?))
}

fn parse_mode(spec: &str) -> Option<Result<i64, Failure>> {
    spec.strip_prefix("mode:").map(|k| k.parse().map_err(|_| usage(format!("bad mode index in `{spec}`"))))
}

#[derive(Serialize)]
struct LevelRecord {
    level: usize,
    t: f64,
    residual: f64,
    max_abs: f64,
    file: Option<String>,
}

#[derive(Serialize)]
struct SolveManifest {
    schema: u32,
    model: ModelKind,
    init: String,
    z: f64,
    m: f64,
    a: f64,
    levels: Vec<LevelRecord>,
    /// Final over initial amplitude of the seeded mode, as `[re, im]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude_ratio: Option<[f64; 2]>,
    /// The analytic ratio for the same mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_ratio: Option<[f64; 2]>,
}

fn read_init_file(path: &Path) -> Result<Vec<(f64, Complex64)>, Failure> {
    let f = std::fs::File::open(path).map_err(io_failure)?;
    Ok(qsym::lattice::io::read_csv(f)?.into_iter().map(|r| (r.x, r.value())).collect())
}

fn max_abs(points: &[(f64, Complex64)]) -> f64 {
    points.iter().map(|p| p.1.norm()).fold(0.0, f64::max)
}

fn save_level(
    out: &Option<PathBuf>,
    level: usize,
    points: &[(f64, Complex64)],
    meta: &FieldMeta,
) -> Result<Option<String>, Failure> {
    let Some(dir) = out else { return Ok(None) };
    let stem = format!("level_{level:04}");
    save_field(dir, &stem, points.iter().copied(), meta)?;
    Ok(Some(format!("{stem}.csv")))
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let a = check_numeric(&args.num)?;
    let (z, m, n) = (args.num.z, args.num.m, args.num.points);
    let kind: ModelKind = args.model.into();
    let mut levels = Vec::new();
    let meta = |t: f64, residual: f64| FieldMeta { model: kind, z, m, a, t, residual, generators: Vec::new() };
    let mut ratio = None;
    let mut expected = None;
    match kind {
        ModelKind::Space => {
            let dt = args.dt.unwrap_or(0.1);
            let mut field = if let Some(k) = parse_mode(&args.init) {
                SpaceGridField::mode(k?, n, z, m, a)?
            } else {
                let values: Vec<Complex64> = match args.init.as_str() {
                    "constant" => vec![Complex64::new(1.0, 0.0); n],
                    "gaussian" => {
                        let width = n as f64 * z;
                        (0..n)
                            .map(|j| {
                                let x = j as f64 * z - width / 2.0;
                                Complex64::new((-x * x / (0.05 * width * width)).exp(), 0.0)
                            })
                            .collect()
                    }
                    path => read_init_file(Path::new(path))?.into_iter().map(|p| p.1).collect(),
                };
                SpaceGridField::from_values(values, 0.0, z, m, a, 0.0, Boundary::Periodic)?
            };
            let project = |f: &SpaceGridField, theta: f64| -> Complex64 {
                f.values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -theta * j as f64))
                    .sum::<Complex64>()
                    / f.len() as f64
            };
            let initial = field.clone();
            for level in 0..=args.steps {
                if level > 0 {
                    field = space_evolve(&field, dt)?;
                }
                let pts: Vec<_> = (0..field.len()).map(|j| (field.x(j), field.values[j])).collect();
                let r = field.residual();
                let file = save_level(&args.out, level, &pts, &meta(field.time, r))?;
                levels.push(LevelRecord { level, t: field.time, residual: r, max_abs: max_abs(&pts), file });
            }
            if let Some(k) = parse_mode(&args.init) {
                let theta = std::f64::consts::TAU * k? as f64 / n as f64;
                let r = project(&field, theta) / project(&initial, theta);
                let e = (mode_rate(theta, z, m) * field.time).exp();
                ratio = Some([r.re, r.im]);
                expected = Some([e.re, e.im]);
            }
        }
        ModelKind::Time => {
            if args.dt.is_some() {
                return Err(usage("--dt does not apply to the time model; its step is 2z"));
            }
            let mode = parse_mode(&args.init).transpose()?;
            let mut field = if let Some(k) = mode {
                SpectralField::new(BTreeMap::from([(k, Complex64::new(1.0, 0.0))]), args.period, z, m, a)?
            } else {
                let samples: Vec<Complex64> = match args.init.as_str() {
                    "constant" => vec![Complex64::new(1.0, 0.0); n],
                    "gaussian" => (0..n)
                        .map(|j| {
                            let x = args.period * (j as f64 / n as f64 - 0.5);
                            Complex64::new((-x * x / (0.05 * args.period * args.period)).exp(), 0.0)
                        })
                        .collect(),
                    path => read_init_file(Path::new(path))?.into_iter().map(|p| p.1).collect(),
                };
                SpectralField::from_samples(&samples, args.period, z, m, a)?
            };
            let initial = field.clone();
            for level in 0..=args.steps {
                if level > 0 {
                    field = time_step(&field);
                }
                let pts = field.samples(n);
                let r = field.residual();
                let file = save_level(&args.out, level, &pts, &meta(field.time, r))?;
                levels.push(LevelRecord { level, t: field.time, residual: r, max_abs: max_abs(&pts), file });
            }
            if let Some(k) = mode {
                let r = field.modes[&k] / initial.modes[&k];
                let e = qsym::lattice::step_multiplier(field.kappa(k), z, m).powi(args.steps as i32);
                ratio = Some([r.re, r.im]);
                expected = Some([e, 0.0]);
            }
        }
        ModelKind::Classical => return Err(usage("solve needs --model space or --model time")),
    }
    let last = levels.last().map(|l| l.residual).unwrap_or(0.0);
    let manifest = SolveManifest {
        schema: 1,
        model: kind,
        init: args.init.clone(),
        z,
        m,
        a,
        levels,
        amplitude_ratio: ratio,
        expected_ratio: expected,
    };
    write_manifest(&args.out, &manifest)?;
    match args.format {
        Format::Json => emit(&None, &to_json(&manifest))?,
        Format::Csv => {
            let mut s = String::from("level,t,residual,max_abs\n");
            for l in &manifest.levels {
                s.push_str(&format!("{},{},{:e},{}\n", l.level, l.t, l.residual, l.max_abs));
            }
            emit(&None, &s)?;
        }
    }
    eprintln!("final residual {last:e}");
    Ok(0)
}

fn write_manifest<T: Serialize>(out: &Option<PathBuf>, manifest: &T) -> Result<(), Failure> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(io_failure)?;
        std::fs::write(dir.join("manifest.json"), to_json(manifest)).map_err(io_failure)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct HierarchyManifest {
    schema: u32,
    model: ModelKind,
    seed: String,
    generators: Vec<String>,
    stopped_at_zero: bool,
    tolerance: f64,
    levels: Vec<LevelRecord>,
}

/// Output view of a hierarchy member.
trait Member: SolutionField + 'static {
    fn points(&self) -> Vec<(f64, Complex64)>;
    fn time(&self) -> f64;
}

impl Member for SpaceGridField {
    fn points(&self) -> Vec<(f64, Complex64)> {
        (0..self.len()).map(|j| (self.x(j), self.values[j])).collect()
    }
    fn time(&self) -> f64 {
        self.time
    }
}

impl Member for SpectralField {
    fn points(&self) -> Vec<(f64, Complex64)> {
        self.samples(32)
    }
    fn time(&self) -> f64 {
        self.time
    }
}

/// Samples the first level on `[-1, 1]`.
impl Member for PolyTrajectory {
    fn points(&self) -> Vec<(f64, Complex64)> {
        (0..=32)
            .map(|j| {
                let x = -1.0 + j as f64 / 16.0;
                (x, Complex64::new(self.eval(0, x), 0.0))
            })
            .collect()
    }
    fn time(&self) -> f64 {
        self.t0
    }
}

fn run_hierarchy<F: Member>(seed: F, args: &HierarchyArgs, kind: ModelKind, a: f64) -> Result<u8, Failure> {
    let gens: Vec<Gen> = args.apply.iter().map(|s| s.trim().parse()).collect::<Result<_, Error>>()?;
    let model = build_model(kind, None);
    let h = hierarchy_generate(&seed, &gens, &model, args.tol)?;
    let mut levels = Vec::new();
    for (level, (member, &r)) in h.members.iter().zip(&h.residuals).enumerate() {
        let pts = member.points();
        let meta = FieldMeta {
            model: kind,
            z: args.num.z,
            m: args.num.m,
            a,
            t: member.time(),
            residual: r,
            generators: h.generators[..level].iter().map(ToString::to_string).collect(),
        };
        let file = save_level(&args.out, level, &pts, &meta)?;
        levels.push(LevelRecord { level, t: member.time(), residual: r, max_abs: max_abs(&pts), file });
    }
    let manifest = HierarchyManifest {
        schema: 1,
        model: kind,
        seed: args.seed.clone(),
        generators: h.generators.iter().map(ToString::to_string).collect(),
        stopped_at_zero: h.stopped_at_zero,
        tolerance: args.tol,
        levels,
    };
    write_manifest(&args.out, &manifest)?;
    match args.format {
        Format::Json => emit(&None, &to_json(&manifest))?,
        Format::Csv => {
            let mut s = String::from("level,generator,residual\n");
            for l in &manifest.levels {
                let g = if l.level == 0 { "seed".to_string() } else { manifest.generators[l.level - 1].clone() };
                s.push_str(&format!("{},{},{:e}\n", l.level, g, l.residual));
            }
            emit(&None, &s)?;
        }
    }
    Ok(0)
}

fn cmd_hierarchy(args: HierarchyArgs) -> Result<u8, Failure> {
    let a = check_numeric(&args.num)?;
    let (z, m, n) = (args.num.z, args.num.m, args.num.points);
    let mut rng = rand::rngs::StdRng::seed_from_u64(args.rng_seed);
    match args.model.into() {
        ModelKind::Space => {
            let seed = if let Some(k) = parse_mode(&args.seed) {
                let mut f = SpaceGridField::mode(k?, n, z, m, a)?;
                f.time = args.t;
                f
            } else {
                let origin = -(n as f64) * z / 2.0;
                match args.seed.as_str() {
                    "constant" => SpaceGridField::from_values(
                        vec![Complex64::new(1.0, 0.0); n],
                        origin,
                        z,
                        m,
                        a,
                        args.t,
                        Boundary::Open,
                    )?,
                    // a static snapshot of noise: it claims zero rates
                    "noise" => SpaceGridField {
                        origin,
                        spacing: z,
                        time: args.t,
                        mass: m,
                        a,
                        boundary: Boundary::Open,
                        values: (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect(),
                        rates: vec![Complex64::default(); n],
                    },
                    other => return Err(usage(format!("unknown seed `{other}`"))),
                }
            };
            run_hierarchy(seed, &args, ModelKind::Space, a)
        }
        ModelKind::Time => {
            if let Some(k) = parse_mode(&args.seed) {
                let seed = SpectralField::new(
                    BTreeMap::from([(k?, Complex64::new(1.0, 0.0))]),
                    std::f64::consts::TAU,
                    z,
                    m,
                    a,
                )?;
                return run_hierarchy(seed, &args, ModelKind::Time, a);
            }
            let seed = match args.seed.as_str() {
                "constant" => PolyTrajectory::constant(1.0, args.levels, args.t, z, m, a)?,
                "noise" => {
                    let mut p = PolyTrajectory::constant(1.0, args.levels.max(2), args.t, z, m, a)?;
                    for level in p.levels.iter_mut() {
                        *level = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    }
                    p
                }
                other => return Err(usage(format!("unknown seed `{other}`"))),
            };
            run_hierarchy(seed, &args, ModelKind::Time, a)
        }
        ModelKind::Classical => Err(usage("hierarchy needs --model space or --model time")),
    }
}

#[derive(Serialize)]
struct Expansion {
    schema: u32,
    input: String,
    normal_form: String,
    order: u32,
    coefficients: BTreeMap<u32, String>,
}

fn cmd_expand(args: ExpandArgs) -> Result<u8, Failure> {
    let op = parse_operator(&args.expr)?;
    let series = series_expand(&op, args.order)?;
    let coefficients = series.terms().map(|(k, e)| (*k, e.to_string())).collect();
    let e = Expansion { schema: 1, input: args.expr, normal_form: op.to_string(), order: args.order, coefficients };
    match args.format {
        Format::Json => emit(&None, &to_json(&e))?,
        Format::Csv => {
            let mut s = String::from("order,coefficient\n");
            for (k, c) in &e.coefficients {
                s.push_str(&format!("{k},\"{c}\"\n"));
            }
            emit(&None, &s)?;
        }
    }
    Ok(0)
}

fn cmd_dispersion(args: DispersionArgs) -> Result<u8, Failure> {
    if args.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    if args.m.is_nan() || args.m <= 0.0 {
        return Err(usage("--m must be positive"));
    }
    let kind: ModelKind = args.model.into();
    let mut rows = Vec::new();
    for i in 0..args.samples {
        let k = args.kmin + (args.kmax - args.kmin) * i as f64 / (args.samples - 1) as f64;
        let w = if args.phase { Wavenumber::Phase(k) } else { Wavenumber::Real(k) };
        rows.push((k, dispersion_omega(kind, w, args.z, args.m)?));
    }
    let text = match args.format {
        Format::Csv => {
            let mut s = String::from("k,re,im\n");
            for (k, w) in &rows {
                s.push_str(&format!("{k:?},{:?},{:?}\n", w.re, w.im));
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows.iter().map(|(k, w)| serde_json::json!({"k": k, "re": w.re, "im": w.im})).collect();
            to_json(&serde_json::json!({"schema": 1, "model": kind, "z": args.z, "m": args.m, "rows": v}))
        }
    };
    emit(&args.out, &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Hierarchy(a) => cmd_hierarchy(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Dispersion(a) => cmd_dispersion(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
