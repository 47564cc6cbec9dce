//! Command-line front end.
//!
//! Every subcommand writes a `<command>.json` report (`config`, `checks`,
//! `seed`, `rows`) into `--out`; with `--format csv` the rows are also written
//! as `<command>.csv`. Exit codes: 0 success, 1 a check failed, 2 invalid
//! configuration or I/O failure.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gfd;
use crate::linalg::{self, CVec};
use crate::models::{NamedState, PhasePoint, QrtKind, QrtModel};
use crate::operator::OperatorRep;
use crate::phase_space::{self, KernelSpec, PhaseGrid};
use crate::render::{self, fmt17, Projection, RenderSpec};
use crate::verify::{self, Check, VerifyConfig};
use crate::HalfInt;

#[derive(Parser, Debug)]
#[command(
    name = "phasefilter",
    version,
    about = "Group-Fourier spectra and phase-space kernels of quantum resource theories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operator- and phase-space purity spectra of states.
    Purities(PuritiesArgs),
    /// Sphere heatmap (PPM) and field dump of a state's symbol.
    Phasespace(PhasespaceArgs),
    /// Haar-state versus highest-weight duality statistics.
    Duality(DualityArgs),
    /// Twisted product of symbols against the direct symbol of the product.
    Star(StarArgs),
    /// Runs the invariant suites for one model.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QrtArg {
    Spin,
    Multipartite,
    Fermionic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = QrtArg::Spin)]
    pub qrt: QrtArg,
    /// Spin quantum number (integer, half-integer or `k/2`).
    #[arg(long = "spin-S", default_value = "2")]
    pub spin_s: String,
    /// Qubit or fermionic mode count.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// hw | ghz | haar[:SEED] | haar-mean | basis:M | coherent:THETA,PHI (repeatable)
    #[arg(long = "state")]
    pub states: Vec<String>,
    /// Cahill-Glauber parameter (repeatable; default -1, 0, 1).
    #[arg(long = "s", allow_negative_numbers = true)]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Clone, Debug)]
pub struct PuritiesArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug)]
pub struct PhasespaceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Render grid `NTHETAxNPHI`.
    #[arg(long, default_value = "64x128")]
    pub grid: String,
    #[arg(long, default_value = "robinson")]
    pub projection: String,
    /// Qubit whose single-sphere marginal is rendered (multipartite).
    #[arg(long, default_value_t = 0)]
    pub qubit: usize,
}

#[derive(Args, Clone, Debug)]
pub struct DualityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Largest accepted |z| on nontrivial irreps.
    #[arg(long, default_value_t = 4.0)]
    pub threshold: f64,
}

#[derive(Args, Clone, Debug)]
pub struct StarArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of random evaluation points.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Tolerance of quadrature-mediated identities.
    #[arg(long = "quad-tol", default_value_t = 1e-8)]
    pub quad_tol: f64,
    /// Tolerance of exact linear-algebra identities.
    #[arg(long = "lin-tol", default_value_t = 1e-10)]
    pub lin_tol: f64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Runs a parsed command; `Ok(false)` when a check failed.
pub fn execute(command: &Command) -> Result<bool> {
    match command {
        Command::Purities(a) => purities(a),
        Command::Phasespace(a) => phasespace(a),
        Command::Duality(a) => duality(a),
        Command::Star(a) => star(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

/// A parsed `--state` selector.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSel {
    Hw,
    Ghz,
    Haar(Option<u64>),
    /// Exact Haar-averaged purities; only meaningful for `purities`.
    HaarMean,
    Basis(HalfInt),
    Coherent(f64, f64),
}

impl FromStr for StateSel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown state selector {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("hw", None) => Ok(StateSel::Hw),
            ("ghz", None) => Ok(StateSel::Ghz),
            ("haar", None) => Ok(StateSel::Haar(None)),
            ("haar", Some(k)) => Ok(StateSel::Haar(Some(k.parse().map_err(|_| bad())?))),
            ("haar-mean", None) => Ok(StateSel::HaarMean),
            ("basis", Some(m)) => Ok(StateSel::Basis(m.parse()?)),
            ("coherent", Some(ang)) => {
                let (t, p) = ang.split_once(',').ok_or_else(bad)?;
                let t: f64 = t.trim().parse().map_err(|_| bad())?;
                let p: f64 = p.trim().parse().map_err(|_| bad())?;
                if !t.is_finite() || !p.is_finite() {
                    return Err(bad());
                }
                Ok(StateSel::Coherent(t, p))
            }
            _ => Err(bad()),
        }
    }
}

impl StateSel {
    fn vector(&self, model: &QrtModel, seed: u64) -> Result<CVec> {
        match *self {
            StateSel::Hw => Ok(model.hw_state()),
            StateSel::Ghz => model.named_state(NamedState::Ghz),
            StateSel::Haar(k) => model.named_state(NamedState::Haar(k.unwrap_or(seed))),
            StateSel::Basis(m) => model.named_state(NamedState::Basis(m)),
            StateSel::Coherent(t, p) => match model.kind() {
                QrtKind::Spin(_) => model.coherent_state(&PhasePoint::sphere(t, p)),
                QrtKind::Multipartite(n) => model.coherent_state(&PhasePoint::Spheres(vec![(t, p); n])),
                QrtKind::Fermionic(_) => Err(Error::Unsupported(
                    "coherent:THETA,PHI needs a sphere phase space".into(),
                )),
            },
            StateSel::HaarMean => Err(Error::InvalidArgument(
                "haar-mean is not a state vector; use it with purities".into(),
            )),
        }
    }
}

impl Common {
    pub fn model(&self) -> Result<QrtModel> {
        match self.qrt {
            QrtArg::Spin => QrtModel::spin(self.spin_s.parse()?),
            QrtArg::Multipartite => QrtModel::multipartite(self.n),
            QrtArg::Fermionic => QrtModel::fermionic(self.n),
        }
    }

    fn s_values(&self) -> Result<Vec<f64>> {
        let s = if self.s.is_empty() {
            vec![-1.0, 0.0, 1.0]
        } else {
            self.s.clone()
        };
        if let Some(bad) = s.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("s = {bad} is not finite")));
        }
        Ok(s)
    }

    fn states(&self) -> Result<Vec<(String, StateSel)>> {
        let names = if self.states.is_empty() {
            vec!["hw".to_string()]
        } else {
            self.states.clone()
        };
        names.into_iter().map(|n| Ok((n.clone(), n.parse()?))).collect()
    }

    fn config(&self, command: &str, extra: Value) -> Result<Value> {
        let mut v = json!({
            "command": command,
            "qrt": format!("{:?}", self.qrt).to_lowercase(),
            "model": self.model()?.kind().to_string(),
            "states": self.states()?.into_iter().map(|(n, _)| n).collect::<Vec<_>>(),
            "s": self.s_values()?,
            "seed": self.seed,
            "format": format!("{:?}", self.format).to_lowercase(),
        });
        if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
            obj.extend(more);
        }
        Ok(v)
    }
}

/// Tabular output rows.
trait Row: Serialize {
    const HEADER: &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    config: Value,
    checks: &'a [Check],
    seed: u64,
    rows: &'a [R],
}

fn write_outputs<R: Row>(common: &Common, name: &str, config: Value, checks: &[Check], rows: &[R]) -> Result<()> {
    fs::create_dir_all(&common.out)?;
    let report = Report {
        config,
        checks,
        seed: common.seed,
        rows,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    render::write_text(&common.out.join(format!("{name}.json")), &text)?;
    if common.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(R::HEADER).map_err(render::csv_err)?;
        for r in rows {
            w.write_record(r.record()).map_err(render::csv_err)?;
        }
        render::write_text(&common.out.join(format!("{name}.csv")), &render::finish_csv(w)?)?;
    }
    Ok(())
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<40} value {:.3e} bound {:.3e} tol {:.1e}",
            c.name, c.value, c.bound, c.tolerance
        );
    }
}

#[derive(Serialize)]
struct PurityRow {
    model: String,
    state: String,
    lambda: String,
    d_lambda: usize,
    tau: f64,
    s: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "P_tilde")]
    p_tilde: f64,
}

impl Row for PurityRow {
    const HEADER: &'static [&'static str] = &["model", "state", "lambda", "d_lambda", "tau", "s", "P", "P_tilde"];

    fn record(&self) -> Vec<String> {
        vec![
            self.model.clone(),
            self.state.clone(),
            self.lambda.clone(),
            self.d_lambda.to_string(),
            fmt17(self.tau),
            fmt17(self.s),
            fmt17(self.p),
            fmt17(self.p_tilde),
        ]
    }
}

fn purities(args: &PuritiesArgs) -> Result<bool> {
    let c = &args.common;
    let model = c.model()?;
    let s_values = c.s_values()?;
    let kind = model.kind();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (name, sel) in c.states()? {
        let spec = match sel {
            StateSel::HaarMean => {
                let entries = model
                    .labels()
                    .into_iter()
                    .map(|l| Ok((l, gfd::haar_mean_purity(&model, l)?)))
                    .collect::<Result<_>>()?;
                gfd::PuritySpectrum::from_entries(entries)
            }
            _ => gfd::state_purity_spectrum(&sel.vector(&model, c.seed)?, &model)?,
        };
        checks.push(Check::close(format!("total purity {name}"), spec.total, 1.0, 1e-10));
        for &s in &s_values {
            let tilde = gfd::phase_purity(&spec, s, &model)?;
            for (label, p) in spec.iter() {
                rows.push(PurityRow {
                    model: kind.to_string(),
                    state: name.clone(),
                    lambda: label.render(&kind),
                    d_lambda: model.irrep_dim(label)?,
                    tau: model.tau(label)?,
                    s,
                    p,
                    p_tilde: tilde.get(label),
                });
            }
        }
    }
    for r in rows.iter().filter(|r| r.s == s_values[0]) {
        println!(
            "{:<12} lambda {:>6}  P {:.10}  P~(s={}) {:.10}",
            r.state, r.lambda, r.p, r.s, r.p_tilde
        );
    }
    print_checks(&checks);
    write_outputs(c, "purities", c.config("purities", json!({}))?, &checks, &rows)?;
    Ok(checks.iter().all(|c| c.passed))
}

fn parse_grid(g: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("grid {g:?} is not NTHETAxNPHI"));
    let (a, b) = g.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn file_tag(state: &str, s: f64) -> String {
    let clean: String = state
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || ch == '-' || ch == '.' {
                ch
            } else {
                '_'
            }
        })
        .collect();
    format!("{clean}_s{s}")
}

#[derive(Serialize)]
struct FieldRow {
    state: String,
    s: f64,
    field: String,
    image: String,
    min: f64,
    max: f64,
    width: usize,
    height: usize,
}

impl Row for FieldRow {
    const HEADER: &'static [&'static str] = &["state", "s", "field", "image", "min", "max", "width", "height"];

    fn record(&self) -> Vec<String> {
        vec![
            self.state.clone(),
            fmt17(self.s),
            self.field.clone(),
            self.image.clone(),
            fmt17(self.min),
            fmt17(self.max),
            self.width.to_string(),
            self.height.to_string(),
        ]
    }
}

/// Values of a state's symbol at the render nodes (row-major).
pub fn field_values(model: &QrtModel, psi: &CVec, nodes: &[(f64, f64)], s: f64, qubit: usize) -> Result<Vec<f64>> {
    let rho = OperatorRep::projector(psi);
    match model.kind() {
        QrtKind::Spin(_) => {
            let points: Vec<PhasePoint> = nodes.iter().map(|&(t, p)| PhasePoint::sphere(t, p)).collect();
            let vals = phase_space::symbol_values(model, &rho, &points, &KernelSpec::CahillGlauber(s))?;
            Ok(vals.into_iter().map(|z| z.re).collect())
        }
        QrtKind::Multipartite(_) => phase_space::marginal_symbol_values(model, &rho, qubit, nodes, s),
        QrtKind::Fermionic(_) => Err(Error::Unsupported(
            "no sphere projection of the fermionic phase space".into(),
        )),
    }
}

fn phasespace(args: &PhasespaceArgs) -> Result<bool> {
    let c = &args.common;
    let model = c.model()?;
    let (nt, np) = parse_grid(&args.grid)?;
    let projection: Projection = args.projection.parse()?;
    let spec = RenderSpec::new(nt, np, projection)?;
    if matches!(model.kind(), QrtKind::Fermionic(_)) {
        return Err(Error::Unsupported(
            "no sphere projection of the fermionic phase space".into(),
        ));
    }
    let nodes = spec.nodes();
    fs::create_dir_all(&c.out)?;
    let mut rows = Vec::new();
    for (name, sel) in c.states()? {
        let psi = sel.vector(&model, c.seed)?;
        for s in c.s_values()? {
            let values = field_values(&model, &psi, &nodes, s, args.qubit)?;
            let tag = file_tag(&name, s);
            let field = match c.format {
                Format::Csv => {
                    let f = format!("phasespace_{tag}.csv");
                    render::write_text(&c.out.join(&f), &render::field_csv(&nodes, &values)?)?;
                    f
                }
                Format::Json => {
                    let f = format!("phasespace_{tag}.json");
                    let (t, p): (Vec<f64>, Vec<f64>) = nodes.iter().copied().unzip();
                    let body = json!({ "theta": t, "phi": p, "value": values });
                    render::write_text(&c.out.join(&f), &(serde_json::to_string(&body)? + "\n"))?;
                    f
                }
            };
            let img = render::render(&values, &spec)?;
            let image = format!("phasespace_{tag}.ppm");
            img.write_ppm(&c.out.join(&image))?;
            println!("{name} s={s}: {}", render::describe(&nodes, &values));
            rows.push(FieldRow {
                state: name.clone(),
                s,
                field,
                image,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                width: img.width,
                height: img.height,
            });
        }
    }
    let config = c.config(
        "phasespace",
        json!({ "grid": [nt, np], "projection": args.projection, "qubit": args.qubit }),
    )?;
    // the field list is written as JSON only; CSV format refers to the field dumps
    let csv_free = Common {
        format: Format::Json,
        ..c.clone()
    };
    write_outputs(&csv_free, "phasespace", config, &[], &rows)?;
    Ok(true)
}

#[derive(Serialize)]
struct DualityOut {
    s: f64,
    lambda: String,
    d_lambda: usize,
    mean: f64,
    std_err: f64,
    rhs: f64,
    z: f64,
    /// Whether the row enters the exit code (nontrivial irreps only).
    gated: bool,
}

impl Row for DualityOut {
    const HEADER: &'static [&'static str] = &["s", "lambda", "d_lambda", "mean", "std_err", "rhs", "z", "gated"];

    fn record(&self) -> Vec<String> {
        vec![
            fmt17(self.s),
            self.lambda.clone(),
            self.d_lambda.to_string(),
            fmt17(self.mean),
            fmt17(self.std_err),
            fmt17(self.rhs),
            fmt17(self.z),
            self.gated.to_string(),
        ]
    }
}

fn duality(args: &DualityArgs) -> Result<bool> {
    let c = &args.common;
    let model = c.model()?;
    let kind = model.kind();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for s in c.s_values()? {
        for r in gfd::duality_check(&model, s, args.samples, c.seed)? {
            let lambda = r.label.render(&kind);
            let gated = !r.label.is_trivial();
            if gated {
                checks.push(Check::at_most(
                    format!("duality s={s} lambda={lambda} |z|"),
                    r.z.abs(),
                    args.threshold,
                    0.0,
                ));
            }
            println!(
                "s={s:<5} lambda {lambda:>6}  mean {:.6e} +- {:.1e}  rhs {:.6e}  z {:+.2}{}",
                r.mean,
                r.std_err,
                r.rhs,
                r.z,
                if gated { "" } else { "  (trivial, not gated)" }
            );
            rows.push(DualityOut {
                s,
                lambda,
                d_lambda: model.irrep_dim(r.label)?,
                mean: r.mean,
                std_err: r.std_err,
                rhs: r.rhs,
                z: r.z,
                gated,
            });
        }
    }
    print_checks(&checks);
    let config = c.config(
        "duality",
        json!({ "samples": args.samples, "threshold": args.threshold }),
    )?;
    write_outputs(c, "duality", config, &checks, &rows)?;
    Ok(checks.iter().all(|c| c.passed))
}

#[derive(Serialize)]
struct StarRow {
    s: f64,
    point: usize,
    star_re: f64,
    star_im: f64,
    direct: f64,
    abs_err: f64,
}

impl Row for StarRow {
    const HEADER: &'static [&'static str] = &["s", "point", "star_re", "star_im", "direct", "abs_err"];

    fn record(&self) -> Vec<String> {
        vec![
            fmt17(self.s),
            self.point.to_string(),
            fmt17(self.star_re),
            fmt17(self.star_im),
            fmt17(self.direct),
            fmt17(self.abs_err),
        ]
    }
}

fn star(args: &StarArgs) -> Result<bool> {
    let c = &args.common;
    let model = c.model()?;
    let grid = Arc::new(PhaseGrid::for_model(&model, 1.0)?);
    let (_, sel) = c.states()?.into_iter().next().expect("at least one state");
    let a = OperatorRep::projector(&sel.vector(&model, c.seed)?);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let b = OperatorRep::Dense(linalg::random_hermitian(model.dim(), &mut rng));
    let ab = OperatorRep::Dense(a.to_dense() * b.to_dense());
    let points: Vec<PhasePoint> = (0..args.points).map(|_| model.random_phase_point(&mut rng)).collect();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for s in c.s_values()? {
        let spec = KernelSpec::CahillGlauber(s);
        let fa = phase_space::symbol_field(&model, &a, grid.clone(), &spec)?;
        let fb = phase_space::symbol_field(&model, &b, grid.clone(), &spec)?;
        let twisted = phase_space::star_product(&model, &fa, &fb, s, &points)?;
        let direct = phase_space::symbol_values(&model, &ab, &points, &spec)?;
        let mut worst = 0.0f64;
        for (i, (t, d)) in twisted.iter().zip(&direct).enumerate() {
            let err = (t - d).norm();
            worst = worst.max(err / d.norm().max(1.0));
            rows.push(StarRow {
                s,
                point: i,
                star_re: t.re,
                star_im: t.im,
                direct: d.re,
                abs_err: err,
            });
        }
        checks.push(Check::at_most(
            format!("twisted product s={s}"),
            worst,
            0.0,
            args.tolerance,
        ));
        if model.dim() <= 6 && points.len() >= 3 {
            let triple = (&points[0], &points[1], &points[2]);
            let m = phase_space::triple_kernel(&model, (s, s, s), triple)?;
            let f = phase_space::triple_kernel_factorized(&model, (s, s, s), triple)?;
            checks.push(Check::at_most(
                format!("coupling factorization s={s}"),
                (m - f).norm(),
                0.0,
                1e-10,
            ));
        }
    }
    print_checks(&checks);
    let config = c.config("star", json!({ "points": args.points, "tolerance": args.tolerance }))?;
    write_outputs(c, "star", config, &checks, &rows)?;
    Ok(checks.iter().all(|c| c.passed))
}

impl Row for Check {
    const HEADER: &'static [&'static str] = &["name", "passed", "value", "bound", "tolerance"];

    fn record(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            self.passed.to_string(),
            fmt17(self.value),
            fmt17(self.bound),
            fmt17(self.tolerance),
        ]
    }
}

fn verify_cmd(args: &VerifyArgs) -> Result<bool> {
    let c = &args.common;
    let model = c.model()?;
    let (_, sel) = c.states()?.into_iter().next().expect("at least one state");
    let psi = sel.vector(&model, c.seed)?;
    let cfg = VerifyConfig {
        s_values: c.s_values()?,
        seed: c.seed,
        haar_samples: args.samples,
        linear_tol: args.lin_tol,
        quadrature_tol: args.quad_tol,
        ..VerifyConfig::default()
    };
    let checks = verify::run_checks(&model, &psi, &cfg)?;
    print_checks(&checks);
    let config = c.config(
        "verify",
        json!({ "samples": args.samples, "quad_tol": args.quad_tol, "lin_tol": args.lin_tol }),
    )?;
    write_outputs(c, "verify", config, &checks, &checks)?;
    Ok(checks.iter().all(|c| c.passed))
}
