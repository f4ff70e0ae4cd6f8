//! Command-line front end: every computation as one reproducible run that
//! writes a single CSV or JSON document.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::norms::{
    decay_slope, dyadic_sum_norm, keller_quotient, lorentz_nu1, lp_fullspace, mixed_norm, mt_norm, profile_corpus,
    split_bound_quotient, DecayFamily, Inner, NormReport, NormTarget, RadialProfile, SquareWell,
};
use crate::potentials::{residual_ratio_test, Family as ResidualFamily, GridSpec, IjPotential, ReducedPoint, WvnPotential};
use crate::resolvent::{
    bs_matrix, bs_scan, double_region_integrals, kernel_qnorm, op_norm_seeded, region_integrals, rho_for,
    support_radius, sup_over_mu, BsGrid, BsPotential, ChannelIndex, Energy, KernelSpec, ScanGrid,
};
use crate::specfun::{bessel_i, bessel_j, bessel_k, bessel_y, certify_bounds, hankel1, Order, DEFAULT_ALPHA0};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "evbounds", version, about = "Embedded-eigenvalue potentials, norm functionals and Bessel/resolvent kernel bounds")]
struct Cli {
    /// Output path; `-` writes to stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Output format (defaults to JSON for `verify residual`, CSV otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a potential and its eigenfunction.
    Potential {
        #[command(subcommand)]
        cmd: PotentialCmd,
    },
    /// Finite-difference check of the eigenvalue equation.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Norm functionals of potentials and profiles.
    Norms {
        #[command(subcommand)]
        cmd: NormsCmd,
    },
    /// Bessel functions and their uniform bounds.
    Bessel {
        #[command(subcommand)]
        cmd: BesselCmd,
    },
    /// Bessel–Hankel kernel integrals.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Birman–Schwinger matrices and scans.
    Bs {
        #[command(subcommand)]
        cmd: BsCmd,
    },
    /// Eigenvalue/norm quotients.
    Keller {
        #[command(subcommand)]
        cmd: KellerCmd,
    },
    /// Decay of ‖V_n‖_p in the scale parameter n.
    Decay {
        #[command(subcommand)]
        cmd: DecayCmd,
    },
}

#[derive(Subcommand, Debug)]
enum PotentialCmd {
    Sample(PotentialArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Residual(ResidualArgs),
}

#[derive(Subcommand, Debug)]
enum NormsCmd {
    Compute(NormArgs),
}

#[derive(Subcommand, Debug)]
enum BesselCmd {
    Eval(BesselEvalArgs),
    Certify(CertifyArgs),
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    Qnorm(QnormArgs),
    Supmu(SupmuArgs),
    Regions(RegionArgs),
    Doubleregions(RegionArgs),
}

#[derive(Subcommand, Debug)]
enum BsCmd {
    Matrix(BsMatrixArgs),
    Scan(BsScanArgs),
}

#[derive(Subcommand, Debug)]
enum KellerCmd {
    Quotient(KellerArgs),
}

#[derive(Subcommand, Debug)]
enum DecayCmd {
    Slope(DecayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyArg {
    Ij,
    Wvn,
}

#[derive(Args, Debug, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    nu: u32,
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Defaults to the family's standard choice for ν.
    #[arg(long)]
    alpha: Option<f64>,
}

enum Built {
    Ij(IjPotential),
    Wvn(WvnPotential),
}

impl FamilyArgs {
    fn build(&self) -> Result<Built> {
        Ok(match (self.family, self.alpha) {
            (FamilyArg::Ij, Some(a)) => Built::Ij(IjPotential::new(self.nu, self.n, a)?),
            (FamilyArg::Ij, None) => Built::Ij(IjPotential::with_default_alpha(self.nu, self.n)?),
            (FamilyArg::Wvn, Some(a)) => Built::Wvn(WvnPotential::new(self.nu, self.n, a)?),
            (FamilyArg::Wvn, None) => Built::Wvn(WvnPotential::with_default_alpha(self.nu, self.n)?),
        })
    }
}

impl Built {
    fn alpha(&self) -> f64 {
        match self {
            Built::Ij(p) => p.alpha,
            Built::Wvn(p) => p.alpha,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct PotentialArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    /// Radial extent (WvN).
    #[arg(long, default_value_t = 60.0)]
    rmax: f64,
    /// Box half-length in x₁ (IJ).
    #[arg(long, default_value_t = 10.0)]
    x1max: f64,
    /// Box extent in s = |x′| (IJ).
    #[arg(long, default_value_t = 5.0)]
    smax: f64,
    #[arg(long, default_value_t = 0.05)]
    h: f64,
}

#[derive(Args, Debug, Serialize)]
struct ResidualArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    /// Fine step; the ratio test compares 2h with h.
    #[arg(long, default_value_t = 0.05)]
    h: f64,
    #[arg(long, default_value_t = 60.0)]
    rmax: f64,
    #[arg(long, default_value_t = 30.0)]
    x1max: f64,
    #[arg(long, default_value_t = 10.0)]
    smax: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FunctionalArg {
    Lp,
    Mixed,
    Lorentz,
    Mt,
    Dyadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TargetArg {
    Ij,
    Wvn,
    Gaussian,
    Corpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum InnerArg {
    L2,
    Linf,
}

#[derive(Args, Debug, Serialize)]
struct NormArgs {
    #[arg(long, value_enum)]
    functional: FunctionalArg,
    #[arg(long, value_enum)]
    target: TargetArg,
    #[arg(long, default_value_t = 3)]
    nu: u32,
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent for lp, mixed and dyadic (`inf` allowed for dyadic).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "l2")]
    inner: InnerArg,
    /// Number of corpus profiles.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Sampling extent when a WvN potential is turned into a profile.
    #[arg(long, default_value_t = 200.0)]
    rmax: f64,
    #[arg(long, default_value_t = 2000)]
    per_decade: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BesselFn {
    J,
    Y,
    H1,
    I,
    K,
}

#[derive(Args, Debug, Serialize)]
struct BesselEvalArgs {
    #[arg(long, value_enum, default_value = "j")]
    function: BesselFn,
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<f64>,
}

#[derive(Args, Debug, Serialize)]
struct CertifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5,10,20,50")]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA0)]
    alpha0: f64,
}

#[derive(Args, Debug, Serialize)]
struct WeightArgs {
    #[arg(long)]
    q: f64,
    /// Weight exponent; derived from --nu as −q(ν−2)/2 + ν − 1 when absent.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
}

impl WeightArgs {
    fn rho(&self) -> Result<f64> {
        match (self.rho, self.nu) {
            (Some(r), _) => Ok(r),
            (None, Some(nu)) => Ok(rho_for(nu, self.q)),
            (None, None) => Err(Error::invalid("give --rho or --nu")),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct QnormArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    weight: WeightArgs,
    #[arg(long, default_value_t = crate::resolvent::DEFAULT_CUTOFF)]
    cutoff: f64,
}

#[derive(Args, Debug, Serialize)]
struct SupmuArgs {
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<f64>,
}

#[derive(Args, Debug, Serialize)]
struct RegionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    weight: WeightArgs,
    #[arg(long, default_value_t = DEFAULT_ALPHA0)]
    alpha0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BsPotentialArg {
    Wvn,
    Well,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum EnergyArg {
    Positive,
    Negative,
}

#[derive(Args, Debug, Serialize)]
struct BsPotentialArgs {
    #[arg(long, value_enum, default_value = "wvn")]
    potential: BsPotentialArg,
    /// Space dimension of the channel problem.
    #[arg(long, default_value_t = 3)]
    nu: u32,
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    #[arg(long)]
    alpha: Option<f64>,
    /// Depth of the square well V = −depth on r < width.
    #[arg(long, default_value_t = 10.0)]
    depth: f64,
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Multiplies the potential.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    coupling: f64,
    #[arg(long, default_value_t = 60.0)]
    rmax: f64,
    #[arg(long, default_value_t = 12.0)]
    nodes_per_length: f64,
    #[arg(long, default_value_t = 6)]
    order: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// A radial potential owned by the CLI, with its extent and length scale.
struct RadialV {
    f: Box<dyn Fn(f64) -> Complex64 + Sync>,
    extent: f64,
    scale: f64,
}

impl BsPotentialArgs {
    fn build(&self) -> Result<RadialV> {
        let c = self.coupling;
        if !c.is_finite() {
            return Err(Error::invalid("coupling must be finite"));
        }
        match self.potential {
            BsPotentialArg::Wvn => {
                let p = match self.alpha {
                    Some(a) => WvnPotential::new(self.nu, self.n, a)?,
                    None => WvnPotential::with_default_alpha(self.nu, self.n)?,
                };
                if !(self.rmax > 0.0) {
                    return Err(Error::invalid("rmax must be positive"));
                }
                Ok(RadialV {
                    f: Box::new(move |r| Complex64::new(c * p.potential(r).unwrap_or(f64::NAN), 0.0)),
                    extent: self.rmax,
                    scale: std::f64::consts::PI,
                })
            }
            BsPotentialArg::Well => {
                let well = SquareWell::new(self.depth, self.width)?;
                let (d, a) = (well.depth, well.half_width);
                Ok(RadialV {
                    f: Box::new(move |r| Complex64::new(if r < a { -c * d } else { 0.0 }, 0.0)),
                    extent: a,
                    scale: a,
                })
            }
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct BsMatrixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pot: BsPotentialArgs,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "positive")]
    energy: EnergyArg,
    /// Write every matrix entry instead of the summary row.
    #[arg(long)]
    entries: bool,
}

#[derive(Args, Debug, Serialize)]
struct BsScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pot: BsPotentialArgs,
    #[arg(long, default_value_t = 0.1)]
    lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    lambda_max: f64,
    /// Energies, log-spaced between the bounds.
    #[arg(long, default_value_t = 12)]
    lambda_count: usize,
    #[arg(long, default_value_t = 8)]
    lmax: u32,
}

#[derive(Args, Debug, Serialize)]
struct KellerArgs {
    /// Square-well depth on the line; the eigenvalue and the norm are computed.
    #[arg(long)]
    depth: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long, allow_hyphen_values = true)]
    energy_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    energy_im: f64,
    /// ∫|V|^{γ+ν/2} supplied directly.
    #[arg(long)]
    norm_value: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Second term of the split bound.
    #[arg(long)]
    norm2: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct DecayArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    nu: u32,
    #[arg(long)]
    p: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    n: Vec<f64>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::U(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

/// 17 significant digits, so every value round-trips.
fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::U(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) if v.is_finite() => json!(v),
            Cell::F(v) => json!(fmt_f64(*v)),
            Cell::U(v) => json!(v),
            Cell::S(s) => json!(s),
            Cell::B(b) => json!(b),
        }
    }
}

/// One output document.
struct Doc {
    command: &'static str,
    config: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    summary: Map<String, Value>,
    warnings: Vec<String>,
    default_format: Format,
}

impl Doc {
    fn new(command: &'static str, args: &impl Serialize, seed: u64, columns: &[&'static str]) -> Result<Self> {
        let mut config = match serde_json::to_value(args)? {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        config.insert("seed".into(), json!(seed));
        Ok(Self {
            command,
            config,
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Map::new(),
            warnings: Vec::new(),
            default_format: Format::Csv,
        })
    }

    fn resolve(&mut self, key: &str, v: impl Serialize) {
        self.config.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    fn note(&mut self, key: &str, v: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<String> {
        let mut out = String::new();
        match format {
            Format::Csv => {
                let config = serde_json::to_string(&self.config)?;
                writeln!(out, "# evbounds {} {}", self.command, config).ok();
                let mut summary = self.summary.clone();
                if !self.warnings.is_empty() {
                    summary.insert("warnings".into(), json!(self.warnings));
                }
                if !summary.is_empty() {
                    writeln!(out, "# summary {}", serde_json::to_string(&summary)?).ok();
                }
                writeln!(out, "{}", self.columns.join(",")).ok();
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(",")).ok();
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect())
                    })
                    .collect();
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "config": self.config,
                    "summary": self.summary,
                    "warnings": self.warnings,
                    "columns": self.columns,
                    "rows": rows,
                });
                out = serde_json::to_string_pretty(&doc)?;
                out.push('\n');
            }
        }
        Ok(out)
    }
}

fn orders(mus: &[f64]) -> Result<Vec<Order>> {
    if mus.is_empty() {
        return Err(Error::invalid("no orders given"));
    }
    mus.iter().map(|&m| Order::new(m)).collect()
}

fn potential_sample(a: &PotentialArgs, seed: u64) -> Result<Doc> {
    if !(a.h > 0.0) {
        return Err(Error::invalid("h must be positive"));
    }
    let built = a.family.build()?;
    match built {
        Built::Wvn(p) => {
            let mut doc = Doc::new("potential sample", a, seed, &["r", "V", "psi"])?;
            doc.resolve("alpha", p.alpha);
            let count = (a.rmax / a.h).floor() as usize;
            if count == 0 {
                return Err(Error::invalid("rmax must exceed h"));
            }
            for i in 1..=count {
                let r = i as f64 * a.h;
                doc.push(vec![r.into(), p.potential(r)?.into(), p.eigenfunction(r)?.into()]);
            }
            Ok(doc)
        }
        Built::Ij(p) => {
            let mut doc = Doc::new("potential sample", a, seed, &["x1", "s", "V", "psi"])?;
            doc.resolve("alpha", p.alpha);
            let nx = (a.x1max / a.h).floor() as i64;
            let ns = (a.smax / a.h).floor() as usize;
            if nx == 0 || ns == 0 {
                return Err(Error::invalid("box must be larger than h"));
            }
            for i in -nx..=nx {
                for j in 0..ns {
                    let (x1, s) = (i as f64 * a.h, (j as f64 + 0.5) * a.h);
                    let pt = ReducedPoint::new(x1, s);
                    doc.push(vec![x1.into(), s.into(), p.potential(pt).into(), p.eigenfunction(pt).into()]);
                }
            }
            Ok(doc)
        }
    }
}

fn verify_residual(a: &ResidualArgs, seed: u64) -> Result<Doc> {
    let built = a.family.build()?;
    let mut doc = Doc::new("verify residual", a, seed, &["h", "points", "max_rel_residual", "l2_rel_residual"])?;
    doc.default_format = Format::Json;
    doc.resolve("alpha", built.alpha());
    let check = match &built {
        Built::Ij(p) => residual_ratio_test(
            ResidualFamily::Ij(p),
            GridSpec::Box {
                x1_max: a.x1max,
                s_max: a.smax,
            },
            2.0 * a.h,
        )?,
        Built::Wvn(p) => residual_ratio_test(ResidualFamily::Wvn(p), GridSpec::Radial { r_max: a.rmax }, 2.0 * a.h)?,
    };
    for r in [&check.coarse, &check.fine] {
        doc.push(vec![r.h.into(), r.points.into(), r.max_rel.into(), r.l2_rel.into()]);
    }
    doc.note("l2_rel_residual", check.fine.l2_rel);
    doc.note("max_rel_residual", check.fine.max_rel);
    doc.note("ratio", check.ratio);
    doc.note("ratio_window", crate::potentials::RATIO_WINDOW);
    doc.note("ratio_test", if check.asymptotic { "pass" } else { "fail" });
    doc.warnings.extend(check.warning.clone());
    Ok(doc)
}

fn norms_compute(a: &NormArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new(
        "norms compute",
        a,
        seed,
        &["target", "index", "functional", "p", "value", "abs_err", "norm"],
    )?;
    let need_p = || a.p.ok_or_else(|| Error::invalid("this functional needs --p"));
    let inner = match a.inner {
        InnerArg::L2 => Inner::L2Sphere,
        InnerArg::Linf => Inner::LinfSphere,
    };
    let profile_functional = |profile: &RadialProfile| -> Result<NormReport> {
        match a.functional {
            FunctionalArg::Lp => lp_fullspace(NormTarget::Profile(profile), need_p()?),
            FunctionalArg::Mixed => mixed_norm(NormTarget::Profile(profile), need_p()?, inner),
            FunctionalArg::Lorentz => lorentz_nu1(profile),
            FunctionalArg::Mt => mt_norm(profile),
            FunctionalArg::Dyadic => dyadic_sum_norm(profile, need_p()?),
        }
    };
    let mut reports: Vec<(String, NormReport)> = Vec::new();
    match a.target {
        TargetArg::Ij => {
            let p = match a.alpha {
                Some(al) => IjPotential::new(a.nu, a.n, al)?,
                None => IjPotential::with_default_alpha(a.nu, a.n)?,
            };
            doc.resolve("alpha", p.alpha);
            let r = match a.functional {
                FunctionalArg::Lp => lp_fullspace(NormTarget::Ij(&p), need_p()?)?,
                FunctionalArg::Mixed => mixed_norm(NormTarget::Ij(&p), need_p()?, inner)?,
                _ => {
                    return Err(Error::invalid(
                        "IJ potentials are not radial; lorentz, mt and dyadic need a radial target",
                    ))
                }
            };
            reports.push(("ij".into(), r));
        }
        TargetArg::Wvn => {
            let p = match a.alpha {
                Some(al) => WvnPotential::new(a.nu, a.n, al)?,
                None => WvnPotential::with_default_alpha(a.nu, a.n)?,
            };
            doc.resolve("alpha", p.alpha);
            let r = match a.functional {
                FunctionalArg::Lp => lp_fullspace(NormTarget::Wvn(&p), need_p()?)?,
                FunctionalArg::Mixed => mixed_norm(NormTarget::Wvn(&p), need_p()?, inner)?,
                _ => {
                    let failed = std::cell::Cell::new(false);
                    let profile = RadialProfile::sample(
                        |r| {
                            p.potential(r).unwrap_or_else(|_| {
                                failed.set(true);
                                0.0
                            })
                        },
                        1e-3,
                        a.rmax,
                        a.per_decade,
                        a.nu,
                        -1.0,
                    );
                    if failed.get() {
                        return Err(Error::Overflow("WvN potential could not be evaluated on the sampling grid".into()));
                    }
                    profile_functional(&profile?)?
                }
            };
            reports.push(("wvn".into(), r));
        }
        TargetArg::Gaussian => {
            let profile = RadialProfile::sample(|r| (-r * r).exp(), 1e-4, 8.0, a.per_decade, a.nu, -4.0)?;
            reports.push(("gaussian".into(), profile_functional(&profile)?));
        }
        TargetArg::Corpus => {
            if a.count == 0 {
                return Err(Error::invalid("count must be positive"));
            }
            for profile in profile_corpus(seed, a.count) {
                reports.push(("corpus".into(), profile_functional(&profile)?));
            }
        }
    }
    for (i, (target, r)) in reports.into_iter().enumerate() {
        let p = r.p.unwrap_or(f64::NAN);
        let norm = match a.functional {
            FunctionalArg::Lp | FunctionalArg::Mixed => r.value.powf(1.0 / p),
            _ => r.value,
        };
        doc.push(vec![
            target.into(),
            i.into(),
            r.functional.to_string().into(),
            p.into(),
            r.value.into(),
            r.abs_err.into(),
            norm.into(),
        ]);
        doc.warnings.extend(r.warnings.iter().map(|w| format!("row {i}: {w}")));
    }
    Ok(doc)
}

fn bessel_eval(a: &BesselEvalArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new("bessel eval", a, seed, &["function", "mu", "r", "re", "im", "abs_err"])?;
    let name = format!("{:?}", a.function).to_lowercase();
    for mu in orders(&a.mu)? {
        for &r in &a.r {
            let (re, im, err) = match a.function {
                BesselFn::J => bessel_j(mu, r).map(|e| (e.value, 0.0, e.abs_err))?,
                BesselFn::Y => bessel_y(mu, r).map(|e| (e.value, 0.0, e.abs_err))?,
                BesselFn::I => bessel_i(mu, r).map(|e| (e.value, 0.0, e.abs_err))?,
                BesselFn::K => bessel_k(mu, r).map(|e| (e.value, 0.0, e.abs_err))?,
                BesselFn::H1 => hankel1(mu, r).map(|e| (e.value.re, e.value.im, e.abs_err))?,
            };
            doc.push(vec![name.clone().into(), mu.value().into(), r.into(), re.into(), im.into(), err.into()]);
        }
    }
    Ok(doc)
}

fn bessel_certify(a: &CertifyArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new(
        "bessel certify",
        a,
        seed,
        &["region", "kind", "constant", "argmax_mu", "argmax_r", "samples"],
    )?;
    for row in certify_bounds(&orders(&a.mu)?, a.samples, a.alpha0)? {
        doc.push(vec![
            row.region.tag().into(),
            row.kind.to_string().into(),
            row.constant.into(),
            row.argmax_mu.into(),
            row.argmax_r.into(),
            row.samples.into(),
        ]);
    }
    Ok(doc)
}

fn kernel_qnorm_cmd(a: &QnormArgs, seed: u64) -> Result<Doc> {
    let rho = a.weight.rho()?;
    let mut doc = Doc::new(
        "kernel qnorm",
        a,
        seed,
        &["mu", "q", "rho", "value", "abs_err", "tail", "cutoff"],
    )?;
    doc.resolve("rho", rho);
    for mu in orders(&a.mu)? {
        let v = kernel_qnorm(mu, a.weight.q, rho, a.cutoff)?;
        doc.push(vec![v.mu.into(), v.q.into(), v.rho.into(), v.value.into(), v.abs_err.into(), v.tail.into(), v.cutoff.into()]);
    }
    Ok(doc)
}

fn kernel_supmu(a: &SupmuArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new("kernel supmu", a, seed, &["mu", "value", "error"])?;
    let s = sup_over_mu(a.q, a.nu, &orders(&a.mu)?)?;
    doc.resolve("rho", s.rho);
    for r in &s.rows {
        doc.push(vec![r.mu.into(), r.value.into(), r.abs_err.into()]);
    }
    doc.note("max", s.max);
    doc.note("argmax", s.argmax);
    doc.note("growth_trend", s.growth_trend);
    Ok(doc)
}

fn kernel_regions(a: &RegionArgs, seed: u64) -> Result<Doc> {
    let rho = a.weight.rho()?;
    let mut doc = Doc::new(
        "kernel regions",
        a,
        seed,
        &[
            "mu", "q", "rho", "I1", "I2", "I3", "I4", "I5", "I6", "err1", "err2", "err3", "err4", "err5", "err6", "total",
        ],
    )?;
    doc.resolve("rho", rho);
    for mu in orders(&a.mu)? {
        let r = region_integrals(mu, a.weight.q, rho, a.alpha0)?;
        let mut row: Vec<Cell> = vec![r.mu.into(), r.q.into(), r.rho.into()];
        row.extend(r.values.iter().map(|&v| Cell::F(v)));
        row.extend(r.errors.iter().map(|&v| Cell::F(v)));
        row.push(r.total().into());
        doc.push(row);
    }
    Ok(doc)
}

fn kernel_doubleregions(a: &RegionArgs, seed: u64) -> Result<Doc> {
    let rho = a.weight.rho()?;
    let mut doc = Doc::new(
        "kernel doubleregions",
        a,
        seed,
        &["mu", "q", "rho", "I1", "I2", "err1", "err2", "majorant1", "majorant2"],
    )?;
    doc.resolve("rho", rho);
    for mu in orders(&a.mu)? {
        let d = double_region_integrals(mu, a.weight.q, rho, a.alpha0)?;
        doc.push(vec![
            d.mu.into(),
            d.q.into(),
            d.rho.into(),
            d.values[0].into(),
            d.values[1].into(),
            d.errors[0].into(),
            d.errors[1].into(),
            d.majorants[0].into(),
            d.majorants[1].into(),
        ]);
    }
    Ok(doc)
}

fn bs_matrix_cmd(a: &BsMatrixArgs, seed: u64) -> Result<Doc> {
    let columns: &[&'static str] = if a.entries {
        &["i", "j", "r_i", "r_j", "re", "im"]
    } else {
        &["nu", "l", "energy", "lambda", "dim", "sigma_max"]
    };
    let mut doc = Doc::new("bs matrix", a, seed, columns)?;
    let v = a.pot.build()?;
    let energy = match a.energy {
        EnergyArg::Positive => Energy::PositiveLimit(a.lambda),
        EnergyArg::Negative => Energy::Negative(a.lambda),
    };
    let spec = KernelSpec::new(ChannelIndex::new(a.l, a.pot.nu)?, energy)?;
    let pot = BsPotential::Callable(&*v.f);
    let extent = support_radius(pot, a.pot.nu, v.extent);
    let grid = BsGrid::resolving(extent, energy.wavenumber(), v.scale, a.pot.nodes_per_length, a.pot.order)?;
    let m = bs_matrix(pot, spec, &grid)?;
    let sigma = op_norm_seeded(&m.symmetrized(), a.pot.tol, seed)?;
    doc.note("sigma_max", sigma);
    doc.note("dim", m.dim());
    doc.note("extent", extent);
    if a.entries {
        for j in 0..m.dim() {
            for i in 0..m.dim() {
                let z = m.entries[(i, j)];
                doc.push(vec![i.into(), j.into(), m.nodes[i].into(), m.nodes[j].into(), z.re.into(), z.im.into()]);
            }
        }
    } else {
        let kind = match a.energy {
            EnergyArg::Positive => "positive_limit",
            EnergyArg::Negative => "negative",
        };
        doc.push(vec![a.pot.nu.into(), a.l.into(), kind.into(), a.lambda.into(), m.dim().into(), sigma.into()]);
    }
    Ok(doc)
}

fn bs_scan_cmd(a: &BsScanArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new("bs scan", a, seed, &["lambda", "l", "sigma_max", "flag"])?;
    if !(a.lambda_min > 0.0 && a.lambda_max >= a.lambda_min) || a.lambda_count == 0 {
        return Err(Error::invalid("need 0 < lambda_min <= lambda_max and lambda_count >= 1"));
    }
    let lambdas: Vec<f64> = if a.lambda_count == 1 {
        vec![a.lambda_min]
    } else {
        (0..a.lambda_count)
            .map(|i| a.lambda_min * (a.lambda_max / a.lambda_min).powf(i as f64 / (a.lambda_count - 1) as f64))
            .collect()
    };
    let v = a.pot.build()?;
    let grid = ScanGrid {
        r_max: v.extent,
        scale: v.scale,
        nodes_per_length: a.pot.nodes_per_length,
        order: a.pot.order,
        seed,
    };
    let scan = bs_scan(BsPotential::Callable(&*v.f), a.pot.nu, &lambdas, a.lmax, grid, a.pot.tol)?;
    for r in &scan.rows {
        doc.push(vec![r.lambda.into(), r.l.into(), r.sigma_max.into(), r.flag.into()]);
    }
    doc.note("crossings", &scan.crossings);
    doc.warnings.extend(scan.warnings);
    Ok(doc)
}

fn keller_cmd(a: &KellerArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new("keller quotient", a, seed, &["energy_re", "energy_im", "gamma", "norm", "quotient"])?;
    let (e, norm) = match (a.depth, a.energy_re, a.norm_value) {
        (Some(depth), None, None) => {
            let well = SquareWell::new(depth, a.width)?;
            let e = well.ground_state();
            (Complex64::new(e, 0.0), well.lq_integral(a.gamma + 0.5))
        }
        (None, Some(re), Some(norm)) => (Complex64::new(re, a.energy_im), norm),
        _ => {
            return Err(Error::invalid(
                "give either --depth (square well on the line) or both --energy-re and --norm-value",
            ))
        }
    };
    let quotient = match (a.norm2, a.gamma2) {
        (None, None) => keller_quotient(e, norm, a.gamma)?,
        (Some(n2), Some(g2)) => split_bound_quotient(e, norm, a.gamma, n2, g2)?,
        _ => return Err(Error::invalid("--norm2 and --gamma2 go together")),
    };
    doc.push(vec![e.re.into(), e.im.into(), a.gamma.into(), norm.into(), quotient.into()]);
    Ok(doc)
}

fn decay_cmd(a: &DecayArgs, seed: u64) -> Result<Doc> {
    let mut doc = Doc::new("decay slope", a, seed, &["n", "norm"])?;
    let family = match a.family {
        FamilyArg::Ij => DecayFamily::Ij,
        FamilyArg::Wvn => DecayFamily::Wvn,
    };
    let d = decay_slope(family, a.nu, a.alpha, a.p, &a.n)?;
    doc.resolve("alpha", d.alpha);
    for &(n, v) in &d.points {
        doc.push(vec![n.into(), v.into()]);
    }
    doc.note("slope", d.slope);
    doc.note("intercept", d.intercept);
    doc.note("expected", d.expected);
    Ok(doc)
}

fn dispatch(cli: &Cli) -> Result<Doc> {
    let s = cli.seed;
    match &cli.command {
        Command::Potential { cmd: PotentialCmd::Sample(a) } => potential_sample(a, s),
        Command::Verify { cmd: VerifyCmd::Residual(a) } => verify_residual(a, s),
        Command::Norms { cmd: NormsCmd::Compute(a) } => norms_compute(a, s),
        Command::Bessel { cmd: BesselCmd::Eval(a) } => bessel_eval(a, s),
        Command::Bessel { cmd: BesselCmd::Certify(a) } => bessel_certify(a, s),
        Command::Kernel { cmd: KernelCmd::Qnorm(a) } => kernel_qnorm_cmd(a, s),
        Command::Kernel { cmd: KernelCmd::Supmu(a) } => kernel_supmu(a, s),
        Command::Kernel { cmd: KernelCmd::Regions(a) } => kernel_regions(a, s),
        Command::Kernel { cmd: KernelCmd::Doubleregions(a) } => kernel_doubleregions(a, s),
        Command::Bs { cmd: BsCmd::Matrix(a) } => bs_matrix_cmd(a, s),
        Command::Bs { cmd: BsCmd::Scan(a) } => bs_scan_cmd(a, s),
        Command::Keller { cmd: KellerCmd::Quotient(a) } => keller_cmd(a, s),
        Command::Decay { cmd: DecayCmd::Slope(a) } => decay_cmd(a, s),
    }
}

/// Exit status for a failed run: 2 for rejected input, 3 when the numerics
/// diverge or fail to converge, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::GridResolution(_) => 2,
        Error::Divergence { .. } | Error::NoConvergence { .. } | Error::Overflow(_) => 3,
        Error::Io(_) | Error::Json(_) => 1,
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its document to `--output` (or `stdout` for `-`). Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let result = dispatch(&cli).and_then(|doc| {
        for w in &doc.warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
        let text = doc.render(cli.format.unwrap_or(doc.default_format))?;
        if cli.output == "-" {
            stdout.write_all(text.as_bytes())?;
        } else {
            std::fs::write(&cli.output, text)?;
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
