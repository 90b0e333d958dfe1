use std::collections::BTreeMap;

use casimir_core::geometry::ShellConfiguration;
use casimir_core::heatkernel::{default_window, extract_coefficients, heat_trace_sample, minimal_usable_t, Window};
use casimir_core::hk_coeff::{box_heat_coefficients, CoefficientSet, CoefficientSource, FieldKind};
use casimir_core::numeric::{Estimate, ROOT_REL_TOL};
use casimir_core::shell::{self, CHat, ScalarShell, ShellLimit};
use casimir_core::special::gamma;
use casimir_core::spectrum::{spectrum_for, ModeList};
use casimir_core::thermo::{
    cutoff_energy, free_energy_report, high_t_check, high_t_expansion, AsymptoticTerm, Divergences, LOG_CONVENTION,
};
use casimir_core::verify;
use casimir_core::zeta::{spectral_zeta_continued, spectral_zeta_direct, zeta_zero_data, ZetaData};
use serde::Serialize;

use crate::config::{GeometryConfig, Resolved, RunConfig};
use crate::report::{num, Bounded, Header, Output, Table};
use crate::CliError;

/// Headline values checked against the configured tolerances.
pub type Headline = Vec<(String, Estimate)>;

pub struct Ctx<'a> {
    pub config: &'a RunConfig,
    pub resolved: Resolved,
    pub header: Header,
}

const TRACE_TOL: f64 = 1e-12;

impl Ctx<'_> {
    fn dim(&self) -> usize {
        self.resolved.geometry.dim()
    }

    fn t_max(&self) -> f64 {
        self.config.temperatures.iter().copied().fold(0.0, f64::max)
    }

    /// Largest length of the region, which sets the mode density.
    fn size(&self) -> f64 {
        match &self.config.geometry {
            GeometryConfig::Interval { length } => *length,
            GeometryConfig::Box { lengths } => lengths.iter().copied().fold(0.0, f64::max),
            GeometryConfig::Ball { radius, .. } => *radius,
            GeometryConfig::Generic { .. } => 1.0,
        }
    }

    /// Configured cut-off, or one giving about 10³–10⁴ modes and covering 60·T.
    fn omega_max(&self) -> f64 {
        self.config.omega_max.unwrap_or_else(|| {
            let k = match self.dim() {
                1 => 6000.0,
                2 => 300.0,
                3 => 60.0,
                _ => 30.0,
            };
            (k / self.size()).max(60.0 * self.t_max()).max(60.0)
        })
    }

    fn spectrum(&self) -> Result<ModeList, CliError> {
        let r = &self.resolved;
        Ok(spectrum_for(&r.geometry, r.field, r.bc, self.omega_max())?)
    }

    /// Closed forms where they exist, completed by a fit to the trace for
    /// shapes whose closed forms stop at c_2.
    fn coefficients(&self, m: &ModeList) -> Result<CoefficientSet, CliError> {
        let r = &self.resolved;
        let mut set = CoefficientSet::closed_form(&r.geometry, r.field, r.bc)?;
        if r.geometry.side_lengths().is_none() {
            let n_max = self.config.heat_kernel.n_max.unwrap_or(self.dim() + 4);
            let fit = extract_coefficients(m, n_max, self.window())?;
            set.fill_from(&fit.into_set(r.field, r.bc));
        }
        Ok(set)
    }

    fn window(&self) -> Window {
        Window { t_min: self.config.heat_kernel.t_min, t_max: self.config.heat_kernel.t_max, samples: None }
    }

    fn pipeline(&self) -> Result<(ModeList, ZetaData), CliError> {
        let m = self.spectrum()?;
        let c = self.coefficients(&m)?;
        let z = zeta_zero_data(&m, &c)?;
        Ok((m, z))
    }

    fn temperatures(&self) -> Vec<f64> {
        if self.config.temperatures.is_empty() {
            vec![0.0]
        } else {
            self.config.temperatures.clone()
        }
    }
}

fn omega_bound(m: &ModeList, omega: f64) -> f64 {
    // interval and box frequencies are closed forms; ball frequencies are scanned roots
    if m.source.starts_with("ball") || m.source.starts_with("annulus") {
        4.0 * ROOT_REL_TOL * omega
    } else {
        f64::EPSILON * omega
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ModeRow {
    omega: Bounded,
    multiplicity: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SpectrumBody<'a> {
    source: &'a str,
    dim: usize,
    omega_max: f64,
    mode_count: u64,
    tail: Option<casimir_core::spectrum::TailModel>,
    modes: Vec<ModeRow>,
}

pub fn spectrum(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let m = ctx.spectrum()?;
    let mut table = Table::new(&["omega", "omega_bound", "multiplicity"]);
    let modes: Vec<ModeRow> = m
        .modes
        .iter()
        .map(|md| {
            let b = omega_bound(&m, md.omega);
            table.push(vec![num(md.omega), num(b), md.multiplicity.to_string()]);
            ModeRow { omega: Bounded::new(md.omega, b), multiplicity: md.multiplicity }
        })
        .collect();
    let body = SpectrumBody {
        source: &m.source,
        dim: m.dim,
        omega_max: m.omega_max,
        mode_count: m.modes.iter().map(|x| x.multiplicity).sum(),
        tail: m.tail,
        modes,
    };
    Ok((Output::new(ctx.header.clone(), body, table), Vec::new()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CoefficientRow {
    n: usize,
    coefficient: Bounded,
    exact: Option<String>,
    source: String,
}

fn coefficient_rows(set: &CoefficientSet, exact: &BTreeMap<usize, String>) -> Vec<CoefficientRow> {
    set.values
        .iter()
        .map(|(&n, c)| {
            let (source, ex) = match &c.source {
                CoefficientSource::ClosedForm(s) => ("closed-form", Some(s.clone())),
                CoefficientSource::ThetaProduct => ("theta-product", exact.get(&n).cloned()),
                CoefficientSource::Extracted => ("extracted", None),
                CoefficientSource::Supplied => ("supplied", None),
            };
            CoefficientRow { n, coefficient: Bounded::new(c.value, c.uncertainty), exact: ex, source: source.into() }
        })
        .collect()
}

fn coefficient_table(rows: &[CoefficientRow]) -> Table {
    let mut t = Table::new(&["n", "value", "bound", "exact", "source"]);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            num(r.coefficient.value),
            num(r.coefficient.bound),
            r.exact.clone().unwrap_or_default(),
            r.source.clone(),
        ]);
    }
    t
}

/// Exact strings for the theta-product coefficients of boxes.
fn box_exact(r: &Resolved) -> Result<BTreeMap<usize, String>, CliError> {
    let Some(lengths) = r.geometry.side_lengths() else { return Ok(BTreeMap::new()) };
    let coeffs = match r.field {
        FieldKind::Scalar => box_heat_coefficients(&lengths, 0, r.bc)?,
        FieldKind::PForm(p) => box_heat_coefficients(&lengths, p, r.bc)?,
        FieldKind::Electromagnetic => {
            let one = box_heat_coefficients(&lengths, 1, r.bc)?;
            let zero = box_heat_coefficients(&lengths, 0, r.bc)?;
            one.iter().zip(&zero).map(|(a, b)| a - b).collect()
        }
    };
    let d = r.geometry.dim();
    Ok((0..=d + 3).map(|n| (n, coeffs.get(n).map_or_else(|| "0".to_string(), |c| c.to_string()))).collect())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CoefficientsBody {
    dim: usize,
    field: String,
    bc: String,
    coefficients: Vec<CoefficientRow>,
}

pub fn coefficients(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let r = &ctx.resolved;
    let set = CoefficientSet::closed_form(&r.geometry, r.field, r.bc)?;
    let rows = coefficient_rows(&set, &box_exact(r)?);
    let table = coefficient_table(&rows);
    let body = CoefficientsBody { dim: set.dim, field: r.field.to_string(), bc: r.bc.to_string(), coefficients: rows };
    Ok((Output::new(ctx.header.clone(), body, table), Vec::new()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TraceRow {
    t: f64,
    trace: Bounded,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExtractionBody {
    t_min: f64,
    t_max: f64,
    relative_residual: f64,
    condition: f64,
    coefficients: Vec<CoefficientRow>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HeatKernelBody {
    source: String,
    minimal_usable_t: f64,
    samples: Vec<TraceRow>,
    extraction: ExtractionBody,
    closed_form: Vec<CoefficientRow>,
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

pub fn heat_kernel(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let r = &ctx.resolved;
    let m = ctx.spectrum()?;
    let t_usable = minimal_usable_t(&m, TRACE_TOL)?;
    let n_max = ctx.config.heat_kernel.n_max.unwrap_or(ctx.dim() + 3);
    let times = if ctx.config.heat_kernel.times.is_empty() {
        let (_, t_hi) = default_window(&m, n_max)?;
        log_grid(t_usable, (4.0 * t_hi).max(2.0 * t_usable), 24)
    } else {
        ctx.config.heat_kernel.times.clone()
    };
    let mut table = Table::new(&["t", "trace", "trace_bound"]);
    let mut samples = Vec::new();
    for &t in &times {
        let s = heat_trace_sample(&m, t, TRACE_TOL)?;
        table.push(vec![num(t), num(s.k), num(s.bound)]);
        samples.push(TraceRow { t, trace: Bounded::new(s.k, s.bound) });
    }
    let fit = extract_coefficients(&m, n_max, ctx.window())?;
    let fitted_set = fit.into_set(r.field, r.bc);
    let closed = CoefficientSet::closed_form(&r.geometry, r.field, r.bc)?;
    let exact = box_exact(r)?;
    let body = HeatKernelBody {
        source: m.source.clone(),
        minimal_usable_t: t_usable,
        samples,
        extraction: ExtractionBody {
            t_min: fit.t_min,
            t_max: fit.t_max,
            relative_residual: fit.residual,
            condition: fit.condition,
            coefficients: coefficient_rows(&fitted_set, &BTreeMap::new()),
        },
        closed_form: coefficient_rows(&closed, &exact),
    };
    let headline = fitted_set.values.iter().map(|(n, c)| (format!("c_{n}"), Estimate { value: c.value, bound: c.uncertainty })).collect();
    Ok((Output::new(ctx.header.clone(), body, table), headline))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Meromorphic {
    s: f64,
    finite_part: Bounded,
    residue: Bounded,
}

impl From<&casimir_core::zeta::MeromorphicValue> for Meromorphic {
    fn from(v: &casimir_core::zeta::MeromorphicValue) -> Self {
        Self { s: v.s, finite_part: Bounded::new(v.fp, v.bound), residue: Bounded::new(v.res, v.res_bound) }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZetaPoint {
    continued: Meromorphic,
    /// the plain mode sum, where it converges
    direct: Option<Bounded>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZetaBody {
    zeta_zero: Bounded,
    zeta_prime_zero: Bounded,
    at_minus_half: Meromorphic,
    points: Vec<ZetaPoint>,
    coefficients: Vec<CoefficientRow>,
}

pub fn zeta(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let (m, z) = ctx.pipeline()?;
    let mut table = Table::new(&["quantity", "s", "value", "bound"]);
    table.push(vec!["zeta".into(), "0".into(), num(z.zeta_zero.value), num(z.zeta_zero.bound)]);
    table.push(vec!["zeta_prime".into(), "0".into(), num(z.zeta_prime_zero.value), num(z.zeta_prime_zero.bound)]);
    let h = &z.at_minus_half;
    table.push(vec!["finite_part".into(), num(h.s), num(h.fp), num(h.bound)]);
    table.push(vec!["residue".into(), num(h.s), num(h.res), num(h.res_bound)]);
    let mut points = Vec::new();
    for &s in &ctx.config.zeta.s_values {
        let k = spectral_zeta_continued(&m, &z.coefficients, s)?;
        table.push(vec!["finite_part".into(), num(s), num(k.fp), num(k.bound)]);
        table.push(vec!["residue".into(), num(s), num(k.res), num(k.res_bound)]);
        let direct = spectral_zeta_direct(&m, s).ok();
        if let Some(d) = direct {
            table.push(vec!["direct".into(), num(s), num(d.value), num(d.bound)]);
        }
        points.push(ZetaPoint { continued: (&k).into(), direct: direct.map(Bounded::from) });
    }
    let headline = vec![
        ("zeta(0)".into(), z.zeta_zero),
        ("zeta'(0)".into(), z.zeta_prime_zero),
        ("FP zeta(-1/2)".into(), Estimate { value: h.fp, bound: h.bound }),
    ];
    let body = ZetaBody {
        zeta_zero: z.zeta_zero.into(),
        zeta_prime_zero: z.zeta_prime_zero.into(),
        at_minus_half: h.into(),
        points,
        coefficients: coefficient_rows(&z.coefficients, &box_exact(&ctx.resolved)?),
    };
    Ok((Output::new(ctx.header.clone(), body, table), headline))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DivergentTerm {
    lambda_power: i32,
    log: bool,
    coefficient: Bounded,
}

/// The cut-off divergences with bounds from the coefficient uncertainties.
fn divergent_terms(set: &CoefficientSet) -> Option<Vec<DivergentTerm>> {
    let d = Divergences::from_coefficients(set).ok()?;
    let dim = set.dim;
    let mut out: Vec<DivergentTerm> = d
        .powers
        .iter()
        .map(|(&n, &a)| {
            let g = gamma((dim + 1 - n) as f64) / gamma(0.5 * (dim - n) as f64);
            let u = set.get(n).map_or(0.0, |c| c.uncertainty);
            DivergentTerm { lambda_power: n as i32 - dim as i32 - 1, log: false, coefficient: Bounded::new(a, g.abs() * u) }
        })
        .collect();
    let u = set.get(dim + 1).map_or(0.0, |c| c.uncertainty);
    let k = 2.0 * std::f64::consts::PI.sqrt();
    out.push(DivergentTerm { lambda_power: 0, log: true, coefficient: Bounded::new(d.log_lambda, u / k) });
    Some(out)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TermRow {
    term: String,
    power: i32,
    log: bool,
    coefficient: Bounded,
}

fn term_rows(terms: &[AsymptoticTerm]) -> Vec<TermRow> {
    terms
        .iter()
        .map(|t| TermRow { term: t.to_string(), power: t.power, log: t.log, coefficient: Bounded::new(t.coefficient, t.bound) })
        .collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FreeEnergyRow {
    temperature: f64,
    zero_t_regularized: Bounded,
    thermal_correction: Bounded,
    regularized_total: Bounded,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CutoffRow {
    lambda: f64,
    cutoff_energy: Bounded,
    expansion: Bounded,
    difference: Bounded,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FreeEnergyBody {
    mu: f64,
    log_convention: &'static str,
    reports: Vec<FreeEnergyRow>,
    divergent_terms: Option<Vec<DivergentTerm>>,
    asymptotic_terms: Vec<TermRow>,
    cutoff: Vec<CutoffRow>,
}

pub fn free_energy(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let (m, z) = ctx.pipeline()?;
    let mu = ctx.config.mu;
    let mut table = Table::new(&[
        "temperature",
        "e_reg",
        "e_reg_bound",
        "delta_t",
        "delta_t_bound",
        "e_zero_t",
        "e_zero_t_bound",
    ]);
    let mut reports = Vec::new();
    let mut headline = Vec::new();
    let mut terms = Vec::new();
    for t in ctx.temperatures() {
        let r = free_energy_report(&m, &z, t, mu)?;
        table.push(vec![
            num(t),
            num(r.regularized_total.value),
            num(r.regularized_total.bound),
            num(r.thermal_correction.value),
            num(r.thermal_correction.bound),
            num(r.zero_t_regularized.value),
            num(r.zero_t_regularized.bound),
        ]);
        headline.push((format!("E_reg(T={t})"), r.regularized_total));
        terms = r.asymptotic_terms;
        reports.push(FreeEnergyRow {
            temperature: t,
            zero_t_regularized: r.zero_t_regularized.into(),
            thermal_correction: r.thermal_correction.into(),
            regularized_total: r.regularized_total.into(),
        });
    }
    let mut cutoff = Vec::new();
    if !ctx.config.lambdas.is_empty() {
        let e0 = casimir_core::thermo::regularized_zero_t(&z, mu)?;
        let div = Divergences::from_coefficients(&z.coefficients)?;
        for &lambda in &ctx.config.lambdas {
            let c = cutoff_energy(&m, lambda)?;
            let e = Estimate { value: div.evaluate(lambda, mu) + e0.value, bound: e0.bound };
            cutoff.push(CutoffRow {
                lambda,
                cutoff_energy: c.into(),
                expansion: e.into(),
                difference: Bounded::new(c.value - e.value, c.bound + e.bound),
            });
        }
    }
    let body = FreeEnergyBody {
        mu,
        log_convention: LOG_CONVENTION,
        reports,
        divergent_terms: divergent_terms(&z.coefficients),
        asymptotic_terms: term_rows(&terms),
        cutoff,
    };
    Ok((Output::new(ctx.header.clone(), body, table), headline))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HighTRow {
    temperature: f64,
    exact: Bounded,
    expansion: Bounded,
    residual: Bounded,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AsymptoticsBody {
    mu: f64,
    terms: Vec<TermRow>,
    checks: Vec<HighTRow>,
}

pub fn asymptotics(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let (m, z) = ctx.pipeline()?;
    let mu = ctx.config.mu;
    let n_max = z.coefficients.contiguous_order().ok_or(casimir_core::Error::Coverage(0))?;
    let terms = high_t_expansion(&z.coefficients, &z, mu, n_max.max(ctx.dim() + 1))?;
    let mut table = Table::new(&["term", "power", "log", "coefficient", "bound"]);
    for t in &terms {
        table.push(vec![t.to_string(), t.power.to_string(), t.log.to_string(), num(t.coefficient), num(t.bound)]);
    }
    let mut checks = Vec::new();
    for t in ctx.temperatures().into_iter().filter(|t| *t > 0.0) {
        let c = high_t_check(&m, &z.coefficients, &z, t, mu)?;
        checks.push(HighTRow {
            temperature: t,
            exact: c.exact.into(),
            expansion: c.expansion.into(),
            residual: Bounded::new(c.residual, c.exact.bound + c.expansion.bound),
        });
    }
    let body = AsymptoticsBody { mu, terms: term_rows(&terms), checks };
    Ok((Output::new(ctx.header.clone(), body, table), Vec::new()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ShellSampleRow {
    r: f64,
    value: Bounded,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ShellTemperature {
    temperature: f64,
    samples: Vec<ShellSampleRow>,
    /// the shell report with its high-T terms moved to `high_t_terms`
    report: serde_json::Value,
    high_t_terms: Vec<TermRow>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ShellBody {
    numeric: Option<ScalarShell>,
    q_samples: Vec<ShellSampleRow>,
    results: Vec<ShellTemperature>,
}

fn sample_rows(l: &ShellLimit) -> Vec<ShellSampleRow> {
    l.samples.iter().map(|s| ShellSampleRow { r: s.r, value: s.value.into() }).collect()
}

pub fn shell(ctx: &Ctx) -> Result<(Output, Headline), CliError> {
    let r = &ctx.resolved;
    let cfg = ctx.config.shell.clone().unwrap_or_default();
    let numeric = match (&ctx.config.geometry, r.field) {
        (GeometryConfig::Interval { length }, FieldKind::Scalar | FieldKind::PForm(0)) => Some(ScalarShell::Piston { a: *length }),
        (GeometryConfig::Ball { dim: dim @ (2 | 3), radius }, FieldKind::Scalar | FieldKind::PForm(0)) => {
            Some(ScalarShell::ConcentricBalls { dim: *dim, radius: *radius })
        }
        _ => None,
    };
    let mut c_hat: BTreeMap<usize, CHat> = match numeric {
        Some(s) => s.c_hat(r.bc)?,
        None => shell::shell_c_hat_set(&ShellConfiguration::new(r.geometry.clone(), 2.0)?, r.field, r.bc)?,
    };
    for (k, &v) in &cfg.c_hat {
        let n: usize = k.parse().expect("validated");
        c_hat.insert(n, CHat { value: v, bound: 0.0, exact: None });
    }
    let r_list = if cfg.r_list.is_empty() {
        match numeric {
            Some(ScalarShell::Piston { .. }) => vec![10.0, 20.0, 40.0, 80.0, 160.0],
            _ => vec![2.0, 3.0, 4.0],
        }
    } else {
        cfg.r_list.clone()
    };
    let mu = ctx.config.mu;
    let dim = ctx.dim();
    let mut q_samples = Vec::new();
    let q = match (cfg.q, numeric) {
        (Some(q), _) => Some(Estimate { value: q, bound: cfg.q_bound }),
        (None, Some(s)) => {
            let l = shell::shell_q(&s, r.bc, &r_list)?;
            q_samples = sample_rows(&l);
            Some(l.limit)
        }
        (None, None) => None,
    };
    let mut table = Table::new(&["quantity", "temperature", "r", "value", "bound"]);
    for (n, c) in &c_hat {
        table.push(vec![format!("c_hat_{n}"), String::new(), String::new(), num(c.value), num(c.bound)]);
    }
    for x in &q_samples {
        table.push(vec!["q".into(), String::new(), num(x.r), num(x.value.value), num(x.value.bound)]);
    }
    let mut results = Vec::new();
    let mut headline = Vec::new();
    if let Some(q) = q {
        table.push(vec!["q".into(), String::new(), "inf".into(), num(q.value), num(q.bound)]);
        headline.push(("Q".to_string(), q));
    }
    for t in ctx.temperatures() {
        let (samples, e_reg) = match numeric {
            Some(s) => {
                let l = shell::shell_free_energy_numeric(&s, r.bc, t, &r_list, mu)?;
                for x in &l.samples {
                    table.push(vec!["energy".into(), num(t), num(x.r), num(x.value.value), num(x.value.bound)]);
                }
                table.push(vec!["energy".into(), num(t), "inf".into(), num(l.limit.value), num(l.limit.bound)]);
                headline.push((format!("E_shell(T={t})"), l.limit));
                (sample_rows(&l), Some(l.limit))
            }
            None => (Vec::new(), None),
        };
        let report = shell::shell_report(dim, c_hat.clone(), q, e_reg, t, mu)?;
        let high_t_terms = term_rows(&report.high_t_terms);
        let mut report = serde_json::to_value(&report).expect("report serializes");
        if let Some(m) = report.as_object_mut() {
            m.remove("highTTerms");
        }
        results.push(ShellTemperature { temperature: t, samples, report, high_t_terms });
    }
    let body = ShellBody { numeric, q_samples, results };
    Ok((Output::new(ctx.header.clone(), body, table), headline))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyBody {
    passed: bool,
    checks: Vec<verify::Check>,
}

/// The built-in suite; `passed` is false if any check failed.
pub fn verify(header: Header) -> (Output, bool) {
    let checks = verify::run_all();
    let passed = checks.iter().all(|c| c.passed);
    let mut table = Table::new(&["check", "passed", "deviation", "tolerance", "detail"]);
    for c in &checks {
        table.push(vec![c.name.clone(), c.passed.to_string(), num(c.deviation), num(c.tolerance), c.detail.clone()]);
    }
    (Output::new(header, VerifyBody { passed, checks }, table), passed)
}

