//! The named experiments. Each runner is a pure function of [`Params`] that
//! produces an [`ExperimentReport`] with pass/fail clauses; curves are
//! written next to `summary.json` when an output directory is given.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use czlab_core::dyadic::sparse_avg_operator;
use czlab_core::maximal::{
    hl_maximal, iterated_maximal, sharp_maximal, vv_maximal, OrliczGauge,
};
use czlab_core::singular::{
    commutator_direct, conjugation_commutator, hilbert_transform, Symbol,
};
use czlab_core::weights::{
    a1_constant, ap_constant, dyadic_schedule, conjugated_maximal, llogl_failure_ratio,
    llogl_failure_ratio_grid, weak11_estimator, PowerWeight,
};
use czlab_core::{
    Grid64, Interval64, LevelSetCurve64, SampledFunction64, SparseFamily64,
};

use crate::fit::{fit_decay, DecayFit, DecayModel};
use crate::profile::ProfileTable;
use crate::report::{CurveData, ExperimentReport, FitSummary, Summary};
use crate::{ExperimentError, Result};

pub const EXPERIMENT_NAMES: [&str; 7] = [
    "decay-sharpness",
    "sparse-vs-commutator",
    "lp-growth",
    "weak-type-failure",
    "llogl-failure",
    "conjugation-check",
    "pointwise-sharp",
];

/// Empirical ratio envelopes for the pointwise sharp-maximal checks. These
/// are recorded constants for the shipped fixtures, not asserted estimates:
/// the measured maxima sit well inside them (see the experiment scalars).
const JFA_RATIO_ENVELOPE: f64 = 8.0;
const ST_RATIO_ENVELOPE: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub cells: usize,
    pub delta: f64,
    pub p: f64,
    pub alphas: Vec<f64>,
    pub radii: Vec<f64>,
    pub eps: f64,
    pub contour_points: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            cells: 1 << 20,
            delta: 0.5,
            p: 2.0,
            alphas: vec![0.5, 1.0, 2.0],
            radii: vec![1e2, 1e3, 1e4],
            eps: 0.1,
            contour_points: 32,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl Params {
    fn base_params(&self, rep: &mut ExperimentReport) {
        rep.param("cells", self.cells);
        rep.param("seed", self.seed);
    }
}

struct Emitter<'a> {
    out: Option<&'a Path>,
    format: OutputFormat,
}

impl<'a> Emitter<'a> {
    fn new(params: &'a Params) -> Self {
        Self { out: params.out.as_deref(), format: params.format }
    }

    fn write(&self, rep: &mut ExperimentReport, stem: &str, csv: String, json: String) -> Result<()> {
        let Some(dir) = self.out else { return Ok(()) };
        std::fs::create_dir_all(dir)?;
        let (ext, body) = match self.format {
            OutputFormat::Csv => ("csv", csv),
            OutputFormat::Json => ("json", json),
        };
        let file = format!("{}_{stem}.{ext}", rep.name);
        std::fs::write(dir.join(&file), body)?;
        rep.curve_files.push(file);
        Ok(())
    }

    fn level_curve(
        &self,
        rep: &mut ExperimentReport,
        stem: &str,
        curve: &LevelSetCurve64,
    ) -> Result<()> {
        #[derive(Serialize)]
        struct CurveJson<'b> {
            floor: f64,
            points: &'b [(f64, f64)],
        }
        let json = serde_json::to_string_pretty(&CurveJson {
            floor: curve.floor(),
            points: curve.points(),
        })?;
        self.write(rep, stem, curve.to_csv(), json)
    }

    fn table(&self, rep: &mut ExperimentReport, data: &CurveData) -> Result<()> {
        let stem = data.name.clone();
        let json = serde_json::to_string_pretty(data)?;
        self.write(rep, &stem, data.to_csv(), json)
    }

    fn json_report(&self, rep: &mut ExperimentReport, stem: &str, value: &impl Serialize) -> Result<()> {
        let Some(dir) = self.out else { return Ok(()) };
        std::fs::create_dir_all(dir)?;
        let file = format!("{}_{stem}.json", rep.name);
        std::fs::write(dir.join(&file), serde_json::to_string_pretty(value)?)?;
        rep.curve_files.push(file);
        Ok(())
    }
}

fn push_fit(rep: &mut ExperimentReport, curve: &str, model: &str, fit: &DecayFit) {
    rep.fits.push(FitSummary {
        curve: curve.into(),
        model: model.into(),
        amplitude: fit.amplitude,
        rate: fit.rate,
        exponent: fit.exponent,
        residual: fit.residual,
    });
}

fn unit() -> Interval64 {
    Interval64::new(0.0, 1.0).expect("unit interval")
}

/// Commutator level-set decay on a log-uniform grid: stretched-exponential
/// fit of `|{ |[b,H]χ| > t }|` over `t ∈ [10, 200]` plus the pointwise
/// sub-gaussian lower bound.
pub fn decay_sharpness(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("decay-sharpness");
    params.base_params(&mut rep);
    let emit = Emitter::new(params);

    let table = ProfileTable::build(2048)?;
    let grid = Grid64::log_uniform(unit(), params.cells)?;
    let f = SampledFunction64::sample(grid, |x| table.eval(1.0 / x))?;
    let thresholds: Vec<f64> = (0..64).map(|k| 10.0 + 190.0 * k as f64 / 63.0).collect();
    let curve = f.level_set_curve(&thresholds)?;
    let fit = fit_decay(&curve, DecayModel::Stretched)?;

    rep.clause(
        "stretched-exponent",
        (0.45..=0.55).contains(&fit.exponent),
        fit.exponent,
        "in [0.45, 0.55]",
    );
    rep.clause("fit-residual", fit.residual < 0.1, fit.residual, "< 0.1 in log-measure");
    let mut min_margin = f64::INFINITY;
    let mut bounded = true;
    for (t, mu) in curve.resolved() {
        let lb = (-(2.2 * t).sqrt()).exp();
        if mu < lb {
            bounded = false;
        }
        min_margin = min_margin.min(mu / lb);
    }
    rep.clause(
        "subgaussian-lower-bound",
        bounded,
        min_margin,
        "mu(t) >= exp(-sqrt(2.2 t)) at every resolved t (min ratio)",
    );
    rep.scalar("resolution_floor", curve.floor());
    rep.scalar("fitted_rate", fit.rate);
    push_fit(&mut rep, "levelsets", "stretched", &fit);
    emit.level_curve(&mut rep, "levelsets", &curve)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

/// Chain sparse family: exact exponential counting-function decay and the
/// exponential (not sub-gaussian) fit of `A_S f` relative to `M f`.
pub fn sparse_vs_commutator(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("sparse-vs-commutator");
    params.base_params(&mut rep);
    rep.param("chain_depth", 20);
    let emit = Emitter::new(params);

    let chain = SparseFamily64::chain(unit(), 20);
    let counting = chain.counting_function()?;
    let mut max_err: f64 = 0.0;
    for t in 1..=19 {
        let got = counting.level_set_measure(t as f64);
        let want = 2f64.powi(-t);
        max_err = max_err.max((got - want).abs());
    }
    rep.clause(
        "counting-curve-exact",
        max_err == 0.0,
        max_err,
        "|{N > t}| == 2^-t exactly at integer t in [1, 19]",
    );

    // A_S f relative to M f on the indicator of the root
    let f = SampledFunction64::sample(counting.grid().clone(), |_| 1.0)?;
    let mf = hl_maximal(&f, 1.0)?;
    let a = sparse_avg_operator(&chain, &f, &OrliczGauge::plain())?;
    if !a.same_grid(&mf) {
        return Err(ExperimentError::Fit("sparse output grid drifted off the leaf grid".into()));
    }
    let ratio = SampledFunction64::new(
        a.grid().clone(),
        a.values().iter().zip(mf.values()).map(|(x, m)| x / m).collect(),
    )?;
    let thresholds: Vec<f64> = (1..=19).map(|k| k as f64).collect();
    let curve = ratio.level_set_curve(&thresholds)?;
    let fit = fit_decay(&curve, DecayModel::Stretched)?;
    rep.clause(
        "ratio-fit-exponent",
        (0.9..=1.1).contains(&fit.exponent),
        fit.exponent,
        "in [0.9, 1.1] (exponential, not sub-gaussian)",
    );
    rep.scalar("ratio_fit_rate", fit.rate);
    push_fit(&mut rep, "sparse_over_maximal", "stretched", &fit);
    emit.level_curve(&mut rep, "levelsets", &curve)?;

    // counting function dominated by the vector-valued maximal of the
    // disjoint witness indicators: N <= 2^q (M̄_q {χ_E(P)})^q with q = 2
    let depth12 = SparseFamily64::chain(unit(), 12).greedy_witnesses()?;
    let leaf = Grid64::uniform(unit(), 1 << 12)?;
    let indicators: Vec<SampledFunction64> = depth12
        .witnesses()
        .expect("witnessed")
        .values()
        .map(|parts| {
            let parts = parts.clone();
            SampledFunction64::sample(leaf.clone(), move |x| {
                if parts.iter().any(|iv| iv.contains(x)) { 1.0 } else { 0.0 }
            })
        })
        .collect::<czlab_core::Result<_>>()?;
    let vv = vv_maximal(&indicators, 2.0)?;
    let n12 = SparseFamily64::chain(unit(), 12).counting_function()?;
    let mut worst = 0.0f64;
    for i in 0..n12.n_cells() {
        let dom = 4.0 * vv.values()[i].powi(2);
        worst = worst.max(n12.values()[i] / dom);
    }
    rep.clause(
        "vv-witness-domination",
        worst <= 1.0 + 1e-9,
        worst,
        "N <= 4 (vv-maximal of witness indicators)^2 pointwise",
    );
    rep.wall = start.elapsed();
    Ok(rep)
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `L^p` norms of the commutator against the Γ-identity profile
/// `(1/2) Γ(2p+1)^{1/p}`, and the large-`p` log-log slope.
pub fn lp_growth(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("lp-growth");
    params.base_params(&mut rep);
    let emit = Emitter::new(params);

    let table = ProfileTable::build(2048)?;
    // The p = 64 norm draws its mass from log(1/x) ~ 2p: the grid floor must
    // reach far deeper than the default 1/n^2 (which resolves only
    // log(1/x) <= 2 log n). A floor of e^{-220} covers every p here with
    // ~4700 cells per log-unit at the default cell count.
    let grid = Grid64::log_uniform_with_floor(unit(), params.cells, (-220.0f64).exp())?;
    let f = SampledFunction64::sample(grid, |x| table.eval(1.0 / x))?;

    let ps = [4u32, 8, 16, 32, 64];
    let mut data = CurveData::new("norms", &["p", "norm", "gamma_profile", "ratio"]);
    let mut norms = Vec::new();
    for &p in &ps {
        let norm = f.lp_norm(p as f64)?;
        // ∫_0^1 (log 1/x)^{2p} dx = Γ(2p+1): profile (1/2) Γ(2p+1)^{1/p}
        let profile = 0.5 * (ln_factorial(2 * p) / p as f64).exp();
        let ratio = norm / profile;
        rep.clause(
            &format!("gamma-profile-p{p}"),
            (ratio - 1.0).abs() <= 0.15,
            ratio,
            "norm within 15% of (1/2) Gamma(2p+1)^{1/p}",
        );
        data.push(vec![p as f64, norm, profile, ratio]);
        norms.push(norm);
    }
    let slope = (norms[4] / norms[3]).ln() / 2f64.ln();
    rep.clause("large-p-slope", (1.85..=2.05).contains(&slope), slope, "log2(N_64/N_32) in [1.85, 2.05]");
    // ceiling implied by an L log L sparse bound: p (p')^2 grows with
    // log-log slope -> 1, strictly below the measured slope
    let ceiling = |p: f64| p * (p / (p - 1.0)).powi(2);
    let ceiling_slope = (ceiling(64.0) / ceiling(32.0)).ln() / 2f64.ln();
    rep.scalar("ceiling_slope", ceiling_slope);
    rep.clause(
        "exceeds-llogl-ceiling",
        slope > ceiling_slope,
        slope - ceiling_slope,
        "measured slope exceeds the p (p')^2 ceiling slope",
    );
    emit.table(&mut rep, &data)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

#[derive(Serialize)]
struct WeakTypeCertificate {
    delta: f64,
    p: f64,
    exponent: f64,
    beta: f64,
    schedule_levels: usize,
    ap_cumulative: Vec<f64>,
    a1_per_level: Vec<f64>,
    a1_divergent: bool,
    a1_growth: Option<f64>,
    radii: Vec<f64>,
    estimates: Vec<(f64, f64)>,
    doubling_ratios: Vec<(f64, f64)>,
    growth_exponent: f64,
}

/// Weak-(1,1) failure of `w M(f/w)` for the power-weight fixture: doubling
/// ratios of the weak-type estimator on growing truncations, plus the
/// A_p / not-A_1 certification.
pub fn weak_type_failure(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("weak-type-failure");
    params.base_params(&mut rep);
    rep.param("delta", params.delta);
    rep.param("p", params.p);
    rep.param("radii", params.radii.clone());
    let emit = Emitter::new(params);

    let w = PowerWeight::from_delta_p(params.delta, params.p)?;
    let beta = w.beta();
    rep.scalar("beta", beta);
    let cells = (params.cells / 16).clamp(1 << 12, 1 << 17);

    let estimate = |radius: f64| -> Result<f64> {
        let grid = Grid64::log_uniform(Interval64::new(0.0, radius)?, cells)?;
        let f = SampledFunction64::sample(grid, |x| if x < 1.0 { 1.0 } else { 0.0 })?;
        let g = conjugated_maximal(&w, &f)?;
        let tail = g.restrict(&Interval64::new(1.0, radius)?)?;
        let t_lo = 0.2 * radius.powf(-beta);
        let step = (1.0f64 / t_lo).powf(1.0 / 399.0);
        let t_grid: Vec<f64> = (0..400).map(|k| t_lo * step.powi(k)).collect();
        Ok(weak11_estimator(&tail, &t_grid)?)
    };

    let target = 2f64.powf(1.0 - beta);
    let mut estimates = Vec::new();
    let mut ratios = Vec::new();
    for &r in &params.radii {
        let e1 = estimate(r)?;
        let e2 = estimate(2.0 * r)?;
        estimates.push((r, e1));
        estimates.push((2.0 * r, e2));
        let ratio = e2 / e1;
        ratios.push((r, ratio));
        rep.clause(
            &format!("doubling-ratio-r{r:.0}"),
            (ratio / target - 1.0).abs() <= 0.1,
            ratio,
            &format!("est(2R)/est(R) within 10% of 2^(1-beta) = {target:.4}"),
        );
    }
    // growth exponent across all truncations
    let xs: Vec<f64> = estimates.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = estimates.iter().map(|(_, e)| e.ln()).collect();
    let n = xs.len() as f64;
    let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let growth = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.clause(
        "growth-exponent",
        (growth - (1.0 - beta)).abs() <= 0.05,
        growth,
        &format!("within 0.05 of 1 - beta = {:.4}", 1.0 - beta),
    );

    // certification: A_p constant stable under refinement, A_1 divergent
    let schedule = dyadic_schedule::<f64>(30);
    let mut ap_cumulative = Vec::with_capacity(30);
    let mut running: f64 = 0.0;
    for level in &schedule {
        running = running.max(ap_constant(&w, params.p, level)?);
        ap_cumulative.push(running);
    }
    let stability = ap_cumulative[29] / ap_cumulative[25];
    rep.clause("ap-stable", stability < 1.05, stability, "cumulative max over final 5 levels grows < 5%");
    let a1 = a1_constant(&w, &schedule);
    rep.clause(
        "a1-divergent",
        a1.divergent,
        if a1.divergent { 1.0 } else { 0.0 },
        "A_1 ratio flagged divergent on the schedule",
    );
    rep.scalar("ap_constant", ap_cumulative[29]);
    rep.scalar("a1_max_finite", a1.max_finite);

    let mut data = CurveData::new("estimates", &["radius", "estimate"]);
    for (r, e) in &estimates {
        data.push(vec![*r, *e]);
    }
    emit.table(&mut rep, &data)?;
    let cert = WeakTypeCertificate {
        delta: params.delta,
        p: params.p,
        exponent: w.exponent(),
        beta,
        schedule_levels: schedule.len(),
        ap_cumulative,
        a1_per_level: a1.per_level.clone(),
        a1_divergent: a1.divergent,
        a1_growth: a1.growth,
        radii: params.radii.clone(),
        estimates,
        doubling_ratios: ratios,
        growth_exponent: growth,
    };
    emit.json_report(&mut rep, "certificate", &cert)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

/// Closed-form `L log L` failure ratios over `t = 10^-1 .. 10^-6` for each
/// requested `α`, with a grid-based cross-check on a truncation.
pub fn llogl_failure(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("llogl-failure");
    params.base_params(&mut rep);
    rep.param("delta", params.delta);
    rep.param("p", params.p);
    rep.param("alphas", params.alphas.clone());
    let emit = Emitter::new(params);

    let mut data = CurveData::new("ratios", &["alpha", "t", "ratio"]);
    for &alpha in &params.alphas {
        let mut vals = Vec::new();
        for k in 1..=6 {
            let t = 10f64.powi(-k);
            let r = llogl_failure_ratio(params.delta, params.p, alpha, t)?;
            data.push(vec![alpha, t, r]);
            vals.push(r);
        }
        let min_step = vals
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(f64::INFINITY, f64::min);
        rep.clause(
            &format!("increasing-alpha{alpha}"),
            min_step > 1.0,
            min_step,
            "ratio strictly increasing as t decreases through 10^-1..10^-6",
        );
        if alpha == 1.0 {
            let factor = vals[5] / vals[0];
            rep.clause(
                "factor-1e3",
                factor >= 1e3,
                factor,
                "ratio at t = 10^-6 exceeds ratio at t = 10^-1 by >= 10^3",
            );
        }
    }
    // grid-based variant on a truncation, recorded for cross-checking
    let cells = (params.cells / 64).clamp(1 << 12, 1 << 15);
    for (key, t) in [("grid_ratio_t1e-1", 0.1), ("grid_ratio_t2e-2", 0.02)] {
        rep.scalar(
            key,
            llogl_failure_ratio_grid(params.delta, params.p, 1.0, t, 1e5, cells)?,
        );
    }
    emit.table(&mut rep, &data)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

fn bump(x: f64) -> f64 {
    let s = (x - 0.5) / 0.3;
    if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 }
}

fn rel_l2_distance(a: &SampledFunction64, b: &SampledFunction64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..a.n_cells() {
        let w = a.width(i);
        num += w * (a.values()[i] - b.values()[i]).powi(2);
        den += w * b.values()[i].powi(2);
    }
    (num / den).sqrt()
}

/// Contour-integral representation of the commutator against direct
/// quadrature on a bounded smooth fixture.
pub fn conjugation_check(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("conjugation-check");
    params.base_params(&mut rep);
    rep.param("eps", params.eps);
    rep.param("contour_points", params.contour_points);
    let emit = Emitter::new(params);

    let cells = (params.cells / 512).clamp(512, 4096);
    let ambient = Interval64::new(0.1, 1.0)?;
    let grid = Grid64::uniform(ambient, cells)?;
    let f = SampledFunction64::sample(grid, bump)?;
    let b = Symbol::mollified_log(0.05);
    let out = Grid64::uniform(Interval64::new(0.15, 0.95)?, 256)?;

    let direct = commutator_direct(&f, &b, &out, 1e-7)?;
    let m = params.contour_points;
    let conj_m = conjugation_commutator(&f, &b, params.eps, m, &out)?;
    let conj_2m = conjugation_commutator(&f, &b, params.eps, 2 * m, &out)?;
    let dist_m = rel_l2_distance(&conj_m.output, &direct);
    let dist_2m = rel_l2_distance(&conj_2m.output, &direct);
    rep.clause(
        "identity-5pct",
        dist_m < 0.05,
        dist_m,
        "relative L2 distance to direct quadrature < 5%",
    );
    rep.clause(
        "m-refinement",
        dist_2m < dist_m,
        dist_2m - dist_m,
        "distance at 2m contour points below distance at m",
    );
    rep.scalar("dist_m", dist_m);
    rep.scalar("dist_2m", dist_2m);
    rep.scalar("imag_diag_m", conj_m.max_imag);
    rep.scalar("imag_diag_2m", conj_2m.max_imag);

    let mut data = CurveData::new("outputs", &["x", "direct", "contour"]);
    for i in 0..out.n_cells() {
        data.push(vec![out.rep(i), direct.values()[i], conj_m.output.values()[i]]);
    }
    emit.table(&mut rep, &data)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

/// Pointwise sharp-maximal controls of the commutator: the small-exponent
/// variant against `M_ε(Hf) + M²f` and the plain variant against
/// `M_2(Hf) + M_2 f`, as bounded-ratio checks with recorded envelopes.
pub fn pointwise_sharp(params: &Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("pointwise-sharp");
    params.base_params(&mut rep);
    let emit = Emitter::new(params);

    let per_unit = (params.cells / 8192).clamp(64, 256);
    let ambient = Interval64::new(-1.0, 2.0)?;
    let grid = Grid64::uniform(ambient, 3 * per_unit)?;
    let f = SampledFunction64::sample(grid.clone(), |x| {
        if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 }
    })?;
    let out = grid.clone();

    let comm = commutator_direct(&f, &Symbol::LogAbs, &out, 1e-7)?;
    let hf = hilbert_transform(&f, &out).output;
    let m2f = iterated_maximal(&f, 2)?;

    // M_eps with eps = 0.7 < 1, composed from the r = 1 operator
    let eps = 0.7;
    let m_eps_hf = hl_maximal(&hf.map(|v| v.abs().powf(eps))?, 1.0)?
        .map(|v| v.powf(1.0 / eps))?;
    let sharp_small = sharp_maximal(&comm, 0.3)?;
    let mut jfa_max = 0.0f64;
    for i in 0..grid.n_cells() {
        jfa_max = jfa_max.max(sharp_small.values()[i] / (m_eps_hf.values()[i] + m2f.values()[i]));
    }
    rep.clause(
        "jfa-ratio-bounded",
        jfa_max <= JFA_RATIO_ENVELOPE,
        jfa_max,
        "M_0.3^#([b,H]f) / (M_0.7(Hf) + M^2 f) within the recorded envelope 8",
    );

    let sharp_plain = sharp_maximal(&comm, 1.0)?;
    let m2_hf = hl_maximal(&hf, 2.0)?;
    let m2_f = hl_maximal(&f, 2.0)?;
    let mut st_max = 0.0f64;
    for i in 0..grid.n_cells() {
        st_max = st_max.max(sharp_plain.values()[i] / (m2_hf.values()[i] + m2_f.values()[i]));
    }
    rep.clause(
        "st-ratio-bounded",
        st_max <= ST_RATIO_ENVELOPE,
        st_max,
        "M^#([b,H]f) / (M_2(Hf) + M_2 f) within the recorded envelope 8",
    );
    rep.scalar("jfa_ratio_max", jfa_max);
    rep.scalar("st_ratio_max", st_max);

    let mut data = CurveData::new("fields", &["x", "commutator", "hilbert", "m2f"]);
    for i in 0..grid.n_cells() {
        data.push(vec![grid.rep(i), comm.values()[i], hf.values()[i], m2f.values()[i]]);
    }
    emit.table(&mut rep, &data)?;
    rep.wall = start.elapsed();
    Ok(rep)
}

pub fn run(name: &str, params: &Params) -> Result<ExperimentReport> {
    match name {
        "decay-sharpness" => decay_sharpness(params),
        "sparse-vs-commutator" => sparse_vs_commutator(params),
        "lp-growth" => lp_growth(params),
        "weak-type-failure" => weak_type_failure(params),
        "llogl-failure" => llogl_failure(params),
        "conjugation-check" => conjugation_check(params),
        "pointwise-sharp" => pointwise_sharp(params),
        other => Err(ExperimentError::UnknownExperiment {
            name: other.into(),
            valid: EXPERIMENT_NAMES.join(", "),
        }),
    }
}

/// Runs every experiment and writes `summary.json` when an output directory
/// is configured.
pub fn run_all(params: &Params) -> Result<Summary> {
    let mut reports = Vec::with_capacity(EXPERIMENT_NAMES.len());
    for name in EXPERIMENT_NAMES {
        reports.push(run(name, params)?);
    }
    let summary = Summary::new(reports);
    if let Some(dir) = &params.out {
        summary.write(dir)?;
    }
    Ok(summary)
}
