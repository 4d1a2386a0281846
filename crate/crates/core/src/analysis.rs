//! Search-dynamics experiments: success-probability curves, peak and period
//! detection, steps-to-peak scaling scans, and gate-count scaling tables.

use serde::Serialize;

use crate::compiler::{build_step_circuit, lower};
use crate::error::{Error, Result};
use crate::graphs::{FamilySpec, NodeId};
use crate::walk::{evolve_with_cap, SearchConfig, DEFAULT_AMP_CAP};

/// Window factor of the default scan rule, tMax = ceil(6·√N).
pub const DEFAULT_WINDOW_FACTOR: f64 = 6.0;

/// Window factor that isolates the first success peak across the three
/// families (the step count at which a search would actually measure),
/// keeping later quasi-periodic recurrences out of the argmax.
pub const FIRST_PEAK_WINDOW_FACTOR: f64 = 2.0;

/// Success probability per step for one spec and marked node.
#[derive(Debug, Clone)]
pub struct Curve {
    pub spec: FamilySpec,
    pub marked: NodeId,
    /// (step, probability), steps strictly increasing from 0.
    pub points: Vec<(usize, f64)>,
}

impl Curve {
    pub fn baseline(&self) -> f64 {
        1.0 / self.spec.node_count() as f64
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, p)| p)
    }
}

/// Windowed peak data for one curve.
#[derive(Debug, Clone, Serialize)]
pub struct PeakReport {
    /// First step attaining the global maximum over the scanned window.
    pub t_star: usize,
    pub p_star: f64,
    /// Mean spacing of qualifying local maxima, when at least two exist.
    pub period: Option<f64>,
    /// Uniform-state success probability, 1/nodeCount.
    pub baseline: f64,
}

/// Least-squares power law value = c·N^α on log-log points.
#[derive(Debug, Clone, Serialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub alpha: f64,
    pub r2: f64,
}

/// Least-squares polylog fit count = a·(log₂N)^k.
#[derive(Debug, Clone, Serialize)]
pub struct PolylogFit {
    pub a: f64,
    pub k: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub n_nodes: usize,
    pub t_star: usize,
    pub p_star: f64,
    pub period: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingScan {
    pub rows: Vec<ScanRow>,
    pub fit: PowerLawFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateCountRow {
    pub n_nodes: usize,
    pub two_qubit_gates: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateCountScan {
    pub rows: Vec<GateCountRow>,
    pub fit: PolylogFit,
}

/// Deterministic marked node for scans: index ⌊N/3⌋.
pub fn default_marked(spec: &FamilySpec) -> NodeId {
    NodeId(spec.node_count() / 3)
}

/// Scan window for a given size: ceil(factor·√N) steps.
pub fn window_steps(n_nodes: usize, factor: f64) -> usize {
    (factor * (n_nodes as f64).sqrt()).ceil() as usize
}

/// Evolves the walk and records the marked-node probability per step.
pub fn success_curve(spec: FamilySpec, marked: NodeId, t_max: usize) -> Result<Curve> {
    success_curve_with_cap(spec, marked, t_max, DEFAULT_AMP_CAP)
}

pub fn success_curve_with_cap(
    spec: FamilySpec,
    marked: NodeId,
    t_max: usize,
    cap: usize,
) -> Result<Curve> {
    if t_max < 1 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let probs = evolve_with_cap(spec, &SearchConfig::marked(marked), t_max, cap)?;
    Ok(Curve {
        spec,
        marked,
        points: probs.into_iter().enumerate().collect(),
    })
}

/// First step attaining the global maximum (ties break toward smaller t).
pub fn find_peak(curve: &Curve) -> PeakReport {
    assert!(!curve.points.is_empty(), "peak of an empty curve");
    let (mut t_star, mut p_star) = curve.points[0];
    for &(t, p) in &curve.points[1..] {
        if p > p_star {
            t_star = t;
            p_star = p;
        }
    }
    PeakReport {
        t_star,
        p_star,
        period: None,
        baseline: curve.baseline(),
    }
}

/// Mean spacing between successive local maxima whose height reaches
/// halfway from baseline to the peak; `None` when fewer than two qualify.
///
/// Runs of equal values (relative tolerance 1e-9) count as a single sample
/// before maxima are taken: bipartite families hold their probability for
/// two consecutive steps, and fp noise inside such plateaus would otherwise
/// fabricate maxima.
pub fn estimate_period(curve: &Curve) -> Option<f64> {
    let peak = find_peak(curve);
    let threshold = peak.baseline + 0.5 * (peak.p_star - peak.baseline);

    let mut runs: Vec<(usize, f64)> = Vec::new();
    for (t, p) in curve.points.iter().map(|&(t, p)| (t, p)) {
        match runs.last() {
            Some(&(_, lp)) if (p - lp).abs() <= 1e-9 * lp.abs().max(1.0) => {}
            _ => runs.push((t, p)),
        }
    }
    let mut maxima = Vec::new();
    for i in 1..runs.len().saturating_sub(1) {
        if runs[i].1 > runs[i - 1].1 && runs[i].1 > runs[i + 1].1 && runs[i].1 >= threshold {
            maxima.push(runs[i].0);
        }
    }
    if maxima.len() < 2 {
        return None;
    }
    let total: usize = maxima.last().unwrap() - maxima.first().unwrap();
    Some(total as f64 / (maxima.len() - 1) as f64)
}

/// Peak and period of one curve in a single report.
pub fn peak_report(curve: &Curve) -> PeakReport {
    let mut report = find_peak(curve);
    report.period = estimate_period(curve);
    report
}

/// Least squares on (ln x, ln y); r² clamped to [0, 1].
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least two points".into(),
        ));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::InvalidArgument(
            "power-law fit needs positive coordinates".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least two distinct sizes".into(),
        ));
    }
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - (alpha * p.0 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(PowerLawFit {
        c: intercept.exp(),
        alpha,
        r2,
    })
}

/// Steps-to-peak scan: per spec, evolve with the deterministic marked node
/// over a ceil(factor·√N) window, record the peak and period, and fit
/// t* = c·N^α on log-log points.
pub fn scaling_scan(
    specs: &[FamilySpec],
    window_factor: f64,
    cap: usize,
) -> Result<ScalingScan> {
    if specs.len() < 3 {
        return Err(Error::InvalidArgument(
            "scaling scan needs at least 3 sizes".into(),
        ));
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let n_nodes = spec.node_count();
        let t_max = window_steps(n_nodes, window_factor);
        let curve = success_curve_with_cap(*spec, default_marked(spec), t_max, cap)?;
        let report = peak_report(&curve);
        rows.push(ScanRow {
            n_nodes,
            t_star: report.t_star,
            p_star: report.p_star,
            period: report.period,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n_nodes as f64, r.t_star as f64))
        .collect();
    let fit = fit_power_law(&points)?;
    Ok(ScalingScan { rows, fit })
}

/// Lowered 2-qubit gate counts per size, with a polylog fit a·(log₂N)^k.
pub fn gate_count_scan(specs: &[FamilySpec]) -> Result<GateCountScan> {
    if specs.is_empty() {
        return Err(Error::InvalidArgument("gate scan needs sizes".into()));
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let lowered = lower(&build_step_circuit(spec, default_marked(spec))?)?;
        rows.push(GateCountRow {
            n_nodes: spec.node_count(),
            two_qubit_gates: lowered.count_two_qubit_gates()?,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n_nodes as f64).log2(), r.two_qubit_gates as f64))
        .collect();
    let fit = fit_power_law(&points)?;
    Ok(GateCountScan {
        rows,
        fit: PolylogFit {
            a: fit.c,
            k: fit.alpha,
            r2: fit.r2,
        },
    })
}
