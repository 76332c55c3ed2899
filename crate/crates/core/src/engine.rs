//! Order-by-order coefficient matching, Picard iteration on the weighted
//! antiderivative solution operator, and the majorant convergence monitor.

use crate::analytic::ArgCtx;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::linalg::fit_line_slope;
use crate::ode::SingularProblem;
use crate::series::LogSeries;
use crate::tangential::TangentialPoly;

/// Evaluate the problem's scaled right-hand side G = t^2 F at v, keeping
/// orders <= trunc.
fn rhs_at(prob: &SingularProblem, v: &LogSeries, trunc: u32) -> Result<LogSeries> {
    // Pad the working truncation: argument components like v^2/t^3 lower the
    // formal truncation even though every order <= trunc of G only depends on
    // orders < trunc of v.
    let mut wide = LogSeries::new(v.dim(), v.mode(), trunc + 4);
    for (&(i, j), p) in v.terms() {
        wide.add_term(i, j, p.clone())?;
    }
    let mut ctx = ArgCtx::new(wide);
    Ok(prob.rhs.eval(&mut ctx, trunc)?.truncated(trunc))
}

/// Determine the expansion coefficients order by order through t^k.
///
/// At each order i the scaled equation reads, per log level j,
///   alpha_i c_{i,j} + beta_i (j+1) c_{i,j+1} + (j+1)(j+2) c_{i,j+2} = r_{i,j}
/// with alpha_i = (i - m_low)(i - m_high), beta_i = 2i - m_low - m_high, and
/// r the order-i part of G evaluated at the lower-order coefficients. Away
/// from i = m_high the block is triangular in descending j; at i = m_high
/// (alpha = 0) each level determines the next log coefficient up and c_{m_high,0}
/// is the free datum.
pub fn match_coefficients(
    prob: &SingularProblem,
    k: u32,
    datum: &TangentialPoly,
) -> Result<LogSeries> {
    assert_eq!(datum.dim(), prob.dim, "datum dimension mismatch");
    let mut v = LogSeries::new(prob.dim, prob.mode, k);
    for i in 0..=k {
        let g = rhs_at(prob, &v, i)?;
        let jmax = g.max_log_at(i).unwrap_or(0);
        let r = |j: u32| g.coeff_or_zero(i, j);
        if i < prob.min_order {
            for j in 0..=jmax {
                if !r(j).is_zero() {
                    return Err(Error::InconsistentResidual {
                        at: format!("t^{i} (log t)^{j}"),
                    });
                }
            }
            continue;
        }
        let beta = 2 * i as i64 - prob.m_low - prob.m_high;
        if i as i64 == prob.m_high {
            // resonant order
            let mut c: Vec<TangentialPoly> =
                vec![TangentialPoly::zero(prob.dim, prob.mode); jmax as usize + 3];
            for j in (0..=jmax).rev() {
                let extra = c[j as usize + 2].scale_int(((j + 1) * (j + 2)) as i64);
                let num = r(j).sub(&extra)?;
                c[j as usize + 1] = num.div_int(beta * (j as i64 + 1));
            }
            c[0] = datum.clone();
            for (j, poly) in c.into_iter().enumerate() {
                v.set_term(i, j as u32, poly)?;
            }
        } else {
            let alpha = (i as i64 - prob.m_low) * (i as i64 - prob.m_high);
            debug_assert!(alpha != 0);
            let mut c: Vec<TangentialPoly> =
                vec![TangentialPoly::zero(prob.dim, prob.mode); jmax as usize + 3];
            for j in (0..=jmax).rev() {
                let t1 = c[j as usize + 1].scale_int(beta * (j as i64 + 1));
                let t2 = c[j as usize + 2].scale_int(((j + 1) * (j + 2)) as i64);
                let num = r(j).sub(&t1)?.sub(&t2)?;
                c[j as usize] = num.div_int(alpha);
            }
            for (j, poly) in c.into_iter().enumerate() {
                v.set_term(i, j as u32, poly)?;
            }
        }
    }
    Ok(v)
}

/// The seed expansion: coefficients through order m_high + 1 (the resonant
/// pair plus its first correction).
pub fn seed_expansion(prob: &SingularProblem, datum: &TangentialPoly) -> Result<LogSeries> {
    match_coefficients(prob, prob.m_high as u32 + 1, datum)
}

/// Residual t^2 L_0 v - G(v) of a candidate expansion, through its truncation.
pub fn residual(prob: &SingularProblem, v: &LogSeries) -> Result<LogSeries> {
    let g = rhs_at(prob, v, v.trunc())?;
    prob.l0_scaled(v)?.truncated(v.trunc()).sub(&g.truncated(v.trunc()))
}

/// Majorant monitor configuration.
#[derive(Clone, Copy, Debug)]
pub struct MajorantConfig {
    /// tangential radius budget
    pub s0: f64,
    /// initial aperture of the shrinking cone t < a_k (s0 - s)
    pub a0: f64,
    /// fraction of the aperture actually sampled
    pub theta: f64,
    /// lattice points per axis
    pub lattice: usize,
    /// geometric-decay threshold for a PASS
    pub ratio_threshold: f64,
    /// steps excluded from the ratio fit
    pub burn_in: usize,
}

impl Default for MajorantConfig {
    fn default() -> Self {
        MajorantConfig {
            s0: 0.25,
            a0: 0.25,
            theta: 0.5,
            lattice: 32,
            ratio_threshold: 0.6,
            burn_in: 2,
        }
    }
}

/// Weighted sup of a correction over the shrinking cone:
/// sup ||w(t)||_s / t^{m_high - 1} * (a_k (s0 - s)/t - 1), sampled on a
/// lattice; ||.||_s is the coefficient-absolute-value norm at tangential
/// radius s.
fn cone_sup(w: &LogSeries, m_high: i64, a_k: f64, cfg: &MajorantConfig) -> Result<f64> {
    if cfg.lattice == 0 || cfg.s0 <= 0.0 || a_k <= 0.0 {
        return Err(Error::EmptySampleRegion);
    }
    let n = cfg.lattice;
    let mut sup: f64 = 0.0;
    for u in 1..=n {
        let s = cfg.s0 * u as f64 / (n + 1) as f64;
        let aper = a_k * (cfg.s0 - s);
        let tmax = cfg.theta * aper;
        if !(tmax > 0.0) {
            continue;
        }
        for vv in 1..=n {
            let t = tmax * vv as f64 / n as f64;
            let mut norm = 0.0;
            for (&(i, j), p) in w.terms() {
                norm += p.majorant_norm(s) * t.powi(i as i32) * t.ln().abs().powi(j as i32);
            }
            let val = norm / t.powi(m_high as i32 - 1) * (aper / t - 1.0);
            sup = sup.max(val);
        }
    }
    Ok(sup)
}

/// Monitor value for one Picard correction: the cone sup applied to w/t, w',
/// and each tangential derivative of w, taking the worst.
fn majorant_measure(
    w: &LogSeries,
    m_high: i64,
    a_k: f64,
    cfg: &MajorantConfig,
) -> Result<f64> {
    let mut m = cone_sup(&w.div_t(1)?, m_high, a_k, cfg)?;
    m = m.max(cone_sup(&w.ddt()?, m_high, a_k, cfg)?);
    for alpha in 0..w.dim() {
        m = m.max(cone_sup(&w.d_alpha(alpha), m_high, a_k, cfg)?);
    }
    Ok(m)
}

/// One Picard step's record.
#[derive(Clone, Debug)]
pub struct StepTrace {
    pub k: u32,
    /// lowest t-order of the correction (None if it vanished)
    pub w_order: Option<u32>,
    pub majorant: f64,
    pub aperture: f64,
}

/// Full iteration output.
#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub seed: LogSeries,
    pub v: LogSeries,
    pub steps: Vec<StepTrace>,
    pub stabilized_at: u32,
    /// fitted geometric ratio of the monitor values (0 when too few nonzero)
    pub ratio: f64,
    pub majorant_pass: bool,
}

impl IterationTrace {
    /// CSV of the per-step trace.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("k,w_min_order,majorant,aperture\n");
        for s in &self.steps {
            let ord = s
                .w_order
                .map(|o| o.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!("{},{},{:.6e},{:.6e}\n", s.k, ord, s.majorant, s.aperture));
        }
        out
    }
}

/// Picard iteration from the seed: corrections
/// w_k = (wad(F_k, m_high) - wad(F_k, m_low)) / (m_high - m_low)
/// (scaled form) with F_{m_high+1} = G(V) - t^2 L_0 V and thereafter
/// F_k = G(V_{k-1}) - G(V_{k-2}); stops once a correction vanishes through
/// the truncation order.
pub fn run_iteration(
    prob: &SingularProblem,
    k_max: u32,
    datum: &TangentialPoly,
    cfg: &MajorantConfig,
) -> Result<IterationTrace> {
    let m_high = prob.m_high;
    assert!(k_max as i64 > m_high, "truncation must exceed the resonant order");
    let seed = seed_expansion(prob, datum)?;
    let mut v = LogSeries::new(prob.dim, prob.mode, k_max);
    for (&(i, j), p) in seed.terms() {
        v.add_term(i, j, p.clone())?;
    }
    let span = prob.m_high - prob.m_low;
    let inv_span = Coeff::from_ratio(1, span, prob.mode);

    let mut g_prev = rhs_at(prob, &v, k_max)?;
    let mut f_k = g_prev.sub(&prob.l0_scaled(&v)?.truncated(k_max))?;
    let mut steps: Vec<StepTrace> = Vec::new();
    let mut a_k = cfg.a0;
    let mut k = m_high as u32 + 1;
    let guard = k_max - m_high as u32 + 2;
    let stabilized_at = loop {
        if f_k.is_zero() {
            break k;
        }
        if steps.len() as u32 > guard {
            return Err(Error::NonStabilization(guard));
        }
        let w = f_k
            .weighted_antideriv_scaled(m_high)?
            .sub(&f_k.weighted_antideriv_scaled(prob.m_low)?)?
            .scale(&inv_span)
            .truncated(k_max);
        if let Some(o) = w.min_order() {
            if o < k {
                return Err(Error::Validation(format!(
                    "correction at step {k} starts at order {o} < {k}"
                )));
            }
        }
        let m_val = if w.is_zero() {
            0.0
        } else {
            majorant_measure(&w, m_high, a_k, cfg)?
        };
        steps.push(StepTrace {
            k,
            w_order: w.min_order(),
            majorant: m_val,
            aperture: a_k,
        });
        if w.is_zero() {
            break k;
        }
        v = v.add(&w)?;
        let g_new = rhs_at(prob, &v, k_max)?;
        f_k = g_new.sub(&g_prev)?;
        g_prev = g_new;
        a_k *= 1.0 - 1.0 / ((k as f64 + 2.0) * (k as f64 + 2.0));
        k += 1;
    };

    let (ratio, pass) = fit_ratio(&steps, cfg);
    Ok(IterationTrace {
        seed,
        v,
        steps,
        stabilized_at,
        ratio,
        majorant_pass: pass,
    })
}

fn fit_ratio(steps: &[StepTrace], cfg: &MajorantConfig) -> (f64, bool) {
    let vals: Vec<(f64, f64)> = steps
        .iter()
        .skip(cfg.burn_in)
        .filter(|s| s.majorant > 0.0)
        .map(|s| (s.k as f64, s.majorant.ln()))
        .collect();
    if vals.len() <= 1 {
        return (0.0, true);
    }
    let xs: Vec<f64> = vals.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = vals.iter().map(|p| p.1).collect();
    match fit_line_slope(&xs, &ys) {
        Ok(slope) => {
            let ratio = slope.exp();
            (ratio, ratio <= cfg.ratio_threshold)
        }
        Err(_) => (f64::INFINITY, false),
    }
}
