//! Indicial analysis, problem description, order reduction, nonlocal
//! coefficient extraction, and a closed-form quadrature solver for the scalar
//! model equation u'' + p u'/t + q u/t^2 = F.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::analytic::{ArgCtx, FExpr};
use crate::coeff::{Coeff, Mode};
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::series::{scalar_series, LogSeries};
use crate::tangential::TangentialPoly;

/// Integer indicial roots (m_low <= 0, m_high >= 3) of
/// m^2 - (1 - p) m + q = 0.
pub fn indicial_roots(p: i64, q: i64) -> Result<(i64, i64)> {
    let s = 1 - p; // m_low + m_high
    let disc = s * s - 4 * q;
    if disc < 0 {
        return Err(Error::NonIntegerRoots { p, q });
    }
    let sq = (disc as f64).sqrt().round() as i64;
    let sq = [sq - 1, sq, sq + 1]
        .into_iter()
        .find(|&c| c >= 0 && c * c == disc)
        .ok_or(Error::NonIntegerRoots { p, q })?;
    if (s - sq) % 2 != 0 {
        return Err(Error::NonIntegerRoots { p, q });
    }
    let m_low = (s - sq) / 2;
    let m_high = (s + sq) / 2;
    if m_low > 0 || m_high < 3 {
        return Err(Error::RootsOutOfRange(m_low, m_high));
    }
    Ok((m_low, m_high))
}

/// A singular problem in normal form u'' + p u'/t + q u/t^2 = F(x', t, V(u)),
/// carried with the recipe for the scaled right-hand side G = t^2 F.
#[derive(Clone, Debug)]
pub struct SingularProblem {
    pub p: i64,
    pub q: i64,
    pub m_low: i64,
    pub m_high: i64,
    /// lowest t-order the expansion may carry (residuals below must vanish)
    pub min_order: u32,
    pub dim: usize,
    pub mode: Mode,
    /// recipe for G = t^2 F
    pub rhs: FExpr,
    /// sup bound for |F| on the reference region (majorant reporting)
    pub bound_m: f64,
    /// reference radius for the majorant region
    pub bound_r: f64,
}

impl SingularProblem {
    pub fn from_pq(
        p: i64,
        q: i64,
        min_order: u32,
        dim: usize,
        mode: Mode,
        rhs: FExpr,
        bound_m: f64,
        bound_r: f64,
    ) -> Result<Self> {
        let (m_low, m_high) = indicial_roots(p, q)?;
        Ok(SingularProblem {
            p,
            q,
            m_low,
            m_high,
            min_order,
            dim,
            mode,
            rhs,
            bound_m,
            bound_r,
        })
    }

    pub fn from_roots(
        m_low: i64,
        m_high: i64,
        min_order: u32,
        dim: usize,
        mode: Mode,
        rhs: FExpr,
        bound_m: f64,
        bound_r: f64,
    ) -> Result<Self> {
        let p = 1 - (m_low + m_high);
        let q = m_low * m_high;
        Self::from_pq(p, q, min_order, dim, mode, rhs, bound_m, bound_r)
    }

    /// Evaluate the scaled right-hand side G = t^2 F at v, truncated at
    /// v's truncation order.
    pub fn rhs_scaled(&self, v: &LogSeries) -> Result<LogSeries> {
        assert_eq!(v.dim(), self.dim, "problem/series dimension mismatch");
        let trunc = v.trunc();
        // Pad the working truncation so components like v^2/t^3 do not lower
        // the formal truncation below the requested order.
        let mut wide = LogSeries::new(v.dim(), v.mode(), trunc + 4);
        for (&(i, j), p) in v.terms() {
            wide.add_term(i, j, p.clone())?;
        }
        let mut ctx = ArgCtx::new(wide);
        self.rhs.eval(&mut ctx, trunc).map(|g| g.truncated(trunc))
    }

    /// Scaled linear operator t^2 L_0 u with this problem's roots.
    pub fn l0_scaled(&self, u: &LogSeries) -> Result<LogSeries> {
        u.l0_scaled(self.m_low, self.m_high)
    }
}

/// Reduced-equation coefficients at level l: roots shift to
/// (m_low - l, m_high - l), so p_l = 1 + 2l - (m_low + m_high) and
/// q_l = (m_low - l)(m_high - l). Computed both from the closed form and the
/// level recursion p_l = p_{l-1} + 2, q_l = q_{l-1} + p_{l-1}; the two must
/// agree.
pub fn reduce_coeffs(m_low: i64, m_high: i64, l: u32) -> Result<(i64, i64)> {
    let max = (m_high - 2).max(0) as u32;
    if l > max {
        return Err(Error::LevelOutOfRange { l, max });
    }
    let li = l as i64;
    let p_closed = 1 + 2 * li - (m_low + m_high);
    let q_closed = (m_low - li) * (m_high - li);
    let mut p = 1 - (m_low + m_high);
    let mut q = m_low * m_high;
    for _ in 0..l {
        q += p;
        p += 2;
    }
    assert_eq!((p, q), (p_closed, q_closed), "reduction closed forms disagree");
    Ok((p_closed, q_closed))
}

/// Apply the order-lowering substitution l times:
/// u_k = u_{k-1}' - 2 u_{k-1}/t, equivalently u_l = t^2 d_t^l (u/t^2).
pub fn reduce_series(u: &LogSeries, l: u32) -> Result<LogSeries> {
    let mut w = u.clone();
    for _ in 0..l {
        let dw = w.ddt()?;
        let over_t = w.div_t(1)?.truncated(dw.trunc());
        w = dw.sub(&over_t.scale_int(2))?;
    }
    Ok(w)
}

/// Everything known about one reduction level.
#[derive(Clone, Debug)]
pub struct ReductionChain {
    pub level: u32,
    pub p_l: i64,
    pub q_l: i64,
    /// reduced unknown u_l = t^2 d_t^l (u/t^2)
    pub u_l: Option<LogSeries>,
    /// v_l = u_l / t^2
    pub v_l: Option<LogSeries>,
    /// reduced scaled right-hand side (same substitution applied to t^2 F)
    pub rhs_l: Option<LogSeries>,
}

/// Build the reduction chain data at level l; series arguments are optional.
pub fn reduce_order(
    m_low: i64,
    m_high: i64,
    l: u32,
    u: Option<&LogSeries>,
    rhs_scaled: Option<&LogSeries>,
) -> Result<ReductionChain> {
    let (p_l, q_l) = reduce_coeffs(m_low, m_high, l)?;
    let u_l = u.map(|s| reduce_series(s, l)).transpose()?;
    let v_l = u_l.as_ref().map(|s| s.div_t(2)).transpose()?;
    let rhs_l = rhs_scaled.map(|s| reduce_series(s, l)).transpose()?;
    Ok(ReductionChain {
        level: l,
        p_l,
        q_l,
        u_l,
        v_l,
        rhs_l,
    })
}

/// How the basis pair (t^m_high log t, t^m_high) appears at reduction level
/// m_high - 2, in the (t^2 log t, t^2) block:
///   reduce(t^m log t) = s11 t^2 log t + s10 t^2 (+ lower t-powers),
///   reduce(t^m)       = s00 t^2.
#[derive(Clone, Debug)]
pub struct NonlocalBasis {
    pub s11: BigRational,
    pub s10: BigRational,
    pub s00: BigRational,
}

pub fn nonlocal_basis(m_high: i64) -> Result<NonlocalBasis> {
    assert!(m_high >= 3);
    let m = m_high as u32;
    let l = m - 2;
    let b_log = reduce_series(&scalar_series(m + 1, &[(m, 1, 1, 1)]), l)?;
    let b_pure = reduce_series(&scalar_series(m + 1, &[(m, 0, 1, 1)]), l)?;
    let take = |s: &LogSeries, i: u32, j: u32| -> BigRational {
        s.coeff_or_zero(i, j)
            .constant_term()
            .as_rational()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    };
    let s11 = take(&b_log, 2, 1);
    let s10 = take(&b_log, 2, 0);
    let s00 = take(&b_pure, 2, 0);
    if s11.is_zero() || s00.is_zero() {
        return Err(Error::SingularBlock(2));
    }
    Ok(NonlocalBasis { s11, s10, s00 })
}

/// The first nonlocal coefficient pair (c_{m_high,1}, c_{m_high,0}) of u.
#[derive(Clone, Debug)]
pub struct NonlocalCoeffs {
    pub c_log: TangentialPoly,
    pub c_free: TangentialPoly,
    /// reduced-level data the pair was read from
    pub c21: TangentialPoly,
    pub c20: TangentialPoly,
}

fn scalar_in_mode(r: &BigRational, mode: Mode) -> Coeff {
    match mode {
        Mode::Exact => Coeff::Rat(r.clone()),
        Mode::Float => Coeff::F64(r.to_f64().unwrap_or(f64::NAN)),
    }
}

/// Extract (c_{m_high,1}, c_{m_high,0}) from a series by symbolic reduction
/// to level m_high - 2 and inversion of the triangular basis map. Terms at
/// other t-orders cannot land in the (t^2 log t, t^2) block, so no
/// contamination correction is needed.
pub fn extract_first_nonlocal(u: &LogSeries, m_high: i64) -> Result<NonlocalCoeffs> {
    let basis = nonlocal_basis(m_high)?;
    let l = (m_high - 2) as u32;
    let u_l = reduce_series(u, l)?;
    let c21 = u_l.coeff_or_zero(2, 1);
    let c20 = u_l.coeff_or_zero(2, 0);
    let mode = u.mode();
    let inv_s11 = scalar_in_mode(&(BigRational::from_integer(BigInt::from(1)) / &basis.s11), mode);
    let c_log = c21.scale(&inv_s11);
    let inv_s00 = scalar_in_mode(&(BigRational::from_integer(BigInt::from(1)) / &basis.s00), mode);
    let s10 = scalar_in_mode(&basis.s10, mode);
    let c_free = c20.sub(&c_log.scale(&s10))?.scale(&inv_s00);
    Ok(NonlocalCoeffs {
        c_log,
        c_free,
        c21,
        c20,
    })
}

fn binom_f64(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// l-th derivative by the central difference of minimal width, O(h^2).
fn central_diff(f: &dyn Fn(f64) -> f64, t: f64, h: f64, l: u32) -> f64 {
    let mut s = 0.0;
    for k in 0..=l {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let x = t + (l as f64 / 2.0 - k as f64) * h;
        s += sign * binom_f64(l, k) * f(x);
    }
    s / h.powi(l as i32)
}

/// Richardson-extrapolated l-th derivative (O(h^4)).
fn deriv_richardson(f: &dyn Fn(f64) -> f64, t: f64, h: f64, l: u32) -> f64 {
    let d1 = central_diff(f, t, h, l);
    let d2 = central_diff(f, t, h / 2.0, l);
    (4.0 * d2 - d1) / 3.0
}

/// Numeric extraction of (c_{m_high,1}, c_{m_high,0}) from point values of u:
/// differentiate u/t^2 to level m_high - 2 by Richardson-extrapolated
/// central differences, then least-squares fit the reduced profile
/// a log t + b + higher-order (t log t ... t^3) corrections, and invert the
/// basis map.
pub fn extract_first_nonlocal_numeric(
    u: &dyn Fn(f64) -> f64,
    m_high: i64,
    sample_ts: &[f64],
) -> Result<(f64, f64)> {
    let basis = nonlocal_basis(m_high)?;
    let l = (m_high - 2) as u32;
    let g = |t: f64| u(t) / (t * t);
    let mut rows = Vec::with_capacity(sample_ts.len());
    let mut ys = Vec::with_capacity(sample_ts.len());
    for &t in sample_ts {
        let h = t / 16.0;
        let vl = deriv_richardson(&g, t, h, l);
        let lt = t.ln();
        rows.push(vec![lt, 1.0, t * lt, t, t * t * lt, t * t, t * t * t * lt, t * t * t]);
        ys.push(vl);
    }
    let fit = least_squares(&rows, &ys)?;
    let (a, b) = (fit[0], fit[1]);
    let s11 = basis.s11.to_f64().unwrap();
    let s10 = basis.s10.to_f64().unwrap();
    let s00 = basis.s00.to_f64().unwrap();
    let c_log = a / s11;
    let c_free = (b - s10 * c_log) / s00;
    Ok((c_log, c_free))
}

// ----- closed-form scalar solver -----

const GL_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss_panel(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let mut s = 0.0;
    for (&x, &w) in GL_X.iter().zip(GL_W.iter()) {
        s += w * (f(c + r * x) + f(c - r * x));
    }
    s * r
}

/// int_0^t g(s) ds on geometric panels shrinking toward 0; errors out if panel
/// contributions fail to die off (non-integrable integrand).
fn integral_to_zero(g: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
    let mut acc = 0.0;
    let mut hi = t;
    for _ in 0..400 {
        let lo = hi / 2.0;
        let panel = gauss_panel(g, lo, hi);
        acc += panel;
        if panel.abs() < 1e-16 * (1.0 + acc.abs()) {
            return Ok(acc);
        }
        hi = lo;
    }
    Err(Error::QuadratureDivergence)
}

/// int_t^r g(s) ds on geometric panels growing away from t.
fn integral_up(g: &dyn Fn(f64) -> f64, t: f64, r: f64) -> f64 {
    let mut acc = 0.0;
    let mut lo = t;
    while lo < r {
        let hi = (2.0 * lo).min(r);
        acc += gauss_panel(g, lo, hi);
        lo = hi;
    }
    acc
}

/// Closed-form solution of u'' + p u'/t + q u/t^2 = F on (0, r] with the
/// boundary-regular branch selected by prescribing u(r):
///
///   P(t) = 1/(m_high - m_low) * [ t^m_high int_r^t s^{1-m_high} F ds
///                                 - t^m_low  int_0^t s^{1-m_low}  F ds ]
///   u(t) = P(t) + (u(r) - P(r)) (t/r)^m_high.
pub struct ClosedFormSolution<'a> {
    pub m_low: i64,
    pub m_high: i64,
    pub r: f64,
    pub u_r: f64,
    pub f: &'a dyn Fn(f64) -> f64,
}

impl<'a> ClosedFormSolution<'a> {
    fn particular(&self, t: f64) -> Result<f64> {
        let ml = self.m_low as f64;
        let mh = self.m_high as f64;
        let f = self.f;
        let g_low = move |s: f64| s.powf(1.0 - ml) * f(s);
        let g_high = move |s: f64| s.powf(1.0 - mh) * f(s);
        let i_low = integral_to_zero(&g_low, t)?;
        let i_up = integral_up(&g_high, t, self.r);
        Ok((-t.powf(mh) * i_up - t.powf(ml) * i_low) / (mh - ml))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        assert!(t > 0.0 && t <= self.r, "evaluation point outside (0, r]");
        let p_t = self.particular(t)?;
        let ml = self.m_low as f64;
        let mh = self.m_high as f64;
        let f = self.f;
        let g_low = move |s: f64| s.powf(1.0 - ml) * f(s);
        let p_r = -self.r.powf(ml) * integral_to_zero(&g_low, self.r)? / (mh - ml);
        Ok(p_t + (self.u_r - p_r) * (t / self.r).powf(mh))
    }
}
