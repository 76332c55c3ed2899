//! Independent numerical confirmation: finite-difference solves of the
//! radial boundary-value problems, remainder-decay fits against partial sums,
//! and tangential factorial-growth fits.

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::series::LogSeries;
use crate::tangential::{TangentialPoly, UNBOUNDED};

// ----- quasilinear form with sampled hypothesis checks -----

/// A sample point for the coefficient callbacks: tangential position x',
/// transverse t, gradient Du, and the ratio u/t.
pub struct FormSample {
    pub x: Vec<f64>,
    pub t: f64,
    pub du: Vec<f64>,
    pub u_over_t: f64,
}

type MatrixFn = Box<dyn Fn(&FormSample) -> Vec<Vec<f64>>>;
type ScalarFn = Box<dyn Fn(&FormSample) -> f64>;

/// Quasilinear equation A_ij u_ij + P u_t/t + Q u/t^2 + N = 0 with its
/// structural constants: ellipticity lambda, negativity margin c0 with
/// 2 A_nn + 2P + Q <= -c0, solution bound C0 (|u| <= C0 t^2, |Du| <= C0 t),
/// and analyticity envelope constants (a0, a_env).
pub struct QuasilinearForm {
    pub n: usize,
    pub a_ij: MatrixFn,
    pub p: ScalarFn,
    pub q: ScalarFn,
    pub n_term: ScalarFn,
    pub lambda: f64,
    pub c0: f64,
    pub c_sol: f64,
    pub a0: f64,
    pub a_env: f64,
}

impl QuasilinearForm {
    /// Default deterministic sample cloud respecting |Du| <= C0 t, |u| <= C0 t^2.
    pub fn default_samples(&self) -> Vec<FormSample> {
        let mut out = Vec::new();
        for &t in &[1e-3, 1e-2, 0.1, 0.3] {
            for &gscale in &[0.0, 0.5, 1.0] {
                for sign in [-1.0, 1.0] {
                    let du = vec![sign * self.c_sol * t * gscale; self.n];
                    out.push(FormSample {
                        x: vec![0.1; self.n - 1],
                        t,
                        du,
                        u_over_t: sign * self.c_sol * t * gscale,
                    });
                }
            }
        }
        out
    }

    /// Worst sampled violation of lambda^{-1}|xi|^2 <= A xi.xi <= lambda|xi|^2
    /// over coordinate and diagonal directions; nonnegative return = margin,
    /// error on violation.
    pub fn ellipticity_margin(&self, samples: &[FormSample]) -> Result<f64> {
        let mut margin = f64::INFINITY;
        let mut dirs: Vec<Vec<f64>> = (0..self.n)
            .map(|i| {
                let mut e = vec![0.0; self.n];
                e[i] = 1.0;
                e
            })
            .collect();
        let d = (1.0 / self.n as f64).sqrt();
        dirs.push(vec![d; self.n]);
        let mut alt = vec![d; self.n];
        for (i, a) in alt.iter_mut().enumerate() {
            if i % 2 == 1 {
                *a = -*a;
            }
        }
        dirs.push(alt);
        for s in samples {
            let a = (self.a_ij)(s);
            for xi in &dirs {
                let mut quad = 0.0;
                for i in 0..self.n {
                    for j in 0..self.n {
                        quad += a[i][j] * xi[i] * xi[j];
                    }
                }
                let lower = quad - 1.0 / self.lambda;
                let upper = self.lambda - quad;
                margin = margin.min(lower).min(upper);
            }
        }
        if margin < -1e-9 {
            return Err(Error::Validation(format!(
                "ellipticity violated by sampled form (margin {margin:.3e})"
            )));
        }
        // Tight instances (lambda attained exactly) can round to -1e-16.
        Ok(margin.max(0.0))
    }

    /// Worst sampled slack in 2 A_nn + 2P + Q <= -c0; nonnegative return =
    /// margin, error on violation.
    pub fn negativity_margin(&self, samples: &[FormSample]) -> Result<f64> {
        let mut margin = f64::INFINITY;
        for s in samples {
            let a = (self.a_ij)(s);
            let val = 2.0 * a[self.n - 1][self.n - 1] + 2.0 * (self.p)(s) + (self.q)(s);
            margin = margin.min(-self.c0 - val);
        }
        if margin < 0.0 {
            return Err(Error::Validation(format!(
                "negativity condition violated by sampled form (margin {margin:.3e})"
            )));
        }
        Ok(margin)
    }
}

/// The minimal-graph equation Delta u - u_i u_j u_ij/(1+|Du|^2) - n u_t/t = 0
/// as a quasilinear form: A_ij = delta_ij - u_i u_j/(1+|Du|^2), P = -n, Q = 0.
/// Then 2 A_nn + 2P + Q <= 2 - 2n, so c0 = 2n - 2.
pub fn minimal_graph_form(n: usize) -> QuasilinearForm {
    assert!(n >= 2);
    let nn = n;
    QuasilinearForm {
        n,
        a_ij: Box::new(move |s: &FormSample| {
            let g2: f64 = s.du.iter().map(|g| g * g).sum();
            let mut a = vec![vec![0.0; nn]; nn];
            for (i, row) in a.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry = if i == j { 1.0 } else { 0.0 };
                    *entry -= s.du[i] * s.du[j] / (1.0 + g2);
                }
            }
            a
        }),
        p: Box::new(move |_| -(nn as f64)),
        q: Box::new(|_| 0.0),
        n_term: Box::new(|_| 0.0),
        // |Du| <= C0 t <= 1 on the sample cloud, so eigenvalues of A lie in
        // [1/2, 1]; lambda = 2 covers both inequalities.
        lambda: 2.0,
        c0: 2.0 * n as f64 - 2.0,
        c_sol: 1.0,
        a0: 1.0,
        a_env: 1.0,
    }
}

/// The conformal-factor equation for v (u = t^{-(n-2)/2}(1+v) scaling of the
/// Loewner-Nirenberg problem), written as a quasilinear form in v:
/// A_ij = delta_ij, P = -(n-2), Q = -n. Then 2 A_nn + 2P + Q = 6 - 3n,
/// so c0 = 3n - 6.
pub fn conformal_form(n: usize) -> QuasilinearForm {
    assert!(n >= 3);
    QuasilinearForm {
        n,
        a_ij: Box::new(move |s: &FormSample| {
            let mut a = vec![vec![0.0; s.du.len()]; s.du.len()];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            a
        }),
        p: Box::new(move |_| -((n - 2) as f64)),
        q: Box::new(move |_| -(n as f64)),
        n_term: Box::new(|_| 0.0),
        lambda: 1.0,
        c0: 3.0 * n as f64 - 6.0,
        c_sol: 1.0,
        a0: 1.0,
        a_env: 1.0,
    }
}

// ----- radial finite-difference solver -----

/// Radial two-point boundary-value problems solved by the validator.
pub enum RadialOde {
    /// u''/(1 + u'^2) = u'/t; exact solution sqrt(R^2 - t^2) for matching data.
    /// The discrete residual is scaled by t^2 so that a max-norm tolerance is
    /// meaningful on the geometric grid (the raw stencil amplifies roundoff
    /// by 1/h^2 near t_min).
    CircleSlice,
    /// Equation for y = 1 + v on the unit ball with d(t) = -(n-1)/(1-t):
    /// t^2 y'' - (n-2) t y' - n (y-1) + t^2 d y' - (n-2)/2 t d y
    ///   - n(n-2)/4 (y^gamma - 1 - gamma (y-1)) = 0, gamma = (n+2)/(n-2).
    BallConformal { n: u32 },
    /// u'' = 0 (trivial interpolant check).
    Zero,
}

impl RadialOde {
    /// Pointwise residual of the 3-point stencil values (u_m, u_0, u_p) at
    /// node t with spacings h1 = t - t_prev, h2 = t_next - t.
    /// Node residual, normalized by the dominant stencil weight so the
    /// max-norm tolerance is achievable to machine precision on fine grids
    /// (multiplying the equation by a positive factor leaves the solution
    /// unchanged).
    fn residual(&self, t: f64, um: f64, u0: f64, up: f64, h1: f64, h2: f64) -> f64 {
        let du = -h2 / (h1 * (h1 + h2)) * um + (h2 - h1) / (h1 * h2) * u0
            + h1 / (h2 * (h1 + h2)) * up;
        let ddu = 2.0 * (um / (h1 * (h1 + h2)) - u0 / (h1 * h2) + up / (h2 * (h1 + h2)));
        let scale = 1.0 + 2.0 * t * t / (h1 * h2);
        self.raw_residual(t, u0, du, ddu) / scale
    }

    fn raw_residual(&self, t: f64, u0: f64, du: f64, ddu: f64) -> f64 {
        match self {
            RadialOde::CircleSlice => t * t * ddu / (1.0 + du * du) - t * du,
            RadialOde::BallConformal { n } => {
                let nf = *n as f64;
                let gamma = (nf + 2.0) / (nf - 2.0);
                let lap_d = -(nf - 1.0) / (1.0 - t);
                t * t * (ddu + lap_d * du)
                    - (nf - 2.0) * t * du
                    - nf * (u0 - 1.0)
                    - 0.5 * (nf - 2.0) * t * lap_d * u0
                    - nf * (nf - 2.0) / 4.0 * (u0.powf(gamma) - 1.0 - gamma * (u0 - 1.0))
            }
            RadialOde::Zero => t * t * ddu,
        }
    }
}

/// Geometric grid specification on [t_min, t_max].
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.points;
        assert!(n >= 3 && self.t_min > 0.0 && self.t_max > self.t_min);
        let q = (self.t_max / self.t_min).powf(1.0 / (n - 1) as f64);
        let mut ts: Vec<f64> = (0..n).map(|i| self.t_min * q.powi(i as i32)).collect();
        ts[n - 1] = self.t_max;
        ts
    }

    /// Refinement inserting the geometric midpoint of every interval.
    pub fn refined_nodes(&self) -> Vec<f64> {
        let coarse = self.nodes();
        let mut out = Vec::with_capacity(2 * coarse.len() - 1);
        for w in coarse.windows(2) {
            out.push(w[0]);
            out.push((w[0] * w[1]).sqrt());
        }
        out.push(*coarse.last().unwrap());
        out
    }
}

/// One accepted Newton step: iteration index, max-norm residual after the
/// step, and the number of dampings (step halvings) that were needed.
#[derive(Clone, Debug)]
pub struct NewtonStep {
    pub iter: usize,
    pub residual: f64,
    pub halvings: u32,
}

/// Finite-difference solution on a radial grid.
pub struct GridSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub residual_norm: f64,
    pub newton_log: Vec<NewtonStep>,
}

fn solve_on_nodes(
    ode: &RadialOde,
    ts: &[f64],
    inner_bc: f64,
    outer_bc: f64,
    tol: f64,
) -> Result<GridSolution> {
    let n = ts.len();
    let m = n - 2; // interior unknowns
    let mut u: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let s = (t - ts[0]) / (ts[n - 1] - ts[0]);
            inner_bc + s * (outer_bc - inner_bc)
        })
        .collect();
    u[0] = inner_bc;
    u[n - 1] = outer_bc;

    let resid_vec = |u: &[f64]| -> Vec<f64> {
        (1..n - 1)
            .map(|i| {
                ode.residual(
                    ts[i],
                    u[i - 1],
                    u[i],
                    u[i + 1],
                    ts[i] - ts[i - 1],
                    ts[i + 1] - ts[i],
                )
            })
            .collect()
    };
    let max_norm = |r: &[f64]| r.iter().fold(0.0f64, |a, &b| a.max(b.abs()));

    let mut log = Vec::new();
    let mut res = resid_vec(&u);
    let mut rnorm = max_norm(&res);
    // Iterate to the machine floor of the normalized residual, not just to
    // `tol`: the stopping defect otherwise dominates the discretization error.
    let floor = 1e-15;
    let mut stagnated = false;
    for iter in 0..60 {
        if rnorm < floor || stagnated {
            break;
        }
        // Tridiagonal Jacobian by directional finite differences.
        let mut lo = vec![0.0; m];
        let mut di = vec![0.0; m];
        let mut hi = vec![0.0; m];
        for i in 1..n - 1 {
            let (h1, h2) = (ts[i] - ts[i - 1], ts[i + 1] - ts[i]);
            let base = res[i - 1];
            let eps = 1e-9 * (1.0 + u[i].abs());
            di[i - 1] =
                (ode.residual(ts[i], u[i - 1], u[i] + eps, u[i + 1], h1, h2) - base) / eps;
            if i > 1 {
                lo[i - 1] =
                    (ode.residual(ts[i], u[i - 1] + eps, u[i], u[i + 1], h1, h2) - base) / eps;
            }
            if i < n - 2 {
                hi[i - 1] =
                    (ode.residual(ts[i], u[i - 1], u[i], u[i + 1] + eps, h1, h2) - base) / eps;
            }
        }
        // Thomas algorithm for J dv = -res.
        let c = hi.clone();
        let mut d: Vec<f64> = res.iter().map(|r| -r).collect();
        let mut diag = di.clone();
        for k in 1..m {
            if diag[k - 1] == 0.0 {
                return Err(Error::NewtonDivergence("singular Jacobian pivot".into()));
            }
            let w = lo[k] / diag[k - 1];
            diag[k] -= w * c[k - 1];
            d[k] -= w * d[k - 1];
        }
        let mut dv = vec![0.0; m];
        if diag[m - 1] == 0.0 {
            return Err(Error::NewtonDivergence("singular Jacobian pivot".into()));
        }
        dv[m - 1] = d[m - 1] / diag[m - 1];
        for k in (0..m - 1).rev() {
            dv[k] = (d[k] - c[k] * dv[k + 1]) / diag[k];
        }
        // Damping: halve the step until the residual norm decreases.
        let mut step = 1.0;
        let mut halvings = 0u32;
        loop {
            let mut trial = u.clone();
            for k in 0..m {
                trial[k + 1] += step * dv[k];
            }
            let tres = resid_vec(&trial);
            let tnorm = max_norm(&tres);
            if tnorm < rnorm || tnorm < tol {
                u = trial;
                res = tres;
                rnorm = tnorm;
                break;
            }
            halvings += 1;
            if halvings > 30 {
                if rnorm < tol {
                    // Converged to the attainable floor.
                    stagnated = true;
                    break;
                }
                return Err(Error::NewtonDivergence(format!(
                    "no descent after 30 halvings at iteration {iter} (residual {rnorm:.3e})"
                )));
            }
            step *= 0.5;
        }
        log.push(NewtonStep {
            iter,
            residual: rnorm,
            halvings,
        });
    }
    if rnorm >= tol {
        return Err(Error::NewtonDivergence(format!(
            "residual {rnorm:.3e} above tolerance {tol:.1e} after Newton loop"
        )));
    }
    Ok(GridSolution {
        grid: ts.to_vec(),
        values: u,
        residual_norm: rnorm,
        newton_log: log,
    })
}

/// Damped-Newton finite-difference solve on the geometric grid with supplied
/// boundary values (the inner one normally comes from an expansion partial
/// sum evaluated at t_min).
pub fn fd_solve_radial(
    ode: &RadialOde,
    inner_bc: f64,
    outer_bc: f64,
    grid: &GridSpec,
) -> Result<GridSolution> {
    // Converge to near machine floor; the reported residual_norm then sits
    // far below the 1e-10 acceptance threshold.
    solve_on_nodes(ode, &grid.nodes(), inner_bc, outer_bc, 1e-13)
}

/// Solve on the grid and its midpoint refinement, Richardson-combine
/// (4 u_fine - u_coarse)/3 at the coarse nodes. The scheme is second order on
/// the smoothly graded grid, so the combination gains about two more orders.
pub fn fd_solve_richardson(
    ode: &RadialOde,
    inner_bc: f64,
    outer_bc: f64,
    grid: &GridSpec,
) -> Result<GridSolution> {
    let coarse = solve_on_nodes(ode, &grid.nodes(), inner_bc, outer_bc, 1e-13)?;
    let fine = solve_on_nodes(ode, &grid.refined_nodes(), inner_bc, outer_bc, 1e-13)?;
    let mut values = Vec::with_capacity(coarse.grid.len());
    for (i, _) in coarse.grid.iter().enumerate() {
        values.push((4.0 * fine.values[2 * i] - coarse.values[i]) / 3.0);
    }
    Ok(GridSolution {
        grid: coarse.grid,
        values,
        residual_norm: fine.residual_norm,
        newton_log: fine.newton_log,
    })
}

// ----- remainder-decay fits -----

/// Outcome of one remainder-slope fit.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub k: u32,
    pub slope: Option<f64>,
    pub points: usize,
    pub note: String,
}

/// Least-squares slope of log|u - u_k| vs log t on the window
/// [t_min*10, t_min*1000], per truncation order k. `partial(k, t)` evaluates
/// the order-k partial sum. Fits are rejected (slope = None) when fewer than
/// four window points sit above the noise floor, and an error is raised when
/// the window misses the grid or the remainder is non-monotone there.
pub fn remainder_slopes(
    sol: &GridSolution,
    partial: &dyn Fn(u32, f64) -> f64,
    ks: &[u32],
    noise_floor: f64,
) -> Result<Vec<SlopeFit>> {
    let t_min = sol.grid[0];
    let (w_lo, w_hi) = (t_min * 10.0, t_min * 1000.0);
    if w_hi > *sol.grid.last().unwrap() * (1.0 + 1e-12) {
        return Err(Error::Validation(format!(
            "fit window [{w_lo:.3e}, {w_hi:.3e}] exceeds the grid"
        )));
    }
    let mut out = Vec::new();
    for &k in ks {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut rems = Vec::new();
        for (i, &t) in sol.grid.iter().enumerate() {
            if t < w_lo || t > w_hi {
                continue;
            }
            let r = (sol.values[i] - partial(k, t)).abs();
            if r > noise_floor {
                xs.push(t.ln());
                ys.push(r.ln());
                rems.push(r);
            }
        }
        if xs.len() < 4 {
            out.push(SlopeFit {
                k,
                slope: None,
                points: xs.len(),
                note: "rejected: remainder at noise floor on the fit window".into(),
            });
            continue;
        }
        let mut drops = 0usize;
        for w in rems.windows(2) {
            if w[1] < 0.5 * w[0] {
                drops += 1;
            }
        }
        if drops > 0 {
            return Err(Error::Validation(format!(
                "non-monotone remainder for k = {k}: insufficient grid accuracy"
            )));
        }
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
        let c = least_squares(&rows, &ys)?;
        out.push(SlopeFit {
            k,
            slope: Some(c[0]),
            points: xs.len(),
            note: String::new(),
        });
    }
    Ok(out)
}

/// CSV table (t, u, u - u_k for each requested k).
pub fn remainder_table_csv(
    sol: &GridSolution,
    partial: &dyn Fn(u32, f64) -> f64,
    ks: &[u32],
) -> String {
    let mut s = String::from("t,u");
    for k in ks {
        s.push_str(&format!(",rem_k{k}"));
    }
    s.push('\n');
    for (i, &t) in sol.grid.iter().enumerate() {
        s.push_str(&format!("{:.16e},{:.16e}", t, sol.values[i]));
        for &k in ks {
            s.push_str(&format!(",{:.16e}", sol.values[i] - partial(k, t)));
        }
        s.push('\n');
    }
    s
}

// ----- tangential growth fit -----

/// Fitted factorial-growth envelope: coefficient norms n_l are matched to
/// B0 * B^{l-1} / l (the Taylor form of the |D^l| <= B0 B^{l-1} (l-1)! bound),
/// giving an implied tangential radius of analyticity 1/B.
pub struct GrowthFit {
    pub b0: f64,
    pub b: f64,
    pub radius: f64,
    pub per_l_norms: Vec<(u32, f64)>,
    pub fit_residual: f64,
}

/// Deterministic unit directions used for the homogeneous-part sup norms.
fn fit_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        })
        .collect();
    if dim > 1 {
        let d = (1.0 / dim as f64).sqrt();
        dirs.push(vec![d; dim]);
        let mut alt = vec![d; dim];
        for (i, a) in alt.iter_mut().enumerate() {
            if i % 2 == 1 {
                *a = -*a;
            }
        }
        dirs.push(alt);
        // A fixed irrational-looking direction to break symmetry.
        let mut v: Vec<f64> = (0..dim).map(|i| 1.0 + i as f64 * 0.61803).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        dirs.push(v);
    }
    dirs
}

/// Fit the factorial-growth constants of a tangential coefficient polynomial.
pub fn tangential_growth_fit(poly: &TangentialPoly) -> Result<GrowthFit> {
    let deg = if poly.max_degree() == UNBOUNDED {
        poly.degree() as i64
    } else {
        poly.max_degree()
    };
    if deg < 6 {
        return Err(Error::Validation(format!(
            "tangential degree {deg} < 6: growth fit has no support"
        )));
    }
    let dirs = fit_directions(poly.dim().max(1));
    let mut norms = Vec::new();
    for l in 1..=deg as u32 {
        let mut sup = 0.0f64;
        for dir in &dirs {
            sup = sup.max(poly.eval_homogeneous(l, dir).abs());
        }
        if sup > 0.0 {
            norms.push((l, sup));
        }
    }
    if norms.len() < 3 {
        // Degenerate (essentially constant in x'): infinite radius.
        return Ok(GrowthFit {
            b0: norms.first().map(|&(_, v)| v).unwrap_or(0.0),
            b: 0.0,
            radius: f64::INFINITY,
            per_l_norms: norms,
            fit_residual: 0.0,
        });
    }
    // Cauchy-Hadamard on the coefficient norms: ln n_l = ln B0 + (l-1) ln B.
    // (The factorial part of the |D^l| <= B0 B^{l-1} (l-1)! bound cancels
    // against the l! of the Taylor coefficients up to the subexponential
    // factor 1/l, which the exponential fit is insensitive to.)
    let rows: Vec<Vec<f64>> = norms
        .iter()
        .map(|&(l, _)| vec![(l - 1) as f64, 1.0])
        .collect();
    let ys: Vec<f64> = norms.iter().map(|&(_, v)| v.ln()).collect();
    let c = least_squares(&rows, &ys)?;
    let b = c[0].exp();
    let b0 = c[1].exp();
    if !b.is_finite() || !b0.is_finite() {
        return Err(Error::Validation("growth fit produced non-finite constants".into()));
    }
    let mut resid = 0.0f64;
    for (row, &y) in rows.iter().zip(&ys) {
        resid = resid.max((row[0] * c[0] + c[1] - y).abs());
    }
    Ok(GrowthFit {
        b0,
        b,
        radius: 1.0 / b,
        per_l_norms: norms,
        fit_residual: resid,
    })
}

/// Convenience: growth fit applied to a series coefficient c_{i,j}.
pub fn series_growth_fit(series: &LogSeries, i: u32, j: u32) -> Result<GrowthFit> {
    let poly = series
        .coeff(i, j)
        .ok_or(Error::MissingCoefficient { i, j })?
        .clone();
    tangential_growth_fit(&poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Coeff, Mode};

    #[test]
    fn forms_satisfy_sampled_hypotheses() {
        // Negativity margin 2A_nn + 2P + Q <= -c0 on both built-in instances.
        for n in 3..=6 {
            let f = minimal_graph_form(n);
            let s = f.default_samples();
            assert!(f.ellipticity_margin(&s).unwrap() >= 0.0);
            assert!(f.negativity_margin(&s).unwrap() >= 0.0);
            let g = conformal_form(n);
            let sg = g.default_samples();
            assert!(g.ellipticity_margin(&sg).unwrap() >= 0.0);
            assert!(g.negativity_margin(&sg).unwrap() >= 0.0);
        }
    }

    #[test]
    fn zero_problem_is_interpolated_exactly() {
        // u'' = 0 with zero boundary data returns identically 0  [TRIVIAL]
        let grid = GridSpec {
            t_min: 1e-4,
            t_max: 0.5,
            points: 200,
        };
        let sol = fd_solve_radial(&RadialOde::Zero, 0.0, 0.0, &grid).unwrap();
        assert!(sol.values.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn circle_slice_matches_exact() {
        // u''/(1+u'^2) = u'/t has solution sqrt(1 - t^2)
        // [DERIVED: direct substitution]
        let grid = GridSpec {
            t_min: 1e-4,
            t_max: 0.5,
            points: 2000,
        };
        let exact = |t: f64| (1.0 - t * t).sqrt();
        let sol =
            fd_solve_richardson(&RadialOde::CircleSlice, exact(1e-4), exact(0.5), &grid).unwrap();
        let err = sol
            .grid
            .iter()
            .zip(&sol.values)
            .map(|(&t, &u)| (u - exact(t)).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-8, "max error {err:.3e}");
    }

    #[test]
    fn ball_conformal_matches_exact() {
        // The residual form has exact solution y = (1 - t/2)^{-(n-2)/2}
        // [DERIVED: the conformal factor (2/(1-r^2))^{(n-2)/2} rewritten in
        //  t = 1 - r]
        for n in [3u32, 4] {
            let m = (n - 2) as f64;
            let exact = |t: f64| (1.0 - t / 2.0).powf(-m / 2.0);
            let grid = GridSpec {
                t_min: 1e-4,
                t_max: 0.5,
                points: 2000,
            };
            let ode = RadialOde::BallConformal { n };
            // Sanity: the exact solution satisfies the continuum residual.
            let (t, h) = (0.3, 1e-5);
            let r = ode.residual(t, exact(t - h), exact(t), exact(t + h), h, h);
            assert!(r.abs() < 1e-5, "continuum residual {r:.3e} for n = {n}");
            let sol = fd_solve_richardson(&ode, exact(1e-4), exact(0.5), &grid).unwrap();
            let err = sol
                .grid
                .iter()
                .zip(&sol.values)
                .map(|(&t, &u)| (u - exact(t)).abs())
                .fold(0.0f64, f64::max);
            assert!(err < 1e-8, "n = {n}: max error {err:.3e}");
        }
    }

    #[test]
    fn scheme_is_second_order() {
        // Doubling the resolution shrinks the exact-solution error by ~4.
        let exact = |t: f64| (1.0 - t * t).sqrt();
        let mut errs = Vec::new();
        for points in [500usize, 1000] {
            let grid = GridSpec {
                t_min: 1e-4,
                t_max: 0.5,
                points,
            };
            let sol =
                fd_solve_radial(&RadialOde::CircleSlice, exact(1e-4), exact(0.5), &grid).unwrap();
            errs.push(
                sol.grid
                    .iter()
                    .zip(&sol.values)
                    .map(|(&t, &u)| (u - exact(t)).abs())
                    .fold(0.0f64, f64::max),
            );
        }
        let factor = errs[0] / errs[1];
        assert!(
            (3.5..=4.5).contains(&factor),
            "error reduction factor {factor:.2}"
        );
    }

    #[test]
    fn slope_fit_recovers_taylor_tail() {
        // Remainder of sqrt(1-t^2) after its degree-4 Taylor polynomial decays
        // like t^6 (even powers only)  [DERIVED: Taylor tail of the oracle]
        let exact = |t: f64| (1.0 - t * t).sqrt();
        let grid = GridSpec {
            t_min: 1e-4,
            t_max: 0.5,
            points: 2000,
        };
        let sol =
            fd_solve_richardson(&RadialOde::CircleSlice, exact(1e-4), exact(0.5), &grid).unwrap();
        let partial = |k: u32, t: f64| {
            let w = t * t;
            let mut acc = 0.0;
            let mut c = 1.0;
            for m in 0..=(k / 2) {
                if m > 0 {
                    c *= (0.5 - (m - 1) as f64) / m as f64;
                }
                acc += c * (-w).powi(m as i32);
            }
            acc
        };
        // Floor chosen above the solver's flat error so only points where the
        // Taylor tail dominates enter the fit.
        let fits = remainder_slopes(&sol, &partial, &[4], 1e-8).unwrap();
        let slope = fits[0].slope.unwrap();
        assert!((slope - 6.0).abs() < 0.2, "slope {slope:.3}");
    }

    #[test]
    fn saturated_fit_is_rejected() {
        // Using the (near-)exact solution as its own partial sum drives the
        // remainder to the noise floor; the fit must be rejected  [TRIVIAL]
        let exact = |t: f64| (1.0 - t * t).sqrt();
        let grid = GridSpec {
            t_min: 1e-4,
            t_max: 0.5,
            points: 2000,
        };
        let sol =
            fd_solve_richardson(&RadialOde::CircleSlice, exact(1e-4), exact(0.5), &grid).unwrap();
        let partial = |_k: u32, t: f64| exact(t);
        let fits = remainder_slopes(&sol, &partial, &[99], 1e-8).unwrap();
        assert!(fits[0].slope.is_none());
    }

    #[test]
    fn growth_fit_constant_series_is_degenerate() {
        let mut p = TangentialPoly::zero(2, Mode::Float);
        p.set_coeff(vec![0, 0], Coeff::F64(3.0));
        // Degree metadata says 8 but there is no tangential content.
        let p = p.truncated(8).clone();
        let fit = tangential_growth_fit(&p).unwrap();
        assert!(fit.radius.is_infinite());
    }

    #[test]
    fn growth_fit_recovers_planted_radius() {
        // Coefficients 3^l along one variable: radius 1/3  [DERIVED:
        // Cauchy-Hadamard]
        let mut p = TangentialPoly::zero(2, Mode::Float);
        for l in 0..=10u32 {
            p.set_coeff(vec![l, 0], Coeff::F64(3.0f64.powi(l as i32)));
        }
        let fit = tangential_growth_fit(&p).unwrap();
        assert!(
            (0.27..=0.40).contains(&fit.radius),
            "radius {:.3}",
            fit.radius
        );
    }
}
