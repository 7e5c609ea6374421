//! Root finding for real-coefficient polynomials.
//!
//! The primary method is Aberth–Ehrlich simultaneous iteration from fixed
//! starting points on the unit circle, so results are reproducible with no
//! seed. If it fails to settle every root, the roots are recomputed as the
//! eigenvalues of the balanced companion matrix and polished by a few more
//! Aberth sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Angular offset of the first starting point.
const START_ANGLE: f64 = 0.4;

/// Roots closer than this (relative to `max(1, |z|)`) are tested as one
/// multiple root.
const CLUSTER_RADIUS: f64 = 1e-3;

/// Slack over the rounding bound when confirming that the lower
/// derivatives vanish at a multiple root.
const MULTIPLE_SLACK: f64 = 64.0;

/// Real roots whose imaginary part is below this fraction of `max(1, |re|)`
/// are snapped onto the real axis.
const REAL_SNAP: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Relative correction `|Δ| / |z|` below which a root is settled.
    pub tol: f64,
    pub max_iter: u32,
    pub fallback_enabled: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-12,
            max_iter: 500,
            fallback_enabled: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Aberth,
    Companion,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    pub iterations: u32,
    pub method: Method,
}

/// Value, derivative and a rounding-error bound for `p` at `z`.
/// `coeffs` are constant term first.
#[inline]
fn eval_with_bound(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let n = coeffs.len() - 1;
    let r = z.norm();
    let mut p = Complex64::new(coeffs[n], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut abs = coeffs[n].abs();
    for &a in coeffs[..n].iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        abs = abs * r + a.abs();
    }
    // Roughly 2n ulps of the absolute-value polynomial.
    let noise = 4.0 * (n as f64 + 1.0) * f64::EPSILON * abs;
    (p, dp, noise)
}

/// `|p(z)|`.
pub fn residual(coeffs: &[f64], z: Complex64) -> f64 {
    eval_with_bound(coeffs, z).0.norm()
}

fn initial_points(degree: usize) -> Vec<Complex64> {
    (0..degree)
        .map(|k| {
            let theta = START_ANGLE + std::f64::consts::TAU * k as f64 / degree as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

/// Gauss–Seidel Aberth sweeps. A root is frozen once its correction is
/// below `tol` relative or its residual is within evaluation noise.
/// Returns whether every root settled, and the sweep count.
fn aberth(coeffs: &[f64], roots: &mut [Complex64], tol: f64, max_iter: u32) -> (bool, u32) {
    let n = roots.len();
    let mut settled = vec![false; n];
    for iter in 1..=max_iter {
        let mut all = true;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let zi = roots[i];
            let (p, dp, noise) = eval_with_bound(coeffs, zi);
            if p.norm() <= noise {
                settled[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    repulsion += (zi - zj).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return (false, iter);
            }
            roots[i] = zi - step;
            if step.norm() <= tol * roots[i].norm() {
                settled[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return (true, iter);
        }
    }
    (false, max_iter)
}

/// Parlett–Reinsch balancing with power-of-two scalings, in place.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// Locates an `m`-fold root near `start` as a simple root of `p^(m-1)`,
/// then checks that `p, p', ..., p^(m-2)` vanish there to rounding.
fn multiple_root(coeffs: &[f64], start: Complex64, m: usize, radius: f64) -> Option<Complex64> {
    let mut ders = vec![coeffs.to_vec()];
    for _ in 1..m {
        ders.push(derivative(ders.last().unwrap()));
    }
    let q = &ders[m - 1];
    let mut z = start;
    for _ in 0..50 {
        let (v, dv, noise) = eval_with_bound(q, z);
        if v.norm() <= noise {
            break;
        }
        let step = v / dv;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm() {
            break;
        }
    }
    if (z - start).norm() > radius {
        return None;
    }
    for d in &ders[..m - 1] {
        let (v, _, noise) = eval_with_bound(d, z);
        if v.norm() > MULTIPLE_SLACK * noise {
            return None;
        }
    }
    Some(z)
}

/// Collapses each confirmed cluster of approximations to a multiple root
/// onto the root itself. Simultaneous iteration only resolves an `m`-fold
/// root to about `eps^(1/m)`.
fn refine_clusters(coeffs: &[f64], roots: &mut [Complex64]) {
    let n = roots.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![i];
        let mut k = 0;
        while k < members.len() {
            let zk = roots[members[k]];
            let radius = CLUSTER_RADIUS * zk.norm().max(1.0);
            for j in 0..n {
                if !assigned[j] && (roots[j] - zk).norm() <= radius {
                    assigned[j] = true;
                    members.push(j);
                }
            }
            k += 1;
        }
        let m = members.len();
        if m < 2 {
            continue;
        }
        let centre = members.iter().map(|&j| roots[j]).sum::<Complex64>() / m as f64;
        let radius = CLUSTER_RADIUS * m as f64 * centre.norm().max(1.0);
        if let Some(c) = multiple_root(coeffs, centre, m, radius) {
            for &j in &members {
                roots[j] = c;
            }
        }
    }
}

/// Pairs each upper-half-plane root with the nearest unused lower-half
/// partner and makes the pair exactly conjugate.
fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if roots[i].im <= 0.0 {
            continue;
        }
        let target = roots[i].conj();
        let best = (0..n)
            .filter(|&j| !used[j] && roots[j].im < 0.0)
            .map(|j| ((roots[j] - target).norm(), j))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((dist, j)) = best {
            if dist <= CLUSTER_RADIUS * target.norm().max(1.0) {
                used[j] = true;
                let z = Complex64::new(0.5 * (roots[i].re + roots[j].re), 0.5 * (roots[i].im - roots[j].im));
                roots[i] = z;
                roots[j] = z.conj();
            }
        }
    }
}

/// Eigenvalues of the balanced companion matrix of `p`.
pub fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    balance(&mut m);
    m.complex_eigenvalues().iter().copied().collect()
}

/// All `n` roots of `p(z) = coeffs[0] + coeffs[1] z + ... + coeffs[n] z^n`,
/// with multiplicity. Requires `n >= 1` and a nonzero leading coefficient.
pub fn solve(coeffs: &[f64], cfg: &SolverConfig) -> Solution {
    let n = coeffs.len().saturating_sub(1);
    assert!(n >= 1 && coeffs[n] != 0.0, "polynomial must have degree >= 1");

    let mut roots = initial_points(n);
    let (mut converged, mut iterations) = aberth(coeffs, &mut roots, cfg.tol, cfg.max_iter);
    let mut method = Method::Aberth;

    if !converged && cfg.fallback_enabled {
        let mut polished = companion_roots(coeffs);
        if polished.len() == n && polished.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            let (ok, extra) = aberth(coeffs, &mut polished, cfg.tol, cfg.max_iter);
            roots = polished;
            converged = ok;
            iterations += extra;
            method = Method::Companion;
        }
    }

    if converged {
        refine_clusters(coeffs, &mut roots);
    }
    for z in &mut roots {
        if z.im.abs() <= REAL_SNAP * z.re.abs().max(1.0) {
            z.im = 0.0;
        }
    }
    if converged {
        symmetrize_conjugates(&mut roots);
    }

    Solution {
        roots,
        converged,
        iterations,
        method,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(roots: &[Complex64], w: Complex64, tol: f64) -> bool {
        roots.iter().any(|z| (z - w).norm() <= tol)
    }

    #[test]
    fn cyclotomic_cubic_roots() {
        let sol = solve(&[1.0, 1.0, 1.0], &SolverConfig::default());
        assert!(sol.converged);
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!(contains(&sol.roots, w, 1e-12));
        assert!(contains(&sol.roots, w.conj(), 1e-12));
    }

    #[test]
    fn linear_root() {
        let sol = solve(&[-1.0, 1.0], &SolverConfig::default());
        assert!(sol.converged);
        assert_eq!(sol.roots, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn double_root_is_reported_twice() {
        // (z - 1)^2 (z + 1)
        let coeffs = [1.0, -1.0, -1.0, 1.0];
        let sol = solve(&coeffs, &SolverConfig::default());
        assert!(sol.converged);
        let near_one = sol.roots.iter().filter(|z| (*z - 1.0).norm() < 1e-14).count();
        let near_minus = sol.roots.iter().filter(|z| (*z + 1.0).norm() < 1e-12).count();
        assert_eq!((near_one, near_minus), (2, 1));
        for z in &sol.roots {
            assert!(residual(&coeffs, *z) < 1e-14);
        }
    }

    #[test]
    fn triple_root_is_resolved() {
        // (z - 1)^3 (z^2 + z + 1) (z + 1) = z^6 - z^5 - z^4 + z^2 + z - 1
        let coeffs = [-1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0];
        let sol = solve(&coeffs, &SolverConfig::default());
        assert!(sol.converged);
        let at_one = sol.roots.iter().filter(|z| (*z - 1.0).norm() < 1e-13).count();
        assert_eq!(at_one, 3);
    }

    #[test]
    fn close_simple_roots_are_not_merged() {
        // (z - 1)(z - 1.0001)
        let coeffs = [1.0001, -2.0001, 1.0];
        let sol = solve(&coeffs, &SolverConfig::default());
        let mut re: Vec<f64> = sol.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - 1.0).abs() < 1e-10 && (re[1] - 1.0001).abs() < 1e-10);
    }

    #[test]
    fn roots_are_exactly_conjugate_closed() {
        let coeffs = [1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0];
        let sol = solve(&coeffs, &SolverConfig::default());
        for z in &sol.roots {
            assert!(sol.roots.contains(&z.conj()));
        }
    }

    #[test]
    fn companion_route_alone() {
        let mut roots = companion_roots(&[1.0, -1.0, -1.0, 1.0]);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] + 1.0).norm() < 1e-12);
        assert!((roots[2] - 1.0).norm() < 1e-6);
    }

    #[test]
    fn fallback_kicks_in_when_aberth_is_starved() {
        let cfg = SolverConfig {
            max_iter: 1,
            ..Default::default()
        };
        let coeffs = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0, 1.0];
        let sol = solve(&coeffs, &cfg);
        assert_eq!(sol.method, Method::Companion);
        let no_fallback = solve(
            &coeffs,
            &SolverConfig {
                fallback_enabled: false,
                ..cfg
            },
        );
        assert!(!no_fallback.converged);
        assert_eq!(no_fallback.roots.len(), 6);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig {
            tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            max_iter: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
