//! Zero sets of Littlewood polynomials.
//!
//! `D_d` is taken as the union of the roots of every polynomial of degree
//! at most `d`. Since `p` and `-p` share roots, sweeps only solve the
//! polynomials with leading coefficient `+1` (bit `d` clear): `2^d` per
//! degree, `d` roots each.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{min_modulus, EvalOptions, Subset};
use crate::group::{binomial, SignVector};
use crate::point::{serialize_complex, ComplexPoint};
use crate::solver::{self, SolverConfig};

pub use crate::solver::Method;

/// One root of one polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootRecord {
    #[serde(serialize_with = "serialize_complex")]
    pub root: Complex64,
    pub mask: u64,
    pub degree: u32,
    /// `|p(root)|`.
    pub residual: f64,
    pub converged: bool,
}

fn coefficients(p: SignVector) -> Vec<f64> {
    p.coefficients().into_iter().map(f64::from).collect()
}

/// All `d` roots of `p`, with multiplicity. Non-convergence is reported
/// through the `converged` flag on every record of the polynomial.
pub fn roots_of(p: SignVector, cfg: &SolverConfig) -> Vec<RootRecord> {
    let coeffs = coefficients(p);
    let sol = solver::solve(&coeffs, cfg);
    sol.roots
        .into_iter()
        .map(|root| RootRecord {
            root,
            mask: p.mask(),
            degree: p.degree(),
            residual: solver::residual(&coeffs, root),
            converged: sol.converged,
        })
        .collect()
}

/// A contiguous run of monic masks `[lo, hi)` of one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub degree: u32,
    pub lo: u64,
    pub hi: u64,
}

impl Shard {
    pub fn polynomials(&self) -> u64 {
        self.hi - self.lo
    }
}

/// Splits degrees `1..=d_max` into shards of at most `size` polynomials,
/// in canonical (degree, mask) order.
pub fn plan_shards(d_max: u32, size: u64) -> Result<Vec<Shard>> {
    SignVector::identity(d_max)?;
    let size = size.max(1);
    let mut out = Vec::new();
    for degree in 1..=d_max {
        let end = 1u64 << degree;
        let mut lo = 0;
        while lo < end {
            let hi = end.min(lo.saturating_add(size));
            out.push(Shard { degree, lo, hi });
            lo = hi;
        }
    }
    Ok(out)
}

/// Solves every polynomial in a shard, in (mask, root index) order.
pub fn solve_shard(shard: Shard, cfg: &SolverConfig) -> Vec<RootRecord> {
    let mut out = Vec::with_capacity((shard.polynomials() * shard.degree as u64) as usize);
    for mask in shard.lo..shard.hi {
        out.extend(roots_of(SignVector::from_parts(shard.degree, mask), cfg));
    }
    out
}

/// Streams the zero set of degrees `1..=d_max` in canonical order,
/// serially. Parallel drivers use [`plan_shards`] and [`solve_shard`].
pub fn zero_set(d_max: u32, cfg: SolverConfig) -> Result<impl Iterator<Item = RootRecord>> {
    cfg.validate()?;
    let shards = plan_shards(d_max, 1 << 12)?;
    Ok(shards.into_iter().flat_map(move |s| solve_shard(s, &cfg)))
}

/// Number of records a sweep up to `d_max` produces: `sum d 2^d`.
pub fn zero_set_size(d_max: u32) -> u128 {
    (1..=d_max as u128).map(|d| d << d).sum()
}

/// Merges roots that lie within `tol` of an already kept root of the same
/// stream. Quadratic per call; intended for per-polynomial or small sets.
pub fn dedup_roots(roots: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut kept: Vec<Complex64> = Vec::new();
    for &r in roots {
        if !kept.iter().any(|k| (k - r).norm() <= tol) {
            kept.push(r);
        }
    }
    kept
}

/// Which family the membership test scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "k")]
pub enum MembershipMode {
    /// Every polynomial up to sign (the constant-term-positive half).
    Exact,
    /// Only `N_d(k)`.
    NuClass(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub query: ComplexPoint,
    pub degree: u32,
    pub epsilon: f64,
    pub member: bool,
    pub min_modulus: f64,
    pub evaluations_used: u64,
    pub mode: MembershipMode,
}

/// Does `{p(z)}` meet the `eps`-ball about `0`?
pub fn epsilon_membership(
    z: ComplexPoint,
    degree: u32,
    eps: f64,
    mode: MembershipMode,
    opts: &EvalOptions,
) -> Result<MembershipReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let subset = match mode {
        MembershipMode::Exact => Subset::Half,
        MembershipMode::NuClass(k) => Subset::NuClass(k),
    };
    let (min, used) = min_modulus(degree, z, subset, opts)?;
    Ok(MembershipReport {
        query: z,
        degree,
        epsilon: eps,
        member: min < eps,
        min_modulus: min,
        evaluations_used: used,
        mode,
    })
}

/// Evaluation counts for the largest class versus the whole group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub degree: u32,
    /// `2^(d+1)`.
    pub full: u128,
    /// `C(d, ceil(d/2))`, the count usually quoted for the largest class.
    pub paper_formula: u128,
    /// `C(d+1, ceil((d+1)/2))`, the actual size of the largest class.
    pub corrected: u128,
}

pub fn approx_cost_report(degree: u32) -> Result<CostReport> {
    SignVector::identity(degree)?;
    let d = degree as u64;
    Ok(CostReport {
        degree,
        full: 1u128 << (degree + 1),
        paper_formula: binomial(d, d.div_ceil(2)),
        corrected: binomial(d + 1, (d + 1).div_ceil(2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_counts() {
        assert_eq!(zero_set_size(10), 18434);
        let recs: Vec<_> = zero_set(1, SolverConfig::default()).unwrap().collect();
        let roots: Vec<(u64, f64)> = recs.iter().map(|r| (r.mask, r.root.re)).collect();
        // mask 0: z + 1, mask 1: z - 1
        assert_eq!(roots, vec![(0, -1.0), (1, 1.0)]);
        assert_eq!(
            zero_set(6, SolverConfig::default()).unwrap().count() as u128,
            zero_set_size(6)
        );
    }

    #[test]
    fn shards_cover_monic_half_in_order() {
        let shards = plan_shards(5, 7).unwrap();
        let mut seen = Vec::new();
        for s in &shards {
            for m in s.lo..s.hi {
                seen.push((s.degree, m));
            }
        }
        let want: Vec<_> = (1..=5u32).flat_map(|d| (0..1u64 << d).map(move |m| (d, m))).collect();
        assert_eq!(seen, want);
        assert!(plan_shards(0, 7).is_err());
    }

    #[test]
    fn multiple_root_example() {
        let p = SignVector::from_coefficients(&[1, -1, -1, 1]).unwrap();
        let recs = roots_of(p, &SolverConfig::default());
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.converged && r.residual < 1e-14));
        let mut re: Vec<f64> = recs.iter().map(|r| r.root.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-12);
        assert!((re[1] - 1.0).abs() < 1e-7 && (re[2] - 1.0).abs() < 1e-7);
        assert_eq!(
            dedup_roots(&[Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-12, 0.0)], 1e-9).len(),
            1
        );
    }

    #[test]
    fn membership_examples() {
        let opts = EvalOptions::default();
        let w = ComplexPoint::new(-0.5, 3f64.sqrt() / 2.0).unwrap();
        let r = epsilon_membership(w, 2, 1e-6, MembershipMode::Exact, &opts).unwrap();
        assert!(r.member && r.min_modulus <= 1e-12);
        assert_eq!(r.evaluations_used, 4);

        let one = ComplexPoint::new(1.0, 0.0).unwrap();
        let r = epsilon_membership(one, 3, 1e-300, MembershipMode::Exact, &opts).unwrap();
        assert!(r.member);
        assert_eq!(r.min_modulus, 0.0);

        let three = ComplexPoint::new(3.0, 0.0).unwrap();
        for d in 1..=12 {
            let r = epsilon_membership(three, d, 0.5, MembershipMode::Exact, &opts).unwrap();
            assert!(!r.member);
        }
        assert!(epsilon_membership(w, 2, 0.0, MembershipMode::Exact, &opts).is_err());
        assert!(epsilon_membership(w, 2, f64::NAN, MembershipMode::Exact, &opts).is_err());
        let r = epsilon_membership(w, 14, 1e-6, MembershipMode::NuClass(7), &opts).unwrap();
        assert_eq!(r.evaluations_used, 6435);
    }

    #[test]
    fn cost_reports() {
        let r = approx_cost_report(14).unwrap();
        assert_eq!((r.full, r.paper_formula, r.corrected), (32768, 3432, 6435));
        let r = approx_cost_report(2).unwrap();
        assert_eq!((r.full, r.paper_formula, r.corrected), (8, 2, 3));
        assert_eq!(approx_cost_report(1).unwrap().full, 4);
    }
}
