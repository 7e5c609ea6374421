//! Complex evaluation of Littlewood polynomials.
//!
//! Besides plain Horner evaluation this module provides the two indirect
//! routes through the generating set: the identity as a scaled sum of the
//! generator values, and any polynomial as `(1 - nu(p)) e(z)` plus the
//! values of its factors. Both are cheap linear combinations once the
//! `d + 1` generator values at `z` are known.
//!
//! Bulk evaluation of whole subsets goes through [`BulkEvaluator`], which
//! splits a mask into a high prefix and `LOW_BITS` low bits:
//!
//! ```text
//! p(z) = z^k * H(prefix) + L(low)
//! ```
//!
//! `L` is tabulated once per point by walking the low masks in Gray-code
//! order, where flipping bit `j` moves the running value by `-2 a_j z^j`.
//! `H` is a short Horner evaluation, cached across consecutive masks with
//! the same prefix. Each table entry for the complement of a low mask is
//! stored as the exact negation, so `value(!m) == -value(m)` holds bit for
//! bit, and the value of a mask never depends on which subset or shard
//! requested it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    binomial, enumerate_nu_class_in, full_mask, generators, group_order, NuClassDescriptor, SignVector, MAX_DEGREE,
};
use crate::point::ComplexPoint;

/// Direct Horner evaluation, leading coefficient first.
pub fn horner_eval(p: SignVector, z: ComplexPoint) -> Complex64 {
    horner_mask(p.degree(), p.mask(), z.value())
}

#[inline]
fn sign(mask: u64, j: u32) -> f64 {
    if mask >> j & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Horner over coefficients `0..=degree` of a raw sign mask.
#[inline]
pub(crate) fn horner_mask(degree: u32, mask: u64, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(sign(mask, degree), 0.0);
    for j in (0..degree).rev() {
        acc = acc * z + sign(mask, j);
    }
    acc
}

/// `e(z)` recovered from the generators: `(1 / (d - 1)) * sum_g g(z)`.
/// Only defined for `d >= 2`.
pub fn eval_identity_via_generators(degree: u32, z: ComplexPoint) -> Result<Complex64> {
    if degree < 2 {
        return Err(Error::InvalidDegree {
            degree,
            min: 2,
            max: MAX_DEGREE,
        });
    }
    let sum: Complex64 = generators(degree)?.into_iter().map(|g| horner_eval(g, z)).sum();
    Ok(sum / (degree - 1) as f64)
}

/// `p(z)` through its factorization: `(1 - nu(p)) e(z) + sum_{g in sigma(p)} g(z)`.
pub fn eval_via_factorization(p: SignVector, z: ComplexPoint) -> Complex64 {
    let e = horner_mask(p.degree(), 0, z.value());
    let factors: Complex64 = p.sigma().into_iter().map(|g| horner_eval(g.to_sign_vector(), z)).sum();
    e * (1.0 - p.nu() as f64) + factors
}

/// Which subset of `L_d` an [`EvalSet`] covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "n")]
pub enum Subset {
    /// All `2^(d+1)` polynomials.
    Full,
    /// The `2^d` polynomials with constant term `+1`.
    Half,
    /// `N_d(n)`, the `C(d+1, n)` polynomials with `n` negative coefficients.
    NuClass(u32),
    /// The `d + 1` generators, by position.
    Generators,
}

impl Subset {
    pub fn cardinality(self, degree: u32) -> u128 {
        match self {
            Subset::Full => 1u128 << (degree + 1),
            Subset::Half => 1u128 << degree,
            Subset::NuClass(n) => binomial(degree as u64 + 1, n as u64),
            Subset::Generators => degree as u128 + 1,
        }
    }
}

/// Evaluations of a subset of `L_d` at one point.
#[derive(Clone, Debug)]
pub struct EvalSet {
    pub degree: u32,
    pub at: ComplexPoint,
    pub subset: Subset,
    /// Source masks, ascending (position order for generators).
    pub masks: Vec<u64>,
    pub points: Vec<Complex64>,
}

impl EvalSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Limits for bulk evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Largest number of points a single call may materialize.
    pub max_points: u64,
    /// Masks per parallel work item.
    pub chunk: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_points: 1 << 28,
            chunk: 1 << 14,
        }
    }
}

const LOW_BITS: u32 = 8;

/// Evaluates arbitrary masks of one degree at one point.
///
/// Cheap to construct (a `2^8`-entry table); build one per worker.
#[derive(Clone, Debug)]
pub struct BulkEvaluator {
    degree: u32,
    z: Complex64,
    low_bits: u32,
    low_mask: u64,
    /// `z^low_bits`, the weight of the prefix.
    shift: Complex64,
    low: Vec<Complex64>,
    cached: Option<(u64, Complex64)>,
}

impl BulkEvaluator {
    pub fn new(degree: u32, z: ComplexPoint) -> Result<Self> {
        SignVector::identity(degree)?;
        let z = z.value();
        let low_bits = (degree + 1).min(LOW_BITS);
        let low_mask = (1u64 << low_bits) - 1;

        let mut powers = Vec::with_capacity(low_bits as usize + 1);
        let mut zj = Complex64::new(1.0, 0.0);
        for _ in 0..=low_bits {
            powers.push(zj);
            zj *= z;
        }
        let shift = powers[low_bits as usize];
        let step: Vec<Complex64> = powers.iter().map(|w| w * 2.0).collect();

        // Walk the low masks that keep bit `low_bits - 1` clear in Gray
        // order; their complements fill the other half by negation.
        let mut low = vec![Complex64::new(0.0, 0.0); 1 << low_bits];
        let mut value = horner_mask(low_bits - 1, 0, z);
        low[0] = value;
        low[low_mask as usize] = -value;
        let mut gray = 0u64;
        for i in 1u64..1 << (low_bits - 1) {
            let j = i.trailing_zeros();
            gray ^= 1 << j;
            if gray >> j & 1 == 1 {
                value -= step[j as usize];
            } else {
                value += step[j as usize];
            }
            low[gray as usize] = value;
            low[(gray ^ low_mask) as usize] = -value;
        }

        Ok(BulkEvaluator {
            degree,
            z,
            low_bits,
            low_mask,
            shift,
            low,
            cached: None,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Value of the polynomial with sign mask `mask`.
    #[inline]
    pub fn value(&mut self, mask: u64) -> Complex64 {
        debug_assert_eq!(mask & !full_mask(self.degree), 0);
        let low = self.low[(mask & self.low_mask) as usize];
        if self.low_bits > self.degree {
            return low;
        }
        let prefix = mask >> self.low_bits;
        let high = match self.cached {
            Some((p, h)) if p == prefix => h,
            _ => {
                let h = horner_mask(self.degree - self.low_bits, prefix, self.z) * self.shift;
                self.cached = Some((prefix, h));
                h
            }
        };
        high + low
    }
}

/// Masks of `subset` inside `[lo, hi)`, ascending. Generators are listed
/// by position.
fn subset_masks(degree: u32, subset: Subset, lo: u64, hi: u64) -> Result<Box<dyn Iterator<Item = u64>>> {
    Ok(match subset {
        Subset::Full => Box::new(lo..hi),
        Subset::Half => Box::new((lo + (lo & 1)..hi).step_by(2)),
        Subset::NuClass(n) => {
            let class = NuClassDescriptor::new(degree, n)?;
            Box::new(enumerate_nu_class_in(class, lo, hi)?.map(|p| p.mask()))
        }
        Subset::Generators => Box::new((0..=degree).map(|j| 1u64 << j).filter(move |m| (lo..hi).contains(m))),
    })
}

fn check_range(degree: u32, range: Option<(u64, u64)>) -> Result<(u64, u64)> {
    let limit = group_order(degree);
    let (lo, hi) = range.unwrap_or((0, limit));
    if lo > hi || hi > limit {
        return Err(Error::RangeOutOfBounds { lo, hi, limit });
    }
    Ok((lo, hi))
}

/// Splits `[lo, hi)` into aligned chunks so they can be evaluated in
/// parallel and concatenated in mask order.
fn chunks(lo: u64, hi: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = hi.min((a / chunk + 1).saturating_mul(chunk));
        out.push((a, b));
        a = b;
    }
    out
}

/// Evaluates every polynomial of `subset` (optionally restricted to masks
/// in `range`) at `z`. Points are reported in ascending mask order and are
/// identical regardless of how the rayon pool splits the work.
pub fn eval_all(
    degree: u32,
    z: ComplexPoint,
    subset: Subset,
    range: Option<(u64, u64)>,
    opts: &EvalOptions,
) -> Result<EvalSet> {
    SignVector::identity(degree)?;
    if let Subset::Generators = subset {
        return eval_generators(degree, z);
    }
    if let Subset::NuClass(n) = subset {
        NuClassDescriptor::new(degree, n)?;
    }
    let (lo, hi) = check_range(degree, range)?;
    let bound = match range {
        None => subset.cardinality(degree),
        Some(_) => (hi - lo) as u128,
    }
    .min(subset.cardinality(degree));
    if bound > opts.max_points as u128 {
        return Err(Error::Budget {
            points: bound,
            budget: opts.max_points,
        });
    }

    let parts: Vec<(Vec<u64>, Vec<Complex64>)> = chunks(lo, hi, opts.chunk)
        .into_par_iter()
        .map(|(a, b)| -> Result<_> {
            let mut ev = BulkEvaluator::new(degree, z)?;
            let masks: Vec<u64> = subset_masks(degree, subset, a, b)?.collect();
            let points = masks.iter().map(|&m| ev.value(m)).collect();
            Ok((masks, points))
        })
        .collect::<Result<_>>()?;

    let mut masks = Vec::with_capacity(bound as usize);
    let mut points = Vec::with_capacity(bound as usize);
    for (m, p) in parts {
        masks.extend(m);
        points.extend(p);
    }
    Ok(EvalSet {
        degree,
        at: z,
        subset,
        masks,
        points,
    })
}

/// The images of the `d + 1` generators at `z`, in position order.
pub fn eval_generators(degree: u32, z: ComplexPoint) -> Result<EvalSet> {
    let gens = generators(degree)?;
    Ok(EvalSet {
        degree,
        at: z,
        subset: Subset::Generators,
        masks: gens.iter().map(|g| g.mask()).collect(),
        points: gens.iter().map(|&g| horner_eval(g, z)).collect(),
    })
}

/// Smallest `|p(z)|` over `subset`, without materializing the values.
/// Returns the minimum and the number of polynomials scanned.
pub fn min_modulus(degree: u32, z: ComplexPoint, subset: Subset, opts: &EvalOptions) -> Result<(f64, u64)> {
    SignVector::identity(degree)?;
    if let Subset::NuClass(n) = subset {
        NuClassDescriptor::new(degree, n)?;
    }
    let (lo, hi) = match subset {
        Subset::Half => (0, group_order(degree)),
        _ => check_range(degree, None)?,
    };
    chunks(lo, hi, opts.chunk)
        .into_par_iter()
        .map(|(a, b)| -> Result<(f64, u64)> {
            let mut ev = BulkEvaluator::new(degree, z)?;
            let mut best = f64::INFINITY;
            let mut count = 0u64;
            for m in subset_masks(degree, subset, a, b)? {
                best = best.min(ev.value(m).norm());
                count += 1;
            }
            Ok((best, count))
        })
        .try_reduce(|| (f64::INFINITY, 0), |x, y| Ok((x.0.min(y.0), x.1 + y.1)))
}
