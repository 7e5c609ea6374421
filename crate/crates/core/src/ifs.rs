//! Iterated function systems of affine complex maps.
//!
//! Orbits are computed layer by layer from a finite seed,
//! `S_{n+1} = f_1(S_n) ∪ ... ∪ f_m(S_n)`, keeping multiplicity. The output
//! of each layer lists `f_1(S_n)` first, then `f_2(S_n)`, and so on, so
//! point `i` of the depth-`n` orbit has branch word
//! `(j_n, ..., j_1, seed)` read as mixed-radix digits of `i` with the
//! outermost map most significant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::SignVector;
use crate::point::ComplexPoint;

/// `x ↦ scale * x + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub scale: Complex64,
    pub offset: Complex64,
}

impl AffineMap {
    pub fn new(scale: ComplexPoint, offset: ComplexPoint) -> Self {
        AffineMap {
            scale: scale.value(),
            offset: offset.value(),
        }
    }

    #[inline]
    pub fn apply(&self, x: Complex64) -> Complex64 {
        self.scale * x + self.offset
    }

    pub fn is_contraction(&self) -> bool {
        self.scale.norm() < 1.0
    }

    /// The unique fixed point `offset / (1 - scale)`, if `scale != 1`.
    pub fn fixed_point(&self) -> Option<Complex64> {
        let denom = Complex64::new(1.0, 0.0) - self.scale;
        (denom != Complex64::new(0.0, 0.0)).then(|| self.offset / denom)
    }
}

/// Map index of the `+` branch in [`littlewood_ifs`].
pub const PLUS: usize = 0;
/// Map index of the `-` branch in [`littlewood_ifs`].
pub const MINUS: usize = 1;

/// The two maps `x ↦ 1 + z x` and `x ↦ 1 - z x`, in that order.
///
/// Both are contractions iff `|z| < 1`. Other parameters are still valid
/// for finite-depth orbits.
pub fn littlewood_ifs(z: ComplexPoint) -> Vec<AffineMap> {
    let one = Complex64::new(1.0, 0.0);
    vec![
        AffineMap {
            scale: z.value(),
            offset: one,
        },
        AffineMap {
            scale: -z.value(),
            offset: one,
        },
    ]
}

/// Sierpinski triangle on vertices `0`, `1` and `1/2 + (√3/2) i`.
pub fn sierpinski_ifs() -> Vec<AffineMap> {
    let half = Complex64::new(0.5, 0.0);
    vec![
        AffineMap {
            scale: half,
            offset: Complex64::new(0.0, 0.0),
        },
        AffineMap {
            scale: half,
            offset: Complex64::new(0.5, 0.0),
        },
        AffineMap {
            scale: half,
            offset: Complex64::new(0.25, 3f64.sqrt() / 4.0),
        },
    ]
}

/// A depth-`n` orbit, multiset semantics.
#[derive(Clone, Debug)]
pub struct OrbitSet {
    pub depth: u32,
    pub points: Vec<Complex64>,
}

/// Default cap on the number of orbit points.
pub const DEFAULT_ORBIT_BUDGET: u64 = 1 << 26;

/// Applies the full map layer `depth` times to `seed`.
pub fn iterate(maps: &[AffineMap], seed: &[Complex64], depth: u32, budget: u64) -> Result<OrbitSet> {
    let total = (maps.len() as u128)
        .checked_pow(depth)
        .and_then(|m| m.checked_mul(seed.len() as u128))
        .unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::Budget { points: total, budget });
    }
    let mut layer = seed.to_vec();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * maps.len());
        for f in maps {
            next.extend(layer.iter().map(|&x| f.apply(x)));
        }
        layer = next;
    }
    Ok(OrbitSet { depth, points: layer })
}

/// The generalized dragon set: the depth-`n` orbit of [`littlewood_ifs`]
/// seeded at `0`. Its points are the values at `z` of the degree `n - 1`
/// Littlewood polynomials with constant term `+1`, each appearing twice
/// because both maps send `0` to `1`.
pub fn dragon_set(z: ComplexPoint, depth: u32, budget: u64) -> Result<OrbitSet> {
    if depth == 0 {
        return Err(Error::InvalidDegree {
            degree: 0,
            min: 1,
            max: u32::MAX,
        });
    }
    iterate(&littlewood_ifs(z), &[Complex64::new(0.0, 0.0)], depth, budget)
}

/// Drops the duplicate innermost branch of a dragon orbit, leaving the
/// `2^(n-1)` points whose first-applied map is `+`.
pub fn dedup_branches(orbit: &OrbitSet) -> OrbitSet {
    OrbitSet {
        depth: orbit.depth,
        points: orbit.points.iter().step_by(2).copied().collect(),
    }
}

/// Expands a composition of the `±` maps applied to `0` into integer
/// coefficients (constant term first). `outermost_first[0]` is the map
/// applied last. Tracks the coefficient vector through
/// `P ↦ 1 ± z P`, so `[PLUS, MINUS, PLUS, PLUS]`, i.e.
/// `f+(f-(f+(f+(0))))`, expands to `1 + z - z^2 - z^3`.
pub fn expand_composition(outermost_first: &[usize]) -> Vec<i64> {
    let mut poly: Vec<i64> = vec![0];
    for &branch in outermost_first.iter().rev() {
        let s = if branch == MINUS { -1 } else { 1 };
        let mut next = Vec::with_capacity(poly.len() + 1);
        next.push(1);
        next.extend(poly.iter().map(|c| s * c));
        poly = next;
    }
    // The seed contributes a trailing zero coefficient.
    poly.pop();
    poly
}

/// The sign mask reached by a branch word, when the expansion is a
/// Littlewood polynomial of degree at least one.
pub fn composition_polynomial(outermost_first: &[usize]) -> Option<SignVector> {
    let coeffs = expand_composition(outermost_first);
    let signs: Option<Vec<i8>> = coeffs
        .iter()
        .map(|&c| match c {
            1 => Some(1),
            -1 => Some(-1),
            _ => None,
        })
        .collect();
    SignVector::from_coefficients(&signs?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn littlewood_maps() {
        let maps = littlewood_ifs(ComplexPoint::ZERO);
        assert_eq!(maps.len(), 2);
        for f in &maps {
            assert_eq!(f.apply(c(3.0, -2.0)), c(1.0, 0.0));
        }
        let z = ComplexPoint::new(0.48, 0.45).unwrap();
        let maps = littlewood_ifs(z);
        assert!(maps.iter().all(AffineMap::is_contraction));
        assert!((z.norm() - 0.658).abs() < 1e-3);
        assert_eq!(maps[PLUS].apply(c(0.0, 0.0)), c(1.0, 0.0));
        let wide = littlewood_ifs(ComplexPoint::new(1.5, 0.0).unwrap());
        assert!(!wide[0].is_contraction());
    }

    #[test]
    fn sierpinski_fixed_points_are_the_vertices() {
        let maps = sierpinski_ifs();
        assert_eq!(maps[0].fixed_point().unwrap(), c(0.0, 0.0));
        assert!((maps[1].fixed_point().unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = maps[2].fixed_point().unwrap();
        assert!((v - c(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn small_dragon_depths() {
        let z = ComplexPoint::new(0.3, -0.7).unwrap();
        let d1 = dragon_set(z, 1, 1 << 10).unwrap();
        assert_eq!(d1.points, vec![c(1.0, 0.0); 2]);
        let d2 = dragon_set(z, 2, 1 << 10).unwrap();
        let zv = z.value();
        let one = c(1.0, 0.0);
        assert_eq!(d2.points, vec![one + zv, one + zv, one - zv, one - zv]);
        assert!(dragon_set(z, 0, 1 << 10).is_err());
    }

    #[test]
    fn cardinality_law() {
        let seed = [c(0.0, 0.0)];
        for n in 0..=8 {
            let orbit = iterate(&sierpinski_ifs(), &seed, n, 1 << 20).unwrap();
            assert_eq!(orbit.points.len(), 3usize.pow(n));
        }
        assert!(iterate(&sierpinski_ifs(), &seed, 20, 1 << 20).is_err());
    }

    #[test]
    fn composition_expansion() {
        assert_eq!(expand_composition(&[PLUS, MINUS, PLUS, PLUS]), vec![1, 1, -1, -1]);
        assert_eq!(expand_composition(&[PLUS]), vec![1]);
        assert_eq!(expand_composition(&[]), Vec::<i64>::new());
        let p = composition_polynomial(&[MINUS, PLUS, PLUS]).unwrap();
        assert_eq!(p.coefficients(), vec![1, -1, -1]);
    }
}
